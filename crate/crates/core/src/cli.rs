//! Command-line front end.
//!
//! Exit codes: 0 success, 1 property failure (not Steiner, improper coloring,
//! not isomorphic, table failures), 2 input error, 3 search timeout.
//! A path of `-` means standard input or output.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Duration;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::block::PointId;
use crate::coloring::{
    check_coloring, lemma1_coloring, proper_colorings_by_red_count, Coloring, ProperColoringTally,
};
use crate::construction::{build_s4_8, build_s6_12, validate_expansion_tables, Stage, StageTrace};
use crate::design::{Design, DesignParams};
use crate::oracle::{exact_cover_build, isomorphic, BranchOrder, OracleError, SearchConfig};
use crate::verification::{derive, intersection_spectrum, verify_steiner};

#[derive(Parser, Debug)]
#[command(name = "steiner", version, about = "Construct and check the Steiner systems S(3,4,8) and S(5,6,12)")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,

    /// Write output here instead of standard output.
    #[arg(short, long, global = true, default_value = "-")]
    pub output: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum System {
    #[value(name = "s6_12")]
    S6_12,
    #[value(name = "s4_8")]
    S4_8,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BranchOrderArg {
    Lexicographic,
    MostConstrainedFirst,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write the block list of a constructed system.
    Generate {
        #[arg(long, value_enum)]
        system: System,
        /// Write per-stage provenance instead of the block list.
        #[arg(long)]
        trace: bool,
    },
    /// Check the Steiner property and complement closure.
    Verify { file: PathBuf },
    /// Write the derived design at a point.
    Derive {
        file: PathBuf,
        /// 1-based point label.
        #[arg(long)]
        point: usize,
    },
    /// Check, construct or count proper 2-colorings.
    Color(ColorArgs),
    /// Print the block intersection histogram.
    Spectrum { file: PathBuf },
    /// Search for a point bijection between two designs.
    Isomorphic { a: PathBuf, b: PathBuf },
    /// Find a Steiner system by exact-cover search.
    OracleBuild {
        /// `s,k,n`
        #[arg(long, value_parser = parse_params)]
        params: DesignParams,
        /// Search budget in seconds.
        #[arg(long, default_value_t = 60.0)]
        budget: f64,
        #[arg(long, default_value_t = 1)]
        max_solutions: usize,
        #[arg(long, value_enum, default_value_t = BranchOrderArg::MostConstrainedFirst)]
        branch_order: BranchOrderArg,
        /// Restrict to complement-closed systems (n = 2k).
        #[arg(long)]
        complement_pairs: bool,
    },
    /// Check the curated expansion tables against their residual claims.
    ValidateTables,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("mode").required(true).args(["check", "lemma1", "count"])))]
pub struct ColorArgs {
    file: PathBuf,
    /// Coloring file: one line of R/B characters, position i for v_i.
    #[arg(long)]
    check: Option<PathBuf>,
    /// Emit the constructive proper coloring.
    #[arg(long)]
    lemma1: bool,
    /// Count proper colorings by exhaustive enumeration.
    #[arg(long)]
    count: bool,
}

fn parse_params(s: &str) -> Result<DesignParams, String> {
    let nums = s
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| format!("`{t}` is not a number")))
        .collect::<Result<Vec<_>, _>>()?;
    let [st, k, n] = nums[..] else {
        return Err("expected s,k,n".to_owned());
    };
    DesignParams::new(st, k, n).map_err(|e| e.to_string())
}

enum Failure {
    Property(String),
    Input(String),
    Timeout(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Property(_) => 1,
            Failure::Input(_) => 2,
            Failure::Timeout(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Property(m) | Failure::Input(m) | Failure::Timeout(m) => m,
        }
    }
}

/// Output of a command plus whether the checked property held.
struct Outcome {
    body: String,
    failure: Option<Failure>,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Outcome { body, failure: None }
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdin_used: bool,
}

impl Io<'_> {
    fn read(&mut self, path: &PathBuf) -> Result<String, Failure> {
        if path.as_os_str() == "-" {
            if self.stdin_used {
                return Err(Failure::Input("standard input can only be read once".into()));
            }
            self.stdin_used = true;
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|e| Failure::Input(format!("<stdin>: {e}")))?;
            Ok(s)
        } else {
            fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
        }
    }

    fn design(&mut self, path: &PathBuf) -> Result<Design, Failure> {
        let text = self.read(path)?;
        Design::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable");
    s.push('\n');
    s
}

fn labels(b: crate::block::Block) -> String {
    b.labels()
        .iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn render_design(d: &Design, format: Format) -> String {
    match format {
        Format::Text => d.to_text(),
        Format::Json => d.to_json(),
    }
}

fn render_trace(trace: &StageTrace, format: Format) -> String {
    #[derive(Serialize)]
    struct TraceDoc<'a> {
        counts: crate::construction::StageCounts,
        trace: &'a StageTrace,
    }
    match format {
        Format::Json => json(&TraceDoc {
            counts: trace.counts(),
            trace,
        }),
        Format::Text => {
            let mut out = String::new();
            let c = trace.counts();
            let _ = writeln!(
                out,
                "# stage counts: stage1={} stage2={} stage3a={} stage3b={} total={}",
                c.stage1,
                c.stage2,
                c.stage3a,
                c.stage3b,
                c.total()
            );
            for stage in Stage::ALL {
                for t in trace.stage(stage) {
                    let _ = writeln!(
                        out,
                        "{} {} ; {}{}",
                        stage.name(),
                        labels(t.block),
                        t.source,
                        if t.complement { " (complement)" } else { "" }
                    );
                }
            }
            out
        }
    }
}

fn generate(system: System, trace: bool, format: Format) -> Outcome {
    let (d, tr) = match system {
        System::S6_12 => build_s6_12(),
        System::S4_8 => build_s4_8(),
    };
    Outcome::ok(if trace {
        render_trace(&tr, format)
    } else {
        render_design(&d, format)
    })
}

fn verify(d: &Design, format: Format) -> Outcome {
    let r = verify_steiner(d);
    let body = match format {
        Format::Json => json(&r),
        Format::Text => {
            let p = d.params();
            let mut out = String::new();
            let _ = writeln!(out, "is_steiner: {}", r.is_steiner);
            let _ = writeln!(
                out,
                "params: s={} k={} n={} blocks={}",
                p.strength(),
                p.block_size(),
                p.points(),
                d.len()
            );
            for (name, list) in [("uncovered", &r.uncovered), ("multiply_covered", &r.multiply_covered)] {
                let _ = writeln!(out, "{name}: {}", list.len());
                for b in list {
                    let _ = writeln!(out, "  {}", labels(*b));
                }
            }
            let lambdas: Vec<String> = r
                .covering_numbers
                .iter()
                .map(|(i, l)| match l {
                    Some(v) => format!("{i}={v}"),
                    None => format!("{i}=non-uniform"),
                })
                .collect();
            let _ = writeln!(out, "covering_numbers: {}", lambdas.join(" "));
            let closed = match r.complement_closed {
                Some(b) => b.to_string(),
                None => "n/a".to_owned(),
            };
            let _ = writeln!(out, "complement_closed: {closed}");
            out
        }
    };
    let failure = if !r.is_steiner {
        Some(Failure::Property("not a Steiner system".into()))
    } else if r.complement_closed == Some(false) {
        Some(Failure::Property("not complement-closed".into()))
    } else {
        None
    };
    Outcome { body, failure }
}

fn color(io: &mut Io, args: &ColorArgs, format: Format) -> Result<Outcome, Failure> {
    let d = io.design(&args.file)?;
    if let Some(path) = &args.check {
        let c: Coloring = io
            .read(path)?
            .parse()
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        let r = check_coloring(&d, &c).map_err(|e| Failure::Input(e.to_string()))?;
        let body = match format {
            Format::Json => json(&r),
            Format::Text => {
                let mut out = format!(
                    "proper: {}\nred_count: {}\nmonochromatic_blocks: {}\n",
                    r.proper,
                    r.red_count,
                    r.monochromatic_blocks.len()
                );
                for b in &r.monochromatic_blocks {
                    let _ = writeln!(out, "  {}", labels(*b));
                }
                out
            }
        };
        let failure = (!r.proper).then(|| Failure::Property("coloring is not proper".into()));
        return Ok(Outcome { body, failure });
    }
    if args.lemma1 {
        let c = lemma1_coloring(&d).map_err(|e| Failure::Property(e.to_string()))?;
        return Ok(Outcome::ok(match format {
            Format::Json => json(&c),
            Format::Text => format!("{c}\n"),
        }));
    }
    let by_red_count = proper_colorings_by_red_count(&d).map_err(|e| Failure::Input(e.to_string()))?;
    let tally = ProperColoringTally {
        total: by_red_count.iter().sum(),
        by_red_count,
    };
    Ok(Outcome::ok(match format {
        Format::Json => json(&tally),
        Format::Text => {
            let mut out = format!("proper_colorings: {}\n", tally.total);
            for (r, c) in tally.by_red_count.iter().enumerate() {
                let _ = writeln!(out, "red_count {r}: {c}");
            }
            out
        }
    }))
}

fn spectrum(d: &Design, format: Format) -> Outcome {
    let s = intersection_spectrum(d);
    Outcome::ok(match format {
        Format::Json => json(&s),
        Format::Text => {
            let mut out = String::new();
            for (i, c) in &s.histogram {
                let _ = writeln!(out, "{i}: {c}");
            }
            let _ = writeln!(out, "pairs: {}", s.total_pairs());
            out
        }
    })
}

fn iso(a: &Design, b: &Design, format: Format) -> Outcome {
    let found = isomorphic(a, b);
    let body = match format {
        Format::Json => json(&found.as_ref().map(|pi| pi.iter().map(|p| p.external()).collect::<Vec<_>>())),
        Format::Text => match &found {
            Some(pi) => {
                let parts: Vec<String> = pi
                    .iter()
                    .enumerate()
                    .map(|(i, q)| format!("{}->{}", PointId::new(i), q))
                    .collect();
                format!("{}\n", parts.join(" "))
            }
            None => "NONE\n".to_owned(),
        },
    };
    let failure = found
        .is_none()
        .then(|| Failure::Property("designs are not isomorphic".into()));
    Outcome { body, failure }
}

fn oracle_build(params: DesignParams, cfg: SearchConfig, format: Format) -> Result<Outcome, Failure> {
    match exact_cover_build(params, &cfg) {
        Ok(designs) => {
            let body = match format {
                Format::Json if designs.len() > 1 => json(&designs),
                _ if designs.len() > 1 => designs
                    .iter()
                    .map(|d| d.to_text())
                    .collect::<Vec<_>>()
                    .join("\n"),
                _ => render_design(&designs[0], format),
            };
            Ok(Outcome::ok(body))
        }
        Err(e @ OracleError::Timeout(_)) => Err(Failure::Timeout(e.to_string())),
        Err(e @ OracleError::Unsatisfiable) => Err(Failure::Property(e.to_string())),
        Err(e) => Err(Failure::Input(e.to_string())),
    }
}

fn validate_tables_cmd(format: Format) -> Outcome {
    let r = validate_expansion_tables();
    let body = match format {
        Format::Json => json(&r),
        Format::Text => {
            let mut out = String::new();
            for c in &r.checks {
                let _ = write!(
                    out,
                    "{} {:?} {}",
                    if c.ok { "ok  " } else { "FAIL" },
                    c.kind,
                    c.index + 1
                );
                if let Some(row) = &c.row {
                    let _ = write!(out, " [{row}]");
                }
                let _ = writeln!(out, ": {}", c.detail);
            }
            let _ = writeln!(out, "failures: {}", r.failures().count());
            out
        }
    };
    let failure = (!r.is_ok()).then(|| Failure::Property("expansion tables failed validation".into()));
    Outcome { body, failure }
}

fn dispatch(cli: &Cli, io: &mut Io) -> Result<Outcome, Failure> {
    let f = cli.format;
    Ok(match &cli.command {
        Command::Generate { system, trace } => generate(*system, *trace, f),
        Command::Verify { file } => verify(&io.design(file)?, f),
        Command::Derive { file, point } => {
            let d = io.design(file)?;
            let p = PointId::from_external(*point, d.points()).map_err(|e| Failure::Input(e.to_string()))?;
            let derived = derive(&d, p).map_err(|e| Failure::Input(e.to_string()))?;
            Outcome::ok(render_design(&derived, f))
        }
        Command::Color(args) => color(io, args, f)?,
        Command::Spectrum { file } => spectrum(&io.design(file)?, f),
        Command::Isomorphic { a, b } => {
            let da = io.design(a)?;
            let db = io.design(b)?;
            iso(&da, &db, f)
        }
        Command::OracleBuild {
            params,
            budget,
            max_solutions,
            branch_order,
            complement_pairs,
        } => {
            if !budget.is_finite() || *budget < 0.0 {
                return Err(Failure::Input("budget must be a non-negative number of seconds".into()));
            }
            let cfg = SearchConfig::default()
                .with_budget(Duration::from_secs_f64(*budget))
                .with_max_solutions(*max_solutions)
                .with_branch_order(match branch_order {
                    BranchOrderArg::Lexicographic => BranchOrder::Lexicographic,
                    BranchOrderArg::MostConstrainedFirst => BranchOrder::MostConstrainedFirst,
                })
                .with_complement_pairs(*complement_pairs);
            oracle_build(*params, cfg, f)?
        }
        Command::ValidateTables => validate_tables_cmd(f),
    })
}

/// Parses `args` (including the program name) and runs one command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(rendered.as_bytes())
            } else {
                stderr.write_all(rendered.as_bytes())
            };
            return code;
        }
    };

    let mut io = Io {
        stdin,
        stdin_used: false,
    };
    let outcome = match dispatch(&cli, &mut io) {
        Ok(o) => o,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message());
            return f.code();
        }
    };

    let written = if cli.output.as_os_str() == "-" {
        stdout.write_all(outcome.body.as_bytes()).and_then(|_| stdout.flush())
    } else {
        fs::write(&cli.output, outcome.body.as_bytes())
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: writing {}: {e}", cli.output.display());
        return 2;
    }

    match outcome.failure {
        Some(f) => {
            let _ = writeln!(stderr, "{}", f.message());
            f.code()
        }
        None => 0,
    }
}
