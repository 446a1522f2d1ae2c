//! Algorithm X over a toroidal doubly-linked matrix (dancing links).

use std::time::Instant;

use super::BranchOrder;

/// Why a search stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Halt {
    /// The whole tree was explored or the solution limit was reached.
    Done,
    /// The deadline passed first.
    OutOfTime,
}

pub(crate) struct Dlx {
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    column: Vec<usize>,
    option_of: Vec<usize>,
    size: Vec<usize>,
    items: usize,
}

const ROOT: usize = 0;

impl Dlx {
    /// `options[r]` lists the item indices (`< items`) option `r` covers.
    pub(crate) fn new(items: usize, options: &[Vec<usize>]) -> Self {
        let headers = items + 1;
        let mut d = Dlx {
            left: Vec::with_capacity(headers),
            right: Vec::with_capacity(headers),
            up: (0..headers).collect(),
            down: (0..headers).collect(),
            column: (0..headers).collect(),
            option_of: vec![usize::MAX; headers],
            size: vec![0; headers],
            items,
        };
        for i in 0..headers {
            d.left.push(if i == 0 { items } else { i - 1 });
            d.right.push(if i == items { 0 } else { i + 1 });
        }
        for (r, opt) in options.iter().enumerate() {
            let mut first: Option<usize> = None;
            for &item in opt {
                debug_assert!(item < items);
                let c = item + 1;
                let node = d.column.len();
                d.column.push(c);
                d.option_of.push(r);
                // append at the bottom of column c
                let last = d.up[c];
                d.up.push(last);
                d.down.push(c);
                d.down[last] = node;
                d.up[c] = node;
                d.size[c] += 1;
                match first {
                    None => {
                        d.left.push(node);
                        d.right.push(node);
                        first = Some(node);
                    }
                    Some(f) => {
                        let l = d.left[f];
                        d.left.push(l);
                        d.right.push(f);
                        d.right[l] = node;
                        d.left[f] = node;
                    }
                }
            }
        }
        d
    }

    fn cover(&mut self, c: usize) {
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = r;
        self.left[r] = l;
        let mut i = self.down[c];
        while i != c {
            let mut j = self.right[i];
            while j != i {
                let (u, dn) = (self.up[j], self.down[j]);
                self.down[u] = dn;
                self.up[dn] = u;
                self.size[self.column[j]] -= 1;
                j = self.right[j];
            }
            i = self.down[i];
        }
    }

    fn uncover(&mut self, c: usize) {
        let mut i = self.up[c];
        while i != c {
            let mut j = self.left[i];
            while j != i {
                self.size[self.column[j]] += 1;
                let (u, dn) = (self.up[j], self.down[j]);
                self.down[u] = j;
                self.up[dn] = j;
                j = self.left[j];
            }
            i = self.up[i];
        }
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = c;
        self.left[r] = c;
    }

    fn choose(&self, order: BranchOrder) -> usize {
        match order {
            BranchOrder::Lexicographic => self.right[ROOT],
            BranchOrder::MostConstrainedFirst => {
                let mut best = self.right[ROOT];
                let mut c = best;
                while c != ROOT {
                    if self.size[c] < self.size[best] {
                        best = c;
                        if self.size[c] == 0 {
                            break;
                        }
                    }
                    c = self.right[c];
                }
                best
            }
        }
    }

    /// Runs the search, calling `on_solution` with chosen option indices.
    /// `on_solution` returns `false` to stop.
    pub(crate) fn search<F>(&mut self, order: BranchOrder, deadline: Instant, mut on_solution: F) -> Halt
    where
        F: FnMut(&[usize]) -> bool,
    {
        if self.items == 0 {
            on_solution(&[]);
            return Halt::Done;
        }
        let mut state = SearchState {
            partial: Vec::new(),
            nodes: 0,
            deadline,
            halt: None,
        };
        self.recurse(order, &mut state, &mut on_solution);
        state.halt.unwrap_or(Halt::Done)
    }

    fn recurse<F>(&mut self, order: BranchOrder, st: &mut SearchState, on_solution: &mut F)
    where
        F: FnMut(&[usize]) -> bool,
    {
        if self.right[ROOT] == ROOT {
            if !on_solution(&st.partial) {
                st.halt = Some(Halt::Done);
            }
            return;
        }
        st.nodes += 1;
        if st.nodes % 1024 == 1 && Instant::now() >= st.deadline {
            st.halt = Some(Halt::OutOfTime);
            return;
        }
        let c = self.choose(order);
        if self.size[c] == 0 {
            return;
        }
        self.cover(c);
        let mut r = self.down[c];
        while r != c {
            st.partial.push(self.option_of[r]);
            let mut j = self.right[r];
            while j != r {
                self.cover(self.column[j]);
                j = self.right[j];
            }
            self.recurse(order, st, on_solution);
            let mut j = self.left[r];
            while j != r {
                self.uncover(self.column[j]);
                j = self.left[j];
            }
            st.partial.pop();
            if st.halt.is_some() {
                break;
            }
            r = self.down[r];
        }
        self.uncover(c);
    }
}

struct SearchState {
    partial: Vec<usize>,
    nodes: u64,
    deadline: Instant,
    halt: Option<Halt>,
}
