//! One-letter automata (functional graphs) and the induced view `A_w`.

use crate::automaton::{Automaton, State};
use crate::error::{Error, Result};
use crate::thread::Thread;
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionalGraph {
    succ: Vec<State>,
    word: Option<Word>,
}

const UNSEEN: u8 = 0;
const ON_PATH: u8 = 1;
const DONE: u8 = 2;

impl FunctionalGraph {
    pub fn from_map(succ: Vec<State>) -> Result<Self> {
        let n = succ.len();
        if n == 0 {
            return Err(Error::InvalidArgument("empty map".into()));
        }
        if let Some((state, &target)) = succ.iter().enumerate().find(|(_, &t)| t >= n) {
            return Err(Error::TargetOutOfRange { letter: 0, state, target, n });
        }
        Ok(FunctionalGraph { succ, word: None })
    }

    /// `A_w`: the map `v -> apply_word(a, v, w)`, in `O(n k)`.
    pub fn one_letter_view(a: &Automaton, w: &Word) -> Self {
        let succ = (0..a.n()).map(|v| a.apply_word(v, w)).collect();
        FunctionalGraph { succ, word: Some(w.clone()) }
    }

    pub fn n(&self) -> usize {
        self.succ.len()
    }

    pub fn succ(&self) -> &[State] {
        &self.succ
    }

    /// The word this view was induced by, if any.
    pub fn word(&self) -> Option<&Word> {
        self.word.as_ref()
    }

    /// Cyclic flags, one per state, by iterative pointer chasing.
    pub fn cyclic_flags(&self) -> Vec<bool> {
        let n = self.n();
        let mut mark = vec![UNSEEN; n];
        let mut cyclic = vec![false; n];
        let mut path = Vec::new();
        for s in 0..n {
            if mark[s] != UNSEEN {
                continue;
            }
            let mut v = s;
            while mark[v] == UNSEEN {
                mark[v] = ON_PATH;
                path.push(v);
                v = self.succ[v];
            }
            if mark[v] == ON_PATH {
                let mut c = v;
                loop {
                    cyclic[c] = true;
                    c = self.succ[c];
                    if c == v {
                        break;
                    }
                }
            }
            for u in path.drain(..) {
                mark[u] = DONE;
            }
        }
        cyclic
    }

    /// Cyclic points in increasing order.
    pub fn cyclic_points(&self) -> Vec<State> {
        self.cyclic_flags().iter().enumerate().filter(|(_, &c)| c).map(|(v, _)| v).collect()
    }

    /// Every cycle, listed in successor order from its smallest state;
    /// cycles are sorted by that state.
    pub fn cycles(&self) -> Vec<Vec<State>> {
        let cyclic = self.cyclic_flags();
        let mut done = vec![false; self.n()];
        let mut out = Vec::new();
        for v in 0..self.n() {
            if !cyclic[v] || done[v] {
                continue;
            }
            let mut cycle = vec![v];
            done[v] = true;
            let mut u = self.succ[v];
            while u != v {
                done[u] = true;
                cycle.push(u);
                u = self.succ[u];
            }
            out.push(cycle);
        }
        out
    }

    pub fn is_loop_rooted_tree(&self) -> bool {
        self.cyclic_flags().iter().filter(|&&c| c).count() == 1
    }

    /// The unique cyclic point of a loop-rooted tree.
    pub fn root(&self) -> Option<State> {
        let pts = self.cyclic_points();
        (pts.len() == 1).then(|| pts[0])
    }

    /// Per-state height: the number of transitions along the longest chain
    /// of distinct states starting there.
    pub fn heights(&self) -> Vec<usize> {
        let n = self.n();
        let mut h: Vec<Option<usize>> = vec![None; n];
        for cycle in self.cycles() {
            for &c in &cycle {
                h[c] = Some(cycle.len() - 1);
            }
        }
        let mut path = Vec::new();
        for s in 0..n {
            let mut v = s;
            while h[v].is_none() {
                path.push(v);
                v = self.succ[v];
            }
            let mut base = h[v].expect("resolved");
            while let Some(u) = path.pop() {
                base += 1;
                h[u] = Some(base);
            }
        }
        h.into_iter().map(|x| x.expect("every state resolved")).collect()
    }

    /// Maximum height over all states; for a loop-rooted tree this is the
    /// largest distance to the root.
    pub fn height(&self) -> usize {
        self.heights().into_iter().max().unwrap_or(0)
    }

    /// Length of the cycle in the component of every state.
    pub fn component_cycle_lengths(&self) -> Vec<usize> {
        let n = self.n();
        let mut len: Vec<Option<usize>> = vec![None; n];
        for cycle in self.cycles() {
            for &c in &cycle {
                len[c] = Some(cycle.len());
            }
        }
        let mut path = Vec::new();
        for s in 0..n {
            let mut v = s;
            while len[v].is_none() {
                path.push(v);
                v = self.succ[v];
            }
            let l = len[v];
            for u in path.drain(..) {
                len[u] = l;
            }
        }
        len.into_iter().map(|x| x.expect("every state resolved")).collect()
    }
}

/// True iff `A_w` has a unique cyclic point.
pub fn is_w_tree(a: &Automaton, w: &Word) -> bool {
    FunctionalGraph::one_letter_view(a, w).is_loop_rooted_tree()
}

/// The shift `T mod k` of the thread of `(v, 0)`; defined for w-trees only.
pub fn shift(a: &Automaton, v: State, w: &Word) -> Result<usize> {
    if !is_w_tree(a, w) {
        return Err(Error::NotATree { word: w.to_string() });
    }
    Ok(shift_unchecked(a, v, w))
}

pub(crate) fn shift_unchecked(a: &Automaton, v: State, w: &Word) -> usize {
    Thread::new(a, v, 0, w).len() % w.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a3() -> Automaton {
        Automaton::new(vec![vec![1, 2, 0], vec![0, 0, 0]]).unwrap()
    }

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn fg(v: Vec<usize>) -> FunctionalGraph {
        FunctionalGraph::from_map(v).unwrap()
    }

    #[test]
    fn views_of_a3() {
        let a = a3();
        assert_eq!(FunctionalGraph::one_letter_view(&a, &w("b")).succ(), &[0, 0, 0]);
        assert_eq!(FunctionalGraph::one_letter_view(&a, &w("a")).succ(), &[1, 2, 0]);
        // 0 -a-> 1 -b-> 0, 1 -a-> 2 -b-> 0, 2 -a-> 0 -b-> 0
        assert_eq!(FunctionalGraph::one_letter_view(&a, &w("ab")).succ(), &[0, 0, 0]);
    }

    #[test]
    fn cyclic_points_basic() {
        assert_eq!(fg(vec![0, 0, 0]).cyclic_points(), vec![0]);
        assert_eq!(fg(vec![2, 0, 1]).cyclic_points(), vec![0, 1, 2]);
        assert_eq!(fg(vec![1, 0, 0, 2, 3]).cyclic_points(), vec![0, 1]);
        assert_eq!(fg(vec![1, 0, 3, 2]).cycles(), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn heights() {
        assert_eq!(fg(vec![0, 0, 0]).height(), 1);
        assert_eq!(fg(vec![0, 1, 2]).height(), 0);
        assert_eq!(fg(vec![0, 0, 1]).height(), 2);
        // 3 -> 2 -> 0 <-> 1: from 3 the distinct chain is 3,2,0,1
        assert_eq!(fg(vec![1, 0, 0, 2]).heights(), vec![1, 1, 2, 3]);
    }

    #[test]
    fn w_trees_and_shifts() {
        let a = a3();
        assert!(is_w_tree(&a, &w("b")));
        assert!(!is_w_tree(&a, &w("a")));
        assert!(is_w_tree(&a, &w("ab")));
        assert_eq!(shift(&a, 2, &w("ab")), Ok(0));
        assert_eq!(shift(&a, 0, &w("ab")), Ok(0));
        assert_eq!(shift(&a, 1, &w("b")), Ok(0));
        assert!(shift(&a, 0, &w("a")).is_err());
        // 1 -a-> 2 -b-> 0 then (0,0) -> (1,1) -> (0,0): T = 4
        assert_eq!(shift(&a, 1, &w("ab")), Ok(0));
        // a 1-shifted example: in A_ba state 0 first enters the root circuit at congruence 1
        assert_eq!(shift(&a, 0, &w("ba")), Ok(1));
    }
}
