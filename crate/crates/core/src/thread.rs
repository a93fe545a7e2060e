//! w-threads: letter-by-letter trajectories cut at the first repeated
//! (vertex, congruence) pair.

use std::collections::HashMap;

use crate::automaton::{Automaton, State};
use crate::word::Word;

/// The w-thread of `(start, r)`.
///
/// `entries[i] = (u_i, (r + i) mod k)` for `0 <= i < T`; leaving position `i`
/// reads the letter `w.at(r + i)`. `T` is the first time a pair repeats and
/// `T~ < T` the index of its earlier occurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thread {
    pub entries: Vec<(State, usize)>,
    pub word: Word,
    pub start: (State, usize),
    repeat: usize,
    tilde: usize,
}

impl Thread {
    /// Walks the thread of `(u, r)`. Runs in `O(T)` time and space.
    pub fn new(a: &Automaton, u: State, r: usize, w: &Word) -> Thread {
        let k = w.len();
        let r = r % k;
        let mut seen: HashMap<(State, usize), usize> = HashMap::new();
        let mut entries = Vec::new();
        let (mut v, mut c) = (u, r);
        loop {
            if let Some(&i) = seen.get(&(v, c)) {
                let repeat = entries.len();
                return Thread { entries, word: w.clone(), start: (u, r), repeat, tilde: i };
            }
            seen.insert((v, c), entries.len());
            entries.push((v, c));
            v = a.step(v, w.at(c));
            c = (c + 1) % k;
        }
    }

    /// `T`, the thread length.
    pub fn len(&self) -> usize {
        self.repeat
    }

    pub fn is_empty(&self) -> bool {
        self.repeat == 0
    }

    /// `T~`.
    pub fn tilde(&self) -> usize {
        self.tilde
    }

    /// Length `(T - T~) / k` of the cycle of `A_w` the thread ends on.
    pub fn cyc(&self) -> usize {
        (self.repeat - self.tilde) / self.word.len()
    }

    pub fn is_cyclic(&self) -> bool {
        self.tilde == 0
    }

    /// Vertex `u_T`, equal to `u_{T~}`.
    pub fn repeated_vertex(&self) -> State {
        self.entries[self.tilde].0
    }

    pub fn last(&self) -> (State, usize) {
        *self.entries.last().expect("threads are non-empty")
    }

    /// Entries visited after the start, with their positions.
    pub fn arrivals(&self) -> impl Iterator<Item = (usize, State, usize)> + '_ {
        self.entries.iter().enumerate().skip(1).map(|(i, &(v, c))| (i, v, c))
    }
}
