//! Complete deterministic automata without initial or final states.

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng;
use crate::word::{Letter, Word, MAX_ALPHABET};

pub type State = usize;

/// `n` states and one total transition map per letter, stored as
/// `delta[letter][state]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Automaton {
    n: usize,
    delta: Vec<Vec<State>>,
}

impl Automaton {
    pub fn new(delta: Vec<Vec<State>>) -> Result<Self> {
        let alphabet = delta.len();
        if !(2..=MAX_ALPHABET).contains(&alphabet) {
            return Err(Error::InvalidArgument(format!(
                "alphabet size {alphabet} must lie in [2, {MAX_ALPHABET}]"
            )));
        }
        let n = delta[0].len();
        if n == 0 {
            return Err(Error::InvalidArgument("automata need at least one state".into()));
        }
        for (letter, row) in delta.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "delta[{letter}] has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some((state, &target)) = row.iter().enumerate().find(|(_, &t)| t >= n) {
                return Err(Error::TargetOutOfRange { letter, state, target, n });
            }
        }
        Ok(Automaton { n, delta })
    }

    /// Uniform random automaton: every one of the `r * n` targets is drawn
    /// independently and uniformly from the seeded stream.
    pub fn random(n: usize, r: usize, seed: u64) -> Result<Self> {
        Self::random_with(n, r, &mut rng::seeded(seed))
    }

    pub fn random_with<R: Rng + ?Sized>(n: usize, r: usize, rng: &mut R) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        if !(2..=MAX_ALPHABET).contains(&r) {
            return Err(Error::InvalidArgument(format!("alphabet size {r} must lie in [2, {MAX_ALPHABET}]")));
        }
        let delta = (0..r).map(|_| (0..n).map(|_| rng.gen_range(0..n)).collect()).collect();
        Ok(Automaton { n, delta })
    }

    /// The Černý automaton: `a` is the cyclic shift `i -> i+1 mod n`, `b` is
    /// the identity except `n-1 -> 0`.
    pub fn cerny(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument("the Černý family starts at n = 2".into()));
        }
        let a = (0..n).map(|i| (i + 1) % n).collect();
        let mut b: Vec<State> = (0..n).collect();
        b[n - 1] = 0;
        Self::new(vec![a, b])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> usize {
        self.delta.len()
    }

    pub fn delta(&self) -> &[Vec<State>] {
        &self.delta
    }

    pub fn letter_map(&self, letter: Letter) -> &[State] {
        &self.delta[letter as usize]
    }

    #[inline]
    pub fn step(&self, s: State, letter: Letter) -> State {
        self.delta[letter as usize][s]
    }

    /// Left-to-right application of `w` from `s`.
    pub fn apply_word(&self, s: State, w: &Word) -> State {
        w.letters().iter().fold(s, |u, &l| self.step(u, l))
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        let m = w.max_letter() as usize;
        if m >= self.alphabet() {
            return Err(Error::LetterOutOfRange { letter: m, alphabet: self.alphabet() });
        }
        Ok(())
    }

    pub fn check_state(&self, s: State) -> Result<()> {
        if s >= self.n {
            return Err(Error::StateOutOfRange { state: s, n: self.n });
        }
        Ok(())
    }

    /// Copy of `self` with the single transition `(src, letter)` redirected.
    pub fn with_edge(&self, src: State, letter: Letter, target: State) -> Automaton {
        let mut a = self.clone();
        a.delta[letter as usize][src] = target;
        a
    }

    pub(crate) fn set_edge(&mut self, src: State, letter: Letter, target: State) {
        self.delta[letter as usize][src] = target;
    }

    /// Relabels states through the bijection `pi` (state `s` becomes `pi[s]`).
    pub fn relabel(&self, pi: &[State]) -> Automaton {
        let mut delta = vec![vec![0; self.n]; self.alphabet()];
        for (l, row) in self.delta.iter().enumerate() {
            for (s, &t) in row.iter().enumerate() {
                delta[l][pi[s]] = pi[t];
            }
        }
        Automaton { n: self.n, delta }
    }
}

/// Iterator over every automaton with `n` states on `alphabet` letters
/// (`n^(alphabet*n)` of them), in base-`n` counting order of the flattened
/// transition table.
pub struct AllAutomata {
    n: usize,
    next: Option<Vec<State>>,
}

impl AllAutomata {
    pub fn new(n: usize, alphabet: usize) -> Self {
        AllAutomata { n, next: (n > 0).then(|| vec![0; n * alphabet]) }
    }
}

impl Iterator for AllAutomata {
    type Item = Automaton;

    fn next(&mut self) -> Option<Automaton> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        for digit in succ.iter_mut().rev() {
            *digit += 1;
            if *digit < self.n {
                self.next = Some(succ);
                break;
            }
            *digit = 0;
        }
        let delta = cur.chunks(self.n).map(<[State]>::to_vec).collect();
        Some(Automaton { n: self.n, delta })
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).expect("pivot");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}
