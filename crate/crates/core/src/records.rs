//! Cycle minima, branch lower records, and the collision predicates built on
//! them.
//!
//! Triples `(i, h, j)` and record indices `p, q` are 1-based, as are the two
//! coordinates of a doubly marked configuration. States and congruences are
//! 0-based.

use rand::Rng;
use serde::Serialize;

use crate::automaton::{Automaton, State};
use crate::error::{Error, Result};
use crate::functional::{shift_unchecked, FunctionalGraph};
use crate::rng::random_permutation;
use crate::thread::Thread;
use crate::word::{are_conjugate, Word};

/// A bijective labeling `sigma: [0, n) -> [0, n)`; `label(v)` is `sigma(v)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Labeling(Vec<usize>);

impl Labeling {
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        let n = labels.len();
        let mut seen = vec![false; n];
        for &l in &labels {
            if l >= n || std::mem::replace(&mut seen[l], true) {
                return Err(Error::InvalidArgument(format!("{labels:?} is not a permutation of 0..{n}")));
            }
        }
        Ok(Labeling(labels))
    }

    pub fn identity(n: usize) -> Self {
        Labeling((0..n).collect())
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Labeling(random_permutation(n, rng))
    }

    #[inline]
    pub fn label(&self, v: State) -> usize {
        self.0[v]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// The labeling carried over by the state relabeling `pi`.
    pub fn relabel(&self, pi: &[State]) -> Labeling {
        let mut out = vec![0; self.0.len()];
        for (v, &l) in self.0.iter().enumerate() {
            out[pi[v]] = l;
        }
        Labeling(out)
    }
}

/// `(A, sigma)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Labeled {
    pub automaton: Automaton,
    pub sigma: Labeling,
}

/// `(A, v, sigma)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MarkedLabeled {
    pub automaton: Automaton,
    pub mark: State,
    pub sigma: Labeling,
}

/// `(A, v1, v2, sigma1, sigma2)`; index 0 of each array is coordinate 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DoublyMarked {
    pub automaton: Automaton,
    pub marks: [State; 2],
    pub sigmas: [Labeling; 2],
}

/// `(A, sigma1, sigma2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DoublyLabeled {
    pub automaton: Automaton,
    pub sigmas: [Labeling; 2],
}

fn check_labeling(a: &Automaton, sigma: &Labeling) -> Result<()> {
    if sigma.len() != a.n() {
        return Err(Error::InvalidArgument(format!(
            "labeling has {} entries for {} states",
            sigma.len(),
            a.n()
        )));
    }
    Ok(())
}

impl Labeled {
    pub fn new(automaton: Automaton, sigma: Labeling) -> Result<Self> {
        check_labeling(&automaton, &sigma)?;
        Ok(Labeled { automaton, sigma })
    }

    pub fn cycle_minima(&self, w: &Word) -> RecordSet {
        cycle_minima(&self.automaton, &self.sigma, w)
    }

    pub fn is_cycle_good(&self, w: &Word) -> bool {
        is_cycle_good(&self.automaton, &self.sigma, w)
    }
}

impl MarkedLabeled {
    pub fn new(automaton: Automaton, mark: State, sigma: Labeling) -> Result<Self> {
        check_labeling(&automaton, &sigma)?;
        automaton.check_state(mark)?;
        Ok(MarkedLabeled { automaton, mark, sigma })
    }

    pub fn branch_records(&self, w: &Word) -> RecordSet {
        branch_records(&self.automaton, self.mark, &self.sigma, w)
    }

    pub fn is_branch_good(&self, w: &Word) -> bool {
        is_branch_good(&self.automaton, self.mark, &self.sigma, w)
    }

    /// Membership in the hatted branch-good set: a `w`-tree, 0-shifted from
    /// the mark, and branch-good.
    pub fn in_b_hat(&self, w: &Word) -> bool {
        in_b_hat(&self.automaton, self.mark, &self.sigma, w)
    }

    pub fn relabel(&self, pi: &[State]) -> MarkedLabeled {
        MarkedLabeled {
            automaton: self.automaton.relabel(pi),
            mark: pi[self.mark],
            sigma: self.sigma.relabel(pi),
        }
    }
}

impl DoublyMarked {
    pub fn new(automaton: Automaton, marks: [State; 2], sigmas: [Labeling; 2]) -> Result<Self> {
        for (m, s) in marks.iter().zip(&sigmas) {
            automaton.check_state(*m)?;
            check_labeling(&automaton, s)?;
        }
        Ok(DoublyMarked { automaton, marks, sigmas })
    }

    /// Projection on coordinate `i` (1 or 2).
    pub fn project(&self, i: usize) -> MarkedLabeled {
        MarkedLabeled {
            automaton: self.automaton.clone(),
            mark: self.marks[i - 1],
            sigma: self.sigmas[i - 1].clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordKind {
    Cycle,
    Branch,
}

/// `beta_1..beta_{lambda+1}` or `b_1..b_{ell+1}`.
///
/// For branch records `positions[p]` is the thread position of `b_p` along
/// the thread of `(mark, 0)`. For cycle minima it is the offset of `beta_p`
/// along its cycle, counted in successor order from the cycle's smallest
/// state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecordSet {
    pub kind: RecordKind,
    pub vertices: Vec<State>,
    pub positions: Vec<usize>,
    /// `lambda` or `ell`: the number of records before the closing vertex.
    pub count: usize,
}

impl RecordSet {
    /// Distinct vertices in first-occurrence order, each with its 1-based
    /// index.
    pub fn distinct(&self) -> Vec<(usize, State)> {
        let mut out: Vec<(usize, State)> = Vec::with_capacity(self.vertices.len());
        for (i, &v) in self.vertices.iter().enumerate() {
            if !out.iter().any(|&(_, u)| u == v) {
                out.push((i + 1, v));
            }
        }
        out
    }

    /// 1-based index of the first record equal to `v`.
    pub fn index_of(&self, v: State) -> Option<usize> {
        self.vertices.iter().position(|&u| u == v).map(|i| i + 1)
    }
}

pub fn cycle_minima(a: &Automaton, sigma: &Labeling, w: &Word) -> RecordSet {
    cycle_minima_of(&FunctionalGraph::one_letter_view(a, w), sigma)
}

pub(crate) fn cycle_minima_of(f: &FunctionalGraph, sigma: &Labeling) -> RecordSet {
    let cycles = f.cycles();
    let mut mins: Vec<(State, usize, usize)> = cycles
        .iter()
        .enumerate()
        .map(|(ci, c)| {
            let (off, &v) = c.iter().enumerate().min_by_key(|(_, &v)| sigma.label(v)).expect("non-empty");
            (v, off, ci)
        })
        .collect();
    mins.sort_by_key(|&(v, _, _)| std::cmp::Reverse(sigma.label(v)));
    let count = mins.len();
    let (_, off, ci) = mins[count - 1];
    let mut vertices: Vec<State> = mins.iter().map(|m| m.0).collect();
    let mut positions: Vec<usize> = mins.iter().map(|m| m.1).collect();
    let cycle = &cycles[ci];
    let pred_off = (off + cycle.len() - 1) % cycle.len();
    vertices.push(cycle[pred_off]);
    positions.push(pred_off);
    RecordSet { kind: RecordKind::Cycle, vertices, positions, count }
}

pub fn branch_records(a: &Automaton, mark: State, sigma: &Labeling, w: &Word) -> RecordSet {
    branch_records_of(&Thread::new(a, mark, 0, w), sigma)
}

pub(crate) fn branch_records_of(t: &Thread, sigma: &Labeling) -> RecordSet {
    let k = t.word.len();
    let mut vertices = Vec::new();
    let mut positions = Vec::new();
    let mut best = usize::MAX;
    for i in 0..=t.tilde() / k {
        let v = t.entries[k * i].0;
        if sigma.label(v) < best {
            best = sigma.label(v);
            vertices.push(v);
            positions.push(k * i);
        }
    }
    let count = vertices.len();
    vertices.push(t.repeated_vertex());
    positions.push(t.tilde());
    RecordSet { kind: RecordKind::Branch, vertices, positions, count }
}

/// A forbidden arrival: the `w_h`-thread of `(source_p, r)` reaches
/// `(target_q, s)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollisionWitness {
    pub ihj: [u8; 3],
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub s: usize,
    /// The partial thread from `(source_p, r)` up to and including the
    /// arrival.
    pub path: Vec<(State, usize)>,
}

impl CollisionWitness {
    /// Number of transitions in the witnessing partial thread.
    pub fn len(&self) -> usize {
        self.path.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.path.len() <= 1
    }

    pub fn to_json_line(&self) -> String {
        serde_json::json!({
            "ihj": self.ihj,
            "p": self.p,
            "q": self.q,
            "r": self.r,
            "s": self.s,
            "len": self.len(),
        })
        .to_string()
    }
}

pub type Triple = [u8; 3];

pub const B_TRIPLES: [Triple; 2] = [[1, 1, 1], [2, 2, 2]];
pub const P_TRIPLES: [Triple; 5] = [[1, 1, 1], [2, 2, 2], [1, 2, 1], [1, 2, 2], [2, 2, 1]];
pub const Q_TRIPLES: [Triple; 5] = [[1, 1, 1], [2, 2, 2], [2, 1, 2], [2, 1, 1], [1, 1, 2]];
pub const ALL_TRIPLES: [Triple; 8] =
    [[1, 1, 1], [1, 1, 2], [1, 2, 1], [1, 2, 2], [2, 1, 1], [2, 1, 2], [2, 2, 1], [2, 2, 2]];

/// Walks the `w`-thread of every `(source, r)` and calls `found` on each
/// arrival at a target, skipping congruence-0 arrivals unless `any_congruence`.
/// Stops early when `found` returns true; returns whether it stopped.
fn scan<F>(a: &Automaton, sources: &RecordSet, targets: &RecordSet, w: &Word, any_congruence: bool, mut found: F) -> bool
where
    F: FnMut(usize, usize, &Thread, usize) -> bool,
{
    for (p, u) in sources.distinct() {
        for r in 0..w.len() {
            let t = Thread::new(a, u, r, w);
            for (i, v, c) in t.arrivals() {
                if c == 0 && !any_congruence {
                    continue;
                }
                if let Some(q) = targets.index_of(v) {
                    if found(p, q, &t, i) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

fn witness(ihj: Triple, p: usize, q: usize, t: &Thread, i: usize) -> CollisionWitness {
    CollisionWitness { ihj, p, q, r: t.start.1, s: t.entries[i].1, path: t.entries[..=i].to_vec() }
}

fn first_in_scan(
    a: &Automaton,
    sources: &RecordSet,
    targets: &RecordSet,
    w: &Word,
    any_congruence: bool,
    ihj: Triple,
) -> Option<CollisionWitness> {
    let mut out = None;
    scan(a, sources, targets, w, any_congruence, |p, q, t, i| {
        out = Some(witness(ihj, p, q, t, i));
        true
    });
    out
}

/// First violation of cycle-goodness, reported as a `(1,1,1)` witness.
pub fn cycle_good_witness(a: &Automaton, sigma: &Labeling, w: &Word) -> Option<CollisionWitness> {
    let beta = cycle_minima(a, sigma, w);
    first_in_scan(a, &beta, &beta, w, false, [1, 1, 1])
}

pub fn is_cycle_good(a: &Automaton, sigma: &Labeling, w: &Word) -> bool {
    cycle_good_witness(a, sigma, w).is_none()
}

/// First violation of branch-goodness, reported as a `(1,1,1)` witness.
pub fn branch_good_witness(a: &Automaton, mark: State, sigma: &Labeling, w: &Word) -> Option<CollisionWitness> {
    let b = branch_records(a, mark, sigma, w);
    first_in_scan(a, &b, &b, w, false, [1, 1, 1])
}

pub fn is_branch_good(a: &Automaton, mark: State, sigma: &Labeling, w: &Word) -> bool {
    branch_good_witness(a, mark, sigma, w).is_none()
}

/// `A` is a `w`-tree and `(A, mark)` is 0-shifted.
pub fn is_hat(a: &Automaton, mark: State, w: &Word) -> bool {
    FunctionalGraph::one_letter_view(a, w).is_loop_rooted_tree() && shift_unchecked(a, mark, w) == 0
}

pub fn in_b_hat(a: &Automaton, mark: State, sigma: &Labeling, w: &Word) -> bool {
    is_hat(a, mark, w) && is_branch_good(a, mark, sigma, w)
}

/// Rejects pairs the collision layer is not defined for.
pub fn check_word_pair(w1: &Word, w2: &Word) -> Result<()> {
    for w in [w1, w2] {
        if w.is_self_conjugate() {
            return Err(Error::SelfConjugate(w.to_string()));
        }
    }
    if are_conjugate(w1, w2) {
        return Err(Error::ConjugateWords(w1.to_string(), w2.to_string()));
    }
    Ok(())
}

fn check_triple(t: &Triple) -> Result<()> {
    if t.iter().all(|&x| x == 1 || x == 2) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("triple {t:?} is not in {{1,2}}^3")))
    }
}

fn collisions(
    a: &Automaton,
    records: &[RecordSet; 2],
    words: [&Word; 2],
    which: &[Triple],
    all: bool,
) -> Result<Vec<CollisionWitness>> {
    let mut out = Vec::new();
    for t in which {
        check_triple(t)?;
        let [i, h, j] = t.map(|x| x as usize - 1);
        let stopped = scan(a, &records[i], &records[j], words[h], j != h, |p, q, th, pos| {
            out.push(witness(*t, p, q, th, pos));
            !all
        });
        if stopped {
            break;
        }
    }
    Ok(out)
}

fn branch_pair(x: &DoublyMarked, words: [&Word; 2]) -> [RecordSet; 2] {
    [0, 1].map(|i| branch_records(&x.automaton, x.marks[i], &x.sigmas[i], words[i]))
}

/// Every `(i,h,j)`-collision for the requested triples.
pub fn find_collisions(x: &DoublyMarked, w1: &Word, w2: &Word, which: &[Triple]) -> Result<Vec<CollisionWitness>> {
    check_word_pair(w1, w2)?;
    collisions(&x.automaton, &branch_pair(x, [w1, w2]), [w1, w2], which, true)
}

/// The first collision among the requested triples, in triple order.
pub fn first_collision(x: &DoublyMarked, w1: &Word, w2: &Word, which: &[Triple]) -> Result<Option<CollisionWitness>> {
    check_word_pair(w1, w2)?;
    Ok(collisions(&x.automaton, &branch_pair(x, [w1, w2]), [w1, w2], which, false)?.pop())
}

/// The first cycle-minima collision across all eight triples, if any.
pub fn s_witness(a: &Automaton, sigmas: [&Labeling; 2], w1: &Word, w2: &Word) -> Result<Option<CollisionWitness>> {
    check_word_pair(w1, w2)?;
    for s in sigmas {
        check_labeling(a, s)?;
    }
    let beta = [cycle_minima(a, sigmas[0], w1), cycle_minima(a, sigmas[1], w2)];
    Ok(collisions(a, &beta, [w1, w2], &ALL_TRIPLES, false)?.pop())
}

/// Membership of `(A, sigma1, sigma2)` in the bad set `S`.
pub fn in_s(a: &Automaton, sigmas: [&Labeling; 2], w1: &Word, w2: &Word) -> Result<bool> {
    Ok(s_witness(a, sigmas, w1, w2)?.is_some())
}

/// Both marks are 0-shifted in a tree of their word.
pub fn is_double_hat(x: &DoublyMarked, w1: &Word, w2: &Word) -> bool {
    is_hat(&x.automaton, x.marks[0], w1) && is_hat(&x.automaton, x.marks[1], w2)
}

pub fn in_p_hat(x: &DoublyMarked, w1: &Word, w2: &Word) -> Result<bool> {
    Ok(is_double_hat(x, w1, w2) && first_collision(x, w1, w2, &P_TRIPLES)?.is_none())
}

pub fn in_q_hat(x: &DoublyMarked, w1: &Word, w2: &Word) -> Result<bool> {
    Ok(is_double_hat(x, w1, w2) && first_collision(x, w1, w2, &Q_TRIPLES)?.is_none())
}

pub fn in_b_hat_double(x: &DoublyMarked, w1: &Word, w2: &Word) -> Result<bool> {
    Ok(is_double_hat(x, w1, w2) && first_collision(x, w1, w2, &B_TRIPLES)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn aut(a: Vec<usize>, b: Vec<usize>) -> Automaton {
        Automaton::new(vec![a, b]).unwrap()
    }

    fn a3() -> Automaton {
        aut(vec![1, 2, 0], vec![0, 0, 0])
    }

    #[test]
    fn labelings_must_be_permutations() {
        assert!(Labeling::new(vec![0, 0]).is_err());
        assert!(Labeling::new(vec![0, 2]).is_err());
        assert!(Labeling::new(vec![1, 0]).is_ok());
    }

    #[test]
    fn cycle_minima_two_loops() {
        let a = aut(vec![0, 1], vec![0, 1]);
        let r = cycle_minima(&a, &Labeling::identity(2), &w("a"));
        assert_eq!(r.vertices, vec![1, 0, 0]);
        assert_eq!(r.count, 2);
    }

    #[test]
    fn cycle_minima_of_a3() {
        let r = cycle_minima(&a3(), &Labeling::identity(3), &w("ab"));
        assert_eq!((r.vertices, r.count), (vec![0, 0], 1));
    }

    #[test]
    fn cycle_minima_two_cycle() {
        let a = aut(vec![1, 0], vec![0, 0]);
        let r = cycle_minima(&a, &Labeling::identity(2), &w("a"));
        assert_eq!((r.vertices, r.count), (vec![0, 1], 1));
    }

    #[test]
    fn branch_records_of_a3() {
        // thread of (2,0): (2,0),(0,1),(0,0),(1,1); T~ = 2
        let r = branch_records(&a3(), 2, &Labeling::identity(3), &w("ab"));
        assert_eq!(r.vertices, vec![2, 0, 0]);
        assert_eq!(r.positions, vec![0, 2, 2]);
        assert_eq!(r.count, 2);
        // label 2 lowest: the first entry blocks every later record
        let s = Labeling::new(vec![1, 2, 0]).unwrap();
        assert_eq!(branch_records(&a3(), 2, &s, &w("ab")).count, 1);
    }

    #[test]
    fn branch_records_of_cyclic_mark() {
        let r = branch_records(&a3(), 0, &Labeling::identity(3), &w("ab"));
        assert_eq!((r.vertices, r.count), (vec![0, 0], 1));
    }

    #[test]
    fn a3_goodness() {
        let id = Labeling::identity(3);
        assert!(is_cycle_good(&a3(), &id, &w("ab")));
        assert!(is_branch_good(&a3(), 0, &id, &w("ab")));
        // from (2,0): 2 -a-> 0 at congruence 1, and 0 is b_2
        let wit = branch_good_witness(&a3(), 2, &id, &w("ab")).unwrap();
        assert_eq!((wit.p, wit.q, wit.r, wit.s), (1, 2, 0, 1));
        assert_eq!(wit.path, vec![(2, 0), (0, 1)]);
    }

    #[test]
    fn single_letter_words_are_always_good() {
        for a in crate::automaton::AllAutomata::new(3, 2) {
            let id = Labeling::identity(3);
            assert!(is_cycle_good(&a, &id, &w("b")));
            for v in 0..3 {
                assert!(is_branch_good(&a, v, &id, &w("a")));
            }
        }
    }

    #[test]
    fn word_pairs_are_validated() {
        let x = DoublyMarked::new(a3(), [0, 0], [Labeling::identity(3), Labeling::identity(3)]).unwrap();
        assert!(matches!(find_collisions(&x, &w("ab"), &w("ba"), &ALL_TRIPLES), Err(Error::ConjugateWords(..))));
        assert!(matches!(find_collisions(&x, &w("abab"), &w("aabb"), &ALL_TRIPLES), Err(Error::SelfConjugate(_))));
        assert_eq!(find_collisions(&x, &w("aab"), &w("abb"), &[]).unwrap(), vec![]);
        assert!(find_collisions(&x, &w("aab"), &w("abb"), &[[1, 3, 1]]).is_err());
    }

    #[test]
    fn witness_json() {
        let c = CollisionWitness { ihj: [1, 2, 1], p: 1, q: 2, r: 0, s: 1, path: vec![(0, 0), (1, 1)] };
        assert_eq!(c.to_json_line(), r#"{"ihj":[1,2,1],"len":1,"p":1,"q":2,"r":0,"s":1}"#);
    }
}
