//! Synchronizing words: the tree-word construction, the pair-automaton check,
//! a greedy pair-merging fallback and an exact power-set search for small
//! automata.

use std::collections::VecDeque;

use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::automaton::{Automaton, State};
use crate::error::{Error, Result};
use crate::functional::FunctionalGraph;
use crate::rng::seeded;
use crate::word::{Letter, NcWords, Word};

/// Largest automaton accepted by [`shortest_sync_word_exact`].
pub const EXACT_LIMIT: usize = 20;

/// Candidate words checked per parallel batch in exhaustive scans.
const BATCH: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Tree,
    Exact,
    Greedy,
}

/// A synchronizing word together with how it was found. The word is only
/// empty for one-state automata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyncCertificate {
    pub word: Vec<Letter>,
    pub sink: State,
    pub method: Method,
    pub tree_word: Option<Word>,
    pub height: Option<usize>,
    pub verified: bool,
    alphabet: usize,
}

impl SyncCertificate {
    /// Builds a certificate after checking that `word` sends every state of
    /// `a` to `sink`.
    fn checked(a: &Automaton, word: Vec<Letter>, method: Method, tree: Option<(Word, usize)>) -> Result<Self> {
        let sink = collapse(a, &word)
            .ok_or_else(|| Error::Postcondition(format!("{method:?} word does not synchronize the automaton")))?;
        let (tree_word, height) = match tree {
            Some((w, h)) => (Some(w), Some(h)),
            None => (None, None),
        };
        Ok(SyncCertificate { word, sink, method, tree_word, height, verified: true, alphabet: a.alphabet() })
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn word_text(&self) -> String {
        match Word::new(self.word.clone()) {
            Ok(w) => w.to_text(self.alphabet),
            Err(_) => String::new(),
        }
    }

    /// Re-applies the word to every state.
    pub fn verify(&self, a: &Automaton) -> bool {
        collapse(a, &self.word) == Some(self.sink)
    }

    /// JSON object; the full word is included only when `emit_word` is set.
    pub fn to_json(&self, emit_word: bool) -> serde_json::Value {
        let mut v = json!({
            "method": self.method,
            "tree_word": self.tree_word.as_ref().map(|w| w.to_text(self.alphabet)),
            "H": self.height,
            "sink": self.sink,
            "word_len": self.word.len(),
            "verified": self.verified,
        });
        if emit_word {
            v["word"] = json!(self.word_text());
        }
        v
    }
}

/// Image of the whole state set under a letter sequence, if it is a single
/// state.
fn collapse(a: &Automaton, letters: &[Letter]) -> Option<State> {
    let mut first = None;
    for s in 0..a.n() {
        let t = letters.iter().fold(s, |s, &l| a.step(s, l));
        match first {
            None => first = Some(t),
            Some(f) if f != t => return None,
            _ => {}
        }
    }
    first
}

/// The common image of all states under `w`, if there is one.
pub fn is_synchronizing(a: &Automaton, w: &Word) -> Option<State> {
    collapse(a, w.letters())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// Lexicographic order; the smallest tree word wins.
    Exhaustive,
    /// Uniform sample without replacement, examined in sample order.
    Sampled { seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeWord {
    pub word: Word,
    pub height: usize,
    pub root: State,
}

fn tree_word_of(a: &Automaton, w: &Word) -> Option<TreeWord> {
    let g = FunctionalGraph::one_letter_view(a, w);
    let root = g.root()?;
    Some(TreeWord { height: g.height(), root, word: w.clone() })
}

/// Searches words of length `k` for one making `a` a tree. At most `budget`
/// candidates are examined. Self-conjugate words are skipped unless
/// `allow_self_conjugate` is set.
pub fn find_tree_word(
    a: &Automaton,
    k: usize,
    budget: usize,
    mode: SearchMode,
    allow_self_conjugate: bool,
) -> Result<Option<TreeWord>> {
    if k == 0 {
        return Err(Error::InvalidArgument("tree words need length k >= 1".into()));
    }
    let r = a.alphabet();
    match mode {
        SearchMode::Exhaustive => {
            let mut words = if allow_self_conjugate { NcWords::all(k, r)? } else { NcWords::new(k, r)? };
            let mut left = budget;
            while left > 0 {
                let batch: Vec<Word> = words.by_ref().take(left.min(BATCH)).collect();
                if batch.is_empty() {
                    break;
                }
                left -= batch.len();
                if let Some(t) = batch.par_iter().find_map_first(|w| tree_word_of(a, w)) {
                    return Ok(Some(t));
                }
            }
            Ok(None)
        }
        SearchMode::Sampled { seed } => {
            let total = (r as u64)
                .checked_pow(k as u32)
                .filter(|&t| t <= usize::MAX as u64)
                .ok_or(Error::TooLarge { n: k, limit: 64 })? as usize;
            let mut rng = seeded(seed);
            let picks = index::sample(&mut rng, total, budget.min(total)).into_vec();
            let candidates: Vec<Word> = picks
                .into_iter()
                .map(|i| decode(i, k, r))
                .filter(|w| allow_self_conjugate || !w.is_self_conjugate())
                .collect();
            Ok(candidates.par_iter().find_map_first(|w| tree_word_of(a, w)))
        }
    }
}

/// Every tree word of length `k`, in lexicographic order.
pub fn all_tree_words(a: &Automaton, k: usize, allow_self_conjugate: bool) -> Result<Vec<TreeWord>> {
    let r = a.alphabet();
    let words: Vec<Word> = if allow_self_conjugate { NcWords::all(k, r)?.collect() } else { NcWords::new(k, r)?.collect() };
    Ok(words.par_iter().filter_map(|w| tree_word_of(a, w)).collect())
}

/// The `i`-th word of length `k` in lexicographic order.
fn decode(mut i: usize, k: usize, r: usize) -> Word {
    let mut letters = vec![0; k];
    for slot in letters.iter_mut().rev() {
        *slot = (i % r) as Letter;
        i /= r;
    }
    Word::new(letters).expect("k >= 1")
}

/// Tree-word length used by [`tree_sync_word`]: `ceil((1 + epsilon) log2 n)`,
/// at least 1 and at most `ceil(2 log2 n)`.
pub fn tree_word_length(n: usize, epsilon: f64) -> usize {
    let lg = (n as f64).log2();
    let k = ((1.0 + epsilon) * lg - 1e-9).ceil().max(1.0) as usize;
    k.min(((2.0 * lg - 1e-9).ceil() as usize).max(1))
}

/// Finds a tree word `w` of the default length and returns `w^H`, `H` being
/// the height of the one-letter view. `Ok(None)` when no tree word turns up
/// within the budget.
pub fn tree_sync_word(a: &Automaton, epsilon: f64, budget: usize, mode: SearchMode) -> Result<Option<SyncCertificate>> {
    if a.n() < 2 {
        return Err(Error::InvalidArgument("tree_sync_word needs n >= 2".into()));
    }
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
    }
    let k = tree_word_length(a.n(), epsilon);
    let Some(t) = find_tree_word(a, k, budget, mode, false)? else {
        return Ok(None);
    };
    let word = t.word.power(t.height)?;
    let cert = SyncCertificate::checked(a, word.letters().to_vec(), Method::Tree, Some((t.word, t.height)))?;
    if cert.sink != t.root {
        return Err(Error::Postcondition(format!("tree word sinks at {} instead of the root {}", cert.sink, t.root)));
    }
    Ok(Some(cert))
}

/// Shortest merging words for all pairs of states, from a backward search on
/// the pair automaton.
pub struct PairMerge {
    n: usize,
    dist: Vec<u32>,
    next: Vec<Letter>,
}

const UNREACHED: u32 = u32::MAX;

impl PairMerge {
    pub fn new(a: &Automaton) -> Self {
        let n = a.n();
        let r = a.alphabet();
        // preimages per letter, as offsets into a flat list
        let mut starts = vec![vec![0usize; n + 1]; r];
        let mut pre = vec![vec![0 as State; n]; r];
        for l in 0..r {
            let map = a.letter_map(l as Letter);
            for &t in map {
                starts[l][t + 1] += 1;
            }
            for s in 0..n {
                starts[l][s + 1] += starts[l][s];
            }
            let mut fill = starts[l].clone();
            for (s, &t) in map.iter().enumerate() {
                pre[l][fill[t]] = s;
                fill[t] += 1;
            }
        }
        let mut dist = vec![UNREACHED; n * n];
        let mut next = vec![0; n * n];
        let mut queue = VecDeque::new();
        for p in 0..n {
            for q in p + 1..n {
                if let Some(l) = (0..r).find(|&l| a.step(p, l as Letter) == a.step(q, l as Letter)) {
                    dist[p * n + q] = 1;
                    next[p * n + q] = l as Letter;
                    queue.push_back((p, q));
                }
            }
        }
        while let Some((p, q)) = queue.pop_front() {
            let d = dist[p * n + q];
            for l in 0..r {
                let xs = &pre[l][starts[l][p]..starts[l][p + 1]];
                let ys = &pre[l][starts[l][q]..starts[l][q + 1]];
                for &x in xs {
                    for &y in ys {
                        let (x, y) = if x < y { (x, y) } else { (y, x) };
                        let i = x * n + y;
                        if x != y && dist[i] == UNREACHED {
                            dist[i] = d + 1;
                            next[i] = l as Letter;
                            queue.push_back((x, y));
                        }
                    }
                }
            }
        }
        PairMerge { n, dist, next }
    }

    /// Length of a shortest word merging `p` and `q`.
    pub fn distance(&self, p: State, q: State) -> Option<usize> {
        if p == q {
            return Some(0);
        }
        let (p, q) = if p < q { (p, q) } else { (q, p) };
        match self.dist[p * self.n + q] {
            UNREACHED => None,
            d => Some(d as usize),
        }
    }

    pub fn all_mergeable(&self) -> bool {
        (0..self.n).all(|p| (p + 1..self.n).all(|q| self.dist[p * self.n + q] != UNREACHED))
    }

    /// A shortest word sending `p` and `q` to the same state.
    pub fn merging_word(&self, a: &Automaton, mut p: State, mut q: State) -> Option<Vec<Letter>> {
        self.distance(p, q)?;
        let mut out = Vec::new();
        while p != q {
            let (x, y) = if p < q { (p, q) } else { (q, p) };
            let l = self.next[x * self.n + y];
            out.push(l);
            p = a.step(p, l);
            q = a.step(q, l);
        }
        Some(out)
    }
}

/// True iff some word synchronizes `a`, i.e. every pair of states can be
/// merged.
pub fn is_synchronizable(a: &Automaton) -> bool {
    PairMerge::new(a).all_mergeable()
}

/// Merges the current image set one pair at a time, always picking a pair
/// with the shortest merging word. `Ok(None)` iff `a` is not synchronizable.
pub fn greedy_fallback(a: &Automaton) -> Result<Option<SyncCertificate>> {
    let pm = PairMerge::new(a);
    if !pm.all_mergeable() {
        return Ok(None);
    }
    let mut set: Vec<State> = (0..a.n()).collect();
    let mut word = Vec::new();
    while set.len() > 1 {
        let mut best = (usize::MAX, 0, 0);
        for (i, &p) in set.iter().enumerate() {
            for &q in &set[i + 1..] {
                let d = pm.distance(p, q).expect("all pairs mergeable");
                if d < best.0 {
                    best = (d, p, q);
                }
            }
        }
        let part = pm.merging_word(a, best.1, best.2).expect("mergeable");
        for s in set.iter_mut() {
            *s = part.iter().fold(*s, |s, &l| a.step(s, l));
        }
        set.sort_unstable();
        set.dedup();
        word.extend(part);
    }
    SyncCertificate::checked(a, word, Method::Greedy, None).map(Some)
}

/// A shortest synchronizing word by breadth-first search over image sets.
/// Empty for one-state automata, `None` when `a` is not synchronizable.
pub fn shortest_sync_word_exact(a: &Automaton) -> Result<Option<Vec<Letter>>> {
    let n = a.n();
    if n > EXACT_LIMIT {
        return Err(Error::TooLarge { n, limit: EXACT_LIMIT });
    }
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    if full.count_ones() <= 1 {
        return Ok(Some(Vec::new()));
    }
    let r = a.alphabet();
    let mut parent = vec![u32::MAX; 1 << n];
    let mut via = vec![0 as Letter; 1 << n];
    parent[full as usize] = full;
    let mut queue = VecDeque::from([full]);
    while let Some(set) = queue.pop_front() {
        for l in 0..r as Letter {
            let map = a.letter_map(l);
            let mut img = 0u32;
            let mut m = set;
            while m != 0 {
                img |= 1 << map[m.trailing_zeros() as usize];
                m &= m - 1;
            }
            if parent[img as usize] != u32::MAX {
                continue;
            }
            parent[img as usize] = set;
            via[img as usize] = l;
            if img.count_ones() == 1 {
                let mut word = Vec::new();
                let mut cur = img;
                while cur != full {
                    word.push(via[cur as usize]);
                    cur = parent[cur as usize];
                }
                word.reverse();
                return Ok(Some(word));
            }
            queue.push_back(img);
        }
    }
    Ok(None)
}

/// Certificate wrapper around [`shortest_sync_word_exact`].
pub fn exact_certificate(a: &Automaton) -> Result<Option<SyncCertificate>> {
    match shortest_sync_word_exact(a)? {
        Some(word) => SyncCertificate::checked(a, word, Method::Exact, None).map(Some),
        None => Ok(None),
    }
}

/// Černý's automaton: `a` is the cyclic shift, `b` fixes every state except
/// `n - 1`, which it sends to 0.
pub fn cerny_automaton(n: usize) -> Result<Automaton> {
    Automaton::cerny(n)
}
