//! Partial explorations: threads of a list of inputs revealed one after the
//! other, with every step classified as exploring, following or hitting.
//!
//! A prefix `t` of a trace consists of the first `t` triples together with
//! the transitions taken from them. The revealed partial automaton at `t`
//! holds the labeled edges of those transitions, thread-closing ones
//! included, so that the final revealed automaton is the union of the input
//! threads whatever their order.

use std::collections::{HashMap, HashSet};

use rand::Rng;
use serde::Serialize;

use crate::automaton::{Automaton, State};
use crate::error::{Error, Result};
use crate::thread::Thread;
use crate::word::{are_conjugate, Letter, Word};

/// One input triple `(u_j, r_j, m_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputEntry {
    pub state: State,
    pub congruence: usize,
    pub word: Word,
}

/// An input `U` of size `d >= 1`; all words share one length `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputSpec {
    entries: Vec<InputEntry>,
}

impl InputSpec {
    pub fn new(entries: Vec<InputEntry>) -> Result<Self> {
        let Some(first) = entries.first() else {
            return Err(Error::InvalidArgument("an input needs at least one entry".into()));
        };
        let k = first.word.len();
        for e in &entries {
            if e.word.len() != k {
                return Err(Error::InvalidArgument(format!("input words must share length {k}, got {}", e.word)));
            }
            if e.congruence >= k {
                return Err(Error::InvalidArgument(format!("congruence {} is not below {k}", e.congruence)));
            }
        }
        Ok(InputSpec { entries })
    }

    /// `d` entries with uniform states and congruences, words drawn
    /// uniformly from `words`.
    pub fn random<R: Rng + ?Sized>(n: usize, d: usize, words: &[Word], rng: &mut R) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::InvalidArgument("no words to draw from".into()));
        }
        let entries = (0..d)
            .map(|_| {
                let word = words[rng.gen_range(0..words.len())].clone();
                InputEntry { state: rng.gen_range(0..n), congruence: rng.gen_range(0..word.len()), word }
            })
            .collect();
        InputSpec::new(entries)
    }

    pub fn entries(&self) -> &[InputEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn k(&self) -> usize {
        self.entries[0].word.len()
    }

    fn validate(&self, a: &Automaton) -> Result<()> {
        for e in &self.entries {
            a.check_state(e.state)?;
            a.check_word(&e.word)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tag {
    Exploring,
    Following,
    Hitting,
}

/// The triple `(x_t, y_t, z_t)` and the transition taken from it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub x: State,
    pub y: usize,
    /// Index into [`ExplorationTrace::words`].
    pub z: usize,
    pub letter: Letter,
    pub head: State,
    /// The labeled edge `(x, letter)` had not been taken before.
    pub exploring: bool,
    /// Exploring, and `head` is one of `x_0..x_t`.
    pub hit: bool,
    /// `t` is one of the start times `t_j`.
    pub start: bool,
}

impl Step {
    pub fn tag(&self) -> Tag {
        match (self.exploring, self.hit) {
            (true, true) => Tag::Hitting,
            (true, false) => Tag::Exploring,
            _ => Tag::Following,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplorationTrace {
    pub n: usize,
    pub k: usize,
    pub words: Vec<Word>,
    pub steps: Vec<Step>,
    /// `t_0 = 0, t_1, .., t_d`; `t_d` is the final time `T_U`.
    pub start_times: Vec<usize>,
    /// Full thread length of every input entry, computed independently.
    pub thread_lengths: Vec<usize>,
}

/// Runs the partial exploration of `a` with input `u`.
///
/// An entry whose start triple was already visited contributes no steps
/// (`t_j = t_{j-1}`): its thread is determined by what was revealed.
pub fn explore(a: &Automaton, u: &InputSpec) -> Result<ExplorationTrace> {
    u.validate(a)?;
    let k = u.k();
    let mut words: Vec<Word> = Vec::new();
    let mut seen: HashSet<(State, usize, usize)> = HashSet::new();
    let mut exposed: HashSet<(State, Letter)> = HashSet::new();
    let mut visited: HashSet<State> = HashSet::new();
    let mut steps = Vec::new();
    let mut start_times = vec![0];
    let mut thread_lengths = Vec::with_capacity(u.len());
    for e in u.entries() {
        let z = match words.iter().position(|w| *w == e.word) {
            Some(z) => z,
            None => {
                words.push(e.word.clone());
                words.len() - 1
            }
        };
        thread_lengths.push(Thread::new(a, e.state, e.congruence, &e.word).len());
        let (mut x, mut y) = (e.state, e.congruence);
        let mut start = seen.insert((x, y, z));
        let mut running = start;
        while running {
            visited.insert(x);
            let letter = e.word.at(y);
            let head = a.step(x, letter);
            let exploring = exposed.insert((x, letter));
            let hit = exploring && visited.contains(&head);
            steps.push(Step { x, y, z, letter, head, exploring, hit, start });
            start = false;
            (x, y) = (head, (y + 1) % k);
            running = seen.insert((x, y, z));
        }
        start_times.push(steps.len());
    }
    Ok(ExplorationTrace { n: a.n(), k, words, steps, start_times, thread_lengths })
}

impl ExplorationTrace {
    /// `T_U`.
    pub fn final_time(&self) -> usize {
        self.steps.len()
    }

    pub fn input_size(&self) -> usize {
        self.start_times.len() - 1
    }

    pub fn classify(&self) -> Vec<Tag> {
        self.steps.iter().map(Step::tag).collect()
    }

    /// `h` for every prefix: entry `t` counts the hits among the first `t`
    /// steps.
    pub fn hits_by_prefix(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        out.push(0);
        for s in &self.steps {
            out.push(out.last().unwrap() + s.hit as usize);
        }
        out
    }

    /// `h_t(u)`: hits on `u` among the first `t` steps.
    pub fn hits_on(&self, t: usize, u: State) -> usize {
        self.steps[..t].iter().filter(|s| s.hit && s.head == u).count()
    }

    pub fn following_count(&self, t: usize) -> usize {
        self.steps[..t].iter().filter(|s| !s.exploring).count()
    }

    /// Longest run of consecutive following times.
    pub fn longest_following_run(&self) -> usize {
        let mut best = 0;
        let mut run = 0;
        for s in &self.steps {
            run = if s.exploring { 0 } else { run + 1 };
            best = best.max(run);
        }
        best
    }

    /// Number of threads started within the first `t` steps.
    pub fn threads_started(&self, t: usize) -> usize {
        self.start_times[..self.start_times.len() - 1].iter().filter(|&&s| s < t).count()
    }

    /// The revealed partial automaton after `t` steps.
    pub fn revealed(&self, t: usize) -> Revealed {
        let mut r = Revealed::new(self.n);
        for s in &self.steps[..t] {
            r.add(s.x, s.letter, s.head);
        }
        r
    }

    /// `(x, y, word)` is among the first `t` triples.
    pub fn contains(&self, t: usize, x: State, y: usize, word: usize) -> bool {
        self.steps[..t].iter().any(|s| (s.x, s.y, s.z) == (x, y, word))
    }

    /// Same, excluding start triples.
    pub fn contains_star(&self, t: usize, x: State, y: usize, word: usize) -> bool {
        self.steps[..t].iter().any(|s| !s.start && (s.x, s.y, s.z) == (x, y, word))
    }

    /// Whether the thread of `(u, r)` under word `word` can be completed
    /// using only edges revealed after `t` steps.
    pub fn thread_determined(&self, t: usize, u: State, r: usize, word: usize) -> bool {
        let rev = self.revealed(t);
        let w = &self.words[word];
        let mut seen = HashSet::new();
        let (mut x, mut y) = (u, r % self.k);
        while seen.insert((x, y)) {
            match rev.target(x, w.at(y)) {
                Some(h) => (x, y) = (h, (y + 1) % self.k),
                None => return false,
            }
        }
        true
    }

    /// One JSON object per step.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for (t, s) in self.steps.iter().enumerate() {
            let tag = if s.start { "start".to_string() } else { format!("{:?}", s.tag()).to_lowercase() };
            let line = serde_json::json!({
                "t": t,
                "x": s.x,
                "y": s.y,
                "z": self.words[s.z].to_string(),
                "tag": tag,
                "step": s.tag(),
                "letter": s.letter,
                "head": s.head,
            });
            out.push_str(&line.to_string());
            out.push('\n');
        }
        out
    }
}

/// A partial automaton: labeled edges `(x, letter) -> head`, with simple
/// letter-merged adjacency for balls.
#[derive(Clone, Debug, Default)]
pub struct Revealed {
    n: usize,
    labeled: HashMap<(State, Letter), State>,
    out_adj: HashMap<State, Vec<State>>,
    in_adj: HashMap<State, Vec<State>>,
    out_deg: HashMap<State, usize>,
    in_deg: HashMap<State, usize>,
    big_out_sum: usize,
    big_in_sum: usize,
}

fn bump(deg: &mut HashMap<State, usize>, v: State, sum: &mut usize) {
    let d = deg.entry(v).or_insert(0);
    *d += 1;
    match *d {
        2 => *sum += 2,
        d if d > 2 => *sum += 1,
        _ => {}
    }
}

impl Revealed {
    pub fn new(n: usize) -> Self {
        Revealed { n, ..Default::default() }
    }

    /// Adds a labeled edge; returns false if it was already present.
    pub fn add(&mut self, x: State, letter: Letter, head: State) -> bool {
        if self.labeled.insert((x, letter), head).is_some() {
            return false;
        }
        bump(&mut self.out_deg, x, &mut self.big_out_sum);
        bump(&mut self.in_deg, head, &mut self.big_in_sum);
        let out = self.out_adj.entry(x).or_default();
        if !out.contains(&head) {
            out.push(head);
            self.in_adj.entry(head).or_default().push(x);
        }
        true
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn target(&self, x: State, letter: Letter) -> Option<State> {
        self.labeled.get(&(x, letter)).copied()
    }

    pub fn edge_count(&self) -> usize {
        self.labeled.len()
    }

    /// Labeled out-degree.
    pub fn out_degree(&self, v: State) -> usize {
        self.out_deg.get(&v).copied().unwrap_or(0)
    }

    /// Labeled in-degree.
    pub fn in_degree(&self, v: State) -> usize {
        self.in_deg.get(&v).copied().unwrap_or(0)
    }

    /// Sum of in-degrees at least 2, and the same for out-degrees.
    pub fn large_degree_sums(&self) -> (usize, usize) {
        (self.big_in_sum, self.big_out_sum)
    }

    /// States incident to at least one revealed edge, sorted.
    pub fn touched(&self) -> Vec<State> {
        let mut v: Vec<State> = self.out_adj.keys().chain(self.in_adj.keys()).copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    fn ball_along(adj: &HashMap<State, Vec<State>>, u: State, radius: usize) -> Vec<State> {
        // balls are small: a frontier-by-frontier scan over a flat list
        let mut ball = vec![u];
        let mut frontier = 0;
        for _ in 0..radius {
            let end = ball.len();
            for i in frontier..end {
                for &x in adj.get(&ball[i]).map(Vec::as_slice).unwrap_or(&[]) {
                    if !ball.contains(&x) {
                        ball.push(x);
                    }
                }
            }
            if ball.len() == end {
                break;
            }
            frontier = end;
        }
        ball.sort_unstable();
        ball
    }

    /// `B^-(u, l)`: states from which `u` is reachable in at most `l` steps.
    pub fn in_ball(&self, u: State, radius: usize) -> Vec<State> {
        Self::ball_along(&self.in_adj, u, radius)
    }

    /// `B^+(u, l)`: states reachable from `u` in at most `l` steps.
    pub fn out_ball(&self, u: State, radius: usize) -> Vec<State> {
        Self::ball_along(&self.out_adj, u, radius)
    }

    /// `B(u, l) = B^-(u, l) ∪ B^+(u, l)`.
    pub fn ball(&self, u: State, radius: usize) -> Vec<State> {
        let mut b = self.in_ball(u, radius);
        b.extend(self.out_ball(u, radius));
        b.sort_unstable();
        b.dedup();
        b
    }

    /// Whether the simple graph induced on `B(u, l)` is a directed path.
    pub fn ball_is_path(&self, u: State, radius: usize) -> bool {
        let ball = self.ball(u, radius);
        let inside: HashSet<State> = ball.iter().copied().collect();
        let mut edges = 0;
        let mut indeg: HashMap<State, usize> = HashMap::new();
        for &v in &ball {
            let outs: Vec<State> = self
                .out_adj
                .get(&v)
                .map(|o| o.iter().copied().filter(|x| inside.contains(x)).collect())
                .unwrap_or_default();
            if outs.len() > 1 || outs.contains(&v) {
                return false;
            }
            for x in outs {
                edges += 1;
                let d = indeg.entry(x).or_insert(0);
                *d += 1;
                if *d > 1 {
                    return false;
                }
            }
        }
        edges + 1 == ball.len()
    }

    /// Number of touched states whose ball of radius `radius` is not a
    /// directed path (untouched states have the trivial ball).
    pub fn special_count(&self, radius: usize) -> usize {
        self.touched().into_iter().filter(|&u| !self.ball_is_path(u, radius)).count()
    }
}

/// A deterministic claim that failed on a trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimViolation {
    pub claim: &'static str,
    pub prefix: usize,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AuditSummary {
    pub prefixes: usize,
    pub ball_checks: usize,
    pub special_checks: usize,
    pub windows: usize,
}

/// Checks the deterministic properties of explorations on `trace`.
///
/// Every claim holds at every prefix. Balls only grow and a ball that is not
/// a path stays that way, while their bounds change only at hits, so those
/// two checks run just before each hit and at the end, which covers every
/// prefix. Label-window uniqueness is checked over the whole trace for pairs
/// of words that are equal or non-conjugate.
pub fn audit(trace: &ExplorationTrace) -> std::result::Result<AuditSummary, ClaimViolation> {
    let k = trace.k;
    let d = trace.input_size();
    let total = trace.final_time();
    let mut summary = AuditSummary::default();
    let mut rev = Revealed::new(trace.n);
    let mut congruence_sets: Vec<Vec<HashSet<State>>> = vec![vec![HashSet::new(); k]; trace.words.len()];
    let mut hits = 0usize;
    let mut following = 0usize;
    let fail = |claim, prefix, detail: String| Err(ClaimViolation { claim, prefix, detail });
    for t in 0..=total {
        if t > 0 {
            let s = &trace.steps[t - 1];
            congruence_sets[s.z][s.y].insert(s.x);
            rev.add(s.x, s.letter, s.head);
            hits += s.hit as usize;
            following += !s.exploring as usize;
        }
        summary.prefixes += 1;
        let started = trace.threads_started(t);
        for sets in &congruence_sets {
            let max = sets.iter().map(HashSet::len).max().unwrap_or(0);
            let min = sets.iter().map(HashSet::len).min().unwrap_or(0);
            if max - min > started {
                return fail("equi", t, format!("congruence counts spread {min}..{max} with {started} threads"));
            }
        }
        let (din, dout) = rev.large_degree_sums();
        if din > 2 * hits || dout > 2 * hits {
            return fail("degrees", t, format!("in {din}, out {dout}, hits {hits}"));
        }
        if following > 4 * d * k * k * hits * hits {
            return fail("few_followed", t, format!("{following} following times with {hits} hits"));
        }
        if t == total || trace.steps[t].hit {
            // a ball, like the special set, never holds more than the touched states
            let touched = rev.touched();
            for u in &touched {
                for radius in [1, k] {
                    summary.ball_checks += 1;
                    let bound = 2 * radius * (hits + 1);
                    if touched.len() <= bound {
                        continue;
                    }
                    let (bin, bout) = (rev.in_ball(*u, radius).len(), rev.out_ball(*u, radius).len());
                    if bin > bound || bout > bound {
                        return fail("ball", t, format!("u={u} l={radius}: |B-|={bin} |B+|={bout} > {bound}"));
                    }
                }
            }
            if t > 0 {
                summary.special_checks += 1;
                let bound = 10 * k * hits * hits;
                if touched.len() > bound {
                    let special = rev.special_count(k);
                    if special > bound {
                        return fail("few_special", t, format!("{special} special vertices with {hits} hits"));
                    }
                }
            }
        }
    }
    summary.windows = check_windows(trace)?;
    Ok(summary)
}

type Edge = (State, Letter, State);

/// Every window of `k` consecutive labeled edges inside one thread belongs to
/// a single (word, congruence) pair.
fn check_windows(trace: &ExplorationTrace) -> std::result::Result<usize, ClaimViolation> {
    let k = trace.k;
    let mut owner: HashMap<Vec<Edge>, (usize, usize)> = HashMap::new();
    let mut count = 0;
    for j in 0..trace.input_size() {
        let steps = &trace.steps[trace.start_times[j]..trace.start_times[j + 1]];
        for (i, win) in steps.windows(k).enumerate() {
            count += 1;
            let key: Vec<_> = win.iter().map(|s| (s.x, s.letter, s.head)).collect();
            let who = (win[0].z, win[0].y);
            if let Some(&prev) = owner.get(&key) {
                let comparable = prev.0 == who.0 || !are_conjugate(&trace.words[prev.0], &trace.words[who.0]);
                if prev != who && comparable {
                    return Err(ClaimViolation {
                        claim: "trajectory",
                        prefix: trace.start_times[j] + i,
                        detail: format!("window shared by (word, congruence) {prev:?} and {who:?}"),
                    });
                }
            } else {
                owner.insert(key, who);
            }
        }
    }
    Ok(count)
}

/// The constants of the typical event for an input of size `d`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TypicalityBounds {
    pub t_max: f64,
    pub h_max: f64,
    /// Ball bound per unit radius, `4 (h_max + 1)`.
    pub ball_per_radius: f64,
    pub path_exceptions: f64,
    pub following_run: f64,
}

impl TypicalityBounds {
    pub fn new(d: usize, k: usize, n: usize) -> Self {
        let (d, k, n) = (d as f64, k as f64, n as f64);
        let h_max = 100.0 * (d * k).powi(2);
        TypicalityBounds {
            t_max: 5.0 * k * n.sqrt(),
            h_max,
            ball_per_radius: 4.0 * (h_max + 1.0),
            path_exceptions: 10.0 * k * h_max * h_max,
            following_run: 4.0 * d * k * k * h_max * h_max,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TypicalityReport {
    pub bounds: TypicalityBounds,
    pub thread_lengths: Vec<usize>,
    pub total_hits: usize,
    pub large_in_degree_sum: usize,
    pub large_out_degree_sum: usize,
    /// Largest `|B(u, l)| / l` over the radii examined.
    pub max_ball_ratio: f64,
    pub special_vertices: usize,
    pub longest_following_run: usize,
    pub e_len: bool,
    pub e_hit: bool,
    pub e_ball: bool,
    pub e_path: bool,
    pub e_foll: bool,
}

impl TypicalityReport {
    pub fn typical(&self) -> bool {
        self.e_len && self.e_hit && self.e_ball && self.e_path && self.e_foll
    }
}

/// Evaluates the typical event on a finished trace of an input of size `d`,
/// on `n` states with words of length `k`.
pub fn check_typicality(trace: &ExplorationTrace, d: usize, k: usize, n: usize) -> TypicalityReport {
    check_typicality_with(trace, TypicalityBounds::new(d, k, n))
}

pub fn check_typicality_with(trace: &ExplorationTrace, bounds: TypicalityBounds) -> TypicalityReport {
    let rev = trace.revealed(trace.final_time());
    let total_hits = trace.hits_by_prefix()[trace.final_time()];
    let (din, dout) = rev.large_degree_sums();
    let touched = rev.touched();
    // |B(u, l)| never exceeds the touched count (or 1), so radii beyond
    // touched / (4 (h_max + 1)) cannot violate the bound
    let max_radius = (touched.len() as f64 / bounds.ball_per_radius).ceil().max(1.0) as usize;
    let mut max_ball_ratio: f64 = 0.0;
    for &u in &touched {
        for radius in 1..=max_radius {
            max_ball_ratio = max_ball_ratio.max(rev.ball(u, radius).len() as f64 / radius as f64);
        }
    }
    let special = rev.special_count(trace.k);
    let longest = trace.longest_following_run();
    TypicalityReport {
        bounds,
        thread_lengths: trace.thread_lengths.clone(),
        total_hits,
        large_in_degree_sum: din,
        large_out_degree_sum: dout,
        max_ball_ratio,
        special_vertices: special,
        longest_following_run: longest,
        e_len: trace.thread_lengths.iter().all(|&l| l as f64 <= bounds.t_max),
        e_hit: total_hits as f64 <= bounds.h_max,
        e_ball: max_ball_ratio <= bounds.ball_per_radius,
        e_path: special as f64 <= bounds.path_exceptions,
        e_foll: longest as f64 <= bounds.following_run,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a3() -> Automaton {
        Automaton::new(vec![vec![1, 2, 0], vec![0, 0, 0]]).unwrap()
    }

    fn input(entries: &[(State, usize, &str)]) -> InputSpec {
        InputSpec::new(
            entries
                .iter()
                .map(|&(state, congruence, w)| InputEntry { state, congruence, word: Word::parse(w, 2).unwrap() })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn a3_single_thread() {
        let tr = explore(&a3(), &input(&[(0, 0, "ab")])).unwrap();
        assert_eq!(tr.final_time(), 2);
        let xs: Vec<_> = tr.steps.iter().map(|s| (s.x, s.y)).collect();
        assert_eq!(xs, vec![(0, 0), (1, 1)]);
        assert_eq!(tr.classify(), vec![Tag::Exploring, Tag::Hitting]);
        assert_eq!(tr.hits_by_prefix(), vec![0, 0, 1]);
        assert_eq!(tr.following_count(2), 0);
        assert_eq!(tr.start_times, vec![0, 2]);
        let rev = tr.revealed(2);
        assert_eq!(rev.in_ball(0, 1), vec![0, 1]);
        assert_eq!(rev.in_ball(0, 0), vec![0]);
        assert_eq!(rev.out_ball(0, 2), vec![0, 1]);
    }

    #[test]
    fn repeated_start_adds_nothing() {
        let tr = explore(&a3(), &input(&[(0, 0, "ab"), (0, 0, "ab")])).unwrap();
        assert_eq!(tr.start_times, vec![0, 2, 2]);
        let tr = explore(&a3(), &input(&[(0, 0, "ab"), (1, 1, "ab")])).unwrap();
        assert_eq!(tr.start_times, vec![0, 2, 2]);
    }

    #[test]
    fn second_thread_follows_revealed_edges() {
        // thread of (2,0): 2 -a-> 0 -b-> 0 -a-> 1 -b-> 0, meeting (0,0)
        let tr = explore(&a3(), &input(&[(0, 0, "ab"), (2, 0, "ab")])).unwrap();
        assert_eq!(tr.start_times, vec![0, 2, 4]);
        let tags = tr.classify();
        assert_eq!(&tags[2..], &[Tag::Hitting, Tag::Hitting]);
        assert!(tr.steps[2].start && !tr.steps[3].start);
        assert!(tr.thread_determined(4, 2, 0, 0));
        assert!(!tr.thread_determined(2, 2, 0, 0));
        assert!(tr.contains(4, 2, 0, 0) && !tr.contains_star(4, 2, 0, 0));
    }

    #[test]
    fn following_times_are_detected() {
        // a-loops on 0 and 1 revisit the same labeled edges under "ab" and "aab"
        let a = Automaton::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        let tr = explore(&a, &input(&[(0, 0, "aab"), (0, 1, "aab")])).unwrap();
        assert!(tr.steps.iter().any(|s| !s.exploring));
        assert!(audit(&tr).is_ok());
    }

    #[test]
    fn tiny_trace_is_typical() {
        let tr = explore(&a3(), &input(&[(0, 0, "ab")])).unwrap();
        let rep = check_typicality(&tr, 1, 2, 3);
        assert!(rep.typical(), "{rep:?}");
    }

    #[test]
    fn exceeding_hit_budget_is_reported() {
        let tr = explore(&a3(), &input(&[(0, 0, "ab")])).unwrap();
        let bounds = TypicalityBounds { h_max: 0.0, ..TypicalityBounds::new(1, 2, 3) };
        let rep = check_typicality_with(&tr, bounds);
        assert!(!rep.e_hit && !rep.typical());
    }

    #[test]
    fn paths_and_cycles() {
        let mut r = Revealed::new(5);
        r.add(0, 0, 1);
        r.add(1, 0, 2);
        assert!(r.ball_is_path(1, 1));
        r.add(2, 1, 0);
        assert!(!r.ball_is_path(1, 2));
        assert_eq!(r.special_count(2), 3);
        let mut l = Revealed::new(2);
        l.add(0, 0, 0);
        assert!(!l.ball_is_path(0, 1));
    }

    #[test]
    fn inputs_are_validated() {
        assert!(InputSpec::new(vec![]).is_err());
        let w2 = Word::parse("ab", 2).unwrap();
        let w3 = Word::parse("abb", 2).unwrap();
        let mixed = vec![
            InputEntry { state: 0, congruence: 0, word: w2.clone() },
            InputEntry { state: 0, congruence: 0, word: w3 },
        ];
        assert!(InputSpec::new(mixed).is_err());
        assert!(InputSpec::new(vec![InputEntry { state: 0, congruence: 2, word: w2.clone() }]).is_err());
        let far = InputSpec::new(vec![InputEntry { state: 7, congruence: 0, word: w2 }]).unwrap();
        assert!(explore(&a3(), &far).is_err());
    }
}
