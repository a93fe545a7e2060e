//! Monte Carlo experiments over random automata.
//!
//! Every trial draws from its own ChaCha stream, seeded from the config seed,
//! the value of `n` and the trial index. Trials therefore give the same rows
//! whether they run serially or in parallel, and rows are kept in trial
//! order.

use std::collections::HashSet;

use rand::Rng;
use rayon::prelude::*;
use synchrotree::joyal::{compose_inverse, phi, psi, Checks, Order};
use synchrotree::records::{branch_records, in_b_hat, in_p_hat, in_q_hat, in_s, is_cycle_good};
use synchrotree::rng::{seeded, trial_seed, SeededRng};
use synchrotree::sync::{tree_sync_word, tree_word_length, SearchMode};
use synchrotree::word::NcWords;
use synchrotree::{
    all_permutations, are_conjugate, is_w_tree, AllAutomata, Automaton, DoublyMarked, FunctionalGraph, Labeled, Labeling,
    MarkedLabeled, Word,
};

use crate::config::{ExperimentConfig, KRule};
use crate::error::{LabError, Result};
use crate::record::{Cell, ExperimentRecord};
use crate::stats::{slope, Summary};

pub const EXPERIMENTS: [&str; 6] =
    ["tree_probability", "moment_estimate", "scaling", "goodness", "height", "bijection_audit"];

/// Runs the experiment named in the config.
pub fn run(cfg: &ExperimentConfig) -> Result<ExperimentRecord> {
    cfg.validate()?;
    let mut rec = match cfg.experiment.as_str() {
        "tree_probability" => tree_probability(cfg)?,
        "moment_estimate" => moment_estimate(cfg)?,
        "scaling" => scaling(cfg)?,
        "goodness" => goodness(cfg)?,
        "height" => height(cfg)?,
        "bijection_audit" => bijection_audit(cfg)?,
        other => return Err(LabError::UnknownExperiment(other.to_string())),
    };
    rec.finish();
    Ok(rec)
}

/// Runs `cfg.trials` trials for one group, in trial order.
fn trials<T, F>(cfg: &ExperimentConfig, group: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut SeededRng) -> T + Sync,
{
    let base = trial_seed(cfg.seed, group as u64);
    let one = |i: usize| f(&mut seeded(trial_seed(base, i as u64)));
    if cfg.parallel {
        (0..cfg.trials).into_par_iter().map(one).collect()
    } else {
        (0..cfg.trials).map(one).collect()
    }
}

fn random_automaton(n: usize, rng: &mut SeededRng) -> Automaton {
    Automaton::random_with(n, 2, rng).expect("n >= 2 and two letters")
}

/// Uniform non-self-conjugate binary word of length `k`.
pub fn random_nc_word<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Word {
    loop {
        let w = Word::new((0..k).map(|_| rng.gen_range(0..2)).collect()).expect("k >= 1");
        if !w.is_self_conjugate() {
            return w;
        }
    }
}

/// Number of non-self-conjugate binary words of length `k`, by Möbius
/// inversion over the divisors of `k`.
pub fn nc_word_count(k: usize) -> u128 {
    fn mobius(mut m: usize) -> i128 {
        let mut mu = 1;
        let mut p = 2;
        while p * p <= m {
            if m.is_multiple_of(p) {
                m /= p;
                if m.is_multiple_of(p) {
                    return 0;
                }
                mu = -mu;
            }
            p += 1;
        }
        if m > 1 {
            -mu
        } else {
            mu
        }
    }
    (1..=k).filter(|d| k.is_multiple_of(*d)).map(|d| mobius(d) * (1i128 << (k / d))).sum::<i128>() as u128
}

fn proportion(hits: usize, total: usize) -> (f64, f64) {
    let p = hits as f64 / total as f64;
    (p, (p * (1.0 - p) / total as f64).sqrt())
}

fn k_rule(cfg: &ExperimentConfig, default: KRule) -> KRule {
    cfg.k.unwrap_or(default)
}

/// Frequency of `A` being a `w`-tree for a fixed word.
fn tree_probability(cfg: &ExperimentConfig) -> Result<ExperimentRecord> {
    let words = cfg.parsed_words()?;
    let mut rec = ExperimentRecord::new(cfg, &["n", "trial", "word", "tree"], &["tree"]);
    for &n in &cfg.n {
        let w = match words.first() {
            Some(w) => w.clone(),
            None => {
                // a^(k-1) b is never self-conjugate
                let k = k_rule(cfg, KRule::Epsilon { epsilon: 0.2 }).k_for(n);
                let mut letters = vec![0; k];
                letters[k - 1] = 1;
                Word::new(letters)?
            }
        };
        if w.is_self_conjugate() {
            return Err(synchrotree::Error::SelfConjugate(w.to_string()).into());
        }
        let out = trials(cfg, n, |rng| is_w_tree(&random_automaton(n, rng), &w));
        for (i, &t) in out.iter().enumerate() {
            rec.rows.push(vec![n.into(), i.into(), w.to_string().into(), t.into()]);
        }
        let (p, se) = proportion(out.iter().filter(|&&t| t).count(), out.len());
        rec.set("p_hat", Some(n), p);
        rec.set("stderr", Some(n), se);
        rec.set("n_p_hat", Some(n), n as f64 * p);
    }
    Ok(rec)
}

/// Estimates `E[X_k] / n!`, where `X_k(A)` counts the triples
/// `(v, sigma, w)` with `w` non-self-conjugate of length `k` and
/// `(A, v, sigma)` in the hatted branch-good set of `w`.
///
/// By linearity `E[X_k] / n! = n a_k P(event)`, the probability taken over
/// uniform `(A, v, sigma, w)`, so the estimator is `n a_k p_hat`. The
/// bijection gives the hatted set the size of the cycle-good set, so
/// `a_k P(cycle-good)` has the same expectation; it is reported alongside.
fn moment_estimate(cfg: &ExperimentConfig) -> Result<ExperimentRecord> {
    let columns = ["n", "trial", "k", "word", "event", "cycle_good"];
    let mut rec = ExperimentRecord::new(cfg, &columns, &["event", "cycle_good"]);
    for &n in &cfg.n {
        let k = k_rule(cfg, KRule::Epsilon { epsilon: 0.2 }).k_for(n);
        let out = trials(cfg, n, |rng| {
            let a = random_automaton(n, rng);
            let v = rng.gen_range(0..n);
            let sigma = Labeling::random(n, rng);
            let w = random_nc_word(k, rng);
            let hit = in_b_hat(&a, v, &sigma, &w);
            // same (A, sigma, w); its mean times a_k has the same expectation
            let good = is_cycle_good(&a, &sigma, &w);
            (w, hit, good)
        });
        for (i, (w, hit, good)) in out.iter().enumerate() {
            rec.rows.push(vec![n.into(), i.into(), k.into(), w.to_string().into(), (*hit).into(), (*good).into()]);
        }
        let (p, se) = proportion(out.iter().filter(|x| x.1).count(), out.len());
        let (pc, sec) = proportion(out.iter().filter(|x| x.2).count(), out.len());
        let a_k = nc_word_count(k) as f64;
        let scale = n as f64 * a_k;
        rec.set("p_hat", Some(n), p);
        rec.set("estimate", Some(n), scale * p);
        rec.set("stderr", Some(n), scale * se);
        rec.set("target", Some(n), 2f64.powi(k as i32));
        rec.set("a_k", Some(n), a_k);
        rec.set("p_cycle_good", Some(n), pc);
        rec.set("cycle_good_estimate", Some(n), a_k * pc);
        rec.set("cycle_good_stderr", Some(n), a_k * sec);
    }
    Ok(rec)
}

/// Length bound used for certificates: `10 sqrt(n) log2 n`.
pub fn length_bound(n: usize) -> f64 {
    10.0 * (n as f64).sqrt() * (n as f64).log2()
}

/// Tree-method word lengths across `n`, with the log-log slope of the
/// median length.
fn scaling(cfg: &ExperimentConfig) -> Result<ExperimentRecord> {
    let epsilon = match k_rule(cfg, KRule::Epsilon { epsilon: 0.2 }) {
        KRule::Epsilon { epsilon } => epsilon,
        KRule::Explicit(_) => return Err(LabError::Config("scaling takes k as {\"epsilon\": e}".into())),
    };
    let budget = cfg.budget.unwrap_or(usize::MAX);
    let columns = ["n", "trial", "k", "found", "height", "length", "verified", "within_bound"];
    let mut rec = ExperimentRecord::new(cfg, &columns, &["found", "height", "length"]);
    let mut points = (Vec::new(), Vec::new());
    let (mut violations, mut unverified) = (0, 0);
    for &n in &cfg.n {
        let k = tree_word_length(n, epsilon);
        let out = trials(cfg, n, |rng| {
            let a = random_automaton(n, rng);
            tree_sync_word(&a, epsilon, budget, SearchMode::Exhaustive).map(|c| c.map(|c| (c.verify(&a), c)))
        });
        let mut lengths = Vec::new();
        for (i, res) in out.into_iter().enumerate() {
            let row: Vec<Cell> = match res? {
                Some((ok, c)) => {
                    let within = c.len() as f64 <= length_bound(n);
                    violations += !within as usize;
                    unverified += !ok as usize;
                    lengths.push(c.len() as f64);
                    vec![n.into(), i.into(), k.into(), true.into(), c.height.into(), c.len().into(), ok.into(), within.into()]
                }
                None => vec![n.into(), i.into(), k.into(), false.into(), Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty],
            };
            rec.rows.push(row);
        }
        rec.set("success_rate", Some(n), lengths.len() as f64 / cfg.trials as f64);
        rec.set("bound", Some(n), length_bound(n));
        if let Some(s) = Summary::of(&lengths) {
            rec.set("median_length", Some(n), s.median);
            rec.set("max_length", Some(n), s.max);
            points.0.push((n as f64).ln());
            points.1.push(s.median.ln());
        }
    }
    rec.set("bound_violations", None, violations as f64);
    rec.set("unverified", None, unverified as f64);
    if let Some(s) = slope(&points.0, &points.1) {
        rec.set("slope", None, s);
    }
    Ok(rec)
}

fn word_pair(cfg: &ExperimentConfig) -> Result<(Word, Word)> {
    let words = cfg.parsed_words()?;
    match words.as_slice() {
        [] => Ok((Word::parse("aab", 2)?, Word::parse("abb", 2)?)),
        [w1, w2] => {
            synchrotree::records::check_word_pair(w1, w2)?;
            Ok((w1.clone(), w2.clone()))
        }
        _ => Err(LabError::Config("goodness needs exactly two words".into())),
    }
}

/// Failure frequencies of cycle-goodness and membership in the collision
/// set for a fixed pair of non-conjugate words.
fn goodness(cfg: &ExperimentConfig) -> Result<ExperimentRecord> {
    let (w1, w2) = word_pair(cfg)?;
    let mut rec = ExperimentRecord::new(cfg, &["n", "trial", "not_cycle_good", "in_s"], &["not_cycle_good", "in_s"]);
    for &n in &cfg.n {
        let out = trials(cfg, n, |rng| {
            let a = random_automaton(n, rng);
            let s1 = Labeling::random(n, rng);
            let s2 = Labeling::random(n, rng);
            Ok::<_, LabError>((!is_cycle_good(&a, &s1, &w1), in_s(&a, [&s1, &s2], &w1, &w2)?))
        });
        let (mut bad, mut coll) = (0, 0);
        for (i, res) in out.into_iter().enumerate() {
            let (b, s) = res?;
            bad += b as usize;
            coll += s as usize;
            rec.rows.push(vec![n.into(), i.into(), b.into(), s.into()]);
        }
        let (p, se) = proportion(bad, cfg.trials);
        rec.set("p_not_cycle_good", Some(n), p);
        rec.set("stderr_not_cycle_good", Some(n), se);
        let (p, se) = proportion(coll, cfg.trials);
        rec.set("p_in_s", Some(n), p);
        rec.set("stderr_in_s", Some(n), se);
    }
    Ok(rec)
}

/// Heights of `A_w` for random automata and random words, against `5 sqrt(n)`.
fn height(cfg: &ExperimentConfig) -> Result<ExperimentRecord> {
    let columns = ["n", "trial", "k", "word", "height", "exceeds"];
    let mut rec = ExperimentRecord::new(cfg, &columns, &["height", "exceeds"]);
    for &n in &cfg.n {
        let k = match cfg.k {
            Some(rule) => rule.k_for(n),
            None => ((n as f64).ln().ceil() as usize).max(1),
        };
        let bound = 5.0 * (n as f64).sqrt();
        let out = trials(cfg, n, |rng| {
            let a = random_automaton(n, rng);
            let w = random_nc_word(k, rng);
            let h = FunctionalGraph::one_letter_view(&a, &w).height();
            (w, h)
        });
        let mut max = 0;
        let mut over = 0;
        for (i, (w, h)) in out.into_iter().enumerate() {
            let exceeds = h as f64 > bound;
            max = max.max(h);
            over += exceeds as usize;
            rec.rows.push(vec![n.into(), i.into(), k.into(), w.to_string().into(), h.into(), exceeds.into()]);
        }
        rec.set("max_height", Some(n), max as f64);
        rec.set("exceedances", Some(n), over as f64);
        rec.set("bound", Some(n), bound);
    }
    Ok(rec)
}

/// Largest sizes accepted by the exhaustive audit.
pub const AUDIT_MAX_N: usize = 3;
pub const AUDIT_MAX_K: usize = 3;

#[derive(Default)]
struct WordAudit {
    cycle_good: usize,
    failures: usize,
    images: Vec<MarkedLabeled>,
    b_hat: Vec<MarkedLabeled>,
}

fn audit_automaton(a: &Automaton, perms: &[Labeling], w: &Word) -> WordAudit {
    let mut out = WordAudit::default();
    for s in perms {
        if is_cycle_good(a, s, w) {
            out.cycle_good += 1;
            let x = Labeled::new(a.clone(), s.clone()).expect("valid labeling");
            match phi(&x, w, Checks::Checked) {
                Ok((y, plan)) => {
                    match psi(&y, w, Checks::Checked) {
                        Ok((back, back_plan)) if back == x && back_plan == plan.inverse() => {}
                        _ => out.failures += 1,
                    }
                    out.images.push(y);
                }
                Err(_) => out.failures += 1,
            }
        }
        for v in 0..a.n() {
            if in_b_hat(a, v, s, w) {
                let y = MarkedLabeled::new(a.clone(), v, s.clone()).expect("valid mark");
                let ok = psi(&y, w, Checks::Checked)
                    .and_then(|(x, _)| phi(&x, w, Checks::Checked))
                    .is_ok_and(|(back, _)| back == y);
                out.failures += !ok as usize;
                out.b_hat.push(y);
            }
        }
    }
    out
}

fn commutation_failures(x: &DoublyMarked, w1: &Word, w2: &Word) -> (bool, usize) {
    let (Ok(p), Ok(q)) = (in_p_hat(x, w1, w2), in_q_hat(x, w1, w2)) else {
        return (false, 1);
    };
    let y12 = compose_inverse(x, Order::OneThenTwo, w1, w2);
    let y21 = compose_inverse(x, Order::TwoThenOne, w1, w2);
    let mut failures = (p != y12.is_ok()) as usize + (q != y21.is_ok()) as usize;
    if p {
        // the first inverse must leave coordinate 2's branch records alone
        let before = branch_records(&x.automaton, x.marks[1], &x.sigmas[1], w2).vertices;
        match psi(&x.project(1), w1, Checks::Checked) {
            Ok((mid, _)) => {
                failures += (branch_records(&mid.automaton, x.marks[1], &x.sigmas[1], w2).vertices != before) as usize
            }
            Err(_) => failures += 1,
        }
    }
    if let (true, true, Ok(a), Ok(b)) = (p, q, &y12, &y21) {
        failures += (a != b) as usize;
    }
    (p && q, failures)
}

fn par_map<T: Send, U: Send + Sync>(items: &[U], parallel: bool, f: impl Fn(&U) -> T + Sync + Send) -> Vec<T> {
    if parallel {
        items.par_iter().map(f).collect()
    } else {
        items.iter().map(f).collect()
    }
}

/// Exhaustive check of the bijection and of the commutation of the inverse
/// maps, over every automaton with `n <= 3` states, every labeling and
/// every non-self-conjugate word of length at most `k`. Commutation runs on
/// every unordered pair of non-conjugate words of equal length.
fn bijection_audit(cfg: &ExperimentConfig) -> Result<ExperimentRecord> {
    let k_max = match k_rule(cfg, KRule::Explicit(AUDIT_MAX_K)) {
        KRule::Explicit(k) => k,
        KRule::Epsilon { .. } => return Err(LabError::Config("bijection_audit takes an explicit k".into())),
    };
    let n_max = *cfg.n.iter().max().expect("validated");
    if n_max > AUDIT_MAX_N || k_max > AUDIT_MAX_K {
        return Err(LabError::Config(format!(
            "exhaustive audit is limited to n <= {AUDIT_MAX_N} and k <= {AUDIT_MAX_K}, got n = {n_max}, k = {k_max}"
        )));
    }
    let columns = ["kind", "n", "k", "w1", "w2", "cycle_good", "b_hat", "members", "failures"];
    let mut rec = ExperimentRecord::new(cfg, &columns, &[]);
    let mut total_failures = 0;
    let mut members_total = 0;
    for &n in &cfg.n {
        let automata: Vec<Automaton> = AllAutomata::new(n, 2).collect();
        let perms: Vec<Labeling> = all_permutations(n).into_iter().map(|p| Labeling::new(p).expect("permutation")).collect();
        for k in 1..=k_max {
            let words: Vec<Word> = NcWords::new(k, 2)?.collect();
            for w in &words {
                let parts = par_map(&automata, cfg.parallel, |a| audit_automaton(a, &perms, w));
                let mut images = HashSet::new();
                let mut b_hat = HashSet::new();
                let (mut cycle_good, mut failures) = (0, 0);
                for p in parts {
                    cycle_good += p.cycle_good;
                    failures += p.failures;
                    for y in p.images {
                        failures += !images.insert(y) as usize;
                    }
                    b_hat.extend(p.b_hat);
                }
                failures += (images != b_hat) as usize;
                total_failures += failures;
                rec.rows.push(vec![
                    "bijection".to_string().into(),
                    n.into(),
                    k.into(),
                    w.to_string().into(),
                    Cell::Empty,
                    cycle_good.into(),
                    b_hat.len().into(),
                    Cell::Empty,
                    failures.into(),
                ]);
            }
            for (i, w1) in words.iter().enumerate() {
                for w2 in &words[i + 1..] {
                    if are_conjugate(w1, w2) {
                        continue;
                    }
                    let parts = par_map(&automata, cfg.parallel, |a| {
                        let mut acc = (0, 0);
                        for s1 in &perms {
                            for s2 in &perms {
                                for v1 in 0..n {
                                    for v2 in 0..n {
                                        let x = DoublyMarked::new(a.clone(), [v1, v2], [s1.clone(), s2.clone()])
                                            .expect("valid marks");
                                        let (m, f) = commutation_failures(&x, w1, w2);
                                        acc.0 += m as usize;
                                        acc.1 += f;
                                    }
                                }
                            }
                        }
                        acc
                    });
                    let members: usize = parts.iter().map(|p| p.0).sum();
                    let failures: usize = parts.iter().map(|p| p.1).sum();
                    total_failures += failures;
                    members_total += members;
                    rec.rows.push(vec![
                        "commutation".to_string().into(),
                        n.into(),
                        k.into(),
                        w1.to_string().into(),
                        w2.to_string().into(),
                        Cell::Empty,
                        Cell::Empty,
                        members.into(),
                        failures.into(),
                    ]);
                }
            }
        }
    }
    rec.set("failures", None, total_failures as f64);
    rec.set("commutation_members", None, members_total as f64);
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nc_counts() {
        assert_eq!(nc_word_count(1), 2);
        assert_eq!(nc_word_count(2), 2);
        assert_eq!(nc_word_count(4), 12);
        assert_eq!(nc_word_count(8), 240);
        for k in 1..=12 {
            assert_eq!(nc_word_count(k) as usize, NcWords::new(k, 2).unwrap().count());
        }
    }

    #[test]
    fn unknown_names_are_rejected() {
        let cfg = ExperimentConfig::new("nope", vec![4], 1, 0);
        assert!(matches!(run(&cfg), Err(LabError::UnknownExperiment(_))));
    }

    #[test]
    fn audit_size_guard() {
        let cfg = ExperimentConfig::new("bijection_audit", vec![4], 1, 0);
        assert!(matches!(run(&cfg), Err(LabError::Config(_))));
        let cfg = ExperimentConfig::new("bijection_audit", vec![2], 1, 0).with_k(KRule::Explicit(4));
        assert!(matches!(run(&cfg), Err(LabError::Config(_))));
    }
}
