use std::collections::HashSet;

use proptest::prelude::*;
use rand::Rng;
use synchrotree::rng::seeded;
use synchrotree::word::NcWords;
use synchrotree::{is_w_tree, Automaton, FunctionalGraph, Thread, Word};

fn random_word<R: Rng>(k: usize, rng: &mut R) -> Word {
    Word::new((0..k).map(|_| rng.gen_range(0..2)).collect()).unwrap()
}

/// Cycle length of the component of `u` under `f`, by walking `n` steps to
/// land on the cycle and then around it.
fn naive_cycle_len(f: &[usize], u: usize) -> usize {
    let mut v = u;
    for _ in 0..f.len() {
        v = f[v];
    }
    let (start, mut len) = (v, 1);
    v = f[v];
    while v != start {
        v = f[v];
        len += 1;
    }
    len
}

fn naive_height(f: &[usize], u: usize) -> usize {
    let mut seen = HashSet::new();
    let mut v = u;
    while seen.insert(v) {
        v = f[v];
    }
    seen.len() - 1
}

fn naive_map(a: &Automaton, w: &Word) -> Vec<usize> {
    (0..a.n()).map(|s| w.letters().iter().fold(s, |s, &l| a.delta()[l as usize][s])).collect()
}

proptest! {
    #[test]
    fn thread_pairs_are_distinct_and_close(seed in any::<u64>(), n in 1usize..40, k in 1usize..6, u in 0usize..40, r in 0usize..6) {
        let mut rng = seeded(seed);
        let a = Automaton::random_with(n, 2, &mut rng).unwrap();
        let w = random_word(k, &mut rng);
        let t = Thread::new(&a, u % n, r % k, &w);
        let pairs: HashSet<_> = t.entries.iter().copied().collect();
        prop_assert_eq!(pairs.len(), t.len());
        let (v, c) = t.last();
        let next = (a.step(v, w.at(c)), (c + 1) % k);
        prop_assert_eq!(next, t.entries[t.tilde()]);
        prop_assert_eq!((t.len() - t.tilde()) % k, 0);
        prop_assert!(t.len() <= n * k);
        for (i, &(_, c)) in t.entries.iter().enumerate() {
            prop_assert_eq!(c, (r % k + i) % k);
        }
    }

    #[test]
    fn trees_survive_powers(seed in any::<u64>(), n in 1usize..12, k in 1usize..4) {
        let mut rng = seeded(seed);
        let a = Automaton::random_with(n, 2, &mut rng).unwrap();
        let w = random_word(k, &mut rng);
        let tree = is_w_tree(&a, &w);
        for m in 2..=4 {
            prop_assert_eq!(is_w_tree(&a, &w.power(m).unwrap()), tree);
        }
    }
}

#[test]
fn cyc_agrees_with_cycle_detection() {
    let mut rng = seeded(11);
    for _ in 0..10_000 {
        let n = rng.gen_range(1..120);
        let k = rng.gen_range(1..6);
        let a = Automaton::random_with(n, 2, &mut rng).unwrap();
        let w = random_word(k, &mut rng);
        let f = naive_map(&a, &w);
        let g = FunctionalGraph::one_letter_view(&a, &w);
        assert_eq!(g.succ(), &f[..]);
        let lens = g.component_cycle_lengths();
        let heights = g.heights();
        for u in 0..n {
            let cyc = Thread::new(&a, u, 0, &w).cyc();
            assert_eq!(cyc, naive_cycle_len(&f, u));
            assert_eq!(cyc, lens[u]);
            assert_eq!(heights[u], naive_height(&f, u));
        }
    }
}

#[test]
fn threads_reach_cyclic_points() {
    let mut rng = seeded(12);
    for _ in 0..2_000 {
        let n = rng.gen_range(1..60);
        let k = rng.gen_range(1..5);
        let a = Automaton::random_with(n, 2, &mut rng).unwrap();
        let w = random_word(k, &mut rng);
        let g = FunctionalGraph::one_letter_view(&a, &w);
        let cyclic = g.cyclic_flags();
        let cycles = g.cycles();
        assert_eq!(cycles.iter().map(Vec::len).sum::<usize>(), g.cyclic_points().len());
        for c in &cycles {
            assert!(c.iter().all(|&v| cyclic[v]));
        }
        for u in 0..n {
            let t = Thread::new(&a, u, 0, &w);
            assert!(t.entries.iter().any(|&(v, c)| c == 0 && cyclic[v]));
        }
    }
}

fn mobius(mut m: usize) -> i64 {
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
        mu = -mu;
    }
    mu
}

#[test]
fn non_self_conjugate_counts() {
    for k in 1..=20usize {
        let count = NcWords::new(k, 2).unwrap().count() as i64;
        // primitive words: sum over d | k of mu(d) 2^(k/d)
        let primitive: i64 = (1..=k).filter(|d| k % d == 0).map(|d| mobius(d) * (1i64 << (k / d))).sum();
        assert_eq!(count, primitive, "k = {k}");
        let bound = 2f64.powi(k as i32) - k as f64 * 2f64.powf(k as f64 / 2.0);
        assert!(count as f64 >= bound, "k = {k}");
    }
}

#[test]
fn cayley_count_of_rooted_maps() {
    for n in 1..=6usize {
        let mut f = vec![0; n];
        let mut trees = 0;
        'outer: loop {
            if FunctionalGraph::from_map(f.clone()).unwrap().is_loop_rooted_tree() {
                trees += 1;
            }
            for digit in f.iter_mut() {
                *digit += 1;
                if *digit < n {
                    continue 'outer;
                }
                *digit = 0;
            }
            break;
        }
        assert_eq!(trees, n.pow(n as u32 - 1), "n = {n}");
    }
}

#[test]
fn random_transitions_are_uniform() {
    // chi-square on delta[0][0] with 9 degrees of freedom; 27.88 is the 0.1% tail
    let n = 10;
    let samples = 20_000;
    let mut counts = vec![0usize; n];
    for seed in 0..samples {
        counts[Automaton::random(n, 2, seed).unwrap().delta()[0][0]] += 1;
    }
    let expected = samples as f64 / n as f64;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    assert!(chi2 < 27.88, "chi2 = {chi2}, counts {counts:?}");
}
