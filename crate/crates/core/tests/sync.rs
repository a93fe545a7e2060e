use rand::Rng;
use synchrotree::rng::seeded;
use synchrotree::sync::{
    cerny_automaton, exact_certificate, find_tree_word, greedy_fallback, is_synchronizable, is_synchronizing,
    shortest_sync_word_exact, tree_sync_word, tree_word_length, SearchMode,
};
use synchrotree::{is_w_tree, Automaton, FunctionalGraph, Word};

#[test]
fn oracles_agree_on_small_automata() {
    let mut rng = seeded(41);
    let mut synchronizable = 0;
    for _ in 0..500 {
        let n = rng.gen_range(1..=10);
        let r = rng.gen_range(2..=3);
        let a = Automaton::random_with(n, r, &mut rng).unwrap();
        let exact = shortest_sync_word_exact(&a).unwrap();
        assert_eq!(is_synchronizable(&a), exact.is_some());
        let greedy = greedy_fallback(&a).unwrap();
        assert_eq!(greedy.is_some(), exact.is_some());
        if let (Some(e), Some(g)) = (exact, greedy) {
            synchronizable += 1;
            assert!(g.verify(&a));
            assert!(g.len() >= e.len());
            assert!(g.len() <= n.pow(3));
            if let Ok(w) = Word::new(e) {
                assert!(is_synchronizing(&a, &w).is_some());
            }
        }
    }
    assert!(synchronizable > 100);
}

#[test]
fn cerny_automata_meet_the_bound() {
    for n in 2..=7 {
        let a = cerny_automaton(n).unwrap();
        let c = exact_certificate(&a).unwrap().unwrap();
        assert_eq!(c.len(), (n - 1) * (n - 1), "n = {n}");
        assert!(c.verified);
    }
}

#[test]
fn tree_certificates_are_powers_of_tree_words() {
    let mut rng = seeded(42);
    let mut found = 0;
    for _ in 0..60 {
        let n = rng.gen_range(16..200);
        let a = Automaton::random_with(n, 2, &mut rng).unwrap();
        let k = tree_word_length(n, 0.2);
        let Some(c) = tree_sync_word(&a, 0.2, usize::MAX, SearchMode::Exhaustive).unwrap() else {
            continue;
        };
        found += 1;
        let w = c.tree_word.clone().unwrap();
        let h = c.height.unwrap();
        assert_eq!(w.len(), k);
        assert!(is_w_tree(&a, &w) && !w.is_self_conjugate());
        assert_eq!(FunctionalGraph::one_letter_view(&a, &w).height(), h);
        assert_eq!(c.len(), k * h);
        assert!(c.verify(&a));
        // no lexicographically smaller word of the same length is a tree word
        let first = find_tree_word(&a, k, usize::MAX, SearchMode::Exhaustive, false).unwrap().unwrap();
        assert_eq!(first.word, w);
        // w^(H-1) does not synchronize yet
        if h > 1 {
            assert!(is_synchronizing(&a, &w.power(h - 1).unwrap()).is_none());
        }
    }
    assert!(found >= 40, "{found}");
}

#[test]
fn sampled_search_is_seeded() {
    let mut rng = seeded(43);
    for _ in 0..30 {
        let a = Automaton::random_with(100, 2, &mut rng).unwrap();
        let mode = SearchMode::Sampled { seed: 5 };
        let x = find_tree_word(&a, 9, 200, mode, false).unwrap();
        assert_eq!(x, find_tree_word(&a, 9, 200, mode, false).unwrap());
        if let Some(t) = x {
            assert!(is_w_tree(&a, &t.word));
        }
    }
}
