#![no_main]
use libfuzzer_sys::fuzz_target;
use synchrotree::io::{automaton_from_json, automaton_to_json};

fuzz_target!(|data: &str| {
    if let Ok(a) = automaton_from_json(data) {
        let again = automaton_from_json(&automaton_to_json(&a)).expect("own output parses");
        assert_eq!(a, again);
    }
});
