#![no_main]
use libfuzzer_sys::fuzz_target;
use synchrotree::io::{input_spec_from_json, input_spec_to_json};

fuzz_target!(|data: &str| {
    if let Ok(u) = input_spec_from_json(data, 2) {
        let again = input_spec_from_json(&input_spec_to_json(&u, 2), 2).expect("own output parses");
        assert_eq!(u.entries(), again.entries());
    }
});
