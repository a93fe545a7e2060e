#![no_main]
use libfuzzer_sys::fuzz_target;
use synchrotree::Word;

fuzz_target!(|data: &[u8]| {
    let Some((&r, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let alphabet = (r % 27) as usize;
    if let Ok(w) = Word::parse(text, alphabet) {
        assert_eq!(Word::parse(&w.to_text(alphabet), alphabet).unwrap(), w);
    }
});
