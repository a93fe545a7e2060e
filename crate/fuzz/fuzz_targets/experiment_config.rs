#![no_main]
use libfuzzer_sys::fuzz_target;
use synchrotree_lab::ExperimentConfig;

fuzz_target!(|data: &str| {
    if let Ok(cfg) = ExperimentConfig::from_json(data) {
        let _ = cfg.parsed_words();
        let _ = cfg.to_json();
    }
});
