#![no_main]

use libfuzzer_sys::fuzz_target;
use sltrace::config::ExperimentConfig;

fuzz_target!(|data: &str| {
    if let Ok(cfg) = ExperimentConfig::parse(data) {
        let again = ExperimentConfig::parse(&cfg.to_text()).expect("to_text output must parse");
        assert_eq!(again, cfg);
        let _ = cfg.place_set();
    }
});
