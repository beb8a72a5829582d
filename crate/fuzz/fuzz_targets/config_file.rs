#![no_main]

use libfuzzer_sys::fuzz_target;
use ncvem_cli::{parse_config_str, RunConfig};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(settings) = parse_config_str(text) else { return };
    if let Ok(config) = RunConfig::resolve(settings, None) {
        assert!((2..=5).contains(&config.order));
        assert!((0.0..0.5).contains(&config.poisson));
        assert!(config.rigidity > 0.0);
    }
});
