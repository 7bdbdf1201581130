#![no_main]

use backhaul_core::config::parse_config;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = parse_config(text) {
        // an accepted file stays valid and its sweeps are finite
        cfg.validate().expect("parsed config revalidates");
        for axis in &cfg.sweep {
            assert!(axis.values().iter().all(|v| v.is_finite()));
        }
    }
});
