#![no_main]

use backhaul_core::config::parse_sweep_axis;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(axis) = parse_sweep_axis(text, 1) {
        let v = axis.values();
        assert_eq!(v.len(), axis.steps);
        assert!(v.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(parse_sweep_axis(&axis.to_string(), 1).unwrap(), axis);
    }
});
