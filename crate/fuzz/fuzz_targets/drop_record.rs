#![no_main]

use backhaul_core::sim::{format_record, parse_record, read_records};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let _ = read_records(data);
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(r) = parse_record(text, 1) {
        assert_eq!(parse_record(&format_record(&r), 1).unwrap(), r);
    }
});
