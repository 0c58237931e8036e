#![no_main]

use libfuzzer_sys::fuzz_target;
use trimer::export::{scan_from_json, scan_to_json};

// Accepted documents must survive a write/read cycle unchanged.
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(scan) = scan_from_json(s) {
        let text = scan_to_json(&scan).expect("valid scan serializes");
        assert_eq!(scan_from_json(&text).expect("round trip"), scan);
    }
});
