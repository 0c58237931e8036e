#![no_main]

use libfuzzer_sys::fuzz_target;
use trimer::GridRange;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(r) = s.parse::<GridRange>() {
        assert!(r.count >= 2 && r.min.is_finite() && r.max.is_finite());
        assert_eq!(r.value(0), r.min);
        assert_eq!(r.value(r.count - 1), r.max);
    }
});
