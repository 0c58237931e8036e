#![no_main]

use libfuzzer_sys::fuzz_target;
use trimer::LevelLabel;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(label) = s.parse::<LevelLabel>() {
        assert_eq!(label.to_string().parse::<LevelLabel>().ok(), Some(label));
        assert_eq!(label.partner().partner(), label);
    }
});
