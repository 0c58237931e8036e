#![no_main]

use libfuzzer_sys::fuzz_target;
use trimer::units::parse_compound_config;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(c) = parse_compound_config(s) {
        let scale = c.scale().expect("validated config has a scale");
        assert!(scale.j_kelvin > 0.0);
        let _ = c.model_params();
    }
});
