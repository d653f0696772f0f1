#![no_main]

use libfuzzer_sys::fuzz_target;
use wavecert::config::{parse_config, RunConfig};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(doc) = parse_config(text) {
        let mut cfg = RunConfig::default();
        let _ = cfg.apply(&doc);
    }
    let _ = RunConfig::from_text(text);
});
