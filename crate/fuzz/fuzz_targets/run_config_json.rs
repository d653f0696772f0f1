#![no_main]

use libfuzzer_sys::fuzz_target;
use wavecert::config::RunConfig;

fuzz_target!(|data: &[u8]| {
    if let Ok(cfg) = serde_json::from_slice::<RunConfig>(data) {
        let text = serde_json::to_string(&cfg).expect("serialize");
        let back: RunConfig = serde_json::from_str(&text).expect("reparse");
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
});
