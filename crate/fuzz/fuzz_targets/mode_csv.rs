#![no_main]

use libfuzzer_sys::fuzz_target;
use wavecert::field::{parse_mode_csv, RadialModeField};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(table) = parse_mode_csv(text) {
        if let Ok(field) = RadialModeField::from_table(&table) {
            // round trip must reparse
            parse_mode_csv(&field.to_csv(false)).expect("exported table reparses");
        }
    }
});
