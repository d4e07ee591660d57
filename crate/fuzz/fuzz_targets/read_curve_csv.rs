#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(table) = frontal::io::read_curve_csv(data) {
        let _ = table.into_profile();
    }
});
