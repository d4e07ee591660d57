#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(e) = frontal::expr::parse(s) {
            // Printing is fully parenthesized and must parse back to the same tree.
            let again = frontal::expr::parse(&e.to_string()).expect("reparse");
            assert_eq!(again, e);
        }
    }
});
