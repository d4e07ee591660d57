#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(g) = s.parse::<frontal::config::GridSpec>() {
            assert!(g.min < g.max);
            assert!(g.count >= frontal::config::MIN_GRID_COUNT);
            let _ = g.grid();
        }
    }
});
