#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() < 9 {
        return;
    }
    let (head, rest) = data.split_at(9);
    let t = f64::from_le_bytes(head[..8].try_into().unwrap());
    let order = usize::from(head[8] % 6);
    if let Ok(s) = std::str::from_utf8(rest) {
        if let Ok(e) = frontal::expr::parse(s) {
            let _ = frontal::expr::eval(&e, t);
            let _ = frontal::expr::eval_jet(&e, t, order);
        }
    }
});
