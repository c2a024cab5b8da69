#![no_main]

use cfp_core::input::parse_operator_list;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    match parse_operator_list(text) {
        Ok(ops) => {
            let n = ops[0].n();
            assert!(ops.iter().all(|p| p.n() == n));
        }
        Err(e) => {
            assert!(e.line >= 1 && e.column >= 1);
            assert!(e.line <= text.lines().count().max(1));
        }
    }
});
