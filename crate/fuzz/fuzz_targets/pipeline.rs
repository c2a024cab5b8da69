#![no_main]

use cfp_core::input::parse_operator_list;
use cfp_core::oracle::cross_check;
use cfp_core::{check_commuting_set, Analysis};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(ops) = parse_operator_list(text) else { return };
    if ops[0].n() > 6 || ops.len() > 8 || check_commuting_set(&ops).is_err() {
        return;
    }
    let Ok(analysis) = Analysis::run(&ops) else { return };
    let report = cross_check(&analysis, 0, 0).expect("within oracle limits");
    assert!(report.passed(), "{:?}", report.checks);
});
