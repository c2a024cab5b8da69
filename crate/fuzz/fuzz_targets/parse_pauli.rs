#![no_main]

use cfp_core::PauliString;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = PauliString::parse(text, None) {
        let again: PauliString = p.to_string().parse().expect("formatted string parses");
        assert_eq!(again, p);
        assert!(p.commutes_with(&p).unwrap());
    }
});
