#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(inv) = lexnet::tokenizer::parse_inventory(text) {
        assert!(inv.terminators().is_disjoint(inv.other_marks()));
        assert!(inv.terminators().is_disjoint(inv.excluded()));
        assert!(inv.other_marks().is_disjoint(inv.excluded()));
    }
});
