#![no_main]

use std::path::Path;

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = lexnet::corpus::parse_manifest(text, Path::new("/base")) {
        let mut ids = std::collections::HashSet::new();
        for e in &m.entries {
            assert!(ids.insert(e.id.clone()), "duplicate id accepted");
            assert!(e.path.is_absolute());
        }
    }
});
