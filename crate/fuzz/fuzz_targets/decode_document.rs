#![no_main]

use std::path::Path;

use lexnet::corpus::{decode_document, normalize_text, Language};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    match decode_document(Path::new("doc.txt"), data, Language::English, false) {
        Ok(doc) => {
            assert!(!doc.raw.trim().is_empty());
            assert!(!doc.raw.contains('\r'));
            assert_eq!(normalize_text(&doc.raw), doc.raw);
        }
        Err(lexnet::Error::Encoding { offset, .. }) => assert!(std::str::from_utf8(&data[..offset]).is_ok()),
        Err(_) => {}
    }
});
