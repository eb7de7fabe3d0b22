#![no_main]

use lexnet::formats::{curve_to_string, parse_curve};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(curve) = parse_curve(text) {
        assert!(curve.samples.windows(2).all(|w| w[0].n < w[1].n));
        let again = parse_curve(&curve_to_string(&curve)).expect("round trip");
        assert_eq!(again, curve);
    }
});
