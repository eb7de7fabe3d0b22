#![no_main]

use lexnet::growthcurve::{CheckpointSchedule, ShiftSchedule};
use lexnet::tokenizer::parse_mark_list;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cp) = text.parse::<CheckpointSchedule>() {
        assert!(cp.points()[0] >= 2);
        assert!(cp.points().windows(2).all(|w| w[0] < w[1]));
    }
    if let Ok(shifts) = text.parse::<ShiftSchedule>() {
        let again: ShiftSchedule = shifts.to_string().parse().expect("display round trip");
        assert_eq!(again, shifts);
        for n in [1usize, 100, 10_000, 1_000_000] {
            assert!(shifts.delta_tau(n) >= 1);
        }
    }
    let _ = parse_mark_list(text);
});
