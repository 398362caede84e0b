#![no_main]

use libfuzzer_sys::{fuzz_target, Corpus};
use qgchi::euler::{detect_plateau, ChiCurve};

fuzz_target!(|data: &[u8]| -> Corpus {
    let Ok(text) = std::str::from_utf8(data) else {
        return Corpus::Reject;
    };
    let Ok(curve) = ChiCurve::from_csv(text) else {
        return Corpus::Keep;
    };
    assert_eq!(ChiCurve::from_csv(&curve.to_csv()).ok().as_ref(), Some(&curve));
    let _ = detect_plateau(&curve);
    Corpus::Keep
});
