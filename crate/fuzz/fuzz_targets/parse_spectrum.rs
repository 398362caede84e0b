#![no_main]

use libfuzzer_sys::{fuzz_target, Corpus};
use qgchi::Spectrum;

fuzz_target!(|data: &[u8]| -> Corpus {
    let Ok(text) = std::str::from_utf8(data) else {
        return Corpus::Reject;
    };
    let Ok(spectrum) = Spectrum::from_csv(text) else {
        return Corpus::Keep;
    };
    // rows are rounded on output, so a second pass must be a fixed point
    let first = spectrum.to_csv();
    let reparsed = Spectrum::from_csv(&first).expect("serialized spectrum parses");
    assert_eq!(reparsed.len(), spectrum.len());
    assert_eq!(reparsed.provenance(), spectrum.provenance());
    assert_eq!(reparsed.to_csv(), first);
    Corpus::Keep
});
