#![no_main]

use libfuzzer_sys::{fuzz_target, Corpus};
use qgchi::resonance::{counting_fluctuation, flag_gaps, load_resonances, ResonanceDataset};

fuzz_target!(|data: &[u8]| -> Corpus {
    let Ok(text) = std::str::from_utf8(data) else {
        return Corpus::Reject;
    };
    let Ok(dataset) = ResonanceDataset::from_csv(text) else {
        return Corpus::Keep;
    };
    assert_eq!(
        ResonanceDataset::from_csv(&dataset.to_csv()).ok().as_ref(),
        Some(&dataset)
    );
    if let Ok(spectrum) = load_resonances(&dataset) {
        if let Ok(fluctuation) = counting_fluctuation(&spectrum) {
            let _ = flag_gaps(&fluctuation.series);
        }
    }
    Corpus::Keep
});
