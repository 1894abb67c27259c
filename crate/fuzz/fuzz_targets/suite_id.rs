#![no_main]

use bottlab::verify::SuiteId;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(id) = text.parse::<SuiteId>() {
        assert_eq!(id.name(), text);
    }
});
