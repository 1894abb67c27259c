#![no_main]

use bottlab::clifford::Signature;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(sig) = text.parse::<Signature>() {
        assert_eq!(sig.to_string().parse::<Signature>().unwrap(), sig);
    }
});
