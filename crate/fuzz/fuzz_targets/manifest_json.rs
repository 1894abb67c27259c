#![no_main]

use bottlab::manifest::parse_manifest;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(manifest) = parse_manifest(text) {
        let json = manifest.to_json().expect("accepted manifest serializes");
        assert_eq!(parse_manifest(&json).expect("serialized manifest parses"), manifest);
    }
});
