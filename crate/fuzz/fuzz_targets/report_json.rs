#![no_main]

use bottlab::report::parse_report;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(report) = parse_report(text) {
        let json = report.to_json().expect("accepted report serializes");
        let again = parse_report(&json).expect("serialized report parses");
        assert_eq!(again.to_json().unwrap(), json);
    }
});
