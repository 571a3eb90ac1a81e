#![no_main]

use libfuzzer_sys::fuzz_target;
use locality::io::parse_report;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(r) = parse_report(text) {
            // Whatever parses must serialize and parse back to itself.
            let again = parse_report(&r.to_json()).expect("report round trip");
            assert_eq!(again.to_json(), r.to_json());
        }
    }
});
