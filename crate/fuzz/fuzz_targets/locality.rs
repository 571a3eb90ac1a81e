#![no_main]

use libfuzzer_sys::fuzz_target;
use locality::caps::Caps;
use locality::io::parse_locality;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let caps = Caps { group_order: 64, morphisms: 20_000, depth: 2 };
        let _ = parse_locality(text, &caps);
    }
});
