#![no_main]

use libfuzzer_sys::fuzz_target;
use locality::caps::Caps;
use locality::io::parse_instance;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(inst) = parse_instance(text) else { return };
    let caps = Caps { group_order: 64, morphisms: 20_000, depth: 2 };
    let _ = inst.materialize(&inst.caps(&caps));
});
