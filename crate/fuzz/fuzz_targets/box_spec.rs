#![no_main]

use libfuzzer_sys::fuzz_target;
use realbez::formats::parse_box_spec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if text.len() > 1 << 12 {
        return;
    }
    if let Ok(bx) = parse_box_spec(text) {
        for iv in &bx {
            assert!(iv.lo() <= iv.hi(), "accepted interval out of order");
        }
    }
});
