#![no_main]

use libfuzzer_sys::fuzz_target;
use realbez::formats::parse_tuple_list;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(tuple) = parse_tuple_list(text) {
        assert!(!tuple.is_empty(), "accepted an empty tuple");
    }
});
