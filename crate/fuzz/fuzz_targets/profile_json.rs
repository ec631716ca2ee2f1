#![no_main]

use libfuzzer_sys::fuzz_target;
use realbez::bounds::structural_bound;
use realbez::formats::parse_profile_json;
use num_rational::BigRational;
use num_traits::One;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(profile) = parse_profile_json(text) {
        // accepted profiles must be safe to evaluate (keep the tuple
        // enumeration small enough to terminate quickly)
        if profile.k <= 6 && profile.ell() <= 4 && profile.degs.iter().all(|&d| d <= 64) {
            let _ = structural_bound(&profile, &BigRational::one());
        }
    }
});
