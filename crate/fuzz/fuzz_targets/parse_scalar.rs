#![no_main]

use libfuzzer_sys::fuzz_target;
use quiver_sheaves::linalg::scalar::parse_scalar;

fuzz_target!(|text: &str| {
    if let Ok(x) = parse_scalar(text) {
        // the printed form parses back to the same value
        assert_eq!(parse_scalar(&x.to_string()).unwrap(), x);
    }
});
