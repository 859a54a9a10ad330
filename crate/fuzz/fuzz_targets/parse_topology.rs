#![no_main]

use libfuzzer_sys::fuzz_target;
use quiver_sheaves::sieve::TopologySpec;

fuzz_target!(|text: &str| {
    if let Ok(t) = text.parse::<TopologySpec>() {
        assert_eq!(t.to_string().parse::<TopologySpec>().unwrap(), t);
    }
});
