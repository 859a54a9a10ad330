#![no_main]

use libfuzzer_sys::fuzz_target;
use quiver_sheaves::io::{parse_quiver, quiver_to_json};

fuzz_target!(|text: &str| {
    if let Ok(q) = parse_quiver(text) {
        let again = parse_quiver(&quiver_to_json(&q)).unwrap();
        assert_eq!(again.vertex_count(), q.vertex_count());
        assert_eq!(again.edges().len(), q.edges().len());
    }
});
