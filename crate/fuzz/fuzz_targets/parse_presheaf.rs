#![no_main]

use libfuzzer_sys::fuzz_target;
use quiver_sheaves::io::{presheaf_to_json, FunctorFile};
use quiver_sheaves::quiver::Quiver;

fuzz_target!(|text: &str| {
    let q = Quiver::build(&["a", "b", "c"], &[("e", "a", "b"), ("f", "a", "b"), ("g", "b", "c")]);
    let Ok(file) = FunctorFile::parse(&q, text) else { return };
    if let Ok(p) = file.into_presheaf(&q) {
        let back = FunctorFile::parse(&q, &presheaf_to_json(&p))
            .unwrap()
            .into_presheaf(&q)
            .unwrap();
        assert_eq!(back, p);
    }
});
