//! Replays the checked-in fuzz seeds through the round trips the fuzz
//! targets assert, so the seeds stay meaningful on a stable toolchain.

use std::fs;
use std::path::PathBuf;

use quiver_sheaves::io::{parse_quiver, presheaf_to_json, quiver_to_json, FunctorFile};
use quiver_sheaves::linalg::scalar::parse_scalar;
use quiver_sheaves::quiver::Quiver;
use quiver_sheaves::sieve::TopologySpec;

fn seeds(target: &str) -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut paths: Vec<_> = fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    assert!(!paths.is_empty(), "no seeds in {}", dir.display());
    paths.iter().map(|p| fs::read_to_string(p).unwrap()).collect()
}

#[test]
fn scalar_seeds() {
    let parsed: Vec<_> = seeds("parse_scalar")
        .iter()
        .filter_map(|s| parse_scalar(s).ok())
        .collect();
    assert!(!parsed.is_empty());
    for x in parsed {
        assert_eq!(parse_scalar(&x.to_string()).unwrap(), x);
    }
}

#[test]
fn topology_seeds() {
    let mut accepted = 0;
    for s in seeds("parse_topology") {
        if let Ok(t) = s.parse::<TopologySpec>() {
            assert_eq!(t.to_string().parse::<TopologySpec>().unwrap(), t);
            accepted += 1;
        }
    }
    assert_eq!(accepted, 5);
}

#[test]
fn quiver_seeds() {
    let mut accepted = 0;
    for s in seeds("parse_quiver") {
        if let Ok(q) = parse_quiver(&s) {
            let again = parse_quiver(&quiver_to_json(&q)).unwrap();
            assert_eq!(again.vertex_count(), q.vertex_count());
            assert_eq!(again.edges().len(), q.edges().len());
            accepted += 1;
        }
    }
    assert_eq!(accepted, 2);
}

#[test]
fn presheaf_seeds() {
    let q = Quiver::build(&["a", "b", "c"], &[("e", "a", "b"), ("f", "a", "b"), ("g", "b", "c")]);
    let mut accepted = 0;
    for s in seeds("parse_presheaf") {
        let Ok(file) = FunctorFile::parse(&q, &s) else { continue };
        if let Ok(p) = file.into_presheaf(&q) {
            let back = FunctorFile::parse(&q, &presheaf_to_json(&p))
                .unwrap()
                .into_presheaf(&q)
                .unwrap();
            assert_eq!(back, p);
            accepted += 1;
        }
    }
    assert_eq!(accepted, 2);
}
