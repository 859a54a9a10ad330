//! Machine-readable reports. Vertices, edges and morphisms appear by name,
//! matrices and vectors as rational strings, and every list is in canonical
//! order, so equal inputs give byte-identical output.

use serde_json::{json, Value};

use crate::error::QuiverError;
use crate::functors::{AdjunctionReport, LiteralAdjoint, TransportReport, Walk};
use crate::linalg::{vector_strings, LinearMap};
use crate::presheaf::Presheaf;
use crate::quiver::{Quiver, QuiverSpec, ValidationReport};
use crate::sheaf::{CrossValidation, Diagnosis, SectionFamily, SheafVerdict};
use crate::sieve::{AxiomReport, AxiomResult, Counterexample, Sieve, TopologySpec};

fn matrix(m: &LinearMap) -> Value {
    serde_json::to_value(m.matrix()).expect("strings serialize")
}

fn sieve(q: &Quiver, s: &Sieve) -> Value {
    json!(s.labels(q))
}

pub fn validation_json(spec: &QuiverSpec, report: &ValidationReport) -> Value {
    let issues: Vec<Value> = report
        .issues
        .iter()
        .map(|issue| {
            let mut v = json!({ "message": issue.to_string() });
            if let QuiverError::DirectedCycle(witness) = issue {
                v["witness"] = json!(witness);
            }
            v
        })
        .collect();
    json!({
        "valid": report.is_valid(),
        "vertices": spec.vertices.len(),
        "edges": spec.edges.len(),
        "issues": issues,
    })
}

fn counterexample_json(q: &Quiver, c: &Counterexample) -> Value {
    match c {
        Counterexample::MaximalNotCovering { vertex } => json!({
            "kind": "maximal-not-covering",
            "vertex": q.vertex_name(*vertex),
        }),
        Counterexample::PullbackNotCovering {
            sieve: s,
            morphism,
            pullback,
        } => json!({
            "kind": "pullback-not-covering",
            "vertex": q.vertex_name(s.codomain()),
            "sieve": sieve(q, s),
            "morphism": q.label(morphism),
            "pullback": sieve(q, pullback),
        }),
        Counterexample::LocalNotCovering { covering, sieve: s } => json!({
            "kind": "local-not-covering",
            "vertex": q.vertex_name(s.codomain()),
            "covering": sieve(q, covering),
            "sieve": sieve(q, s),
        }),
    }
}

fn axiom_json(q: &Quiver, r: &AxiomResult) -> Value {
    json!({
        "holds": r.holds,
        "counterexample": r.counterexample.as_ref().map(|c| counterexample_json(q, c)),
    })
}

pub fn axiom_report_json(q: &Quiver, r: &AxiomReport) -> Value {
    json!({
        "topology": r.topology.to_string(),
        "all_hold": r.all_hold(),
        "gt1": axiom_json(q, &r.gt1),
        "gt2": axiom_json(q, &r.gt2),
        "gt3": axiom_json(q, &r.gt3),
    })
}

fn diagnosis_name(d: &Diagnosis) -> &'static str {
    match d {
        Diagnosis::EpsilonNotInjective { .. } => "epsilon-not-injective",
        Diagnosis::CompatibleFamilyNotGlued { .. } => "compatible-family-not-glued",
    }
}

fn witness_json(f: &Presheaf, s: &Sieve, d: &Diagnosis) -> Value {
    let q = f.quiver();
    match d {
        Diagnosis::EpsilonNotInjective { kernel_vector } => json!({
            "kernel_vector": vector_strings(kernel_vector),
        }),
        Diagnosis::CompatibleFamilyNotGlued { family } => {
            let fam = SectionFamily::from_flat(f, s.clone(), family).expect("family fits its sieve");
            let members: Vec<Value> = s
                .members()
                .zip(&fam.sections)
                .map(|(m, sec)| json!({ "member": q.label(m), "section": vector_strings(sec) }))
                .collect();
            json!({ "family": members })
        }
    }
}

pub fn verdict_json(f: &Presheaf, topology: &TopologySpec, v: &SheafVerdict) -> Value {
    let q = f.quiver();
    let mut out = json!({
        "topology": topology.to_string(),
        "holds": v.holds,
        "vertex": v.vertex.map(|x| q.vertex_name(x)),
        "sieve": v.failing_sieve.as_ref().map(|s| sieve(q, s)),
        "diagnosis": v.diagnosis.as_ref().map(diagnosis_name),
    });
    if let (Some(s), Some(d)) = (&v.failing_sieve, &v.diagnosis) {
        out["witness"] = witness_json(f, s, d);
    }
    out
}

pub fn cross_validation_json(f: &Presheaf, r: &CrossValidation) -> Value {
    json!({
        "criterion": r.criterion,
        "definitional": verdict_json(f, &TopologySpec::Discrete { include_empty: false }, &r.definitional),
        "agree": r.agree,
        "separating_sieve": r.separating_sieve.as_ref().map(|s| sieve(f.quiver(), s)),
    })
}

pub fn adjunction_json(r: &AdjunctionReport) -> Value {
    json!({
        "construction": "component",
        "left_dim": r.left_dim,
        "right_dim": r.right_dim,
        "match": r.matches,
        "unit_bijection": r.unit_bijection,
    })
}

pub fn literal_adjoint_json(q: &Quiver, rs: &[LiteralAdjoint]) -> Value {
    let vertices: Vec<Value> = rs
        .iter()
        .map(|r| {
            json!({
                "vertex": q.vertex_name(r.vertex),
                "dim": r.dim,
                "comparison": matrix(&r.comparison),
                "comparison_is_iso": r.comparison_is_iso,
            })
        })
        .collect();
    json!({ "construction": "literal", "vertices": vertices })
}

fn walk_json(q: &Quiver, w: &Walk) -> Value {
    json!({ "start": q.vertex_name(w.start), "steps": w.labels(q) })
}

pub fn monodromy_json(q: &Quiver, r: &TransportReport) -> Value {
    let transports: Vec<Value> = r
        .transports
        .iter()
        .map(|t| {
            json!({
                "vertex": q.vertex_name(t.vertex),
                "walk": walk_json(q, &t.walk),
                "map": matrix(&t.map),
            })
        })
        .collect();
    let cycles: Vec<Value> = r
        .cycles
        .iter()
        .map(|c| {
            json!({
                "edge": q.edge(c.edge).name,
                "walk": walk_json(q, &c.walk),
                "monodromy": matrix(&c.monodromy),
                "is_identity": c.is_identity,
            })
        })
        .collect();
    json!({
        "roots": r.roots.iter().map(|&v| q.vertex_name(v)).collect::<Vec<_>>(),
        "tree_edges": r.tree_edges.iter().map(|&e| q.edge(e).name.as_str()).collect::<Vec<_>>(),
        "transports": transports,
        "cycles": cycles,
        "all_identity": r.all_identity,
    })
}
