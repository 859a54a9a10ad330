//! JSON file formats.
//!
//! A quiver file is `{"vertices": [...], "edges": [{"id", "src", "dst"}]}`.
//! A presheaf or representation file is
//! `{"kind": "presheaf" | "representation", "dims": {vertex: n}, "maps": {edge: matrix}}`
//! with matrices as arrays of rows of rational strings. A presheaf matrix
//! for `e: u -> v` has `dims[u]` rows and `dims[v]` columns; a
//! representation matrix is the other way round.

use std::collections::BTreeMap;
use std::fmt;

use serde::Deserialize;
use serde_json::{Map, Value};

use crate::error::ParseError;
use crate::linalg::{parse_scalar, LinearMap, Matrix};
use crate::presheaf::{Presheaf, Representation};
use crate::quiver::{Quiver, QuiverSpec};

/// Parses quiver data without validating it.
pub fn parse_quiver_spec(text: &str) -> Result<QuiverSpec, ParseError> {
    Ok(serde_json::from_str(text)?)
}

pub fn parse_quiver(text: &str) -> Result<Quiver, ParseError> {
    Ok(Quiver::new(&parse_quiver_spec(text)?)?)
}

pub fn quiver_to_json(q: &Quiver) -> String {
    serde_json::to_string_pretty(&q.to_spec()).expect("plain data serializes")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FileKind {
    Presheaf,
    Representation,
}

impl fmt::Display for FileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FileKind::Presheaf => "presheaf",
            FileKind::Representation => "representation",
        })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFunctorFile {
    kind: String,
    dims: BTreeMap<String, usize>,
    maps: BTreeMap<String, Vec<Vec<String>>>,
}

/// The contents of a presheaf or representation file, checked against a
/// quiver. Dimensions and maps are in quiver order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorFile {
    pub kind: FileKind,
    pub dims: Vec<usize>,
    pub maps: Vec<LinearMap>,
}

impl FunctorFile {
    pub fn parse(q: &Quiver, text: &str) -> Result<Self, ParseError> {
        let raw: RawFunctorFile = serde_json::from_str(text)?;
        let kind = match raw.kind.as_str() {
            "presheaf" => FileKind::Presheaf,
            "representation" => FileKind::Representation,
            other => {
                return Err(ParseError::KindMismatch {
                    expected: "presheaf or representation".into(),
                    found: other.into(),
                })
            }
        };
        if let Some(name) = raw.dims.keys().find(|n| q.vertex_id(n).is_err()) {
            return Err(ParseError::ExtraDimension(name.clone()));
        }
        if let Some(name) = raw.maps.keys().find(|n| q.edge_id(n).is_err()) {
            return Err(ParseError::ExtraMap(name.clone()));
        }
        let dims = q
            .vertex_names()
            .iter()
            .map(|v| {
                raw.dims
                    .get(v)
                    .copied()
                    .ok_or_else(|| ParseError::MissingDimension(v.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;

        let mut maps = Vec::with_capacity(q.edge_count());
        for edge in q.edges() {
            let rows = raw
                .maps
                .get(&edge.name)
                .ok_or_else(|| ParseError::MissingMap(edge.name.clone()))?;
            let (r, c) = match kind {
                FileKind::Presheaf => (dims[edge.src], dims[edge.dst]),
                FileKind::Representation => (dims[edge.dst], dims[edge.src]),
            };
            maps.push(LinearMap::new(parse_matrix(&edge.name, rows, r, c)?));
        }
        Ok(FunctorFile { kind, dims, maps })
    }

    fn expect(&self, kind: FileKind) -> Result<(), ParseError> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(ParseError::KindMismatch {
                expected: kind.to_string(),
                found: self.kind.to_string(),
            })
        }
    }

    pub fn into_presheaf(self, q: &Quiver) -> Result<Presheaf<'_>, ParseError> {
        self.expect(FileKind::Presheaf)?;
        Ok(Presheaf::new(q, self.dims, self.maps)?)
    }

    pub fn into_representation(self, q: &Quiver) -> Result<Representation<'_>, ParseError> {
        self.expect(FileKind::Representation)?;
        Ok(Representation::new(q, self.dims, self.maps)?)
    }
}

fn parse_matrix(edge: &str, rows: &[Vec<String>], r: usize, c: usize) -> Result<Matrix, ParseError> {
    let shape_error = |reason: String| ParseError::Matrix {
        edge: edge.to_string(),
        reason,
    };
    if rows.len() != r {
        return Err(shape_error(format!("expected {r} rows, got {}", rows.len())));
    }
    let mut parsed = Vec::with_capacity(r);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != c {
            return Err(shape_error(format!("row {i} has {} entries, expected {c}", row.len())));
        }
        parsed.push(row.iter().map(|x| parse_scalar(x)).collect::<Result<Vec<_>, _>>()?);
    }
    Ok(Matrix::from_rows(parsed, c).expect("row lengths checked"))
}

fn functor_json(q: &Quiver, kind: FileKind, dims: &[usize], maps: &[LinearMap]) -> String {
    let mut d = Map::new();
    for (v, &n) in q.vertex_names().iter().zip(dims) {
        d.insert(v.clone(), Value::from(n));
    }
    let mut m = Map::new();
    for (edge, map) in q.edges().iter().zip(maps) {
        m.insert(
            edge.name.clone(),
            serde_json::to_value(map.matrix()).expect("strings serialize"),
        );
    }
    let mut root = Map::new();
    root.insert("kind".into(), Value::from(kind.to_string()));
    root.insert("dims".into(), Value::Object(d));
    root.insert("maps".into(), Value::Object(m));
    serde_json::to_string_pretty(&Value::Object(root)).expect("plain data serializes")
}

pub fn presheaf_to_json(f: &Presheaf) -> String {
    functor_json(f.quiver(), FileKind::Presheaf, f.dims(), f.edge_maps())
}

pub fn representation_to_json(v: &Representation) -> String {
    functor_json(v.quiver(), FileKind::Representation, v.dims(), v.edge_maps())
}
