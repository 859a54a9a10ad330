//! Finite acyclic quivers and their free path categories.
//!
//! Vertices and edges are addressed by their position in the input order,
//! which also fixes the canonical order of every enumeration below.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::QuiverError;

pub type VertexId = usize;
pub type EdgeId = usize;

/// Unvalidated quiver data as it appears in a quiver file.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub id: String,
    pub src: String,
    pub dst: String,
}

impl QuiverSpec {
    pub fn new(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Self {
        QuiverSpec {
            vertices: vertices.iter().map(|v| v.to_string()).collect(),
            edges: edges
                .iter()
                .map(|(id, src, dst)| EdgeSpec {
                    id: id.to_string(),
                    src: src.to_string(),
                    dst: dst.to_string(),
                })
                .collect(),
        }
    }

    /// Collects every problem with the data: duplicate ids, dangling
    /// endpoints, loops and (at most one witness of) a directed cycle.
    pub fn validate(&self) -> ValidationReport {
        let mut issues = Vec::new();
        let mut index = HashMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if index.insert(v.as_str(), i).is_some() {
                issues.push(QuiverError::DuplicateVertex(v.clone()));
            }
        }
        let mut seen_edges = HashSet::new();
        let mut arcs = Vec::new();
        for e in &self.edges {
            if !seen_edges.insert(e.id.as_str()) {
                issues.push(QuiverError::DuplicateEdge(e.id.clone()));
            }
            let (src, dst) = (index.get(e.src.as_str()), index.get(e.dst.as_str()));
            for (end, name) in [(src, &e.src), (dst, &e.dst)] {
                if end.is_none() {
                    issues.push(QuiverError::UnknownVertex(name.clone()));
                }
            }
            if e.src == e.dst {
                issues.push(QuiverError::LoopEdge(e.id.clone()));
            } else if let (Some(&s), Some(&d)) = (src, dst) {
                arcs.push((s, d));
            }
        }
        if let Some(cycle) = find_cycle(self.vertices.len(), &arcs) {
            issues.push(QuiverError::DirectedCycle(
                cycle.into_iter().map(|v| self.vertices[v].clone()).collect(),
            ));
        }
        ValidationReport { issues }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub issues: Vec<QuiverError>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Depth-first search for a directed cycle. Returns the closed vertex walk
/// `[v0, v1, ..., v0]` of the first cycle found.
fn find_cycle(n: usize, arcs: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(s, d) in arcs {
        out[s].push(d);
    }
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let mut mark = vec![Mark::New; n];
    for root in 0..n {
        if mark[root] != Mark::New {
            continue;
        }
        // iterative DFS: (vertex, next child index)
        let mut stack = vec![(root, 0usize)];
        mark[root] = Mark::Active;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if let Some(&w) = out[v].get(*next) {
                *next += 1;
                match mark[w] {
                    Mark::New => {
                        mark[w] = Mark::Active;
                        stack.push((w, 0));
                    }
                    Mark::Active => {
                        let start = stack.iter().position(|&(x, _)| x == w).unwrap();
                        let mut cycle: Vec<usize> = stack[start..].iter().map(|&(x, _)| x).collect();
                        cycle.push(w);
                        return Some(cycle);
                    }
                    Mark::Done => {}
                }
            } else {
                mark[v] = Mark::Done;
                stack.pop();
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub src: VertexId,
    pub dst: VertexId,
}

/// A validated quiver: no loops, no directed cycles, unique ids.
/// Parallel edges are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, VertexId>,
    edge_index: HashMap<String, EdgeId>,
    incoming: Vec<Vec<EdgeId>>,
}

impl Quiver {
    pub fn new(spec: &QuiverSpec) -> Result<Self, QuiverError> {
        if let Some(first) = spec.validate().issues.into_iter().next() {
            return Err(first);
        }
        let vertex_index: HashMap<_, _> = spec.vertices.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let edges: Vec<Edge> = spec
            .edges
            .iter()
            .map(|e| Edge {
                name: e.id.clone(),
                src: vertex_index[&e.src],
                dst: vertex_index[&e.dst],
            })
            .collect();
        let edge_index = edges.iter().enumerate().map(|(i, e)| (e.name.clone(), i)).collect();
        let mut incoming = vec![Vec::new(); spec.vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            incoming[e.dst].push(i);
        }
        Ok(Quiver {
            vertices: spec.vertices.clone(),
            edges,
            vertex_index,
            edge_index,
            incoming,
        })
    }

    /// Shorthand for tests and examples.
    ///
    /// Panics if the quiver is invalid.
    pub fn build(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Self {
        Self::new(&QuiverSpec::new(vertices, edges)).expect("invalid quiver")
    }

    pub fn to_spec(&self) -> QuiverSpec {
        QuiverSpec {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeSpec {
                    id: e.name.clone(),
                    src: self.vertices[e.src].clone(),
                    dst: self.vertices[e.dst].clone(),
                })
                .collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        0..self.vertices.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_id(&self, name: &str) -> Result<VertexId, QuiverError> {
        self.vertex_index
            .get(name)
            .copied()
            .ok_or_else(|| QuiverError::UnknownVertex(name.to_string()))
    }

    pub fn edge_id(&self, name: &str) -> Result<EdgeId, QuiverError> {
        self.edge_index
            .get(name)
            .copied()
            .ok_or_else(|| QuiverError::UnknownEdge(name.to_string()))
    }

    /// Edges with target `v`, in edge order.
    pub fn incoming(&self, v: VertexId) -> &[EdgeId] {
        &self.incoming[v]
    }

    fn check_vertex(&self, v: VertexId) -> Result<(), QuiverError> {
        if v < self.vertices.len() {
            Ok(())
        } else {
            Err(QuiverError::UnknownVertex(format!("#{v}")))
        }
    }

    pub fn identity(&self, v: VertexId) -> PathMorphism {
        PathMorphism::identity(v)
    }

    /// The single-edge path.
    pub fn edge_morphism(&self, e: EdgeId) -> PathMorphism {
        let edge = &self.edges[e];
        PathMorphism {
            source: edge.src,
            target: edge.dst,
            edges: vec![e],
        }
    }

    /// Builds a path from edge names given in traversal order.
    pub fn path(&self, edge_names: &[&str]) -> Result<PathMorphism, QuiverError> {
        let mut edges = Vec::with_capacity(edge_names.len());
        for name in edge_names {
            edges.push(self.edge_id(name)?);
        }
        let Some(&first) = edges.first() else {
            return Err(QuiverError::UnknownEdge(String::new()));
        };
        let mut p = self.edge_morphism(first);
        for &e in &edges[1..] {
            p = self.compose(&p, &self.edge_morphism(e))?;
        }
        Ok(p)
    }

    /// `second ∘ first`: traverse `first`, then `second`.
    pub fn compose(&self, first: &PathMorphism, second: &PathMorphism) -> Result<PathMorphism, QuiverError> {
        first.then(second).ok_or_else(|| QuiverError::NonComposable {
            first: self.label(first),
            first_target: self.vertices[first.target].clone(),
            second: self.label(second),
            second_source: self.vertices[second.source].clone(),
        })
    }

    /// All paths with target `v`, including `id_v`, in canonical order.
    pub fn morphisms_into(&self, v: VertexId) -> Result<Vec<PathMorphism>, QuiverError> {
        self.check_vertex(v)?;
        let mut out = vec![PathMorphism::identity(v)];
        let mut frontier = 0;
        while frontier < out.len() {
            let p = out[frontier].clone();
            for &e in &self.incoming[p.source] {
                out.push(self.edge_morphism(e).then(&p).expect("incoming edge composes"));
            }
            frontier += 1;
        }
        out.sort();
        Ok(out)
    }

    /// All paths `u -> v`, in canonical order.
    pub fn hom(&self, u: VertexId, v: VertexId) -> Result<Vec<PathMorphism>, QuiverError> {
        self.check_vertex(u)?;
        Ok(self.morphisms_into(v)?.into_iter().filter(|p| p.source == u).collect())
    }

    /// `|Hom(-, v)|`, computed by the recurrence
    /// `1 + Σ_{e: u -> v} |Hom(-, u)|` without enumerating; saturates.
    pub fn count_morphisms_into(&self, v: VertexId) -> u128 {
        let mut memo = vec![None; self.vertices.len()];
        self.count_into(v, &mut memo)
    }

    fn count_into(&self, v: VertexId, memo: &mut Vec<Option<u128>>) -> u128 {
        if let Some(c) = memo[v] {
            return c;
        }
        let mut total: u128 = 1;
        for &e in &self.incoming[v] {
            let c = self.count_into(self.edges[e].src, memo);
            total = total.saturating_add(c);
        }
        memo[v] = Some(total);
        total
    }

    /// Connected components of the underlying undirected graph, each sorted,
    /// ordered by least vertex.
    pub fn connected_components(&self) -> Vec<Vec<VertexId>> {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.src), find(&mut parent, e.dst));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut by_root: Vec<Vec<VertexId>> = vec![Vec::new(); n];
        for v in 0..n {
            let r = find(&mut parent, v);
            by_root[r].push(v);
        }
        by_root.into_iter().filter(|c| !c.is_empty()).collect()
    }

    /// The slice category `C_Q / v`: objects are morphisms into `v`, and an
    /// arrow `f' -> f` is a factorization `f' = f ∘ g`.
    pub fn slice_objects(&self, v: VertexId) -> Result<SliceCategory, QuiverError> {
        let objects = self.morphisms_into(v)?;
        let mut arrows = Vec::new();
        for (from, fp) in objects.iter().enumerate() {
            for (to, f) in objects.iter().enumerate() {
                if let Some(via) = fp.factor_through(f) {
                    arrows.push(SliceArrow { from, to, via });
                }
            }
        }
        Ok(SliceCategory {
            vertex: v,
            objects,
            arrows,
        })
    }

    /// `id_v` or `e2∘e1`, written in composition order.
    pub fn label(&self, p: &PathMorphism) -> String {
        if p.edges.is_empty() {
            format!("id_{}", self.vertices[p.source])
        } else {
            p.edges
                .iter()
                .rev()
                .map(|&e| self.edges[e].name.as_str())
                .collect::<Vec<_>>()
                .join("∘")
        }
    }
}

/// A morphism of the path category: a composable edge sequence in traversal
/// order. The empty sequence is the identity at `source == target`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PathMorphism {
    pub source: VertexId,
    pub target: VertexId,
    pub edges: Vec<EdgeId>,
}

impl PathMorphism {
    pub fn identity(v: VertexId) -> Self {
        PathMorphism {
            source: v,
            target: v,
            edges: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.edges.is_empty()
    }

    /// `next ∘ self`, or `None` if `self` does not end where `next` starts.
    pub fn then(&self, next: &PathMorphism) -> Option<PathMorphism> {
        if self.target != next.source {
            return None;
        }
        let mut edges = Vec::with_capacity(self.edges.len() + next.edges.len());
        edges.extend_from_slice(&self.edges);
        edges.extend_from_slice(&next.edges);
        Some(PathMorphism {
            source: self.source,
            target: next.target,
            edges,
        })
    }

    /// The unique `g` with `self = f ∘ g`, if it exists.
    pub fn factor_through(&self, f: &PathMorphism) -> Option<PathMorphism> {
        if self.target != f.target || !self.edges.ends_with(&f.edges) {
            return None;
        }
        let split = self.edges.len() - f.edges.len();
        if split == 0 && self.source != f.source {
            return None;
        }
        Some(PathMorphism {
            source: self.source,
            target: f.source,
            edges: self.edges[..split].to_vec(),
        })
    }
}

/// Canonical order: by length, then lexicographically by edge ids, then by
/// endpoints (only identities can tie on the first two keys).
impl Ord for PathMorphism {
    fn cmp(&self, other: &Self) -> Ordering {
        self.edges
            .len()
            .cmp(&other.edges.len())
            .then_with(|| self.edges.cmp(&other.edges))
            .then_with(|| self.source.cmp(&other.source))
            .then_with(|| self.target.cmp(&other.target))
    }
}

impl PartialOrd for PathMorphism {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceArrow {
    /// Index of `f'` in `objects`.
    pub from: usize,
    /// Index of `f` in `objects`.
    pub to: usize,
    /// `g` with `f ∘ g = f'`.
    pub via: PathMorphism,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceCategory {
    pub vertex: VertexId,
    pub objects: Vec<PathMorphism>,
    pub arrows: Vec<SliceArrow>,
}

impl SliceCategory {
    /// Objects with exactly one arrow from every object.
    pub fn terminal_objects(&self) -> Vec<usize> {
        (0..self.objects.len())
            .filter(|&t| {
                (0..self.objects.len()).all(|s| self.arrows.iter().filter(|a| a.from == s && a.to == t).count() == 1)
            })
            .collect()
    }
}
