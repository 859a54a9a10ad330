//! Discrete sheaves inside presheaves: the inclusion, two candidate left
//! adjoints built from finite colimits, and transport along undirected walks.

use std::collections::VecDeque;

use crate::error::FunctorError;
use crate::linalg::{DiagramOfSpaces, LinearMap, Matrix};
use crate::presheaf::{nat_trans_space, NatTrans, Presheaf};
use crate::quiver::{EdgeId, Quiver, VertexId};
use crate::sheaf::discrete_criterion_failure;

fn require_discrete(f: &Presheaf) -> Result<(), FunctorError> {
    match discrete_criterion_failure(f) {
        None => Ok(()),
        Some(e) => Err(FunctorError::NotDiscreteSheaf {
            edge: f.quiver().edge(e).name.clone(),
        }),
    }
}

/// The inclusion of discrete sheaves into presheaves. It does not change
/// the data; it only refuses inputs outside its domain.
pub fn include_discrete<'q>(f: &Presheaf<'q>) -> Result<Presheaf<'q>, FunctorError> {
    require_discrete(f)?;
    Ok(f.clone())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullyFaithfulEvidence {
    pub dim_disc: usize,
    pub dim_coarse: usize,
    pub equal: bool,
}

/// Hom-spaces between two discrete sheaves, computed once among discrete
/// sheaves and once after inclusion.
pub fn fully_faithful_evidence(f: &Presheaf, g: &Presheaf) -> Result<FullyFaithfulEvidence, FunctorError> {
    require_discrete(f)?;
    require_discrete(g)?;
    let disc = nat_trans_space(f, g)?;
    let coarse = nat_trans_space(&include_discrete(f)?, &include_discrete(g)?)?;
    Ok(FullyFaithfulEvidence {
        dim_disc: disc.dim,
        dim_coarse: coarse.dim,
        equal: disc == coarse,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiteralAdjoint {
    pub vertex: VertexId,
    pub dim: usize,
    /// The cocone leg at the node `id_v`, a map `F(v) -> colim`.
    pub comparison: LinearMap,
    pub comparison_is_iso: bool,
}

/// The colimit of `F ∘ dom` over the morphisms into `v`.
///
/// There is one node per `f: u -> v` carrying `F(u)`, and for every
/// factorization `f' = f ∘ g` an arrow from node `f` to node `f'` carrying
/// `F(g)`.
pub fn left_adjoint_literal(f: &Presheaf, v: VertexId) -> Result<LiteralAdjoint, FunctorError> {
    let slice = f.quiver().slice_objects(v)?;
    let mut diagram = DiagramOfSpaces::new(slice.objects.iter().map(|p| f.dim(p.source)).collect());
    for a in &slice.arrows {
        diagram
            .add_arrow(a.to, a.from, f.eval(&a.via)?)
            .expect("F(g) maps F(dom f) to F(dom f')");
    }
    let colim = diagram.colimit();
    let id = slice
        .objects
        .iter()
        .position(|p| p.is_identity())
        .expect("slice contains id_v");
    let comparison = colim.cocone[id].clone();
    Ok(LiteralAdjoint {
        vertex: v,
        dim: colim.dim,
        comparison_is_iso: comparison.is_isomorphism(),
        comparison,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentAdjoint<'q> {
    /// Constant on each connected component with identity edge maps.
    pub presheaf: Presheaf<'q>,
    /// The cocone legs `F(v) -> LF(v)`.
    pub unit: NatTrans,
}

/// For each connected component, the colimit of the diagram with one node
/// `F(v)` per vertex and one arrow `F(e): F(v) -> F(u)` per edge `e: u -> v`.
pub fn left_adjoint_component<'q>(f: &Presheaf<'q>) -> ComponentAdjoint<'q> {
    let q = f.quiver();
    let mut dims = vec![0; q.vertex_count()];
    let mut unit = vec![LinearMap::zero(0, 0); q.vertex_count()];
    for component in q.connected_components() {
        let mut node = vec![usize::MAX; q.vertex_count()];
        let mut diagram = DiagramOfSpaces::default();
        for &v in &component {
            node[v] = diagram.add_node(f.dim(v));
        }
        for (e, edge) in q.edges().iter().enumerate() {
            if node[edge.src] != usize::MAX {
                diagram
                    .add_arrow(node[edge.dst], node[edge.src], f.edge_map(e).clone())
                    .expect("edge map has presheaf shape");
            }
        }
        let colim = diagram.colimit();
        for &v in &component {
            dims[v] = colim.dim;
            unit[v] = colim.cocone[node[v]].clone();
        }
    }
    let maps = q.edges().iter().map(|e| LinearMap::identity(dims[e.src])).collect();
    let presheaf = Presheaf::new(q, dims, maps).expect("identity maps within a component");
    ComponentAdjoint {
        presheaf,
        unit: NatTrans { components: unit },
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjunctionReport {
    /// `dim Hom(LF, G)`.
    pub left_dim: usize,
    /// `dim Hom(F, ιG)`.
    pub right_dim: usize,
    pub matches: bool,
    /// Precomposing a basis of `Hom(LF, G)` with the unit gives a basis of
    /// `Hom(F, ιG)`.
    pub unit_bijection: bool,
}

/// Compares both sides of the adjunction for [`left_adjoint_component`].
pub fn check_adjunction(f: &Presheaf, g: &Presheaf) -> Result<AdjunctionReport, FunctorError> {
    require_discrete(g)?;
    let adjoint = left_adjoint_component(f);
    let left = nat_trans_space(&adjoint.presheaf, g)?;
    let right = nat_trans_space(f, g)?;

    let mut pulled = Vec::with_capacity(left.dim);
    for phi in &left.basis {
        let composite = adjoint.unit.then(phi);
        composite.check_presheaf_naturality(f, g)?;
        pulled.push(composite.flatten());
    }
    let unknowns = pulled.first().map_or(0, Vec::len);
    let rank = Matrix::from_columns(&pulled, unknowns).rank();
    Ok(AdjunctionReport {
        left_dim: left.dim,
        right_dim: right.dim,
        matches: left.dim == right.dim,
        unit_bijection: rank == left.dim && rank == right.dim,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    /// From the source of the edge to its target.
    Forward,
    Backward,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

/// An undirected walk in the underlying multigraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Walk {
    pub start: VertexId,
    pub steps: Vec<(EdgeId, Direction)>,
}

impl Walk {
    pub fn empty(start: VertexId) -> Self {
        Walk {
            start,
            steps: Vec::new(),
        }
    }

    /// The vertex reached, or the first step that does not continue the walk.
    pub fn end(&self, q: &Quiver) -> Result<VertexId, FunctorError> {
        let mut at = self.start;
        for (step, &(e, dir)) in self.steps.iter().enumerate() {
            if e >= q.edge_count() {
                return Err(crate::error::QuiverError::UnknownEdge(format!("#{e}")).into());
            }
            let edge = q.edge(e);
            let (from, to) = match dir {
                Direction::Forward => (edge.src, edge.dst),
                Direction::Backward => (edge.dst, edge.src),
            };
            if from != at {
                return Err(FunctorError::BrokenWalk {
                    step,
                    edge: edge.name.clone(),
                    at: q.vertex_name(at).to_string(),
                });
            }
            at = to;
        }
        Ok(at)
    }

    pub fn reversed(&self, q: &Quiver) -> Result<Walk, FunctorError> {
        Ok(Walk {
            start: self.end(q)?,
            steps: self.steps.iter().rev().map(|&(e, d)| (e, d.flip())).collect(),
        })
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Walk) -> Walk {
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&next.steps);
        Walk {
            start: self.start,
            steps,
        }
    }

    pub fn labels(&self, q: &Quiver) -> Vec<String> {
        self.steps
            .iter()
            .map(|&(e, d)| match d {
                Direction::Forward => q.edge(e).name.clone(),
                Direction::Backward => format!("{}^-1", q.edge(e).name),
            })
            .collect()
    }
}

/// The map `F(start) -> F(end)` applying `F(e)⁻¹` on forward steps and
/// `F(e)` on backward steps.
pub fn transport(f: &Presheaf, walk: &Walk) -> Result<LinearMap, FunctorError> {
    let q = f.quiver();
    walk.end(q)?;
    let mut total = LinearMap::identity(f.dim(walk.start));
    for &(e, dir) in &walk.steps {
        let step = match dir {
            Direction::Backward => f.edge_map(e).clone(),
            Direction::Forward => f.edge_map(e).inverse().ok_or_else(|| FunctorError::NonInvertibleEdge {
                edge: q.edge(e).name.clone(),
            })?,
        };
        total = total.then(&step);
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeTransport {
    pub vertex: VertexId,
    /// The walk from the root of the component along tree edges.
    pub walk: Walk,
    pub map: LinearMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleMonodromy {
    /// The non-tree edge closing the cycle.
    pub edge: EdgeId,
    /// Based at the root: tree path to the edge's source, the edge forward,
    /// then the tree path back from its target.
    pub walk: Walk,
    pub monodromy: LinearMap,
    pub is_identity: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransportReport {
    pub roots: Vec<VertexId>,
    pub tree_edges: Vec<EdgeId>,
    pub transports: Vec<TreeTransport>,
    pub cycles: Vec<CycleMonodromy>,
    pub all_identity: bool,
}

/// Breadth-first spanning forest from the least vertex of each component,
/// scanning incident edges in edge order. Returns roots, the tree edges and
/// each vertex's tree walk from its root.
fn spanning_forest(q: &Quiver) -> (Vec<VertexId>, Vec<EdgeId>, Vec<Walk>) {
    let n = q.vertex_count();
    let mut incident: Vec<Vec<EdgeId>> = vec![Vec::new(); n];
    for (e, edge) in q.edges().iter().enumerate() {
        incident[edge.src].push(e);
        incident[edge.dst].push(e);
    }
    let mut walks: Vec<Option<Walk>> = vec![None; n];
    let mut roots = Vec::new();
    let mut tree = Vec::new();
    for root in 0..n {
        if walks[root].is_some() {
            continue;
        }
        roots.push(root);
        walks[root] = Some(Walk::empty(root));
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &e in &incident[x] {
                let edge = q.edge(e);
                let (y, dir) = if edge.src == x {
                    (edge.dst, Direction::Forward)
                } else {
                    (edge.src, Direction::Backward)
                };
                if walks[y].is_none() {
                    let mut w = walks[x].clone().unwrap();
                    w.steps.push((e, dir));
                    walks[y] = Some(w);
                    tree.push(e);
                    queue.push_back(y);
                }
            }
        }
    }
    tree.sort_unstable();
    (roots, tree, walks.into_iter().map(Option::unwrap).collect())
}

/// Tree transports and the monodromy of every fundamental cycle.
pub fn monodromy_report(f: &Presheaf) -> Result<TransportReport, FunctorError> {
    require_discrete(f)?;
    let q = f.quiver();
    let (roots, tree_edges, walks) = spanning_forest(q);
    let mut transports = Vec::with_capacity(q.vertex_count());
    for (v, walk) in walks.iter().enumerate() {
        transports.push(TreeTransport {
            vertex: v,
            walk: walk.clone(),
            map: transport(f, walk)?,
        });
    }
    let mut cycles = Vec::new();
    for e in (0..q.edge_count()).filter(|e| tree_edges.binary_search(e).is_err()) {
        let edge = q.edge(e);
        let walk = walks[edge.src]
            .then(&Walk {
                start: edge.src,
                steps: vec![(e, Direction::Forward)],
            })
            .then(&walks[edge.dst].reversed(q)?);
        let monodromy = transport(f, &walk)?;
        cycles.push(CycleMonodromy {
            edge: e,
            walk,
            is_identity: monodromy.is_identity(),
            monodromy,
        });
    }
    let all_identity = cycles.iter().all(|c| c.is_identity);
    Ok(TransportReport {
        roots,
        tree_edges,
        transports,
        cycles,
        all_identity,
    })
}
