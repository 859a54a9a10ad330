//! Presheaves and representations of the path category, stored as one
//! matrix per edge. Values on longer paths are forced by composition.

use crate::error::PresheafError;
use crate::linalg::{LinearMap, Matrix};
use crate::quiver::{EdgeId, PathMorphism, Quiver, VertexId};

/// A contravariant functor `C_Q^op -> Vect`: the map stored for an edge
/// `e: u -> v` goes from `F(v)` to `F(u)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presheaf<'q> {
    quiver: &'q Quiver,
    dims: Vec<usize>,
    edge_maps: Vec<LinearMap>,
}

/// A covariant functor `C_Q -> Vect`: the map stored for an edge
/// `e: u -> v` goes from `V(u)` to `V(v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation<'q> {
    quiver: &'q Quiver,
    dims: Vec<usize>,
    edge_maps: Vec<LinearMap>,
}

fn check_data(q: &Quiver, dims: &[usize], edge_maps: &[LinearMap], contravariant: bool) -> Result<(), PresheafError> {
    if dims.len() != q.vertex_count() {
        return Err(PresheafError::DimensionCount {
            expected: q.vertex_count(),
            found: dims.len(),
        });
    }
    if edge_maps.len() != q.edge_count() {
        return Err(PresheafError::MapCount {
            expected: q.edge_count(),
            found: edge_maps.len(),
        });
    }
    for (edge, map) in q.edges().iter().zip(edge_maps) {
        let (from, to) = if contravariant {
            (edge.dst, edge.src)
        } else {
            (edge.src, edge.dst)
        };
        if map.domain_dim() != dims[from] || map.codomain_dim() != dims[to] {
            return Err(PresheafError::MapShape {
                edge: edge.name.clone(),
                expected_rows: dims[to],
                expected_cols: dims[from],
                rows: map.codomain_dim(),
                cols: map.domain_dim(),
            });
        }
    }
    Ok(())
}

fn check_path(q: &Quiver, p: &PathMorphism) -> Result<(), PresheafError> {
    if let Some(&e) = p.edges.iter().find(|&&e| e >= q.edge_count()) {
        return Err(crate::error::QuiverError::UnknownEdge(format!("#{e}")).into());
    }
    Ok(())
}

impl<'q> Presheaf<'q> {
    pub fn new(quiver: &'q Quiver, dims: Vec<usize>, edge_maps: Vec<LinearMap>) -> Result<Self, PresheafError> {
        check_data(quiver, &dims, &edge_maps, true)?;
        Ok(Presheaf {
            quiver,
            dims,
            edge_maps,
        })
    }

    /// Every vertex gets `k^dim` and every edge the identity.
    pub fn constant(quiver: &'q Quiver, dim: usize) -> Self {
        Presheaf {
            quiver,
            dims: vec![dim; quiver.vertex_count()],
            edge_maps: vec![LinearMap::identity(dim); quiver.edge_count()],
        }
    }

    /// All spaces zero.
    pub fn zero(quiver: &'q Quiver) -> Self {
        Self::constant(quiver, 0)
    }

    pub fn quiver(&self) -> &'q Quiver {
        self.quiver
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, v: VertexId) -> usize {
        self.dims[v]
    }

    pub fn edge_maps(&self) -> &[LinearMap] {
        &self.edge_maps
    }

    pub fn edge_map(&self, e: EdgeId) -> &LinearMap {
        &self.edge_maps[e]
    }

    /// `F(p): F(target) -> F(source)`. For `p = [e1, ..., en]` in traversal
    /// order this is the matrix product `F(e1) · F(e2) ··· F(en)`.
    pub fn eval(&self, p: &PathMorphism) -> Result<LinearMap, PresheafError> {
        check_path(self.quiver, p)?;
        let mut acc = Matrix::identity(self.dims[p.target]);
        for &e in p.edges.iter().rev() {
            acc = self.edge_maps[e].matrix().mul(&acc);
        }
        Ok(LinearMap::new(acc))
    }
}

impl<'q> Representation<'q> {
    pub fn new(quiver: &'q Quiver, dims: Vec<usize>, edge_maps: Vec<LinearMap>) -> Result<Self, PresheafError> {
        check_data(quiver, &dims, &edge_maps, false)?;
        Ok(Representation {
            quiver,
            dims,
            edge_maps,
        })
    }

    pub fn quiver(&self) -> &'q Quiver {
        self.quiver
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn edge_maps(&self) -> &[LinearMap] {
        &self.edge_maps
    }

    /// `V(p): V(source) -> V(target)`, i.e. `V(en) ··· V(e1)`.
    pub fn eval(&self, p: &PathMorphism) -> Result<LinearMap, PresheafError> {
        check_path(self.quiver, p)?;
        let mut acc = Matrix::identity(self.dims[p.source]);
        for &e in &p.edges {
            acc = self.edge_maps[e].matrix().mul(&acc);
        }
        Ok(LinearMap::new(acc))
    }

    /// The dual presheaf `V*`. Duals are identified with coordinate spaces
    /// through the dual basis, so every restriction map is a transpose.
    pub fn dualize(&self) -> Presheaf<'q> {
        Presheaf {
            quiver: self.quiver,
            dims: self.dims.clone(),
            edge_maps: self.edge_maps.iter().map(LinearMap::transpose).collect(),
        }
    }
}

impl<'q> Presheaf<'q> {
    /// Transposes every restriction map, giving the representation whose
    /// dual is `self`.
    pub fn dualize(&self) -> Representation<'q> {
        Representation {
            quiver: self.quiver,
            dims: self.dims.clone(),
            edge_maps: self.edge_maps.iter().map(LinearMap::transpose).collect(),
        }
    }
}

/// A family of linear maps, one per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTrans {
    pub components: Vec<LinearMap>,
}

impl NatTrans {
    pub fn identity(dims: &[usize]) -> Self {
        NatTrans {
            components: dims.iter().map(|&d| LinearMap::identity(d)).collect(),
        }
    }

    /// `next ∘ self`, componentwise.
    pub fn then(&self, next: &NatTrans) -> NatTrans {
        NatTrans {
            components: self
                .components
                .iter()
                .zip(&next.components)
                .map(|(a, b)| a.then(b))
                .collect(),
        }
    }

    /// Componentwise transpose.
    pub fn transpose(&self) -> NatTrans {
        NatTrans {
            components: self.components.iter().map(LinearMap::transpose).collect(),
        }
    }

    /// All component entries, vertex by vertex, row-major.
    pub fn flatten(&self) -> Vec<crate::linalg::Scalar> {
        self.components
            .iter()
            .flat_map(|c| c.matrix().entries().iter().cloned())
            .collect()
    }

    fn check_shapes(&self, q: &Quiver, from: &[usize], to: &[usize]) -> Result<(), PresheafError> {
        if self.components.len() != q.vertex_count() {
            return Err(PresheafError::DimensionCount {
                expected: q.vertex_count(),
                found: self.components.len(),
            });
        }
        for (v, c) in self.components.iter().enumerate() {
            if c.domain_dim() != from[v] || c.codomain_dim() != to[v] {
                return Err(PresheafError::ComponentShape {
                    vertex: q.vertex_name(v).to_string(),
                });
            }
        }
        Ok(())
    }

    /// Checks `G(e) η_v = η_u F(e)` for every edge `e: u -> v`.
    pub fn check_presheaf_naturality(&self, f: &Presheaf, g: &Presheaf) -> Result<(), PresheafError> {
        same_quiver(f.quiver, g.quiver)?;
        let q = f.quiver;
        self.check_shapes(q, &f.dims, &g.dims)?;
        for (e, edge) in q.edges().iter().enumerate() {
            let top = self.components[edge.dst].then(g.edge_map(e));
            let bottom = f.edge_map(e).then(&self.components[edge.src]);
            if top != bottom {
                return Err(PresheafError::NotNatural {
                    edge: edge.name.clone(),
                });
            }
        }
        Ok(())
    }

    /// Checks `W(e) η_u = η_v V(e)` for every edge `e: u -> v`.
    pub fn check_representation_naturality(&self, v: &Representation, w: &Representation) -> Result<(), PresheafError> {
        same_quiver(v.quiver, w.quiver)?;
        let q = v.quiver;
        self.check_shapes(q, &v.dims, &w.dims)?;
        for (e, edge) in q.edges().iter().enumerate() {
            let top = v.edge_maps[e].then(&self.components[edge.dst]);
            let bottom = self.components[edge.src].then(&w.edge_maps[e]);
            if top != bottom {
                return Err(PresheafError::NotNatural {
                    edge: edge.name.clone(),
                });
            }
        }
        Ok(())
    }
}

fn same_quiver(a: &Quiver, b: &Quiver) -> Result<(), PresheafError> {
    if std::ptr::eq(a, b) || a == b {
        Ok(())
    } else {
        Err(PresheafError::QuiverMismatch)
    }
}

/// The dual of a morphism of representations `η: V -> W`, a morphism of
/// presheaves `W* -> V*` with transposed components.
pub fn dualize_morphism(v: &Representation, w: &Representation, eta: &NatTrans) -> Result<NatTrans, PresheafError> {
    eta.check_representation_naturality(v, w)?;
    Ok(eta.transpose())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTransSpace {
    pub dim: usize,
    pub basis: Vec<NatTrans>,
}

/// The space of natural transformations `F -> G`, as the kernel of the
/// naturality equations `G(e) η_v - η_u F(e) = 0`, one block per edge.
/// Edges suffice because the path category is free.
pub fn nat_trans_space(f: &Presheaf, g: &Presheaf) -> Result<NatTransSpace, PresheafError> {
    same_quiver(f.quiver, g.quiver)?;
    let q = f.quiver;
    // unknown (i, j) of η_v sits at offsets[v] + i * dim F(v) + j
    let mut offsets = Vec::with_capacity(q.vertex_count());
    let mut unknowns = 0;
    for v in q.vertices() {
        offsets.push(unknowns);
        unknowns += g.dims[v] * f.dims[v];
    }
    let equations: usize = q.edges().iter().map(|e| g.dims[e.src] * f.dims[e.dst]).sum();
    let mut system = Matrix::zeros(equations, unknowns);
    let mut row = 0;
    for (e, edge) in q.edges().iter().enumerate() {
        let (u, v) = (edge.src, edge.dst);
        let (ge, fe) = (g.edge_map(e).matrix(), f.edge_map(e).matrix());
        for r in 0..g.dims[u] {
            for c in 0..f.dims[v] {
                // (G(e) η_v)[r, c] = Σ_k G(e)[r, k] η_v[k, c]
                for k in 0..g.dims[v] {
                    system[(row, offsets[v] + k * f.dims[v] + c)] += ge[(r, k)].clone();
                }
                // (η_u F(e))[r, c] = Σ_k η_u[r, k] F(e)[k, c]
                for k in 0..f.dims[u] {
                    system[(row, offsets[u] + r * f.dims[u] + k)] -= fe[(k, c)].clone();
                }
                row += 1;
            }
        }
    }
    let basis: Vec<NatTrans> = system
        .kernel_basis()
        .into_iter()
        .map(|x| NatTrans {
            components: q
                .vertices()
                .map(|v| {
                    let (rows, cols) = (g.dims[v], f.dims[v]);
                    LinearMap::new(Matrix::from_fn(rows, cols, |i, j| x[offsets[v] + i * cols + j].clone()))
                })
                .collect(),
        })
        .collect();
    Ok(NatTransSpace {
        dim: basis.len(),
        basis,
    })
}
