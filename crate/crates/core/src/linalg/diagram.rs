//! Finite diagrams of coordinate spaces and their limits and colimits.

use super::map::LinearMap;
use super::matrix::Matrix;
use crate::error::LinalgError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub src: usize,
    pub dst: usize,
    pub map: LinearMap,
}

/// Nodes are coordinate spaces `k^n`; every arrow carries a linear map from
/// its source node to its target node.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiagramOfSpaces {
    nodes: Vec<usize>,
    arrows: Vec<Arrow>,
}

/// A colimit object `k^dim` with one cocone leg per diagram node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Colimit {
    pub dim: usize,
    pub cocone: Vec<LinearMap>,
}

/// A limit object `k^dim` with one projection per diagram node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limit {
    pub dim: usize,
    pub cone: Vec<LinearMap>,
}

impl DiagramOfSpaces {
    pub fn new(nodes: Vec<usize>) -> Self {
        DiagramOfSpaces {
            nodes,
            arrows: Vec::new(),
        }
    }

    pub fn add_node(&mut self, dim: usize) -> usize {
        self.nodes.push(dim);
        self.nodes.len() - 1
    }

    pub fn add_arrow(&mut self, src: usize, dst: usize, map: LinearMap) -> Result<(), LinalgError> {
        let n = self.nodes.len();
        if src >= n || dst >= n {
            return Err(LinalgError::UnknownNode(src.max(dst)));
        }
        if map.domain_dim() != self.nodes[src] || map.codomain_dim() != self.nodes[dst] {
            return Err(LinalgError::ArrowShape {
                src,
                dst,
                expected: (self.nodes[src], self.nodes[dst]),
                found: (map.domain_dim(), map.codomain_dim()),
            });
        }
        self.arrows.push(Arrow { src, dst, map });
        Ok(())
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    fn offsets(&self) -> (Vec<usize>, usize) {
        let mut offsets = Vec::with_capacity(self.nodes.len());
        let mut total = 0;
        for &d in &self.nodes {
            offsets.push(total);
            total += d;
        }
        (offsets, total)
    }

    /// The relation matrix of the colimit: one column `ι_src(x) - ι_dst(f x)`
    /// per arrow `f` and per basis vector `x` of its source.
    pub fn relation_matrix(&self) -> Matrix {
        let (offsets, total) = self.offsets();
        let ncols = self.arrows.iter().map(|a| a.map.domain_dim()).sum();
        let mut rel = Matrix::zeros(total, ncols);
        let mut col = 0;
        for a in &self.arrows {
            let m = a.map.matrix();
            for j in 0..m.cols() {
                rel[(offsets[a.src] + j, col)] += crate::linalg::scalar::one();
                for i in 0..m.rows() {
                    rel[(offsets[a.dst] + i, col)] -= m[(i, j)].clone();
                }
                col += 1;
            }
        }
        rel
    }

    /// Quotient of the direct sum of the nodes by the span of the relations.
    ///
    /// The quotient map is represented by a basis of the annihilator of the
    /// relation span, so its kernel is exactly that span.
    pub fn colimit(&self) -> Colimit {
        let (offsets, total) = self.offsets();
        let rel = self.relation_matrix();
        let quotient_rows = rel.transpose().kernel_basis();
        let dim = quotient_rows.len();
        let projection = Matrix::from_columns(&quotient_rows, total).transpose();
        let cocone = self
            .nodes
            .iter()
            .zip(&offsets)
            .map(|(&d, &off)| LinearMap::new(projection.column_block(off, d)))
            .collect();
        Colimit { dim, cocone }
    }

    /// The subspace of the direct sum on which every arrow is respected,
    /// i.e. `x_dst = f(x_src)` for every arrow `f`.
    pub fn limit(&self) -> Limit {
        let (offsets, total) = self.offsets();
        let nrows = self.arrows.iter().map(|a| a.map.codomain_dim()).sum();
        let mut constraints = Matrix::zeros(nrows, total);
        let mut row = 0;
        for a in &self.arrows {
            let m = a.map.matrix();
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    constraints[(row, offsets[a.src] + j)] += m[(i, j)].clone();
                }
                constraints[(row, offsets[a.dst] + i)] -= crate::linalg::scalar::one();
                row += 1;
            }
        }
        let basis = constraints.kernel_basis();
        let dim = basis.len();
        let inclusion = Matrix::from_columns(&basis, total);
        let cone = self
            .nodes
            .iter()
            .zip(&offsets)
            .map(|(&d, &off)| LinearMap::new(inclusion.row_block(off, d)))
            .collect();
        Limit { dim, cone }
    }
}
