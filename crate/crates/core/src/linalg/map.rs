use serde::Serialize;

use super::matrix::Matrix;
use super::scalar::{Scalar, Vector};

/// A linear map `k^domain -> k^codomain` acting on column vectors.
///
/// The matrix has `codomain_dim` rows and `domain_dim` columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct LinearMap {
    matrix: Matrix,
}

impl LinearMap {
    pub fn new(matrix: Matrix) -> Self {
        LinearMap { matrix }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(Matrix::identity(n))
    }

    pub fn zero(domain_dim: usize, codomain_dim: usize) -> Self {
        Self::new(Matrix::zeros(codomain_dim, domain_dim))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn domain_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn codomain_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        self.matrix.apply(v)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &LinearMap) -> LinearMap {
        Self::new(next.matrix.mul(&self.matrix))
    }

    /// The dual map on coordinate duals: the matrix transpose.
    pub fn transpose(&self) -> LinearMap {
        Self::new(self.matrix.transpose())
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.domain_dim()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.domain_dim() == self.codomain_dim() && self.is_injective()
    }

    pub fn inverse(&self) -> Option<LinearMap> {
        self.matrix.inverse().map(Self::new)
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_square() && self.matrix.is_identity()
    }
}

impl From<Matrix> for LinearMap {
    fn from(matrix: Matrix) -> Self {
        Self::new(matrix)
    }
}
