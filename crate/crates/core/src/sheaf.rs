//! The sheaf condition as an equalizer of linear maps.
//!
//! For a sieve `S` on `v` the section map `ε: F(v) -> Π_{f ∈ S} F(dom f)`
//! must be injective with image exactly the compatible families, those with
//! `F(g)(s_f) = s_{f∘g}` for every `f ∈ S` and every `g` into `dom f`.
//! In finite dimensions this is decided by ranks.

use num_traits::Zero;

use crate::error::{PresheafError, SieveError};
use crate::linalg::{LinearMap, Matrix, Vector};
use crate::presheaf::Presheaf;
use crate::quiver::{EdgeId, PathMorphism, VertexId};
use crate::sieve::{enumerate_sieves, is_covering, Sieve, TopologySpec};

/// The stacked map `s ↦ (F(f) s)_{f ∈ S}` over members in the given order.
fn section_map_for(f: &Presheaf, v: VertexId, members: &[&PathMorphism]) -> LinearMap {
    let blocks: Vec<Matrix> = members
        .iter()
        .map(|p| f.eval(p).expect("sieve member is a path of the quiver").into_matrix())
        .collect();
    LinearMap::new(Matrix::vstack(&blocks, f.dim(v)))
}

/// Matrix whose kernel is the space of compatible families over `members`.
/// One block of rows per pair `(f, g)` with `g` ranging over all morphisms
/// into `dom f`, each encoding `F(g) s_f - s_{f∘g} = 0`.
fn compatibility_equations(f: &Presheaf, members: &[&PathMorphism]) -> Matrix {
    let q = f.quiver();
    let mut offsets = Vec::with_capacity(members.len());
    let mut total = 0;
    for p in members {
        offsets.push(total);
        total += f.dim(p.source);
    }
    let position = |p: &PathMorphism| members.iter().position(|m| *m == p);

    let mut blocks = Vec::new();
    for (i, m) in members.iter().enumerate() {
        for g in q.morphisms_into(m.source).expect("member source is a vertex") {
            let composite = g.then(m).unwrap();
            let j = position(&composite).expect("sieve is closed under precomposition");
            let fg = f.eval(&g).expect("path of the quiver");
            let rows = f.dim(g.source);
            let mut block = Matrix::zeros(rows, total);
            for r in 0..rows {
                for c in 0..fg.domain_dim() {
                    block[(r, offsets[i] + c)] += fg.matrix()[(r, c)].clone();
                }
                block[(r, offsets[j] + r)] -= crate::linalg::scalar::one();
            }
            blocks.push(block);
        }
    }
    Matrix::vstack(&blocks, total)
}

/// `ε: F(v) -> Π_{f ∈ S} F(dom f)`, blocks in canonical member order.
pub fn section_map(f: &Presheaf, s: &Sieve) -> LinearMap {
    let members: Vec<_> = s.members().collect();
    section_map_for(f, s.codomain(), &members)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibilitySpace {
    pub dim: usize,
    /// Flattened families, blocks in canonical member order.
    pub basis: Vec<Vector>,
}

pub fn compatibility_space(f: &Presheaf, s: &Sieve) -> CompatibilitySpace {
    let members: Vec<_> = s.members().collect();
    let basis = compatibility_equations(f, &members).kernel_basis();
    CompatibilitySpace {
        dim: basis.len(),
        basis,
    }
}

/// A family `(s_f)_{f ∈ S}`, one vector per member in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionFamily {
    pub sieve: Sieve,
    pub sections: Vec<Vector>,
}

impl SectionFamily {
    pub fn new(f: &Presheaf, sieve: Sieve, sections: Vec<Vector>) -> Result<Self, PresheafError> {
        if sections.len() != sieve.len() {
            return Err(PresheafError::FamilySize {
                expected: sieve.len(),
                found: sections.len(),
            });
        }
        for (m, s) in sieve.members().zip(&sections) {
            if s.len() != f.dim(m.source) {
                return Err(PresheafError::DimensionMismatch {
                    expected: f.dim(m.source),
                    found: s.len(),
                });
            }
        }
        Ok(SectionFamily { sieve, sections })
    }

    /// Splits a flattened family into per-member sections.
    pub fn from_flat(f: &Presheaf, sieve: Sieve, flat: &[crate::linalg::Scalar]) -> Result<Self, PresheafError> {
        let expected: usize = sieve.members().map(|m| f.dim(m.source)).sum();
        if flat.len() != expected {
            return Err(PresheafError::DimensionMismatch {
                expected,
                found: flat.len(),
            });
        }
        let mut sections = Vec::with_capacity(sieve.len());
        let mut at = 0;
        for m in sieve.members() {
            let d = f.dim(m.source);
            sections.push(flat[at..at + d].to_vec());
            at += d;
        }
        Ok(SectionFamily { sieve, sections })
    }

    /// The family `ε(s)`.
    pub fn restrictions_of(f: &Presheaf, sieve: Sieve, s: &[crate::linalg::Scalar]) -> Result<Self, PresheafError> {
        if s.len() != f.dim(sieve.codomain()) {
            return Err(PresheafError::DimensionMismatch {
                expected: f.dim(sieve.codomain()),
                found: s.len(),
            });
        }
        let flat = section_map(f, &sieve).apply(s);
        Self::from_flat(f, sieve, &flat)
    }

    pub fn flatten(&self) -> Vector {
        self.sections.iter().flatten().cloned().collect()
    }

    pub fn is_compatible(&self, f: &Presheaf) -> bool {
        let members: Vec<_> = self.sieve.members().collect();
        compatibility_equations(f, &members)
            .apply(&self.flatten())
            .iter()
            .all(Zero::is_zero)
    }
}

/// A vector `s ∈ F(v)` with `F(f) s = s_f` for all members, if the family is
/// compatible and such an `s` exists. When the sieve contains `id_v` the
/// answer is `s_{id_v}`.
pub fn glue(f: &Presheaf, family: &SectionFamily) -> Result<Option<Vector>, PresheafError> {
    for (m, s) in family.sieve.members().zip(&family.sections) {
        if s.len() != f.dim(m.source) {
            return Err(PresheafError::DimensionMismatch {
                expected: f.dim(m.source),
                found: s.len(),
            });
        }
    }
    if family.sections.len() != family.sieve.len() {
        return Err(PresheafError::FamilySize {
            expected: family.sieve.len(),
            found: family.sections.len(),
        });
    }
    if !family.is_compatible(f) {
        return Ok(None);
    }
    Ok(section_map(f, &family.sieve).matrix().solve(&family.flatten()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnosis {
    /// `ε` has a nonzero kernel vector: gluings are not unique.
    EpsilonNotInjective { kernel_vector: Vector },
    /// A compatible family (flattened, canonical member order) that is not
    /// in the image of `ε`.
    CompatibleFamilyNotGlued { family: Vector },
}

impl Diagnosis {
    /// Checks the witness against `glue` and `ε` from scratch.
    pub fn replays(&self, f: &Presheaf, s: &Sieve) -> bool {
        match self {
            Diagnosis::EpsilonNotInjective { kernel_vector } => {
                kernel_vector.iter().any(|x| !x.is_zero())
                    && section_map(f, s).apply(kernel_vector).iter().all(Zero::is_zero)
            }
            Diagnosis::CompatibleFamilyNotGlued { family } => {
                let Ok(fam) = SectionFamily::from_flat(f, s.clone(), family) else {
                    return false;
                };
                fam.is_compatible(f) && glue(f, &fam) == Ok(None)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafVerdict {
    pub holds: bool,
    pub vertex: Option<VertexId>,
    pub failing_sieve: Option<Sieve>,
    pub diagnosis: Option<Diagnosis>,
}

impl SheafVerdict {
    fn holds() -> Self {
        SheafVerdict {
            holds: true,
            vertex: None,
            failing_sieve: None,
            diagnosis: None,
        }
    }
}

/// Equalizer test over an explicit ordering of the members of a sieve on `v`.
///
/// Panics if the image of `ε` is not contained in the compatible families,
/// which would mean the presheaf is not functorial.
pub fn equalizer_check(f: &Presheaf, v: VertexId, members: &[&PathMorphism]) -> Option<Diagnosis> {
    let eps = section_map_for(f, v, members);
    let equations = compatibility_equations(f, members);
    assert!(
        equations.mul(eps.matrix()).is_zero(),
        "image of the section map is not contained in the compatible families"
    );
    if let Some(kernel_vector) = eps.matrix().kernel_basis().into_iter().next() {
        return Some(Diagnosis::EpsilonNotInjective { kernel_vector });
    }
    let compatible = equations.kernel_basis();
    if compatible.len() == eps.rank() {
        return None;
    }
    let family = compatible
        .into_iter()
        .find(|x| eps.matrix().solve(x).is_none())
        .expect("a basis of a strictly larger space leaves the image");
    Some(Diagnosis::CompatibleFamilyNotGlued { family })
}

pub fn is_sheaf_for_sieve(f: &Presheaf, s: &Sieve) -> SheafVerdict {
    let members: Vec<_> = s.members().collect();
    match equalizer_check(f, s.codomain(), &members) {
        None => SheafVerdict::holds(),
        Some(diagnosis) => SheafVerdict {
            holds: false,
            vertex: Some(s.codomain()),
            failing_sieve: Some(s.clone()),
            diagnosis: Some(diagnosis),
        },
    }
}

/// Covering sieves of `t` on `v` in canonical order.
pub fn covering_sieves(f: &Presheaf, t: &TopologySpec, v: VertexId, limit: usize) -> Result<Vec<Sieve>, SieveError> {
    let q = f.quiver();
    if t.only_maximal_covers() {
        return Ok(vec![Sieve::maximal(q, v)?]);
    }
    Ok(enumerate_sieves(q, v, limit)?
        .into_iter()
        .filter(|s| is_covering(t, s, q))
        .collect())
}

/// The sheaf condition for every covering sieve of `t`, vertex by vertex and
/// sieve by sieve in canonical order; the first failure is reported.
pub fn is_sheaf(f: &Presheaf, t: &TopologySpec, limit: usize) -> Result<SheafVerdict, SieveError> {
    for v in f.quiver().vertices() {
        for s in covering_sieves(f, t, v, limit)? {
            let verdict = is_sheaf_for_sieve(f, &s);
            if !verdict.holds {
                return Ok(verdict);
            }
        }
    }
    Ok(SheafVerdict::holds())
}

/// First edge whose restriction map is not an isomorphism.
pub fn discrete_criterion_failure(f: &Presheaf) -> Option<EdgeId> {
    f.edge_maps().iter().position(|m| !m.is_isomorphism())
}

/// All restriction maps are isomorphisms. Checking edges suffices since
/// every path map is a product of edge maps.
pub fn is_discrete_sheaf_criterion(f: &Presheaf) -> bool {
    discrete_criterion_failure(f).is_none()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossValidation {
    pub criterion: bool,
    pub definitional: SheafVerdict,
    pub agree: bool,
    /// The failing sieve of the definitional check when the two disagree.
    pub separating_sieve: Option<Sieve>,
}

/// Compares the isomorphism criterion with the definitional equalizer check
/// over every nonempty sieve.
pub fn cross_validate_discrete(f: &Presheaf, limit: usize) -> Result<CrossValidation, SieveError> {
    let criterion = is_discrete_sheaf_criterion(f);
    let definitional = is_sheaf(f, &TopologySpec::Discrete { include_empty: false }, limit)?;
    let agree = criterion == definitional.holds;
    let separating_sieve = if agree {
        None
    } else {
        definitional.failing_sieve.clone()
    };
    Ok(CrossValidation {
        criterion,
        definitional,
        agree,
        separating_sieve,
    })
}
