//! Sieves on the path category, the supported topologies, and an exhaustive
//! auditor for the Grothendieck topology axioms.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{ParseError, QuiverError, SieveError};
use crate::quiver::{PathMorphism, Quiver, VertexId};

/// Default bound on `|Hom(-, v)|` for exhaustive sieve enumeration.
pub const DEFAULT_SIEVE_LIMIT: usize = 14;

/// A set of morphisms into `codomain` closed under precomposition.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sieve {
    codomain: VertexId,
    members: BTreeSet<PathMorphism>,
}

impl Sieve {
    pub fn empty(codomain: VertexId) -> Self {
        Sieve {
            codomain,
            members: BTreeSet::new(),
        }
    }

    pub fn maximal(q: &Quiver, v: VertexId) -> Result<Self, SieveError> {
        Ok(Sieve {
            codomain: v,
            members: q.morphisms_into(v)?.into_iter().collect(),
        })
    }

    /// Wraps a member set without checking closure; see [`Sieve::is_closed`].
    pub fn from_members_unchecked(codomain: VertexId, members: BTreeSet<PathMorphism>) -> Self {
        Sieve { codomain, members }
    }

    pub fn codomain(&self) -> VertexId {
        self.codomain
    }

    /// Members in canonical order.
    pub fn members(&self) -> impl DoubleEndedIterator<Item = &PathMorphism> + ExactSizeIterator {
        self.members.iter()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, f: &PathMorphism) -> bool {
        self.members.contains(f)
    }

    pub fn contains_identity(&self) -> bool {
        self.members.contains(&PathMorphism::identity(self.codomain))
    }

    /// Every member targets the codomain and `f ∈ S` implies `f ∘ e ∈ S` for
    /// every edge `e` into the source of `f` (edges generate all paths).
    pub fn is_closed(&self, q: &Quiver) -> bool {
        self.members.iter().all(|f| {
            f.target == self.codomain
                && q.incoming(f.source)
                    .iter()
                    .all(|&e| self.members.contains(&q.edge_morphism(e).then(f).unwrap()))
        })
    }

    pub fn labels(&self, q: &Quiver) -> Vec<String> {
        self.members.iter().map(|p| q.label(p)).collect()
    }

    /// Canonical sort key: by size, then lexicographically by members.
    fn canonical_key(&self) -> (usize, Vec<&PathMorphism>) {
        (self.members.len(), self.members.iter().collect())
    }
}

impl Ord for Sieve {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.codomain
            .cmp(&other.codomain)
            .then_with(|| self.canonical_key().cmp(&other.canonical_key()))
    }
}

impl PartialOrd for Sieve {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// The smallest sieve on `v` containing `generators`.
pub fn generate_sieve(q: &Quiver, v: VertexId, generators: &[PathMorphism]) -> Result<Sieve, SieveError> {
    let mut members = BTreeSet::new();
    for f in generators {
        if f.target != v {
            return Err(SieveError::WrongCodomain {
                morphism: q.label(f),
                expected: q.vertex_name(v).to_string(),
            });
        }
        for g in q.morphisms_into(f.source)? {
            members.insert(g.then(f).unwrap());
        }
    }
    Ok(Sieve { codomain: v, members })
}

/// `f*(S) = { g : f ∘ g ∈ S }`, a sieve on the source of `f`.
pub fn pullback_sieve(q: &Quiver, f: &PathMorphism, s: &Sieve) -> Result<Sieve, SieveError> {
    if f.target != s.codomain {
        return Err(SieveError::CodomainMismatch {
            sieve: q.vertex_name(s.codomain).to_string(),
            morphism_target: q.vertex_name(f.target).to_string(),
        });
    }
    let members = q
        .morphisms_into(f.source)?
        .into_iter()
        .filter(|g| s.members.contains(&g.then(f).unwrap()))
        .collect();
    Ok(Sieve {
        codomain: f.source,
        members,
    })
}

fn check_limit(q: &Quiver, v: VertexId, limit: usize) -> Result<(), SieveError> {
    let count = q.count_morphisms_into(v);
    if count > limit as u128 {
        return Err(SieveError::TooManyMorphisms {
            vertex: q.vertex_name(v).to_string(),
            count,
            limit,
        });
    }
    Ok(())
}

/// All sieves on `v`, in canonical order (by size, then members).
///
/// Morphisms into `v` form a tree under "extend at the source by one edge",
/// rooted at `id_v`, and a sieve is exactly a union of full subtrees. The
/// sieves inside the subtree at `p` are therefore either the whole subtree or
/// an independent choice of sieve inside each child subtree.
pub fn enumerate_sieves(q: &Quiver, v: VertexId, limit: usize) -> Result<Vec<Sieve>, SieveError> {
    if v >= q.vertex_count() {
        return Err(QuiverError::UnknownVertex(format!("#{v}")).into());
    }
    check_limit(q, v, limit)?;
    let mut sieves: Vec<Sieve> = subtree_sieves(q, &PathMorphism::identity(v))
        .into_iter()
        .map(|members| Sieve { codomain: v, members })
        .collect();
    sieves.sort();
    Ok(sieves)
}

fn subtree_sieves(q: &Quiver, root: &PathMorphism) -> Vec<BTreeSet<PathMorphism>> {
    let mut combos: Vec<BTreeSet<PathMorphism>> = vec![BTreeSet::new()];
    let mut whole = BTreeSet::new();
    whole.insert(root.clone());
    for &e in q.incoming(root.source) {
        let child = q.edge_morphism(e).then(root).unwrap();
        let child_sieves = subtree_sieves(q, &child);
        // the largest child sieve is the full child subtree
        if let Some(full) = child_sieves.iter().max_by_key(|s| s.len()) {
            whole.extend(full.iter().cloned());
        }
        combos = combos
            .iter()
            .flat_map(|acc| {
                child_sieves.iter().map(move |cs| {
                    let mut next = acc.clone();
                    next.extend(cs.iter().cloned());
                    next
                })
            })
            .collect();
    }
    combos.push(whole);
    combos
}

/// One of the supported topologies on the path category.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TopologySpec {
    /// Only the maximal sieve covers.
    Coarse,
    /// Every nonempty sieve covers; the empty sieve covers iff `include_empty`.
    Discrete { include_empty: bool },
    /// A sieve covers iff it contains an edge into its codomain. At a vertex
    /// without incoming edges the maximal sieve covers instead.
    EdgeGenerated,
    /// A sieve covers iff it contains every morphism of length `<= n` into
    /// its codomain.
    LengthGraded(usize),
}

impl TopologySpec {
    /// True when the maximal sieve is the only covering sieve at every
    /// vertex, so sheaf checks need no sieve enumeration. (`id_v` has length
    /// zero, so a graded cover always contains it.)
    pub fn only_maximal_covers(&self) -> bool {
        matches!(self, TopologySpec::Coarse | TopologySpec::LengthGraded(_))
    }
}

impl fmt::Display for TopologySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopologySpec::Coarse => f.write_str("coarse"),
            TopologySpec::Discrete { include_empty: false } => f.write_str("discrete"),
            TopologySpec::Discrete { include_empty: true } => f.write_str("discrete+empty"),
            TopologySpec::EdgeGenerated => f.write_str("edge"),
            TopologySpec::LengthGraded(n) => write!(f, "graded:{n}"),
        }
    }
}

impl FromStr for TopologySpec {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "coarse" => Ok(TopologySpec::Coarse),
            "discrete" => Ok(TopologySpec::Discrete { include_empty: false }),
            "discrete+empty" => Ok(TopologySpec::Discrete { include_empty: true }),
            "edge" => Ok(TopologySpec::EdgeGenerated),
            _ => s
                .strip_prefix("graded:")
                .filter(|n| !n.is_empty() && n.bytes().all(|b| b.is_ascii_digit()))
                .and_then(|n| n.parse().ok())
                .map(TopologySpec::LengthGraded)
                .ok_or_else(|| ParseError::Topology(s.to_string())),
        }
    }
}

pub fn is_covering(t: &TopologySpec, s: &Sieve, q: &Quiver) -> bool {
    let v = s.codomain;
    match *t {
        // a sieve containing id_v is maximal
        TopologySpec::Coarse => s.contains_identity(),
        TopologySpec::Discrete { include_empty } => include_empty || !s.is_empty(),
        TopologySpec::EdgeGenerated => {
            let incoming = q.incoming(v);
            if incoming.is_empty() {
                s.contains_identity()
            } else {
                incoming.iter().any(|&e| s.contains(&q.edge_morphism(e)))
            }
        }
        TopologySpec::LengthGraded(n) => q
            .morphisms_into(v)
            .expect("sieve codomain is a vertex")
            .iter()
            .take_while(|p| p.len() <= n)
            .all(|p| s.contains(p)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Counterexample {
    /// The maximal sieve on `vertex` is not covering.
    MaximalNotCovering { vertex: VertexId },
    /// `sieve` covers but its pullback along `morphism` does not.
    PullbackNotCovering {
        sieve: Sieve,
        morphism: PathMorphism,
        pullback: Sieve,
    },
    /// `covering` covers, every pullback of `sieve` along a member of
    /// `covering` covers, yet `sieve` does not.
    LocalNotCovering { covering: Sieve, sieve: Sieve },
}

impl Counterexample {
    /// Re-derives the failure from scratch through [`is_covering`] and
    /// [`pullback_sieve`].
    pub fn replays(&self, t: &TopologySpec, q: &Quiver) -> bool {
        match self {
            Counterexample::MaximalNotCovering { vertex } => !is_covering(t, &Sieve::maximal(q, *vertex).unwrap(), q),
            Counterexample::PullbackNotCovering {
                sieve,
                morphism,
                pullback,
            } => {
                let recomputed = pullback_sieve(q, morphism, sieve).unwrap();
                is_covering(t, sieve, q) && recomputed == *pullback && !is_covering(t, &recomputed, q)
            }
            Counterexample::LocalNotCovering { covering, sieve } => {
                is_covering(t, covering, q)
                    && !is_covering(t, sieve, q)
                    && covering
                        .members()
                        .all(|f| is_covering(t, &pullback_sieve(q, f, sieve).unwrap(), q))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomResult {
    pub holds: bool,
    /// Present exactly when `holds` is false; the first failure in canonical
    /// (vertex, sieve, morphism) order.
    pub counterexample: Option<Counterexample>,
}

impl AxiomResult {
    fn from_first(counterexample: Option<Counterexample>) -> Self {
        AxiomResult {
            holds: counterexample.is_none(),
            counterexample,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub topology: TopologySpec,
    pub gt1: AxiomResult,
    pub gt2: AxiomResult,
    pub gt3: AxiomResult,
}

impl AxiomReport {
    pub fn all_hold(&self) -> bool {
        self.gt1.holds && self.gt2.holds && self.gt3.holds
    }
}

/// Exhaustively checks
///
/// * GT1: the maximal sieve covers every vertex;
/// * GT2: pullbacks of covering sieves along every morphism cover;
/// * GT3: a sieve whose pullbacks along all members of some covering sieve
///   cover is itself covering.
pub fn audit_axioms(t: &TopologySpec, q: &Quiver, limit: usize) -> Result<AxiomReport, SieveError> {
    let mut per_vertex = Vec::with_capacity(q.vertex_count());
    for v in q.vertices() {
        per_vertex.push(enumerate_sieves(q, v, limit)?);
    }

    let mut gt1 = None;
    let mut gt2 = None;
    let mut gt3 = None;
    for (v, sieves) in per_vertex.iter().enumerate() {
        let morphisms = q.morphisms_into(v)?;
        let covering: Vec<&Sieve> = sieves.iter().filter(|s| is_covering(t, s, q)).collect();

        if gt1.is_none() && !is_covering(t, &Sieve::maximal(q, v)?, q) {
            gt1 = Some(Counterexample::MaximalNotCovering { vertex: v });
        }

        if gt2.is_none() {
            'gt2: for s in &covering {
                for f in &morphisms {
                    let pullback = pullback_sieve(q, f, s)?;
                    if !is_covering(t, &pullback, q) {
                        gt2 = Some(Counterexample::PullbackNotCovering {
                            sieve: (*s).clone(),
                            morphism: f.clone(),
                            pullback,
                        });
                        break 'gt2;
                    }
                }
            }
        }

        if gt3.is_none() {
            'gt3: for s in &covering {
                for r in sieves.iter().filter(|r| !is_covering(t, r, q)) {
                    let mut locally_covering = true;
                    for f in s.members() {
                        if !is_covering(t, &pullback_sieve(q, f, r)?, q) {
                            locally_covering = false;
                            break;
                        }
                    }
                    if locally_covering {
                        gt3 = Some(Counterexample::LocalNotCovering {
                            covering: (*s).clone(),
                            sieve: r.clone(),
                        });
                        break 'gt3;
                    }
                }
            }
        }
    }

    Ok(AxiomReport {
        topology: *t,
        gt1: AxiomResult::from_first(gt1),
        gt2: AxiomResult::from_first(gt2),
        gt3: AxiomResult::from_first(gt3),
    })
}
