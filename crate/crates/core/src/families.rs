//! Named constructions.
//!
//! * `R_q`: A_q plus a star centred at `(m,0)_1` in every line block,
//!   an ({r,2r-3};5)-cage with r = q+1.
//! * `G_t` (q even): A_q plus stars on t+1 line blocks and perfect matchings
//!   on the rest, giving q+1 pairwise distinguishable ({r,2r-3};5)-cages.
//! * ({r,2r-5};5)-cages for primes q >= 7 from B_q(S,∅,0,1) and an amalgam,
//!   with separate parameter sets for q ≡ 3 and q ≡ 1 (mod 4).
//! * The ({5,6};5)-cage on 31 vertices (q = 4) and the ({6,7};5)-cage on
//!   43 vertices (q = 5, transversal reduction).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::gf::{is_prime, prime_power, FieldElement, FiniteField, GfError, MAX_ORDER};
use crate::graph::{BlockedGraph, GraphError, Slope, VertexLabel};
use crate::incidence::{build_aq, build_bq};
use crate::surgery::{
    amalgam, apply_reduction, AmalgamPlan, OverlayGraph, OverlayRole, ReductionMode, ReductionSpec, SurgeryError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("G_t requires q = 2^s, got q = {0}")]
    OddOrder(u32),
    #[error("G_t requires 0 <= t <= q, got t = {t} for q = {q}")]
    TOutOfRange { t: u32, q: u32 },
    #[error("the ({{r,2r-5}};5) construction requires q prime, got q = {0}")]
    NotPrime(u32),
    #[error(
        "the ({{r,2r-5}};5) construction requires q ≡ 3 (mod 4) with q >= 7 or q ≡ 1 (mod 4) with q >= 13, got q = {0}"
    )]
    TooSmall(u32),
    #[error("parameter table for q ≡ {expected} (mod 4) does not apply to q = {q}")]
    WrongResidue { expected: u32, q: u32 },
    #[error("{family} is only defined for q = {expected}, got q = {q}")]
    FixedOrder {
        family: &'static str,
        expected: u32,
        q: u32,
    },
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Surgery(#[from] SurgeryError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Bq,
    Aq,
    Rq,
    Gt { t: u32 },
    R2Rm5,
    Cage56,
    Cage67,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Bq => "bq",
            Family::Aq => "aq",
            Family::Rq => "rq",
            Family::Gt { .. } => "gt",
            Family::R2Rm5 => "r2rm5",
            Family::Cage56 => "cage56",
            Family::Cage67 => "cage67",
        }
    }
}

/// Families without their per-instance parameters, as named on the command
/// line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyKind {
    Bq,
    Aq,
    Rq,
    Gt,
    R2Rm5,
    Cage56,
    Cage67,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 7] = [
        FamilyKind::Bq,
        FamilyKind::Aq,
        FamilyKind::Rq,
        FamilyKind::Gt,
        FamilyKind::R2Rm5,
        FamilyKind::Cage56,
        FamilyKind::Cage67,
    ];

    pub fn name(self) -> &'static str {
        self.with_t(0).name()
    }

    /// The family, with `t` used only by G_t.
    pub fn with_t(self, t: u32) -> Family {
        match self {
            FamilyKind::Bq => Family::Bq,
            FamilyKind::Aq => Family::Aq,
            FamilyKind::Rq => Family::Rq,
            FamilyKind::Gt => Family::Gt { t },
            FamilyKind::R2Rm5 => Family::R2Rm5,
            FamilyKind::Cage56 => Family::Cage56,
            FamilyKind::Cage67 => Family::Cage67,
        }
    }

    /// Why `q` cannot be used, or `None` if it can.
    pub fn inadmissible(self, q: u32) -> Option<String> {
        let Some((p, _)) = prime_power(q) else {
            return Some(format!("q = {q} is not a prime power"));
        };
        if q > MAX_ORDER {
            return Some(format!("q = {q} exceeds the supported field order {MAX_ORDER}"));
        }
        match self {
            FamilyKind::Bq | FamilyKind::Aq | FamilyKind::Rq => None,
            FamilyKind::Gt if p != 2 => Some(format!("G_t requires q = 2^s, got q = {q}")),
            FamilyKind::Gt => None,
            FamilyKind::R2Rm5 if r2rm5_admissible(q) => None,
            FamilyKind::R2Rm5 => Some(format!(
                "the ({{r,2r-5}};5) construction requires a prime q ≡ 3 (mod 4) with q >= 7 or q ≡ 1 (mod 4) with q >= 13, got q = {q}"
            )),
            FamilyKind::Cage56 if q == 4 => None,
            FamilyKind::Cage67 if q == 5 => None,
            FamilyKind::Cage56 | FamilyKind::Cage67 => Some(format!("{} is only defined for one q", self.name())),
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown family `{s}`"))
    }
}

impl Family {
    pub fn kind(self) -> FamilyKind {
        match self {
            Family::Bq => FamilyKind::Bq,
            Family::Aq => FamilyKind::Aq,
            Family::Rq => FamilyKind::Rq,
            Family::Gt { .. } => FamilyKind::Gt,
            Family::R2Rm5 => FamilyKind::R2Rm5,
            Family::Cage56 => FamilyKind::Cage56,
            Family::Cage67 => FamilyKind::Cage67,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyId {
    pub family: Family,
    pub q: u32,
}

impl FamilyId {
    pub fn new(family: Family, q: u32) -> Self {
        Self { family, q }
    }

    /// Degree set and girth the instance is built to have.
    pub fn target(&self) -> (Vec<usize>, usize) {
        let q = self.q as usize;
        let mut degrees = match self.family {
            Family::Bq => vec![q],
            Family::Aq => vec![q, q + 1],
            Family::Rq | Family::Gt { .. } => vec![q + 1, 2 * q - 1],
            Family::R2Rm5 => vec![q + 1, 2 * q - 3],
            Family::Cage56 => vec![5, 6],
            Family::Cage67 => vec![6, 7],
        };
        degrees.dedup();
        let girth = match self.family {
            Family::Bq | Family::Aq => {
                if q >= 3 {
                    6
                } else {
                    8
                }
            }
            _ => 5,
        };
        (degrees, girth)
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Gt { t } => write!(f, "gt(q={},t={t})", self.q),
            other => write!(f, "{}(q={})", other.name(), self.q),
        }
    }
}

/// Reduction and amalgam data behind a surgery-built instance.
#[derive(Clone, Debug)]
pub struct SurgeryRecord {
    pub spec: ReductionSpec,
    pub plan: AmalgamPlan,
    /// The reduced graph before the amalgam.
    pub reduced: BlockedGraph,
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub id: FamilyId,
    pub graph: BlockedGraph,
    pub surgery: Option<SurgeryRecord>,
}

fn star_edges(f: &FiniteField, m: Slope) -> Vec<(VertexLabel, VertexLabel)> {
    let at = |b: FieldElement| VertexLabel {
        side: crate::graph::Side::Line,
        first: m,
        second: b,
    };
    f.nonzero().map(|b| (at(f.zero()), at(b))).collect()
}

fn matching_edges(f: &FiniteField, m: Slope) -> Vec<(VertexLabel, VertexLabel)> {
    let at = |b: FieldElement| VertexLabel {
        side: crate::graph::Side::Line,
        first: m,
        second: b,
    };
    let q = f.order() as i64;
    let mut edges = vec![(at(f.zero()), at(f.one()))];
    for i in (1..=q - 3).step_by(2) {
        edges.push((at(f.pow_alpha(i)), at(f.pow_alpha(i + 1))));
    }
    edges
}

fn all_slopes(f: &FiniteField) -> impl Iterator<Item = Slope> + '_ {
    f.elements().map(Slope::Field).chain(std::iter::once(Slope::Infinity))
}

/// R_q: the star D_m on every line block of A_q, including L_inf.
pub fn build_rq(field: Arc<FiniteField>) -> BlockedGraph {
    let aq = build_aq(Arc::clone(&field));
    let edges: Vec<_> = all_slopes(&field).flat_map(|m| star_edges(&field, m)).collect();
    aq.add_edges(&edges).expect("stars are disjoint from A_q")
}

/// Line-block slopes that receive a star in G_t.
pub fn star_slopes(field: &FiniteField, t: u32) -> BTreeSet<Slope> {
    let q = field.order() as i64;
    let mut slopes: BTreeSet<Slope> = if t as i64 == q {
        field.elements().map(Slope::Field).collect()
    } else {
        (q - t as i64 - 1..=q - 2)
            .map(|k| Slope::Field(field.pow_alpha(k)))
            .collect()
    };
    slopes.insert(Slope::Infinity);
    slopes
}

/// G_t for q = 2^s and 0 <= t <= q: stars on I_t ∪ {inf}, matchings on the
/// remaining line blocks. G_q is R_q.
pub fn build_gt(field: Arc<FiniteField>, t: u32) -> Result<BlockedGraph, FamilyError> {
    let q = field.order();
    if field.characteristic() != 2 {
        return Err(FamilyError::OddOrder(q));
    }
    if t > q {
        return Err(FamilyError::TOutOfRange { t, q });
    }
    let stars = star_slopes(&field, t);
    let edges: Vec<_> = all_slopes(&field)
        .flat_map(|m| {
            if stars.contains(&m) {
                star_edges(&field, m)
            } else {
                matching_edges(&field, m)
            }
        })
        .collect();
    Ok(build_aq(Arc::clone(&field)).add_edges(&edges)?)
}

/// Admissible orders for the ({r,2r-5};5) construction.
pub fn r2rm5_admissible(q: u32) -> bool {
    is_prime(q) && (q % 4 == 3 && q >= 7 || q % 4 == 1 && q >= 13)
}

fn r2rm5_check(field: &FiniteField, residue: u32) -> Result<(), FamilyError> {
    let q = field.order();
    if !field.is_prime_field() {
        return Err(FamilyError::NotPrime(q));
    }
    if q % 4 != residue {
        return Err(FamilyError::WrongResidue { expected: residue, q });
    }
    if !r2rm5_admissible(q) {
        return Err(FamilyError::TooSmall(q));
    }
    Ok(())
}

/// Shared shape of both ({r,2r-5};5) parameter tables. `s` = {s1, s2} is
/// deleted from P_0; H1 is the step-(q-1)/2 cycle with S cut out and the
/// gap closed by `patch`; G1 is the full step-(q-1)/2 cycle; H2 = G2 is a
/// star at 0 missing the two half-way labels, which hang off s1 and s2.
fn r2rm5_plan(
    f: &FiniteField,
    s1: i64,
    s2: i64,
    skip: i64,
    patch: (i64, i64),
) -> Result<(ReductionSpec, AmalgamPlan), FamilyError> {
    let q = f.order() as i64;
    let e = |k: i64| f.from_int(k);
    let half = (q - 1) / 2;
    let s: BTreeSet<FieldElement> = [e(s1), e(s2)].into();
    let all: BTreeSet<FieldElement> = f.elements().collect();
    let h1_labels: BTreeSet<FieldElement> = all.difference(&s).copied().collect();

    let excluded: BTreeSet<FieldElement> = [e(s1), e(s2), e(skip)].into();
    let h1_edges = f
        .elements()
        .filter(|j| !excluded.contains(j))
        .map(|j| (j, f.add(j, e(half))))
        .chain(std::iter::once((e(patch.0), e(patch.1))));
    let h1 = OverlayGraph::new(OverlayRole::H1, h1_labels, h1_edges)?;

    let g1 = OverlayGraph::new(
        OverlayRole::G1,
        all.clone(),
        f.elements().map(|j| (j, f.add(j, e(half)))),
    )?;

    let star = f
        .nonzero()
        .filter(|&j| j != e(half) && j != e(half + 1))
        .map(|j| (f.zero(), j))
        .chain([(e(s1), e(half)), (e(s2), e(half + 1))]);
    let star: Vec<_> = star.collect();
    let h2 = OverlayGraph::new(OverlayRole::H2, all.clone(), star.iter().copied())?;
    let g2 = OverlayGraph::new(OverlayRole::G2, all, star)?;

    let spec = ReductionSpec::standard(s, BTreeSet::new(), 0, 1);
    let plan = AmalgamPlan {
        mode: ReductionMode::Standard,
        h1,
        h2,
        g1,
        g2: Some(g2),
    };
    Ok((spec, plan))
}

/// Parameters for primes q ≡ 3 (mod 4), q >= 7.
pub fn synth_plan_mod3(field: &FiniteField) -> Result<(ReductionSpec, AmalgamPlan), FamilyError> {
    r2rm5_check(field, 3)?;
    let q = field.order() as i64;
    r2rm5_plan(
        field,
        (q + 1) / 4,
        (3 * q - 1) / 4,
        (3 * q + 3) / 4,
        ((3 * q + 3) / 4, (q - 3) / 4),
    )
}

/// Parameters for primes q ≡ 1 (mod 4), q >= 13.
///
/// The step-(q-1)/2 cycle runs s2 -> s1 here, so the edge cut out next to
/// S starts at (q+3)/4 and the path is closed by ((3q-3)/4, (q+3)/4).
pub fn synth_plan_mod1(field: &FiniteField) -> Result<(ReductionSpec, AmalgamPlan), FamilyError> {
    r2rm5_check(field, 1)?;
    let q = field.order() as i64;
    r2rm5_plan(
        field,
        (q - 1) / 4,
        (3 * q + 1) / 4,
        (q + 3) / 4,
        ((3 * q - 3) / 4, (q + 3) / 4),
    )
}

fn surgery_build(
    id: FamilyId,
    field: Arc<FiniteField>,
    spec: ReductionSpec,
    plan: AmalgamPlan,
) -> Result<Construction, FamilyError> {
    let reduced = apply_reduction(&build_bq(field), &spec)?;
    let graph = amalgam(&reduced, &plan)?;
    Ok(Construction {
        id,
        graph,
        surgery: Some(SurgeryRecord { spec, plan, reduced }),
    })
}

/// The ({r,2r-5};5)-cage B*_q(S,∅,0,1), r = q + 1.
pub fn build_r2rm5_cage(field: Arc<FiniteField>) -> Result<Construction, FamilyError> {
    let q = field.order();
    if !field.is_prime_field() {
        return Err(FamilyError::NotPrime(q));
    }
    if !r2rm5_admissible(q) {
        return Err(FamilyError::TooSmall(q));
    }
    let (spec, plan) = if q % 4 == 3 {
        synth_plan_mod3(&field)?
    } else {
        synth_plan_mod1(&field)?
    };
    surgery_build(FamilyId::new(Family::R2Rm5, q), field, spec, plan)
}

/// Reduction and overlays for the ({5,6};5)-cage over GF(4).
pub fn cage56_plan(f: &FiniteField) -> Result<(ReductionSpec, AmalgamPlan), FamilyError> {
    let (zero, one, a) = (f.zero(), f.one(), f.alpha());
    let a2 = f.mul(a, a);
    let all: BTreeSet<FieldElement> = f.elements().collect();
    let nonzero: BTreeSet<FieldElement> = f.nonzero().collect();
    let h1 = OverlayGraph::new(OverlayRole::H1, nonzero, [(one, a2), (a2, a)])?;
    let g1 = OverlayGraph::new(OverlayRole::G1, all.clone(), [(zero, a), (one, a2)])?;
    let path = [(a2, zero), (zero, one), (one, a)];
    let h2 = OverlayGraph::new(OverlayRole::H2, all.clone(), path)?;
    let g2 = OverlayGraph::new(OverlayRole::G2, all, path)?;
    let spec = ReductionSpec::standard([zero].into(), BTreeSet::new(), 0, 0);
    let plan = AmalgamPlan {
        mode: ReductionMode::Standard,
        h1,
        h2,
        g1,
        g2: Some(g2),
    };
    Ok((spec, plan))
}

pub fn build_cage56() -> Result<Construction, FamilyError> {
    let field = Arc::new(FiniteField::new(2, 2)?);
    let (spec, plan) = cage56_plan(&field)?;
    surgery_build(FamilyId::new(Family::Cage56, 4), field, spec, plan)
}

/// Transversal reduction and overlays for the ({6,7};5)-cage over GF(5).
pub fn cage67_plan(f: &FiniteField) -> Result<(ReductionSpec, AmalgamPlan), FamilyError> {
    let e = |k: i64| f.from_int(k);
    let s: BTreeSet<FieldElement> = [e(0), e(3)].into();
    let t: BTreeSet<FieldElement> = [e(3)].into();
    let all: BTreeSet<FieldElement> = f.elements().collect();
    let h1 = OverlayGraph::new(
        OverlayRole::H1,
        all.difference(&s).copied().collect(),
        [(e(2), e(4)), (e(4), e(1))],
    )?;
    let g1 = OverlayGraph::new(
        OverlayRole::G1,
        all.clone(),
        [(e(0), e(2)), (e(2), e(4)), (e(4), e(1)), (e(1), e(3)), (e(3), e(0))],
    )?;
    let h2 = OverlayGraph::new(
        OverlayRole::H2,
        all.difference(&t).copied().collect(),
        [(e(4), e(0)), (e(0), e(1)), (e(1), e(2))],
    )?;
    let spec = ReductionSpec::transversal(s, t);
    let plan = AmalgamPlan {
        mode: ReductionMode::Transversal,
        h1,
        h2,
        g1,
        g2: None,
    };
    Ok((spec, plan))
}

pub fn build_cage67() -> Result<Construction, FamilyError> {
    let field = Arc::new(FiniteField::new(5, 1)?);
    let (spec, plan) = cage67_plan(&field)?;
    surgery_build(FamilyId::new(Family::Cage67, 5), field, spec, plan)
}

/// Builds any family instance by id.
pub fn build(id: FamilyId) -> Result<Construction, FamilyError> {
    let plain = |graph| Construction {
        id,
        graph,
        surgery: None,
    };
    match id.family {
        Family::Cage56 if id.q != 4 => Err(FamilyError::FixedOrder {
            family: "cage56",
            expected: 4,
            q: id.q,
        }),
        Family::Cage67 if id.q != 5 => Err(FamilyError::FixedOrder {
            family: "cage67",
            expected: 5,
            q: id.q,
        }),
        Family::Cage56 => build_cage56(),
        Family::Cage67 => build_cage67(),
        Family::R2Rm5 => {
            if !is_prime(id.q) {
                return Err(FamilyError::NotPrime(id.q));
            }
            build_r2rm5_cage(Arc::new(FiniteField::with_order(id.q)?))
        }
        Family::Bq => Ok(plain(build_bq(Arc::new(FiniteField::with_order(id.q)?)))),
        Family::Aq => Ok(plain(build_aq(Arc::new(FiniteField::with_order(id.q)?)))),
        Family::Rq => Ok(plain(build_rq(Arc::new(FiniteField::with_order(id.q)?)))),
        Family::Gt { t } => Ok(plain(build_gt(Arc::new(FiniteField::with_order(id.q)?), t)?)),
    }
}
