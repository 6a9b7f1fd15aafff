//! Reductions of B_q and the weighted amalgam.
//!
//! Reduction 1 deletes points `(0,s)_0, s in S` and lines `(0,t)_1, t in T`.
//! Reduction 2 deletes whole blocks indexed by trailing powers of alpha.
//! The transversal variant deletes `(j,t)_1` from every line block instead
//! of only from L_0. An amalgam then superimposes small overlay graphs on
//! the surviving blocks, identifying overlay labels with second coordinates.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::gf::{FieldElement, FiniteField, GfError};
use crate::graph::{BlockId, BlockedGraph, GraphError, Side, Slope, VertexLabel};
use crate::verify;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurgeryError {
    #[error("T must be a subset of S")]
    TNotSubsetOfS,
    #[error("block counts must satisfy 0 <= u0 <= u1 < q - 1, got u0={u0}, u1={u1}, q={q}")]
    BlockBounds { u0: u32, u1: u32, q: u32 },
    #[error("transversal reductions remove no whole blocks")]
    TransversalBlocks,
    #[error("overlay {role} has a loop at {label}")]
    OverlayLoop { role: OverlayRole, label: FieldElement },
    #[error("overlay {role} edge uses label {label} outside its vertex set")]
    OverlayLabel { role: OverlayRole, label: FieldElement },
    #[error("overlay {role} has girth {girth}, at least 5 is required")]
    OverlayGirth { role: OverlayRole, girth: usize },
    #[error("overlay {role} label {label} is missing from block {block}")]
    LabelMissing {
        role: OverlayRole,
        block: String,
        label: FieldElement,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Field(#[from] GfError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReductionMode {
    /// Reductions 1 and 2: S_0 from P_0, T_0 from L_0, then whole blocks.
    Standard,
    /// S_0 from P_0 and T_j from every line block L_j.
    Transversal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionSpec {
    pub s: BTreeSet<FieldElement>,
    pub t: BTreeSet<FieldElement>,
    pub u0: u32,
    pub u1: u32,
    pub mode: ReductionMode,
}

impl ReductionSpec {
    pub fn standard(s: BTreeSet<FieldElement>, t: BTreeSet<FieldElement>, u0: u32, u1: u32) -> Self {
        Self {
            s,
            t,
            u0,
            u1,
            mode: ReductionMode::Standard,
        }
    }

    pub fn transversal(s: BTreeSet<FieldElement>, t: BTreeSet<FieldElement>) -> Self {
        Self {
            s,
            t,
            u0: 0,
            u1: 0,
            mode: ReductionMode::Transversal,
        }
    }

    pub fn validate(&self, field: &FiniteField) -> Result<(), SurgeryError> {
        for &e in self.s.iter().chain(&self.t) {
            field.check(e)?;
        }
        if !self.t.is_subset(&self.s) {
            return Err(SurgeryError::TNotSubsetOfS);
        }
        match self.mode {
            ReductionMode::Standard => check_block_bounds(self.u0, self.u1, field.order()),
            ReductionMode::Transversal if self.u0 != 0 || self.u1 != 0 => Err(SurgeryError::TransversalBlocks),
            ReductionMode::Transversal => Ok(()),
        }
    }

    /// Order of the reduced graph, predicted from the parameters.
    pub fn reduced_order(&self, q: u32) -> usize {
        let q = q as usize;
        let (s, t) = (self.s.len(), self.t.len());
        match self.mode {
            ReductionMode::Standard => 2 * q * q - q * (self.u0 + self.u1) as usize - s - t,
            ReductionMode::Transversal => 2 * q * q - s - q * t,
        }
    }
}

fn check_block_bounds(u0: u32, u1: u32, q: u32) -> Result<(), SurgeryError> {
    if u0 > u1 || u1 + 1 >= q {
        return Err(SurgeryError::BlockBounds { u0, u1, q });
    }
    Ok(())
}

/// Indices of the `u` blocks removed by Reduction 2: alpha^(q-j), j = 2..=u+1.
pub fn removed_block_indices(field: &FiniteField, u: u32) -> Vec<FieldElement> {
    let q = field.order() as i64;
    (2..=u as i64 + 1).map(|j| field.pow_alpha(q - j)).collect()
}

fn check_subset(
    field: &FiniteField,
    s: &BTreeSet<FieldElement>,
    t: &BTreeSet<FieldElement>,
) -> Result<(), SurgeryError> {
    for &e in s.iter().chain(t) {
        field.check(e)?;
    }
    if !t.is_subset(s) {
        return Err(SurgeryError::TNotSubsetOfS);
    }
    Ok(())
}

/// Reduction 1: B_q(S,T) = B_q - S_0 - T_0.
pub fn reduce1(
    b: &BlockedGraph,
    s: &BTreeSet<FieldElement>,
    t: &BTreeSet<FieldElement>,
) -> Result<BlockedGraph, SurgeryError> {
    let f = b.field();
    check_subset(f, s, t)?;
    let zero = f.zero();
    let remove: BTreeSet<VertexLabel> = s
        .iter()
        .map(|&y| VertexLabel::point(zero, y))
        .chain(t.iter().map(|&b| VertexLabel::line(zero, b)))
        .collect();
    Ok(b.delete_vertices(&remove)?)
}

/// Reduction 2: drops P_x for x in U_0 and L_m for m in U_1, whatever is
/// left of them.
pub fn reduce2(g: &BlockedGraph, u0: u32, u1: u32) -> Result<BlockedGraph, SurgeryError> {
    let f = g.field();
    check_block_bounds(u0, u1, f.order())?;
    let points: BTreeSet<Slope> = removed_block_indices(f, u0).into_iter().map(Slope::Field).collect();
    let lines: BTreeSet<Slope> = removed_block_indices(f, u1).into_iter().map(Slope::Field).collect();
    let remove: BTreeSet<VertexLabel> = g
        .labels()
        .iter()
        .filter(|l| match l.side {
            Side::Point => points.contains(&l.first),
            Side::Line => lines.contains(&l.first),
        })
        .copied()
        .collect();
    Ok(g.delete_vertices(&remove)?)
}

/// B_q - S_0 - union_j T_j.
pub fn reduce_transversal(
    b: &BlockedGraph,
    s: &BTreeSet<FieldElement>,
    t: &BTreeSet<FieldElement>,
) -> Result<BlockedGraph, SurgeryError> {
    let f = b.field();
    check_subset(f, s, t)?;
    let zero = f.zero();
    let mut remove: BTreeSet<VertexLabel> = s.iter().map(|&y| VertexLabel::point(zero, y)).collect();
    for j in f.elements() {
        remove.extend(t.iter().map(|&b| VertexLabel::line(j, b)));
    }
    Ok(b.delete_vertices(&remove)?)
}

pub fn apply_reduction(b: &BlockedGraph, spec: &ReductionSpec) -> Result<BlockedGraph, SurgeryError> {
    spec.validate(b.field())?;
    match spec.mode {
        ReductionMode::Standard => reduce2(&reduce1(b, &spec.s, &spec.t)?, spec.u0, spec.u1),
        ReductionMode::Transversal => reduce_transversal(b, &spec.s, &spec.t),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OverlayRole {
    H1,
    H2,
    G1,
    G2,
}

impl fmt::Display for OverlayRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OverlayRole::H1 => "H1",
            OverlayRole::H2 => "H2",
            OverlayRole::G1 => "G1",
            OverlayRole::G2 => "G2",
        };
        f.write_str(s)
    }
}

/// A graph on second coordinates, to be superimposed on a block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlayGraph {
    role: OverlayRole,
    labels: BTreeSet<FieldElement>,
    edges: BTreeSet<(FieldElement, FieldElement)>,
}

impl OverlayGraph {
    pub fn new<I>(role: OverlayRole, labels: BTreeSet<FieldElement>, edges: I) -> Result<Self, SurgeryError>
    where
        I: IntoIterator<Item = (FieldElement, FieldElement)>,
    {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(SurgeryError::OverlayLoop { role, label: u });
            }
            for x in [u, v] {
                if !labels.contains(&x) {
                    return Err(SurgeryError::OverlayLabel { role, label: x });
                }
            }
            set.insert((u.min(v), u.max(v)));
        }
        let overlay = Self {
            role,
            labels,
            edges: set,
        };
        if let Some(g) = verify::girth(&overlay.to_simple()).length() {
            if g < 5 {
                return Err(SurgeryError::OverlayGirth { role, girth: g });
            }
        }
        Ok(overlay)
    }

    pub fn empty(role: OverlayRole, labels: BTreeSet<FieldElement>) -> Self {
        Self {
            role,
            labels,
            edges: BTreeSet::new(),
        }
    }

    pub fn role(&self) -> OverlayRole {
        self.role
    }

    pub fn labels(&self) -> &BTreeSet<FieldElement> {
        &self.labels
    }

    /// Edges with the smaller encoding first.
    pub fn edges(&self) -> &BTreeSet<(FieldElement, FieldElement)> {
        &self.edges
    }

    pub fn has_edge(&self, u: FieldElement, v: FieldElement) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn degree(&self, y: FieldElement) -> usize {
        self.edges.iter().filter(|(u, v)| *u == y || *v == y).count()
    }

    pub fn to_simple(&self) -> crate::graph::SimpleGraph {
        let index: BTreeMap<FieldElement, usize> = self.labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        crate::graph::SimpleGraph::from_edges(self.labels.len(), self.edges.iter().map(|(u, v)| (index[u], index[v])))
            .expect("overlay edges are simple")
    }
}

/// Weight classes {d, -d} of overlay edges, each stored as the member with
/// the smaller encoding.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CayleyColourSet {
    classes: BTreeSet<FieldElement>,
}

impl CayleyColourSet {
    pub fn contains(&self, d: FieldElement) -> bool {
        self.classes.contains(&d)
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = FieldElement> + '_ {
        self.classes.iter().copied()
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self {
            classes: self.classes.intersection(&other.classes).copied().collect(),
        }
    }
}

impl FromIterator<FieldElement> for CayleyColourSet {
    fn from_iter<I: IntoIterator<Item = FieldElement>>(iter: I) -> Self {
        Self {
            classes: iter.into_iter().collect(),
        }
    }
}

/// Canonical class of the weight +-(u - v).
pub fn weight_class(field: &FiniteField, u: FieldElement, v: FieldElement) -> FieldElement {
    let d = field.sub(u, v);
    d.min(field.neg(d))
}

pub fn weight_classes(overlay: &OverlayGraph, field: &FiniteField) -> CayleyColourSet {
    overlay.edges.iter().map(|&(u, v)| weight_class(field, u, v)).collect()
}

/// Overlays for the four kinds of surviving block. In transversal mode `h2`
/// goes into every line block and `g2` is absent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmalgamPlan {
    pub mode: ReductionMode,
    pub h1: OverlayGraph,
    pub h2: OverlayGraph,
    pub g1: OverlayGraph,
    pub g2: Option<OverlayGraph>,
}

impl AmalgamPlan {
    fn overlays(&self) -> impl Iterator<Item = &OverlayGraph> {
        [&self.h1, &self.h2, &self.g1].into_iter().chain(self.g2.as_ref())
    }

    /// Overlay applied to a block of the reduced graph, if any.
    pub fn overlay_for(&self, block: BlockId) -> Option<&OverlayGraph> {
        let first = block.first.as_field()?;
        match (block.side, first.is_zero(), self.mode) {
            (Side::Point, true, _) => Some(&self.h1),
            (Side::Point, false, _) => Some(&self.g1),
            (Side::Line, _, ReductionMode::Transversal) => Some(&self.h2),
            (Side::Line, true, ReductionMode::Standard) => Some(&self.h2),
            (Side::Line, false, ReductionMode::Standard) => self.g2.as_ref(),
        }
    }
}

/// Outcome of checking the girth-5 hypotheses on a plan.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HypothesisReport {
    pub violations: Vec<String>,
    /// Weight classes shared across the bipartition where only edge-set
    /// disjointness is required.
    pub notes: Vec<String>,
}

impl HypothesisReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn shared_edges(a: &OverlayGraph, b: &OverlayGraph) -> Vec<(FieldElement, FieldElement)> {
    a.edges.intersection(&b.edges).copied().collect()
}

/// Checks the disjointness hypotheses under which the amalgam has girth at
/// least 5.
///
/// Standard plans need M_H1, M_H2 disjoint, M_H1, M_G2 disjoint, M_H2, M_G1
/// disjoint and no weight class shared by G1 and G2. Transversal plans need
/// no weight class shared by H1 and H2 nor by G1 and H2.
pub fn check_amalgam_hypotheses(plan: &AmalgamPlan, field: &FiniteField) -> Result<HypothesisReport, SurgeryError> {
    for overlay in plan.overlays() {
        for &e in &overlay.labels {
            field.check(e)?;
        }
    }
    let mut report = HypothesisReport::default();
    let omega = |o: &OverlayGraph| weight_classes(o, field);
    let fmt_classes = |c: &CayleyColourSet| c.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");

    let edge_check = |a: &OverlayGraph, b: &OverlayGraph, report: &mut HypothesisReport| {
        let shared = shared_edges(a, b);
        if !shared.is_empty() {
            report.violations.push(format!(
                "M_{} and M_{} share edges {:?}",
                a.role,
                b.role,
                pairs(&shared)
            ));
        } else {
            let classes = omega(a).intersection(&omega(b));
            if !classes.is_empty() {
                report.notes.push(format!(
                    "Omega({}) and Omega({}) share classes {{{}}} but the edge sets are disjoint",
                    a.role,
                    b.role,
                    fmt_classes(&classes)
                ));
            }
        }
    };
    let class_check = |a: &OverlayGraph, b: &OverlayGraph, report: &mut HypothesisReport| {
        let classes = omega(a).intersection(&omega(b));
        if !classes.is_empty() {
            report.violations.push(format!(
                "Omega({}) and Omega({}) share classes {{{}}}",
                a.role,
                b.role,
                fmt_classes(&classes)
            ));
        }
    };

    match plan.mode {
        ReductionMode::Standard => {
            let empty_g2;
            let g2 = match &plan.g2 {
                Some(g2) => g2,
                None => {
                    empty_g2 = OverlayGraph::empty(OverlayRole::G2, BTreeSet::new());
                    &empty_g2
                }
            };
            edge_check(&plan.h1, &plan.h2, &mut report);
            edge_check(&plan.h1, g2, &mut report);
            edge_check(&plan.h2, &plan.g1, &mut report);
            class_check(&plan.g1, g2, &mut report);
        }
        ReductionMode::Transversal => {
            class_check(&plan.h1, &plan.h2, &mut report);
            class_check(&plan.g1, &plan.h2, &mut report);
        }
    }
    Ok(report)
}

fn pairs(edges: &[(FieldElement, FieldElement)]) -> Vec<(u32, u32)> {
    edges.iter().map(|(u, v)| (u.value(), v.value())).collect()
}

/// Lifts each overlay edge into its block. The order is unchanged and every
/// added edge joins two vertices of the same block.
pub fn amalgam(g: &BlockedGraph, plan: &AmalgamPlan) -> Result<BlockedGraph, SurgeryError> {
    let mut added = Vec::new();
    for (id, members) in g.blocks() {
        let Some(overlay) = plan.overlay_for(id) else {
            continue;
        };
        let present: BTreeSet<FieldElement> = members.iter().map(|l| l.second).collect();
        if let Some(&label) = overlay.labels.iter().find(|l| !present.contains(l)) {
            return Err(SurgeryError::LabelMissing {
                role: overlay.role,
                block: id.to_string(),
                label,
            });
        }
        let lift = |y: FieldElement| VertexLabel {
            side: id.side,
            first: id.first,
            second: y,
        };
        added.extend(overlay.edges.iter().map(|&(u, v)| (lift(u), lift(v))));
    }
    Ok(g.add_edges(&added)?)
}

/// Degree of every vertex of `reduced` after amalgamating `plan`, computed
/// from the reduction parameters and overlay degrees alone.
pub fn predict_degrees(
    reduced: &BlockedGraph,
    plan: &AmalgamPlan,
    spec: &ReductionSpec,
) -> BTreeMap<VertexLabel, usize> {
    let q = reduced.field().order() as usize;
    let (u0, u1) = (spec.u0 as usize, spec.u1 as usize);
    let in_s = |y: FieldElement| spec.s.contains(&y) as usize;
    let in_t = |y: FieldElement| spec.t.contains(&y) as usize;
    let in_s_minus_t = |y: FieldElement| (spec.s.contains(&y) && !spec.t.contains(&y)) as usize;
    let d = |o: Option<&OverlayGraph>, y: FieldElement| o.map_or(0, |o| o.degree(y));

    let mut out = BTreeMap::new();
    for label in reduced.labels() {
        let Some(first) = label.first.as_field() else {
            continue;
        };
        let y = label.second;
        let overlay = plan.overlay_for(label.block());
        let degree = match (spec.mode, label.side, first.is_zero()) {
            (ReductionMode::Standard, Side::Point, true) => q - u1 + d(overlay, y),
            (ReductionMode::Standard, Side::Line, true) => q - u0 - in_s_minus_t(y) + d(overlay, y),
            (ReductionMode::Standard, Side::Point, false) => q - u1 - in_t(y) + d(overlay, y),
            (ReductionMode::Standard, Side::Line, false) => q - u0 - in_s(y) + d(overlay, y),
            (ReductionMode::Transversal, Side::Point, true) => q + d(overlay, y),
            (ReductionMode::Transversal, Side::Point, false) => q - spec.t.len() + d(overlay, y),
            (ReductionMode::Transversal, Side::Line, _) => q - in_s(y) + d(overlay, y),
        };
        out.insert(*label, degree);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::build_bq;
    use std::sync::Arc;

    fn gf(q: u32) -> Arc<FiniteField> {
        Arc::new(FiniteField::with_order(q).unwrap())
    }

    fn set(f: &FiniteField, vals: &[u32]) -> BTreeSet<FieldElement> {
        vals.iter().map(|&v| f.element(v).unwrap()).collect()
    }

    #[test]
    fn reduce1_q7_removes_two_points() {
        let f = gf(7);
        let b = build_bq(f.clone());
        let s = set(&f, &[2, 5]);
        let r = reduce1(&b, &s, &BTreeSet::new()).unwrap();
        assert_eq!(r.order(), 96);
        let low: BTreeSet<VertexLabel> = r
            .labels()
            .iter()
            .filter(|v| r.degree(v).unwrap() == 6)
            .copied()
            .collect();
        let expected: BTreeSet<VertexLabel> = f
            .elements()
            .flat_map(|j| {
                [
                    VertexLabel::line(j, f.element(2).unwrap()),
                    VertexLabel::line(j, f.element(5).unwrap()),
                ]
            })
            .collect();
        assert_eq!(low, expected);
    }

    #[test]
    fn reduce1_identity_and_errors() {
        let f = gf(5);
        let b = build_bq(f.clone());
        assert_eq!(reduce1(&b, &BTreeSet::new(), &BTreeSet::new()).unwrap(), b);
        assert_eq!(
            reduce1(&b, &set(&f, &[1]), &set(&f, &[2])).unwrap_err(),
            SurgeryError::TNotSubsetOfS
        );
    }

    #[test]
    fn reduce1_q5_s_equals_t() {
        let f = gf(5);
        let b = build_bq(f.clone());
        let zero = set(&f, &[0]);
        let r = reduce1(&b, &zero, &zero).unwrap();
        assert_eq!(r.order(), 48);
        for i in f.nonzero() {
            assert_eq!(r.degree(&VertexLabel::point(i, f.zero())).unwrap(), 4);
            assert_eq!(r.degree(&VertexLabel::line(i, f.zero())).unwrap(), 4);
        }
    }

    #[test]
    fn reduce2_q7_drops_l5() {
        let f = gf(7);
        assert_eq!(
            removed_block_indices(&f, 1),
            set(&f, &[5]).into_iter().collect::<Vec<_>>()
        );
        let b = build_bq(f.clone());
        let r = reduce2(&b, 0, 1).unwrap();
        assert_eq!(r.order(), 98 - 7);
        assert!(r
            .labels()
            .iter()
            .all(|l| !(l.side == Side::Line && l.first == Slope::Field(f.element(5).unwrap()))));
        assert_eq!(reduce2(&b, 0, 0).unwrap(), b);
        let r11 = reduce2(&b, 1, 1).unwrap();
        assert_eq!(r11.order(), 84);
        assert_eq!(r11.degree_set(), BTreeSet::from([6]));
    }

    #[test]
    fn reduce2_bounds() {
        let b = build_bq(gf(5));
        assert!(matches!(reduce2(&b, 2, 1), Err(SurgeryError::BlockBounds { .. })));
        assert!(matches!(reduce2(&b, 0, 4), Err(SurgeryError::BlockBounds { .. })));
        assert!(reduce2(&b, 0, 3).is_ok());
    }

    #[test]
    fn transversal_q5() {
        let f = gf(5);
        let b = build_bq(f.clone());
        let s = set(&f, &[0, 3]);
        let t = set(&f, &[3]);
        let r = reduce_transversal(&b, &s, &t).unwrap();
        assert_eq!(r.order(), 43);
        assert_eq!(r.degree(&VertexLabel::point(f.one(), f.zero())).unwrap(), 4);
        assert_eq!(r.degree_set(), BTreeSet::from([4, 5]));
        let plain = reduce_transversal(&b, &s, &BTreeSet::new()).unwrap();
        assert_eq!(plain, reduce1(&b, &s, &BTreeSet::new()).unwrap());
    }

    #[test]
    fn weight_classes_examples() {
        let f7 = gf(7);
        let labels: BTreeSet<_> = f7.elements().collect();
        let g1 = OverlayGraph::new(
            OverlayRole::G1,
            labels,
            f7.elements().map(|j| (j, f7.add(j, f7.element(3).unwrap()))),
        )
        .unwrap();
        let classes: Vec<u32> = weight_classes(&g1, &f7).iter().map(|d| d.value()).collect();
        assert_eq!(classes, vec![3]);

        let f4 = gf(4);
        let a = f4.alpha();
        let a2 = f4.mul(a, a);
        let h2 = OverlayGraph::new(
            OverlayRole::H2,
            f4.elements().collect(),
            [(a2, f4.zero()), (f4.zero(), f4.one()), (f4.one(), a)],
        )
        .unwrap();
        let classes: BTreeSet<FieldElement> = weight_classes(&h2, &f4).iter().collect();
        assert_eq!(classes, BTreeSet::from([f4.one(), a2]));
    }

    #[test]
    fn overlay_validation() {
        let f = gf(5);
        let labels: BTreeSet<_> = f.elements().collect();
        let e = |v| f.element(v).unwrap();
        let square = [(e(0), e(1)), (e(1), e(2)), (e(2), e(3)), (e(3), e(0))];
        assert!(matches!(
            OverlayGraph::new(OverlayRole::G1, labels.clone(), square),
            Err(SurgeryError::OverlayGirth { girth: 4, .. })
        ));
        assert!(matches!(
            OverlayGraph::new(OverlayRole::G1, labels.clone(), [(e(1), e(1))]),
            Err(SurgeryError::OverlayLoop { .. })
        ));
        assert!(matches!(
            OverlayGraph::new(OverlayRole::H1, set(&f, &[1, 2]), [(e(1), e(3))]),
            Err(SurgeryError::OverlayLabel { .. })
        ));
    }

    #[test]
    fn empty_plan_is_identity_and_passes() {
        let f = gf(5);
        let b = build_bq(f.clone());
        let all: BTreeSet<_> = f.elements().collect();
        let plan = AmalgamPlan {
            mode: ReductionMode::Standard,
            h1: OverlayGraph::empty(OverlayRole::H1, all.clone()),
            h2: OverlayGraph::empty(OverlayRole::H2, all.clone()),
            g1: OverlayGraph::empty(OverlayRole::G1, all.clone()),
            g2: Some(OverlayGraph::empty(OverlayRole::G2, all)),
        };
        assert!(check_amalgam_hypotheses(&plan, &f).unwrap().passed());
        assert_eq!(amalgam(&b, &plan).unwrap(), b);
    }

    #[test]
    fn shared_g_classes_are_a_violation() {
        let f = gf(7);
        let all: BTreeSet<_> = f.elements().collect();
        let e = |v| f.element(v).unwrap();
        let g1 = OverlayGraph::new(OverlayRole::G1, all.clone(), f.elements().map(|j| (j, f.add(j, e(3))))).unwrap();
        let g2 = OverlayGraph::new(OverlayRole::G2, all.clone(), [(e(0), e(3))]).unwrap();
        let plan = AmalgamPlan {
            mode: ReductionMode::Standard,
            h1: OverlayGraph::empty(OverlayRole::H1, all.clone()),
            h2: OverlayGraph::empty(OverlayRole::H2, all),
            g1,
            g2: Some(g2),
        };
        let report = check_amalgam_hypotheses(&plan, &f).unwrap();
        assert!(!report.passed());
        assert!(report.violations[0].contains("Omega(G1) and Omega(G2)"));
    }

    #[test]
    fn amalgam_rejects_missing_label() {
        let f = gf(5);
        let b = build_bq(f.clone());
        let s = set(&f, &[0]);
        let reduced = reduce1(&b, &s, &BTreeSet::new()).unwrap();
        let all: BTreeSet<_> = f.elements().collect();
        let h1 = OverlayGraph::new(OverlayRole::H1, all.clone(), [(f.zero(), f.one())]).unwrap();
        let plan = AmalgamPlan {
            mode: ReductionMode::Standard,
            h1,
            h2: OverlayGraph::empty(OverlayRole::H2, all.clone()),
            g1: OverlayGraph::empty(OverlayRole::G1, all),
            g2: None,
        };
        assert!(matches!(
            amalgam(&reduced, &plan),
            Err(SurgeryError::LabelMissing { .. })
        ));
    }
}
