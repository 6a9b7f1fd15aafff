//! Incidence graphs of the biaffine plane (B_q) and the affine plane (A_q),
//! and a structural check of the well-known properties of B_q.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::gf::FiniteField;
use crate::graph::{BlockId, BlockedGraph, Side, Slope, VertexLabel};
use crate::verify;

/// B_q: points (x,y)_0 and lines (m,b)_1 over GF(q), with (x,y)_0 ~ (m,b)_1
/// iff y = m x + b.
pub fn build_bq(field: Arc<FiniteField>) -> BlockedGraph {
    let f = &*field;
    let mut labels = Vec::with_capacity(2 * (f.order() * f.order()) as usize);
    let mut edges = Vec::with_capacity((f.order() as usize).pow(3));
    for x in f.elements() {
        for y in f.elements() {
            labels.push(VertexLabel::point(x, y));
            labels.push(VertexLabel::line(x, y));
        }
    }
    for x in f.elements() {
        for m in f.elements() {
            let mx = f.mul(m, x);
            for b in f.elements() {
                let y = f.add(mx, b);
                edges.push((VertexLabel::point(x, y), VertexLabel::line(m, b)));
            }
        }
    }
    BlockedGraph::new(Arc::clone(&field), labels, &edges).expect("B_q is a simple graph")
}

/// A_q: B_q plus the parallel class (inf, x)_1 joined to every point of P_x.
pub fn build_aq(field: Arc<FiniteField>) -> BlockedGraph {
    let bq = build_bq(Arc::clone(&field));
    let f = &*field;
    let mut labels = bq.labels().to_vec();
    let mut edges: Vec<_> = bq.edges().collect();
    for x in f.elements() {
        let at_infinity = VertexLabel::line_at_infinity(x);
        labels.push(at_infinity);
        for y in f.elements() {
            edges.push((at_infinity, VertexLabel::point(x, y)));
        }
    }
    BlockedGraph::new(field, labels, &edges).expect("A_q is a simple graph")
}

/// Items of the structural claim about B_q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StructureItem {
    /// q-regular, order 2q^2, girth 6 (q >= 3).
    RegularOrderGirth,
    /// Blocks P_x and L_m partition the vertices, q blocks of size q per side.
    BlockPartition,
    /// Every P_x-L_m pair is joined by a perfect matching, and those are the
    /// only edges.
    PerfectMatchings,
    /// P_0 and L_0 are joined straight to all their neighbours.
    Straightness,
}

impl fmt::Display for StructureItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StructureItem::RegularOrderGirth => "(i) regularity, order, girth",
            StructureItem::BlockPartition => "(ii) block partition",
            StructureItem::PerfectMatchings => "(iii) block-pair perfect matchings",
            StructureItem::Straightness => "(iv) straight matchings at P_0 and L_0",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureFailure {
    pub item: StructureItem,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StructureReport {
    pub failures: Vec<StructureFailure>,
    /// Girth as computed by the oracle, reported even for q = 2.
    pub girth: Option<usize>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failed_items(&self) -> BTreeSet<StructureItem> {
        self.failures.iter().map(|f| f.item).collect()
    }

    fn fail(&mut self, item: StructureItem, detail: String) {
        self.failures.push(StructureFailure { item, detail });
    }
}

/// Checks items (i)-(iv) for a graph that claims to be B_q.
/// Vertex transitivity is not checked.
pub fn validate_bq_structure(g: &BlockedGraph, field: &FiniteField) -> StructureReport {
    use StructureItem::*;
    let q = field.order() as usize;
    let mut report = StructureReport::default();

    // (i)
    if g.order() != 2 * q * q {
        report.fail(RegularOrderGirth, format!("order {} != {}", g.order(), 2 * q * q));
    }
    let degrees = g.degree_set();
    if degrees.len() != 1 || !degrees.contains(&q) {
        report.fail(RegularOrderGirth, format!("degree set {degrees:?} is not {{{q}}}"));
    }
    let girth = verify::girth(g.graph()).length();
    report.girth = girth;
    if q >= 3 && girth != Some(6) {
        report.fail(RegularOrderGirth, format!("girth {girth:?} != 6"));
    }

    // (ii)
    let blocks = g.blocks();
    for side in [Side::Point, Side::Line] {
        for x in field.elements() {
            let id = BlockId {
                side,
                first: Slope::Field(x),
            };
            let len = blocks.get(&id).map_or(0, Vec::len);
            if len != q {
                report.fail(BlockPartition, format!("block {id} has {len} vertices, expected {q}"));
            }
        }
    }
    if let Some(extra) = blocks.keys().find(|id| id.first == Slope::Infinity) {
        report.fail(BlockPartition, format!("unexpected block {extra}"));
    }

    // (iii)
    for (a, b) in g.edges() {
        if a.side == b.side {
            report.fail(PerfectMatchings, format!("edge {a} -- {b} inside one side"));
        }
    }
    for (pid, points) in blocks.iter().filter(|(id, _)| id.side == Side::Point) {
        for (lid, lines) in blocks.iter().filter(|(id, _)| id.side == Side::Line) {
            let into = |v: &VertexLabel, target: BlockId| {
                g.neighbors(v)
                    .map(|ns| ns.iter().filter(|n| n.block() == target).count())
                    .unwrap_or(0)
            };
            let bad_point = points.iter().find(|v| into(v, *lid) != 1);
            let bad_line = lines.iter().find(|v| into(v, *pid) != 1);
            if let Some(v) = bad_point.or(bad_line) {
                report.fail(
                    PerfectMatchings,
                    format!("{pid}-{lid} is not a perfect matching at {v}"),
                );
            }
        }
    }

    // (iv)
    let zero = field.zero();
    for y in field.elements() {
        let point = VertexLabel::point(zero, y);
        let expected: BTreeSet<_> = field.elements().map(|i| VertexLabel::line(i, y)).collect();
        match g.neighbors(&point) {
            Ok(ns) if ns.iter().copied().collect::<BTreeSet<_>>() == expected => {}
            _ => report.fail(Straightness, format!("{point} is not straight")),
        }
        let line = VertexLabel::line(zero, y);
        let expected: BTreeSet<_> = field.elements().map(|j| VertexLabel::point(j, y)).collect();
        match g.neighbors(&line) {
            Ok(ns) if ns.iter().copied().collect::<BTreeSet<_>>() == expected => {}
            _ => report.fail(Straightness, format!("{line} is not straight")),
        }
    }

    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> Arc<FiniteField> {
        Arc::new(FiniteField::with_order(q).unwrap())
    }

    #[test]
    fn b3_incidence_rule() {
        let f = gf(3);
        let g = build_bq(f.clone());
        let e = |v| f.element(v).unwrap();
        // 2 = 2*1 + 0
        assert!(g.has_edge(&VertexLabel::point(e(1), e(2)), &VertexLabel::line(e(2), e(0))));
        assert!(!g.has_edge(&VertexLabel::point(e(1), e(2)), &VertexLabel::line(e(2), e(1))));
    }

    #[test]
    fn b7_parameters() {
        let f = gf(7);
        let g = build_bq(f.clone());
        assert_eq!(g.order(), 98);
        assert_eq!(g.degree_set(), BTreeSet::from([7]));
        assert_eq!(verify::girth(g.graph()).length(), Some(6));
    }

    #[test]
    fn b2_is_an_octagon() {
        let g = build_bq(gf(2));
        assert_eq!(g.order(), 8);
        assert_eq!(g.degree_set(), BTreeSet::from([2]));
        assert_eq!(verify::girth(g.graph()).length(), Some(8));
        let report = validate_bq_structure(&g, &FiniteField::with_order(2).unwrap());
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.girth, Some(8));
    }

    #[test]
    fn a3_histogram() {
        let g = build_aq(gf(3));
        assert_eq!(g.order(), 21);
        assert_eq!(g.degree_histogram(), [(3, 12), (4, 9)].into_iter().collect());
        assert_eq!(build_aq(gf(4)).order(), 36);
    }

    #[test]
    fn aq_parallel_class_vertex() {
        let f = gf(4);
        let g = build_aq(f.clone());
        let x = f.element(2).unwrap();
        let ns: BTreeSet<_> = g
            .neighbors(&VertexLabel::line_at_infinity(x))
            .unwrap()
            .into_iter()
            .collect();
        let column: BTreeSet<_> = f.elements().map(|y| VertexLabel::point(x, y)).collect();
        assert_eq!(ns, column);
    }

    #[test]
    fn validator_accepts_b5_and_flags_damage() {
        let f = gf(5);
        let g = build_bq(f.clone());
        assert!(validate_bq_structure(&g, &f).passed());

        let (a, b) = g.edges().next().unwrap();
        let labels = g.labels().to_vec();
        let edges: Vec<_> = g.edges().filter(|e| *e != (a, b)).collect();
        let damaged = BlockedGraph::new(f.clone(), labels, &edges).unwrap();
        let report = validate_bq_structure(&damaged, &f);
        assert!(report.failed_items().contains(&StructureItem::RegularOrderGirth));
    }

    #[test]
    fn intra_block_edge_breaks_matchings() {
        let f = gf(3);
        let g = build_bq(f.clone());
        let extra = (
            VertexLabel::point(f.one(), f.zero()),
            VertexLabel::point(f.one(), f.one()),
        );
        let h = g.add_edges(&[extra]).unwrap();
        let report = validate_bq_structure(&h, &f);
        assert!(report.failed_items().contains(&StructureItem::PerfectMatchings));
    }
}
