//! Simple undirected graphs, plain and field-labelled.
//!
//! [`SimpleGraph`] is an index-based adjacency structure used by the
//! verification code and the codecs. [`BlockedGraph`] wraps one with
//! [`VertexLabel`]s in canonical order and exposes the block partition
//! P_x / L_m that every construction works with.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::gf::{FieldElement, FiniteField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(String),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(String),
    #[error("edge {0} -- {1} is already present")]
    DuplicateEdge(String, String),
    #[error("loop at {0}")]
    Loop(String),
    #[error("vertex {0} is invalid: {1}")]
    InvalidLabel(String, &'static str),
}

/// Undirected simple graph on vertices `0..n`, adjacency kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: Vec<Vec<usize>>,
    size: usize,
}

impl SimpleGraph {
    pub fn empty(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
            size: 0,
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        let mut size = 0;
        for (u, v) in edges {
            if u >= n {
                return Err(GraphError::UnknownVertex(u.to_string()));
            }
            if v >= n {
                return Err(GraphError::UnknownVertex(v.to_string()));
            }
            if u == v {
                return Err(GraphError::Loop(u.to_string()));
            }
            adj[u].push(v);
            adj[v].push(u);
            size += 1;
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge(u.to_string(), w[0].to_string()));
            }
        }
        Ok(Self { adj, size })
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn degree_histogram(&self) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for list in &self.adj {
            *hist.entry(list.len()).or_insert(0) += 1;
        }
        hist
    }

    pub fn degree_set(&self) -> BTreeSet<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn without_edge(&self, u: usize, v: usize) -> Option<Self> {
        if !self.has_edge(u, v) {
            return None;
        }
        let mut out = self.clone();
        out.adj[u].retain(|&w| w != v);
        out.adj[v].retain(|&w| w != u);
        out.size -= 1;
        Some(out)
    }
}

/// Which side of the point/line bipartition a vertex starts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Point,
    Line,
}

impl Side {
    pub fn index(self) -> u8 {
        match self {
            Side::Point => 0,
            Side::Line => 1,
        }
    }
}

/// First coordinate of a label. `Infinity` is the extra parallel class that
/// turns the biaffine plane into the affine plane; it is ordered last.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slope {
    Field(FieldElement),
    Infinity,
}

impl Slope {
    pub fn as_field(self) -> Option<FieldElement> {
        match self {
            Slope::Field(e) => Some(e),
            Slope::Infinity => None,
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Field(e) => write!(f, "{e}"),
            Slope::Infinity => f.write_str("inf"),
        }
    }
}

/// `(first, second)_side`. The derived order is the canonical vertex order:
/// side, then first coordinate with infinity last, then second coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexLabel {
    pub side: Side,
    pub first: Slope,
    pub second: FieldElement,
}

impl VertexLabel {
    pub fn point(x: FieldElement, y: FieldElement) -> Self {
        Self {
            side: Side::Point,
            first: Slope::Field(x),
            second: y,
        }
    }

    pub fn line(m: FieldElement, b: FieldElement) -> Self {
        Self {
            side: Side::Line,
            first: Slope::Field(m),
            second: b,
        }
    }

    pub fn line_at_infinity(x: FieldElement) -> Self {
        Self {
            side: Side::Line,
            first: Slope::Infinity,
            second: x,
        }
    }

    pub fn block(&self) -> BlockId {
        BlockId {
            side: self.side,
            first: self.first,
        }
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})_{}", self.first, self.second, self.side.index())
    }
}

/// A block P_x (points with first coordinate x) or L_m (lines with slope m).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockId {
    pub side: Side,
    pub first: Slope,
}

impl fmt::Display for BlockId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.side {
            Side::Point => 'P',
            Side::Line => 'L',
        };
        write!(f, "{tag}_{}", self.first)
    }
}

/// Simple graph on field-labelled vertices. Immutable: every operation
/// returns a new graph.
#[derive(Clone, Debug)]
pub struct BlockedGraph {
    field: Arc<FiniteField>,
    labels: Vec<VertexLabel>,
    index: HashMap<VertexLabel, usize>,
    graph: SimpleGraph,
}

impl PartialEq for BlockedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.labels == other.labels && self.graph == other.graph
    }
}

impl BlockedGraph {
    pub fn new(
        field: Arc<FiniteField>,
        mut labels: Vec<VertexLabel>,
        edges: &[(VertexLabel, VertexLabel)],
    ) -> Result<Self, GraphError> {
        for label in &labels {
            if label.side == Side::Point && label.first == Slope::Infinity {
                return Err(GraphError::InvalidLabel(label.to_string(), "infinite slope on a point"));
            }
            let in_field = field.contains(label.second) && label.first.as_field().is_none_or(|e| field.contains(e));
            if !in_field {
                return Err(GraphError::InvalidLabel(
                    label.to_string(),
                    "coordinate outside the field",
                ));
            }
        }
        labels.sort_unstable();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateVertex(w[0].to_string()));
        }
        let index: HashMap<VertexLabel, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let mut pairs = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let ia = *index.get(a).ok_or_else(|| GraphError::UnknownVertex(a.to_string()))?;
            let ib = *index.get(b).ok_or_else(|| GraphError::UnknownVertex(b.to_string()))?;
            pairs.push((ia, ib));
        }
        let graph = SimpleGraph::from_edges(labels.len(), pairs).map_err(|e| relabel(e, &labels))?;
        Ok(Self {
            field,
            labels,
            index,
            graph,
        })
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn field_arc(&self) -> Arc<FiniteField> {
        Arc::clone(&self.field)
    }

    /// Labels in canonical order; position = vertex index in [`Self::graph`].
    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn size(&self) -> usize {
        self.graph.size()
    }

    pub fn index_of(&self, v: &VertexLabel) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn contains(&self, v: &VertexLabel) -> bool {
        self.index.contains_key(v)
    }

    fn require(&self, v: &VertexLabel) -> Result<usize, GraphError> {
        self.index_of(v).ok_or_else(|| GraphError::UnknownVertex(v.to_string()))
    }

    pub fn degree(&self, v: &VertexLabel) -> Result<usize, GraphError> {
        Ok(self.graph.degree(self.require(v)?))
    }

    pub fn neighbors(&self, v: &VertexLabel) -> Result<Vec<VertexLabel>, GraphError> {
        let i = self.require(v)?;
        Ok(self.graph.neighbors(i).iter().map(|&j| self.labels[j]).collect())
    }

    pub fn has_edge(&self, a: &VertexLabel, b: &VertexLabel) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.graph.has_edge(i, j),
            _ => false,
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexLabel, VertexLabel)> + '_ {
        self.graph.edges().map(|(u, v)| (self.labels[u], self.labels[v]))
    }

    pub fn degree_histogram(&self) -> BTreeMap<usize, usize> {
        self.graph.degree_histogram()
    }

    pub fn degree_set(&self) -> BTreeSet<usize> {
        self.graph.degree_set()
    }

    /// Block partition; every vertex appears in exactly one block.
    pub fn blocks(&self) -> BTreeMap<BlockId, Vec<VertexLabel>> {
        let mut blocks: BTreeMap<BlockId, Vec<VertexLabel>> = BTreeMap::new();
        for label in &self.labels {
            blocks.entry(label.block()).or_default().push(*label);
        }
        blocks
    }

    pub fn block(&self, id: BlockId) -> Vec<VertexLabel> {
        self.labels.iter().filter(|l| l.block() == id).copied().collect()
    }

    /// Adds edges that are not yet present. Order is unchanged.
    pub fn add_edges(&self, edges: &[(VertexLabel, VertexLabel)]) -> Result<Self, GraphError> {
        let mut adj: Vec<Vec<usize>> = (0..self.order()).map(|v| self.graph.neighbors(v).to_vec()).collect();
        for (a, b) in edges {
            let i = self.require(a)?;
            let j = self.require(b)?;
            if i == j {
                return Err(GraphError::Loop(a.to_string()));
            }
            match adj[i].binary_search(&j) {
                Ok(_) => return Err(GraphError::DuplicateEdge(a.to_string(), b.to_string())),
                Err(pos) => adj[i].insert(pos, j),
            }
            let pos = adj[j].binary_search(&i).unwrap_err();
            adj[j].insert(pos, i);
        }
        Ok(Self {
            field: self.field_arc(),
            labels: self.labels.clone(),
            index: self.index.clone(),
            graph: SimpleGraph {
                adj,
                size: self.graph.size() + edges.len(),
            },
        })
    }

    /// Induced subgraph on the complement of `remove`.
    pub fn delete_vertices(&self, remove: &BTreeSet<VertexLabel>) -> Result<Self, GraphError> {
        for v in remove {
            self.require(v)?;
        }
        let kept: Vec<VertexLabel> = self.labels.iter().filter(|l| !remove.contains(l)).copied().collect();
        let edges: Vec<(VertexLabel, VertexLabel)> = self
            .edges()
            .filter(|(a, b)| !remove.contains(a) && !remove.contains(b))
            .collect();
        Self::new(self.field_arc(), kept, &edges)
    }
}

fn relabel(err: GraphError, labels: &[VertexLabel]) -> GraphError {
    let name = |s: &str| {
        s.parse::<usize>()
            .ok()
            .and_then(|i| labels.get(i))
            .map_or_else(|| s.to_string(), ToString::to_string)
    };
    match err {
        GraphError::DuplicateEdge(a, b) => GraphError::DuplicateEdge(name(&a), name(&b)),
        GraphError::Loop(a) => GraphError::Loop(name(&a)),
        other => other,
    }
}
