//! Text formats: graph6, a DOT subset with label attributes, a labelled
//! edge CSV, the `.labels` sidecar that names graph6 vertices, and JSON
//! certificates.
//!
//! Labelled formats record the field order in a `# q=<q>` comment so that
//! labels can be rebuilt as field elements on import.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::gf::{FieldElement, FiniteField, GfError};
use crate::graph::{BlockedGraph, GraphError, Side, SimpleGraph, Slope, VertexLabel};
use crate::verify::CageCertificate;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("input is empty")]
    Empty,
    #[error("graph6: {0}")]
    Graph6(String),
    #[error("{format} line {line}: {message}")]
    Syntax {
        format: &'static str,
        line: usize,
        message: String,
    },
    #[error("missing `# q=<order>` line")]
    MissingOrder,
    #[error("sidecar has {found} labels but the graph has {expected} vertices")]
    LabelCount { expected: usize, found: usize },
    #[error("unknown format `{0}` (expected g6, dot or csv)")]
    UnknownFormat(String),
    #[error("certificate JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Field(#[from] GfError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Format {
    Graph6,
    Dot,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Graph6 => "g6",
            Format::Dot => "dot",
            Format::Csv => "csv",
        }
    }

    /// Guesses the format from a file extension.
    pub fn from_extension(ext: &str) -> Option<Self> {
        match ext.to_ascii_lowercase().as_str() {
            "g6" | "graph6" => Some(Format::Graph6),
            "dot" | "gv" => Some(Format::Dot),
            "csv" => Some(Format::Csv),
            _ => None,
        }
    }
}

impl FromStr for Format {
    type Err = IoError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Format::from_extension(s).ok_or_else(|| IoError::UnknownFormat(s.to_string()))
    }
}

// graph6

fn push_size(out: &mut Vec<u8>, n: u64) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        out.extend((0..3).rev().map(|k| ((n >> (6 * k)) & 63) as u8 + 63));
    } else {
        out.extend([126, 126]);
        out.extend((0..6).rev().map(|k| ((n >> (6 * k)) & 63) as u8 + 63));
    }
}

/// Standard graph6 encoding, without trailing newline.
pub fn to_graph6(g: &SimpleGraph) -> String {
    let n = g.order();
    let mut out = Vec::new();
    push_size(&mut out, n as u64);
    let mut group = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            group = (group << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(group + 63);
                group = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((group << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

fn g6_err(msg: impl Into<String>) -> IoError {
    IoError::Graph6(msg.into())
}

/// Decodes one graph6 graph. An optional `>>graph6<<` header and trailing
/// whitespace are accepted; anything else malformed is an error.
pub fn from_graph6(text: &str) -> Result<SimpleGraph, IoError> {
    let text = text.trim_end();
    let text = text.strip_prefix(">>graph6<<").unwrap_or(text);
    if text.is_empty() {
        return Err(IoError::Empty);
    }
    let bytes = text.as_bytes();
    if let Some(bad) = bytes.iter().find(|b| !(63..=126).contains(*b)) {
        return Err(g6_err(format!("byte {bad:#04x} outside 63..=126")));
    }
    let six = |b: u8| (b - 63) as u64;
    let (n, body) = if bytes[0] != 126 {
        (six(bytes[0]), &bytes[1..])
    } else if bytes.len() >= 2 && bytes[1] == 126 {
        if bytes.len() < 8 {
            return Err(g6_err("truncated 8-byte size header"));
        }
        (bytes[2..8].iter().fold(0, |acc, &b| acc << 6 | six(b)), &bytes[8..])
    } else {
        if bytes.len() < 4 {
            return Err(g6_err("truncated 4-byte size header"));
        }
        (bytes[1..4].iter().fold(0, |acc, &b| acc << 6 | six(b)), &bytes[4..])
    };
    let n = usize::try_from(n).map_err(|_| g6_err("order does not fit in memory"))?;
    let bits = n
        .checked_mul(n.saturating_sub(1))
        .ok_or_else(|| g6_err("order too large"))?
        / 2;
    let expected = bits.div_ceil(6);
    if body.len() != expected {
        return Err(g6_err(format!(
            "expected {expected} data bytes for n = {n}, found {}",
            body.len()
        )));
    }
    let bit = |k: usize| (six(body[k / 6]) >> (5 - k % 6)) & 1 == 1;
    if (bits..expected * 6).any(bit) {
        return Err(g6_err("nonzero padding bits"));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Ok(SimpleGraph::from_edges(n, edges)?)
}

// labels

fn slope_text(s: Slope) -> String {
    match s {
        Slope::Field(e) => e.value().to_string(),
        Slope::Infinity => "inf".to_string(),
    }
}

fn label_fields(l: &VertexLabel) -> [String; 3] {
    [
        l.side.index().to_string(),
        slope_text(l.first),
        l.second.value().to_string(),
    ]
}

fn parse_label(field: &FiniteField, parts: &[&str]) -> Result<VertexLabel, String> {
    let [side, first, second] = parts else {
        return Err(format!("expected side,first,second, found {} fields", parts.len()));
    };
    let side = match side.trim() {
        "0" => Side::Point,
        "1" => Side::Line,
        other => return Err(format!("side must be 0 or 1, found `{other}`")),
    };
    let element = |s: &str| -> Result<FieldElement, String> {
        let v: u32 = s
            .trim()
            .parse()
            .map_err(|_| format!("`{}` is not an element index", s.trim()))?;
        field.element(v).map_err(|e| e.to_string())
    };
    let first = match first.trim() {
        "inf" => Slope::Infinity,
        other => Slope::Field(element(other)?),
    };
    if side == Side::Point && first == Slope::Infinity {
        return Err("points have no infinite first coordinate".to_string());
    }
    Ok(VertexLabel {
        side,
        first,
        second: element(second)?,
    })
}

fn order_line(line: &str) -> Option<&str> {
    line.strip_prefix('#')?.trim().strip_prefix("q=").map(str::trim)
}

fn field_from_order(text: &str) -> Result<Arc<FiniteField>, IoError> {
    let q = text.lines().find_map(order_line).ok_or(IoError::MissingOrder)?;
    let q: u32 = q.parse().map_err(|_| IoError::Syntax {
        format: "header",
        line: 1,
        message: format!("`{q}` is not a field order"),
    })?;
    Ok(Arc::new(FiniteField::with_order(q)?))
}

/// Data lines with 1-based line numbers, skipping blanks and `#` comments.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn header(g: &BlockedGraph, name: &str) -> String {
    let mut out = format!("# q={}\n", g.field().order());
    if !name.is_empty() {
        let _ = writeln!(out, "# family={name}");
    }
    out
}

/// The `# family=` comment, if present.
pub fn family_name(text: &str) -> Option<String> {
    text.lines()
        .find_map(|l| l.trim().strip_prefix('#')?.trim().strip_prefix("family="))
        .map(|s| s.trim().to_string())
}

/// One `side,first,second` row per vertex, in vertex order, after the
/// `# q=` line and an optional `# family=` line.
pub fn write_labels(g: &BlockedGraph, name: &str) -> String {
    let mut out = header(g, name);
    for l in g.labels() {
        out.push_str(&label_fields(l).join(","));
        out.push('\n');
    }
    out
}

pub fn read_labels(text: &str) -> Result<(Arc<FiniteField>, Vec<VertexLabel>), IoError> {
    let field = field_from_order(text)?;
    let labels = data_lines(text)
        .map(|(line, l)| {
            let parts: Vec<&str> = l.split(',').collect();
            parse_label(&field, &parts).map_err(|message| IoError::Syntax {
                format: "labels",
                line,
                message,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((field, labels))
}

/// Rebuilds a labelled graph from an unlabelled one whose vertex `i` carries
/// `labels[i]`.
pub fn attach_labels(
    g: &SimpleGraph,
    field: Arc<FiniteField>,
    labels: Vec<VertexLabel>,
) -> Result<BlockedGraph, IoError> {
    if labels.len() != g.order() {
        return Err(IoError::LabelCount {
            expected: g.order(),
            found: labels.len(),
        });
    }
    let edges: Vec<_> = g.edges().map(|(u, v)| (labels[u], labels[v])).collect();
    Ok(BlockedGraph::new(field, labels, &edges)?)
}

// DOT

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn to_dot(g: &BlockedGraph, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph {} {{", dot_quote(name));
    out.push_str(&header(g, name));
    for (i, l) in g.labels().iter().enumerate() {
        let [side, first, second] = label_fields(l);
        let _ = writeln!(
            out,
            "  {i} [label={}, side={side}, first={}, second={second}];",
            dot_quote(&l.to_string()),
            dot_quote(&first)
        );
    }
    for (u, v) in g.graph().edges() {
        let _ = writeln!(out, "  {u} -- {v};");
    }
    out.push_str("}\n");
    out
}

/// Splits `a=1, b="x, y"` into key/value pairs.
fn dot_attrs(s: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    let mut chars = s.chars().peekable();
    loop {
        while chars.next_if(|c| c.is_whitespace() || *c == ',' || *c == ';').is_some() {}
        if chars.peek().is_none() {
            return Ok(out);
        }
        let key: String = std::iter::from_fn(|| chars.next_if(|c| *c != '=' && !c.is_whitespace())).collect();
        while chars.next_if(|c| c.is_whitespace()).is_some() {}
        if chars.next() != Some('=') {
            return Err(format!("attribute `{key}` has no value"));
        }
        while chars.next_if(|c| c.is_whitespace()).is_some() {}
        let value = if chars.next_if_eq(&'"').is_some() {
            let mut v = String::new();
            loop {
                match chars.next() {
                    Some('\\') => v.extend(chars.next()),
                    Some('"') => break,
                    Some(c) => v.push(c),
                    None => return Err("unterminated string".to_string()),
                }
            }
            v
        } else {
            std::iter::from_fn(|| chars.next_if(|c| !c.is_whitespace() && *c != ',' && *c != ';')).collect()
        };
        out.insert(key, value);
    }
}

/// A graph read back from disk, with labels when the format carried them.
#[derive(Clone, Debug)]
pub struct Imported {
    pub graph: SimpleGraph,
    pub labelled: Option<BlockedGraph>,
    /// From a `# family=` comment.
    pub family: Option<String>,
}

impl Imported {
    fn unlabelled(graph: SimpleGraph) -> Self {
        Self {
            graph,
            labelled: None,
            family: None,
        }
    }

    fn labelled(g: BlockedGraph) -> Self {
        Self {
            graph: g.graph().clone(),
            labelled: Some(g),
            family: None,
        }
    }

    /// Labels in vertex order, as display strings.
    pub fn label_names(&self) -> Option<Vec<String>> {
        self.labelled
            .as_ref()
            .map(|g| g.labels().iter().map(ToString::to_string).collect())
    }
}

/// Reads the DOT subset written by [`to_dot`]: integer node ids `0..n`,
/// optional node statements, and `u -- v;` edges. If every node carries
/// side/first/second and a `# q=` line is present the result is labelled.
pub fn from_dot(text: &str) -> Result<Imported, IoError> {
    if text.trim().is_empty() {
        return Err(IoError::Empty);
    }
    let syntax = |line, message: String| IoError::Syntax {
        format: "dot",
        line,
        message,
    };
    let mut nodes: BTreeMap<usize, BTreeMap<String, String>> = BTreeMap::new();
    let mut edges = Vec::new();
    let mut opened = false;
    let mut closed = false;
    for (line, l) in data_lines(text) {
        if !opened {
            if !(l.starts_with("graph") && l.ends_with('{')) {
                return Err(syntax(line, "expected `graph <name> {`".to_string()));
            }
            opened = true;
            continue;
        }
        if l == "}" {
            closed = true;
            continue;
        }
        if closed {
            return Err(syntax(line, "content after closing brace".to_string()));
        }
        let id = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| syntax(line, format!("bad node id `{}`", s.trim())))
        };
        let stmt = l.trim_end_matches(';');
        if let Some((a, b)) = stmt.split_once("--") {
            edges.push((id(a)?, id(b)?));
        } else if let Some((node, rest)) = stmt.split_once('[') {
            let attrs = rest
                .strip_suffix(']')
                .ok_or_else(|| syntax(line, "unterminated attribute list".to_string()))?;
            let attrs = dot_attrs(attrs).map_err(|m| syntax(line, m))?;
            nodes.insert(id(node)?, attrs);
        } else {
            nodes.entry(id(stmt)?).or_default();
        }
    }
    if !opened || !closed {
        return Err(syntax(text.lines().count(), "missing graph braces".to_string()));
    }
    let n = nodes
        .keys()
        .chain(edges.iter().flat_map(|(a, b)| [a, b]))
        .max()
        .map_or(0, |m| m + 1);
    let graph = SimpleGraph::from_edges(n, edges)?;

    let has_labels = n > 0
        && nodes.len() == n
        && nodes
            .values()
            .all(|a| ["side", "first", "second"].iter().all(|k| a.contains_key(*k)));
    if !has_labels {
        return Ok(Imported::unlabelled(graph));
    }
    let field = field_from_order(text)?;
    let labels = nodes
        .iter()
        .map(|(i, a)| {
            parse_label(&field, &[&a["side"], &a["first"], &a["second"]])
                .map_err(|m| syntax(0, format!("node {i}: {m}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Imported::labelled(attach_labels(&graph, field, labels)?))
}

// CSV

const CSV_HEADER: &str = "u_side,u_first,u_second,v_side,v_first,v_second";

/// One row per edge, both endpoints as `side,first,second`.
pub fn to_csv(g: &BlockedGraph, name: &str) -> String {
    let mut out = header(g, name);
    let _ = writeln!(out, "{CSV_HEADER}");
    for (a, b) in g.edges() {
        let _ = writeln!(out, "{},{}", label_fields(&a).join(","), label_fields(&b).join(","));
    }
    out
}

/// Reads an edge CSV. Only vertices that appear on some edge are recovered.
pub fn from_csv(text: &str) -> Result<BlockedGraph, IoError> {
    if text.trim().is_empty() {
        return Err(IoError::Empty);
    }
    let field = field_from_order(text)?;
    let mut labels = std::collections::BTreeSet::new();
    let mut edges = Vec::new();
    for (line, l) in data_lines(text) {
        if l == CSV_HEADER {
            continue;
        }
        let parts: Vec<&str> = l.split(',').collect();
        if parts.len() != 6 {
            return Err(IoError::Syntax {
                format: "csv",
                line,
                message: format!("expected 6 fields, found {}", parts.len()),
            });
        }
        let endpoint = |p: &[&str]| {
            parse_label(&field, p).map_err(|message| IoError::Syntax {
                format: "csv",
                line,
                message,
            })
        };
        let (a, b) = (endpoint(&parts[..3])?, endpoint(&parts[3..])?);
        labels.extend([a, b]);
        edges.push((a, b));
    }
    Ok(BlockedGraph::new(field, labels.into_iter().collect(), &edges)?)
}

/// Exports in `format`. For graph6 the returned sidecar names the vertices.
pub fn export(g: &BlockedGraph, format: Format, name: &str) -> (String, Option<String>) {
    match format {
        Format::Graph6 => (to_graph6(g.graph()) + "\n", Some(write_labels(g, name))),
        Format::Dot => (to_dot(g, name), None),
        Format::Csv => (to_csv(g, name), None),
    }
}

/// Imports a file body, using the `.labels` sidecar for graph6 if given.
pub fn import(text: &str, format: Format, sidecar: Option<&str>) -> Result<Imported, IoError> {
    let mut imported = import_graph(text, format, sidecar)?;
    imported.family = family_name(sidecar.unwrap_or(text));
    Ok(imported)
}

fn import_graph(text: &str, format: Format, sidecar: Option<&str>) -> Result<Imported, IoError> {
    match format {
        Format::Graph6 => {
            let graph = from_graph6(text)?;
            match sidecar {
                Some(s) => {
                    let (field, labels) = read_labels(s)?;
                    Ok(Imported::labelled(attach_labels(&graph, field, labels)?))
                }
                None => Ok(Imported::unlabelled(graph)),
            }
        }
        Format::Dot => from_dot(text),
        Format::Csv => Ok(Imported::labelled(from_csv(text)?)),
    }
}

pub fn certificate_to_json(cert: &CageCertificate) -> String {
    serde_json::to_string_pretty(cert).expect("certificates serialize")
}

pub fn certificate_from_json(text: &str) -> Result<CageCertificate, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Json(e.to_string()))
}
