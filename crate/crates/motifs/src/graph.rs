//! Labeled graphs over an undirected skeleton.
//!
//! A graph is a set of integer node ids plus an undirected skeleton edge set;
//! directed and signed graphs carry exactly one label per skeleton edge.
//! Directed labels are stored relative to the `(min, max)` orientation of the
//! pair, so every edge has a single canonical representation and the pair is
//! the unit that samplers keep or drop.
//!
//! The total node order used by all enumeration deduplication rules is numeric
//! order on node ids; see [`node_precedes`].

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::small::SmallGraph;

pub type NodeId = u32;

/// Which label family the graph's edges carry.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Undirected,
    Directed,
    Signed,
}

impl GraphKind {
    /// Number of per-pair codes including "no edge".
    pub(crate) fn slot_codes(self) -> usize {
        match self {
            GraphKind::Undirected => 2,
            GraphKind::Directed => 4,
            GraphKind::Signed => 3,
        }
    }

    /// Code seen when the pair's endpoints swap order.
    pub(crate) fn mirror_code(self, code: u8) -> u8 {
        match (self, code) {
            (GraphKind::Directed, 1) => 2,
            (GraphKind::Directed, 2) => 1,
            _ => code,
        }
    }

    pub(crate) fn code_of(self, label: EdgeLabel) -> u8 {
        match label {
            EdgeLabel::Plain => 1,
            EdgeLabel::Fwd => 1,
            EdgeLabel::Rev => 2,
            EdgeLabel::Bidir => 3,
            EdgeLabel::Plus => 1,
            EdgeLabel::Minus => 2,
        }
    }

    pub(crate) fn label_of(self, code: u8) -> EdgeLabel {
        match (self, code) {
            (GraphKind::Undirected, 1) => EdgeLabel::Plain,
            (GraphKind::Directed, 1) => EdgeLabel::Fwd,
            (GraphKind::Directed, 2) => EdgeLabel::Rev,
            (GraphKind::Directed, 3) => EdgeLabel::Bidir,
            (GraphKind::Signed, 1) => EdgeLabel::Plus,
            (GraphKind::Signed, 2) => EdgeLabel::Minus,
            _ => unreachable!("invalid label code {code} for {self:?}"),
        }
    }

    /// Whether `label` belongs to this kind's label family.
    pub fn allows(self, label: EdgeLabel) -> bool {
        matches!(
            (self, label),
            (GraphKind::Undirected, EdgeLabel::Plain)
                | (GraphKind::Directed, EdgeLabel::Fwd)
                | (GraphKind::Directed, EdgeLabel::Rev)
                | (GraphKind::Directed, EdgeLabel::Bidir)
                | (GraphKind::Signed, EdgeLabel::Plus)
                | (GraphKind::Signed, EdgeLabel::Minus)
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GraphKind::Undirected => "undirected",
            GraphKind::Directed => "directed",
            GraphKind::Signed => "signed",
        }
    }
}

impl std::str::FromStr for GraphKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "undirected" | "u" => Ok(GraphKind::Undirected),
            "directed" | "d" => Ok(GraphKind::Directed),
            "signed" | "s" => Ok(GraphKind::Signed),
            other => Err(Error::Domain(format!("unknown graph kind '{other}'"))),
        }
    }
}

/// Per-edge label. `Fwd`/`Rev`/`Bidir` are relative to the edge tuple's own
/// `(u, v)` orientation when passed to [`Graph::from_edges`], and relative to
/// `(min, max)` once stored.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum EdgeLabel {
    Plain,
    Fwd,
    Rev,
    Bidir,
    Plus,
    Minus,
}

impl EdgeLabel {
    /// The same relation seen from the opposite endpoint order.
    pub fn mirrored(self) -> EdgeLabel {
        match self {
            EdgeLabel::Fwd => EdgeLabel::Rev,
            EdgeLabel::Rev => EdgeLabel::Fwd,
            other => other,
        }
    }

    fn tag(self) -> Option<char> {
        match self {
            EdgeLabel::Plain => None,
            EdgeLabel::Fwd => Some('>'),
            EdgeLabel::Rev => Some('<'),
            EdgeLabel::Bidir => Some('='),
            EdgeLabel::Plus => Some('+'),
            EdgeLabel::Minus => Some('-'),
        }
    }
}

/// The total node order `≻`: `node_precedes(u, v)` is true when `v ≻ u`.
/// Exactly one of `node_precedes(u, v)` and `node_precedes(v, u)` holds for
/// distinct nodes, and neither holds when `u == v`.
#[inline]
pub fn node_precedes(u: NodeId, v: NodeId) -> bool {
    u < v
}

/// Immutable labeled graph. Construction deduplicates the skeleton; the node
/// set is exactly the set of edge endpoints.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graph {
    kind: GraphKind,
    /// Sorted external node ids; position in this vector is the internal index.
    ids: Vec<NodeId>,
    /// Per-node sorted neighbor lists (internal indices). The label is always
    /// relative to the (min, max) endpoints of the pair.
    adj: Vec<Vec<(u32, EdgeLabel)>>,
    num_edges: usize,
}

impl Graph {
    /// Build from `(u, v, label)` tuples; directed labels are read as oriented
    /// from `u` to `v`. Duplicate skeleton edges merge: directed labels merge
    /// by direction union, identical labels deduplicate, and conflicting signs
    /// are rejected.
    pub fn from_edges<I>(kind: GraphKind, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (NodeId, NodeId, EdgeLabel)>,
    {
        let mut map: BTreeMap<(NodeId, NodeId), EdgeLabel> = BTreeMap::new();
        for (u, v, label) in edges {
            if u == v {
                return Err(Error::Domain(format!("self-loop on node {u}")));
            }
            if !kind.allows(label) {
                return Err(Error::Domain(format!(
                    "label {label:?} not valid for {} graphs",
                    kind.as_str()
                )));
            }
            let (lo, hi, label) = if u < v {
                (u, v, label)
            } else {
                (v, u, label.mirrored())
            };
            match map.entry((lo, hi)) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(label);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() = merge_labels(kind, *e.get(), label, (lo, hi))?;
                }
            }
        }

        let mut ids: Vec<NodeId> = Vec::new();
        for &(u, v) in map.keys() {
            ids.push(u);
            ids.push(v);
        }
        ids.sort_unstable();
        ids.dedup();

        let index = |id: NodeId| ids.binary_search(&id).expect("endpoint indexed") as u32;
        let mut adj: Vec<Vec<(u32, EdgeLabel)>> = vec![Vec::new(); ids.len()];
        for (&(u, v), &label) in &map {
            let (a, b) = (index(u), index(v));
            adj[a as usize].push((b, label));
            adj[b as usize].push((a, label));
        }
        for list in &mut adj {
            list.sort_unstable_by_key(|e| e.0);
        }

        Ok(Graph {
            kind,
            ids,
            adj,
            num_edges: map.len(),
        })
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.num_edges
    }

    pub fn node_ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn max_node_id(&self) -> Option<NodeId> {
        self.ids.last().copied()
    }

    /// External id of internal index `idx`.
    #[inline]
    pub fn id_of(&self, idx: usize) -> NodeId {
        self.ids[idx]
    }

    /// Internal index of external id, if present.
    pub fn index_of(&self, id: NodeId) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }

    /// Sorted neighbor list of internal node `idx`. Because `ids` is sorted,
    /// comparing internal indices agrees with the node order `≻`.
    #[inline]
    pub(crate) fn neighbors(&self, idx: usize) -> &[(u32, EdgeLabel)] {
        &self.adj[idx]
    }

    #[inline]
    pub(crate) fn label_between(&self, a: usize, b: usize) -> Option<EdgeLabel> {
        self.adj[a]
            .binary_search_by_key(&(b as u32), |e| e.0)
            .ok()
            .map(|pos| self.adj[a][pos].1)
    }

    #[inline]
    pub(crate) fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a]
            .binary_search_by_key(&(b as u32), |e| e.0)
            .is_ok()
    }

    /// Label of the skeleton edge between two external ids, if present.
    pub fn edge_label(&self, u: NodeId, v: NodeId) -> Option<EdgeLabel> {
        let a = self.index_of(u)?;
        let b = self.index_of(v)?;
        self.label_between(a, b)
    }

    /// Skeleton edges as `(u, v, label)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, EdgeLabel)> + '_ {
        self.adj.iter().enumerate().flat_map(move |(a, list)| {
            list.iter()
                .filter(move |&&(b, _)| (b as usize) > a)
                .map(move |&(b, label)| (self.ids[a], self.ids[b as usize], label))
        })
    }

    /// Induced labeled subgraph on `node_ids`. Returns `None` when the induced
    /// skeleton is disconnected.
    pub fn induced_subgraph(&self, node_ids: &[NodeId]) -> Result<Option<Cis>> {
        let k = node_ids.len();
        if !(3..=5).contains(&k) {
            return Err(Error::Domain(format!(
                "induced subgraphs are supported for 3 to 5 nodes, got {k}"
            )));
        }
        let mut idxs = Vec::with_capacity(k);
        for &id in node_ids {
            match self.index_of(id) {
                Some(i) => idxs.push(i),
                None => return Err(Error::Domain(format!("node {id} not in graph"))),
            }
        }
        idxs.sort_unstable();
        if idxs.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain("duplicate node in subgraph request".into()));
        }

        let mut sg = SmallGraph::new(k);
        for s in 0..k {
            for t in (s + 1)..k {
                if let Some(label) = self.label_between(idxs[s], idxs[t]) {
                    sg.set(s, t, self.kind.code_of(label));
                }
            }
        }
        if !sg.is_connected() {
            return Ok(None);
        }
        Ok(Some(Cis {
            kind: self.kind,
            nodes: idxs.iter().map(|&i| self.ids[i]).collect(),
            graph: sg,
        }))
    }

    /// Serialize to the edge-list text format, one edge per line, sorted.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v, label) in self.edges() {
            match label.tag() {
                None => writeln!(out, "{u} {v}").unwrap(),
                Some(t) => writeln!(out, "{u} {v} {t}").unwrap(),
            }
        }
        out
    }
}

fn merge_labels(
    kind: GraphKind,
    a: EdgeLabel,
    b: EdgeLabel,
    pair: (NodeId, NodeId),
) -> Result<EdgeLabel> {
    use EdgeLabel::*;
    match kind {
        GraphKind::Undirected => Ok(Plain),
        // Reciprocal directed edges merge into a bidirectional one.
        GraphKind::Directed => Ok(match (a, b) {
            (Fwd, Fwd) => Fwd,
            (Rev, Rev) => Rev,
            _ => Bidir,
        }),
        GraphKind::Signed => {
            if a == b {
                Ok(a)
            } else {
                Err(Error::Domain(format!(
                    "conflicting signs for edge ({}, {})",
                    pair.0, pair.1
                )))
            }
        }
    }
}

/// A connected induced subgraph: its sorted node ids plus the induced labeled
/// view on `0..k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cis {
    kind: GraphKind,
    nodes: Vec<NodeId>,
    pub(crate) graph: SmallGraph,
}

impl Cis {
    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn k(&self) -> usize {
        self.nodes.len()
    }

    /// Member node ids in ascending order.
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }
}

/// Parse the line-oriented edge-list format.
///
/// Lines are whitespace-separated fields; `#` starts a comment line. An edge
/// is `u v` (undirected), `u v d` with `d` in `> < =` (directed: `u->v`,
/// `v->u`, both), or `u v s` with `s` in `+ -` (signed). Reciprocal directed
/// lines merge into a bidirectional edge; self-loops are rejected.
pub fn parse_edge_list(text: &str, kind: GraphKind) -> Result<Graph> {
    let mut edges: Vec<(NodeId, NodeId, EdgeLabel)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_ascii_whitespace().collect();
        let (u, v, label) = parse_line(&fields, kind).map_err(|msg| Error::Parse { line, msg })?;
        if u == v {
            return Err(Error::SelfLoop { line });
        }
        edges.push((u, v, label));
    }
    Graph::from_edges(kind, edges)
}

/// Parse a single edge-list line, for incremental stream consumption.
/// Returns `None` for blank and comment lines. Self-loops are rejected.
pub fn parse_stream_line(
    raw: &str,
    kind: GraphKind,
) -> Result<Option<(NodeId, NodeId, EdgeLabel)>> {
    let trimmed = raw.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return Ok(None);
    }
    let fields: Vec<&str> = trimmed.split_ascii_whitespace().collect();
    let (u, v, label) = parse_line(&fields, kind).map_err(Error::Domain)?;
    if u == v {
        return Err(Error::Domain(format!("self-loop on node {u}")));
    }
    Ok(Some((u, v, label)))
}

fn parse_line(
    fields: &[&str],
    kind: GraphKind,
) -> std::result::Result<(NodeId, NodeId, EdgeLabel), String> {
    let expected = match kind {
        GraphKind::Undirected => 2,
        GraphKind::Directed | GraphKind::Signed => 3,
    };
    if fields.len() != expected {
        return Err(format!(
            "expected {expected} fields for a {} edge, got {}",
            kind.as_str(),
            fields.len()
        ));
    }
    let u: NodeId = fields[0]
        .parse()
        .map_err(|_| format!("invalid node id '{}'", fields[0]))?;
    let v: NodeId = fields[1]
        .parse()
        .map_err(|_| format!("invalid node id '{}'", fields[1]))?;
    let label = match kind {
        GraphKind::Undirected => EdgeLabel::Plain,
        GraphKind::Directed => match fields[2] {
            ">" => EdgeLabel::Fwd,
            "<" => EdgeLabel::Rev,
            "=" => EdgeLabel::Bidir,
            other => return Err(format!("invalid direction '{other}' (expected >, < or =)")),
        },
        GraphKind::Signed => match fields[2] {
            "+" => EdgeLabel::Plus,
            "-" => EdgeLabel::Minus,
            other => return Err(format!("invalid sign '{other}' (expected + or -)")),
        },
    };
    Ok((u, v, label))
}

/// Read an edge-list file from disk.
pub fn read_edge_list(path: &std::path::Path, kind: GraphKind) -> Result<Graph> {
    let text = std::fs::read_to_string(path)?;
    parse_edge_list(&text, kind)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_undirected() {
        let g = parse_edge_list("0 1\n1 2", GraphKind::Undirected).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn reciprocal_directed_lines_merge_to_bidir() {
        let g = parse_edge_list("0 1 >\n1 0 >", GraphKind::Directed).unwrap();
        assert_eq!(g.edge_count(), 1);
        let edges: Vec<_> = g.edges().collect();
        assert_eq!(edges, vec![(0, 1, EdgeLabel::Bidir)]);
    }

    #[test]
    fn self_loop_rejected_with_line() {
        let err = parse_edge_list("0 0", GraphKind::Undirected).unwrap_err();
        match err {
            Error::SelfLoop { line } => assert_eq!(line, 1),
            other => panic!("expected self-loop error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = parse_edge_list("0 1\nnope", GraphKind::Undirected).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn comments_and_blank_lines_skipped() {
        let g = parse_edge_list("# header\n\n0 1 +\n2 0 -\n", GraphKind::Signed).unwrap();
        assert_eq!(g.edge_count(), 2);
        // "2 0 -" stores relative to (0, 2)
        let edges: Vec<_> = g.edges().collect();
        assert_eq!(edges[0], (0, 1, EdgeLabel::Plus));
        assert_eq!(edges[1], (0, 2, EdgeLabel::Minus));
    }

    #[test]
    fn duplicate_skeleton_edges_dedup() {
        let g = parse_edge_list("0 1\n1 0\n0 1", GraphKind::Undirected).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn conflicting_signs_rejected() {
        let err = parse_edge_list("0 1 +\n1 0 -", GraphKind::Signed).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn directed_orientation_normalizes() {
        // "5 2 >" means 5 -> 2, stored on (2, 5) as Rev.
        let g = parse_edge_list("5 2 >", GraphKind::Directed).unwrap();
        let edges: Vec<_> = g.edges().collect();
        assert_eq!(edges, vec![(2, 5, EdgeLabel::Rev)]);
    }

    #[test]
    fn round_trip() {
        let text = "0 3 >\n1 3 <\n0 1 =\n2 3 >\n";
        let g = parse_edge_list(text, GraphKind::Directed).unwrap();
        let g2 = parse_edge_list(&g.to_edge_list(), GraphKind::Directed).unwrap();
        assert_eq!(g, g2);
    }

    #[test]
    fn adjacency_is_symmetric() {
        let g = parse_edge_list("0 1\n1 2\n2 0\n3 1", GraphKind::Undirected).unwrap();
        for a in 0..g.node_count() {
            for &(b, _) in g.neighbors(a) {
                assert!(g.has_edge(b as usize, a));
            }
        }
    }

    #[test]
    fn induced_triangle() {
        let g = parse_edge_list("0 1\n1 2\n2 0", GraphKind::Undirected).unwrap();
        let cis = g.induced_subgraph(&[0, 1, 2]).unwrap().unwrap();
        assert_eq!(cis.graph.edge_count(), 3);
    }

    #[test]
    fn induced_disconnected() {
        let g = parse_edge_list("0 1\n1 2\n2 3", GraphKind::Undirected).unwrap();
        assert!(g.induced_subgraph(&[0, 1, 3]).unwrap().is_none());
        // path segment is a wedge
        let wedge = g.induced_subgraph(&[0, 1, 2]).unwrap().unwrap();
        assert_eq!(wedge.graph.edge_count(), 2);
    }

    #[test]
    fn induced_rejects_unknown_and_duplicate_nodes() {
        let g = parse_edge_list("0 1\n1 2", GraphKind::Undirected).unwrap();
        assert!(g.induced_subgraph(&[0, 1, 9]).is_err());
        assert!(g.induced_subgraph(&[0, 1, 1]).is_err());
    }

    #[test]
    fn node_order_is_total_and_strict() {
        assert!(node_precedes(1, 2));
        assert!(!node_precedes(2, 1));
        assert!(!node_precedes(5, 5));
        for u in 0..10u32 {
            for v in 0..10u32 {
                if u != v {
                    assert!(node_precedes(u, v) ^ node_precedes(v, u));
                }
            }
        }
    }
}
