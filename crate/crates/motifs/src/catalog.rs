//! Motif catalogs: the canonical classes of connected k-node labeled graphs.
//!
//! A catalog fixes the identity of every motif class for one `(k, kind)` pair:
//! class ids, canonical representatives, and a dense lookup table that maps any
//! connected induced view to its class in O(1). Supported catalogs are the
//! undirected families for k = 3, 4, 5 and the directed and signed families
//! for k = 3 (2, 6, 21, 13 and 7 classes respectively).
//!
//! Ids are assigned by sorting canonical representatives by skeleton edge
//! count and then lexicographically, with a handful of hard anchors applied on
//! top: the 3-node classes are wedge then triangle, the 4- and 5-node line
//! graphs are class 1, and the 5-node circle is class 6. Anchor swaps stay
//! within an edge-count block, so ids are always non-decreasing in edge count
//! (the triangular structure the inference step relies on).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Cis, EdgeLabel, GraphKind};
use crate::small::{permutations, SmallGraph};

/// 1-based motif class id within a catalog.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MotifId(usize);

impl MotifId {
    pub fn new(id: usize) -> MotifId {
        assert!(id >= 1, "motif ids are 1-based");
        MotifId(id)
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// 0-based position in catalog vectors.
    #[inline]
    pub(crate) fn index(self) -> usize {
        self.0 - 1
    }
}

impl std::fmt::Display for MotifId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Ordered motif classes for one `(k, kind)` pair.
#[derive(Clone, Debug)]
pub struct MotifCatalog {
    k: usize,
    kind: GraphKind,
    motifs: Vec<SmallGraph>,
    names: Vec<Option<String>>,
    edge_counts: Vec<usize>,
    /// Packed label codes -> class index, `None` for disconnected patterns.
    table: Vec<Option<u16>>,
}

/// Catalog sizes fixed by exhaustive enumeration.
fn expected_classes(k: usize, kind: GraphKind) -> Option<usize> {
    match (k, kind) {
        (3, GraphKind::Undirected) => Some(2),
        (4, GraphKind::Undirected) => Some(6),
        (5, GraphKind::Undirected) => Some(21),
        (3, GraphKind::Directed) => Some(13),
        (3, GraphKind::Signed) => Some(7),
        _ => None,
    }
}

/// Build the catalog for `(k, kind)`.
///
/// Enumerates every labeled graph on `k` nodes, keeps the connected ones,
/// buckets them by canonical form and orders the classes as described in the
/// module docs.
pub fn build_catalog(k: usize, kind: GraphKind) -> Result<MotifCatalog> {
    let expected = expected_classes(k, kind).ok_or_else(|| {
        Error::Domain(format!(
            "unsupported catalog: k={k} kind={}; supported are k=3,4,5 undirected and k=3 directed/signed",
            kind.as_str()
        ))
    })?;

    let num_pairs = k * (k - 1) / 2;
    let space = kind.slot_codes().pow(num_pairs as u32);

    // Bucket connected patterns by canonical form.
    let mut cert_of: Vec<Option<SmallGraph>> = vec![None; space];
    let mut classes: Vec<SmallGraph> = Vec::new();
    let mut seen: BTreeMap<SmallGraph, ()> = BTreeMap::new();
    for packed in 0..space {
        let sg = SmallGraph::unpack(k, kind, packed);
        if !sg.is_connected() {
            continue;
        }
        let cert = sg.certificate(kind);
        if seen.insert(cert, ()).is_none() {
            classes.push(cert);
        }
        cert_of[packed] = Some(cert);
    }

    if classes.len() != expected {
        return Err(Error::Internal(format!(
            "catalog (k={k}, {}) produced {} classes, expected {expected}",
            kind.as_str(),
            classes.len()
        )));
    }

    classes.sort_unstable_by_key(|g| (g.edge_count(), *g));
    apply_anchors(k, kind, &mut classes);

    // Anchors must not break the edge-count ordering.
    if classes
        .windows(2)
        .any(|w| w[0].edge_count() > w[1].edge_count())
    {
        return Err(Error::Internal(
            "catalog ordering is not non-decreasing in edge count".into(),
        ));
    }

    let mut index_of: BTreeMap<SmallGraph, u16> = BTreeMap::new();
    for (i, cert) in classes.iter().enumerate() {
        index_of.insert(*cert, i as u16);
    }
    let table: Vec<Option<u16>> = cert_of
        .into_iter()
        .map(|c| c.map(|cert| index_of[&cert]))
        .collect();

    let edge_counts: Vec<usize> = classes.iter().map(|g| g.edge_count()).collect();
    let names = assign_names(k, kind, &classes);

    Ok(MotifCatalog {
        k,
        kind,
        motifs: classes,
        names,
        edge_counts,
        table,
    })
}

fn apply_anchors(k: usize, kind: GraphKind, classes: &mut [SmallGraph]) {
    if kind != GraphKind::Undirected {
        return;
    }
    let anchors: &[(usize, SmallGraph)] = match k {
        3 => &[(0, path_graph(3)), (1, cycle_graph(3))],
        4 => &[(0, path_graph(4))],
        5 => &[(0, path_graph(5)), (5, cycle_graph(5))],
        _ => &[],
    };
    for &(target, anchor) in anchors {
        let cert = anchor.certificate(kind);
        let pos = classes
            .iter()
            .position(|c| *c == cert)
            .expect("anchor motif is a connected class");
        classes.swap(pos, target);
    }
}

fn assign_names(k: usize, kind: GraphKind, classes: &[SmallGraph]) -> Vec<Option<String>> {
    let mut named: BTreeMap<SmallGraph, String> = BTreeMap::new();
    match kind {
        GraphKind::Undirected => {
            let base: &[(&str, SmallGraph)] = &[
                ("line", path_graph(k)),
                ("circle", cycle_graph(k)),
                ("star", star_graph(k)),
                ("clique", clique_graph(k)),
            ];
            for (name, g) in base {
                named.insert(g.certificate(kind), name.to_string());
            }
            if k == 3 {
                named.insert(path_graph(3).certificate(kind), "wedge".into());
                named.insert(cycle_graph(3).certificate(kind), "triangle".into());
            }
            if k == 4 {
                let mut paw = cycle_graph(3);
                // triangle with a pendant
                let mut g = SmallGraph::new(4);
                for i in 0..3 {
                    for j in (i + 1)..3 {
                        g.set(i, j, paw.get(i, j));
                    }
                }
                g.set(0, 3, 1);
                named.insert(g.certificate(kind), "paw".into());
                // clique minus one edge
                paw = clique_graph(4);
                paw.set(0, 1, 0);
                named.insert(paw.certificate(kind), "diamond".into());
            }
        }
        GraphKind::Signed => {
            // skeleton name plus sign multiset, e.g. "triangle(++-)"
            for skeleton in [path_graph(3), cycle_graph(3)] {
                let base = if skeleton.edge_count() == 2 {
                    "wedge"
                } else {
                    "triangle"
                };
                let pairs: Vec<(usize, usize)> = (0..3)
                    .flat_map(|i| ((i + 1)..3).map(move |j| (i, j)))
                    .filter(|&(i, j)| skeleton.get(i, j) != 0)
                    .collect();
                for assignment in 0..(1u32 << pairs.len()) {
                    let mut g = skeleton;
                    let mut plus = 0usize;
                    for (bit, &(i, j)) in pairs.iter().enumerate() {
                        let minus = assignment >> bit & 1 == 1;
                        g.set(i, j, if minus { 2 } else { 1 });
                        if !minus {
                            plus += 1;
                        }
                    }
                    let signs = format!("{}{}", "+".repeat(plus), "-".repeat(pairs.len() - plus));
                    named.insert(g.certificate(kind), format!("{base}({signs})"));
                }
            }
        }
        GraphKind::Directed => {}
    }
    classes.iter().map(|c| named.get(c).cloned()).collect()
}

fn path_graph(k: usize) -> SmallGraph {
    let mut g = SmallGraph::new(k);
    for i in 0..k - 1 {
        g.set(i, i + 1, 1);
    }
    g
}

fn cycle_graph(k: usize) -> SmallGraph {
    let mut g = path_graph(k);
    g.set(0, k - 1, 1);
    g
}

fn star_graph(k: usize) -> SmallGraph {
    let mut g = SmallGraph::new(k);
    for i in 1..k {
        g.set(0, i, 1);
    }
    g
}

fn clique_graph(k: usize) -> SmallGraph {
    let mut g = SmallGraph::new(k);
    for i in 0..k {
        for j in (i + 1)..k {
            g.set(i, j, 1);
        }
    }
    g
}

impl MotifCatalog {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    /// Number of motif classes `T_k`.
    pub fn len(&self) -> usize {
        self.motifs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.motifs.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = MotifId> {
        (1..=self.len()).map(MotifId)
    }

    /// Skeleton edge count of a class.
    pub fn edge_count(&self, id: MotifId) -> usize {
        self.edge_counts[id.index()]
    }

    pub(crate) fn edge_counts(&self) -> &[usize] {
        &self.edge_counts
    }

    pub fn name(&self, id: MotifId) -> Option<&str> {
        self.names[id.index()].as_deref()
    }

    /// Label-preserving automorphism count of a class representative.
    pub fn automorphism_count(&self, id: MotifId) -> u64 {
        let m = &self.motifs[id.index()];
        count_edge_maps(m, m, self.kind)
    }

    /// Representative edges as `(i, j, label)` on nodes `0..k`.
    pub fn representative_edges(&self, id: MotifId) -> Vec<(usize, usize, EdgeLabel)> {
        let m = &self.motifs[id.index()];
        let mut out = Vec::new();
        for i in 0..self.k {
            for j in (i + 1)..self.k {
                let c = m.get(i, j);
                if c != 0 {
                    out.push((i, j, self.kind.label_of(c)));
                }
            }
        }
        out
    }

    /// Class of a connected induced subgraph. The catalog is exhaustive, so
    /// every CIS of matching size and kind classifies.
    pub fn classify(&self, cis: &Cis) -> MotifId {
        assert_eq!(cis.k(), self.k, "CIS size does not match catalog");
        assert_eq!(cis.kind(), self.kind, "CIS kind does not match catalog");
        self.classify_small(&cis.graph)
            .expect("connected induced subgraph always classifies")
    }

    #[inline]
    pub(crate) fn classify_small(&self, sg: &SmallGraph) -> Option<MotifId> {
        self.table[sg.pack(self.kind)].map(|i| MotifId(i as usize + 1))
    }

    pub(crate) fn motif_small(&self, index: usize) -> &SmallGraph {
        &self.motifs[index]
    }
}

/// Subgraph-embedding counts: `get(i, j)` is the number of subgraphs of class
/// `j`'s representative that are isomorphic to class `i`'s representative,
/// label for label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiMatrix {
    t: usize,
    entries: Vec<u64>,
}

impl PhiMatrix {
    pub fn t(&self) -> usize {
        self.t
    }

    /// 0-based access.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.t + j]
    }
}

/// Count permutations of `0..k` mapping every edge of `sub` onto an edge of
/// `host` with an identical (orientation-adjusted) label.
fn count_edge_maps(sub: &SmallGraph, host: &SmallGraph, kind: GraphKind) -> u64 {
    let k = sub.k();
    let mut count = 0u64;
    'perm: for perm in permutations(k) {
        for i in 0..k {
            for j in (i + 1)..k {
                let c = sub.get(i, j);
                if c == 0 {
                    continue;
                }
                let (a, b) = (perm[i], perm[j]);
                let image = if a < b {
                    host.get(a, b)
                } else {
                    kind.mirror_code(host.get(b, a))
                };
                if image != c {
                    continue 'perm;
                }
            }
        }
        count += 1;
    }
    count
}

/// Compute the embedding-count matrix for a catalog.
///
/// For each pair, the raw count of edge-preserving maps is divided by the
/// number of self-maps of the smaller graph; the division must be exact (a
/// non-integer quotient indicates a broken catalog).
pub fn compute_phi(cat: &MotifCatalog) -> Result<PhiMatrix> {
    let t = cat.len();
    let mut entries = vec![0u64; t * t];
    for i in 0..t {
        let sub = cat.motif_small(i);
        let z = count_edge_maps(sub, sub, cat.kind());
        if z == 0 {
            return Err(Error::Internal(format!(
                "motif {} has zero self-maps",
                i + 1
            )));
        }
        for j in 0..t {
            let y = count_edge_maps(sub, cat.motif_small(j), cat.kind());
            if !y.is_multiple_of(z) {
                return Err(Error::Internal(format!(
                    "embedding count {y} for classes ({}, {}) is not divisible by {z}",
                    i + 1,
                    j + 1
                )));
            }
            entries[i * t + j] = y / z;
        }
    }
    Ok(PhiMatrix { t, entries })
}
