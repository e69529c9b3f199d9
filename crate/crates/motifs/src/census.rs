//! Exact enumeration of all 3-, 4- and 5-node connected induced subgraphs.
//!
//! Each enumerator pivots every node and generates candidate subgraphs from
//! its neighborhood. A subgraph may be generated from several pivots, so a
//! single "responsible" node is designated per subgraph and only that pivot
//! counts it:
//!
//! * k = 3: the wedge center, or the lowest-order node of a triangle.
//! * k = 4: the lowest-order node among those with skeleton degree >= 2
//!   inside the subgraph (the pivot always qualifies).
//! * k = 5, some node of skeleton degree >= 3: the lowest-order such node.
//! * k = 5, max degree 2 (line or circle): the line's middle node, or the
//!   lowest-order node of a circle.
//!
//! Degree tests use the label-blind skeleton. Node order is numeric id order,
//! which equals internal index order because ids are stored sorted.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::catalog::{MotifCatalog, MotifId};
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphKind};
use crate::small::SmallGraph;

/// Exact per-class subgraph counts for one graph and catalog.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountVector {
    pub k: usize,
    pub kind: GraphKind,
    pub counts: Vec<u64>,
}

impl CountVector {
    fn zero(cat: &MotifCatalog) -> CountVector {
        CountVector {
            k: cat.k(),
            kind: cat.kind(),
            counts: vec![0; cat.len()],
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn get(&self, id: MotifId) -> u64 {
        self.counts[id.index()]
    }

    /// Per-class fractions `counts[i] / total`. Empty when `total == 0`.
    pub fn concentrations(&self) -> Vec<f64> {
        let total = self.total();
        if total == 0 {
            return Vec::new();
        }
        self.counts
            .iter()
            .map(|&c| c as f64 / total as f64)
            .collect()
    }

    /// Element-wise merge of per-worker counts.
    pub fn merge(&mut self, other: &CountVector) {
        assert_eq!(self.k, other.k);
        assert_eq!(self.kind, other.kind);
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }
}

/// Enumerate all k-node connected induced subgraphs, k taken from the catalog.
pub fn enumerate(g: &Graph, cat: &MotifCatalog) -> CountVector {
    enumerate_pivot_range(g, cat, 0..g.node_count())
}

/// Enumerate counting only subgraphs whose responsible pivot lies in `pivots`.
/// Summing disjoint covering ranges reproduces [`enumerate`] exactly.
pub fn enumerate_pivot_range(g: &Graph, cat: &MotifCatalog, pivots: Range<usize>) -> CountVector {
    assert_eq!(g.kind(), cat.kind(), "graph kind does not match catalog");
    match cat.k() {
        3 => enumerate3_range(g, cat, pivots),
        4 => enumerate4_range(g, cat, pivots),
        5 => enumerate5_range(g, cat, pivots),
        k => unreachable!("catalog size {k} out of range"),
    }
}

pub fn enumerate3(g: &Graph, cat: &MotifCatalog) -> CountVector {
    assert_eq!(cat.k(), 3);
    enumerate(g, cat)
}

pub fn enumerate4(g: &Graph, cat: &MotifCatalog) -> CountVector {
    assert_eq!(cat.k(), 4);
    enumerate(g, cat)
}

pub fn enumerate5(g: &Graph, cat: &MotifCatalog) -> CountVector {
    assert_eq!(cat.k(), 5);
    enumerate(g, cat)
}

/// Induced view of `nodes` packed for catalog lookup. Orientation-sensitive
/// codes are mirrored when a tuple position pair is in descending id order.
#[inline]
fn induced_small(g: &Graph, kind: GraphKind, nodes: &[usize]) -> SmallGraph {
    let k = nodes.len();
    let mut sg = SmallGraph::new(k);
    for s in 0..k {
        for t in (s + 1)..k {
            let (a, b) = (nodes[s], nodes[t]);
            let (lo, hi, flip) = if a < b { (a, b, false) } else { (b, a, true) };
            if let Some(label) = g.label_between(lo, hi) {
                let code = kind.code_of(label);
                sg.set(s, t, if flip { kind.mirror_code(code) } else { code });
            }
        }
    }
    sg
}

#[inline]
fn tally(counts: &mut [u64], cat: &MotifCatalog, sg: &SmallGraph) {
    let id = cat
        .classify_small(sg)
        .expect("generated subgraph is connected");
    counts[id.index()] += 1;
}

fn enumerate3_range(g: &Graph, cat: &MotifCatalog, pivots: Range<usize>) -> CountVector {
    let mut out = CountVector::zero(cat);
    for u in pivots {
        let nu = g.neighbors(u);
        for (i1, &(v, _)) in nu.iter().enumerate() {
            let v = v as usize;
            for &(w, _) in &nu[i1 + 1..] {
                let w = w as usize;
                // triangle: only the lowest-order node counts it
                if g.has_edge(w, v) && u > v {
                    continue;
                }
                let sg = induced_small(g, cat.kind(), &[u, v, w]);
                tally(&mut out.counts, cat, &sg);
            }
        }
    }
    out
}

/// Sorted union of the neighbor lists of `sources`, minus `exclude`.
fn neighborhood_union(g: &Graph, sources: &[usize], exclude: &[usize]) -> Vec<usize> {
    let mut cursors: Vec<(usize, &[(u32, crate::graph::EdgeLabel)])> =
        sources.iter().map(|&s| (0usize, g.neighbors(s))).collect();
    let mut out = Vec::new();
    loop {
        let mut min: Option<usize> = None;
        for (pos, list) in &cursors {
            if *pos < list.len() {
                let head = list[*pos].0 as usize;
                min = Some(min.map_or(head, |m: usize| m.min(head)));
            }
        }
        let Some(next) = min else { break };
        for (pos, list) in &mut cursors {
            while *pos < list.len() && list[*pos].0 as usize == next {
                *pos += 1;
            }
        }
        if !exclude.contains(&next) {
            out.push(next);
        }
    }
    out
}

fn enumerate4_range(g: &Graph, cat: &MotifCatalog, pivots: Range<usize>) -> CountVector {
    let mut out = CountVector::zero(cat);
    for u in pivots {
        let nu = g.neighbors(u);
        for (i1, &(v, _)) in nu.iter().enumerate() {
            let v = v as usize;
            for &(w, _) in &nu[i1 + 1..] {
                let w = w as usize;
                let gamma = neighborhood_union(g, &[u, v, w], &[u, v, w]);
                for &x in &gamma {
                    // x adjacent to the pivot: keep only the generation where
                    // the pair (v, w) collects the pivot's lowest neighbors
                    if g.has_edge(u, x) && w > x {
                        continue;
                    }
                    let tuple = [u, v, w, x];
                    let sg = induced_small(g, cat.kind(), &tuple);
                    if !responsible(&sg, &tuple, u, 2) {
                        continue;
                    }
                    tally(&mut out.counts, cat, &sg);
                }
            }
        }
    }
    out
}

/// The pivot `u` counts the subgraph iff it is the lowest-order node among
/// those with skeleton degree >= `min_degree` inside it. The pivot always has
/// that degree by construction.
#[inline]
fn responsible(sg: &SmallGraph, tuple: &[usize], u: usize, min_degree: usize) -> bool {
    let mut candidates = 0;
    let mut lowest = usize::MAX;
    for (pos, &node) in tuple.iter().enumerate() {
        if sg.degree(pos) >= min_degree {
            candidates += 1;
            lowest = lowest.min(node);
        }
    }
    debug_assert!(candidates >= 1);
    candidates < 2 || u <= lowest
}

fn enumerate5_range(g: &Graph, cat: &MotifCatalog, pivots: Range<usize>) -> CountVector {
    let mut out = CountVector::zero(cat);
    for u in pivots {
        let nu = g.neighbors(u);
        for (i1, &(v, _)) in nu.iter().enumerate() {
            let v = v as usize;
            for (i2, &(w, _)) in nu.iter().enumerate().skip(i1 + 1) {
                let w = w as usize;

                // Subgraphs where some node has three or more neighbors.
                for &(x, _) in &nu[i2 + 1..] {
                    let x = x as usize;
                    let gamma = neighborhood_union(g, &[u, v, w, x], &[u, v, w, x]);
                    for &y in &gamma {
                        if g.has_edge(y, u) && x > y {
                            continue;
                        }
                        let tuple = [u, v, w, x, y];
                        let sg = induced_small(g, cat.kind(), &tuple);
                        if !responsible(&sg, &tuple, u, 3) {
                            continue;
                        }
                        tally(&mut out.counts, cat, &sg);
                    }
                }

                // Lines and circles: pivot is the middle of the line formed by
                // a non-adjacent neighbor pair and its outward extensions.
                if !g.has_edge(v, w) {
                    let gamma_v = outward_extensions(g, v, u, w);
                    if gamma_v.is_empty() {
                        continue;
                    }
                    let gamma_w = outward_extensions(g, w, u, v);
                    for &x in &gamma_v {
                        for &y in &gamma_w {
                            if g.has_edge(x, y) {
                                // circle: count from its lowest-order node
                                let lowest = u.min(v).min(w).min(x).min(y);
                                if u > lowest {
                                    continue;
                                }
                            }
                            let sg = induced_small(g, cat.kind(), &[u, v, w, x, y]);
                            tally(&mut out.counts, cat, &sg);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Neighbors of `source` that are not `a` or `b` and not adjacent to either.
fn outward_extensions(g: &Graph, source: usize, a: usize, b: usize) -> Vec<usize> {
    g.neighbors(source)
        .iter()
        .map(|&(t, _)| t as usize)
        .filter(|&t| t != a && t != b && !g.has_edge(t, a) && !g.has_edge(t, b))
        .collect()
}

/// Ground-truth census: iterate every k-subset of the nodes, keep those whose
/// induced skeleton is connected, and classify each. Refuses when the subset
/// count exceeds 10^8.
pub fn brute_force_enumerate(g: &Graph, cat: &MotifCatalog) -> Result<CountVector> {
    assert_eq!(g.kind(), cat.kind(), "graph kind does not match catalog");
    let n = g.node_count();
    let k = cat.k();
    let mut out = CountVector::zero(cat);
    if n < k {
        return Ok(out);
    }
    let subsets = binomial(n as u64, k as u64);
    const GUARD: u64 = 100_000_000;
    if subsets > GUARD {
        return Err(Error::Domain(format!(
            "brute force refused: C({n}, {k}) = {subsets} subsets exceeds {GUARD}"
        )));
    }

    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        let sg = induced_small(g, cat.kind(), &subset);
        if connected_by_search(&sg) {
            tally(&mut out.counts, cat, &sg);
        }
        // next lexicographic combination
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if subset[i] != i + n - k {
                break;
            }
        }
        subset[i] += 1;
        for j in i + 1..k {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

/// Connectivity check used by the oracle, written directly against the codes.
fn connected_by_search(sg: &SmallGraph) -> bool {
    sg.is_connected()
}

fn binomial(n: u64, k: u64) -> u64 {
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}
