//! Seeded synthetic graph generators for tests and the evaluation harness.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{EdgeLabel, Graph, GraphKind, NodeId};

fn random_label<R: Rng>(kind: GraphKind, rng: &mut R) -> EdgeLabel {
    match kind {
        GraphKind::Undirected => EdgeLabel::Plain,
        GraphKind::Directed => *[EdgeLabel::Fwd, EdgeLabel::Rev, EdgeLabel::Bidir]
            .choose(rng)
            .unwrap(),
        GraphKind::Signed => *[EdgeLabel::Plus, EdgeLabel::Minus].choose(rng).unwrap(),
    }
}

/// Erdős–Rényi G(n, p): every pair is an edge independently with `edge_prob`.
pub fn erdos_renyi(n: NodeId, edge_prob: f64, kind: GraphKind, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen::<f64>() < edge_prob {
                edges.push((u, v, random_label(kind, &mut rng)));
            }
        }
    }
    Graph::from_edges(kind, edges).expect("generator produces valid edges")
}

/// Preferential attachment: start from a cycle on `m + 2` nodes, then attach
/// every new node to `m` distinct existing nodes chosen with probability
/// proportional to degree. Total edges: `m + 2 + m * (n - m - 2)`.
pub fn preferential_attachment(n: NodeId, m: usize, kind: GraphKind, seed: u64) -> Graph {
    let m0 = (m + 2) as NodeId;
    assert!(n >= m0, "need at least {m0} nodes");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(NodeId, NodeId, EdgeLabel)> = Vec::new();
    // endpoint pool: each node appears once per incident edge
    let mut pool: Vec<NodeId> = Vec::new();
    for u in 0..m0 {
        let v = (u + 1) % m0;
        edges.push((u.min(v), u.max(v), random_label(kind, &mut rng)));
        pool.push(u);
        pool.push(v);
    }
    for u in m0..n {
        let mut targets: Vec<NodeId> = Vec::with_capacity(m);
        while targets.len() < m {
            let t = pool[rng.gen_range(0..pool.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for t in targets {
            edges.push((t, u, random_label(kind, &mut rng)));
            pool.push(t);
            pool.push(u);
        }
    }
    Graph::from_edges(kind, edges).expect("generator produces valid edges")
}
