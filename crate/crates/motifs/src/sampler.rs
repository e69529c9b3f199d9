//! Independent per-edge sampling of a graph's skeleton.
//!
//! Two modes produce a sampled graph in which every skeleton edge survives
//! with the same probability and keeps its exact label:
//!
//! * `bernoulli`: one draw per edge from a seeded counter-mode generator
//!   (ChaCha8), iterating edges in sorted order; reproducible given the seed.
//! * `hash`: a symmetric universal hash decides each pair, so the same
//!   decision falls out for an edge no matter where it appears in a stream.
//!   `hash_pair(u, v) = (a * (min(u,v) * delta + max(u,v)) + b) mod gamma mod rho`
//!   with `gamma` a prime larger than `delta^2`, `a` in `1..rho`, `b` in
//!   `0..rho`, and all node ids below `delta`. An edge is kept when the hash
//!   value falls below `ceil(rho * p)`, making the effective keep probability
//!   exactly `ceil(rho * p) / rho`; pick `rho` large (default `2^20`) to make
//!   the gap to `p` negligible.
//!
//! Because the hash is symmetric, reciprocal directed edges `u->v` and `v->u`
//! are kept or dropped together, which is what keeps labels trustworthy in the
//! sampled graph.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeLabel, Graph, GraphKind, NodeId};

/// Default hash range: effective keep probability lands within 2^-20 of `p`.
pub const DEFAULT_RHO: u64 = 1 << 20;

/// Parameters of the symmetric universal hash.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HashParams {
    pub a: u64,
    pub b: u64,
    pub gamma: u64,
    pub rho: u64,
    pub delta: u64,
}

impl HashParams {
    /// Validate the parameter relationships.
    pub fn validate(&self) -> Result<()> {
        if self.delta == 0 {
            return Err(Error::Domain("delta must be positive".into()));
        }
        if self.rho < 2 {
            return Err(Error::Domain("rho must be at least 2".into()));
        }
        if self.a < 1 || self.a > self.rho - 1 {
            return Err(Error::Domain(format!(
                "a = {} out of range 1..={}",
                self.a,
                self.rho - 1
            )));
        }
        if self.b > self.rho - 1 {
            return Err(Error::Domain(format!(
                "b = {} out of range 0..={}",
                self.b,
                self.rho - 1
            )));
        }
        match self.delta.checked_mul(self.delta) {
            Some(sq) if self.gamma > sq => {}
            _ => {
                return Err(Error::Domain(format!(
                    "gamma = {} must exceed delta^2 = {}^2",
                    self.gamma, self.delta
                )))
            }
        }
        if !is_prime(self.gamma) {
            return Err(Error::Domain(format!(
                "gamma = {} is not prime",
                self.gamma
            )));
        }
        Ok(())
    }

    /// Convenient parameters for a given graph: `delta` just above the largest
    /// node id, `gamma` the next prime after `delta^2`, and `(a, b)` drawn
    /// from a seeded generator.
    pub fn for_graph(g: &Graph, rho: u64, seed: u64) -> Result<HashParams> {
        let max_id = g.max_node_id().unwrap_or(0) as u64;
        Self::for_max_id(max_id, rho, seed)
    }

    pub fn for_max_id(max_id: u64, rho: u64, seed: u64) -> Result<HashParams> {
        let delta = max_id + 1;
        let gamma = next_prime_above(delta * delta);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = rng.gen_range(1..rho);
        let b = rng.gen_range(0..rho);
        let params = HashParams {
            a,
            b,
            gamma,
            rho,
            delta,
        };
        params.validate()?;
        Ok(params)
    }
}

/// How per-edge keep decisions are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum SamplerMode {
    Bernoulli { seed: u64 },
    Hash(HashParams),
}

/// A validated sampling configuration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub p: f64,
    pub mode: SamplerMode,
}

impl SamplerConfig {
    pub fn bernoulli(p: f64, seed: u64) -> Result<SamplerConfig> {
        let cfg = SamplerConfig {
            p,
            mode: SamplerMode::Bernoulli { seed },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn hash(p: f64, params: HashParams) -> Result<SamplerConfig> {
        let cfg = SamplerConfig {
            p,
            mode: SamplerMode::Hash(params),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 0.0 && self.p <= 1.0) {
            return Err(Error::Domain(format!(
                "sampling probability p = {} must lie in (0, 1]",
                self.p
            )));
        }
        if let SamplerMode::Hash(params) = &self.mode {
            params.validate()?;
        }
        Ok(())
    }

    /// The keep probability actually realized. Equals `p` in bernoulli mode;
    /// `ceil(rho * p) / rho` in hash mode.
    pub fn effective_p(&self) -> f64 {
        match &self.mode {
            SamplerMode::Bernoulli { .. } => self.p,
            SamplerMode::Hash(params) => {
                hash_threshold(self.p, params.rho) as f64 / params.rho as f64
            }
        }
    }
}

#[inline]
fn hash_threshold(p: f64, rho: u64) -> u64 {
    ((rho as f64 * p).ceil() as u64).min(rho)
}

/// The symmetric pair hash, uniform over `0..rho`.
pub fn hash_pair(u: NodeId, v: NodeId, params: &HashParams) -> Result<u64> {
    if u == v {
        return Err(Error::Domain(format!(
            "pair hash of a self-pair ({u}, {u})"
        )));
    }
    let (lo, hi) = (u.min(v) as u128, u.max(v) as u128);
    if hi >= params.delta as u128 {
        return Err(Error::Domain(format!(
            "node id {hi} is not below delta = {}",
            params.delta
        )));
    }
    let key = lo * params.delta as u128 + hi;
    let hashed = (params.a as u128 * key + params.b as u128) % params.gamma as u128;
    Ok((hashed % params.rho as u128) as u64)
}

/// Sample every skeleton edge independently; kept edges keep their labels and
/// the sampled graph contains only the endpoints of kept edges.
pub fn sample_graph(g: &Graph, cfg: &SamplerConfig) -> Result<Graph> {
    cfg.validate()?;
    let mut kept: Vec<(NodeId, NodeId, EdgeLabel)> = Vec::new();
    match &cfg.mode {
        SamplerMode::Bernoulli { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            for (u, v, label) in g.edges() {
                if rng.gen::<f64>() < cfg.p {
                    kept.push((u, v, label));
                }
            }
        }
        SamplerMode::Hash(params) => {
            let threshold = hash_threshold(cfg.p, params.rho);
            for (u, v, label) in g.edges() {
                if hash_pair(u, v, params)? < threshold {
                    kept.push((u, v, label));
                }
            }
        }
    }
    Graph::from_edges(g.kind(), kept)
}

/// Sample a stream of `(u, v, label)` records one at a time (hash mode only;
/// a stream needs the same decision for a pair wherever it shows up). Directed
/// labels are read as oriented from `u` to `v`. The result is identical to
/// aggregating the stream into a graph and calling [`sample_graph`].
pub fn sample_stream<I>(kind: GraphKind, edges: I, cfg: &SamplerConfig) -> Result<Graph>
where
    I: IntoIterator<Item = (NodeId, NodeId, EdgeLabel)>,
{
    cfg.validate()?;
    let params = match &cfg.mode {
        SamplerMode::Hash(params) => params,
        SamplerMode::Bernoulli { .. } => {
            return Err(Error::Domain(
                "stream sampling requires hash mode; bernoulli decisions are not per-pair".into(),
            ))
        }
    };
    let threshold = hash_threshold(cfg.p, params.rho);
    let mut kept: Vec<(NodeId, NodeId, EdgeLabel)> = Vec::new();
    for (u, v, label) in edges {
        if u == v {
            return Err(Error::Domain(format!("self-loop on node {u} in stream")));
        }
        if hash_pair(u, v, params)? < threshold {
            kept.push((u, v, label));
        }
    }
    Graph::from_edges(kind, kept)
}

/// Deterministic Miller-Rabin, exact for all u64.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == small {
            return true;
        }
        if n.is_multiple_of(small) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime_above(n: u64) -> u64 {
    let mut candidate = n + 1;
    if candidate <= 2 {
        return 2;
    }
    if candidate.is_multiple_of(2) {
        candidate += 1;
    }
    while !is_prime(candidate) {
        candidate += 2;
    }
    candidate
}
