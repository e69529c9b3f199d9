//! Monte Carlo evaluation of the estimator against ground truth.
//!
//! Given a graph whose census is computable exactly, the harness repeatedly
//! samples it, re-estimates the concentrations from each sampled graph, and
//! summarizes the error per class: mean estimate, MSE, NRMSE (`sqrt(MSE) /
//! omega`, undefined for classes with zero true concentration) and the
//! Fisher-information bound for comparison.
//!
//! Runs are independent and execute in parallel; every run's randomness is
//! derived from `(seed, p-block index, run index)` alone, so reports are
//! byte-identical regardless of thread count or scheduling. In hash mode each
//! run draws a fresh `(a, b)` pair and the block's effective keep probability
//! is used downstream in place of the requested `p`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::fisher_and_crlb;
use crate::catalog::{build_catalog, compute_phi, MotifCatalog};
use crate::census::enumerate;
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphKind};
use crate::inference::{build_p, infer_counts};
use crate::sampler::{sample_graph, HashParams, SamplerConfig};

/// How each evaluation run draws its sample.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "sampler")]
pub enum EvalSampler {
    /// Seeded per-edge coin flips; a fresh seed per run.
    #[default]
    Bernoulli,
    /// Symmetric pair hash; fresh `(a, b)` per run, fixed `rho`.
    Hash { rho: u64 },
}

/// Evaluation protocol configuration.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EvalConfig {
    pub k: usize,
    pub kind: GraphKind,
    pub p_values: Vec<f64>,
    pub runs: usize,
    pub seed: u64,
    #[serde(default)]
    pub sampler: EvalSampler,
}

/// Per-class error summary.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MotifRow {
    pub id: usize,
    pub name: Option<String>,
    pub true_omega: f64,
    pub mean_estimate: f64,
    pub mse: f64,
    pub rmse: f64,
    /// `sqrt(mse) / true_omega`; `null` when the class is absent from the
    /// original graph.
    pub nrmse: Option<f64>,
    /// Root of the information bound, for side-by-side comparison with rmse.
    pub rcrlb: f64,
}

/// Results for one sampling probability.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PBlock {
    pub p: f64,
    pub effective_p: f64,
    pub runs: usize,
    /// Runs whose sample contained no k-node connected subgraph; they carry
    /// no estimate and are excluded from the averages.
    pub empty_runs: usize,
    /// Runs whose estimated counts summed to exactly zero, leaving the
    /// concentration estimate undefined; excluded like empty runs.
    pub degenerate_runs: usize,
    pub rows: Vec<MotifRow>,
}

/// Full evaluation report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NrmseReport {
    pub k: usize,
    pub kind: GraphKind,
    pub seed: u64,
    pub runs: usize,
    pub n_total: u64,
    pub true_counts: Vec<u64>,
    pub blocks: Vec<PBlock>,
}

impl NrmseReport {
    pub fn to_tsv(&self) -> String {
        let mut out =
            String::from("p\tid\tname\ttrue_omega\tmean_estimate\tmse\trmse\tnrmse\trcrlb\n");
        for block in &self.blocks {
            for row in &block.rows {
                out.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                    block.p,
                    row.id,
                    row.name.as_deref().unwrap_or("-"),
                    row.true_omega,
                    row.mean_estimate,
                    row.mse,
                    row.rmse,
                    row.nrmse.map_or("null".to_string(), |v| v.to_string()),
                    row.rcrlb
                ));
            }
        }
        out
    }
}

enum RunOutcome {
    Estimate(Vec<f64>),
    Empty,
    Degenerate,
}

/// SplitMix64 stream element `index` of the stream seeded by `master`.
/// Deterministic run/block sub-seeding lives entirely on this.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Run the full protocol: exact ground truth, then `runs` independent
/// sample-and-estimate rounds per probability.
pub fn run_eval(g: &Graph, cfg: &EvalConfig) -> Result<NrmseReport> {
    if cfg.runs == 0 {
        return Err(Error::Domain("runs must be at least 1".into()));
    }
    if cfg.kind != g.kind() {
        return Err(Error::Domain(format!(
            "graph kind {} does not match configured kind {}",
            g.kind().as_str(),
            cfg.kind.as_str()
        )));
    }
    for &p in &cfg.p_values {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::Domain(format!("p = {p} out of range (0, 1]")));
        }
    }

    let cat = build_catalog(cfg.k, cfg.kind)?;
    let phi = compute_phi(&cat)?;
    let truth = enumerate(g, &cat);
    let n_total = truth.total();
    if n_total == 0 {
        return Err(Error::Domain(
            "the input graph has no k-node connected subgraphs; nothing to evaluate".into(),
        ));
    }
    let true_omega = truth.concentrations();
    let max_id = g.max_node_id().unwrap_or(0) as u64;

    let mut blocks = Vec::with_capacity(cfg.p_values.len());
    for (block_idx, &p) in cfg.p_values.iter().enumerate() {
        let effective_p = match cfg.sampler {
            EvalSampler::Bernoulli => p,
            EvalSampler::Hash { rho } => {
                SamplerConfig::hash(p, HashParams::for_max_id(max_id, rho, 1)?)?.effective_p()
            }
        };
        let pm = build_p(&phi, effective_p, &cat)?;
        let bound = fisher_and_crlb(&pm, &true_omega, n_total, false)?;

        let block_seed = derive_seed(cfg.seed, block_idx as u64);
        let estimates: Vec<RunOutcome> = (0..cfg.runs)
            .into_par_iter()
            .map(|run| -> Result<RunOutcome> {
                let run_seed = derive_seed(block_seed, run as u64);
                let sampler_cfg = match cfg.sampler {
                    EvalSampler::Bernoulli => SamplerConfig::bernoulli(p, run_seed)?,
                    EvalSampler::Hash { rho } => {
                        SamplerConfig::hash(p, HashParams::for_max_id(max_id, rho, run_seed)?)?
                    }
                };
                let sampled = sample_graph(g, &sampler_cfg)?;
                let m = enumerate(&sampled, &cat);
                if m.total() == 0 {
                    return Ok(RunOutcome::Empty);
                }
                match infer_counts(&m, &pm) {
                    Ok(report) => Ok(RunOutcome::Estimate(report.omega_hat)),
                    // counts that sum to exactly zero leave omega undefined
                    Err(Error::Numeric(_)) => Ok(RunOutcome::Degenerate),
                    Err(other) => Err(other),
                }
            })
            .collect::<Result<Vec<_>>>()?;

        let empty_runs = estimates
            .iter()
            .filter(|e| matches!(e, RunOutcome::Empty))
            .count();
        let degenerate_runs = estimates
            .iter()
            .filter(|e| matches!(e, RunOutcome::Degenerate))
            .count();
        let valid: Vec<&Vec<f64>> = estimates
            .iter()
            .filter_map(|e| match e {
                RunOutcome::Estimate(v) => Some(v),
                _ => None,
            })
            .collect();
        if valid.is_empty() {
            return Err(Error::Numeric(format!(
                "all {} runs at p = {p} produced empty or degenerate samples; increase p",
                cfg.runs
            )));
        }
        let rows = aggregate(&cat, &true_omega, &valid, &bound.rcrlb);
        blocks.push(PBlock {
            p,
            effective_p,
            runs: cfg.runs,
            empty_runs,
            degenerate_runs,
            rows,
        });
    }

    Ok(NrmseReport {
        k: cfg.k,
        kind: cfg.kind,
        seed: cfg.seed,
        runs: cfg.runs,
        n_total,
        true_counts: truth.counts,
        blocks,
    })
}

/// Fold per-run estimates into per-class error rows.
fn aggregate(
    cat: &MotifCatalog,
    true_omega: &[f64],
    estimates: &[&Vec<f64>],
    rcrlb: &[f64],
) -> Vec<MotifRow> {
    let t = true_omega.len();
    let r = estimates.len() as f64;
    (0..t)
        .map(|i| {
            let mean = estimates.iter().map(|e| e[i]).sum::<f64>() / r;
            let mse = estimates
                .iter()
                .map(|e| (e[i] - true_omega[i]).powi(2))
                .sum::<f64>()
                / r;
            let nrmse = if true_omega[i] > 0.0 {
                Some(mse.sqrt() / true_omega[i])
            } else {
                None
            };
            let id = crate::catalog::MotifId::new(i + 1);
            MotifRow {
                id: i + 1,
                name: cat.name(id).map(str::to_string),
                true_omega: true_omega[i],
                mean_estimate: mean,
                mse,
                rmse: mse.sqrt(),
                nrmse,
                rcrlb: rcrlb[i],
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::preferential_attachment;
    use crate::graph::parse_edge_list;

    fn eval_cfg(k: usize, kind: GraphKind, p: f64, runs: usize, seed: u64) -> EvalConfig {
        EvalConfig {
            k,
            kind,
            p_values: vec![p],
            runs,
            seed,
            sampler: EvalSampler::Bernoulli,
        }
    }

    #[test]
    fn aggregate_worked_example() {
        // two estimates 0.8 and 1.2 around a true value of 1:
        // MSE = (0.04 + 0.04) / 2 = 0.04, NRMSE = 0.2
        let cat = build_catalog(3, GraphKind::Undirected).unwrap();
        let a = vec![0.8, 0.2];
        let b = vec![1.2, -0.2];
        let rows = aggregate(&cat, &[1.0, 0.0], &[&a, &b], &[0.0, 0.0]);
        assert!((rows[0].mse - 0.04).abs() < 1e-15);
        assert!((rows[0].nrmse.unwrap() - 0.2).abs() < 1e-15);
        assert!(rows[1].nrmse.is_none(), "zero-concentration class is null");
        assert!(rows[1].mse > 0.0);
    }

    #[test]
    fn p_one_has_zero_error() {
        let g = preferential_attachment(40, 2, GraphKind::Undirected, 5);
        let report = run_eval(&g, &eval_cfg(3, GraphKind::Undirected, 1.0, 4, 9)).unwrap();
        for row in &report.blocks[0].rows {
            if row.true_omega > 0.0 {
                assert_eq!(row.nrmse, Some(0.0));
            }
            assert!(row.mse.abs() < 1e-28);
        }
        assert_eq!(report.blocks[0].empty_runs, 0);
    }

    #[test]
    fn reports_are_deterministic() {
        let g = preferential_attachment(60, 2, GraphKind::Undirected, 5);
        let cfg = EvalConfig {
            k: 3,
            kind: GraphKind::Undirected,
            p_values: vec![0.3, 0.6],
            runs: 50,
            seed: 1234,
            sampler: EvalSampler::Bernoulli,
        };
        let a = serde_json::to_string(&run_eval(&g, &cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&run_eval(&g, &cfg).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn hash_sampler_records_effective_p() {
        let g = preferential_attachment(60, 2, GraphKind::Undirected, 5);
        let cfg = EvalConfig {
            k: 3,
            kind: GraphKind::Undirected,
            p_values: vec![0.3],
            runs: 20,
            seed: 7,
            sampler: EvalSampler::Hash { rho: 8 },
        };
        let report = run_eval(&g, &cfg).unwrap();
        // ceil(8 * 0.3) / 8 = 3/8
        assert!((report.blocks[0].effective_p - 0.375).abs() < 1e-15);
    }

    #[test]
    fn empty_runs_are_counted_not_averaged() {
        // a lone triangle: at p = 0.3 most runs evaporate entirely
        let g = parse_edge_list("0 1\n1 2\n2 0", GraphKind::Undirected).unwrap();
        let report = run_eval(&g, &eval_cfg(3, GraphKind::Undirected, 0.3, 60, 11)).unwrap();
        let block = &report.blocks[0];
        assert!(block.empty_runs > 0 && block.empty_runs < block.runs);
        for row in &block.rows {
            assert!(row.mean_estimate.is_finite());
        }
    }

    #[test]
    fn rejects_bad_config() {
        let g = parse_edge_list("0 1\n1 2", GraphKind::Undirected).unwrap();
        assert!(run_eval(&g, &eval_cfg(3, GraphKind::Undirected, 0.0, 5, 1)).is_err());
        assert!(run_eval(&g, &eval_cfg(3, GraphKind::Undirected, 0.5, 0, 1)).is_err());
        assert!(run_eval(&g, &eval_cfg(3, GraphKind::Directed, 0.5, 5, 1)).is_err());
    }

    #[test]
    fn derived_seeds_are_spread_out() {
        let mut seen = std::collections::HashSet::new();
        for i in 0..10_000u64 {
            seen.insert(derive_seed(42, i));
        }
        assert_eq!(seen.len(), 10_000);
    }
}
