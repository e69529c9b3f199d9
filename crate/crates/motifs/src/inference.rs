//! Inferring original-graph motif statistics from a sampled graph's census.
//!
//! When every skeleton edge survives independently with probability `p`, a
//! subgraph of class `j` appears in the sample as class `i` with probability
//!
//! ```text
//! P[i][j] = phi[i][j] * p^e_i * q^(e_j - e_i),    q = 1 - p,
//! ```
//!
//! where `e_x` is the skeleton edge count of class `x` and `phi[i][j]` counts
//! the label-matching embeddings of class `i` inside class `j`. The expected
//! sampled census is then `E[m] = P n`, so `n_hat = P^-1 m` is an unbiased
//! estimate of the original counts, and normalizing gives the concentration
//! estimate. For the 3-node undirected catalog,
//!
//! ```text
//! P = [ p^2  3 q p^2 ]        P^-1 = [ p^-2  -3 q p^-3 ]
//!     [ 0      p^3   ]               [ 0        p^-3   ]
//! ```
//!
//! Because catalog ids are non-decreasing in edge count, `P` is upper
//! triangular and the system is solved by back-substitution; an explicit
//! inverse is available for cross-checks. Negative estimate components are
//! reported as-is (clamping would bias the estimator) and flagged.

use serde::{Deserialize, Serialize};

use crate::catalog::{MotifCatalog, PhiMatrix};
use crate::census::CountVector;
use crate::error::{Error, Result};
use crate::graph::GraphKind;

/// The per-class appearance probability matrix for one catalog and `p`.
#[derive(Clone, Debug)]
pub struct TransitionMatrix {
    t: usize,
    k: usize,
    kind: GraphKind,
    p: f64,
    /// Row-major `t x t`.
    entries: Vec<f64>,
    edge_counts: Vec<usize>,
}

/// Build the transition matrix from embedding counts and `p`.
pub fn build_p(phi: &PhiMatrix, p: f64, cat: &MotifCatalog) -> Result<TransitionMatrix> {
    // the negated form also rejects NaN
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Domain(format!(
            "sampling probability p = {p} must lie in (0, 1]"
        )));
    }
    let t = cat.len();
    assert_eq!(phi.t(), t, "phi matrix does not match catalog");
    let q = 1.0 - p;
    let edge_counts = cat.edge_counts().to_vec();
    let mut entries = vec![0.0; t * t];
    for i in 0..t {
        for j in 0..t {
            let phi_ij = phi.get(i, j);
            if phi_ij == 0 {
                continue;
            }
            let (ei, ej) = (edge_counts[i] as i32, edge_counts[j] as i32);
            entries[i * t + j] = phi_ij as f64 * p.powi(ei) * q.powi(ej - ei);
        }
    }
    Ok(TransitionMatrix {
        t,
        k: cat.k(),
        kind: cat.kind(),
        p,
        entries,
        edge_counts,
    })
}

impl TransitionMatrix {
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// 0-based access.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.t + j]
    }

    pub fn column_sum(&self, j: usize) -> f64 {
        (0..self.t).map(|i| self.get(i, j)).sum()
    }

    /// Solve `P x = rhs` by back-substitution on the triangular system.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        assert_eq!(rhs.len(), self.t, "dimension mismatch");
        let mut x = vec![0.0; self.t];
        for i in (0..self.t).rev() {
            let diag = self.get(i, i);
            // the negated form also catches NaN
            if !(diag > f64::MIN_POSITIVE) {
                return Err(Error::Numeric(format!(
                    "diagonal entry p^{} underflowed at p = {}; the sampling probability is too small for this catalog",
                    self.edge_counts[i], self.p
                )));
            }
            let tail: f64 = (i + 1..self.t).map(|j| self.get(i, j) * x[j]).sum();
            x[i] = (rhs[i] - tail) / diag;
        }
        Ok(x)
    }

    /// Explicit inverse, built by solving against basis vectors. Kept for
    /// cross-checking the solve path; row-major `t x t`.
    pub fn inverse(&self) -> Result<Vec<f64>> {
        let mut inv = vec![0.0; self.t * self.t];
        let mut basis = vec![0.0; self.t];
        for j in 0..self.t {
            basis[j] = 1.0;
            let col = self.solve(&basis)?;
            basis[j] = 0.0;
            for i in 0..self.t {
                inv[i * self.t + j] = col[i];
            }
        }
        Ok(inv)
    }
}

/// Estimates inferred from a sampled census.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EstimateReport {
    pub k: usize,
    pub kind: GraphKind,
    pub p: f64,
    /// Unbiased estimates of the original per-class counts.
    pub n_hat: Vec<f64>,
    /// Concentration estimates, summing to one.
    pub omega_hat: Vec<f64>,
    /// Sample concentrations `m_i / m`.
    pub rho: Vec<f64>,
    /// Normalizer of the concentration-space estimator.
    #[serde(rename = "W")]
    pub w: f64,
    /// Diagnostics, e.g. `negative_n_hat[i]` markers.
    pub flags: Vec<String>,
    /// Ratio of the largest to smallest diagonal survival probability.
    pub condition: f64,
}

impl EstimateReport {
    /// Presentation-only projection: clamp negative count estimates to zero
    /// and renormalize. This is biased; the unbiased fields are authoritative.
    pub fn biased_projection(&self) -> Vec<f64> {
        let clamped: Vec<f64> = self.n_hat.iter().map(|&x| x.max(0.0)).collect();
        let total: f64 = clamped.iter().sum();
        if total > 0.0 {
            clamped.iter().map(|&x| x / total).collect()
        } else {
            vec![0.0; self.n_hat.len()]
        }
    }

    /// One class per row: id, name, rho, n_hat, omega_hat.
    pub fn to_tsv(&self, cat: &MotifCatalog) -> String {
        let mut out = String::from("id\tname\trho\tn_hat\tomega_hat\n");
        for id in cat.ids() {
            let i = id.index();
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\n",
                id,
                cat.name(id).unwrap_or("-"),
                self.rho[i],
                self.n_hat[i],
                self.omega_hat[i]
            ));
        }
        out
    }
}

/// Estimate original counts and concentrations from a sampled census.
pub fn infer_counts(m: &CountVector, pm: &TransitionMatrix) -> Result<EstimateReport> {
    infer_counts_via(m, pm, false)
}

/// Same as [`infer_counts`] but optionally multiplying by the explicit inverse
/// instead of back-substituting; the two are algebraically identical.
pub fn infer_counts_via(
    m: &CountVector,
    pm: &TransitionMatrix,
    explicit_inverse: bool,
) -> Result<EstimateReport> {
    assert_eq!(m.counts.len(), pm.t(), "census does not match matrix");
    assert_eq!(m.kind, pm.kind(), "census kind does not match matrix");
    let total = m.total();
    if total == 0 {
        return Err(Error::EmptySample { k: m.k });
    }
    let rhs: Vec<f64> = m.counts.iter().map(|&c| c as f64).collect();
    let n_hat = if explicit_inverse {
        let inv = pm.inverse()?;
        let t = pm.t();
        (0..t)
            .map(|i| (0..t).map(|j| inv[i * t + j] * rhs[j]).sum())
            .collect()
    } else {
        pm.solve(&rhs)?
    };

    let sum: f64 = n_hat.iter().sum();
    if sum == 0.0 || !sum.is_finite() {
        return Err(Error::Numeric(format!(
            "degenerate normalizer: estimated counts sum to {sum}"
        )));
    }
    let omega_hat: Vec<f64> = n_hat.iter().map(|&x| x / sum).collect();
    let rho: Vec<f64> = m.counts.iter().map(|&c| c as f64 / total as f64).collect();
    let w = sum / total as f64;

    let mut flags = Vec::new();
    for (i, &x) in n_hat.iter().enumerate() {
        if x < 0.0 {
            flags.push(format!("negative_n_hat[{}]", i + 1));
        }
    }
    let diag: Vec<f64> = (0..pm.t()).map(|i| pm.get(i, i)).collect();
    let condition = diag.iter().cloned().fold(f64::MIN, f64::max)
        / diag.iter().cloned().fold(f64::MAX, f64::min);

    Ok(EstimateReport {
        k: m.k,
        kind: m.kind,
        p: pm.p(),
        n_hat,
        omega_hat,
        rho,
        w,
        flags,
        condition,
    })
}

/// Concentration-space form of the estimator: `omega_hat = P^-1 rho / W` with
/// `W` the sum of the solved vector. Scale-invariant with [`infer_counts`].
pub fn infer_concentrations(rho: &[f64], pm: &TransitionMatrix) -> Result<Vec<f64>> {
    assert_eq!(rho.len(), pm.t(), "dimension mismatch");
    let sum: f64 = rho.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!(
            "sample concentrations must sum to 1, got {sum}"
        )));
    }
    let x = pm.solve(rho)?;
    let w: f64 = x.iter().sum();
    if w == 0.0 || !w.is_finite() {
        return Err(Error::Numeric(format!("degenerate normalizer W = {w}")));
    }
    Ok(x.iter().map(|&v| v / w).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build_catalog, compute_phi};

    fn p3u(p: f64) -> TransitionMatrix {
        let cat = build_catalog(3, GraphKind::Undirected).unwrap();
        let phi = compute_phi(&cat).unwrap();
        build_p(&phi, p, &cat).unwrap()
    }

    fn counts3(wedge: u64, triangle: u64) -> CountVector {
        CountVector {
            k: 3,
            kind: GraphKind::Undirected,
            counts: vec![wedge, triangle],
        }
    }

    #[test]
    fn closed_form_three_node_matrix() {
        let pm = p3u(0.5);
        assert_eq!(pm.get(0, 0), 0.25);
        assert_eq!(pm.get(0, 1), 0.375);
        assert_eq!(pm.get(1, 0), 0.0);
        assert_eq!(pm.get(1, 1), 0.125);
    }

    #[test]
    fn p_one_is_identity() {
        let pm = p3u(1.0);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(pm.get(i, j), if i == j { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn p_out_of_range_rejected() {
        let cat = build_catalog(3, GraphKind::Undirected).unwrap();
        let phi = compute_phi(&cat).unwrap();
        assert!(build_p(&phi, 0.0, &cat).is_err());
        assert!(build_p(&phi, 1.5, &cat).is_err());
    }

    #[test]
    fn column_sums_at_most_one() {
        for p in [0.1, 0.5, 0.9, 1.0] {
            let pm = p3u(p);
            for j in 0..pm.t() {
                assert!(pm.column_sum(j) <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn identity_inference() {
        let report = infer_counts(&counts3(5, 7), &p3u(1.0)).unwrap();
        assert_eq!(report.n_hat, vec![5.0, 7.0]);
        assert!((report.omega_hat[0] - 5.0 / 12.0).abs() < 1e-15);
        assert!((report.omega_hat[1] - 7.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn triangular_solve_worked_example() {
        // p = 0.5, m = (10, 1): n2 = 1 / 0.125 = 8; n1 = (10 - 0.375*8) / 0.25 = 28
        let report = infer_counts(&counts3(10, 1), &p3u(0.5)).unwrap();
        assert!((report.n_hat[0] - 28.0).abs() < 1e-12);
        assert!((report.n_hat[1] - 8.0).abs() < 1e-12);
        assert!((report.omega_hat[0] - 7.0 / 9.0).abs() < 1e-12);
        assert!((report.omega_hat[1] - 2.0 / 9.0).abs() < 1e-12);
        assert!(report.flags.is_empty());
    }

    #[test]
    fn wedges_only_sample() {
        let report = infer_counts(&counts3(3, 0), &p3u(0.5)).unwrap();
        assert!((report.n_hat[0] - 12.0).abs() < 1e-12);
        assert_eq!(report.n_hat[1], 0.0);
        assert!((report.omega_hat[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn empty_sample_is_an_error() {
        let err = infer_counts(&counts3(0, 0), &p3u(0.5)).unwrap_err();
        assert!(matches!(err, Error::EmptySample { k: 3 }));
    }

    #[test]
    fn negative_components_preserved_and_flagged() {
        // all-triangle sample at p = 0.5 forces a negative wedge estimate
        let report = infer_counts(&counts3(0, 8), &p3u(0.5)).unwrap();
        assert!((report.n_hat[1] - 64.0).abs() < 1e-12);
        assert!((report.n_hat[0] + 96.0).abs() < 1e-12);
        assert_eq!(report.flags, vec!["negative_n_hat[1]".to_string()]);
        // omega still sums to one; the projection is sanitized
        let sum: f64 = report.omega_hat.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert_eq!(report.biased_projection(), vec![0.0, 1.0]);
    }

    #[test]
    fn explicit_inverse_path_agrees() {
        let pm = p3u(0.2);
        let m = counts3(123, 17);
        let a = infer_counts_via(&m, &pm, false).unwrap();
        let b = infer_counts_via(&m, &pm, true).unwrap();
        for (x, y) in a.n_hat.iter().zip(&b.n_hat) {
            assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
        }
    }

    #[test]
    fn paper_inverse_entries_reproduced() {
        for p in [0.1, 0.5, 0.9] {
            let pm = p3u(p);
            let inv = pm.inverse().unwrap();
            let q = 1.0 - p;
            let expect = [p.powi(-2), -3.0 * q * p.powi(-3), 0.0, p.powi(-3)];
            for (got, want) in inv.iter().zip(expect) {
                assert!(
                    (got - want).abs() <= 1e-10 * want.abs().max(1.0),
                    "p={p}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn concentration_route_matches_count_route() {
        let pm = p3u(0.5);
        let est = infer_concentrations(&[10.0 / 11.0, 1.0 / 11.0], &pm).unwrap();
        assert!((est[0] - 7.0 / 9.0).abs() < 1e-12);
        assert!((est[1] - 2.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn concentration_route_identity() {
        let est = infer_concentrations(&[1.0, 0.0], &p3u(1.0)).unwrap();
        assert_eq!(est, vec![1.0, 0.0]);
    }

    #[test]
    fn concentrations_must_sum_to_one() {
        assert!(infer_concentrations(&[0.5, 0.2], &p3u(0.5)).is_err());
    }

    #[test]
    fn scale_invariance_of_the_two_routes() {
        let pm = p3u(0.3);
        for (wedge, triangle) in [(50u64, 3u64), (1000, 1), (7, 7)] {
            let m = counts3(wedge, triangle);
            let report = infer_counts(&m, &pm).unwrap();
            let rho: Vec<f64> = m
                .counts
                .iter()
                .map(|&c| c as f64 / m.total() as f64)
                .collect();
            let est = infer_concentrations(&rho, &pm).unwrap();
            for (a, b) in report.omega_hat.iter().zip(&est) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn report_serializes_with_pinned_keys() {
        let report = infer_counts(&counts3(10, 1), &p3u(0.5)).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        for key in ["k", "kind", "p", "n_hat", "omega_hat", "rho", "W", "flags"] {
            assert!(json.get(key).is_some(), "missing key {key}");
        }
    }
}
