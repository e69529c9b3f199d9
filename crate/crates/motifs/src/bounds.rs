//! Lower bounds on the estimator's error via Fisher information.
//!
//! A subgraph drawn uniformly from the original graph's k-node census lands in
//! the sampled graph either as some class `i` (probability `xi_i = sum_j
//! P[i][j] omega_j`) or "evaporated" — disconnected or missing nodes — with
//! probability `xi_0 = sum_j P0_j omega_j`, where `P0_j = 1 - sum_l P[l][j]`
//! is the per-class evaporation probability. The Fisher information of that
//! observation with respect to the concentrations is
//!
//! ```text
//! J[i][j] = sum_{l=0..T} P[l][i] * P[l][j] / xi_l     (row 0 = evaporation)
//! ```
//!
//! and treating the census entries as independent observations, the MSE of any
//! unbiased concentration estimator is bounded below by
//!
//! ```text
//! crlb_i = ((J^-1)[i][i] - omega_i^2) / n_total
//! ```
//!
//! where the subtracted term credits the sum-to-one constraint. At `p = 1`
//! this reduces to the multinomial variance floor `omega_i (1 - omega_i) /
//! n_total`. Sampled subgraphs actually overlap, so the bound is an
//! idealization: empirical MSE may approach it but should not fall below.
//!
//! Outcomes with zero probability are dropped from the sum (their classes are
//! unobservable; that is the limit convention), and a singular `J` falls back
//! to an eigenvalue pseudo-inverse, flagged in the report.

use serde::{Deserialize, Serialize};

use crate::catalog::MotifCatalog;
use crate::error::{Error, Result};
use crate::inference::TransitionMatrix;

/// Fisher-information error bound report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FisherReport {
    pub k: usize,
    pub p: f64,
    pub n_total: u64,
    /// Concentrations the bound was evaluated at.
    pub omega: Vec<f64>,
    /// Per-class evaporation probabilities.
    pub p0: Vec<f64>,
    /// Outcome probabilities; index 0 is the evaporated outcome.
    pub xi: Vec<f64>,
    /// Fisher information matrix, row-major.
    pub fisher: Vec<Vec<f64>>,
    /// Per-class MSE lower bounds.
    pub crlb: Vec<f64>,
    /// Square roots of the bounds (clamped at zero).
    pub rcrlb: Vec<f64>,
    /// True when `omega` came from estimates rather than ground truth.
    pub plug_in: bool,
    /// True when `J` was inverted by pseudo-inverse.
    pub pseudo_inverse: bool,
    /// Outcomes dropped because their probability vanished while the
    /// transition matrix still put mass on them (degenerate `omega`).
    pub dropped_outcomes: Vec<usize>,
}

impl FisherReport {
    /// One class per row: id, name, omega, evaporation, crlb, rcrlb.
    pub fn to_tsv(&self, cat: &MotifCatalog) -> String {
        let mut out = String::from("id\tname\tomega\tp0\tcrlb\trcrlb\n");
        for id in cat.ids() {
            let i = id.index();
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\n",
                id,
                cat.name(id).unwrap_or("-"),
                self.omega[i],
                self.p0[i],
                self.crlb[i],
                self.rcrlb[i]
            ));
        }
        out
    }
}

/// Per-class evaporation probabilities `1 - column_sum`.
pub fn evaporation(pm: &TransitionMatrix) -> Result<Vec<f64>> {
    let t = pm.t();
    let mut p0 = Vec::with_capacity(t);
    for j in 0..t {
        let s = pm.column_sum(j);
        if s > 1.0 + 1e-9 {
            return Err(Error::Internal(format!(
                "transition column {} sums to {s} > 1",
                j + 1
            )));
        }
        p0.push((1.0 - s).max(0.0));
    }
    Ok(p0)
}

/// Fisher information and the per-class MSE lower bound.
///
/// `omega` must be a probability vector over the catalog's classes; `n_total`
/// is the total k-node census size of the original graph. Set `plug_in` when
/// `omega` and `n_total` are themselves estimates.
pub fn fisher_and_crlb(
    pm: &TransitionMatrix,
    omega: &[f64],
    n_total: u64,
    plug_in: bool,
) -> Result<FisherReport> {
    let t = pm.t();
    assert_eq!(omega.len(), t, "omega does not match matrix dimension");
    if n_total == 0 {
        return Err(Error::Domain("n_total must be positive".into()));
    }
    if omega.iter().any(|&w| w < -1e-12 || !w.is_finite()) {
        return Err(Error::Domain(
            "omega components must be non-negative and finite".into(),
        ));
    }
    let sum: f64 = omega.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!("omega must sum to 1, got {sum}")));
    }
    let omega: Vec<f64> = omega.iter().map(|&w| w.max(0.0)).collect();

    let p0 = evaporation(pm)?;
    // Row l of the outcome matrix: l = 0 is evaporation, l >= 1 is class l.
    let row = |l: usize, j: usize| -> f64 {
        if l == 0 {
            p0[j]
        } else {
            pm.get(l - 1, j)
        }
    };

    let mut xi = vec![0.0; t + 1];
    let mut dropped = Vec::new();
    for l in 0..=t {
        let mut acc = 0.0;
        for j in 0..t {
            acc += row(l, j) * omega[j];
        }
        if acc < 0.0 || !acc.is_finite() {
            return Err(Error::Numeric(format!(
                "degenerate mixture: outcome {l} has probability {acc}"
            )));
        }
        xi[l] = acc;
        if acc == 0.0 && (0..t).any(|j| row(l, j) > 0.0) {
            dropped.push(l);
        }
    }

    let mut fisher = vec![0.0; t * t];
    for l in 0..=t {
        if xi[l] == 0.0 {
            continue;
        }
        for i in 0..t {
            let ri = row(l, i);
            if ri == 0.0 {
                continue;
            }
            for j in i..t {
                let term = ri * row(l, j) / xi[l];
                fisher[i * t + j] += term;
                if j != i {
                    fisher[j * t + i] += term;
                }
            }
        }
    }

    let (inverse, pseudo) = match spd_inverse(&fisher, t) {
        Some(inv) => (inv, false),
        None => (pseudo_inverse(&fisher, t), true),
    };

    let n = n_total as f64;
    let crlb: Vec<f64> = (0..t)
        .map(|i| (inverse[i * t + i] - omega[i] * omega[i]) / n)
        .collect();
    let rcrlb: Vec<f64> = crlb.iter().map(|&c| c.max(0.0).sqrt()).collect();

    Ok(FisherReport {
        k: pm.k(),
        p: pm.p(),
        n_total,
        omega,
        p0,
        xi,
        fisher: (0..t)
            .map(|i| fisher[i * t..(i + 1) * t].to_vec())
            .collect(),
        crlb,
        rcrlb,
        plug_in,
        pseudo_inverse: pseudo,
        dropped_outcomes: dropped,
    })
}

/// Cholesky-based inverse of a symmetric positive definite matrix.
fn spd_inverse(a: &[f64], n: usize) -> Option<Vec<f64>> {
    // lower-triangular factor
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 1e-12 * a[i * n + i].abs().max(1.0) {
                    return None;
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    // solve L L^T x = e_col for each basis vector
    let mut inv = vec![0.0; n * n];
    let mut y = vec![0.0; n];
    for col in 0..n {
        for i in 0..n {
            let mut s = if i == col { 1.0 } else { 0.0 };
            for k in 0..i {
                s -= l[i * n + k] * y[k];
            }
            y[i] = s / l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n {
                s -= l[k * n + i] * inv[k * n + col];
            }
            inv[i * n + col] = s / l[i * n + i];
        }
    }
    Some(inv)
}

/// Moore-Penrose pseudo-inverse of a symmetric matrix via cyclic Jacobi
/// eigendecomposition; eigenvalues near zero are truncated.
fn pseudo_inverse(a: &[f64], n: usize) -> Vec<f64> {
    let mut m = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += m[i * n + j] * m[i * n + j];
            }
        }
        if off.sqrt() < 1e-14 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
                let tsign = if theta >= 0.0 { 1.0 } else { -1.0 };
                let tval = tsign / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (tval * tval + 1.0).sqrt();
                let s = tval * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k * n + p], m[k * n + q]);
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p * n + k], m[q * n + k]);
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let eigvals: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    let max_abs = eigvals.iter().fold(0.0f64, |acc, &x| acc.max(x.abs()));
    let tol = max_abs * (n as f64) * f64::EPSILON * 16.0;
    let mut inv = vec![0.0; n * n];
    for e in 0..n {
        if eigvals[e].abs() <= tol {
            continue;
        }
        let w = 1.0 / eigvals[e];
        for i in 0..n {
            for j in 0..n {
                inv[i * n + j] += w * v[i * n + e] * v[j * n + e];
            }
        }
    }
    inv
}
