//! Reduced density matrices of symmetric states on the t-qubit symmetric
//! subspace, the MES criterion and anticoherence order.
//!
//! Matrices are in the standard partial-trace convention:
//! entry `(q, l)` is `<D_t^(q)| tr_{N-t}(|psi><psi|) |D_t^(l)>`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{binomial, hermitian_defect, hermitian_eigenvalues, max_abs};
use crate::state::SymState;
use crate::{CMatrix, C64};

pub const DEFAULT_MES_TOL: f64 = 1e-10;
pub const DEFAULT_ANTICOHERENCE_TOL: f64 = 1e-9;
/// Eigenvalues within this distance below zero count as zero.
pub const NEGATIVE_EIGEN_CLAMP: f64 = 1e-10;
/// Spectral cut-off used for rank.
pub const RANK_CUTOFF: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct ReducedDensity {
    pub t: usize,
    pub mat: CMatrix,
}

impl ReducedDensity {
    pub fn dim(&self) -> usize {
        self.t + 1
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    pub fn hermitian_defect(&self) -> f64 {
        hermitian_defect(&self.mat)
    }

    /// Eigenvalues ascending; values in `[-1e-10, 0)` are reported as 0.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.mat)
            .into_iter()
            .map(|e| if (-NEGATIVE_EIGEN_CLAMP..0.0).contains(&e) { 0.0 } else { e })
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.eigenvalues().iter().filter(|&&e| e > RANK_CUTOFF).count()
    }

    /// `max |rho - 1/(t+1)|` over all entries.
    pub fn deviation_from_maximally_mixed(&self) -> f64 {
        let d = self.dim();
        let mm = CMatrix::identity(d, d) * C64::new(1.0 / d as f64, 0.0);
        max_abs(&(&self.mat - mm))
    }
}

/// Overlap weight of the Gram matrix of the `|v_t^(q)>` vectors.
fn gamma(n: i64, t: i64, k: i64, q: i64, l: i64) -> f64 {
    (binomial(n - k - q, t - q)
        * binomial(k + q, k)
        * binomial(n - k - l, t - l)
        * binomial(k + l, k))
    .sqrt()
        / binomial(n, t)
}

/// t-qubit reduced density matrix, `1 <= t <= N - 1`.
pub fn rho_t(state: &SymState, t: usize) -> Result<ReducedDensity> {
    let n = state.n();
    if t == 0 || t >= n {
        return Err(Error::dims(format!("1 <= t <= {}", n.saturating_sub(1)), t));
    }
    let d = state.coeffs();
    let mut mat = CMatrix::zeros(t + 1, t + 1);
    for q in 0..=t {
        for l in 0..=t {
            // Gram entry <v_q|v_l>; the partial trace puts it at (l, q)
            let mut s = C64::new(0.0, 0.0);
            for k in 0..=(n - t) {
                let g = gamma(n as i64, t as i64, k as i64, q as i64, l as i64);
                if g != 0.0 {
                    s += d[k + q].conj() * d[k + l] * g;
                }
            }
            mat[(l, q)] = s;
        }
    }
    Ok(ReducedDensity { t, mat })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MesReport {
    pub is_mes: bool,
    /// `sum_k (N - 2k) |d_k|^2`
    pub residual_sz: f64,
    /// `|sum_k sqrt((N-k)(k+1)) d_k conj(d_{k+1})|`
    pub residual_sp: f64,
}

/// MES test: the one-qubit reduction is maximally mixed.
pub fn is_mes(state: &SymState, tol: f64) -> MesReport {
    let n = state.n();
    let d = state.coeffs();
    let r1: f64 = d
        .iter()
        .enumerate()
        .map(|(k, c)| (n as f64 - 2.0 * k as f64) * c.norm_sqr())
        .sum();
    let r2: C64 = (0..n)
        .map(|k| d[k] * d[k + 1].conj() * (((n - k) * (k + 1)) as f64).sqrt())
        .sum();
    MesReport {
        is_mes: r1.abs() < tol && r2.norm() < tol,
        residual_sz: r1,
        residual_sp: r2.norm(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnticoherenceReport {
    pub order: usize,
    /// `deviations[i]` is the max-norm distance of `rho_{i+1}` from `1/(i+2)`.
    pub deviations: Vec<f64>,
}

pub fn anticoherence_order(state: &SymState, tol: f64) -> AnticoherenceReport {
    let max_t = state.n() / 2;
    let deviations: Vec<f64> = (1..=max_t)
        .map(|t| {
            rho_t(state, t)
                .expect("t <= N/2 is always a valid reduction")
                .deviation_from_maximally_mixed()
        })
        .collect();
    let order = deviations.iter().take_while(|&&d| d < tol).count();
    AnticoherenceReport { order, deviations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::catalog;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn balanced_dicke_rho2() {
        let s = catalog("dicke", 4, &[c(2.0, 0.0)]).unwrap();
        let r = rho_t(&s, 2).unwrap();
        let want = [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0];
        for i in 0..3 {
            for j in 0..3 {
                let w = if i == j { want[i] } else { 0.0 };
                assert!((r.mat[(i, j)] - c(w, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn psi_mu_rho2_closed_form() {
        let mu = c(0.4, 0.9);
        let s = catalog("psi_mu", 4, &[mu]).unwrap();
        let r = rho_t(&s, 2).unwrap();
        let m2 = mu.norm_sqr();
        let den = 2.0 + m2;
        let corner = (1.0 + m2 / 6.0) / den;
        let centre = (2.0 * m2 / 3.0) / den;
        let anti = (2.0f64 / 3.0).sqrt() * mu.re / den;
        let want = [[corner, 0.0, anti], [0.0, centre, 0.0], [anti, 0.0, corner]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((r.mat[(i, j)] - c(want[i][j], 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn rho_t_range() {
        let s = catalog("ghz", 3, &[]).unwrap();
        assert!(rho_t(&s, 0).is_err());
        assert!(rho_t(&s, 3).is_err());
        assert!(rho_t(&s, 2).is_ok());
    }

    #[test]
    fn mes_examples() {
        let ghz = catalog("ghz", 4, &[]).unwrap();
        assert!(is_mes(&ghz, DEFAULT_MES_TOL).is_mes);

        let w = catalog("dicke", 4, &[c(1.0, 0.0)]).unwrap();
        let rep = is_mes(&w, DEFAULT_MES_TOL);
        assert!(!rep.is_mes);
        assert!((rep.residual_sz - 2.0).abs() < 1e-15);

        let psi = catalog("psi_mu", 4, &[c(0.5, 0.5)]).unwrap();
        assert!(is_mes(&psi, DEFAULT_MES_TOL).is_mes);
    }

    #[test]
    fn anticoherence_examples() {
        let t4 = catalog("tetrahedron", 4, &[]).unwrap();
        assert_eq!(anticoherence_order(&t4, DEFAULT_ANTICOHERENCE_TOL).order, 2);

        let d42 = catalog("dicke", 4, &[c(2.0, 0.0)]).unwrap();
        assert_eq!(anticoherence_order(&d42, DEFAULT_ANTICOHERENCE_TOL).order, 1);

        for n in 1..8 {
            let d0 = catalog("dicke", n, &[c(0.0, 0.0)]).unwrap();
            let rep = anticoherence_order(&d0, DEFAULT_ANTICOHERENCE_TOL);
            assert_eq!(rep.order, 0);
            assert_eq!(rep.deviations.len(), n / 2);
        }
    }

    #[test]
    fn ghz_rank_and_spectrum() {
        let ghz = catalog("ghz", 6, &[]).unwrap();
        for t in 1..6 {
            let r = rho_t(&ghz, t).unwrap();
            assert_eq!(r.rank(), 2);
            let ev = r.eigenvalues();
            assert!((ev[ev.len() - 1] - 0.5).abs() < 1e-12);
            assert!((r.trace() - c(1.0, 0.0)).norm() < 1e-12);
        }
    }
}
