//! Self-verification: every Dicke-basis formula against an independent
//! route, usually a brute-force computation in the full `2^N` space.

use serde::Serialize;

use crate::entanglement::{n_tangle, n_tangle_full_space};
use crate::error::{Error, Result};
use crate::husimi::{k_n, moments, second_moment_identity, Axis};
use crate::linalg::{binomial, max_abs_diff};
use crate::majorana::{apply_moebius, Moebius};
use crate::random::{random_hermitian, random_slocc, random_state, random_unitary, seeded};
use crate::reduced::rho_t;
use crate::spin::{
    decompose_dyad, decompose_operator, expectation, rho1_from_spin, rho2_from_spin, spin_ops,
};
use crate::state::{apply_symmetric_op, expand_full_guarded, SymState, DEFAULT_ORACLE_GUARD};
use crate::{CMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub nmin: usize,
    pub nmax: usize,
    pub seed: u64,
    /// Random states per qubit number and suite.
    pub samples: usize,
    pub guard: usize,
    /// Flip the sign of one off-diagonal entry of every `rho_t`, to check
    /// that the suites notice.
    pub inject_fault: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            nmin: 2,
            nmax: 6,
            seed: 42,
            samples: 5,
            guard: DEFAULT_ORACLE_GUARD,
            inject_fault: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub nmin: usize,
    pub nmax: usize,
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
    pub passed: bool,
}

struct Suite {
    name: &'static str,
    tolerance: f64,
    cases: usize,
    worst: f64,
}

impl Suite {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Suite {
            name,
            tolerance,
            cases: 0,
            worst: 0.0,
        }
    }

    fn record(&mut self, residual: f64) {
        self.cases += 1;
        // NaN must fail
        if !(residual <= self.worst) {
            self.worst = if residual.is_nan() { f64::INFINITY } else { residual };
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name,
            cases: self.cases,
            max_residual: self.worst,
            tolerance: self.tolerance,
            passed: self.worst < self.tolerance,
        }
    }
}

/// `<D_t^q| tr_{N-t} |psi><psi| |D_t^l>` computed from the full state vector.
pub fn partial_trace_oracle(state: &SymState, t: usize, guard: usize) -> Result<CMatrix> {
    let n = state.n();
    if t == 0 || t >= n {
        return Err(Error::dims(format!("1 <= t <= {}", n - 1), t));
    }
    let full = expand_full_guarded(state, guard)?;
    let rest = n - t;
    let width = 1usize << rest;
    // v_q[b] = sum over first-t patterns a with q ones of psi[a, b] / sqrt(C(t, q))
    let mut v = vec![vec![C64::new(0.0, 0.0); width]; t + 1];
    for (idx, amp) in full.amps.iter().enumerate() {
        let a = idx >> rest;
        let b = idx & (width - 1);
        v[a.count_ones() as usize][b] += amp;
    }
    for (q, row) in v.iter_mut().enumerate() {
        let s = binomial(t as i64, q as i64).sqrt();
        for x in row.iter_mut() {
            *x /= s;
        }
    }
    Ok(CMatrix::from_fn(t + 1, t + 1, |q, l| {
        v[q].iter().zip(&v[l]).map(|(x, y)| x * y.conj()).sum()
    }))
}

pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    if cfg.nmax > cfg.guard {
        return Err(Error::SizeLimitExceeded {
            n: cfg.nmax,
            limit: cfg.guard,
        });
    }
    if cfg.nmin < 2 || cfg.nmin > cfg.nmax {
        return Err(Error::InvalidParameter(format!(
            "qubit range {}..{} must satisfy 2 <= nmin <= nmax",
            cfg.nmin, cfg.nmax
        )));
    }
    let mut rng = seeded(cfg.seed);
    let mut reduced = Suite::new("reduced_density", 1e-12);
    let mut spin = Suite::new("spin_reconstruction", 1e-11);
    let mut husimi = Suite::new("husimi_identities", 1e-10);
    let mut dyads = Suite::new("spin_decomposition", 1e-9);
    let mut moebius = Suite::new("moebius_commutation", 1e-9);
    let mut tangle = Suite::new("n_tangle", 1e-11);

    for n in cfg.nmin..=cfg.nmax {
        let ops = spin_ops(n);
        let s = ops.cartesian();
        for _ in 0..cfg.samples {
            let state = random_state(n, &mut rng);

            for t in 1..n {
                let mut got = rho_t(&state, t)?.mat;
                if cfg.inject_fault {
                    got[(0, 1)] = -got[(0, 1)];
                }
                let want = partial_trace_oracle(&state, t, cfg.guard)?;
                reduced.record(max_abs_diff(&got, &want));
            }

            spin.record(max_abs_diff(&rho1_from_spin(&state).mat, &rho_t(&state, 1)?.mat));
            if n >= 3 {
                spin.record(max_abs_diff(&rho2_from_spin(&state)?.mat, &rho_t(&state, 2)?.mat));
            }

            let m = moments(&state);
            husimi.record((m.norm - 1.0).abs());
            for i in 0..3 {
                let lhs = expectation(&state, &s[i])?;
                husimi.record((lhs - C64::new(k_n(n) * m.dipole[i], 0.0)).norm());
            }
            for j in Axis::ALL {
                for k in Axis::ALL {
                    husimi.record(second_moment_identity(&state, j, k));
                }
            }

            let op = random_slocc(20.0, &mut rng);
            let by_roots = apply_moebius(&state, &Moebius::from_op(&op))?;
            let by_coeffs = apply_symmetric_op(&state, &op)?;
            moebius.record(1.0 - by_roots.fidelity(&by_coeffs)?);

            if n % 2 == 0 {
                let u = random_unitary(&mut rng);
                let rotated = apply_symmetric_op(&state, &u)?;
                for psi in [&state, &rotated] {
                    let fast = n_tangle(psi)?.value;
                    tangle.record((fast - n_tangle_full_space(psi)?).abs());
                }
            }
        }

        for k in 0..=n {
            for ell in -(k as i64)..=((n - k) as i64) {
                let poly = decompose_dyad(n, k, ell)?;
                let mut want = CMatrix::zeros(n + 1, n + 1);
                want[((k as i64 + ell) as usize, k)] = C64::new(1.0, 0.0);
                dyads.record(max_abs_diff(&poly.to_matrix(&ops), &want));
            }
        }
        let h = random_hermitian(n + 1, &mut rng);
        dyads.record(max_abs_diff(&decompose_operator(n, &h)?.reassemble(), &h));
    }

    let suites: Vec<SuiteResult> = [reduced, spin, husimi, dyads, moebius, tangle]
        .into_iter()
        .map(Suite::finish)
        .collect();
    Ok(VerifyReport {
        nmin: cfg.nmin,
        nmax: cfg.nmax,
        seed: cfg.seed,
        passed: suites.iter().all(|s| s.passed),
        suites,
    })
}
