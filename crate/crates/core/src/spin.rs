//! Collective spin operators on the symmetric subspace.
//!
//! Dicke state `|D_N^(k)>` has `S_z` eigenvalue `k - N/2`; `S_+` raises `k`.
//! Besides expectation values this module rebuilds the one- and two-qubit
//! reduced density matrices from spin moments, and writes any operator on
//! the symmetric subspace as a polynomial in `S_+`, `S_-` and `S_z`.

use nalgebra::DVector;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{half_integer, rational_pow, solve_exact, solve_partial_pivot};
use crate::reduced::ReducedDensity;
use crate::state::SymState;
use crate::{CMatrix, C64};

/// Qubit count from which the Vandermonde systems are solved exactly.
pub const EXACT_SOLVE_FROM: usize = 10;
/// Largest accepted residual of a spin-polynomial solve.
pub const DECOMPOSITION_RESIDUAL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct SpinOps {
    pub n: usize,
    pub sz: CMatrix,
    pub sp: CMatrix,
    pub sm: CMatrix,
}

impl SpinOps {
    pub fn sx(&self) -> CMatrix {
        (&self.sp + &self.sm) * C64::new(0.5, 0.0)
    }

    pub fn sy(&self) -> CMatrix {
        (&self.sp - &self.sm) * C64::new(0.0, -0.5)
    }

    /// `[S_x, S_y, S_z]`
    pub fn cartesian(&self) -> [CMatrix; 3] {
        [self.sx(), self.sy(), self.sz.clone()]
    }

    pub fn s_squared(&self) -> CMatrix {
        let [x, y, z] = self.cartesian();
        &x * &x + &y * &y + &z * &z
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }
}

pub fn spin_ops(n: usize) -> SpinOps {
    let dim = n + 1;
    let half = n as f64 / 2.0;
    let sz = CMatrix::from_diagonal(&DVector::from_iterator(
        dim,
        (0..dim).map(|k| C64::new(k as f64 - half, 0.0)),
    ));
    let mut sp = CMatrix::zeros(dim, dim);
    for k in 0..n {
        sp[(k + 1, k)] = C64::new((((n - k) * (k + 1)) as f64).sqrt(), 0.0);
    }
    let sm = sp.adjoint();
    SpinOps { n, sz, sp, sm }
}

/// `<psi|O|psi>`
pub fn expectation(state: &SymState, observable: &CMatrix) -> Result<C64> {
    let dim = state.n() + 1;
    if observable.nrows() != dim || observable.ncols() != dim {
        return Err(Error::dims(
            format!("{dim}x{dim}"),
            format!("{}x{}", observable.nrows(), observable.ncols()),
        ));
    }
    let d = state.coeffs();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..dim {
        if d[i] == C64::new(0.0, 0.0) {
            continue;
        }
        let mut row = C64::new(0.0, 0.0);
        for j in 0..dim {
            row += observable[(i, j)] * d[j];
        }
        acc += d[i].conj() * row;
    }
    Ok(acc)
}

fn expect(state: &SymState, op: &CMatrix) -> C64 {
    expectation(state, op).expect("operator built for this state's dimension")
}

/// One-qubit reduction rebuilt from `<S_z>` and `<S_+>`.
pub fn rho1_from_spin(state: &SymState) -> ReducedDensity {
    let ops = spin_ops(state.n());
    let n = state.n() as f64;
    let sz = expect(state, &ops.sz);
    let sp = expect(state, &ops.sp);
    let sm = expect(state, &ops.sm);
    let half = C64::new(0.5, 0.0);
    let mat = CMatrix::from_row_slice(
        2,
        2,
        &[half - sz / n, sp / n, sm / n, half + sz / n],
    );
    ReducedDensity { t: 1, mat }
}

/// Two-qubit reduction rebuilt from first and second spin moments.
pub fn rho2_from_spin(state: &SymState) -> Result<ReducedDensity> {
    let n = state.n();
    if n < 2 {
        return Err(Error::dims("N >= 2", n));
    }
    let ops = spin_ops(n);
    let s = n as f64 / 2.0;
    let alpha = s - 1.0;
    let beta = s * (s - 1.0);
    let gamma = 2.0 * s - 1.0;
    let delta = 2.0 * s * s;
    let r2 = 2.0f64.sqrt();

    let sz = expect(state, &ops.sz);
    let sz2 = expect(state, &(&ops.sz * &ops.sz));
    let sp = expect(state, &ops.sp);
    let sp2 = expect(state, &(&ops.sp * &ops.sp));
    let sz_sp = expect(state, &(&ops.sz * &ops.sp));

    // upper triangle; row/column k counts the |1> excitations
    let upper = [
        [sz2 - gamma * sz + beta, (sp * s - sz_sp) * r2, sp2],
        [C64::new(0.0, 0.0), -2.0 * sz2 + delta, (sz_sp + sp * alpha) * r2],
        [C64::new(0.0, 0.0), C64::new(0.0, 0.0), sz2 + gamma * sz + beta],
    ];
    let norm = (n * (n - 1)) as f64;
    let mut mat = CMatrix::zeros(3, 3);
    for i in 0..3 {
        mat[(i, i)] = C64::new(upper[i][i].re / norm, 0.0);
        for j in (i + 1)..3 {
            mat[(i, j)] = upper[i][j] / norm;
            mat[(j, i)] = mat[(i, j)].conj();
        }
    }
    Ok(ReducedDensity { t: 2, mat })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Order2Report {
    pub holds: bool,
    /// `|<S_x>|, |<S_y>|, |<S_z>|`, the three symmetrized cross moments
    /// `xy, yz, zx`, and the spread of `<S_x^2>, <S_y^2>, <S_z^2>`.
    pub residuals: [f64; 7],
}

/// Second-order anticoherence tested directly on spin moments.
pub fn order2_spin_conditions(state: &SymState, tol: f64) -> Order2Report {
    let ops = spin_ops(state.n());
    let s = ops.cartesian();
    let mut residuals = [0.0; 7];
    for i in 0..3 {
        residuals[i] = expect(state, &s[i]).norm();
    }
    for (slot, (a, b)) in [(0, 1), (1, 2), (2, 0)].into_iter().enumerate() {
        let sym = (&s[a] * &s[b] + &s[b] * &s[a]) * C64::new(0.5, 0.0);
        residuals[3 + slot] = expect(state, &sym).norm();
    }
    let sq: Vec<f64> = (0..3).map(|i| expect(state, &(&s[i] * &s[i])).re).collect();
    let hi = sq.iter().cloned().fold(f64::MIN, f64::max);
    let lo = sq.iter().cloned().fold(f64::MAX, f64::min);
    residuals[6] = hi - lo;
    Order2Report {
        holds: residuals.iter().all(|&r| r < tol),
        residuals,
    }
}

/// `S_+^l sum_m alphas[m] S_z^m` for `l >= 0`, and the adjoint of
/// `S_+^|l| sum_m alphas[m] S_z^m` for `l < 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinPolynomial {
    pub n: usize,
    pub ell: i64,
    pub alphas: Vec<C64>,
}

impl SpinPolynomial {
    pub fn degree_bound(&self) -> usize {
        self.n - self.ell.unsigned_abs() as usize
    }

    pub fn to_matrix(&self, ops: &SpinOps) -> CMatrix {
        let dim = ops.dim();
        let mut poly = CMatrix::zeros(dim, dim);
        let mut zpow = CMatrix::identity(dim, dim);
        for a in &self.alphas {
            poly += &zpow * *a;
            zpow = &zpow * &ops.sz;
        }
        let mut out = poly;
        for _ in 0..self.ell.unsigned_abs() {
            out = &ops.sp * out;
        }
        if self.ell < 0 {
            out.adjoint()
        } else {
            out
        }
    }
}

fn ladder_weight(n: usize, row: usize, ell: usize) -> f64 {
    (row..row + ell)
        .map(|p| ((n - p) * (p + 1)) as f64)
        .product::<f64>()
        .sqrt()
}

fn dyad_alphas_float(n: usize, k: usize, ell: usize) -> Option<Vec<f64>> {
    let size = n - ell + 1;
    let half = n as f64 / 2.0;
    let a: Vec<Vec<f64>> = (0..size)
        .map(|row| {
            let w = ladder_weight(n, row, ell);
            let x = row as f64 - half;
            (0..size).map(|m| w * x.powi(m as i32)).collect()
        })
        .collect();
    let mut rhs = vec![0.0; size];
    rhs[k] = 1.0;
    solve_partial_pivot(&a, &rhs)
}

fn dyad_alphas_exact(n: usize, k: usize, ell: usize) -> Option<Vec<f64>> {
    // A = diag(w) V with V rational; solve V beta = e_k, alpha = beta / w_k
    let size = n - ell + 1;
    let v: Vec<Vec<BigRational>> = (0..size)
        .map(|row| {
            let x = half_integer(2 * row as i64 - n as i64);
            (0..size).map(|m| rational_pow(&x, m)).collect()
        })
        .collect();
    let mut rhs = vec![BigRational::from_integer(BigInt::from(0)); size];
    rhs[k] = BigRational::from_integer(BigInt::from(1));
    let beta = solve_exact(&v, &rhs)?;
    let wk = ladder_weight(n, k, ell);
    Some(beta.into_iter().map(|b| b / wk).collect())
}

/// Largest `|sum_m A[r][m] alpha[m] - delta(r, k)|`.
fn dyad_residual(n: usize, k: usize, ell: usize, alphas: &[f64]) -> f64 {
    let half = n as f64 / 2.0;
    (0..=(n - ell))
        .map(|row| {
            let x = row as f64 - half;
            let p: f64 = alphas.iter().rev().fold(0.0, |acc, a| acc * x + a);
            let target = if row == k { 1.0 } else { 0.0 };
            (ladder_weight(n, row, ell) * p - target).abs()
        })
        .fold(0.0, f64::max)
}

fn dyad_alphas(n: usize, k: usize, ell: usize) -> Result<Vec<f64>> {
    if n < EXACT_SOLVE_FROM {
        if let Some(a) = dyad_alphas_float(n, k, ell) {
            if dyad_residual(n, k, ell, &a) < DECOMPOSITION_RESIDUAL {
                return Ok(a);
            }
        }
        log::debug!("float solve rejected for n={n} k={k} l={ell}, retrying exactly");
    }
    let a = dyad_alphas_exact(n, k, ell)
        .ok_or_else(|| Error::NumericalFailure("singular Vandermonde system".into()))?;
    let res = dyad_residual(n, k, ell, &a);
    if res >= DECOMPOSITION_RESIDUAL {
        return Err(Error::NumericalFailure(format!(
            "spin-polynomial residual {res:e} for n={n} k={k} l={ell}"
        )));
    }
    Ok(a)
}

/// Spin polynomial equal to `|D_N^(k+l)><D_N^(k)|`.
pub fn decompose_dyad(n: usize, k: usize, ell: i64) -> Result<SpinPolynomial> {
    let target = k as i64 + ell;
    if n == 0 || k > n || target < 0 || target > n as i64 {
        return Err(Error::dims(
            format!("0 <= k, k + l <= {n}"),
            format!("k = {k}, l = {ell}"),
        ));
    }
    let (base, up) = if ell >= 0 {
        (k, ell as usize)
    } else {
        (target as usize, ell.unsigned_abs() as usize)
    };
    let alphas = dyad_alphas(n, base, up)?
        .into_iter()
        .map(|a| C64::new(a, 0.0))
        .collect();
    Ok(SpinPolynomial { n, ell, alphas })
}

/// An operator written as a sum of [`SpinPolynomial`]s, one per nonzero
/// diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorDecomposition {
    pub n: usize,
    pub terms: Vec<SpinPolynomial>,
}

impl OperatorDecomposition {
    pub fn reassemble(&self) -> CMatrix {
        let ops = spin_ops(self.n);
        let dim = self.n + 1;
        self.terms
            .iter()
            .fold(CMatrix::zeros(dim, dim), |acc, t| acc + t.to_matrix(&ops))
    }
}

pub fn decompose_operator(n: usize, op: &CMatrix) -> Result<OperatorDecomposition> {
    let dim = n + 1;
    if op.nrows() != dim || op.ncols() != dim {
        return Err(Error::dims(
            format!("{dim}x{dim}"),
            format!("{}x{}", op.nrows(), op.ncols()),
        ));
    }
    let mut terms = Vec::new();
    for ell in -(n as i64)..=(n as i64) {
        let width = n - ell.unsigned_abs() as usize + 1;
        let mut alphas = vec![C64::new(0.0, 0.0); width];
        let mut any = false;
        for k in 0..=n {
            let row = k as i64 + ell;
            if row < 0 || row > n as i64 {
                continue;
            }
            let w = op[(row as usize, k)];
            if w == C64::new(0.0, 0.0) {
                continue;
            }
            any = true;
            let dyad = decompose_dyad(n, k, ell)?;
            // the l < 0 form stores the polynomial of the adjoint
            let w = if ell < 0 { w.conj() } else { w };
            for (acc, a) in alphas.iter_mut().zip(&dyad.alphas) {
                *acc += w * a;
            }
        }
        if any {
            terms.push(SpinPolynomial { n, ell, alphas });
        }
    }
    Ok(OperatorDecomposition { n, terms })
}
