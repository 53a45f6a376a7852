//! Small dense linear algebra: binomials, Hermitian eigenvalues by cyclic
//! Jacobi rotations, and linear solves for the spin-polynomial systems.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{CMatrix, C64};

/// Binomial coefficient `C(n, k)` as a float, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> f64 {
    if k < 0 || n < 0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

pub fn sqrt_binomial(n: i64, k: i64) -> f64 {
    binomial(n, k).sqrt()
}

/// Largest elementwise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Largest elementwise deviation from Hermiticity.
pub fn hermitian_defect(a: &CMatrix) -> f64 {
    max_abs_diff(a, &a.adjoint())
}

fn off_diagonal_frobenius(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

const JACOBI_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// Cyclic Jacobi: each rotation first rephases the pivot column so the
/// `(p, q)` entry is real, then applies the real symmetric rotation that
/// annihilates it. Iterates until the off-diagonal Frobenius mass drops
/// below `1e-14` (scaled by the matrix norm when it exceeds one).
pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    let n = h.nrows();
    assert_eq!(n, h.ncols(), "square matrix required");
    let mut a = h.clone();
    // symmetrize away rounding noise
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let v = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = v;
            a[(j, i)] = v.conj();
        }
    }
    let scale = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt().max(1.0);

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_frobenius(&a) < JACOBI_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag < 1e-300 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // phase making the pivot real: column q scaled by e^{-i arg}
                let phase = apq / mag;
                let theta = 0.5 * (2.0 * mag).atan2(aqq - app);
                let (s, c) = theta.sin_cos();
                // U restricted to (p, q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
                let u_pp = C64::new(c, 0.0);
                let u_pq = C64::new(s, 0.0);
                let u_qp = -phase.conj() * s;
                let u_qq = phase.conj() * c;
                // A <- A U (columns)
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * u_pp + aiq * u_qp;
                    a[(i, q)] = aip * u_pq + aiq * u_qq;
                }
                // A <- U^H A (rows)
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = u_pp.conj() * apj + u_qp.conj() * aqj;
                    a[(q, j)] = u_pq.conj() * apj + u_qq.conj() * aqj;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).expect("NaN eigenvalue"));
    ev
}

/// Solve `A x = b` by Gaussian elimination with partial pivoting.
/// Returns `None` for a numerically singular matrix.
pub fn solve_partial_pivot(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[pivot][col].abs() == 0.0 {
            return None;
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in (col + 1)..n {
            let f = m[row][col] / m[col][col];
            if f != 0.0 {
                for k in col..n {
                    m[row][k] -= f * m[col][k];
                }
                rhs[row] -= f * rhs[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut s = rhs[row];
        for k in (row + 1)..n {
            s -= m[row][k] * x[k];
        }
        x[row] = s / m[row][row];
    }
    Some(x)
}

/// Exact solve over the rationals, converted to floats at the end.
pub fn solve_exact(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m: Vec<Vec<BigRational>> = a.to_vec();
    let mut rhs = b.to_vec();
    for col in 0..n {
        // any nonzero pivot is exact; largest magnitude keeps numbers small
        let pivot = (col..n)
            .filter(|&i| !m[i][col].is_zero())
            .max_by(|&i, &j| m[i][col].abs().cmp(&m[j][col].abs()))?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in (col + 1)..n {
            if m[row][col].is_zero() {
                continue;
            }
            let f = &m[row][col] / &m[col][col];
            for k in col..n {
                let t = &f * &m[col][k];
                m[row][k] -= t;
            }
            let t = &f * &rhs[col];
            rhs[row] -= t;
        }
    }
    let mut x: Vec<BigRational> = vec![BigRational::zero(); n];
    for row in (0..n).rev() {
        let mut s = rhs[row].clone();
        for k in (row + 1)..n {
            s -= &m[row][k] * &x[k];
        }
        x[row] = s / &m[row][row];
    }
    x.iter().map(|r| r.to_f64()).collect()
}

/// `k/2` as an exact rational.
pub fn half_integer(twice: i64) -> BigRational {
    BigRational::new(BigInt::from(twice), BigInt::from(2))
}

pub fn rational_pow(base: &BigRational, exp: usize) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}
