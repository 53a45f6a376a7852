//! Brute-force oracles in the full 2^N computational basis. Qubit 0 is the
//! most significant bit and |1> counts as an excitation.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use symqent::{SingleQubitOp, SymState};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn choose(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Amplitudes of `sum_k d_k |D_N^k>` over all bit strings.
pub fn full_vector(state: &SymState) -> Vec<C64> {
    let n = state.n();
    (0..1usize << n)
        .map(|x| {
            let k = x.count_ones() as usize;
            state.coeff(k) / choose(n, k).sqrt()
        })
        .collect()
}

/// Normalized Dicke vector |D_t^q> in the 2^t space.
pub fn dicke_vector(t: usize, q: usize) -> Vec<C64> {
    let norm = choose(t, q).sqrt();
    (0..1usize << t)
        .map(|x| if x.count_ones() as usize == q { c(1.0 / norm, 0.0) } else { c(0.0, 0.0) })
        .collect()
}

/// Full reduced density matrix of the first `t` qubits.
pub fn reduced_full(psi: &[C64], n: usize, t: usize) -> DMatrix<C64> {
    let rest = n - t;
    let dim = 1usize << t;
    DMatrix::from_fn(dim, dim, |a, b| {
        (0..1usize << rest)
            .map(|r| psi[(a << rest) | r] * psi[(b << rest) | r].conj())
            .sum()
    })
}

/// `<D_t^q| rho_A |D_t^l>` from the explicit partial trace.
pub fn rho_t_oracle(state: &SymState, t: usize) -> DMatrix<C64> {
    let n = state.n();
    let rho = reduced_full(&full_vector(state), n, t);
    let basis = DMatrix::from_fn(1usize << t, t + 1, |a, q| dicke_vector(t, q)[a]);
    basis.adjoint() * rho * basis
}

/// `|<psi| sigma_y^(x N) |psi*>|^4` with the Pauli action written out bit by bit.
pub fn tangle_oracle(state: &SymState) -> f64 {
    let n = state.n();
    let psi = full_vector(state);
    let mask = (1usize << n) - 1;
    let mut flipped = vec![c(0.0, 0.0); psi.len()];
    for (x, a) in psi.iter().enumerate() {
        // sigma_y|0> = i|1>, sigma_y|1> = -i|0>
        let ones = x.count_ones() as i32;
        let phase = c(0.0, 1.0).powi(n as i32 - ones) * c(0.0, -1.0).powi(ones);
        flipped[x ^ mask] += phase * a.conj();
    }
    let overlap: C64 = psi.iter().zip(&flipped).map(|(a, b)| a.conj() * b).sum();
    overlap.norm_sqr().powi(2)
}

/// `A^(x N) |psi>` in the full space.
pub fn apply_full(psi: &[C64], n: usize, op: &SingleQubitOp) -> Vec<C64> {
    let m = [[op.a, op.b], [op.c, op.d]];
    let mut out = psi.to_vec();
    for q in 0..n {
        let shift = n - 1 - q;
        let mut next = vec![c(0.0, 0.0); out.len()];
        for (x, a) in out.iter().enumerate() {
            let bit = (x >> shift) & 1;
            for row in 0..2 {
                let y = (x & !(1 << shift)) | (row << shift);
                next[y] += m[row][bit] * a;
            }
        }
        out = next;
    }
    out
}

/// Collective spin components `(S_x, S_y, S_z)` on the full space with
/// `S_z |1> = +1/2 |1>` per qubit.
pub fn full_spin(n: usize) -> [DMatrix<C64>; 3] {
    let dim = 1usize << n;
    let mut sx = DMatrix::zeros(dim, dim);
    let mut sy = DMatrix::zeros(dim, dim);
    let mut sz = DMatrix::zeros(dim, dim);
    for x in 0..dim {
        for q in 0..n {
            let shift = n - 1 - q;
            let bit = (x >> shift) & 1;
            let y = x ^ (1 << shift);
            // |0> -> |1> raises; S_y = (S_+ - S_-)/(2i)
            sx[(y, x)] += c(0.5, 0.0);
            sy[(y, x)] += if bit == 0 { c(0.0, -0.5) } else { c(0.0, 0.5) };
            sz[(x, x)] += if bit == 1 { c(0.5, 0.0) } else { c(-0.5, 0.0) };
        }
    }
    [sx, sy, sz]
}

pub fn expect_full(psi: &[C64], op: &DMatrix<C64>) -> C64 {
    let v = nalgebra::DVector::from_column_slice(psi);
    (v.adjoint() * op * &v)[(0, 0)]
}

pub fn max_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Closed form of rho_2 for psi_mu.
pub fn psi_mu_rho2(mu: C64) -> DMatrix<C64> {
    let m2 = mu.norm_sqr();
    let den = 2.0 + m2;
    let corner = (1.0 + m2 / 6.0) / den;
    let anti = (2.0f64 / 3.0).sqrt() * mu.re / den;
    let centre = 2.0 * m2 / 3.0 / den;
    DMatrix::from_row_slice(
        3,
        3,
        &[
            c(corner, 0.0), c(0.0, 0.0), c(anti, 0.0),
            c(0.0, 0.0), c(centre, 0.0), c(0.0, 0.0),
            c(anti, 0.0), c(0.0, 0.0), c(corner, 0.0),
        ],
    )
}

/// Closed-form barycentric measure of P_N.
pub fn e_b_p_n(n: usize) -> f64 {
    let nf = n as f64;
    let root = ((nf - 2.0) / (nf * nf)).powf(1.0 / (nf - 1.0));
    let x = 2.0 * (nf - 1.0) / (nf * (1.0 + root)) - 1.0;
    1.0 - x * x
}

/// Closed-form N-tangle of psi_mu.
pub fn tangle_psi_mu(mu: C64) -> f64 {
    let m2 = mu.norm_sqr();
    (m2 * m2 + 4.0 * (mu * mu).re + 4.0).powi(2) / (2.0 + m2).powi(4)
}
