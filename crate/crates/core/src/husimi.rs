//! Husimi function of a symmetric state and its low-order multipole moments.
//!
//! `H(theta, phi) = |<Phi(theta, phi)|psi>|^2` with the spin coherent state
//! `|Phi> = (cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>)^(x N)`.
//!
//! With `|0>` drawn at the north pole, the collective spin of `|Phi>` points
//! along `n(theta, phi) = (sin t cos p, -sin t sin p, -cos t)` in the frame of
//! [`crate::spin`] (where `S_z |D^(k)> = (k - N/2)|D^(k)>`). Moments are taken
//! against this direction so that `<S> = K_N d` holds component by component.

use std::f64::consts::PI;

use serde::Serialize;

use crate::linalg::sqrt_binomial;
use crate::spin::spin_ops;
use crate::state::SymState;
use crate::C64;

/// Gauss-Legendre nodes in `cos(theta)` times a uniform rule in `phi`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalGrid {
    pub cos_nodes: Vec<f64>,
    pub cos_weights: Vec<f64>,
    pub phi_nodes: Vec<f64>,
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(count: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(count > 0);
    let mut nodes = vec![0.0; count];
    let mut weights = vec![0.0; count];
    let nf = count as f64;
    for i in 0..count.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_count
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(count, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(count, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[count - 1 - i] = x;
        weights[i] = w;
        weights[count - 1 - i] = w;
    }
    if count % 2 == 1 {
        nodes[count / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

impl SphericalGrid {
    pub fn new(n_cos: usize, n_phi: usize) -> Self {
        let (cos_nodes, cos_weights) = gauss_legendre(n_cos);
        let phi_nodes = (0..n_phi)
            .map(|j| 2.0 * PI * j as f64 / n_phi as f64)
            .collect();
        SphericalGrid {
            cos_nodes,
            cos_weights,
            phi_nodes,
        }
    }

    /// Smallest grid integrating every moment integrand of an `n`-qubit
    /// Husimi function exactly: `N + 3` nodes in `cos(theta)` and `2N + 7`
    /// in `phi`.
    pub fn for_qubits(n: usize) -> Self {
        SphericalGrid::new(n + 3, 2 * n + 7)
    }

    pub fn phi_weight(&self) -> f64 {
        2.0 * PI / self.phi_nodes.len() as f64
    }

    /// `int f dOmega`, summed in a fixed order.
    pub fn integrate<F: FnMut(f64, f64) -> f64>(&self, mut f: F) -> f64 {
        let wp = self.phi_weight();
        let mut total = 0.0;
        for (u, w) in self.cos_nodes.iter().zip(&self.cos_weights) {
            let theta = u.acos();
            let mut ring = 0.0;
            for &phi in &self.phi_nodes {
                ring += f(theta, phi);
            }
            total += w * wp * ring;
        }
        total
    }
}

/// `<Phi(theta, phi)|psi>`
pub fn coherent_overlap(state: &SymState, theta: f64, phi: f64) -> C64 {
    let n = state.n();
    let (s, c) = (theta / 2.0).sin_cos();
    let mut acc = C64::new(0.0, 0.0);
    for (k, d) in state.coeffs().iter().enumerate() {
        if *d == C64::new(0.0, 0.0) {
            continue;
        }
        let mag = sqrt_binomial(n as i64, k as i64) * c.powi((n - k) as i32) * s.powi(k as i32);
        acc += d * C64::from_polar(mag, -(k as f64) * phi);
    }
    acc
}

pub fn husimi_eval(state: &SymState, theta: f64, phi: f64) -> f64 {
    coherent_overlap(state, theta, phi).norm_sqr()
}

/// Spin direction of the coherent state `|Phi(theta, phi)>`.
pub fn spin_direction(theta: f64, phi: f64) -> [f64; 3] {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, -st * sp, -ct]
}

/// `(theta, phi, H)` on a closed theta grid (poles included) times a
/// periodic phi grid, theta-major.
pub fn husimi_grid(state: &SymState, n_theta: usize, n_phi: usize) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::with_capacity(n_theta * n_phi);
    for i in 0..n_theta {
        let theta = if n_theta == 1 {
            0.0
        } else {
            PI * i as f64 / (n_theta - 1) as f64
        };
        for j in 0..n_phi {
            let phi = 2.0 * PI * j as f64 / n_phi as f64;
            out.push((theta, phi, husimi_eval(state, theta, phi)));
        }
    }
    out
}

/// `K_N = (N+1)(N+2)/(8 pi)`
pub fn k_n(n: usize) -> f64 {
    ((n + 1) * (n + 2)) as f64 / (8.0 * PI)
}

/// `(N+1)(N+2)(N+3)/(16 pi)`
pub fn second_moment_constant(n: usize) -> f64 {
    ((n + 1) * (n + 2) * (n + 3)) as f64 / (16.0 * PI)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HusimiMoments {
    /// `(N+1)/(4 pi) int H`
    pub norm: f64,
    /// `int n H`
    pub dipole: [f64; 3],
    /// `int (3 n_j n_k - delta_jk) H`
    pub quadrupole: [[f64; 3]; 3],
}

impl HusimiMoments {
    pub fn dipole_norm(&self) -> f64 {
        self.dipole.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn quadrupole_max(&self) -> f64 {
        self.quadrupole
            .iter()
            .flatten()
            .fold(0.0, |m, x| f64::max(m, x.abs()))
    }
}

pub fn moments_on(state: &SymState, grid: &SphericalGrid) -> HusimiMoments {
    let wp = grid.phi_weight();
    let mut total = 0.0;
    let mut dip = [0.0; 3];
    let mut quad = [[0.0; 3]; 3];
    for (u, w) in grid.cos_nodes.iter().zip(&grid.cos_weights) {
        let theta = u.acos();
        for &phi in &grid.phi_nodes {
            let h = husimi_eval(state, theta, phi) * w * wp;
            let r = spin_direction(theta, phi);
            total += h;
            for j in 0..3 {
                dip[j] += r[j] * h;
                for k in 0..3 {
                    let delta = if j == k { 1.0 } else { 0.0 };
                    quad[j][k] += (3.0 * r[j] * r[k] - delta) * h;
                }
            }
        }
    }
    HusimiMoments {
        norm: (state.n() + 1) as f64 / (4.0 * PI) * total,
        dipole: dip,
        quadrupole: quad,
    }
}

pub fn moments(state: &SymState) -> HusimiMoments {
    moments_on(state, &SphericalGrid::for_qubits(state.n()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

fn levi_civita(j: usize, k: usize, l: usize) -> f64 {
    match (j, k, l) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// `|<S_j S_k> - c_N int [n_j n_k + (i eps_jkl n_l - delta_jk)/(N+3)] H|`
pub fn second_moment_identity(state: &SymState, j: Axis, k: Axis) -> f64 {
    let n = state.n();
    let ops = spin_ops(n);
    let s = ops.cartesian();
    let (j, k) = (j.index(), k.index());
    let lhs = crate::spin::expectation(state, &(&s[j] * &s[k])).expect("matching dimension");

    let grid = SphericalGrid::for_qubits(n);
    let wp = grid.phi_weight();
    let n3 = (n + 3) as f64;
    let mut acc = C64::new(0.0, 0.0);
    for (u, w) in grid.cos_nodes.iter().zip(&grid.cos_weights) {
        let theta = u.acos();
        for &phi in &grid.phi_nodes {
            let h = husimi_eval(state, theta, phi) * w * wp;
            let r = spin_direction(theta, phi);
            let eps: f64 = (0..3).map(|l| levi_civita(j, k, l) * r[l]).sum();
            let delta = if j == k { 1.0 } else { 0.0 };
            acc += C64::new(r[j] * r[k] - delta / n3, eps / n3) * h;
        }
    }
    (lhs - acc * second_moment_constant(n)).norm()
}
