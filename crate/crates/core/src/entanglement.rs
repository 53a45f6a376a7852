//! Entanglement measures: geometric (GME), barycentric (BME) and the
//! generalized N-tangle for even N.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::husimi::husimi_eval;
use crate::majorana::{barycenter, in_domain_s, DOMAIN_TOL};
use crate::state::{expand_full, SingleQubitOp, SymState};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmeConfig {
    pub grid_theta: usize,
    pub grid_phi: usize,
    pub starts: usize,
    /// Nelder-Mead stops once the simplex diameter or value spread is below this.
    pub simplex_tol: f64,
    pub max_iterations: usize,
}

impl Default for GmeConfig {
    fn default() -> Self {
        GmeConfig {
            grid_theta: 64,
            grid_phi: 128,
            starts: 12,
            simplex_tol: 1e-12,
            max_iterations: 500,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StartReport {
    pub grid_point: (f64, f64),
    pub grid_overlap: f64,
    pub refined_point: (f64, f64),
    pub refined_overlap: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GmeResult {
    /// `1 - overlap`
    pub value: f64,
    /// `(theta, phi)` of the best coherent state, `theta` in `[0, pi]`.
    pub argmax: (f64, f64),
    /// Largest squared overlap with a symmetric product state.
    pub overlap: f64,
    pub starts: Vec<StartReport>,
    /// Largest minus smallest value on the coarse grid.
    pub grid_spread: f64,
}

/// Fold `(theta, phi)` from the plane into `theta` in `[0, pi]`, `phi` in `[0, 2pi)`.
fn canonical_angles(theta: f64, phi: f64) -> (f64, f64) {
    let mut t = theta.rem_euclid(TAU);
    let mut p = phi;
    if t > PI {
        t = TAU - t;
        p += PI;
    }
    (t, p.rem_euclid(TAU))
}

/// Maximize `f` from `start` with initial steps `step`. Returns the best
/// point, its value and the iteration count.
fn nelder_mead<F: Fn([f64; 2]) -> f64>(
    f: F,
    start: [f64; 2],
    step: [f64; 2],
    tol: f64,
    max_iterations: usize,
) -> ([f64; 2], f64, usize) {
    // minimize -f
    let g = |x: [f64; 2]| -f(x);
    let mut simplex = [
        start,
        [start[0] + step[0], start[1]],
        [start[0], start[1] + step[1]],
    ];
    let mut values = simplex.map(g);
    let mut iterations = 0;
    while iterations < max_iterations {
        let mut order = [0usize, 1, 2];
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.map(|i| simplex[i]);
        values = order.map(|i| values[i]);

        let diameter = (1..3)
            .map(|i| (simplex[i][0] - simplex[0][0]).hypot(simplex[i][1] - simplex[0][1]))
            .fold(0.0, f64::max);
        if diameter < tol || (values[2] - values[0]).abs() < tol * 1e-3 {
            break;
        }
        iterations += 1;

        let centroid = [
            (simplex[0][0] + simplex[1][0]) / 2.0,
            (simplex[0][1] + simplex[1][1]) / 2.0,
        ];
        let along = |t: f64| {
            [
                centroid[0] + t * (simplex[2][0] - centroid[0]),
                centroid[1] + t * (simplex[2][1] - centroid[1]),
            ]
        };
        let xr = along(-1.0);
        let fr = g(xr);
        if fr < values[0] {
            let xe = along(-2.0);
            let fe = g(xe);
            if fe < fr {
                simplex[2] = xe;
                values[2] = fe;
            } else {
                simplex[2] = xr;
                values[2] = fr;
            }
        } else if fr < values[1] {
            simplex[2] = xr;
            values[2] = fr;
        } else {
            let (xc, fc) = if fr < values[2] {
                let x = along(-0.5);
                (x, g(x))
            } else {
                let x = along(0.5);
                (x, g(x))
            };
            if fc < values[2].min(fr) {
                simplex[2] = xc;
                values[2] = fc;
            } else {
                for i in 1..3 {
                    simplex[i] = [
                        (simplex[i][0] + simplex[0][0]) / 2.0,
                        (simplex[i][1] + simplex[0][1]) / 2.0,
                    ];
                    values[i] = g(simplex[i]);
                }
            }
        }
    }
    let best = (0..3)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .expect("simplex has three vertices");
    (simplex[best], -values[best], iterations)
}

/// Indices of the starting cells: discrete local maxima of the grid, best
/// first, topped up with the best remaining cells.
fn pick_starts(grid: &[f64], nt: usize, np: usize, count: usize) -> Vec<usize> {
    let at = |i: usize, j: usize| grid[i * np + j];
    let mut peaks = Vec::new();
    let mut others = Vec::new();
    for i in 0..nt {
        for j in 0..np {
            let v = at(i, j);
            let mut is_peak = true;
            for di in [-1i64, 0, 1] {
                let ii = i as i64 + di;
                if ii < 0 || ii >= nt as i64 {
                    continue;
                }
                for dj in [-1i64, 0, 1] {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let jj = (j as i64 + dj).rem_euclid(np as i64) as usize;
                    if at(ii as usize, jj) > v {
                        is_peak = false;
                    }
                }
            }
            if is_peak {
                peaks.push(i * np + j);
            } else {
                others.push(i * np + j);
            }
        }
    }
    let by_value = |a: &usize, b: &usize| grid[*b].total_cmp(&grid[*a]).then(a.cmp(b));
    peaks.sort_by(by_value);
    others.sort_by(by_value);
    peaks.into_iter().chain(others).take(count).collect()
}

/// `E_G = 1 - max |<Phi|psi>|^2` over symmetric product states `|Phi>`.
pub fn geometric_measure(state: &SymState, cfg: &GmeConfig) -> GmeResult {
    let (nt, np) = (cfg.grid_theta.max(1), cfg.grid_phi.max(1));
    let dt = PI / nt as f64;
    let dp = TAU / np as f64;
    let cell = |idx: usize| ((idx / np) as f64 * dt + dt / 2.0, (idx % np) as f64 * dp);
    let grid: Vec<f64> = (0..nt * np)
        .map(|idx| {
            let (t, p) = cell(idx);
            husimi_eval(state, t, p)
        })
        .collect();
    let grid_max = grid.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let grid_min = grid.iter().cloned().fold(f64::INFINITY, f64::min);

    let f = |x: [f64; 2]| husimi_eval(state, x[0], x[1]);
    let mut starts = Vec::new();
    let mut best: Option<(f64, (f64, f64))> = None;
    for idx in pick_starts(&grid, nt, np, cfg.starts.max(1)) {
        let (t0, p0) = cell(idx);
        let (x, _, iterations) = nelder_mead(
            f,
            [t0, p0],
            [dt / 2.0, dp / 2.0],
            cfg.simplex_tol,
            cfg.max_iterations,
        );
        let (t, p) = canonical_angles(x[0], x[1]);
        let overlap = husimi_eval(state, t, p);
        starts.push(StartReport {
            grid_point: (t0, p0),
            grid_overlap: grid[idx],
            refined_point: (t, p),
            refined_overlap: overlap,
            iterations,
        });
        let better = match best {
            None => true,
            Some((v, (bt, bp))) => {
                overlap > v || (overlap == v && (t, p).partial_cmp(&(bt, bp)) == Some(std::cmp::Ordering::Less))
            }
        };
        if better {
            best = Some((overlap, (t, p)));
        }
    }
    let (overlap, argmax) = best.expect("at least one start");
    GmeResult {
        value: 1.0 - overlap,
        argmax,
        overlap,
        starts,
        grid_spread: grid_max - grid_min,
    }
}

/// Closed-form GME of `psi_mu` on the loci where one is known.
pub fn gme_psi_mu_closed_form(mu: C64) -> Result<f64> {
    let r = (2.0f64 / 3.0).sqrt();
    if !in_domain_s(mu, DOMAIN_TOL) {
        return Err(Error::NotCovered(format!("{mu} (outside S)")));
    }
    let imaginary_axis = |m: f64| 1.0 - (2.0 + 3.0 * m * m).powi(2) / (24.0 * m * m * (2.0 + m * m));
    let m = mu.norm();
    if m <= r + DOMAIN_TOL {
        return Ok((1.0 + m * m) / (2.0 + m * m));
    }
    if mu.re.abs() <= DOMAIN_TOL {
        return Ok(imaginary_axis(m));
    }
    if ((mu + r).norm() - 2.0 * r).abs() <= DOMAIN_TOL {
        let r6 = 6.0f64.sqrt();
        let image = (r6 + mu) * 2.0 / (mu * r6 - 2.0);
        return Ok(imaginary_axis(image.norm()));
    }
    Err(Error::NotCovered(mu.to_string()))
}

/// `E_B = 1 - |barycenter of the Majorana points|^2`
pub fn barycentric_measure(state: &SymState) -> Result<f64> {
    Ok(barycenter(state)?.e_b)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TangleResult {
    pub value: f64,
}

/// `|<psi| sigma_y^(x N) |psi*>|^4` for even N. On Dicke states
/// `sigma_y^(x N) |D^k> = i^N (-1)^k |D^(N-k)>`.
pub fn n_tangle(state: &SymState) -> Result<TangleResult> {
    let n = state.n();
    if n % 2 == 1 {
        return Err(Error::Unsupported(format!("N-tangle needs even N, got {n}")));
    }
    let d = state.coeffs();
    let s: C64 = (0..=n)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            d[k] * d[n - k] * sign
        })
        .sum();
    Ok(TangleResult {
        value: s.norm_sqr().powi(2),
    })
}

/// The same quantity evaluated in the full `2^N` space.
pub fn n_tangle_full_space(state: &SymState) -> Result<f64> {
    let full = expand_full(state)?;
    let mut conj = full.clone();
    for a in conj.amps.iter_mut() {
        *a = a.conj();
    }
    let (z, i) = (C64::new(0.0, 0.0), C64::new(0.0, 1.0));
    let sigma_y = SingleQubitOp::new(z, -i, i, z);
    let flipped = conj.apply_each(&sigma_y);
    Ok(full.inner(&flipped).norm_sqr().powi(2))
}
