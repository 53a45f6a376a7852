//! Majorana stellar representation.
//!
//! A symmetric state is the symmetrized product of `N` single-qubit states,
//! the roots of `P(z) = sum_k (-1)^k sqrt(C(N,k)) d_k z^k` with the
//! identification `z = cot(theta/2) e^{-i phi}` and missing roots placed at
//! infinity (the north pole, `|0>`). SLOCC operations `A^(x N)` act on the
//! roots as the Moebius map with the same matrix.
//!
//! Internally every root is carried as a unit single-qubit ket `a|0> + b|1>`
//! (root `a/b`), so infinity needs no special casing.

use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::sqrt_binomial;
use crate::state::{apply_symmetric_op, poly_mul, SingleQubitOp, SymState};
use crate::C64;

/// Two roots closer than this on the Riemann sphere are one Majorana point.
pub const CLUSTER_TOL: f64 = 1e-8;
/// Aberth iteration stops once every step is below `STEP_TOL (1 + |z|)`.
pub const STEP_TOL: f64 = 1e-13;
pub const MAX_ITERATIONS: usize = 2000;
/// Leading/trailing coefficients below this fraction of the largest one are
/// deflated as roots at infinity / zero.
pub const DEFLATION_TOL: f64 = 1e-13;
/// Roots closer than this are examined as a possibly multiple root.
const MULTIPLE_ROOT_RADIUS: f64 = 1e-5;
/// Scaled derivative residual under which a near-cluster is merged.
const MULTIPLE_ROOT_RESIDUAL: f64 = 1e-9;
/// Slack used when testing membership of the domain S.
pub const DOMAIN_TOL: f64 = 1e-9;

/// A point of the extended complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ExtComplex {
    Finite(C64),
    Infinity,
}

impl ExtComplex {
    /// Unit ket `(a, b)` with `self = a / b`.
    pub fn to_ket(self) -> (C64, C64) {
        match self {
            ExtComplex::Infinity => (C64::new(1.0, 0.0), C64::new(0.0, 0.0)),
            ExtComplex::Finite(z) => {
                let s = (1.0 + z.norm_sqr()).sqrt();
                if s.is_finite() {
                    (z / s, C64::new(1.0 / s, 0.0))
                } else {
                    (C64::new(1.0, 0.0), C64::new(0.0, 0.0))
                }
            }
        }
    }

    pub fn from_ket(a: C64, b: C64) -> ExtComplex {
        if b.norm() <= f64::EPSILON * 1e-3 * a.norm() || b == C64::new(0.0, 0.0) {
            ExtComplex::Infinity
        } else {
            ExtComplex::Finite(a / b)
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtComplex::Infinity)
    }

    pub fn modulus(&self) -> f64 {
        match self {
            ExtComplex::Finite(z) => z.norm(),
            ExtComplex::Infinity => f64::INFINITY,
        }
    }

    pub fn arg(&self) -> f64 {
        match self {
            ExtComplex::Finite(z) => z.arg(),
            ExtComplex::Infinity => 0.0,
        }
    }

    /// Bloch angles `(theta, phi)`, `phi` in `[0, 2 pi)`.
    pub fn bloch_angles(&self) -> (f64, f64) {
        let (a, b) = self.to_ket();
        ket_angles(a, b)
    }

    pub fn bloch_vector(&self) -> [f64; 3] {
        let (t, p) = self.bloch_angles();
        [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()]
    }

    /// Euclidean distance between the two Bloch points.
    pub fn chordal_distance(&self, other: &ExtComplex) -> f64 {
        let (a1, b1) = self.to_ket();
        let (a2, b2) = other.to_ket();
        2.0 * (a1 * b2 - a2 * b1).norm()
    }
}

fn ket_angles(a: C64, b: C64) -> (f64, f64) {
    let theta = 2.0 * b.norm().atan2(a.norm());
    if b.norm() == 0.0 || a.norm() == 0.0 {
        return (theta, if a.norm() == 0.0 { wrap_angle(b.arg()) } else { 0.0 });
    }
    (theta, wrap_angle(b.arg() - a.arg()))
}

fn wrap_angle(x: f64) -> f64 {
    let w = x.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

fn normalize_ket(a: C64, b: C64) -> (C64, C64) {
    let s = (a.norm_sqr() + b.norm_sqr()).sqrt();
    (a / s, b / s)
}

/// Majorana points of a state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MajoranaSet {
    pub n: usize,
    /// One entry per qubit, finite roots by ascending modulus then argument,
    /// roots at infinity last.
    pub roots: Vec<ExtComplex>,
    /// `(theta, phi)` of each root.
    pub bloch: Vec<(f64, f64)>,
    /// Multiplicities of the distinct points, descending.
    pub clusters: Vec<usize>,
    pub diversity: usize,
    /// Distinct points with their multiplicity, in the order of `roots`.
    pub points: Vec<(ExtComplex, usize)>,
}

impl MajoranaSet {
    pub fn from_roots(mut roots: Vec<ExtComplex>) -> MajoranaSet {
        roots.sort_by(root_order);
        let n = roots.len();
        let bloch = roots.iter().map(|r| r.bloch_angles()).collect();
        let points = cluster_points(&roots);
        let mut clusters: Vec<usize> = points.iter().map(|p| p.1).collect();
        clusters.sort_unstable_by(|a, b| b.cmp(a));
        MajoranaSet {
            n,
            diversity: clusters.len(),
            roots,
            bloch,
            clusters,
            points,
        }
    }

    /// `D_{m1,m2,...}`
    pub fn configuration(&self) -> String {
        let parts: Vec<String> = self.clusters.iter().map(|m| m.to_string()).collect();
        format!("D_{{{}}}", parts.join(","))
    }
}

fn root_order(a: &ExtComplex, b: &ExtComplex) -> Ordering {
    match (a, b) {
        (ExtComplex::Infinity, ExtComplex::Infinity) => Ordering::Equal,
        (ExtComplex::Infinity, _) => Ordering::Greater,
        (_, ExtComplex::Infinity) => Ordering::Less,
        (ExtComplex::Finite(x), ExtComplex::Finite(y)) => x
            .norm()
            .total_cmp(&y.norm())
            .then(x.arg().total_cmp(&y.arg())),
    }
}

/// Single-linkage clustering under the chordal metric.
fn cluster_points(roots: &[ExtComplex]) -> Vec<(ExtComplex, usize)> {
    let n = roots.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        label[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if roots[i].chordal_distance(&roots[j]) < CLUSTER_TOL {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                if a != b {
                    label[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut out: Vec<(usize, ExtComplex, usize)> = Vec::new();
    for i in 0..n {
        let r = find(&mut label, i);
        match out.iter_mut().find(|e| e.0 == r) {
            Some(e) => e.2 += 1,
            None => out.push((r, roots[i], 1)),
        }
    }
    out.into_iter().map(|(_, p, m)| (p, m)).collect()
}

fn horner(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c)
}

fn derivative(coeffs: &[C64]) -> Vec<C64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect()
}

/// `|p(z)| / sum_k |c_k| |z|^k`
fn scaled_residual(coeffs: &[C64], z: C64) -> f64 {
    let scale = coeffs
        .iter()
        .rev()
        .fold(0.0, |acc, c| acc * z.norm() + c.norm());
    if scale == 0.0 {
        0.0
    } else {
        horner(coeffs, z).norm() / scale
    }
}

/// All roots of `sum_k coeffs[k] z^k` by Aberth-Ehrlich iteration.
/// Requires nonzero constant and leading coefficients.
pub fn aberth(coeffs: &[C64]) -> Result<Vec<C64>> {
    let deg = coeffs.len() - 1;
    if deg == 0 {
        return Ok(vec![]);
    }
    let lead = coeffs[deg];
    if deg == 1 {
        return Ok(vec![-coeffs[0] / lead]);
    }
    let dcoeffs = derivative(coeffs);
    let radius = (coeffs[0].norm() / lead.norm()).powf(1.0 / deg as f64);
    let mut z: Vec<C64> = (0..deg)
        .map(|j| {
            let angle = TAU * j as f64 / deg as f64 + 0.4;
            C64::from_polar(radius * (1.0 + 0.01 * j as f64 / deg as f64), angle)
        })
        .collect();

    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let mut worst = 0.0f64;
        for i in 0..deg {
            let p = horner(coeffs, z[i]);
            if p == C64::new(0.0, 0.0) {
                continue;
            }
            let ratio = p / horner(&dcoeffs, z[i]);
            let repulsion: C64 = (0..deg)
                .filter(|&j| j != i)
                .map(|j| {
                    let diff = z[i] - z[j];
                    if diff == C64::new(0.0, 0.0) {
                        C64::new(0.0, 0.0)
                    } else {
                        1.0 / diff
                    }
                })
                .sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                continue;
            }
            z[i] -= step;
            worst = worst.max(step.norm() / (1.0 + z[i].norm()));
        }
        if worst < STEP_TOL {
            converged = true;
            break;
        }
    }
    if !converged {
        // multiple roots stall at the noise floor; accept if backward-stable
        let worst = z
            .iter()
            .map(|r| scaled_residual(coeffs, *r))
            .fold(0.0, f64::max);
        if !(worst < 1e-10) {
            return Err(Error::NumericalFailure(format!(
                "Aberth iteration did not converge (scaled residual {worst:e})"
            )));
        }
        log::debug!("Aberth stalled with scaled residual {worst:e}, accepting");
    }
    Ok(z)
}

/// Merge near-coincident roots that are a genuine multiple root of `coeffs`.
fn snap_multiple_roots(coeffs: &[C64], roots: &mut [C64]) {
    let n = roots.len();
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] {
            continue;
        }
        let mut group = vec![i];
        let mut idx = 0;
        while idx < group.len() {
            let g = group[idx];
            for j in 0..n {
                if !used[j] && !group.contains(&j) {
                    let d = ExtComplex::Finite(roots[g]).chordal_distance(&ExtComplex::Finite(roots[j]));
                    if d < MULTIPLE_ROOT_RADIUS {
                        group.push(j);
                    }
                }
            }
            idx += 1;
        }
        for &g in &group {
            used[g] = true;
        }
        if group.len() < 2 {
            continue;
        }
        let m = group.len();
        let centroid: C64 = group.iter().map(|&g| roots[g]).sum::<C64>() / m as f64;
        // judge in the chart where the point is bounded
        let (poly, at): (Vec<C64>, C64) = if centroid.norm() <= 1.0 {
            (coeffs.to_vec(), centroid)
        } else {
            let inv: C64 = group.iter().map(|&g| 1.0 / roots[g]).sum::<C64>() / m as f64;
            (coeffs.iter().rev().cloned().collect(), inv)
        };
        let mut p = poly;
        let mut genuine = true;
        for _ in 0..m {
            if scaled_residual(&p, at) > MULTIPLE_ROOT_RESIDUAL {
                genuine = false;
                break;
            }
            p = derivative(&p);
        }
        if genuine {
            let value = if centroid.norm() <= 1.0 { at } else { 1.0 / at };
            for &g in &group {
                roots[g] = value;
            }
        }
    }
}

/// Majorana polynomial coefficients, ascending.
pub fn majorana_polynomial(state: &SymState) -> Vec<C64> {
    let n = state.n() as i64;
    state
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, d)| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            d * (sign * sqrt_binomial(n, k as i64))
        })
        .collect()
}

pub fn roots(state: &SymState) -> Result<MajoranaSet> {
    let n = state.n();
    let poly = majorana_polynomial(state);
    let biggest = poly.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if biggest == 0.0 {
        return Err(Error::InvalidState("zero vector has no Majorana points".into()));
    }
    let cut = DEFLATION_TOL * biggest;
    let top = (0..=n).rev().find(|&k| poly[k].norm() > cut).unwrap_or(0);
    let bottom = (0..=n).find(|&k| poly[k].norm() > cut).unwrap_or(0);
    let mut out: Vec<ExtComplex> = Vec::with_capacity(n);
    out.extend(std::iter::repeat_n(ExtComplex::Finite(C64::new(0.0, 0.0)), bottom));
    let core = &poly[bottom..=top];
    let mut finite = aberth(core)?;
    snap_multiple_roots(core, &mut finite);
    out.extend(finite.into_iter().map(ExtComplex::Finite));
    out.extend(std::iter::repeat_n(ExtComplex::Infinity, n - top));
    Ok(MajoranaSet::from_roots(out))
}

/// Normalized state whose Majorana points are `roots`.
pub fn state_from_root_list(roots: &[ExtComplex]) -> Result<SymState> {
    let kets: Vec<(C64, C64)> = roots.iter().map(|r| r.to_ket()).collect();
    state_from_kets(&kets)
}

pub fn state_from_roots(set: &MajoranaSet) -> Result<SymState> {
    state_from_root_list(&set.roots)
}

/// Symmetrized product of single-qubit kets: multiply the linear forms
/// `a x + b y` and read off the binary form.
fn state_from_kets(kets: &[(C64, C64)]) -> Result<SymState> {
    let n = kets.len();
    if n == 0 {
        return Err(Error::InvalidState("at least one Majorana point is required".into()));
    }
    let mut form = vec![C64::new(1.0, 0.0)];
    for (a, b) in kets {
        let (a, b) = normalize_ket(*a, *b);
        form = poly_mul(&form, &[a, b]);
    }
    SymState::from_binary_form(n, &form)
}

/// Moebius map `z -> (a z + b)/(c z + d)`, the root action of the SLOCC
/// operator with matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moebius {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl Moebius {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Moebius { a, b, c, d }
    }

    pub fn identity() -> Self {
        Moebius::from_op(&SingleQubitOp::identity())
    }

    pub fn from_op(op: &SingleQubitOp) -> Self {
        Moebius::new(op.a, op.b, op.c, op.d)
    }

    pub fn to_op(&self) -> SingleQubitOp {
        SingleQubitOp::new(self.a, self.b, self.c, self.d)
    }

    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    /// `self o other`
    pub fn compose(&self, other: &Moebius) -> Moebius {
        Moebius::from_op(&self.to_op().compose(&other.to_op()))
    }

    pub fn apply(&self, z: ExtComplex) -> ExtComplex {
        let (x, y) = z.to_ket();
        let (x2, y2) = self.apply_ket(x, y);
        ExtComplex::from_ket(x2, y2)
    }

    fn apply_ket(&self, x: C64, y: C64) -> (C64, C64) {
        normalize_ket(self.a * x + self.b * y, self.c * x + self.d * y)
    }

    /// `z -> (z - z1)/(z2 - z1)`: sends `z1` to 0, `z2` to 1, fixes infinity.
    pub fn to_zero_one(z1: C64, z2: C64) -> Moebius {
        Moebius::new(C64::new(1.0, 0.0), -z1, C64::new(0.0, 0.0), z2 - z1)
    }

    /// `z -> (2z - z0(z0 + 1/z0)) / (2 z0 z - (z0 + 1/z0))`: sends
    /// `0, 1, inf` to `z0, -z0, 1/z0`.
    pub fn to_symmetric_quadruple(z0: C64) -> Moebius {
        let s = z0 + 1.0 / z0;
        Moebius::new(C64::new(2.0, 0.0), -z0 * s, z0 * 2.0, -s)
    }

    /// Unitary rotation taking `z` to the north pole (infinity).
    pub fn rotate_to_north(z: ExtComplex) -> Moebius {
        let (a, b) = z.to_ket();
        Moebius::new(a.conj(), b.conj(), -b, a)
    }
}

/// SLOCC action computed on the Majorana points.
pub fn apply_moebius(state: &SymState, m: &Moebius) -> Result<SymState> {
    let det = m.det().norm();
    if det <= 1e-12 {
        return Err(Error::SingularOperator { det });
    }
    let set = roots(state)?;
    let kets: Vec<(C64, C64)> = set
        .roots
        .iter()
        .map(|r| {
            let (x, y) = r.to_ket();
            m.apply_ket(x, y)
        })
        .collect();
    state_from_kets(&kets)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Barycenter {
    pub vector: [f64; 3],
    /// `1 - |vector|^2`
    pub e_b: f64,
}

pub fn barycenter(state: &SymState) -> Result<Barycenter> {
    let set = roots(state)?;
    let mut v = [0.0; 3];
    for r in &set.roots {
        let b = r.bloch_vector();
        for i in 0..3 {
            v[i] += b[i];
        }
    }
    let n = set.n as f64;
    for x in v.iter_mut() {
        *x /= n;
    }
    let d2: f64 = v.iter().map(|x| x * x).sum();
    Ok(Barycenter {
        vector: v,
        e_b: (1.0 - d2).clamp(0.0, 1.0),
    })
}

/// The three local-unitary induced maps on the `psi_mu` parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MuMap {
    /// `diag(1, i)`: `mu -> -mu`
    U1,
    /// Hadamard: `mu -> 2(sqrt6 - mu)/(sqrt6 mu + 2)`
    U2,
    /// `(1/sqrt2)[[1, i], [i, 1]]`: `mu -> 2(sqrt6 + mu)/(sqrt6 mu - 2)`
    U3,
}

impl MuMap {
    pub const ALL: [MuMap; 3] = [MuMap::U1, MuMap::U2, MuMap::U3];

    pub fn apply(self, mu: C64) -> Option<C64> {
        let r6 = 6.0f64.sqrt();
        let out = match self {
            MuMap::U1 => -mu,
            MuMap::U2 => (r6 - mu) * 2.0 / (mu * r6 + 2.0),
            MuMap::U3 => (r6 + mu) * 2.0 / (mu * r6 - 2.0),
        };
        (out.re.is_finite() && out.im.is_finite()).then_some(out)
    }

    pub fn operator(self) -> SingleQubitOp {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let (o, z, i) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 1.0));
        match self {
            MuMap::U1 => SingleQubitOp::new(o, z, z, i),
            MuMap::U2 => SingleQubitOp::new(o * h, o * h, o * h, -o * h),
            MuMap::U3 => SingleQubitOp::new(o * h, i * h, i * h, o * h),
        }
    }
}

/// Membership of the fundamental domain S, with slack `tol`.
pub fn in_domain_s(mu: C64, tol: f64) -> bool {
    let r = (2.0f64 / 3.0).sqrt();
    if mu.re < -tol || mu.im < -tol {
        return false;
    }
    if (mu - r).norm() > 2.0 * r + tol {
        return false;
    }
    if mu.im.abs() <= tol && mu.re >= r - tol {
        return false;
    }
    true
}

/// Membership of the angular domain S' of the `psi_mu` stars.
pub fn in_domain_s_prime(theta: f64, phi: f64, tol: f64) -> bool {
    if !(theta > PI / 4.0 + tol && theta <= PI / 2.0 + tol) {
        return false;
    }
    let cot = 1.0 / theta.tan();
    let phi_min = (PI / 4.0).max(cot.clamp(-1.0, 1.0).asin());
    phi >= phi_min - tol && phi < PI / 2.0 - tol
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum TransformStep {
    /// Unitary taking the chosen point to the north pole.
    Rotation { point: ExtComplex, moebius: Moebius },
    /// `z1 -> 0, z2 -> 1`
    M1 { z1: C64, z2: C64 },
    /// `0, 1, inf -> z0, -z0, 1/z0`
    M2 { z0: C64 },
    /// Local unitaries moving `mu` into S, applied left to right.
    Orbit { word: Vec<MuMap>, from: C64, to: C64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MuCanonical {
    pub mu: C64,
    pub in_s: bool,
    pub transform_log: Vec<TransformStep>,
}

fn snap_small(mu: C64) -> C64 {
    let f = |x: f64| if x.abs() < 1e-10 { 0.0 } else { x };
    C64::new(f(mu.re), f(mu.im))
}

/// All words of length `<= 4` over the three maps, deduplicated by value.
fn mu_orbit(mu: C64) -> Vec<(C64, Vec<MuMap>)> {
    let mut seen: Vec<(C64, Vec<MuMap>)> = vec![(mu, vec![])];
    let mut frontier = seen.clone();
    for _ in 0..4 {
        let mut next = Vec::new();
        for (v, word) in &frontier {
            for m in MuMap::ALL {
                if let Some(w) = m.apply(*v) {
                    if seen.iter().all(|(s, _)| (s - w).norm() > 1e-9 * (1.0 + w.norm())) {
                        let mut word = word.clone();
                        word.push(m);
                        seen.push((w, word.clone()));
                        next.push((w, word));
                    }
                }
            }
        }
        frontier = next;
    }
    seen
}

/// Pick the element of the orbit of `mu` lying in S.
pub fn canonical_mu(mu: C64) -> Result<(C64, Vec<MuMap>)> {
    let mut hits: Vec<(C64, Vec<MuMap>)> = mu_orbit(mu)
        .into_iter()
        .map(|(v, w)| (snap_small(v), w))
        .filter(|(v, _)| in_domain_s(*v, DOMAIN_TOL))
        .collect();
    hits.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    hits.into_iter().next().ok_or_else(|| {
        Error::CanonicalizationFailure(format!("no element of the orbit of mu = {mu} lies in S"))
    })
}

/// Normal form `psi_mu`, `mu` in S, of a generic 4-qubit symmetric state.
pub fn canonicalize4(state: &SymState) -> Result<MuCanonical> {
    if state.n() != 4 {
        return Err(Error::dims("4 qubits", state.n()));
    }
    let set = roots(state)?;
    if set.diversity < 4 {
        return Err(Error::NotGenericState(format!(
            "configuration {} has diversity {}",
            set.configuration(),
            set.diversity
        )));
    }
    let pts: Vec<ExtComplex> = set.points.iter().map(|p| p.0).collect();

    // most isolated point goes to the north pole
    let isolation = |i: usize| {
        (0..4)
            .filter(|&j| j != i)
            .map(|j| pts[i].chordal_distance(&pts[j]))
            .fold(f64::INFINITY, f64::min)
    };
    let pole = (0..4)
        .max_by(|&i, &j| {
            isolation(i)
                .total_cmp(&isolation(j))
                .then(pts[i].modulus().total_cmp(&pts[j].modulus()))
                .then(pts[i].arg().total_cmp(&pts[j].arg()))
        })
        .expect("four points");
    let rot = Moebius::rotate_to_north(pts[pole]);
    let mut rest: Vec<C64> = Vec::with_capacity(3);
    for (i, p) in pts.iter().enumerate() {
        if i == pole {
            continue;
        }
        match rot.apply(*p) {
            ExtComplex::Finite(z) => rest.push(z),
            ExtComplex::Infinity => {
                return Err(Error::NotGenericState("two points share the north pole".into()))
            }
        }
    }
    let (z1, z2, z3) = (rest[0], rest[1], rest[2]);
    let m1 = Moebius::to_zero_one(z1, z2);
    let zt = (z3 - z1) / (z2 - z1);
    if zt.norm() < 1e-12 || (zt - 1.0).norm() < 1e-12 || !zt.re.is_finite() {
        return Err(Error::NotGenericState(format!("cross ratio {zt} is degenerate")));
    }

    let delta = (zt * (zt - 1.0)).sqrt();
    let mut candidates = Vec::with_capacity(2);
    for d in [delta, -delta] {
        let z0 = (zt * 2.0 - 1.0 + d * 2.0).sqrt();
        if z0.norm() < 1e-12 || (z0.powu(4) - 1.0).norm() < 1e-12 {
            continue;
        }
        let m2 = Moebius::to_symmetric_quadruple(z0);
        let total = m2.compose(&m1).compose(&rot);
        let psi = apply_symmetric_op(state, &total.to_op())?;
        let d = psi.coeffs();
        let scale = d[0];
        if scale.norm() < 1e-8 {
            return Err(Error::NumericalFailure("normal form has vanishing |D_4^(0)> amplitude".into()));
        }
        let off = [d[1], d[3], d[4] - scale].iter().map(|x| x.norm()).fold(0.0, f64::max);
        if off > 1e-6 {
            return Err(Error::NumericalFailure(format!(
                "transformed state is not of the psi_mu form (defect {off:e})"
            )));
        }
        let mu_state = d[2] / scale;
        let mu_roots = -(z0 * z0 + 1.0 / (z0 * z0)) / 6.0f64.sqrt();
        if (mu_state - mu_roots).norm() > 1e-6 * (1.0 + mu_roots.norm()) {
            return Err(Error::NumericalFailure(format!(
                "mu from coefficients {mu_state} disagrees with mu from roots {mu_roots}"
            )));
        }
        candidates.push((mu_state, z0));
    }
    let (mu_raw, z0) = *candidates
        .first()
        .ok_or_else(|| Error::NotGenericState("no admissible z0".into()))?;
    for (other, _) in &candidates[1..] {
        if (other - mu_raw).norm() > 1e-8 * (1.0 + mu_raw.norm()) {
            return Err(Error::NumericalFailure(format!(
                "square-root branches disagree: {mu_raw} vs {other}"
            )));
        }
    }

    let (mu, word) = canonical_mu(mu_raw)?;
    let transform_log = vec![
        TransformStep::Rotation {
            point: pts[pole],
            moebius: rot,
        },
        TransformStep::M1 { z1, z2 },
        TransformStep::M2 { z0 },
        TransformStep::Orbit {
            word,
            from: mu_raw,
            to: mu,
        },
    ];
    Ok(MuCanonical {
        mu,
        in_s: in_domain_s(mu, DOMAIN_TOL),
        transform_log,
    })
}
