//! Dicke-basis representation of pure symmetric N-qubit states.
//!
//! A state is stored as its `N + 1` amplitudes `d_k` on the Dicke states
//! `|D_N^(k)>`, where `k` counts the qubits in `|1>`. Every constructor
//! normalizes and fixes the global phase so that the first nonzero
//! amplitude is real and positive, which makes equality of states testable.

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{binomial, sqrt_binomial};
use crate::C64;

/// Deviation of the input norm from one above which [`make_state`] warns.
pub const RENORMALIZE_WARN: f64 = 1e-6;
/// Amplitudes below this modulus are skipped when fixing the global phase.
pub const PHASE_FLOOR: f64 = 1e-9;
/// Default guard on the qubit count of [`expand_full`].
pub const DEFAULT_ORACLE_GUARD: usize = 14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymState {
    n: usize,
    coeffs: Vec<C64>,
}

impl SymState {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs[k]
    }

    /// `<self|other>` in the Dicke basis.
    pub fn inner(&self, other: &SymState) -> Result<C64> {
        if self.n != other.n {
            return Err(Error::dims(self.n, other.n));
        }
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &SymState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Amplitudes on the rescaled kets `sqrt(C(N,k)) |D_N^(k)>`, i.e. the
    /// coefficients of the two-variable form `sum_k c_k x^(N-k) y^k`.
    pub fn binary_form(&self) -> Vec<C64> {
        let n = self.n as i64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, d)| d * sqrt_binomial(n, k as i64))
            .collect()
    }

    /// Inverse of [`SymState::binary_form`], followed by normalization.
    pub fn from_binary_form(n: usize, form: &[C64]) -> Result<SymState> {
        if form.len() != n + 1 {
            return Err(Error::dims(n + 1, form.len()));
        }
        let raw: Vec<C64> = form
            .iter()
            .enumerate()
            .map(|(k, c)| c / sqrt_binomial(n as i64, k as i64))
            .collect();
        normalize(n, raw)
    }
}

fn normalize(n: usize, mut raw: Vec<C64>) -> Result<SymState> {
    let norm = raw.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if !norm.is_finite() {
        return Err(Error::InvalidState("non-finite amplitude".into()));
    }
    if norm == 0.0 {
        return Err(Error::InvalidState("zero vector".into()));
    }
    for c in raw.iter_mut() {
        *c /= norm;
    }
    if let Some(first) = raw.iter().find(|c| c.norm() > PHASE_FLOOR) {
        let phase = first.conj() / first.norm();
        for c in raw.iter_mut() {
            *c *= phase;
        }
    }
    Ok(SymState { n, coeffs: raw })
}

/// Build a state from `n + 1` raw Dicke amplitudes.
pub fn make_state(n: usize, raw: &[C64]) -> Result<SymState> {
    if n == 0 {
        return Err(Error::InvalidState("at least one qubit is required".into()));
    }
    if raw.len() != n + 1 {
        return Err(Error::dims(n + 1, raw.len()));
    }
    let norm = raw.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 && (norm - 1.0).abs() > RENORMALIZE_WARN {
        log::warn!("input norm {norm} differs from 1, renormalizing");
    }
    normalize(n, raw.to_vec())
}

/// Real-amplitude convenience wrapper around [`make_state`].
pub fn make_real_state(n: usize, raw: &[f64]) -> Result<SymState> {
    let v: Vec<C64> = raw.iter().map(|&x| C64::new(x, 0.0)).collect();
    make_state(n, &v)
}

/// Named families of symmetric states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NamedState {
    /// `|D_2^(1)>`
    Bell,
    /// `(|D_N^(0)> + |D_N^(N)>)/sqrt(2)`
    Ghz,
    Dicke(usize),
    /// `(|D_4^(0)> + mu |D_4^(2)> + |D_4^(4)>)/sqrt(2 + |mu|^2)`
    PsiMu(C64),
    /// `psi_mu` at `mu = i sqrt(2)`.
    Tetrahedron,
    /// `(sqrt(N-2)|D_N^(0)> + sqrt(N)|D_N^(N-1)>)/sqrt(2N-2)`
    PN,
    ChiN,
    /// `diag(alpha, 1)^(x N) |P_N>`, renormalized.
    PNAlpha(C64),
}

impl NamedState {
    /// Parse a family name plus its complex parameters.
    pub fn parse(name: &str, params: &[C64]) -> Result<NamedState> {
        let arity = |want: usize| -> Result<()> {
            if params.len() != want {
                Err(Error::InvalidParameter(format!(
                    "`{name}` takes {want} parameter(s), got {}",
                    params.len()
                )))
            } else {
                Ok(())
            }
        };
        let key = name.to_ascii_lowercase();
        Ok(match key.as_str() {
            "bell" => {
                arity(0)?;
                NamedState::Bell
            }
            "ghz" => {
                arity(0)?;
                NamedState::Ghz
            }
            "dicke" => {
                arity(1)?;
                let k = params[0];
                if k.im != 0.0 || k.re < 0.0 || k.re.fract() != 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "dicke excitation number must be a non-negative integer, got {k}"
                    )));
                }
                NamedState::Dicke(k.re as usize)
            }
            "psi_mu" => {
                arity(1)?;
                NamedState::PsiMu(params[0])
            }
            "tetrahedron" => {
                arity(0)?;
                NamedState::Tetrahedron
            }
            "p_n" => {
                arity(0)?;
                NamedState::PN
            }
            "chi_n" => {
                arity(0)?;
                NamedState::ChiN
            }
            "p_n_alpha" => {
                arity(1)?;
                NamedState::PNAlpha(params[0])
            }
            _ => return Err(Error::UnknownState(name.to_string())),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            NamedState::Bell => "bell",
            NamedState::Ghz => "ghz",
            NamedState::Dicke(_) => "dicke",
            NamedState::PsiMu(_) => "psi_mu",
            NamedState::Tetrahedron => "tetrahedron",
            NamedState::PN => "p_n",
            NamedState::ChiN => "chi_n",
            NamedState::PNAlpha(_) => "p_n_alpha",
        }
    }

    pub fn params(&self) -> Vec<C64> {
        match *self {
            NamedState::Dicke(k) => vec![C64::new(k as f64, 0.0)],
            NamedState::PsiMu(mu) => vec![mu],
            NamedState::PNAlpha(a) => vec![a],
            _ => vec![],
        }
    }

    pub fn build(&self, n: usize) -> Result<SymState> {
        let bad_n = |why: &str| Err(Error::InvalidParameter(format!("{}: {why}, got n = {n}", self.name())));
        let mut d = vec![C64::new(0.0, 0.0); n + 1];
        match *self {
            NamedState::Bell => {
                if n != 2 {
                    return bad_n("requires n = 2");
                }
                d[1] = C64::new(1.0, 0.0);
            }
            NamedState::Ghz => {
                if n < 2 {
                    return bad_n("requires n >= 2");
                }
                d[0] = C64::new(1.0 / SQRT_2, 0.0);
                d[n] = C64::new(1.0 / SQRT_2, 0.0);
            }
            NamedState::Dicke(k) => {
                if n == 0 || k > n {
                    return bad_n("requires 0 <= k <= n");
                }
                d[k] = C64::new(1.0, 0.0);
            }
            NamedState::PsiMu(mu) => {
                if n != 4 {
                    return bad_n("requires n = 4");
                }
                d[0] = C64::new(1.0, 0.0);
                d[2] = mu;
                d[4] = C64::new(1.0, 0.0);
            }
            NamedState::Tetrahedron => {
                if n != 4 {
                    return bad_n("requires n = 4");
                }
                return NamedState::PsiMu(C64::new(0.0, SQRT_2)).build(4);
            }
            NamedState::PN => {
                if n < 2 {
                    return bad_n("requires n >= 2");
                }
                d[0] += C64::new(((n - 2) as f64).sqrt(), 0.0);
                d[n - 1] += C64::new((n as f64).sqrt(), 0.0);
            }
            NamedState::ChiN => {
                if n < 3 {
                    return bad_n("requires n > 2");
                }
                let nf = n as f64;
                let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
                // terms landing on the same Dicke index add up (n = 3, 5)
                d[0] += C64::new((binomial(n as i64, 2) / 3.0).sqrt(), 0.0);
                d[2] += C64::new(-(3.0f64).sqrt(), 0.0);
                d[n - 3] += C64::new(sign / (nf - 2.0).sqrt(), 0.0);
                d[n - 1] += C64::new(-sign * ((3.0 * nf - 3.0) / 2.0).sqrt(), 0.0);
            }
            NamedState::PNAlpha(alpha) => {
                if n < 2 {
                    return bad_n("requires n >= 2");
                }
                if alpha.norm() == 0.0 {
                    return Err(Error::InvalidParameter("p_n_alpha requires alpha != 0".into()));
                }
                d[0] += alpha.powu(n as u32 - 1) * ((n - 2) as f64).sqrt();
                d[n - 1] += C64::new((n as f64).sqrt(), 0.0);
            }
        }
        normalize(n, d)
    }
}

/// Named-state catalog: `name` is one of `bell, ghz, dicke, psi_mu,
/// tetrahedron, p_n, chi_n, p_n_alpha`.
pub fn catalog(name: &str, n: usize, params: &[C64]) -> Result<SymState> {
    NamedState::parse(name, params)?.build(n)
}

/// A state in the full `2^N`-dimensional computational basis. Index bit
/// `N-1-j` holds qubit `j`, so qubit 0 is the most significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct FullStateVector {
    pub n: usize,
    pub amps: Vec<C64>,
}

impl FullStateVector {
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &FullStateVector) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Swap qubits `i` and `j`.
    pub fn swap_qubits(&self, i: usize, j: usize) -> FullStateVector {
        let bi = self.n - 1 - i;
        let bj = self.n - 1 - j;
        let mut out = vec![C64::new(0.0, 0.0); self.amps.len()];
        for (idx, a) in self.amps.iter().enumerate() {
            let vi = (idx >> bi) & 1;
            let vj = (idx >> bj) & 1;
            let mut t = idx & !(1 << bi) & !(1 << bj);
            t |= vi << bj;
            t |= vj << bi;
            out[t] = *a;
        }
        FullStateVector { n: self.n, amps: out }
    }

    /// Apply the same 2x2 operator to every qubit.
    pub fn apply_each(&self, op: &SingleQubitOp) -> FullStateVector {
        let mut amps = self.amps.clone();
        for q in 0..self.n {
            let bit = 1usize << (self.n - 1 - q);
            for idx in 0..amps.len() {
                if idx & bit == 0 {
                    let a0 = amps[idx];
                    let a1 = amps[idx | bit];
                    amps[idx] = op.a * a0 + op.b * a1;
                    amps[idx | bit] = op.c * a0 + op.d * a1;
                }
            }
        }
        FullStateVector { n: self.n, amps }
    }
}

/// Expand into the computational basis; refuses `n > guard`.
pub fn expand_full_guarded(state: &SymState, guard: usize) -> Result<FullStateVector> {
    let n = state.n;
    if n > guard {
        return Err(Error::SizeLimitExceeded { n, limit: guard });
    }
    let weights: Vec<C64> = (0..=n)
        .map(|k| state.coeffs[k] / sqrt_binomial(n as i64, k as i64))
        .collect();
    let amps = (0..1usize << n)
        .map(|idx| weights[idx.count_ones() as usize])
        .collect();
    Ok(FullStateVector { n, amps })
}

pub fn expand_full(state: &SymState) -> Result<FullStateVector> {
    expand_full_guarded(state, DEFAULT_ORACLE_GUARD)
}

/// 2x2 single-qubit operator, row-major: `op|0> = a|0> + c|1>`,
/// `op|1> = b|0> + d|1>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingleQubitOp {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl SingleQubitOp {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        SingleQubitOp { a, b, c, d }
    }

    pub fn identity() -> Self {
        let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        SingleQubitOp::new(o, z, z, o)
    }

    pub fn diag(x: C64, y: C64) -> Self {
        let z = C64::new(0.0, 0.0);
        SingleQubitOp::new(x, z, z, y)
    }

    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    pub fn is_invertible(&self) -> bool {
        self.det().norm() > 1e-12
    }

    /// `self * other` (apply `other` first).
    pub fn compose(&self, other: &SingleQubitOp) -> SingleQubitOp {
        SingleQubitOp {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    pub fn adjoint(&self) -> SingleQubitOp {
        SingleQubitOp::new(self.a.conj(), self.c.conj(), self.b.conj(), self.d.conj())
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let p = self.adjoint().compose(self);
        let i = SingleQubitOp::identity();
        [(p.a - i.a), (p.b - i.b), (p.c - i.c), (p.d - i.d)]
            .iter()
            .all(|x| x.norm() < tol)
    }
}

/// Multiply two univariate polynomials given by ascending coefficients.
pub(crate) fn poly_mul(p: &[C64], q: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// `op^(x N) |state>`, renormalized.
///
/// Works on the binary form `p(x, y) = sum_k c_k x^(N-k) y^k`: substituting
/// `x -> a x + c y`, `y -> b x + d y` and re-reading the coefficients gives
/// the transformed state exactly, without touching the `2^N` space.
pub fn apply_symmetric_op(state: &SymState, op: &SingleQubitOp) -> Result<SymState> {
    let det = op.det().norm();
    if det <= 1e-12 {
        return Err(Error::SingularOperator { det });
    }
    let n = state.n;
    let form = state.binary_form();
    // powers of the linear forms in y, ascending in y (x-degree is implied)
    let lin_x = [op.a, op.c];
    let lin_y = [op.b, op.d];
    let mut pow_x = vec![vec![C64::new(1.0, 0.0)]];
    let mut pow_y = vec![vec![C64::new(1.0, 0.0)]];
    for i in 0..n {
        pow_x.push(poly_mul(&pow_x[i], &lin_x));
        pow_y.push(poly_mul(&pow_y[i], &lin_y));
    }
    let mut out = vec![C64::new(0.0, 0.0); n + 1];
    for (k, c) in form.iter().enumerate() {
        if *c == C64::new(0.0, 0.0) {
            continue;
        }
        let term = poly_mul(&pow_x[n - k], &pow_y[k]);
        for (j, t) in term.iter().enumerate() {
            out[j] += c * t;
        }
    }
    SymState::from_binary_form(n, &out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn close(a: &SymState, b: &SymState, tol: f64) -> bool {
        a.coeffs().iter().zip(b.coeffs()).all(|(x, y)| (x - y).norm() < tol)
    }

    #[test]
    fn make_state_examples() {
        let bell = make_real_state(2, &[0.0, 1.0, 0.0]).unwrap();
        assert_eq!(bell.coeffs(), &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);

        let ghz = make_real_state(4, &[1.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        assert!((ghz.coeff(0).re - 1.0 / SQRT_2).abs() < 1e-15);
        assert!((ghz.coeff(4).re - 1.0 / SQRT_2).abs() < 1e-15);

        assert!(matches!(
            make_real_state(3, &[2.0, 0.0, 0.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            make_real_state(2, &[0.0, 0.0, 0.0]),
            Err(Error::InvalidState(_))
        ));
    }

    #[test]
    fn global_phase_convention() {
        let s = make_state(2, &[c(0.0, 0.0), c(0.0, 2.0), c(1.0, 1.0)]).unwrap();
        assert_eq!(s.coeff(0), c(0.0, 0.0));
        assert!(s.coeff(1).im.abs() < 1e-16 && s.coeff(1).re > 0.0);
        let norm: f64 = s.coeffs().iter().map(|x| x.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn catalog_examples() {
        let psi0 = catalog("psi_mu", 4, &[c(0.0, 0.0)]).unwrap();
        let ghz = catalog("ghz", 4, &[]).unwrap();
        assert!(close(&psi0, &ghz, 1e-15));

        let t4 = catalog("tetrahedron", 4, &[]).unwrap();
        let pm = catalog("psi_mu", 4, &[c(0.0, SQRT_2)]).unwrap();
        assert!(close(&t4, &pm, 1e-15));

        let p5 = catalog("p_n", 5, &[]).unwrap();
        assert!((p5.coeff(0).re - (3.0f64 / 8.0).sqrt()).abs() < 1e-15);
        assert!((p5.coeff(4).re - (5.0f64 / 8.0).sqrt()).abs() < 1e-15);
        for k in [1, 2, 3, 5] {
            assert_eq!(p5.coeff(k), c(0.0, 0.0));
        }
    }

    #[test]
    fn catalog_errors() {
        assert!(matches!(catalog("werner", 4, &[]), Err(Error::UnknownState(_))));
        assert!(catalog("chi_n", 2, &[]).is_err());
        assert!(catalog("tetrahedron", 5, &[]).is_err());
        assert!(catalog("psi_mu", 4, &[]).is_err());
        assert!(catalog("dicke", 3, &[c(4.0, 0.0)]).is_err());
        assert!(catalog("dicke", 3, &[c(1.5, 0.0)]).is_err());
        // the chi_3 terms cancel exactly
        assert!(matches!(catalog("chi_n", 3, &[]), Err(Error::InvalidState(_))));
    }

    #[test]
    fn psi_mu_normalization() {
        let mu = c(0.3, 0.4);
        let s = catalog("psi_mu", 4, &[mu]).unwrap();
        let norm = (2.0 + mu.norm_sqr()).sqrt();
        assert!((s.coeff(0).re - 1.0 / norm).abs() < 1e-15);
        assert!((s.coeff(2) - mu / norm).norm() < 1e-15);
    }

    #[test]
    fn expand_full_examples() {
        let bell = catalog("bell", 2, &[]).unwrap();
        let f = expand_full(&bell).unwrap();
        let h = 1.0 / SQRT_2;
        let want = [0.0, h, h, 0.0];
        for (a, w) in f.amps.iter().zip(want) {
            assert!((a - c(w, 0.0)).norm() < 1e-15);
        }

        let d30 = catalog("dicke", 3, &[c(0.0, 0.0)]).unwrap();
        let f = expand_full(&d30).unwrap();
        assert_eq!(f.amps[0], c(1.0, 0.0));
        assert!(f.amps[1..].iter().all(|a| a.norm() == 0.0));

        let ghz = catalog("ghz", 4, &[]).unwrap();
        let f = expand_full(&ghz).unwrap();
        for (i, a) in f.amps.iter().enumerate() {
            let w = if i == 0 || i == 15 { h } else { 0.0 };
            assert!((a - c(w, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn expand_full_guard() {
        let s = catalog("ghz", 15, &[]).unwrap();
        assert!(matches!(expand_full(&s), Err(Error::SizeLimitExceeded { n: 15, limit: 14 })));
        assert!(expand_full_guarded(&s, 15).is_ok());
    }

    #[test]
    fn symmetric_op_examples() {
        let s = make_state(3, &[c(0.2, 0.1), c(-0.5, 0.3), c(0.0, 0.7), c(0.1, 0.0)]).unwrap();
        let same = apply_symmetric_op(&s, &SingleQubitOp::identity()).unwrap();
        assert!(close(&s, &same, 1e-15));

        let h = 1.0 / SQRT_2;
        let u2 = SingleQubitOp::new(c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0));
        let ghz = catalog("ghz", 4, &[]).unwrap();
        let out = apply_symmetric_op(&ghz, &u2).unwrap();
        let want = catalog("psi_mu", 4, &[c(6.0f64.sqrt(), 0.0)]).unwrap();
        assert!(close(&out, &want, 1e-14));

        let alpha = c(-1.3, 0.2);
        let p = catalog("p_n", 6, &[]).unwrap();
        let out = apply_symmetric_op(&p, &SingleQubitOp::diag(alpha, c(1.0, 0.0))).unwrap();
        let want = catalog("p_n_alpha", 6, &[alpha]).unwrap();
        assert!(close(&out, &want, 1e-14));

        let singular = SingleQubitOp::new(c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0));
        assert!(matches!(
            apply_symmetric_op(&s, &singular),
            Err(Error::SingularOperator { .. })
        ));
    }
}
