//! Seeded random states and operators for tests, verification and benches.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::majorana::in_domain_s;
use crate::state::{make_state, SingleQubitOp, SymState};
use crate::{CMatrix, C64};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Unitarily invariant random state on the symmetric subspace.
pub fn random_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SymState {
    let raw: Vec<C64> = (0..=n).map(|_| gaussian_complex(rng)).collect();
    let norm = raw.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let raw: Vec<C64> = raw.iter().map(|c| c / norm).collect();
    make_state(n, &raw).expect("a Gaussian vector is nonzero")
}

/// Haar-random 2x2 unitary.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R) -> SingleQubitOp {
    let (a, b) = loop {
        let a = gaussian_complex(rng);
        let b = gaussian_complex(rng);
        let s = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if s > 1e-12 {
            break (a / s, b / s);
        }
    };
    let phase = C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    SingleQubitOp::new(a * phase, -b.conj() * phase, b * phase, a.conj() * phase)
}

/// 2-norm condition number of a 2x2 operator.
pub fn condition_number(op: &SingleQubitOp) -> f64 {
    let fro2 = op.a.norm_sqr() + op.b.norm_sqr() + op.c.norm_sqr() + op.d.norm_sqr();
    let det = op.det().norm();
    if det == 0.0 {
        return f64::INFINITY;
    }
    // singular values solve s^2 - fro2 s + det^2 = 0 in s = sigma^2
    let disc = (fro2 * fro2 - 4.0 * det * det).max(0.0).sqrt();
    let big = (fro2 + disc) / 2.0;
    (big / (det * det / big)).sqrt()
}

/// Random invertible operator with condition number at most `max_cond`.
pub fn random_slocc<R: Rng + ?Sized>(max_cond: f64, rng: &mut R) -> SingleQubitOp {
    loop {
        let op = SingleQubitOp::new(
            gaussian_complex(rng),
            gaussian_complex(rng),
            gaussian_complex(rng),
            gaussian_complex(rng),
        );
        if condition_number(&op) <= max_cond {
            let scale = op.det().sqrt();
            return SingleQubitOp::new(op.a / scale, op.b / scale, op.c / scale, op.d / scale);
        }
    }
}

/// Random Hermitian matrix with Gaussian entries.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| gaussian_complex(rng));
    (&g + g.adjoint()) * C64::new(0.5, 0.0)
}

/// Uniform sample of the domain S kept `margin` away from its boundary and
/// from the two excluded points `+-sqrt(2/3)`.
pub fn random_mu_interior<R: Rng + ?Sized>(margin: f64, rng: &mut R) -> C64 {
    let r = (2.0f64 / 3.0).sqrt();
    loop {
        let mu = C64::new(rng.random_range(0.0..3.0 * r), rng.random_range(0.0..2.0 * r));
        let inside = in_domain_s(mu, 0.0)
            && mu.re > margin
            && mu.im > margin
            && (mu - r).norm() < 2.0 * r - margin
            && (mu - r).norm() > margin
            && (mu + r).norm() > margin;
        if inside {
            return mu;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_seed() {
        let a = random_state(5, &mut seeded(42));
        let b = random_state(5, &mut seeded(42));
        assert_eq!(a, b);
    }

    #[test]
    fn unitary_and_slocc() {
        let mut rng = seeded(7);
        for _ in 0..50 {
            assert!(random_unitary(&mut rng).is_unitary(1e-13));
            let op = random_slocc(20.0, &mut rng);
            assert!(condition_number(&op) <= 20.0 + 1e-9);
            assert!((op.det() - 1.0).norm() < 1e-12);
        }
        assert!((condition_number(&SingleQubitOp::identity()) - 1.0).abs() < 1e-15);
        let diag = SingleQubitOp::diag(C64::new(4.0, 0.0), C64::new(0.5, 0.0));
        assert!((condition_number(&diag) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn mu_samples_inside() {
        let mut rng = seeded(3);
        for _ in 0..100 {
            assert!(in_domain_s(random_mu_interior(0.05, &mut rng), 0.0));
        }
    }
}
