//! Pure symmetric N-qubit states in the Dicke basis.
//!
//! The crate covers the reduced density matrices of symmetric states, the
//! maximal-mixedness (MES) criterion and anticoherence order, collective-spin
//! and Husimi-function characterizations, the Majorana stellar representation
//! together with the 4-qubit SLOCC normal form, and three entanglement
//! measures (geometric, barycentric, generalized N-tangle).
//!
//! Most formulas are cross-checked against brute-force oracles in the full
//! `2^N`-dimensional Hilbert space; see [`verify`].

pub mod entanglement;
pub mod error;
pub mod husimi;
pub mod io;
pub mod linalg;
pub mod majorana;
pub mod random;
pub mod reduced;
pub mod spin;
pub mod state;
pub mod verify;

pub use entanglement::{
    barycentric_measure, geometric_measure, gme_psi_mu_closed_form, n_tangle, n_tangle_full_space,
    GmeConfig, GmeResult, TangleResult,
};
pub use error::{Error, Result};
pub use husimi::{husimi_eval, moments, second_moment_identity, Axis, HusimiMoments, SphericalGrid};
pub use majorana::{
    apply_moebius, barycenter, canonicalize4, roots, state_from_roots, Barycenter, ExtComplex,
    MajoranaSet, Moebius, MuCanonical, MuMap,
};
pub use reduced::{anticoherence_order, is_mes, rho_t, AnticoherenceReport, MesReport, ReducedDensity};
pub use spin::{
    decompose_dyad, decompose_operator, expectation, order2_spin_conditions, rho1_from_spin,
    rho2_from_spin, spin_ops, Order2Report, SpinOps, SpinPolynomial,
};
pub use state::{
    apply_symmetric_op, catalog, expand_full, make_state, FullStateVector, NamedState,
    SingleQubitOp, SymState,
};

/// Complex double used for every amplitude and matrix entry.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix used for operators on the symmetric subspace.
pub type CMatrix = nalgebra::DMatrix<C64>;
