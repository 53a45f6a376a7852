//! Fixtures shared by the criterion benches.

use symqent::random::{random_state, seeded};
use symqent::SymState;

/// Deterministic random states, one per qubit number in `sizes`.
pub fn random_states(sizes: &[usize], seed: u64) -> Vec<SymState> {
    let mut rng = seeded(seed);
    sizes.iter().map(|&n| random_state(n, &mut rng)).collect()
}
