//! Quantum circuit architecture search.
//!
//! A weight-sharing supernet ensemble is trained over a discrete space of
//! layered circuits, candidate subnets are ranked with the frozen parameters,
//! and the winner is retrained. Everything runs on an exact dense simulator
//! with optional per-gate depolarizing noise.

pub mod circuit;
pub mod cli;
pub mod diag;
mod error;
pub mod search;
pub mod sim;
pub mod supernet;
pub mod tasks;

pub use error::{QasError, Result};

/// Deterministic RNG used across the crate.
pub type Rng = rand_chacha::ChaCha8Rng;

/// Seeds a crate RNG; `stream` separates independent consumers of one seed.
pub fn seeded_rng(seed: u64, stream: u64) -> Rng {
    use rand::SeedableRng;
    let mut rng = Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
