//! Complexity measures of stationary symbolic processes.
//!
//! The crate computes block entropies, entropy rates, excess entropy, the
//! gap-separated mutual information grid `E(L, g)` whose double limit is the
//! persistent mutual information (PMI), ε-machine statistical complexity and
//! the efficiency of prediction. Closed-form process models (periodic,
//! finite-order Markov, i.i.d., the 1-D Ising chain, primitive substitutions)
//! expose exact block distributions; empirical sequences go through the
//! plug-in estimator.
//!
//! Probabilities are generic over [`Prob`]: `f64` for the float backend and
//! [`Rational`] for the exact backend, where entropies come out as
//! [`LogSum`] values `a + Σ c_q·log₂ q` with rational coefficients.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod emachine;
mod error;
pub mod infocore;
pub mod linalg;
pub mod measures;
pub mod processes;
pub mod scalar;
pub mod substitution;

pub use error::{Error, Result};
pub use infocore::{
    empirical_block_distribution, marginalize_gap, mutual_information, shannon_entropy, Alphabet,
    BlockDistribution, JointBlockDistribution, Sym, Word,
};
pub use scalar::{Info, LogSum, Prob, Rational};
