//! Stationary process models with exact block distributions and samplers.

use alloc::vec::Vec;

use rand::Rng;

use crate::infocore::{marginalize_gap, state_count, BlockDistribution, JointBlockDistribution, Word};
use crate::scalar::Prob;
use crate::{Error, Result};

mod empirical;
mod iid;
mod ising;
mod logistic;
mod markov;
mod periodic;

pub use empirical::{EmpiricalSource, DEFAULT_GUARD_RATIO};
pub use iid::IidProcess;
pub use ising::{ising_entropy_rate, IsingChainProcess};
pub use logistic::{LogisticSymbolizer, DEFAULT_BURN_IN};
pub use markov::MarkovProcess;
pub use periodic::PeriodicProcess;

/// Enumeration-based distributions refuse windows with more than this many
/// potential states (`s^len`).
pub const DEFAULT_WINDOW_CAP: u64 = 1 << 26;

/// Anything that can produce exact (or estimated) stationary block laws.
pub trait BlockSource<P: Prob> {
    fn arity(&self) -> usize;

    /// Law of `S_0 … S_{L−1}` for `L ≥ 1`.
    fn block_distribution(&self, len: usize) -> Result<BlockDistribution<P>>;

    fn window_cap(&self) -> u64 {
        DEFAULT_WINDOW_CAP
    }

    /// Law of two length-`L` blocks separated by `gap` unseen symbols.
    /// The default enumerates the `2L + gap` window and sums out the middle.
    fn joint_gap_distribution(&self, len: usize, gap: usize) -> Result<JointBlockDistribution<P>> {
        if len == 0 {
            return Err(Error::InvalidParameter("block length must be positive".into()));
        }
        check_window_cap(self.arity(), 2 * len + gap, self.window_cap())?;
        let window = self.block_distribution(2 * len + gap)?;
        marginalize_gap(&window, len, gap)
    }
}

impl<P: Prob, S: BlockSource<P> + ?Sized> BlockSource<P> for &S {
    fn arity(&self) -> usize {
        (**self).arity()
    }
    fn block_distribution(&self, len: usize) -> Result<BlockDistribution<P>> {
        (**self).block_distribution(len)
    }
    fn window_cap(&self) -> u64 {
        (**self).window_cap()
    }
    fn joint_gap_distribution(&self, len: usize, gap: usize) -> Result<JointBlockDistribution<P>> {
        (**self).joint_gap_distribution(len, gap)
    }
}

pub(crate) fn check_window_cap(arity: usize, len: usize, cap: u64) -> Result<()> {
    let states = state_count(arity, len);
    if states > cap as u128 {
        return Err(Error::WindowCap { states, cap });
    }
    Ok(())
}

pub(crate) fn check_block_length(len: usize) -> Result<()> {
    if len == 0 {
        return Err(Error::InvalidParameter("block length must be positive".into()));
    }
    Ok(())
}

/// A value that may be infinite or undefined.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Quantity {
    Finite(f64),
    Infinite,
    Undefined,
}

impl Quantity {
    pub fn finite(&self) -> Option<f64> {
        match self {
            Quantity::Finite(v) => Some(*v),
            _ => None,
        }
    }
}

/// Exact structure quantities of a closed-form model, in bits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosedForms {
    pub entropy_rate: Quantity,
    pub excess_entropy: Quantity,
    pub forward_complexity: Quantity,
    pub reverse_complexity: Quantity,
    pub pmi: Quantity,
    pub efficiency: Quantity,
}

pub trait ClosedForm {
    fn closed_forms(&self) -> Result<ClosedForms>;
}

/// `E / C` with the convention `0` when `C = 0`.
pub(crate) fn efficiency_ratio(excess: f64, complexity: f64) -> f64 {
    if complexity == 0.0 {
        0.0
    } else {
        excess / complexity
    }
}

/// Reproducible sampling from a stationary start.
pub trait Sample {
    fn sample(&self, n: usize, seed: u64) -> Result<Word>;
}

/// The time-reversed process, used to build reverse ε-machines.
pub trait TimeReversal: Sized {
    fn reversed(&self) -> Result<Self>;
}

pub(crate) fn rng_from_seed(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

/// Draws an index from a (float) probability vector.
pub(crate) fn draw<R: Rng>(rng: &mut R, probs: &[f64]) -> usize {
    let u: f64 = rng.gen();
    let total: f64 = probs.iter().sum();
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p / total;
        if u < acc {
            return i;
        }
    }
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

pub(crate) fn check_sample_len(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("sample length must be positive".into()));
    }
    Ok(())
}

pub(crate) fn to_f64_vec<P: Prob>(v: &[P]) -> Vec<f64> {
    v.iter().map(Prob::to_f64).collect()
}
