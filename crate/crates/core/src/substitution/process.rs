use rand::Rng;

use super::induced::{factor_frequencies, shortcut_frequencies, FactorTable, FromFrequency};
use super::Substitution;
use crate::infocore::{BlockDistribution, Word};
use crate::processes::{check_block_length, check_sample_len, check_window_cap, rng_from_seed, DEFAULT_WINDOW_CAP};
use crate::processes::{BlockSource, ClosedForm, ClosedForms, Quantity, Sample};
use crate::scalar::Prob;
use crate::{Error, Result};

/// Offsets for sampling are drawn below this bound.
const SAMPLE_OFFSET_RANGE: usize = 1 << 20;

/// The uniquely ergodic shift generated by a primitive substitution,
/// observed through its factor frequencies.
#[derive(Clone, Debug, PartialEq)]
pub struct SubstitutionProcess {
    substitution: Substitution,
    pairs: FactorTable,
    window_cap: u64,
}

impl SubstitutionProcess {
    pub fn new(substitution: Substitution) -> Result<Self> {
        let pairs = factor_frequencies(&substitution, 2)?;
        Ok(SubstitutionProcess { substitution, pairs, window_cap: DEFAULT_WINDOW_CAP })
    }

    pub fn thue_morse() -> Self {
        Self::new(Substitution::thue_morse()).expect("primitive")
    }

    pub fn with_window_cap(mut self, cap: u64) -> Self {
        self.window_cap = cap;
        self
    }

    pub fn substitution(&self) -> &Substitution {
        &self.substitution
    }

    /// Length-`l` factor frequencies through the `M_{2,l,p}` shortcut.
    pub fn factor_table(&self, l: usize) -> Result<FactorTable> {
        shortcut_frequencies(&self.substitution, l, &self.pairs)
    }
}

impl<P: Prob + FromFrequency> BlockSource<P> for SubstitutionProcess {
    fn arity(&self) -> usize {
        self.substitution.arity()
    }

    fn window_cap(&self) -> u64 {
        self.window_cap
    }

    fn block_distribution(&self, len: usize) -> Result<BlockDistribution<P>> {
        check_block_length(len)?;
        check_window_cap(self.substitution.arity(), len, self.window_cap)?;
        self.factor_table(len)?.block_distribution(self.substitution.arity())
    }
}

impl ClosedForm for SubstitutionProcess {
    /// Known only for Thue-Morse: zero entropy rate, infinite excess
    /// entropy, complexity and PMI, undefined efficiency.
    fn closed_forms(&self) -> Result<ClosedForms> {
        if !self.substitution.is_thue_morse() {
            return Err(Error::NoClosedForm("substitution other than Thue-Morse".into()));
        }
        Ok(ClosedForms {
            entropy_rate: Quantity::Finite(0.0),
            excess_entropy: Quantity::Infinite,
            forward_complexity: Quantity::Infinite,
            reverse_complexity: Quantity::Infinite,
            pmi: Quantity::Infinite,
            efficiency: Quantity::Undefined,
        })
    }
}

impl Sample for SubstitutionProcess {
    /// A window of the fixed point at a uniformly random offset; by unique
    /// ergodicity its statistics approach the stationary ones.
    fn sample(&self, n: usize, seed: u64) -> Result<Word> {
        check_sample_len(n)?;
        let offset = rng_from_seed(seed).gen_range(0..SAMPLE_OFFSET_RANGE);
        let u = self.substitution.fixed_point_prefix(offset + n);
        Ok(Word::from(&u[offset..]))
    }
}
