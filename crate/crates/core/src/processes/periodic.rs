use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::Rng;

use super::{
    check_block_length, check_sample_len, check_window_cap, rng_from_seed, BlockSource, ClosedForm, ClosedForms,
    Quantity, Sample, TimeReversal, DEFAULT_WINDOW_CAP,
};
use crate::infocore::{BlockDistribution, Word};
use crate::scalar::Prob;
use crate::{Error, Result};

/// A cycle repeated forever, observed from a uniformly random phase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicProcess {
    arity: usize,
    cycle: Word,
    window_cap: u64,
}

impl PeriodicProcess {
    /// The cycle's `p` rotations must be distinct, i.e. `p` is the least period.
    pub fn new(arity: usize, cycle: Word) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::InvalidModel("empty cycle".into()));
        }
        cycle.check_arity(arity)?;
        let p = cycle.len();
        for d in (1..p).filter(|d| p % d == 0) {
            if (0..p).all(|i| cycle[i] == cycle[(i + d) % p]) {
                return Err(Error::InvalidModel(alloc::format!("cycle {cycle} has smaller period {d}")));
            }
        }
        Ok(PeriodicProcess { arity, cycle, window_cap: DEFAULT_WINDOW_CAP })
    }

    pub fn with_window_cap(mut self, cap: u64) -> Self {
        self.window_cap = cap;
        self
    }

    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    pub fn cycle(&self) -> &Word {
        &self.cycle
    }

    fn window(&self, phase: usize, len: usize) -> Word {
        let p = self.cycle.len();
        Word((0..len).map(|t| self.cycle[(phase + t) % p]).collect())
    }
}

impl<P: Prob> BlockSource<P> for PeriodicProcess {
    fn arity(&self) -> usize {
        self.arity
    }

    fn window_cap(&self) -> u64 {
        self.window_cap
    }

    fn block_distribution(&self, len: usize) -> Result<BlockDistribution<P>> {
        check_block_length(len)?;
        check_window_cap(self.arity, len, self.window_cap)?;
        let p = self.period();
        let weight = P::from_ratio(1, p as u64);
        let mut probs: BTreeMap<Word, P> = BTreeMap::new();
        for phase in 0..p {
            let e = probs.entry(self.window(phase, len)).or_insert_with(P::zero);
            *e = e.clone() + weight.clone();
        }
        Ok(BlockDistribution::from_accumulated(self.arity, len, probs))
    }
}

impl ClosedForm for PeriodicProcess {
    fn closed_forms(&self) -> Result<ClosedForms> {
        let h = libm::log2(self.period() as f64);
        Ok(ClosedForms {
            entropy_rate: Quantity::Finite(0.0),
            excess_entropy: Quantity::Finite(h),
            forward_complexity: Quantity::Finite(h),
            reverse_complexity: Quantity::Finite(h),
            pmi: Quantity::Finite(h),
            efficiency: Quantity::Finite(if self.period() > 1 { 1.0 } else { 0.0 }),
        })
    }
}

impl Sample for PeriodicProcess {
    fn sample(&self, n: usize, seed: u64) -> Result<Word> {
        check_sample_len(n)?;
        let mut rng = rng_from_seed(seed);
        let phase = rng.gen_range(0..self.period());
        Ok(self.window(phase, n))
    }
}

impl TimeReversal for PeriodicProcess {
    fn reversed(&self) -> Result<Self> {
        let cycle: Vec<_> = self.cycle.iter().rev().copied().collect();
        Ok(PeriodicProcess { arity: self.arity, cycle: Word(cycle), window_cap: self.window_cap })
    }
}
