use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::{
    check_block_length, check_sample_len, check_window_cap, draw, rng_from_seed, to_f64_vec, BlockSource, ClosedForm,
    ClosedForms, MarkovProcess, Quantity, Sample, TimeReversal, DEFAULT_WINDOW_CAP,
};
use crate::infocore::{BlockDistribution, JointBlockDistribution, Sym, Word};
use crate::scalar::{Info, Prob};
use crate::{Error, Result};

/// Independent, identically distributed symbols.
#[derive(Clone, Debug, PartialEq)]
pub struct IidProcess<P> {
    probs: Vec<P>,
    window_cap: u64,
}

impl<P: Prob> IidProcess<P> {
    pub fn new(probs: Vec<P>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidModel("empty alphabet".into()));
        }
        if probs.iter().any(|p| p.is_negative()) {
            return Err(Error::InvalidModel("negative probability".into()));
        }
        let sum = probs.iter().fold(P::zero(), |a, p| a + p.clone());
        if !sum.close_to(&P::one(), 1e-12) {
            return Err(Error::InvalidModel(alloc::format!("probabilities sum to {}", sum.to_f64())));
        }
        Ok(IidProcess { probs, window_cap: DEFAULT_WINDOW_CAP })
    }

    /// The fair `s`-sided die.
    pub fn uniform(arity: usize) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidModel("empty alphabet".into()));
        }
        Self::new(vec![P::from_ratio(1, arity as u64); arity])
    }

    pub fn with_window_cap(mut self, cap: u64) -> Self {
        self.window_cap = cap;
        self
    }

    pub fn probs(&self) -> &[P] {
        &self.probs
    }

    pub fn single_symbol_entropy(&self) -> P::Info {
        self.probs.iter().fold(P::Info::zero(), |a, p| a + p.entropy_term())
    }

    /// The same process as an order-0 Markov model.
    pub fn as_markov(&self) -> Result<MarkovProcess<P>> {
        Ok(MarkovProcess::new(self.probs.len(), 0, vec![self.probs.clone()])?.with_window_cap(self.window_cap))
    }
}

impl<P: Prob> BlockSource<P> for IidProcess<P> {
    fn arity(&self) -> usize {
        self.probs.len()
    }

    fn window_cap(&self) -> u64 {
        self.window_cap
    }

    fn block_distribution(&self, len: usize) -> Result<BlockDistribution<P>> {
        check_block_length(len)?;
        check_window_cap(self.probs.len(), len, self.window_cap)?;
        let mut layer: Vec<(Vec<Sym>, P)> = vec![(Vec::new(), P::one())];
        for _ in 0..len {
            let mut next = Vec::with_capacity(layer.len() * self.probs.len());
            for (w, p) in &layer {
                for (x, q) in self.probs.iter().enumerate() {
                    if q.is_zero() {
                        continue;
                    }
                    let mut w2 = w.clone();
                    w2.push(x as Sym);
                    next.push((w2, p.clone() * q.clone()));
                }
            }
            layer = next;
        }
        let probs: BTreeMap<Word, P> = layer.into_iter().map(|(w, p)| (Word(w), p)).collect();
        Ok(BlockDistribution::from_accumulated(self.probs.len(), len, probs))
    }

    /// Blocks are independent at every gap.
    fn joint_gap_distribution(&self, len: usize, gap: usize) -> Result<JointBlockDistribution<P>> {
        check_window_cap(self.probs.len(), 2 * len, self.window_cap)?;
        let d = self.block_distribution(len)?;
        Ok(JointBlockDistribution::product(&d, &d, gap))
    }
}

impl<P: Prob> ClosedForm for IidProcess<P> {
    fn closed_forms(&self) -> Result<ClosedForms> {
        Ok(ClosedForms {
            entropy_rate: Quantity::Finite(self.single_symbol_entropy().to_f64()),
            excess_entropy: Quantity::Finite(0.0),
            forward_complexity: Quantity::Finite(0.0),
            reverse_complexity: Quantity::Finite(0.0),
            pmi: Quantity::Finite(0.0),
            efficiency: Quantity::Finite(0.0),
        })
    }
}

impl<P: Prob> Sample for IidProcess<P> {
    fn sample(&self, n: usize, seed: u64) -> Result<Word> {
        check_sample_len(n)?;
        let mut rng = rng_from_seed(seed);
        let probs = to_f64_vec(&self.probs);
        Ok(Word((0..n).map(|_| draw(&mut rng, &probs) as Sym).collect()))
    }
}

impl<P: Prob> TimeReversal for IidProcess<P> {
    fn reversed(&self) -> Result<Self> {
        Ok(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::infocore::mutual_information;
    use crate::scalar::{LogSum, Rational};

    #[test]
    fn fair_coin_blocks() {
        let c = IidProcess::<Rational>::uniform(2).unwrap();
        for len in 1..6 {
            let h = c.block_distribution(len).unwrap().entropy();
            assert_eq!(h, LogSum::from_rational(Rational::from_ratio(len as u64, 1)));
        }
    }

    #[test]
    fn zero_mi_at_every_gap() {
        let c = IidProcess::new(vec![0.25, 0.75]).unwrap();
        for gap in 0..4 {
            assert!(mutual_information(&c.joint_gap_distribution(2, gap).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn agrees_with_order_zero_markov() {
        let c = IidProcess::new(vec![0.2, 0.3, 0.5]).unwrap();
        let m = c.as_markov().unwrap();
        let a = c.block_distribution(3).unwrap();
        let b = m.block_distribution(3).unwrap();
        assert!(a.total_variation(&b) < 1e-15);
    }

    #[test]
    fn sample_frequencies() {
        let c = IidProcess::new(vec![0.25, 0.75]).unwrap();
        let s = c.sample(100_000, 3).unwrap();
        let ones = s.iter().filter(|&&x| x == 1).count() as f64 / 1e5;
        assert!((ones - 0.75).abs() < 0.01);
    }
}
