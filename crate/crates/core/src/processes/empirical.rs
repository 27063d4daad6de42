use alloc::collections::BTreeMap;

use super::{BlockSource, ClosedForm, ClosedForms, TimeReversal};
use crate::infocore::{empirical_block_distribution, BlockDistribution, JointBlockDistribution, Sym, Word};
use crate::scalar::Prob;
use crate::{Error, Result};

/// Default undersampling guard: a joint estimate is refused when it sees more
/// distinct `(left, right)` pairs than one tenth of the available windows.
pub const DEFAULT_GUARD_RATIO: u64 = 10;

/// Plug-in block statistics of one observed sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalSource {
    arity: usize,
    seq: Word,
    guard_ratio: u64,
}

impl EmpiricalSource {
    pub fn new(arity: usize, seq: Word) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidAlphabet("empty alphabet".into()));
        }
        if seq.is_empty() {
            return Err(Error::SequenceTooShort { len: 0, block: 1 });
        }
        seq.check_arity(arity)?;
        Ok(EmpiricalSource { arity, seq, guard_ratio: DEFAULT_GUARD_RATIO })
    }

    /// `0` disables the undersampling guard.
    pub fn with_guard_ratio(mut self, ratio: u64) -> Self {
        self.guard_ratio = ratio;
        self
    }

    pub fn sequence(&self) -> &Word {
        &self.seq
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    /// Expected upward bias of the plug-in mutual information between two
    /// independent length-`L` blocks, `(s^L − 1)² / (2 N ln 2)` bits.
    pub fn noise_floor(&self, len: usize) -> f64 {
        let cells = libm::pow(self.arity as f64, len as f64) - 1.0;
        cells * cells / (2.0 * self.seq.len() as f64 * core::f64::consts::LN_2)
    }
}

impl<P: Prob> BlockSource<P> for EmpiricalSource {
    fn arity(&self) -> usize {
        self.arity
    }

    fn window_cap(&self) -> u64 {
        u64::MAX
    }

    fn block_distribution(&self, len: usize) -> Result<BlockDistribution<P>> {
        empirical_block_distribution(&self.seq, self.arity, len)
    }

    /// Counts `(first L, last L)` of every length-`2L + g` window.
    fn joint_gap_distribution(&self, len: usize, gap: usize) -> Result<JointBlockDistribution<P>> {
        if len == 0 {
            return Err(Error::InvalidParameter("block length must be positive".into()));
        }
        let span = 2 * len + gap;
        if self.seq.len() < span {
            return Err(Error::SequenceTooShort { len: self.seq.len(), block: span });
        }
        let mut counts: BTreeMap<(&[Sym], &[Sym]), u64> = BTreeMap::new();
        for w in self.seq.windows(span) {
            *counts.entry((&w[..len], &w[len + gap..])).or_insert(0) += 1;
        }
        let windows = (self.seq.len() - span + 1) as u64;
        if self.guard_ratio > 0 && counts.len() as u64 > windows / self.guard_ratio {
            return Err(Error::Undersampled { distinct: counts.len(), windows: windows as usize });
        }
        let probs = counts
            .into_iter()
            .map(|((a, b), c)| ((Word::from(a), Word::from(b)), P::from_ratio(c, windows)))
            .collect();
        Ok(JointBlockDistribution::from_accumulated(self.arity, len, gap, len, probs))
    }
}

impl ClosedForm for EmpiricalSource {
    fn closed_forms(&self) -> Result<ClosedForms> {
        Err(Error::NoClosedForm("empirical sequence".into()))
    }
}

impl TimeReversal for EmpiricalSource {
    fn reversed(&self) -> Result<Self> {
        Ok(EmpiricalSource { arity: self.arity, seq: self.seq.reversed(), guard_ratio: self.guard_ratio })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::infocore::mutual_information;
    use alloc::vec;

    #[test]
    fn alternating_sequence_has_one_bit_at_every_gap() {
        let seq: alloc::vec::Vec<Sym> = (0..1000).map(|i| i % 2).collect();
        let e = EmpiricalSource::new(2, Word(seq)).unwrap();
        for gap in 0..5 {
            let j: JointBlockDistribution<f64> = e.joint_gap_distribution(1, gap).unwrap();
            assert!((mutual_information(&j) - 1.0).abs() < 1e-5);
        }
    }

    #[test]
    fn guard_refuses_sparse_windows() {
        let e = EmpiricalSource::new(2, Word(vec![0, 1, 1, 0, 1, 0, 0, 1, 1, 1])).unwrap();
        let r = BlockSource::<f64>::joint_gap_distribution(&e, 2, 0);
        assert!(matches!(r, Err(Error::Undersampled { .. })));
        let open = e.clone().with_guard_ratio(0);
        assert!(BlockSource::<f64>::joint_gap_distribution(&open, 2, 0).is_ok());
    }

    #[test]
    fn too_short() {
        let e = EmpiricalSource::new(2, Word(vec![0, 1, 1])).unwrap().with_guard_ratio(0);
        assert!(matches!(
            BlockSource::<f64>::joint_gap_distribution(&e, 1, 2),
            Err(Error::SequenceTooShort { .. })
        ));
    }

    #[test]
    fn no_closed_form() {
        let e = EmpiricalSource::new(2, Word(vec![0])).unwrap();
        assert!(matches!(e.closed_forms(), Err(Error::NoClosedForm(_))));
    }
}
