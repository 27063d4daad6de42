//! Alphabets, words, block distributions and the entropy / mutual
//! information primitives.
//!
//! Logarithms are base 2 throughout. Words are stored as symbol-index
//! vectors; distributions are `BTreeMap`s keyed by those vectors, so output
//! order is the lexicographic order of indices.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::Deref;

use crate::scalar::{Info, Prob};
use crate::{Error, Result};

pub type Sym = u32;

/// Ordered list of distinct symbol labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = labels.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet("empty alphabet".into()));
        }
        let distinct: BTreeSet<&String> = symbols.iter().collect();
        if distinct.len() != symbols.len() {
            return Err(Error::InvalidAlphabet("duplicate labels".into()));
        }
        if symbols.iter().any(|s| s.is_empty() || s.contains(',')) {
            return Err(Error::InvalidAlphabet("labels must be non-empty and comma-free".into()));
        }
        Ok(Alphabet { symbols })
    }

    /// `{0, 1, …, n-1}` labelled by their decimal digits.
    pub fn numeric(n: usize) -> Self {
        Alphabet { symbols: (0..n).map(|i| i.to_string()).collect() }
    }

    pub fn binary() -> Self {
        Alphabet::numeric(2)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn label(&self, sym: Sym) -> Option<&str> {
        self.symbols.get(sym as usize).map(String::as_str)
    }

    pub fn index_of(&self, label: &str) -> Option<Sym> {
        self.symbols.iter().position(|s| s == label).map(|i| i as Sym)
    }

    pub fn labels(&self) -> &[String] {
        &self.symbols
    }

    fn single_char(&self) -> bool {
        self.symbols.iter().all(|s| s.chars().count() == 1)
    }

    /// Parses a word: character by character when every label is a single
    /// character and the text has no commas, comma-separated otherwise.
    pub fn parse(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        let lookup = |label: &str| {
            self.index_of(label)
                .ok_or_else(|| Error::InvalidAlphabet(alloc::format!("unknown symbol {label:?}")))
        };
        let syms = if self.single_char() && !text.contains(',') {
            text.chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| lookup(c.encode_utf8(&mut [0u8; 4])))
                .collect::<Result<Vec<_>>>()?
        } else {
            text.split(',').map(|s| lookup(s.trim())).collect::<Result<Vec<_>>>()?
        };
        Ok(Word(syms))
    }

    pub fn render(&self, word: &Word) -> String {
        let sep = if self.single_char() { "" } else { "," };
        let mut out = String::new();
        for (i, &s) in word.iter().enumerate() {
            if i > 0 {
                out.push_str(sep);
            }
            out.push_str(self.label(s).unwrap_or("?"));
        }
        out
    }
}

/// A finite sequence of symbol indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Sym>);

impl Word {
    pub fn new(symbols: Vec<Sym>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn into_inner(self) -> Vec<Sym> {
        self.0
    }

    pub fn concat(&self, other: &[Sym]) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(other);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Checks every symbol against an alphabet size.
    pub fn check_arity(&self, arity: usize) -> Result<()> {
        match self.0.iter().find(|&&s| s as usize >= arity) {
            Some(&symbol) => Err(Error::SymbolOutOfRange { symbol, arity }),
            None => Ok(()),
        }
    }
}

impl Deref for Word {
    type Target = [Sym];
    fn deref(&self) -> &[Sym] {
        &self.0
    }
}

impl From<&[Sym]> for Word {
    fn from(s: &[Sym]) -> Self {
        Word(s.to_vec())
    }
}

impl From<Vec<Sym>> for Word {
    fn from(v: Vec<Sym>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let compact = self.0.iter().all(|&s| s < 10);
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 && !compact {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// `s^exp` without overflow.
pub(crate) fn state_count(arity: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(arity as u128);
    }
    acc
}

/// Stationary distribution of length-`L` words. Absent words have
/// probability zero; zero entries are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockDistribution<P> {
    arity: usize,
    block_length: usize,
    probs: BTreeMap<Word, P>,
}

impl<P: Prob> BlockDistribution<P> {
    /// Builds a distribution, dropping zero entries and checking the total
    /// (exactly on the exact backend, within 1e-12 otherwise).
    pub fn new(arity: usize, block_length: usize, probs: BTreeMap<Word, P>) -> Result<Self> {
        let mut total = P::zero();
        let mut kept = BTreeMap::new();
        for (w, p) in probs {
            if w.len() != block_length {
                return Err(Error::LengthMismatch { expected: block_length, found: w.len() });
            }
            w.check_arity(arity)?;
            if p.is_negative() {
                return Err(Error::InvalidDistribution(alloc::format!("negative probability for {w}")));
            }
            if p.is_zero() {
                continue;
            }
            total = total + p.clone();
            kept.insert(w, p);
        }
        if !total.close_to(&P::one(), 1e-12) {
            return Err(Error::InvalidDistribution(alloc::format!(
                "probabilities sum to {}",
                total.to_f64()
            )));
        }
        Ok(BlockDistribution { arity, block_length, probs: kept })
    }

    /// Builds from unnormalized accumulations known to sum to one up to
    /// rounding; used internally by models.
    pub(crate) fn from_accumulated(arity: usize, block_length: usize, probs: BTreeMap<Word, P>) -> Self {
        let probs = probs.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        BlockDistribution { arity, block_length, probs }
    }

    /// The distribution of the empty word.
    pub fn trivial(arity: usize) -> Self {
        let mut probs = BTreeMap::new();
        probs.insert(Word::empty(), P::one());
        BlockDistribution { arity, block_length: 0, probs }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn block_length(&self) -> usize {
        self.block_length
    }

    pub fn prob(&self, w: &Word) -> P {
        self.probs.get(w).cloned().unwrap_or_else(P::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &P)> {
        self.probs.iter()
    }

    pub fn support_size(&self) -> usize {
        self.probs.len()
    }

    pub fn entropy(&self) -> P::Info {
        shannon_entropy(self)
    }

    /// Marginal on symbols `start..start+len` of each word.
    pub fn marginal(&self, start: usize, len: usize) -> Result<BlockDistribution<P>> {
        if start + len > self.block_length {
            return Err(Error::LengthMismatch { expected: self.block_length, found: start + len });
        }
        let mut out: BTreeMap<Word, P> = BTreeMap::new();
        for (w, p) in &self.probs {
            let key = Word::from(&w[start..start + len]);
            let e = out.entry(key).or_insert_with(P::zero);
            *e = e.clone() + p.clone();
        }
        Ok(BlockDistribution { arity: self.arity, block_length: len, probs: out })
    }

    /// Total variation distance `½ Σ |p − q|` as a float.
    pub fn total_variation<Q: Prob>(&self, other: &BlockDistribution<Q>) -> f64 {
        let mut sum = 0.0;
        let keys: BTreeSet<&Word> = self.probs.keys().chain(other.probs.keys()).collect();
        for k in keys {
            let a = self.probs.get(k).map(Prob::to_f64).unwrap_or(0.0);
            let b = other.probs.get(k).map(Prob::to_f64).unwrap_or(0.0);
            sum += (a - b).abs();
        }
        sum / 2.0
    }

    pub fn to_f64(&self) -> BlockDistribution<f64> {
        BlockDistribution {
            arity: self.arity,
            block_length: self.block_length,
            probs: self.probs.iter().map(|(w, p)| (w.clone(), p.to_f64())).collect(),
        }
    }
}

/// Joint law of a left block and a right block separated by `gap` unseen
/// symbols.
#[derive(Clone, Debug, PartialEq)]
pub struct JointBlockDistribution<P> {
    arity: usize,
    left_length: usize,
    gap: usize,
    right_length: usize,
    probs: BTreeMap<(Word, Word), P>,
}

impl<P: Prob> JointBlockDistribution<P> {
    pub fn new(
        arity: usize,
        left_length: usize,
        gap: usize,
        right_length: usize,
        probs: BTreeMap<(Word, Word), P>,
    ) -> Result<Self> {
        let mut total = P::zero();
        let mut kept = BTreeMap::new();
        for ((a, b), p) in probs {
            if a.len() != left_length || b.len() != right_length {
                return Err(Error::LengthMismatch { expected: left_length + right_length, found: a.len() + b.len() });
            }
            a.check_arity(arity)?;
            b.check_arity(arity)?;
            if p.is_negative() {
                return Err(Error::InvalidDistribution("negative joint probability".into()));
            }
            if p.is_zero() {
                continue;
            }
            total = total + p.clone();
            kept.insert((a, b), p);
        }
        if !total.close_to(&P::one(), 1e-12) {
            return Err(Error::InvalidDistribution(alloc::format!("joint sums to {}", total.to_f64())));
        }
        Ok(JointBlockDistribution { arity, left_length, gap, right_length, probs: kept })
    }

    pub(crate) fn from_accumulated(
        arity: usize,
        left_length: usize,
        gap: usize,
        right_length: usize,
        probs: BTreeMap<(Word, Word), P>,
    ) -> Self {
        let probs = probs.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        JointBlockDistribution { arity, left_length, gap, right_length, probs }
    }

    /// Product of two independent marginals.
    pub fn product(left: &BlockDistribution<P>, right: &BlockDistribution<P>, gap: usize) -> Self {
        let mut probs = BTreeMap::new();
        for (a, pa) in left.iter() {
            for (b, pb) in right.iter() {
                probs.insert((a.clone(), b.clone()), pa.clone() * pb.clone());
            }
        }
        JointBlockDistribution {
            arity: left.arity,
            left_length: left.block_length,
            gap,
            right_length: right.block_length,
            probs,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }
    pub fn left_length(&self) -> usize {
        self.left_length
    }
    pub fn right_length(&self) -> usize {
        self.right_length
    }
    pub fn gap(&self) -> usize {
        self.gap
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Word, Word), &P)> {
        self.probs.iter()
    }

    pub fn support_size(&self) -> usize {
        self.probs.len()
    }

    pub fn left(&self) -> BlockDistribution<P> {
        self.side(true)
    }

    pub fn right(&self) -> BlockDistribution<P> {
        self.side(false)
    }

    fn side(&self, left: bool) -> BlockDistribution<P> {
        let mut out: BTreeMap<Word, P> = BTreeMap::new();
        for ((a, b), p) in &self.probs {
            let key = if left { a } else { b };
            let e = out.entry(key.clone()).or_insert_with(P::zero);
            *e = e.clone() + p.clone();
        }
        let len = if left { self.left_length } else { self.right_length };
        BlockDistribution { arity: self.arity, block_length: len, probs: out }
    }

    /// Entropy of the pair `(left, right)`.
    pub fn joint_entropy(&self) -> P::Info {
        self.probs.values().fold(P::Info::zero(), |acc, p| acc + p.entropy_term())
    }

    /// Left and right exchanged.
    pub fn swapped(&self) -> Self {
        JointBlockDistribution {
            arity: self.arity,
            left_length: self.right_length,
            gap: self.gap,
            right_length: self.left_length,
            probs: self.probs.iter().map(|((a, b), p)| ((b.clone(), a.clone()), p.clone())).collect(),
        }
    }
}

/// `H = −Σ p log₂ p` with `0·log 0 = 0`.
pub fn shannon_entropy<P: Prob>(d: &BlockDistribution<P>) -> P::Info {
    d.probs.values().fold(P::Info::zero(), |acc, p| acc + p.entropy_term())
}

/// `I(left; right) = H(left) + H(right) − H(left, right)`.
///
/// Evaluated as the divergence `Σ p(a,b) log₂ [p(a,b) / (p(a) p(b))]`, which
/// is the same quantity but keeps small float values accurate.
pub fn mutual_information<P: Prob>(j: &JointBlockDistribution<P>) -> P::Info {
    let left = j.left();
    let right = j.right();
    j.probs.iter().fold(P::Info::zero(), |acc, ((a, b), p)| {
        let q = left.prob(a) * right.prob(b);
        acc + p.divergence_term(&q)
    })
}

/// Splits each length-`2L+g` window into its first and last `L` symbols,
/// summing out the middle `g`.
pub fn marginalize_gap<P: Prob>(window: &BlockDistribution<P>, len: usize, gap: usize) -> Result<JointBlockDistribution<P>> {
    let expected = 2 * len + gap;
    if window.block_length != expected {
        return Err(Error::LengthMismatch { expected, found: window.block_length });
    }
    let mut probs: BTreeMap<(Word, Word), P> = BTreeMap::new();
    for (w, p) in &window.probs {
        let key = (Word::from(&w[..len]), Word::from(&w[len + gap..]));
        let e = probs.entry(key).or_insert_with(P::zero);
        *e = e.clone() + p.clone();
    }
    Ok(JointBlockDistribution { arity: window.arity, left_length: len, gap, right_length: len, probs })
}

/// Plug-in estimate from sliding-window counts over the
/// `len(seq) − L + 1` positions.
pub fn empirical_block_distribution<P: Prob>(seq: &[Sym], arity: usize, len: usize) -> Result<BlockDistribution<P>> {
    if len == 0 {
        return Err(Error::InvalidParameter("block length must be positive".into()));
    }
    if seq.len() < len {
        return Err(Error::SequenceTooShort { len: seq.len(), block: len });
    }
    Word::from(seq).check_arity(arity)?;
    let mut counts: BTreeMap<&[Sym], u64> = BTreeMap::new();
    for w in seq.windows(len) {
        *counts.entry(w).or_insert(0) += 1;
    }
    let total = (seq.len() - len + 1) as u64;
    let probs = counts.into_iter().map(|(w, c)| (Word::from(w), P::from_ratio(c, total))).collect();
    Ok(BlockDistribution { arity, block_length: len, probs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{LogSum, Rational};
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn dist<P: Prob>(entries: &[(&[Sym], P)]) -> BlockDistribution<P> {
        let len = entries[0].0.len();
        let probs = entries.iter().map(|(w, p)| (Word::from(*w), p.clone())).collect();
        BlockDistribution::new(2, len, probs).unwrap()
    }

    #[test]
    fn uniform_three_bits() {
        let mut probs = BTreeMap::new();
        for i in 0..8u32 {
            probs.insert(Word(alloc::vec![i >> 2 & 1, i >> 1 & 1, i & 1]), q(1, 8));
        }
        let d = BlockDistribution::new(2, 3, probs).unwrap();
        assert_eq!(shannon_entropy(&d), LogSum::from_rational(q(3, 1)));
    }

    #[test]
    fn point_mass_zero() {
        let d = dist::<f64>(&[(&[0, 1], 1.0)]);
        assert_eq!(shannon_entropy(&d), 0.0);
    }

    #[test]
    fn thue_morse_pairs_entropy() {
        let d = dist(&[(&[0, 0], q(1, 6)), (&[0, 1], q(1, 3)), (&[1, 0], q(1, 3)), (&[1, 1], q(1, 6))]);
        let h = shannon_entropy(&d);
        // (1/3)log₂6 + (2/3)log₂3 = 1/3 + log₂3
        assert_eq!(h, LogSum::from_parts(q(1, 3), q(1, 1)));
        assert!((h.to_f64() - 1.918295834054489).abs() < 1e-12);
    }

    #[test]
    fn mi_of_independent_pair_is_zero() {
        let l = dist(&[(&[0], q(1, 3)), (&[1], q(2, 3))]);
        let r = dist(&[(&[0], q(1, 4)), (&[1], q(3, 4))]);
        let j = JointBlockDistribution::product(&l, &r, 0);
        assert!(mutual_information(&j).is_zero());
    }

    #[test]
    fn mi_of_copy_is_entropy() {
        let mut probs = BTreeMap::new();
        probs.insert((Word(alloc::vec![0]), Word(alloc::vec![0])), q(1, 3));
        probs.insert((Word(alloc::vec![1]), Word(alloc::vec![1])), q(2, 3));
        let j = JointBlockDistribution::new(2, 1, 0, 1, probs).unwrap();
        assert_eq!(mutual_information(&j), shannon_entropy(&j.left()));
    }

    #[test]
    fn period_two_mi_one_bit() {
        for swap in [false, true] {
            let mut probs = BTreeMap::new();
            let (x, y) = if swap { (1, 0) } else { (0, 0) };
            probs.insert((Word(alloc::vec![0]), Word(alloc::vec![y ^ x])), q(1, 2));
            probs.insert((Word(alloc::vec![1]), Word(alloc::vec![1 ^ x ^ y])), q(1, 2));
            let j = JointBlockDistribution::new(2, 1, 3, 1, probs).unwrap();
            assert_eq!(mutual_information(&j), LogSum::from_rational(q(1, 1)));
        }
    }

    #[test]
    fn marginalize_gap_examples() {
        let uniform = dist(&[(&[0, 0], q(1, 4)), (&[0, 1], q(1, 4)), (&[1, 0], q(1, 4)), (&[1, 1], q(1, 4))]);
        let j = marginalize_gap(&uniform, 1, 0).unwrap();
        assert_eq!(j.support_size(), 4);
        assert!(j.iter().all(|(_, p)| *p == q(1, 4)));

        let windows = dist(&[(&[0, 1, 0], q(1, 2)), (&[1, 0, 1], q(1, 2))]);
        let j = marginalize_gap(&windows, 1, 1).unwrap();
        let pairs: Vec<_> = j.iter().map(|((a, b), p)| (a.0[0], b.0[0], p.clone())).collect();
        assert_eq!(pairs, alloc::vec![(0, 0, q(1, 2)), (1, 1, q(1, 2))]);

        assert!(marginalize_gap(&windows, 1, 0).is_err());
    }

    #[test]
    fn empirical_counts() {
        let d: BlockDistribution<Rational> = empirical_block_distribution(&[0, 1, 0, 1], 2, 2).unwrap();
        assert_eq!(d.prob(&Word(alloc::vec![0, 1])), q(2, 3));
        assert_eq!(d.prob(&Word(alloc::vec![1, 0])), q(1, 3));
        let d: BlockDistribution<f64> = empirical_block_distribution(&[0, 0, 0, 0], 2, 1).unwrap();
        assert_eq!(d.prob(&Word(alloc::vec![0])), 1.0);
        assert!(matches!(
            empirical_block_distribution::<f64>(&[0, 1], 2, 3),
            Err(Error::SequenceTooShort { .. })
        ));
    }

    #[test]
    fn rejects_bad_distributions() {
        let mut probs = BTreeMap::new();
        probs.insert(Word(alloc::vec![0]), 0.5);
        assert!(BlockDistribution::new(2, 1, probs.clone()).is_err());
        probs.insert(Word(alloc::vec![3]), 0.5);
        assert!(matches!(BlockDistribution::new(2, 1, probs), Err(Error::SymbolOutOfRange { .. })));
    }

    #[test]
    fn alphabet_parse_render() {
        let a = Alphabet::new(["a", "b"]).unwrap();
        let w = a.parse("abba").unwrap();
        assert_eq!(w.0, alloc::vec![0, 1, 1, 0]);
        assert_eq!(a.render(&w), "abba");
        let m = Alphabet::new(["up", "down"]).unwrap();
        let w = m.parse("up,down,down").unwrap();
        assert_eq!(m.render(&w), "up,down,down");
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(a.parse("abc").is_err());
    }
}
