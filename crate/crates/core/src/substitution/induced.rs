use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use super::spectral::{primitivity, Frequencies};
use super::Substitution;
use crate::infocore::{BlockDistribution, Sym, Word};
use crate::linalg::Matrix;
use crate::scalar::{Prob, Rational};
use crate::{Error, Result};

/// Largest fixed-point prefix scanned while discovering factors.
const MAX_SCAN: usize = 1 << 26;

/// All length-`l` factors of the fixed point, in lexicographic order.
///
/// The prefix length is doubled until the factor set is unchanged by one
/// more doubling and is closed under `ζ_l` (every window of `ζ(ω)` that
/// starts inside `ζ(ω₀)` is already present). For primitive substitutions
/// this reliably finds every factor; it is a stopping heuristic, not a
/// proof.
pub fn factor_set(z: &Substitution, l: usize) -> Result<Vec<Word>> {
    if l == 0 {
        return Err(Error::InvalidParameter("factor length must be positive".into()));
    }
    let windows_of = |n: usize| -> BTreeSet<Word> {
        let u = z.fixed_point_prefix(n);
        u.windows(l).map(Word::from).collect()
    };
    let mut n = (16 * l).max(64);
    let mut current = windows_of(n);
    loop {
        if n > MAX_SCAN {
            return Err(Error::Inconsistent(alloc::format!("length-{l} factor set did not stabilise")));
        }
        let next = windows_of(2 * n);
        if next == current && closed_under_induced(z, &current, l) {
            return Ok(current.into_iter().collect());
        }
        current = next;
        n *= 2;
    }
}

fn induced_images(z: &Substitution, w: &[Sym], l: usize) -> Vec<Word> {
    let img = z.apply(w);
    let first = z.image(w[0]).len();
    (0..first).map(|i| Word::from(&img[i..i + l])).collect()
}

fn closed_under_induced(z: &Substitution, set: &BTreeSet<Word>, l: usize) -> bool {
    set.iter().all(|w| induced_images(z, w, l).iter().all(|x| set.contains(x)))
}

/// `ζ_l` acting on the length-`l` factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedSubstitution {
    pub length: usize,
    /// The alphabet `Ω_l`; letter `i` of `substitution` is `factors[i]`.
    pub factors: Vec<Word>,
    pub substitution: Substitution,
}

impl InducedSubstitution {
    pub fn index_of(&self, w: &[Sym]) -> Option<usize> {
        self.factors.binary_search_by(|f| f[..].cmp(w)).ok()
    }

    /// `M_l`.
    pub fn matrix(&self) -> Matrix<u64> {
        self.substitution.composition_matrix()
    }
}

/// `ζ_l(y₀…y_{l−1})` = the `|ζ(y₀)|` consecutive length-`l` windows of
/// `ζ(y₀…y_{l−1})` that start inside `ζ(y₀)`.
pub fn induced_substitution(z: &Substitution, l: usize) -> Result<InducedSubstitution> {
    if l < 2 {
        return Err(Error::InvalidParameter("induced substitutions need l >= 2".into()));
    }
    let factors = factor_set(z, l)?;
    let index: BTreeMap<&Word, Sym> = factors.iter().enumerate().map(|(i, w)| (w, i as Sym)).collect();
    let rules = factors
        .iter()
        .map(|w| Word(induced_images(z, w, l).iter().map(|x| index[x]).collect()))
        .collect();
    let start = index[&z.fixed_point_prefix(l)];
    let substitution = Substitution::new(rules, start)?;
    Ok(InducedSubstitution { length: l, factors, substitution })
}

/// Exact (or float) frequencies `d_B` of every length-`l` factor.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorTable {
    pub length: usize,
    pub factors: Vec<Word>,
    /// Parallel to `factors`.
    pub frequencies: Frequencies,
}

impl FactorTable {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    fn position(&self, w: &[Sym]) -> Option<usize> {
        self.factors.binary_search_by(|f| f[..].cmp(w)).ok()
    }

    pub fn frequency(&self, w: &[Sym]) -> Option<f64> {
        self.position(w).map(|i| self.frequencies.to_f64()[i])
    }

    pub fn exact_frequency(&self, w: &[Sym]) -> Option<Rational> {
        let i = self.position(w)?;
        self.frequencies.exact().map(|v| v[i].clone())
    }

    /// The table as a block distribution over `arity` symbols.
    pub fn block_distribution<P: Prob + FromFrequency>(&self, arity: usize) -> Result<BlockDistribution<P>> {
        let values = P::from_frequencies(&self.frequencies)?;
        let probs = self.factors.iter().cloned().zip(values).collect();
        BlockDistribution::new(arity, self.length, probs)
    }
}

/// Conversion of spectral frequencies into a probability backend.
pub trait FromFrequency: Sized {
    fn from_frequencies(f: &Frequencies) -> Result<Vec<Self>>;
}

impl FromFrequency for f64 {
    fn from_frequencies(f: &Frequencies) -> Result<Vec<f64>> {
        Ok(f.to_f64())
    }
}

impl FromFrequency for Rational {
    fn from_frequencies(f: &Frequencies) -> Result<Vec<Rational>> {
        f.exact()
            .map(<[Rational]>::to_vec)
            .ok_or_else(|| Error::NotExact("Perron eigenvector is irrational".into()))
    }
}

fn require_primitive(z: &Substitution) -> Result<()> {
    match primitivity(&z.composition_matrix()) {
        Ok(pf) if pf.primitive => Ok(()),
        Ok(_) | Err(Error::Reducible) => Err(Error::NotPrimitive),
        Err(e) => Err(e),
    }
}

/// Frequencies from the normalised Perron eigenvector of `M_l` (of `M` for
/// `l = 1`).
pub fn factor_frequencies(z: &Substitution, l: usize) -> Result<FactorTable> {
    require_primitive(z)?;
    if l == 1 {
        let pf = primitivity(&z.composition_matrix())?;
        let factors = (0..z.arity() as Sym).map(|a| Word(alloc::vec![a])).collect();
        return Ok(FactorTable { length: 1, factors, frequencies: pf.vector });
    }
    let induced = induced_substitution(z, l)?;
    let pf = primitivity(&induced.matrix())?;
    Ok(FactorTable { length: l, factors: induced.factors, frequencies: pf.vector })
}

/// `M_{2,l,p}`: rows are length-`l` factors, columns length-2 factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortcutMatrix {
    pub length: usize,
    pub power: u32,
    pub rows: Vec<Word>,
    pub cols: Vec<Word>,
    pub matrix: Matrix<u64>,
}

impl ShortcutMatrix {
    pub fn row_of(&self, w: &[Sym]) -> Option<usize> {
        self.rows.binary_search_by(|f| f[..].cmp(w)).ok()
    }
}

/// Smallest `p ≥ 1` with `min_α |ζᵖ(α)| ≥ l − 1`.
pub fn minimal_shortcut_power(z: &Substitution, l: usize) -> u32 {
    let needed = l.saturating_sub(1) as u64;
    let mut p = 1u32;
    while z.image_lengths(p as usize).into_iter().min().unwrap_or(0) < needed {
        p += 1;
    }
    p
}

/// Entry `(ω, αβ)` counts the occurrences of `ω` in `ζᵖ(αβ)` that start
/// inside `ζᵖ(α)`. Requires `min_α |ζᵖ(α)| ≥ l − 1` so that every such
/// window fits.
pub fn shortcut_matrix(z: &Substitution, l: usize, p: u32) -> Result<ShortcutMatrix> {
    if l == 0 {
        return Err(Error::InvalidParameter("factor length must be positive".into()));
    }
    let needed = l - 1;
    let shortest = z.image_lengths(p as usize).into_iter().min().unwrap_or(0);
    if shortest < needed as u64 {
        return Err(Error::ShortcutPowerTooSmall { power: p, length: l, needed });
    }
    let cols = factor_set(z, 2)?;
    let mut counts: BTreeMap<Word, Vec<u64>> = BTreeMap::new();
    for (j, ab) in cols.iter().enumerate() {
        let head = z.apply_power(&ab[..1], p).len();
        let img = z.apply_power(ab, p);
        for i in 0..head {
            let w = Word::from(&img[i..i + l]);
            counts.entry(w).or_insert_with(|| alloc::vec![0; cols.len()])[j] += 1;
        }
    }
    let rows: Vec<Word> = counts.keys().cloned().collect();
    let matrix = Matrix::from_rows(counts.into_values().collect());
    Ok(ShortcutMatrix { length: l, power: p, rows, cols, matrix })
}

/// Checks `M_{2,l,p} · M₂ = M_l · M_{2,l,p}` as an integer identity (both
/// sides count the windows of `M_{2,l,p+1}`).
pub fn shortcut_commutes(z: &Substitution, l: usize, p: u32) -> Result<bool> {
    let s = shortcut_matrix(z, l, p)?;
    let m2 = induced_substitution(z, 2)?;
    let ml = induced_substitution(z, l.max(2))?;
    if s.rows != ml.factors || s.cols != m2.factors {
        return Ok(false);
    }
    Ok(s.matrix.mul(&m2.matrix()) == ml.matrix().mul(&s.matrix))
}

/// Frequencies of length-`l` factors as the normalised `M_{2,l,p} · v₂`,
/// with the minimal valid `p`. No eigenproblem beyond `M₂` is solved.
pub fn frequencies_via_shortcut(z: &Substitution, l: usize) -> Result<FactorTable> {
    let v2 = factor_frequencies(z, 2)?;
    shortcut_frequencies(z, l, &v2)
}

pub(crate) fn shortcut_frequencies(z: &Substitution, l: usize, v2: &FactorTable) -> Result<FactorTable> {
    if l == 1 {
        return factor_frequencies(z, 1);
    }
    let s = shortcut_matrix(z, l, minimal_shortcut_power(z, l))?;
    debug_assert_eq!(s.cols, v2.factors);
    let frequencies = match &v2.frequencies {
        Frequencies::Exact(v) => {
            let m = s.matrix.map(|&x| Rational::from_integer(BigInt::from(x)));
            let raw = m.apply(v);
            let total = raw.iter().fold(Rational::zero(), |a, x| a + x);
            Frequencies::Exact(raw.into_iter().map(|x| x / &total).collect())
        }
        Frequencies::Float(v) => {
            let raw = s.matrix.map(|&x| x as f64).apply(v);
            let total: f64 = raw.iter().sum();
            Frequencies::Float(raw.into_iter().map(|x| x / total).collect())
        }
    };
    Ok(FactorTable { length: l, factors: s.rows, frequencies })
}
