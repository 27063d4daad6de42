//! Substitution systems: fixed points, composition matrices, Perron-Frobenius
//! data, induced substitutions on length-`l` factors and exact factor
//! frequencies.
//!
//! Letter counts are column vectors: `M[i][j]` is the number of `i`s in
//! `ζ(j)`, so `counts(ζ(B)) = M · counts(B)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::infocore::{Sym, Word};
use crate::linalg::Matrix;
use crate::{Error, Result};

mod induced;
mod process;
mod spectral;
mod thue_morse;

pub use induced::{
    factor_frequencies, factor_set, frequencies_via_shortcut, induced_substitution, minimal_shortcut_power,
    shortcut_commutes, shortcut_matrix, FactorTable, FromFrequency, InducedSubstitution, ShortcutMatrix,
};
pub use process::SubstitutionProcess;
pub use spectral::{primitivity, Frequencies, PerronFrobeniusData};
pub use thue_morse::{
    complexity_function, forbidden_words_check, thue_morse_block_entropy_increment, thue_morse_complexity_increment,
    FORBIDDEN_WORDS,
};

/// A substitution `ζ : 𝒜 → 𝒜⁺` together with the letter whose image starts
/// with itself, so that `ζⁿ(start)` converges to a one-sided fixed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    rules: Vec<Word>,
    start: Sym,
}

impl Substitution {
    /// Checks that every image is nonempty and in range, that some image has
    /// length at least 2, that `ζ(start)` begins with `start`, and that
    /// `|ζⁿ(α)| → ∞` for every letter.
    pub fn new(rules: Vec<Word>, start: Sym) -> Result<Self> {
        let s = rules.len();
        if s == 0 {
            return Err(Error::InvalidSubstitution("empty alphabet".into()));
        }
        for (a, img) in rules.iter().enumerate() {
            if img.is_empty() {
                return Err(Error::InvalidSubstitution(alloc::format!("ζ({a}) is empty")));
            }
            img.check_arity(s)?;
        }
        if rules.iter().all(|w| w.len() < 2) {
            return Err(Error::InvalidSubstitution("every image has length 1".into()));
        }
        if start as usize >= s {
            return Err(Error::SymbolOutOfRange { symbol: start, arity: s });
        }
        if rules[start as usize][0] != start {
            return Err(Error::InvalidSubstitution(alloc::format!("ζ({start}) does not begin with {start}")));
        }
        let sub = Substitution { rules, start };
        // Lengths are nondecreasing; if they are unbounded they grow somewhere
        // in every window of s steps past step s (a path of s length-1 rules
        // revisits a letter and stays in a non-growing cycle forever).
        let at_s = sub.image_lengths(s);
        let at_2s = sub.image_lengths(2 * s);
        if let Some(a) = (0..s).find(|&a| at_2s[a] <= at_s[a]) {
            return Err(Error::InvalidSubstitution(alloc::format!("|ζⁿ({a})| stays bounded")));
        }
        Ok(sub)
    }

    /// Parses rules given as strings of decimal digits or comma-separated
    /// indices, e.g. `["01", "10"]`.
    pub fn from_strs(rules: &[&str], start: Sym) -> Result<Self> {
        let parsed = rules
            .iter()
            .map(|r| {
                let parts: Vec<&str> =
                    if r.contains(',') { r.split(',').map(str::trim).collect() } else { r.split("").filter(|x| !x.is_empty()).collect() };
                parts
                    .iter()
                    .map(|p| p.parse::<Sym>().map_err(|_| Error::InvalidSubstitution(alloc::format!("bad symbol {p:?}"))))
                    .collect::<Result<Vec<_>>>()
                    .map(Word)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parsed, start)
    }

    /// `0 → 01, 1 → 10`.
    pub fn thue_morse() -> Self {
        Self::new(vec![Word(vec![0, 1]), Word(vec![1, 0])], 0).expect("valid")
    }

    /// `0 → 01, 1 → 0`.
    pub fn fibonacci() -> Self {
        Self::new(vec![Word(vec![0, 1]), Word(vec![0])], 0).expect("valid")
    }

    pub fn arity(&self) -> usize {
        self.rules.len()
    }

    pub fn start(&self) -> Sym {
        self.start
    }

    pub fn rules(&self) -> &[Word] {
        &self.rules
    }

    pub fn image(&self, a: Sym) -> &Word {
        &self.rules[a as usize]
    }

    pub fn is_thue_morse(&self) -> bool {
        *self == Self::thue_morse()
    }

    /// `ζ(w)`.
    pub fn apply(&self, w: &[Sym]) -> Word {
        let mut out = Vec::with_capacity(w.len() * 2);
        for &a in w {
            out.extend_from_slice(&self.rules[a as usize]);
        }
        Word(out)
    }

    /// `ζᵖ(w)`.
    pub fn apply_power(&self, w: &[Sym], p: u32) -> Word {
        let mut cur = Word::from(w);
        for _ in 0..p {
            cur = self.apply(&cur);
        }
        cur
    }

    /// `|ζⁿ(α)|` for every letter, saturating at `u64::MAX`.
    pub fn image_lengths(&self, n: usize) -> Vec<u64> {
        let mut lens = vec![1u64; self.arity()];
        for _ in 0..n {
            lens = self
                .rules
                .iter()
                .map(|img| img.iter().fold(0u64, |acc, &b| acc.saturating_add(lens[b as usize])))
                .collect();
        }
        lens
    }

    /// `m_ij` = number of occurrences of `i` in `ζ(j)`.
    pub fn composition_matrix(&self) -> Matrix<u64> {
        let s = self.arity();
        let mut m = Matrix::zeros(s, s);
        for (j, img) in self.rules.iter().enumerate() {
            for &i in img.iter() {
                let v = *m.get(i as usize, j) + 1;
                m.set(i as usize, j, v);
            }
        }
        m
    }

    pub fn letter_counts(&self, w: &[Sym]) -> Vec<u64> {
        let mut c = vec![0u64; self.arity()];
        for &a in w {
            c[a as usize] += 1;
        }
        c
    }

    /// First `n` symbols of `ζ^∞(start)`.
    pub fn fixed_point_prefix(&self, n: usize) -> Word {
        let mut w = vec![self.start];
        while w.len() < n {
            let mut next = Vec::with_capacity((2 * w.len()).min(n + 64));
            for &a in &w {
                next.extend_from_slice(&self.rules[a as usize]);
                if next.len() >= n {
                    break;
                }
            }
            w = next;
        }
        w.truncate(n);
        Word(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn thue_morse_prefix() {
        let u = Substitution::thue_morse().fixed_point_prefix(12);
        assert_eq!(u.to_string(), "011010011001");
        assert_eq!(Substitution::thue_morse().fixed_point_prefix(1).0, vec![0]);
    }

    #[test]
    fn fibonacci_prefix() {
        assert_eq!(Substitution::fibonacci().fixed_point_prefix(8).to_string(), "01001010");
    }

    #[test]
    fn prefix_is_fixed() {
        for z in [Substitution::thue_morse(), Substitution::fibonacci()] {
            let u = z.fixed_point_prefix(500);
            let mut again = z.apply(&u);
            again.0.truncate(500);
            assert_eq!(again, u);
        }
    }

    #[test]
    fn composition_matrices() {
        assert_eq!(Substitution::thue_morse().composition_matrix().to_rows(), vec![vec![1, 1], vec![1, 1]]);
        assert_eq!(Substitution::fibonacci().composition_matrix().to_rows(), vec![vec![1, 1], vec![1, 0]]);
        let doubling = Substitution::new(vec![Word(vec![0, 0])], 0).unwrap();
        assert_eq!(doubling.composition_matrix().to_rows(), vec![vec![2]]);
    }

    #[test]
    fn counts_commute_with_matrix() {
        let z = Substitution::new(vec![Word(vec![0, 2, 1]), Word(vec![1, 0]), Word(vec![2, 2, 0])], 0).unwrap();
        let m = z.composition_matrix();
        let b = [0, 1, 1, 2, 0, 2, 2];
        assert_eq!(z.letter_counts(&z.apply(&b)), m.apply(&z.letter_counts(&b)));
    }

    #[test]
    fn validation() {
        assert!(Substitution::new(vec![Word(vec![0])], 0).is_err());
        assert!(Substitution::new(vec![Word(vec![1, 0]), Word(vec![0, 1])], 0).is_err());
        assert!(Substitution::new(vec![Word(vec![0, 2])], 0).is_err());
        assert!(Substitution::new(vec![Word(vec![]), Word(vec![0, 1])], 1).is_err());
        // ζ(1) = 1 never grows.
        assert!(Substitution::new(vec![Word(vec![0, 1]), Word(vec![1])], 0).is_err());
        // 0 → 1 → 22, 2 → 2: bounded (1 grows once, then never again).
        assert!(Substitution::new(vec![Word(vec![0, 1]), Word(vec![2, 2]), Word(vec![2])], 0).is_err());
        assert!(Substitution::from_strs(&["01", "10"], 0).unwrap().is_thue_morse());
    }

    #[test]
    fn growth_ratio_tends_to_theta() {
        let f = Substitution::fibonacci();
        let l20 = f.image_lengths(20);
        let l21 = f.image_lengths(21);
        let phi = (1.0 + libm::sqrt(5.0)) / 2.0;
        assert!((l21[0] as f64 / l20[0] as f64 - phi).abs() < 1e-6);
        let t = Substitution::thue_morse().image_lengths(20);
        assert_eq!(t, vec![1 << 20, 1 << 20]);
    }
}
