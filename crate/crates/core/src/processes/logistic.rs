use super::{check_sample_len, ClosedForm, ClosedForms, Sample};
use crate::infocore::{Sym, Word};
use crate::{Error, Result};

pub const DEFAULT_BURN_IN: usize = 1000;

/// Binary symbolization of the logistic map `x ↦ r x (1 − x)`:
/// symbol 0 when `x ≤ 1/2`, symbol 1 otherwise.
///
/// Iterated in plain `f64`; long orbits in the chaotic regime are
/// numerical pseudo-orbits, not true ones.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogisticSymbolizer {
    r: f64,
    x0: f64,
    burn_in: usize,
}

impl LogisticSymbolizer {
    pub fn new(r: f64, x0: f64) -> Result<Self> {
        if !(0.0..=4.0).contains(&r) {
            return Err(Error::InvalidParameter(alloc::format!("r must lie in [0, 4], got {r}")));
        }
        if !(0.0..=1.0).contains(&x0) {
            return Err(Error::InvalidParameter(alloc::format!("x0 must lie in [0, 1], got {x0}")));
        }
        Ok(LogisticSymbolizer { r, x0, burn_in: DEFAULT_BURN_IN })
    }

    pub fn with_burn_in(mut self, burn_in: usize) -> Self {
        self.burn_in = burn_in;
        self
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn burn_in(&self) -> usize {
        self.burn_in
    }

    fn step(&self, x: f64) -> f64 {
        self.r * x * (1.0 - x)
    }

    pub fn symbol(x: f64) -> Sym {
        if x <= 0.5 {
            0
        } else {
            1
        }
    }

    /// `n` symbols after discarding the burn-in iterates.
    pub fn symbols(&self, n: usize) -> Word {
        let mut x = self.x0;
        for _ in 0..self.burn_in {
            x = self.step(x);
        }
        let mut out = alloc::vec::Vec::with_capacity(n);
        for _ in 0..n {
            out.push(Self::symbol(x));
            x = self.step(x);
        }
        Word(out)
    }
}

impl Sample for LogisticSymbolizer {
    /// The map is deterministic; the seed is ignored.
    fn sample(&self, n: usize, _seed: u64) -> Result<Word> {
        check_sample_len(n)?;
        Ok(self.symbols(n))
    }
}

impl ClosedForm for LogisticSymbolizer {
    fn closed_forms(&self) -> Result<ClosedForms> {
        Err(Error::NoClosedForm("logistic map".into()))
    }
}
