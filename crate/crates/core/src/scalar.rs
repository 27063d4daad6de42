//! Numeric backends.
//!
//! Probabilities are either `f64` or exact [`Rational`]s. Information
//! quantities have their own type per backend: `f64` bits for the float
//! backend, [`LogSum`] for the exact one. A rational probability `p` has
//! `log₂ p = e₂ + Σ e_q·log₂ q` over its odd prime factors `q`, so every
//! entropy of a rational distribution is a finite rational combination of
//! `1` and `log₂ q` terms and can be compared for exact equality.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Trial division stops here; any cofactor left over becomes its own log atom.
const TRIAL_DIVISION_LIMIT: u64 = 1 << 20;

/// A probability value.
pub trait Prob: num_traits::Num + Signed + Clone + PartialOrd + fmt::Debug + fmt::Display + Send + Sync {
    type Info: Info;

    /// True for backends that never round.
    const EXACT: bool;

    fn from_ratio(num: u64, den: u64) -> Self;
    fn to_f64(&self) -> f64;
    /// `-p log₂ p`, zero at `p = 0`.
    fn entropy_term(&self) -> Self::Info;
    /// `p log₂ (p / q)`, zero at `p = 0`.
    fn divergence_term(&self, q: &Self) -> Self::Info;
    /// Equality up to `tol` on the float backend, exact equality otherwise.
    fn close_to(&self, other: &Self, tol: f64) -> bool;
    /// `p · h` for an information value `h`.
    fn weight(&self, h: &Self::Info) -> Self::Info;
}

/// An information quantity in bits.
pub trait Info:
    Clone + fmt::Debug + fmt::Display + PartialEq + Add<Output = Self> + Sub<Output = Self> + Neg<Output = Self> + Send + Sync
{
    fn zero() -> Self;
    fn to_f64(&self) -> f64;
    fn mul_int(&self, k: i64) -> Self;
    fn is_zero(&self) -> bool;
}

impl Prob for f64 {
    type Info = f64;
    const EXACT: bool = false;

    fn from_ratio(num: u64, den: u64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn entropy_term(&self) -> f64 {
        if *self <= 0.0 {
            0.0
        } else {
            -*self * libm::log2(*self)
        }
    }

    fn divergence_term(&self, q: &f64) -> f64 {
        if *self <= 0.0 {
            0.0
        } else {
            *self * libm::log2(*self / *q)
        }
    }

    fn close_to(&self, other: &f64, tol: f64) -> bool {
        (self - other).abs() <= tol
    }

    fn weight(&self, h: &f64) -> f64 {
        self * h
    }
}

impl Info for f64 {
    fn zero() -> Self {
        0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn mul_int(&self, k: i64) -> Self {
        self * k as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}

impl Prob for Rational {
    type Info = LogSum;
    const EXACT: bool = true;

    fn from_ratio(num: u64, den: u64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }

    fn entropy_term(&self) -> LogSum {
        if self.is_zero() {
            return LogSum::zero();
        }
        -LogSum::log2(self).scale(self)
    }

    fn divergence_term(&self, q: &Rational) -> LogSum {
        if self.is_zero() {
            return LogSum::zero();
        }
        LogSum::log2(&(self / q)).scale(self)
    }

    fn close_to(&self, other: &Rational, _tol: f64) -> bool {
        self == other
    }

    fn weight(&self, h: &LogSum) -> LogSum {
        h.scale(self)
    }
}

fn ratio_to_f64(r: &Rational) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(r) {
        if v.is_finite() {
            return v;
        }
    }
    // Very large numerators/denominators: compare magnitudes via bit lengths.
    let n = r.numer();
    let d = r.denom();
    let shift = n.bits() as i64 - d.bits() as i64;
    let scaled = if shift > 0 {
        Rational::new(n.clone(), d.clone() << (shift as usize))
    } else {
        Rational::new(n.clone() << ((-shift) as usize), d.clone())
    };
    ToPrimitive::to_f64(&scaled).unwrap_or(0.0) * libm::pow(2.0, shift as f64)
}

/// Exact value `rational + Σ coefficient(q)·log₂ q`.
///
/// Keys are odd primes, except that a cofactor surviving trial division up to
/// 2²⁰ is stored as a single atom. Zero coefficients are never stored, so
/// structural equality is value equality whenever every key is prime.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LogSum {
    rational: Rational,
    logs: BTreeMap<BigUint, Rational>,
}

impl LogSum {
    pub fn from_rational(r: Rational) -> Self {
        LogSum { rational: r, logs: BTreeMap::new() }
    }

    /// `a + b·log₂3`.
    pub fn from_parts(a: Rational, b: Rational) -> Self {
        let mut out = LogSum::from_rational(a);
        out.add_log(BigUint::from(3u8), b);
        out
    }

    /// Exact `log₂ r` for a positive rational.
    pub fn log2(r: &Rational) -> Self {
        assert!(r.is_positive(), "log2 of a non-positive rational");
        let mut out = LogSum::zero();
        for (atom, exp) in factorize(r.numer().magnitude()) {
            out.add_atom(atom, Rational::from_integer(BigInt::from(exp)));
        }
        for (atom, exp) in factorize(r.denom().magnitude()) {
            out.add_atom(atom, Rational::from_integer(-BigInt::from(exp)));
        }
        out
    }

    fn add_atom(&mut self, atom: BigUint, coef: Rational) {
        if atom == BigUint::from(2u8) {
            self.rational += coef;
        } else {
            self.add_log(atom, coef);
        }
    }

    fn add_log(&mut self, atom: BigUint, coef: Rational) {
        if coef.is_zero() {
            return;
        }
        let entry = self.logs.entry(atom.clone()).or_insert_with(Rational::zero);
        *entry += coef;
        if entry.is_zero() {
            self.logs.remove(&atom);
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return LogSum::zero();
        }
        LogSum {
            rational: &self.rational * k,
            logs: self.logs.iter().map(|(q, c)| (q.clone(), c * k)).collect(),
        }
    }

    /// The pure rational part `a`.
    pub fn rational_part(&self) -> &Rational {
        &self.rational
    }

    /// Coefficient of `log₂ q`.
    pub fn log_coefficient(&self, q: u64) -> Rational {
        self.logs.get(&BigUint::from(q)).cloned().unwrap_or_else(Rational::zero)
    }

    /// `Some((a, b))` when the value is `a + b·log₂3` with no other atoms.
    pub fn as_log3_pair(&self) -> Option<(Rational, Rational)> {
        let three = BigUint::from(3u8);
        if self.logs.keys().any(|k| *k != three) {
            return None;
        }
        Some((self.rational.clone(), self.log_coefficient(3)))
    }

    /// True when no logarithm terms remain.
    pub fn is_rational(&self) -> bool {
        self.logs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &Rational)> {
        self.logs.iter()
    }
}

impl Info for LogSum {
    fn zero() -> Self {
        LogSum { rational: Rational::zero(), logs: BTreeMap::new() }
    }

    fn to_f64(&self) -> f64 {
        let mut v = ratio_to_f64(&self.rational);
        for (q, c) in &self.logs {
            let lq = match q.to_f64() {
                Some(f) if f.is_finite() => libm::log2(f),
                _ => q.bits() as f64,
            };
            v += ratio_to_f64(c) * lq;
        }
        v
    }

    fn mul_int(&self, k: i64) -> Self {
        self.scale(&Rational::from_integer(BigInt::from(k)))
    }

    fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.logs.is_empty()
    }
}

impl Add for LogSum {
    type Output = LogSum;
    fn add(mut self, rhs: LogSum) -> LogSum {
        self.rational += rhs.rational;
        for (q, c) in rhs.logs {
            self.add_log(q, c);
        }
        self
    }
}

impl Sub for LogSum {
    type Output = LogSum;
    fn sub(self, rhs: LogSum) -> LogSum {
        self + (-rhs)
    }
}

impl Neg for LogSum {
    type Output = LogSum;
    fn neg(self) -> LogSum {
        LogSum {
            rational: -self.rational,
            logs: self.logs.into_iter().map(|(q, c)| (q, -c)).collect(),
        }
    }
}

impl fmt::Display for LogSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        if !self.rational.is_zero() || self.logs.is_empty() {
            write!(f, "{}", self.rational)?;
            wrote = true;
        }
        for (q, c) in &self.logs {
            if wrote {
                if c.is_negative() {
                    write!(f, " - {}·log2({})", -c, q)?;
                } else {
                    write!(f, " + {}·log2({})", c, q)?;
                }
            } else {
                write!(f, "{}·log2({})", c, q)?;
                wrote = true;
            }
        }
        Ok(())
    }
}

fn factorize(n: &BigUint) -> BTreeMap<BigUint, u64> {
    let mut out = BTreeMap::new();
    if n.is_zero() || n.is_one() {
        return out;
    }
    if let Some(small) = n.to_u64() {
        let mut m = small;
        let mut d = 2u64;
        while d.saturating_mul(d) <= m && d <= TRIAL_DIVISION_LIMIT {
            while m % d == 0 {
                *out.entry(BigUint::from(d)).or_insert(0) += 1;
                m /= d;
            }
            d += if d == 2 { 1 } else { 2 };
        }
        if m > 1 {
            *out.entry(BigUint::from(m)).or_insert(0) += 1;
        }
        return out;
    }
    let mut m = n.clone();
    let mut d = 2u64;
    while d <= TRIAL_DIVISION_LIMIT {
        let bd = BigUint::from(d);
        if &bd * &bd > m {
            break;
        }
        loop {
            let (q, r) = m.div_rem(&bd);
            if !r.is_zero() {
                break;
            }
            *out.entry(bd.clone()).or_insert(0) += 1;
            m = q;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        *out.entry(m).or_insert(0) += 1;
    }
    out
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"0.9"` or
/// `"1.5e-3"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::InvalidParameter(alloc::format!("not a rational number: {t:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (Sign::Minus, rest),
        None => (Sign::Plus, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let mut all = String::from(int_part);
    all.push_str(frac_part);
    if !all.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let magnitude: BigUint = if all.is_empty() { BigUint::zero() } else { all.parse().map_err(|_| bad())? };
    let scale = exponent - frac_part.len() as i64;
    let ten = BigUint::from(10u8);
    let value = if scale >= 0 {
        Rational::from_integer(BigInt::from_biguint(sign, magnitude * num_traits::pow(ten, scale as usize)))
    } else {
        Rational::new(
            BigInt::from_biguint(sign, magnitude),
            BigInt::from(num_traits::pow(ten, (-scale) as usize)),
        )
    };
    Ok(value)
}

/// Renders a rational as `"p/q"` (or `"p"` for integers).
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn log2_of_dyadic_is_rational() {
        let l = LogSum::log2(&q(1, 8));
        assert!(l.is_rational());
        assert_eq!(*l.rational_part(), q(-3, 1));
    }

    #[test]
    fn log2_of_sixth() {
        let l = LogSum::log2(&q(1, 6));
        assert_eq!(l.as_log3_pair(), Some((q(-1, 1), q(-1, 1))));
        assert!((l.to_f64() + libm::log2(6.0)).abs() < 1e-15);
    }

    #[test]
    fn entropy_terms_cancel_exactly() {
        let a = q(1, 3).entropy_term() + q(1, 3).entropy_term();
        assert_eq!(a, q(1, 3).entropy_term().mul_int(2));
        assert_eq!(a, LogSum::from_parts(q(0, 1), q(2, 3)));
        let b = q(2, 3).entropy_term() + q(1, 3).entropy_term() - q(2, 3).entropy_term();
        assert_eq!(b, q(1, 3).entropy_term());
    }

    #[test]
    fn parse_decimals_exactly() {
        assert_eq!(parse_rational("0.9").unwrap(), q(9, 10));
        assert_eq!(parse_rational("3/7").unwrap(), q(3, 7));
        assert_eq!(parse_rational("-1.5e-1").unwrap(), q(-3, 20));
        assert_eq!(parse_rational("2").unwrap(), q(2, 1));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn display_log_sum() {
        let v = LogSum::from_parts(q(-2, 3), q(1, 1));
        assert_eq!(alloc::format!("{v}"), "-2/3 + 1·log2(3)");
    }

    #[test]
    fn huge_ratio_to_f64() {
        let big = BigInt::from(10u8).pow(400u32);
        let r = Rational::new(big.clone() * 3, big);
        assert!((ratio_to_f64(&r) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn factorize_composites() {
        let f = factorize(&BigUint::from(360u32));
        assert_eq!(f.get(&BigUint::from(2u8)), Some(&3));
        assert_eq!(f.get(&BigUint::from(3u8)), Some(&2));
        assert_eq!(f.get(&BigUint::from(5u8)), Some(&1));
    }
}
