use num_bigint::BigInt;

use super::induced::factor_set;
use super::Substitution;
use crate::infocore::Sym;
use crate::scalar::{LogSum, Rational};
use crate::{Error, Result};

/// Blocks that never occur in the Thue-Morse sequence.
pub const FORBIDDEN_WORDS: [&[Sym]; 4] = [&[0, 0, 0], &[1, 1, 1], &[0, 1, 0, 1, 0], &[1, 0, 1, 0, 1]];

/// Number of distinct length-`n` factors of the fixed point.
pub fn complexity_function(z: &Substitution, n: usize) -> Result<usize> {
    Ok(factor_set(z, n)?.len())
}

/// `k` with `2^k + 1 ≤ n ≤ 2^{k+1}`, for `n ≥ 2`.
fn dyadic_level(n: usize) -> u32 {
    (usize::BITS - 1) - (n - 1).leading_zeros()
}

/// Whether `n` lies in the first half `2^k + 1 ≤ n ≤ 3·2^{k−1}` of its
/// dyadic block (never true for `n ≤ 2`).
fn in_first_half(n: usize) -> bool {
    if n < 3 {
        return false;
    }
    let k = dyadic_level(n);
    n <= 3 << (k - 1)
}

/// `p(n+1) − p(n)` for Thue-Morse: 4 on the first half of each dyadic block
/// `2^k + 1 ≤ n ≤ 3·2^{k−1}`, 2 elsewhere.
pub fn thue_morse_complexity_increment(n: usize) -> usize {
    if in_first_half(n) {
        4
    } else {
        2
    }
}

/// Exact `ΔH(n) = H(n) − H(n−1)` of Thue-Morse in bits.
///
/// The increment is carried by the right special factors of length
/// `m = n − 1`: each of the `p(m+1) − p(m)` of them has frequency
/// `1/(3·2^k)` with `2^k + 1 ≤ m ≤ 2^{k+1}` and contributes `1/(3·2^k)`
/// bits. Hence `ΔH(n) = 4/(3·2^k)` when `2^k + 1 ≤ n − 1 ≤ 3·2^{k−1}` and
/// `2/(3·2^k)` when `3·2^{k−1} + 1 ≤ n − 1 ≤ 2^{k+1}`; `ΔH(3) = 2/3` (two
/// special factors of length 2 with frequency 1/3) and
/// `ΔH(2) = log₂3 − 2/3`.
pub fn thue_morse_block_entropy_increment(n: usize) -> Result<LogSum> {
    if n < 2 {
        return Err(Error::InvalidParameter(alloc::format!("ΔH(n) needs n >= 2, got {n}")));
    }
    if n == 2 {
        return Ok(LogSum::from_parts(Rational::new(BigInt::from(-2), BigInt::from(3)), Rational::from_integer(1.into())));
    }
    let m = n - 1;
    let (numer, k) = if m == 2 { (2, 0) } else { (thue_morse_complexity_increment(m), dyadic_level(m)) };
    let denom = BigInt::from(3) * (BigInt::from(1) << k as usize);
    Ok(LogSum::from_rational(Rational::new(BigInt::from(numer), denom)))
}

/// True iff none of [`FORBIDDEN_WORDS`] occurs in `prefix`.
pub fn forbidden_words_check(prefix: &[Sym]) -> bool {
    FORBIDDEN_WORDS.iter().all(|f| !prefix.windows(f.len()).any(|w| w == *f))
}
