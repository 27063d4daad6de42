use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::linalg::{self, Matrix};
use crate::scalar::{Prob, Rational};
use crate::{Error, Result};

const POWER_TOL: f64 = 1e-14;
const POWER_MAX_ITER: usize = 100_000;

/// A probability vector, exact when the spectral data allowed it.
#[derive(Clone, Debug, PartialEq)]
pub enum Frequencies {
    Exact(Vec<Rational>),
    Float(Vec<f64>),
}

impl Frequencies {
    pub fn len(&self) -> usize {
        match self {
            Frequencies::Exact(v) => v.len(),
            Frequencies::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Frequencies::Exact(_))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Frequencies::Exact(v) => v.iter().map(Prob::to_f64).collect(),
            Frequencies::Float(v) => v.clone(),
        }
    }

    pub fn exact(&self) -> Option<&[Rational]> {
        match self {
            Frequencies::Exact(v) => Some(v),
            Frequencies::Float(_) => None,
        }
    }
}

/// Perron-Frobenius data of an irreducible nonnegative integer matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct PerronFrobeniusData {
    /// Leading eigenvalue `Θ`.
    pub theta: f64,
    /// `Θ` when it is an integer (the only possible rational case).
    pub exact_theta: Option<u64>,
    /// Positive eigenvector normalised to sum 1.
    pub vector: Frequencies,
    pub primitive: bool,
    /// 1 for primitive matrices.
    pub period: usize,
}

/// Primitivity test (boolean powers up to the Wielandt bound), period and
/// Perron eigenpair. Reducible matrices are rejected.
///
/// The characteristic polynomial of an integer matrix is monic with integer
/// coefficients, so a rational `Θ` must be an integer. The float estimate is
/// rounded and accepted when `M − ΘI` has a positive rational kernel vector;
/// otherwise the eigenvector comes from power iteration.
pub fn primitivity(m: &Matrix<u64>) -> Result<PerronFrobeniusData> {
    let n = m.rows();
    if n == 0 || n != m.cols() {
        return Err(Error::InvalidParameter("primitivity needs a nonempty square matrix".into()));
    }
    let pattern = linalg::support(m);
    if !linalg::is_irreducible(&pattern) {
        return Err(Error::Reducible);
    }
    let primitive = linalg::is_primitive(&pattern);
    let period = if primitive { 1 } else { linalg::period(&pattern) };
    let mf = m.map(|&x| x as f64);
    let (theta, float_vec, _) = linalg::perron_vector(&mf, POWER_TOL, POWER_MAX_ITER);
    let rounded = libm::round(theta);
    if (theta - rounded).abs() < 1e-6 && rounded >= 1.0 {
        let t = rounded as u64;
        if let Some(v) = exact_kernel_vector(m, t) {
            return Ok(PerronFrobeniusData {
                theta: t as f64,
                exact_theta: Some(t),
                vector: Frequencies::Exact(v),
                primitive,
                period,
            });
        }
    }
    let residual = mf
        .apply(&float_vec)
        .iter()
        .zip(&float_vec)
        .map(|(a, b)| (a - theta * b).abs())
        .fold(0.0, f64::max);
    if residual > 1e-10 {
        return Err(Error::Inconsistent(alloc::format!("power iteration residual {residual:e}")));
    }
    Ok(PerronFrobeniusData { theta, exact_theta: None, vector: Frequencies::Float(float_vec), primitive, period })
}

/// The unique positive probability vector in `ker(M − tI)`, if any.
fn exact_kernel_vector(m: &Matrix<u64>, t: u64) -> Option<Vec<Rational>> {
    let n = m.rows();
    let mut a: Matrix<Rational> = m.map(|&x| Rational::from_integer(BigInt::from(x)));
    for i in 0..n {
        let v = a.get(i, i).clone() - Rational::from_integer(BigInt::from(t));
        a.set(i, i, v);
    }
    let basis = linalg::nullspace(&a);
    if basis.len() != 1 {
        return None;
    }
    let v = &basis[0];
    let sum = v.iter().fold(Rational::zero(), |acc, x| acc + x);
    if sum.is_zero() {
        return None;
    }
    let v: Vec<Rational> = v.iter().map(|x| x / &sum).collect();
    if v.iter().any(|x| !x.is_positive()) {
        return None;
    }
    debug_assert!(v.iter().fold(Rational::zero(), |a, x| a + x).is_one());
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn thue_morse_matrix() {
        let pf = primitivity(&Matrix::from_rows(vec![vec![1, 1], vec![1, 1]])).unwrap();
        assert!(pf.primitive);
        assert_eq!(pf.exact_theta, Some(2));
        assert_eq!(pf.vector, Frequencies::Exact(vec![q(1, 2), q(1, 2)]));
    }

    #[test]
    fn swap_has_period_two() {
        let pf = primitivity(&Matrix::from_rows(vec![vec![0, 1], vec![1, 0]])).unwrap();
        assert!(!pf.primitive);
        assert_eq!(pf.period, 2);
        assert_eq!(pf.exact_theta, Some(1));
    }

    #[test]
    fn fibonacci_is_golden() {
        let pf = primitivity(&Matrix::from_rows(vec![vec![1, 1], vec![1, 0]])).unwrap();
        let phi = (1.0 + libm::sqrt(5.0)) / 2.0;
        assert!(pf.primitive);
        assert!((pf.theta - phi).abs() < 1e-12);
        assert_eq!(pf.exact_theta, None);
        let v = pf.vector.to_f64();
        // Letter frequencies (1/φ, 1/φ²).
        assert!((v[0] - 1.0 / phi).abs() < 1e-12);
    }

    #[test]
    fn reducible_is_rejected() {
        assert_eq!(primitivity(&Matrix::from_rows(vec![vec![1, 1], vec![0, 1]])), Err(Error::Reducible));
    }

    #[test]
    fn three_cycle_period() {
        let m = Matrix::from_rows(vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(primitivity(&m).unwrap().period, 3);
    }
}
