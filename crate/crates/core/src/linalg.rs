//! Small dense linear algebra over `f64`, exact rationals and integers.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul};

use num_traits::{One, Zero};

use crate::scalar::Prob;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn map<U: Clone + Zero>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + One + Add<Output = T> + Mul<Output = T>,
{
    pub fn mul(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out: Matrix<T> = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    /// Row vector times matrix.
    pub fn apply_left(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.rows, v.len(), "dimension mismatch");
        let mut out = vec![T::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o = o.clone() + vi.clone() * a.clone();
                }
            }
        }
        out
    }

    /// `self^k` by repeated squaring.
    pub fn pow(&self, mut k: u64) -> Matrix<T> {
        assert_eq!(self.rows, self.cols, "power of a non-square matrix");
        let mut result = Matrix::identity(self.rows);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting. Returns
/// `None` for singular systems (pivot below `1e-13` relative on floats, exact
/// zero on rationals).
pub fn solve<P: Prob>(a: &Matrix<P>, b: &[P]) -> Option<Vec<P>> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "solve needs a square matrix");
    assert_eq!(n, b.len(), "dimension mismatch");
    let mut m: Vec<Vec<P>> = a.to_rows();
    for (row, bi) in m.iter_mut().zip(b) {
        row.push(bi.clone());
    }
    let scale = m.iter().flatten().map(|x| x.abs().to_f64()).fold(0.0, f64::max).max(1.0);
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap_or(core::cmp::Ordering::Equal)
        })?;
        let mag = m[pivot][col].abs();
        if mag.is_zero() || (!P::EXACT && mag.to_f64() <= 1e-13 * scale) {
            return None;
        }
        m.swap(col, pivot);
        let inv = P::one() / m[col][col].clone();
        for j in col..=n {
            m[col][j] = m[col][j].clone() * inv.clone();
        }
        for i in 0..n {
            if i == col || m[i][col].is_zero() {
                continue;
            }
            let f = m[i][col].clone();
            for j in col..=n {
                let v = m[col][j].clone();
                m[i][j] = m[i][j].clone() - f.clone() * v;
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Basis of the right nullspace `{x : A x = 0}` via reduced row echelon form.
/// Intended for the exact backend.
pub fn nullspace<P: Prob>(a: &Matrix<P>) -> Vec<Vec<P>> {
    let (rows, cols) = (a.rows(), a.cols());
    let mut m = a.to_rows();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = P::one() / m[r][c].clone();
        for j in c..cols {
            m[r][j] = m[r][j].clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let v = m[r][j].clone();
                    m[i][j] = m[i][j].clone() - f.clone() * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![P::zero(); cols];
            x[f] = P::one();
            for (row, &pc) in pivots.iter().enumerate() {
                x[pc] = -m[row][f].clone();
            }
            x
        })
        .collect()
}

/// Power iteration for the dominant eigenpair of a nonnegative matrix.
/// Iterates on `M + I`, which has the same eigenvectors and is aperiodic
/// whenever `M` is irreducible. The returned vector sums to one.
pub fn perron_vector(m: &Matrix<f64>, tol: f64, max_iter: usize) -> (f64, Vec<f64>, bool) {
    let n = m.rows();
    let mut v = vec![1.0 / n as f64; n];
    let mut converged = false;
    for _ in 0..max_iter {
        let mut next = m.apply(&v);
        for (x, vi) in next.iter_mut().zip(&v) {
            *x += vi;
        }
        let s: f64 = next.iter().sum();
        if s <= 0.0 {
            break;
        }
        for x in &mut next {
            *x /= s;
        }
        let diff = next.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        v = next;
        if diff <= tol {
            converged = true;
            break;
        }
    }
    let mv = m.apply(&v);
    let theta = mv.iter().sum::<f64>() / v.iter().sum::<f64>();
    (theta, v, converged)
}

/// Boolean pattern `A[i][j] = m[i][j] > 0`.
pub fn support<T: Clone + Zero>(m: &Matrix<T>) -> Matrix<bool> {
    let mut out = Matrix { rows: m.rows(), cols: m.cols(), data: vec![false; m.rows() * m.cols()] };
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.data[i * m.cols() + j] = !m.get(i, j).is_zero();
        }
    }
    out
}

fn bool_mul(a: &Matrix<bool>, b: &Matrix<bool>) -> Matrix<bool> {
    let n = a.rows;
    let mut out = Matrix { rows: n, cols: b.cols, data: vec![false; n * b.cols] };
    for i in 0..n {
        for k in 0..a.cols {
            if a.data[i * a.cols + k] {
                for j in 0..b.cols {
                    if b.data[k * b.cols + j] {
                        out.data[i * b.cols + j] = true;
                    }
                }
            }
        }
    }
    out
}

/// Strong connectivity of the directed graph `i → j` iff `m[i][j] > 0`.
pub fn is_irreducible(pattern: &Matrix<bool>) -> bool {
    let n = pattern.rows;
    if n == 0 {
        return false;
    }
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                let edge = if forward { pattern.data[u * n + v] } else { pattern.data[v * n + u] };
                if edge && !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach(true) && reach(false)
}

/// Primitivity: the boolean power at the Wielandt bound `(n−1)²+1` is
/// strictly positive.
pub fn is_primitive(pattern: &Matrix<bool>) -> bool {
    let n = pattern.rows;
    if n == 0 {
        return false;
    }
    let mut k = ((n - 1) * (n - 1) + 1) as u64;
    let mut result: Option<Matrix<bool>> = None;
    let mut base = pattern.clone();
    while k > 0 {
        if k & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => bool_mul(&r, &base),
            });
        }
        k >>= 1;
        if k > 0 {
            base = bool_mul(&base, &base);
        }
    }
    result.is_some_and(|r| r.data.iter().all(|&b| b))
}

/// Period of an irreducible pattern: gcd of `level(u) + 1 − level(v)` over
/// all edges, with BFS levels from vertex 0.
pub fn period(pattern: &Matrix<bool>) -> usize {
    let n = pattern.rows;
    let mut level = vec![usize::MAX; n];
    level[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for v in 0..n {
            if pattern.data[u * n + v] && level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    let mut g = 0usize;
    for u in 0..n {
        for v in 0..n {
            if pattern.data[u * n + v] && level[u] != usize::MAX && level[v] != usize::MAX {
                let diff = (level[u] as i64 + 1 - level[v] as i64).unsigned_abs() as usize;
                g = num_integer::gcd(g, diff);
            }
        }
    }
    g
}

/// Eigenvalues of a real 2×2 matrix `[[a, b], [c, d]]`, larger real part
/// first; `None` when they are complex.
pub fn eigenvalues_2x2(a: f64, b: f64, c: f64, d: f64) -> Option<(f64, f64)> {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = tr * tr / 4.0 - det;
    if disc < 0.0 {
        return None;
    }
    let s = libm::sqrt(disc);
    Some((tr / 2.0 + s, tr / 2.0 - s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_bigint::BigInt;

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    #[test]
    fn solve_small_system() {
        let a = Matrix::from_rows(vec![vec![2.0, 1.0], vec![1.0, 3.0]]);
        let x = solve(&a, &[3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-14 && (x[1] - 1.4).abs() < 1e-14);
        let s = Matrix::from_rows(vec![vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(solve(&s, &[1.0, 2.0]).is_none());
    }

    #[test]
    fn exact_nullspace() {
        let a = Matrix::from_rows(vec![vec![q(1), q(-1)], vec![q(-2), q(2)]]);
        let ns = nullspace(&a);
        assert_eq!(ns, vec![vec![q(1), q(1)]]);
    }

    #[test]
    fn integer_powers() {
        let fib = Matrix::from_rows(vec![vec![1u64, 1], vec![1, 0]]);
        assert_eq!(*fib.pow(10).get(0, 1), 55);
    }

    #[test]
    fn primitivity_and_period() {
        let swap = support(&Matrix::from_rows(vec![vec![0u64, 1], vec![1, 0]]));
        assert!(is_irreducible(&swap));
        assert!(!is_primitive(&swap));
        assert_eq!(period(&swap), 2);
        let fib = support(&Matrix::from_rows(vec![vec![1u64, 1], vec![1, 0]]));
        assert!(is_primitive(&fib));
        assert_eq!(period(&fib), 1);
        let upper = support(&Matrix::from_rows(vec![vec![1u64, 1], vec![0, 1]]));
        assert!(!is_irreducible(&upper));
    }

    #[test]
    fn perron_of_swap_matrix() {
        let swap = Matrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        let (theta, v, ok) = perron_vector(&swap, 1e-14, 1000);
        assert!(ok);
        assert!((theta - 1.0).abs() < 1e-12);
        assert!((v[0] - 0.5).abs() < 1e-12);
    }
}
