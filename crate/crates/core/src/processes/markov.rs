use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::{
    check_block_length, check_sample_len, check_window_cap, draw, efficiency_ratio, rng_from_seed, to_f64_vec,
    BlockSource, ClosedForm, ClosedForms, Quantity, Sample, TimeReversal, DEFAULT_WINDOW_CAP,
};
use crate::infocore::{state_count, BlockDistribution, JointBlockDistribution, Sym, Word};
use crate::linalg::{self, Matrix};
use crate::scalar::{Info, Prob};
use crate::{Error, Result};

/// Markov process of order `R` over `s` symbols.
///
/// Contexts are the last `R` symbols, packed base `s` with the oldest symbol
/// most significant; `kernel[c][x]` is `Pr(next = x | context = c)`.
/// Order 0 is the i.i.d. case with a single empty context.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkovProcess<P> {
    arity: usize,
    order: usize,
    kernel: Vec<Vec<P>>,
    stationary: Vec<P>,
    window_cap: u64,
}

impl<P: Prob> MarkovProcess<P> {
    pub fn new(arity: usize, order: usize, kernel: Vec<Vec<P>>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidModel("empty alphabet".into()));
        }
        let contexts = state_count(arity, order);
        if contexts > (1u128 << 24) {
            return Err(Error::InvalidModel("too many contexts".into()));
        }
        if kernel.len() as u128 != contexts {
            return Err(Error::InvalidModel(alloc::format!(
                "kernel has {} rows, expected {contexts}",
                kernel.len()
            )));
        }
        for (c, row) in kernel.iter().enumerate() {
            if row.len() != arity {
                return Err(Error::InvalidModel(alloc::format!("row {c} has {} entries", row.len())));
            }
            if row.iter().any(|p| p.is_negative()) {
                return Err(Error::InvalidModel(alloc::format!("row {c} has a negative entry")));
            }
            let sum = row.iter().fold(P::zero(), |a, p| a + p.clone());
            if !sum.close_to(&P::one(), 1e-12) {
                return Err(Error::InvalidModel(alloc::format!("row {c} sums to {}", sum.to_f64())));
            }
        }
        let mut m = MarkovProcess { arity, order, kernel, stationary: Vec::new(), window_cap: DEFAULT_WINDOW_CAP };
        m.stationary = m.solve_stationary()?;
        Ok(m)
    }

    pub fn with_window_cap(mut self, cap: u64) -> Self {
        self.window_cap = cap;
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn kernel(&self) -> &[Vec<P>] {
        &self.kernel
    }

    /// Stationary law of the context `S_{t−R} … S_{t−1}`.
    pub fn stationary(&self) -> &[P] {
        &self.stationary
    }

    pub fn context_count(&self) -> usize {
        self.kernel.len()
    }

    fn next_context(&self, c: usize, x: Sym) -> usize {
        if self.order == 0 {
            0
        } else {
            (c * self.arity + x as usize) % self.kernel.len()
        }
    }

    pub fn context_word(&self, mut c: usize) -> Word {
        let mut w = vec![0; self.order];
        for slot in w.iter_mut().rev() {
            *slot = (c % self.arity) as Sym;
            c /= self.arity;
        }
        Word(w)
    }

    pub fn context_index(&self, w: &[Sym]) -> usize {
        w.iter().fold(0, |acc, &x| acc * self.arity + x as usize)
    }

    /// Transition matrix of the induced chain on contexts.
    pub fn context_chain(&self) -> Matrix<P> {
        let n = self.kernel.len();
        let mut t: Matrix<P> = Matrix::zeros(n, n);
        for (c, row) in self.kernel.iter().enumerate() {
            for (x, p) in row.iter().enumerate() {
                let d = self.next_context(c, x as Sym);
                let v = t.get(c, d).clone() + p.clone();
                t.set(c, d, v);
            }
        }
        t
    }

    fn solve_stationary(&self) -> Result<Vec<P>> {
        let n = self.kernel.len();
        if n == 1 {
            return Ok(vec![P::one()]);
        }
        let t = self.context_chain();
        // (Tᵀ − I) π = 0 with the last equation replaced by Σ π = 1.
        let mut a = t.transpose();
        for i in 0..n {
            let v = a.get(i, i).clone() - P::one();
            a.set(i, i, v);
        }
        for j in 0..n {
            a.set(n - 1, j, P::one());
        }
        let mut b = vec![P::zero(); n];
        b[n - 1] = P::one();
        let solved = linalg::solve(&a, &b).filter(|pi| P::EXACT || stationary_residual(&t, pi) <= 1e-12);
        match solved {
            Some(mut pi) => {
                if !P::EXACT {
                    clean_float(&mut pi);
                }
                if pi.iter().any(|p| p.is_negative()) {
                    return Err(Error::NonUniqueStationary);
                }
                Ok(pi)
            }
            None if P::EXACT => Err(Error::NonUniqueStationary),
            None => Ok(power_stationary(&t)),
        }
    }

    /// `Σ_c π(c) H(kernel[c])`, the conditional entropy `H(S_R | S_0^{R−1})`.
    pub fn entropy_rate(&self) -> P::Info {
        self.kernel.iter().zip(&self.stationary).fold(P::Info::zero(), |acc, (row, pi)| {
            let h = row.iter().fold(P::Info::zero(), |a, p| a + p.entropy_term());
            acc + pi.weight(&h)
        })
    }

    /// `Pr(b | context c)` for every length-`len` continuation `b`.
    fn continuations(&self, c: usize, len: usize) -> Vec<(Word, usize, P)> {
        let mut out = Vec::new();
        let mut stack = vec![(Vec::with_capacity(len), c, P::one())];
        while let Some((w, ctx, p)) = stack.pop() {
            if w.len() == len {
                out.push((Word(w), ctx, p));
                continue;
            }
            for (x, q) in self.kernel[ctx].iter().enumerate() {
                if q.is_zero() {
                    continue;
                }
                let mut w2 = w.clone();
                w2.push(x as Sym);
                stack.push((w2, self.next_context(ctx, x as Sym), p.clone() * q.clone()));
            }
        }
        out
    }

    /// `Pr(S_0^{L−1} = a, context after a = c)` for every word `a`.
    fn forward_vectors(&self, len: usize) -> BTreeMap<Word, BTreeMap<usize, P>> {
        let mut out: BTreeMap<Word, BTreeMap<usize, P>> = BTreeMap::new();
        for (c0, pi) in self.stationary.iter().enumerate() {
            if pi.is_zero() {
                continue;
            }
            for (w, ctx, p) in self.continuations(c0, len) {
                let e = out.entry(w).or_default().entry(ctx).or_insert_with(P::zero);
                *e = e.clone() + pi.clone() * p;
            }
        }
        out
    }
}

fn stationary_residual<P: Prob>(t: &Matrix<P>, pi: &[P]) -> f64 {
    let next = t.apply_left(pi);
    next.iter().zip(pi).map(|(a, b)| (a.to_f64() - b.to_f64()).abs()).fold(0.0, f64::max)
}

fn clean_float<P: Prob>(pi: &mut [P]) {
    for p in pi.iter_mut() {
        if p.is_negative() && p.to_f64() > -1e-13 {
            *p = P::zero();
        }
    }
    let s = pi.iter().fold(P::zero(), |a, p| a + p.clone());
    for p in pi.iter_mut() {
        *p = p.clone() / s.clone();
    }
}

/// Lazy power iteration `π ← π (T + I) / 2`, tolerance 1e-14.
fn power_stationary<P: Prob>(t: &Matrix<P>) -> Vec<P> {
    let n = t.rows();
    let tf = t.map(Prob::to_f64);
    let mut pi = vec![1.0 / n as f64; n];
    for _ in 0..1_000_000 {
        let step = tf.apply_left(&pi);
        let next: Vec<f64> = step.iter().zip(&pi).map(|(a, b)| 0.5 * (a + b)).collect();
        let diff = next.iter().zip(&pi).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        pi = next;
        if diff <= 1e-14 {
            break;
        }
    }
    let s: f64 = pi.iter().sum();
    pi.iter().map(|&x| float_to_prob::<P>(x / s)).collect()
}

fn float_to_prob<P: Prob>(x: f64) -> P {
    // Only reached on the float backend.
    let scale = 1u64 << 52;
    P::from_ratio(libm::round(x * scale as f64) as u64, scale)
}

impl<P: Prob> BlockSource<P> for MarkovProcess<P> {
    fn arity(&self) -> usize {
        self.arity
    }

    fn window_cap(&self) -> u64 {
        self.window_cap
    }

    fn block_distribution(&self, len: usize) -> Result<BlockDistribution<P>> {
        check_block_length(len)?;
        check_window_cap(self.arity, len, self.window_cap)?;
        let mut probs: BTreeMap<Word, P> = BTreeMap::new();
        if len >= self.order {
            for (c, pi) in self.stationary.iter().enumerate() {
                if pi.is_zero() {
                    continue;
                }
                let head = self.context_word(c);
                for (tail, _, p) in self.continuations(c, len - self.order) {
                    probs.insert(head.concat(&tail), pi.clone() * p);
                }
            }
        } else {
            for (c, pi) in self.stationary.iter().enumerate() {
                if pi.is_zero() {
                    continue;
                }
                let w = Word::from(&self.context_word(c)[..len]);
                let e = probs.entry(w).or_insert_with(P::zero);
                *e = e.clone() + pi.clone();
            }
        }
        Ok(BlockDistribution::from_accumulated(self.arity, len, probs))
    }

    /// Inserts the `gap`-step power of the context chain between the blocks,
    /// so the middle words are never enumerated.
    fn joint_gap_distribution(&self, len: usize, gap: usize) -> Result<JointBlockDistribution<P>> {
        check_block_length(len)?;
        check_window_cap(self.arity, 2 * len, self.window_cap)?;
        let step = self.context_chain().pow(gap as u64);
        let forward = self.forward_vectors(len);
        let continuations: Vec<Vec<(Word, usize, P)>> =
            (0..self.kernel.len()).map(|c| self.continuations(c, len)).collect();
        let mut probs: BTreeMap<(Word, Word), P> = BTreeMap::new();
        for (a, alpha) in forward {
            let mut beta = vec![P::zero(); self.kernel.len()];
            for (c, p) in alpha {
                for (d, b) in beta.iter_mut().enumerate() {
                    let t = step.get(c, d);
                    if !t.is_zero() {
                        *b = b.clone() + p.clone() * t.clone();
                    }
                }
            }
            for (c, weight) in beta.iter().enumerate() {
                if weight.is_zero() {
                    continue;
                }
                for (b, _, q) in &continuations[c] {
                    let e = probs.entry((a.clone(), b.clone())).or_insert_with(P::zero);
                    *e = e.clone() + weight.clone() * q.clone();
                }
            }
        }
        Ok(JointBlockDistribution::from_accumulated(self.arity, len, gap, len, probs))
    }
}

impl<P: Prob> ClosedForm for MarkovProcess<P> {
    /// Assumes every context is its own causal state.
    fn closed_forms(&self) -> Result<ClosedForms> {
        let r = self.order;
        let h_r = if r == 0 { 0.0 } else { self.block_distribution(r)?.entropy().to_f64() };
        let h_r1 = self.block_distribution(r + 1)?.entropy().to_f64();
        let rate = h_r1 - h_r;
        let excess = h_r - r as f64 * rate;
        Ok(ClosedForms {
            entropy_rate: Quantity::Finite(rate),
            excess_entropy: Quantity::Finite(excess),
            forward_complexity: Quantity::Finite(h_r),
            reverse_complexity: Quantity::Finite(h_r),
            pmi: Quantity::Finite(0.0),
            efficiency: Quantity::Finite(if h_r == 0.0 { 0.0 } else { 1.0 - r as f64 * rate / h_r }),
        })
    }
}

impl<P: Prob> MarkovProcess<P> {
    /// `E / C` from the closed forms.
    pub fn closed_form_efficiency(&self) -> Result<f64> {
        let cf = self.closed_forms()?;
        Ok(efficiency_ratio(
            cf.excess_entropy.finite().unwrap_or(0.0),
            cf.forward_complexity.finite().unwrap_or(0.0),
        ))
    }
}

impl<P: Prob> Sample for MarkovProcess<P> {
    fn sample(&self, n: usize, seed: u64) -> Result<Word> {
        check_sample_len(n)?;
        let mut rng = rng_from_seed(seed);
        let c0 = draw(&mut rng, &to_f64_vec(&self.stationary));
        let mut out: Vec<Sym> = self.context_word(c0).0;
        out.truncate(n);
        let rows: Vec<Vec<f64>> = self.kernel.iter().map(|r| to_f64_vec(r)).collect();
        let mut ctx = c0;
        while out.len() < n {
            let x = draw(&mut rng, &rows[ctx]) as Sym;
            out.push(x);
            ctx = self.next_context(ctx, x);
        }
        Ok(Word(out))
    }
}

impl<P: Prob> TimeReversal for MarkovProcess<P> {
    /// Bayes reversal: `Pr(x | next R symbols)` from the stationary
    /// `(R+1)`-block law. Unreachable contexts get a uniform row.
    fn reversed(&self) -> Result<Self> {
        if self.order == 0 {
            return Ok(self.clone());
        }
        let r = self.order;
        let blocks = self.block_distribution(r + 1)?;
        let ctx_law = blocks.marginal(1, r)?;
        let mut kernel = Vec::with_capacity(self.kernel.len());
        for c in 0..self.kernel.len() {
            // Reverse-time context c lists S_{t+R} … S_{t+1}; forward order is its reverse.
            let fwd = self.context_word(c).reversed();
            let denom = ctx_law.prob(&fwd);
            let row: Vec<P> = if denom.is_zero() {
                vec![P::from_ratio(1, self.arity as u64); self.arity]
            } else {
                (0..self.arity)
                    .map(|x| {
                        let mut w = vec![x as Sym];
                        w.extend_from_slice(&fwd);
                        blocks.prob(&Word(w)) / denom.clone()
                    })
                    .collect()
            };
            kernel.push(row);
        }
        Ok(MarkovProcess::new(self.arity, r, kernel)?.with_window_cap(self.window_cap))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::infocore::mutual_information;
    use crate::scalar::Rational;

    fn chain(p01: f64, p10: f64) -> MarkovProcess<f64> {
        MarkovProcess::new(2, 1, vec![vec![1.0 - p01, p01], vec![p10, 1.0 - p10]]).unwrap()
    }

    #[test]
    fn stationary_of_two_state_chain() {
        let m = chain(0.1, 0.2);
        assert!((m.stationary()[0] - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn exact_stationary() {
        let q = |n, d| Rational::from_ratio(n, d);
        let m = MarkovProcess::new(2, 1, vec![vec![q(9, 10), q(1, 10)], vec![q(2, 10), q(8, 10)]]).unwrap();
        assert_eq!(m.stationary(), &[q(2, 3), q(1, 3)]);
    }

    #[test]
    fn block_consistency() {
        let m = MarkovProcess::new(
            2,
            2,
            vec![vec![0.3, 0.7], vec![0.6, 0.4], vec![0.9, 0.1], vec![0.5, 0.5]],
        )
        .unwrap();
        for len in 1..6 {
            let d5 = m.block_distribution(len + 1).unwrap();
            let d4 = m.block_distribution(len).unwrap();
            assert!(d5.marginal(0, len).unwrap().total_variation(&d4) < 1e-14);
            assert!(d5.marginal(1, len).unwrap().total_variation(&d4) < 1e-14);
        }
    }

    #[test]
    fn joint_marginals_match_blocks() {
        let m = chain(0.1, 0.2);
        for gap in [0, 1, 5] {
            let j = m.joint_gap_distribution(3, gap).unwrap();
            let d = m.block_distribution(3).unwrap();
            assert!(j.left().total_variation(&d) < 1e-14);
            assert!(j.right().total_variation(&d) < 1e-14);
        }
    }

    #[test]
    fn joint_matches_window_enumeration() {
        let m = MarkovProcess::new(
            2,
            2,
            vec![vec![0.3, 0.7], vec![0.6, 0.4], vec![0.9, 0.1], vec![0.5, 0.5]],
        )
        .unwrap();
        for (len, gap) in [(1, 0), (1, 3), (2, 1), (3, 2)] {
            let fast = m.joint_gap_distribution(len, gap).unwrap();
            let window = m.block_distribution(2 * len + gap).unwrap();
            let slow = crate::infocore::marginalize_gap(&window, len, gap).unwrap();
            let fast_f: Vec<_> = fast.iter().map(|(k, p)| (k.clone(), *p)).collect();
            let slow_f: Vec<_> = slow.iter().map(|(k, p)| (k.clone(), *p)).collect();
            assert_eq!(fast_f.len(), slow_f.len());
            for ((ka, pa), (kb, pb)) in fast_f.iter().zip(&slow_f) {
                assert_eq!(ka, kb);
                assert!((pa - pb).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn mi_decays_with_gap() {
        let m = chain(0.1, 0.2);
        let mut prev = f64::INFINITY;
        for gap in 0..30 {
            let mi = mutual_information(&m.joint_gap_distribution(1, gap).unwrap());
            assert!(mi <= prev + 1e-15);
            prev = mi;
        }
        assert!(prev < 1e-8);
    }

    #[test]
    fn reversal_of_reversible_chain_is_identity() {
        let m = chain(0.1, 0.2);
        let r = m.reversed().unwrap();
        for (a, b) in m.kernel().iter().flatten().zip(r.kernel().iter().flatten()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn reversed_blocks_are_mirrored() {
        let m = MarkovProcess::new(
            2,
            2,
            vec![vec![0.3, 0.7], vec![0.6, 0.4], vec![0.9, 0.1], vec![0.5, 0.5]],
        )
        .unwrap();
        let r = m.reversed().unwrap();
        let d = m.block_distribution(5).unwrap();
        let dr = r.block_distribution(5).unwrap();
        for (w, p) in d.iter() {
            assert!((dr.prob(&w.reversed()) - p).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_bad_kernels() {
        assert!(MarkovProcess::new(2, 1, vec![vec![0.5, 0.6], vec![0.5, 0.5]]).is_err());
        assert!(MarkovProcess::new(2, 1, vec![vec![1.0, 0.0]]).is_err());
        assert!(MarkovProcess::new(2, 1, vec![vec![1.5, -0.5], vec![0.5, 0.5]]).is_err());
    }

    #[test]
    fn reducible_chain_float_fallback_and_exact_error() {
        let m = MarkovProcess::new(2, 1, vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let s: f64 = m.stationary().iter().sum();
        assert!((s - 1.0).abs() < 1e-12);
        let one = Rational::from_ratio(1, 1);
        let zero = Rational::from_ratio(0, 1);
        let e = MarkovProcess::new(2, 1, vec![vec![one.clone(), zero.clone()], vec![zero, one]]);
        assert_eq!(e.unwrap_err(), Error::NonUniqueStationary);
    }

    #[test]
    fn sample_is_deterministic() {
        let m = chain(0.1, 0.2);
        assert_eq!(m.sample(100, 7).unwrap(), m.sample(100, 7).unwrap());
        assert_ne!(m.sample(100, 7).unwrap(), m.sample(100, 8).unwrap());
    }
}
