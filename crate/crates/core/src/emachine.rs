//! Causal-state reconstruction from exact block laws and the causal-state
//! identities `E = I(S⁺; S⁻)` and `C⁺ = E + H(S⁺ | S⁻)`.
//!
//! Histories of a fixed length `R` stand in for infinite pasts, so the
//! result is the true ε-machine only when `R` covers the process memory
//! (finite-order Markov and periodic models).

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::infocore::{BlockDistribution, Sym, Word};
use crate::processes::BlockSource;
use crate::scalar::{Info, Prob};
use crate::{Error, Result};

/// Default merge tolerance on the float backend (total variation).
pub const DEFAULT_MERGE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct CausalState<P> {
    /// Length-`R` histories (oldest symbol first) in this state.
    pub histories: Vec<Word>,
    /// Stationary probability of the state.
    pub probability: P,
}

/// A unifilar machine: `transitions[i][x] = Some((j, p))` means state `i`
/// emits `x` with probability `p` and moves to `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonMachine<P> {
    arity: usize,
    history_length: usize,
    future_length: usize,
    states: Vec<CausalState<P>>,
    transitions: Vec<Vec<Option<(usize, P)>>>,
    state_of: BTreeMap<Word, usize>,
}

impl<P: Prob> EpsilonMachine<P> {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn history_length(&self) -> usize {
        self.history_length
    }

    pub fn future_length(&self) -> usize {
        self.future_length
    }

    pub fn states(&self) -> &[CausalState<P>] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn transitions(&self) -> &[Vec<Option<(usize, P)>>] {
        &self.transitions
    }

    /// The state reached by a length-`R` history.
    pub fn state_of(&self, history: &[Sym]) -> Option<usize> {
        self.state_of.get(&Word::from(history)).copied()
    }

    pub fn state_probabilities(&self) -> Vec<P> {
        self.states.iter().map(|s| s.probability.clone()).collect()
    }

    /// `C = H(state probabilities)`.
    pub fn statistical_complexity(&self) -> P::Info {
        self.states.iter().fold(P::Info::zero(), |acc, s| acc + s.probability.entropy_term())
    }

    /// Structural unifilarity and row sums (exact, or within 1e-12).
    pub fn is_consistent(&self) -> bool {
        self.transitions.iter().all(|row| {
            let total = row.iter().flatten().fold(P::zero(), |a, (_, p)| a + p.clone());
            total.close_to(&P::one(), 1e-12) && row.iter().flatten().all(|(j, _)| *j < self.states.len())
        })
    }

    /// Stationarity of the state law under the symbol-summed kernel.
    pub fn stationarity_residual(&self) -> f64 {
        let mut next = vec![P::zero(); self.states.len()];
        for (i, row) in self.transitions.iter().enumerate() {
            for (j, p) in row.iter().flatten() {
                next[*j] = next[*j].clone() + self.states[i].probability.clone() * p.clone();
            }
        }
        next.iter()
            .zip(&self.states)
            .map(|(a, s)| (a.to_f64() - s.probability.to_f64()).abs())
            .fold(0.0, f64::max)
    }

    /// Law of length-`len` words generated by the machine from its
    /// stationary state distribution.
    pub fn block_distribution(&self, len: usize) -> Result<BlockDistribution<P>> {
        let mut layer: Vec<(Vec<Sym>, usize, P)> =
            self.states.iter().enumerate().map(|(i, s)| (Vec::new(), i, s.probability.clone())).collect();
        for _ in 0..len {
            let mut next = Vec::new();
            for (w, i, p) in layer {
                for (x, t) in self.transitions[i].iter().enumerate() {
                    if let Some((j, q)) = t {
                        let mut w2 = w.clone();
                        w2.push(x as Sym);
                        next.push((w2, *j, p.clone() * q.clone()));
                    }
                }
            }
            layer = next;
        }
        let mut probs: BTreeMap<Word, P> = BTreeMap::new();
        for (w, _, p) in layer {
            let e = probs.entry(Word(w)).or_insert_with(P::zero);
            *e = e.clone() + p;
        }
        Ok(BlockDistribution::from_accumulated(self.arity, len, probs))
    }
}

/// Conditional future laws of every history, as `(history, P(h), futures)`
/// with `futures[f] = P(f | h)`.
type Conditionals<P> = Vec<(Word, P, BTreeMap<Word, P>)>;

fn conditionals<P: Prob, S: BlockSource<P> + ?Sized>(source: &S, r: usize, f: usize) -> Result<Conditionals<P>> {
    let joint = source.block_distribution(r + f)?;
    let mut by_history: BTreeMap<Word, (P, BTreeMap<Word, P>)> = BTreeMap::new();
    for (w, p) in joint.iter() {
        let (h, fut) = (Word::from(&w[..r]), Word::from(&w[r..]));
        let e = by_history.entry(h).or_insert_with(|| (P::zero(), BTreeMap::new()));
        e.0 = e.0.clone() + p.clone();
        e.1.insert(fut, p.clone());
    }
    Ok(by_history
        .into_iter()
        .map(|(h, (ph, futs))| {
            let cond = futs.into_iter().map(|(k, p)| (k, p / ph.clone())).collect();
            (h, ph, cond)
        })
        .collect())
}

fn same_law<P: Prob>(a: &BTreeMap<Word, P>, b: &BTreeMap<Word, P>, tol: f64) -> bool {
    if P::EXACT {
        return a == b;
    }
    let mut tv = 0.0;
    for (k, p) in a {
        tv += (p.to_f64() - b.get(k).map_or(0.0, Prob::to_f64)).abs();
    }
    for (k, p) in b {
        if !a.contains_key(k) {
            tv += p.to_f64();
        }
    }
    tv / 2.0 <= tol
}

/// Groups length-`r` histories by their length-`f` future laws (merging
/// within total variation `tol`; exact equality on the exact backend) and
/// builds the induced machine.
pub fn reconstruct<P: Prob, S: BlockSource<P> + ?Sized>(
    source: &S,
    history_length: usize,
    future_length: usize,
    tol: f64,
) -> Result<EpsilonMachine<P>> {
    if future_length == 0 {
        return Err(Error::InvalidParameter("future length must be positive".into()));
    }
    let arity = source.arity();
    let conds = conditionals(source, history_length, future_length)?;
    let mut representatives: Vec<usize> = Vec::new();
    let mut states: Vec<CausalState<P>> = Vec::new();
    let mut state_of: BTreeMap<Word, usize> = BTreeMap::new();
    for (idx, (h, ph, cond)) in conds.iter().enumerate() {
        let found = representatives.iter().position(|&r| same_law(&conds[r].2, cond, tol));
        let s = match found {
            Some(s) => s,
            None => {
                representatives.push(idx);
                states.push(CausalState { histories: Vec::new(), probability: P::zero() });
                states.len() - 1
            }
        };
        states[s].histories.push(h.clone());
        states[s].probability = states[s].probability.clone() + ph.clone();
        state_of.insert(h.clone(), s);
    }
    // Next-symbol probabilities come from each state's representative history;
    // successors must agree across all member histories.
    let mut transitions = vec![vec![None; arity]; states.len()];
    for (idx, (h, _, cond)) in conds.iter().enumerate() {
        let s = state_of[h];
        let mut first: BTreeMap<Sym, P> = BTreeMap::new();
        for (fut, p) in cond {
            let e = first.entry(fut[0]).or_insert_with(P::zero);
            *e = e.clone() + p.clone();
        }
        for (x, p) in first {
            let succ_hist = if history_length == 0 { Word::empty() } else { Word::from(&h.concat(&[x])[1..]) };
            let next = *state_of.get(&succ_hist).ok_or(Error::NonUnifilar { history_length })?;
            match &transitions[s][x as usize] {
                None => {
                    if representatives[s] == idx || !transitions_filled(&transitions[s]) {
                        transitions[s][x as usize] = Some((next, p));
                    } else {
                        return Err(Error::NonUnifilar { history_length });
                    }
                }
                Some((j, _)) if *j != next => return Err(Error::NonUnifilar { history_length }),
                Some(_) => {}
            }
        }
    }
    let machine = EpsilonMachine { arity, history_length, future_length, states, transitions, state_of };
    if !machine.is_consistent() {
        return Err(Error::NonUnifilar { history_length });
    }
    Ok(machine)
}

fn transitions_filled<P>(row: &[Option<(usize, P)>]) -> bool {
    row.iter().any(Option::is_some)
}

/// Joint law of the forward state (from the last `R⁺` symbols) and the
/// reverse state (from the next `R⁻` symbols read backwards).
fn state_pair_law<P: Prob, S: BlockSource<P> + ?Sized>(
    forward: &EpsilonMachine<P>,
    reverse: &EpsilonMachine<P>,
    source: &S,
) -> Result<BTreeMap<(usize, usize), P>> {
    let (rf, rr) = (forward.history_length, reverse.history_length);
    let mut law: BTreeMap<(usize, usize), P> = BTreeMap::new();
    if rf + rr == 0 {
        law.insert((0, 0), P::one());
        return Ok(law);
    }
    let blocks = source.block_distribution(rf + rr)?;
    for (w, p) in blocks.iter() {
        let sf = forward.state_of(&w[..rf]).ok_or(Error::Inconsistent("history missing from forward machine".into()))?;
        let future = Word::from(&w[rf..]).reversed();
        let sr = reverse.state_of(&future).ok_or(Error::Inconsistent("history missing from reverse machine".into()))?;
        let e = law.entry((sf, sr)).or_insert_with(P::zero);
        *e = e.clone() + p.clone();
    }
    Ok(law)
}

fn entropy_of<P: Prob>(values: impl Iterator<Item = P>) -> P::Info {
    values.fold(P::Info::zero(), |acc, p| acc + p.entropy_term())
}

fn marginals<P: Prob>(law: &BTreeMap<(usize, usize), P>) -> (BTreeMap<usize, P>, BTreeMap<usize, P>) {
    let mut a: BTreeMap<usize, P> = BTreeMap::new();
    let mut b: BTreeMap<usize, P> = BTreeMap::new();
    for (&(i, j), p) in law {
        let e = a.entry(i).or_insert_with(P::zero);
        *e = e.clone() + p.clone();
        let e = b.entry(j).or_insert_with(P::zero);
        *e = e.clone() + p.clone();
    }
    (a, b)
}

/// `I(S⁺; S⁻)` from a forward machine and the machine of the reversed
/// process.
pub fn machine_excess_entropy<P: Prob, S: BlockSource<P> + ?Sized>(
    forward: &EpsilonMachine<P>,
    reverse: &EpsilonMachine<P>,
    source: &S,
) -> Result<P::Info> {
    let law = state_pair_law(forward, reverse, source)?;
    let (a, b) = marginals(&law);
    Ok(law.iter().fold(P::Info::zero(), |acc, (&(i, j), p)| acc + p.divergence_term(&(a[&i].clone() * b[&j].clone()))))
}

/// `E`, `H(S⁺|S⁻)`, `H(S⁻|S⁺)` together with both complexities.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexityDecomposition<I> {
    pub excess_entropy: I,
    pub forward_given_reverse: I,
    pub reverse_given_forward: I,
    pub forward_complexity: I,
    pub reverse_complexity: I,
}

/// Tolerance of the check `C⁺ = E + H(S⁺|S⁻)` (and its reverse twin).
pub const DECOMPOSITION_TOL: f64 = 1e-9;

pub fn complexity_decomposition<P: Prob, S: BlockSource<P> + ?Sized>(
    forward: &EpsilonMachine<P>,
    reverse: &EpsilonMachine<P>,
    source: &S,
) -> Result<ComplexityDecomposition<P::Info>> {
    let law = state_pair_law(forward, reverse, source)?;
    let (a, b) = marginals(&law);
    let h_joint = entropy_of(law.values().cloned());
    let h_f = entropy_of(a.values().cloned());
    let h_r = entropy_of(b.values().cloned());
    let excess = h_f.clone() + h_r.clone() - h_joint.clone();
    let forward_given_reverse = h_joint.clone() - h_r;
    let reverse_given_forward = h_joint - h_f;
    let forward_complexity = forward.statistical_complexity();
    let reverse_complexity = reverse.statistical_complexity();
    for (c, cond, which) in [
        (&forward_complexity, &forward_given_reverse, "forward"),
        (&reverse_complexity, &reverse_given_forward, "reverse"),
    ] {
        let gap = (c.to_f64() - excess.to_f64() - cond.to_f64()).abs();
        if gap > DECOMPOSITION_TOL {
            return Err(Error::Inconsistent(alloc::format!("{which} complexity decomposition off by {gap:e}")));
        }
    }
    Ok(ComplexityDecomposition {
        excess_entropy: excess,
        forward_given_reverse,
        reverse_given_forward,
        forward_complexity,
        reverse_complexity,
    })
}
