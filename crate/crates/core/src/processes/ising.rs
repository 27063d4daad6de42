use alloc::vec;

use super::{BlockSource, ClosedForm, ClosedForms, MarkovProcess, Quantity, Sample, TimeReversal};
use crate::infocore::{BlockDistribution, JointBlockDistribution, Word};
use crate::scalar::Info;
use crate::{Error, Result};

/// Spin configurations of the nearest-neighbour Ising chain with coupling
/// `J`, field `h` and inverse temperature `β`, read left to right.
///
/// Spin −1 is symbol 0 and +1 is symbol 1. The infinite-chain Gibbs measure
/// is the first-order Markov chain built from the transfer matrix
/// `V(s, s') = exp(β (J s s' + h (s + s') / 2))` and its Perron vector.
#[derive(Clone, Debug, PartialEq)]
pub struct IsingChainProcess {
    coupling: f64,
    field: f64,
    beta: f64,
    chain: MarkovProcess<f64>,
}

fn check_params(coupling: f64, field: f64, beta: f64) -> Result<()> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidParameter(alloc::format!("inverse temperature must be positive, got {beta}")));
    }
    if !coupling.is_finite() || !field.is_finite() {
        return Err(Error::InvalidParameter("coupling and field must be finite".into()));
    }
    Ok(())
}

/// Largest transfer-matrix eigenvalue.
fn lambda_max(coupling: f64, field: f64, beta: f64) -> f64 {
    let a = libm::exp(beta * coupling);
    let (c, s) = (libm::cosh(beta * field), libm::sinh(beta * field));
    a * c + libm::sqrt(a * a * s * s + 1.0 / (a * a))
}

impl IsingChainProcess {
    pub fn new(coupling: f64, field: f64, beta: f64) -> Result<Self> {
        check_params(coupling, field, beta)?;
        let a = libm::exp(beta * coupling);
        let lambda = lambda_max(coupling, field, beta);
        // Perron vector of V, indexed by symbol (0 ↔ −1, 1 ↔ +1).
        let psi = [1.0 / a, lambda - a * libm::exp(-beta * field)];
        let spin = |x: usize| if x == 0 { -1.0 } else { 1.0 };
        let v = |x: usize, y: usize| {
            libm::exp(beta * (coupling * spin(x) * spin(y) + field * (spin(x) + spin(y)) / 2.0))
        };
        let mut kernel = vec![vec![0.0; 2]; 2];
        for (x, row) in kernel.iter_mut().enumerate() {
            for (y, p) in row.iter_mut().enumerate() {
                *p = v(x, y) * psi[y] / (lambda * psi[x]);
            }
            // Remove rounding so the row sums to one.
            let total: f64 = row.iter().sum();
            row.iter_mut().for_each(|p| *p /= total);
        }
        let chain = MarkovProcess::new(2, 1, kernel)?;
        Ok(IsingChainProcess { coupling, field, beta, chain })
    }

    pub fn from_temperature(coupling: f64, field: f64, temperature: f64) -> Result<Self> {
        if !(temperature > 0.0) {
            return Err(Error::InvalidParameter(alloc::format!("temperature must be positive, got {temperature}")));
        }
        Self::new(coupling, field, 1.0 / temperature)
    }

    pub fn with_window_cap(mut self, cap: u64) -> Self {
        self.chain = self.chain.with_window_cap(cap);
        self
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn field(&self) -> f64 {
        self.field
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// The equivalent first-order Markov chain.
    pub fn chain(&self) -> &MarkovProcess<f64> {
        &self.chain
    }

    pub fn magnetization(&self) -> f64 {
        let pi = self.chain.stationary();
        pi[1] - pi[0]
    }
}

/// Thermodynamic entropy per spin in bits,
/// `[ln λ − β ∂_β ln λ] / ln 2`, from the largest transfer eigenvalue.
pub fn ising_entropy_rate(coupling: f64, field: f64, beta: f64) -> Result<f64> {
    check_params(coupling, field, beta)?;
    let a = libm::exp(beta * coupling);
    let (c, s) = (libm::cosh(beta * field), libm::sinh(beta * field));
    let q = a * a * s * s + 1.0 / (a * a);
    let sq = libm::sqrt(q);
    let lambda = a * c + sq;
    let dq = 2.0 * coupling * a * a * s * s + 2.0 * a * a * s * c * field - 2.0 * coupling / (a * a);
    let dlambda = coupling * a * c + a * field * s + dq / (2.0 * sq);
    Ok((libm::log(lambda) - beta * dlambda / lambda) / core::f64::consts::LN_2)
}

impl BlockSource<f64> for IsingChainProcess {
    fn arity(&self) -> usize {
        2
    }

    fn window_cap(&self) -> u64 {
        BlockSource::<f64>::window_cap(&self.chain)
    }

    fn block_distribution(&self, len: usize) -> Result<BlockDistribution<f64>> {
        self.chain.block_distribution(len)
    }

    fn joint_gap_distribution(&self, len: usize, gap: usize) -> Result<JointBlockDistribution<f64>> {
        self.chain.joint_gap_distribution(len, gap)
    }
}

impl ClosedForm for IsingChainProcess {
    fn closed_forms(&self) -> Result<ClosedForms> {
        let rate = ising_entropy_rate(self.coupling, self.field, self.beta)?;
        let h1 = self.chain.block_distribution(1)?.entropy().to_f64();
        let excess = (h1 - rate).max(0.0);
        Ok(ClosedForms {
            entropy_rate: Quantity::Finite(rate),
            excess_entropy: Quantity::Finite(excess),
            forward_complexity: Quantity::Finite(h1),
            reverse_complexity: Quantity::Finite(h1),
            pmi: Quantity::Finite(0.0),
            efficiency: Quantity::Finite(if h1 == 0.0 { 0.0 } else { excess / h1 }),
        })
    }
}

impl Sample for IsingChainProcess {
    fn sample(&self, n: usize, seed: u64) -> Result<Word> {
        self.chain.sample(n, seed)
    }
}

impl TimeReversal for IsingChainProcess {
    /// The Gibbs chain is reversible.
    fn reversed(&self) -> Result<Self> {
        Ok(self.clone())
    }
}
