//! Entropy curves, excess entropy, the gap mutual-information grid
//! `E(L, g)`, PMI verdicts and the efficiency of prediction.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::emachine::EpsilonMachine;
use crate::infocore::mutual_information;
use crate::processes::BlockSource;
use crate::scalar::{Info, Prob};
use crate::{Error, Result};

/// Block entropies `H(1..=L_max)` with increments and the two estimates
/// `ĥ = ΔH(L_max)` and `Ê = H(L_max) − L_max·ĥ`.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropyCurve<I> {
    pub l_max: usize,
    /// `entropies[L − 1] = H(L)`.
    pub entropies: Vec<I>,
    /// `increments[L − 1] = H(L) − H(L − 1)`, with `H(0) = 0`.
    pub increments: Vec<I>,
    pub entropy_rate: I,
    pub excess_entropy: I,
}

impl<I: Info> EntropyCurve<I> {
    pub fn entropy(&self, l: usize) -> Option<&I> {
        self.entropies.get(l.checked_sub(1)?)
    }

    pub fn increment(&self, l: usize) -> Option<&I> {
        self.increments.get(l.checked_sub(1)?)
    }

    /// The slower estimator `H(L_max) / L_max`.
    pub fn entropy_rate_by_average(&self) -> f64 {
        self.entropies.last().map_or(0.0, |h| h.to_f64() / self.l_max as f64)
    }

    /// `H(L) − L·ĥ` for each `L`; tends to `Ê`.
    pub fn excess_sequence(&self) -> Vec<f64> {
        let h = self.entropy_rate.to_f64();
        self.entropies.iter().enumerate().map(|(i, e)| e.to_f64() - (i + 1) as f64 * h).collect()
    }

    /// Nondecreasing `H` and nonincreasing `ΔH`, up to `tol`.
    pub fn is_concave(&self, tol: f64) -> bool {
        let d: Vec<f64> = self.increments.iter().map(Info::to_f64).collect();
        d.iter().all(|&x| x >= -tol) && d.windows(2).all(|w| w[1] <= w[0] + tol)
    }
}

pub fn entropy_curve<P: Prob, S: BlockSource<P> + ?Sized>(source: &S, l_max: usize) -> Result<EntropyCurve<P::Info>> {
    if l_max == 0 {
        return Err(Error::InvalidParameter("L_max must be positive".into()));
    }
    let mut entropies = Vec::with_capacity(l_max);
    let mut increments = Vec::with_capacity(l_max);
    let mut prev = P::Info::zero();
    for l in 1..=l_max {
        let h = source.block_distribution(l)?.entropy();
        increments.push(h.clone() - prev);
        entropies.push(h.clone());
        prev = h;
    }
    let entropy_rate = increments[l_max - 1].clone();
    let excess_entropy = entropies[l_max - 1].clone() - entropy_rate.mul_int(l_max as i64);
    Ok(EntropyCurve { l_max, entropies, increments, entropy_rate, excess_entropy })
}

/// `2H(L) − H(2L)`: mutual information between adjacent length-`L` blocks.
pub fn excess_entropy_finite<P: Prob, S: BlockSource<P> + ?Sized>(source: &S, l: usize) -> Result<P::Info> {
    if l == 0 {
        return Err(Error::InvalidParameter("L must be positive".into()));
    }
    let h = source.block_distribution(l)?.entropy();
    let h2 = source.block_distribution(2 * l)?.entropy();
    Ok(h.mul_int(2) - h2)
}

/// `E(L, g)` on a grid. Cells whose distribution could not be formed (window
/// cap, undersampling, short sequence) are recorded as missing.
#[derive(Clone, Debug, PartialEq)]
pub struct GapMIGrid<I> {
    pub l_grid: Vec<usize>,
    pub g_grid: Vec<usize>,
    pub values: BTreeMap<(usize, usize), I>,
    pub missing: BTreeMap<(usize, usize), String>,
}

impl<I: Info> GapMIGrid<I> {
    pub fn get(&self, l: usize, g: usize) -> Option<&I> {
        self.values.get(&(l, g))
    }

    pub fn to_f64(&self) -> GapMIGrid<f64> {
        GapMIGrid {
            l_grid: self.l_grid.clone(),
            g_grid: self.g_grid.clone(),
            values: self.values.iter().map(|(k, v)| (*k, v.to_f64())).collect(),
            missing: self.missing.clone(),
        }
    }

    /// Available `(g, E)` pairs for one `L`, by increasing `g`.
    pub fn column(&self, l: usize) -> Vec<(usize, f64)> {
        self.values.range((l, 0)..=(l, usize::MAX)).map(|(&(_, g), v)| (g, v.to_f64())).collect()
    }

    /// Smallest cell value (should never be below −1e-12).
    pub fn min_value(&self) -> f64 {
        self.values.values().map(Info::to_f64).fold(f64::INFINITY, f64::min)
    }
}

fn check_grid(grid: &[usize], name: &str, allow_zero: bool) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter(alloc::format!("{name} grid is empty")));
    }
    if !allow_zero && grid[0] == 0 {
        return Err(Error::InvalidParameter(alloc::format!("{name} grid must be positive")));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(alloc::format!("{name} grid must be strictly ascending")));
    }
    Ok(())
}

pub fn gap_mi_grid<P: Prob, S: BlockSource<P> + ?Sized>(
    source: &S,
    l_grid: &[usize],
    g_grid: &[usize],
) -> Result<GapMIGrid<P::Info>> {
    check_grid(l_grid, "L", false)?;
    check_grid(g_grid, "g", true)?;
    let mut values = BTreeMap::new();
    let mut missing = BTreeMap::new();
    for &l in l_grid {
        for &g in g_grid {
            match source.joint_gap_distribution(l, g) {
                Ok(j) => {
                    values.insert((l, g), mutual_information(&j));
                }
                Err(e @ (Error::WindowCap { .. } | Error::Undersampled { .. } | Error::SequenceTooShort { .. })) => {
                    missing.insert((l, g), e.to_string());
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(GapMIGrid { l_grid: l_grid.to_vec(), g_grid: g_grid.to_vec(), values, missing })
}

/// Thresholds for [`pmi_verdict`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerdictTolerances {
    /// Allowed change of the large-gap tail, per `L`.
    pub eps_g: f64,
    /// Allowed change of the tail value between the two largest `L`.
    pub eps_l: f64,
    /// Minimum growth per unit `L` that counts as divergence.
    pub delta: f64,
}

impl Default for VerdictTolerances {
    fn default() -> Self {
        VerdictTolerances { eps_g: 1e-6, eps_l: 1e-6, delta: 0.05 }
    }
}

impl VerdictTolerances {
    /// Ten times the sampling noise floor for both `ε` thresholds.
    pub fn empirical(noise_floor: f64) -> Self {
        VerdictTolerances { eps_g: 10.0 * noise_floor, eps_l: 10.0 * noise_floor, ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PmiVerdict {
    Converged { value: f64, uncertainty: f64 },
    Diverging,
    Inconclusive,
}

impl PmiVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            PmiVerdict::Converged { .. } => "converged",
            PmiVerdict::Diverging => "diverging",
            PmiVerdict::Inconclusive => "inconclusive",
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            PmiVerdict::Converged { value, .. } => Some(*value),
            _ => None,
        }
    }
}

/// Per-`L` summary of the gap direction.
#[derive(Clone, Debug, PartialEq)]
pub struct TailSummary {
    pub l: usize,
    /// Largest available gap and `E(L, g_max)`.
    pub g_max: usize,
    pub value: f64,
    /// `|E(L, g_max) − E(L, g_half)|` with `g_half` the largest available gap
    /// `≤ g_max / 2`.
    pub change: Option<f64>,
    /// Geometric decay factor per unit gap, from the two largest gaps with
    /// `E > 1e-11`.
    pub decay_rate: Option<f64>,
    /// `E(L, ·)` is nonincreasing in `g` (within 1e-12).
    pub monotone_in_gap: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PmiReport {
    pub grid: GapMIGrid<f64>,
    pub verdict: PmiVerdict,
    pub tolerances: VerdictTolerances,
    pub tails: Vec<TailSummary>,
    /// `E(L, g)` nondecreasing in `L` at every fixed `g` (within 1e-12).
    pub monotone_in_length: bool,
    /// Average growth of the tail value per unit `L` over the top half of
    /// the `L` grid.
    pub tail_slope: Option<f64>,
}

const DECAY_FLOOR: f64 = 1e-11;

fn tail_summary(l: usize, column: &[(usize, f64)]) -> Option<TailSummary> {
    let &(g_max, value) = column.last()?;
    let change = column
        .iter()
        .rev()
        .find(|&&(g, _)| g < g_max && 2 * g <= g_max)
        .map(|&(_, v)| (value - v).abs());
    let above: Vec<(usize, f64)> = column.iter().copied().filter(|&(_, v)| v > DECAY_FLOOR).collect();
    let decay_rate = match above.as_slice() {
        [.., (g1, v1), (g2, v2)] => Some(libm::pow(v2 / v1, 1.0 / (*g2 - *g1) as f64)),
        _ => None,
    };
    let monotone_in_gap = column.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-12);
    Some(TailSummary { l, g_max, value, change, decay_rate, monotone_in_gap })
}

/// Average slope of `(x, y)` between the first and last point of the top
/// half of the series.
fn top_half_slope(points: &[(usize, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let top = &points[(points.len() / 2).min(points.len() - 2)..];
    let (x0, y0) = top[0];
    let (x1, y1) = top[top.len() - 1];
    Some((y1 - y0) / (x1 - x0) as f64)
}

/// Iterated-limit verdict: first `g → ∞` per `L` (tail stability), then
/// `L → ∞` (stability of the tails, or linear growth for divergence).
pub fn pmi_verdict(grid: &GapMIGrid<f64>, tol: VerdictTolerances) -> Result<PmiReport> {
    let distinct_l: BTreeSet<usize> = grid.values.keys().map(|&(l, _)| l).collect();
    let distinct_g: BTreeSet<usize> = grid.values.keys().map(|&(_, g)| g).collect();
    if distinct_l.len() < 3 {
        return Err(Error::GridTooSmall { axis: "L", needed: 3 });
    }
    if distinct_g.len() < 3 {
        return Err(Error::GridTooSmall { axis: "g", needed: 3 });
    }
    let tails: Vec<TailSummary> = distinct_l.iter().filter_map(|&l| tail_summary(l, &grid.column(l))).collect();
    let monotone_in_length = distinct_g.iter().all(|&g| {
        let col: Vec<f64> = distinct_l.iter().filter_map(|&l| grid.values.get(&(l, g)).copied()).collect();
        col.windows(2).all(|w| w[1] >= w[0] - 1e-12)
    });
    let series: Vec<(usize, f64)> = tails.iter().map(|t| (t.l, t.value)).collect();
    let tail_slope = top_half_slope(&series);
    let n = tails.len();
    let (last, prev) = (&tails[n - 1], &tails[n - 2]);
    let stable_g = |t: &TailSummary| t.change.is_some_and(|c| c <= tol.eps_g);
    let step = (last.value - prev.value).abs();
    let verdict = if stable_g(last) && stable_g(prev) && step <= tol.eps_l {
        PmiVerdict::Converged { value: last.value.max(0.0), uncertainty: step }
    } else if tail_slope.is_some_and(|s| s >= tol.delta) {
        PmiVerdict::Diverging
    } else {
        PmiVerdict::Inconclusive
    };
    Ok(PmiReport { grid: grid.clone(), verdict, tolerances: tol, tails, monotone_in_length, tail_slope })
}

/// The `L → ∞` half of the verdict for a single sequence of values, such
/// as `2H(L) − H(2L)`: converged when the last step is within `eps_l`,
/// diverging when the top-half slope reaches `delta`.
pub fn length_trend_verdict(points: &[(usize, f64)], tol: VerdictTolerances) -> Result<PmiVerdict> {
    if points.len() < 3 {
        return Err(Error::GridTooSmall { axis: "L", needed: 3 });
    }
    let n = points.len();
    let step = (points[n - 1].1 - points[n - 2].1).abs();
    Ok(if step <= tol.eps_l {
        PmiVerdict::Converged { value: points[n - 1].1.max(0.0), uncertainty: step }
    } else if top_half_slope(points).is_some_and(|s| s >= tol.delta) {
        PmiVerdict::Diverging
    } else {
        PmiVerdict::Inconclusive
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EfficiencyReport {
    pub excess_entropy: f64,
    pub complexity: f64,
    /// `E / C`, or 0 when `C = 0`.
    pub efficiency: f64,
}

/// Tolerance for `E ≤ C` before reporting an inconsistency.
pub const EFFICIENCY_TOL: f64 = 1e-9;

pub fn efficiency_from(excess_entropy: f64, complexity: f64) -> Result<EfficiencyReport> {
    if excess_entropy < -EFFICIENCY_TOL {
        return Err(Error::Inconsistent(alloc::format!("negative excess entropy {excess_entropy}")));
    }
    if excess_entropy > complexity + EFFICIENCY_TOL {
        return Err(Error::Inconsistent(alloc::format!(
            "excess entropy {excess_entropy} exceeds statistical complexity {complexity}"
        )));
    }
    let efficiency = if complexity == 0.0 { 0.0 } else { excess_entropy / complexity };
    Ok(EfficiencyReport { excess_entropy, complexity, efficiency })
}

/// `e⁺ = E / C_P⁺` for a reconstructed forward machine.
pub fn efficiency<P: Prob>(excess_entropy: f64, machine: &EpsilonMachine<P>) -> Result<EfficiencyReport> {
    efficiency_from(excess_entropy, machine.statistical_complexity().to_f64())
}
