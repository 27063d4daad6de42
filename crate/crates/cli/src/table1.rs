//! The structure-quantity table: closed forms next to values computed
//! from block laws, reconstructed machines and gap-MI grids.

use anyhow::Context;
use pmi_core::emachine::{reconstruct, EpsilonMachine, DEFAULT_MERGE_TOL};
use pmi_core::measures::{
    efficiency, entropy_curve, excess_entropy_finite, gap_mi_grid, length_trend_verdict, pmi_verdict, PmiVerdict,
    VerdictTolerances,
};
use pmi_core::processes::{
    BlockSource, ClosedForm, ClosedForms, IidProcess, IsingChainProcess, MarkovProcess, PeriodicProcess, Quantity,
    TimeReversal,
};
use pmi_core::substitution::{thue_morse_block_entropy_increment, SubstitutionProcess};
use pmi_core::{Info, Word};
use serde::Serialize;

/// Agreement required between closed form and computation, in bits.
pub const TABLE_TOL: f64 = 1e-6;

pub const QUANTITIES: [&str; 6] = ["h_P", "E", "C_P+", "C_P-", "PMI", "e"];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cell {
    pub column: String,
    pub quantity: &'static str,
    /// Closed-form value: a number, `inf` or `undefined`.
    pub expected: String,
    pub computed: String,
    pub diff: Option<f64>,
    pub ok: bool,
}

fn quantity_label(q: Quantity) -> String {
    match q {
        Quantity::Finite(x) => format!("{x:.9}"),
        Quantity::Infinite => "inf".into(),
        Quantity::Undefined => "undefined".into(),
    }
}

fn finite_cell(column: &str, quantity: &'static str, expected: Quantity, computed: f64) -> Cell {
    let diff = expected.finite().map(|e| (e - computed).abs());
    Cell {
        column: column.into(),
        quantity,
        expected: quantity_label(expected),
        computed: format!("{computed:.9}"),
        diff,
        ok: diff.is_some_and(|d| d <= TABLE_TOL),
    }
}

fn verdict_cell(column: &str, quantity: &'static str, expected: Quantity, computed: &str, ok: bool) -> Cell {
    Cell { column: column.into(), quantity, expected: quantity_label(expected), computed: computed.into(), diff: None, ok }
}

/// Gap grid shared by every finite column; cells beyond the window cap
/// drop out and the verdict uses the largest gap available per `L`.
const GAPS: [usize; 9] = [0, 1, 2, 4, 8, 12, 16, 32, 64];

/// Computes the six quantities of one finite-memory column.
///
/// `memory` is the history length that makes finite-history causal states
/// exact (the period, or the Markov order).
pub fn finite_column<S, R>(column: &str, forms: &ClosedForms, forward: &S, reverse: &R, memory: usize) -> anyhow::Result<Vec<Cell>>
where
    S: BlockSource<f64> + ?Sized,
    R: BlockSource<f64> + ?Sized,
{
    let curve = entropy_curve::<f64, _>(forward, memory + 2)?;
    let (h, e) = (curve.entropy_rate, curve.excess_entropy);
    let fut = memory.max(1);
    let fwd: EpsilonMachine<f64> = reconstruct(forward, memory, fut, DEFAULT_MERGE_TOL)?;
    let rev: EpsilonMachine<f64> = reconstruct(reverse, memory, fut, DEFAULT_MERGE_TOL)?;
    let l_grid: Vec<usize> = (1..=(memory + 3).max(3)).collect();
    let report = pmi_verdict(&gap_mi_grid::<f64, _>(forward, &l_grid, &GAPS)?, VerdictTolerances::default())?;
    let eff = efficiency(e, &fwd)?;
    let mut cells = vec![
        finite_cell(column, "h_P", forms.entropy_rate, h),
        finite_cell(column, "E", forms.excess_entropy, e),
        finite_cell(column, "C_P+", forms.forward_complexity, fwd.statistical_complexity()),
        finite_cell(column, "C_P-", forms.reverse_complexity, rev.statistical_complexity()),
    ];
    cells.push(match report.verdict {
        PmiVerdict::Converged { value, .. } => finite_cell(column, "PMI", forms.pmi, value),
        v => verdict_cell(column, "PMI", forms.pmi, v.label(), false),
    });
    cells.push(finite_cell(column, "e", forms.efficiency, eff.efficiency));
    Ok(cells)
}

/// Largest `n` used for the Thue-Morse entropy increments.
pub const TM_MAX_N: usize = 17;

/// Thue-Morse: `ΔH(n)` from exact factor tables must equal the closed
/// formula and halve over each doubling, `2H(L) − H(2L)` and the gap grid
/// must diverge, and `C_P ≥ E` carries the divergence to both complexities.
pub fn thue_morse_column(column: &str) -> anyhow::Result<Vec<Cell>> {
    let tm = SubstitutionProcess::thue_morse();
    let forms = tm.closed_forms()?;
    let curve = entropy_curve::<pmi_core::Rational, _>(&tm, TM_MAX_N)?;
    let formula_ok = (2..=TM_MAX_N).all(|n| thue_morse_block_entropy_increment(n).ok().as_ref() == curve.increment(n));
    let dyadic: Vec<f64> = (1..).map(|k| (1usize << k) + 1).take_while(|&n| n <= TM_MAX_N).map(|n| curve.increment(n).unwrap().to_f64()).collect();
    let halving = dyadic.windows(2).all(|w| (w[1] - w[0] / 2.0).abs() < 1e-12);
    let last = curve.increment(TM_MAX_N).unwrap().to_f64();
    let h_cell = Cell {
        column: column.into(),
        quantity: "h_P",
        expected: quantity_label(forms.entropy_rate),
        computed: format!("-> 0 (dH({TM_MAX_N}) = {last:.6}, halving per doubling)"),
        diff: None,
        ok: formula_ok && halving,
    };
    let excess: Vec<(usize, f64)> =
        (1..=13).map(|l| Ok((l, excess_entropy_finite::<f64, _>(&tm, l)?.to_f64()))).collect::<anyhow::Result<_>>()?;
    let e_verdict = length_trend_verdict(&excess, VerdictTolerances::default())?;
    let grid = gap_mi_grid::<f64, _>(&tm, &(1..=12).collect::<Vec<_>>(), &(0..=24).collect::<Vec<_>>())?;
    let pmi = pmi_verdict(&grid, VerdictTolerances::default())?.verdict;
    let diverges = |v: &PmiVerdict| matches!(v, PmiVerdict::Diverging);
    Ok(vec![
        h_cell,
        verdict_cell(column, "E", forms.excess_entropy, e_verdict.label(), diverges(&e_verdict)),
        verdict_cell(column, "C_P+", forms.forward_complexity, "diverging (C_P+ >= E)", diverges(&e_verdict)),
        verdict_cell(column, "C_P-", forms.reverse_complexity, "diverging (C_P- >= E)", diverges(&e_verdict)),
        verdict_cell(column, "PMI", forms.pmi, pmi.label(), diverges(&pmi)),
        verdict_cell(column, "e", forms.efficiency, "undefined", forms.efficiency == Quantity::Undefined),
    ])
}

fn markov_column(column: &str, m: MarkovProcess<f64>) -> anyhow::Result<Vec<Cell>> {
    finite_column(column, &m.closed_forms()?, &m, &m.reversed()?, m.order())
}

/// Every column of the table, in order.
pub fn table1() -> anyhow::Result<Vec<Cell>> {
    let mut cells = Vec::new();
    for cycle in [&[0, 1][..], &[0, 1, 1], &[0, 0, 1, 1, 1]] {
        let p = PeriodicProcess::new(2, Word(cycle.to_vec()))?;
        let name = format!("{}-periodic {}", cycle.len(), p.cycle());
        cells.extend(finite_column(&name, &p.closed_forms()?, &p, &p.reversed()?, p.period()).with_context(|| name.clone())?);
    }
    cells.extend(markov_column("1-Markov", MarkovProcess::new(2, 1, vec![vec![0.9, 0.1], vec![0.2, 0.8]])?)?);
    cells.extend(markov_column(
        "2-Markov",
        MarkovProcess::new(2, 2, vec![vec![0.3, 0.7], vec![0.6, 0.4], vec![0.9, 0.1], vec![0.5, 0.5]])?,
    )?);
    for (name, probs) in [("i.i.d. 0.3/0.7", vec![0.3, 0.7]), ("perfect random", vec![0.5, 0.5])] {
        let c = IidProcess::new(probs)?;
        cells.extend(finite_column(name, &c.closed_forms()?, &c, &c, 0)?);
    }
    cells.extend(thue_morse_column("Thue-Morse")?);
    let ising = IsingChainProcess::new(1.0, 0.0, 0.5)?;
    cells.extend(finite_column("1-D Ising J=1 h=0 beta=0.5", &ising.closed_forms()?, &ising, &ising, 1)?);
    Ok(cells)
}
