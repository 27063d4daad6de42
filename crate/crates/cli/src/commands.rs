//! The subcommands. Each returns a [`Report`]; invariant violations are
//! recorded as failures so that `main` can exit nonzero.

use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_integer::Integer;
use pmi_core::emachine::{complexity_decomposition, reconstruct, EpsilonMachine, DEFAULT_MERGE_TOL};
use pmi_core::measures::{efficiency_from, entropy_curve, gap_mi_grid, pmi_verdict, VerdictTolerances};
use pmi_core::processes::{ising_entropy_rate, IsingChainProcess};
use pmi_core::scalar::format_rational;
use pmi_core::substitution::{
    frequencies_via_shortcut, induced_substitution, minimal_shortcut_power, primitivity, shortcut_commutes,
    shortcut_matrix, Frequencies, Substitution,
};
use pmi_core::{Alphabet, Info, Prob, Rational};
use serde_json::{json, Value};

use crate::model::{load_model, load_sequence, Backend, BackendVisitor, Model, ModelSpec, Scalar};
use crate::output::{coordinate, fixed, float, Format, Report};
use crate::table1::{table1, TABLE_TOL};

#[derive(Parser, Debug)]
#[command(name = "pmi", version, about = "Entropy, excess entropy, persistent mutual information and statistical complexity of symbolic processes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
    /// Write to a file instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Block entropies H(L), increments, entropy rate and excess entropy.
    Entropy(EntropyArgs),
    /// Gap mutual-information grid E(L, g) and the PMI verdict.
    Pmi(PmiArgs),
    /// Closed forms against computed values for the reference models.
    Table1,
    /// Factor frequencies and shortcut matrices of a substitution.
    Substitution(SubstitutionArgs),
    /// Temperature sweep of the 1-D Ising chain.
    Ising(IsingArgs),
    /// Causal-state reconstruction and the complexity decomposition.
    Machine(MachineArgs),
}

#[derive(Args, Debug, Clone)]
pub struct SourceArgs {
    /// Model JSON file or built-in name (tm, fib, coin, goldenmean).
    #[arg(long, required_unless_present = "seq")]
    pub model: Option<String>,
    /// One-line symbol file for plug-in estimates.
    #[arg(long, conflicts_with = "model")]
    pub seq: Option<PathBuf>,
    /// Comma-separated labels for --seq (inferred when absent).
    #[arg(long, requires = "seq")]
    pub alphabet: Option<String>,
    #[arg(long, value_enum, default_value_t = Backend::Float)]
    pub backend: Backend,
    /// Symbols drawn from sampled-only models (logistic map).
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,
}

impl SourceArgs {
    pub fn load(&self) -> anyhow::Result<Model> {
        let model = match (&self.model, &self.seq) {
            (Some(m), None) => load_model(m)?,
            (None, Some(path)) => load_sequence(path, self.alphabet.as_deref())?,
            _ => bail!("give exactly one of --model and --seq"),
        };
        if self.backend == Backend::Exact && !model.supports_exact() {
            bail!("the exact backend needs rational block probabilities; the {} model has none (use --backend float)", model.name());
        }
        model.materialize(self.samples)
    }
}

#[derive(Args, Debug, Clone)]
pub struct EntropyArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long = "Lmax", alias = "lmax", default_value_t = 10)]
    pub l_max: usize,
}

#[derive(Args, Debug, Clone)]
pub struct PmiArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Block lengths, ascending.
    #[arg(long = "Lgrid", alias = "lgrid", value_delimiter = ',', default_value = "1,2,3,4")]
    pub l_grid: Vec<usize>,
    /// Gaps, ascending.
    #[arg(long = "ggrid", value_delimiter = ',', default_value = "0,1,2,4,8,16,32,64")]
    pub g_grid: Vec<usize>,
    /// Tail tolerance in g (default 1e-6, or 10x the noise floor for sequences).
    #[arg(long)]
    pub eps_g: Option<f64>,
    /// Tail tolerance in L (same defaults as --eps-g).
    #[arg(long)]
    pub eps_l: Option<f64>,
    /// Growth per unit L counted as divergence, in bits.
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
}

#[derive(Args, Debug, Clone)]
pub struct SubstitutionArgs {
    /// tm, fib, a model JSON file, or inline rules such as "0:01,1:10".
    #[arg(long, default_value = "tm")]
    pub rules: String,
    /// Start letter for inline rules (defaults to the first rule).
    #[arg(long)]
    pub start: Option<String>,
    /// Factor length.
    #[arg(long, default_value_t = 2)]
    pub l: usize,
    /// Print the shortcut matrix M_{2,l,p} and its checks.
    #[arg(long)]
    pub show_shortcut: bool,
    /// Power of the shortcut (defaults to the smallest valid one).
    #[arg(long)]
    pub p: Option<u32>,
}

#[derive(Args, Debug, Clone)]
pub struct IsingArgs {
    #[arg(long = "J", alias = "j", default_value_t = 1.0, allow_hyphen_values = true)]
    pub coupling: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub h: f64,
    #[arg(long, default_value_t = 0.1)]
    pub tmin: f64,
    #[arg(long, default_value_t = 10.0)]
    pub tmax: f64,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    /// Space temperatures logarithmically.
    #[arg(long)]
    pub log: bool,
}

#[derive(Args, Debug, Clone)]
pub struct MachineArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// History length R.
    #[arg(long = "history", short = 'R')]
    pub history: usize,
    /// Future length F (defaults to max(R, 1)).
    #[arg(long = "future", short = 'F')]
    pub future: Option<usize>,
    /// Merge tolerance in total variation (ignored by the exact backend).
    #[arg(long, default_value_t = DEFAULT_MERGE_TOL)]
    pub tol: f64,
}

/// `value` plus, on the exact backend, its exact form.
fn info_cells<I: Info>(value: &I, exact: bool) -> Vec<String> {
    let mut v = vec![float(value.to_f64())];
    if exact {
        v.push(value.to_string());
    }
    v
}

fn info_json<I: Info>(value: &I, exact: bool) -> Value {
    if exact {
        json!({"bits": value.to_f64(), "exact": value.to_string()})
    } else {
        json!(value.to_f64())
    }
}

struct EntropyJob(usize);

impl BackendVisitor for EntropyJob {
    type Output = Report;

    fn visit<P: Scalar>(self, model: &Model) -> anyhow::Result<Report> {
        let source = model.source::<P>()?;
        let curve = entropy_curve::<P, _>(&*source, self.0)?;
        let mut headers = vec!["L", "H_bits", "dH_bits"];
        if P::EXACT {
            headers.extend(["H_exact", "dH_exact"]);
        }
        let mut report = Report::new(headers);
        let mut rows = Vec::new();
        for l in 1..=self.0 {
            let (h, d) = (curve.entropy(l).unwrap(), curve.increment(l).unwrap());
            let mut cells = vec![l.to_string(), float(h.to_f64()), float(d.to_f64())];
            if P::EXACT {
                cells.extend([h.to_string(), d.to_string()]);
            }
            report.row(cells);
            rows.push(json!({"L": l, "H": info_json(h, P::EXACT), "dH": info_json(d, P::EXACT)}));
        }
        report.note("h_hat = dH(Lmax)", info_cells(&curve.entropy_rate, P::EXACT).join("  "));
        report.note("E_hat = H(Lmax) - Lmax*h_hat", info_cells(&curve.excess_entropy, P::EXACT).join("  "));
        report.note("H(Lmax)/Lmax", float(curve.entropy_rate_by_average()));
        if !curve.is_concave(1e-9) {
            // Plug-in estimates from one finite sequence need not be concave.
            if matches!(model, Model::Empirical { .. }) {
                report.note("warning", "plug-in block entropies are not concave in L");
            } else {
                report.fail("block entropy is not concave in L");
            }
        }
        report.json = json!({
            "model": model.name(),
            "backend": if P::EXACT { "exact" } else { "float" },
            "curve": rows,
            "entropy_rate": info_json(&curve.entropy_rate, P::EXACT),
            "excess_entropy": info_json(&curve.excess_entropy, P::EXACT),
        });
        Ok(report)
    }
}

pub fn cmd_entropy(args: &EntropyArgs) -> anyhow::Result<Report> {
    let model = args.source.load()?;
    model.dispatch(args.source.backend, EntropyJob(args.l_max))
}

struct PmiJob<'a>(&'a PmiArgs);

impl BackendVisitor for PmiJob<'_> {
    type Output = Report;

    fn visit<P: Scalar>(self, model: &Model) -> anyhow::Result<Report> {
        let args = self.0;
        let source = model.source::<P>()?;
        let grid = gap_mi_grid::<P, _>(&*source, &args.l_grid, &args.g_grid)?;
        let empirical = match model {
            Model::Empirical { source, .. } => Some(source.noise_floor(*args.l_grid.last().unwrap())),
            _ => None,
        };
        let mut tol = match empirical {
            Some(noise) => VerdictTolerances::empirical(noise),
            None => VerdictTolerances::default(),
        };
        tol.eps_g = args.eps_g.unwrap_or(tol.eps_g);
        tol.eps_l = args.eps_l.unwrap_or(tol.eps_l);
        tol.delta = args.delta;
        let verdict = pmi_verdict(&grid.to_f64(), tol)?;
        let mut headers = vec!["L", "g", "E_bits"];
        if P::EXACT {
            headers.push("E_exact");
        }
        let mut report = Report::new(headers);
        for (&(l, g), v) in &grid.values {
            let mut cells = vec![l.to_string(), g.to_string(), float(v.to_f64())];
            if P::EXACT {
                cells.push(v.to_string());
            }
            report.row(cells);
        }
        report.note("verdict", verdict.verdict.label());
        if let Some(v) = verdict.verdict.value() {
            report.note("PMI_bits", float(v));
        }
        if let Some(s) = verdict.tail_slope {
            report.note("tail slope (bits per L)", float(s));
        }
        if !grid.missing.is_empty() {
            report.note("missing cells", grid.missing.len());
        }
        if grid.min_value() < -1e-12 {
            report.fail(format!("negative mutual information {}", grid.min_value()));
        }
        if empirical.is_none() && !verdict.monotone_in_length {
            report.fail("E(L, g) decreases in L at fixed g");
        }
        let cells: Vec<Value> = grid
            .values
            .iter()
            .map(|(&(l, g), v)| json!({"L": l, "g": g, "E": info_json(v, P::EXACT)}))
            .collect();
        let missing: Vec<Value> =
            grid.missing.iter().map(|(&(l, g), why)| json!({"L": l, "g": g, "reason": why})).collect();
        let tails: Vec<Value> = verdict
            .tails
            .iter()
            .map(|t| {
                json!({"L": t.l, "g_max": t.g_max, "value": t.value, "change": t.change,
                       "decay_rate": t.decay_rate, "monotone_in_gap": t.monotone_in_gap})
            })
            .collect();
        report.json = json!({
            "model": model.name(),
            "backend": if P::EXACT { "exact" } else { "float" },
            "L_grid": args.l_grid,
            "g_grid": args.g_grid,
            "cells": cells,
            "missing": missing,
            "tails": tails,
            "verdict": {"kind": verdict.verdict.label(), "value": verdict.verdict.value(),
                        "uncertainty": match verdict.verdict {
                            pmi_core::measures::PmiVerdict::Converged { uncertainty, .. } => Some(uncertainty),
                            _ => None }},
            "tolerances": {"eps_g": tol.eps_g, "eps_l": tol.eps_l, "delta": tol.delta},
            "monotone_in_length": verdict.monotone_in_length,
            "tail_slope": verdict.tail_slope,
        });
        Ok(report)
    }
}

pub fn cmd_pmi(args: &PmiArgs) -> anyhow::Result<Report> {
    let model = args.source.load()?;
    model.dispatch(args.source.backend, PmiJob(args))
}

pub fn cmd_table1() -> anyhow::Result<Report> {
    let cells = table1()?;
    let mut report = Report::new(["column", "quantity", "closed_form", "computed", "abs_diff", "status"]);
    for c in &cells {
        report.row(vec![
            c.column.clone(),
            c.quantity.into(),
            c.expected.clone(),
            c.computed.clone(),
            c.diff.map_or_else(|| "-".into(), |d| format!("{d:.2e}")),
            if c.ok { "ok" } else { "MISMATCH" }.into(),
        ]);
        if !c.ok {
            report.fail(format!("{} / {}: closed form {} vs {}", c.column, c.quantity, c.expected, c.computed));
        }
    }
    report.note("tolerance (bits)", TABLE_TOL);
    report.note("cells", cells.len());
    report.json = json!({ "tolerance": TABLE_TOL, "cells": cells });
    Ok(report)
}

/// `tm`, `fib`, a JSON model file, or inline `a:img,b:img` rules.
pub fn parse_rules(text: &str, start: Option<&str>) -> anyhow::Result<(Alphabet, Substitution)> {
    if let Ok(Model::Substitution { alphabet, process }) = load_model(text) {
        return Ok((alphabet, process.substitution().clone()));
    }
    if !text.contains(':') {
        bail!("{text:?} is neither a substitution model nor inline rules like \"0:01,1:10\"");
    }
    let mut rules = std::collections::BTreeMap::new();
    let mut first = None;
    for part in text.split(',') {
        let (a, img) = part.split_once(':').with_context(|| format!("rule {part:?} lacks ':'"))?;
        first.get_or_insert_with(|| a.trim().to_string());
        rules.insert(a.trim().to_string(), img.trim().to_string());
    }
    let start = start.map(String::from).or(first).unwrap();
    match (ModelSpec::Substitution { rules, start }).load()? {
        Model::Substitution { alphabet, process } => Ok((alphabet, process.substitution().clone())),
        _ => unreachable!(),
    }
}

fn frequency_cells(f: &Frequencies, i: usize) -> (String, String) {
    match f {
        Frequencies::Exact(v) => (format_rational(&v[i]), float(v[i].to_f64())),
        Frequencies::Float(v) => ("-".into(), float(v[i])),
    }
}

pub fn cmd_substitution(args: &SubstitutionArgs) -> anyhow::Result<Report> {
    let (alphabet, z) = parse_rules(&args.rules, args.start.as_deref())?;
    if args.l == 0 {
        bail!("--l must be positive");
    }
    let pf = primitivity(&z.composition_matrix())?;
    let table = frequencies_via_shortcut(&z, args.l)?;
    let mut report = Report::new(["factor", "frequency", "frequency_float"]);
    let mut json_rows = Vec::new();
    for (i, w) in table.factors.iter().enumerate() {
        let (exact, fl) = frequency_cells(&table.frequencies, i);
        report.row(vec![alphabet.render(w), exact.clone(), fl.clone()]);
        json_rows.push(json!({"factor": alphabet.render(w), "frequency": exact, "float": table.frequencies.to_f64()[i]}));
    }
    let total: f64 = table.frequencies.to_f64().iter().sum();
    if let Some(v) = table.frequencies.exact() {
        let sum = v.iter().fold(Rational::from_integer(0.into()), |a, x| a + x);
        if sum != Rational::from_integer(1.into()) {
            report.fail(format!("frequencies sum to {sum}"));
        }
    } else if (total - 1.0).abs() > 1e-12 {
        report.fail(format!("frequencies sum to {total}"));
    }
    report.note("factors", table.len());
    report.note("Perron value", float(pf.theta));
    report.note("primitive", pf.primitive);
    let mut doc = json!({"length": args.l, "factors": json_rows, "perron_value": pf.theta});
    if args.show_shortcut {
        let p = args.p.unwrap_or_else(|| minimal_shortcut_power(&z, args.l));
        let s = shortcut_matrix(&z, args.l, p)?;
        let v2 = frequencies_via_shortcut(&z, 2)?;
        let cols: Vec<String> = s.cols.iter().map(|w| alphabet.render(w)).collect();
        let rows: Vec<String> = s.rows.iter().map(|w| alphabet.render(w)).collect();
        let matrix = s.matrix.to_rows();
        report.note(&format!("M_{{2,{},{}}} columns", args.l, p), cols.join(" "));
        for (r, row) in rows.iter().zip(&matrix) {
            report.note(&format!("  {r}"), row.iter().map(u64::to_string).collect::<Vec<_>>().join(" "));
        }
        // v₂ and M · v₂ over the common denominator of v₂ when it is rational.
        let (v2_text, product) = match v2.frequencies.exact() {
            Some(v) => {
                let d = v.iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
                let scaled: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(d.clone())).to_integer()).collect();
                let m = s.matrix.map(|&x| BigInt::from(x));
                let prod = m.apply(&scaled);
                let join = |xs: &[BigInt]| xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
                (format!("({})/{d}", join(&scaled)), format!("({})/{d}", join(&prod)))
            }
            None => {
                let v = v2.frequencies.to_f64();
                let prod = s.matrix.map(|&x| x as f64).apply(&v);
                let join = |xs: &[f64]| xs.iter().map(|x| float(*x)).collect::<Vec<_>>().join(" ");
                (join(&v), join(&prod))
            }
        };
        report.note("v2", &v2_text);
        report.note("M v2", &product);
        let commutes = args.l >= 2 && shortcut_commutes(&z, args.l, p)?;
        report.note("M_{2,l,p} M_2 = M_l M_{2,l,p}", commutes);
        if args.l >= 2 && !commutes {
            report.fail("shortcut matrix does not commute with the induced matrices");
        }
        if args.l >= 2 {
            report.note("|Omega_l| via induced substitution", induced_substitution(&z, args.l)?.factors.len());
        }
        doc["shortcut"] = json!({
            "power": p, "rows": rows, "columns": cols, "matrix": matrix,
            "v2": v2_text, "product": product, "commutes": commutes,
        });
    }
    report.json = doc;
    Ok(report)
}

/// `T` grid of the sweep, ascending.
pub fn temperatures(args: &IsingArgs) -> anyhow::Result<Vec<f64>> {
    if !(args.tmin > 0.0 && args.tmax > args.tmin) || args.steps < 2 {
        bail!("need 0 < tmin < tmax and at least two steps");
    }
    let n = args.steps - 1;
    Ok((0..=n)
        .map(|i| {
            let t = i as f64 / n as f64;
            if args.log {
                args.tmin * (args.tmax / args.tmin).powf(t)
            } else {
                args.tmin + t * (args.tmax - args.tmin)
            }
        })
        .collect())
}

/// Nondecreasing then nonincreasing, up to `tol`.
pub fn is_unimodal(values: &[f64], tol: f64) -> bool {
    let peak = values.iter().enumerate().fold(0, |best, (i, &v)| if v > values[best] { i } else { best });
    values[..=peak].windows(2).all(|w| w[1] >= w[0] - tol) && values[peak..].windows(2).all(|w| w[1] <= w[0] + tol)
}

pub fn cmd_ising(args: &IsingArgs) -> anyhow::Result<Report> {
    let mut report = Report::new(["T", "h_P", "E", "C_P", "PMI"]);
    let mut excess = Vec::new();
    let mut rows = Vec::new();
    for t in temperatures(args)? {
        let chain = IsingChainProcess::from_temperature(args.coupling, args.h, t)?;
        let beta = 1.0 / t;
        let rate = ising_entropy_rate(args.coupling, args.h, beta)?;
        let curve = entropy_curve::<f64, _>(&chain, 2)?;
        let h1 = *curve.entropy(1).unwrap();
        let e = (h1 - rate).max(0.0);
        // The thermodynamic rate must agree with H(S₁ | S₀) of the chain.
        if (curve.entropy_rate - rate).abs() > 1e-9 {
            report.fail(format!("T = {t}: thermodynamic entropy {rate} vs conditional entropy {}", curve.entropy_rate));
        }
        report.row(vec![coordinate(t), fixed(rate), fixed(e), fixed(h1), "0".into()]);
        rows.push(json!({"T": t, "h_P": rate, "E": e, "C_P": h1, "PMI": 0.0}));
        excess.push(e);
    }
    let peak = excess.iter().enumerate().fold(0, |b, (i, &v)| if v > excess[b] { i } else { b });
    let unimodal = is_unimodal(&excess, 1e-12);
    report.note("E unimodal in T", unimodal);
    report.note("argmax_T E", coordinate(temperatures(args)?[peak]));
    report.note("max E", fixed(excess[peak]));
    report.note("E at tmax", fixed(*excess.last().unwrap()));
    if !unimodal {
        report.fail("E(T) is not unimodal");
    }
    report.json = json!({"J": args.coupling, "h": args.h, "rows": rows, "unimodal": unimodal});
    Ok(report)
}

struct MachineJob<'a>(&'a MachineArgs);

fn machine_json<P: Prob>(m: &EpsilonMachine<P>, alphabet: &Alphabet) -> Value {
    let states: Vec<Value> = m
        .states()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            json!({"id": i, "probability": s.probability.to_f64(), "probability_exact": s.probability.to_string(),
                   "histories": s.histories.iter().map(|h| alphabet.render(h)).collect::<Vec<_>>()})
        })
        .collect();
    let mut transitions = Vec::new();
    for (i, row) in m.transitions().iter().enumerate() {
        for (x, t) in row.iter().enumerate() {
            if let Some((j, p)) = t {
                transitions.push(json!({"from": i, "symbol": alphabet.label(x as u32), "to": j,
                                        "probability": p.to_f64(), "probability_exact": p.to_string()}));
            }
        }
    }
    json!({"history_length": m.history_length(), "future_length": m.future_length(), "states": states,
           "transitions": transitions, "statistical_complexity": m.statistical_complexity().to_f64()})
}

impl BackendVisitor for MachineJob<'_> {
    type Output = Report;

    fn visit<P: Scalar>(self, model: &Model) -> anyhow::Result<Report> {
        let args = self.0;
        let tol = if P::EXACT { 0.0 } else { args.tol };
        let future = args.future.unwrap_or(args.history.max(1));
        let alphabet = model.alphabet();
        let source = model.source::<P>()?;
        let forward = reconstruct::<P, _>(&*source, args.history, future, tol)?;
        let mut report = Report::new(["from", "symbol", "to", "probability"]);
        for (i, row) in forward.transitions().iter().enumerate() {
            for (x, t) in row.iter().enumerate() {
                if let Some((j, p)) = t {
                    let prob = if P::EXACT { format!("{} ({})", p, float(p.to_f64())) } else { float(p.to_f64()) };
                    report.row(vec![i.to_string(), alphabet.label(x as u32).unwrap_or("?").into(), j.to_string(), prob]);
                }
            }
        }
        for (i, s) in forward.states().iter().enumerate() {
            let hist: Vec<String> = s.histories.iter().map(|h| alphabet.render(h)).collect();
            report.note(&format!("state {i}"), format!("p = {}  histories {}", s.probability, hist.join(" ")));
        }
        report.note("C_P+", info_cells(&forward.statistical_complexity(), P::EXACT).join("  "));
        if !forward.is_consistent() {
            report.fail("reconstructed machine is inconsistent");
        }
        let mut doc = json!({"model": model.name(), "forward": machine_json(&forward, &alphabet)});
        match model.reversed() {
            Ok(rev_model) => {
                let rev_source = rev_model.source::<P>()?;
                let reverse = reconstruct::<P, _>(&*rev_source, args.history, future, tol)?;
                let d = complexity_decomposition(&forward, &reverse, &*source)?;
                report.note("C_P-", info_cells(&d.reverse_complexity, P::EXACT).join("  "));
                report.note("E = I(S+; S-)", info_cells(&d.excess_entropy, P::EXACT).join("  "));
                report.note("H(S+ | S-)", info_cells(&d.forward_given_reverse, P::EXACT).join("  "));
                report.note("H(S- | S+)", info_cells(&d.reverse_given_forward, P::EXACT).join("  "));
                let eff = efficiency_from(d.excess_entropy.to_f64(), d.forward_complexity.to_f64())?;
                report.note("e", float(eff.efficiency));
                doc["reverse"] = machine_json(&reverse, &alphabet);
                doc["decomposition"] = json!({
                    "excess_entropy": info_json(&d.excess_entropy, P::EXACT),
                    "forward_given_reverse": info_json(&d.forward_given_reverse, P::EXACT),
                    "reverse_given_forward": info_json(&d.reverse_given_forward, P::EXACT),
                    "forward_complexity": info_json(&d.forward_complexity, P::EXACT),
                    "reverse_complexity": info_json(&d.reverse_complexity, P::EXACT),
                    "efficiency": eff.efficiency,
                });
            }
            Err(e) => report.note("reverse machine", format!("unavailable: {e}")),
        }
        report.json = doc;
        Ok(report)
    }
}

pub fn cmd_machine(args: &MachineArgs) -> anyhow::Result<Report> {
    let model = args.source.load()?;
    model.dispatch(args.source.backend, MachineJob(args))
}

pub fn run(command: &Command) -> anyhow::Result<Report> {
    match command {
        Command::Entropy(a) => cmd_entropy(a),
        Command::Pmi(a) => cmd_pmi(a),
        Command::Table1 => cmd_table1(),
        Command::Substitution(a) => cmd_substitution(a),
        Command::Ising(a) => cmd_ising(a),
        Command::Machine(a) => cmd_machine(a),
    }
}
