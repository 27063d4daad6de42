//! Acceptance suite: one line per criterion, nonzero exit on any
//! unexpected failure.
//!
//! A criterion that fails for a documented mathematical reason is reported
//! as `FAIL (known)`; it only counts as known when the failure has exactly
//! the documented shape, so any drift still fails the run.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{ensure, Context};
use num_bigint::BigInt;
use pmi_cli::commands::{cmd_ising, is_unimodal, IsingArgs};
use pmi_cli::table1::table1;
use pmi_core::emachine::{complexity_decomposition, machine_excess_entropy, reconstruct, DEFAULT_MERGE_TOL};
use pmi_core::measures::{
    efficiency, entropy_curve, gap_mi_grid, pmi_verdict, PmiVerdict, VerdictTolerances,
};
use pmi_core::processes::{
    BlockSource, ClosedForm, EmpiricalSource, IidProcess, MarkovProcess, PeriodicProcess, Sample, TimeReversal,
};
use pmi_core::substitution::{
    factor_frequencies, forbidden_words_check, frequencies_via_shortcut, shortcut_commutes, shortcut_matrix,
    thue_morse_block_entropy_increment, thue_morse_complexity_increment, complexity_function, Substitution,
    SubstitutionProcess, FORBIDDEN_WORDS,
};
use pmi_core::{Info, LogSum, Rational, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

enum Outcome {
    Pass(String),
    /// Fails with exactly the documented shape.
    KnownFail(String),
}

type Check = fn() -> anyhow::Result<Outcome>;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

// ---------------------------------------------------------------- 1

fn tm_frequencies() -> anyhow::Result<Outcome> {
    let start = Instant::now();
    let tm = Substitution::thue_morse();
    let mut factors = 0;
    for l in 2..=16usize {
        let k = (0..).find(|&k| (1usize << k) + 1 <= l && l <= 1 << (k + 1)).unwrap();
        let allowed = [q(1, 3 << k), q(1, 6 << k)];
        let table = frequencies_via_shortcut(&tm, l)?;
        let freqs = table.frequencies.exact().context("frequencies not exact")?;
        for (w, f) in table.factors.iter().zip(freqs) {
            ensure!(allowed.contains(f), "l = {l}: factor {w} has frequency {f}");
        }
        let total = freqs.iter().fold(q(0, 1), |a, f| a + f);
        ensure!(total == q(1, 1), "l = {l}: frequencies sum to {total}");
        factors += table.len();
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    Ok(Outcome::Pass(format!("{factors} factors over l = 2..16, all 1/(3·2^k) or 1/(6·2^k) exactly, {elapsed:.2?}")))
}

// ---------------------------------------------------------------- 2

fn shortcut_worked_example() -> anyhow::Result<Outcome> {
    let tm = Substitution::thue_morse();
    let s = shortcut_matrix(&tm, 5, 3)?;
    ensure!(s.rows.len() == 12 && s.cols.len() == 4, "shape {}x{}", s.rows.len(), s.cols.len());
    // Rows in the order the worked example lists the factors.
    let listed = [
        ("00101", [1, 0, 1, 1]),
        ("00110", [0, 1, 1, 0]),
        ("01001", [1, 1, 0, 1]),
        ("01011", [1, 0, 1, 1]),
        ("01100", [0, 1, 1, 0]),
        ("01101", [1, 1, 0, 1]),
        ("11010", [1, 1, 0, 1]),
        ("11001", [0, 1, 1, 0]),
        ("10110", [1, 0, 1, 1]),
        ("10100", [1, 1, 0, 1]),
        ("10011", [0, 1, 1, 0]),
        ("10010", [1, 0, 1, 1]),
    ];
    for (w, row) in listed {
        let word = Word(w.bytes().map(|b| (b - b'0') as u32).collect());
        let i = s.row_of(&word).with_context(|| format!("{w} missing"))?;
        ensure!(s.matrix.row(i) == row, "row {w}: {:?}", s.matrix.row(i));
    }
    let v2 = factor_frequencies(&tm, 2)?;
    ensure!(v2.frequencies.exact() == Some(&[q(1, 6), q(1, 3), q(1, 3), q(1, 6)][..]), "v2 = {:?}", v2.frequencies);
    let product = s.matrix.apply(&[1, 2, 2, 1]);
    ensure!(product.iter().all(|&x| x == 4), "M·v2 = {product:?}");
    let f5 = frequencies_via_shortcut(&tm, 5)?;
    ensure!(f5.frequencies.exact().unwrap().iter().all(|f| *f == q(1, 12)), "normalized frequencies");
    ensure!(shortcut_commutes(&tm, 5, 3)?, "M_{{2,5,3}}·M_2 != M_5·M_{{2,5,3}}");
    Ok(Outcome::Pass("12x4 matrix as listed, v2 = (1,2,2,1)/6, M·v2 = (4,…,4), all 1/12, commutation exact".into()))
}

// ---------------------------------------------------------------- 3

/// The branch formula read literally with `ΔH(n) = H(n) − H(n−1)`.
fn literal_branch(n: usize) -> Option<Rational> {
    let k = (1..usize::BITS).find(|&k| (1usize << k) + 1 <= n && n <= 1 << (k + 1))?;
    let first = n <= 3 << (k - 1);
    Some(if first { q(4, 3 << k) } else { q(2, 3 << k) })
}

fn tm_entropy_increments() -> anyhow::Result<Outcome> {
    let tm = SubstitutionProcess::thue_morse();
    let curve = entropy_curve::<Rational, _>(&tm, 17)?;
    let computed = |n: usize| curve.increment(n).unwrap().clone();
    // Complexity increments: literal ranges, n = 3..64.
    let z = Substitution::thue_morse();
    for n in 3..=64 {
        let d = complexity_function(&z, n + 1)? - complexity_function(&z, n)?;
        let k = (1..).find(|&k| (1usize << k) + 1 <= n && n <= 1 << (k + 1)).unwrap();
        let expect = if n <= 3 << (k - 1) { 4 } else { 2 };
        ensure!(d == expect && d == thue_morse_complexity_increment(n), "p({})−p({n}) = {d}", n + 1);
    }
    let mut literal_misses = Vec::new();
    for n in 2..=17 {
        let ok = literal_branch(n).is_some_and(|v| LogSum::from_rational(v) == computed(n));
        if !ok {
            literal_misses.push(n);
        }
    }
    if literal_misses.is_empty() {
        return Ok(Outcome::Pass("ΔH(n) matches the branch formula for n = 2..17".into()));
    }
    // Documented shape: the branches describe H(n+1) − H(n); n = 2 has none.
    let shifted_ok = (4..=17).all(|n| literal_branch(n - 1).map(LogSum::from_rational) == Some(computed(n)));
    let log3 = LogSum::log2(&q(3, 1));
    let dh2_ok = computed(2) == log3 - LogSum::from_rational(q(2, 3));
    let dh2_pair = computed(2).as_log3_pair();
    let dh3_ok = computed(3) == LogSum::from_rational(q(2, 3));
    let library_ok = (2..=17).all(|n| thue_morse_block_entropy_increment(n).ok() == Some(computed(n)));
    ensure!(
        literal_misses == [2, 4, 7, 13] && shifted_ok && dh2_ok && dh3_ok && library_ok,
        "unexpected failure shape: literal misses {literal_misses:?}, shifted {shifted_ok}, ΔH(2) {dh2_ok}, ΔH(3) {dh3_ok}, library {library_ok}"
    );
    Ok(Outcome::KnownFail(format!(
        "literal branches miss n = {literal_misses:?}: ΔH(2) = {} (a, b) = {:?} fits no branch; at n = 4, 7, 13 the \
         exact increments are 2/3, 1/3, 1/6 — the branch values hold for n − 1 (n = 4..17); complexity increments hold for n = 3..64",
        computed(2),
        dh2_pair.map(|(a, b)| (a.to_string(), b.to_string())),
    )))
}

// ---------------------------------------------------------------- 4

fn table_one() -> anyhow::Result<Outcome> {
    let start = Instant::now();
    let cells = table1()?;
    let elapsed = start.elapsed();
    let bad: Vec<String> = cells.iter().filter(|c| !c.ok).map(|c| format!("{}/{}", c.column, c.quantity)).collect();
    ensure!(bad.is_empty(), "mismatched cells: {bad:?}");
    let tm: Vec<&str> = cells
        .iter()
        .filter(|c| c.column == "Thue-Morse" && (c.quantity == "E" || c.quantity == "PMI"))
        .map(|c| c.computed.as_str())
        .collect();
    ensure!(tm == ["diverging", "diverging"], "Thue-Morse E/PMI: {tm:?}");
    let worst = cells.iter().filter_map(|c| c.diff).fold(0.0, f64::max);
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(Outcome::Pass(format!(
        "{} cells, largest finite diff {worst:.1e} bits, Thue-Morse E and PMI diverging, {elapsed:.2?}",
        cells.len()
    )))
}

// ---------------------------------------------------------------- 5

/// `|λ₂|` from matrix powers: the contraction ratio of `‖Tⁿ − 1π‖`.
fn second_eigenvalue_by_powers(kernel: &[Vec<f64>], pi: &[f64]) -> f64 {
    let n = kernel.len();
    let mul = |a: &Vec<Vec<f64>>, b: &Vec<Vec<f64>>| -> Vec<Vec<f64>> {
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
    };
    let dist = |m: &Vec<Vec<f64>>| -> f64 {
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| (m[i][j] - pi[j]).abs()).fold(0.0, f64::max)
    };
    let t = kernel.to_vec();
    let mut power = t.clone();
    let steps = 12;
    for _ in 1..steps {
        power = mul(&power, &t);
    }
    let before = dist(&power);
    let after = dist(&mul(&power, &t));
    after / before
}

fn pmi_verdicts() -> anyhow::Result<Outcome> {
    let mut notes = Vec::new();
    for p in 2..=6usize {
        let mut cycle = vec![0; p - 1];
        cycle.push(1);
        let proc = PeriodicProcess::new(2, Word(cycle))?;
        let l_grid: Vec<usize> = (1..=p + 2).collect();
        let r = pmi_verdict(&gap_mi_grid::<f64, _>(&proc, &l_grid, &[0, 1, 2, 4, 8])?, VerdictTolerances::default())?;
        match r.verdict {
            PmiVerdict::Converged { value, .. } => {
                ensure!((value - (p as f64).log2()).abs() <= 1e-9, "period {p}: PMI {value}")
            }
            v => anyhow::bail!("period {p}: {v:?}"),
        }
    }
    notes.push("periods 2..6 converged to log2 p".to_string());
    let chains = [
        vec![vec![0.9, 0.1], vec![0.2, 0.8]],
        vec![vec![0.6, 0.4], vec![0.3, 0.7]],
        vec![vec![0.8, 0.15, 0.05], vec![0.1, 0.8, 0.1], vec![0.05, 0.15, 0.8]],
    ];
    let mut worst = 0.0f64;
    for kernel in chains {
        let m = MarkovProcess::new(kernel.len(), 1, kernel.clone())?;
        let r = pmi_verdict(&gap_mi_grid::<f64, _>(&m, &[1, 2, 3], &[0, 1, 2, 4, 8, 16, 24, 32, 48, 64])?, VerdictTolerances::default())?;
        let value = r.verdict.value().with_context(|| format!("{kernel:?}: {:?}", r.verdict))?;
        ensure!(value.abs() <= 1e-6, "{kernel:?}: PMI {value}");
        let lambda = second_eigenvalue_by_powers(&kernel, m.stationary());
        for t in &r.tails {
            let rate = t.decay_rate.context("no decay rate")?;
            let rel = (rate - lambda * lambda).abs() / (lambda * lambda);
            worst = worst.max(rel);
            ensure!(rel <= 0.10, "{kernel:?} L = {}: decay {rate} vs |λ2|² = {}", t.l, lambda * lambda);
        }
    }
    notes.push(format!("Markov chains converged to 0, decay within {:.2}% of |λ2|²", 100.0 * worst));
    let tm = SubstitutionProcess::thue_morse();
    let l_grid: Vec<usize> = (1..=13).collect();
    let g_grid: Vec<usize> = (0..=24).collect();
    let grid = gap_mi_grid::<f64, _>(&tm, &l_grid, &g_grid)?;
    let r = pmi_verdict(&grid, VerdictTolerances::default())?;
    ensure!(r.verdict == PmiVerdict::Diverging, "Thue-Morse: {:?}", r.verdict);
    notes.push(format!("Thue-Morse diverging (L ≤ 13 under the 2^26 cap, slope {:.3} bits/L)", r.tail_slope.unwrap()));
    Ok(Outcome::Pass(notes.join("; ")))
}

// ---------------------------------------------------------------- 6, 7, 8

/// Seeded random kernels: orders 1 and 2, binary and ternary, entries
/// bounded away from zero; four order-1 kernels repeat a row.
fn random_kernels() -> Vec<MarkovProcess<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_241_014);
    let mut out = Vec::new();
    for i in 0..24 {
        let (arity, order) = [(2, 1), (3, 1), (2, 2), (3, 2)][i % 4];
        let contexts = arity_pow(arity, order);
        let mut rows: Vec<Vec<f64>> = (0..contexts)
            .map(|_| {
                let raw: Vec<f64> = (0..arity).map(|_| rng.gen_range(0.05..1.0)).collect();
                let s: f64 = raw.iter().sum();
                raw.into_iter().map(|x| x / s).collect()
            })
            .collect();
        if order == 1 && i % 8 == 0 {
            rows[1] = rows[0].clone();
        }
        out.push(MarkovProcess::new(arity, order, rows).unwrap());
    }
    out
}

fn arity_pow(s: usize, r: usize) -> usize {
    s.pow(r as u32)
}

fn distinct_rows(m: &MarkovProcess<f64>) -> usize {
    let rows: BTreeSet<Vec<u64>> = m.kernel().iter().map(|r| r.iter().map(|x| x.to_bits()).collect()).collect();
    rows.len()
}

/// All primitive binary cycles of length ≤ 6, one per rotation class.
fn binary_necklaces() -> Vec<PeriodicProcess> {
    let mut out = Vec::new();
    for p in 1..=6usize {
        let mut seen = BTreeSet::new();
        for bits in 0..(1u32 << p) {
            let w: Vec<u32> = (0..p).map(|i| (bits >> i) & 1).collect();
            let canon = (0..p).map(|r| [&w[r..], &w[..r]].concat()).min().unwrap();
            if seen.insert(canon.clone()) {
                if let Ok(proc) = PeriodicProcess::new(2, Word(canon)) {
                    out.push(proc);
                }
            }
        }
    }
    out
}

const INEQ_TOL: f64 = 1e-9;

struct Measured {
    pmi: f64,
    excess: f64,
    complexity: f64,
    efficiency: f64,
}

fn measure<S: BlockSource<f64> + ?Sized>(source: &S, memory: usize) -> anyhow::Result<Measured> {
    let curve = entropy_curve::<f64, _>(source, memory + 2)?;
    let machine = reconstruct::<f64, _>(source, memory, memory.max(1), DEFAULT_MERGE_TOL)?;
    let l_grid: Vec<usize> = (1..=(memory + 3).max(3)).collect();
    let r = pmi_verdict(&gap_mi_grid::<f64, _>(source, &l_grid, &[0, 1, 2, 4, 8, 12, 16, 32, 64])?, VerdictTolerances::default())?;
    let pmi = r.verdict.value().with_context(|| format!("PMI verdict {:?}", r.verdict))?;
    let eff = efficiency(curve.excess_entropy, &machine)?;
    Ok(Measured { pmi, excess: curve.excess_entropy, complexity: machine.statistical_complexity(), efficiency: eff.efficiency })
}

fn inequalities() -> anyhow::Result<Outcome> {
    let mut count = 0;
    let mut check = |name: String, m: Measured| -> anyhow::Result<()> {
        ensure!(m.pmi <= m.excess + INEQ_TOL, "{name}: PMI {} > E {}", m.pmi, m.excess);
        ensure!(m.excess <= m.complexity + INEQ_TOL, "{name}: E {} > C {}", m.excess, m.complexity);
        ensure!((-INEQ_TOL..=1.0 + INEQ_TOL).contains(&m.efficiency), "{name}: e = {}", m.efficiency);
        count += 1;
        Ok(())
    };
    let kernels = random_kernels();
    for (i, m) in kernels.iter().enumerate() {
        check(format!("kernel {i}"), measure(m, m.order())?)?;
    }
    let cycles = binary_necklaces();
    for p in &cycles {
        check(format!("cycle {}", p.cycle()), measure(p, p.period())?)?;
    }
    for probs in [vec![0.5, 0.5], vec![0.3, 0.7]] {
        check(format!("iid {probs:?}"), measure(&IidProcess::new(probs)?, 0)?)?;
    }
    Ok(Outcome::Pass(format!(
        "PMI ≤ E ≤ C_P+ and 0 ≤ e ≤ 1 on {count} models ({} random kernels, {} cycles, 2 i.i.d.)",
        kernels.len(),
        cycles.len()
    )))
}

fn causal_identities() -> anyhow::Result<Outcome> {
    let mut worst_e = 0.0f64;
    let mut worst_c = 0.0f64;
    let kernels = random_kernels();
    for (i, m) in kernels.iter().enumerate() {
        let r = m.order();
        let rev = m.reversed()?;
        let fwd = reconstruct::<f64, _>(m, r, r, DEFAULT_MERGE_TOL)?;
        let bwd = reconstruct::<f64, _>(&rev, r, r, DEFAULT_MERGE_TOL)?;
        ensure!(fwd.state_count() == distinct_rows(m), "kernel {i}: {} states, {} distinct rows", fwd.state_count(), distinct_rows(m));
        let closed = m.closed_forms()?.excess_entropy.finite().unwrap();
        // For repeated rows the closed form (one state per context) does not
        // apply; the block-entropy limit is the reference there.
        let reference = if fwd.state_count() == m.context_count() {
            closed
        } else {
            pmi_core::measures::excess_entropy_finite::<f64, _>(m, r + 1)?
        };
        let e = machine_excess_entropy(&fwd, &bwd, m)?;
        worst_e = worst_e.max((e - reference).abs());
        ensure!((e - reference).abs() <= 1e-6, "kernel {i}: I(S+;S-) = {e} vs E = {reference}");
        let d = complexity_decomposition(&fwd, &bwd, m)?;
        let gap = (fwd.statistical_complexity() - (d.excess_entropy + d.forward_given_reverse)).abs();
        worst_c = worst_c.max(gap);
        ensure!(gap <= 1e-9, "kernel {i}: C+ − E − H(S+|S−) = {gap}");
    }
    let cycles = binary_necklaces();
    for p in &cycles {
        let n = p.period();
        let fwd = reconstruct::<Rational, _>(p, n, n, 0.0)?;
        ensure!(fwd.state_count() == n, "cycle {}: {} states", p.cycle(), fwd.state_count());
        let bwd = reconstruct::<Rational, _>(&p.reversed()?, n, n, 0.0)?;
        let d = complexity_decomposition(&fwd, &bwd, p)?;
        ensure!(d.excess_entropy == LogSum::log2(&q(n as i64, 1)), "cycle {}: E = {}", p.cycle(), d.excess_entropy);
        ensure!(d.forward_given_reverse.is_zero(), "cycle {}: H(S+|S-) = {}", p.cycle(), d.forward_given_reverse);
    }
    Ok(Outcome::Pass(format!(
        "{} kernels: |I(S+;S-) − E| ≤ {worst_e:.1e}, |C+ − E − H(S+|S-)| ≤ {worst_c:.1e}, states = distinct rows; {} cycles: p states, exact E = log2 p",
        kernels.len(),
        cycles.len()
    )))
}

fn block_entropy_convergence() -> anyhow::Result<Outcome> {
    let mut models = random_kernels();
    models.push(MarkovProcess::new(2, 1, vec![vec![0.9, 0.1], vec![0.2, 0.8]])?);
    models.push(MarkovProcess::new(2, 2, vec![vec![0.3, 0.7], vec![0.6, 0.4], vec![0.9, 0.1], vec![0.5, 0.5]])?);
    let mut worst = 0.0f64;
    for (i, m) in models.iter().enumerate() {
        let r = m.order();
        let l = r + 8;
        let h = m.entropy_rate();
        let e = m.block_distribution(r)?.entropy() - r as f64 * h;
        let hl = m.block_distribution(l)?.entropy();
        let dev = (hl - l as f64 * h - e).abs();
        worst = worst.max(dev);
        ensure!(dev <= 1e-6, "model {i}: |H({l}) − {l}·h − E| = {dev}");
        let curve = entropy_curve::<f64, _>(m, l)?;
        ensure!((curve.excess_entropy - e).abs() <= 1e-6, "model {i}: Ê = {} vs {e}", curve.excess_entropy);
    }
    Ok(Outcome::Pass(format!("{} order-R models, max |H(R+8) − (R+8)h_P − E| = {worst:.1e}", models.len())))
}

// ---------------------------------------------------------------- 9

fn empirical_path() -> anyhow::Result<Outcome> {
    const N: usize = 1_000_000;
    let markov = MarkovProcess::new(2, 1, vec![vec![0.9, 0.1], vec![0.2, 0.8]])?;
    let markov2 = MarkovProcess::new(2, 2, vec![vec![0.3, 0.7], vec![0.6, 0.4], vec![0.9, 0.1], vec![0.5, 0.5]])?;
    let periodic = PeriodicProcess::new(2, Word(vec![0, 1, 1]))?;
    let iid = IidProcess::new(vec![0.3, 0.7])?;
    let samples: Vec<(&str, &dyn BlockSource<f64>, Word)> = vec![
        ("markov-1", &markov, markov.sample(N, 11)?),
        ("markov-2", &markov2, markov2.sample(N, 12)?),
        ("period-3", &periodic, periodic.sample(N, 13)?),
        ("iid", &iid, iid.sample(N, 14)?),
    ];
    let mut worst_tv = 0.0f64;
    let mut verdicts = Vec::new();
    let l_grid = [1, 2, 3];
    let g_grid = [0, 1, 2, 4, 8, 16, 32, 64];
    for (name, exact, seq) in &samples {
        let emp = EmpiricalSource::new(2, seq.clone())?;
        for l in 1..=6 {
            let a = BlockSource::<f64>::block_distribution(&emp, l)?;
            let tv = a.total_variation(&exact.block_distribution(l)?);
            worst_tv = worst_tv.max(tv);
            ensure!(tv <= 0.01, "{name} L = {l}: TV {tv}");
        }
        if *name == "iid" {
            continue;
        }
        let exact_v = pmi_verdict(&gap_mi_grid::<f64, _>(*exact, &l_grid, &g_grid)?, VerdictTolerances::default())?.verdict;
        let tol = VerdictTolerances::empirical(emp.noise_floor(*l_grid.last().unwrap()));
        let emp_v = pmi_verdict(&gap_mi_grid::<f64, _>(&emp, &l_grid, &g_grid)?, tol)?.verdict;
        ensure!(exact_v.label() == emp_v.label(), "{name}: exact {exact_v:?}, empirical {emp_v:?}");
        if let (Some(a), Some(b)) = (exact_v.value(), emp_v.value()) {
            ensure!((a - b).abs() <= tol.eps_l, "{name}: PMI {a} vs {b} (tolerance {})", tol.eps_l);
        }
        verdicts.push(format!("{name} {} {:.2e}", emp_v.label(), emp_v.value().unwrap_or(f64::NAN)));
    }
    Ok(Outcome::Pass(format!("max TV {worst_tv:.1e} for L ≤ 6; {}", verdicts.join(", "))))
}

// ---------------------------------------------------------------- 10

fn forbidden_words() -> anyhow::Result<Outcome> {
    let n = 1 << 14;
    let prefix = Substitution::thue_morse().fixed_point_prefix(n);
    // Independent construction: t(i) = parity of the binary digit sum.
    let parity: Vec<u32> = (0..n as u32).map(|i| i.count_ones() % 2).collect();
    ensure!(prefix.0 == parity, "fixed point differs from the digit-sum parity sequence");
    ensure!(forbidden_words_check(&prefix), "a forbidden word occurs");
    for f in FORBIDDEN_WORDS {
        ensure!(!parity.windows(f.len()).any(|w| w == f), "{f:?} occurs");
    }
    Ok(Outcome::Pass(format!("none of 000, 111, 01010, 10101 in the first {n} symbols")))
}

// ---------------------------------------------------------------- Ising figure

fn ising_figure() -> anyhow::Result<Outcome> {
    let sweep = |h: f64, tmin: f64, tmax: f64| -> anyhow::Result<Vec<f64>> {
        let args = IsingArgs { coupling: 1.0, h, tmin, tmax, steps: 200, log: false };
        let report = cmd_ising(&args)?;
        ensure!(report.ok(), "sweep checks failed: {:?}", report.failures);
        Ok(report.rows.iter().map(|r| r[2].parse().unwrap()).collect())
    };
    let zero = sweep(0.0, 0.1, 10.0)?;
    ensure!(is_unimodal(&zero, 1e-12), "h = 0: not unimodal");
    let far = sweep(0.0, 10.0, 1000.0)?;
    ensure!(*far.last().unwrap() <= 1e-3, "E(T = 1000) = {}", far.last().unwrap());
    let field = sweep(0.5, 0.1, 10.0)?;
    let peak = field.iter().enumerate().fold(0, |b, (i, &v)| if v > field[b] { i } else { b });
    ensure!(peak > 0 && peak < field.len() - 1 && field[peak] > 0.0, "h = 0.5: no interior maximum");
    ensure!(is_unimodal(&field, 1e-12), "h = 0.5: not unimodal");
    let rises = zero.windows(2).any(|w| w[1] > w[0] + 1e-12);
    Ok(Outcome::Pass(format!(
        "h = 0: unimodal, {} from {:.3} bits (no rise); E(1000) = {:.1e}; h = 0.5: rises to {:.4} bits then falls",
        if rises { "rises" } else { "decreasing" },
        zero[0],
        far.last().unwrap(),
        field[peak]
    )))
}

fn main() -> ExitCode {
    let criteria: [(&str, &str, Check); 11] = [
        ("1", "Thue-Morse factor frequencies", tm_frequencies),
        ("2", "shortcut matrix worked example", shortcut_worked_example),
        ("3", "Thue-Morse entropy and complexity increments", tm_entropy_increments),
        ("4", "structure-quantity table", table_one),
        ("5", "PMI verdicts", pmi_verdicts),
        ("6", "inequality suite", inequalities),
        ("7", "causal-state identities", causal_identities),
        ("8", "block-entropy convergence", block_entropy_convergence),
        ("9", "empirical path", empirical_path),
        ("10", "forbidden words", forbidden_words),
        ("fig", "Ising excess entropy against temperature", ising_figure),
    ];
    let mut unexpected = 0;
    let mut known = 0;
    for (id, name, check) in criteria {
        let start = Instant::now();
        let result = check();
        let t = start.elapsed();
        match result {
            Ok(Outcome::Pass(detail)) => println!("criterion {id:>3} PASS  {name} [{t:.2?}]: {detail}"),
            Ok(Outcome::KnownFail(detail)) => {
                known += 1;
                println!("criterion {id:>3} FAIL (known) {name} [{t:.2?}]: {detail}");
            }
            Err(e) => {
                unexpected += 1;
                println!("criterion {id:>3} FAIL  {name} [{t:.2?}]: {e:#}");
            }
        }
    }
    println!("acceptance: {} criteria, {unexpected} unexpected failures, {known} known failures", criteria.len());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
