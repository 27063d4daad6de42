//! The exact and float backends agree on every model with rational
//! block probabilities.

use pmi_core::emachine::{complexity_decomposition, reconstruct, DEFAULT_MERGE_TOL};
use pmi_core::measures::{entropy_curve, gap_mi_grid};
use pmi_core::processes::{IidProcess, MarkovProcess, PeriodicProcess, TimeReversal};
use pmi_core::substitution::SubstitutionProcess;
use pmi_core::{Info, LogSum, Rational, Word};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn markov_pair(rows: &[[(i64, i64); 2]]) -> (MarkovProcess<Rational>, MarkovProcess<f64>) {
    let order = rows.len().trailing_zeros() as usize;
    let exact: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&(n, d)| q(n, d)).collect()).collect();
    let float: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|&(n, d)| n as f64 / d as f64).collect()).collect();
    (MarkovProcess::new(2, order, exact).unwrap(), MarkovProcess::new(2, order, float).unwrap())
}

#[test]
fn markov_curves_agree() {
    let cases: [&[[(i64, i64); 2]]; 2] = [
        &[[(9, 10), (1, 10)], [(1, 5), (4, 5)]],
        &[[(3, 10), (7, 10)], [(3, 5), (2, 5)], [(9, 10), (1, 10)], [(1, 2), (1, 2)]],
    ];
    for rows in cases {
        let (exact, float) = markov_pair(rows);
        let a = entropy_curve::<Rational, _>(&exact, 6).unwrap();
        let b = entropy_curve::<f64, _>(&float, 6).unwrap();
        for l in 1..=6 {
            assert!((a.entropy(l).unwrap().to_f64() - b.entropy(l).unwrap()).abs() < 1e-12);
        }
        let ga = gap_mi_grid::<Rational, _>(&exact, &[1, 2], &[0, 3]).unwrap();
        let gb = gap_mi_grid::<f64, _>(&float, &[1, 2], &[0, 3]).unwrap();
        for (key, v) in &ga.values {
            assert!((v.to_f64() - gb.values[key]).abs() < 1e-12, "{key:?}");
        }
    }
}

#[test]
fn golden_mean_is_exact() {
    let (exact, _) = markov_pair(&[[(1, 2), (1, 2)], [(1, 1), (0, 1)]]);
    let curve = entropy_curve::<Rational, _>(&exact, 4).unwrap();
    // h = 2/3 bit per symbol, E = log₂3 − 4/3.
    assert_eq!(curve.entropy_rate, LogSum::from_rational(q(2, 3)));
    assert_eq!(curve.excess_entropy, LogSum::log2(&q(3, 1)) - LogSum::from_rational(q(4, 3)));
    let fwd = reconstruct::<Rational, _>(&exact, 1, 1, 0.0).unwrap();
    let bwd = reconstruct::<Rational, _>(&exact.reversed().unwrap(), 1, 1, 0.0).unwrap();
    let d = complexity_decomposition(&fwd, &bwd, &exact).unwrap();
    assert_eq!(d.excess_entropy, curve.excess_entropy);
    assert_eq!(d.forward_complexity, LogSum::log2(&q(3, 1)) - LogSum::from_rational(q(2, 3)));
}

#[test]
fn iid_and_periodic_agree() {
    let exact = IidProcess::new(vec![q(1, 4), q(3, 4)]).unwrap();
    let float = IidProcess::new(vec![0.25, 0.75]).unwrap();
    let a = entropy_curve::<Rational, _>(&exact, 3).unwrap();
    let b = entropy_curve::<f64, _>(&float, 3).unwrap();
    assert!((a.entropy_rate.to_f64() - b.entropy_rate).abs() < 1e-15);
    assert!(a.excess_entropy.is_zero());

    let p = PeriodicProcess::new(2, Word(vec![0, 0, 1, 1, 1])).unwrap();
    let e = entropy_curve::<Rational, _>(&p, 6).unwrap();
    assert_eq!(e.excess_entropy, LogSum::log2(&q(5, 1)));
    let m = reconstruct::<f64, _>(&p, 5, 5, DEFAULT_MERGE_TOL).unwrap();
    assert_eq!(m.state_count(), 5);
}

#[test]
fn thue_morse_exact_block_entropies() {
    let tm = SubstitutionProcess::thue_morse();
    let curve = entropy_curve::<Rational, _>(&tm, 5).unwrap();
    // Four length-2 factors with frequencies 1/6, 1/3, 1/3, 1/6.
    assert_eq!(curve.entropy(2).unwrap(), &(LogSum::log2(&q(3, 1)) + LogSum::from_rational(q(1, 3))));
    let f = entropy_curve::<f64, _>(&tm, 5).unwrap();
    for l in 1..=5 {
        assert!((curve.entropy(l).unwrap().to_f64() - f.entropy(l).unwrap()).abs() < 1e-12);
    }
}
