//! End-to-end acceptance gate. Each test checks one release criterion and
//! prints a `criterion N PASS` line with the measured numbers; a failing
//! assert carries the same numbers so the gap is visible either way.

use std::collections::BTreeSet;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use satcarve_core::iex::SignedCubeLedger;
use satcarve_core::rng::{derive_seed, rng_from_seed, uniform};
use satcarve_core::solver::{peak_node_count, shuffle_peak_stats};
use satcarve_core::tiling::{
    d_curve_formula_range, d_curve_lattice, d_curve_lattice_with, find_inflection,
    inflection_from_d, stirling, InflectionMethod, TilingMode,
};
use satcarve_core::transition::{
    compute_transition, crossing_point, default_m_range, SolveEngine, TransitionCurve,
};
use satcarve_core::{
    solve, Instance, OrderingStrategy, SubspaceTrie, TritCube,
};

const WORKED_DIMACS: &str = "p cnf 4 10\n\
    1 2 3 0\n-1 2 3 0\n1 -2 3 0\n-1 2 -3 0\n1 -2 -3 0\n\
    -1 -2 -3 0\n1 2 -4 0\n-1 -2 -4 0\n-2 3 4 0\n2 -3 4 0\n";

fn worked_instance(clauses: usize) -> Instance {
    let full = Instance::from_dimacs(WORKED_DIMACS).unwrap();
    Instance::new(4, full.clauses()[..clauses].to_vec()).unwrap()
}

#[test]
fn criterion_01_worked_example_reproduced() {
    let start = Instant::now();

    let nine = solve(&worked_instance(9), &OrderingStrategy::AsGiven, 4).unwrap();
    assert!(nine.satisfiable);
    assert_eq!(nine.model_count, 1, "nine clauses leave one model");
    assert_eq!(nine.solutions, vec![vec![false, false, true, false]]);
    let last = nine.trace.last().unwrap();
    assert_eq!(last.occupied_volume, 15, "nine clauses occupy 15 of 16");

    let ten = solve(&worked_instance(10), &OrderingStrategy::AsGiven, 4).unwrap();
    assert!(!ten.satisfiable);
    assert_eq!(ten.model_count, 0);
    assert_eq!(ten.trace.last().unwrap().occupied_volume, 16);

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!("criterion 1 PASS: unique model 0010, volumes 15/16, {elapsed:?}");
}

#[test]
fn criterion_02_carve_matches_hand_result() {
    let base = TritCube::parse("xxxx111").unwrap();
    let hole = TritCube::parse("000xxxx").unwrap();
    let got: BTreeSet<TritCube> = base.carve(&hole).unwrap().into_iter().collect();
    let want: BTreeSet<TritCube> = ["1xxx111", "01xx111", "001x111"]
        .iter()
        .map(|s| TritCube::parse(s).unwrap())
        .collect();
    assert_eq!(got, want);
    println!("criterion 2 PASS: carve produced the three expected pieces");
}

#[test]
fn criterion_03_counters_agree_with_brute_force() {
    let start = Instant::now();
    for i in 0..500u64 {
        let mut dims = rng_from_seed(derive_seed(42, 33, i));
        let n = 4 + uniform(&mut dims, 9) as u32;
        let m = 1 + uniform(&mut dims, 8 * n as u64) as usize;
        let inst = Instance::random(n, m, derive_seed(42, 34, i)).unwrap();

        let brute = inst.brute_force().unwrap().model_count as u128;
        let trie = solve(&inst, &OrderingStrategy::AsGiven, 0).unwrap().model_count;
        let ledger =
            SignedCubeLedger::from_cubes(n, &inst.to_cubes(), m > 2 * n as usize).unwrap();
        assert_eq!(trie, brute, "trie vs oracle, n {n} m {m} case {i}");
        assert_eq!(ledger.free_volume(), brute, "ledger vs oracle, n {n} m {m} case {i}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    println!("criterion 3 PASS: 500 instances, three counters agree, {elapsed:?}");
}

#[test]
fn criterion_04_clause_order_never_changes_the_answer() {
    for i in 0..50u64 {
        let mut dims = rng_from_seed(derive_seed(42, 35, i));
        let n = 4 + uniform(&mut dims, 9) as u32;
        let m = 1 + uniform(&mut dims, 8 * n as u64) as usize;
        let inst = Instance::random(n, m, derive_seed(42, 36, i)).unwrap();

        let base = solve(&inst, &OrderingStrategy::AsGiven, 0).unwrap();
        let volume = base.trace.last().unwrap().occupied_volume;
        for order in 0..10u64 {
            let seed = derive_seed(42, 37, i * 16 + order);
            let run = solve(&inst, &OrderingStrategy::RandomShuffle { seed }, 0).unwrap();
            assert_eq!(run.satisfiable, base.satisfiable, "case {i} order {order}");
            assert_eq!(run.model_count, base.model_count, "case {i} order {order}");
            assert_eq!(
                run.trace.last().unwrap().occupied_volume,
                volume,
                "case {i} order {order}"
            );
        }
    }
    println!("criterion 4 PASS: 50 instances x 10 shuffles, identical volume and verdict");
}

/// Independent check value: S(t,f) by the alternating binomial sum, exact in i128.
fn stirling_by_sum(t: u32, f: u32) -> i128 {
    let mut binom: i128 = 1;
    let mut total: i128 = 0;
    for i in 0..=f {
        let term = binom * ((f - i) as i128).pow(t);
        total += if i % 2 == 0 { term } else { -term };
        binom = binom * (f - i) as i128 / (i + 1) as i128;
    }
    let divisor: i128 = (1..=f as i128).product();
    total / divisor
}

#[test]
fn criterion_05_stirling_table_is_exact() {
    for t in 1..=10 {
        for f in 1..=t {
            let got = stirling(t, f);
            let want = stirling_by_sum(t, f);
            assert_eq!(got.to_string(), want.to_string(), "S({t},{f})");
        }
    }
    let row10: [u64; 10] = [1, 511, 9330, 34105, 42525, 22827, 5880, 750, 45, 1];
    for (f, want) in row10.iter().enumerate() {
        assert_eq!(stirling(10, f as u32 + 1).to_string(), want.to_string());
    }
    assert_eq!(stirling(13, 4).to_string(), "2532530");
    println!("criterion 5 PASS: recurrence matches the alternating sum, S(13,4) = 2532530");
}

#[test]
fn criterion_06_width_two_survival_ladder() {
    let reference = [
        1.0, 1.0, 1.0, 0.90625, 0.765625, 0.619141, 0.487305, 0.377075, 0.288635, 0.219398,
        0.166012, 0.125241, 0.094297,
    ];
    let lattice: Vec<f64> = d_curve_lattice(2, 13)
        .unwrap()
        .iter()
        .map(|p| p.d_value.unwrap())
        .collect();
    let formula: Vec<f64> = d_curve_formula_range(2, 13)
        .unwrap()
        .iter()
        .map(|p| p.d_value.unwrap())
        .collect();
    for t in 0..13 {
        let want = reference[t];
        assert!(
            (lattice[t] - want).abs() < 5e-7,
            "lattice t {} got {} want {want}",
            t + 1,
            lattice[t]
        );
        assert!(
            (formula[t] - want).abs() < 5e-7,
            "formula t {} got {} want {want}",
            t + 1,
            formula[t]
        );
        assert!(
            (lattice[t] - formula[t]).abs() <= 1e-9,
            "paths disagree at t {}",
            t + 1
        );
    }
    println!("criterion 6 PASS: both paths match the 13-step ladder within 5e-7");
}

#[test]
fn criterion_07_inflection_invariants_hold() {
    let start = Instant::now();
    for n in 3..=5 {
        let report = find_inflection(n, InflectionMethod::FromD).unwrap();
        assert!(
            (0.68..=0.70).contains(&report.t_prime_0),
            "n {n} t'_0 {}",
            report.t_prime_0
        );
        assert!(
            (0.62..=0.66).contains(&report.d_0),
            "n {n} D_0 {}",
            report.d_0
        );
        assert!(
            (5.4..=5.8).contains(&report.m_0_over_n),
            "n {n} M_0/N {}",
            report.m_0_over_n
        );
        println!(
            "criterion 7: n {n} t'_0 {:.4} D_0 {:.4} M_0/N {:.3}",
            report.t_prime_0, report.d_0, report.m_0_over_n
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!("criterion 7 PASS: all three widths inside the windows, {elapsed:?}");
}

/// N = 12 empirical curve, shared between the two transition criteria.
fn n12_curve() -> &'static (TransitionCurve, Duration) {
    static CURVE: OnceLock<(TransitionCurve, Duration)> = OnceLock::new();
    CURVE.get_or_init(|| {
        let start = Instant::now();
        let curve =
            compute_transition(12, &default_m_range(12), 200, 42, SolveEngine::Oracle).unwrap();
        (curve, start.elapsed())
    })
}

#[test]
fn criterion_08_transition_curve_shape() {
    let (curve, elapsed) = n12_curve();
    assert!(*elapsed < Duration::from_secs(300), "took {elapsed:?}");

    // Binomial noise allowance for 200 trials at the expected endpoint rates.
    let left = curve.points.first().unwrap();
    let right = curve.points.last().unwrap();
    let left_floor = 0.99 - 3.0 * (0.99f64 * 0.01 / 200.0).sqrt();
    let right_ceil = 0.05 + 3.0 * (0.05f64 * 0.95 / 200.0).sqrt();
    assert!(
        left.sat_fraction >= left_floor,
        "left endpoint {} below {left_floor:.4}",
        left.sat_fraction
    );
    assert!(
        right.sat_fraction <= right_ceil,
        "right endpoint {} above {right_ceil:.4}",
        right.sat_fraction
    );
    println!(
        "criterion 8: endpoints ok, sat fraction {:.3} at ratio {} and {:.3} at ratio {}",
        left.sat_fraction, left.ratio, right.sat_fraction, right.ratio
    );

    let crossing = crossing_point(curve, 0.5).unwrap();
    println!("criterion 8: measured 50% crossing {crossing:.4}, window 4.2 +/- 0.4");
    assert!(
        (3.8..=4.6).contains(&crossing),
        "50% crossing {crossing:.4} outside 4.2 +/- 0.4 ({elapsed:?})"
    );
    println!("criterion 8 PASS: crossing {crossing:.4} inside the window, {elapsed:?}");
}

#[test]
fn criterion_09_block_model_lands_between() {
    let (curve, _) = n12_curve();
    let empirical = crossing_point(curve, 0.5).unwrap();

    let d: Vec<f64> =
        d_curve_lattice_with(6, 120, TilingMode::LessSimple { block_size: 8 }, false)
            .unwrap()
            .iter()
            .map(|p| p.d_value.unwrap())
            .collect();
    let model = inflection_from_d(&d, 6, 8).unwrap().m_0_over_n;

    assert!(
        empirical < model && model < 5.545,
        "block model transition {model:.4} not strictly inside ({empirical:.4}, 5.545)"
    );
    println!(
        "criterion 9 PASS: empirical {empirical:.4} < block model {model:.4} < simple 5.545"
    );
}

#[test]
fn criterion_10_disjoint_clauses_fill_independently() {
    for k in 1..=4u32 {
        let n = 3 * k;
        let mut trie = SubspaceTrie::new(n).unwrap();
        for c in 0..k {
            let mut text = "x".repeat(n as usize);
            text.replace_range(3 * c as usize..3 * c as usize + 3, "000");
            trie.insert(&TritCube::parse(&text).unwrap()).unwrap();
        }
        let want = 8u128.pow(k) - 7u128.pow(k);
        assert_eq!(trie.occupied_volume(), want, "k {k}");
        if k == 2 {
            assert_eq!(trie.size_metrics().leaf_count, 4);
        }
    }

    // Same pair embedded in a wider cube: volume scales, shape does not.
    let mut wide = SubspaceTrie::new(12).unwrap();
    wide.insert(&TritCube::parse("000xxxxxxxxx").unwrap()).unwrap();
    wide.insert(&TritCube::parse("xxx000xxxxxx").unwrap()).unwrap();
    assert_eq!(wide.occupied_volume(), 960);
    assert_eq!(wide.size_metrics().leaf_count, 4);
    println!("criterion 10 PASS: union volume 8^k - 7^k for k <= 4, four leaves at k = 2");
}

#[test]
fn criterion_11_orderings_beat_their_baselines() {
    let golden = Instance::random(16, 80, 7).unwrap();
    assert_eq!(
        golden.digest(),
        "5147833ae52aac033b1acfc593683998b24e4866b3d7738ed6da06d4477c0678"
    );

    let as_given = peak_node_count(&solve(&golden, &OrderingStrategy::AsGiven, 0).unwrap().trace);
    let density =
        peak_node_count(&solve(&golden, &OrderingStrategy::DensityOptimized, 0).unwrap().trace);
    let greedy =
        peak_node_count(&solve(&golden, &OrderingStrategy::GreedyMinGrowth, 0).unwrap().trace);
    let shuffles = shuffle_peak_stats(&golden, 50, 42).unwrap();

    assert!(
        density <= as_given,
        "density peak {density} exceeds as-given peak {as_given}"
    );
    assert!(
        (greedy as f64) <= shuffles.mean_peak,
        "greedy peak {greedy} exceeds shuffle mean {:.1}",
        shuffles.mean_peak
    );
    println!(
        "criterion 11 PASS: peaks as-given {as_given}, density {density}, greedy {greedy}, \
         shuffle mean {:.1}",
        shuffles.mean_peak
    );
}
