use cccs_core::region::CodeFamily;
use cccs_core::resources::*;
use cccs_core::Color;
use proptest::prelude::*;
use std::sync::OnceLock;

fn optimum(code: CodeFamily) -> f64 {
    static CACHE: OnceLock<[f64; 2]> = OnceLock::new();
    let c = CACHE.get_or_init(|| [CodeFamily::Cccs488, CodeFamily::Cccs666].map(|c| optimize_intervals(c).unwrap().area));
    c[usize::from(code == CodeFamily::Cccs666)]
}

#[test]
fn table_three_coefficients() {
    let want = [(CodeFamily::Rtcs, 6.6, 13.1), (CodeFamily::Cccs488, 3.9, 10.5), (CodeFamily::Cccs666, 3.7, 9.8)];
    for (code, n, cz) in want {
        let r = overheads(code).unwrap();
        assert!((r.qubits_per_logical - n).abs() <= 0.05, "{code} n/k {}", r.qubits_per_logical);
        assert!((r.cz_per_logical - cz).abs() <= 0.05, "{code} cz/k {}", r.cz_per_logical);
        let (dq, dcz) = densities(code);
        assert!((r.qubits_per_logical - dq * r.area).abs() < 1e-12);
        assert!((r.cz_per_logical - dcz * r.area).abs() < 1e-12);
    }
    assert_eq!(overheads(CodeFamily::Rtcs).unwrap().qubits_per_logical, 105.0 / 16.0);
    let r = overheads(CodeFamily::Cccs488).unwrap();
    assert!((r.qubits_per_logical - 63.0 / 16.0).abs() < 1e-12);
    assert!((r.cz_per_logical - 10.5).abs() < 1e-12);
}

#[test]
fn optimal_intervals() {
    let iv = optimize_intervals(CodeFamily::Cccs488).unwrap().intervals.unwrap();
    for (got, want) in iv.as_array().iter().zip([0.25, 0.25, 0.0, 0.5, 0.5]) {
        assert!((got - want).abs() < 1e-9, "{iv:?}");
    }
    let r = optimize_intervals(CodeFamily::Cccs666).unwrap();
    assert!((r.area - 1.42).abs() < 0.01);
    for (got, want) in r.intervals.unwrap().as_array().iter().zip([0.23, 0.23, 0.38, 0.53, 0.38]) {
        assert!((got - want).abs() <= 0.01, "{:?}", r.intervals);
    }
}

#[test]
fn grid_matches_vertex_enumeration() {
    for code in [CodeFamily::Cccs488, CodeFamily::Cccs666] {
        let grid = optimize_intervals(code).unwrap().area;
        let (exact, _) = vertex_enumeration_optimum(code).unwrap();
        assert!(grid >= exact - 1e-9, "{code}: grid {grid} below vertex optimum {exact}");
        assert!((grid - exact) / exact < 0.01, "{code}: {grid} vs {exact}");
    }
}

#[test]
fn optimum_has_at_least_two_tight_constraints() {
    for code in [CodeFamily::Cccs488, CodeFamily::Cccs666] {
        let iv = optimize_intervals(code).unwrap().intervals.unwrap();
        let slacks = constraint_slacks(code, &iv).unwrap();
        assert!(slacks.iter().all(|&(_, s)| s >= -1e-9), "{slacks:?}");
        assert!(slacks.iter().filter(|&&(_, s)| s.abs() < 1e-6).count() >= 2, "{slacks:?}");
    }
}

#[test]
fn rtcs_to_cccs_overhead_ratio() {
    let rtcs = overheads(CodeFamily::Rtcs).unwrap().qubits_per_logical;
    let hex = overheads(CodeFamily::Cccs666).unwrap().qubits_per_logical;
    let sq = overheads(CodeFamily::Cccs488).unwrap().qubits_per_logical;
    assert!((1.7..=1.8).contains(&(rtcs / hex)), "{}", rtcs / hex);
    // 105/63: the square-octagon family lands just below the quoted band.
    assert!((rtcs / sq - 5.0 / 3.0).abs() < 1e-12);
}

fn color() -> impl Strategy<Value = Color> {
    prop_oneof![Just(Color::Red), Just(Color::Green), Just(Color::Blue)]
}

proptest! {
    #[test]
    fn metric_is_symmetric_and_subadditive(
        code in prop_oneof![Just(CodeFamily::Rtcs), Just(CodeFamily::Cccs488), Just(CodeFamily::Cccs666)],
        c in color(),
        p in prop::array::uniform6(-50.0f64..50.0),
    ) {
        let (a, b, m) = ([p[0], p[1]], [p[2], p[3]], [p[4], p[5]]);
        let ab = chain_metric(code, Some(c), a, b).unwrap();
        prop_assert!((ab - chain_metric(code, Some(c), b, a).unwrap()).abs() < 1e-9);
        let via = chain_metric(code, Some(c), a, m).unwrap() + chain_metric(code, Some(c), m, b).unwrap();
        prop_assert!(ab <= via + 1e-9);
        prop_assert!(ab >= 0.0);
    }

    #[test]
    fn feasible_points_never_beat_the_optimum(g in 0.0f64..2.0, dl in 0.0f64..2.0, e in 0.0f64..2.0, hex in any::<bool>()) {
        let code = if hex { CodeFamily::Cccs666 } else { CodeFamily::Cccs488 };
        let a = defect_thickness(code).unwrap();
        let iv = IntervalVector { alpha: a, beta: a, gamma: g, delta: dl, epsilon: e };
        if constraint_slacks(code, &iv).unwrap().iter().all(|&(_, s)| s >= 0.0) {
            prop_assert!(area(&iv) >= optimum(code) - 1e-9);
        }
    }
}
