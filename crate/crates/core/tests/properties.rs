use proptest::prelude::*;

use tensornorm::basis::GeneratorBasis;
use tensornorm::bounds::{bound_cutoff_bisep_max, bound_improved_ksep, bound_purity_ksep};
use tensornorm::correlations::{norm_table_direct, norm_table_moebius};
use tensornorm::detect::{misalign, sequential_acquire, Misalignment, Schedule, StopReason};
use tensornorm::random::{random_biseparable, random_mixed, random_pure, seeded};
use tensornorm::{BoundSpec, DensityMatrix, NormTable, Parties};

const CASES: u32 = 200;

/// `(n, d)` with `n ≤ 4`, `d ≤ 3`.
fn shape(min_n: usize) -> impl Strategy<Value = (usize, usize)> {
    (min_n..=4usize, 2..=3usize)
}

fn state(n: usize, d: usize, seed: u64) -> DensityMatrix {
    let mut rng = seeded(seed);
    let dim = d.pow(n as u32);
    // alternate pure and mixed states of varying rank
    match seed % 3 {
        0 => random_pure(n, d, &mut rng).unwrap(),
        1 => random_mixed(n, d, 1 + (seed as usize / 3) % dim, &mut rng).unwrap(),
        _ => random_mixed(n, d, 2, &mut rng).unwrap(),
    }
}

fn max_diff(a: &NormTable, b: &NormTable) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|((_, x), (_, y))| (x - y).abs())
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn purity_identity((n, d) in shape(1), seed in any::<u64>()) {
        let rho = state(n, d, seed);
        let table = norm_table_moebius(&rho).unwrap();
        let lhs = (d as f64).powi(n as i32) * rho.purity() - 1.0;
        prop_assert!((lhs - table.total()).abs() < 1e-8, "{lhs} vs {}", table.total());
    }

    #[test]
    fn moebius_matches_direct((n, d) in shape(1), seed in any::<u64>()) {
        let rho = state(n, d, seed);
        let basis = GeneratorBasis::new(d).unwrap();
        let direct = norm_table_direct(&rho, &basis).unwrap();
        let moebius = norm_table_moebius(&rho).unwrap();
        prop_assert!(max_diff(&direct, &moebius) < 1e-8);
    }

    #[test]
    fn local_unitary_invariance((n, d) in shape(1), seed in any::<u64>(), frame in any::<u64>()) {
        let rho = state(n, d, seed);
        let rotated = misalign(&rho, Misalignment::Haar { seed: frame }).unwrap();
        let a = norm_table_moebius(&rho).unwrap();
        let b = norm_table_moebius(&rotated).unwrap();
        prop_assert!(max_diff(&a, &b) < 1e-8);
    }

    #[test]
    fn product_multiplicativity(na in 1..=2usize, nb in 1..=2usize, d in 2..=3usize, sa in any::<u64>(), sb in any::<u64>()) {
        let a = state(na, d, sa);
        let b = state(nb, d, sb);
        let ab = a.kron(&b).unwrap();
        let (ta, tb, tab) = (
            norm_table_moebius(&a).unwrap(),
            norm_table_moebius(&b).unwrap(),
            norm_table_moebius(&ab).unwrap(),
        );
        let n = na + nb;
        for alpha in Parties::nonempty_subsets(n) {
            // A occupies the first na parties
            let in_a = Parties(alpha.0 & ((1 << na) - 1));
            let in_b = Parties(alpha.0 >> na);
            let fa = if in_a.is_empty() { 1.0 } else { ta.get(in_a) };
            let fb = if in_b.is_empty() { 1.0 } else { tb.get(in_b) };
            prop_assert!((tab.get(alpha) - fa * fb).abs() < 1e-8, "{alpha}: {} vs {}", tab.get(alpha), fa * fb);
        }
    }

    #[test]
    fn biseparable_never_violates((n, d) in shape(2), seed in any::<u64>(), terms in 1..=4usize) {
        let rho = random_biseparable(n, d, terms, &mut seeded(seed)).unwrap();
        let table = norm_table_moebius(&rho).unwrap();
        for x in 0..=n {
            let bound = bound_cutoff_bisep_max(n, d, x).unwrap().value;
            let cx = table.cx(x).unwrap().value;
            prop_assert!(cx <= bound + 1e-9, "C_{x} = {cx} > {bound}");
        }
        let fb = table.full_body();
        prop_assert!(fb <= bound_purity_ksep(n, d, 2).unwrap().value + 1e-9);
        prop_assert!(fb <= bound_improved_ksep(n, d, 2).unwrap().value + 1e-9);
    }

    #[test]
    fn json_round_trip_is_bit_exact((n, d) in shape(1), seed in any::<u64>()) {
        let table = norm_table_moebius(&state(n, d, seed)).unwrap();
        let back: NormTable = serde_json::from_str(&table.to_json_pretty().unwrap()).unwrap();
        for ((_, x), (_, y)) in table.iter().zip(back.iter()) {
            prop_assert_eq!(x.to_bits(), y.to_bits());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sequential_lower_bound_is_sound(n in 2..=3usize, seed in any::<u64>(), frame in any::<u64>(), s in 0..4usize) {
        let rho = state(n, 2, seed);
        let schedule = [Schedule::Lexicographic, Schedule::SettingGrouped, Schedule::GreedyExpected, Schedule::Pruned][s];
        let target = BoundSpec::CutoffBisepMax { n, d: 2, x: n };
        let truth = norm_table_moebius(&rho).unwrap().full_body();
        let rec = sequential_acquire(&rho, &target, Misalignment::Haar { seed: frame }, schedule, None).unwrap();
        let mut last = 0.0;
        for step in &rec.steps {
            prop_assert!(step.lower_bound >= last);
            prop_assert!(step.lower_bound <= truth + 1e-8);
            last = step.lower_bound;
        }
        if schedule != Schedule::Pruned {
            // unpruned runs see every element, so they decide exactly
            let violated = truth > rec.bound + 1e-9;
            prop_assert_eq!(rec.stop_reason == StopReason::BoundViolated, violated);
        }
    }

    #[test]
    fn sequential_is_deterministic(seed in any::<u64>(), frame in any::<u64>()) {
        let rho = state(3, 2, seed);
        let target = BoundSpec::PurityKsep { n: 3, d: 2, k: 2 };
        let a = sequential_acquire(&rho, &target, Misalignment::Haar { seed: frame }, Schedule::Pruned, Some(40)).unwrap();
        let b = sequential_acquire(&rho, &target, Misalignment::Haar { seed: frame }, Schedule::Pruned, Some(40)).unwrap();
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn verdicts_are_lu_invariant((n, d) in shape(2), seed in any::<u64>(), frame in any::<u64>()) {
        let rho = state(n, d, seed);
        let criteria = tensornorm::detect::default_criteria(n, d, None).unwrap();
        let a = tensornorm::detect::evaluate("a", &rho, &criteria).unwrap();
        let b = tensornorm::detect::evaluate("b", &misalign(&rho, Misalignment::Haar { seed: frame }).unwrap(), &criteria).unwrap();
        for (x, y) in a.outcomes.iter().zip(&b.outcomes) {
            prop_assert!((x.measured - y.measured).abs() < 1e-8);
            // a verdict can only flip when the value sits on the bound
            if (x.measured - x.bound).abs() > 1e-8 {
                prop_assert_eq!(x.verdict, y.verdict);
            }
        }
    }
}

#[test]
fn pruned_terminates_whenever_greedy_does() {
    let fixtures: Vec<(DensityMatrix, BoundSpec)> = vec![
        (
            DensityMatrix::ghz(2, 2).unwrap(),
            BoundSpec::PurityKsep { n: 2, d: 2, k: 2 },
        ),
        (
            DensityMatrix::ghz(2, 3).unwrap(),
            BoundSpec::PurityKsep { n: 2, d: 3, k: 2 },
        ),
        (
            DensityMatrix::ghz(3, 2).unwrap(),
            BoundSpec::PurityKsep { n: 3, d: 2, k: 2 },
        ),
        (
            DensityMatrix::graph_state(&tensornorm::stabilizer::Graph::cycle(4).unwrap()).unwrap(),
            BoundSpec::CutoffNminus1 { n: 4, d: 2 },
        ),
        (
            DensityMatrix::ame43().unwrap(),
            BoundSpec::CutoffBisepMax { n: 4, d: 3, x: 3 },
        ),
    ];
    for (rho, target) in &fixtures {
        for seed in 0..5 {
            let m = Misalignment::Haar { seed };
            let greedy = sequential_acquire(rho, target, m, Schedule::GreedyExpected, None).unwrap();
            let pruned = sequential_acquire(rho, target, m, Schedule::Pruned, None).unwrap();
            if greedy.stop_reason == StopReason::BoundViolated {
                assert_eq!(
                    pruned.stop_reason,
                    StopReason::BoundViolated,
                    "{} seed {seed}",
                    target.label()
                );
            }
        }
    }
}
