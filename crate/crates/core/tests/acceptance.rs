//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use nalgebra::DMatrix;
use num_rational::Ratio;
use num_traits::{One, Zero};

use tensornorm::basis::GeneratorBasis;
use tensornorm::bounds::{
    bound_cutoff_bisep_max, bound_cutoff_nminus1, bound_improved_ksep, bound_purity_ksep, equipartition_max,
};
use tensornorm::correlations::{norm_table_direct, norm_table_moebius, TensorIndex};
use tensornorm::detect::{
    evaluate, misalign, noise_sweep, sequential_acquire, Grid, Misalignment, Schedule, StopReason, Verdict,
};
use tensornorm::random::{random_biseparable, random_mixed, random_pure, seeded};
use tensornorm::stabilizer::{graph_norm_table, Graph, PauliString, StabilizerGroup};
use tensornorm::{BoundSpec, DensityMatrix, NormTable, Parties, C64};

const EXACT: f64 = 1e-8;

struct Check {
    ok: bool,
    details: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Check {
            ok: true,
            details: Vec::new(),
        }
    }

    fn expect(&mut self, cond: bool, what: impl Into<String>) {
        let what = what.into();
        if !cond {
            self.ok = false;
            self.details.push(format!("FAILED: {what}"));
        } else {
            self.details.push(what);
        }
    }

    fn close(&mut self, got: f64, want: f64, tol: f64, what: &str) {
        self.expect(
            (got - want).abs() <= tol,
            format!("{what} = {got:.10} (expected {want:.10} ± {tol:e})"),
        );
    }
}

type Outcome = Result<Check, tensornorm::Error>;
type Criterion = (&'static str, fn() -> Outcome);

fn criterion_1() -> Outcome {
    let mut c = Check::new();
    let ghz = DensityMatrix::ghz(3, 2)?;
    let spec = BoundSpec::PurityKsep { n: 3, d: 2, k: 2 };
    let r = evaluate("ghz(3,2)", &ghz, &[spec])?;
    c.close(r.norms.full_body(), 4.0, EXACT, "full-body norm²");
    c.close(r.outcomes[0].bound, 3.0, EXACT, "purity-ksep k=2 bound");
    c.expect(r.is_gme(), "verdict GME");
    Ok(c)
}

fn criterion_2() -> Outcome {
    let mut c = Check::new();
    let cycle = Graph::cycle(4)?;
    let dense = norm_table_moebius(&DensityMatrix::graph_state(&cycle)?)?;
    let stab = graph_norm_table(&cycle)?;
    for (name, t) in [("dense", &dense), ("stabilizer", &stab)] {
        c.close(t.full_body(), 5.0, EXACT, &format!("{name} ‖τ_1234‖²"));
        let three: Vec<f64> = Parties::nonempty_subsets(4)
            .into_iter()
            .filter(|a| a.len() == 3)
            .map(|a| t.get(a))
            .collect();
        c.expect(
            three.iter().all(|v| (v - 2.0).abs() <= EXACT),
            format!("{name} 3-body norms² {three:?} all 2"),
        );
        c.close(t.cx(3)?.value, 13.0, EXACT, &format!("{name} C_3"));
    }
    let improved = bound_improved_ksep(4, 2, 2)?;
    c.close(improved.value, 9.0, EXACT, "improved-ksep k=2 bound");
    c.expect(
        dense.full_body() <= improved.value,
        "full body alone does not violate improved-ksep",
    );
    let nm1 = bound_cutoff_nminus1(4, 2)?;
    c.close(nm1.value, 38.0 / 3.0, EXACT, "cutoff-nminus1 bound");
    c.expect(nm1.notes.contains("37/3"), "notes mention the quoted 37/3");
    let r = evaluate(
        "cluster4",
        &DensityMatrix::graph_state(&cycle)?,
        &[BoundSpec::CutoffNminus1 { n: 4, d: 2 }],
    )?;
    c.expect(r.is_gme(), "verdict GME (13 > 38/3)");
    Ok(c)
}

/// Every element of support ≥ `min_support`, computed as `Tr[ρ ⊗λ]` with dense
/// Kronecker products, independently of the sparse element path.
fn dense_elements(rho: &DensityMatrix, min_support: usize) -> Vec<f64> {
    let (n, d) = (rho.n(), rho.d());
    let basis = GeneratorBasis::new(d).unwrap();
    let total = (d * d).pow(n as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let idx = TensorIndex::from_code(code, n, d);
        if idx.support().len() < min_support {
            continue;
        }
        let op = idx.0.iter().fold(DMatrix::<C64>::identity(1, 1), |acc, &i| {
            acc.kronecker(basis.generator(i))
        });
        // Tr[ρ·op] = Σᵢⱼ ρᵢⱼ opⱼᵢ
        let t: C64 = rho.data().component_mul(&op.transpose()).sum();
        out.push(t.re);
    }
    out
}

fn criterion_3() -> Outcome {
    let mut c = Check::new();
    let ame = DensityMatrix::ame43()?;
    let table = norm_table_moebius(&ame)?;
    let low = Parties::nonempty_subsets(4)
        .into_iter()
        .filter(|a| a.len() <= 2)
        .map(|a| table.get(a))
        .fold(0.0, f64::max);
    c.expect(low <= 1e-10, format!("max norm² over ≤2-party subsets = {low:e}"));
    c.close(table.cx(3)?.value, 80.0, EXACT, "C_3");
    let bound = bound_cutoff_bisep_max(4, 3, 3)?.value;
    c.close(bound, 78.0, EXACT, "cutoff-bisep-max x=3 bound");
    c.close(bound, 3f64.powi(4) - 3.0, EXACT, "bound vs d^n - d");
    let target = BoundSpec::CutoffBisepMax { n: 4, d: 3, x: 3 };
    let r = evaluate("ame43", &ame, std::slice::from_ref(&target))?;
    c.expect(r.is_gme(), "verdict GME");

    let mut best = usize::MAX;
    for schedule in [
        Schedule::Lexicographic,
        Schedule::SettingGrouped,
        Schedule::GreedyExpected,
        Schedule::Pruned,
    ] {
        let rec = sequential_acquire(&ame, &target, Misalignment::Identity, schedule, None)?;
        c.expect(
            rec.stop_reason == StopReason::BoundViolated,
            format!("{schedule}: bound-violated after {} elements", rec.len()),
        );
        best = best.min(rec.len());
    }
    // fewest elements any ordering could use: largest squares first
    let mut squares: Vec<f64> = dense_elements(&ame, 3).into_iter().map(|t| t * t).collect();
    squares.sort_by(|a, b| b.total_cmp(a));
    let mut acc = 0.0;
    let minimal = squares.iter().position(|s| {
        acc += s;
        acc > bound + 1e-9
    });
    let minimal = minimal.map_or(usize::MAX, |i| i + 1);
    c.expect(
        best == minimal,
        format!("best schedule count {best} equals the minimum over all orderings ({minimal}) in the Gell-Mann product basis"),
    );
    c.expect(
        best <= 79,
        format!("certified within ≤ 79 revealed elements (needed {best})"),
    );
    Ok(c)
}

fn criterion_4() -> Outcome {
    let mut c = Check::new();
    let ghz = DensityMatrix::ghz(3, 3)?;
    let criteria = [
        BoundSpec::PurityKsep { n: 3, d: 3, k: 3 },
        BoundSpec::PurityKsep { n: 3, d: 3, k: 2 },
        BoundSpec::CutoffNminus1 { n: 3, d: 3 },
    ];
    let r = noise_sweep("ghz(3,3)", &ghz, &criteria, &Grid::new(0.0, 1.0, 0.01)?)?;
    let t = |i: usize| r.thresholds[i].threshold.unwrap_or(f64::NAN);
    c.close(t(0), (2.0f64 / 5.0).sqrt(), 1e-6, "p* for k=3");
    c.close(t(1), (4.0f64 / 5.0).sqrt(), 1e-6, "p* for k=2");
    c.details.push(format!(
        "C_2 criterion (cutoff-nminus1) threshold, informational: {:.9}",
        t(2)
    ));
    Ok(c)
}

fn criterion_5() -> Outcome {
    let mut c = Check::new();
    let mut amp = vec![C64::new(0.0, 0.0); 27];
    for digits in [[0, 0, 0], [1, 1, 1], [0, 1, 2], [1, 0, 2], [1, 2, 0], [0, 2, 1]] {
        amp[digits[0] * 9 + digits[1] * 3 + digits[2]] = C64::new(1.0, 0.0);
    }
    let psi = DensityMatrix::from_pure(3, 3, &amp)?;
    let table = norm_table_moebius(&psi)?;
    c.close(table.cx(2)?.value, 25.5, EXACT, "C_2(ψ₁)");
    let r = evaluate(
        "psi1",
        &psi,
        &[
            BoundSpec::DimVector {
                n: 3,
                d: 3,
                ranks: vec![2, 2, 3],
            },
            BoundSpec::DimVector {
                n: 3,
                d: 3,
                ranks: vec![2, 3, 3],
            },
        ],
    )?;
    c.close(r.outcomes[0].bound, 25.0, EXACT, "bound for (2,2,3)");
    c.expect(r.outcomes[0].verdict == Verdict::Violated, "(2,2,3) excluded");
    let expr = 27.0 + 2.0 - (1.5 + 1.0 + 1.0);
    c.close(r.outcomes[1].bound, expr, EXACT, "bound for (2,3,3) = 27+2-(1.5+1+1)");
    c.expect(r.outcomes[1].verdict == Verdict::NotViolated, "(2,3,3) not violated");
    Ok(c)
}

fn criterion_6() -> Outcome {
    let mut c = Check::new();
    let ghz = DensityMatrix::ghz(4, 2)?;
    let dense = norm_table_moebius(&ghz)?.full_body();
    c.close(dense, 9.0, EXACT, "dense full-body norm²");
    let improved = bound_improved_ksep(4, 2, 2)?.value;
    c.close(improved, 9.0, EXACT, "improved-ksep k=2 bound");
    let r = evaluate("ghz(4,2)", &ghz, &[BoundSpec::ImprovedKsep { n: 4, d: 2, k: 2 }])?;
    c.expect(r.outcomes[0].verdict == Verdict::NotViolated, "no violation");
    let gens = vec![
        PauliString {
            x: 0b1111,
            z: 0,
            negative: false,
        },
        PauliString {
            x: 0,
            z: 0b0011,
            negative: false,
        },
        PauliString {
            x: 0,
            z: 0b0110,
            negative: false,
        },
        PauliString {
            x: 0,
            z: 0b1100,
            negative: false,
        },
    ];
    let group = StabilizerGroup::from_generators(4, gens)?;
    let count = group.weight_enumerator()[4];
    c.expect(
        count as f64 == dense.round() && (dense - count as f64).abs() <= EXACT,
        format!("stabilizer full-weight count {count} equals dense value"),
    );
    Ok(c)
}

fn random_state(n: usize, d: usize, seed: u64) -> DensityMatrix {
    let mut rng = seeded(seed);
    if seed.is_multiple_of(2) {
        random_pure(n, d, &mut rng).unwrap()
    } else {
        random_mixed(n, d, 1 + (seed as usize) % d.pow(n as u32), &mut rng).unwrap()
    }
}

fn shapes() -> impl Iterator<Item = (u64, usize, usize)> {
    // 200 cases cycling through every (n, d) with n ≤ 4, d ≤ 3
    (0..200u64).map(|i| (i, 1 + (i as usize) % 4, 2 + (i as usize / 4) % 2))
}

fn max_diff(a: &NormTable, b: &NormTable) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|((_, x), (_, y))| (x - y).abs())
        .fold(0.0, f64::max)
}

fn criterion_7() -> Outcome {
    let mut c = Check::new();
    let (mut purity, mut moebius, mut lu, mut product, mut false_pos) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0usize);
    for (seed, n, d) in shapes() {
        let rho = random_state(n, d, 1000 + seed);
        let t = norm_table_moebius(&rho)?;
        purity = purity.max(((d as f64).powi(n as i32) * rho.purity() - 1.0 - t.total()).abs());
        let direct = norm_table_direct(&rho, &GeneratorBasis::new(d)?)?;
        moebius = moebius.max(max_diff(&t, &direct));
        let rotated = norm_table_moebius(&misalign(&rho, Misalignment::Haar { seed })?)?;
        lu = lu.max(max_diff(&t, &rotated));

        let na = 1 + (seed as usize) % 2;
        let a = random_state(na, d, 5000 + seed);
        let b = random_state(n.min(4 - na).max(1), d, 9000 + seed);
        let (ta, tb, tab) = (
            norm_table_moebius(&a)?,
            norm_table_moebius(&b)?,
            norm_table_moebius(&a.kron(&b)?)?,
        );
        for alpha in Parties::nonempty_subsets(tab.n()) {
            let (ia, ib) = (Parties(alpha.0 & ((1 << na) - 1)), Parties(alpha.0 >> na));
            let fa = if ia.is_empty() { 1.0 } else { ta.get(ia) };
            let fb = if ib.is_empty() { 1.0 } else { tb.get(ib) };
            product = product.max((tab.get(alpha) - fa * fb).abs());
        }

        let nb = 2 + (seed as usize) % 3;
        let bisep = random_biseparable(nb, d, 1 + (seed as usize) % 4, &mut seeded(20_000 + seed))?;
        let tb = norm_table_moebius(&bisep)?;
        for x in 0..=nb {
            if tb.cx(x)?.value > bound_cutoff_bisep_max(nb, d, x)?.value + 1e-9 {
                false_pos += 1;
            }
        }
        if tb.full_body() > bound_purity_ksep(nb, d, 2)?.value + 1e-9
            || tb.full_body() > bound_improved_ksep(nb, d, 2)?.value + 1e-9
        {
            false_pos += 1;
        }
    }
    c.expect(
        purity < EXACT,
        format!("purity identity, 200 cases, max deviation {purity:e}"),
    );
    c.expect(
        moebius < EXACT,
        format!("Möbius vs direct, 200 cases, max deviation {moebius:e}"),
    );
    c.expect(lu < EXACT, format!("LU invariance, 200 cases, max deviation {lu:e}"));
    c.expect(
        product < EXACT,
        format!("product multiplicativity, 200 cases, max deviation {product:e}"),
    );
    c.expect(
        false_pos == 0,
        format!("biseparable mixtures, 200 cases, {false_pos} false positives"),
    );
    Ok(c)
}

fn criterion_8() -> Outcome {
    type Q = Ratio<i128>;
    let mut c = Check::new();
    let pow = |d: usize, e: i64| -> Q {
        if e >= 0 {
            Q::from_integer((d as i128).pow(e as u32))
        } else {
            Q::new(1, (d as i128).pow((-e) as u32))
        }
    };
    let mut compared = 0usize;
    let mut mismatches = Vec::new();
    for d in [2usize, 3, 5] {
        let purity = |x: usize| pow(d, x as i64) - Q::one();
        let improved = |x: usize| pow(d, x as i64 - 2) * Q::from_integer((d * d - 1) as i128);
        for n in 1..=10 {
            for k in 1..=n {
                for (name, f) in [("purity", &purity as &dyn Fn(usize) -> Q), ("improved", &improved)] {
                    let fast = equipartition_max(f, n, k)?;
                    let brute = brute_force(n, k, f);
                    compared += 1;
                    if fast != brute {
                        mismatches.push(format!("{name} n={n} k={k} d={d}: {fast} vs {brute}"));
                    }
                }
            }
        }
    }
    c.expect(
        mismatches.is_empty(),
        format!("{compared} exact comparisons, mismatches: {mismatches:?}"),
    );
    Ok(c)
}

/// Maximum of `∏ f(kᵢ)` over all compositions `k₁ + … + k_k = n` with `kᵢ ≥ 1`.
fn brute_force<Q: Clone + PartialOrd + Zero + One + std::ops::Mul<Output = Q>>(
    n: usize,
    k: usize,
    f: &dyn Fn(usize) -> Q,
) -> Q {
    fn rec<Q: Clone + PartialOrd + One + std::ops::Mul<Output = Q>>(
        left: usize,
        parts: usize,
        acc: Q,
        f: &dyn Fn(usize) -> Q,
        best: &mut Option<Q>,
    ) {
        if parts == 0 {
            if left == 0 && best.as_ref().is_none_or(|b| acc > *b) {
                *best = Some(acc);
            }
            return;
        }
        for size in 1..=left.saturating_sub(parts - 1) {
            rec(left - size, parts - 1, acc.clone() * f(size), f, best);
        }
    }
    let mut best = None;
    rec(n, k, Q::one(), f, &mut best);
    best.unwrap_or_else(Q::zero)
}

fn criterion_9() -> Outcome {
    let mut c = Check::new();
    let fixtures = [
        (
            "ghz(3,2)",
            DensityMatrix::ghz(3, 2)?,
            BoundSpec::PurityKsep { n: 3, d: 2, k: 2 },
        ),
        (
            "cluster4",
            DensityMatrix::graph_state(&Graph::cycle(4)?)?,
            BoundSpec::CutoffNminus1 { n: 4, d: 2 },
        ),
        (
            "ame43",
            DensityMatrix::ame43()?,
            BoundSpec::CutoffBisepMax { n: 4, d: 3, x: 3 },
        ),
    ];
    let schedules = [
        Schedule::Lexicographic,
        Schedule::SettingGrouped,
        Schedule::GreedyExpected,
        Schedule::Pruned,
    ];
    for (name, rho, target) in &fixtures {
        let table = norm_table_moebius(rho)?;
        let truth = match target.quantity() {
            tensornorm::bounds::Quantity::FullBody => table.full_body(),
            tensornorm::bounds::Quantity::Cx(x) => table.cx(x)?.value,
        };
        let (mut unsound, mut unfinished, mut max_len) = (0, 0, 0);
        for seed in 0..50u64 {
            let schedule = schedules[seed as usize % schedules.len()];
            let rec = sequential_acquire(rho, target, Misalignment::Haar { seed }, schedule, None)?;
            if rec.steps.iter().any(|s| s.lower_bound > truth + EXACT) {
                unsound += 1;
            }
            if rec.stop_reason != StopReason::BoundViolated {
                unfinished += 1;
            }
            max_len = max_len.max(rec.len());
        }
        c.expect(
            unsound == 0 && unfinished == 0,
            format!(
                "{name}: 50 misalignments, {unsound} unsound, {unfinished} not bound-violated, longest run {max_len}"
            ),
        );
    }
    Ok(c)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("GHZ 3-qubit detection", criterion_1),
        ("4-cycle cluster state", criterion_2),
        ("AME(4,3) cutoff violation and sequential certification", criterion_3),
        ("noise thresholds for GHZ(3,3)", criterion_4),
        ("dimensionality witness", criterion_5),
        ("GHZ(4,2) negative control", criterion_6),
        ("property suites", criterion_7),
        ("equipartition maximization", criterion_8),
        ("sequential soundness", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, details) = match f() {
            Ok(c) => (c.ok, c.details),
            Err(e) => (false, vec![format!("error: {e}")]),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {}: {name} ({:.2}s)",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
        for line in details {
            println!("    {line}");
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
