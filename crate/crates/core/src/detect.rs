//! Verdicts from bounds, white-noise threshold sweeps, and sequential
//! frame-free acquisition of correlation elements.

use std::collections::HashSet;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::GeneratorBasis;
use crate::bounds::{BoundSpec, Quantity};
use crate::correlations::{norm_table_moebius, tensor_element, NormTable, TensorIndex};
use crate::error::{Error, Result};
use crate::random::{haar_unitary, seeded};
use crate::states::DensityMatrix;
use crate::C64;

/// A criterion counts as violated only when the measured value exceeds the
/// bound by more than this margin.
pub const VIOLATION_MARGIN: f64 = 1e-9;

/// Relative tolerance around `d - 1` that triggers the pruning rule.
pub const PRUNE_EPSILON: f64 = 0.05;

/// Largest candidate index space the sequential simulator will enumerate.
pub const MAX_INDEX_SPACE: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Violated,
    NotViolated,
}

impl Verdict {
    fn from_values(measured: f64, bound: f64) -> Self {
        if measured > bound + VIOLATION_MARGIN {
            Verdict::Violated
        } else {
            Verdict::NotViolated
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Violated => "violated",
            Verdict::NotViolated => "not-violated",
        })
    }
}

/// Measured value of `quantity` from a norm table.
pub fn measure(table: &NormTable, quantity: Quantity) -> Result<f64> {
    match quantity {
        Quantity::FullBody => Ok(table.full_body()),
        Quantity::Cx(x) => Ok(table.cx(x)?.value),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub criterion: String,
    pub spec: BoundSpec,
    pub bound: f64,
    pub notes: String,
    pub quantity: Quantity,
    pub measured: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ClaimKind {
    /// Not biseparable; implies not k-separable for every k.
    GenuineMultipartite,
    NotKSeparable {
        k: usize,
    },
    /// Not separable across any cut of sizes `(k1 | n - k1)`.
    NotSeparableAcross {
        k1: usize,
    },
    RankVectorExcluded {
        ranks: Vec<usize>,
    },
}

impl fmt::Display for ClaimKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClaimKind::GenuineMultipartite => f.write_str("not 2-separable ⇒ genuinely multipartite entangled"),
            ClaimKind::NotKSeparable { k } => write!(f, "not {k}-separable"),
            ClaimKind::NotSeparableAcross { k1 } => write!(f, "not separable across any ({k1}|n-{k1}) cut"),
            ClaimKind::RankVectorExcluded { ranks } => {
                let r: Vec<String> = ranks.iter().map(|k| k.to_string()).collect();
                write!(f, "rank vector ({}) excluded", r.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    #[serde(flatten)]
    pub kind: ClaimKind,
    pub text: String,
    /// Labels of the violated criteria supporting the claim.
    pub criteria: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub state: String,
    pub n: usize,
    pub d: usize,
    pub norms: NormTable,
    pub outcomes: Vec<CriterionOutcome>,
    pub claims: Vec<Claim>,
}

impl DetectionReport {
    pub fn is_gme(&self) -> bool {
        self.claims.iter().any(|c| c.kind == ClaimKind::GenuineMultipartite)
    }

    pub fn verdicts(&self) -> Vec<(String, Verdict)> {
        self.outcomes.iter().map(|o| (o.criterion.clone(), o.verdict)).collect()
    }

    pub fn outcome(&self, label: &str) -> Option<&CriterionOutcome> {
        self.outcomes.iter().find(|o| o.criterion == label)
    }
}

fn claims_of(spec: &BoundSpec) -> Vec<ClaimKind> {
    match spec {
        BoundSpec::PurityKsep { k: 2, .. } | BoundSpec::ImprovedKsep { k: 2, .. } => {
            vec![ClaimKind::GenuineMultipartite]
        }
        BoundSpec::PurityKsep { k, .. } | BoundSpec::ImprovedKsep { k, .. } => vec![ClaimKind::NotKSeparable { k: *k }],
        BoundSpec::CutoffBisepMax { .. } | BoundSpec::CutoffHalf { .. } | BoundSpec::CutoffNminus1 { .. } => {
            vec![ClaimKind::GenuineMultipartite]
        }
        BoundSpec::CutoffPartition { k1, .. } => vec![ClaimKind::NotSeparableAcross { k1: *k1 }],
        BoundSpec::DimVector { ranks, .. } => vec![ClaimKind::RankVectorExcluded { ranks: ranks.clone() }],
        // holds for every state; a violation signals inconsistent input, not entanglement
        BoundSpec::FullbodySingle { .. } => vec![],
    }
}

fn check_criterion(spec: &BoundSpec, n: usize, d: usize) -> Result<()> {
    if spec.n() != n || spec.d() != d {
        return Err(Error::InvalidParameter(format!(
            "criterion {} is for n={}, d={} but the state has n={n}, d={d}",
            spec.label(),
            spec.n(),
            spec.d()
        )));
    }
    Ok(())
}

/// Compares every criterion with the matching measured quantity of `table`.
pub fn evaluate_table(state: &str, table: &NormTable, criteria: &[BoundSpec]) -> Result<DetectionReport> {
    let (n, d) = (table.n(), table.d());
    let mut outcomes = Vec::with_capacity(criteria.len());
    let mut claims: Vec<Claim> = Vec::new();
    for spec in criteria {
        check_criterion(spec, n, d)?;
        let bv = spec.evaluate()?;
        let quantity = spec.quantity();
        let measured = measure(table, quantity)?;
        let verdict = Verdict::from_values(measured, bv.value);
        let label = spec.label();
        if verdict == Verdict::Violated {
            for kind in claims_of(spec) {
                match claims.iter_mut().find(|c| c.kind == kind) {
                    Some(c) => c.criteria.push(label.clone()),
                    None => claims.push(Claim {
                        text: kind.to_string(),
                        kind,
                        criteria: vec![label.clone()],
                    }),
                }
            }
        }
        outcomes.push(CriterionOutcome {
            criterion: label,
            spec: spec.clone(),
            bound: bv.value,
            notes: bv.notes,
            quantity,
            measured,
            verdict,
        });
    }
    Ok(DetectionReport {
        state: state.to_string(),
        n,
        d,
        norms: table.clone(),
        outcomes,
        claims,
    })
}

/// Evaluates `criteria` against the norm table of `rho`.
pub fn evaluate(state: &str, rho: &DensityMatrix, criteria: &[BoundSpec]) -> Result<DetectionReport> {
    for spec in criteria {
        check_criterion(spec, rho.n(), rho.d())?;
    }
    let table = norm_table_moebius(rho)?;
    evaluate_table(state, &table, criteria)
}

/// The default criterion set for `(n, d)`: every k-separability bound, the
/// cutoff biseparable bounds for `x = 2..=n`, and the corollaries that apply.
pub fn default_criteria(n: usize, d: usize, ranks: Option<&[usize]>) -> Result<Vec<BoundSpec>> {
    let mut v = Vec::new();
    for k in 2..=n {
        v.push(BoundSpec::PurityKsep { n, d, k });
    }
    for k in 2..=n {
        v.push(BoundSpec::ImprovedKsep { n, d, k });
    }
    if n >= 2 {
        v.push(BoundSpec::FullbodySingle { n, d });
        for x in 2..=n {
            v.push(BoundSpec::CutoffBisepMax { n, d, x });
        }
    }
    if n >= 2 && n.is_multiple_of(2) {
        v.push(BoundSpec::CutoffHalf { n, d });
    }
    if n >= 3 {
        v.push(BoundSpec::CutoffNminus1 { n, d });
    }
    if let Some(r) = ranks {
        v.push(BoundSpec::DimVector {
            n,
            d,
            ranks: r.to_vec(),
        });
    }
    for s in &v {
        s.evaluate()?;
    }
    Ok(v)
}

/// Grid of mixing weights `start, start+step, …, stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&stop) || start > stop {
            return Err(Error::InvalidParameter(format!(
                "grid {start}:{stop} must satisfy 0 <= start <= stop <= 1"
            )));
        }
        if step.is_nan() || step <= 0.0 {
            return Err(Error::InvalidParameter(format!("grid step {step} must be positive")));
        }
        Ok(Grid { start, stop, step })
    }

    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        let mut v: Vec<f64> = (0..=count)
            .map(|i| (self.start + i as f64 * self.step).min(self.stop))
            .collect();
        if (v[v.len() - 1] - self.stop).abs() > 1e-12 {
            v.push(self.stop);
        }
        v
    }
}

impl FromStr for Grid {
    type Err = Error;

    /// `a:b:step`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<f64> = s
            .split(':')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad grid value {t:?} in {s:?}")))
            })
            .collect::<Result<_>>()?;
        match parts[..] {
            [a, b, step] => Grid::new(a, b, step),
            _ => Err(Error::Parse(format!("grid must be a:b:step, got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p: f64,
    pub quantities: Vec<f64>,
    pub verdicts: Vec<Verdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub criterion: String,
    pub bound: f64,
    /// Quantity of the noiseless state.
    pub pure_value: f64,
    /// First grid point at which the criterion is violated.
    pub first_violating_grid_p: Option<f64>,
    /// Bisection-refined threshold `p*`.
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseSweepResult {
    pub state: String,
    pub criteria: Vec<BoundSpec>,
    pub labels: Vec<String>,
    pub bounds: Vec<f64>,
    pub rows: Vec<SweepRow>,
    pub thresholds: Vec<Threshold>,
}

/// Largest tolerated deviation from exact `p²` scaling.
pub const QUADRATIC_TOL: f64 = 1e-10;

/// Bisection width for threshold refinement.
pub const THRESHOLD_TOL: f64 = 1e-10;

/// Mixes the pure state `rho_pure` with white noise along `grid` and finds, per
/// criterion, the smallest weight `p` at which it is violated.
pub fn noise_sweep(
    state: &str,
    rho_pure: &DensityMatrix,
    criteria: &[BoundSpec],
    grid: &Grid,
) -> Result<NoiseSweepResult> {
    let purity = rho_pure.purity();
    if (purity - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidState(format!(
            "noise sweep needs a pure state, purity is {purity}"
        )));
    }
    for spec in criteria {
        check_criterion(spec, rho_pure.n(), rho_pure.d())?;
    }
    let bounds: Vec<f64> = criteria
        .iter()
        .map(|s| s.evaluate().map(|b| b.value))
        .collect::<Result<_>>()?;
    let pure_table = norm_table_moebius(rho_pure)?;
    let pure_values: Vec<f64> = criteria
        .iter()
        .map(|s| measure(&pure_table, s.quantity()))
        .collect::<Result<_>>()?;

    let points = grid.points();
    let rows: Vec<SweepRow> = points
        .par_iter()
        .map(|&p| {
            let table = norm_table_moebius(&rho_pure.mix_with_white_noise(p)?)?;
            let mut quantities = Vec::with_capacity(criteria.len());
            let mut verdicts = Vec::with_capacity(criteria.len());
            for ((spec, &bound), &q1) in criteria.iter().zip(&bounds).zip(&pure_values) {
                let q = measure(&table, spec.quantity())?;
                if (q - p * p * q1).abs() > QUADRATIC_TOL {
                    return Err(Error::NumericalIntegrity(format!(
                        "{} at p={p} is {q}, expected p²·{q1}",
                        spec.label()
                    )));
                }
                quantities.push(q);
                verdicts.push(Verdict::from_values(q, bound));
            }
            Ok(SweepRow {
                p,
                quantities,
                verdicts,
            })
        })
        .collect::<Result<_>>()?;

    let thresholds = criteria
        .iter()
        .enumerate()
        .map(|(i, spec)| {
            let first = rows.iter().position(|r| r.verdicts[i] == Verdict::Violated);
            let threshold = first.map(|j| {
                let lo = if j == 0 { 0.0 } else { rows[j - 1].p };
                refine_threshold(pure_values[i], bounds[i], lo, rows[j].p)
            });
            Threshold {
                criterion: spec.label(),
                bound: bounds[i],
                pure_value: pure_values[i],
                first_violating_grid_p: first.map(|j| rows[j].p),
                threshold,
            }
        })
        .collect();

    Ok(NoiseSweepResult {
        state: state.to_string(),
        labels: criteria.iter().map(BoundSpec::label).collect(),
        criteria: criteria.to_vec(),
        bounds,
        rows,
        thresholds,
    })
}

/// Bisection for `p²·pure_value = bound` on `[lo, hi]`, where `hi` violates.
fn refine_threshold(pure_value: f64, bound: f64, mut lo: f64, mut hi: f64) -> f64 {
    let violated = |p: f64| p * p * pure_value > bound;
    if violated(lo) {
        return lo;
    }
    while hi - lo > THRESHOLD_TOL {
        let mid = 0.5 * (lo + hi);
        if violated(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

impl NoiseSweepResult {
    /// CSV with columns `p`, one quantity column per criterion, one bound
    /// column per criterion, one verdict column per criterion.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["p".to_string()];
        header.extend(self.labels.iter().map(|l| format!("quantity:{l}")));
        header.extend(self.labels.iter().map(|l| format!("bound:{l}")));
        header.extend(self.labels.iter().map(|l| format!("verdict:{l}")));
        w.write_record(&header)?;
        for row in &self.rows {
            let mut rec = vec![row.p.to_string()];
            rec.extend(row.quantities.iter().map(f64::to_string));
            rec.extend(self.bounds.iter().map(f64::to_string));
            rec.extend(row.verdicts.iter().map(Verdict::to_string));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Two-column `p quantity` data for criterion `i`.
    pub fn plot_data(&self, i: usize) -> String {
        let mut s = format!("# p {}\n", self.labels[i]);
        for row in &self.rows {
            s.push_str(&format!("{} {}\n", row.p, row.quantities[i]));
        }
        s
    }
}

/// How local reference frames are misaligned before acquisition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Misalignment {
    Identity,
    /// Haar-random unitary per party, party `p` (1-based) seeded with `seed + p`.
    Haar {
        seed: u64,
    },
}

impl Misalignment {
    pub fn unitaries(&self, n: usize, d: usize) -> Vec<DMatrix<C64>> {
        match *self {
            Misalignment::Identity => vec![DMatrix::identity(d, d); n],
            Misalignment::Haar { seed } => party_seeds(seed, n)
                .into_iter()
                .map(|s| haar_unitary(d, &mut seeded(s)))
                .collect(),
        }
    }
}

pub fn party_seeds(seed: u64, n: usize) -> Vec<u64> {
    (1..=n as u64).map(|p| seed.wrapping_add(p)).collect()
}

/// `(⊗ᵢ Uᵢ) ρ (⊗ᵢ Uᵢ)†` for the given misalignment.
pub fn misalign(rho: &DensityMatrix, misalignment: Misalignment) -> Result<DensityMatrix> {
    match misalignment {
        Misalignment::Identity => Ok(rho.clone()),
        m => rho.apply_local_unitaries(&m.unitaries(rho.n(), rho.d())),
    }
}

/// Misalignment with explicit per-party seeds.
pub fn misalign_with_seeds(rho: &DensityMatrix, seeds: &[u64]) -> Result<DensityMatrix> {
    if seeds.len() != rho.n() {
        return Err(Error::InvalidParameter(format!(
            "{} seeds for {} parties",
            seeds.len(),
            rho.n()
        )));
    }
    let us: Vec<_> = seeds.iter().map(|&s| haar_unitary(rho.d(), &mut seeded(s))).collect();
    rho.apply_local_unitaries(&us)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Schedule {
    /// Index order.
    Lexicographic,
    /// Correlations readable from the computational-basis setting first, then
    /// pair-observable settings, grouped by local setting.
    SettingGrouped,
    /// Descending magnitude of the element expected from the unrotated state.
    GreedyExpected,
    /// Greedy order, skipping same-row/column two-party elements once one is
    /// found near its maximal value `d-1`.
    Pruned,
}

impl FromStr for Schedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lexicographic" => Ok(Schedule::Lexicographic),
            "setting-grouped" => Ok(Schedule::SettingGrouped),
            "greedy-expected" | "greedy" => Ok(Schedule::GreedyExpected),
            "pruned" => Ok(Schedule::Pruned),
            other => Err(Error::Parse(format!(
                "unknown schedule {other:?} (lexicographic, setting-grouped, greedy-expected, pruned)"
            ))),
        }
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Schedule::Lexicographic => "lexicographic",
            Schedule::SettingGrouped => "setting-grouped",
            Schedule::GreedyExpected => "greedy-expected",
            Schedule::Pruned => "pruned",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    BoundViolated,
    BudgetExhausted,
    IndexSpaceExhausted,
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StopReason::BoundViolated => "bound-violated",
            StopReason::BudgetExhausted => "budget-exhausted",
            StopReason::IndexSpaceExhausted => "index-space-exhausted",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcquisitionStep {
    pub index: TensorIndex,
    pub value: f64,
    pub lower_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcquisitionRecord {
    pub target: String,
    pub target_spec: BoundSpec,
    pub bound: f64,
    pub quantity: Quantity,
    pub schedule: Schedule,
    pub misalignment: Misalignment,
    pub budget: Option<usize>,
    pub prune_epsilon: Option<f64>,
    pub steps: Vec<AcquisitionStep>,
    /// Indices dropped by the pruning rule.
    pub skipped: usize,
    pub stop_reason: StopReason,
    pub final_lower_bound: f64,
}

impl AcquisitionRecord {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// All tensor indices whose support has at least `min_support` parties, in code order.
fn candidate_indices(n: usize, d: usize, min_support: usize) -> Result<Vec<TensorIndex>> {
    let radix = d * d;
    let total = (radix as u128).pow(n as u32);
    if total > MAX_INDEX_SPACE as u128 {
        return Err(Error::DimensionCap(format!(
            "index space (d²)^n = {total} exceeds {MAX_INDEX_SPACE} for sequential acquisition"
        )));
    }
    Ok((0..total as usize)
        .map(|code| TensorIndex::from_code(code, n, d))
        .filter(|idx| idx.support().len() >= min_support)
        .collect())
}

fn elements(rho: &DensityMatrix, basis: &GeneratorBasis, indices: &[TensorIndex]) -> Result<Vec<f64>> {
    indices.par_iter().map(|idx| tensor_element(rho, basis, idx)).collect()
}

/// Reveals exact tensor elements of the misaligned state one at a time,
/// accumulating `Σ T²` as a lower bound on the target quantity, until the
/// target bound is exceeded, the budget runs out, or no indices remain.
pub fn sequential_acquire(
    rho: &DensityMatrix,
    target: &BoundSpec,
    misalignment: Misalignment,
    schedule: Schedule,
    budget: Option<usize>,
) -> Result<AcquisitionRecord> {
    let (n, d) = (rho.n(), rho.d());
    check_criterion(target, n, d)?;
    if budget == Some(0) {
        return Err(Error::InvalidParameter("budget must be at least 1".into()));
    }
    let bound = target.evaluate()?.value;
    let basis = GeneratorBasis::new(d)?;
    let mut order = candidate_indices(n, d, target.min_support())?;

    match schedule {
        Schedule::Lexicographic => {}
        Schedule::SettingGrouped => {
            order.sort_by_cached_key(|idx| {
                let settings: Vec<usize> = idx.0.iter().map(|&i| basis.setting_of(i)).collect();
                let non_diagonal = settings.iter().filter(|&&s| s != 0).count();
                (non_diagonal, settings, idx.code(d))
            });
        }
        Schedule::GreedyExpected | Schedule::Pruned => {
            let expected = elements(rho, &basis, &order)?;
            let mut keyed: Vec<(f64, TensorIndex)> = expected.into_iter().map(f64::abs).zip(order).collect();
            keyed.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
            order = keyed.into_iter().map(|(_, idx)| idx).collect();
        }
    }

    let rotated = misalign(rho, misalignment)?;
    let prune = schedule == Schedule::Pruned;
    let prune_level = (d as f64 - 1.0) * (1.0 - PRUNE_EPSILON);
    // (party a, party b, generator on a, generator on b) rows/columns that are excluded
    let mut excluded_rows: HashSet<(usize, usize, usize)> = HashSet::new();
    let mut excluded_cols: HashSet<(usize, usize, usize)> = HashSet::new();
    let mut found: HashSet<TensorIndex> = HashSet::new();

    let mut steps = Vec::new();
    let mut skipped = 0;
    let mut lower = 0.0;
    let mut stop_reason = StopReason::IndexSpaceExhausted;
    for idx in order {
        let pair = two_party(&idx);
        if prune {
            if let Some((a, b, i, j)) = pair {
                let hit = excluded_rows.contains(&(a, b, i)) || excluded_cols.contains(&(a, b, j));
                if hit && !found.contains(&idx) {
                    skipped += 1;
                    continue;
                }
            }
        }
        if budget.is_some_and(|b| steps.len() >= b) {
            stop_reason = StopReason::BudgetExhausted;
            break;
        }
        let value = tensor_element(&rotated, &basis, &idx)?;
        lower += value * value;
        if prune && value.abs() >= prune_level {
            if let Some((a, b, i, j)) = pair {
                excluded_rows.insert((a, b, i));
                excluded_cols.insert((a, b, j));
                found.insert(idx.clone());
            }
        }
        steps.push(AcquisitionStep {
            index: idx,
            value,
            lower_bound: lower,
        });
        if lower > bound + VIOLATION_MARGIN {
            stop_reason = StopReason::BoundViolated;
            break;
        }
    }

    Ok(AcquisitionRecord {
        target: target.label(),
        target_spec: target.clone(),
        bound,
        quantity: target.quantity(),
        schedule,
        misalignment,
        budget,
        prune_epsilon: prune.then_some(PRUNE_EPSILON),
        steps,
        skipped,
        stop_reason,
        final_lower_bound: lower,
    })
}

/// `(a, b, i, j)` for an index supported on exactly two parties `a < b` with
/// generators `i` on `a` and `j` on `b`.
fn two_party(idx: &TensorIndex) -> Option<(usize, usize, usize, usize)> {
    let mut it = idx.0.iter().enumerate().filter(|(_, &g)| g != 0);
    let (a, &i) = it.next()?;
    let (b, &j) = it.next()?;
    if it.next().is_some() {
        return None;
    }
    Some((a, b, i, j))
}
