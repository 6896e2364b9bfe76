//! Closed-form upper bounds on squared correlation norms.
//!
//! Every value returned here bounds a squared quantity: either the full-body
//! norm `‖τ‖²` or a cumulative sum `C_x`. Conversion to unsquared norms, if
//! wanted, happens only when rendering.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which bound, with its parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "kebab-case")]
pub enum BoundSpec {
    /// Purity bound `d^x - 1` combined over the best k-partition; bounds `‖τ‖²`.
    PurityKsep { n: usize, d: usize, k: usize },
    /// Improved bound `d^{x-2}(d²-1)` combined over the best k-partition; bounds `‖τ‖²`.
    ImprovedKsep { n: usize, d: usize, k: usize },
    /// Bound on `‖τ‖²` valid for every state.
    FullbodySingle { n: usize, d: usize },
    /// Bound on `C_x` for states separable across the cut `(k1 | n-k1)`.
    CutoffPartition { n: usize, d: usize, x: usize, k1: usize },
    /// Largest [`BoundSpec::CutoffPartition`] over all cuts: a biseparable bound on `C_x`.
    CutoffBisepMax { n: usize, d: usize, x: usize },
    /// `C_{n/2+1} ≤ d^n - d` for biseparable states, even `n` only.
    CutoffHalf { n: usize, d: usize },
    /// Biseparable bound on `C_{n-1}`.
    CutoffNminus1 { n: usize, d: usize },
    /// Bound on `C_2` for states decomposable into pure states with the given local ranks.
    DimVector { n: usize, d: usize, ranks: Vec<usize> },
}

/// What a bound constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "x")]
pub enum Quantity {
    FullBody,
    Cx(usize),
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::FullBody => f.write_str("full-body norm²"),
            Quantity::Cx(x) => write!(f, "C_{x}"),
        }
    }
}

impl BoundSpec {
    pub fn tag(&self) -> &'static str {
        match self {
            BoundSpec::PurityKsep { .. } => "purity-ksep",
            BoundSpec::ImprovedKsep { .. } => "improved-ksep",
            BoundSpec::FullbodySingle { .. } => "fullbody-single",
            BoundSpec::CutoffPartition { .. } => "cutoff-partition",
            BoundSpec::CutoffBisepMax { .. } => "cutoff-bisep-max",
            BoundSpec::CutoffHalf { .. } => "cutoff-half",
            BoundSpec::CutoffNminus1 { .. } => "cutoff-nminus1",
            BoundSpec::DimVector { .. } => "dim-vector",
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            BoundSpec::PurityKsep { n, .. }
            | BoundSpec::ImprovedKsep { n, .. }
            | BoundSpec::FullbodySingle { n, .. }
            | BoundSpec::CutoffPartition { n, .. }
            | BoundSpec::CutoffBisepMax { n, .. }
            | BoundSpec::CutoffHalf { n, .. }
            | BoundSpec::CutoffNminus1 { n, .. }
            | BoundSpec::DimVector { n, .. } => n,
        }
    }

    pub fn d(&self) -> usize {
        match *self {
            BoundSpec::PurityKsep { d, .. }
            | BoundSpec::ImprovedKsep { d, .. }
            | BoundSpec::FullbodySingle { d, .. }
            | BoundSpec::CutoffPartition { d, .. }
            | BoundSpec::CutoffBisepMax { d, .. }
            | BoundSpec::CutoffHalf { d, .. }
            | BoundSpec::CutoffNminus1 { d, .. }
            | BoundSpec::DimVector { d, .. } => d,
        }
    }

    /// The measured quantity this bound constrains.
    pub fn quantity(&self) -> Quantity {
        match *self {
            BoundSpec::PurityKsep { .. } | BoundSpec::ImprovedKsep { .. } | BoundSpec::FullbodySingle { .. } => {
                Quantity::FullBody
            }
            BoundSpec::CutoffPartition { x, .. } | BoundSpec::CutoffBisepMax { x, .. } => Quantity::Cx(x),
            BoundSpec::CutoffHalf { n, .. } => Quantity::Cx(n / 2 + 1),
            BoundSpec::CutoffNminus1 { n, .. } => Quantity::Cx(n - 1),
            BoundSpec::DimVector { .. } => Quantity::Cx(2),
        }
    }

    /// The smallest subset size contributing to the bounded quantity.
    pub fn min_support(&self) -> usize {
        match self.quantity() {
            Quantity::FullBody => self.n(),
            Quantity::Cx(x) => x,
        }
    }

    /// Short human label, e.g. `purity-ksep[k=2]`.
    pub fn label(&self) -> String {
        let params = match self {
            BoundSpec::PurityKsep { k, .. } | BoundSpec::ImprovedKsep { k, .. } => format!("[k={k}]"),
            BoundSpec::FullbodySingle { .. } | BoundSpec::CutoffHalf { .. } | BoundSpec::CutoffNminus1 { .. } => {
                String::new()
            }
            BoundSpec::CutoffPartition { x, k1, .. } => format!("[x={x},k1={k1}]"),
            BoundSpec::CutoffBisepMax { x, .. } => format!("[x={x}]"),
            BoundSpec::DimVector { ranks, .. } => {
                let r: Vec<String> = ranks.iter().map(|k| k.to_string()).collect();
                format!("[{}]", r.join(","))
            }
        };
        format!("{}{params}", self.tag())
    }

    /// Evaluates the bound.
    pub fn evaluate(&self) -> Result<BoundValue> {
        match self {
            &BoundSpec::PurityKsep { n, d, k } => bound_purity_ksep(n, d, k),
            &BoundSpec::ImprovedKsep { n, d, k } => bound_improved_ksep(n, d, k),
            &BoundSpec::FullbodySingle { n, d } => bound_fullbody_single(n, d),
            &BoundSpec::CutoffPartition { n, d, x, k1 } => bound_cutoff_partition(n, d, x, k1),
            &BoundSpec::CutoffBisepMax { n, d, x } => bound_cutoff_bisep_max(n, d, x),
            &BoundSpec::CutoffHalf { n, d } => bound_cutoff_half(n, d),
            &BoundSpec::CutoffNminus1 { n, d } => bound_cutoff_nminus1(n, d),
            BoundSpec::DimVector { n, d, ranks } => bound_dim_vector(*n, *d, ranks),
        }
    }
}

/// Criterion syntax used on the command line: `tag[:param]`, with `n` and `d`
/// supplied separately. Parsed into a [`CriterionTemplate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CriterionTemplate {
    PurityKsep(Option<usize>),
    ImprovedKsep(Option<usize>),
    FullbodySingle,
    CutoffPartition { k1: usize, x: Option<usize> },
    CutoffBisepMax(Option<usize>),
    CutoffHalf,
    CutoffNminus1,
    DimVector(Option<Vec<usize>>),
}

impl FromStr for CriterionTemplate {
    type Err = Error;

    /// Accepts `purity-ksep:2`, `improved-ksep`, `fullbody-single`,
    /// `cutoff-partition:1` or `cutoff-partition:1:3` (k1, x),
    /// `cutoff-bisep-max:3`, `cutoff-half`, `cutoff-nminus1`,
    /// `dim-vector` or `dim-vector:2,2,3`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.trim().splitn(2, ':');
        let tag = parts.next().unwrap_or_default();
        let param = parts.next();
        let num = |v: &str| -> Result<usize> {
            v.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad number {v:?} in criterion {s:?}")))
        };
        let opt_num = |p: Option<&str>| p.map(num).transpose();
        let no_param = |t: CriterionTemplate| {
            if param.is_some() {
                Err(Error::Parse(format!("criterion {tag} takes no parameter")))
            } else {
                Ok(t)
            }
        };
        match tag {
            "purity-ksep" => Ok(CriterionTemplate::PurityKsep(opt_num(param)?)),
            "improved-ksep" => Ok(CriterionTemplate::ImprovedKsep(opt_num(param)?)),
            "fullbody-single" => no_param(CriterionTemplate::FullbodySingle),
            "cutoff-partition" => {
                let p =
                    param.ok_or_else(|| Error::Parse("cutoff-partition needs k1, e.g. cutoff-partition:1".into()))?;
                let (k1, x) = match p.split_once(':') {
                    Some((a, b)) => (num(a)?, Some(num(b)?)),
                    None => (num(p)?, None),
                };
                Ok(CriterionTemplate::CutoffPartition { k1, x })
            }
            "cutoff-bisep-max" => Ok(CriterionTemplate::CutoffBisepMax(opt_num(param)?)),
            "cutoff-half" => no_param(CriterionTemplate::CutoffHalf),
            "cutoff-nminus1" => no_param(CriterionTemplate::CutoffNminus1),
            "dim-vector" => Ok(CriterionTemplate::DimVector(
                param
                    .map(|p| p.split(',').map(num).collect::<Result<Vec<_>>>())
                    .transpose()?,
            )),
            other => Err(Error::Parse(format!("unknown criterion {other:?}"))),
        }
    }
}

impl CriterionTemplate {
    /// Completes the template for `(n, d)`. Missing `x` falls back to
    /// `default_x`, missing ranks to `default_ranks`, missing `k` to 2.
    pub fn instantiate(
        &self,
        n: usize,
        d: usize,
        default_x: Option<usize>,
        default_ranks: Option<&[usize]>,
    ) -> Result<BoundSpec> {
        let need_x = |x: Option<usize>| {
            x.or(default_x)
                .ok_or_else(|| Error::InvalidParameter("cutoff criterion needs x (use tag:x or --x)".into()))
        };
        let spec = match self {
            CriterionTemplate::PurityKsep(k) => BoundSpec::PurityKsep {
                n,
                d,
                k: k.unwrap_or(2),
            },
            CriterionTemplate::ImprovedKsep(k) => BoundSpec::ImprovedKsep {
                n,
                d,
                k: k.unwrap_or(2),
            },
            CriterionTemplate::FullbodySingle => BoundSpec::FullbodySingle { n, d },
            CriterionTemplate::CutoffPartition { k1, x } => BoundSpec::CutoffPartition {
                n,
                d,
                x: need_x(*x)?,
                k1: *k1,
            },
            CriterionTemplate::CutoffBisepMax(x) => BoundSpec::CutoffBisepMax { n, d, x: need_x(*x)? },
            CriterionTemplate::CutoffHalf => BoundSpec::CutoffHalf { n, d },
            CriterionTemplate::CutoffNminus1 => BoundSpec::CutoffNminus1 { n, d },
            CriterionTemplate::DimVector(r) => {
                let ranks = r
                    .clone()
                    .or_else(|| default_ranks.map(<[usize]>::to_vec))
                    .ok_or_else(|| {
                        Error::InvalidParameter("dim-vector needs ranks (use dim-vector:k1,k2,.. or --ranks)".into())
                    })?;
                BoundSpec::DimVector { n, d, ranks }
            }
        };
        spec.evaluate()?;
        Ok(spec)
    }
}

/// A bound on a squared quantity, with the spec that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub value: f64,
    pub spec: BoundSpec,
    pub notes: String,
}

fn check_nd(n: usize, d: usize, min_n: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidDimension(format!("d={d} must be at least 2")));
    }
    if n < min_n {
        return Err(Error::InvalidParameter(format!("n={n} must be at least {min_n}")));
    }
    if n > 60 {
        return Err(Error::InvalidParameter(format!(
            "n={n} is too large for closed-form evaluation"
        )));
    }
    Ok(())
}

fn pow(d: usize, e: i64) -> f64 {
    (d as f64).powi(e as i32)
}

/// Largest product `∏ f(|βᵢ|)` over partitions of `n` parties into `k` blocks,
/// attained at an equipartition: `f(⌈n/k⌉)^R · f(⌊n/k⌋)^{k-R}` with `R = n mod k`.
///
/// Valid when `f(x)² ≥ f(x+y)·f(x-y)`, which the caller guarantees.
pub fn equipartition_max<T, F>(f: F, n: usize, k: usize) -> Result<T>
where
    T: Clone + Mul<Output = T> + One,
    F: Fn(usize) -> T,
{
    if k < 1 || k > n {
        return Err(Error::InvalidParameter(format!("k={k} outside 1..={n}")));
    }
    let floor = n / k;
    let rem = n - k * floor;
    let big = f(floor + 1);
    let small = f(floor);
    let mut acc = T::one();
    for _ in 0..rem {
        acc = acc * big.clone();
    }
    for _ in 0..(k - rem) {
        acc = acc * small.clone();
    }
    Ok(acc)
}

/// Squared purity bound on `‖τ‖²` for k-separable states.
pub fn bound_purity_ksep(n: usize, d: usize, k: usize) -> Result<BoundValue> {
    check_nd(n, d, 1)?;
    let value = equipartition_max(|x| pow(d, x as i64) - 1.0, n, k)?;
    Ok(BoundValue {
        value,
        spec: BoundSpec::PurityKsep { n, d, k },
        notes: format!(
            "bounds full-body norm² of {k}-separable states via block purity bound d^x-1 at the equipartition"
        ),
    })
}

/// Squared improved bound on `‖τ‖²` for k-separable states:
/// `(d²-1)^k·(d^{⌈n/k⌉-2})^R·(d^{⌊n/k⌋-2})^{k-R}`.
pub fn bound_improved_ksep(n: usize, d: usize, k: usize) -> Result<BoundValue> {
    check_nd(n, d, 1)?;
    let value = equipartition_max(|x| pow(d, x as i64 - 2) * (pow(d, 2) - 1.0), n, k)?;
    let mut notes = format!(
        "bounds full-body norm² of {k}-separable states via block bound d^(x-2)(d²-1); \
         block factor d^(x-2) used as written (no -1), consistent with the 4-qubit biseparable value 9"
    );
    if n / k == 1 {
        notes.push_str("; single-party blocks enter with factor d^(1-2) taken literally");
    }
    Ok(BoundValue {
        value,
        spec: BoundSpec::ImprovedKsep { n, d, k },
        notes,
    })
}

/// Bound on `‖τ‖²` for any state: the smaller of `d^{n-2}(d²-1)` and
/// `d^n - n(d^{n-2}-1)/(n-1)`.
pub fn bound_fullbody_single(n: usize, d: usize) -> Result<BoundValue> {
    check_nd(n, d, 2)?;
    let schmidt = pow(d, n as i64 - 2) * (pow(d, 2) - 1.0);
    let nf = n as f64;
    let combinatorial = pow(d, n as i64) - nf * (pow(d, n as i64 - 2) - 1.0) / (nf - 1.0);
    let (value, which) = if schmidt <= combinatorial {
        (schmidt, "d^(n-2)(d²-1)")
    } else {
        (combinatorial, "d^n - n(d^(n-2)-1)/(n-1)")
    };
    Ok(BoundValue {
        value,
        spec: BoundSpec::FullbodySingle { n, d },
        notes: format!(
            "min of d^(n-2)(d²-1) = {} and d^n - n(d^(n-2)-1)/(n-1) = {}; smaller: {which}; \
             the combinatorial form is applied to the full-body tensor",
            fmt_num(schmidt),
            fmt_num(combinatorial)
        ),
    })
}

fn check_cut(n: usize, d: usize, x: usize, k1: usize) -> Result<()> {
    check_nd(n, d, 2)?;
    if k1 < 1 || k1 >= n {
        return Err(Error::InvalidParameter(format!("k1={k1} outside 1..={}", n - 1)));
    }
    if x > n {
        return Err(Error::InvalidCutoff { x, n });
    }
    Ok(())
}

fn cutoff_partition_value(n: usize, d: usize, x: usize, k1: usize) -> f64 {
    let k2 = n - k1;
    let block = |k: usize| pow(d, k as i64) - 1.0;
    let mut v = block(k1) * block(k2);
    for k in [k1, k2] {
        if k >= x {
            v += block(k);
        }
    }
    v
}

/// `C_x` bound for states separable across `(k1 | n-k1)`:
/// `(d^{k₁}-1)(d^{k₂}-1) + Σ_{kⱼ ≥ x}(d^{kⱼ}-1)`.
pub fn bound_cutoff_partition(n: usize, d: usize, x: usize, k1: usize) -> Result<BoundValue> {
    check_cut(n, d, x, k1)?;
    let value = cutoff_partition_value(n, d, x, k1);
    Ok(BoundValue {
        value,
        spec: BoundSpec::CutoffPartition { n, d, x, k1 },
        notes: format!("bounds C_{x} for states separable across ({k1}|{})", n - k1),
    })
}

/// Largest cut bound over all bipartitions: a bound on `C_x` for every biseparable state.
pub fn bound_cutoff_bisep_max(n: usize, d: usize, x: usize) -> Result<BoundValue> {
    check_cut(n, d, x, 1)?;
    let (k1, value) =
        (1..=n / 2)
            .map(|k1| (k1, cutoff_partition_value(n, d, x, k1)))
            .fold(
                (0, f64::NEG_INFINITY),
                |best, cur| if cur.1 > best.1 { cur } else { best },
            );
    let mut notes = format!(
        "bounds C_{x} for biseparable states; maximum attained at cut ({k1}|{})",
        n - k1
    );
    if x == 0 {
        notes.push_str("; x=0 gives the trivial purity value d^n-1");
    }
    Ok(BoundValue {
        value,
        spec: BoundSpec::CutoffBisepMax { n, d, x },
        notes,
    })
}

/// `C_{n/2+1} ≤ d^n - d` for biseparable states; defined for even `n` only.
pub fn bound_cutoff_half(n: usize, d: usize) -> Result<BoundValue> {
    check_nd(n, d, 2)?;
    if !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "cutoff-half is stated for even n only (got n={n}); use cutoff-bisep-max"
        )));
    }
    Ok(BoundValue {
        value: pow(d, n as i64) - d as f64,
        spec: BoundSpec::CutoffHalf { n, d },
        notes: format!("bounds C_{} for biseparable states (d^n - d)", n / 2 + 1),
    })
}

/// `C_{n-1} ≤ max[A, B]` for biseparable states.
pub fn bound_cutoff_nminus1(n: usize, d: usize) -> Result<BoundValue> {
    check_nd(n, d, 3)?;
    let (lo, hi) = (n / 2, n - n / 2);
    let a = pow(d, n as i64) - pow(d, lo as i64) - pow(d, hi as i64) + 1.0;
    let nf = n as f64;
    let b = (d as f64 - 1.0) * (pow(d, n as i64 - 1) - 1.0) + pow(d, n as i64 - 1)
        - 1.0
        - nf / (nf - 1.0) * (pow(d, n as i64 - 3) - 1.0);
    let mut notes = format!(
        "bounds C_{} for biseparable states; A = d^n - d^floor(n/2) - d^ceil(n/2) + 1 = {}, \
         B = {}; B refines the (1|n-1) cut term and is not reproducible from cutoff-bisep-max",
        n - 1,
        fmt_num(a),
        fmt_num(b)
    );
    if n == 4 && d == 2 {
        notes.push_str("; direct evaluation gives 38/3, a value of 37/3 is sometimes quoted for this case");
    }
    Ok(BoundValue {
        value: a.max(b),
        spec: BoundSpec::CutoffNminus1 { n, d },
        notes,
    })
}

/// `C_2 ≤ d^n + n - 1 - Σᵢ d/kᵢ` for states decomposable with local ranks `kᵢ`.
pub fn bound_dim_vector(n: usize, d: usize, ranks: &[usize]) -> Result<BoundValue> {
    check_nd(n, d, 2)?;
    if ranks.len() != n {
        return Err(Error::InvalidParameter(format!("{} ranks for n={n}", ranks.len())));
    }
    if let Some(&bad) = ranks.iter().find(|&&k| k < 1 || k > d) {
        return Err(Error::InvalidParameter(format!("rank {bad} outside 1..={d}")));
    }
    let value = pow(d, n as i64) + n as f64 - 1.0 - ranks.iter().map(|&k| d as f64 / k as f64).sum::<f64>();
    let r: Vec<String> = ranks.iter().map(|k| k.to_string()).collect();
    Ok(BoundValue {
        value,
        spec: BoundSpec::DimVector {
            n,
            d,
            ranks: ranks.to_vec(),
        },
        notes: format!("bounds C_2 for states decomposable with local ranks ({})", r.join(",")),
    })
}

/// Every bound applicable to `(n, d)`, in report order.
pub fn standard_table(n: usize, d: usize) -> Result<Vec<BoundValue>> {
    check_nd(n, d, 2)?;
    let mut out = Vec::new();
    for k in 2..=n {
        out.push(bound_purity_ksep(n, d, k)?);
    }
    for k in 2..=n {
        out.push(bound_improved_ksep(n, d, k)?);
    }
    out.push(bound_fullbody_single(n, d)?);
    for x in 0..=n {
        out.push(bound_cutoff_bisep_max(n, d, x)?);
    }
    if n.is_multiple_of(2) {
        out.push(bound_cutoff_half(n, d)?);
    }
    if n >= 3 {
        out.push(bound_cutoff_nminus1(n, d)?);
    }
    Ok(out)
}

/// Six significant digits, for human-readable tables.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let mag = v.abs().log10().floor() as i32;
    if !(-4..15).contains(&mag) {
        return format!("{v:.5e}");
    }
    let decimals = (5 - mag).max(0) as usize;
    let s = format!("{v:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equipartition_examples() {
        let f = |d: usize| move |x: usize| pow(d, x as i64) - 1.0;
        assert_eq!(equipartition_max(f(2), 3, 2).unwrap(), 3.0);
        assert_eq!(equipartition_max(f(2), 4, 2).unwrap(), 9.0);
        assert_eq!(equipartition_max(f(3), 5, 1).unwrap(), 242.0);
        assert!(equipartition_max(f(2), 3, 4).is_err());
        assert!(equipartition_max(f(2), 3, 0).is_err());
    }

    #[test]
    fn purity_ksep_values() {
        assert_eq!(bound_purity_ksep(3, 3, 2).unwrap().value, 16.0);
        assert_eq!(bound_purity_ksep(3, 3, 3).unwrap().value, 8.0);
        assert_eq!(bound_purity_ksep(3, 2, 2).unwrap().value, 3.0);
    }

    #[test]
    fn improved_ksep_values() {
        assert_eq!(bound_improved_ksep(4, 2, 2).unwrap().value, 9.0);
        assert_eq!(bound_improved_ksep(3, 2, 2).unwrap().value, 4.5);
        let all_singles = bound_improved_ksep(3, 3, 3).unwrap();
        assert!((all_singles.value - (8.0f64 / 3.0).powi(3)).abs() < 1e-12);
        assert!(all_singles.notes.contains("single-party"));
        assert!(bound_improved_ksep(3, 2, 4).is_err());
    }

    #[test]
    fn fullbody_single_values() {
        let b = bound_fullbody_single(3, 2).unwrap();
        assert_eq!(b.value, 6.0);
        assert_eq!(bound_fullbody_single(4, 2).unwrap().value, 12.0);
        assert_eq!(bound_fullbody_single(2, 2).unwrap().value, 3.0);
        assert!(bound_fullbody_single(1, 2).is_err());
    }

    #[test]
    fn cutoff_partition_values() {
        assert_eq!(bound_cutoff_partition(4, 2, 3, 1).unwrap().value, 14.0);
        for k1 in 1..4 {
            assert_eq!(bound_cutoff_partition(4, 2, 0, k1).unwrap().value, 15.0);
        }
        assert_eq!(bound_cutoff_partition(4, 3, 3, 2).unwrap().value, 64.0);
        assert!(bound_cutoff_partition(4, 2, 5, 1).is_err());
        assert!(bound_cutoff_partition(4, 2, 3, 4).is_err());
        assert!(bound_cutoff_partition(4, 2, 3, 0).is_err());
    }

    #[test]
    fn cutoff_bisep_max_values() {
        assert_eq!(bound_cutoff_bisep_max(4, 3, 3).unwrap().value, 78.0);
        assert_eq!(bound_cutoff_bisep_max(3, 3, 2).unwrap().value, 24.0);
        assert_eq!(bound_cutoff_bisep_max(4, 2, 3).unwrap().value, 14.0);
        // two qudits: the product cut gives (d-1)², tighter than d² - d
        assert_eq!(bound_cutoff_bisep_max(2, 3, 2).unwrap().value, 4.0);
        assert_eq!(bound_cutoff_half(2, 3).unwrap().value, 6.0);
        for n in (4..=10).step_by(2) {
            for d in 2..=5 {
                let v = bound_cutoff_bisep_max(n, d, n / 2 + 1).unwrap().value;
                assert_eq!(v, pow(d, n as i64) - d as f64, "n={n} d={d}");
                assert_eq!(bound_cutoff_half(n, d).unwrap().value, v);
            }
        }
        assert!(bound_cutoff_half(3, 2).is_err());
    }

    #[test]
    fn cutoff_nminus1_values() {
        let b = bound_cutoff_nminus1(4, 2).unwrap();
        assert!((b.value - 38.0 / 3.0).abs() < 1e-12);
        assert!(b.notes.contains("37/3"));
        assert_eq!(bound_cutoff_nminus1(3, 3).unwrap().value, 24.0);
        assert!(13.0 > b.value);
        assert!(bound_cutoff_nminus1(2, 2).is_err());
    }

    #[test]
    fn dim_vector_values() {
        assert_eq!(bound_dim_vector(3, 3, &[2, 2, 3]).unwrap().value, 25.0);
        assert_eq!(bound_dim_vector(3, 3, &[2, 3, 3]).unwrap().value, 25.5);
        assert_eq!(bound_dim_vector(3, 3, &[3, 3, 3]).unwrap().value, 26.0);
        assert_eq!(bound_dim_vector(3, 3, &[1, 1, 1]).unwrap().value, 20.0);
        assert!(bound_dim_vector(3, 3, &[4, 1, 1]).is_err());
        assert!(bound_dim_vector(3, 3, &[0, 1, 1]).is_err());
        assert!(bound_dim_vector(3, 3, &[1, 1]).is_err());
    }

    #[test]
    fn monotone_in_k() {
        for n in 1..=8 {
            for d in 2..=5 {
                let mut prev = f64::INFINITY;
                for k in 1..=n {
                    let v = bound_purity_ksep(n, d, k).unwrap().value;
                    assert!(v <= prev, "n={n} d={d} k={k}");
                    prev = v;
                }
            }
        }
    }

    #[test]
    fn criterion_parsing() {
        let t: CriterionTemplate = "purity-ksep:3".parse().unwrap();
        assert_eq!(
            t.instantiate(3, 3, None, None).unwrap(),
            BoundSpec::PurityKsep { n: 3, d: 3, k: 3 }
        );
        let t: CriterionTemplate = "cutoff-bisep-max".parse().unwrap();
        assert!(t.instantiate(4, 2, None, None).is_err());
        assert_eq!(
            t.instantiate(4, 2, Some(3), None).unwrap(),
            BoundSpec::CutoffBisepMax { n: 4, d: 2, x: 3 }
        );
        let t: CriterionTemplate = "dim-vector:2,2,3".parse().unwrap();
        assert_eq!(t.instantiate(3, 3, None, None).unwrap().label(), "dim-vector[2,2,3]");
        let t: CriterionTemplate = "cutoff-partition:1:3".parse().unwrap();
        assert_eq!(t, CriterionTemplate::CutoffPartition { k1: 1, x: Some(3) });
        assert!("bogus".parse::<CriterionTemplate>().is_err());
        assert!("cutoff-half:2".parse::<CriterionTemplate>().is_err());
        assert!("purity-ksep:5"
            .parse::<CriterionTemplate>()
            .unwrap()
            .instantiate(3, 2, None, None)
            .is_err());
    }

    #[test]
    fn quantity_mapping() {
        assert_eq!(BoundSpec::CutoffHalf { n: 4, d: 3 }.quantity(), Quantity::Cx(3));
        assert_eq!(BoundSpec::CutoffNminus1 { n: 4, d: 2 }.quantity(), Quantity::Cx(3));
        assert_eq!(BoundSpec::PurityKsep { n: 3, d: 2, k: 2 }.min_support(), 3);
        assert_eq!(
            BoundSpec::DimVector {
                n: 3,
                d: 3,
                ranks: vec![2, 2, 3]
            }
            .quantity(),
            Quantity::Cx(2)
        );
    }

    #[test]
    fn number_formatting() {
        assert_eq!(fmt_num(38.0 / 3.0), "12.6667");
        assert_eq!(fmt_num(78.0), "78");
        assert_eq!(fmt_num(0.632455532), "0.632456");
        assert_eq!(fmt_num(0.0), "0");
    }
}
