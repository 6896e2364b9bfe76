//! Correlation tensor elements and full-body subset norms.
//!
//! Two independent routes are provided. [`subset_norm_direct`] enumerates
//! every tensor element `T = Tr[ρ ⊗ₖ λ_{iₖ}]` of a marginal. [`norm_table_moebius`]
//! instead inverts the purity relation
//! `d^{|β|}·Tr(ρ_β²) = 1 + Σ_{∅≠γ⊆β} ‖τ_γ‖²` over the subset lattice, which
//! needs only `2^n` marginal purities.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::basis::GeneratorBasis;
use crate::error::{Error, Result};
use crate::parties::Parties;
use crate::states::DensityMatrix;
use crate::C64;

/// Largest tolerated imaginary part of a tensor element.
pub const IMAG_TOL: f64 = 1e-9;

/// Möbius results in `(-CLAMP_TOL, 0)` are clamped to zero; anything lower is an error.
pub const CLAMP_TOL: f64 = 1e-10;

/// One generator index per party, each in `0..d²`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TensorIndex(pub Vec<usize>);

impl TensorIndex {
    pub fn new(indices: Vec<usize>) -> Self {
        TensorIndex(indices)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parties carrying a non-identity generator.
    pub fn support(&self) -> Parties {
        Parties(
            self.0
                .iter()
                .enumerate()
                .filter(|(_, &i)| i != 0)
                .fold(0u32, |m, (p, _)| m | (1 << p)),
        )
    }

    /// Decodes a mixed-radix code (party 1 most significant, radix `d²`).
    pub fn from_code(mut code: usize, n: usize, d: usize) -> Self {
        let radix = d * d;
        let mut v = vec![0; n];
        for slot in v.iter_mut().rev() {
            *slot = code % radix;
            code /= radix;
        }
        TensorIndex(v)
    }

    pub fn code(&self, d: usize) -> usize {
        let radix = d * d;
        self.0.iter().fold(0, |acc, &i| acc * radix + i)
    }
}

impl fmt::Display for TensorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// `Tr[ρ·⊗ₖ λ_{iₖ}]`.
pub fn tensor_element(rho: &DensityMatrix, basis: &GeneratorBasis, idx: &TensorIndex) -> Result<f64> {
    let (n, d) = (rho.n(), rho.d());
    if basis.d() != d {
        return Err(Error::InvalidDimension(format!(
            "basis d={} but state d={d}",
            basis.d()
        )));
    }
    if idx.len() != n {
        return Err(Error::InvalidParameter(format!(
            "index {idx} has length {}, expected {n}",
            idx.len()
        )));
    }
    if let Some(&bad) = idx.0.iter().find(|&&i| i >= basis.len()) {
        return Err(Error::InvalidParameter(format!(
            "generator index {bad} outside 0..{}",
            basis.len()
        )));
    }
    let value = trace_with_product(rho, basis, &idx.0);
    if value.im.abs() >= IMAG_TOL {
        return Err(Error::NumericalIntegrity(format!(
            "tensor element {idx} has imaginary part {:e}",
            value.im
        )));
    }
    Ok(value.re)
}

/// `Tr[ρ Λ]` with `Λ = ⊗ₖ λ_{iₖ}` expanded from the sparse local entries.
fn trace_with_product(rho: &DensityMatrix, basis: &GeneratorBasis, idx: &[usize]) -> C64 {
    let n = idx.len();
    let d = rho.d();
    let data = rho.data();
    let mut acc = C64::new(0.0, 0.0);
    // (row offset, col offset, coefficient) after fixing the leading parties
    let mut partial: Vec<(usize, usize, C64)> = vec![(0, 0, C64::new(1.0, 0.0))];
    for (p, &gi) in idx.iter().enumerate() {
        let stride = d.pow((n - 1 - p) as u32);
        let entries = basis.sparse(gi);
        partial = partial
            .iter()
            .flat_map(|&(r, c, v)| {
                entries
                    .iter()
                    .map(move |&(er, ec, ev)| (r + er * stride, c + ec * stride, v * ev))
            })
            .collect();
    }
    for (r, c, v) in partial {
        acc += v * data[(c, r)];
    }
    acc
}

/// `‖τ_α‖²` by enumerating all `(d²-1)^{|α|}` full-body elements of the marginal `ρ_α`.
pub fn subset_norm_direct(rho: &DensityMatrix, basis: &GeneratorBasis, alpha: Parties) -> Result<f64> {
    alpha.check_within(rho.n())?;
    let marginal = if alpha == Parties::all(rho.n()) {
        rho.clone()
    } else {
        rho.partial_trace(alpha)?
    };
    full_body_norm_direct(&marginal, basis)
}

fn full_body_norm_direct(rho: &DensityMatrix, basis: &GeneratorBasis) -> Result<f64> {
    let m = rho.n();
    let nontrivial = basis.len() - 1;
    let count = nontrivial.pow(m as u32);
    (0..count)
        .into_par_iter()
        .map(|mut code| {
            let mut idx = vec![0; m];
            for slot in idx.iter_mut().rev() {
                *slot = 1 + code % nontrivial;
                code /= nontrivial;
            }
            tensor_element(rho, basis, &TensorIndex(idx)).map(|t| t * t)
        })
        .collect::<Result<Vec<f64>>>()
        .map(|v| v.iter().sum())
}

/// Squared full-body norms for every nonempty party subset.
#[derive(Debug, Clone, PartialEq)]
pub struct NormTable {
    n: usize,
    d: usize,
    /// Indexed by subset bit mask; slot 0 is unused.
    entries: Vec<f64>,
}

impl NormTable {
    /// Builds a table from per-mask values (slot 0 ignored), clamping tiny negatives.
    pub fn from_entries(n: usize, d: usize, mut entries: Vec<f64>) -> Result<Self> {
        if entries.len() != 1 << n {
            return Err(Error::InvalidParameter(format!("{} entries for n={n}", entries.len())));
        }
        entries[0] = 0.0;
        for (mask, v) in entries.iter_mut().enumerate().skip(1) {
            if !v.is_finite() {
                return Err(Error::NumericalIntegrity(format!(
                    "non-finite norm for {}",
                    Parties(mask as u32)
                )));
            }
            if *v < 0.0 {
                if *v > -CLAMP_TOL {
                    *v = 0.0;
                } else {
                    return Err(Error::NumericalIntegrity(format!(
                        "negative squared norm {v:e} for subset {}",
                        Parties(mask as u32)
                    )));
                }
            }
        }
        Ok(NormTable { n, d, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn get(&self, alpha: Parties) -> f64 {
        self.entries[alpha.0 as usize]
    }

    pub fn full_body(&self) -> f64 {
        self.get(Parties::all(self.n))
    }

    /// `Σ_α ‖τ_α‖²` over all nonempty subsets, equal to `d^n·Tr(ρ²) - 1`.
    pub fn total(&self) -> f64 {
        self.entries.iter().skip(1).sum()
    }

    /// Entries in canonical order (by size, then lexicographic).
    pub fn iter(&self) -> impl Iterator<Item = (Parties, f64)> + '_ {
        Parties::nonempty_subsets(self.n)
            .into_iter()
            .map(move |a| (a, self.get(a)))
    }

    /// `C_x = Σ_{|α| ≥ x} ‖τ_α‖²`.
    pub fn cx(&self, x: usize) -> Result<CxValue> {
        cx(self, x)
    }

    pub fn to_json_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

impl Serialize for NormTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Norms<'a>(&'a NormTable);
        impl Serialize for Norms<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.entries.len() - 1))?;
                for (alpha, v) in self.0.iter() {
                    map.serialize_entry(&alpha.to_string(), &v)?;
                }
                map.end()
            }
        }
        let mut s = serializer.serialize_struct("NormTable", 3)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("d", &self.d)?;
        s.serialize_field("norms", &Norms(self))?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for NormTable {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            d: usize,
            norms: BTreeMap<String, f64>,
        }
        let raw = Raw::deserialize(deserializer)?;
        if raw.n == 0 || raw.n > 24 {
            return Err(de::Error::custom(format!("unsupported party count {}", raw.n)));
        }
        let mut entries = vec![f64::NAN; 1 << raw.n];
        entries[0] = 0.0;
        for (key, v) in raw.norms {
            let alpha: Parties = key.parse().map_err(de::Error::custom)?;
            alpha.check_within(raw.n).map_err(de::Error::custom)?;
            entries[alpha.0 as usize] = v;
        }
        if let Some(missing) = entries.iter().position(|v| v.is_nan()) {
            return Err(de::Error::custom(format!(
                "missing norm for subset {}",
                Parties(missing as u32)
            )));
        }
        NormTable::from_entries(raw.n, raw.d, entries).map_err(de::Error::custom)
    }
}

/// Full table by direct element enumeration of every marginal.
pub fn norm_table_direct(rho: &DensityMatrix, basis: &GeneratorBasis) -> Result<NormTable> {
    let n = rho.n();
    let mut entries = vec![0.0; 1 << n];
    for alpha in Parties::nonempty_subsets(n) {
        entries[alpha.0 as usize] = subset_norm_direct(rho, basis, alpha)?;
    }
    NormTable::from_entries(n, rho.d(), entries)
}

/// Full table from marginal purities by Möbius inversion over the subset lattice.
///
/// Independent of the generator basis: every orthonormal local basis yields the
/// same norms.
pub fn norm_table_moebius(rho: &DensityMatrix) -> Result<NormTable> {
    let (n, d) = (rho.n(), rho.d());
    let size = 1usize << n;
    // g(β) = d^{|β|}·Tr(ρ_β²), with g(∅) = 1
    let mut g: Vec<f64> = (0..size)
        .into_par_iter()
        .map(|mask| {
            let beta = Parties(mask as u32);
            rho.marginal_purity(beta)
                .map(|p| (d as f64).powi(beta.len() as i32) * p)
        })
        .collect::<Result<Vec<f64>>>()?;
    for bit in 0..n {
        for mask in 0..size {
            if mask & (1 << bit) != 0 {
                g[mask] -= g[mask ^ (1 << bit)];
            }
        }
    }
    NormTable::from_entries(n, d, g)
}

/// Cumulative sum of squared full-body norms over subsets of size at least `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CxValue {
    pub x: usize,
    pub value: f64,
}

pub fn cx(table: &NormTable, x: usize) -> Result<CxValue> {
    if x > table.n {
        return Err(Error::InvalidCutoff { x, n: table.n });
    }
    let value = table.iter().filter(|(alpha, _)| alpha.len() >= x).map(|(_, v)| v).sum();
    Ok(CxValue { x, value })
}
