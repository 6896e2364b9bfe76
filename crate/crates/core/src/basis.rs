//! Normalized SU(d) generator sets.
//!
//! Index layout for local dimension `d` (fixed, and used by every report):
//!
//! * `0`: identity
//! * `1 ..= d(d-1)/2`: symmetric pair operators `|j⟩⟨k| + |k⟩⟨j|`, `j < k` lexicographic
//! * next `d(d-1)/2`: antisymmetric pair operators `-i|j⟩⟨k| + i|k⟩⟨j|`, `j < k` lexicographic
//! * last `d-1`: diagonal operators, the `l`-th supported on levels `0..=l`
//!
//! Every generator is rescaled so that `Tr[λᵢλⱼ] = d·δᵢⱼ`. For `d = 2` this is
//! exactly `{I, σx, σy, σz}`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::Result;
use crate::limits::Limits;
use crate::C64;

/// Which family a generator belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum GeneratorKind {
    Identity,
    Symmetric {
        j: usize,
        k: usize,
    },
    Antisymmetric {
        j: usize,
        k: usize,
    },
    /// Supported on levels `0..=level`.
    Diagonal {
        level: usize,
    },
}

impl GeneratorKind {
    /// Whether the operator is diagonal in the local computational basis, i.e.
    /// readable from the single d-outcome setting.
    pub fn is_diagonal(self) -> bool {
        matches!(self, GeneratorKind::Identity | GeneratorKind::Diagonal { .. })
    }
}

/// Nonzero entries `(row, col, value)` of a generator.
pub type SparseEntries = Vec<(usize, usize, C64)>;

#[derive(Debug, Clone)]
pub struct GeneratorBasis {
    d: usize,
    generators: Vec<DMatrix<C64>>,
    sparse: Vec<SparseEntries>,
    kinds: Vec<GeneratorKind>,
}

impl GeneratorBasis {
    /// Builds the basis for local dimension `d` under the default caps.
    pub fn new(d: usize) -> Result<Self> {
        Self::with_limits(d, &Limits::default())
    }

    pub fn with_limits(d: usize, limits: &Limits) -> Result<Self> {
        limits.check_local_dim(d)?;

        let mut kinds = vec![GeneratorKind::Identity];
        let pairs: Vec<(usize, usize)> = (0..d).flat_map(|j| (j + 1..d).map(move |k| (j, k))).collect();
        kinds.extend(pairs.iter().map(|&(j, k)| GeneratorKind::Symmetric { j, k }));
        kinds.extend(pairs.iter().map(|&(j, k)| GeneratorKind::Antisymmetric { j, k }));
        kinds.extend((1..d).map(|level| GeneratorKind::Diagonal { level }));

        let pair_scale = (d as f64 / 2.0).sqrt();
        let sparse: Vec<SparseEntries> = kinds
            .iter()
            .map(|&kind| match kind {
                GeneratorKind::Identity => (0..d).map(|i| (i, i, C64::new(1.0, 0.0))).collect(),
                GeneratorKind::Symmetric { j, k } => {
                    vec![(j, k, C64::new(pair_scale, 0.0)), (k, j, C64::new(pair_scale, 0.0))]
                }
                GeneratorKind::Antisymmetric { j, k } => {
                    vec![(j, k, C64::new(0.0, -pair_scale)), (k, j, C64::new(0.0, pair_scale))]
                }
                GeneratorKind::Diagonal { level } => {
                    let l = level as f64;
                    // standard Gell-Mann normalization sqrt(2/(l(l+1))), then sqrt(d/2)
                    let c = (d as f64 / (l * (l + 1.0))).sqrt();
                    let mut e: SparseEntries = (0..level).map(|m| (m, m, C64::new(c, 0.0))).collect();
                    e.push((level, level, C64::new(-l * c, 0.0)));
                    e
                }
            })
            .collect();

        let generators = sparse
            .iter()
            .map(|entries| {
                let mut m = DMatrix::<C64>::zeros(d, d);
                for &(r, c, v) in entries {
                    m[(r, c)] = v;
                }
                m
            })
            .collect();

        Ok(GeneratorBasis {
            d,
            generators,
            sparse,
            kinds,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of generators, `d²`.
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generator(&self, i: usize) -> &DMatrix<C64> {
        &self.generators[i]
    }

    pub fn generators(&self) -> &[DMatrix<C64>] {
        &self.generators
    }

    pub fn sparse(&self, i: usize) -> &SparseEntries {
        &self.sparse[i]
    }

    pub fn kind(&self, i: usize) -> GeneratorKind {
        self.kinds[i]
    }

    /// Groups the non-identity generators by the local setting that reads them.
    pub fn dichotomic_observables(&self) -> ObservableLayout {
        let mut layout = ObservableLayout {
            diagonal: Vec::new(),
            pairs: Vec::new(),
        };
        for (index, &kind) in self.kinds.iter().enumerate().skip(1) {
            match kind {
                GeneratorKind::Diagonal { .. } => layout.diagonal.push(index),
                GeneratorKind::Symmetric { j, k } => layout.pairs.push(PairObservable {
                    index,
                    pair: (j, k),
                    symmetric: true,
                }),
                GeneratorKind::Antisymmetric { j, k } => layout.pairs.push(PairObservable {
                    index,
                    pair: (j, k),
                    symmetric: false,
                }),
                GeneratorKind::Identity => unreachable!("identity only at index 0"),
            }
        }
        layout
    }

    /// Local measurement setting for generator `i`: `0` for the computational
    /// basis (identity and diagonal generators), otherwise the generator index.
    pub fn setting_of(&self, i: usize) -> usize {
        if self.kinds[i].is_diagonal() {
            0
        } else {
            i
        }
    }
}

/// A two-level-subspace observable and the eigenstate pair it acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairObservable {
    pub index: usize,
    pub pair: (usize, usize),
    pub symmetric: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObservableLayout {
    /// Indices of the diagonal generators (one d-outcome setting).
    pub diagonal: Vec<usize>,
    pub pairs: Vec<PairObservable>,
}
