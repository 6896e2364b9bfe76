//! Dense density matrices with uniform local dimension.
//!
//! Party 1 is the most significant tensor factor: the computational basis
//! index of `|i₁ i₂ … iₙ⟩` is `Σₖ iₖ·d^{n-k}`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::parties::{Parties, MAX_PARTIES};
use crate::stabilizer::Graph;
use crate::C64;

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    d: usize,
    data: DMatrix<C64>,
}

/// Global offsets of every local multi-index over `positions` (0-based, sorted),
/// the first listed position being the most significant digit.
pub(crate) fn offsets(n: usize, d: usize, positions: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize];
    for &pos in positions {
        let stride = d.pow((n - 1 - pos) as u32);
        out = out
            .iter()
            .flat_map(|&base| (0..d).map(move |digit| base + digit * stride))
            .collect();
    }
    out
}

fn complement(n: usize, positions: &[usize]) -> Vec<usize> {
    (0..n).filter(|p| !positions.contains(p)).collect()
}

impl DensityMatrix {
    fn check_shape(n: usize, d: usize, limits: &Limits) -> Result<usize> {
        if n > MAX_PARTIES {
            return Err(Error::InvalidDimension(format!("n={n} exceeds {MAX_PARTIES} parties")));
        }
        limits.check(n, d)?;
        Ok(d.pow(n as u32))
    }

    /// Wraps `data` after validating Hermiticity, unit trace and positivity.
    pub fn from_matrix(n: usize, d: usize, data: DMatrix<C64>) -> Result<Self> {
        Self::from_matrix_with(n, d, data, &Limits::default())
    }

    pub fn from_matrix_with(n: usize, d: usize, data: DMatrix<C64>, limits: &Limits) -> Result<Self> {
        let dim = Self::check_shape(n, d, limits)?;
        if data.nrows() != dim || data.ncols() != dim {
            return Err(Error::InvalidState(format!(
                "matrix is {}x{}, expected {dim}x{dim} for n={n}, d={d}",
                data.nrows(),
                data.ncols()
            )));
        }
        let herm = (&data - data.adjoint()).iter().fold(0.0f64, |m, z| m.max(z.norm()));
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (max deviation {herm:e})")));
        }
        let tr = data.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        // symmetrize before the eigen solve so tiny anti-Hermitian noise does not leak in
        let sym = (&data + data.adjoint()) * C64::new(0.5, 0.0);
        let min_eig = sym
            .symmetric_eigenvalues()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -POSITIVITY_TOL {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (min eigenvalue {min_eig:e})"
            )));
        }
        Ok(DensityMatrix { n, d, data })
    }

    /// Trusted constructor for results of arithmetic on valid states.
    pub(crate) fn from_parts(n: usize, d: usize, data: DMatrix<C64>) -> Self {
        debug_assert_eq!(data.nrows(), d.pow(n as u32));
        DensityMatrix { n, d, data }
    }

    /// Projector onto the normalized `amplitudes`.
    pub fn from_pure(n: usize, d: usize, amplitudes: &[C64]) -> Result<Self> {
        Self::from_pure_with(n, d, amplitudes, &Limits::default())
    }

    pub fn from_pure_with(n: usize, d: usize, amplitudes: &[C64], limits: &Limits) -> Result<Self> {
        let dim = Self::check_shape(n, d, limits)?;
        if amplitudes.len() != dim {
            return Err(Error::InvalidState(format!(
                "{} amplitudes, expected {dim}",
                amplitudes.len()
            )));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let v: Vec<C64> = amplitudes.iter().map(|a| a / norm).collect();
        let data = DMatrix::from_fn(dim, dim, |r, c| v[r] * v[c].conj());
        Ok(DensityMatrix { n, d, data })
    }

    /// `(1/√d)·Σᵢ |i⟩^{⊗n}`.
    pub fn ghz(n: usize, d: usize) -> Result<Self> {
        Self::ghz_with(n, d, &Limits::default())
    }

    pub fn ghz_with(n: usize, d: usize, limits: &Limits) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension(format!("GHZ needs n >= 2, got {n}")));
        }
        let dim = Self::check_shape(n, d, limits)?;
        let mut amp = vec![C64::new(0.0, 0.0); dim];
        let diag_stride: usize = (0..n).map(|k| d.pow(k as u32)).sum();
        for i in 0..d {
            amp[i * diag_stride] = C64::new(1.0, 0.0);
        }
        Self::from_pure_with(n, d, &amp, limits)
    }

    /// Equal superposition of all single-excitation qubit basis states.
    pub fn w(n: usize) -> Result<Self> {
        Self::w_with(n, &Limits::default())
    }

    pub fn w_with(n: usize, limits: &Limits) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension(format!("W state needs n >= 2, got {n}")));
        }
        let dim = Self::check_shape(n, 2, limits)?;
        let mut amp = vec![C64::new(0.0, 0.0); dim];
        for k in 0..n {
            amp[1 << k] = C64::new(1.0, 0.0);
        }
        Self::from_pure_with(n, 2, &amp, limits)
    }

    /// Qubit graph state: `|+⟩^{⊗n}` followed by controlled-Z on every edge.
    pub fn graph_state(graph: &Graph) -> Result<Self> {
        Self::graph_state_with(graph, &Limits::default())
    }

    pub fn graph_state_with(graph: &Graph, limits: &Limits) -> Result<Self> {
        let n = graph.n();
        let dim = Self::check_shape(n, 2, limits)?;
        let edges = graph.edges();
        let amp: Vec<C64> = (0..dim)
            .map(|x| {
                // party p (0-based) is bit n-1-p
                let bit = |p: usize| (x >> (n - 1 - p)) & 1;
                let parity = edges.iter().filter(|&&(a, b)| bit(a) & bit(b) == 1).count();
                C64::new(if parity % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
            })
            .collect();
        Self::from_pure_with(n, 2, &amp, limits)
    }

    /// The 4-qutrit absolutely maximally entangled state
    /// `(1/3)·Σ_{i,j} |i, j, i+j, i+2j⟩` (arithmetic mod 3).
    pub fn ame43() -> Result<Self> {
        let d = 3;
        let mut amp = vec![C64::new(0.0, 0.0); 81];
        for i in 0..d {
            for j in 0..d {
                let digits = [i, j, (i + j) % d, (i + 2 * j) % d];
                let idx = digits.iter().fold(0, |acc, &q| acc * d + q);
                amp[idx] = C64::new(1.0, 0.0);
            }
        }
        let rho = Self::from_pure(4, d, &amp)?;
        for size in 1..=2 {
            for alpha in Parties::nonempty_subsets(4).into_iter().filter(|a| a.len() == size) {
                let m = rho.partial_trace(alpha)?;
                let dim = m.dim() as f64;
                let dev = (m.data() - DMatrix::<C64>::identity(m.dim(), m.dim()) / C64::new(dim, 0.0))
                    .iter()
                    .fold(0.0f64, |acc, z| acc.max(z.norm()));
                if dev > 1e-12 {
                    return Err(Error::NumericalIntegrity(format!(
                        "AME marginal {alpha} not maximally mixed"
                    )));
                }
            }
        }
        Ok(rho)
    }

    /// Computational-basis product state `|l₁ l₂ … lₙ⟩`.
    pub fn product(d: usize, levels: &[usize]) -> Result<Self> {
        Self::product_with(d, levels, &Limits::default())
    }

    pub fn product_with(d: usize, levels: &[usize], limits: &Limits) -> Result<Self> {
        let n = levels.len();
        let dim = Self::check_shape(n, d, limits)?;
        if let Some(&bad) = levels.iter().find(|&&l| l >= d) {
            return Err(Error::InvalidParameter(format!("level {bad} outside 0..{d}")));
        }
        let mut amp = vec![C64::new(0.0, 0.0); dim];
        amp[levels.iter().fold(0, |acc, &l| acc * d + l)] = C64::new(1.0, 0.0);
        Self::from_pure_with(n, d, &amp, limits)
    }

    pub fn maximally_mixed(n: usize, d: usize) -> Result<Self> {
        let dim = Self::check_shape(n, d, &Limits::default())?;
        Ok(Self::identity_over(n, d, dim))
    }

    fn identity_over(n: usize, d: usize, dim: usize) -> Self {
        let data = DMatrix::<C64>::identity(dim, dim) / C64::new(dim as f64, 0.0);
        DensityMatrix { n, d, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Hilbert-space dimension `d^n`.
    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn data(&self) -> &DMatrix<C64> {
        &self.data
    }

    pub fn into_data(self) -> DMatrix<C64> {
        self.data
    }

    /// `ρ ⊗ σ`, parties of `self` first.
    pub fn kron(&self, other: &DensityMatrix) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::InvalidDimension(format!(
                "mixed local dimensions {} and {}",
                self.d, other.d
            )));
        }
        let n = self.n + other.n;
        Self::check_shape(n, self.d, &Limits::default())?;
        Ok(DensityMatrix {
            n,
            d: self.d,
            data: self.data.kronecker(&other.data),
        })
    }

    /// Reduced state on `keep`; party order is preserved.
    pub fn partial_trace(&self, keep: Parties) -> Result<Self> {
        keep.check_within(self.n)?;
        let kept = keep.positions();
        let traced = complement(self.n, &kept);
        let ok = offsets(self.n, self.d, &kept);
        let ot = offsets(self.n, self.d, &traced);
        let m = ok.len();
        let data = DMatrix::from_fn(m, m, |r, c| {
            let (br, bc) = (ok[r], ok[c]);
            ot.iter().map(|&t| self.data[(br + t, bc + t)]).sum::<C64>()
        });
        Ok(DensityMatrix {
            n: kept.len(),
            d: self.d,
            data,
        })
    }

    /// `Tr(ρ_β²)` of the marginal on `keep`, without materializing the marginal.
    /// The empty subset has purity 1.
    pub fn marginal_purity(&self, keep: Parties) -> Result<f64> {
        if keep.is_empty() {
            return Ok(1.0);
        }
        keep.check_within(self.n)?;
        if keep == Parties::all(self.n) {
            return Ok(self.purity());
        }
        let kept = keep.positions();
        let traced = complement(self.n, &kept);
        let ok = offsets(self.n, self.d, &kept);
        let ot = offsets(self.n, self.d, &traced);
        let mut total = 0.0;
        for &br in &ok {
            for &bc in &ok {
                let s: C64 = ot.iter().map(|&t| self.data[(br + t, bc + t)]).sum();
                total += s.norm_sqr();
            }
        }
        Ok(total)
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `p·ρ + (1-p)·I/d^n`.
    pub fn mix_with_white_noise(&self, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("mixing weight p={p} outside [0,1]")));
        }
        let dim = self.dim();
        let noise = Self::identity_over(self.n, self.d, dim);
        let data = &self.data * C64::new(p, 0.0) + noise.data * C64::new(1.0 - p, 0.0);
        Ok(DensityMatrix {
            n: self.n,
            d: self.d,
            data,
        })
    }

    /// `(⊗ᵢ Uᵢ) ρ (⊗ᵢ Uᵢ)†` with one `d×d` unitary per party.
    pub fn apply_local_unitaries(&self, unitaries: &[DMatrix<C64>]) -> Result<Self> {
        if unitaries.len() != self.n {
            return Err(Error::InvalidParameter(format!(
                "{} local unitaries for {} parties",
                unitaries.len(),
                self.n
            )));
        }
        let mut data = self.data.clone();
        for (p, u) in unitaries.iter().enumerate() {
            if u.nrows() != self.d || u.ncols() != self.d {
                return Err(Error::InvalidDimension(format!(
                    "unitary for party {} is not {}x{}",
                    p + 1,
                    self.d,
                    self.d
                )));
            }
            data = self.apply_on_party(&data, p, u);
        }
        Ok(DensityMatrix {
            n: self.n,
            d: self.d,
            data,
        })
    }

    /// `U_p · m · U_p†` where `U_p` acts on 0-based party `p`.
    fn apply_on_party(&self, m: &DMatrix<C64>, p: usize, u: &DMatrix<C64>) -> DMatrix<C64> {
        let d = self.d;
        let dim = self.dim();
        let stride = d.pow((self.n - 1 - p) as u32);
        let digit = |i: usize| (i / stride) % d;
        let left = DMatrix::from_fn(dim, dim, |r, c| {
            let base = r - digit(r) * stride;
            (0..d)
                .map(|y| u[(digit(r), y)] * m[(base + y * stride, c)])
                .sum::<C64>()
        });
        DMatrix::from_fn(dim, dim, |r, c| {
            let base = c - digit(c) * stride;
            (0..d)
                .map(|y| left[(r, base + y * stride)] * u[(digit(c), y)].conj())
                .sum::<C64>()
        })
    }
}
