//! Random unitaries and states for misalignment simulation and property tests.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::parties::Parties;
use crate::states::{offsets, DensityMatrix};
use crate::C64;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-random `d×d` unitary: QR of a complex Ginibre matrix with the phases
/// of `R`'s diagonal absorbed into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<C64> {
    let g = DMatrix::from_fn(d, d, |_, _| gaussian(rng));
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Haar-random normalized state vector of dimension `dim`.
pub fn random_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    let v: Vec<C64> = (0..dim).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / norm).collect()
}

pub fn random_pure<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<DensityMatrix> {
    let v = random_vector(d.pow(n as u32), rng);
    DensityMatrix::from_pure(n, d, &v)
}

/// `G G† / Tr(G G†)` for a `d^n × rank` Ginibre matrix `G`.
pub fn random_mixed<R: Rng + ?Sized>(n: usize, d: usize, rank: usize, rng: &mut R) -> Result<DensityMatrix> {
    let dim = d.pow(n as u32);
    let g = DMatrix::from_fn(dim, rank.max(1), |_, _| gaussian(rng));
    let mut m = &g * g.adjoint();
    let tr = m.trace();
    m /= tr;
    let m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    Ok(DensityMatrix::from_parts(n, d, m))
}

/// Product vector `|a⟩_A ⊗ |b⟩_{Ā}` laid out in global party order.
pub fn embed_product(n: usize, d: usize, first: Parties, a: &[C64], b: &[C64]) -> Vec<C64> {
    let pa = first.positions();
    let pb: Vec<usize> = (0..n).filter(|p| !pa.contains(p)).collect();
    let oa = offsets(n, d, &pa);
    let ob = offsets(n, d, &pb);
    let mut v = vec![C64::new(0.0, 0.0); d.pow(n as u32)];
    for (i, &ga) in oa.iter().enumerate() {
        for (j, &gb) in ob.iter().enumerate() {
            v[ga + gb] = a[i] * b[j];
        }
    }
    v
}

/// A random bipartition `A | Ā` with both sides nonempty.
pub fn random_cut<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Parties {
    Parties(rng.random_range(1..(1u32 << n) - 1))
}

/// Mixture of `terms` random pure states, each a product across its own
/// random bipartition, with random weights. Biseparable by construction.
pub fn random_biseparable<R: Rng + ?Sized>(n: usize, d: usize, terms: usize, rng: &mut R) -> Result<DensityMatrix> {
    let dim = d.pow(n as u32);
    let mut acc = DMatrix::<C64>::zeros(dim, dim);
    let weights: Vec<f64> = (0..terms.max(1)).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    for w in weights {
        let cut = random_cut(n, rng);
        let a = random_vector(d.pow(cut.len() as u32), rng);
        let b = random_vector(d.pow((n - cut.len()) as u32), rng);
        let v = embed_product(n, d, cut, &a, &b);
        let p = DMatrix::from_fn(dim, dim, |r, c| v[r] * v[c].conj());
        acc += p * C64::new(w / total, 0.0);
    }
    Ok(DensityMatrix::from_parts(n, d, acc))
}
