use crate::error::{Error, Result};

/// Largest local dimension accepted by default.
pub const DEFAULT_MAX_LOCAL_DIM: usize = 7;

/// Default cap on `n·log₂(d)`, i.e. dense matrices up to 2^14 × 2^14.
pub const DEFAULT_MAX_QUBIT_EQUIV: f64 = 14.0;

/// Size caps protecting the dense code paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Limits {
    pub max_local_dim: usize,
    pub max_qubit_equiv: f64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_local_dim: DEFAULT_MAX_LOCAL_DIM,
            max_qubit_equiv: DEFAULT_MAX_QUBIT_EQUIV,
        }
    }
}

impl Limits {
    pub fn check_local_dim(&self, d: usize) -> Result<()> {
        if d < 2 {
            return Err(Error::InvalidDimension(format!(
                "local dimension d={d} must be at least 2"
            )));
        }
        if d > self.max_local_dim {
            return Err(Error::DimensionCap(format!(
                "local dimension d={d} exceeds max-local-dim cap {}",
                self.max_local_dim
            )));
        }
        Ok(())
    }

    pub fn check(&self, n: usize, d: usize) -> Result<()> {
        if n < 1 {
            return Err(Error::InvalidDimension("party count must be at least 1".into()));
        }
        self.check_local_dim(d)?;
        let bits = n as f64 * (d as f64).log2();
        if bits > self.max_qubit_equiv + 1e-12 {
            return Err(Error::DimensionCap(format!(
                "n·log2(d) = {bits:.3} for n={n}, d={d} exceeds dim-cap {}",
                self.max_qubit_equiv
            )));
        }
        Ok(())
    }
}
