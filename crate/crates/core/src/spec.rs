//! State descriptions (JSON) and the plain-text matrix file format.
//!
//! Matrix files are UTF-8: a first line `n d`, then `d^n` rows of `d^n`
//! entries `re,im` separated by single spaces.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::stabilizer::Graph;
use crate::states::DensityMatrix;
use crate::C64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StateSpec {
    Ghz {
        n: usize,
        d: usize,
    },
    W {
        n: usize,
    },
    Graph {
        adjacency: Graph,
    },
    Ame43,
    /// Computational basis product state; `levels` defaults to all zeros.
    Product {
        d: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        levels: Option<Vec<usize>>,
    },
    MatrixFile {
        path: PathBuf,
    },
    Mix {
        base: Box<StateSpec>,
        p: f64,
    },
}

impl StateSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::from_json(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    /// Builds the state. Relative matrix-file paths resolve against `base_dir`.
    pub fn build(&self, limits: &Limits, base_dir: Option<&Path>) -> Result<DensityMatrix> {
        match self {
            &StateSpec::Ghz { n, d } => DensityMatrix::ghz_with(n, d, limits),
            &StateSpec::W { n } => DensityMatrix::w_with(n, limits),
            StateSpec::Graph { adjacency } => DensityMatrix::graph_state_with(adjacency, limits),
            StateSpec::Ame43 => DensityMatrix::ame43(),
            StateSpec::Product { d, n, levels } => {
                let levels = match (levels, n) {
                    (Some(l), Some(n)) if l.len() != *n => {
                        return Err(Error::InvalidParameter(format!("{} levels for n={n}", l.len())))
                    }
                    (Some(l), _) => l.clone(),
                    (None, Some(n)) => vec![0; *n],
                    (None, None) => return Err(Error::InvalidParameter("product spec needs n or levels".into())),
                };
                DensityMatrix::product_with(*d, &levels, limits)
            }
            StateSpec::MatrixFile { path } => {
                let resolved = match base_dir {
                    Some(dir) if path.is_relative() => dir.join(path),
                    _ => path.clone(),
                };
                read_matrix_file(&resolved, limits)
            }
            StateSpec::Mix { base, p } => base.build(limits, base_dir)?.mix_with_white_noise(*p),
        }
    }

    /// Short description used in reports.
    pub fn describe(&self) -> String {
        match self {
            StateSpec::Ghz { n, d } => format!("ghz(n={n},d={d})"),
            StateSpec::W { n } => format!("w(n={n})"),
            StateSpec::Graph { adjacency } => {
                let edges: Vec<String> = adjacency
                    .edges()
                    .iter()
                    .map(|(a, b)| format!("{}-{}", a + 1, b + 1))
                    .collect();
                format!("graph(n={},edges={})", adjacency.n(), edges.join(","))
            }
            StateSpec::Ame43 => "ame43".into(),
            StateSpec::Product { d, n, levels } => match levels {
                Some(l) => format!("product(d={d},levels={l:?})"),
                None => format!("product(n={},d={d})", n.unwrap_or(0)),
            },
            StateSpec::MatrixFile { path } => format!("matrix-file({})", path.display()),
            StateSpec::Mix { base, p } => format!("mix(p={p},{})", base.describe()),
        }
    }
}

pub fn parse_matrix(text: &str, limits: &Limits) -> Result<DensityMatrix> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header token {t:?}"))))
        .collect::<Result<_>>()?;
    let [n, d] = dims[..] else {
        return Err(Error::Parse(format!("header must be \"n d\", got {header:?}")));
    };
    limits.check(n, d)?;
    let dim = d.pow(n as u32);
    let mut data = DMatrix::<C64>::zeros(dim, dim);
    let mut rows = 0;
    for (r, line) in lines.enumerate() {
        if r >= dim {
            return Err(Error::Parse(format!("more than {dim} matrix rows")));
        }
        let entries: Vec<&str> = line.split_whitespace().collect();
        if entries.len() != dim {
            return Err(Error::Parse(format!(
                "row {} has {} entries, expected {dim}",
                r + 1,
                entries.len()
            )));
        }
        for (c, e) in entries.iter().enumerate() {
            let (re, im) = e
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("entry {e:?} at ({}, {}) is not re,im", r + 1, c + 1)))?;
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad number {s:?} at ({}, {})", r + 1, c + 1)))
            };
            data[(r, c)] = C64::new(num(re)?, num(im)?);
        }
        rows += 1;
    }
    if rows != dim {
        return Err(Error::Parse(format!("{rows} matrix rows, expected {dim}")));
    }
    DensityMatrix::from_matrix_with(n, d, data, limits)
}

pub fn read_matrix_file(path: &Path, limits: &Limits) -> Result<DensityMatrix> {
    let text = fs::read_to_string(path)?;
    parse_matrix(&text, limits).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn format_matrix(rho: &DensityMatrix) -> String {
    let mut out = format!("{} {}\n", rho.n(), rho.d());
    let m = rho.data();
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            if c > 0 {
                out.push(' ');
            }
            let z = m[(r, c)];
            let _ = write!(out, "{},{}", z.re, z.im);
        }
        out.push('\n');
    }
    out
}
