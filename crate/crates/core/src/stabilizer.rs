//! Qubit graph states handled combinatorially through their stabilizer group.
//!
//! Every stabilizer element of a stabilizer state has expectation ±1 and all
//! other Pauli strings vanish, so `‖τ_α‖²` equals the number of group elements
//! whose support is exactly `α`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::correlations::{NormTable, TensorIndex};
use crate::error::{Error, Result};
use crate::parties::Parties;

/// Largest qubit count for full group enumeration.
pub const MAX_STABILIZER_QUBITS: usize = 24;

/// Simple undirected graph on vertices `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// Neighbour bit masks, vertex `v` (0-based) at bit `v`.
    neighbours: Vec<u64>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            neighbours: vec![0; n],
        }
    }

    /// From 1-based edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 || n > 63 {
            return Err(Error::InvalidParameter(format!("graph needs 1..=63 vertices, got {n}")));
        }
        let mut g = Graph::empty(n);
        for &(a, b) in edges {
            if a == 0 || b == 0 || a > n || b > n {
                return Err(Error::InvalidParameter(format!(
                    "edge {a}-{b} outside vertices 1..={n}"
                )));
            }
            if a == b {
                return Err(Error::InvalidParameter(format!("self-loop on vertex {a}")));
            }
            g.neighbours[a - 1] |= 1 << (b - 1);
            g.neighbours[b - 1] |= 1 << (a - 1);
        }
        Ok(g)
    }

    /// Symmetric 0/1 adjacency matrix with zero diagonal.
    pub fn from_adjacency(adj: &[Vec<u8>]) -> Result<Self> {
        let n = adj.len();
        let mut edges = Vec::new();
        for (i, row) in adj.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidParameter(format!(
                    "adjacency row {} has length {}, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v > 1 {
                    return Err(Error::InvalidParameter(format!(
                        "adjacency entry ({},{}) = {v} is not 0/1",
                        i + 1,
                        j + 1
                    )));
                }
                if adj[j][i] != v {
                    return Err(Error::InvalidParameter(format!(
                        "adjacency not symmetric at ({},{})",
                        i + 1,
                        j + 1
                    )));
                }
                if i == j && v != 0 {
                    return Err(Error::InvalidParameter(format!("nonzero diagonal at vertex {}", i + 1)));
                }
                if v == 1 && i < j {
                    edges.push((i + 1, j + 1));
                }
            }
        }
        Self::from_edges(n, &edges)
    }

    /// Parses `"1-2,2-3,..."`. Vertex count is `n` when given, else the largest label.
    pub fn parse_edge_list(s: &str, n: Option<usize>) -> Result<Self> {
        let mut edges = Vec::new();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (a, b) = tok
                .split_once('-')
                .ok_or_else(|| Error::Parse(format!("edge {tok:?} is not of the form a-b")))?;
            let parse = |v: &str| {
                v.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad vertex label {v:?} in edge {tok:?}")))
            };
            edges.push((parse(a)?, parse(b)?));
        }
        let max_label = edges.iter().map(|&(a, b)| a.max(b)).max().unwrap_or(0);
        let n = n.unwrap_or(max_label);
        Self::from_edges(n, &edges)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..=n).map(|v| (v, v % n + 1)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|v| (v, v + 1)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// 0-based edges `(a, b)` with `a < b`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                if self.neighbours[a] >> b & 1 == 1 {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn neighbours(&self, v: usize) -> u64 {
        self.neighbours[v]
    }

    pub fn adjacency(&self) -> Vec<Vec<u8>> {
        (0..self.n)
            .map(|a| (0..self.n).map(|b| (self.neighbours[a] >> b & 1) as u8).collect())
            .collect()
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.adjacency().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let adj = Vec::<Vec<u8>>::deserialize(deserializer)?;
        Graph::from_adjacency(&adj).map_err(serde::de::Error::custom)
    }
}

/// `±X^x Z^z` on up to 64 qubits, qubit `q` (0-based party) at bit `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    pub x: u64,
    pub z: u64,
    pub negative: bool,
}

impl PauliString {
    pub fn identity() -> Self {
        PauliString {
            x: 0,
            z: 0,
            negative: false,
        }
    }

    pub fn support(&self) -> Parties {
        Parties((self.x | self.z) as u32)
    }

    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    /// Product `self · other`.
    pub fn mul(&self, other: &PauliString) -> PauliString {
        let swap = (self.z & other.x).count_ones() % 2 == 1;
        PauliString {
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            negative: self.negative ^ other.negative ^ swap,
        }
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    /// Real phase `s` with `self = s · P`, `P` the Hermitian tensor product of
    /// `I, X, Y, Z`; `None` when the phase is imaginary (odd number of `Y`s).
    pub fn hermitian_sign(&self) -> Option<f64> {
        // XZ = -iY on every qubit carrying both bits
        let ys = (self.x & self.z).count_ones();
        if ys % 2 == 1 {
            return None;
        }
        let flip = (ys / 2) % 2 == 1;
        Some(if self.negative ^ flip { -1.0 } else { 1.0 })
    }

    /// Generator indices (`0=I, 1=X, 2=Y, 3=Z`) over `n` qubits.
    pub fn tensor_index(&self, n: usize) -> TensorIndex {
        TensorIndex(
            (0..n)
                .map(|q| match (self.x >> q & 1, self.z >> q & 1) {
                    (0, 0) => 0,
                    (1, 0) => 1,
                    (1, 1) => 2,
                    _ => 3,
                })
                .collect(),
        )
    }

    /// `"+XZIY"`-style label over `n` qubits (Hermitian form).
    pub fn label(&self, n: usize) -> String {
        let sign = match self.hermitian_sign() {
            Some(s) if s > 0.0 => "+",
            Some(_) => "-",
            None => "?",
        };
        let letters: String = self
            .tensor_index(n)
            .0
            .iter()
            .map(|&i| ['I', 'X', 'Y', 'Z'][i])
            .collect();
        format!("{sign}{letters}")
    }
}

/// All `2^n` elements generated by `n` independent commuting Pauli strings.
#[derive(Debug, Clone)]
pub struct StabilizerGroup {
    n: usize,
    generators: Vec<PauliString>,
    elements: Vec<PauliString>,
}

impl StabilizerGroup {
    pub fn from_generators(n: usize, generators: Vec<PauliString>) -> Result<Self> {
        if n == 0 || n > MAX_STABILIZER_QUBITS {
            return Err(Error::InvalidParameter(format!(
                "stabilizer enumeration supports 1..={MAX_STABILIZER_QUBITS} qubits, got {n}"
            )));
        }
        if generators.len() != n {
            return Err(Error::InvalidParameter(format!(
                "{} generators for {n} qubits",
                generators.len()
            )));
        }
        let mask = (1u64 << n) - 1;
        for (i, g) in generators.iter().enumerate() {
            if (g.x | g.z) & !mask != 0 {
                return Err(Error::InvalidParameter(format!(
                    "generator {} acts outside {n} qubits",
                    i + 1
                )));
            }
            for h in &generators[i + 1..] {
                if !g.commutes_with(h) {
                    return Err(Error::InvalidParameter("generators do not commute".into()));
                }
            }
        }
        if gf2_rank(&generators, n) != n {
            return Err(Error::InvalidParameter("generators are not independent".into()));
        }

        // element for generator subset m extends the subset with its lowest bit cleared
        let size = 1usize << n;
        let mut by_subset = vec![PauliString::identity(); size];
        for m in 1..size {
            let low = m.trailing_zeros() as usize;
            let prev = m & (m - 1);
            by_subset[m] = by_subset[prev].mul(&generators[low]);
        }
        for e in &by_subset {
            if e.x == 0 && e.z == 0 && e.negative {
                return Err(Error::InvalidParameter("group contains -I".into()));
            }
            if e.hermitian_sign().is_none() {
                return Err(Error::NumericalIntegrity(format!(
                    "non-Hermitian element {}",
                    e.label(n)
                )));
            }
        }
        Ok(StabilizerGroup {
            n,
            generators,
            elements: by_subset,
        })
    }

    /// Graph-state generators `gᵥ = Xᵥ·∏_{u∈N(v)} Z_u`.
    pub fn from_graph(graph: &Graph) -> Result<Self> {
        let gens = (0..graph.n())
            .map(|v| PauliString {
                x: 1 << v,
                z: graph.neighbours(v),
                negative: false,
            })
            .collect();
        Self::from_generators(graph.n(), gens)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn elements(&self) -> &[PauliString] {
        &self.elements
    }

    /// Number of elements of each weight `0..=n`.
    pub fn weight_enumerator(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.n + 1];
        for e in &self.elements {
            counts[e.weight()] += 1;
        }
        counts
    }

    /// Norm table of the stabilizer state: `‖τ_α‖²` counts elements with support `α`.
    pub fn norm_table(&self) -> Result<NormTable> {
        let mut entries = vec![0.0; 1 << self.n];
        for e in &self.elements {
            entries[e.support().0 as usize] += 1.0;
        }
        NormTable::from_entries(self.n, 2, entries)
    }
}

impl fmt::Display for StabilizerGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.generators {
            writeln!(f, "{}", g.label(self.n))?;
        }
        Ok(())
    }
}

fn gf2_rank(rows: &[PauliString], n: usize) -> usize {
    let mut vecs: Vec<u128> = rows.iter().map(|p| (p.x as u128) << n | p.z as u128).collect();
    let mut rank = 0;
    for bit in (0..2 * n).rev() {
        if let Some(pivot) = (rank..vecs.len()).find(|&i| vecs[i] >> bit & 1 == 1) {
            vecs.swap(rank, pivot);
            let p = vecs[rank];
            for (i, v) in vecs.iter_mut().enumerate() {
                if i != rank && *v >> bit & 1 == 1 {
                    *v ^= p;
                }
            }
            rank += 1;
        }
    }
    rank
}

/// Weight counts of the graph state's stabilizer group.
pub fn weight_enumerator(graph: &Graph) -> Result<Vec<u64>> {
    Ok(StabilizerGroup::from_graph(graph)?.weight_enumerator())
}

/// Norm table of a graph state, built purely from its stabilizer group.
pub fn graph_norm_table(graph: &Graph) -> Result<NormTable> {
    if graph.n() > 20 {
        return Err(Error::InvalidParameter(format!(
            "norm table for {} qubits is too large",
            graph.n()
        )));
    }
    StabilizerGroup::from_graph(graph)?.norm_table()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: u64, z: u64) -> PauliString {
        PauliString { x, z, negative: false }
    }

    #[test]
    fn square_cluster_counts() {
        let g = Graph::cycle(4).unwrap();
        let w = weight_enumerator(&g).unwrap();
        assert_eq!(w[4], 5);
        assert_eq!(w[3], 8);
        assert_eq!(w.iter().sum::<u64>(), 16);
        assert_eq!(w[0], 1);
        let t = graph_norm_table(&g).unwrap();
        assert_eq!(t.full_body(), 5.0);
        for alpha in Parties::nonempty_subsets(4).into_iter().filter(|a| a.len() == 3) {
            assert_eq!(t.get(alpha), 2.0);
        }
        assert_eq!(t.cx(3).unwrap().value, 13.0);
    }

    #[test]
    fn ghz4_group() {
        let gens = vec![p(0b1111, 0), p(0, 0b0011), p(0, 0b0110), p(0, 0b1100)];
        let grp = StabilizerGroup::from_generators(4, gens).unwrap();
        let w = grp.weight_enumerator();
        assert_eq!(w[4], 9);
        assert_eq!(w.iter().sum::<u64>(), 16);
    }

    #[test]
    fn empty_graph_and_edge() {
        let w = weight_enumerator(&Graph::empty(5)).unwrap();
        assert_eq!(w[1], 5);
        assert_eq!(w[0], 1);
        let t = graph_norm_table(&Graph::path(2).unwrap()).unwrap();
        assert_eq!(t.full_body(), 3.0);
    }

    #[test]
    fn pauli_algebra() {
        let x = p(1, 0);
        let z = p(0, 1);
        // XZ = -iY, ZX = iY
        assert_eq!(
            x.mul(&z),
            PauliString {
                x: 1,
                z: 1,
                negative: false
            }
        );
        assert_eq!(
            z.mul(&x),
            PauliString {
                x: 1,
                z: 1,
                negative: true
            }
        );
        assert!(!x.commutes_with(&z));
        // single-edge graph: g1 g2 = YY with sign +1
        let yy = p(0b01, 0b10).mul(&p(0b10, 0b01));
        assert_eq!(yy.hermitian_sign(), Some(1.0));
        assert_eq!(yy.label(2), "+YY");
    }

    #[test]
    fn generator_validation() {
        assert!(StabilizerGroup::from_generators(2, vec![p(1, 0), p(0, 1)]).is_err());
        assert!(StabilizerGroup::from_generators(2, vec![p(1, 0), p(1, 0)]).is_err());
        assert!(StabilizerGroup::from_generators(2, vec![p(1, 0)]).is_err());
    }

    #[test]
    fn graph_parsing() {
        let g = Graph::parse_edge_list("1-2, 2-3,3-4,4-1", None).unwrap();
        assert_eq!(g, Graph::cycle(4).unwrap());
        assert_eq!(Graph::parse_edge_list("1-2", Some(4)).unwrap().n(), 4);
        assert!(Graph::parse_edge_list("1+2", None).is_err());
        assert!(Graph::parse_edge_list("1-1", None).is_err());
        assert!(Graph::from_adjacency(&[vec![0, 1], vec![0, 0]]).is_err());
        assert!(Graph::from_adjacency(&[vec![1, 0], vec![0, 0]]).is_err());
        assert!(Graph::from_adjacency(&[vec![0, 2], vec![2, 0]]).is_err());
        let adj = Graph::cycle(4).unwrap().adjacency();
        assert_eq!(Graph::from_adjacency(&adj).unwrap(), Graph::cycle(4).unwrap());
    }
}
