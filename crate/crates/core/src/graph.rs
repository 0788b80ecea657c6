//! Weighted dual graphs of exceptional divisors.
//!
//! A [`ResolutionGraph`] records one vertex per exceptional curve with its
//! self-intersection, and one edge per pair of meeting curves with the number
//! of intersection points. Components are implicitly rational (genus 0), so
//! self-loops are rejected. The graph of a minimal resolution is flagged, in
//! which case every weight must be at most -2.

use serde::Serialize;
use thiserror::Error;

use crate::matrix::{self, RationalMatrix};
use crate::rational::{rat, Rational};

/// Hard limits that keep all internal `i128` pairing arithmetic overflow-free.
const MAX_VERTICES: usize = 1 << 20;
const MAX_WEIGHT_ABS: i64 = 1 << 40;
const MAX_MULTIPLICITY: u32 = 1 << 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("a resolution graph needs at least one vertex")]
    EmptyGraph,
    #[error("self-loop at vertex {0}: exceptional components are smooth")]
    SelfLoop(usize),
    #[error("edge endpoint {index} out of range (graph has {count} vertices)")]
    VertexOutOfRange { index: usize, count: usize },
    #[error("edge {a}-{b} has multiplicity 0")]
    ZeroMultiplicity { a: usize, b: usize },
    #[error("duplicate edge {a}-{b}")]
    DuplicateEdge { a: usize, b: usize },
    #[error("vertex index {index} out of range (graph has {count} vertices)")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("cycle has {got} coefficients but the graph has {expected} vertices")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("limit exceeded: {0}")]
    LimitExceeded(&'static str),
}

/// Validation findings; an empty list means the graph is a plausible
/// resolution graph of one singular point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Diagnostic {
    NotConnected,
    NotNegativeDefinite,
    /// Weight above -2 on a graph flagged as a minimal resolution.
    NotMinimalResolution { vertex: usize, weight: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub mult: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionGraph {
    minimal_resolution: bool,
    weights: Vec<i64>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(usize, u32)>>,
}

impl ResolutionGraph {
    /// Builds a graph from vertex weights and `(a, b, mult)` edges.
    ///
    /// Edges are unordered; endpoints must be distinct, in range and listed
    /// at most once per pair. Connectivity and definiteness are *not*
    /// required here - [`ResolutionGraph::validate`] reports on them.
    pub fn new(
        minimal_resolution: bool,
        weights: Vec<i64>,
        edges: Vec<(usize, usize, u32)>,
    ) -> Result<Self, GraphError> {
        if weights.is_empty() {
            return Err(GraphError::EmptyGraph);
        }
        if weights.len() > MAX_VERTICES {
            return Err(GraphError::LimitExceeded("too many vertices"));
        }
        if weights.iter().any(|w| w.abs() > MAX_WEIGHT_ABS) {
            return Err(GraphError::LimitExceeded("weight magnitude too large"));
        }
        let n = weights.len();
        let mut canonical: Vec<Edge> = Vec::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); n];
        for (a, b, mult) in edges {
            for &v in &[a, b] {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { index: v, count: n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            let (a, b) = (a.min(b), a.max(b));
            if mult == 0 {
                return Err(GraphError::ZeroMultiplicity { a, b });
            }
            if mult > MAX_MULTIPLICITY {
                return Err(GraphError::LimitExceeded("edge multiplicity too large"));
            }
            if canonical.iter().any(|e| e.a == a && e.b == b) {
                return Err(GraphError::DuplicateEdge { a, b });
            }
            canonical.push(Edge { a, b, mult });
            adjacency[a].push((b, mult));
            adjacency[b].push((a, mult));
        }
        Ok(ResolutionGraph {
            minimal_resolution,
            weights,
            edges: canonical,
            adjacency,
        })
    }

    /// Chain with the given weights, consecutive vertices joined once.
    pub fn chain(minimal_resolution: bool, weights: &[i64]) -> Result<Self, GraphError> {
        let edges = (1..weights.len()).map(|i| (i - 1, i, 1)).collect();
        Self::new(minimal_resolution, weights.to_vec(), edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, v: usize) -> i64 {
        self.weights[v]
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, u32)] {
        &self.adjacency[v]
    }

    pub fn is_minimal_resolution(&self) -> bool {
        self.minimal_resolution
    }

    /// `E_i . E_j` as an integer: the weight on the diagonal, the edge
    /// multiplicity (or 0) off it.
    pub fn pairing(&self, i: usize, j: usize) -> i64 {
        if i == j {
            self.weights[i]
        } else {
            self.adjacency[i]
                .iter()
                .find(|&&(k, _)| k == j)
                .map_or(0, |&(_, m)| i64::from(m))
        }
    }

    /// The symmetric intersection matrix `(E_i . E_j)`.
    pub fn intersection_matrix(&self) -> RationalMatrix {
        let n = self.vertex_count();
        let mut m = RationalMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, rat(self.weights[i]));
        }
        for e in &self.edges {
            m.set(e.a, e.b, rat(i64::from(e.mult)));
            m.set(e.b, e.a, rat(i64::from(e.mult)));
        }
        m
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(w, _) in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.vertex_count() && self.is_connected()
    }

    /// Negative definiteness of the intersection matrix.
    ///
    /// Leaves are eliminated first, which costs O(n) on trees (the catalog
    /// case) and leaves no fill-in; whatever 2-core remains falls back to the
    /// dense Sylvester test on its Schur complement.
    pub fn is_negative_definite(&self) -> bool {
        let n = self.vertex_count();
        let mut diag: Vec<Rational> = self.weights.iter().map(|&w| rat(w)).collect();
        let mut degree: Vec<usize> = (0..n).map(|v| self.adjacency[v].len()).collect();
        let mut alive = vec![true; n];
        let mut queue: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
        let mut processed = 0usize;

        while let Some(v) = queue.pop() {
            if !alive[v] {
                continue;
            }
            if degree[v] > 1 {
                continue;
            }
            if diag[v] >= Rational::from_integer(0.into()) {
                return false;
            }
            if let Some(&(p, m)) = self.adjacency[v].iter().find(|&&(w, _)| alive[w]) {
                let m2 = rat(i64::from(m)) * rat(i64::from(m));
                let update = m2 / diag[v].clone();
                diag[p] -= update;
                degree[p] -= 1;
                if degree[p] <= 1 {
                    queue.push(p);
                }
            }
            alive[v] = false;
            processed += 1;
        }
        if processed == n {
            return true;
        }

        // Remaining 2-core: off-diagonal entries are untouched by leaf
        // elimination, only diagonals changed.
        let rest: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
        let index: std::collections::HashMap<usize, usize> =
            rest.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let k = rest.len();
        let mut reduced = RationalMatrix::zeros(k, k);
        for (i, &v) in rest.iter().enumerate() {
            reduced.set(i, i, diag[v].clone());
            for &(w, m) in &self.adjacency[v] {
                if let Some(&j) = index.get(&w) {
                    reduced.set(i, j, rat(i64::from(m)));
                }
            }
        }
        matrix::is_negative_definite(&reduced).expect("reduced matrix is symmetric")
    }

    /// Checks connectivity, negative definiteness, and (when flagged as a
    /// minimal resolution) that no weight exceeds -2.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if !self.is_connected() {
            out.push(Diagnostic::NotConnected);
        }
        if !self.is_negative_definite() {
            out.push(Diagnostic::NotNegativeDefinite);
        }
        if self.minimal_resolution {
            for (v, &w) in self.weights.iter().enumerate() {
                if w > -2 {
                    out.push(Diagnostic::NotMinimalResolution { vertex: v, weight: w });
                }
            }
        }
        out
    }

    /// `(sum_i c_i E_i) . E_vertex` as an exact rational.
    pub fn cycle_dot(&self, cycle: &Cycle, vertex: usize) -> Result<Rational, GraphError> {
        let n = self.vertex_count();
        if cycle.len() != n {
            return Err(GraphError::DimensionMismatch {
                expected: n,
                got: cycle.len(),
            });
        }
        if vertex >= n {
            return Err(GraphError::IndexOutOfRange { index: vertex, count: n });
        }
        let dot = self.cycle_dot_int(cycle.coefficients(), vertex);
        Ok(Rational::from_integer(dot.into()))
    }

    /// Integer pairing used on the hot paths; callers guarantee dimensions.
    pub(crate) fn cycle_dot_int(&self, coeffs: &[u64], vertex: usize) -> i128 {
        let mut dot = i128::from(self.weights[vertex]) * i128::from(coeffs[vertex]);
        for &(w, m) in &self.adjacency[vertex] {
            dot += i128::from(m) * i128::from(coeffs[w]);
        }
        dot
    }
}

/// Nonnegative integer combination of the exceptional components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Cycle {
    coeffs: Vec<u64>,
}

impl Cycle {
    pub fn new(coeffs: Vec<u64>) -> Self {
        Cycle { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        Cycle { coeffs: vec![0; n] }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coefficient(&self, v: usize) -> u64 {
        self.coeffs[v]
    }

    pub fn max_coefficient(&self) -> u64 {
        self.coeffs.iter().copied().max().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.coeffs.iter().sum()
    }

    /// Full support: every coefficient at least 1.
    pub fn has_full_support(&self) -> bool {
        self.coeffs.iter().all(|&c| c > 0)
    }

    /// Coordinatewise comparison `self >= other`.
    pub fn dominates(&self, other: &Cycle) -> bool {
        self.len() == other.len()
            && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a >= b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn du_val_star() -> ResolutionGraph {
        // Central -2 with three -2 leaves (D4).
        ResolutionGraph::new(true, vec![-2, -2, -2, -2], vec![(0, 1, 1), (0, 2, 1), (0, 3, 1)])
            .unwrap()
    }

    fn e8() -> ResolutionGraph {
        // 7-chain of -2 with a -2 branch at the third vertex.
        ResolutionGraph::new(
            true,
            vec![-2; 8],
            vec![(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1), (5, 6, 1), (2, 7, 1)],
        )
        .unwrap()
    }

    #[test]
    fn intersection_matrix_single_vertex() {
        let g = ResolutionGraph::chain(true, &[-2]).unwrap();
        assert_eq!(g.intersection_matrix(), RationalMatrix::from_int_rows(&[&[-2]]));
    }

    #[test]
    fn intersection_matrix_two_chain() {
        let g = ResolutionGraph::chain(true, &[-2, -2]).unwrap();
        assert_eq!(
            g.intersection_matrix(),
            RationalMatrix::from_int_rows(&[&[-2, 1], &[1, -2]])
        );
    }

    #[test]
    fn intersection_matrix_d4_star() {
        let g = du_val_star();
        assert_eq!(
            g.intersection_matrix(),
            RationalMatrix::from_int_rows(&[
                &[-2, 1, 1, 1],
                &[1, -2, 0, 0],
                &[1, 0, -2, 0],
                &[1, 0, 0, -2],
            ])
        );
    }

    #[test]
    fn validate_e8_clean() {
        assert_eq!(e8().validate(), Vec::new());
    }

    #[test]
    fn validate_disconnected() {
        let g = ResolutionGraph::new(true, vec![-2, -2], vec![]).unwrap();
        assert_eq!(g.validate(), vec![Diagnostic::NotConnected]);
    }

    #[test]
    fn validate_non_minimal_weight() {
        let g = ResolutionGraph::chain(true, &[-1]).unwrap();
        assert_eq!(
            g.validate(),
            vec![Diagnostic::NotMinimalResolution { vertex: 0, weight: -1 }]
        );
    }

    #[test]
    fn validate_not_negative_definite() {
        let g = ResolutionGraph::chain(false, &[0]).unwrap();
        assert_eq!(g.validate(), vec![Diagnostic::NotNegativeDefinite]);
    }

    #[test]
    fn constructor_rejects_bad_edges() {
        assert_eq!(
            ResolutionGraph::new(false, vec![-2], vec![(0, 0, 1)]),
            Err(GraphError::SelfLoop(0))
        );
        assert_eq!(
            ResolutionGraph::new(false, vec![-2, -2], vec![(0, 2, 1)]),
            Err(GraphError::VertexOutOfRange { index: 2, count: 2 })
        );
        assert_eq!(
            ResolutionGraph::new(false, vec![-2, -2], vec![(0, 1, 1), (1, 0, 1)]),
            Err(GraphError::DuplicateEdge { a: 0, b: 1 })
        );
        assert_eq!(ResolutionGraph::new(false, vec![], vec![]), Err(GraphError::EmptyGraph));
    }

    #[test]
    fn cycle_dot_examples() {
        let chain = ResolutionGraph::chain(true, &[-2, -2]).unwrap();
        let ones = Cycle::new(vec![1, 1]);
        assert_eq!(chain.cycle_dot(&ones, 0).unwrap(), rat(-1));

        let single = ResolutionGraph::chain(true, &[-3]).unwrap();
        assert_eq!(single.cycle_dot(&Cycle::new(vec![1]), 0).unwrap(), rat(-3));

        assert_eq!(chain.cycle_dot(&Cycle::zero(2), 1).unwrap(), rat(0));
    }

    #[test]
    fn cycle_dot_errors() {
        let chain = ResolutionGraph::chain(true, &[-2, -2]).unwrap();
        assert!(matches!(
            chain.cycle_dot(&Cycle::zero(3), 0),
            Err(GraphError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            chain.cycle_dot(&Cycle::zero(2), 2),
            Err(GraphError::IndexOutOfRange { .. })
        ));
    }

    // The leaf-elimination fast path must agree with the dense Sylvester
    // criterion, including on indefinite and singular inputs.
    #[test]
    fn fast_negative_definite_agrees_with_sylvester() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5EED_0002);
        for _ in 0..300 {
            let n = rng.gen_range(1..=9);
            let mut edges = Vec::new();
            // Random spanning tree plus occasional extra edge (2-core path).
            for v in 1..n {
                edges.push((rng.gen_range(0..v), v, rng.gen_range(1..=2u32)));
            }
            if n >= 3 && rng.gen_bool(0.3) {
                let a = rng.gen_range(0..n - 2);
                let b = rng.gen_range(a + 2..n);
                if !edges.iter().any(|&(x, y, _)| (x, y) == (a, b)) {
                    edges.push((a, b, 1));
                }
            }
            let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(-5..=1)).collect();
            let g = ResolutionGraph::new(false, weights, edges).unwrap();
            let dense = matrix::is_negative_definite(&g.intersection_matrix()).unwrap();
            assert_eq!(g.is_negative_definite(), dense);
        }
    }

    #[test]
    fn affine_star_is_not_negative_definite() {
        let g = ResolutionGraph::new(
            false,
            vec![-2; 5],
            vec![(0, 1, 1), (0, 2, 1), (0, 3, 1), (0, 4, 1)],
        )
        .unwrap();
        assert!(!g.is_negative_definite());
    }
}
