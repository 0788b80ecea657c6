//! The fundamental cycle and checks built on it.
//!
//! On a connected, negative-definite graph the set
//! `S = { C = sum a_i E_i != 0 : a_i >= 0 integral, C.E_k <= 0 for all k }`
//! has a coordinatewise minimum element, the fundamental cycle. Two
//! independent routes compute it:
//!
//! * [`laufer_fundamental_cycle`] grows a cycle one component at a time,
//!   starting from any single component and repeatedly adding a component
//!   with positive pairing until the cycle is antinef;
//! * [`brute_force_fundamental_cycle`] enumerates every antinef cycle in a
//!   coefficient box and takes the coordinatewise minimum.
//!
//! The remaining operations are verdicts used by the sweep harnesses: the
//! entrywise-comparison monotonicity of fundamental cycles, and the bound
//! that no coefficient of a quotient-singularity fundamental cycle
//! exceeds 6.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Cycle, ResolutionGraph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CycleError {
    #[error("graph is not connected")]
    NotConnected,
    #[error("intersection matrix is not negative definite")]
    NotNegativeDefinite,
    #[error("no antinef cycle with coefficients at most {bound}")]
    BoundTooSmall { bound: u64 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("internal error: {0}")]
    InternalError(&'static str),
    #[error("limit exceeded: {0}")]
    LimitExceeded(&'static str),
}

/// Choice rule for Laufer's algorithm: the start component and, at each
/// step, which component with positive pairing to add. The result is
/// provably policy-independent; the knob exists so tests can confirm that.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreakPolicy {
    LowestIndex,
    HighestIndex,
    Seeded(u64),
}

impl Default for TieBreakPolicy {
    fn default() -> Self {
        TieBreakPolicy::LowestIndex
    }
}

enum Chooser {
    Lowest,
    Highest,
    Rng(Box<ChaCha8Rng>),
}

impl Chooser {
    fn new(policy: TieBreakPolicy) -> Self {
        match policy {
            TieBreakPolicy::LowestIndex => Chooser::Lowest,
            TieBreakPolicy::HighestIndex => Chooser::Highest,
            TieBreakPolicy::Seeded(seed) => {
                Chooser::Rng(Box::new(ChaCha8Rng::seed_from_u64(seed)))
            }
        }
    }

    fn start(&mut self, n: usize) -> usize {
        match self {
            Chooser::Lowest => 0,
            Chooser::Highest => n - 1,
            Chooser::Rng(rng) => rng.gen_range(0..n),
        }
    }

    fn pick(&mut self, candidates: &[usize]) -> usize {
        match self {
            Chooser::Lowest => candidates[0],
            Chooser::Highest => *candidates.last().unwrap(),
            Chooser::Rng(rng) => candidates[rng.gen_range(0..candidates.len())],
        }
    }
}

fn precheck(graph: &ResolutionGraph) -> Result<(), CycleError> {
    if !graph.is_connected() {
        return Err(CycleError::NotConnected);
    }
    if !graph.is_negative_definite() {
        return Err(CycleError::NotNegativeDefinite);
    }
    Ok(())
}

/// Laufer's algorithm. Negative definiteness is verified first (it is what
/// guarantees termination); a hard cap of `100 * n` additions turns any
/// bookkeeping bug into an error instead of a hang.
pub fn laufer_fundamental_cycle(
    graph: &ResolutionGraph,
    policy: TieBreakPolicy,
) -> Result<Cycle, CycleError> {
    precheck(graph)?;
    let n = graph.vertex_count();
    let mut chooser = Chooser::new(policy);
    let mut coeffs = vec![0u64; n];
    let mut dots = vec![0i128; n];

    let add = |v: usize, coeffs: &mut Vec<u64>, dots: &mut Vec<i128>| {
        coeffs[v] += 1;
        dots[v] += i128::from(graph.weight(v));
        for &(u, m) in graph.neighbors(v) {
            dots[u] += i128::from(m);
        }
    };

    add(chooser.start(n), &mut coeffs, &mut dots);
    let cap = 100 * n;
    let mut candidates = Vec::with_capacity(n);
    for _ in 0..cap {
        candidates.clear();
        candidates.extend((0..n).filter(|&v| dots[v] > 0));
        if candidates.is_empty() {
            return Ok(Cycle::new(coeffs));
        }
        let v = chooser.pick(&candidates);
        add(v, &mut coeffs, &mut dots);
    }
    Err(CycleError::InternalError("laufer addition cap exceeded"))
}

/// True iff the cycle pairs nonpositively with every component.
/// Precondition: the cycle has one coefficient per vertex.
pub fn is_antinef(graph: &ResolutionGraph, cycle: &Cycle) -> bool {
    assert_eq!(cycle.len(), graph.vertex_count(), "cycle dimension mismatch");
    (0..graph.vertex_count()).all(|v| graph.cycle_dot_int(cycle.coefficients(), v) <= 0)
}

const BRUTE_FORCE_MAX_VERTICES: usize = 20;
const BRUTE_FORCE_MAX_BOUND: u64 = 1 << 20;

/// Enumerates every nonzero antinef cycle with coefficients in
/// `0..=bound` and returns the coordinatewise minimum over all of them.
///
/// Enumeration runs over prefixes in breadth-first vertex order. A prefix
/// dies as soon as some already-assigned vertex has positive partial
/// pairing: coefficients and off-diagonal pairings are nonnegative, so
/// partial pairings only grow as the remaining vertices receive values, and
/// every prefix of an antinef cycle passes the check. The walk is therefore
/// an exact enumeration of the box members.
pub fn brute_force_fundamental_cycle(
    graph: &ResolutionGraph,
    bound: u64,
) -> Result<Cycle, CycleError> {
    precheck(graph)?;
    if bound == 0 {
        return Err(CycleError::BoundTooSmall { bound });
    }
    if bound > BRUTE_FORCE_MAX_BOUND {
        return Err(CycleError::LimitExceeded("brute-force bound too large"));
    }
    let n = graph.vertex_count();
    if n > BRUTE_FORCE_MAX_VERTICES {
        return Err(CycleError::LimitExceeded(
            "brute-force enumeration is limited to 20 vertices",
        ));
    }

    // Breadth-first order, so prefixes stay connected and prune early.
    let order = {
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        let mut queue = std::collections::VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &(u, _) in graph.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        order
    };
    let mut position = vec![usize::MAX; n];
    for (p, &v) in order.iter().enumerate() {
        position[v] = p;
    }

    struct Search<'a> {
        graph: &'a ResolutionGraph,
        order: Vec<usize>,
        position: Vec<usize>,
        bound: u64,
        coeffs: Vec<u64>,
        dots: Vec<i128>,
        min: Option<Vec<u64>>,
    }

    impl Search<'_> {
        fn descend(&mut self, depth: usize) {
            if depth == self.order.len() {
                if self.coeffs.iter().any(|&c| c > 0) {
                    match &mut self.min {
                        None => self.min = Some(self.coeffs.clone()),
                        Some(m) => {
                            for (mi, &ci) in m.iter_mut().zip(&self.coeffs) {
                                *mi = (*mi).min(ci);
                            }
                        }
                    }
                }
                return;
            }
            let v = self.order[depth];
            let w = i128::from(self.graph.weight(v));
            for c in 0..=self.bound {
                if c > 0 {
                    self.dots[v] += w;
                    for &(u, m) in self.graph.neighbors(v) {
                        self.dots[u] += i128::from(m);
                    }
                }
                self.coeffs[v] = c;
                // Assigned vertices must already pair nonpositively.
                let own_ok = self.dots[v] <= 0;
                let neighbors_ok = self
                    .graph
                    .neighbors(v)
                    .iter()
                    .all(|&(u, _)| self.position[u] > depth || self.dots[u] <= 0);
                if !neighbors_ok {
                    // Off-diagonal pairings grow with c; no larger c helps.
                    break;
                }
                if own_ok {
                    self.descend(depth + 1);
                }
            }
            // Undo this vertex entirely.
            let c = self.coeffs[v];
            self.coeffs[v] = 0;
            self.dots[v] -= w * i128::from(c);
            for &(u, m) in self.graph.neighbors(v) {
                self.dots[u] -= i128::from(m) * i128::from(c);
            }
        }
    }

    let mut search = Search {
        graph,
        order,
        position,
        bound,
        coeffs: vec![0; n],
        dots: vec![0; n],
        min: None,
    };
    search.descend(0);
    match search.min {
        Some(m) => Ok(Cycle::new(m)),
        None => Err(CycleError::BoundTooSmall { bound }),
    }
}

/// Verdict of the fundamental-cycle monotonicity comparison.
///
/// Preconditions: the graphs have the same vertex count and the
/// intersection matrix of `larger` dominates that of `smaller` entrywise.
/// Returns whether the fundamental-cycle coefficients of `larger` dominate
/// those of `smaller` coordinatewise (expected: always true).
pub fn check_monotonicity(
    larger: &ResolutionGraph,
    smaller: &ResolutionGraph,
) -> Result<bool, CycleError> {
    let n = larger.vertex_count();
    if n != smaller.vertex_count() {
        return Err(CycleError::PreconditionViolated(format!(
            "vertex counts differ: {} vs {}",
            n,
            smaller.vertex_count()
        )));
    }
    for i in 0..n {
        for j in 0..n {
            if larger.pairing(i, j) < smaller.pairing(i, j) {
                return Err(CycleError::PreconditionViolated(format!(
                    "intersection matrices are not comparable at ({i}, {j})"
                )));
            }
        }
    }
    let cl = laufer_fundamental_cycle(larger, TieBreakPolicy::LowestIndex)?;
    let cs = laufer_fundamental_cycle(smaller, TieBreakPolicy::LowestIndex)?;
    Ok(cl.dominates(&cs))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SixEReport {
    pub max_coefficient: u64,
    pub total: u64,
    pub passes: bool,
}

/// Max fundamental-cycle coefficient and the verdict `max <= 6`.
pub fn check_6e(graph: &ResolutionGraph) -> Result<SixEReport, CycleError> {
    let cycle = laufer_fundamental_cycle(graph, TieBreakPolicy::LowestIndex)?;
    let max_coefficient = cycle.max_coefficient();
    Ok(SixEReport {
        max_coefficient,
        total: cycle.total(),
        passes: max_coefficient <= 6,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn laufer(graph: &ResolutionGraph) -> Cycle {
        laufer_fundamental_cycle(graph, TieBreakPolicy::LowestIndex).unwrap()
    }

    #[test]
    fn chains_of_minus_two_are_all_ones() {
        for len in 1..=12 {
            let g = ResolutionGraph::chain(true, &vec![-2; len]).unwrap();
            assert_eq!(laufer(&g).coefficients(), vec![1; len]);
        }
    }

    #[test]
    fn e8_fundamental_cycle() {
        let g = catalog::icosahedral(1).unwrap().graph;
        assert_eq!(laufer(&g).coefficients(), &[2, 4, 6, 5, 4, 3, 2, 3]);
    }

    #[test]
    fn single_vertex() {
        for b in 2..=7 {
            let g = ResolutionGraph::chain(true, &[-b]).unwrap();
            assert_eq!(laufer(&g).coefficients(), &[1]);
        }
    }

    #[test]
    fn laufer_rejects_bad_graphs() {
        let disconnected = ResolutionGraph::new(true, vec![-2, -2], vec![]).unwrap();
        assert_eq!(
            laufer_fundamental_cycle(&disconnected, TieBreakPolicy::LowestIndex),
            Err(CycleError::NotConnected)
        );
        let indefinite = ResolutionGraph::chain(false, &[-1, -1]).unwrap();
        assert_eq!(
            laufer_fundamental_cycle(&indefinite, TieBreakPolicy::LowestIndex),
            Err(CycleError::NotNegativeDefinite)
        );
    }

    #[test]
    fn antinef_examples() {
        let chain2 = ResolutionGraph::chain(true, &[-2, -2]).unwrap();
        assert!(is_antinef(&chain2, &Cycle::new(vec![1, 1])));

        let chain3 = ResolutionGraph::chain(true, &[-2, -2, -2]).unwrap();
        // Middle component alone pairs +1 with its neighbors.
        assert!(!is_antinef(&chain3, &Cycle::new(vec![0, 1, 0])));

        let e8 = catalog::icosahedral(1).unwrap().graph;
        assert!(is_antinef(&e8, &laufer(&e8)));
    }

    #[test]
    fn brute_force_examples() {
        let star = ResolutionGraph::new(
            true,
            vec![-2, -2, -2, -2],
            vec![(0, 1, 1), (0, 2, 1), (0, 3, 1)],
        )
        .unwrap();
        assert_eq!(
            brute_force_fundamental_cycle(&star, 6).unwrap().coefficients(),
            &[2, 1, 1, 1]
        );

        let single = ResolutionGraph::chain(true, &[-2]).unwrap();
        assert_eq!(
            brute_force_fundamental_cycle(&single, 1).unwrap().coefficients(),
            &[1]
        );

        let t3 = catalog::tetrahedral(3).unwrap().graph;
        assert_eq!(
            brute_force_fundamental_cycle(&t3, 6).unwrap().coefficients(),
            &[1, 2, 2, 1, 1]
        );
    }

    #[test]
    fn brute_force_bound_too_small() {
        let e8 = catalog::icosahedral(1).unwrap().graph;
        assert_eq!(
            brute_force_fundamental_cycle(&e8, 1),
            Err(CycleError::BoundTooSmall { bound: 1 })
        );
        let single = ResolutionGraph::chain(true, &[-2]).unwrap();
        assert_eq!(
            brute_force_fundamental_cycle(&single, 0),
            Err(CycleError::BoundTooSmall { bound: 0 })
        );
    }

    #[test]
    fn brute_force_matches_laufer_on_table_members() {
        for entry in catalog::exceptional_members(3) {
            let oracle = brute_force_fundamental_cycle(&entry.graph, 10).unwrap();
            assert_eq!(laufer(&entry.graph), oracle, "{:?}", entry.params);
        }
    }

    #[test]
    fn policy_independence_small() {
        let g = catalog::icosahedral(1).unwrap().graph;
        let reference = laufer(&g);
        assert_eq!(
            laufer_fundamental_cycle(&g, TieBreakPolicy::HighestIndex).unwrap(),
            reference
        );
        for seed in 0..10 {
            assert_eq!(
                laufer_fundamental_cycle(&g, TieBreakPolicy::Seeded(seed)).unwrap(),
                reference
            );
        }
    }

    #[test]
    fn monotonicity_examples() {
        let a = ResolutionGraph::chain(true, &[-2, -2]).unwrap();
        let b = ResolutionGraph::chain(true, &[-3, -2]).unwrap();
        assert_eq!(check_monotonicity(&a, &b), Ok(true));
        assert_eq!(check_monotonicity(&a, &a), Ok(true));
        // Not comparable in this direction.
        assert!(matches!(
            check_monotonicity(&b, &a),
            Err(CycleError::PreconditionViolated(_))
        ));

        // E8 shape with all weights dropped to -3: strictly smaller cycle.
        let e8 = catalog::icosahedral(1).unwrap().graph;
        let e8_minus3 = ResolutionGraph::new(
            true,
            vec![-3; 8],
            e8.edges().iter().map(|e| (e.a, e.b, e.mult)).collect(),
        )
        .unwrap();
        assert_eq!(check_monotonicity(&e8, &e8_minus3), Ok(true));
        let small = laufer(&e8_minus3);
        assert!(small.coefficient(2) < laufer(&e8).coefficient(2));
    }

    #[test]
    fn six_e_examples() {
        let report = check_6e(&catalog::icosahedral(1).unwrap().graph).unwrap();
        assert_eq!(report.max_coefficient, 6);
        assert!(report.passes);

        let report = check_6e(&crate::hj::cyclic_graph(17, 5).unwrap()).unwrap();
        assert_eq!(report.max_coefficient, 1);
        assert!(report.passes);

        let report = check_6e(&catalog::dihedral(7, 6).unwrap().graph).unwrap();
        assert_eq!(report.max_coefficient, 2);
        assert!(report.passes);
    }

    #[test]
    fn full_support_on_connected_graphs() {
        for entry in catalog::exceptional_members(5) {
            assert!(laufer(&entry.graph).has_full_support());
        }
        for (n, q) in catalog::cyclic_parameters(30) {
            let g = crate::hj::cyclic_graph(n, q).unwrap();
            assert!(laufer(&g).has_full_support());
        }
    }
}
