//! Discrepancies, mlds and lc thresholds of surface germs.
//!
//! A germ is either smooth or carries the dual graph of its minimal
//! resolution, together with boundary data: for each boundary curve through
//! the point, its coefficient and how often its strict transform meets each
//! exceptional component. The configuration is assumed log smooth - every
//! incidence is a transversal double point away from the nodes of the
//! exceptional divisor (caller's contract, not checkable from counts alone).
//!
//! With all components rational, the exceptional pullback coefficients `e_i`
//! of the boundary are the unique solution of
//!
//! ```text
//!   sum_i e_i (E_i . E_j) = (2 + E_j^2) - sum_curves coeff * incidence_j
//! ```
//!
//! i.e. `(K_W + Delta_W + sum_i e_i E_i) . E_j = 0` for every `j`. Log
//! discrepancies are `a_i = 1 - e_i`, the mld over the point is their
//! minimum (toroidal blowups at double points of a log-smooth lc
//! configuration only yield `p a_1 + q a_2 >= min(a_1, a_2)`), and the
//! threshold of the maximal ideal is `min_i a_i / c_i`, where `c` is the
//! fundamental cycle - the pullback of the maximal ideal is exactly
//! `O(-C_f)` for rational singularities. A smooth point is handled by one
//! explicit blowup instead of a degenerate solve.

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::fundcycle::{self, CycleError, TieBreakPolicy};
use crate::graph::ResolutionGraph;
use crate::matrix;
use crate::rational::{format_rational, rat, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiscrepancyError {
    #[error("boundary coefficient {value} of curve {curve} is outside [0, 1]")]
    CoefficientOutOfRange { curve: usize, value: String },
    #[error("curve {curve} has {got} incidences but the graph has {expected} vertices")]
    IncidenceLengthMismatch { curve: usize, expected: usize, got: usize },
    #[error("invalid graph for discrepancy computations: {0}")]
    InvalidGraph(String),
    #[error("the germ itself is not log canonical")]
    NotLcInput,
    #[error("the germ is not klt over the point (mld <= 0)")]
    NotKlt,
    #[error("a smooth point admits at most 2 snc curves, got {count}")]
    TooManyBranchesAtSmoothPoint { count: usize },
    #[error("internal consistency check failed: {0}")]
    Internal(&'static str),
    #[error(transparent)]
    Cycle(#[from] CycleError),
}

/// One boundary curve through the germ: its coefficient and the number of
/// intersection points of its strict transform with each exceptional
/// component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryCurve {
    coefficient: Rational,
    incidences: Vec<u32>,
}

impl BoundaryCurve {
    /// Coefficients above 1 are rejected here so that a later `NotLc`
    /// verdict always points at geometry, not at malformed input.
    pub fn new(coefficient: Rational, incidences: Vec<u32>) -> Result<Self, DiscrepancyError> {
        if coefficient.is_negative() || coefficient > Rational::one() {
            return Err(DiscrepancyError::CoefficientOutOfRange {
                curve: 0,
                value: format_rational(&coefficient),
            });
        }
        Ok(BoundaryCurve {
            coefficient,
            incidences,
        })
    }

    pub fn coefficient(&self) -> &Rational {
        &self.coefficient
    }

    pub fn incidences(&self) -> &[u32] {
        &self.incidences
    }

    pub fn total_incidence(&self) -> u64 {
        self.incidences.iter().map(|&i| u64::from(i)).sum()
    }
}

/// Strict-transform boundary data of one germ.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BoundaryData {
    curves: Vec<BoundaryCurve>,
}

impl BoundaryData {
    pub fn empty() -> Self {
        BoundaryData { curves: Vec::new() }
    }

    pub fn new(curves: Vec<BoundaryCurve>) -> Self {
        BoundaryData { curves }
    }

    pub fn curves(&self) -> &[BoundaryCurve] {
        &self.curves
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    fn check_incidence_lengths(&self, expected: usize) -> Result<(), DiscrepancyError> {
        for (k, c) in self.curves.iter().enumerate() {
            if c.incidences.len() != expected {
                return Err(DiscrepancyError::IncidenceLengthMismatch {
                    curve: k,
                    expected,
                    got: c.incidences.len(),
                });
            }
        }
        Ok(())
    }

    /// Scales every coefficient by `s` (clamped nowhere; caller keeps
    /// `s * coeff` within `[0, 1]`).
    pub fn scaled(&self, s: &Rational) -> Self {
        BoundaryData {
            curves: self
                .curves
                .iter()
                .map(|c| BoundaryCurve {
                    coefficient: &c.coefficient * s,
                    incidences: c.incidences.clone(),
                })
                .collect(),
        }
    }
}

/// A surface germ: smooth (no resolution graph) or singular with the dual
/// graph of its minimal resolution.
#[derive(Debug, Clone)]
pub struct SurfaceGerm {
    resolution: Option<ResolutionGraph>,
    boundary: BoundaryData,
}

impl SurfaceGerm {
    pub fn singular(graph: ResolutionGraph, boundary: BoundaryData) -> Result<Self, DiscrepancyError> {
        boundary.check_incidence_lengths(graph.vertex_count())?;
        Ok(SurfaceGerm {
            resolution: Some(graph),
            boundary,
        })
    }

    /// Smooth point with up to two snc curves through it; incidence vectors
    /// must be empty.
    pub fn smooth(boundary: BoundaryData) -> Result<Self, DiscrepancyError> {
        boundary.check_incidence_lengths(0)?;
        Ok(SurfaceGerm {
            resolution: None,
            boundary,
        })
    }

    pub fn resolution(&self) -> Option<&ResolutionGraph> {
        self.resolution.as_ref()
    }

    pub fn boundary(&self) -> &BoundaryData {
        &self.boundary
    }

    pub fn is_smooth(&self) -> bool {
        self.resolution.is_none()
    }

    pub fn with_boundary(&self, boundary: BoundaryData) -> Result<Self, DiscrepancyError> {
        match &self.resolution {
            Some(g) => SurfaceGerm::singular(g.clone(), boundary),
            None => SurfaceGerm::smooth(boundary),
        }
    }
}

/// A rational threshold value, or "not log canonical" (the infimum is
/// negative infinity).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LcValue {
    Value(Rational),
    NotLc,
}

impl LcValue {
    pub fn as_value(&self) -> Option<&Rational> {
        match self {
            LcValue::Value(v) => Some(v),
            LcValue::NotLc => None,
        }
    }
}

impl Serialize for LcValue {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            LcValue::Value(v) => serializer.serialize_str(&format_rational(v)),
            LcValue::NotLc => serializer.serialize_str("not-lc"),
        }
    }
}

fn require_minimal_resolution(graph: &ResolutionGraph) -> Result<(), DiscrepancyError> {
    if !graph.is_minimal_resolution() {
        return Err(DiscrepancyError::InvalidGraph(
            "graph is not flagged as a minimal resolution".into(),
        ));
    }
    if !graph.is_connected() {
        return Err(DiscrepancyError::InvalidGraph("graph is not connected".into()));
    }
    if !graph.is_negative_definite() {
        return Err(DiscrepancyError::InvalidGraph(
            "intersection matrix is not negative definite".into(),
        ));
    }
    if graph.weights().iter().any(|&w| w > -2) {
        return Err(DiscrepancyError::InvalidGraph(
            "minimal resolution carries a weight above -2".into(),
        ));
    }
    Ok(())
}

fn pullback_rhs(graph: &ResolutionGraph, boundary: &BoundaryData) -> Vec<Rational> {
    (0..graph.vertex_count())
        .map(|j| {
            let mut rhs = rat(2 + graph.weight(j));
            for c in boundary.curves() {
                rhs -= c.coefficient() * rat(i64::from(c.incidences[j]));
            }
            rhs
        })
        .collect()
}

/// Solves `sum_i e_i (E_i . E_j) = rhs_j` by leaf elimination; the graph is
/// a tree (collapsing multiplicities), so there is no fill-in.
fn solve_on_tree(graph: &ResolutionGraph, rhs: &[Rational]) -> Vec<Rational> {
    let n = graph.vertex_count();
    let mut diag: Vec<Rational> = graph.weights().iter().map(|&w| rat(w)).collect();
    let mut rhs = rhs.to_vec();
    let mut degree: Vec<usize> = (0..n).map(|v| graph.neighbors(v).len()).collect();
    let mut alive = vec![true; n];
    // (vertex, parent, multiplicity) in elimination order; root has no parent.
    let mut eliminated: Vec<(usize, Option<(usize, u32)>)> = Vec::with_capacity(n);
    let mut queue: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();

    while let Some(v) = queue.pop() {
        if !alive[v] || degree[v] > 1 {
            continue;
        }
        debug_assert!(diag[v].is_negative(), "pivot must stay negative");
        let parent = graph.neighbors(v).iter().find(|&&(u, _)| alive[u]).copied();
        if let Some((p, m)) = parent {
            let ratio_vp = rat(i64::from(m)) / diag[v].clone();
            let delta_diag = rat(i64::from(m)) * ratio_vp.clone();
            diag[p] -= delta_diag;
            let delta_rhs = rhs[v].clone() * ratio_vp;
            rhs[p] -= delta_rhs;
            degree[p] -= 1;
            if degree[p] <= 1 {
                queue.push(p);
            }
        }
        alive[v] = false;
        eliminated.push((v, parent));
    }
    debug_assert_eq!(eliminated.len(), n, "tree elimination must exhaust the graph");

    let mut e = vec![Rational::zero(); n];
    for &(v, parent) in eliminated.iter().rev() {
        let mut num = rhs[v].clone();
        if let Some((p, m)) = parent {
            num -= rat(i64::from(m)) * &e[p];
        }
        e[v] = num / diag[v].clone();
    }
    e
}

/// Coefficients `e_i` of the exceptional part of the log pullback of
/// `K + Delta`: the unique vector with `(K_W + Delta_W + sum e_i E_i) . E_j = 0`
/// for every `j`.
pub fn exceptional_log_pullback(
    graph: &ResolutionGraph,
    boundary: &BoundaryData,
) -> Result<Vec<Rational>, DiscrepancyError> {
    require_minimal_resolution(graph)?;
    boundary.check_incidence_lengths(graph.vertex_count())?;
    let rhs = pullback_rhs(graph, boundary);
    if graph.is_tree() {
        Ok(solve_on_tree(graph, &rhs))
    } else {
        matrix::solve_linear_system(&graph.intersection_matrix(), &rhs)
            .map_err(|_| DiscrepancyError::Internal("negative definite matrix reported singular"))
    }
}

/// `a_i = 1 - e_i`.
pub fn log_discrepancies(pullback: &[Rational]) -> Vec<Rational> {
    pullback.iter().map(|e| Rational::one() - e).collect()
}

/// Re-evaluates the defining system on a computed solution; used as a
/// numeric recheck by the report builder and the sweeps.
pub fn defining_system_holds(
    graph: &ResolutionGraph,
    boundary: &BoundaryData,
    pullback: &[Rational],
) -> bool {
    let rhs = pullback_rhs(graph, boundary);
    (0..graph.vertex_count()).all(|j| {
        let mut acc = pullback[j].clone() * rat(graph.weight(j));
        for &(u, m) in graph.neighbors(j) {
            acc += pullback[u].clone() * rat(i64::from(m));
        }
        acc == rhs[j]
    })
}

fn smooth_coefficient_sum(germ: &SurfaceGerm) -> Result<Rational, DiscrepancyError> {
    let count = germ.boundary.curves().len();
    if count > 2 {
        return Err(DiscrepancyError::TooManyBranchesAtSmoothPoint { count });
    }
    Ok(germ
        .boundary
        .curves()
        .iter()
        .map(|c| c.coefficient().clone())
        .sum())
}

/// Minimal log discrepancy over the point of the germ.
///
/// Singular case: `NotLc` if some `e_i > 1` or a curve meeting the
/// exceptional divisor has coefficient above 1, else `min_i (1 - e_i)`.
/// Smooth case: `NotLc` if some coefficient exceeds 1, else
/// `2 - sum of the coefficients` (weighted blowups realize `p + q` minus the
/// boundary orders, minimized at weights `(1, 1)`).
pub fn mld_over_point(germ: &SurfaceGerm) -> Result<LcValue, DiscrepancyError> {
    match germ.resolution() {
        None => {
            let sum = smooth_coefficient_sum(germ)?;
            if germ
                .boundary
                .curves()
                .iter()
                .any(|c| c.coefficient() > &Rational::one())
            {
                return Ok(LcValue::NotLc);
            }
            Ok(LcValue::Value(rat(2) - sum))
        }
        Some(graph) => {
            let e = exceptional_log_pullback(graph, &germ.boundary)?;
            if e.iter().any(|ei| ei > &Rational::one()) {
                return Ok(LcValue::NotLc);
            }
            if germ
                .boundary
                .curves()
                .iter()
                .any(|c| c.total_incidence() > 0 && c.coefficient() > &Rational::one())
            {
                return Ok(LcValue::NotLc);
            }
            let mld = log_discrepancies(&e)
                .into_iter()
                .min()
                .expect("graph has at least one vertex");
            Ok(LcValue::Value(mld))
        }
    }
}

/// The largest `t` such that the germ stays lc after adding `t` times the
/// maximal ideal: `min_i a_i / c_i` over the fundamental cycle `c`.
///
/// Valid for rational singularities (every quotient singularity qualifies);
/// rationality of other input graphs is the caller's responsibility.
pub fn lct_maximal_ideal(germ: &SurfaceGerm) -> Result<Rational, DiscrepancyError> {
    match mld_over_point(germ)? {
        LcValue::NotLc => Err(DiscrepancyError::NotLcInput),
        LcValue::Value(mld) => {
            debug_assert!(!mld.is_negative());
            match germ.resolution() {
                None => Ok(mld), // one blowup: e = sum - 1, c = 1, so a/c = mld
                Some(graph) => {
                    let e = exceptional_log_pullback(graph, &germ.boundary)?;
                    let cycle =
                        fundcycle::laufer_fundamental_cycle(graph, TieBreakPolicy::LowestIndex)?;
                    if !cycle.has_full_support() {
                        return Err(DiscrepancyError::Internal(
                            "fundamental cycle without full support",
                        ));
                    }
                    let lct = log_discrepancies(&e)
                        .iter()
                        .zip(cycle.coefficients())
                        .map(|(a, &c)| a / rat(c as i64))
                        .min()
                        .expect("graph has at least one vertex");
                    Ok(lct)
                }
            }
        }
    }
}

/// Bundled outputs for one germ, including the two quantitative flags:
/// `lct >= mld^2 / 24` and `e_i + mld^2 / 4 <= 1` for every `i`.
#[derive(Debug, Clone, Serialize)]
pub struct GermReport {
    pub exceptional_pullback: Vec<String>,
    pub log_discrepancies: Vec<String>,
    pub fundamental_cycle: Vec<u64>,
    pub mld: LcValue,
    pub lct_maximal_ideal: LcValue,
    pub epsilon_sq_over_24_ok: bool,
    pub epsilon_sq_over_4_ok: bool,
}

/// Raw (unserialized) analysis of a germ, used by sweeps.
pub struct GermAnalysis {
    pub pullback: Vec<Rational>,
    pub discrepancies: Vec<Rational>,
    pub cycle_coeffs: Vec<u64>,
    pub mld: Rational,
    pub lct: Rational,
    pub epsilon_sq_over_24_ok: bool,
    pub epsilon_sq_over_4_ok: bool,
}

/// Per-graph pipeline for sweeps: the graph is validated and its
/// fundamental cycle computed once, then many boundaries are analyzed
/// against it. `None` models the smooth germ.
pub struct GermPipeline<'g> {
    graph: Option<&'g ResolutionGraph>,
    cycle_coeffs: Vec<u64>,
}

impl<'g> GermPipeline<'g> {
    pub fn new(graph: Option<&'g ResolutionGraph>) -> Result<Self, DiscrepancyError> {
        match graph {
            None => Ok(GermPipeline { graph: None, cycle_coeffs: vec![1] }),
            Some(g) => {
                require_minimal_resolution(g)?;
                let cycle = fundcycle::laufer_fundamental_cycle(g, TieBreakPolicy::LowestIndex)?;
                if !cycle.has_full_support() {
                    return Err(DiscrepancyError::Internal(
                        "fundamental cycle without full support",
                    ));
                }
                Ok(GermPipeline {
                    graph: Some(g),
                    cycle_coeffs: cycle.coefficients().to_vec(),
                })
            }
        }
    }

    pub fn fundamental_cycle(&self) -> &[u64] {
        &self.cycle_coeffs
    }

    /// Empty-boundary mld; cheap helper for boundary generators.
    pub fn base_mld(&self) -> Result<Rational, DiscrepancyError> {
        Ok(self.analyze(&BoundaryData::empty())?.mld)
    }

    /// Full analysis of one boundary. Errors with `NotKlt` unless the
    /// resulting mld over the point is strictly positive.
    pub fn analyze(&self, boundary: &BoundaryData) -> Result<GermAnalysis, DiscrepancyError> {
        let (pullback, mld) = match self.graph {
            None => {
                let count = boundary.curves().len();
                if count > 2 {
                    return Err(DiscrepancyError::TooManyBranchesAtSmoothPoint { count });
                }
                boundary.check_incidence_lengths(0)?;
                let sum: Rational = boundary
                    .curves()
                    .iter()
                    .map(|c| c.coefficient().clone())
                    .sum();
                (vec![sum.clone() - Rational::one()], rat(2) - sum)
            }
            Some(graph) => {
                boundary.check_incidence_lengths(graph.vertex_count())?;
                let rhs = pullback_rhs(graph, boundary);
                let e = if graph.is_tree() {
                    solve_on_tree(graph, &rhs)
                } else {
                    matrix::solve_linear_system(&graph.intersection_matrix(), &rhs).map_err(
                        |_| DiscrepancyError::Internal("negative definite matrix reported singular"),
                    )?
                };
                if !defining_system_holds(graph, boundary, &e) {
                    return Err(DiscrepancyError::Internal("defining system recheck failed"));
                }
                let mld = e
                    .iter()
                    .map(|ei| Rational::one() - ei)
                    .min()
                    .expect("graph has at least one vertex");
                (e, mld)
            }
        };
        if !mld.is_positive() {
            return Err(DiscrepancyError::NotKlt);
        }
        let discrepancies = log_discrepancies(&pullback);
        let lct = discrepancies
            .iter()
            .zip(&self.cycle_coeffs)
            .map(|(a, &c)| a / rat(c as i64))
            .min()
            .expect("at least one component");

        // Adjunction recheck: (Delta_full - D) . D = 2 for every exceptional D.
        match self.graph {
            None => {
                // Blowup model: E^2 = -1, each curve meets E once.
                let sum = Rational::one() + pullback[0].clone();
                let adj = sum + pullback[0].clone() * rat(-1) - rat(-1);
                if adj != rat(2) {
                    return Err(DiscrepancyError::Internal("adjunction recheck failed"));
                }
            }
            Some(graph) => {
                for j in 0..graph.vertex_count() {
                    let mut adj = Rational::zero();
                    for c in boundary.curves() {
                        adj += c.coefficient() * rat(i64::from(c.incidences[j]));
                    }
                    adj += pullback[j].clone() * rat(graph.weight(j));
                    for &(u, m) in graph.neighbors(j) {
                        adj += pullback[u].clone() * rat(i64::from(m));
                    }
                    adj -= rat(graph.weight(j));
                    if adj != rat(2) {
                        return Err(DiscrepancyError::Internal("adjunction recheck failed"));
                    }
                }
            }
        }

        let eps_sq = &mld * &mld;
        let epsilon_sq_over_24_ok = lct.clone() >= eps_sq.clone() / rat(24);
        let quarter = eps_sq / rat(4);
        let epsilon_sq_over_4_ok = pullback
            .iter()
            .all(|e| e.clone() + quarter.clone() <= Rational::one());

        Ok(GermAnalysis {
            pullback,
            discrepancies,
            cycle_coeffs: self.cycle_coeffs.clone(),
            mld,
            lct,
            epsilon_sq_over_24_ok,
            epsilon_sq_over_4_ok,
        })
    }
}

pub fn analyze_germ(germ: &SurfaceGerm) -> Result<GermAnalysis, DiscrepancyError> {
    let pipeline = GermPipeline::new(germ.resolution())?;
    let analysis = pipeline.analyze(germ.boundary())?;

    // Cross-check the one-shot operations on the same germ.
    debug_assert_eq!(
        mld_over_point(germ).ok(),
        Some(LcValue::Value(analysis.mld.clone()))
    );
    debug_assert_eq!(lct_maximal_ideal(germ).ok(), Some(analysis.lct.clone()));
    Ok(analysis)
}

/// Report wrapper around [`analyze_germ`]: errors with
/// [`DiscrepancyError::NotKlt`] when the mld over the point is nonpositive.
pub fn verify_surface_bound(germ: &SurfaceGerm) -> Result<GermReport, DiscrepancyError> {
    let a = analyze_germ(germ)?;
    Ok(GermReport {
        exceptional_pullback: a.pullback.iter().map(format_rational).collect(),
        log_discrepancies: a.discrepancies.iter().map(format_rational).collect(),
        fundamental_cycle: a.cycle_coeffs,
        mld: LcValue::Value(a.mld),
        lct_maximal_ideal: LcValue::Value(a.lct),
        epsilon_sq_over_24_ok: a.epsilon_sq_over_24_ok,
        epsilon_sq_over_4_ok: a.epsilon_sq_over_4_ok,
    })
}
