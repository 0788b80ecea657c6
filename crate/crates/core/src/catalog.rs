//! Dual graphs of quotient surface singularities.
//!
//! The five families - cyclic, dihedral, tetrahedral, octahedral,
//! icosahedral - exhaust the quotient surface singularities. Cyclic graphs
//! are Hirzebruch-Jung chains; the other four are stars: a central vertex of
//! weight `-b` carrying two or three fixed arms plus a `-2` branch.
//!
//! Vertex ordering is fixed so that reference cycles are stable: the arms are
//! laid out left to right as a single chain with the center in the middle,
//! and the branch vertex comes last.
//!
//! For the three exceptional families the residue of `m` picks the row shape
//! and `b` is recovered from `m = modulus * (b - 2) + residue`. For the `b = 2`
//! member of every row the fundamental cycle is tabulated here verbatim; the
//! `b > 2` members are only checked against the brute-force oracle.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Cycle, ResolutionGraph};
use crate::hj::{self, HjError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CatalogError {
    #[error(transparent)]
    Hj(#[from] HjError),
    #[error("invalid dihedral parameters (n, q) = ({n}, {q}): need 1 < q < n and gcd(n, q) = 1")]
    InvalidDihedral { n: u64, q: u64 },
    #[error("invalid {family:?} parameter m = {m}: residue {residue} mod {modulus} matches no row")]
    InvalidResidue { family: Family, m: u64, residue: u64, modulus: u64 },
    #[error("m = 0 is not a valid family parameter")]
    ZeroParameter,
    #[error("no table row for {family:?} with residue {residue}")]
    UnknownRow { family: Family, residue: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    Cyclic,
    Dihedral,
    Tetrahedral,
    Octahedral,
    Icosahedral,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Cyclic => "cyclic",
            Family::Dihedral => "dihedral",
            Family::Tetrahedral => "tetrahedral",
            Family::Octahedral => "octahedral",
            Family::Icosahedral => "icosahedral",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Params {
    /// Type `(n, q)` with `0 < q < n`, `gcd(n, q) = 1`.
    Cyclic { n: u64, q: u64 },
    /// Type `(n, q)` with `1 < q < n`, `gcd(n, q) = 1`.
    Dihedral { n: u64, q: u64 },
    /// Group order parameter; admissible residues depend on the family.
    Exceptional { m: u64 },
}

/// A catalog member: its dual graph plus the central weight derived from the
/// parameters (for cyclic chains, the leading expansion term).
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub family: Family,
    pub params: Params,
    pub graph: ResolutionGraph,
    pub derived_b: u64,
}

/// Row shape of one of the three exceptional families: the fixed arm weights
/// around the `-b` center, and the tabulated fundamental cycle of the `b = 2`
/// member (chain coefficients in vertex order, then the branch coefficient).
struct RowShape {
    residue: u64,
    left_arm: &'static [i64],
    right_arm: &'static [i64],
    cycle_chain_b2: &'static [u64],
    cycle_branch_b2: u64,
}

const TETRAHEDRAL_MODULUS: u64 = 6;
const TETRAHEDRAL_ROWS: &[RowShape] = &[
    RowShape {
        residue: 1,
        left_arm: &[-2, -2],
        right_arm: &[-2, -2],
        cycle_chain_b2: &[1, 2, 3, 2, 1],
        cycle_branch_b2: 2,
    },
    RowShape {
        residue: 3,
        left_arm: &[-2, -2],
        right_arm: &[-3],
        cycle_chain_b2: &[1, 2, 2, 1],
        cycle_branch_b2: 1,
    },
    RowShape {
        residue: 5,
        left_arm: &[-3],
        right_arm: &[-3],
        cycle_chain_b2: &[1, 2, 1],
        cycle_branch_b2: 1,
    },
];

const OCTAHEDRAL_MODULUS: u64 = 12;
const OCTAHEDRAL_ROWS: &[RowShape] = &[
    RowShape {
        residue: 1,
        left_arm: &[-2, -2],
        right_arm: &[-2, -2, -2],
        cycle_chain_b2: &[2, 3, 4, 3, 2, 1],
        cycle_branch_b2: 2,
    },
    RowShape {
        residue: 5,
        left_arm: &[-3],
        right_arm: &[-2, -2, -2],
        cycle_chain_b2: &[1, 2, 2, 2, 1],
        cycle_branch_b2: 1,
    },
    RowShape {
        residue: 7,
        left_arm: &[-2, -2],
        right_arm: &[-4],
        cycle_chain_b2: &[1, 2, 2, 1],
        cycle_branch_b2: 1,
    },
    RowShape {
        residue: 11,
        left_arm: &[-3],
        right_arm: &[-4],
        cycle_chain_b2: &[1, 2, 1],
        cycle_branch_b2: 1,
    },
];

const ICOSAHEDRAL_MODULUS: u64 = 30;
const ICOSAHEDRAL_ROWS: &[RowShape] = &[
    RowShape {
        residue: 1,
        left_arm: &[-2, -2],
        right_arm: &[-2, -2, -2, -2],
        cycle_chain_b2: &[2, 4, 6, 5, 4, 3, 2],
        cycle_branch_b2: 3,
    },
    RowShape {
        residue: 7,
        left_arm: &[-2, -2],
        right_arm: &[-2, -3],
        cycle_chain_b2: &[1, 2, 3, 2, 1],
        cycle_branch_b2: 2,
    },
    RowShape {
        residue: 11,
        left_arm: &[-3],
        right_arm: &[-2, -2, -2, -2],
        cycle_chain_b2: &[1, 2, 2, 2, 2, 1],
        cycle_branch_b2: 1,
    },
    RowShape {
        residue: 13,
        left_arm: &[-2, -2],
        right_arm: &[-3, -2],
        cycle_chain_b2: &[1, 2, 2, 1, 1],
        cycle_branch_b2: 1,
    },
    RowShape {
        residue: 17,
        left_arm: &[-3],
        right_arm: &[-2, -3],
        cycle_chain_b2: &[1, 2, 2, 1],
        cycle_branch_b2: 1,
    },
    RowShape {
        residue: 19,
        left_arm: &[-2, -2],
        right_arm: &[-5],
        cycle_chain_b2: &[1, 2, 2, 1],
        cycle_branch_b2: 1,
    },
    RowShape {
        residue: 23,
        left_arm: &[-3],
        right_arm: &[-3, -2],
        cycle_chain_b2: &[1, 2, 1, 1],
        cycle_branch_b2: 1,
    },
    RowShape {
        residue: 29,
        left_arm: &[-3],
        right_arm: &[-5],
        cycle_chain_b2: &[1, 2, 1],
        cycle_branch_b2: 1,
    },
];

fn family_rows(family: Family) -> Option<(&'static [RowShape], u64)> {
    match family {
        Family::Tetrahedral => Some((TETRAHEDRAL_ROWS, TETRAHEDRAL_MODULUS)),
        Family::Octahedral => Some((OCTAHEDRAL_ROWS, OCTAHEDRAL_MODULUS)),
        Family::Icosahedral => Some((ICOSAHEDRAL_ROWS, ICOSAHEDRAL_MODULUS)),
        Family::Cyclic | Family::Dihedral => None,
    }
}

/// Admissible residues per exceptional family: tetrahedral needs `m` odd,
/// octahedral `gcd(m, 6) = 1`, icosahedral `gcd(m, 30) = 1`.
pub fn admissible_residues(family: Family) -> &'static [u64] {
    match family {
        Family::Tetrahedral => &[1, 3, 5],
        Family::Octahedral => &[1, 5, 7, 11],
        Family::Icosahedral => &[1, 7, 11, 13, 17, 19, 23, 29],
        Family::Cyclic | Family::Dihedral => &[],
    }
}

/// Star graph: `left ++ [-b] ++ right` as a chain, plus a `-2` branch vertex
/// (appended last) attached to the center.
fn star_graph(left: &[i64], b: u64, right: &[i64]) -> ResolutionGraph {
    let center = left.len();
    let mut weights: Vec<i64> = left.to_vec();
    weights.push(-(b as i64));
    weights.extend_from_slice(right);
    let branch = weights.len();
    weights.push(-2);
    let mut edges: Vec<(usize, usize, u32)> =
        (1..branch).map(|i| (i - 1, i, 1)).collect();
    edges.push((center, branch, 1));
    ResolutionGraph::new(true, weights, edges).expect("star construction cannot fail")
}

/// Cyclic member `A_{n,q}`.
pub fn cyclic(n: u64, q: u64) -> Result<CatalogEntry, CatalogError> {
    let expansion = hj::hj_expand(n, q)?;
    let graph = hj::cyclic_graph(n, q)?;
    Ok(CatalogEntry {
        family: Family::Cyclic,
        params: Params::Cyclic { n, q },
        derived_b: expansion.terms[0],
        graph,
    })
}

/// Dihedral member `D_{n,q}`: expansion `n/q = [b, b_1, ..., b_r]` drawn as
/// a `-2` leaf, the `-b` center, the chain `-b_1 ... -b_r`, and a `-2`
/// branch vertex last.
pub fn dihedral(n: u64, q: u64) -> Result<CatalogEntry, CatalogError> {
    if q <= 1 {
        return Err(CatalogError::InvalidDihedral { n, q });
    }
    let expansion = hj::hj_expand(n, q).map_err(|_| CatalogError::InvalidDihedral { n, q })?;
    let b = expansion.terms[0];
    let tail: Vec<i64> = expansion.terms[1..].iter().map(|&t| -(t as i64)).collect();
    // q > 1 forces at least two expansion terms.
    debug_assert!(!tail.is_empty());
    let graph = star_graph(&[-2], b, &tail);
    Ok(CatalogEntry {
        family: Family::Dihedral,
        params: Params::Dihedral { n, q },
        derived_b: b,
        graph,
    })
}

fn exceptional(family: Family, m: u64) -> Result<CatalogEntry, CatalogError> {
    if m == 0 {
        return Err(CatalogError::ZeroParameter);
    }
    let (rows, modulus) = family_rows(family).expect("exceptional family");
    let residue = m % modulus;
    let row = rows
        .iter()
        .find(|r| r.residue == residue)
        .ok_or(CatalogError::InvalidResidue { family, m, residue, modulus })?;
    let b = (m - residue) / modulus + 2;
    Ok(CatalogEntry {
        family,
        params: Params::Exceptional { m },
        graph: star_graph(row.left_arm, b, row.right_arm),
        derived_b: b,
    })
}

/// Tetrahedral member `T_m`, `m = 1, 3, 5 (mod 6)`.
pub fn tetrahedral(m: u64) -> Result<CatalogEntry, CatalogError> {
    exceptional(Family::Tetrahedral, m)
}

/// Octahedral member `O_m`, `gcd(m, 6) = 1`.
pub fn octahedral(m: u64) -> Result<CatalogEntry, CatalogError> {
    exceptional(Family::Octahedral, m)
}

/// Icosahedral member `I_m`, `gcd(m, 30) = 1`.
pub fn icosahedral(m: u64) -> Result<CatalogEntry, CatalogError> {
    exceptional(Family::Icosahedral, m)
}

/// Identifies a reference fundamental cycle: a table row for the exceptional
/// families, or the in-text chain patterns for the abelian ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableRow {
    Tetrahedral { residue: u64 },
    Octahedral { residue: u64 },
    Icosahedral { residue: u64 },
    /// All-ones cycle on the chain of `r` vertices of weight -2.
    Cyclic { length: usize },
    /// Cycle `(1, 2, ..., 2, 1; 1)` on the dihedral graph whose expansion is
    /// `r + 1` twos (type `(r + 2, r + 1)`).
    Dihedral { tail_len: usize },
}

/// The transcribed fundamental cycle of a `b = 2` row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpectedCycle {
    pub family: Family,
    pub residue: Option<u64>,
    pub cycle: Cycle,
}

pub fn expected_fundamental_cycle_b2(row: TableRow) -> Result<ExpectedCycle, CatalogError> {
    let from_row = |family: Family, residue: u64| -> Result<ExpectedCycle, CatalogError> {
        let (rows, _) = family_rows(family).expect("exceptional family");
        let row = rows
            .iter()
            .find(|r| r.residue == residue)
            .ok_or(CatalogError::UnknownRow { family, residue })?;
        let mut coeffs = row.cycle_chain_b2.to_vec();
        coeffs.push(row.cycle_branch_b2);
        Ok(ExpectedCycle {
            family,
            residue: Some(residue),
            cycle: Cycle::new(coeffs),
        })
    };
    match row {
        TableRow::Tetrahedral { residue } => from_row(Family::Tetrahedral, residue),
        TableRow::Octahedral { residue } => from_row(Family::Octahedral, residue),
        TableRow::Icosahedral { residue } => from_row(Family::Icosahedral, residue),
        TableRow::Cyclic { length } => Ok(ExpectedCycle {
            family: Family::Cyclic,
            residue: None,
            cycle: Cycle::new(vec![1; length]),
        }),
        TableRow::Dihedral { tail_len } => {
            // Leaf 1, center 2, tail 2...2 ending in 1, branch 1.
            let mut coeffs = vec![1, 2];
            coeffs.extend(std::iter::repeat(2).take(tail_len - 1));
            coeffs.push(1);
            coeffs.push(1);
            Ok(ExpectedCycle {
                family: Family::Dihedral,
                residue: None,
                cycle: Cycle::new(coeffs),
            })
        }
    }
}

/// All `(family, residue, b, m)` exceptional members with `2 <= b <= max_b`.
pub fn exceptional_members(max_b: u64) -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    for family in [Family::Tetrahedral, Family::Octahedral, Family::Icosahedral] {
        let (rows, modulus) = family_rows(family).expect("exceptional family");
        for row in rows {
            for b in 2..=max_b {
                let m = modulus * (b - 2) + row.residue;
                out.push(exceptional(family, m).expect("constructed from a valid row"));
            }
        }
    }
    out
}

/// All coprime cyclic parameter pairs with `n <= max_n`.
pub fn cyclic_parameters(max_n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        for q in 1..n {
            if num_integer::gcd(n, q) == 1 {
                out.push((n, q));
            }
        }
    }
    out
}

/// All coprime dihedral parameter pairs (`1 < q < n <= max_n`).
pub fn dihedral_parameters(max_n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for n in 3..=max_n {
        for q in 2..n {
            if num_integer::gcd(n, q) == 1 {
                out.push((n, q));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dihedral_d4_star() {
        // (3, 2) expands to [2, 2]: the D4 star of -2s.
        let entry = dihedral(3, 2).unwrap();
        assert_eq!(entry.derived_b, 2);
        assert_eq!(entry.graph.weights(), &[-2, -2, -2, -2]);
        let center_degree = entry.graph.neighbors(1).len();
        assert_eq!(center_degree, 3);
    }

    #[test]
    fn dihedral_5_2_and_5_3() {
        let entry = dihedral(5, 2).unwrap();
        // [3, 2]: center -3, leaf -2, tail (-2), branch -2.
        assert_eq!(entry.graph.weights(), &[-2, -3, -2, -2]);
        assert_eq!(entry.derived_b, 3);

        // 5/3 = [2, 3] (2 - 1/3): center -2, tail (-3).
        let entry = dihedral(5, 3).unwrap();
        assert_eq!(entry.graph.weights(), &[-2, -2, -3, -2]);
        assert_eq!(entry.derived_b, 2);
        assert_eq!(
            crate::hj::hj_evaluate(&[2, 3]).unwrap(),
            crate::rational::ratio(5, 3)
        );
    }

    #[test]
    fn dihedral_rejects_q_one() {
        assert!(dihedral(5, 1).is_err());
        assert!(dihedral(6, 4).is_err());
    }

    #[test]
    fn tetrahedral_m1_is_e6_shape() {
        let entry = tetrahedral(1).unwrap();
        assert_eq!(entry.derived_b, 2);
        assert_eq!(entry.graph.weights(), &[-2, -2, -2, -2, -2, -2]);
        assert_eq!(entry.graph.vertex_count(), 6);
        // Branch attached to the middle of the 5-chain.
        assert_eq!(entry.graph.neighbors(5), &[(2, 1)]);
    }

    #[test]
    fn octahedral_m1_is_e7_shape() {
        let entry = octahedral(1).unwrap();
        assert_eq!(entry.graph.vertex_count(), 7);
        assert_eq!(entry.graph.weights(), &[-2; 7]);
        assert_eq!(entry.graph.neighbors(6), &[(2, 1)]);
    }

    #[test]
    fn icosahedral_m29_star() {
        let entry = icosahedral(29).unwrap();
        assert_eq!(entry.derived_b, 2);
        assert_eq!(entry.graph.weights(), &[-3, -2, -5, -2]);
    }

    #[test]
    fn derived_b_from_m() {
        assert_eq!(tetrahedral(13).unwrap().derived_b, 4); // 13 = 6*2 + 1
        assert_eq!(octahedral(29).unwrap().derived_b, 4); // 29 = 12*2 + 5
        assert_eq!(icosahedral(61).unwrap().derived_b, 4); // 61 = 30*2 + 1
        assert_eq!(icosahedral(37).unwrap().derived_b, 3); // 37 = 30*1 + 7
    }

    #[test]
    fn rejects_bad_residues() {
        assert!(matches!(tetrahedral(2), Err(CatalogError::InvalidResidue { .. })));
        assert!(matches!(octahedral(3), Err(CatalogError::InvalidResidue { .. })));
        assert!(matches!(icosahedral(25), Err(CatalogError::InvalidResidue { .. })));
        assert!(matches!(tetrahedral(0), Err(CatalogError::ZeroParameter)));
    }

    #[test]
    fn expected_cycles() {
        let e = expected_fundamental_cycle_b2(TableRow::Icosahedral { residue: 1 }).unwrap();
        assert_eq!(e.cycle.coefficients(), &[2, 4, 6, 5, 4, 3, 2, 3]);
        let e = expected_fundamental_cycle_b2(TableRow::Tetrahedral { residue: 1 }).unwrap();
        assert_eq!(e.cycle.coefficients(), &[1, 2, 3, 2, 1, 2]);
        let e = expected_fundamental_cycle_b2(TableRow::Cyclic { length: 4 }).unwrap();
        assert_eq!(e.cycle.coefficients(), &[1, 1, 1, 1]);
        let e = expected_fundamental_cycle_b2(TableRow::Dihedral { tail_len: 1 }).unwrap();
        assert_eq!(e.cycle.coefficients(), &[1, 2, 1, 1]);
        let e = expected_fundamental_cycle_b2(TableRow::Dihedral { tail_len: 3 }).unwrap();
        assert_eq!(e.cycle.coefficients(), &[1, 2, 2, 2, 1, 1]);
        assert!(expected_fundamental_cycle_b2(TableRow::Octahedral { residue: 3 }).is_err());
    }

    #[test]
    fn all_catalog_graphs_validate_clean() {
        for (n, q) in cyclic_parameters(40) {
            assert_eq!(cyclic(n, q).unwrap().graph.validate(), Vec::new());
        }
        for (n, q) in dihedral_parameters(40) {
            assert_eq!(dihedral(n, q).unwrap().graph.validate(), Vec::new());
        }
        for entry in exceptional_members(10) {
            assert_eq!(entry.graph.validate(), Vec::new(), "{:?}", entry.params);
        }
    }

    #[test]
    fn exceptional_member_count() {
        // 15 rows, b = 2..=10.
        assert_eq!(exceptional_members(10).len(), 15 * 9);
    }
}
