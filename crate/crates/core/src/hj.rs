//! Hirzebruch-Jung continued fractions and cyclic quotient chains.
//!
//! `n/q = [b_1, ..., b_r] = b_1 - 1/(b_2 - 1/(... - 1/b_r))` with every
//! `b_i >= 2`; the terms are the negated self-intersections along the
//! exceptional chain of the cyclic quotient singularity of type `(n, q)`.

use num_traits::Zero;
use thiserror::Error;

use crate::graph::ResolutionGraph;
use crate::rational::{rat, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HjError {
    #[error("invalid parameters (n, q) = ({n}, {q}): need 0 < q < n and gcd(n, q) = 1")]
    InvalidParameters { n: u64, q: u64 },
    #[error("continued fraction tail evaluates to zero")]
    DivisionByZero,
    #[error("empty term list")]
    EmptyTerms,
}

/// Expansion of `n/q` with all terms at least 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HjExpansion {
    pub n: u64,
    pub q: u64,
    pub terms: Vec<u64>,
}

/// Expands `n/q` by the ceiling recurrence `b = ceil(n/q)`,
/// `(n, q) <- (q, b q - n)`, which forces every term to be at least 2 and
/// terminates because `n` strictly decreases.
pub fn hj_expand(n: u64, q: u64) -> Result<HjExpansion, HjError> {
    if q == 0 || q >= n || gcd(n, q) != 1 {
        return Err(HjError::InvalidParameters { n, q });
    }
    let (orig_n, orig_q) = (n, q);
    let mut terms = Vec::new();
    let (mut n, mut q) = (n, q);
    while q > 0 {
        let b = n.div_ceil(q);
        terms.push(b);
        let next_q = b * q - n;
        n = q;
        q = next_q;
    }
    Ok(HjExpansion {
        n: orig_n,
        q: orig_q,
        terms,
    })
}

/// Evaluates `[b_1, ..., b_r]` back to an exact rational. Terms may be
/// arbitrary integers; an intermediate zero tail is an error.
pub fn hj_evaluate(terms: &[i64]) -> Result<Rational, HjError> {
    if terms.is_empty() {
        return Err(HjError::EmptyTerms);
    }
    let mut acc = rat(*terms.last().unwrap());
    for &b in terms.iter().rev().skip(1) {
        if acc.is_zero() {
            return Err(HjError::DivisionByZero);
        }
        acc = rat(b) - acc.recip();
    }
    Ok(acc)
}

/// The minimal-resolution chain of the cyclic quotient singularity of type
/// `(n, q)`: vertices weighted `-b_1, ..., -b_r` in expansion order.
pub fn cyclic_graph(n: u64, q: u64) -> Result<ResolutionGraph, HjError> {
    let expansion = hj_expand(n, q)?;
    let weights: Vec<i64> = expansion.terms.iter().map(|&b| -(b as i64)).collect();
    Ok(ResolutionGraph::chain(true, &weights).expect("chain construction cannot fail"))
}

fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

impl HjExpansion {
    /// Re-evaluates the stored terms; equals `n/q` by construction.
    pub fn value(&self) -> Rational {
        let terms: Vec<i64> = self.terms.iter().map(|&b| b as i64).collect();
        hj_evaluate(&terms).expect("terms of a valid expansion never hit a zero tail")
    }
}
