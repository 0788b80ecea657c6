//! Newton-polygon computations on the smooth plane germ.
//!
//! A monomial boundary is `lambda` times the curve cut out by an ideal
//! spanned by monomials `x^a y^b`. For a weight pair `w = (p_1, p_2)` the
//! weighted blowup divisor `E_w` has log discrepancy
//!
//! ```text
//!   g(w) = p_1 + p_2 - lambda * min_(a,b) (a p_1 + b p_2),
//! ```
//!
//! and the mld over the origin is the infimum of `g` over integer weights
//! `w >= (1, 1)`. Writing the min inside as a max of linear pieces makes `g`
//! a maximum of homogeneous linear functions, hence convex and positively
//! homogeneous. That gives an exact search:
//!
//! * the infimum is `-infinity` iff some direction in the closed positive
//!   quadrant has negative value; the directional minimum of a convex
//!   piecewise-linear function on the direction simplex is attained at an
//!   axis or at a tie of two pieces, so finitely many rays decide it;
//! * otherwise `g >= mu * (p_1 + p_2)` with `mu` the directional minimum,
//!   so once `mu > 0` every weight beyond `g(1,1) / mu` is beaten by
//!   `(1, 1)` and a finite box scan is exact; for `mu = 0` the minimum is
//!   attained within the initial box (flat rays enter it after at most
//!   `den(lambda)` steps).
//!
//! The scan asserts the box certificate - the box minimum does not exceed
//! the minimum over the far boundary rows - on every successful run.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::discrepancy::LcValue;
use crate::rational::{rat, ratio, Rational};

const MAX_EXPONENT: u32 = 1 << 20;
const MAX_LAMBDA_MAGNITUDE: u64 = 1 << 31;
const MAX_BOX: u64 = 1 << 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MonomialError {
    #[error("exponent list must be nonempty")]
    EmptyExponents,
    #[error("lambda must be nonnegative")]
    NegativeLambda,
    #[error("ideal contains the unit monomial (0, 0)")]
    DegenerateIdeal,
    #[error("parameter too large: {0}")]
    ParameterTooLarge(&'static str),
    #[error("search box exceeded the configured limit")]
    SearchBudgetExceeded,
}

/// `lambda` times the curve spanned by the given monomial exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialBoundary {
    lambda: Rational,
    exponents: Vec<(u32, u32)>,
}

impl MonomialBoundary {
    pub fn new(lambda: Rational, exponents: Vec<(u32, u32)>) -> Result<Self, MonomialError> {
        if exponents.is_empty() {
            return Err(MonomialError::EmptyExponents);
        }
        if lambda.is_negative() {
            return Err(MonomialError::NegativeLambda);
        }
        if lambda.numer() > &BigInt::from(MAX_LAMBDA_MAGNITUDE)
            || lambda.denom() > &BigInt::from(MAX_LAMBDA_MAGNITUDE)
        {
            return Err(MonomialError::ParameterTooLarge("lambda"));
        }
        if exponents.iter().any(|&(a, b)| a > MAX_EXPONENT || b > MAX_EXPONENT) {
            return Err(MonomialError::ParameterTooLarge("exponent"));
        }
        let mut exponents = exponents;
        exponents.sort_unstable();
        exponents.dedup();
        Ok(MonomialBoundary { lambda, exponents })
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn exponents(&self) -> &[(u32, u32)] {
        &self.exponents
    }

    /// `min over exponents (a, b) of a * p_1 + b * p_2`.
    pub fn weighted_order(&self, weights: (u64, u64)) -> u128 {
        weighted_order(weights, &self.exponents)
    }
}

pub fn weighted_order(weights: (u64, u64), exponents: &[(u32, u32)]) -> u128 {
    exponents
        .iter()
        .map(|&(a, b)| u128::from(a) * u128::from(weights.0) + u128::from(b) * u128::from(weights.1))
        .min()
        .expect("exponent list is nonempty")
}

/// Linear pieces of `den(lambda) * g`: coefficients of `p_1` and `p_2`.
struct Pieces {
    sa: Vec<i128>,
    sb: Vec<i128>,
    den: i128,
}

impl Pieces {
    fn build(mb: &MonomialBoundary) -> Pieces {
        let den = mb
            .lambda
            .denom()
            .to_i128()
            .expect("denominator bounded at construction");
        let num = mb
            .lambda
            .numer()
            .to_i128()
            .expect("numerator bounded at construction");
        let sa = mb
            .exponents
            .iter()
            .map(|&(a, _)| den - num * i128::from(a))
            .collect();
        let sb = mb
            .exponents
            .iter()
            .map(|&(_, b)| den - num * i128::from(b))
            .collect();
        Pieces { sa, sb, den }
    }

    /// `den(lambda) * g(p)`.
    fn eval(&self, p1: i128, p2: i128) -> i128 {
        self.sa
            .iter()
            .zip(&self.sb)
            .map(|(&a, &b)| a * p1 + b * p2)
            .max()
            .expect("at least one piece")
    }

    /// Integer directions where the directional minimum can occur: the two
    /// axes and every positive pairwise tie.
    fn candidate_directions(&self) -> Vec<(i128, i128)> {
        let mut dirs = vec![(1i128, 0i128), (0, 1)];
        let k = self.sa.len();
        for i in 0..k {
            for j in i + 1..k {
                let u = self.sb[j] - self.sb[i];
                let v = self.sa[i] - self.sa[j];
                if u == 0 || v == 0 || (u > 0) != (v > 0) {
                    continue;
                }
                let (u, v) = (u.abs(), v.abs());
                let g = gcd_i128(u, v);
                let d = (u / g, v / g);
                if !dirs.contains(&d) {
                    dirs.push(d);
                }
            }
        }
        dirs
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd_i128(b, a % b)
    }
}

/// Minimum of the convex sequence `p2 -> eval(p1, p2)` over `1..=hi`.
fn inner_min(pieces: &Pieces, p1: i128, hi: i128) -> i128 {
    let (mut lo, mut hi) = (1i128, hi);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pieces.eval(p1, mid) <= pieces.eval(p1, mid + 1) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    pieces.eval(p1, lo)
}

/// Exact infimum of `p_1 + p_2 - lambda * weighted_order(p)` over integer
/// weights `p >= (1, 1)`; `NotLc` when the infimum is `-infinity`, detected
/// by a quadrant ray with negative linear growth.
pub fn monomial_mld(mb: &MonomialBoundary) -> Result<LcValue, MonomialError> {
    let pieces = Pieces::build(mb);
    let den_rat = Rational::from_integer(BigInt::from(pieces.den));

    // Directional minimum over the simplex, normalized by p_1 + p_2.
    let mut mu: Option<Rational> = None;
    for (d1, d2) in pieces.candidate_directions() {
        let value = Rational::new(
            BigInt::from(pieces.eval(d1, d2)),
            BigInt::from(pieces.den * (d1 + d2)),
        );
        if mu.as_ref().is_none_or(|m| &value < m) {
            mu = Some(value);
        }
    }
    let mu = mu.expect("at least the axis directions");
    if mu.is_negative() {
        return Ok(LcValue::NotLc);
    }

    let max_exp_sum = mb
        .exponents
        .iter()
        .map(|&(a, b)| u64::from(a) + u64::from(b))
        .max()
        .unwrap()
        .max(1);
    let b0 = 4 * max_exp_sum * (pieces.den as u64);
    let needed = if mu.is_positive() {
        // Any weight with g below g(1,1) satisfies p_1 + p_2 <= g(1,1)/mu.
        let g11 = Rational::new(BigInt::from(pieces.eval(1, 1)), BigInt::from(pieces.den));
        let bound = (g11 / mu).ceil().to_integer();
        bound.to_u64().ok_or(MonomialError::SearchBudgetExceeded)?
    } else {
        // Flat directions enter the initial box after at most den(lambda)
        // steps, so it already contains a global minimizer.
        b0
    };
    let mut side = b0.max(2);
    while side < needed {
        side = side.checked_mul(2).ok_or(MonomialError::SearchBudgetExceeded)?;
        if side > MAX_BOX {
            return Err(MonomialError::SearchBudgetExceeded);
        }
    }
    if side > MAX_BOX {
        return Err(MonomialError::SearchBudgetExceeded);
    }

    let side = side as i128;
    let mut best = i128::MAX;
    for p1 in 1..=side {
        best = best.min(inner_min(&pieces, p1, side));
    }
    // Box certificate: the box minimum is at most the far-boundary minimum.
    let far = {
        let mut far = inner_min(&pieces, side, side);
        let mut lo = 1i128;
        let mut hi = side;
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if pieces.eval(mid, side) <= pieces.eval(mid + 1, side) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        far = far.min(pieces.eval(lo, side));
        far
    };
    assert!(best <= far, "box certificate violated");

    Ok(LcValue::Value(
        Rational::from_integer(BigInt::from(best)) / den_rat,
    ))
}

/// The lc threshold of the monomial ideal itself: the infimum over weight
/// directions of `(p_1 + p_2) / weighted_order(p)`. For a convex-dual
/// reason mirroring [`monomial_mld`], the infimum is attained on an axis or
/// on a pairwise tie direction (the normals of the Newton polygon).
pub fn monomial_lct(exponents: &[(u32, u32)]) -> Result<Rational, MonomialError> {
    if exponents.is_empty() {
        return Err(MonomialError::EmptyExponents);
    }
    if exponents.contains(&(0, 0)) {
        return Err(MonomialError::DegenerateIdeal);
    }
    if exponents.iter().any(|&(a, b)| a > MAX_EXPONENT || b > MAX_EXPONENT) {
        return Err(MonomialError::ParameterTooLarge("exponent"));
    }

    let mut dirs: Vec<(u64, u64)> = vec![(1, 0), (0, 1)];
    for (i, &(a_i, b_i)) in exponents.iter().enumerate() {
        for &(a_j, b_j) in exponents.iter().skip(i + 1) {
            let u = i64::from(b_i) - i64::from(b_j);
            let v = i64::from(a_j) - i64::from(a_i);
            if u == 0 || v == 0 || (u > 0) != (v > 0) {
                continue;
            }
            let (u, v) = (u.unsigned_abs(), v.unsigned_abs());
            let g = num_integer::gcd(u, v);
            let d = (u / g, v / g);
            if !dirs.contains(&d) {
                dirs.push(d);
            }
        }
    }

    let mut best: Option<Rational> = None;
    for (d1, d2) in dirs {
        let order = weighted_order((d1, d2), exponents);
        if order == 0 {
            continue;
        }
        let value = Rational::new(
            BigInt::from(d1 + d2),
            BigInt::from(order),
        );
        if best.as_ref().is_none_or(|b| &value < b) {
            best = Some(value);
        }
    }
    best.ok_or(MonomialError::DegenerateIdeal)
}

/// Weighted-blowup arithmetic for the family `lambda = (2m-1)/m^2`,
/// ideal `(x^m, y^(m+1))`: the mld over the origin is `1/m`, realized by the
/// blowup with weights `(m+1, m)`, and since every curve through the origin
/// has order at least `m` along that divisor, adding `t` times such a curve
/// breaks log canonicity as soon as `t > 1/m^2`.
#[derive(Debug, Clone, Serialize)]
pub struct SharpnessReport {
    pub m: u64,
    pub mld: LcValue,
    pub a_e: String,
    pub certified_bound: String,
    pub mld_ok: bool,
    pub a_e_ok: bool,
    pub order_bound_ok: bool,
}

impl SharpnessReport {
    pub fn all_ok(&self) -> bool {
        self.mld_ok && self.a_e_ok && self.order_bound_ok
    }
}

pub fn example_sharpness_check(m: u64) -> Result<SharpnessReport, MonomialError> {
    assert!(m >= 1, "family parameter must be at least 1");
    if m >= u64::from(MAX_EXPONENT) {
        return Err(MonomialError::ParameterTooLarge("m"));
    }
    let lambda = ratio(2 * m as i64 - 1, (m * m) as i64);
    let exponents = vec![(m as u32, 0u32), (0u32, m as u32 + 1)];
    let mb = MonomialBoundary::new(lambda.clone(), exponents)?;

    let expected = ratio(1, m as i64);
    let mld = monomial_mld(&mb)?;
    let mld_ok = mld == LcValue::Value(expected.clone());

    // Log discrepancy of the weighted blowup with wt(x, y) = (m + 1, m).
    let order = mb.weighted_order((m + 1, m));
    let a_e = rat((2 * m + 1) as i64) - lambda * Rational::from_integer(BigInt::from(order));
    let a_e_ok = a_e == expected;

    // Every curve through the origin has order >= min weight = m along E,
    // so lc fails for t > a_e / m; with a_e = 1/m that threshold is 1/m^2.
    let certified_bound = a_e.clone() / rat(m as i64);
    let order_bound_ok = certified_bound == ratio(1, (m * m) as i64);

    Ok(SharpnessReport {
        m,
        mld,
        a_e: crate::rational::format_rational(&a_e),
        certified_bound: crate::rational::format_rational(&certified_bound),
        mld_ok,
        a_e_ok,
        order_bound_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mb(lambda: Rational, exps: &[(u32, u32)]) -> MonomialBoundary {
        MonomialBoundary::new(lambda, exps.to_vec()).unwrap()
    }

    #[test]
    fn weighted_order_examples() {
        let m = 4u64;
        let b = mb(ratio(7, 16), &[(m as u32, 0), (0, m as u32 + 1)]);
        assert_eq!(b.weighted_order((m + 1, m)), u128::from(m * (m + 1)));

        let b = mb(rat(0), &[(2, 0), (0, 3)]);
        assert_eq!(b.weighted_order((1, 1)), 2);
        assert_eq!(b.weighted_order((3, 2)), 6);
    }

    #[test]
    fn mld_examples() {
        // m = 2 family.
        let b = mb(ratio(3, 4), &[(2, 0), (0, 3)]);
        assert_eq!(monomial_mld(&b).unwrap(), LcValue::Value(ratio(1, 2)));

        // lambda = 0: smooth point.
        let b = mb(rat(0), &[(2, 0), (0, 3)]);
        assert_eq!(monomial_mld(&b).unwrap(), LcValue::Value(rat(2)));

        // m = 3 family.
        let b = mb(ratio(5, 9), &[(3, 0), (0, 4)]);
        assert_eq!(monomial_mld(&b).unwrap(), LcValue::Value(ratio(1, 3)));
    }

    #[test]
    fn mld_not_lc_detection() {
        // lambda = 2 on a smooth curve x = 0: g = (1 - 2)p1 + p2 decays
        // along (1, 0).
        let b = mb(rat(2), &[(1, 0)]);
        assert_eq!(monomial_mld(&b).unwrap(), LcValue::NotLc);

        // Far above the lct 5/6 of (x^2, y^3).
        let b = mb(rat(1), &[(2, 0), (0, 3)]);
        assert_eq!(monomial_mld(&b).unwrap(), LcValue::NotLc);
    }

    #[test]
    fn mld_at_exact_threshold() {
        // lambda = lct = 5/6 of (x^2, y^3): infimum 0, attained.
        let b = mb(ratio(5, 6), &[(2, 0), (0, 3)]);
        assert_eq!(monomial_mld(&b).unwrap(), LcValue::Value(rat(0)));

        // lambda = 1 on the smooth curve: flat along (1, 0), infimum 1.
        let b = mb(rat(1), &[(1, 0)]);
        assert_eq!(monomial_mld(&b).unwrap(), LcValue::Value(rat(1)));
    }

    #[test]
    fn lct_examples() {
        assert_eq!(monomial_lct(&[(2, 0), (0, 3)]).unwrap(), ratio(5, 6));
        assert_eq!(monomial_lct(&[(1, 0)]).unwrap(), rat(1));
        assert_eq!(monomial_lct(&[(4, 0), (0, 5)]).unwrap(), ratio(9, 20));
        assert_eq!(monomial_lct(&[(1, 0), (0, 1)]).unwrap(), rat(2));
        assert_eq!(monomial_lct(&[(1, 1)]).unwrap(), rat(1));
        assert_eq!(
            monomial_lct(&[(0, 0), (1, 0)]),
            Err(MonomialError::DegenerateIdeal)
        );
    }

    #[test]
    fn lct_brute_force_agreement() {
        // Reference: scan all coprime weight pairs up to 50 (axes included).
        fn brute(exponents: &[(u32, u32)]) -> Rational {
            let mut best: Option<Rational> = None;
            for p1 in 0..=50u64 {
                for p2 in 0..=50u64 {
                    if p1 == 0 && p2 == 0 {
                        continue;
                    }
                    if num_integer::gcd(p1, p2) != 1 {
                        continue;
                    }
                    let order = weighted_order((p1, p2), exponents);
                    if order == 0 {
                        continue;
                    }
                    let v = Rational::new(BigInt::from(p1 + p2), BigInt::from(order));
                    if best.as_ref().is_none_or(|b| &v < b) {
                        best = Some(v);
                    }
                }
            }
            best.unwrap()
        }

        let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0003);
        for _ in 0..30 {
            let k = rng.gen_range(1..=5);
            let exponents: Vec<(u32, u32)> = (0..k)
                .map(|_| (rng.gen_range(0..=12), rng.gen_range(0..=12)))
                .filter(|&(a, b)| (a, b) != (0, 0))
                .collect();
            if exponents.is_empty() {
                continue;
            }
            assert_eq!(
                monomial_lct(&exponents).unwrap(),
                brute(&exponents),
                "exponents {exponents:?}"
            );
        }
    }

    #[test]
    fn mld_nonincreasing_in_lambda() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0004);
        for _ in 0..12 {
            let k = rng.gen_range(1..=4);
            let exponents: Vec<(u32, u32)> = (0..k)
                .map(|_| (rng.gen_range(0..=8), rng.gen_range(0..=8)))
                .collect();
            let mut last: Option<Rational> = None;
            let mut went_not_lc = false;
            for step in 0..10 {
                let lambda = ratio(step, 7);
                let b = MonomialBoundary::new(lambda, exponents.clone()).unwrap();
                match monomial_mld(&b).unwrap() {
                    LcValue::NotLc => went_not_lc = true,
                    LcValue::Value(v) => {
                        assert!(!went_not_lc, "finite mld after NotLc at smaller lambda");
                        if let Some(prev) = &last {
                            assert!(&v <= prev, "mld increased with lambda");
                        }
                        last = Some(v);
                    }
                }
            }
        }
    }

    #[test]
    fn sharpness_family() {
        for m in 1..=8 {
            let report = example_sharpness_check(m).unwrap();
            assert!(report.all_ok(), "m = {m}: {report:?}");
            assert_eq!(report.mld, LcValue::Value(ratio(1, m as i64)));
        }
        let r3 = example_sharpness_check(3).unwrap();
        assert_eq!(r3.a_e, "1/3");
        assert_eq!(r3.certified_bound, "1/9");
    }
}
