//! Dense matrices of exact rationals: linear solving and definiteness.
//!
//! The solver and the definiteness test run fraction-free (Bareiss) after
//! clearing denominators, so intermediate values are minors of an integer
//! matrix and never grow past determinant size.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: matrix is {rows}x{cols}, vector has length {len}")]
    DimensionMismatch { rows: usize, cols: usize, len: usize },
}

/// Rectangular matrix of rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from rows; panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        RationalMatrix {
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    /// Convenience constructor from integer rows, for tests and literals.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| crate::rational::rat(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        assert!(r < self.rows && c < self.cols, "index out of range");
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Matrix-vector product, exact.
    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, MatrixError> {
        if v.len() != self.cols {
            return Err(MatrixError::DimensionMismatch {
                rows: self.rows,
                cols: self.cols,
                len: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect())
    }
}

/// Clears denominators per row of `[matrix | rhs]`, returning integer rows.
/// Row scaling leaves the solution set unchanged.
fn integer_augmented(
    matrix: &RationalMatrix,
    rhs: &[Rational],
) -> Vec<Vec<BigInt>> {
    let n = matrix.rows();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut scale = BigInt::one();
        for j in 0..n {
            scale = scale.lcm(matrix.get(i, j).denom());
        }
        scale = scale.lcm(rhs[i].denom());
        let mut row: Vec<BigInt> = (0..n)
            .map(|j| {
                let e = matrix.get(i, j);
                e.numer() * (&scale / e.denom())
            })
            .collect();
        row.push(rhs[i].numer() * (&scale / rhs[i].denom()));
        out.push(row);
    }
    out
}

/// Solves `matrix * x = rhs` exactly.
///
/// Fraction-free elimination with partial pivoting; fails with
/// [`MatrixError::SingularMatrix`] when the determinant is zero.
pub fn solve_linear_system(
    matrix: &RationalMatrix,
    rhs: &[Rational],
) -> Result<Vec<Rational>, MatrixError> {
    if !matrix.is_square() {
        return Err(MatrixError::NotSquare {
            rows: matrix.rows(),
            cols: matrix.cols(),
        });
    }
    let n = matrix.rows();
    if rhs.len() != n {
        return Err(MatrixError::DimensionMismatch {
            rows: n,
            cols: n,
            len: rhs.len(),
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }

    let mut m = integer_augmented(matrix, rhs);
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot_row = (k..n).find(|&r| !m[r][k].is_zero());
        let Some(pivot_row) = pivot_row else {
            return Err(MatrixError::SingularMatrix);
        };
        m.swap(k, pivot_row);
        for i in k + 1..n {
            if m[i][k].is_zero() && m[k][k].is_one() && prev.is_one() {
                continue;
            }
            for j in k + 1..=n {
                let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                debug_assert!((&num % &prev).is_zero());
                m[i][j] = num / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }

    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rational::from_integer(m[i][n].clone());
        for j in i + 1..n {
            acc -= Rational::from_integer(m[i][j].clone()) * &x[j];
        }
        x[i] = acc / Rational::from_integer(m[i][i].clone());
    }
    Ok(x)
}

/// Exact negative-definiteness test by Sylvester's criterion: the leading
/// principal minor of order `k` must have sign `(-1)^k` for every `k`.
///
/// Rejects non-symmetric input rather than symmetrizing it.
pub fn is_negative_definite(matrix: &RationalMatrix) -> Result<bool, MatrixError> {
    if !matrix.is_symmetric() {
        return Err(MatrixError::NotSymmetric);
    }
    let n = matrix.rows();
    if n == 0 {
        return Ok(true);
    }

    // One global scale keeps the matrix symmetric; minors pick up a positive
    // factor D^k, so their signs are unchanged.
    let mut scale = BigInt::one();
    for e in &matrix.entries {
        scale = scale.lcm(e.denom());
    }
    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let e = matrix.get(i, j);
                    e.numer() * (&scale / e.denom())
                })
                .collect()
        })
        .collect();

    // Bareiss without pivoting: after step k-1 the diagonal entry m[k][k]
    // equals the leading principal minor of order k+1.
    let mut prev = BigInt::one();
    for k in 0..n {
        let expected_negative = k % 2 == 0;
        if m[k][k].is_zero() || (m[k][k].is_negative() != expected_negative) {
            return Ok(false);
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                debug_assert!((&num % &prev).is_zero());
                m[i][j] = num / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn solve_1x1() {
        let m = RationalMatrix::from_int_rows(&[&[-2]]);
        assert_eq!(solve_linear_system(&m, &[rat(0)]).unwrap(), vec![rat(0)]);
    }

    #[test]
    fn solve_2x2_chain() {
        let m = RationalMatrix::from_int_rows(&[&[-2, 1], &[1, -2]]);
        let x = solve_linear_system(&m, &[rat(0), rat(-1)]).unwrap();
        assert_eq!(x, vec![ratio(1, 3), ratio(2, 3)]);
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let m = RationalMatrix::identity(4);
        let rhs = vec![ratio(1, 2), rat(-3), rat(0), ratio(7, 5)];
        assert_eq!(solve_linear_system(&m, &rhs).unwrap(), rhs);
    }

    #[test]
    fn solve_rejects_singular() {
        let m = RationalMatrix::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(
            solve_linear_system(&m, &[rat(1), rat(2)]),
            Err(MatrixError::SingularMatrix)
        );
    }

    #[test]
    fn solve_needs_pivoting() {
        let m = RationalMatrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        let x = solve_linear_system(&m, &[rat(5), rat(7)]).unwrap();
        assert_eq!(x, vec![rat(7), rat(5)]);
    }

    #[test]
    fn negative_definite_examples() {
        let m1 = RationalMatrix::from_int_rows(&[&[-2]]);
        assert_eq!(is_negative_definite(&m1), Ok(true));
        // Minors -2 and 3.
        let m2 = RationalMatrix::from_int_rows(&[&[-2, 1], &[1, -2]]);
        assert_eq!(is_negative_definite(&m2), Ok(true));
        // Second minor 1 - 4 = -3 < 0.
        let m3 = RationalMatrix::from_int_rows(&[&[-1, 2], &[2, -1]]);
        assert_eq!(is_negative_definite(&m3), Ok(false));
    }

    #[test]
    fn negative_definite_rejects_asymmetric() {
        let m = RationalMatrix::from_int_rows(&[&[-2, 1], &[0, -2]]);
        assert_eq!(is_negative_definite(&m), Err(MatrixError::NotSymmetric));
        let rect = RationalMatrix::from_int_rows(&[&[-2, 1]]);
        assert_eq!(is_negative_definite(&rect), Err(MatrixError::NotSymmetric));
    }

    #[test]
    fn negative_definite_zero_minor() {
        // Affine D4-tilde star: determinant 0.
        let m = RationalMatrix::from_int_rows(&[
            &[-2, 1, 1, 1, 1],
            &[1, -2, 0, 0, 0],
            &[1, 0, -2, 0, 0],
            &[1, 0, 0, -2, 0],
            &[1, 0, 0, 0, -2],
        ]);
        assert_eq!(is_negative_definite(&m), Ok(false));
    }

    #[test]
    fn negative_definite_rational_entries() {
        let m = RationalMatrix::from_rows(vec![
            vec![ratio(-1, 2), ratio(1, 3)],
            vec![ratio(1, 3), ratio(-1, 2)],
        ]);
        assert_eq!(is_negative_definite(&m), Ok(true));
        let m = RationalMatrix::from_rows(vec![
            vec![ratio(-1, 5), ratio(1, 2)],
            vec![ratio(1, 2), ratio(-1, 5)],
        ]);
        assert_eq!(is_negative_definite(&m), Ok(false));
    }

    // Solve composed with multiplication returns the rhs exactly, on 200
    // seeded random nonsingular systems up to 10x10.
    #[test]
    fn solve_roundtrip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0001);
        let mut checked = 0;
        while checked < 200 {
            let n = rng.gen_range(1..=10);
            let m = RationalMatrix::from_rows(
                (0..n)
                    .map(|_| {
                        (0..n)
                            .map(|_| ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4)))
                            .collect()
                    })
                    .collect(),
            );
            let rhs: Vec<_> = (0..n)
                .map(|_| ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4)))
                .collect();
            match solve_linear_system(&m, &rhs) {
                Ok(x) => {
                    assert_eq!(m.mul_vec(&x).unwrap(), rhs);
                    checked += 1;
                }
                Err(MatrixError::SingularMatrix) => continue,
                Err(e) => panic!("unexpected error {e}"),
            }
        }
    }
}
