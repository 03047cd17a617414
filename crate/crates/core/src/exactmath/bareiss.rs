//! Fraction-free (Bareiss) elimination over `Z` and `Z[x]`.
//!
//! Rational inputs are scaled by the lcm of their denominators first, so all
//! intermediate values stay integral and every division is exact.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::matrix::Matrix;
use super::poly::Poly;
use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Integral domain with exact division, enough for Bareiss.
trait ExactRing: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn mul(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn div_exact(&self, other: &Self) -> Self;
}

impl ExactRing for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, other: &Self) -> Self {
        debug_assert!(Zero::is_zero(&(self % other)), "inexact Bareiss division");
        self / other
    }
}

impl ExactRing for Poly<BigInt> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, other: &Self) -> Self {
        Poly::div_exact(self, other).expect("inexact Bareiss division")
    }
}

fn bareiss_det<R: ExactRing>(mut m: Vec<Vec<R>>) -> R {
    let n = m.len();
    let mut negate = false;
    let mut prev = R::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return R::zero();
            };
            m.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = v.div_exact(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

fn integral_rows(m: &Matrix<Rational>) -> (BigInt, Vec<Vec<BigInt>>) {
    let l = m.denominators_lcm();
    let rows = m
        .to_rows()
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|e| (e * Rational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect();
    (l, rows)
}

/// Exact determinant of a rational matrix.
pub fn det(m: &Matrix<Rational>) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::Dimension("determinant of a non-square matrix".into()));
    }
    let n = m.rows();
    let (l, rows) = integral_rows(m);
    let d = bareiss_det(rows);
    Ok(Rational::new(d, l.pow(n as u32)))
}

/// Characteristic polynomial `det(xI - m)`, monic of degree `rows(m)`.
pub fn char_poly(m: &Matrix<Rational>) -> Result<Poly<Rational>> {
    if !m.is_square() {
        return Err(Error::Dimension("characteristic polynomial of a non-square matrix".into()));
    }
    let n = m.rows();
    let (l, rows) = integral_rows(m);
    let shifted: Vec<Vec<Poly<BigInt>>> = rows
        .into_iter()
        .enumerate()
        .map(|(i, row)| {
            row.into_iter()
                .enumerate()
                .map(|(j, e)| {
                    if i == j {
                        Poly::new(vec![-e, <BigInt as One>::one()])
                    } else {
                        Poly::constant(-e)
                    }
                })
                .collect()
        })
        .collect();
    let scaled = bareiss_det(shifted);
    // det(xI - m) = l^{-n} det(l x I - l m)
    let ln = l.pow(n as u32);
    let coeffs = (0..=n)
        .map(|k| Rational::new(scaled.coeff(k) * l.pow(k as u32), ln.clone()))
        .collect();
    Ok(Poly::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    type Q = Matrix<Rational>;

    #[test]
    fn char_poly_examples() {
        let cat = Q::from_i64_rows(&[&[2, 1], &[1, 1]]);
        assert_eq!(char_poly(&cat).unwrap(), Poly::from_i64(&[1, -3, 1]));
        assert_eq!(char_poly(&Q::identity(2)).unwrap(), Poly::from_i64(&[1, -2, 1]));
        let d3 = Q::from_i64_rows(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 1]]);
        assert_eq!(char_poly(&d3).unwrap(), Poly::from_i64(&[-1, 0, -1, 1]));
    }

    #[test]
    fn char_poly_rational_entries() {
        // [[1/2, 1], [0, -1/3]] has eigenvalues 1/2 and -1/3
        let m = Q::from_rows(vec![vec![frac(1, 2), int(1)], vec![int(0), frac(-1, 3)]]).unwrap();
        let expect = Poly::from_roots(&[frac(1, 2), frac(-1, 3)]);
        assert_eq!(char_poly(&m).unwrap(), expect);
    }

    #[test]
    fn zero_pivot_needs_swap() {
        let m = Q::from_i64_rows(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        assert_eq!(det(&m).unwrap(), m.det().unwrap());
        assert_eq!(det(&m).unwrap(), int(-2));
    }

    #[test]
    fn non_square_rejected() {
        let m = Q::from_i64_rows(&[&[1, 2]]);
        assert!(matches!(char_poly(&m), Err(Error::Dimension(_))));
        assert!(matches!(det(&m), Err(Error::Dimension(_))));
    }
}
