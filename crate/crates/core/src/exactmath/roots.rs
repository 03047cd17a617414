//! Exact root-location tests over the rationals.
//!
//! The unit-circle test reduces to real-root counting: any root on the circle
//! is shared by `p` and its reciprocal, and the palindromic common factor
//! `g(x) = x^m h(x + 1/x)` has a root on the circle exactly when `h` has a
//! real root in `(-2, 2)`. Disk location uses the Schur-Cohn transform.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::bareiss;
use super::matrix::Matrix;
use super::poly::Poly;
use crate::error::{Error, Result};
use crate::scalar::{format_rational, int, Field, Rational};

/// One step of evidence behind a verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub test: String,
    pub value: String,
}

impl Witness {
    fn new(test: impl Into<String>, value: impl ToString) -> Self {
        Witness {
            test: test.into(),
            value: value.to_string(),
        }
    }
}

/// A boolean verdict together with its evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certified {
    pub verdict: bool,
    pub witnesses: Vec<Witness>,
}

/// Exact location of the eigenvalues of a matrix relative to the unit circle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralCertificate {
    pub char_poly: Poly<Rational>,
    pub has_unit_circle_root: bool,
    pub all_outside_unit_disk: bool,
    pub witnesses: Vec<Witness>,
}

fn sign_changes<T: Field + Ord>(seq: &[Poly<T>], at: &T) -> usize {
    let zero = T::zero();
    let signs: Vec<Ordering> = seq
        .iter()
        .map(|p| p.eval(at).cmp(&zero))
        .filter(|o| *o != Ordering::Equal)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Sturm chain `p, p', -rem(p, p'), ...`.
pub fn sturm_sequence<T: Field + Ord>(p: &Poly<T>) -> Vec<Poly<T>> {
    let mut seq = vec![p.clone()];
    let mut next = p.derivative();
    while !next.is_zero() {
        let r = -&seq.last().expect("nonempty").rem(&next);
        seq.push(next);
        next = r;
    }
    seq
}

/// Number of distinct real roots of `p` in the open interval `(a, b)`.
pub fn real_root_count_in_interval<T: Field + Ord>(p: &Poly<T>, a: &T, b: &T) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::DegenerateInput("zero polynomial has every number as a root".into()));
    }
    if a >= b {
        return Err(Error::Domain("interval endpoints must satisfy a < b".into()));
    }
    let mut q = p.square_free();
    for end in [a, b] {
        if q.degree().unwrap_or(0) > 0 && q.eval(end).is_zero() {
            q = q.div_exact(&Poly::linear_root(end.clone())).expect("root divides");
        }
    }
    if q.degree().unwrap_or(0) == 0 {
        return Ok(0);
    }
    let seq = sturm_sequence(&q);
    Ok(sign_changes(&seq, a) - sign_changes(&seq, b))
}

/// Writes a palindromic polynomial of degree `2m` as `x^m h(x + 1/x)` and
/// returns `h`.
fn chebyshev_reduction(g: &Poly<Rational>) -> Poly<Rational> {
    let d = g.degree().unwrap_or(0);
    debug_assert!(d.is_multiple_of(2));
    let m = d / 2;
    let t = Poly::<Rational>::x();
    // x^k + x^{-k} as a polynomial in t = x + 1/x
    let mut prev = Poly::constant(int(2));
    let mut cur = t.clone();
    let mut h = Poly::constant(g.coeff(m));
    for k in 1..=m {
        h = &h + &cur.scale(&g.coeff(m + k));
        let next = &(&t * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    h
}

/// Decides whether `p` has a complex root of modulus exactly one.
pub fn unit_circle_roots_exist(p: &Poly<Rational>) -> Result<Certified> {
    if p.is_zero() {
        return Err(Error::DegenerateInput("zero polynomial".into()));
    }
    let mut witnesses = Vec::new();
    for (name, x) in [("p(1)", int(1)), ("p(-1)", int(-1))] {
        let v = p.eval(&x);
        witnesses.push(Witness::new(name, format_rational(&v)));
        if v.is_zero() {
            return Ok(Certified { verdict: true, witnesses });
        }
    }
    let g = p.gcd(&p.reciprocal()).square_free();
    witnesses.push(Witness::new("gcd_with_reciprocal", &g));
    if g.degree().unwrap_or(0) == 0 {
        return Ok(Certified { verdict: false, witnesses });
    }
    // Roots of g are closed under inversion and avoid +-1, so g is palindromic.
    if g.reciprocal() != g {
        return Err(Error::DegenerateInput(format!(
            "reciprocal factor {g} is not palindromic"
        )));
    }
    let h = chebyshev_reduction(&g);
    witnesses.push(Witness::new("chebyshev_reduction", &h));
    let count = real_root_count_in_interval(&h, &int(-2), &int(2))?;
    witnesses.push(Witness::new("sturm_count(-2,2)", count));
    Ok(Certified {
        verdict: count > 0,
        witnesses,
    })
}

/// Schur-Cohn test: every root of `q` lies strictly inside the unit disk.
fn schur_cohn_inside(q: &Poly<Rational>, witnesses: &mut Vec<Witness>) -> bool {
    let mut q = q.clone();
    let mut step = 0;
    while let Some(n) = q.degree().filter(|&n| n > 0) {
        let a0 = q.coeff(0);
        let an = q.lead();
        let gap = &an * &an - &a0 * &a0;
        witnesses.push(Witness::new(
            format!("schur_cohn[{step}] a_n^2 - a_0^2"),
            format_rational(&gap),
        ));
        if !gap.is_positive() {
            return false;
        }
        let reversed = Poly::new(q.coeffs().iter().rev().cloned().collect());
        let t = &q.scale(&an) - &reversed.scale(&a0);
        debug_assert!(t.coeff(0).is_zero());
        q = Poly::new(t.coeffs()[1..].to_vec());
        debug_assert!(q.degree() == Some(n - 1));
        step += 1;
    }
    true
}

/// Decides whether every complex root of `p` has modulus strictly above one.
pub fn all_roots_outside_unit_disk(p: &Poly<Rational>) -> Result<Certified> {
    if p.is_zero() {
        return Err(Error::DegenerateInput("zero polynomial".into()));
    }
    let p = p.monic();
    let circle = unit_circle_roots_exist(&p)?;
    let mut witnesses = circle.witnesses;
    if circle.verdict {
        return Ok(Certified { verdict: false, witnesses });
    }
    if p.degree().unwrap_or(0) > 0 && p.coeff(0).is_zero() {
        witnesses.push(Witness::new("p(0)", "0"));
        return Ok(Certified { verdict: false, witnesses });
    }
    let verdict = schur_cohn_inside(&p.reciprocal(), &mut witnesses);
    Ok(Certified { verdict, witnesses })
}

impl SpectralCertificate {
    pub fn for_matrix(m: &Matrix<Rational>) -> Result<Self> {
        Self::for_poly(bareiss::char_poly(m)?)
    }

    pub fn for_poly(char_poly: Poly<Rational>) -> Result<Self> {
        let circle = unit_circle_roots_exist(&char_poly)?;
        let outside = all_roots_outside_unit_disk(&char_poly)?;
        let mut witnesses = circle.witnesses;
        witnesses.extend(
            outside
                .witnesses
                .into_iter()
                .filter(|w| w.test.starts_with("schur_cohn") || w.test == "p(0)"),
        );
        Ok(SpectralCertificate {
            char_poly,
            has_unit_circle_root: circle.verdict,
            all_outside_unit_disk: outside.verdict,
            witnesses,
        })
    }
}

/// `|r| > 1`.
pub fn outside_unit(r: &Rational) -> bool {
    r.abs() > Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::frac;

    type Q = Poly<Rational>;

    #[test]
    fn sturm_examples() {
        let count = |p: &Q, a: i64, b: i64| real_root_count_in_interval(p, &int(a), &int(b)).unwrap();
        assert_eq!(count(&Q::from_i64(&[-2, 0, 1]), 0, 2), 1);
        assert_eq!(count(&Q::from_i64(&[1, 0, 1]), -10, 10), 0);
        assert_eq!(count(&Q::from_i64(&[-1, 0, -1, 1]), 1, 2), 1);
    }

    #[test]
    fn sturm_open_endpoints() {
        // roots 0, 1, 2: the open interval (0, 2) sees only 1
        let p = Q::from_roots(&[int(0), int(1), int(2)]);
        assert_eq!(real_root_count_in_interval(&p, &int(0), &int(2)).unwrap(), 1);
        let p = Q::from_roots(&[int(1), int(1), int(1)]);
        assert_eq!(real_root_count_in_interval(&p, &int(0), &int(2)).unwrap(), 1);
    }

    #[test]
    fn sturm_errors() {
        assert!(matches!(
            real_root_count_in_interval(&Q::zero(), &int(0), &int(1)),
            Err(Error::DegenerateInput(_))
        ));
        assert!(matches!(
            real_root_count_in_interval(&Q::x(), &int(1), &int(1)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn sturm_over_machine_rationals() {
        use num_rational::Ratio;
        let p: Poly<Ratio<i64>> = Poly::new(vec![Ratio::from(-2), Ratio::from(0), Ratio::from(1)]);
        let n = real_root_count_in_interval(&p, &Ratio::from(-2), &Ratio::from(2)).unwrap();
        assert_eq!(n, 2);
    }

    #[test]
    fn circle_examples() {
        assert!(!unit_circle_roots_exist(&Q::from_i64(&[1, -3, 1])).unwrap().verdict);
        assert!(unit_circle_roots_exist(&Q::from_i64(&[-1, 1])).unwrap().verdict);
        assert!(unit_circle_roots_exist(&Q::from_i64(&[1, 0, 1])).unwrap().verdict);
        // primitive cube roots of unity
        assert!(unit_circle_roots_exist(&Q::from_i64(&[1, 1, 1])).unwrap().verdict);
        // Salem-type: x^4 - x^3 - x^2 - x + 1 has two roots on the circle
        assert!(unit_circle_roots_exist(&Q::from_i64(&[1, -1, -1, -1, 1])).unwrap().verdict);
        // reciprocal pair 2, 1/2 but nothing on the circle
        assert!(!unit_circle_roots_exist(&Q::from_roots(&[int(2), frac(1, 2)])).unwrap().verdict);
        assert!(matches!(unit_circle_roots_exist(&Q::zero()), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn disk_examples() {
        assert!(all_roots_outside_unit_disk(&Q::from_i64(&[6, -5, 1])).unwrap().verdict);
        assert!(!all_roots_outside_unit_disk(&Q::from_i64(&[1, -3, 1])).unwrap().verdict);
        assert!(!all_roots_outside_unit_disk(&Q::from_i64(&[3, -4, 1])).unwrap().verdict);
        assert!(!all_roots_outside_unit_disk(&Q::from_i64(&[0, 3, 1])).unwrap().verdict);
        // complex pair 1 +- 2i, modulus sqrt 5
        assert!(all_roots_outside_unit_disk(&Q::from_i64(&[5, -2, 1])).unwrap().verdict);
        assert!(all_roots_outside_unit_disk(&Q::one()).unwrap().verdict);
    }

    #[test]
    fn certificate_is_consistent() {
        let c = SpectralCertificate::for_matrix(&Matrix::from_i64_rows(&[&[2, 0], &[0, 3]])).unwrap();
        assert!(c.all_outside_unit_disk && !c.has_unit_circle_root);
        assert!(!c.witnesses.is_empty());
    }
}
