//! The Lie correspondence for groups of unipotent rational matrices.
//!
//! For a strictly upper triangular `X` the exponential series stops after
//! `dim` terms, and the logarithm series of `I + N` stops likewise, so both
//! directions are exact finite sums over `Q`.

mod subspace;

pub use subspace::{
    ad_matrix, adapted_basis_2step, differential_from_generator_images, lower_central_series,
    nilpotency_class, AdaptedBasis, LieSubspace,
};

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{int, Rational};
use crate::QMatrix;

/// Strictly upper triangular matrix: an element of `NT_n(Q)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NilMatrix(QMatrix);

/// Upper unitriangular matrix: an element of `UT_n(Q)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniMatrix(QMatrix);

impl NilMatrix {
    pub fn new(m: QMatrix) -> Result<Self> {
        if !m.is_strictly_upper() {
            return Err(Error::Domain(format!("{m} is not strictly upper triangular")));
        }
        Ok(NilMatrix(m))
    }

    pub fn zero(dim: usize) -> Self {
        NilMatrix(QMatrix::zeros(dim, dim))
    }

    /// Elementary matrix `E_{ij}` (zero-based), `i < j`.
    pub fn elementary(dim: usize, i: usize, j: usize) -> Self {
        assert!(i < j && j < dim, "E_ij must lie above the diagonal");
        NilMatrix(QMatrix::unit(dim, i, j))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> QMatrix {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(NilMatrix(self.0.checked_add(&other.0)?))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(NilMatrix(self.0.checked_sub(&other.0)?))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        NilMatrix(self.0.scale(s))
    }

    /// `[self, other] = self·other - other·self`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        Ok(NilMatrix(self.0.commutator(&other.0)?))
    }

    /// `exp(self) = Σ_{k < dim} self^k / k!`.
    pub fn exp(&self) -> UniMatrix {
        let n = self.dim();
        let mut term = QMatrix::identity(n);
        let mut sum = term.clone();
        for k in 1..n {
            term = (&term * &self.0).scale(&Rational::new(1.into(), (k as i64).into()));
            if term.is_zero() {
                break;
            }
            sum = &sum + &term;
        }
        UniMatrix(sum)
    }
}

impl UniMatrix {
    pub fn new(m: QMatrix) -> Result<Self> {
        if !m.is_unipotent_upper() {
            return Err(Error::Domain(format!("{m} is not upper unitriangular")));
        }
        Ok(UniMatrix(m))
    }

    pub fn identity(dim: usize) -> Self {
        UniMatrix(QMatrix::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> QMatrix {
        self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Ok(UniMatrix(self.0.checked_mul(&other.0)?))
    }

    pub fn inverse(&self) -> Self {
        self.log().scale(&int(-1)).exp()
    }

    /// `log(I + N) = Σ_{k ≥ 1} (-1)^{k+1} N^k / k`.
    pub fn log(&self) -> NilMatrix {
        let n = self.dim();
        let nil = &self.0 - &QMatrix::identity(n);
        let mut power = nil.clone();
        let mut sum = nil.clone();
        for k in 2..n {
            power = &power * &nil;
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 0 { -1 } else { 1 };
            sum = &sum + &power.scale(&Rational::new(sign.into(), (k as i64).into()));
        }
        NilMatrix(sum)
    }

    /// Integer power by repeated multiplication; negative exponents invert.
    pub fn int_pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        UniMatrix(base.0.pow(e.unsigned_abs()).expect("square"))
    }

    /// `exp(t log self)`; agrees with [`int_pow`](Self::int_pow) for integer `t`.
    pub fn rational_power(&self, t: &Rational) -> Self {
        if t.is_zero() {
            return UniMatrix::identity(self.dim());
        }
        if t.is_one() {
            return self.clone();
        }
        self.log().scale(t).exp()
    }
}

impl fmt::Debug for NilMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NilMatrix({})", self.0)
    }
}

impl fmt::Debug for UniMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniMatrix({})", self.0)
    }
}

impl fmt::Display for NilMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Display for UniMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn exp_unipotent(x: &NilMatrix) -> UniMatrix {
    x.exp()
}

pub fn log_unipotent(g: &UniMatrix) -> NilMatrix {
    g.log()
}

pub fn rational_power(g: &UniMatrix, t: &Rational) -> UniMatrix {
    g.rational_power(t)
}

/// Largest class for which [`bch_truncated`] carries the full series.
pub const BCH_MAX_CLASS: usize = 3;

/// `log(exp x · exp y)` truncated after the brackets that survive in
/// nilpotency class `class_bound`:
/// `x + y + [x,y]/2 + ([x,[x,y]] + [y,[y,x]])/12`.
///
/// The result is checked against `exp(x)·exp(y)`; a mismatch means the
/// algebra generated by `x` and `y` has class above `class_bound`.
pub fn bch_truncated(x: &NilMatrix, y: &NilMatrix, class_bound: usize) -> Result<NilMatrix> {
    if class_bound > BCH_MAX_CLASS {
        return Err(Error::ClassTooLarge {
            found: class_bound,
            bound: BCH_MAX_CLASS,
        });
    }
    if x.dim() != y.dim() {
        return Err(Error::Dimension(format!("BCH of {0}x{0} and {1}x{1}", x.dim(), y.dim())));
    }
    let mut z = x.add(y)?;
    if class_bound >= 2 {
        let xy = x.bracket(y)?;
        z = z.add(&xy.scale(&Rational::new(1.into(), 2.into())))?;
        if class_bound >= 3 {
            let xxy = x.bracket(&xy)?;
            let yyx = y.bracket(&y.bracket(x)?)?;
            z = z.add(&xxy.add(&yyx)?.scale(&Rational::new(1.into(), 12.into())))?;
        }
    }
    if z.exp() != x.exp().mul(&y.exp())? {
        return Err(Error::ClassBoundViolated(class_bound));
    }
    Ok(z)
}
