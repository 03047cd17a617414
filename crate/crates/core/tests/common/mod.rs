//! Test-side oracles, written without the library's algorithms.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use nilcrystal::scalar::{frac, int};
use nilcrystal::unipotent::{NilMatrix, UniMatrix};
use nilcrystal::{QMatrix, Rational};

pub fn q(rows: &[&[i64]]) -> QMatrix {
    QMatrix::from_i64_rows(rows)
}

/// Cofactor expansion along the first row.
pub fn laplace_det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::one();
    }
    let mut total = Rational::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Rational>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][j] * laplace_det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

pub fn det_of(m: &QMatrix) -> Rational {
    laplace_det(&m.to_rows())
}

/// `det(I - a·d)` by cofactor expansion.
pub fn one_minus_det(a: &QMatrix, d: &QMatrix) -> Rational {
    let n = a.rows();
    let prod = naive_mul(a, d);
    let rows: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let id = if i == j { Rational::one() } else { Rational::zero() };
                    id - &prod[i][j]
                })
                .collect()
        })
        .collect();
    laplace_det(&rows)
}

pub fn naive_mul(a: &QMatrix, b: &QMatrix) -> Vec<Vec<Rational>> {
    let (ar, br) = (a.to_rows(), b.to_rows());
    (0..ar.len())
        .map(|i| {
            (0..br[0].len())
                .map(|j| (0..br.len()).map(|k| &ar[i][k] * &br[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Heisenberg element `a^x b^y c^z = [[1,y,z],[0,1,x],[0,0,1]]`.
pub fn heis(x: &Rational, y: &Rational, z: &Rational) -> QMatrix {
    QMatrix::from_rows(vec![
        vec![int(1), y.clone(), z.clone()],
        vec![int(0), int(1), x.clone()],
        vec![int(0), int(0), int(1)],
    ])
    .unwrap()
}

/// Inverse of [`heis`] on `(x, y, z)`.
pub fn heis_coords(m: &QMatrix) -> (Rational, Rational, Rational) {
    let r = m.to_rows();
    (r[1][2].clone(), r[0][1].clone(), r[0][2].clone())
}

/// The explicit 4×4 representation of the Heisenberg group.
pub fn psi(x: &Rational, y: &Rational, z: &Rational) -> QMatrix {
    let half = frac(1, 2);
    QMatrix::from_rows(vec![
        vec![int(1), y * &half, -(x * &half), z - x * y * &half],
        vec![int(0), int(1), int(0), x.clone()],
        vec![int(0), int(0), int(1), y.clone()],
        vec![int(0), int(0), int(0), int(1)],
    ])
    .unwrap()
}

/// The order-3 automorphism of the Heisenberg group, as a closed formula on
/// `(x, y, z)`.
pub fn phi_formula(x: &Rational, y: &Rational, z: &Rational) -> (Rational, Rational, Rational) {
    let nx = -y.clone();
    let ny = x - y;
    let nz = z + x - x * y + y * (y - int(1)) / int(2);
    (nx, ny, nz)
}

/// `φ*` in the adapted basis `(E13; E23, E12)`.
pub fn phi_star() -> QMatrix {
    QMatrix::from_rows(vec![
        vec![int(1), int(1), frac(-1, 2)],
        vec![int(0), int(0), int(-1)],
        vec![int(0), int(1), int(-1)],
    ])
    .unwrap()
}

/// `φ₁(φ*)`: the 4×4 matrix realizing `φ` by conjugation.
pub fn order_three_a() -> QMatrix {
    QMatrix::from_rows(vec![
        vec![int(1), int(1), frac(-1, 2), int(0)],
        vec![int(0), int(0), int(-1), int(0)],
        vec![int(0), int(1), int(-1), int(0)],
        vec![int(0), int(0), int(0), int(1)],
    ])
    .unwrap()
}

/// Random strictly upper triangular matrix with entries `p/q`, `|p| ≤ 4`,
/// `1 ≤ q ≤ 3`.
pub fn random_nil(rng: &mut impl Rng, n: usize) -> NilMatrix {
    let mut m = QMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let e = QMatrix::unit(n, i, j).scale(&frac(rng.gen_range(-4..=4), rng.gen_range(1..=3)));
            m = m.checked_add(&e).unwrap();
        }
    }
    NilMatrix::new(m).unwrap()
}

pub fn random_uni(rng: &mut impl Rng, n: usize) -> UniMatrix {
    let id = QMatrix::identity(n);
    UniMatrix::new(id.checked_add(random_nil(rng, n).matrix()).unwrap()).unwrap()
}

pub fn to_float(m: &QMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m.row(i)[j].to_f64().unwrap())
}

/// Floating-point verdicts `(expanding, hyperbolic)`; moduli within 1e-9 of
/// one count as on the circle.
pub fn float_verdicts(m: &QMatrix) -> (bool, bool) {
    const TOL: f64 = 1e-9;
    let mods: Vec<f64> = to_float(m).complex_eigenvalues().iter().map(|c| c.norm()).collect();
    let invertible = mods.iter().all(|r| *r > TOL);
    let expanding = mods.iter().all(|r| *r > 1.0 + TOL);
    let hyperbolic = invertible && mods.iter().all(|r| (r - 1.0).abs() > TOL);
    (expanding, hyperbolic)
}

/// Companion matrix of a monic integer polynomial, coefficients low to high.
pub fn companion(coeffs_low_to_high: &[i64]) -> QMatrix {
    let n = coeffs_low_to_high.len() - 1;
    let mut rows = vec![vec![int(0); n]; n];
    for i in 1..n {
        rows[i][i - 1] = int(1);
    }
    for i in 0..n {
        rows[i][n - 1] = int(-coeffs_low_to_high[i]);
    }
    QMatrix::from_rows(rows).unwrap()
}

/// A differential commuting with the holonomy of `heis_abb` up to
/// conjugation: `[[n, u, v], [0, M]]` with `M = pI + qJ`.
pub fn abb_differential(p: i64, q: i64) -> QMatrix {
    let n = p * p - p * q + q * q;
    QMatrix::from_rows(vec![
        vec![int(n), frac(n - p + q, 2), frac(p - n, 2)],
        vec![int(0), int(p), int(-q)],
        vec![int(0), int(q), int(p - q)],
    ])
    .unwrap()
}

pub fn matrix_pow(m: &QMatrix, e: usize) -> QMatrix {
    let mut out = QMatrix::identity(m.rows());
    for _ in 0..e {
        out = QMatrix::from_rows(naive_mul(&out, m)).unwrap();
    }
    out
}
