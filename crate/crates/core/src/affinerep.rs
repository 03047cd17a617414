//! Faithful matrix representation of `Aff(G) = G ⋊ Aut(G)` for 2-step
//! nilpotent `G`.
//!
//! With an ordered basis of `g` listing `[g, g]` first, an affine map
//! `(g, α)` becomes the `(n+1)×(n+1)` matrix `φ₂(g)·φ₁(α)` where
//! `φ₁(α) = diag(α*, 1)` and `φ₂(g) = exp [[½ ad_X, X], [0, 0]]` with
//! `X = log g`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{frac, Rational};
use crate::unipotent::{adapted_basis_2step, ad_matrix, lower_central_series, LieSubspace, NilMatrix, UniMatrix};
use crate::QMatrix;

/// A 2-step nilpotent Lie algebra with its adapted basis.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineRep {
    basis: LieSubspace,
    derived_dim: usize,
}

impl AffineRep {
    /// Builds the adapted basis of `algebra`; fails for class above two.
    pub fn new(algebra: &LieSubspace) -> Result<Self> {
        let adapted = adapted_basis_2step(algebra)?;
        Ok(AffineRep {
            basis: adapted.space,
            derived_dim: adapted.derived_dim,
        })
    }

    /// Uses `basis` verbatim; its leading vectors must span `[g, g]`.
    pub fn from_basis(ambient_dim: usize, basis: Vec<NilMatrix>) -> Result<Self> {
        let space = LieSubspace::new(ambient_dim, basis)?;
        let series = lower_central_series(&space)?;
        if series.len() > 2 {
            return Err(Error::ClassTooLarge {
                found: series.len(),
                bound: 2,
            });
        }
        let derived = space.bracket_with(&space)?;
        let k = derived.dim();
        let leading = LieSubspace::new(ambient_dim, space.basis()[..k].to_vec())?;
        if leading != derived {
            return Err(Error::InvalidGroup(format!(
                "the first {k} basis vectors do not span the derived algebra"
            )));
        }
        Ok(AffineRep {
            basis: space,
            derived_dim: k,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn derived_dim(&self) -> usize {
        self.derived_dim
    }

    pub fn basis(&self) -> &LieSubspace {
        &self.basis
    }

    /// Coordinates of `log g` in the adapted basis.
    pub fn log_coords(&self, g: &UniMatrix) -> Result<Vec<Rational>> {
        if g.dim() != self.basis.ambient_dim() {
            return Err(Error::Dimension(format!(
                "{0}x{0} element for a {1}x{1} model",
                g.dim(),
                self.basis.ambient_dim()
            )));
        }
        self.basis.coordinates(&g.log())
    }

    /// `exp` of the algebra element with the given coordinates.
    pub fn element_from_log_coords(&self, x: &[Rational]) -> Result<UniMatrix> {
        Ok(self.basis.combine(x)?.exp())
    }

    /// `ad_X` in the adapted basis, for `X` given by coordinates.
    pub fn ad(&self, x: &[Rational]) -> Result<QMatrix> {
        ad_matrix(&self.basis.combine(x)?, &self.basis)
    }

    fn check_square(&self, alpha_star: &QMatrix) -> Result<()> {
        let n = self.dim();
        if alpha_star.rows() != n || alpha_star.cols() != n {
            return Err(Error::Dimension(format!(
                "{}x{} differential for a {n}-dimensional algebra",
                alpha_star.rows(),
                alpha_star.cols()
            )));
        }
        Ok(())
    }

    /// First basis pair `(i, j)` with `α*[v_i, v_j] ≠ [α* v_i, α* v_j]`.
    pub fn bracket_violation(&self, alpha_star: &QMatrix) -> Result<Option<(usize, usize)>> {
        self.check_square(alpha_star)?;
        let b = self.basis.basis();
        let image = |j: usize| self.basis.combine(&alpha_star.col(j));
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                let br = self.basis.coordinates(&b[i].bracket(&b[j])?)?;
                let lhs = self.basis.combine(&alpha_star.mul_vec(&br)?)?;
                if lhs != image(i)?.bracket(&image(j)?)? {
                    return Ok(Some((i, j)));
                }
            }
        }
        Ok(None)
    }

    /// Checks that `alpha_star` is an invertible Lie algebra endomorphism.
    pub fn check_automorphism(&self, alpha_star: &QMatrix) -> Result<()> {
        if let Some((i, j)) = self.bracket_violation(alpha_star)? {
            return Err(Error::NotAnAutomorphism(format!(
                "bracket of basis vectors {i} and {j} is not preserved"
            )));
        }
        if alpha_star.det()?.is_zero() {
            return Err(Error::NotAnAutomorphism("differential is singular".into()));
        }
        Ok(())
    }

    /// `α(g) = exp(α* log g)`.
    pub fn apply_differential(&self, alpha_star: &QMatrix, g: &UniMatrix) -> Result<UniMatrix> {
        self.check_square(alpha_star)?;
        self.element_from_log_coords(&alpha_star.mul_vec(&self.log_coords(g)?)?)
    }

    /// `φ₁(α) = diag(α*, 1)`.
    pub fn embed_automorphism(&self, alpha_star: &QMatrix) -> Result<QMatrix> {
        self.check_automorphism(alpha_star)?;
        Ok(block_diag_one(alpha_star))
    }

    fn translation_generator(&self, x: &[Rational]) -> Result<QMatrix> {
        let n = self.dim();
        let mut m = QMatrix::zeros(n + 1, n + 1);
        m.set_block(0, 0, &self.ad(x)?.scale(&frac(1, 2)));
        m.set_block(0, n, &QMatrix::column(x.to_vec())?);
        Ok(m)
    }

    /// `φ₂(g) = exp φ₂*(log g)`.
    pub fn embed_translation(&self, g: &UniMatrix) -> Result<QMatrix> {
        self.embed_log(&self.log_coords(g)?)
    }

    /// `φ₂` of the element whose log has coordinates `x`.
    pub fn embed_log(&self, x: &[Rational]) -> Result<QMatrix> {
        let gen = self.translation_generator(x)?;
        let n = gen.rows();
        let mut term = QMatrix::identity(n);
        let mut sum = term.clone();
        for k in 1..=n {
            term = term.checked_mul(&gen)?.scale(&Rational::new(One::one(), (k as i64).into()));
            if term.is_zero() {
                break;
            }
            sum = sum.checked_add(&term)?;
        }
        Ok(sum)
    }

    /// `φ₂(g)·φ₁(α)`.
    pub fn embed_affine(&self, translation: &UniMatrix, alpha_star: &QMatrix) -> Result<QMatrix> {
        self.embed_translation(translation)?
            .checked_mul(&self.embed_automorphism(alpha_star)?)
    }

    /// Compares `φ₁(α) φ₂(g) φ₁(α)⁻¹` with `φ₂(α(g))`. The differential is
    /// not validated, so a failing check is a witness against it.
    pub fn verify_equivariance(&self, alpha_star: &QMatrix, g: &UniMatrix) -> Result<EquivarianceCheck> {
        self.check_square(alpha_star)?;
        let a = block_diag_one(alpha_star);
        let lhs = a
            .checked_mul(&self.embed_translation(g)?)?
            .checked_mul(&a.inverse().map_err(|_| Error::NotAnAutomorphism("differential is singular".into()))?)?;
        let image = alpha_star.mul_vec(&self.log_coords(g)?)?;
        let rhs = self.embed_log(&image)?;
        Ok(EquivarianceCheck {
            holds: lhs == rhs,
            conjugated: lhs,
            image: rhs,
        })
    }

    /// Recovers `(g, α*)` from an embedded matrix: the last column holds
    /// `X = log g`, and the upper block is `(I + ½ ad_X) α*`.
    pub fn decode(&self, m: &QMatrix) -> Result<(UniMatrix, QMatrix)> {
        let n = self.dim();
        if m.rows() != n + 1 || m.cols() != n + 1 {
            return Err(Error::Dimension(format!("{}x{} matrix, expected {}x{}", m.rows(), m.cols(), n + 1, n + 1)));
        }
        let last = m.row(n);
        if last[..n].iter().any(|e| !e.is_zero()) || !last[n].is_one() {
            return Err(Error::Domain("last row is not (0, ..., 0, 1)".into()));
        }
        let x: Vec<Rational> = (0..n).map(|i| m[(i, n)].clone()).collect();
        let half_ad = self.ad(&x)?.scale(&frac(1, 2));
        let alpha_star = QMatrix::identity(n)
            .checked_sub(&half_ad)?
            .checked_mul(&m.block(0, n, 0, n))?;
        Ok((self.element_from_log_coords(&x)?, alpha_star))
    }
}

fn block_diag_one(a: &QMatrix) -> QMatrix {
    QMatrix::block_diagonal(&[a.clone(), QMatrix::identity(1)])
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivarianceCheck {
    pub holds: bool,
    /// `φ₁(α) φ₂(g) φ₁(α)⁻¹`.
    pub conjugated: QMatrix,
    /// `φ₂(α(g))`.
    pub image: QMatrix,
}

/// An affine map `x ↦ g·α(x)` of the group, stored with its embedding.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineElement {
    translation: UniMatrix,
    differential: QMatrix,
    embedded: QMatrix,
}

impl AffineElement {
    pub fn new(rep: &AffineRep, translation: UniMatrix, differential: QMatrix) -> Result<Self> {
        let embedded = rep.embed_affine(&translation, &differential)?;
        Ok(AffineElement {
            translation,
            differential,
            embedded,
        })
    }

    pub fn identity(rep: &AffineRep) -> Self {
        let n = rep.dim();
        AffineElement {
            translation: UniMatrix::identity(rep.basis().ambient_dim()),
            differential: QMatrix::identity(n),
            embedded: QMatrix::identity(n + 1),
        }
    }

    pub fn pure_translation(rep: &AffineRep, g: UniMatrix) -> Result<Self> {
        Self::new(rep, g, QMatrix::identity(rep.dim()))
    }

    /// Reads an element back from its embedded matrix.
    pub fn from_embedded(rep: &AffineRep, m: &QMatrix) -> Result<Self> {
        let (translation, differential) = rep.decode(m)?;
        let e = Self::new(rep, translation, differential)?;
        if &e.embedded != m {
            return Err(Error::Domain("matrix is not in the image of the embedding".into()));
        }
        Ok(e)
    }

    pub fn translation(&self) -> &UniMatrix {
        &self.translation
    }

    pub fn differential(&self) -> &QMatrix {
        &self.differential
    }

    pub fn embedded(&self) -> &QMatrix {
        &self.embedded
    }

    pub fn is_identity(&self) -> bool {
        self.embedded.is_identity()
    }

    /// `(g, α)(h, β) = (g·α(h), αβ)`.
    pub fn mul(&self, rep: &AffineRep, other: &Self) -> Result<Self> {
        let moved = rep.apply_differential(&self.differential, &other.translation)?;
        Ok(AffineElement {
            translation: self.translation.mul(&moved)?,
            differential: self.differential.checked_mul(&other.differential)?,
            embedded: self.embedded.checked_mul(&other.embedded)?,
        })
    }

    /// `(g, α)⁻¹ = (α⁻¹(g⁻¹), α⁻¹)`.
    pub fn inverse(&self, rep: &AffineRep) -> Result<Self> {
        let inv = self.differential.inverse()?;
        let translation = rep.apply_differential(&inv, &self.translation.inverse())?;
        Ok(AffineElement {
            translation,
            differential: inv,
            embedded: self.embedded.inverse()?,
        })
    }

    pub fn act_on_point(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        act_on_point(&self.embedded, x)
    }
}

/// Applies an embedded affine matrix to a point given in log coordinates.
pub fn act_on_point(m: &QMatrix, x: &[Rational]) -> Result<Vec<Rational>> {
    if m.rows() != x.len() + 1 || !m.is_square() {
        return Err(Error::Dimension(format!(
            "{}-dimensional point for a {}x{} affine matrix",
            x.len(),
            m.rows(),
            m.cols()
        )));
    }
    let mut v = x.to_vec();
    v.push(Rational::one());
    let mut out = m.mul_vec(&v)?;
    out.pop();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::malcev::{builtin_lattice, LatticeElement};
    use crate::scalar::int;

    fn heis() -> (AffineRep, crate::malcev::MalcevLaw) {
        let lat = builtin_lattice("heisenberg").unwrap();
        (AffineRep::new(lat.algebra().unwrap()).unwrap(), lat.law)
    }

    fn phi_star() -> QMatrix {
        QMatrix::from_rows(vec![
            vec![int(1), int(1), frac(-1, 2)],
            vec![int(0), int(0), int(-1)],
            vec![int(0), int(1), int(-1)],
        ])
        .unwrap()
    }

    fn q(rows: Vec<Vec<Rational>>) -> QMatrix {
        QMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn heisenberg_adapted_basis() {
        let (rep, _) = heis();
        assert_eq!(rep.derived_dim(), 1);
        let b = rep.basis().basis();
        assert_eq!(b[0], NilMatrix::elementary(3, 0, 2));
        assert_eq!(b[1], NilMatrix::elementary(3, 1, 2));
        assert_eq!(b[2], NilMatrix::elementary(3, 0, 1));
    }

    #[test]
    fn phi_embedding_has_order_three() {
        let (rep, _) = heis();
        let a = rep.embed_automorphism(&phi_star()).unwrap();
        let expect = q(vec![
            vec![int(1), int(1), frac(-1, 2), int(0)],
            vec![int(0), int(0), int(-1), int(0)],
            vec![int(0), int(1), int(-1), int(0)],
            vec![int(0), int(0), int(0), int(1)],
        ]);
        assert_eq!(a, expect);
        assert!(a.pow(3).unwrap().is_identity());
        assert!(rep.embed_automorphism(&QMatrix::identity(3)).unwrap().is_identity());
    }

    #[test]
    fn psi_display() {
        let (rep, law) = heis();
        let (x, y, z) = (3, -2, 5);
        let g = law.matrix_from_coordinates(&LatticeElement::from_i64(&[x, y, z])).unwrap();
        let (x, y, z) = (int(x), int(y), int(z));
        let expect = q(vec![
            vec![int(1), &y / int(2), -&x / int(2), &z - &x * &y / int(2)],
            vec![int(0), int(1), int(0), x.clone()],
            vec![int(0), int(0), int(1), y],
            vec![int(0), int(0), int(0), int(1)],
        ]);
        assert_eq!(rep.embed_translation(&g).unwrap(), expect);
        assert!(rep.embed_translation(&UniMatrix::identity(3)).unwrap().is_identity());
    }

    #[test]
    fn coset_representative_image() {
        let (rep, law) = heis();
        let c_third = law
            .matrix_from_coordinates(&LatticeElement(vec![int(0), int(0), frac(1, 3)]))
            .unwrap();
        let m = rep.embed_affine(&c_third, &phi_star()).unwrap();
        let expect = q(vec![
            vec![int(1), int(1), frac(-1, 2), frac(1, 3)],
            vec![int(0), int(0), int(-1), int(0)],
            vec![int(0), int(1), int(-1), int(0)],
            vec![int(0), int(0), int(0), int(1)],
        ]);
        assert_eq!(m, expect);
        let e = AffineElement::from_embedded(&rep, &m).unwrap();
        assert_eq!(e.translation(), &c_third);
        assert_eq!(e.differential(), &phi_star());
    }

    #[test]
    fn phi_conjugation_matches_closed_form() {
        // φ(a^x b^y c^z) has c-exponent z + x - y/2 - xy/2 in log terms; compare group images
        let (rep, law) = heis();
        for (x, y, z) in [(1, 0, 0), (0, 1, 0), (2, -3, 4)] {
            let g = law.matrix_from_coordinates(&LatticeElement::from_i64(&[x, y, z])).unwrap();
            let check = rep.verify_equivariance(&phi_star(), &g).unwrap();
            assert!(check.holds);
        }
        let a = law.matrix_from_coordinates(&LatticeElement::from_i64(&[1, 0, 0])).unwrap();
        let b = law.matrix_from_coordinates(&LatticeElement::from_i64(&[0, 1, 0])).unwrap();
        let c = law.matrix_from_coordinates(&LatticeElement::from_i64(&[0, 0, 1])).unwrap();
        let phi = |g: &UniMatrix| rep.apply_differential(&phi_star(), g).unwrap();
        assert_eq!(phi(&a), b.mul(&c).unwrap());
        assert_eq!(phi(&b), a.inverse().mul(&b.inverse()).unwrap());
        assert_eq!(phi(&c), c);
    }

    #[test]
    fn corrupted_differential_fails() {
        let (rep, law) = heis();
        let mut bad = phi_star();
        for r in 0..3 {
            let t = bad[(r, 1)].clone();
            bad[(r, 1)] = bad[(r, 2)].clone();
            bad[(r, 2)] = t;
        }
        assert!(matches!(rep.embed_automorphism(&bad), Err(Error::NotAnAutomorphism(_))));
        let witness = (0..4)
            .map(|i| law.matrix_from_coordinates(&LatticeElement::from_i64(&[1, i, 0])).unwrap())
            .find(|g| !rep.verify_equivariance(&bad, g).unwrap().holds);
        assert!(witness.is_some());
    }

    #[test]
    fn abelian_reduces_to_classical() {
        let lat = builtin_lattice("free_abelian(2)").unwrap();
        let rep = AffineRep::new(lat.algebra().unwrap()).unwrap();
        assert_eq!(rep.derived_dim(), 0);
        let d = QMatrix::diagonal(&[int(-1), int(1)]);
        assert_eq!(rep.embed_automorphism(&d).unwrap(), QMatrix::diagonal(&[int(-1), int(1), int(1)]));
        let half_b = lat.law.matrix_from_coordinates(&LatticeElement(vec![int(0), frac(1, 2)])).unwrap();
        let alpha = AffineElement::new(&rep, half_b, d).unwrap();
        assert_eq!(alpha.act_on_point(&[int(0), int(0)]).unwrap(), vec![int(0), frac(1, 2)]);
        let a = lat.law.matrix_from_coordinates(&LatticeElement::from_i64(&[1, 0])).unwrap();
        let ta = AffineElement::pure_translation(&rep, a).unwrap();
        assert_eq!(ta.act_on_point(&[frac(1, 3), int(7)]).unwrap(), vec![frac(4, 3), int(7)]);
        // α² is translation by b
        let sq = alpha.mul(&rep, &alpha).unwrap();
        assert_eq!(sq.differential(), &QMatrix::identity(2));
        assert_eq!(rep.log_coords(sq.translation()).unwrap(), vec![int(0), int(1)]);
    }

    #[test]
    fn multiplication_and_inverse() {
        let (rep, law) = heis();
        let el = |c: &[i64]| law.matrix_from_coordinates(&LatticeElement::from_i64(c)).unwrap();
        let e1 = AffineElement::new(&rep, el(&[1, 2, -1]), phi_star()).unwrap();
        let e2 = AffineElement::new(&rep, el(&[0, -1, 3]), phi_star().pow(2).unwrap()).unwrap();
        let prod = e1.mul(&rep, &e2).unwrap();
        let rebuilt = AffineElement::new(&rep, prod.translation().clone(), prod.differential().clone()).unwrap();
        assert_eq!(rebuilt.embedded(), prod.embedded());
        let inv = e1.inverse(&rep).unwrap();
        assert!(e1.mul(&rep, &inv).unwrap().is_identity());
        let rebuilt = AffineElement::new(&rep, inv.translation().clone(), inv.differential().clone()).unwrap();
        assert_eq!(rebuilt.embedded(), inv.embedded());
        let ab = AffineElement::pure_translation(&rep, el(&[1, 0, 0]).mul(&el(&[0, 1, 0])).unwrap()).unwrap();
        let a_then_b = AffineElement::pure_translation(&rep, el(&[1, 0, 0]))
            .unwrap()
            .mul(&rep, &AffineElement::pure_translation(&rep, el(&[0, 1, 0])).unwrap())
            .unwrap();
        assert_eq!(ab.embedded(), a_then_b.embedded());
    }

    #[test]
    fn class_three_rejected() {
        let nt4 = LieSubspace::full_nilpotent(4);
        assert!(matches!(AffineRep::new(&nt4), Err(Error::ClassTooLarge { found: 3, bound: 2 })));
    }

    #[test]
    fn explicit_basis_must_lead_with_derived() {
        let e = |i, j| NilMatrix::elementary(3, i, j);
        assert!(AffineRep::from_basis(3, vec![e(0, 2), e(1, 2), e(0, 1)]).is_ok());
        assert!(matches!(
            AffineRep::from_basis(3, vec![e(1, 2), e(0, 2), e(0, 1)]),
            Err(Error::InvalidGroup(_))
        ));
    }

    #[test]
    fn point_dimension_checked() {
        assert!(matches!(act_on_point(&QMatrix::identity(3), &[int(1)]), Err(Error::Dimension(_))));
    }
}
