//! Torsion-free nilpotent groups in Mal'cev coordinates.
//!
//! A [`MalcevLaw`] describes the group through an ordered Mal'cev basis
//! `a₁..a_k`: every element is uniquely `a₁^{x₁}···a_k^{x_k}`, with integer
//! exponents for lattice elements and rational exponents in the rational
//! completion. The law is carried by a faithful unipotent matrix model and,
//! optionally, by explicit product and power polynomials. When both are
//! present the model is the ground truth the polynomials are checked against.

mod catalog;
mod mpoly;

pub use catalog::{builtin_lattice, LatticeSpec};
pub use mpoly::MPoly;
pub(crate) use mpoly::RawPoly;

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, int, is_integer, Rational};
use crate::unipotent::{lower_central_series, LieSubspace, NilMatrix, UniMatrix};

/// Mal'cev coordinates `(x₁, ..., x_k)`; integral exactly for lattice points.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeElement(#[serde(with = "crate::scalar::serde_rational::vec")] pub Vec<Rational>);

impl LatticeElement {
    pub fn identity(rank: usize) -> Self {
        LatticeElement(vec![Rational::zero(); rank])
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatticeElement(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(is_integer)
    }
}

impl fmt::Debug for LatticeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Faithful unipotent model of a Mal'cev basis.
#[derive(Clone, Debug)]
pub struct MatrixModel {
    basis: Vec<UniMatrix>,
    /// Logs of the basis, in Mal'cev order; spans the rational Lie algebra.
    algebra: LieSubspace,
}

impl MatrixModel {
    /// Checks that `basis` is unipotent, has independent logs spanning a Lie
    /// algebra, and refines a central series: `[g, n_i] ⊆ n_{i+1}` where
    /// `n_i = span(log a_i, ..., log a_k)`.
    pub fn new(basis: Vec<UniMatrix>) -> Result<Self> {
        let Some(first) = basis.first() else {
            return Err(Error::InvalidGroup("empty Mal'cev basis".into()));
        };
        let dim = first.dim();
        if basis.iter().any(|b| b.dim() != dim) {
            return Err(Error::Dimension("Mal'cev basis matrices differ in size".into()));
        }
        let logs: Vec<NilMatrix> = basis.iter().map(UniMatrix::log).collect();
        let algebra = LieSubspace::new(dim, logs.clone())
            .map_err(|_| Error::InvalidGroup("logs of the Mal'cev basis are dependent".into()))?;
        if let Some((i, j, _)) = algebra.bracket_escape()? {
            return Err(Error::InvalidGroup(format!(
                "[log a{}, log a{}] leaves the span of the basis logs",
                i + 1,
                j + 1
            )));
        }
        let k = logs.len();
        for i in 0..k {
            let tail = LieSubspace::new(dim, logs[i + 1..].to_vec())?;
            for (j, x) in logs.iter().enumerate() {
                let br = x.bracket(&logs[i])?;
                if !tail.contains(&br) {
                    return Err(Error::InvalidGroup(format!(
                        "[log a{}, log a{}] is not in the span of later basis logs",
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(MatrixModel { basis, algebra })
    }

    pub fn basis(&self) -> &[UniMatrix] {
        &self.basis
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis[0].dim()
    }

    pub fn algebra(&self) -> &LieSubspace {
        &self.algebra
    }
}

/// Polynomial group law `(p_i, q_i)` with an optional matrix model.
///
/// Product polynomials are in variables `(x₁..x_k, y₁..y_k)`, power
/// polynomials in `(x₁..x_k, m)`; `p_i` and `q_i` may only involve indices
/// below `i`.
#[derive(Clone, Debug)]
pub struct MalcevLaw {
    rank: usize,
    model: Option<MatrixModel>,
    product_polys: Option<Vec<MPoly>>,
    power_polys: Option<Vec<MPoly>>,
}

fn check_triangular(polys: &[MPoly], rank: usize, nvars: usize, tail_vars: usize, what: &str) -> Result<()> {
    if polys.len() != rank {
        return Err(Error::InvalidGroup(format!("{} {what} polynomials for rank {rank}", polys.len())));
    }
    for (i, p) in polys.iter().enumerate() {
        if p.nvars() != nvars {
            return Err(Error::InvalidGroup(format!("{what} polynomial {} has {} variables", i + 1, p.nvars())));
        }
        for (_, exps) in p.to_terms() {
            let bad = (0..tail_vars).any(|block| {
                (i..rank).any(|j| exps.get(block * rank + j).is_some_and(|&e| e > 0))
            });
            if bad {
                return Err(Error::InvalidGroup(format!(
                    "{what} polynomial {} depends on coordinates at or after its own index",
                    i + 1
                )));
            }
        }
    }
    Ok(())
}

impl MalcevLaw {
    pub fn from_model(model: MatrixModel) -> Self {
        MalcevLaw {
            rank: model.basis.len(),
            model: Some(model),
            product_polys: None,
            power_polys: None,
        }
    }

    pub fn from_basis(basis: Vec<UniMatrix>) -> Result<Self> {
        Ok(Self::from_model(MatrixModel::new(basis)?))
    }

    /// A law given only by polynomials; it cannot be checked against a model.
    pub fn from_polynomials(rank: usize, product: Vec<MPoly>, power: Vec<MPoly>) -> Result<Self> {
        MalcevLaw {
            rank,
            model: None,
            product_polys: None,
            power_polys: None,
        }
        .with_polynomials(product, power)
    }

    pub fn with_polynomials(mut self, product: Vec<MPoly>, power: Vec<MPoly>) -> Result<Self> {
        check_triangular(&product, self.rank, 2 * self.rank, 2, "product")?;
        check_triangular(&power, self.rank, self.rank + 1, 1, "power")?;
        self.product_polys = Some(product);
        self.power_polys = Some(power);
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn model(&self) -> Option<&MatrixModel> {
        self.model.as_ref()
    }

    pub fn product_polys(&self) -> Option<&[MPoly]> {
        self.product_polys.as_deref()
    }

    pub fn power_polys(&self) -> Option<&[MPoly]> {
        self.power_polys.as_deref()
    }

    /// False for polynomial-only laws, which nothing can be checked against.
    pub fn has_oracle(&self) -> bool {
        self.model.is_some()
    }

    fn require_model(&self) -> Result<&MatrixModel> {
        self.model
            .as_ref()
            .ok_or_else(|| Error::Domain("law has no matrix model".into()))
    }

    fn check_len(&self, u: &LatticeElement) -> Result<()> {
        if u.len() != self.rank {
            return Err(Error::Dimension(format!(
                "{} coordinates for a rank {} law",
                u.len(),
                self.rank
            )));
        }
        Ok(())
    }

    pub fn identity(&self) -> LatticeElement {
        LatticeElement::identity(self.rank)
    }

    /// `a₁^{x₁}···a_k^{x_k}` in the matrix model.
    pub fn matrix_from_coordinates(&self, u: &LatticeElement) -> Result<UniMatrix> {
        self.check_len(u)?;
        let model = self.require_model()?;
        let mut acc = UniMatrix::identity(model.ambient_dim());
        for (a, x) in model.basis.iter().zip(u.coords()) {
            if !x.is_zero() {
                acc = acc.mul(&a.rational_power(x))?;
            }
        }
        Ok(acc)
    }

    /// Reads Mal'cev coordinates off a model matrix by peeling one basis
    /// element at a time: modulo `n_{i+1}`, the residual's log is
    /// `x_i log a_i`.
    pub fn coordinates_from_matrix(&self, g: &UniMatrix) -> Result<LatticeElement> {
        let model = self.require_model()?;
        if g.dim() != model.ambient_dim() {
            return Err(Error::Dimension(format!(
                "{0}x{0} matrix for a {1}x{1} model",
                g.dim(),
                model.ambient_dim()
            )));
        }
        let mut residual = g.clone();
        let mut coords = Vec::with_capacity(self.rank);
        for (i, a) in model.basis.iter().enumerate() {
            let log_coords = model
                .algebra
                .coordinates(&residual.log())
                .map_err(|_| Error::NotInGroup(format!("{g} is outside the completion")))?;
            if log_coords[..i].iter().any(|c| !c.is_zero()) {
                return Err(Error::NotInGroup(format!("{g} does not factor along the basis")));
            }
            let x = log_coords[i].clone();
            if !x.is_zero() {
                residual = a.rational_power(&-x.clone()).mul(&residual)?;
            }
            coords.push(x);
        }
        if !residual.is_identity() {
            return Err(Error::NotInGroup(format!("{g} leaves residual {residual}")));
        }
        Ok(LatticeElement(coords))
    }

    pub fn mc_multiply(&self, u: &LatticeElement, v: &LatticeElement) -> Result<LatticeElement> {
        self.check_len(u)?;
        self.check_len(v)?;
        if let Some(polys) = &self.product_polys {
            let point: Vec<Rational> = u.coords().iter().chain(v.coords()).cloned().collect();
            let coords = polys
                .iter()
                .enumerate()
                .map(|(i, p)| Ok(&u.0[i] + &v.0[i] + p.eval(&point)?))
                .collect::<Result<_>>()?;
            return Ok(LatticeElement(coords));
        }
        let g = self.matrix_from_coordinates(u)?.mul(&self.matrix_from_coordinates(v)?)?;
        self.coordinates_from_matrix(&g)
    }

    /// `u^m` for rational `m`; non-integral `m` yields completion elements.
    pub fn mc_power(&self, u: &LatticeElement, m: &Rational) -> Result<LatticeElement> {
        self.check_len(u)?;
        if let Some(polys) = &self.power_polys {
            let mut point = u.0.clone();
            point.push(m.clone());
            let coords = polys
                .iter()
                .enumerate()
                .map(|(i, q)| Ok(m * &u.0[i] + q.eval(&point)?))
                .collect::<Result<_>>()?;
            return Ok(LatticeElement(coords));
        }
        let g = self.matrix_from_coordinates(u)?.rational_power(m);
        self.coordinates_from_matrix(&g)
    }

    pub fn mc_inverse(&self, u: &LatticeElement) -> Result<LatticeElement> {
        self.mc_power(u, &int(-1))
    }

    pub fn lattice_contains(&self, g: &UniMatrix) -> Result<bool> {
        Ok(self.coordinates_from_matrix(g)?.is_integral())
    }

    pub fn lattice_contains_element(&self, u: &LatticeElement) -> Result<bool> {
        self.check_len(u)?;
        Ok(u.is_integral())
    }

    /// Membership in the isolator of `γ_i(N)`, i.e. `log g ∈ γ_i(n^Q)`.
    pub fn isolator_contains(&self, i: usize, g: &UniMatrix) -> Result<bool> {
        if i < 1 {
            return Err(Error::Domain("lower central series is indexed from 1".into()));
        }
        if !self.lattice_contains(g)? {
            return Err(Error::NotInGroup(format!("{g} is not a lattice element")));
        }
        let series = lower_central_series(self.require_model()?.algebra())?;
        let log = g.log();
        Ok(match series.get(i - 1) {
            Some(term) => term.contains(&log),
            None => log.is_zero(),
        })
    }

    /// Checks associativity, identity, inverses and (when both exist)
    /// agreement between the polynomials and the matrix model.
    pub fn verify_law_axioms_sampled(
        &self,
        samples: &[(LatticeElement, LatticeElement, LatticeElement)],
    ) -> Result<LawReport> {
        let mut report = LawReport {
            samples_checked: 0,
            verified_against_model: self.model.is_some(),
            counterexample: None,
        };
        let id = self.identity();
        for (u, v, w) in samples {
            report.samples_checked += 1;
            let fail = |axiom: &str, witness: Vec<LatticeElement>| LawViolation {
                axiom: axiom.to_string(),
                witness,
            };
            let uv_w = self.mc_multiply(&self.mc_multiply(u, v)?, w)?;
            let u_vw = self.mc_multiply(u, &self.mc_multiply(v, w)?)?;
            if uv_w != u_vw {
                report.counterexample = Some(fail("associativity", vec![u.clone(), v.clone(), w.clone()]));
                break;
            }
            if &self.mc_multiply(&id, u)? != u || &self.mc_multiply(u, &id)? != u {
                report.counterexample = Some(fail("identity", vec![u.clone()]));
                break;
            }
            if !self.mc_multiply(u, &self.mc_inverse(u)?)?.is_identity() {
                report.counterexample = Some(fail("inverse", vec![u.clone()]));
                break;
            }
            if self.model.is_some() && self.product_polys.is_some() {
                let gm = self.matrix_from_coordinates(u)?.mul(&self.matrix_from_coordinates(v)?)?;
                if self.coordinates_from_matrix(&gm)? != self.mc_multiply(u, v)? {
                    report.counterexample =
                        Some(fail("matrix_model_product", vec![u.clone(), v.clone(), w.clone()]));
                    break;
                }
                let m = int(3);
                let gp = self.matrix_from_coordinates(w)?.rational_power(&m);
                if self.coordinates_from_matrix(&gp)? != self.mc_power(w, &m)? {
                    report.counterexample = Some(fail("matrix_model_power", vec![w.clone()]));
                    break;
                }
            }
        }
        Ok(report)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawViolation {
    pub axiom: String,
    pub witness: Vec<LatticeElement>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub samples_checked: usize,
    /// False when the law has no matrix model to serve as an oracle.
    pub verified_against_model: bool,
    pub counterexample: Option<LawViolation>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// A named lattice `N` (integer coordinates) inside its completion.
#[derive(Clone, Debug)]
pub struct Lattice {
    pub name: String,
    pub law: MalcevLaw,
}

impl Lattice {
    pub fn rank(&self) -> usize {
        self.law.rank()
    }

    /// The rational Lie algebra spanned by the logs of the basis.
    pub fn algebra(&self) -> Result<&LieSubspace> {
        Ok(self.law.require_model()?.algebra())
    }
}
