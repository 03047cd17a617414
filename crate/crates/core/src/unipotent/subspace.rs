use std::fmt;

use num_traits::Zero;

use super::{NilMatrix, UniMatrix};
use crate::error::{Error, Result};
use crate::scalar::Rational;
use crate::QMatrix;

/// A subspace of `NT_n(Q)` with an ordered basis.
///
/// Coordinates are always taken with respect to the stored basis; equality
/// compares the spans (reduced row-echelon forms), not the bases.
#[derive(Clone)]
pub struct LieSubspace {
    ambient_dim: usize,
    basis: Vec<NilMatrix>,
    /// Flattened positions at which the basis restricts to an invertible
    /// square matrix, and that inverse.
    pivots: Vec<usize>,
    solve: Option<QMatrix>,
    rref: Option<QMatrix>,
}

fn flatten(m: &NilMatrix) -> Vec<Rational> {
    m.matrix().entries().to_vec()
}

fn unflatten(dim: usize, v: Vec<Rational>) -> NilMatrix {
    NilMatrix::new(QMatrix::new(dim, dim, v).expect("dim^2 entries")).expect("strictly upper")
}

impl LieSubspace {
    /// Subspace with the given basis, which must be linearly independent.
    pub fn new(ambient_dim: usize, basis: Vec<NilMatrix>) -> Result<Self> {
        if let Some(b) = basis.iter().find(|b| b.dim() != ambient_dim) {
            return Err(Error::Dimension(format!(
                "{0}x{0} basis matrix in a {1}x{1} algebra",
                b.dim(),
                ambient_dim
            )));
        }
        if basis.is_empty() {
            return Ok(LieSubspace {
                ambient_dim,
                basis,
                pivots: Vec::new(),
                solve: None,
                rref: None,
            });
        }
        let rows = QMatrix::from_rows(basis.iter().map(flatten).collect())?;
        let (rref, pivots) = rows.rref();
        if pivots.len() < basis.len() {
            return Err(Error::DegenerateInput("basis is linearly dependent".into()));
        }
        let k = basis.len();
        let mut restricted = QMatrix::zeros(k, k);
        for (col, b) in basis.iter().enumerate() {
            let entries = b.matrix().entries();
            for (row, &p) in pivots.iter().enumerate() {
                restricted[(row, col)] = entries[p].clone();
            }
        }
        let solve = restricted.inverse()?;
        Ok(LieSubspace {
            ambient_dim,
            basis,
            pivots,
            solve: Some(solve),
            rref: Some(rref.block(0, k, 0, ambient_dim * ambient_dim)),
        })
    }

    /// Span of arbitrary vectors, keeping the first independent ones in order.
    pub fn span_of(ambient_dim: usize, vectors: &[NilMatrix]) -> Result<Self> {
        let mut kept: Vec<NilMatrix> = Vec::new();
        let mut current = LieSubspace::new(ambient_dim, Vec::new())?;
        for v in vectors {
            if v.dim() != ambient_dim {
                return Err(Error::Dimension("vector of the wrong size".into()));
            }
            if !current.contains(v) {
                kept.push(v.clone());
                current = LieSubspace::new(ambient_dim, kept.clone())?;
            }
        }
        Ok(current)
    }

    /// Span of `vectors` with the reduced row-echelon basis (pivot order by
    /// flattened index). Deterministic regardless of input order.
    pub fn echelon_span(ambient_dim: usize, vectors: &[NilMatrix]) -> Result<Self> {
        let nonzero: Vec<Vec<Rational>> = vectors.iter().filter(|v| !v.is_zero()).map(flatten).collect();
        if nonzero.is_empty() {
            return LieSubspace::new(ambient_dim, Vec::new());
        }
        let (rref, pivots) = QMatrix::from_rows(nonzero)?.rref();
        let basis = (0..pivots.len())
            .map(|i| unflatten(ambient_dim, rref.row(i).to_vec()))
            .collect();
        LieSubspace::new(ambient_dim, basis)
    }

    /// All of `NT_n(Q)`, basis `E_ij` in row-major order.
    pub fn full_nilpotent(n: usize) -> Self {
        let basis = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| NilMatrix::elementary(n, i, j))
            .collect();
        LieSubspace::new(n, basis).expect("elementary matrices are independent")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[NilMatrix] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Coordinates of `v` in the stored basis.
    pub fn coordinates(&self, v: &NilMatrix) -> Result<Vec<Rational>> {
        if v.dim() != self.ambient_dim {
            return Err(Error::Dimension("vector of the wrong size".into()));
        }
        let Some(solve) = &self.solve else {
            return if v.is_zero() {
                Ok(Vec::new())
            } else {
                Err(Error::Span(format!("{v} is not in the zero subspace")))
            };
        };
        let entries = v.matrix().entries();
        let restricted: Vec<Rational> = self.pivots.iter().map(|&p| entries[p].clone()).collect();
        let coords = solve.mul_vec(&restricted)?;
        if &self.combine(&coords)? != v {
            return Err(Error::Span(format!("{v} is not in the span")));
        }
        Ok(coords)
    }

    pub fn contains(&self, v: &NilMatrix) -> bool {
        self.coordinates(v).is_ok()
    }

    /// `Σ coords[i] · basis[i]`.
    pub fn combine(&self, coords: &[Rational]) -> Result<NilMatrix> {
        if coords.len() != self.basis.len() {
            return Err(Error::Dimension(format!(
                "{} coordinates for a {}-dimensional subspace",
                coords.len(),
                self.basis.len()
            )));
        }
        let mut acc = QMatrix::zeros(self.ambient_dim, self.ambient_dim);
        for (c, b) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                acc = &acc + &b.matrix().scale(c);
            }
        }
        NilMatrix::new(acc)
    }

    pub fn is_subspace_of(&self, other: &LieSubspace) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    /// First pair of basis vectors whose bracket leaves the span.
    pub fn bracket_escape(&self) -> Result<Option<(usize, usize, NilMatrix)>> {
        for i in 0..self.basis.len() {
            for j in i + 1..self.basis.len() {
                let br = self.basis[i].bracket(&self.basis[j])?;
                if !self.contains(&br) {
                    return Ok(Some((i, j, br)));
                }
            }
        }
        Ok(None)
    }

    pub fn is_closed(&self) -> bool {
        matches!(self.bracket_escape(), Ok(None))
    }

    /// `span{[a, b] : a ∈ self, b ∈ other}`.
    pub fn bracket_with(&self, other: &LieSubspace) -> Result<LieSubspace> {
        let mut brackets = Vec::new();
        for a in &self.basis {
            for b in &other.basis {
                brackets.push(a.bracket(b)?);
            }
        }
        LieSubspace::echelon_span(self.ambient_dim, &brackets)
    }

    fn require_closed(&self) -> Result<()> {
        if let Some((i, j, br)) = self.bracket_escape()? {
            return Err(Error::NotClosed(format!(
                "[basis[{i}], basis[{j}]] = {br} is outside the span"
            )));
        }
        Ok(())
    }
}

impl PartialEq for LieSubspace {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.rref == other.rref
    }
}

impl fmt::Debug for LieSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LieSubspace")
            .field("ambient_dim", &self.ambient_dim)
            .field("basis", &self.basis)
            .finish()
    }
}

/// Matrix of `Y ↦ [x, Y]` in the ordered basis of `basis`.
pub fn ad_matrix(x: &NilMatrix, basis: &LieSubspace) -> Result<QMatrix> {
    let n = basis.dim();
    if n == 0 {
        return Err(Error::DegenerateInput("ad on the zero subspace".into()));
    }
    let mut out = QMatrix::zeros(n, n);
    for (j, b) in basis.basis().iter().enumerate() {
        let br = x.bracket(b)?;
        let coords = basis
            .coordinates(&br)
            .map_err(|_| Error::NotClosed(format!("[x, basis[{j}]] = {br} is outside the span")))?;
        for (i, c) in coords.into_iter().enumerate() {
            out[(i, j)] = c;
        }
    }
    Ok(out)
}

/// Nonzero terms `γ₁ ⊋ γ₂ ⊋ ...` of the lower central series.
pub fn lower_central_series(g: &LieSubspace) -> Result<Vec<LieSubspace>> {
    g.require_closed()?;
    let mut series = Vec::new();
    let mut term = g.clone();
    while !term.is_zero() {
        let next = g.bracket_with(&term)?;
        if next.dim() >= term.dim() {
            return Err(Error::DegenerateInput("lower central series does not descend".into()));
        }
        series.push(term);
        term = next;
    }
    Ok(series)
}

pub fn nilpotency_class(g: &LieSubspace) -> Result<usize> {
    Ok(lower_central_series(g)?.len())
}

/// Ordered basis listing `[g, g]` first, then a completion to `g`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdaptedBasis {
    pub space: LieSubspace,
    /// `dim [g, g]`; the first `derived_dim` basis vectors span it.
    pub derived_dim: usize,
}

/// Adapted basis of a Lie algebra of class at most two: the echelon basis
/// of `[g, g]`, then input basis vectors in order, skipping dependents.
pub fn adapted_basis_2step(g: &LieSubspace) -> Result<AdaptedBasis> {
    let class = nilpotency_class(g)?;
    if class > 2 {
        return Err(Error::ClassTooLarge { found: class, bound: 2 });
    }
    let derived = g.bracket_with(g)?;
    let mut vectors = derived.basis().to_vec();
    vectors.extend(g.basis().iter().cloned());
    let space = LieSubspace::span_of(g.ambient_dim(), &vectors)?;
    Ok(AdaptedBasis {
        derived_dim: derived.dim(),
        space,
    })
}

/// Matrix, in the given bases, of the linear map sending `log(domain[i])` to
/// `log(images[i])`. Fails unless that map is a well-defined Lie algebra
/// homomorphism.
pub fn differential_from_generator_images(
    domain: &[UniMatrix],
    images: &[UniMatrix],
    domain_basis: &LieSubspace,
    codomain_basis: &LieSubspace,
) -> Result<QMatrix> {
    if domain.len() != images.len() {
        return Err(Error::Dimension(format!(
            "{} generators but {} images",
            domain.len(),
            images.len()
        )));
    }
    let n = domain_basis.dim();
    let m = codomain_basis.dim();
    if n == 0 || m == 0 {
        return Err(Error::DegenerateInput("differential between zero algebras".into()));
    }
    let src: Vec<Vec<Rational>> = domain
        .iter()
        .map(|g| domain_basis.coordinates(&g.log()))
        .collect::<Result<_>>()?;
    let dst: Vec<Vec<Rational>> = images
        .iter()
        .map(|g| codomain_basis.coordinates(&g.log()))
        .collect::<Result<_>>()?;

    // pick generators whose logs form a basis
    let mut chosen = Vec::new();
    for (i, v) in src.iter().enumerate() {
        let mut rows: Vec<Vec<Rational>> = chosen.iter().map(|&c: &usize| src[c].clone()).collect();
        rows.push(v.clone());
        if QMatrix::from_rows(rows)?.rank() > chosen.len() {
            chosen.push(i);
        }
        if chosen.len() == n {
            break;
        }
    }
    if chosen.len() < n {
        return Err(Error::Span("generator logs do not span the algebra".into()));
    }
    let mut src_cols = QMatrix::zeros(n, n);
    let mut dst_cols = QMatrix::zeros(m, n);
    for (col, &i) in chosen.iter().enumerate() {
        for r in 0..n {
            src_cols[(r, col)] = src[i][r].clone();
        }
        for r in 0..m {
            dst_cols[(r, col)] = dst[i][r].clone();
        }
    }
    let t = dst_cols.checked_mul(&src_cols.inverse()?)?;

    for (i, (s, d)) in src.iter().zip(&dst).enumerate() {
        if &t.mul_vec(s)? != d {
            return Err(Error::NotAHomomorphism(format!(
                "image of generator {i} is inconsistent with the others"
            )));
        }
    }
    let image_of = |j: usize| codomain_basis.combine(&t.col(j));
    for i in 0..n {
        for j in i + 1..n {
            let br = domain_basis.basis()[i].bracket(&domain_basis.basis()[j])?;
            let lhs = codomain_basis.combine(&t.mul_vec(&domain_basis.coordinates(&br)?)?)?;
            let rhs = image_of(i)?.bracket(&image_of(j)?)?;
            if lhs != rhs {
                return Err(Error::NotAHomomorphism(format!(
                    "brackets of basis vectors {i} and {j} are not preserved"
                )));
            }
        }
    }
    Ok(t)
}
