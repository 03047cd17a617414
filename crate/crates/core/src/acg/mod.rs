//! Almost-crystallographic groups as finite unions of lattice cosets inside
//! the affine representation.

mod catalog;

pub use catalog::{catalog_group, MapSpec, CATALOG_GROUPS};

use num_traits::Zero;
use serde::Serialize;

use crate::affinerep::{AffineElement, AffineRep};
use crate::error::{Error, Result};
use crate::malcev::{Lattice, LatticeElement};
use crate::scalar::Rational;
use crate::unipotent::nilpotency_class;
use crate::QMatrix;

/// Holonomy closure gives up after this many products.
pub const HOLONOMY_PRODUCT_BOUND: usize = 1000;

/// A finite group of differentials with its multiplication table.
#[derive(Clone, Debug, PartialEq)]
pub struct HolonomyGroup {
    elements: Vec<QMatrix>,
    /// `table[i][j]` is the index of `elements[i] · elements[j]`.
    table: Vec<Vec<usize>>,
}

impl HolonomyGroup {
    /// Closure of `generators` under multiplication, identity first and the
    /// generators next in the given order.
    pub fn generate(n: usize, generators: &[QMatrix], bound: usize) -> Result<Self> {
        let mut elements = vec![QMatrix::identity(n)];
        for g in generators {
            if !g.is_square() || g.rows() != n {
                return Err(Error::Dimension("holonomy generators differ in size".into()));
            }
            if !elements.contains(g) {
                elements.push(g.clone());
            }
        }
        let mut products = 0;
        let mut next = 0;
        while next < elements.len() {
            let current = elements[next].clone();
            for g in generators {
                products += 1;
                if products > bound {
                    return Err(Error::NotFinite(bound));
                }
                let p = current.checked_mul(g)?;
                if !elements.contains(&p) {
                    elements.push(p);
                }
            }
            next += 1;
        }
        let table = elements
            .iter()
            .map(|a| {
                elements
                    .iter()
                    .map(|b| {
                        let p = a * b;
                        elements.iter().position(|e| *e == p).expect("closed")
                    })
                    .collect()
            })
            .collect();
        Ok(HolonomyGroup { elements, table })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[QMatrix] {
        &self.elements
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn index_of(&self, m: &QMatrix) -> Option<usize> {
        self.elements.iter().position(|e| e == m)
    }

    /// Order of `elements[i]`, read off the multiplication table.
    pub fn element_order(&self, i: usize) -> usize {
        let mut k = 1;
        let mut cur = i;
        while cur != 0 {
            cur = self.table[cur][i];
            k += 1;
        }
        k
    }
}

/// A lattice coset `λ·γ_k` recognized by [`ACGroup::membership`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub member: bool,
    pub coset: Option<usize>,
    pub lattice_part: Option<LatticeElement>,
}

impl Membership {
    fn outside() -> Self {
        Membership {
            member: false,
            coset: None,
            lattice_part: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionWitness {
    pub lattice_part: LatticeElement,
    pub coset: usize,
    pub order: usize,
}

/// Result of checking a generating set against an identity; `failure` is the
/// first generator index that breaks it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorCheck {
    pub holds: bool,
    pub failure: Option<usize>,
}

impl GeneratorCheck {
    fn from_failure(failure: Option<usize>) -> Self {
        GeneratorCheck {
            holds: failure.is_none(),
            failure,
        }
    }
}

/// `Γ = ⋃_k N·γ_k` with `γ₀ = 1`.
#[derive(Clone, Debug)]
pub struct ACGroup {
    name: String,
    lattice: Lattice,
    rep: AffineRep,
    class: usize,
    translations: Vec<LatticeElement>,
    cosets: Vec<AffineElement>,
    holonomy: HolonomyGroup,
}

impl ACGroup {
    /// Validates and builds a group from coset representatives given as
    /// (Mal'cev translation, differential in the adapted basis).
    pub fn new(
        name: impl Into<String>,
        lattice: Lattice,
        rep: AffineRep,
        cosets: Vec<(LatticeElement, QMatrix)>,
    ) -> Result<Self> {
        let name = name.into();
        let algebra = lattice.algebra()?;
        if rep.basis() != algebra {
            return Err(Error::InvalidGroup("adapted basis does not span the lattice's algebra".into()));
        }
        let class = nilpotency_class(algebra)?;
        let Some((t0, d0)) = cosets.first() else {
            return Err(Error::InvalidGroup("no cosets".into()));
        };
        if !t0.is_identity() || !d0.is_identity() {
            return Err(Error::InvalidGroup("the first coset must be the identity".into()));
        }
        let mut translations = Vec::with_capacity(cosets.len());
        let mut reps = Vec::with_capacity(cosets.len());
        for (t, d) in cosets {
            let g = lattice.law.matrix_from_coordinates(&t)?;
            reps.push(AffineElement::new(&rep, g, d)?);
            translations.push(t);
        }
        let diffs: Vec<QMatrix> = reps.iter().map(|e| e.differential().clone()).collect();
        for (i, d) in diffs.iter().enumerate() {
            if let Some(j) = diffs[..i].iter().position(|e| e == d) {
                return Err(Error::InvalidGroup(format!("cosets {j} and {i} share a differential")));
            }
        }
        let holonomy = HolonomyGroup::generate(rep.dim(), &diffs[1..], HOLONOMY_PRODUCT_BOUND)?;
        if holonomy.order() != diffs.len() {
            return Err(Error::InvalidGroup(format!(
                "differentials generate a holonomy group of order {} but {} cosets are listed",
                holonomy.order(),
                diffs.len()
            )));
        }
        let group = ACGroup {
            name,
            lattice,
            rep,
            class,
            translations,
            cosets: reps,
            holonomy,
        };
        group.check_closure()?;
        Ok(group)
    }

    /// Normality of `N` on generators and closure of coset products.
    fn check_closure(&self) -> Result<()> {
        let lattice_gens = self.lattice_generators()?;
        for (k, g) in self.cosets.iter().enumerate() {
            let g_inv = g.inverse(&self.rep)?;
            for (i, a) in lattice_gens.iter().enumerate() {
                let conj = g.embedded() * &(a.embedded() * g_inv.embedded());
                let m = self.membership_matrix(&conj)?;
                if !m.member || m.coset != Some(0) {
                    return Err(Error::InvalidGroup(format!(
                        "coset {k} does not normalize lattice generator {i}"
                    )));
                }
            }
            for (j, h) in self.cosets.iter().enumerate() {
                let m = self.membership_matrix(&(g.embedded() * h.embedded()))?;
                if !m.member {
                    return Err(Error::InvalidGroup(format!(
                        "product of coset representatives {k} and {j} leaves the group"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn rep(&self) -> &AffineRep {
        &self.rep
    }

    pub fn dimension(&self) -> usize {
        self.rep.dim()
    }

    pub fn nilpotency_class(&self) -> usize {
        self.class
    }

    pub fn coset_count(&self) -> usize {
        self.cosets.len()
    }

    pub fn coset_reps(&self) -> &[AffineElement] {
        &self.cosets
    }

    /// Mal'cev coordinates of each coset representative's translation.
    pub fn coset_translations(&self) -> &[LatticeElement] {
        &self.translations
    }

    pub fn holonomy(&self) -> &HolonomyGroup {
        &self.holonomy
    }

    /// Builds an affine map `(d, δ*)` with `d` in Mal'cev coordinates.
    pub fn affine_map(&self, translation: &LatticeElement, differential: &QMatrix) -> Result<AffineElement> {
        let g = self.lattice.law.matrix_from_coordinates(translation)?;
        match AffineElement::new(&self.rep, g, differential.clone()) {
            Err(Error::NotAnAutomorphism(msg)) => Err(Error::InvalidMap(msg)),
            other => other,
        }
    }

    /// `λ·γ_k`.
    pub fn element(&self, lattice_part: &LatticeElement, coset: usize) -> Result<AffineElement> {
        let rep = self
            .cosets
            .get(coset)
            .ok_or_else(|| Error::Domain(format!("coset index {coset} out of range")))?;
        let lam = self.lattice_translation(lattice_part)?;
        lam.mul(&self.rep, rep)
    }

    fn lattice_translation(&self, u: &LatticeElement) -> Result<AffineElement> {
        AffineElement::pure_translation(&self.rep, self.lattice.law.matrix_from_coordinates(u)?)
    }

    /// Pure translations by the Mal'cev basis of `N`.
    pub fn lattice_generators(&self) -> Result<Vec<AffineElement>> {
        (0..self.lattice.rank())
            .map(|i| {
                let mut e = vec![Rational::zero(); self.lattice.rank()];
                e[i] = Rational::from_integer(1.into());
                self.lattice_translation(&LatticeElement(e))
            })
            .collect()
    }

    /// Lattice basis followed by the non-identity coset representatives.
    pub fn generators(&self) -> Result<Vec<AffineElement>> {
        let mut gens = self.lattice_generators()?;
        gens.extend(self.cosets[1..].iter().cloned());
        Ok(gens)
    }

    pub fn membership(&self, e: &AffineElement) -> Result<Membership> {
        self.membership_matrix(e.embedded())
    }

    /// Finds the coset with matching differential, divides off its
    /// representative and tests the remainder for lattice membership.
    pub fn membership_matrix(&self, m: &QMatrix) -> Result<Membership> {
        let n = self.dimension();
        if m.rows() != n + 1 || m.cols() != n + 1 {
            return Err(Error::Dimension(format!(
                "{}x{} matrix for a group of dimension {n}",
                m.rows(),
                m.cols()
            )));
        }
        let Ok(e) = AffineElement::from_embedded(&self.rep, m) else {
            return Ok(Membership::outside());
        };
        let Some(k) = self.cosets.iter().position(|c| c.differential() == e.differential()) else {
            return Ok(Membership::outside());
        };
        let lam = e.mul(&self.rep, &self.cosets[k].inverse(&self.rep)?)?;
        let coords = match self.lattice.law.coordinates_from_matrix(lam.translation()) {
            Ok(c) => c,
            Err(Error::NotInGroup(_)) => return Ok(Membership::outside()),
            Err(err) => return Err(err),
        };
        if !coords.is_integral() {
            return Ok(Membership::outside());
        }
        Ok(Membership {
            member: true,
            coset: Some(k),
            lattice_part: Some(coords),
        })
    }

    /// Order of `e`, or `None` when infinite: `e` has finite order iff
    /// `e^m = 1` for `m` the order of its holonomy image, since `N` is
    /// torsion free.
    pub fn torsion_test(&self, e: &AffineElement) -> Result<Option<usize>> {
        let m = self.membership(e)?;
        if !m.member {
            return Err(Error::NotInGroup("element is not in the group".into()));
        }
        let idx = self
            .holonomy
            .index_of(e.differential())
            .expect("member differentials lie in the holonomy group");
        let order = self.holonomy.element_order(idx);
        Ok(e.embedded().pow(order as u64)?.is_identity().then_some(order))
    }

    /// Searches `λ·γ_k` for `λ` in the box `[-bound, bound]^rank`
    /// (lexicographic order) and each non-identity coset `k`; returns the
    /// first element of finite order. `None` only means none in the box.
    pub fn torsion_witness_search(&self, bound: u32) -> Result<Option<TorsionWitness>> {
        let rank = self.lattice.rank();
        let b = i64::from(bound);
        // embedded powers a_i^x for x in [-b, b], so λ costs rank products
        let gens = self.lattice_generators()?;
        let mut powers: Vec<Vec<QMatrix>> = Vec::with_capacity(rank);
        for g in &gens {
            let inv = g.embedded().inverse()?;
            let mut row = vec![QMatrix::identity(self.dimension() + 1); (2 * b + 1) as usize];
            for x in 1..=b as usize {
                row[b as usize + x] = &row[b as usize + x - 1] * g.embedded();
                row[b as usize - x] = &row[b as usize - x + 1] * &inv;
            }
            powers.push(row);
        }
        let orders: Vec<usize> = (0..self.cosets.len())
            .map(|k| self.holonomy.element_order(k))
            .collect();
        let mut point = vec![-b; rank];
        loop {
            let lam = point
                .iter()
                .zip(&powers)
                .fold(QMatrix::identity(self.dimension() + 1), |acc, (&x, row)| {
                    &acc * &row[(x + b) as usize]
                });
            for (k, (coset, &order)) in self.cosets.iter().zip(&orders).enumerate().skip(1) {
                let e = &lam * coset.embedded();
                if e.pow(order as u64)?.is_identity() {
                    return Ok(Some(TorsionWitness {
                        lattice_part: LatticeElement::from_i64(&point),
                        coset: k,
                        order,
                    }));
                }
            }
            // odometer increment, last coordinate fastest
            let mut i = rank;
            loop {
                if i == 0 {
                    return Ok(None);
                }
                i -= 1;
                if point[i] < b {
                    point[i] += 1;
                    break;
                }
                point[i] = -b;
            }
        }
    }

    fn conjugates_are_members(&self, by: &AffineElement) -> Result<Option<usize>> {
        let inv = by.inverse(&self.rep)?;
        for (i, g) in self.generators()?.iter().enumerate() {
            let conj = by.embedded() * &(g.embedded() * inv.embedded());
            if !self.membership_matrix(&conj)?.member {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// `(d,δ) Γ (d,δ)⁻¹ ⊆ Γ`, checked on [`generators`](Self::generators).
    pub fn induces_self_map(&self, map: &AffineElement) -> Result<GeneratorCheck> {
        if map.differential().det()?.is_zero() {
            return Err(Error::InvalidMap("singular differential".into()));
        }
        Ok(GeneratorCheck::from_failure(self.conjugates_are_members(map)?))
    }

    /// `(d,δ) Γ (d,δ)⁻¹ = Γ`: the inclusion for the map and its inverse.
    pub fn induces_diffeomorphism(&self, map: &AffineElement) -> Result<GeneratorCheck> {
        let forward = self.induces_self_map(map)?;
        if !forward.holds {
            return Ok(forward);
        }
        let inv = map.inverse(&self.rep)?;
        Ok(GeneratorCheck::from_failure(self.conjugates_are_members(&inv)?))
    }

    /// `θ(γ)·(d,δ) = (d,δ)·γ` for every generator `γ` of `self`, where
    /// `theta[i]` is the image of generator `i` in `target`.
    pub fn verify_semiconjugacy(
        &self,
        target: &ACGroup,
        theta: &[AffineElement],
        map: &AffineElement,
    ) -> Result<GeneratorCheck> {
        let gens = self.generators()?;
        if theta.len() != gens.len() {
            return Err(Error::Dimension(format!(
                "{} generator images for {} generators",
                theta.len(),
                gens.len()
            )));
        }
        if target.dimension() != self.dimension() {
            return Err(Error::Dimension("groups act on spaces of different dimension".into()));
        }
        for (i, t) in theta.iter().enumerate() {
            if !target.membership(t)?.member {
                return Err(Error::NotAHomomorphism(format!("image of generator {i} is not in the target group")));
            }
        }
        let failure = gens.iter().zip(theta).position(|(g, t)| {
            t.embedded() * map.embedded() != map.embedded() * g.embedded()
        });
        Ok(GeneratorCheck::from_failure(failure))
    }
}
