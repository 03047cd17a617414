//! Fixed-point invariants and dynamics of affine self-maps of
//! infra-nilmanifolds, plus grading verification.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::acg::ACGroup;
use crate::affinerep::AffineElement;
use crate::error::{Error, Result};
use crate::exactmath::{det, SpectralCertificate};
use crate::malcev::LatticeElement;
use crate::scalar::Rational;
use crate::unipotent::{LieSubspace, NilMatrix};
use crate::QMatrix;

/// `det(I - α*δ*)` for one holonomy element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HolonomyTerm {
    pub holonomy_index: usize,
    pub differential: QMatrix,
    #[serde(with = "crate::scalar::serde_rational")]
    pub det: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    #[serde(with = "crate::scalar::serde_rational")]
    pub lefschetz: Rational,
    #[serde(with = "crate::scalar::serde_rational")]
    pub nielsen: Rational,
    pub per_holonomy_terms: Vec<HolonomyTerm>,
    pub anosov_relation: bool,
    pub orientable: bool,
}

/// Lefschetz and Nielsen numbers by averaging `det(I - α*δ*)` over the
/// holonomy group.
pub fn averaging_invariants(g: &ACGroup, map: &AffineElement) -> Result<InvariantReport> {
    let check = g.induces_self_map(map)?;
    if let Some(i) = check.failure {
        return Err(Error::InvalidMap(format!(
            "conjugate of generator {i} is not in the group"
        )));
    }
    let n = g.dimension();
    let delta = map.differential();
    let mut terms = Vec::with_capacity(g.holonomy().order());
    for (i, alpha) in g.holonomy().elements().iter().enumerate() {
        let d = det(&QMatrix::identity(n).checked_sub(&alpha.checked_mul(delta)?)?)?;
        terms.push(HolonomyTerm {
            holonomy_index: i,
            differential: alpha.clone(),
            det: d,
        });
    }
    let order = Rational::from_integer(terms.len().into());
    let sum: Rational = terms.iter().map(|t| t.det.clone()).sum();
    let abs_sum: Rational = terms.iter().map(|t| t.det.abs()).sum();
    let positive = terms.iter().any(|t| t.det.is_positive());
    let negative = terms.iter().any(|t| t.det.is_negative());
    Ok(InvariantReport {
        lefschetz: sum / &order,
        nielsen: abs_sum / &order,
        per_holonomy_terms: terms,
        anosov_relation: !(positive && negative),
        orientable: is_orientable(g)?,
    })
}

/// `N(f) = |L(f)|`, decided by sign uniformity of the averaged terms.
pub fn anosov_relation_check(g: &ACGroup, map: &AffineElement) -> Result<bool> {
    Ok(averaging_invariants(g, map)?.anosov_relation)
}

/// Every holonomy differential has determinant one.
pub fn is_orientable(g: &ACGroup) -> Result<bool> {
    for alpha in g.holonomy().elements() {
        if !det(alpha)?.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Eigenvalue-location verdicts for a differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapClassification {
    /// Every eigenvalue has modulus greater than one.
    pub expanding: bool,
    /// No eigenvalue on the unit circle, nonzero determinant, and (when a
    /// diffeomorphism was requested) two-sided self-map validity.
    pub hyperbolic: bool,
    pub self_map_valid: bool,
    /// `Some` only when the two-sided check was requested.
    pub diffeomorphism_valid: Option<bool>,
    pub certificate: SpectralCertificate,
}

/// Classifies `δ*` alone; self-map validity is left false.
pub fn classify_differential(delta: &QMatrix) -> Result<MapClassification> {
    let certificate = SpectralCertificate::for_matrix(delta)?;
    let invertible = !certificate.char_poly.coeff(0).is_zero();
    Ok(MapClassification {
        expanding: certificate.all_outside_unit_disk,
        hyperbolic: invertible && !certificate.has_unit_circle_root,
        self_map_valid: false,
        diffeomorphism_valid: None,
        certificate,
    })
}

/// Classifies the affine map `(d, δ*)` of `g`. Invalid maps are still
/// classified; validity is reported alongside.
pub fn classify_dynamics(
    g: &ACGroup,
    translation: &LatticeElement,
    delta: &QMatrix,
    require_diffeomorphism: bool,
) -> Result<MapClassification> {
    let mut c = classify_differential(delta)?;
    let map = match g.affine_map(translation, delta) {
        Ok(m) => Some(m),
        Err(Error::InvalidMap(_)) => None,
        Err(e) => return Err(e),
    };
    if let Some(map) = &map {
        c.self_map_valid = g.induces_self_map(map)?.holds;
    }
    if require_diffeomorphism {
        let valid = match &map {
            Some(m) => g.induces_diffeomorphism(m)?.holds,
            None => false,
        };
        c.diffeomorphism_valid = Some(valid);
        c.hyperbolic &= valid;
    }
    Ok(c)
}

/// `g = ⊕ g_i`, each degree listed once.
#[derive(Clone, Debug)]
pub struct Grading {
    pub components: Vec<(i64, LieSubspace)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GradingViolationKind {
    Bracket,
    Positivity,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GradingViolation {
    pub kind: GradingViolationKind,
    /// `(i, j)` for a bracket `[g_i, g_j]`; `(i, i)` for a positivity failure.
    pub degrees: (i64, i64),
    /// The offending bracket or component vector.
    pub witness: QMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GradingCheck {
    pub valid: bool,
    pub violation: Option<GradingViolation>,
}

/// Checks that `grading` is a Lie algebra grading of `algebra`, and
/// positive if `require_positive`.
pub fn verify_grading(algebra: &LieSubspace, grading: &Grading, require_positive: bool) -> Result<GradingCheck> {
    let malformed = |m: String| Err(Error::MalformedGrading(m));
    let mut all = Vec::new();
    for (i, (deg, space)) in grading.components.iter().enumerate() {
        if grading.components[..i].iter().any(|(d, _)| d == deg) {
            return malformed(format!("degree {deg} listed twice"));
        }
        if space.ambient_dim() != algebra.ambient_dim() {
            return malformed(format!("component {deg} has the wrong matrix size"));
        }
        if !space.is_subspace_of(algebra) {
            return malformed(format!("component {deg} is not inside the algebra"));
        }
        all.extend(space.basis().iter().cloned());
    }
    let sum = LieSubspace::new(algebra.ambient_dim(), all)
        .map_err(|_| Error::MalformedGrading("components are not independent".into()))?;
    if sum.dim() != algebra.dim() {
        return malformed("components do not span the algebra".into());
    }
    let found = |kind, degrees, witness: &NilMatrix| GradingCheck {
        valid: false,
        violation: Some(GradingViolation {
            kind,
            degrees,
            witness: witness.matrix().clone(),
        }),
    };
    if require_positive {
        for (deg, space) in &grading.components {
            if *deg <= 0 {
                if let Some(v) = space.basis().first() {
                    return Ok(found(GradingViolationKind::Positivity, (*deg, *deg), v));
                }
            }
        }
    }
    let zero = LieSubspace::new(algebra.ambient_dim(), Vec::new())?;
    for (i, (di, si)) in grading.components.iter().enumerate() {
        for (dj, sj) in &grading.components[i..] {
            let target = grading
                .components
                .iter()
                .find(|(d, _)| *d == di + dj)
                .map_or(&zero, |(_, s)| s);
            for x in si.basis() {
                for y in sj.basis() {
                    let br = x.bracket(y)?;
                    if !target.contains(&br) {
                        return Ok(found(GradingViolationKind::Bracket, (*di, *dj), &br));
                    }
                }
            }
        }
    }
    Ok(GradingCheck {
        valid: true,
        violation: None,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentFile {
    degree: i64,
    basis: Vec<QMatrix>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GradingFile {
    algebra: Vec<QMatrix>,
    components: Vec<ComponentFile>,
    #[serde(default)]
    require_positive: bool,
}

/// A grading problem read from JSON:
/// `{"algebra": [matrix...], "components": [{"degree": i, "basis": [matrix...]}], "require_positive": bool}`.
pub struct GradingInput {
    pub algebra: LieSubspace,
    pub grading: Grading,
    pub require_positive: bool,
}

fn nil_basis(dim: usize, ms: Vec<QMatrix>) -> Result<LieSubspace> {
    let basis = ms
        .into_iter()
        .map(|m| {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::MalformedGrading("matrices differ in size".into()));
            }
            NilMatrix::new(m).map_err(|e| Error::MalformedGrading(e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    LieSubspace::new(dim, basis).map_err(|e| Error::MalformedGrading(e.to_string()))
}

impl GradingInput {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: GradingFile = serde_json::from_str(text)?;
        let dim = file
            .algebra
            .first()
            .map(QMatrix::rows)
            .ok_or_else(|| Error::MalformedGrading("empty algebra".into()))?;
        let algebra = nil_basis(dim, file.algebra)?;
        let components = file
            .components
            .into_iter()
            .map(|c| Ok((c.degree, nil_basis(dim, c.basis)?)))
            .collect::<Result<_>>()?;
        Ok(GradingInput {
            algebra,
            grading: Grading { components },
            require_positive: file.require_positive,
        })
    }
}
