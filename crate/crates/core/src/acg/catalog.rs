//! Built-in groups and the JSON catalog file format.

use serde::{Deserialize, Serialize};

use super::ACGroup;
use crate::affinerep::AffineRep;
use crate::error::{Error, Result};
use crate::malcev::{builtin_lattice, Lattice, LatticeElement, MPoly, MalcevLaw, RawPoly};
use crate::scalar::{frac, int};
use crate::unipotent::{NilMatrix, UniMatrix};
use crate::QMatrix;

/// Catalog names; parameterized entries are shown with their default.
pub const CATALOG_GROUPS: &[&str] = &[
    "torus(2)",
    "z2_extension(2)",
    "klein_bottle",
    "heis_semidirect",
    "heis_abb",
    "heis_lattice(1)",
];

/// Differential of the order-3 automorphism `a ↦ bc, b ↦ a⁻¹b⁻¹, c ↦ c` of
/// the Heisenberg group, in the adapted basis `(log c; log a, log b)`.
fn phi_star() -> QMatrix {
    QMatrix::from_rows(vec![
        vec![int(1), int(1), frac(-1, 2)],
        vec![int(0), int(0), int(-1)],
        vec![int(0), int(1), int(-1)],
    ])
    .expect("3x3")
}

fn split_name(name: &str) -> Result<(&str, Option<u32>)> {
    let name = name.trim();
    let Some(open) = name.find('(') else {
        return Ok((name, None));
    };
    let inner = name[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| Error::Catalog(name.to_string()))?;
    let n: u32 = inner
        .trim()
        .parse()
        .map_err(|_| Error::Catalog(name.to_string()))?;
    if n == 0 {
        return Err(Error::Catalog(name.to_string()));
    }
    Ok((name[..open].trim(), Some(n)))
}

/// Builds a catalog group, e.g. `klein_bottle` or `torus(3)`.
pub fn catalog_group(name: &str) -> Result<ACGroup> {
    let unknown = || Error::Catalog(name.to_string());
    let (base, param) = split_name(name)?;
    let zero = |k: usize| LatticeElement::identity(k);
    let (canonical, lattice, cosets) = match (base, param) {
        ("torus", Some(n)) => {
            let lat = builtin_lattice(&format!("free_abelian({n})"))?;
            (format!("torus({n})"), lat, vec![])
        }
        ("z2_extension", Some(n)) => {
            let lat = builtin_lattice(&format!("free_abelian({n})"))?;
            let minus = QMatrix::identity(n as usize).scale(&int(-1));
            (format!("z2_extension({n})"), lat, vec![(zero(n as usize), minus)])
        }
        ("klein_bottle", None) => {
            let lat = builtin_lattice("free_abelian(2)")?;
            let alpha = (
                LatticeElement(vec![int(0), frac(1, 2)]),
                QMatrix::diagonal(&[int(-1), int(1)]),
            );
            ("klein_bottle".to_string(), lat, vec![alpha])
        }
        ("heis_semidirect", None) => {
            let lat = builtin_lattice("heisenberg")?;
            let phi = phi_star();
            let cosets = vec![(zero(3), phi.clone()), (zero(3), &phi * &phi)];
            ("heis_semidirect".to_string(), lat, cosets)
        }
        ("heis_abb", None) => {
            // α = c^{1/3}φ and α² = c^{2/3}φ²
            let lat = builtin_lattice("heisenberg")?;
            let phi = phi_star();
            let cosets = vec![
                (LatticeElement(vec![int(0), int(0), frac(1, 3)]), phi.clone()),
                (LatticeElement(vec![int(0), int(0), frac(2, 3)]), &phi * &phi),
            ];
            ("heis_abb".to_string(), lat, cosets)
        }
        ("heis_lattice", Some(n)) => {
            let lat = builtin_lattice(&format!("heisenberg_n({n})"))?;
            (format!("heis_lattice({n})"), lat, vec![])
        }
        _ => return Err(unknown()),
    };
    let rep = AffineRep::new(lattice.algebra()?)?;
    let n = rep.dim();
    let mut all = vec![(zero(lattice.rank()), QMatrix::identity(n))];
    all.extend(cosets);
    ACGroup::new(canonical, lattice, rep, all)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeFile {
    rank: usize,
    basis: Vec<QMatrix>,
    ambient_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    product_polys: Option<Vec<RawPoly>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    power_polys: Option<Vec<RawPoly>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CosetFile {
    translation: LatticeElement,
    differential: QMatrix,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupFile {
    name: String,
    dimension: usize,
    nilpotency_class: usize,
    lattice: LatticeFile,
    adapted_basis: Vec<QMatrix>,
    cosets: Vec<CosetFile>,
}

/// Affine map file: `{"translation": [rational...], "differential": matrix}`
/// with the translation in Mal'cev coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub translation: LatticeElement,
    pub differential: QMatrix,
}

impl MapSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn polys_in(fields: Option<Vec<RawPoly>>, nvars: usize) -> Result<Option<Vec<MPoly>>> {
    fields
        .map(|v| v.into_iter().map(|raw| raw.into_mpoly(nvars)).collect())
        .transpose()
}

/// Deterministic sample points for checking user-supplied laws.
fn law_samples(rank: usize) -> Vec<(LatticeElement, LatticeElement, LatticeElement)> {
    let pick = |seed: i64| {
        LatticeElement::from_i64(&(0..rank as i64).map(|i| ((seed * 7 + i * 5) % 7) - 3).collect::<Vec<_>>())
    };
    (0..12).map(|s| (pick(s), pick(s + 3), pick(2 * s + 1))).collect()
}

impl ACGroup {
    /// Parses and validates a catalog file.
    pub fn from_catalog_json(text: &str) -> Result<Self> {
        let file: GroupFile = serde_json::from_str(text)?;
        let lat = file.lattice;
        if lat.basis.len() != lat.rank {
            return Err(Error::InvalidGroup(format!(
                "lattice rank {} but {} basis matrices",
                lat.rank,
                lat.basis.len()
            )));
        }
        let invalid = |e: Error| Error::InvalidGroup(e.to_string());
        let mut basis = Vec::with_capacity(lat.rank);
        for m in lat.basis {
            if m.rows() != lat.ambient_dim || m.cols() != lat.ambient_dim {
                return Err(Error::InvalidGroup("basis matrix does not match ambient_dim".into()));
            }
            basis.push(UniMatrix::new(m).map_err(invalid)?);
        }
        let mut law = MalcevLaw::from_basis(basis)?;
        let product = polys_in(lat.product_polys, 2 * lat.rank)?;
        let power = polys_in(lat.power_polys, lat.rank + 1)?;
        match (product, power) {
            (Some(p), Some(q)) => {
                law = law.with_polynomials(p, q)?;
                let report = law.verify_law_axioms_sampled(&law_samples(lat.rank))?;
                if let Some(v) = report.counterexample {
                    return Err(Error::InvalidGroup(format!(
                        "explicit group law fails {} at {:?}",
                        v.axiom, v.witness
                    )));
                }
            }
            (None, None) => {}
            _ => return Err(Error::InvalidGroup("product and power polynomials must be given together".into())),
        }
        let adapted = file
            .adapted_basis
            .into_iter()
            .map(|m| NilMatrix::new(m).map_err(invalid))
            .collect::<Result<Vec<_>>>()?;
        let rep = AffineRep::from_basis(lat.ambient_dim, adapted)?;
        let lattice = Lattice {
            name: file.name.clone(),
            law,
        };
        let cosets = file.cosets.into_iter().map(|c| (c.translation, c.differential)).collect();
        let group = ACGroup::new(file.name, lattice, rep, cosets)?;
        if group.dimension() != file.dimension {
            return Err(Error::InvalidGroup(format!(
                "declared dimension {} but the algebra has dimension {}",
                file.dimension,
                group.dimension()
            )));
        }
        if group.nilpotency_class() != file.nilpotency_class {
            return Err(Error::InvalidGroup(format!(
                "declared nilpotency class {} but the algebra has class {}",
                file.nilpotency_class,
                group.nilpotency_class()
            )));
        }
        Ok(group)
    }

    /// Canonical catalog text; parsing it back and re-serializing is
    /// byte-identical.
    pub fn to_catalog_json(&self) -> String {
        let law = &self.lattice.law;
        let model = law.model().expect("catalog groups carry a matrix model");
        let polys = |ps: Option<&[MPoly]>| ps.map(|v| v.iter().map(RawPoly::from).collect());
        let file = GroupFile {
            name: self.name.clone(),
            dimension: self.dimension(),
            nilpotency_class: self.nilpotency_class(),
            lattice: LatticeFile {
                rank: law.rank(),
                basis: model.basis().iter().map(|b| b.matrix().clone()).collect(),
                ambient_dim: model.ambient_dim(),
                product_polys: polys(law.product_polys()),
                power_polys: polys(law.power_polys()),
            },
            adapted_basis: self.rep.basis().basis().iter().map(|b| b.matrix().clone()).collect(),
            cosets: self
                .translations
                .iter()
                .zip(&self.cosets)
                .map(|(t, c)| CosetFile {
                    translation: t.clone(),
                    differential: c.differential().clone(),
                })
                .collect(),
        };
        let mut text = serde_json::to_string_pretty(&file).expect("catalog serialization");
        text.push('\n');
        text
    }
}
