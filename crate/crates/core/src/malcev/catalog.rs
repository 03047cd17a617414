//! Built-in lattices with closed-form group laws.

use std::fmt;
use std::str::FromStr;

use super::{Lattice, MPoly, MalcevLaw, MatrixModel};
use crate::error::{Error, Result};
use crate::scalar::{frac, int};
use crate::unipotent::UniMatrix;
use crate::QMatrix;

/// Parsed catalog name, e.g. `direct_product(heisenberg,free_abelian(2))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeSpec {
    FreeAbelian(usize),
    Heisenberg,
    HeisenbergN(u32),
    DirectProduct(Vec<LatticeSpec>),
}

impl fmt::Display for LatticeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeSpec::FreeAbelian(k) => write!(f, "free_abelian({k})"),
            LatticeSpec::Heisenberg => write!(f, "heisenberg"),
            LatticeSpec::HeisenbergN(n) => write!(f, "heisenberg_n({n})"),
            LatticeSpec::DirectProduct(parts) => {
                let names: Vec<String> = parts.iter().map(ToString::to_string).collect();
                write!(f, "direct_product({})", names.join(","))
            }
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self) -> Error {
        Error::Catalog(self.src.to_string())
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn word(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest.find(|c: char| !pred(c)).unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn number(&mut self) -> Result<u32> {
        let digits = self.word(|c| c.is_ascii_digit());
        digits.parse().map_err(|_| self.err())
    }

    fn spec(&mut self) -> Result<LatticeSpec> {
        let name = self.word(|c| c.is_ascii_alphanumeric() || c == '_');
        let spec = match name {
            "heisenberg" => LatticeSpec::Heisenberg,
            "free_abelian" | "heisenberg_n" => {
                if !self.eat('(') {
                    return Err(self.err());
                }
                let n = self.number()?;
                if !self.eat(')') || n == 0 {
                    return Err(self.err());
                }
                if name == "free_abelian" {
                    LatticeSpec::FreeAbelian(n as usize)
                } else {
                    LatticeSpec::HeisenbergN(n)
                }
            }
            "direct_product" => {
                if !self.eat('(') {
                    return Err(self.err());
                }
                let mut parts = vec![self.spec()?];
                while self.eat(',') {
                    parts.push(self.spec()?);
                }
                if !self.eat(')') {
                    return Err(self.err());
                }
                LatticeSpec::DirectProduct(parts)
            }
            _ => return Err(self.err()),
        };
        Ok(spec)
    }
}

impl FromStr for LatticeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s, pos: 0 };
        let spec = p.spec()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.err());
        }
        Ok(spec)
    }
}

/// Looks up a built-in lattice by catalog name.
pub fn builtin_lattice(name: &str) -> Result<Lattice> {
    let spec: LatticeSpec = name.parse()?;
    Ok(Lattice {
        name: spec.to_string(),
        law: spec.law()?,
    })
}

fn uni(m: QMatrix) -> UniMatrix {
    UniMatrix::new(m).expect("catalog matrices are unipotent")
}

impl LatticeSpec {
    pub fn law(&self) -> Result<MalcevLaw> {
        match self {
            LatticeSpec::FreeAbelian(k) => {
                let basis = (1..=*k)
                    .map(|j| uni(&QMatrix::identity(k + 1) + &QMatrix::unit(k + 1, 0, j)))
                    .collect();
                let zero_products = vec![MPoly::zero(2 * k); *k];
                let zero_powers = vec![MPoly::zero(k + 1); *k];
                MalcevLaw::from_basis(basis)?.with_polynomials(zero_products, zero_powers)
            }
            LatticeSpec::Heisenberg => heisenberg_law(1),
            LatticeSpec::HeisenbergN(n) => heisenberg_law(*n),
            LatticeSpec::DirectProduct(parts) => {
                let laws = parts.iter().map(LatticeSpec::law).collect::<Result<Vec<_>>>()?;
                direct_product(&laws)
            }
        }
    }
}

/// `H_n`: basis `a = I+E23`, `b = I+E12`, `c_n = I+(1/n)E13`, so that
/// `a^x b^y c_n^z = [[1, y, z/n], [0, 1, x], [0, 0, 1]]`.
fn heisenberg_law(n: u32) -> Result<MalcevLaw> {
    let n = i64::from(n);
    let a = uni(&QMatrix::identity(3) + &QMatrix::unit(3, 1, 2));
    let b = uni(&QMatrix::identity(3) + &QMatrix::unit(3, 0, 1));
    let c = uni(&QMatrix::identity(3) + &QMatrix::unit(3, 0, 2).scale(&frac(1, n)));
    let zero6 = MPoly::zero(6);
    let zero4 = MPoly::zero(4);
    // z: z₁ + z₂ + n·x₂y₁, with y₁ = u₂ (index 1) and x₂ = v₁ (index 3)
    let product = vec![zero6.clone(), zero6, MPoly::product_term(6, int(n), &[1, 3])];
    // z: mz + n·m(m-1)/2·xy, with m at index 3
    let q3 = MPoly::zero(4)
        .with_term(frac(n, 2), vec![1, 1, 0, 2])
        .with_term(frac(-n, 2), vec![1, 1, 0, 1]);
    let power = vec![zero4.clone(), zero4, q3];
    MalcevLaw::from_basis(vec![a, b, c])?.with_polynomials(product, power)
}

/// Block-diagonal model with concatenated Mal'cev bases; polynomial laws
/// are shifted into the combined variable layout when every factor has one.
fn direct_product(laws: &[MalcevLaw]) -> Result<MalcevLaw> {
    let models: Vec<&MatrixModel> = laws
        .iter()
        .map(|l| l.model().ok_or_else(|| Error::Domain("factor without matrix model".into())))
        .collect::<Result<_>>()?;
    let dims: Vec<usize> = models.iter().map(|m| m.ambient_dim()).collect();
    let mut basis = Vec::new();
    for (f, model) in models.iter().enumerate() {
        for g in model.basis() {
            let blocks: Vec<QMatrix> = dims
                .iter()
                .enumerate()
                .map(|(h, &d)| if h == f { g.matrix().clone() } else { QMatrix::identity(d) })
                .collect();
            basis.push(uni(QMatrix::block_diagonal(&blocks)));
        }
    }
    let law = MalcevLaw::from_basis(basis)?;
    let total = law.rank();
    let mut product = Vec::with_capacity(total);
    let mut power = Vec::with_capacity(total);
    let mut offset = 0;
    for factor in laws {
        let (Some(ps), Some(qs)) = (factor.product_polys(), factor.power_polys()) else {
            return Ok(law);
        };
        let k = factor.rank();
        let pmap: Vec<usize> = (0..k).map(|j| offset + j).chain((0..k).map(|j| total + offset + j)).collect();
        let qmap: Vec<usize> = (0..k).map(|j| offset + j).chain([total]).collect();
        product.extend(ps.iter().map(|p| p.remap(2 * total, &pmap)));
        power.extend(qs.iter().map(|q| q.remap(total + 1, &qmap)));
        offset += k;
    }
    law.with_polynomials(product, power)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::malcev::LatticeElement;

    #[test]
    fn names_round_trip() {
        for name in [
            "heisenberg",
            "free_abelian(3)",
            "heisenberg_n(4)",
            "direct_product(heisenberg,free_abelian(1))",
            "direct_product(direct_product(free_abelian(1),free_abelian(1)),heisenberg_n(2))",
        ] {
            assert_eq!(builtin_lattice(name).unwrap().name, name);
        }
        assert_eq!(
            builtin_lattice(" direct_product( heisenberg , free_abelian(2) ) ").unwrap().name,
            "direct_product(heisenberg,free_abelian(2))"
        );
    }

    #[test]
    fn unknown_names_rejected() {
        for name in ["", "klein", "free_abelian", "free_abelian(0)", "heisenberg(2)", "direct_product()", "heisenberg x"] {
            assert!(matches!(builtin_lattice(name), Err(Error::Catalog(_))), "{name}");
        }
    }

    #[test]
    fn heisenberg_n_law() {
        let h3 = builtin_lattice("heisenberg_n(3)").unwrap().law;
        let u = LatticeElement::from_i64(&[0, 1, 0]);
        let v = LatticeElement::from_i64(&[1, 0, 0]);
        assert_eq!(h3.mc_multiply(&u, &v).unwrap(), LatticeElement::from_i64(&[1, 1, 3]));
        let g = h3.matrix_from_coordinates(&LatticeElement::from_i64(&[2, 5, 7])).unwrap();
        let expect = QMatrix::from_rows(vec![
            vec![int(1), int(5), frac(7, 3)],
            vec![int(0), int(1), int(2)],
            vec![int(0), int(0), int(1)],
        ])
        .unwrap();
        assert_eq!(g.matrix(), &expect);
    }

    #[test]
    fn product_of_heisenbergs() {
        let hh = builtin_lattice("direct_product(heisenberg,heisenberg_n(2))").unwrap().law;
        assert_eq!(hh.rank(), 6);
        assert_eq!(hh.model().unwrap().ambient_dim(), 6);
        let u = LatticeElement::from_i64(&[0, 1, 0, 0, 1, 0]);
        let v = LatticeElement::from_i64(&[1, 0, 0, 1, 0, 0]);
        assert_eq!(hh.mc_multiply(&u, &v).unwrap(), LatticeElement::from_i64(&[1, 1, 1, 1, 1, 2]));
        let g = hh.matrix_from_coordinates(&u).unwrap().mul(&hh.matrix_from_coordinates(&v).unwrap()).unwrap();
        assert_eq!(hh.coordinates_from_matrix(&g).unwrap(), hh.mc_multiply(&u, &v).unwrap());
    }
}
