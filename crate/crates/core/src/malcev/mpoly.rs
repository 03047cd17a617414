use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Sparse multivariate polynomial with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    #[serde(with = "crate::scalar::serde_rational")]
    coeff: Rational,
    exps: Vec<u32>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `coeff · Π x_i^{exps[i]}`.
    pub fn with_term(mut self, coeff: Rational, exps: Vec<u32>) -> Self {
        assert_eq!(exps.len(), self.nvars, "exponent vector length");
        let entry = self.terms.entry(exps).or_insert_with(Rational::zero);
        *entry += coeff;
        self.terms.retain(|_, c| !c.is_zero());
        self
    }

    /// `coeff · x_i · x_j` (or `coeff · x_i^2` when `i == j`).
    pub fn product_term(nvars: usize, coeff: Rational, vars: &[usize]) -> Self {
        let mut exps = vec![0; nvars];
        for &v in vars {
            exps[v] += 1;
        }
        MPoly::zero(nvars).with_term(coeff, exps)
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.nvars, other.nvars, "variable count");
        other
            .terms
            .iter()
            .fold(self.clone(), |acc, (e, c)| acc.with_term(c.clone(), e.clone()))
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars {
            return Err(Error::Dimension(format!(
                "{} values for a polynomial in {} variables",
                point.len(),
                self.nvars
            )));
        }
        let mut acc = Rational::zero();
        for (exps, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(exps) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Renames variable `i` to `map[i]` in a ring with `nvars` variables.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> MPoly {
        assert_eq!(map.len(), self.nvars);
        let mut out = MPoly::zero(nvars);
        for (exps, c) in &self.terms {
            let mut e = vec![0; nvars];
            for (i, &k) in exps.iter().enumerate() {
                e[map[i]] += k;
            }
            out = out.with_term(c.clone(), e);
        }
        out
    }

    /// Highest variable index with a nonzero exponent, if any.
    pub fn max_var(&self) -> Option<usize> {
        self.terms
            .keys()
            .filter_map(|e| e.iter().rposition(|&k| k > 0))
            .max()
    }

    pub fn is_constant_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(e, c)| c.is_one() && e.iter().all(|&k| k == 0))
    }

    pub fn to_terms(&self) -> Vec<(Rational, Vec<u32>)> {
        self.terms.iter().map(|(e, c)| (c.clone(), e.clone())).collect()
    }
}

impl Serialize for MPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawPoly::from(self).serialize(s)
    }
}

/// Deserialized polynomials carry their variable count in each exponent
/// vector; the zero polynomial is an empty list and takes `nvars` from context.
pub(crate) fn mpoly_from_terms(nvars: usize, terms: Vec<(Rational, Vec<u32>)>) -> Result<MPoly> {
    let mut p = MPoly::zero(nvars);
    for (c, e) in terms {
        if e.len() != nvars {
            return Err(Error::Format(format!(
                "exponent vector of length {} in a polynomial with {nvars} variables",
                e.len()
            )));
        }
        p = p.with_term(c, e);
    }
    Ok(p)
}

/// Wire form of an [`MPoly`]; the variable count comes from context.
#[derive(Serialize, Deserialize)]
#[serde(transparent)]
pub(crate) struct RawPoly(Vec<TermRepr>);

impl From<&MPoly> for RawPoly {
    fn from(p: &MPoly) -> Self {
        RawPoly(
            p.terms
                .iter()
                .map(|(e, c)| TermRepr {
                    coeff: c.clone(),
                    exps: e.clone(),
                })
                .collect(),
        )
    }
}

impl RawPoly {
    pub(crate) fn into_mpoly(self, nvars: usize) -> Result<MPoly> {
        mpoly_from_terms(nvars, self.0.into_iter().map(|t| (t.coeff, t.exps)).collect())
    }
}
