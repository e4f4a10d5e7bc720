//! JSON formats for Hermitian polynomials and curve jets. Rationals are
//! strings `"p/q"` (decimals are also accepted on input and read exactly).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::polynomial::{HermitianPolynomial, MultiIndex, TermKey};
use super::scalar::{format_rational, parse_rational, ComplexRational, ExactPoint};
use super::series::CurveJet;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ComplexJson {
    pub re: String,
    #[serde(default = "zero_string")]
    pub im: String,
}

fn zero_string() -> String {
    "0".into()
}

impl ComplexJson {
    pub fn parse(&self) -> Result<ComplexRational> {
        Ok(ComplexRational::new(parse_rational(&self.re)?, parse_rational(&self.im)?))
    }

    pub fn from_value(c: &ComplexRational) -> Self {
        Self { re: format_rational(&c.re), im: format_rational(&c.im) }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermJson {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
    pub re: String,
    #[serde(default = "zero_string")]
    pub im: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PolynomialJson {
    pub n: usize,
    #[serde(default)]
    pub center: Option<Vec<ComplexJson>>,
    pub terms: Vec<TermJson>,
}

impl PolynomialJson {
    /// Converts to a validated polynomial. A term `(α, β)` listed without its
    /// mirror `(β, α)` gets the mirror `conj(c)` added; a listed mirror that
    /// disagrees is rejected. A missing center means the origin.
    pub fn into_polynomial(self) -> Result<HermitianPolynomial> {
        let n = self.n;
        let center: ExactPoint = match self.center {
            Some(c) => c.iter().map(ComplexJson::parse).collect::<Result<_>>()?,
            None => vec![ComplexRational::zero(); n],
        };
        let mut given: BTreeMap<TermKey, ComplexRational> = BTreeMap::new();
        for t in &self.terms {
            if t.alpha.len() != n || t.beta.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: t.alpha.len().max(t.beta.len()) });
            }
            let c = ComplexRational::new(parse_rational(&t.re)?, parse_rational(&t.im)?);
            let key = (MultiIndex::new(t.alpha.clone()), MultiIndex::new(t.beta.clone()));
            *given.entry(key).or_default() += &c;
        }
        let mut full = given.clone();
        for ((a, b), c) in &given {
            let mirror = (b.clone(), a.clone());
            match given.get(&mirror) {
                Some(m) if *m == c.conj() => {}
                Some(m) => {
                    return Err(Error::NotHermitian {
                        alpha: a.to_string(),
                        beta: b.to_string(),
                        detail: format!("c_ab = {c} but c_ba = {m}"),
                    })
                }
                None => {
                    full.insert(mirror, c.conj());
                }
            }
        }
        HermitianPolynomial::new(n, center, full)
    }

    pub fn from_polynomial(rho: &HermitianPolynomial) -> Self {
        Self {
            n: rho.n(),
            center: Some(rho.center().iter().map(ComplexJson::from_value).collect()),
            terms: rho
                .terms()
                .iter()
                .map(|((a, b), c)| TermJson {
                    alpha: a.entries().to_vec(),
                    beta: b.entries().to_vec(),
                    re: format_rational(&c.re),
                    im: format_rational(&c.im),
                })
                .collect(),
        }
    }
}

pub fn polynomial_from_json(s: &str) -> Result<HermitianPolynomial> {
    serde_json::from_str::<PolynomialJson>(s)?.into_polynomial()
}

pub fn polynomial_to_json(rho: &HermitianPolynomial) -> String {
    serde_json::to_string_pretty(&PolynomialJson::from_polynomial(rho)).expect("polynomial serializes")
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CurveTermJson {
    pub k: u32,
    pub re: String,
    #[serde(default = "zero_string")]
    pub im: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CurveJson {
    pub components: Vec<Vec<CurveTermJson>>,
}

impl CurveJson {
    /// Builds the jet anchored at `anchor`; the file lists only powers `k ≥ 1`.
    pub fn into_curve(self, anchor: ExactPoint) -> Result<CurveJet> {
        let terms = self
            .components
            .into_iter()
            .map(|comp| {
                comp.into_iter()
                    .map(|t| Ok((t.k, ComplexRational::new(parse_rational(&t.re)?, parse_rational(&t.im)?))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        CurveJet::new(anchor, terms)
    }

    pub fn from_curve(gamma: &CurveJet) -> Self {
        Self {
            components: gamma
                .components()
                .iter()
                .map(|c| {
                    c.iter()
                        .enumerate()
                        .skip(1)
                        .filter(|(_, x)| !x.is_zero())
                        .map(|(k, x)| CurveTermJson { k: k as u32, re: format_rational(&x.re), im: format_rational(&x.im) })
                        .collect()
                })
                .collect(),
        }
    }
}

pub fn curve_from_json(s: &str, anchor: ExactPoint) -> Result<CurveJet> {
    serde_json::from_str::<CurveJson>(s)?.into_curve(anchor)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONE: &str = r#"{ "n": 2, "terms": [
        { "alpha": [1,0], "beta": [1,0], "re": "1", "im": "0" },
        { "alpha": [0,1], "beta": [0,1], "re": "-1", "im": "0" } ] }"#;

    #[test]
    fn loads_and_round_trips() {
        let rho = polynomial_from_json(CONE).unwrap();
        assert_eq!(rho.terms().len(), 2);
        let again = polynomial_from_json(&polynomial_to_json(&rho)).unwrap();
        assert_eq!(rho, again);
    }

    #[test]
    fn completes_missing_mirror_terms() {
        let s = r#"{ "n": 1, "terms": [ { "alpha": [1], "beta": [0], "re": "1/2", "im": "3" } ] }"#;
        let rho = polynomial_from_json(s).unwrap();
        assert_eq!(rho.coeff(&MultiIndex::new(vec![0]), &MultiIndex::new(vec![1])), ComplexRational::new(
            parse_rational("1/2").unwrap(),
            parse_rational("-3").unwrap()
        ));
    }

    #[test]
    fn rejects_inconsistent_mirrors() {
        let s = r#"{ "n": 1, "terms": [
            { "alpha": [1], "beta": [0], "re": "1", "im": "0" },
            { "alpha": [0], "beta": [1], "re": "2", "im": "0" } ] }"#;
        assert!(matches!(polynomial_from_json(s), Err(Error::NotHermitian { .. })));
        let s = r#"{ "n": 1, "terms": [ { "alpha": [1], "beta": [1], "re": "1", "im": "1" } ] }"#;
        assert!(polynomial_from_json(s).is_err());
        let s = r#"{ "n": 2, "terms": [ { "alpha": [1], "beta": [1], "re": "1", "im": "0" } ] }"#;
        assert!(matches!(polynomial_from_json(s), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn curve_json_round_trip() {
        let s = r#"{ "components": [ [ {"k": 1, "re": "1", "im": "0"} ], [ {"k": 2, "re": "1/2", "im": "-1"} ] ] }"#;
        let anchor = vec![ComplexRational::zero(); 2];
        let g = curve_from_json(s, anchor.clone()).unwrap();
        assert_eq!(g.truncation(), 2);
        let back = CurveJson::from_curve(&g).into_curve(anchor).unwrap();
        assert_eq!(g, back);
    }
}
