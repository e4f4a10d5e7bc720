//! Holomorphic curve jets through a point, composition `ρ∘γ`, and orders of
//! vanishing.
//!
//! The order of a real analytic germ in `ζ ∈ ℂ ≅ ℝ²` is taken with respect to
//! `(Re ζ, Im ζ)`, which for a series in `(ζ, ζ̄)` is the lowest total degree
//! `i + j` of a nonzero coefficient of `ζ^i ζ̄^j`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::polynomial::{HermitianPolynomial, MultiIndex};
use super::scalar::{ComplexRational, ExactPoint};
use crate::error::{Error, Result};

/// A curve `γ(ζ) = p + Σ_{k≥1} a_k ζ^k` in ℂⁿ, listed up to order `T`.
/// `components[j][k]` is the coefficient of `ζ^k` in `γ_j`; `components[j][0]`
/// equals the anchor coordinate `p_j`.
#[derive(Clone, PartialEq, Eq)]
pub struct CurveJet {
    truncation: u32,
    anchor: ExactPoint,
    components: Vec<Vec<ComplexRational>>,
}

impl CurveJet {
    /// Builds a jet from the anchor and, per component, `(power, coefficient)`
    /// pairs with `power ≥ 1`. The truncation order is the largest power given.
    pub fn new(anchor: ExactPoint, terms: Vec<Vec<(u32, ComplexRational)>>) -> Result<Self> {
        if terms.len() != anchor.len() {
            return Err(Error::DimensionMismatch { expected: anchor.len(), got: terms.len() });
        }
        let truncation = terms.iter().flatten().map(|(k, _)| *k).max().unwrap_or(1).max(1);
        let mut components = Vec::with_capacity(anchor.len());
        for (p, comp) in anchor.iter().zip(terms) {
            let mut series = vec![ComplexRational::zero(); truncation as usize + 1];
            series[0] = p.clone();
            for (k, c) in comp {
                if k == 0 {
                    return Err(Error::Domain("curve terms must have power ≥ 1; the constant is the anchor".into()));
                }
                series[k as usize] += &c;
            }
            components.push(series);
        }
        Ok(Self { truncation, anchor, components })
    }

    /// The monomial curve `(p_j + c_j ζ^{a_j})_j`.
    pub fn monomial(anchor: ExactPoint, coeffs: &[ComplexRational], exponents: &[u32]) -> Result<Self> {
        if coeffs.len() != anchor.len() || exponents.len() != anchor.len() {
            return Err(Error::DimensionMismatch { expected: anchor.len(), got: coeffs.len().min(exponents.len()) });
        }
        let terms = coeffs.iter().zip(exponents).map(|(c, &a)| vec![(a.max(1), c.clone())]).collect();
        Self::new(anchor, terms)
    }

    pub fn n(&self) -> usize {
        self.anchor.len()
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn anchor(&self) -> &ExactPoint {
        &self.anchor
    }

    pub fn components(&self) -> &[Vec<ComplexRational>] {
        &self.components
    }

    /// Highest power with a nonzero coefficient (0 for a constant curve).
    pub fn degree(&self) -> u32 {
        self.components
            .iter()
            .filter_map(|c| c.iter().rposition(|x| !x.is_zero()).filter(|&k| k > 0))
            .max()
            .unwrap_or(0) as u32
    }

    pub fn is_degenerate(&self) -> bool {
        self.components.iter().all(|c| c[1..].iter().all(ComplexRational::is_zero))
    }

    /// `γ(ζ)` at an exact parameter value.
    pub fn eval(&self, zeta: &ComplexRational) -> ExactPoint {
        self.components
            .iter()
            .map(|c| {
                let mut acc = ComplexRational::zero();
                for coeff in c.iter().rev() {
                    acc = &(&acc * zeta) + coeff;
                }
                acc
            })
            .collect()
    }

    /// The reparametrized curve `ζ ↦ γ(uζ)`.
    pub fn reparametrize(&self, u: &ComplexRational) -> Self {
        let components = self
            .components
            .iter()
            .map(|c| c.iter().enumerate().map(|(k, x)| x * &u.pow(k as u32)).collect())
            .collect();
        Self { truncation: self.truncation, anchor: self.anchor.clone(), components }
    }
}

impl fmt::Debug for CurveJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CurveJet(T={}, {:?})", self.truncation, self.components)
    }
}

/// Minimal vanishing order among the components of `γ − p`.
pub fn curve_order(gamma: &CurveJet) -> Result<u32> {
    gamma
        .components
        .iter()
        .filter_map(|c| c.iter().skip(1).position(|x| !x.is_zero()).map(|k| k as u32 + 1))
        .min()
        .ok_or(Error::DegenerateCurve(gamma.truncation))
}

/// A series `Σ c_{ij} ζ^i ζ̄^j` truncated at total degree `truncation`.
/// `exact` is set when no term above the truncation can be nonzero.
#[derive(Clone, PartialEq, Eq)]
pub struct BiSeries {
    pub truncation: u32,
    pub exact: bool,
    pub terms: BTreeMap<(u32, u32), ComplexRational>,
}

impl BiSeries {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> ComplexRational {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }
}

impl fmt::Debug for BiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiSeries(T={}, exact={}, {:?})", self.truncation, self.exact, self.terms)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(u32),
    /// All terms up to `truncation` vanish and the series may continue.
    Beyond { truncation: u32 },
    /// The series is identically zero.
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(k) => Some(k),
            _ => None,
        }
    }
}

fn truncated_mul(a: &[ComplexRational], b: &[ComplexRational], trunc: usize) -> Vec<ComplexRational> {
    let len = (a.len() + b.len()).saturating_sub(1).min(trunc + 1);
    let mut out = vec![ComplexRational::zero(); len];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() || i >= len {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if i + j >= len {
                break;
            }
            if !y.is_zero() {
                out[i + j] += &(x * y);
            }
        }
    }
    out
}

/// `ρ(γ(ζ), conj γ(ζ))` up to total degree `truncation` in `(ζ, ζ̄)`.
/// The curve is taken as the polynomial map listed by its jet.
pub fn compose_with_curve(rho: &HermitianPolynomial, gamma: &CurveJet, truncation: u32) -> Result<BiSeries> {
    if gamma.n() != rho.n() {
        return Err(Error::DimensionMismatch { expected: rho.n(), got: gamma.n() });
    }
    if gamma.anchor() != rho.center() {
        return Err(Error::AnchorMismatch);
    }
    let trunc = truncation as usize;
    // γ_k − p_k
    let shifted: Vec<Vec<ComplexRational>> = gamma
        .components
        .iter()
        .map(|c| {
            let mut s = c.clone();
            s[0] = ComplexRational::zero();
            s
        })
        .collect();
    let mut cache: HashMap<MultiIndex, Vec<ComplexRational>> = HashMap::new();
    let mut power = |alpha: &MultiIndex| -> Vec<ComplexRational> {
        if let Some(v) = cache.get(alpha) {
            return v.clone();
        }
        let mut acc = vec![ComplexRational::one()];
        for (k, &a) in alpha.entries().iter().enumerate() {
            for _ in 0..a {
                acc = truncated_mul(&acc, &shifted[k], trunc);
            }
        }
        cache.insert(alpha.clone(), acc.clone());
        acc
    };
    let mut terms: BTreeMap<(u32, u32), ComplexRational> = BTreeMap::new();
    for ((a, b), c) in rho.terms() {
        let sa = power(a);
        let sb = power(b);
        for (i, x) in sa.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let cx = c * x;
            for (j, y) in sb.iter().enumerate() {
                if i + j > trunc {
                    break;
                }
                if !y.is_zero() {
                    *terms.entry((i as u32, j as u32)).or_default() += &(&cx * &y.conj());
                }
            }
        }
    }
    terms.retain(|_, c| !c.is_zero());
    let exact = truncation >= rho.degree() * gamma.degree();
    Ok(BiSeries { truncation, exact, terms })
}

/// Composition truncated high enough that the result is the full polynomial.
pub fn compose_exact(rho: &HermitianPolynomial, gamma: &CurveJet) -> Result<BiSeries> {
    compose_with_curve(rho, gamma, rho.degree() * gamma.degree().max(1))
}

pub fn vanishing_order(series: &BiSeries) -> Order {
    match series.terms.keys().map(|(i, j)| i + j).min() {
        Some(k) => Order::Finite(k),
        None if series.exact => Order::Infinite,
        None => Order::Beyond { truncation: series.truncation },
    }
}
