//! Holomorphic decomposition `4ρ = 2 Re h + Σ_β |f^β|² − Σ_β |g^β|²`, with
//!
//! ```text
//! h(z)   = 4 Σ_{|α|≥1} c_{α0} (z−p)^α
//! f^β(z) = Σ_{|α|≥1} c_{αβ} (tδ)^β (z−p)^α + (z−p)^β (tδ)^{−β}
//! g^β(z) = Σ_{|α|≥1} c_{αβ} (tδ)^β (z−p)^α − (z−p)^β (tδ)^{−β}
//! ```
//!
//! for `|β| ≥ 1`. A nonzero constant term `c_00` goes into `h` as `2 c_00`.

use std::collections::BTreeMap;

use crate::algebra::{ComplexRational, HermitianPolynomial, HoloPolynomial, MultiIndex, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct HoloDecomposition {
    pub h: HoloPolynomial,
    pub f: BTreeMap<MultiIndex, HoloPolynomial>,
    pub g: BTreeMap<MultiIndex, HoloPolynomial>,
    pub t: Rational,
    pub delta: Vec<Rational>,
}

impl HoloDecomposition {
    /// `2 Re h + Σ|f^β|² − Σ|g^β|²` as a Hermitian polynomial.
    pub fn reassemble(&self) -> HermitianPolynomial {
        let mut acc = self.h.twice_real_part();
        for f in self.f.values() {
            acc = &acc + &f.norm_sqr();
        }
        for g in self.g.values() {
            acc = &acc - &g.norm_sqr();
        }
        acc
    }

    /// The `β` indices, in the order used for coefficient families.
    pub fn betas(&self) -> Vec<MultiIndex> {
        self.f.keys().cloned().collect()
    }
}

fn rational_power(base: &[Rational], e: &MultiIndex) -> Rational {
    base.iter().zip(e.entries()).fold(Rational::from_integer(1.into()), |acc, (b, &k)| acc * num_traits::pow(b.clone(), k as usize))
}

/// Builds the decomposition and checks the identity coefficient by coefficient
/// before returning it.
pub fn holo_decompose(rho: &HermitianPolynomial, t: &Rational, delta: &[Rational]) -> Result<HoloDecomposition> {
    let n = rho.n();
    let zero_q = Rational::from_integer(0.into());
    let one_q = Rational::from_integer(1.into());
    if !(*t > zero_q && *t < one_q) {
        return Err(Error::Domain(format!("t must lie in (0, 1), got {t}")));
    }
    if delta.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: delta.len() });
    }
    if let Some(d) = delta.iter().find(|d| **d <= zero_q) {
        return Err(Error::Domain(format!("delta entries must be positive, got {d}")));
    }
    let center = rho.center().clone();
    let zero = MultiIndex::zero(n);
    let td: Vec<Rational> = delta.iter().map(|d| d * t).collect();

    let mut h_terms: BTreeMap<MultiIndex, ComplexRational> = BTreeMap::new();
    let mut mixed: BTreeMap<MultiIndex, BTreeMap<MultiIndex, ComplexRational>> = BTreeMap::new();
    let mut betas: Vec<MultiIndex> = Vec::new();
    for ((a, b), c) in rho.terms() {
        match (a.is_zero(), b.is_zero()) {
            (true, true) => {
                *h_terms.entry(zero.clone()).or_default() += &c.scale(&Rational::from_integer(2.into()));
            }
            (false, true) => {
                *h_terms.entry(a.clone()).or_default() += &c.scale(&Rational::from_integer(4.into()));
            }
            (_, false) => {
                if !betas.contains(b) {
                    betas.push(b.clone());
                }
                if !a.is_zero() {
                    let scale = rational_power(&td, b);
                    mixed.entry(b.clone()).or_default().insert(a.clone(), c.scale(&scale));
                }
            }
        }
    }
    let h = HoloPolynomial::new(n, center.clone(), h_terms)?;
    let mut f = BTreeMap::new();
    let mut g = BTreeMap::new();
    for beta in betas {
        let pure = ComplexRational::real(rational_power(&td, &beta).recip());
        let common = mixed.remove(&beta).unwrap_or_default();
        let mut fb = common.clone();
        *fb.entry(beta.clone()).or_default() += &pure;
        let mut gb = common;
        *gb.entry(beta.clone()).or_default() -= &pure;
        f.insert(beta.clone(), HoloPolynomial::new(n, center.clone(), fb)?);
        g.insert(beta, HoloPolynomial::new(n, center.clone(), gb)?);
    }
    let dec = HoloDecomposition { h, f, g, t: t.clone(), delta: delta.to_vec() };
    let four_rho = rho.scale(&Rational::from_integer(4.into()));
    if dec.reassemble() != four_rho {
        return Err(Error::Domain("decomposition identity failed; input is not Hermitian".into()));
    }
    Ok(dec)
}
