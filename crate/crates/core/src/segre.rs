//! Segre varieties `S_w = {z : ρ(z, w̄) = 0}` and finite-sample intersections
//! of families of them.
//!
//! A Segre variety whose defining polynomial is identically zero is the whole
//! space; [`is_degenerate`] reports this and residuals treat it like any other
//! polynomial. The working domain is the caller's bounding box: polynomial `ρ`
//! converges everywhere, so no nested neighbourhoods are tracked.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::algebra::{ComplexRational, ExactPoint, FloatHermitian, FloatPoint, HermitianPolynomial, HoloPolynomial, MultiIndex};
use crate::error::{Error, Result};

/// The holomorphic polynomial `z ↦ ρ(z, w̄)`, expanded about the center of `ρ`.
pub fn segre_poly(rho: &HermitianPolynomial, w: &[ComplexRational]) -> Result<HoloPolynomial> {
    if w.len() != rho.n() {
        return Err(Error::DimensionMismatch { expected: rho.n(), got: w.len() });
    }
    let w_bar: Vec<ComplexRational> = w.iter().zip(rho.center()).map(|(w, p)| (w - p).conj()).collect();
    let mut terms: BTreeMap<MultiIndex, ComplexRational> = BTreeMap::new();
    for ((a, b), c) in rho.terms() {
        *terms.entry(a.clone()).or_default() += &(c * &b.monomial(&w_bar));
    }
    HoloPolynomial::new(rho.n(), rho.center().clone(), terms)
}

/// True when the Segre polynomial vanishes identically (`S_w` is everything).
pub fn is_degenerate(segre: &HoloPolynomial) -> bool {
    segre.is_zero()
}

/// `z ∈ S_w` up to `tol`: `|ρ(z, w̄)| ≤ tol`. With `tol = 0` the test is exact.
pub fn segre_contains(rho: &HermitianPolynomial, w: &[ComplexRational], z: &[ComplexRational], tol: f64) -> Result<bool> {
    let v = rho.eval(z, w)?;
    Ok(if tol == 0.0 { v.is_zero() } else { v.abs_f64() <= tol })
}

/// Floating-point membership test for non-exact points.
pub fn segre_contains_float(rho: &FloatHermitian, w: &[Complex64], z: &[Complex64], tol: f64) -> bool {
    rho.eval(z, w).norm() <= tol
}

/// Whether `z ∈ S_w ⟺ w ∈ S_z` holds for this pair, exactly. Always true for
/// Hermitian `ρ`; a `false` exposes broken coefficient symmetry.
pub fn check_symmetry(rho: &HermitianPolynomial, z: &[ComplexRational], w: &[ComplexRational]) -> Result<bool> {
    let zw = rho.eval(z, w)?.is_zero();
    let wz = rho.eval(w, z)?.is_zero();
    Ok(zw == wz)
}

#[derive(Clone, Debug)]
pub enum Anchors {
    Exact(Vec<ExactPoint>),
    Float(Vec<FloatPoint>),
}

impl Anchors {
    fn len(&self) -> usize {
        match self {
            Anchors::Exact(v) => v.len(),
            Anchors::Float(v) => v.len(),
        }
    }
}

/// Sampled intersection `∩_{a ∈ A} S_a` over a finite anchor set `A`.
#[derive(Clone, Debug)]
pub struct SegreFamilyResidual<'a> {
    rho: &'a HermitianPolynomial,
    float_rho: FloatHermitian,
    anchors: Anchors,
    tolerance: f64,
}

impl<'a> SegreFamilyResidual<'a> {
    pub fn new(rho: &'a HermitianPolynomial, anchors: Anchors, tolerance: f64) -> Result<Self> {
        if anchors.len() == 0 {
            return Err(Error::Domain("anchor set must be non-empty".into()));
        }
        if !(tolerance >= 0.0) {
            return Err(Error::Domain(format!("tolerance must be non-negative, got {tolerance}")));
        }
        if tolerance == 0.0 && matches!(anchors, Anchors::Float(_)) {
            return Err(Error::Domain("zero tolerance requires exact anchors".into()));
        }
        let n = rho.n();
        let bad = match &anchors {
            Anchors::Exact(v) => v.iter().map(Vec::len).find(|&l| l != n),
            Anchors::Float(v) => v.iter().map(Vec::len).find(|&l| l != n),
        };
        if let Some(got) = bad {
            return Err(Error::DimensionMismatch { expected: n, got });
        }
        Ok(Self { rho, float_rho: FloatHermitian::new(rho), anchors, tolerance })
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// `max_a |ρ(z, ā)|`. For exact anchors and exact `z` the value is exactly
    /// zero precisely when `z` lies on every sampled `S_a`.
    pub fn residual_exact(&self, z: &[ComplexRational]) -> Result<f64> {
        match &self.anchors {
            Anchors::Exact(anchors) => anchors
                .par_iter()
                .map(|a| self.rho.eval(z, a).map(|v| v.abs_f64()))
                .try_reduce(|| 0.0, |x, y| Ok(x.max(y))),
            Anchors::Float(_) => {
                let zf: FloatPoint = z.iter().map(ComplexRational::to_c64).collect();
                self.residual(&zf)
            }
        }
    }

    pub fn residual(&self, z: &[Complex64]) -> Result<f64> {
        if z.len() != self.rho.n() {
            return Err(Error::DimensionMismatch { expected: self.rho.n(), got: z.len() });
        }
        let pz = self.float_rho.holo_powers(z);
        let r = match &self.anchors {
            Anchors::Exact(anchors) => anchors
                .iter()
                .map(|a| {
                    let af: FloatPoint = a.iter().map(ComplexRational::to_c64).collect();
                    self.float_rho.eval_tables(&pz, &self.float_rho.anti_powers(&af)).norm()
                })
                .fold(0.0, f64::max),
            Anchors::Float(anchors) => anchors
                .iter()
                .map(|a| self.float_rho.eval_tables(&pz, &self.float_rho.anti_powers(a)).norm())
                .fold(0.0, f64::max),
        };
        Ok(r)
    }

    pub fn contains_exact(&self, z: &[ComplexRational]) -> Result<bool> {
        Ok(self.residual_exact(z)? <= self.tolerance)
    }

    pub fn contains(&self, z: &[Complex64]) -> Result<bool> {
        Ok(self.residual(z)? <= self.tolerance)
    }
}

/// Alias matching the operation name used elsewhere in the crate.
pub fn intersection_residual(fam: &SegreFamilyResidual<'_>, z: &[ComplexRational]) -> Result<f64> {
    fam.residual_exact(z)
}
