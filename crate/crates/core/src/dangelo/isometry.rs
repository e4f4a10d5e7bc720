//! Unitary `U` with `U G_α = F_α` for two finite families with equal Gram
//! matrices: match a maximal independent subset of the `G_α` to the
//! corresponding `F_α`, extend by a unitary map between the orthogonal
//! complements.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::decompose::HoloDecomposition;
use crate::algebra::MultiIndex;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteIsometry {
    pub matrix: DMatrix<Complex64>,
}

impl FiniteIsometry {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        &self.matrix * pad(v, self.dim())
    }

    /// Frobenius norm of `U*U − I`.
    pub fn unitarity_defect(&self) -> f64 {
        let m = self.dim();
        (self.matrix.adjoint() * &self.matrix - DMatrix::<Complex64>::identity(m, m)).norm()
    }
}

fn pad(v: &DVector<Complex64>, m: usize) -> DVector<Complex64> {
    DVector::from_fn(m, |i, _| if i < v.len() { v[i] } else { Complex64::new(0.0, 0.0) })
}

/// Orthonormal columns spanning the complement of the orthonormal columns `q` in `ℂ^m`.
fn complement(q: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (m, r) = q.shape();
    let mut aug = DMatrix::<Complex64>::zeros(m, r + m);
    aug.columns_mut(0, r).copy_from(q);
    aug.columns_mut(r, m).copy_from(&DMatrix::identity(m, m));
    let full = aug.qr().q();
    full.columns(r, m - r).into_owned()
}

/// Gram–Schmidt twice, in column order; the phase of each column is kept.
fn orthonormalize(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let mut q = a.clone();
    for j in 0..q.ncols() {
        for _ in 0..2 {
            for i in 0..j {
                let proj = q.column(i).dotc(&q.column(j));
                let qi = q.column(i).into_owned();
                q.column_mut(j).axpy(-proj, &qi, Complex64::new(1.0, 0.0));
            }
        }
        let norm = q.column(j).norm();
        q.column_mut(j).unscale_mut(norm);
    }
    q
}

/// Builds `U` or rejects with the first pair whose inner products differ by
/// more than `tol · (1 + ‖F_a‖‖F_b‖)`. The result satisfies
/// `‖U G_α − F_α‖ ≤ tol (1 + ‖F_α‖)` and `‖U*U − I‖ ≤ tol`; if the data are too
/// ill-conditioned to meet that, the call fails instead of returning a partial match.
pub fn build_matching_isometry(f: &[DVector<Complex64>], g: &[DVector<Complex64>], tol: f64) -> Result<FiniteIsometry> {
    if f.len() != g.len() {
        return Err(Error::DimensionMismatch { expected: f.len(), got: g.len() });
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let m = f.iter().chain(g).map(|v| v.len()).max().unwrap_or(0).max(1);
    let f: Vec<_> = f.iter().map(|v| pad(v, m)).collect();
    let g: Vec<_> = g.iter().map(|v| pad(v, m)).collect();
    for a in 0..f.len() {
        for b in a..f.len() {
            let fi = f[a].dotc(&f[b]);
            let gi = g[a].dotc(&g[b]);
            if (fi - gi).norm() > tol * (1.0 + f[a].norm() * f[b].norm()) {
                return Err(Error::GramMismatch { a, b, f_inner: fi.to_string(), g_inner: gi.to_string() });
            }
        }
    }
    // maximal independent subset of G, greedily in index order
    let threshold = 0.25 * tol;
    let mut basis: Vec<DVector<Complex64>> = Vec::new();
    let mut chosen = Vec::new();
    for (i, v) in g.iter().enumerate() {
        let mut r = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = b.dotc(&r);
                r.axpy(-c, b, Complex64::new(1.0, 0.0));
            }
        }
        let rn = r.norm();
        if rn > threshold * v.norm().max(1.0) && basis.len() < m {
            basis.push(r.unscale(rn));
            chosen.push(i);
        }
    }
    let r = chosen.len();
    let u = if r == 0 {
        DMatrix::identity(m, m)
    } else {
        let gs = DMatrix::from_columns(&chosen.iter().map(|&i| g[i].clone()).collect::<Vec<_>>());
        let fs = DMatrix::from_columns(&chosen.iter().map(|&i| f[i].clone()).collect::<Vec<_>>());
        let qr = gs.qr();
        let (qg, rg) = (qr.q(), qr.r());
        let rinv = rg.try_inverse().ok_or_else(|| Error::Domain("selected vectors are dependent".into()))?;
        let qf = orthonormalize(&(fs * rinv));
        let mut left = DMatrix::zeros(m, m);
        left.columns_mut(0, r).copy_from(&qf);
        left.columns_mut(r, m - r).copy_from(&complement(&qf));
        let mut right = DMatrix::zeros(m, m);
        right.columns_mut(0, r).copy_from(&qg);
        right.columns_mut(r, m - r).copy_from(&complement(&qg));
        left * right.adjoint()
    };
    let iso = FiniteIsometry { matrix: u };
    if iso.unitarity_defect() > tol {
        return Err(Error::Domain(format!("constructed map is not unitary to {tol:e}")));
    }
    for (a, (fa, ga)) in f.iter().zip(&g).enumerate() {
        let err = (&iso.matrix * ga - fa).norm();
        if err > tol * (1.0 + fa.norm()) {
            return Err(Error::Domain(format!("family too ill-conditioned: residual {err:e} at index {a}")));
        }
    }
    Ok(iso)
}

/// Coefficient families of `f` and `g`: for each monomial `α` occurring, the
/// vectors `(coeff of z^α in f^β)_β` and likewise for `g`.
pub fn coefficient_families(dec: &HoloDecomposition) -> (Vec<MultiIndex>, Vec<DVector<Complex64>>, Vec<DVector<Complex64>>) {
    let betas = dec.betas();
    let mut alphas: BTreeMap<MultiIndex, ()> = BTreeMap::new();
    for p in dec.f.values().chain(dec.g.values()) {
        for a in p.terms().keys() {
            alphas.insert(a.clone(), ());
        }
    }
    let alphas: Vec<MultiIndex> = alphas.into_keys().collect();
    let family = |src: &BTreeMap<MultiIndex, crate::algebra::HoloPolynomial>| {
        alphas
            .iter()
            .map(|a| DVector::from_iterator(betas.len(), betas.iter().map(|b| src[b].coeff(a).to_c64())))
            .collect::<Vec<_>>()
    };
    let ff = family(&dec.f);
    let gg = family(&dec.g);
    (alphas, ff, gg)
}
