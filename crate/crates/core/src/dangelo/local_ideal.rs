//! The ideal `I(ρ, U, p)` generated by `h` and the components
//! `f^β − Σ_σ u_{βσ} g^σ` of `f − U(g)`, for an exact unitary `U`.
//!
//! Invariants are only evaluated when the ideal is monomial, possibly after
//! a linear change of coordinates `z − p = A w` supplied by the caller. A
//! generator counts as monomial when it is `w^μ` times a unit, i.e. every
//! term is divisible by `w^μ` and the `w^μ` term itself is present.

use std::collections::BTreeMap;

use super::decompose::HoloDecomposition;
use super::ideal::MonomialIdeal;
use crate::algebra::{ComplexRational, HoloPolynomial, MultiIndex};
use crate::error::{Error, Result};

type Terms = BTreeMap<MultiIndex, ComplexRational>;

#[derive(Clone, Debug, PartialEq)]
pub struct LocalIdeal {
    pub n: usize,
    /// Generators in the `(z − p)` coordinates; zero generators are dropped.
    pub generators: Vec<HoloPolynomial>,
}

fn is_unitary(u: &[Vec<ComplexRational>]) -> bool {
    let k = u.len();
    if u.iter().any(|row| row.len() != k) {
        return false;
    }
    (0..k).all(|i| {
        (0..k).all(|j| {
            let mut s = ComplexRational::zero();
            for row in u {
                s += &(&row[i].conj() * &row[j]);
            }
            s == if i == j { ComplexRational::one() } else { ComplexRational::zero() }
        })
    })
}

/// Builds `I(ρ, U, p)` from a decomposition. `u` is indexed by the `β` order
/// of [`HoloDecomposition::betas`] and must be exactly unitary.
pub fn local_ideal(dec: &HoloDecomposition, u: &[Vec<ComplexRational>]) -> Result<LocalIdeal> {
    let betas = dec.betas();
    if u.len() != betas.len() {
        return Err(Error::DimensionMismatch { expected: betas.len(), got: u.len() });
    }
    if !is_unitary(u) {
        return Err(Error::Domain("U must be exactly unitary".into()));
    }
    let n = dec.h.n();
    let mut generators = Vec::new();
    if !dec.h.is_zero() {
        generators.push(dec.h.clone());
    }
    for (bi, beta) in betas.iter().enumerate() {
        let mut acc = dec.f[beta].clone();
        for (si, sigma) in betas.iter().enumerate() {
            if !u[bi][si].is_zero() {
                acc = &acc - &dec.g[sigma].scale(&u[bi][si]);
            }
        }
        if !acc.is_zero() {
            generators.push(acc);
        }
    }
    Ok(LocalIdeal { n, generators })
}

fn mul(a: &Terms, b: &Terms) -> Terms {
    let mut out = Terms::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            *out.entry(ea.add(eb)).or_default() += &(ca * cb);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Substitutes `z − p = A w`.
fn substitute(p: &HoloPolynomial, a: &[Vec<ComplexRational>]) -> Terms {
    let n = p.n();
    let linear: Vec<Terms> = (0..n)
        .map(|k| (0..n).filter(|&j| !a[k][j].is_zero()).map(|j| (MultiIndex::unit(n, j), a[k][j].clone())).collect())
        .collect();
    let mut out = Terms::new();
    for (alpha, c) in p.terms() {
        let mut term: Terms = [(MultiIndex::zero(n), c.clone())].into_iter().collect();
        for (k, &e) in alpha.entries().iter().enumerate() {
            for _ in 0..e {
                term = mul(&term, &linear[k]);
            }
        }
        for (m, v) in term {
            *out.entry(m).or_default() += &v;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn determinant_nonzero(a: &[Vec<ComplexRational>]) -> bool {
    let n = a.len();
    let mut m: Vec<Vec<ComplexRational>> = a.to_vec();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else { return false };
        m.swap(col, p);
        let inv = m[col][col].inv().expect("pivot is nonzero");
        for r in (col + 1)..n {
            let f = &m[r][col] * &inv;
            for c in col..n {
                let d = &f * &m[col][c];
                m[r][c] -= &d;
            }
        }
    }
    true
}

/// Exponent `μ` with `q = w^μ · unit`, if there is one.
fn monomial_part(q: &Terms, n: usize) -> Option<MultiIndex> {
    let mu = MultiIndex::new((0..n).map(|k| q.keys().map(|e| e.entries()[k]).min().unwrap_or(0)).collect());
    q.contains_key(&mu).then_some(mu)
}

impl LocalIdeal {
    /// The monomial ideal in `w` coordinates (`z − p = A w`, identity if
    /// `None`), or `Unsupported` when some generator is not a monomial times
    /// a unit. A generator that is a unit makes the ideal the whole ring,
    /// which is reported as a domain error.
    pub fn as_monomial(&self, change: Option<&[Vec<ComplexRational>]>) -> Result<MonomialIdeal> {
        let n = self.n;
        if let Some(a) = change {
            if a.len() != n || a.iter().any(|r| r.len() != n) {
                return Err(Error::DimensionMismatch { expected: n, got: a.len() });
            }
            if !determinant_nonzero(a) {
                return Err(Error::Domain("coordinate change must be invertible".into()));
            }
        }
        let mut gens = Vec::new();
        for g in &self.generators {
            let terms = match change {
                Some(a) => substitute(g, a),
                None => g.terms().clone(),
            };
            let mu = monomial_part(&terms, n)
                .ok_or_else(|| Error::Unsupported(format!("generator {g:?} is not a monomial times a unit")))?;
            if mu.is_zero() {
                return Err(Error::Domain("a generator is a unit; the ideal is the whole ring".into()));
            }
            gens.push(mu);
        }
        MonomialIdeal::new(n, gens)
    }
}
