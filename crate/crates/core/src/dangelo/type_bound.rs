//! Lower bounds for the type `Δ(ρ, p) = sup_γ ν(ρ∘γ)/ν(γ)` by exact
//! composition with finitely many curves: monomial curves
//! `ζ ↦ p + (c_1 ζ^{a_1}, …, c_n ζ^{a_n})` and any user-supplied jets.
//!
//! `ν(ρ∘γ)` is the total degree in `(ζ, ζ̄)` of the lowest nonzero term.
//! An exactly vanishing composition gives `∞`. Only lower bounds are
//! produced; nothing here bounds `Δ` from above.

use rayon::prelude::*;

use super::ideal::Extended;
use crate::algebra::{compose_exact, curve_order, vanishing_order, ComplexRational, CurveJet, ExactPoint, HermitianPolynomial, Order, Rational};
use crate::error::{Error, Result};

/// Coefficients tried for monomial curves, in order; `budget` takes a prefix.
fn coefficient_list() -> Vec<ComplexRational> {
    vec![
        ComplexRational::zero(),
        ComplexRational::one(),
        ComplexRational::from_ints(-1, 0),
        ComplexRational::i(),
        ComplexRational::from_ints(1, 1),
        ComplexRational::from_ints(2, 0),
        ComplexRational::ratio(1, 2),
        ComplexRational::from_ints(0, -1),
        ComplexRational::from_ints(1, -1),
        ComplexRational::from_ints(-2, 0),
    ]
}

#[derive(Clone, Debug)]
pub struct TypeSearch {
    /// Largest exponent `a_k` of a monomial curve.
    pub max_curve_degree: u32,
    /// Number of coefficients tried per component (including 0), at most 10.
    pub budget: usize,
    /// Extra curves, anchored at `p`.
    pub curves: Vec<CurveJet>,
}

impl Default for TypeSearch {
    fn default() -> Self {
        Self { max_curve_degree: 3, budget: 3, curves: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TypeBound {
    pub value: Extended<Rational>,
    /// The curve attaining `value`.
    pub witness: Option<CurveJet>,
    pub curves_tried: usize,
}

fn monomial_curves(p: &ExactPoint, search: &TypeSearch) -> Result<Vec<CurveJet>> {
    let n = p.len();
    let coeffs: Vec<ComplexRational> = coefficient_list().into_iter().take(search.budget.max(2)).collect();
    // per component: (0, exponent 1) once, or (c ≠ 0, a) for a in 1..=D
    let mut choices: Vec<(ComplexRational, u32)> = vec![(ComplexRational::zero(), 1)];
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        for a in 1..=search.max_curve_degree.max(1) {
            choices.push((c.clone(), a));
        }
    }
    let total = choices.len().pow(n as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut rest = code;
        let picks: Vec<&(ComplexRational, u32)> = (0..n)
            .map(|_| {
                let v = &choices[rest % choices.len()];
                rest /= choices.len();
                v
            })
            .collect();
        if picks.iter().all(|(c, _)| c.is_zero()) {
            continue;
        }
        let cs: Vec<ComplexRational> = picks.iter().map(|(c, _)| c.clone()).collect();
        let es: Vec<u32> = picks.iter().map(|(_, a)| *a).collect();
        out.push(CurveJet::monomial(p.clone(), &cs, &es)?);
    }
    Ok(out)
}

/// Ratio for one curve; `None` stands for `∞`.
fn ratio(rho: &HermitianPolynomial, gamma: &CurveJet) -> Result<Option<Rational>> {
    let nu_gamma = curve_order(gamma)?;
    match vanishing_order(&compose_exact(rho, gamma)?) {
        Order::Infinite => Ok(None),
        Order::Finite(k) => Ok(Some(Rational::new((k as i64).into(), (nu_gamma as i64).into()))),
        Order::Beyond { truncation } => Err(Error::Domain(format!("exact composition reported truncation {truncation}"))),
    }
}

/// Best ratio over the searched curves. User curves are tried first and
/// an infinite ratio stops the search.
pub fn type_lower_bound(rho: &HermitianPolynomial, p: &[ComplexRational], search: &TypeSearch) -> Result<TypeBound> {
    let n = rho.n();
    if p.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: p.len() });
    }
    let local = rho.recenter(p)?;
    let value = local.eval_diag(p)?;
    if !value.is_zero() {
        return Err(Error::NotOnSet { residual: value.abs_f64(), tol: 0.0 });
    }
    let p = p.to_vec();
    for gamma in &search.curves {
        if gamma.anchor() != &p {
            return Err(Error::AnchorMismatch);
        }
        if ratio(&local, gamma)?.is_none() {
            return Ok(TypeBound { value: Extended::Infinite, witness: Some(gamma.clone()), curves_tried: 1 });
        }
    }
    let mut curves = search.curves.clone();
    curves.extend(monomial_curves(&p, search)?);
    let ratios: Vec<Option<Rational>> = curves.par_iter().map(|g| ratio(&local, g)).collect::<Result<_>>()?;
    let mut best: Option<(usize, Extended<Rational>)> = None;
    for (i, r) in ratios.into_iter().enumerate() {
        let v = r.map_or(Extended::Infinite, Extended::Finite);
        if best.as_ref().is_none_or(|(_, b)| v > *b) {
            best = Some((i, v));
        }
    }
    let (i, value) = best.ok_or_else(|| Error::Domain("no curves to search".into()))?;
    Ok(TypeBound { value, witness: Some(curves[i].clone()), curves_tried: curves.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::real_point;
    use crate::catalog;

    fn origin(n: usize) -> ExactPoint {
        vec![ComplexRational::zero(); n]
    }

    fn q(k: i64) -> Extended<Rational> {
        Extended::Finite(Rational::from_integer(k.into()))
    }

    #[test]
    fn finite_type_examples() {
        for m in 1..=3 {
            let b = type_lower_bound(&catalog::finite_type(m), &origin(2), &TypeSearch::default()).unwrap();
            assert_eq!(b.value, q(2 * m as i64), "m = {m}");
        }
    }

    #[test]
    fn cone_is_infinite() {
        let b = type_lower_bound(&catalog::cone(), &origin(2), &TypeSearch::default()).unwrap();
        assert_eq!(b.value, Extended::Infinite);
    }

    #[test]
    fn mmz_with_its_line() {
        let p = real_point(&[(1, 1), (1, 1), (0, 1), (0, 1)]);
        let line = CurveJet::monomial(p.clone(), &[ComplexRational::one(), ComplexRational::one(), ComplexRational::zero(), ComplexRational::zero()], &[1, 1, 1, 1]).unwrap();
        let search = TypeSearch { max_curve_degree: 1, budget: 2, curves: vec![line] };
        let b = type_lower_bound(&catalog::mmz(), &p, &search).unwrap();
        assert_eq!(b.value, Extended::Infinite);
        assert_eq!(b.curves_tried, 1);
    }

    #[test]
    fn monotone_in_curve_degree() {
        let rho = catalog::finite_type(3);
        let lo = type_lower_bound(&rho, &origin(2), &TypeSearch { max_curve_degree: 1, budget: 2, curves: vec![] }).unwrap();
        let hi = type_lower_bound(&rho, &origin(2), &TypeSearch { max_curve_degree: 3, budget: 2, curves: vec![] }).unwrap();
        assert!(lo.value <= hi.value);
    }

    #[test]
    fn point_off_x_is_rejected() {
        let err = type_lower_bound(&catalog::cone(), &real_point(&[(1, 1), (0, 1)]), &TypeSearch::default()).unwrap_err();
        assert!(matches!(err, Error::NotOnSet { .. }));
    }
}
