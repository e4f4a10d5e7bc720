//! Hermitian polynomials `ρ(z, z̄) = Σ c_{αβ} (z−p)^α (z̄−p̄)^β` and holomorphic
//! polynomials `Σ c_α (z−p)^α`, both with exact complex rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_traits::Zero;

use super::scalar::{ComplexRational, ExactPoint, Rational};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        Self(entries)
    }

    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    /// The unit index `e_k` of length `n`.
    pub fn unit(n: usize, k: usize) -> Self {
        let mut e = vec![0; n];
        e[k] = 1;
        Self(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree `|α|`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// Componentwise `self ≤ other`, i.e. `z^self` divides `z^other`.
    pub fn divides(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `(z−p)^α` at an exact point, given the shifted coordinates `z−p`.
    pub fn monomial(&self, shifted: &[ComplexRational]) -> ComplexRational {
        self.0
            .iter()
            .zip(shifted)
            .fold(ComplexRational::one(), |acc, (&a, x)| if a == 0 { acc } else { &acc * &x.pow(a) })
    }

    /// Every index `a` with `a ≤ self` componentwise.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![Vec::with_capacity(self.0.len())];
        for &a in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (a as usize + 1));
            for prefix in &out {
                for k in 0..=a {
                    let mut v = prefix.clone();
                    v.push(k);
                    next.push(v);
                }
            }
            out = next;
        }
        out.into_iter().map(MultiIndex).collect()
    }

    /// `Π_j binom(α_j, a_j)`.
    pub fn binomial(&self, sub: &MultiIndex) -> BigInt {
        self.0.iter().zip(&sub.0).fold(BigInt::from(1), |acc, (&n, &k)| acc * binom(n, k))
    }
}

fn binom(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::from(1);
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

impl<const N: usize> From<[u32; N]> for MultiIndex {
    fn from(v: [u32; N]) -> Self {
        Self(v.to_vec())
    }
}

pub type TermKey = (MultiIndex, MultiIndex);

fn check_point(n: usize, p: &[ComplexRational]) -> Result<()> {
    if p.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: p.len() });
    }
    Ok(())
}

fn shifted(point: &[ComplexRational], center: &[ComplexRational]) -> Vec<ComplexRational> {
    point.iter().zip(center).map(|(z, c)| z - c).collect()
}

/// Expands `((x−q) + s)^α = Σ_{a≤α} binom(α,a) s^{α−a} (x−q)^a`.
fn shift_expansion(alpha: &MultiIndex, s: &[ComplexRational]) -> Vec<(MultiIndex, ComplexRational)> {
    alpha
        .sub_indices()
        .into_iter()
        .map(|a| {
            let rest = MultiIndex(alpha.0.iter().zip(&a.0).map(|(x, y)| x - y).collect());
            let coeff = rest.monomial(s).scale(&Rational::from_integer(alpha.binomial(&a)));
            (a, coeff)
        })
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

/// A real-valued polynomial in `(z, z̄)` stored by its coefficients `c_{αβ}`
/// about a center `p`. Hermitian symmetry `c_{βα} = conj(c_{αβ})` holds for
/// every value built through the checked constructors.
#[derive(Clone, PartialEq, Eq)]
pub struct HermitianPolynomial {
    n: usize,
    center: ExactPoint,
    terms: BTreeMap<TermKey, ComplexRational>,
}

impl HermitianPolynomial {
    /// Builds `ρ` from `((α, β), c)` entries. Repeated keys are summed, zero
    /// coefficients dropped, and Hermitian symmetry is validated.
    pub fn new(
        n: usize,
        center: ExactPoint,
        terms: impl IntoIterator<Item = (TermKey, ComplexRational)>,
    ) -> Result<Self> {
        let rho = Self::new_unchecked(n, center, terms)?;
        rho.validate_symmetry()?;
        Ok(rho)
    }

    /// Same as [`new`](Self::new) but skips the symmetry check. The result may
    /// not define a real function; used for negative controls.
    pub fn new_unchecked(
        n: usize,
        center: ExactPoint,
        terms: impl IntoIterator<Item = (TermKey, ComplexRational)>,
    ) -> Result<Self> {
        check_point(n, &center)?;
        let mut map: BTreeMap<TermKey, ComplexRational> = BTreeMap::new();
        for ((a, b), c) in terms {
            if a.len() != n || b.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: a.len().max(b.len()) });
            }
            *map.entry((a, b)).or_default() += &c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Self { n, center, terms: map })
    }

    /// The zero polynomial about `center`.
    pub fn zero(n: usize, center: ExactPoint) -> Result<Self> {
        Self::new(n, center, std::iter::empty())
    }

    /// Builds `ρ` about the origin from a real polynomial in the real
    /// coordinates `x_j = Re z_j`, `y_j = Im z_j`. Each monomial is given as
    /// `(coefficient, x exponents, y exponents)`.
    pub fn from_real_monomials(n: usize, monomials: &[(Rational, Vec<u32>, Vec<u32>)]) -> Result<Self> {
        // x = (z + z̄)/2, y = (z − z̄)/(2i) = −(i/2)(z − z̄)
        let half = ComplexRational::ratio(1, 2);
        let mut x_forms = Vec::with_capacity(n);
        let mut y_forms = Vec::with_capacity(n);
        for k in 0..n {
            let e = MultiIndex::unit(n, k);
            let z = MultiIndex::zero(n);
            let mut xf = Self { n, center: vec![ComplexRational::zero(); n], terms: BTreeMap::new() };
            xf.terms.insert((e.clone(), z.clone()), half.clone());
            xf.terms.insert((z.clone(), e.clone()), half.clone());
            let mut yf = xf.clone();
            let mi_half = ComplexRational::new(Rational::zero(), Rational::new((-1).into(), 2.into()));
            yf.terms.insert((e.clone(), z.clone()), mi_half.clone());
            yf.terms.insert((z, e), -mi_half);
            x_forms.push(xf);
            y_forms.push(yf);
        }
        let origin = vec![ComplexRational::zero(); n];
        let mut total = Self::zero(n, origin.clone())?;
        for (coef, xe, ye) in monomials {
            if xe.len() != n || ye.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: xe.len().max(ye.len()) });
            }
            let mut term = Self::new(
                n,
                origin.clone(),
                [((MultiIndex::zero(n), MultiIndex::zero(n)), ComplexRational::real(coef.clone()))],
            )?;
            for k in 0..n {
                for _ in 0..xe[k] {
                    term = term.mul_unchecked(&x_forms[k]);
                }
                for _ in 0..ye[k] {
                    term = term.mul_unchecked(&y_forms[k]);
                }
            }
            total = &total + &term;
        }
        total.validate_symmetry()?;
        Ok(total)
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let mut map: BTreeMap<TermKey, ComplexRational> = BTreeMap::new();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                *map.entry((a1.add(a2), b1.add(b2))).or_default() += &(c1 * c2);
            }
        }
        map.retain(|_, c| !c.is_zero());
        Self { n: self.n, center: self.center.clone(), terms: map }
    }

    /// Product of two polynomials about the same center.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.center != other.center {
            return Err(Error::Domain("polynomials have different centers".into()));
        }
        Ok(self.mul_unchecked(other))
    }

    pub fn validate_symmetry(&self) -> Result<()> {
        for ((a, b), c) in &self.terms {
            match self.terms.get(&(b.clone(), a.clone())) {
                Some(m) if *m == c.conj() => {}
                Some(m) => {
                    return Err(Error::NotHermitian {
                        alpha: a.to_string(),
                        beta: b.to_string(),
                        detail: format!("c_ab = {c}, c_ba = {m}"),
                    })
                }
                None => {
                    return Err(Error::NotHermitian {
                        alpha: a.to_string(),
                        beta: b.to_string(),
                        detail: format!("c_ab = {c} has no mirror term"),
                    })
                }
            }
        }
        Ok(())
    }

    pub fn is_hermitian(&self) -> bool {
        self.validate_symmetry().is_ok()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn center(&self) -> &ExactPoint {
        &self.center
    }

    pub fn terms(&self) -> &BTreeMap<TermKey, ComplexRational> {
        &self.terms
    }

    pub fn coeff(&self, alpha: &MultiIndex, beta: &MultiIndex) -> ComplexRational {
        self.terms.get(&(alpha.clone(), beta.clone())).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree `max(|α| + |β|)`; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|(a, b)| a.degree() + b.degree()).max().unwrap_or(0)
    }

    /// Largest exponent of any single variable, holomorphic or antiholomorphic.
    pub fn max_exponent(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|(a, b)| a.entries().iter().chain(b.entries()).copied())
            .max()
            .unwrap_or(0)
    }

    /// Polarized evaluation `ρ(z, w̄) = Σ c_{αβ} (z−p)^α conj(w−p)^β`.
    pub fn eval(&self, z: &[ComplexRational], w: &[ComplexRational]) -> Result<ComplexRational> {
        check_point(self.n, z)?;
        check_point(self.n, w)?;
        let zs = shifted(z, &self.center);
        let ws: Vec<ComplexRational> = shifted(w, &self.center).iter().map(ComplexRational::conj).collect();
        let mut acc = ComplexRational::zero();
        for ((a, b), c) in &self.terms {
            acc += &(&(c * &a.monomial(&zs)) * &b.monomial(&ws));
        }
        Ok(acc)
    }

    /// `ρ(z, z̄)`; the imaginary part is exactly zero for Hermitian `ρ`.
    pub fn eval_diag(&self, z: &[ComplexRational]) -> Result<ComplexRational> {
        self.eval(z, z)
    }

    /// Re-expands `ρ` about a new center `q` (exact Taylor shift).
    pub fn recenter(&self, q: &[ComplexRational]) -> Result<Self> {
        check_point(self.n, q)?;
        let s = shifted(q, &self.center);
        let s_bar: Vec<ComplexRational> = s.iter().map(ComplexRational::conj).collect();
        let mut map: BTreeMap<TermKey, ComplexRational> = BTreeMap::new();
        for ((a, b), c) in &self.terms {
            let ea = shift_expansion(a, &s);
            let eb = shift_expansion(b, &s_bar);
            for (a2, ca) in &ea {
                let cca = c * ca;
                for (b2, cb) in &eb {
                    *map.entry((a2.clone(), b2.clone())).or_default() += &(&cca * cb);
                }
            }
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Self { n: self.n, center: q.to_vec(), terms: map })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut terms = self.terms.clone();
        terms.values_mut().for_each(|c| *c = c.scale(r));
        terms.retain(|_, c| !c.is_zero());
        Self { n: self.n, center: self.center.clone(), terms }
    }

    fn combine(&self, other: &Self, sign: i64) -> Self {
        assert_eq!(self.center, other.center, "polynomials must share a center");
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let e = terms.entry(k.clone()).or_default();
            if sign > 0 {
                *e += c;
            } else {
                *e -= c;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Self { n: self.n, center: self.center.clone(), terms }
    }
}

impl<'a> Add<&'a HermitianPolynomial> for &'a HermitianPolynomial {
    type Output = HermitianPolynomial;
    fn add(self, rhs: &HermitianPolynomial) -> HermitianPolynomial {
        self.combine(rhs, 1)
    }
}

impl<'a> Sub<&'a HermitianPolynomial> for &'a HermitianPolynomial {
    type Output = HermitianPolynomial;
    fn sub(self, rhs: &HermitianPolynomial) -> HermitianPolynomial {
        self.combine(rhs, -1)
    }
}

impl fmt::Debug for HermitianPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HermitianPolynomial(n={}, center={:?}, ", self.n, self.center)?;
        f.debug_map().entries(self.terms.iter().map(|((a, b), c)| (format!("{a}{b}"), c))).finish()?;
        write!(f, ")")
    }
}

/// A holomorphic polynomial `Σ c_α (z−p)^α`.
#[derive(Clone, PartialEq, Eq)]
pub struct HoloPolynomial {
    n: usize,
    center: ExactPoint,
    terms: BTreeMap<MultiIndex, ComplexRational>,
}

impl HoloPolynomial {
    pub fn new(
        n: usize,
        center: ExactPoint,
        terms: impl IntoIterator<Item = (MultiIndex, ComplexRational)>,
    ) -> Result<Self> {
        check_point(n, &center)?;
        let mut map: BTreeMap<MultiIndex, ComplexRational> = BTreeMap::new();
        for (a, c) in terms {
            if a.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: a.len() });
            }
            *map.entry(a).or_default() += &c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Self { n, center, terms: map })
    }

    pub fn zero(n: usize, center: ExactPoint) -> Self {
        Self { n, center, terms: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn center(&self) -> &ExactPoint {
        &self.center
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, ComplexRational> {
        &self.terms
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> ComplexRational {
        self.terms.get(alpha).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    pub fn eval(&self, z: &[ComplexRational]) -> Result<ComplexRational> {
        check_point(self.n, z)?;
        let zs = shifted(z, &self.center);
        let mut acc = ComplexRational::zero();
        for (a, c) in &self.terms {
            acc += &(c * &a.monomial(&zs));
        }
        Ok(acc)
    }

    pub fn scale(&self, s: &ComplexRational) -> Self {
        let mut terms: BTreeMap<_, _> = self.terms.iter().map(|(a, c)| (a.clone(), c * s)).collect();
        terms.retain(|_, c: &mut ComplexRational| !c.is_zero());
        Self { n: self.n, center: self.center.clone(), terms }
    }

    /// `|q(z)|² = q(z)·conj(q(z))` as a Hermitian polynomial.
    pub fn norm_sqr(&self) -> HermitianPolynomial {
        let mut map: BTreeMap<TermKey, ComplexRational> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &self.terms {
                *map.entry((a.clone(), b.clone())).or_default() += &(ca * &cb.conj());
            }
        }
        map.retain(|_, c| !c.is_zero());
        HermitianPolynomial { n: self.n, center: self.center.clone(), terms: map }
    }

    /// `2 Re q(z) = q(z) + conj(q(z))` as a Hermitian polynomial.
    pub fn twice_real_part(&self) -> HermitianPolynomial {
        let zero = MultiIndex::zero(self.n);
        let mut map: BTreeMap<TermKey, ComplexRational> = BTreeMap::new();
        for (a, c) in &self.terms {
            *map.entry((a.clone(), zero.clone())).or_default() += c;
            *map.entry((zero.clone(), a.clone())).or_default() += &c.conj();
        }
        map.retain(|_, c| !c.is_zero());
        HermitianPolynomial { n: self.n, center: self.center.clone(), terms: map }
    }
}

impl<'a> Add<&'a HoloPolynomial> for &'a HoloPolynomial {
    type Output = HoloPolynomial;
    fn add(self, rhs: &HoloPolynomial) -> HoloPolynomial {
        assert_eq!(self.center, rhs.center, "polynomials must share a center");
        let mut terms = self.terms.clone();
        for (a, c) in &rhs.terms {
            *terms.entry(a.clone()).or_default() += c;
        }
        terms.retain(|_, c| !c.is_zero());
        HoloPolynomial { n: self.n, center: self.center.clone(), terms }
    }
}

impl<'a> Sub<&'a HoloPolynomial> for &'a HoloPolynomial {
    type Output = HoloPolynomial;
    fn sub(self, rhs: &HoloPolynomial) -> HoloPolynomial {
        self + &rhs.scale(&-ComplexRational::one())
    }
}

impl fmt::Debug for HoloPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HoloPolynomial(n={}, ", self.n)?;
        f.debug_map().entries(self.terms.iter()).finish()?;
        write!(f, ")")
    }
}
