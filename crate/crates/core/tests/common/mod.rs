//! Random inputs shared by the property, integration and acceptance tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use segre_core::algebra::{ComplexRational, ExactPoint, HermitianPolynomial, MultiIndex, Rational};

pub fn rational(rng: &mut impl Rng, height: i64) -> Rational {
    Rational::new(rng.random_range(-height..=height).into(), rng.random_range(1..=height).into())
}

pub fn complex(rng: &mut impl Rng, height: i64) -> ComplexRational {
    ComplexRational::new(rational(rng, height), rational(rng, height))
}

pub fn point(rng: &mut impl Rng, n: usize, height: i64) -> ExactPoint {
    (0..n).map(|_| complex(rng, height)).collect()
}

fn exponent(rng: &mut impl Rng, n: usize, max_degree: u32) -> MultiIndex {
    let mut e = vec![0u32; n];
    let total = rng.random_range(0..=max_degree);
    for _ in 0..total {
        e[rng.random_range(0..n)] += 1;
    }
    MultiIndex::new(e)
}

/// Hermitian `ρ` with up to `terms` conjugate pairs of total degree at most
/// `max_degree`, coefficient heights at most `height`, about `center`.
pub fn hermitian(rng: &mut impl Rng, n: usize, max_degree: u32, height: i64, terms: usize, center: ExactPoint) -> HermitianPolynomial {
    let mut entries = Vec::new();
    for _ in 0..rng.random_range(1..=terms) {
        let a = exponent(rng, n, max_degree);
        let left = max_degree - a.degree();
        let b = exponent(rng, n, left);
        let c = if a == b { ComplexRational::real(rational(rng, height)) } else { complex(rng, height) };
        if a != b {
            entries.push(((b.clone(), a.clone()), c.conj()));
        }
        entries.push(((a, b), c));
    }
    HermitianPolynomial::new(n, center, entries).expect("mirrored terms are Hermitian")
}

/// `ρ − (k z₁ + k̄ z̄₁)` with `k` chosen so that the result vanishes at
/// `(z, w̄)` exactly. `None` if `z₁ + w̄₁` and `z₁ − w̄₁` are dependent over ℝ.
pub fn force_segre_pair(rho: &HermitianPolynomial, z: &[ComplexRational], w: &[ComplexRational]) -> Option<HermitianPolynomial> {
    let n = rho.n();
    let p = rho.center();
    let v = rho.eval(z, w).ok()?;
    let z1 = &z[0] - &p[0];
    let w1 = (&w[0] - &p[0]).conj();
    // (x + iy) z1 + (x − iy) w̄1 = x (z1 + w̄1) + y · i (z1 − w̄1)
    let a = &z1 + &w1;
    let b = &ComplexRational::i() * &(&z1 - &w1);
    let det = &a.re * &b.im - &a.im * &b.re;
    if det == Rational::from_integer(0.into()) {
        return None;
    }
    let x = (&v.re * &b.im - &v.im * &b.re) / &det;
    let y = (&a.re * &v.im - &a.im * &v.re) / &det;
    let k = ComplexRational::new(x, y);
    let e = MultiIndex::unit(n, 0);
    let zero = MultiIndex::zero(n);
    let correction = HermitianPolynomial::new(n, p.clone(), [((e.clone(), zero.clone()), k.clone()), ((zero, e), k.conj())]).ok()?;
    Some(rho - &correction)
}

/// `ρ − ρ(z, z̄)`, which vanishes at `z`.
pub fn force_on_set(rho: &HermitianPolynomial, z: &[ComplexRational]) -> HermitianPolynomial {
    let v = rho.eval_diag(z).expect("dimensions agree");
    let n = rho.n();
    let constant = HermitianPolynomial::new(n, rho.center().clone(), [((MultiIndex::zero(n), MultiIndex::zero(n)), v)])
        .expect("real constant");
    rho - &constant
}

pub fn gaussian_vector(rng: &mut impl Rng, m: usize) -> nalgebra::DVector<Complex64> {
    nalgebra::DVector::from_fn(m, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

/// Haar-ish random unitary: the Q factor of a complex Gaussian matrix.
pub fn random_unitary(rng: &mut impl Rng, m: usize) -> DMatrix<Complex64> {
    let a = DMatrix::from_fn(m, m, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    a.qr().q()
}

pub fn cloud_points(rng: &mut impl Rng, n: usize, count: usize) -> Vec<Vec<Complex64>> {
    (0..count)
        .map(|_| (0..n).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect())
        .collect()
}

/// Naive all-pairs Hausdorff distance, written independently of the library.
pub fn naive_hausdorff(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
    let d = |x: &Vec<Complex64>, y: &Vec<Complex64>| -> f64 {
        x.iter().zip(y).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt()
    };
    let directed = |s: &[Vec<Complex64>], t: &[Vec<Complex64>]| {
        s.iter().map(|x| t.iter().map(|y| d(x, y)).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

/// Staircase count by enumeration of the box `[0, side)ⁿ`, with divisibility
/// tested directly on exponent vectors.
pub fn staircase_count(n: usize, gens: &[Vec<u32>], side: u32) -> u64 {
    let mut count = 0;
    let total = (side as u64).pow(n as u32);
    for code in 0..total {
        let mut rest = code;
        let e: Vec<u32> = (0..n)
            .map(|_| {
                let v = (rest % side as u64) as u32;
                rest /= side as u64;
                v
            })
            .collect();
        if !gens.iter().any(|g| g.iter().zip(&e).all(|(a, b)| a <= b)) {
            count += 1;
        }
    }
    count
}
