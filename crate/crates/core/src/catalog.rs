//! Standard defining functions used across tests, the CLI and the benchmark.

use crate::algebra::{ComplexRational, HermitianPolynomial, MultiIndex, Rational};

fn int(k: i64) -> Rational {
    Rational::from_integer(k.into())
}

fn origin(n: usize) -> Vec<ComplexRational> {
    vec![ComplexRational::zero(); n]
}

fn abs_power(n: usize, k: usize, power: u32, coeff: i64) -> ((MultiIndex, MultiIndex), ComplexRational) {
    let mut e = vec![0; n];
    e[k] = power;
    ((MultiIndex::new(e.clone()), MultiIndex::new(e)), ComplexRational::from_ints(coeff, 0))
}

/// `x₁² − x₂² + x₃² − x₄³` on ℂ⁴. Its zero set contains a complex line
/// through every point with `x₄ ≥ 0` and no positive-dimensional germ
/// where `x₄ < 0`.
pub fn mmz() -> HermitianPolynomial {
    let e = |k: usize, p: u32| {
        let mut v = vec![0; 4];
        v[k] = p;
        v
    };
    HermitianPolynomial::from_real_monomials(
        4,
        &[
            (int(1), e(0, 2), vec![0; 4]),
            (int(-1), e(1, 2), vec![0; 4]),
            (int(1), e(2, 2), vec![0; 4]),
            (int(-1), e(3, 3), vec![0; 4]),
        ],
    )
    .expect("fixed polynomial is Hermitian")
}

/// `|z₁|² − |z₂|²` on ℂ²: a cone that is a union of complex lines.
pub fn cone() -> HermitianPolynomial {
    HermitianPolynomial::new(2, origin(2), [abs_power(2, 0, 1, 1), abs_power(2, 1, 1, -1)])
        .expect("fixed polynomial is Hermitian")
}

/// `|z₁|² + |z₂|^{2m}` on ℂ²; its zero set is the origin and its type there is `2m`.
pub fn finite_type(m: u32) -> HermitianPolynomial {
    HermitianPolynomial::new(2, origin(2), [abs_power(2, 0, 1, 1), abs_power(2, 1, m, 1)])
        .expect("fixed polynomial is Hermitian")
}

/// `|z₁|² + |z₂|²` on ℂ².
pub fn point_set() -> HermitianPolynomial {
    finite_type(1)
}

/// `Re z₁` on ℂⁿ (only pure terms).
pub fn real_part(n: usize) -> HermitianPolynomial {
    let mut e = vec![0; n];
    e[0] = 1;
    HermitianPolynomial::from_real_monomials(n, &[(int(1), e, vec![0; n])]).expect("fixed polynomial is Hermitian")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::real_point;

    #[test]
    fn mmz_values() {
        let rho = mmz();
        let p = real_point(&[(1, 1), (1, 1), (0, 1), (0, 1)]);
        assert!(rho.eval(&p, &p).unwrap().is_zero());
        let q = real_point(&[(0, 1), (1, 1), (0, 1), (-1, 1)]);
        assert!(rho.eval(&q, &q).unwrap().is_zero());
        assert_eq!(rho.degree(), 3);
    }

    #[test]
    fn cone_symmetric_cancellation() {
        let p = real_point(&[(1, 1), (1, 1)]);
        assert!(cone().eval(&p, &p).unwrap().is_zero());
    }
}
