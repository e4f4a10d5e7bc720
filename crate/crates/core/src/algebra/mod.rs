//! Exact arithmetic foundation: complex rationals, multi-indices, Hermitian and
//! holomorphic polynomials, curve jets and vanishing orders.

pub mod float_eval;
pub mod io;
pub mod polynomial;
pub mod scalar;
pub mod series;

pub use float_eval::FloatHermitian;
pub use polynomial::{HermitianPolynomial, HoloPolynomial, MultiIndex, TermKey};
pub use scalar::{ComplexRational, ExactPoint, FloatPoint, Rational};
pub use series::{compose_exact, compose_with_curve, curve_order, vanishing_order, BiSeries, CurveJet, Order};

/// Polarized evaluation `ρ(z, w̄)`.
pub fn eval_hermitian(
    rho: &HermitianPolynomial,
    z: &[ComplexRational],
    w: &[ComplexRational],
) -> crate::Result<ComplexRational> {
    rho.eval(z, w)
}
