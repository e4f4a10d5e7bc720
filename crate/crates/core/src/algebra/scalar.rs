//! Exact complex rationals `a + b i` with `a, b ∈ ℚ`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Parses `"p/q"`, `"p"`, or a plain decimal such as `"-0.25"` / `"1e-3"` into an
/// exact rational. Decimals are read exactly (no binary rounding).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in `{s}`")))?;
        let den: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in `{s}`")))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(Rational::new(num, den));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("not a rational or decimal: `{s}`"));
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let digits: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        value = -value;
    }
    Ok(value)
}

/// Canonical `"p/q"` (or `"p"` when the denominator is one).
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact rational approximation of a finite double (the binary value itself).
pub fn rational_from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::Parse(format!("non-finite value {x}")))
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ComplexRational {
    pub re: Rational,
    pub im: Rational,
}

impl ComplexRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self { re, im: Rational::zero() }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(Rational::from_integer(re.into()), Rational::from_integer(im.into()))
    }

    /// `num/den` as a purely real value.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::real(Rational::new(num.into(), den.into()))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0)
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `|x|²`, exact.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs_f64(&self) -> f64 {
        rational_to_f64(&self.norm_sqr()).sqrt()
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self { re: &self.re * r, im: &self.im * r }
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        Ok(Self { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    pub fn from_c64(z: Complex64) -> Result<Self> {
        Ok(Self::new(rational_from_f64(z.re)?, rational_from_f64(z.im)?))
    }
}

impl fmt::Debug for ComplexRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ComplexRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", format_rational(&self.re))
        } else if self.re.is_zero() {
            write!(f, "{}i", format_rational(&self.im))
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", format_rational(&self.re), format_rational(&-self.im.clone()))
        } else {
            write!(f, "{}+{}i", format_rational(&self.re), format_rational(&self.im))
        }
    }
}

impl FromStr for ComplexRational {
    type Err = Error;

    /// Accepts a single real rational (`"3/4"`, `"-0.5"`); complex values
    /// are written as `re,im` pairs by callers and parsed field-wise.
    fn from_str(s: &str) -> Result<Self> {
        Ok(Self::real(parse_rational(s)?))
    }
}

impl From<Rational> for ComplexRational {
    fn from(r: Rational) -> Self {
        Self::real(r)
    }
}

impl<'a> Add<&'a ComplexRational> for &'a ComplexRational {
    type Output = ComplexRational;
    fn add(self, rhs: &ComplexRational) -> ComplexRational {
        ComplexRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a ComplexRational> for &'a ComplexRational {
    type Output = ComplexRational;
    fn sub(self, rhs: &ComplexRational) -> ComplexRational {
        ComplexRational { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a ComplexRational> for &'a ComplexRational {
    type Output = ComplexRational;
    fn mul(self, rhs: &ComplexRational) -> ComplexRational {
        ComplexRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Add for ComplexRational {
    type Output = ComplexRational;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl Sub for ComplexRational {
    type Output = ComplexRational;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl Mul for ComplexRational {
    type Output = ComplexRational;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl Neg for ComplexRational {
    type Output = ComplexRational;
    fn neg(self) -> Self {
        ComplexRational { re: -self.re, im: -self.im }
    }
}

impl Neg for &ComplexRational {
    type Output = ComplexRational;
    fn neg(self) -> ComplexRational {
        ComplexRational { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl AddAssign<&ComplexRational> for ComplexRational {
    fn add_assign(&mut self, rhs: &ComplexRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&ComplexRational> for ComplexRational {
    fn sub_assign(&mut self, rhs: &ComplexRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

/// A point of ℂⁿ with exact coordinates.
pub type ExactPoint = Vec<ComplexRational>;

/// A point of ℂⁿ with floating-point coordinates.
pub type FloatPoint = Vec<Complex64>;

pub fn point_to_c64(p: &[ComplexRational]) -> FloatPoint {
    p.iter().map(ComplexRational::to_c64).collect()
}

/// Builds an exact point from real parts only.
pub fn real_point(coords: &[(i64, i64)]) -> ExactPoint {
    coords.iter().map(|&(p, q)| ComplexRational::ratio(p, q)).collect()
}

/// Parses `2n` comma-separated reals/rationals, interleaved `re,im` per
/// coordinate, into an exact point.
pub fn parse_point_interleaved(s: &str) -> Result<ExactPoint> {
    let parts: Vec<&str> = s.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
    if parts.is_empty() || parts.len() % 2 != 0 {
        return Err(Error::Parse(format!(
            "point must list 2n values (re,im per coordinate), got {}",
            parts.len()
        )));
    }
    parts
        .chunks(2)
        .map(|c| Ok(ComplexRational::new(parse_rational(c[0])?, parse_rational(c[1])?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals_exactly() {
        assert_eq!(parse_rational("3/6").unwrap(), Rational::new(1.into(), 2.into()));
        assert_eq!(parse_rational("-0.25").unwrap(), Rational::new((-1).into(), 4.into()));
        assert_eq!(parse_rational("1e-3").unwrap(), Rational::new(1.into(), 1000.into()));
        assert_eq!(parse_rational("2.5E2").unwrap(), Rational::from_integer(250.into()));
        assert_eq!(parse_rational("7").unwrap(), Rational::from_integer(7.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn denominators_stay_positive_and_reduced() {
        let x = parse_rational("4/-6").unwrap();
        assert_eq!(x.denom(), &BigInt::from(3));
        assert_eq!(x.numer(), &BigInt::from(-2));
        let z = ComplexRational::ratio(2, 4) * ComplexRational::ratio(6, 9);
        assert_eq!(format_rational(&z.re), "1/3");
    }

    #[test]
    fn conjugation_is_an_involution() {
        let z = ComplexRational::new(parse_rational("2/7").unwrap(), parse_rational("-5/3").unwrap());
        assert_eq!(z.conj().conj(), z);
        assert_eq!((&z * &z.conj()).im, Rational::zero());
    }

    #[test]
    fn pow_and_inverse() {
        let z = ComplexRational::from_ints(1, 1);
        assert_eq!(z.pow(2), ComplexRational::from_ints(0, 2));
        assert_eq!(z.pow(0), ComplexRational::one());
        assert_eq!(&z * &z.inv().unwrap(), ComplexRational::one());
        assert!(ComplexRational::zero().inv().is_err());
    }

    #[test]
    fn interleaved_point_parsing() {
        let p = parse_point_interleaved("1,0, 1/2,-3").unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p[1], ComplexRational::new(parse_rational("1/2").unwrap(), parse_rational("-3").unwrap()));
        assert!(parse_point_interleaved("1,0,2").is_err());
    }
}
