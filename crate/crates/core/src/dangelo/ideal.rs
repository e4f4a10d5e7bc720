//! Monomial ideals and the invariants `τ*`, `K`, `D`.
//!
//! `τ*` is computed only in its monomial-curve form: the maximum over weight
//! vectors `a ∈ {1..A}ⁿ` of `min_α ⟨a, α⟩ / min_j a_j`, the orders of
//! contact along the curves `ζ ↦ (ζ^{a_1}, …, ζ^{a_n})`.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::scalar::format_rational;
use crate::algebra::{MultiIndex, Rational};
use crate::error::{Error, Result};

/// A value in `ℕ ∪ {∞}` (or `ℚ ∪ {∞}`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Extended<T> {
    Finite(T),
    Infinite,
}

impl<T> Extended<T> {
    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn finite(self) -> Option<T> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }
}

impl fmt::Display for Extended<u64> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Infinite => f.write_str("INFINITE"),
        }
    }
}

impl fmt::Display for Extended<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => f.write_str(&format_rational(v)),
            Extended::Infinite => f.write_str("INFINITE"),
        }
    }
}

/// Ideal generated by monomials `z^α`, stored as its minimal generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIdeal {
    n: usize,
    generators: Vec<MultiIndex>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct IdealJson {
    pub n: usize,
    pub generators: Vec<Vec<u32>>,
}

impl MonomialIdeal {
    /// Minimizes the generating set (drops duplicates and multiples).
    /// The unit ideal (a zero exponent) is rejected.
    pub fn new(n: usize, generators: impl IntoIterator<Item = MultiIndex>) -> Result<Self> {
        let mut gens: Vec<MultiIndex> = Vec::new();
        for g in generators {
            if g.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: g.len() });
            }
            if g.is_zero() {
                return Err(Error::Domain("the unit ideal is not a proper ideal".into()));
            }
            gens.push(g);
        }
        gens.sort();
        gens.dedup();
        let minimal: Vec<MultiIndex> =
            gens.iter().filter(|g| !gens.iter().any(|h| h != *g && h.divides(g))).cloned().collect();
        Ok(Self { n, generators: minimal })
    }

    /// `𝔪^k`: all monomials of degree `k`.
    pub fn max_ideal_power(n: usize, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("the unit ideal is not a proper ideal".into()));
        }
        Self::new(n, monomials_of_degree(n, k))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: IdealJson = serde_json::from_str(s)?;
        Self::new(j.n, j.generators.into_iter().map(MultiIndex::new))
    }

    pub fn to_json(&self) -> IdealJson {
        IdealJson { n: self.n, generators: self.generators.iter().map(|g| g.entries().to_vec()).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[MultiIndex] {
        &self.generators
    }

    pub fn contains(&self, m: &MultiIndex) -> bool {
        self.generators.iter().any(|g| g.divides(m))
    }

    /// Exponent of the pure power `z_k^a` among the generators, if any.
    fn pure_power(&self, k: usize) -> Option<u32> {
        self.generators
            .iter()
            .filter(|g| g.entries().iter().enumerate().all(|(j, &e)| j == k || e == 0))
            .map(|g| g.entries()[k])
            .min()
    }

    /// Zero-dimensional (zero set `{0}`) iff every axis has a pure power.
    pub fn is_zero_dimensional(&self) -> bool {
        (0..self.n).all(|k| self.pure_power(k).is_some())
    }

    fn max_generator_degree(&self) -> u32 {
        self.generators.iter().map(MultiIndex::degree).max().unwrap_or(0)
    }
}

/// All exponent vectors of total degree `k` in `n` variables.
pub fn monomials_of_degree(n: usize, k: u32) -> Vec<MultiIndex> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if cur.len() + 1 == n {
            cur.push(left);
            out.push(MultiIndex::new(cur.clone()));
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, k, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// `K(I) = min{k : 𝔪^k ⊂ I}`.
pub fn ideal_k(ideal: &MonomialIdeal) -> Extended<u64> {
    if !ideal.is_zero_dimensional() {
        return Extended::Infinite;
    }
    // z^β with β_j < a_j escapes I, so K ≤ Σ(a_j − 1) + 1
    let bound: u32 = (0..ideal.n).map(|k| ideal.pure_power(k).unwrap() - 1).sum::<u32>() + 1;
    let k = (1..=bound).find(|&k| monomials_of_degree(ideal.n, k).iter().all(|m| ideal.contains(m))).unwrap_or(bound);
    Extended::Finite(k as u64)
}

/// `D(I) = dim 𝒪/I`: the number of staircase monomials.
pub fn ideal_d(ideal: &MonomialIdeal) -> Extended<u64> {
    if !ideal.is_zero_dimensional() {
        return Extended::Infinite;
    }
    let sides: Vec<u32> = (0..ideal.n).map(|k| ideal.pure_power(k).unwrap()).collect();
    let mut count = 0u64;
    let mut cur = vec![0u32; ideal.n];
    loop {
        if !ideal.contains(&MultiIndex::new(cur.clone())) {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == ideal.n {
                return Extended::Finite(count);
            }
            cur[k] += 1;
            if cur[k] < sides[k] {
                break;
            }
            cur[k] = 0;
            k += 1;
        }
    }
}

/// Default weight bound `A = 2 · (max generator degree)`.
pub fn default_weight_bound(ideal: &MonomialIdeal) -> u32 {
    2 * ideal.max_generator_degree().max(1)
}

/// Monomial-curve `τ*`, weights in `{1..A}ⁿ`. `∞` unless zero-dimensional.
pub fn tau_star_monomial(ideal: &MonomialIdeal, bound: u32) -> Extended<Rational> {
    if !ideal.is_zero_dimensional() {
        return Extended::Infinite;
    }
    let n = ideal.n;
    let bound = bound.max(1) as u64;
    let total = bound.pow(n as u32);
    let value = |code: u64| -> Rational {
        let mut rest = code;
        let a: Vec<u64> = (0..n)
            .map(|_| {
                let v = rest % bound + 1;
                rest /= bound;
                v
            })
            .collect();
        let order = ideal
            .generators
            .iter()
            .map(|g| g.entries().iter().zip(&a).map(|(&e, &w)| e as u64 * w).sum::<u64>())
            .min()
            .expect("zero-dimensional ideals have generators");
        let m = *a.iter().min().unwrap();
        Rational::new((order as i64).into(), (m as i64).into())
    };
    let best = (0..total).into_par_iter().map(value).reduce_with(|x, y| if y > x { y } else { x });
    Extended::Finite(best.expect("at least one weight vector"))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainReport {
    pub tau_star: Extended<Rational>,
    pub k: Extended<u64>,
    pub d: Extended<u64>,
    pub zero_dimensional: bool,
    /// `τ* ≤ K ≤ D` when finite; all three infinite otherwise.
    pub holds: bool,
}

pub fn check_inequality_chain(ideal: &MonomialIdeal) -> ChainReport {
    let tau_star = tau_star_monomial(ideal, default_weight_bound(ideal));
    let k = ideal_k(ideal);
    let d = ideal_d(ideal);
    let zero_dimensional = ideal.is_zero_dimensional();
    let holds = match (&tau_star, &k, &d) {
        (Extended::Finite(t), Extended::Finite(k), Extended::Finite(d)) => {
            zero_dimensional && *t <= Rational::from_integer((*k as i64).into()) && k <= d
        }
        (Extended::Infinite, Extended::Infinite, Extended::Infinite) => !zero_dimensional,
        _ => false,
    };
    ChainReport { tau_star, k, d, zero_dimensional, holds }
}
