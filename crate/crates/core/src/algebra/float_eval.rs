//! Double-precision evaluation of a Hermitian polynomial for points that are
//! not exact (solver iterates, projected lattice points).
//!
//! Error contract: for degree ≤ 8, coefficient height ≤ 2¹⁶ and points in
//! `[−2, 2]^{2n}`, `|eval − exact| ≤ 2⁻⁴⁰ · abs_bound`, where `abs_bound` is
//! `Σ |c_{αβ}| |z−p|^α |w−p|^β`.

use num_complex::Complex64;

use super::polynomial::HermitianPolynomial;
use super::scalar::point_to_c64;

/// Polarized form `P(z, ζ) = Σ c_{αβ} (z−p)^α (ζ−p̄)^β`, so that
/// `ρ(z, w̄) = P(z, conj w)`. `P` is holomorphic in both arguments.
#[derive(Clone, Debug)]
pub struct FloatHermitian {
    n: usize,
    center: Vec<Complex64>,
    terms: Vec<(Vec<u32>, Vec<u32>, Complex64)>,
    max_exp: usize,
}

/// Value of `ρ(z, w̄)` together with `∂P/∂z_k` and `∂P/∂ζ_k` at `ζ = conj w`.
#[derive(Clone, Debug)]
pub struct EvalWithGrad {
    pub value: Complex64,
    pub d_z: Vec<Complex64>,
    pub d_wbar: Vec<Complex64>,
}

/// Precomputed powers `(z_k − p_k)^e` (or `conj(w_k − p_k)^e`) for one point.
#[derive(Clone, Debug)]
pub struct PowerTable {
    rows: Vec<Vec<Complex64>>,
}

impl PowerTable {
    fn new(shifted: impl Iterator<Item = Complex64>, max_exp: usize) -> Self {
        let rows = shifted
            .map(|x| {
                let mut row = Vec::with_capacity(max_exp + 1);
                let mut acc = Complex64::new(1.0, 0.0);
                row.push(acc);
                for _ in 0..max_exp {
                    acc *= x;
                    row.push(acc);
                }
                row
            })
            .collect();
        Self { rows }
    }

    #[inline]
    fn get(&self, k: usize, e: u32) -> Complex64 {
        self.rows[k][e as usize]
    }
}

impl FloatHermitian {
    pub fn new(rho: &HermitianPolynomial) -> Self {
        let terms = rho
            .terms()
            .iter()
            .map(|((a, b), c)| (a.entries().to_vec(), b.entries().to_vec(), c.to_c64()))
            .collect();
        Self { n: rho.n(), center: point_to_c64(rho.center()), terms, max_exp: rho.max_exponent() as usize }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn center(&self) -> &[Complex64] {
        &self.center
    }

    /// Powers of `z − p`, for use as the holomorphic argument.
    pub fn holo_powers(&self, z: &[Complex64]) -> PowerTable {
        PowerTable::new(z.iter().zip(&self.center).map(|(z, c)| z - c), self.max_exp)
    }

    /// Powers of `conj(w − p)`, for use as the antiholomorphic argument.
    pub fn anti_powers(&self, w: &[Complex64]) -> PowerTable {
        PowerTable::new(w.iter().zip(&self.center).map(|(w, c)| (w - c).conj()), self.max_exp)
    }

    pub fn eval(&self, z: &[Complex64], w: &[Complex64]) -> Complex64 {
        self.eval_tables(&self.holo_powers(z), &self.anti_powers(w))
    }

    pub fn eval_diag(&self, z: &[Complex64]) -> f64 {
        self.eval(z, z).re
    }

    pub fn eval_tables(&self, pz: &PowerTable, pw: &PowerTable) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, b, c) in &self.terms {
            let mut m = *c;
            for k in 0..self.n {
                if a[k] > 0 {
                    m *= pz.get(k, a[k]);
                }
                if b[k] > 0 {
                    m *= pw.get(k, b[k]);
                }
            }
            acc += m;
        }
        acc
    }

    /// `Σ |c| |z−p|^α |w−p|^β`, the scale against which rounding error is measured.
    pub fn abs_bound(&self, z: &[Complex64], w: &[Complex64]) -> f64 {
        let zs: Vec<f64> = z.iter().zip(&self.center).map(|(z, c)| (z - c).norm()).collect();
        let ws: Vec<f64> = w.iter().zip(&self.center).map(|(w, c)| (w - c).norm()).collect();
        self.terms
            .iter()
            .map(|(a, b, c)| {
                let mut m = c.norm();
                for k in 0..self.n {
                    m *= zs[k].powi(a[k] as i32) * ws[k].powi(b[k] as i32);
                }
                m
            })
            .sum()
    }

    pub fn eval_with_grad_tables(&self, pz: &PowerTable, pw: &PowerTable) -> EvalWithGrad {
        let n = self.n;
        let zero = Complex64::new(0.0, 0.0);
        let mut value = zero;
        let mut d_z = vec![zero; n];
        let mut d_wbar = vec![zero; n];
        for (a, b, c) in &self.terms {
            let mut m = *c;
            for k in 0..n {
                if a[k] > 0 {
                    m *= pz.get(k, a[k]);
                }
                if b[k] > 0 {
                    m *= pw.get(k, b[k]);
                }
            }
            value += m;
            for k in 0..n {
                if a[k] > 0 {
                    let mut dm = *c * a[k] as f64;
                    for j in 0..n {
                        let ea = if j == k { a[j] - 1 } else { a[j] };
                        if ea > 0 {
                            dm *= pz.get(j, ea);
                        }
                        if b[j] > 0 {
                            dm *= pw.get(j, b[j]);
                        }
                    }
                    d_z[k] += dm;
                }
                if b[k] > 0 {
                    let mut dm = *c * b[k] as f64;
                    for j in 0..n {
                        if a[j] > 0 {
                            dm *= pz.get(j, a[j]);
                        }
                        let eb = if j == k { b[j] - 1 } else { b[j] };
                        if eb > 0 {
                            dm *= pw.get(j, eb);
                        }
                    }
                    d_wbar[k] += dm;
                }
            }
        }
        EvalWithGrad { value, d_z, d_wbar }
    }

    pub fn eval_with_grad(&self, z: &[Complex64], w: &[Complex64]) -> EvalWithGrad {
        self.eval_with_grad_tables(&self.holo_powers(z), &self.anti_powers(w))
    }

    /// Real gradient of `ρ(z, z̄)` with respect to `(Re z_k, Im z_k)`,
    /// interleaved; length `2n`.
    pub fn real_gradient(&self, z: &[Complex64]) -> (f64, Vec<f64>) {
        let g = self.eval_with_grad(z, z);
        let mut out = Vec::with_capacity(2 * self.n);
        for k in 0..self.n {
            // with ζ = z̄: d/dx = ∂_z + ∂_ζ, d/dy = i(∂_z − ∂_ζ)
            let dx = g.d_z[k] + g.d_wbar[k];
            let dy = Complex64::i() * (g.d_z[k] - g.d_wbar[k]);
            out.push(dx.re);
            out.push(dy.re);
        }
        (g.value.re, out)
    }
}
