//! Numerical κ-grid search inside a ball `𝔹(p, ε)`.
//!
//! Unknowns: the shared base values `t_{j,m}` (coordinate `λ_j` of every
//! `p_ν` with `ν_j = m`) and the remaining `n − d` coordinates of each point.
//! Residuals: `Re`/`Im` of `ρ(p_ν, p̄_ν′)` over unordered pairs (only `Re` on
//! the diagonal, where the value is real), hinge penalties keeping base values
//! apart and points inside the ball. Levenberg–Marquardt from random starts,
//! then an undamped minimum-norm Newton polish on the `ρ` rows alone.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitDisc};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{multi_index, FloatGrid, Grid};
use crate::algebra::FloatHermitian;
use crate::error::{Error, Result};

pub const DEFAULT_EPS0: f64 = 0.2;
pub const DEFAULT_STAGES: usize = 4;
pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_SEP_FACTOR: f64 = 0.25;
pub const DEFAULT_RESTARTS: usize = 16;
pub const DEFAULT_MAX_ITERS: usize = 200;

/// Radius used by the ball penalty, as a fraction of `ε`.
const BALL_TARGET: f64 = 0.9;
/// Separation used by the hinge penalty, as a multiple of the required one.
const SEP_TARGET: f64 = 1.5;
const POLISH_STEPS: usize = 8;
/// Restarts run concurrently per batch; the lowest-index success wins.
const BATCH: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// κ values tried by the classifier, in order.
    pub kappas: Vec<usize>,
    pub d: usize,
    pub eps0: f64,
    pub stages: usize,
    pub tol: f64,
    pub sep_factor: f64,
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            kappas: vec![1, 2, 3],
            d: 1,
            eps0: DEFAULT_EPS0,
            stages: DEFAULT_STAGES,
            tol: DEFAULT_TOL,
            sep_factor: DEFAULT_SEP_FACTOR,
            restarts: DEFAULT_RESTARTS,
            max_iters: DEFAULT_MAX_ITERS,
            seed: 0,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.kappas.is_empty() || self.kappas.contains(&0) {
            return bad("kappa values must be positive and at least one is required".into());
        }
        if self.d == 0 || self.d >= n {
            return bad(format!("d must satisfy 1 <= d < n = {n}, got {}", self.d));
        }
        if !(self.eps0 > 0.0 && self.eps0.is_finite()) {
            return bad(format!("eps0 must be positive, got {}", self.eps0));
        }
        if self.stages == 0 {
            return bad("at least one stage is required".into());
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return bad(format!("tol must be positive, got {}", self.tol));
        }
        if !(self.sep_factor > 0.0 && self.sep_factor < 1.0) {
            return bad(format!("sep_factor must lie in (0, 1), got {}", self.sep_factor));
        }
        if self.restarts == 0 || self.max_iters == 0 {
            return bad("restarts and max_iters must be at least 1".into());
        }
        Ok(())
    }

    /// `ε₀ / 2^s` for `s = 0..S`.
    pub fn eps_schedule(&self) -> Vec<f64> {
        (0..self.stages).map(|s| self.eps0 / f64::powi(2.0, s as i32)).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub grid: Option<FloatGrid>,
    /// Residual of the returned grid, or the smallest residual among
    /// restarts whose end point met the ball and separation constraints
    /// (`∞` if none did).
    pub best_residual: f64,
    pub restarts_run: usize,
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn restart_seed(seed: u64, eps: f64, lambda: &[usize], kappa: usize, restart: usize) -> u64 {
    let mut h = splitmix(seed);
    h = splitmix(h ^ eps.to_bits());
    for &l in lambda {
        h = splitmix(h ^ l as u64);
    }
    h = splitmix(h ^ ((kappa as u64) << 32));
    splitmix(h ^ restart as u64)
}

/// Fixed shape of one search problem.
struct Problem<'a> {
    rho: &'a FloatHermitian,
    p: &'a [Complex64],
    n: usize,
    d: usize,
    kappa: usize,
    lambda: &'a [usize],
    eps: f64,
    sep: f64,
    /// `coord_var[i][k]`: index of the real part of coordinate `k` of point `i`.
    coord_var: Vec<Vec<usize>>,
    n_vars: usize,
    n_points: usize,
}

impl<'a> Problem<'a> {
    fn new(rho: &'a FloatHermitian, p: &'a [Complex64], kappa: usize, lambda: &'a [usize], eps: f64, sep: f64) -> Self {
        let n = p.len();
        let d = lambda.len();
        let n_points = (kappa + 1).pow(d as u32);
        let base_vars = 2 * d * (kappa + 1);
        let free: Vec<usize> = (0..n).filter(|k| !lambda.contains(k)).collect();
        let coord_var = (0..n_points)
            .map(|i| {
                let nu = multi_index(i, d, kappa);
                (0..n)
                    .map(|k| match lambda.iter().position(|&l| l == k) {
                        Some(j) => 2 * (j * (kappa + 1) + nu[j]),
                        None => base_vars + 2 * (i * free.len() + free.iter().position(|&f| f == k).unwrap()),
                    })
                    .collect()
            })
            .collect();
        let n_vars = base_vars + 2 * n_points * free.len();
        Self { rho, p, n, d, kappa, lambda, eps, sep, coord_var, n_vars, n_points }
    }

    fn n_pair_rows(&self) -> usize {
        self.n_points + self.n_points * (self.n_points - 1)
    }

    fn n_rows(&self) -> usize {
        let base_pairs = self.d * self.kappa * (self.kappa + 1) / 2;
        self.n_pair_rows() + base_pairs + self.n_points
    }

    fn points(&self, x: &[f64]) -> Vec<Vec<Complex64>> {
        self.coord_var
            .iter()
            .map(|vars| vars.iter().map(|&v| Complex64::new(x[v], x[v + 1])).collect())
            .collect()
    }

    fn base(&self, x: &[f64], j: usize, m: usize) -> Complex64 {
        let v = 2 * (j * (self.kappa + 1) + m);
        Complex64::new(x[v], x[v + 1])
    }

    fn init(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let mut x = vec![0.0; self.n_vars];
        let r = 0.5 * self.eps / (self.n as f64).sqrt();
        for vars in &self.coord_var {
            for (k, &v) in vars.iter().enumerate() {
                // shared base values are redrawn by every point touching them
                let [a, b]: [f64; 2] = UnitDisc.sample(rng);
                x[v] = self.p[k].re + r * a;
                x[v + 1] = self.p[k].im + r * b;
            }
        }
        x
    }

    /// Residual vector and optionally the Jacobian.
    fn eval(&self, x: &[f64], with_jac: bool) -> (DVector<f64>, Option<DMatrix<f64>>) {
        let pts = self.points(x);
        let holo: Vec<_> = pts.iter().map(|q| self.rho.holo_powers(q)).collect();
        let anti: Vec<_> = pts.iter().map(|q| self.rho.anti_powers(q)).collect();
        let rows = self.n_rows();
        let mut r = DVector::zeros(rows);
        let mut jac = with_jac.then(|| DMatrix::zeros(rows, self.n_vars));
        let mut row = 0;
        let i_unit = Complex64::i();
        for a in 0..self.n_points {
            for b in a..self.n_points {
                let diag = a == b;
                if let Some(j) = jac.as_mut() {
                    let g = self.rho.eval_with_grad_tables(&holo[a], &anti[b]);
                    r[row] = g.value.re;
                    if !diag {
                        r[row + 1] = g.value.im;
                    }
                    for k in 0..self.n {
                        let va = self.coord_var[a][k];
                        let vb = self.coord_var[b][k];
                        let terms = [(va, g.d_z[k], g.d_z[k] * i_unit), (vb, g.d_wbar[k], -g.d_wbar[k] * i_unit)];
                        for (v, dre, dim) in terms {
                            j[(row, v)] += dre.re;
                            j[(row, v + 1)] += dim.re;
                            if !diag {
                                j[(row + 1, v)] += dre.im;
                                j[(row + 1, v + 1)] += dim.im;
                            }
                        }
                    }
                } else {
                    let v = self.rho.eval_tables(&holo[a], &anti[b]);
                    r[row] = v.re;
                    if !diag {
                        r[row + 1] = v.im;
                    }
                }
                row += if diag { 1 } else { 2 };
            }
        }
        debug_assert_eq!(row, self.n_pair_rows());
        let sep_target = SEP_TARGET * self.sep;
        for j in 0..self.d {
            for m in 0..=self.kappa {
                for m2 in (m + 1)..=self.kappa {
                    let delta = self.base(x, j, m) - self.base(x, j, m2);
                    let dist = delta.norm();
                    if dist < sep_target {
                        r[row] = sep_target - dist;
                        if let (Some(jm), true) = (jac.as_mut(), dist > 0.0) {
                            let (v1, v2) = (2 * (j * (self.kappa + 1) + m), 2 * (j * (self.kappa + 1) + m2));
                            let (gr, gi) = (delta.re / dist, delta.im / dist);
                            jm[(row, v1)] -= gr;
                            jm[(row, v1 + 1)] -= gi;
                            jm[(row, v2)] += gr;
                            jm[(row, v2 + 1)] += gi;
                        }
                    }
                    row += 1;
                }
            }
        }
        let ball_target = BALL_TARGET * self.eps;
        for (i, q) in pts.iter().enumerate() {
            let diff: Vec<Complex64> = q.iter().zip(self.p).map(|(a, b)| a - b).collect();
            let dist = diff.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if dist > ball_target {
                r[row] = dist - ball_target;
                if let Some(jm) = jac.as_mut() {
                    for (k, c) in diff.iter().enumerate() {
                        let v = self.coord_var[i][k];
                        jm[(row, v)] += c.re / dist;
                        jm[(row, v + 1)] += c.im / dist;
                    }
                }
            }
            row += 1;
        }
        (r, jac)
    }

    fn pair_residual(&self, pts: &[Vec<Complex64>]) -> f64 {
        let holo: Vec<_> = pts.iter().map(|q| self.rho.holo_powers(q)).collect();
        let anti: Vec<_> = pts.iter().map(|q| self.rho.anti_powers(q)).collect();
        let mut worst: f64 = 0.0;
        for a in 0..pts.len() {
            for b in a..pts.len() {
                worst = worst.max(self.rho.eval_tables(&holo[a], &anti[b]).norm());
            }
        }
        worst
    }

    fn constraints_hold(&self, pts: &[Vec<Complex64>]) -> bool {
        let inside = pts.iter().all(|q| {
            q.iter().zip(self.p).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt() < self.eps
        });
        let separated = self.lambda.iter().all(|&l| {
            (0..=self.kappa).all(|m| {
                (m + 1..=self.kappa).all(|m2| {
                    // all points with ν_j = m share the value; any representative works
                    let a = pts.iter().enumerate().find(|(i, _)| multi_index(*i, self.d, self.kappa)[self.axis(l)] == m).unwrap().1;
                    let b = pts.iter().enumerate().find(|(i, _)| multi_index(*i, self.d, self.kappa)[self.axis(l)] == m2).unwrap().1;
                    (a[l] - b[l]).norm() >= self.sep
                })
            })
        });
        inside && separated
    }

    fn axis(&self, l: usize) -> usize {
        self.lambda.iter().position(|&x| x == l).unwrap()
    }

    fn levenberg_marquardt(&self, mut x: Vec<f64>, max_iters: usize, stop: f64) -> Vec<f64> {
        let (mut r, mut jac) = self.eval(&x, true);
        let mut cost = r.norm_squared();
        let mut mu = {
            let j = jac.as_ref().unwrap();
            let diag_max = (0..self.n_vars).map(|c| j.column(c).norm_squared()).fold(0.0, f64::max);
            1e-3 * diag_max.max(1e-300)
        };
        let mut iters = 0;
        while iters < max_iters && cost > stop * stop {
            let j = jac.as_ref().unwrap();
            let jt = j.transpose();
            let g = &jt * &r;
            let a = &jt * j;
            let mut accepted = false;
            while iters < max_iters {
                iters += 1;
                let mut damped = a.clone();
                for k in 0..self.n_vars {
                    damped[(k, k)] += mu;
                }
                let Some(chol) = damped.cholesky() else {
                    mu *= 4.0;
                    continue;
                };
                let step = chol.solve(&(-&g));
                let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
                let (rt, _) = self.eval(&trial, false);
                let ct = rt.norm_squared();
                if ct.is_finite() && ct < cost {
                    x = trial;
                    mu = (mu / 3.0).max(1e-300);
                    accepted = true;
                    break;
                }
                mu *= 4.0;
                if mu > 1e300 {
                    break;
                }
            }
            if !accepted {
                break;
            }
            let (r2, j2) = self.eval(&x, true);
            r = r2;
            jac = j2;
            cost = r.norm_squared();
        }
        x
    }

    /// Undamped Newton on the `ρ` rows with minimum-norm steps; keeps the best iterate.
    fn polish(&self, mut x: Vec<f64>) -> Vec<f64> {
        let rows = self.n_pair_rows();
        let mut best = self.pair_residual(&self.points(&x));
        for _ in 0..POLISH_STEPS {
            let (r, jac) = self.eval(&x, true);
            let j = jac.unwrap().rows(0, rows).into_owned();
            let rr = r.rows(0, rows).into_owned();
            let svd = j.svd(true, true);
            let Ok(step) = svd.solve(&(-rr), 1e-14 * svd.singular_values.max()) else {
                break;
            };
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let res = self.pair_residual(&self.points(&trial));
            if !(res < best) {
                break;
            }
            best = res;
            x = trial;
        }
        x
    }

    fn grid(&self, x: &[f64]) -> FloatGrid {
        Grid { d: self.d, kappa: self.kappa, lambda: self.lambda.to_vec(), points: self.points(x) }
    }
}

/// Searches for a κ-grid with base indices `lambda` inside `𝔹(p, ε)`.
/// Never errors on failure to find one; errors only on malformed arguments.
pub fn search_grid(
    rho: &FloatHermitian,
    p: &[Complex64],
    cfg: &SearchConfig,
    kappa: usize,
    eps: f64,
    lambda: &[usize],
) -> Result<SearchOutcome> {
    let n = rho.n();
    if p.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: p.len() });
    }
    if kappa == 0 || !(eps > 0.0) {
        return Err(Error::InvalidConfig("search needs kappa >= 1 and eps > 0".into()));
    }
    if lambda.is_empty() || lambda.windows(2).any(|w| w[0] >= w[1]) || lambda.iter().any(|&l| l >= n) || lambda.len() >= n {
        return Err(Error::InvalidConfig(format!("invalid lambda {lambda:?} for n = {n}")));
    }
    let prob = Problem::new(rho, p, kappa, lambda, eps, cfg.sep_factor * eps);
    let run = |restart: usize| -> (Option<FloatGrid>, f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(restart_seed(cfg.seed, eps, lambda, kappa, restart));
        let x0 = prob.init(&mut rng);
        let x = prob.levenberg_marquardt(x0, cfg.max_iters, 1e-3 * cfg.tol);
        let x = prob.polish(x);
        let pts = prob.points(&x);
        if !prob.constraints_hold(&pts) {
            return (None, f64::INFINITY);
        }
        let res = prob.pair_residual(&pts);
        let grid = prob.grid(&x);
        let ok = res <= cfg.tol && grid.check_structure(Some(n)).is_ok() && grid.coordinate_violations().is_empty();
        (ok.then_some(grid), res)
    };
    let mut best = f64::INFINITY;
    let mut start = 0;
    while start < cfg.restarts {
        let end = (start + BATCH).min(cfg.restarts);
        let results: Vec<_> = (start..end).into_par_iter().map(run).collect();
        for (grid, res) in results {
            if let Some(g) = grid {
                return Ok(SearchOutcome { grid: Some(g), best_residual: res, restarts_run: end });
            }
            best = best.min(res);
        }
        start = end;
    }
    Ok(SearchOutcome { grid: None, best_residual: best, restarts_run: cfg.restarts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::grid::verify_grid_float;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn cfg() -> SearchConfig {
        SearchConfig { kappas: vec![2], ..Default::default() }
    }

    #[test]
    fn config_validation() {
        assert!(cfg().validate(4).is_ok());
        assert!(SearchConfig { sep_factor: 1.0, ..cfg() }.validate(4).is_err());
        assert!(SearchConfig { tol: 0.0, ..cfg() }.validate(4).is_err());
        assert!(SearchConfig { restarts: 0, ..cfg() }.validate(4).is_err());
        assert!(SearchConfig { d: 4, ..cfg() }.validate(4).is_err());
        assert_eq!(cfg().eps_schedule(), vec![0.2, 0.1, 0.05, 0.025]);
    }

    #[test]
    fn finds_grids_near_a_positive_mmz_point() {
        let rho = FloatHermitian::new(&catalog::mmz());
        let p = [c(1.008f64.sqrt()), c(1.0), c(0.0), c(0.2)];
        for eps in cfg().eps_schedule() {
            let out = search_grid(&rho, &p, &cfg(), 2, eps, &[0]).unwrap();
            let g = out.grid.expect("grid expected");
            assert!(verify_grid_float(&rho, &g, cfg().tol).unwrap().passed);
            assert!(out.best_residual <= cfg().tol);
        }
    }

    #[test]
    fn no_grid_at_a_negative_mmz_point() {
        let rho = FloatHermitian::new(&catalog::mmz());
        let p = [c(0.0), c(1.0), c(0.0), c(-1.0)];
        let out = search_grid(&rho, &p, &cfg(), 2, 0.025, &[0]).unwrap();
        assert!(out.grid.is_none());
        assert!(out.best_residual > 10.0 * cfg().tol);
    }

    #[test]
    fn cone_grid_at_origin() {
        let rho = FloatHermitian::new(&catalog::cone());
        let p = [c(0.0), c(0.0)];
        let out = search_grid(&rho, &p, &cfg(), 2, 0.05, &[0]).unwrap();
        assert!(out.grid.is_some());
    }

    #[test]
    fn search_is_deterministic() {
        let rho = FloatHermitian::new(&catalog::mmz());
        let p = [c(1.0), c(1.0), c(0.0), c(0.0)];
        let a = search_grid(&rho, &p, &cfg(), 1, 0.1, &[1]).unwrap();
        let b = search_grid(&rho, &p, &cfg(), 1, 0.1, &[1]).unwrap();
        assert_eq!(a, b);
    }
}
