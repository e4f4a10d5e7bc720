//! κ-grids: `(κ+1)^d` distinct points `p_ν`, `ν ∈ {0..κ}^d`, with
//!
//! * (a) `ρ(p_ν, p̄_ν′) = 0` for every ordered pair, and
//! * (b) `ν_j = ν′_j` exactly when `p_ν` and `p_ν′` share the `λ_j`-th coordinate.
//!
//! A point `p ∈ X` has a `d`-dimensional complex analytic germ of `X` through
//! it exactly when such grids exist (for a suitable `κ`) inside every ball
//! around `p`. This module holds the grid type and its verifier; the search,
//! classifier and region scanner live in the submodules.
//!
//! Indices are 0-based in code (`λ_j ∈ 0..n`, `ν_j ∈ 0..=κ`); CSV/JSON output
//! and display use 1-based `λ`.

pub mod certify;
pub mod classify;
pub mod scan;
pub mod search;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::io::ComplexJson;
use crate::algebra::{ComplexRational, FloatHermitian, HermitianPolynomial};
use crate::error::{Error, Result};

pub use certify::{certify_point, ExactPlane};
pub use classify::{classify_point, Classification, KappaVerdict, StageRecord, StageStatus, Verdict};
pub use scan::{scan_region, AxisSpec, ScanBox, ScanRow, ScanTable};
pub use search::{search_grid, SearchConfig, SearchOutcome};

/// All strictly increasing `λ = (λ_1 < … < λ_d)` with entries in `0..n`.
pub fn index_tuples(d: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, d: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for k in start..n {
            cur.push(k);
            rec(k + 1, d, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if d <= n {
        rec(0, d, n, &mut Vec::with_capacity(d), &mut out);
    }
    out
}

/// Decodes a linear grid index into `ν` (mixed radix, base `κ+1`, axis 0 fastest).
pub fn multi_index(linear: usize, d: usize, kappa: usize) -> Vec<usize> {
    let base = kappa + 1;
    let mut rest = linear;
    (0..d)
        .map(|_| {
            let v = rest % base;
            rest /= base;
            v
        })
        .collect()
}

pub fn linear_index(nu: &[usize], kappa: usize) -> usize {
    nu.iter().rev().fold(0, |acc, &v| acc * (kappa + 1) + v)
}

/// A candidate grid with coordinates of type `T` (exact or floating point).
/// `points[i]` is `p_ν` for `ν = multi_index(i, d, κ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid<T> {
    pub d: usize,
    pub kappa: usize,
    pub lambda: Vec<usize>,
    pub points: Vec<Vec<T>>,
}

pub type ExactGrid = Grid<ComplexRational>;
pub type FloatGrid = Grid<Complex64>;

impl<T: Clone + PartialEq> Grid<T> {
    pub fn new(d: usize, kappa: usize, lambda: Vec<usize>, points: Vec<Vec<T>>) -> Result<Self> {
        let g = Self { d, kappa, lambda, points };
        g.check_structure(None)?;
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, nu: &[usize]) -> &[T] {
        &self.points[linear_index(nu, self.kappa)]
    }

    /// Structural well-formedness: `1 ≤ d`, `κ ≥ 1`, strictly increasing
    /// `λ` inside `0..n`, exactly `(κ+1)^d` points of dimension `n`, all distinct.
    pub fn check_structure(&self, n: Option<usize>) -> Result<()> {
        let malformed = |m: String| Err(Error::MalformedGrid(m));
        if self.d == 0 {
            return malformed("base dimension d must be at least 1".into());
        }
        if self.kappa == 0 {
            return malformed("kappa must be at least 1".into());
        }
        if self.lambda.len() != self.d {
            return malformed(format!("lambda has {} entries, expected d = {}", self.lambda.len(), self.d));
        }
        if self.lambda.windows(2).any(|w| w[0] >= w[1]) {
            return malformed("lambda must be strictly increasing".into());
        }
        let expected = (self.kappa + 1).pow(self.d as u32);
        if self.points.len() != expected {
            return malformed(format!("expected (kappa+1)^d = {expected} points, got {}", self.points.len()));
        }
        let n = n.unwrap_or_else(|| self.points[0].len());
        if self.d >= n + 1 || self.lambda.iter().any(|&l| l >= n) {
            return malformed(format!("lambda {:?} out of range for n = {n}", self.lambda));
        }
        if let Some(p) = self.points.iter().find(|p| p.len() != n) {
            return malformed(format!("point of dimension {} in a grid of dimension {n}", p.len()));
        }
        for i in 0..self.points.len() {
            for j in 0..i {
                if self.points[i] == self.points[j] {
                    return malformed(format!(
                        "points {:?} and {:?} coincide",
                        multi_index(j, self.d, self.kappa),
                        multi_index(i, self.d, self.kappa)
                    ));
                }
            }
        }
        Ok(())
    }

    /// Violations of condition (b), as `(ν, ν′, j)` with `ν < ν′` linearly.
    pub fn coordinate_violations(&self) -> Vec<(Vec<usize>, Vec<usize>, usize)> {
        let mut out = Vec::new();
        for i in 0..self.points.len() {
            let nu = multi_index(i, self.d, self.kappa);
            for j in (i + 1)..self.points.len() {
                let nu2 = multi_index(j, self.d, self.kappa);
                for (axis, &l) in self.lambda.iter().enumerate() {
                    let same_index = nu[axis] == nu2[axis];
                    let same_coord = self.points[i][l] == self.points[j][l];
                    if same_index != same_coord {
                        out.push((nu.clone(), nu2.clone(), axis));
                    }
                }
            }
        }
        out
    }

    /// The sub-grid on the index values `keep[j]` along each axis `j`
    /// (each of length `κ′+1`, strictly increasing).
    pub fn restrict(&self, keep: &[Vec<usize>]) -> Result<Self> {
        if keep.len() != self.d {
            return Err(Error::MalformedGrid(format!("restriction needs {} axes", self.d)));
        }
        let k1 = keep[0].len();
        if k1 < 2 || keep.iter().any(|k| k.len() != k1 || k.windows(2).any(|w| w[0] >= w[1]) || k.iter().any(|&v| v > self.kappa)) {
            return Err(Error::MalformedGrid("restriction index sets must be increasing, equal length ≥ 2".into()));
        }
        let kappa = k1 - 1;
        let count = k1.pow(self.d as u32);
        let points = (0..count)
            .map(|i| {
                let sub = multi_index(i, self.d, kappa);
                let nu: Vec<usize> = sub.iter().enumerate().map(|(j, &s)| keep[j][s]).collect();
                self.point(&nu).to_vec()
            })
            .collect();
        Ok(Self { d: self.d, kappa, lambda: self.lambda.clone(), points })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    /// `max |ρ(p_ν, p̄_ν′)|` over all ordered pairs.
    pub max_residual: f64,
    /// Condition (a) violations `(ν, ν′, |ρ(p_ν, p̄_ν′)|)`.
    pub pair_violations: Vec<(Vec<usize>, Vec<usize>, f64)>,
    /// Condition (b) violations `(ν, ν′, axis)`.
    pub coordinate_violations: Vec<(Vec<usize>, Vec<usize>, usize)>,
}

/// Exact verification. With `tol = 0` condition (a) is checked by exact zero
/// tests; otherwise `|ρ| ≤ tol`.
pub fn verify_grid(rho: &HermitianPolynomial, g: &ExactGrid, tol: f64) -> Result<VerifyReport> {
    g.check_structure(Some(rho.n()))?;
    let mut report = VerifyReport { coordinate_violations: g.coordinate_violations(), ..Default::default() };
    for i in 0..g.len() {
        for j in 0..g.len() {
            let v = rho.eval(&g.points[i], &g.points[j])?;
            let mag = v.abs_f64();
            report.max_residual = report.max_residual.max(mag);
            let bad = if tol == 0.0 { !v.is_zero() } else { mag > tol };
            if bad {
                report.pair_violations.push((multi_index(i, g.d, g.kappa), multi_index(j, g.d, g.kappa), mag));
            }
        }
    }
    report.passed = report.pair_violations.is_empty() && report.coordinate_violations.is_empty();
    Ok(report)
}

/// Floating-point verification of a grid returned by the numerical search.
pub fn verify_grid_float(rho: &FloatHermitian, g: &FloatGrid, tol: f64) -> Result<VerifyReport> {
    g.check_structure(Some(rho.n()))?;
    let mut report = VerifyReport { coordinate_violations: g.coordinate_violations(), ..Default::default() };
    let holo: Vec<_> = g.points.iter().map(|p| rho.holo_powers(p)).collect();
    let anti: Vec<_> = g.points.iter().map(|p| rho.anti_powers(p)).collect();
    for i in 0..g.len() {
        for j in 0..g.len() {
            let mag = rho.eval_tables(&holo[i], &anti[j]).norm();
            report.max_residual = report.max_residual.max(mag);
            if mag > tol {
                report.pair_violations.push((multi_index(i, g.d, g.kappa), multi_index(j, g.d, g.kappa), mag));
            }
        }
    }
    report.passed = report.pair_violations.is_empty() && report.coordinate_violations.is_empty();
    Ok(report)
}

/// File form of an exact grid: `λ` is 1-based and `points` are listed in
/// linear-index order (`ν_1` varying fastest).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridJson {
    pub d: usize,
    pub kappa: usize,
    pub lambda: Vec<usize>,
    pub points: Vec<Vec<ComplexJson>>,
}

impl GridJson {
    pub fn into_grid(self) -> Result<ExactGrid> {
        if self.lambda.contains(&0) {
            return Err(Error::MalformedGrid("lambda is 1-based".into()));
        }
        let points = self
            .points
            .iter()
            .map(|p| p.iter().map(ComplexJson::parse).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Grid::new(self.d, self.kappa, self.lambda.iter().map(|l| l - 1).collect(), points)
    }

    pub fn from_grid(g: &ExactGrid) -> Self {
        Self {
            d: g.d,
            kappa: g.kappa,
            lambda: g.lambda.iter().map(|l| l + 1).collect(),
            points: g.points.iter().map(|p| p.iter().map(ComplexJson::from_value).collect()).collect(),
        }
    }
}

/// File form of an affine plane `base + span(directions)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaneJson {
    pub base: Vec<ComplexJson>,
    pub directions: Vec<Vec<ComplexJson>>,
}

impl PlaneJson {
    pub fn into_plane(self) -> Result<ExactPlane> {
        let parse = |v: &[ComplexJson]| v.iter().map(ComplexJson::parse).collect::<Result<Vec<_>>>();
        ExactPlane::new(parse(&self.base)?, self.directions.iter().map(|d| parse(d)).collect::<Result<_>>()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::real_point;
    use crate::catalog;

    fn mmz_line_grid() -> ExactGrid {
        let pts = (0..3)
            .map(|j| {
                let t = ComplexRational::ratio(10 + j, 10);
                vec![t.clone(), t, ComplexRational::zero(), ComplexRational::zero()]
            })
            .collect();
        Grid::new(1, 2, vec![0], pts).unwrap()
    }

    #[test]
    fn index_tuple_enumeration() {
        assert_eq!(index_tuples(1, 3), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(index_tuples(2, 3).len(), 3);
        assert_eq!(index_tuples(2, 4).len(), 6);
        assert!(index_tuples(3, 2).is_empty());
    }

    #[test]
    fn linear_and_multi_indices_invert() {
        for i in 0..27 {
            assert_eq!(linear_index(&multi_index(i, 3, 2), 2), i);
        }
    }

    #[test]
    fn mmz_line_grid_passes_exactly() {
        let r = verify_grid(&catalog::mmz(), &mmz_line_grid(), 0.0).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.max_residual, 0.0);
    }

    #[test]
    fn equal_base_coordinates_violate_condition_b() {
        let mut g = mmz_line_grid();
        // keep points distinct but give ν = 0 and ν = 1 the same first coordinate
        g.points[1][0] = g.points[0][0].clone();
        let r = verify_grid(&catalog::mmz(), &g, 0.0).unwrap();
        assert!(!r.passed);
        assert!(r.coordinate_violations.contains(&(vec![0], vec![1], 0)));
    }

    #[test]
    fn off_segre_pair_fails_condition_a() {
        let g = Grid::new(1, 1, vec![0], vec![
            real_point(&[(1, 1), (1, 1), (0, 1), (0, 1)]),
            real_point(&[(0, 1), (1, 1), (0, 1), (-1, 1)]),
        ])
        .unwrap();
        let r = verify_grid(&catalog::mmz(), &g, 0.0).unwrap();
        assert!(!r.passed);
        assert!(r.coordinate_violations.is_empty());
        assert!(r.pair_violations.iter().any(|(a, b, _)| a != b));
    }

    #[test]
    fn structural_errors_are_distinct_from_failures() {
        let p = real_point(&[(1, 1), (1, 1), (0, 1), (0, 1)]);
        let dup = Grid::new(1, 1, vec![0], vec![p.clone(), p.clone()]);
        assert!(matches!(dup, Err(Error::MalformedGrid(_))));
        let short = Grid::new(1, 2, vec![0], vec![p.clone(), p]);
        assert!(matches!(short, Err(Error::MalformedGrid(_))));
        let g = mmz_line_grid();
        let bad_lambda = Grid { lambda: vec![7], ..g };
        assert!(matches!(verify_grid(&catalog::mmz(), &bad_lambda, 0.0), Err(Error::MalformedGrid(_))));
    }

    #[test]
    fn restrictions_of_a_passing_grid_pass() {
        let g = mmz_line_grid();
        for keep in [vec![0, 1], vec![0, 2], vec![1, 2]] {
            let r = g.restrict(&[keep]).unwrap();
            assert_eq!(r.kappa, 1);
            assert!(verify_grid(&catalog::mmz(), &r, 0.0).unwrap().passed);
        }
        assert!(g.restrict(&[vec![1, 0]]).is_err());
    }

    #[test]
    fn grid_json_round_trip() {
        let g = mmz_line_grid();
        let text = serde_json::to_string(&GridJson::from_grid(&g)).unwrap();
        let back = serde_json::from_str::<GridJson>(&text).unwrap().into_grid().unwrap();
        assert_eq!(back, g);
        let mut j = GridJson::from_grid(&g);
        j.lambda = vec![0];
        assert!(j.into_grid().is_err());
    }
}
