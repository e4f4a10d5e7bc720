//! Hausdorff distance between finite point clouds in ℂⁿ and two experiments
//! on limits: containment of limits of nested sequences, and classification
//! of the limit of a sequence of points carrying grids.

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::FloatHermitian;
use crate::error::{Error, Result};
use crate::grid::{classify_point, Classification, SearchConfig, Verdict};

/// A finite set of points; exact duplicates are removed on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    n: usize,
    points: Vec<Vec<Complex64>>,
}

impl PointCloud {
    pub fn new(n: usize, points: Vec<Vec<Complex64>>) -> Result<Self> {
        let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(points.len());
        for p in points {
            if p.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: p.len() });
            }
            if p.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
                return Err(Error::Domain("cloud coordinates must be finite".into()));
            }
            if !out.contains(&p) {
                out.push(p);
            }
        }
        Ok(Self { n, points: out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[Vec<Complex64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn union(&self, other: &PointCloud) -> Result<PointCloud> {
        check_pair(self, other, false)?;
        PointCloud::new(self.n, self.points.iter().chain(&other.points).cloned().collect())
    }

    /// Reads rows of `2n` floats, real and imaginary parts interleaved.
    pub fn read_csv(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(reader);
        let mut rows = Vec::new();
        let mut width = None;
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            let vals: Vec<f64> = rec
                .iter()
                .map(|s| s.parse::<f64>().map_err(|e| Error::Parse(format!("{s:?}: {e}"))))
                .collect::<Result<_>>()?;
            if vals.len() % 2 != 0 {
                return Err(Error::Parse(format!("row has {} fields; expected an even count", vals.len())));
            }
            if *width.get_or_insert(vals.len()) != vals.len() {
                return Err(Error::Parse("rows have different lengths".into()));
            }
            rows.push(vals.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect());
        }
        let n = width.ok_or(Error::EmptyCloud)? / 2;
        Self::new(n, rows)
    }

    pub fn write_csv(&self, writer: impl Write) -> Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
        for p in &self.points {
            let row: Vec<String> = p.iter().flat_map(|c| [format!("{:.17e}", c.re), format!("{:.17e}", c.im)]).collect();
            w.write_record(&row).map_err(|e| Error::Parse(e.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::read_csv(std::fs::File::open(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }
}

fn dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

fn check_pair(a: &PointCloud, b: &PointCloud, nonempty: bool) -> Result<()> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch { expected: a.n, got: b.n });
    }
    if nonempty && (a.is_empty() || b.is_empty()) {
        return Err(Error::EmptyCloud);
    }
    Ok(())
}

fn point_to_cloud(x: &[Complex64], b: &PointCloud) -> f64 {
    b.points.iter().map(|y| dist(x, y)).fold(f64::INFINITY, f64::min)
}

/// `sup_{x ∈ a} d(x, b)`.
pub fn directed_distance(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    check_pair(a, b, true)?;
    Ok(a.points.par_iter().map(|x| point_to_cloud(x, b)).reduce(|| 0.0, f64::max))
}

/// All-pairs Hausdorff distance.
pub fn hausdorff_distance(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    Ok(directed_distance(a, b)?.max(directed_distance(b, a)?))
}

fn directed_early_break(a: &PointCloud, b: &PointCloud) -> f64 {
    let mut cmax = 0.0f64;
    for x in &a.points {
        let mut cmin = f64::INFINITY;
        for y in &b.points {
            let d = dist(x, y);
            if d < cmin {
                cmin = d;
                if cmin <= cmax {
                    break;
                }
            }
        }
        if cmin > cmax {
            cmax = cmin;
        }
    }
    cmax
}

/// Sequential variant that stops scanning `b` once a point of `a` is known
/// not to raise the maximum. Returns the same value as [`hausdorff_distance`].
pub fn hausdorff_distance_early_break(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    check_pair(a, b, true)?;
    Ok(directed_early_break(a, b).max(directed_early_break(b, a)))
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ContainmentReport {
    /// Hypothesis failures, e.g. `"K_3 not inside L_3 (excess 1e-2)"`.
    pub violations: Vec<String>,
    /// `d(limit_a → limit_b)`; absent when a hypothesis failed.
    pub excess: Option<f64>,
    /// Whether `limit_a` lies within `tol` of `limit_b`; absent when a hypothesis failed.
    pub contained: Option<bool>,
}

/// Checks `K_j ⊆ L_j` (to `tol`) and `d_H(K_j, K) , d_H(L_j, L) ≤ 2^{−j}·rate`
/// for `j = 1, 2, …`, then whether `K` lies within `tol` of `L`.
pub fn limit_containment_check(
    seq_a: &[PointCloud],
    seq_b: &[PointCloud],
    limit_a: &PointCloud,
    limit_b: &PointCloud,
    rate: f64,
    tol: f64,
) -> Result<ContainmentReport> {
    if seq_a.len() != seq_b.len() {
        return Err(Error::DimensionMismatch { expected: seq_a.len(), got: seq_b.len() });
    }
    if !(rate > 0.0 && tol >= 0.0) {
        return Err(Error::Domain("rate must be positive and tol non-negative".into()));
    }
    let mut violations = Vec::new();
    for (i, (k, l)) in seq_a.iter().zip(seq_b).enumerate() {
        let j = i + 1;
        let excess = directed_distance(k, l)?;
        if excess > tol {
            violations.push(format!("K_{j} not inside L_{j} (excess {excess:e})"));
        }
        let bound = rate * 0.5f64.powi(j as i32);
        for (name, cloud, limit) in [("K", k, limit_a), ("L", l, limit_b)] {
            let d = hausdorff_distance(cloud, limit)?;
            if d > bound {
                violations.push(format!("d_H({name}_{j}, {name}) = {d:e} exceeds {bound:e}"));
            }
        }
    }
    if !violations.is_empty() {
        return Ok(ContainmentReport { violations, excess: None, contained: None });
    }
    let excess = directed_distance(limit_a, limit_b)?;
    Ok(ContainmentReport { violations, excess: Some(excess), contained: Some(excess <= tol) })
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosednessReport {
    pub distances: Vec<f64>,
    pub members: Vec<Classification>,
    /// Indices of sequence points that were not classified IN.
    pub members_not_in: Vec<usize>,
    pub limit: Classification,
    pub limit_in: bool,
}

/// Classifies each `p_j` and the limit `p0`. The sequence is rejected as
/// divergent unless its last point is within `conv_tol` of `p0` and its
/// distances to `p0` end below where they start.
pub fn closedness_experiment(
    rho: &FloatHermitian,
    cfg: &SearchConfig,
    sequence: &[Vec<Complex64>],
    p0: &[Complex64],
    conv_tol: f64,
) -> Result<ClosednessReport> {
    let n = rho.n();
    if p0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: p0.len() });
    }
    let distances: Vec<f64> = sequence
        .iter()
        .map(|p| if p.len() == n { Ok(dist(p, p0)) } else { Err(Error::DimensionMismatch { expected: n, got: p.len() }) })
        .collect::<Result<_>>()?;
    let (Some(&first), Some(&last)) = (distances.first(), distances.last()) else {
        return Err(Error::Divergent("empty sequence".into()));
    };
    if !(last <= conv_tol) || (distances.len() > 1 && last > first) {
        return Err(Error::Divergent(format!("last distance to the limit is {last:e}, first {first:e}")));
    }
    let members: Vec<Classification> = sequence.iter().map(|p| classify_point(rho, p, cfg)).collect::<Result<_>>()?;
    let members_not_in = members.iter().enumerate().filter(|(_, c)| c.verdict != Verdict::In).map(|(i, _)| i).collect();
    let limit = classify_point(rho, p0, cfg)?;
    let limit_in = limit.verdict == Verdict::In;
    Ok(ClosednessReport { distances, members, members_not_in, limit, limit_in })
}

/// Points of MMZ on `X` with `x₂ = 1`, `x₃ = 0`, `x₄ = t` and `x₁ = √(1 + t³)`.
pub fn mmz_point(t: f64) -> Vec<Complex64> {
    let x1 = (1.0 + t * t * t).sqrt();
    [x1, 1.0, 0.0, t].iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

/// Samples `p + ζ v` for `ζ` on a square lattice of `m × m` points in
/// `[−r, r]²`, where `v = (x₂, x₁, x₄^{3/2}, 0)` spans a line in MMZ's `X`
/// through the real point `p = (x₁, x₂, 0, x₄)` with `x₄ ≥ 0`.
pub fn mmz_line_cloud(p: &[Complex64], r: f64, m: usize) -> Result<PointCloud> {
    if p.len() != 4 || p[3].re < 0.0 {
        return Err(Error::Domain("expects a real MMZ point with x4 >= 0".into()));
    }
    let v = [p[1].re, p[0].re, p[3].re.powf(1.5), 0.0];
    let m = m.max(2);
    let step = 2.0 * r / (m - 1) as f64;
    let mut pts = Vec::with_capacity(m * m);
    for a in 0..m {
        for b in 0..m {
            let zeta = Complex64::new(-r + a as f64 * step, -r + b as f64 * step);
            pts.push(p.iter().zip(&v).map(|(x, &vk)| x + zeta * vk).collect());
        }
    }
    PointCloud::new(4, pts)
}
