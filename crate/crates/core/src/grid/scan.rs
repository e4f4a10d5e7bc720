//! Lattice scans of a box, projected onto `X` and classified point by point.
//!
//! A box lists one spec per real coordinate (`Re z₁, Im z₁, Re z₂, …`):
//! `lo:hi` is a lattice axis, `v` a fixed value and `~g` a coordinate solved
//! from `ρ = 0` by Newton's method starting at `g`. Without a solved
//! coordinate each lattice point is moved onto `X` by minimum-norm Newton
//! steps and dropped if that moves it more than one lattice step.

use std::io::{Read, Write};
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::classify::{classify_point, Classification, Verdict};
use super::search::SearchConfig;
use crate::algebra::FloatHermitian;
use crate::error::{Error, Result};

const NEWTON_STEPS: usize = 60;

#[derive(Clone, Debug, PartialEq)]
pub enum AxisSpec {
    Range(f64, f64),
    Fixed(f64),
    Solve(f64),
}

impl FromStr for AxisSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |t: &str| -> Result<f64> {
            let r = crate::algebra::scalar::parse_rational(t.trim())?;
            Ok(crate::algebra::scalar::rational_to_f64(&r))
        };
        if let Some(g) = s.strip_prefix('~') {
            return Ok(AxisSpec::Solve(num(g)?));
        }
        match s.split_once(':') {
            Some((lo, hi)) => {
                let (lo, hi) = (num(lo)?, num(hi)?);
                if !(lo <= hi) {
                    return Err(Error::Parse(format!("empty range {s:?}")));
                }
                Ok(AxisSpec::Range(lo, hi))
            }
            None => Ok(AxisSpec::Fixed(num(s)?)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanBox {
    pub axes: Vec<AxisSpec>,
}

impl FromStr for ScanBox {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let axes = s.split(',').map(str::parse).collect::<Result<Vec<AxisSpec>>>()?;
        if axes.iter().filter(|a| matches!(a, AxisSpec::Solve(_))).count() > 1 {
            return Err(Error::Parse("at most one coordinate can be solved for".into()));
        }
        Ok(Self { axes })
    }
}

impl ScanBox {
    /// Lattice points as `(lattice index, interleaved real coordinates)`,
    /// axis 0 varying slowest.
    fn lattice(&self, step: f64) -> Vec<(Vec<usize>, Vec<f64>)> {
        let values: Vec<Vec<f64>> = self
            .axes
            .iter()
            .filter_map(|a| match *a {
                AxisSpec::Range(lo, hi) => {
                    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
                    Some((0..count).map(|i| lo + i as f64 * step).collect())
                }
                _ => None,
            })
            .collect();
        let mut out = Vec::new();
        let mut idx = vec![0usize; values.len()];
        loop {
            let mut it = idx.iter().zip(&values).map(|(&i, v)| v[i]);
            let coords = self
                .axes
                .iter()
                .map(|a| match *a {
                    AxisSpec::Range(..) => it.next().unwrap(),
                    AxisSpec::Fixed(v) | AxisSpec::Solve(v) => v,
                })
                .collect();
            out.push((idx.clone(), coords));
            let mut k = values.len();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < values[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }
}

fn to_complex(x: &[f64]) -> Vec<Complex64> {
    x.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect()
}

/// Newton along one real coordinate.
fn solve_axis(rho: &FloatHermitian, mut x: Vec<f64>, axis: usize, target: f64) -> Option<Vec<f64>> {
    for _ in 0..NEWTON_STEPS {
        let (v, grad) = rho.real_gradient(&to_complex(&x));
        if v.abs() <= target {
            return Some(x);
        }
        if grad[axis] == 0.0 || !v.is_finite() {
            return None;
        }
        x[axis] -= v / grad[axis];
    }
    None
}

/// Minimum-norm Newton projection onto `{ρ = 0}`.
fn project(rho: &FloatHermitian, start: &[f64], target: f64, reach: f64) -> Option<Vec<f64>> {
    let mut x = start.to_vec();
    for _ in 0..NEWTON_STEPS {
        let (v, grad) = rho.real_gradient(&to_complex(&x));
        if v.abs() <= target {
            let moved = x.iter().zip(start).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            return (moved <= reach).then_some(x);
        }
        let g2: f64 = grad.iter().map(|g| g * g).sum();
        if g2 == 0.0 || !v.is_finite() {
            return None;
        }
        x.iter_mut().zip(&grad).for_each(|(xi, gi)| *xi -= v * gi / g2);
    }
    None
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub index: Vec<usize>,
    pub classification: Classification,
}

/// One CSV/JSON line: coordinates, verdict, `κ`, `d`, 1-based `λ` and the
/// best residual of each stage for the deciding `κ` (empty for stages
/// skipped after a failure).
#[derive(Clone, Debug, PartialEq)]
pub struct ScanRecord {
    pub coords: Vec<f64>,
    pub verdict: Verdict,
    pub kappa: usize,
    pub d: usize,
    pub lambda: Vec<usize>,
    pub residuals: Vec<Option<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanTable {
    pub n: usize,
    pub stages: usize,
    pub records: Vec<ScanRecord>,
}

/// 17 significant digits; `inf` is spelled so that it reads back.
pub fn format_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::Parse(format!("bad number {s:?}")))
}

impl ScanRecord {
    fn from_classification(c: &Classification, stages: usize) -> Self {
        let mut residuals = vec![None; stages];
        for st in c.stages_for(c.kappa) {
            residuals[st.stage] = Some(st.best_residual);
        }
        Self {
            coords: c.point.clone(),
            verdict: c.verdict,
            kappa: c.kappa,
            d: c.d,
            lambda: c.lambda().unwrap_or_default(),
            residuals,
        }
    }

    fn fields(&self) -> Vec<String> {
        let mut f: Vec<String> = self.coords.iter().map(|&x| format_f64(x)).collect();
        f.push(self.verdict.to_string());
        f.push(self.kappa.to_string());
        f.push(self.d.to_string());
        f.push(self.lambda.iter().map(usize::to_string).collect::<Vec<_>>().join(";"));
        f.extend(self.residuals.iter().map(|x| x.map(format_f64).unwrap_or_default()));
        f
    }

    fn from_fields(f: &[String], n: usize, stages: usize) -> Result<Self> {
        if f.len() != 2 * n + 4 + stages {
            return Err(Error::Parse(format!("expected {} fields, got {}", 2 * n + 4 + stages, f.len())));
        }
        let int = |s: &str| s.parse::<usize>().map_err(|_| Error::Parse(format!("bad integer {s:?}")));
        Ok(Self {
            coords: f[..2 * n].iter().map(|s| parse_f64(s)).collect::<Result<_>>()?,
            verdict: f[2 * n].parse()?,
            kappa: int(&f[2 * n + 1])?,
            d: int(&f[2 * n + 2])?,
            lambda: if f[2 * n + 3].is_empty() {
                vec![]
            } else {
                f[2 * n + 3].split(';').map(int).collect::<Result<_>>()?
            },
            residuals: f[2 * n + 4..]
                .iter()
                .map(|s| if s.is_empty() { Ok(None) } else { parse_f64(s).map(Some) })
                .collect::<Result<_>>()?,
        })
    }
}

impl ScanTable {
    pub fn from_rows(n: usize, stages: usize, rows: &[ScanRow]) -> Self {
        Self { n, stages, records: rows.iter().map(|r| ScanRecord::from_classification(&r.classification, stages)).collect() }
    }

    pub fn header(n: usize, stages: usize) -> Vec<String> {
        let mut h = Vec::new();
        for k in 1..=n {
            h.push(format!("x{k}_re"));
            h.push(format!("x{k}_im"));
        }
        h.extend(["verdict", "kappa", "d", "lambda"].map(String::from));
        h.extend((0..stages).map(|s| format!("residual_stage{s}")));
        h
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(Self::header(self.n, self.stages)).map_err(csv_err)?;
        for r in &self.records {
            wr.write_record(r.fields()).map_err(csv_err)?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let header: Vec<String> = rd.headers().map_err(csv_err)?.iter().map(String::from).collect();
        let n = header.iter().filter(|h| h.ends_with("_re")).count();
        let stages = header.iter().filter(|h| h.starts_with("residual_stage")).count();
        if header != Self::header(n, stages) {
            return Err(Error::Parse("unexpected CSV header".into()));
        }
        let records = rd
            .records()
            .map(|rec| {
                let rec = rec.map_err(csv_err)?;
                let fields: Vec<String> = rec.iter().map(String::from).collect();
                ScanRecord::from_fields(&fields, n, stages)
            })
            .collect::<Result<_>>()?;
        Ok(Self { n, stages, records })
    }

    /// JSON array of objects keyed by the CSV header, values as the CSV strings.
    pub fn to_json(&self) -> String {
        let header = Self::header(self.n, self.stages);
        let rows: Vec<serde_json::Map<String, serde_json::Value>> = self
            .records
            .iter()
            .map(|r| header.iter().cloned().zip(r.fields().into_iter().map(serde_json::Value::String)).collect())
            .collect();
        serde_json::to_string_pretty(&rows).expect("strings serialize")
    }

    pub fn from_json(s: &str, n: usize, stages: usize) -> Result<Self> {
        let rows: Vec<serde_json::Map<String, serde_json::Value>> = serde_json::from_str(s)?;
        let header = Self::header(n, stages);
        let records = rows
            .iter()
            .map(|row| {
                let fields = header
                    .iter()
                    .map(|h| match row.get(h) {
                        Some(serde_json::Value::String(s)) => Ok(s.clone()),
                        _ => Err(Error::Parse(format!("missing field {h}"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                ScanRecord::from_fields(&fields, n, stages)
            })
            .collect::<Result<_>>()?;
        Ok(Self { n, stages, records })
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Enumerates the lattice of `bx` at spacing `resolution`, puts each point on
/// `X` and classifies it. Rows come back in lattice order.
pub fn scan_region(rho: &FloatHermitian, bx: &ScanBox, resolution: f64, cfg: &SearchConfig) -> Result<Vec<ScanRow>> {
    let n = rho.n();
    if bx.axes.len() != 2 * n {
        return Err(Error::DimensionMismatch { expected: 2 * n, got: bx.axes.len() });
    }
    if !(resolution > 0.0) {
        return Err(Error::InvalidConfig(format!("resolution must be positive, got {resolution}")));
    }
    cfg.validate(n)?;
    let target = 0.01 * cfg.tol;
    let solve = bx.axes.iter().position(|a| matches!(a, AxisSpec::Solve(_)));
    let on_x: Vec<(Vec<usize>, Vec<f64>)> = bx
        .lattice(resolution)
        .into_iter()
        .filter_map(|(idx, x)| {
            let projected = match solve {
                Some(axis) => solve_axis(rho, x, axis, target),
                None => project(rho, &x, target, resolution),
            };
            projected.map(|x| (idx, x))
        })
        .collect();
    on_x.into_par_iter()
        .map(|(index, x)| Ok(ScanRow { index, classification: classify_point(rho, &to_complex(&x), cfg)? }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn quick() -> SearchConfig {
        SearchConfig { kappas: vec![1], stages: 2, restarts: 8, ..Default::default() }
    }

    #[test]
    fn box_parsing() {
        let b: ScanBox = "~1,0,0.8:1.2,0,0,0,-3/10:3/10,0".parse().unwrap();
        assert_eq!(b.axes[0], AxisSpec::Solve(1.0));
        assert_eq!(b.axes[6], AxisSpec::Range(-0.3, 0.3));
        assert!("~1,~2".parse::<ScanBox>().is_err());
        assert!("1:0".parse::<ScanBox>().is_err());
        assert!("a".parse::<ScanBox>().is_err());
    }

    #[test]
    fn lattice_counts_include_endpoints() {
        let b: ScanBox = "0.8:1.2,0,-0.3:0.3".parse().unwrap();
        let l = b.lattice(0.05);
        assert_eq!(l.len(), 9 * 13);
        assert_eq!(l[1].0, vec![0, 1]);
        assert!((l.last().unwrap().1[2] - 0.3).abs() < 1e-12);
    }

    #[test]
    fn box_disjoint_from_x_gives_empty_table() {
        let rho = FloatHermitian::new(&catalog::point_set());
        let rows = scan_region(&rho, &"1:2,0,1:2,0".parse().unwrap(), 0.5, &quick()).unwrap();
        assert!(rows.is_empty());
        let table = ScanTable::from_rows(2, 2, &rows);
        let mut buf = Vec::new();
        table.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1);
    }

    #[test]
    fn cone_points_are_in_and_tables_round_trip() {
        let rho = FloatHermitian::new(&catalog::cone());
        let rows = scan_region(&rho, &"~0.2,0,0.1:0.3,0".parse().unwrap(), 0.1, &quick()).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.classification.verdict == Verdict::In));
        let table = ScanTable::from_rows(2, 2, &rows);
        let mut buf = Vec::new();
        table.write_csv(&mut buf).unwrap();
        assert_eq!(ScanTable::read_csv(buf.as_slice()).unwrap(), table);
        assert_eq!(ScanTable::from_json(&table.to_json(), 2, 2).unwrap(), table);
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(parse_f64(&format_f64(f64::INFINITY)).unwrap(), f64::INFINITY);
        assert_eq!(parse_f64(&format_f64(1.0 / 3.0)).unwrap(), 1.0 / 3.0);
    }
}
