use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use segre_core::algebra::io::{polynomial_from_json, ComplexJson, CurveJson};
use segre_core::algebra::scalar::{format_rational, parse_point_interleaved, parse_rational, point_to_c64};
use segre_core::algebra::{ComplexRational, ExactPoint, FloatHermitian, HermitianPolynomial, HoloPolynomial, Rational};
use segre_core::dangelo::{
    check_inequality_chain, holo_decompose, local_ideal, type_lower_bound, Extended, HoloDecomposition, MonomialIdeal,
    TypeSearch,
};
use segre_core::grid::{
    certify_point, classify_point, scan_region, verify_grid, Classification, GridJson, PlaneJson, ScanBox, ScanTable,
    Verdict,
};
use segre_core::hausdorff::{directed_distance, hausdorff_distance, PointCloud};

use crate::config::{FileConfig, SearchArgs};
use crate::manifest::RunManifest;

pub fn print_json(v: &Value) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn load_rho(path: &Path, manifest: &mut RunManifest) -> Result<HermitianPolynomial> {
    let text = manifest.read_input(path)?;
    polynomial_from_json(&text).with_context(|| format!("loading {}", path.display()))
}

fn point_arg(text: &str, n: usize, manifest: &mut RunManifest) -> Result<ExactPoint> {
    let p = parse_point_interleaved(text).context("--point")?;
    if p.len() != n {
        bail!(segre_core::Error::DimensionMismatch { expected: n, got: p.len() });
    }
    manifest.exact("point", text);
    Ok(p)
}

fn rational_arg(name: &str, text: &str, manifest: &mut RunManifest) -> Result<Rational> {
    let q = parse_rational(text).with_context(|| format!("--{name}"))?;
    manifest.exact(name, text);
    Ok(q)
}

fn rational_list(name: &str, text: &str, manifest: &mut RunManifest) -> Result<Vec<Rational>> {
    let v = text.split(',').map(|s| parse_rational(s.trim())).collect::<Result<Vec<_>, _>>().with_context(|| format!("--{name}"))?;
    manifest.exact(name, text);
    Ok(v)
}

fn extended_u64(v: &Extended<u64>) -> Value {
    match v {
        Extended::Finite(k) => json!(k),
        Extended::Infinite => json!("INFINITE"),
    }
}

/// Prints the classification and returns its verdict.
pub fn classify(
    rho: &Path,
    point: &str,
    plane: Option<&Path>,
    search: &SearchArgs,
    config: Option<&Path>,
) -> Result<Verdict> {
    let mut manifest = RunManifest::new("classify");
    let file = FileConfig::load(config, &mut manifest)?;
    let rho = load_rho(rho, &mut manifest)?;
    let p = point_arg(point, rho.n(), &mut manifest)?;
    let cfg = search.resolve(&file, &mut manifest)?;
    manifest = manifest.with_config(&cfg);
    let mut result: Option<Classification> = None;
    if let Some(path) = plane {
        let text = manifest.read_input(path)?;
        let plane = serde_json::from_str::<PlaneJson>(&text)?.into_plane()?;
        if plane.base != p {
            bail!(segre_core::Error::Domain("the plane must pass through --point (base = point)".into()));
        }
        result = certify_point(&rho, &plane, &cfg)?;
    }
    let c = match result {
        Some(c) => c,
        None => classify_point(&FloatHermitian::new(&rho), &point_to_c64(&p), &cfg)?,
    };
    print_json(&json!({ "manifest": manifest, "classification": c }))?;
    Ok(c.verdict)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

pub fn scan(
    rho: &Path,
    bx: &str,
    resolution: &str,
    search: &SearchArgs,
    out: Option<&Path>,
    format: TableFormat,
    config: Option<&Path>,
) -> Result<()> {
    let mut manifest = RunManifest::new("scan");
    let file = FileConfig::load(config, &mut manifest)?;
    let rho = load_rho(rho, &mut manifest)?;
    manifest.exact("box", bx);
    let bx: ScanBox = bx.parse().context("--box")?;
    let resolution = crate::config::real_arg("resolution", resolution, &mut manifest)?;
    let cfg = search.resolve(&file, &mut manifest)?;
    manifest = manifest.with_config(&cfg);
    let rows = scan_region(&FloatHermitian::new(&rho), &bx, resolution, &cfg)?;
    let table = ScanTable::from_rows(rho.n(), cfg.stages, &rows);
    let mut body = Vec::new();
    match format {
        TableFormat::Csv => table.write_csv(&mut body)?,
        TableFormat::Json => {
            body = table.to_json().into_bytes();
            body.push(b'\n');
        }
    }
    let manifest_text = serde_json::to_string_pretty(&manifest)?;
    match out {
        Some(path) => {
            std::fs::write(path, &body).with_context(|| format!("writing {}", path.display()))?;
            std::fs::write(sidecar(path), manifest_text + "\n")?;
        }
        None => {
            std::io::stdout().lock().write_all(&body)?;
            eprintln!("{}", serde_json::to_string(&manifest)?);
        }
    }
    Ok(())
}

/// `out.csv` → `out.csv.manifest.json`.
pub fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct HoloTermJson {
    pub alpha: Vec<u32>,
    pub re: String,
    pub im: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BetaJson {
    pub beta: Vec<u32>,
    pub f: Vec<HoloTermJson>,
    pub g: Vec<HoloTermJson>,
}

/// Output of `decompose`; coefficients are in powers of `z − center`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DecompositionJson {
    pub center: Vec<ComplexJson>,
    pub t: String,
    pub delta: Vec<String>,
    pub h: Vec<HoloTermJson>,
    pub components: Vec<BetaJson>,
    pub identity_holds: bool,
}

fn holo_terms(p: &HoloPolynomial) -> Vec<HoloTermJson> {
    p.terms()
        .iter()
        .map(|(a, c)| HoloTermJson { alpha: a.entries().to_vec(), re: format_rational(&c.re), im: format_rational(&c.im) })
        .collect()
}

impl DecompositionJson {
    pub fn from_decomposition(dec: &HoloDecomposition, identity_holds: bool) -> Self {
        Self {
            center: dec.h.center().iter().map(ComplexJson::from_value).collect(),
            t: format_rational(&dec.t),
            delta: dec.delta.iter().map(format_rational).collect(),
            h: holo_terms(&dec.h),
            components: dec
                .betas()
                .into_iter()
                .map(|b| BetaJson { beta: b.entries().to_vec(), f: holo_terms(&dec.f[&b]), g: holo_terms(&dec.g[&b]) })
                .collect(),
            identity_holds,
        }
    }
}

fn decompose_args(
    rho: &HermitianPolynomial,
    t: &str,
    delta: Option<&str>,
    manifest: &mut RunManifest,
) -> Result<HoloDecomposition> {
    let t = rational_arg("t", t, manifest)?;
    let delta = match delta {
        Some(s) => rational_list("delta", s, manifest)?,
        None => vec![Rational::from_integer(1.into()); rho.n()],
    };
    Ok(holo_decompose(rho, &t, &delta)?)
}

pub fn decompose(rho: &Path, point: Option<&str>, t: &str, delta: Option<&str>) -> Result<()> {
    let mut manifest = RunManifest::new("decompose");
    let mut rho = load_rho(rho, &mut manifest)?;
    if let Some(p) = point {
        let p = point_arg(p, rho.n(), &mut manifest)?;
        rho = rho.recenter(&p)?;
    }
    let dec = decompose_args(&rho, t, delta, &mut manifest)?;
    let identity_holds = dec.reassemble() == rho.scale(&Rational::from_integer(4.into()));
    print_json(&json!({ "manifest": manifest, "decomposition": DecompositionJson::from_decomposition(&dec, identity_holds) }))
}

pub fn type_bound(rho: &Path, point: &str, max_curve_degree: u32, budget: usize, curves: &[PathBuf]) -> Result<()> {
    let mut manifest = RunManifest::new("type");
    let rho = load_rho(rho, &mut manifest)?;
    let p = point_arg(point, rho.n(), &mut manifest)?;
    let mut search = TypeSearch { max_curve_degree, budget, curves: Vec::new() };
    for path in curves {
        let text = manifest.read_input(path)?;
        let curve = serde_json::from_str::<CurveJson>(&text)?.into_curve(p.clone())?;
        search.curves.push(curve);
    }
    let b = type_lower_bound(&rho, &p, &search)?;
    print_json(&json!({
        "manifest": manifest,
        "lower_bound": b.value.to_string(),
        "witness": b.witness.as_ref().map(CurveJson::from_curve),
        "curves_tried": b.curves_tried,
    }))
}

/// Generators written as `2,0;0,3`.
fn parse_generators(text: &str) -> Result<MonomialIdeal> {
    let gens: Vec<Vec<u32>> = text
        .split(';')
        .map(|g| g.split(',').map(|e| e.trim().parse::<u32>()).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()
        .map_err(|e| segre_core::Error::Parse(format!("--generators: {e}")))?;
    let n = gens.first().map_or(0, Vec::len);
    Ok(MonomialIdeal::new(n, gens.into_iter().map(segre_core::algebra::MultiIndex::new))?)
}

pub struct IdealSource<'a> {
    pub ideal: Option<&'a Path>,
    pub generators: Option<&'a str>,
    pub rho: Option<&'a Path>,
    pub point: Option<&'a str>,
    pub t: &'a str,
    pub delta: Option<&'a str>,
}

pub fn invariants(src: IdealSource<'_>) -> Result<()> {
    let mut manifest = RunManifest::new("invariants");
    let ideal = match (src.ideal, src.generators, src.rho) {
        (Some(path), None, None) => MonomialIdeal::from_json(&manifest.read_input(path)?)?,
        (None, Some(g), None) => parse_generators(g)?,
        (None, None, Some(path)) => {
            let mut rho = load_rho(path, &mut manifest)?;
            if let Some(p) = src.point {
                let p = point_arg(p, rho.n(), &mut manifest)?;
                rho = rho.recenter(&p)?;
            }
            let dec = decompose_args(&rho, src.t, src.delta, &mut manifest)?;
            let k = dec.betas().len();
            let identity: Vec<Vec<ComplexRational>> = (0..k)
                .map(|i| (0..k).map(|j| if i == j { ComplexRational::one() } else { ComplexRational::zero() }).collect())
                .collect();
            local_ideal(&dec, &identity)?.as_monomial(None)?
        }
        _ => bail!(segre_core::Error::Parse("give exactly one of --ideal, --generators, --rho".into())),
    };
    let r = check_inequality_chain(&ideal);
    print_json(&json!({
        "manifest": manifest,
        "ideal": ideal.to_json(),
        "tau_star": r.tau_star.to_string(),
        "K": extended_u64(&r.k),
        "D": extended_u64(&r.d),
        "zero_dimensional": r.zero_dimensional,
        "chain_holds": r.holds,
    }))
}

/// Returns whether the grid passed.
pub fn verify(rho: &Path, grid: &Path, tol: &str) -> Result<bool> {
    let mut manifest = RunManifest::new("verify-grid");
    let rho = load_rho(rho, &mut manifest)?;
    let text = manifest.read_input(grid)?;
    let grid = serde_json::from_str::<GridJson>(&text)?.into_grid()?;
    let tol = crate::config::real_arg("tol", tol, &mut manifest)?;
    let report = verify_grid(&rho, &grid, tol)?;
    print_json(&json!({ "manifest": manifest, "report": report }))?;
    Ok(report.passed)
}

pub fn hausdorff(a: &Path, b: &Path) -> Result<()> {
    let mut manifest = RunManifest::new("hausdorff");
    let ka = PointCloud::read_csv(manifest.read_input(a)?.as_bytes())?;
    let kb = PointCloud::read_csv(manifest.read_input(b)?.as_bytes())?;
    print_json(&json!({
        "manifest": manifest,
        "distance": hausdorff_distance(&ka, &kb)?,
        "directed_ab": directed_distance(&ka, &kb)?,
        "directed_ba": directed_distance(&kb, &ka)?,
    }))
}
