//! Point classifier: runs the grid search over every `λ ∈ Λ(d, n)` and every
//! stage of the `ε` schedule, for each `κ` of the sweep.
//!
//! The verdicts are asymmetric. IN rests on grids that were found (and, on
//! the certificate path, verified exactly); OUT only records that the search
//! failed after all restarts, which is evidence of absence and not a proof.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::search::{search_grid, SearchConfig};
use super::index_tuples;
use crate::algebra::FloatHermitian;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    In,
    Out,
    Undecided,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::In => "IN",
            Verdict::Out => "OUT",
            Verdict::Undecided => "UNDECIDED",
        })
    }
}

impl FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "IN" => Ok(Verdict::In),
            "OUT" => Ok(Verdict::Out),
            "UNDECIDED" => Ok(Verdict::Undecided),
            _ => Err(Error::Parse(format!("unknown verdict {s:?}"))),
        }
    }
}

impl Verdict {
    /// Process exit code used by the command-line driver.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::In => 0,
            Verdict::Out => 1,
            Verdict::Undecided => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StageStatus {
    Found,
    /// Best residual in `(tol, 10·tol]`.
    Near,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub kappa: usize,
    pub stage: usize,
    pub eps: f64,
    /// Smallest residual over all `λ` (the residual of the grid if found).
    pub best_residual: f64,
    pub status: StageStatus,
    /// 1-based `λ` of the grid found, or of the best attempt.
    pub lambda: Option<Vec<usize>>,
    /// Set on the exact certificate path.
    #[serde(default)]
    pub certified: bool,
}

impl StageRecord {
    pub fn found(&self) -> bool {
        self.status == StageStatus::Found
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KappaVerdict {
    pub kappa: usize,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    /// Point as interleaved `(re, im)` pairs.
    pub point: Vec<f64>,
    pub verdict: Verdict,
    pub d: usize,
    /// The `κ` that decided the verdict: the first IN, else the first
    /// UNDECIDED, else the last one tried.
    pub kappa: usize,
    pub per_kappa: Vec<KappaVerdict>,
    pub stages: Vec<StageRecord>,
    pub certified: bool,
}

impl Classification {
    pub fn stages_for(&self, kappa: usize) -> impl Iterator<Item = &StageRecord> {
        self.stages.iter().filter(move |s| s.kappa == kappa)
    }

    /// 1-based `λ` of the last stage record for the deciding `κ`.
    pub fn lambda(&self) -> Option<Vec<usize>> {
        self.stages_for(self.kappa).filter_map(|s| s.lambda.clone()).last()
    }
}

pub(crate) fn interleave(p: &[Complex64]) -> Vec<f64> {
    p.iter().flat_map(|c| [c.re, c.im]).collect()
}

pub(crate) fn combine(per_kappa: &[KappaVerdict]) -> (Verdict, usize) {
    if let Some(k) = per_kappa.iter().find(|k| k.verdict == Verdict::In) {
        return (Verdict::In, k.kappa);
    }
    if let Some(k) = per_kappa.iter().find(|k| k.verdict == Verdict::Undecided) {
        return (Verdict::Undecided, k.kappa);
    }
    (Verdict::Out, per_kappa.last().map_or(0, |k| k.kappa))
}

pub(crate) fn kappa_verdict(stages: &[StageRecord]) -> Verdict {
    if stages.iter().any(|s| s.status == StageStatus::Failed) {
        Verdict::Out
    } else if stages.iter().all(StageRecord::found) {
        Verdict::In
    } else {
        Verdict::Undecided
    }
}

/// Classifies `p` against `𝒜ᵈ` with the numerical search.
pub fn classify_point(rho: &FloatHermitian, p: &[Complex64], cfg: &SearchConfig) -> Result<Classification> {
    let n = rho.n();
    if p.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: p.len() });
    }
    cfg.validate(n)?;
    let value = rho.eval_diag(p);
    if !(value.abs() <= cfg.tol) {
        return Err(Error::NotOnSet { residual: value.abs(), tol: cfg.tol });
    }
    let lambdas = index_tuples(cfg.d, n);
    let mut stages = Vec::new();
    let mut per_kappa = Vec::new();
    for &kappa in &cfg.kappas {
        let mut records = Vec::new();
        for (s, eps) in cfg.eps_schedule().into_iter().enumerate() {
            let mut best = f64::INFINITY;
            let mut best_lambda = None;
            let mut found = None;
            for lambda in &lambdas {
                let out = search_grid(rho, p, cfg, kappa, eps, lambda)?;
                if out.grid.is_some() {
                    found = Some((out.best_residual, lambda.clone()));
                    break;
                }
                if out.best_residual < best {
                    best = out.best_residual;
                    best_lambda = Some(lambda.clone());
                }
            }
            let one_based = |l: Vec<usize>| l.into_iter().map(|x| x + 1).collect();
            let record = match found {
                Some((res, lambda)) => StageRecord {
                    kappa,
                    stage: s,
                    eps,
                    best_residual: res,
                    status: StageStatus::Found,
                    lambda: Some(one_based(lambda)),
                    certified: false,
                },
                None => StageRecord {
                    kappa,
                    stage: s,
                    eps,
                    best_residual: best,
                    status: if best <= 10.0 * cfg.tol { StageStatus::Near } else { StageStatus::Failed },
                    lambda: best_lambda.map(one_based),
                    certified: false,
                },
            };
            let failed = record.status == StageStatus::Failed;
            records.push(record);
            // later stages cannot rescue this κ
            if failed {
                break;
            }
        }
        per_kappa.push(KappaVerdict { kappa, verdict: kappa_verdict(&records) });
        stages.extend(records);
    }
    let (verdict, kappa) = combine(&per_kappa);
    Ok(Classification { point: interleave(p), verdict, d: cfg.d, kappa, per_kappa, stages, certified: false })
}
