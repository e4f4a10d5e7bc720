//! Exact certificates: rational grids on a known complex `d`-plane through `p`,
//! verified at tolerance zero for every `ε` of the schedule.

use super::classify::{combine, interleave, kappa_verdict, Classification, KappaVerdict, StageRecord, StageStatus};
use super::search::SearchConfig;
use super::{index_tuples, multi_index, verify_grid, ExactGrid, Grid};
use crate::algebra::scalar::point_to_c64;
use crate::algebra::{ComplexRational, ExactPoint, HermitianPolynomial, Rational};
use crate::error::{Error, Result};

/// The affine plane `base + span(directions)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactPlane {
    pub base: ExactPoint,
    pub directions: Vec<ExactPoint>,
}

impl ExactPlane {
    pub fn new(base: ExactPoint, directions: Vec<ExactPoint>) -> Result<Self> {
        if directions.is_empty() {
            return Err(Error::Domain("a plane needs at least one direction".into()));
        }
        if let Some(v) = directions.iter().find(|v| v.len() != base.len()) {
            return Err(Error::DimensionMismatch { expected: base.len(), got: v.len() });
        }
        Ok(Self { base, directions })
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    /// Directions rewritten so that coordinate `λ_j` of direction `i` is `δ_ij`,
    /// or `None` when the `λ`-minor is singular.
    fn adapted(&self, lambda: &[usize]) -> Option<Vec<ExactPoint>> {
        let d = self.dim();
        // augmented system [M | V] with M_ij = v_i[λ_j]; row-reduce M to I
        let mut rows: Vec<(Vec<ComplexRational>, ExactPoint)> = self
            .directions
            .iter()
            .map(|v| (lambda.iter().map(|&l| v[l].clone()).collect(), v.clone()))
            .collect();
        for col in 0..d {
            let pivot = (col..d).find(|&r| !rows[r].0[col].is_zero())?;
            rows.swap(col, pivot);
            let inv = rows[col].0[col].inv().ok()?;
            let (m, v) = &mut rows[col];
            m.iter_mut().for_each(|x| *x = &*x * &inv);
            v.iter_mut().for_each(|x| *x = &*x * &inv);
            let (pm, pv) = rows[col].clone();
            for (r, (m, v)) in rows.iter_mut().enumerate() {
                if r == col || m[col].is_zero() {
                    continue;
                }
                let f = m[col].clone();
                m.iter_mut().zip(&pm).for_each(|(x, y)| *x -= &(&f * y));
                v.iter_mut().zip(&pv).for_each(|(x, y)| *x -= &(&f * y));
            }
        }
        Some(rows.into_iter().map(|(_, v)| v).collect())
    }

    /// The κ-grid `base + Σ_j (ν_j h) v′_j` with base indices `lambda`, where
    /// `h = 1/N` is chosen so that every point lies within `ε/2` of `base`.
    pub fn grid(&self, kappa: usize, lambda: &[usize], eps: f64) -> Option<ExactGrid> {
        let dirs = self.adapted(lambda)?;
        let spread: f64 = dirs.iter().map(|v| point_to_c64(v).iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()).sum();
        let steps = (2.0 * kappa as f64 * spread / eps).ceil() as i64 + 1;
        let h = Rational::new(1.into(), steps.into());
        let d = self.dim();
        let points = (0..(kappa + 1).pow(d as u32))
            .map(|i| {
                let nu = multi_index(i, d, kappa);
                let mut q = self.base.clone();
                for (j, v) in dirs.iter().enumerate() {
                    let s = &h * Rational::from_integer((nu[j] as i64).into());
                    for (qk, vk) in q.iter_mut().zip(v) {
                        *qk += &vk.scale(&s);
                    }
                }
                q
            })
            .collect();
        Some(Grid { d, kappa, lambda: lambda.to_vec(), points })
    }
}

/// Certifies `plane.base ∈ 𝒜ᵈ` by exact grids on `plane` at every stage.
/// Returns `None` when some stage has no exactly verified grid (the plane
/// does not lie in `X`, or no `λ`-minor is invertible).
pub fn certify_point(rho: &HermitianPolynomial, plane: &ExactPlane, cfg: &SearchConfig) -> Result<Option<Classification>> {
    let n = rho.n();
    if plane.base.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: plane.base.len() });
    }
    let cfg = SearchConfig { d: plane.dim(), ..cfg.clone() };
    cfg.validate(n)?;
    let lambdas = index_tuples(cfg.d, n);
    let mut stages = Vec::new();
    let mut per_kappa = Vec::new();
    for &kappa in &cfg.kappas {
        let mut records = Vec::new();
        for (s, eps) in cfg.eps_schedule().into_iter().enumerate() {
            let mut hit = None;
            for lambda in &lambdas {
                let Some(g) = plane.grid(kappa, lambda, eps) else { continue };
                if verify_grid(rho, &g, 0.0)?.passed {
                    hit = Some(lambda.iter().map(|l| l + 1).collect());
                    break;
                }
            }
            let Some(lambda) = hit else { return Ok(None) };
            records.push(StageRecord {
                kappa,
                stage: s,
                eps,
                best_residual: 0.0,
                status: StageStatus::Found,
                lambda: Some(lambda),
                certified: true,
            });
        }
        per_kappa.push(KappaVerdict { kappa, verdict: kappa_verdict(&records) });
        stages.extend(records);
    }
    let (verdict, kappa) = combine(&per_kappa);
    Ok(Some(Classification {
        point: interleave(&point_to_c64(&plane.base)),
        verdict,
        d: cfg.d,
        kappa,
        per_kappa,
        stages,
        certified: true,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::real_point;
    use crate::catalog;
    use crate::grid::Verdict;

    #[test]
    fn mmz_line_certifies_in() {
        let plane = ExactPlane::new(real_point(&[(1, 1), (1, 1), (0, 1), (0, 1)]), vec![real_point(&[(1, 1), (1, 1), (0, 1), (0, 1)])]).unwrap();
        let cfg = SearchConfig { kappas: vec![1, 2], ..Default::default() };
        let cl = certify_point(&catalog::mmz(), &plane, &cfg).unwrap().unwrap();
        assert_eq!(cl.verdict, Verdict::In);
        assert!(cl.certified);
        assert_eq!(cl.stages.len(), 8);
    }

    #[test]
    fn rational_mmz_point_with_its_line() {
        // (5/4, 3/4, 0, 1) + ζ(3, 5, 4, 0)
        let base = vec![
            ComplexRational::ratio(5, 4),
            ComplexRational::ratio(3, 4),
            ComplexRational::zero(),
            ComplexRational::one(),
        ];
        let plane = ExactPlane::new(base, vec![real_point(&[(3, 1), (5, 1), (4, 1), (0, 1)])]).unwrap();
        let cl = certify_point(&catalog::mmz(), &plane, &SearchConfig::default()).unwrap().unwrap();
        assert_eq!(cl.verdict, Verdict::In);
        for st in &cl.stages {
            let g = plane.grid(st.kappa, &[st.lambda.as_ref().unwrap()[0] - 1], st.eps).unwrap();
            let far = g.points.iter().map(|q| {
                q.iter().zip(&plane.base).map(|(a, b)| (a - b).to_c64().norm_sqr()).sum::<f64>().sqrt()
            });
            assert!(far.fold(0.0, f64::max) < st.eps);
        }
    }

    #[test]
    fn plane_outside_x_does_not_certify() {
        let plane = ExactPlane::new(real_point(&[(1, 1), (1, 1), (0, 1), (0, 1)]), vec![real_point(&[(1, 1), (0, 1), (0, 1), (0, 1)])]).unwrap();
        assert!(certify_point(&catalog::mmz(), &plane, &SearchConfig::default()).unwrap().is_none());
    }

    #[test]
    fn two_plane_in_a_product_cone() {
        // |z1|² − |z2|² + |z3|² − |z4|² contains the plane z2 = z1, z4 = z3
        let rho = crate::algebra::io::polynomial_from_json(
            r#"{ "n": 4, "terms": [
                { "alpha": [1,0,0,0], "beta": [1,0,0,0], "re": "1" },
                { "alpha": [0,1,0,0], "beta": [0,1,0,0], "re": "-1" },
                { "alpha": [0,0,1,0], "beta": [0,0,1,0], "re": "1" },
                { "alpha": [0,0,0,1], "beta": [0,0,0,1], "re": "-1" } ] }"#,
        )
        .unwrap();
        let plane = ExactPlane::new(vec![ComplexRational::zero(); 4], vec![
            real_point(&[(1, 1), (1, 1), (1, 1), (1, 1)]),
            real_point(&[(0, 1), (0, 1), (1, 1), (1, 1)]),
        ])
        .unwrap();
        let g = plane.grid(1, &[0, 2], 0.5).unwrap();
        assert_eq!(g.len(), 4);
        assert!(verify_grid(&rho, &g, 0.0).unwrap().passed);
        let cfg = SearchConfig { kappas: vec![1], ..Default::default() };
        let cl = certify_point(&rho, &plane, &cfg).unwrap().unwrap();
        assert_eq!((cl.verdict, cl.d), (Verdict::In, 2));
    }
}
