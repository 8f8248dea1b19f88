//! Modified Kolmogorov-Smirnov test on Chen-Balakrishnan transformed values,
//! with Monte Carlo p-values because the parameters are estimated.
//!
//! Steps for a classical sample `t` and a fitted CDF `F`:
//!
//! 1. sort `t`, set `vᵢ = F(tᵢ)` and `yᵢ = Φ⁻¹(vᵢ)`;
//! 2. standardize, `uᵢ = Φ((yᵢ − ȳ) / s_y)` with the `n − 1` denominator;
//! 3. `KS* = (√n − 0.01 + 0.85/√n) · max(D⁺, D⁻)`.
//!
//! The p-value refits the model on samples drawn from the fitted model
//! and counts how often the simulated statistic reaches the observed one.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimation::{ClassicalSample, NeutroSample};
use crate::interval::{Extremes, Interval};
use crate::models::{FittedModel, ModelKind};
use crate::rng::RandomStream;
use crate::special::{std_normal_cdf, std_normal_quantile};

/// Smallest number of Monte Carlo replicates accepted.
pub const MIN_REPS: usize = 100;

/// CDF values are kept this far from 0 and 1 before the normal quantile.
pub const CLAMP: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofResult {
    pub ks_star: Interval,
    pub p_value: Interval,
    pub mc_reps: usize,
    pub seed: u64,
    /// CDF values clamped away from 0 or 1, summed over both endpoint
    /// datasets.
    #[serde(skip)]
    pub clamped: usize,
}

/// Transformed values, ascending, plus how many CDF values were clamped.
#[derive(Debug, Clone, PartialEq)]
pub struct Transformed {
    pub u: Vec<f64>,
    pub clamped: usize,
}

pub fn cb_transform(d: &ClassicalSample, fitted: &FittedModel) -> Result<Transformed> {
    let n = d.len();
    if n < 3 {
        return Err(Error::InsufficientData { required: 3, got: n });
    }
    let mut t = d.obs().to_vec();
    t.sort_by(f64::total_cmp);

    let mut clamped = 0;
    let mut y = Vec::with_capacity(n);
    for &ti in &t {
        let v = fitted.cdf(ti);
        let vc = v.clamp(CLAMP, 1.0 - CLAMP);
        if vc != v {
            clamped += 1;
        }
        y.push(std_normal_quantile(vc)?);
    }
    let nf = n as f64;
    let mean = y.iter().sum::<f64>() / nf;
    let sd = (y.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (nf - 1.0)).sqrt();
    if !(sd > 0.0) {
        return Err(Error::DegenerateSample);
    }
    let u = y.iter().map(|v| std_normal_cdf((v - mean) / sd)).collect();
    Ok(Transformed { u, clamped })
}

/// Small-sample adjusted KS statistic of ascending values in (0, 1).
pub fn ks_star(u: &[f64]) -> Result<f64> {
    if u.is_empty() {
        return Err(Error::Contract("ks_star needs at least one value".into()));
    }
    if u.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::Contract("ks_star needs ascending input".into()));
    }
    let n = u.len() as f64;
    let (mut d_plus, mut d_minus) = (0f64, 0f64);
    for (j, &uj) in u.iter().enumerate() {
        let j = j as f64;
        d_plus = d_plus.max((j + 1.0) / n - uj);
        d_minus = d_minus.max(uj - j / n);
    }
    let rn = n.sqrt();
    Ok((rn - 0.01 + 0.85 / rn) * d_plus.max(d_minus))
}

/// Observed statistic of `d` against an already fitted model.
pub fn statistic(d: &ClassicalSample, fitted: &FittedModel) -> Result<(f64, usize)> {
    let tr = cb_transform(d, fitted)?;
    Ok((ks_star(&tr.u)?, tr.clamped))
}

/// Observed statistic and Monte Carlo p-value for a classical sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalGof {
    pub ks_star: f64,
    pub p_value: f64,
    pub clamped: usize,
}

fn check_reps(reps: usize) -> Result<()> {
    if reps < MIN_REPS {
        return Err(Error::Config(format!("reps must be ≥ {MIN_REPS}, got {reps}")));
    }
    Ok(())
}

/// Fits `kind`, computes the observed statistic and its parametric
/// bootstrap p-value.
///
/// Replicate `i` draws from `RandomStream::derive(seed, i)`, so the result
/// does not depend on thread scheduling. Replicates whose refit fails are
/// dropped from the denominator; more than 1% failures abort.
pub fn classical_gof(d: &ClassicalSample, kind: ModelKind, reps: usize, seed: u64) -> Result<ClassicalGof> {
    check_reps(reps)?;
    let (fitted, _) = kind.fit(d)?;
    let (observed, clamped) = statistic(d, &fitted)?;
    let n = d.len();

    let sims: Vec<Result<f64>> = (0..reps)
        .into_par_iter()
        .map(|i| {
            let mut rng = RandomStream::derive(seed, i as u64);
            let draws: Vec<f64> = (0..n).map(|_| fitted.draw(&mut rng)).collect();
            let sample = ClassicalSample::new(draws)?;
            let (refit, _) = kind.fit(&sample)?;
            Ok(statistic(&sample, &refit)?.0)
        })
        .collect();

    let mut failed = 0;
    let mut first = None;
    let mut exceed = 0usize;
    for r in sims {
        match r {
            Ok(ks) => exceed += usize::from(ks >= observed),
            Err(e) => {
                failed += 1;
                first.get_or_insert(e);
            }
        }
    }
    if failed * 100 > reps {
        return Err(Error::TooManyFailures {
            failed,
            total: reps,
            first: Box::new(first.expect("failed > 0")),
        });
    }
    let ok = reps - failed;
    Ok(ClassicalGof {
        ks_star: observed,
        p_value: (1 + exceed) as f64 / (ok + 1) as f64,
        clamped,
    })
}

pub fn mc_pvalue(d: &ClassicalSample, kind: ModelKind, reps: usize, seed: u64) -> Result<f64> {
    classical_gof(d, kind, reps, seed).map(|g| g.p_value)
}

/// Runs the test on the all-lower and all-upper endpoint datasets and
/// reports the range of each quantity. Both use the same seed.
pub fn neutro_gof(d: &NeutroSample, kind: ModelKind, reps: usize, seed: u64) -> Result<GofResult> {
    check_reps(reps)?;
    let datasets = if d.is_classical() {
        vec![d.lower()]
    } else {
        vec![d.lower(), d.upper()]
    };
    let mut ks = Extremes::default();
    let mut p = Extremes::default();
    let mut clamped = 0;
    for sample in &datasets {
        let g = classical_gof(sample, kind, reps, seed)?;
        ks.push(g.ks_star);
        p.push(g.p_value);
        clamped += g.clamped;
    }
    Ok(GofResult {
        ks_star: ks.finish().expect("nonempty")?,
        p_value: p.finish().expect("nonempty")?,
        mc_reps: reps,
        seed,
        clamped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::BsParams;

    #[test]
    fn ks_star_of_midpoints() {
        let n = 10;
        let u: Vec<f64> = (1..=n).map(|j| (j as f64 - 0.5) / n as f64).collect();
        let want = (10f64.sqrt() - 0.01 + 0.85 / 10f64.sqrt()) * 0.05;
        assert!((ks_star(&u).unwrap() - want).abs() < 1e-15);
        assert!((want - 0.171_053_563).abs() < 1e-9);
    }

    #[test]
    fn ks_star_rejects_unsorted() {
        assert!(matches!(ks_star(&[0.4, 0.2]), Err(Error::Contract(_))));
        assert!(matches!(ks_star(&[]), Err(Error::Contract(_))));
    }

    #[test]
    fn transform_range_and_centre() {
        let d = ClassicalSample::new(vec![1.0, 2.0, 3.0]).unwrap();
        let fitted = FittedModel::Bs(BsParams::new(0.5, 2.0).unwrap());
        let tr = cb_transform(&d, &fitted).unwrap();
        assert!(tr.u.iter().all(|&u| u > 0.0 && u < 1.0));
        assert!(tr.u.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(tr.clamped, 0);
    }

    #[test]
    fn transform_maps_mean_to_half() {
        // y symmetric about the middle value
        let p = BsParams::new(0.4, 1.0).unwrap();
        let t: Vec<f64> = [-1.0, 0.0, 1.0].iter().map(|&z| p.transform(z)).collect();
        let tr = cb_transform(&ClassicalSample::new(t).unwrap(), &FittedModel::Bs(p)).unwrap();
        assert!((tr.u[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn transform_needs_three_points() {
        let d = ClassicalSample::new(vec![1.0, 2.0]).unwrap();
        let fitted = FittedModel::Bs(BsParams::new(0.5, 2.0).unwrap());
        assert!(matches!(
            cb_transform(&d, &fitted),
            Err(Error::InsufficientData { required: 3, got: 2 })
        ));
    }

    #[test]
    fn far_tail_values_are_clamped() {
        let d = ClassicalSample::new(vec![1e-6, 1.0, 2.0, 1e6]).unwrap();
        let fitted = FittedModel::Bs(BsParams::new(0.1, 1.0).unwrap());
        let tr = cb_transform(&d, &fitted).unwrap();
        assert_eq!(tr.clamped, 2);
    }

    #[test]
    fn reps_floor() {
        let d = ClassicalSample::new(vec![1.0, 2.0, 3.0, 2.5]).unwrap();
        match mc_pvalue(&d, ModelKind::Nbs, 99, 1) {
            Err(Error::Config(msg)) => assert!(msg.contains("reps must be ≥ 100")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn pvalue_is_deterministic() {
        let d = ClassicalSample::new(vec![1.0, 2.0, 3.0, 2.5, 1.4, 0.9, 1.8]).unwrap();
        let a = mc_pvalue(&d, ModelKind::Nbs, 100, 5).unwrap();
        let b = mc_pvalue(&d, ModelKind::Nbs, 100, 5).unwrap();
        assert_eq!(a, b);
        assert!(a > 0.0 && a <= 1.0);
    }

    #[test]
    fn classical_neutro_gof_is_degenerate() {
        let obs = [1.0, 2.0, 3.0, 2.5, 1.4, 0.9, 1.8];
        let d = NeutroSample::from_classical(&obs).unwrap();
        let g = neutro_gof(&d, ModelKind::Nln, 100, 3).unwrap();
        assert!(g.ks_star.is_degenerate() && g.p_value.is_degenerate());
        let c = classical_gof(&ClassicalSample::new(obs.to_vec()).unwrap(), ModelKind::Nln, 100, 3).unwrap();
        assert_eq!(g.ks_star.lo(), c.ks_star);
        assert_eq!(g.p_value.lo(), c.p_value);
    }

    #[test]
    fn json_shape() {
        let d = NeutroSample::from_classical(&[1.0, 2.0, 3.0, 2.5]).unwrap();
        let g = neutro_gof(&d, ModelKind::Ng, 100, 9).unwrap();
        let v = serde_json::to_value(&g).unwrap();
        let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        keys.sort();
        assert_eq!(keys, ["ks_star", "mc_reps", "p_value", "seed"]);
    }
}
