//! Log-normal and gamma maximum-likelihood fits used as competing lifetime
//! models.

use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimation::{ClassicalSample, Criteria, FitReport, NeutroSample};
use crate::gof::{neutro_gof, GofResult};
use crate::interval::EnvelopeStrategy;
use crate::models::{fit_neutro, ModelKind};
use crate::rng::RandomStream;
use crate::special::{digamma, gamma_p, ln_gamma, std_normal_cdf, trigamma, LN_SQRT_2PI};

/// Log-normal with log-scale location `mu` and spread `sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LnParams {
    mu: f64,
    sigma: f64,
}

impl LnParams {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() || !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::Domain(format!("log-normal needs finite mu and sigma > 0, got ({mu}, {sigma})")));
        }
        Ok(Self { mu, sigma })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn cdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else {
            std_normal_cdf((t.ln() - self.mu) / self.sigma)
        }
    }

    pub fn ln_pdf(&self, t: f64) -> f64 {
        let lt = t.ln();
        let z = (lt - self.mu) / self.sigma;
        -lt - self.sigma.ln() - LN_SQRT_2PI - 0.5 * z * z
    }

    pub fn draw(&self, rng: &mut RandomStream) -> f64 {
        (self.mu + self.sigma * rng.standard_normal()).exp()
    }
}

/// Gamma with `shape` and `scale` (mean = shape · scale).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaParams {
    shape: f64,
    scale: f64,
}

impl GammaParams {
    pub fn new(shape: f64, scale: f64) -> Result<Self> {
        if !(shape.is_finite() && shape > 0.0 && scale.is_finite() && scale > 0.0) {
            return Err(Error::Domain(format!("gamma needs shape, scale > 0, got ({shape}, {scale})")));
        }
        Ok(Self { shape, scale })
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn cdf(&self, t: f64) -> f64 {
        gamma_p(self.shape, t / self.scale)
    }

    pub fn ln_pdf(&self, t: f64) -> f64 {
        (self.shape - 1.0) * t.ln() - t / self.scale - self.shape * self.scale.ln() - ln_gamma(self.shape)
    }

    pub fn draw(&self, rng: &mut RandomStream) -> f64 {
        Gamma::new(self.shape, self.scale)
            .expect("validated parameters")
            .sample(rng)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LnFit {
    pub params: LnParams,
    pub loglik: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaFit {
    pub params: GammaParams,
    pub loglik: f64,
}

/// `μ̂ = mean(ln t)`, `σ̂² = mean((ln t − μ̂)²)`.
pub fn lognormal_mle(d: &ClassicalSample) -> Result<LnFit> {
    if d.all_equal() {
        return Err(Error::DegenerateSample);
    }
    let n = d.len() as f64;
    let logs: Vec<f64> = d.obs().iter().map(|t| t.ln()).collect();
    let mu = logs.iter().sum::<f64>() / n;
    let var = logs.iter().map(|l| (l - mu) * (l - mu)).sum::<f64>() / n;
    let params = LnParams::new(mu, var.sqrt()).map_err(|_| Error::DegenerateSample)?;
    let loglik = d.obs().iter().map(|&t| params.ln_pdf(t)).sum();
    Ok(LnFit { params, loglik })
}

const GAMMA_MAX_ITER: usize = 100;

/// Shape solves `ln k − ψ(k) = ln s − mean(ln t)`; scale is `s / k̂`.
///
/// Newton from the Minka starting value, halving any step that would leave
/// the positive axis. `ln k − ψ(k)` is strictly decreasing, so the root is
/// unique.
pub fn gamma_mle(d: &ClassicalSample) -> Result<GammaFit> {
    if d.all_equal() {
        return Err(Error::DegenerateSample);
    }
    let n = d.len() as f64;
    let mean = d.arithmetic_mean();
    let mean_log = d.obs().iter().map(|t| t.ln()).sum::<f64>() / n;
    let c = mean.ln() - mean_log;
    if !(c > 0.0) {
        return Err(Error::DegenerateSample);
    }

    let mut k = (3.0 - c + ((c - 3.0).powi(2) + 24.0 * c).sqrt()) / (12.0 * c);
    let mut converged = false;
    for _ in 0..GAMMA_MAX_ITER {
        let f = k.ln() - digamma(k)? - c;
        let df = 1.0 / k - trigamma(k);
        let mut next = k - f / df;
        while next <= 0.0 {
            next = 0.5 * (k + next.max(0.0));
        }
        let step = (next - k).abs();
        k = next;
        if step <= 1e-14 * k {
            converged = true;
            break;
        }
    }
    let residual = k.ln() - digamma(k)? - c;
    if !converged && residual.abs() > 1e-10 {
        return Err(Error::SolverFailure(format!(
            "gamma shape equation did not converge: k = {k}, residual = {residual}"
        )));
    }
    let params = GammaParams::new(k, mean / k)?;
    let loglik = d.obs().iter().map(|&t| params.ln_pdf(t)).sum();
    Ok(GammaFit { params, loglik })
}

/// Score-equation residual `ln k − ψ(k) − (ln s − mean(ln t))`.
pub fn gamma_score_residual(d: &ClassicalSample, shape: f64) -> Result<f64> {
    let n = d.len() as f64;
    let mean_log = d.obs().iter().map(|t| t.ln()).sum::<f64>() / n;
    Ok(shape.ln() - digamma(shape)? - (d.arithmetic_mean().ln() - mean_log))
}

/// Interval fit plus endpoint goodness of fit for one model.
///
/// Works for every [`ModelKind`]; the competitor families are `nln` and
/// `ng`.
pub fn fit_competitor(
    d: &NeutroSample,
    kind: ModelKind,
    strategy: EnvelopeStrategy,
    criteria: Criteria,
    reps: usize,
    seed: u64,
) -> Result<(FitReport, GofResult)> {
    let fit = fit_neutro(d, kind, strategy, criteria)?;
    let gof = neutro_gof(d, kind, reps, seed)?;
    Ok((fit, gof))
}
