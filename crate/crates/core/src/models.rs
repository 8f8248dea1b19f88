//! The three lifetime models behind fitting and goodness of fit.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::competitors::{gamma_mle, lognormal_mle, GammaParams, LnParams};
use crate::dist::BsParams;
use crate::error::{Error, Result};
use crate::estimation::{map_datasets, mle, ClassicalSample, Criteria, FitReport, NeutroSample};
use crate::interval::EnvelopeStrategy;
use crate::rng::RandomStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// Birnbaum-Saunders.
    Nbs,
    /// Log-normal.
    Nln,
    /// Gamma.
    Ng,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [ModelKind::Nbs, ModelKind::Nln, ModelKind::Ng];

    pub fn tag(&self) -> &'static str {
        match self {
            ModelKind::Nbs => "nbs",
            ModelKind::Nln => "nln",
            ModelKind::Ng => "ng",
        }
    }

    /// Names of the two reported parameters, in report order.
    pub fn param_names(&self) -> [&'static str; 2] {
        match self {
            ModelKind::Nbs => ["alpha", "beta"],
            ModelKind::Nln => ["mu", "sigma"],
            ModelKind::Ng => ["shape", "scale"],
        }
    }

    pub fn fit(&self, d: &ClassicalSample) -> Result<(FittedModel, f64)> {
        match self {
            ModelKind::Nbs => mle(d).map(|f| (FittedModel::Bs(f.params), f.loglik)),
            ModelKind::Nln => lognormal_mle(d).map(|f| (FittedModel::LogNormal(f.params), f.loglik)),
            ModelKind::Ng => gamma_mle(d).map(|f| (FittedModel::Gamma(f.params), f.loglik)),
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nbs" | "nbsd" | "bs" => Ok(ModelKind::Nbs),
            "nln" | "nlnd" | "ln" | "lognormal" => Ok(ModelKind::Nln),
            "ng" | "ngd" | "gamma" => Ok(ModelKind::Ng),
            other => Err(Error::Config(format!("unknown model {other:?}; expected nbs, nln or ng"))),
        }
    }
}

/// A fitted classical model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FittedModel {
    Bs(BsParams),
    LogNormal(LnParams),
    Gamma(GammaParams),
}

impl FittedModel {
    pub fn kind(&self) -> ModelKind {
        match self {
            FittedModel::Bs(_) => ModelKind::Nbs,
            FittedModel::LogNormal(_) => ModelKind::Nln,
            FittedModel::Gamma(_) => ModelKind::Ng,
        }
    }

    /// The two parameters in report order.
    pub fn params(&self) -> (f64, f64) {
        match self {
            FittedModel::Bs(p) => (p.alpha(), p.beta()),
            FittedModel::LogNormal(p) => (p.mu(), p.sigma()),
            FittedModel::Gamma(p) => (p.shape(), p.scale()),
        }
    }

    /// CDF for `t > 0`.
    pub fn cdf(&self, t: f64) -> f64 {
        match self {
            FittedModel::Bs(p) => p.cdf_unchecked(t),
            FittedModel::LogNormal(p) => p.cdf(t),
            FittedModel::Gamma(p) => p.cdf(t),
        }
    }

    pub fn ln_pdf(&self, t: f64) -> f64 {
        match self {
            FittedModel::Bs(p) => p.ln_pdf_unchecked(t),
            FittedModel::LogNormal(p) => p.ln_pdf(t),
            FittedModel::Gamma(p) => p.ln_pdf(t),
        }
    }

    pub fn draw(&self, rng: &mut RandomStream) -> f64 {
        match self {
            FittedModel::Bs(p) => p.draw(rng),
            FittedModel::LogNormal(p) => p.draw(rng),
            FittedModel::Gamma(p) => p.draw(rng),
        }
    }

    pub fn loglik(&self, obs: &[f64]) -> f64 {
        obs.iter().map(|&t| self.ln_pdf(t)).sum()
    }
}

/// Interval fit of any model over the indeterminacy space of `d`.
pub fn fit_neutro(d: &NeutroSample, kind: ModelKind, strategy: EnvelopeStrategy, criteria: Criteria) -> Result<FitReport> {
    let fits = map_datasets(d, strategy, |sample| {
        let (fitted, loglik) = kind.fit(sample)?;
        let (a, b) = fitted.params();
        Ok((a, b, loglik))
    })?;
    FitReport::from_points(kind, d.len(), &fits, criteria)
}
