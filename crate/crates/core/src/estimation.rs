//! Maximum-likelihood estimation for classical and interval-valued samples.
//!
//! For a classical sample the scale estimate is the unique root in `(r, s)`
//! of
//!
//! ```text
//! g(β) = β² − β (2r + K(β)) + r (s + K(β)),   K(x) = [mean((x + tᵢ)⁻¹)]⁻¹
//! ```
//!
//! where `s` and `r` are the arithmetic and harmonic means; the shape
//! estimate follows in closed form, `α̂² = s/β̂ + β̂/r − 2`.
//!
//! For an interval-valued sample every point dataset in the box of
//! observation intervals has its own MLE. [`neutro_mle`] evaluates a finite
//! subset of that box (see [`EnvelopeStrategy`]) and reports the range of
//! the estimates, which is an inner approximation of the exact range.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::BsParams;
use crate::error::{Error, Result};
use crate::interval::{EnvelopeStrategy, Extremes, Interval, IntervalBox};
use crate::models::ModelKind;

/// Relative tolerance of the scale root.
pub const BETA_TOL: f64 = 1e-10;

const MAX_SOLVER_ITER: usize = 200;

/// Positive real observations, at least two of them.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalSample {
    obs: Vec<f64>,
    mean: f64,
    harmonic: f64,
}

impl ClassicalSample {
    pub fn new(obs: Vec<f64>) -> Result<Self> {
        if obs.len() < 2 {
            return Err(Error::InsufficientData {
                required: 2,
                got: obs.len(),
            });
        }
        if let Some(bad) = obs.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
            return Err(Error::Domain(format!("observations must be finite and > 0, got {bad}")));
        }
        Ok(Self::from_trusted(obs))
    }

    /// Skips validation; callers guarantee `n ≥ 2` and positive finite values.
    pub(crate) fn from_trusted(obs: Vec<f64>) -> Self {
        let n = obs.len() as f64;
        let mean = obs.iter().sum::<f64>() / n;
        let harmonic = n / obs.iter().map(|t| t.recip()).sum::<f64>();
        Self { obs, mean, harmonic }
    }

    pub fn obs(&self) -> &[f64] {
        &self.obs
    }

    pub fn len(&self) -> usize {
        self.obs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.obs.is_empty()
    }

    /// `(s, r)`: arithmetic and harmonic means.
    pub fn means(&self) -> (f64, f64) {
        (self.mean, self.harmonic)
    }

    pub fn arithmetic_mean(&self) -> f64 {
        self.mean
    }

    pub fn harmonic_mean(&self) -> f64 {
        self.harmonic
    }

    pub fn all_equal(&self) -> bool {
        self.obs.iter().all(|&t| t == self.obs[0])
    }

    /// Harmonic mean of the shifted data, `K(x) = [mean((x + tᵢ)⁻¹)]⁻¹`.
    pub fn k_fn(&self, x: f64) -> f64 {
        let n = self.obs.len() as f64;
        n / self.obs.iter().map(|t| (x + t).recip()).sum::<f64>()
    }

    /// `(K(x), K'(x))`.
    fn k_with_slope(&self, x: f64) -> (f64, f64) {
        let n = self.obs.len() as f64;
        let (s1, s2) = self.obs.iter().fold((0.0, 0.0), |(a, b), t| {
            let w = (x + t).recip();
            (a + w, b + w * w)
        });
        let k = n / s1;
        (k, k * k * s2 / n)
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.obs.iter().map(|t| t * c).collect())
    }
}

/// Left side of the scale equation and its derivative.
fn scale_equation(d: &ClassicalSample, beta: f64) -> (f64, f64) {
    let (s, r) = d.means();
    let (k, dk) = d.k_with_slope(beta);
    let g = beta * beta - beta * (2.0 * r + k) + r * (s + k);
    let dg = 2.0 * beta - 2.0 * r - k + (r - beta) * dk;
    (g, dg)
}

/// Scale MLE: the root of the scale equation inside `(r, s)`.
///
/// Newton iterations from `√(rs)` are kept inside a shrinking sign-change
/// bracket; any step that leaves the bracket or fails to halve the
/// residual is replaced by bisection.
pub fn solve_beta(d: &ClassicalSample, tol: f64) -> Result<f64> {
    if d.all_equal() {
        return Err(Error::DegenerateSample);
    }
    let (s, r) = d.means();
    if !(r < s) {
        return Err(Error::SolverFailure(format!(
            "harmonic mean {r} is not below arithmetic mean {s}; spread is below floating-point resolution"
        )));
    }

    let (mut lo, mut hi) = (r, s);
    let (mut g_lo, _) = scale_equation(d, lo);
    let (mut g_hi, _) = scale_equation(d, hi);
    let mut widen = 0;
    while !(g_lo >= 0.0 && g_hi <= 0.0) {
        if widen == 8 {
            return Err(Error::SolverFailure(format!(
                "no sign change of the scale equation on [{lo}, {hi}]: g = ({g_lo}, {g_hi})"
            )));
        }
        let pad = (s - r) * 2f64.powi(widen);
        lo = (r - pad).max(r * 0.5);
        hi = s + pad;
        g_lo = scale_equation(d, lo).0;
        g_hi = scale_equation(d, hi).0;
        widen += 1;
    }
    if g_lo == 0.0 {
        return Ok(lo);
    }
    if g_hi == 0.0 {
        return Ok(hi);
    }

    let scale = s * s;
    let mut beta = (r * s).sqrt();
    let mut last_g = f64::INFINITY;
    for _ in 0..MAX_SOLVER_ITER {
        let (g, dg) = scale_equation(d, beta);
        if g == 0.0 {
            return Ok(beta);
        }
        if g > 0.0 {
            lo = beta;
        } else {
            hi = beta;
        }
        let newton = beta - g / dg;
        let use_newton = dg.is_finite() && dg != 0.0 && newton > lo && newton < hi && g.abs() <= 0.5 * last_g;
        let next = if use_newton { newton } else { 0.5 * (lo + hi) };
        last_g = g.abs();
        let step = (next - beta).abs();
        beta = next;
        if step <= tol * beta || hi - lo <= tol * beta {
            let (g_end, _) = scale_equation(d, beta);
            if g_end.abs() <= tol * scale {
                return Ok(beta);
            }
        }
    }
    Err(Error::SolverFailure(format!(
        "scale equation did not converge in {MAX_SOLVER_ITER} iterations; bracket [{lo}, {hi}]"
    )))
}

/// Classical MLE with its maximized log-likelihood.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsFit {
    pub params: BsParams,
    pub loglik: f64,
}

/// Full log-likelihood, constants included.
pub fn log_likelihood(obs: &[f64], p: &BsParams) -> f64 {
    obs.iter().map(|&t| p.ln_pdf_unchecked(t)).sum()
}

pub fn mle(d: &ClassicalSample) -> Result<BsFit> {
    let beta = solve_beta(d, BETA_TOL)?;
    let (s, r) = d.means();
    let alpha_sq = s / beta + beta / r - 2.0;
    if !(alpha_sq > 0.0) {
        return Err(Error::SolverFailure(format!(
            "shape estimate is not positive (α̂² = {alpha_sq}) at β̂ = {beta}"
        )));
    }
    let params = BsParams::new(alpha_sq.sqrt(), beta)?;
    Ok(BsFit {
        loglik: log_likelihood(d.obs(), &params),
        params,
    })
}

/// Parameter counts for the information criteria.
///
/// `k_bic` is separate because some reference BIC values for this
/// model requires a penalty of `4 ln n` while AIC uses `k = 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Criteria {
    pub k: u32,
    pub k_bic: u32,
}

impl Criteria {
    pub const STANDARD: Criteria = Criteria { k: 2, k_bic: 2 };
    pub const PAPER_COMPAT: Criteria = Criteria { k: 2, k_bic: 4 };
}

impl Default for Criteria {
    fn default() -> Self {
        Self::STANDARD
    }
}

/// `AIC = 2k − 2ℓ`, `BIC = k_bic ln n − 2ℓ`, endpoints reordered.
pub fn information_criteria(loglik: Interval, n: usize, k: u32, k_bic: u32) -> (Interval, Interval) {
    assert!(n >= 1, "information criteria need n >= 1");
    let aic = loglik.affine(2.0 * f64::from(k), -2.0).expect("finite");
    let bic = loglik
        .affine(f64::from(k_bic) * (n as f64).ln(), -2.0)
        .expect("finite");
    (aic, bic)
}

/// Interval-valued observations, each with a positive lower endpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct NeutroSample {
    obs: Vec<Interval>,
}

impl NeutroSample {
    pub fn new(obs: Vec<Interval>) -> Result<Self> {
        if obs.len() < 2 {
            return Err(Error::InsufficientData {
                required: 2,
                got: obs.len(),
            });
        }
        if let Some(bad) = obs.iter().find(|iv| iv.lo() <= 0.0) {
            return Err(Error::Domain(format!("observations must be positive, got {bad}")));
        }
        Ok(Self { obs })
    }

    pub fn from_classical(obs: &[f64]) -> Result<Self> {
        Self::new(obs.iter().map(|&t| Interval::point(t)).collect::<Result<_>>()?)
    }

    pub fn obs(&self) -> &[Interval] {
        &self.obs
    }

    pub fn len(&self) -> usize {
        self.obs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.obs.is_empty()
    }

    pub fn nondegenerate(&self) -> usize {
        self.obs.iter().filter(|iv| !iv.is_degenerate()).count()
    }

    pub fn is_classical(&self) -> bool {
        self.nondegenerate() == 0
    }

    /// The all-lower endpoint dataset.
    pub fn lower(&self) -> ClassicalSample {
        ClassicalSample::from_trusted(self.obs.iter().map(Interval::lo).collect())
    }

    /// The all-upper endpoint dataset.
    pub fn upper(&self) -> ClassicalSample {
        ClassicalSample::from_trusted(self.obs.iter().map(Interval::hi).collect())
    }

    pub fn as_box(&self) -> IntervalBox {
        IntervalBox::new(self.obs.clone()).expect("n >= 2")
    }

    /// Default search: every corner when at most 12 observations are proper
    /// intervals, otherwise the endpoint datasets plus random corners.
    pub fn default_strategy(&self, seed: u64) -> EnvelopeStrategy {
        EnvelopeStrategy::auto(self.nondegenerate(), seed)
    }
}

/// Runs `fit` on every point dataset selected by `strategy`, in parallel.
///
/// Results come back in point order; the first failing point (by index)
/// is reported, wrapped in [`Error::AtPoint`].
pub fn map_datasets<T, F>(d: &NeutroSample, strategy: EnvelopeStrategy, fit: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&ClassicalSample) -> Result<T> + Sync,
{
    let bx = d.as_box();
    let points = bx.points(strategy)?;
    let results: Vec<Result<T>> = (0..points.len())
        .into_par_iter()
        .map(|i| {
            let sample = ClassicalSample::from_trusted(points.point(i));
            fit(&sample).map_err(|e| Error::AtPoint {
                index: i,
                source: Box::new(e),
            })
        })
        .collect();
    results.into_iter().collect()
}

/// Interval-valued fit summary shared by every model.
///
/// `alpha_hat` and `beta_hat` hold the model's first and second parameter:
/// shape and scale for `nbs` and `ng`, log-scale location and spread for
/// `nln`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub alpha_hat: Interval,
    pub beta_hat: Interval,
    pub loglik: Interval,
    pub aic: Interval,
    pub bic: Interval,
    pub n: usize,
    pub model: ModelKind,
    /// Number of point datasets evaluated.
    #[serde(skip)]
    pub evaluated: usize,
}

impl FitReport {
    /// Range of per-dataset `(first, second, loglik)` triples.
    pub fn from_points(model: ModelKind, n: usize, points: &[(f64, f64, f64)], criteria: Criteria) -> Result<Self> {
        let mut a = Extremes::default();
        let mut b = Extremes::default();
        let mut l = Extremes::default();
        for &(x, y, ll) in points {
            a.push(x);
            b.push(y);
            l.push(ll);
        }
        let empty = || Error::Contract("no datasets evaluated".into());
        let loglik = l.finish().ok_or_else(empty)??;
        let (aic, bic) = information_criteria(loglik, n, criteria.k, criteria.k_bic);
        Ok(Self {
            alpha_hat: a.finish().ok_or_else(empty)??,
            beta_hat: b.finish().ok_or_else(empty)??,
            loglik,
            aic,
            bic,
            n,
            model,
            evaluated: points.len(),
        })
    }
}

/// Interval MLE: the range of classical MLEs over the evaluated datasets.
pub fn neutro_mle(d: &NeutroSample, strategy: EnvelopeStrategy, criteria: Criteria) -> Result<FitReport> {
    let fits = map_datasets(d, strategy, |sample| {
        let fit = mle(sample)?;
        Ok((fit.params.alpha(), fit.params.beta(), fit.loglik))
    })?;
    FitReport::from_points(ModelKind::Nbs, d.len(), &fits, criteria)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(v: &[f64]) -> ClassicalSample {
        ClassicalSample::new(v.to_vec()).unwrap()
    }

    #[test]
    fn means_of_small_samples() {
        let d = sample(&[1.0, 2.0]);
        let (s, r) = d.means();
        assert_eq!(s, 1.5);
        assert!((r - 4.0 / 3.0).abs() < 1e-15);
        let c = sample(&[3.5, 3.5, 3.5]);
        assert_eq!(c.means(), (3.5, 3.5));
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            ClassicalSample::new(vec![1.0]),
            Err(Error::InsufficientData { required: 2, got: 1 })
        ));
        assert!(matches!(ClassicalSample::new(vec![1.0, 0.0]), Err(Error::Domain(_))));
        assert!(matches!(ClassicalSample::new(vec![1.0, f64::NAN]), Err(Error::Domain(_))));
        let iv = |a, b| Interval::new(a, b).unwrap();
        assert!(NeutroSample::new(vec![iv(1.0, 2.0)]).is_err());
        assert!(NeutroSample::new(vec![iv(0.0, 2.0), iv(1.0, 1.0)]).is_err());
    }

    #[test]
    fn k_fn_values() {
        let d = sample(&[1.0, 2.0]);
        assert!((d.k_fn(0.0) - d.harmonic_mean()).abs() < 1e-15);
        // K(√2) = 2 / (1/(√2+1) + 1/(√2+2)) = 2√2
        let x = 2f64.sqrt();
        let direct = 2.0 / (1.0 / (x + 1.0) + 1.0 / (x + 2.0));
        assert!((d.k_fn(x) - direct).abs() < 1e-15);
        assert!((d.k_fn(x) - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        let e = sample(&[1.0, 2.0, 5.0]);
        let mut prev = e.k_fn(0.0);
        for i in 1..100 {
            let k = e.k_fn(i as f64 * 0.1);
            assert!(k > prev);
            prev = k;
        }
    }

    #[test]
    fn scale_equation_slope_matches_finite_difference() {
        let d = sample(&[0.7, 1.9, 2.4, 5.0, 3.3]);
        for beta in [1.0, 1.8, 2.5, 3.0] {
            let h = 1e-6;
            let fd = (scale_equation(&d, beta + h).0 - scale_equation(&d, beta - h).0) / (2.0 * h);
            let (_, dg) = scale_equation(&d, beta);
            assert!((dg - fd).abs() < 1e-6 * dg.abs().max(1.0));
        }
    }

    /// Bisection on the scale equation, independent of the Newton path.
    fn bisect_beta(d: &ClassicalSample) -> f64 {
        let (s, r) = d.means();
        let g = |b: f64| {
            let k = d.k_fn(b);
            b * b - b * (2.0 * r + k) + r * (s + k)
        };
        let (mut lo, mut hi) = (r, s);
        for _ in 0..200 {
            let m = 0.5 * (lo + hi);
            if g(m) > 0.0 {
                lo = m;
            } else {
                hi = m;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn two_point_sample() {
        let d = sample(&[1.0, 2.0]);
        let b = solve_beta(&d, BETA_TOL).unwrap();
        assert!((b - bisect_beta(&d)).abs() < 1e-9);
        assert!((b - 2f64.sqrt()).abs() < 1e-9);
        let fit = mle(&d).unwrap();
        let want = (1.5 / 2f64.sqrt() + 2f64.sqrt() / (4.0 / 3.0) - 2.0).sqrt();
        assert!((fit.params.alpha() - want).abs() < 1e-9);
        assert!((fit.params.alpha() - 0.348_310_699_749).abs() < 1e-9);
    }

    #[test]
    fn degenerate_samples_fail() {
        assert_eq!(solve_beta(&sample(&[2.0, 2.0]), BETA_TOL), Err(Error::DegenerateSample));
        assert_eq!(mle(&sample(&[4.0, 4.0, 4.0])).unwrap_err(), Error::DegenerateSample);
    }

    #[test]
    fn root_is_inside_means() {
        let d = sample(&[0.2, 0.9, 1.1, 7.5, 3.0, 3.0]);
        let b = solve_beta(&d, BETA_TOL).unwrap();
        let (s, r) = d.means();
        assert!(r < b && b < s);
        assert!((b - bisect_beta(&d)).abs() < 1e-9 * b);
    }

    #[test]
    fn information_criteria_values() {
        let ll = Interval::point(-457.270_528).unwrap();
        let (aic, bic) = information_criteria(ll, 101, 2, 4);
        assert!((aic.lo() - 918.541_056).abs() < 1e-9);
        assert!((bic.lo() - 933.001_538).abs() < 1e-6);
        let (aic, bic) = information_criteria(Interval::point(0.0).unwrap(), 1, 0, 0);
        assert_eq!((aic.lo(), aic.hi(), bic.lo(), bic.hi()), (0.0, 0.0, 0.0, 0.0));
        let (aic, _) = information_criteria(Interval::new(-3.0, -1.0).unwrap(), 10, 2, 2);
        assert_eq!((aic.lo(), aic.hi()), (6.0, 10.0));
    }

    #[test]
    fn neutro_mle_of_point_data_is_classical() {
        let obs = [1.2, 3.4, 2.2, 0.9, 1.7];
        let fit = mle(&sample(&obs)).unwrap();
        let rep = neutro_mle(
            &NeutroSample::from_classical(&obs).unwrap(),
            EnvelopeStrategy::Corners,
            Criteria::STANDARD,
        )
        .unwrap();
        assert!(rep.alpha_hat.is_degenerate() && rep.beta_hat.is_degenerate());
        assert_eq!(rep.alpha_hat.lo(), fit.params.alpha());
        assert_eq!(rep.beta_hat.lo(), fit.params.beta());
        assert_eq!(rep.loglik.lo(), fit.loglik);
        assert_eq!(rep.evaluated, 1);
    }

    #[test]
    fn neutro_mle_two_observations() {
        let iv = |a, b| Interval::new(a, b).unwrap();
        let d = NeutroSample::new(vec![iv(1.0, 1.1), iv(2.0, 2.0)]).unwrap();
        let rep = neutro_mle(&d, EnvelopeStrategy::Corners, Criteria::STANDARD).unwrap();
        let a = mle(&sample(&[1.0, 2.0])).unwrap();
        let b = mle(&sample(&[1.1, 2.0])).unwrap();
        let alphas = [a.params.alpha(), b.params.alpha()];
        let betas = [a.params.beta(), b.params.beta()];
        assert_eq!(rep.alpha_hat.lo(), alphas[0].min(alphas[1]));
        assert_eq!(rep.alpha_hat.hi(), alphas[0].max(alphas[1]));
        assert_eq!(rep.beta_hat.lo(), betas[0].min(betas[1]));
        assert_eq!(rep.beta_hat.hi(), betas[0].max(betas[1]));
    }

    #[test]
    fn failures_are_tagged_with_the_point() {
        let iv = |a, b| Interval::new(a, b).unwrap();
        // corner #0 is the all-lower dataset {2, 2}
        let d = NeutroSample::new(vec![iv(2.0, 3.0), iv(2.0, 2.0)]).unwrap();
        match neutro_mle(&d, EnvelopeStrategy::Corners, Criteria::STANDARD) {
            Err(Error::AtPoint { index: 0, source }) => assert_eq!(*source, Error::DegenerateSample),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn report_json_shape() {
        let obs = [1.2, 3.4, 2.2];
        let rep = neutro_mle(
            &NeutroSample::from_classical(&obs).unwrap(),
            EnvelopeStrategy::Corners,
            Criteria::STANDARD,
        )
        .unwrap();
        let v: serde_json::Value = serde_json::to_value(&rep).unwrap();
        let obj = v.as_object().unwrap();
        let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
        keys.sort();
        assert_eq!(keys, ["aic", "alpha_hat", "beta_hat", "bic", "loglik", "model", "n"]);
        assert_eq!(obj["model"], "nbs");
        assert_eq!(obj["alpha_hat"].as_array().unwrap().len(), 2);
    }
}
