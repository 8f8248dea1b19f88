//! The Birnbaum-Saunders distribution, pointwise and over parameter boxes.
//!
//! `T = β (αZ/2 + √((αZ/2)² + 1))²` with `Z ~ N(0, 1)`, so
//! `F(t) = Φ((√(t/β) − √(β/t)) / α)`.
//!
//! [`BsParams`] evaluates the classical distribution. [`NbsParams`] carries
//! interval-valued shape and scale and returns envelopes: the `[min, max]`
//! of a quantity as the parameters range over their box.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{envelope, EnvelopeStrategy, Extremes, Interval, IntervalBox};
use crate::rng::RandomStream;
use crate::special::{std_normal_cdf, std_normal_quantile, LN_SQRT_2PI};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BsParams {
    alpha: f64,
    beta: f64,
}

impl BsParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::Domain(format!("shape must be finite and > 0, got {alpha}")));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::Domain(format!("scale must be finite and > 0, got {beta}")));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `(√(t/β) − √(β/t)) / α`, the standard-normal score of `t`.
    pub(crate) fn score(&self, t: f64) -> f64 {
        let r = (t / self.beta).sqrt();
        (r - 1.0 / r) / self.alpha
    }

    pub fn pdf(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.ln_pdf_unchecked(t).exp())
    }

    /// Log-density including all constants.
    pub fn ln_pdf(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.ln_pdf_unchecked(t))
    }

    pub(crate) fn ln_pdf_unchecked(&self, t: f64) -> f64 {
        // exponent written as −z²/2 rather than −(t/β + β/t − 2)/(2α²)
        let z = self.score(t);
        -LN_SQRT_2PI - 0.5 * z * z + (t + self.beta).ln()
            - 1.5 * t.ln()
            - (2.0 * self.alpha).ln()
            - 0.5 * self.beta.ln()
    }

    pub fn cdf(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(std_normal_cdf(self.score(t)))
    }

    pub(crate) fn cdf_unchecked(&self, t: f64) -> f64 {
        std_normal_cdf(self.score(t))
    }

    /// `1 − F(t)`, evaluated as `Φ(−z)` so the upper tail keeps precision.
    pub fn survival(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(std_normal_cdf(-self.score(t)))
    }

    /// `f(t) / (1 − F(t))`. Fails with [`Error::Overflow`] once the survival
    /// probability underflows to zero.
    pub fn hazard(&self, t: f64) -> Result<f64> {
        let s = self.survival(t)?;
        let f = self.pdf(t)?;
        if s == 0.0 {
            return Err(Error::Overflow { t });
        }
        let h = f / s;
        if h.is_finite() {
            Ok(h)
        } else {
            Err(Error::Overflow { t })
        }
    }

    pub fn quantile(&self, q: f64) -> Result<f64> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Domain(format!("quantile level must lie in (0, 1), got {q}")));
        }
        Ok(self.transform(std_normal_quantile(q)?))
    }

    /// Maps a standard-normal variate to `T`.
    pub fn transform(&self, z: f64) -> f64 {
        let w = 0.5 * self.alpha * z;
        let root = (w * w + 1.0).sqrt();
        // w + √(w²+1) cancels for large negative w
        let core = if w >= 0.0 { w + root } else { 1.0 / (root - w) };
        self.beta * core * core
    }

    pub fn draw(&self, rng: &mut RandomStream) -> f64 {
        self.transform(rng.standard_normal())
    }

    pub fn sample(&self, n: usize, rng: &mut RandomStream) -> Vec<f64> {
        (0..n).map(|_| self.draw(rng)).collect()
    }

    /// `E(T^r)` from the double binomial sum over moments of `Z`.
    pub fn raw_moment(&self, r: u32) -> Result<f64> {
        if r < 1 {
            return Err(Error::Domain("moment order must be at least 1".into()));
        }
        let half_alpha_sq = 0.25 * self.alpha * self.alpha;
        let mut total = 0.0;
        for j in 0..=r {
            let outer = binomial(2 * r, 2 * j);
            for i in 0..=j {
                let m = r - j + i;
                total += outer * binomial(j, i) * odd_double_factorial(m) * half_alpha_sq.powi(m as i32);
            }
        }
        Ok(self.beta.powi(r as i32) * total)
    }

    pub fn summary(&self) -> SummaryStats<f64> {
        let a2 = self.alpha * self.alpha;
        let b = self.beta;
        let k = 5.0 * a2 + 4.0;
        SummaryStats {
            mean: b * (1.0 + 0.5 * a2),
            variance: a2 * b * b * (1.0 + 1.25 * a2),
            cv: (5.0 * a2 * a2 + 4.0 * a2).sqrt() / (a2 + 2.0),
            skewness: 4.0 * self.alpha * (11.0 * a2 + 6.0) / k.powf(1.5),
            kurtosis: 3.0 + 6.0 * a2 * (93.0 * a2 + 40.0) / (k * k),
        }
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("lifetime must be finite and > 0, got {t}")))
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// `(2m − 1)!! = (2m)! / (2^m m!)`, the `2m`-th moment of a standard normal.
fn odd_double_factorial(m: u32) -> f64 {
    (1..=m).fold(1.0, |acc, i| acc * f64::from(2 * i - 1))
}

/// Mean, variance, coefficient of variation, skewness and kurtosis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats<T> {
    pub mean: T,
    pub variance: T,
    pub cv: T,
    pub skewness: T,
    pub kurtosis: T,
}

/// Interval-valued shape and scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NbsParams {
    alpha_n: Interval,
    beta_n: Interval,
}

impl NbsParams {
    pub fn new(alpha_n: Interval, beta_n: Interval) -> Result<Self> {
        if alpha_n.lo() <= 0.0 {
            return Err(Error::Domain(format!("shape interval must be positive, got {alpha_n}")));
        }
        if beta_n.lo() <= 0.0 {
            return Err(Error::Domain(format!("scale interval must be positive, got {beta_n}")));
        }
        Ok(Self { alpha_n, beta_n })
    }

    pub fn from_bounds(alpha: (f64, f64), beta: (f64, f64)) -> Result<Self> {
        Self::new(Interval::ordered(alpha.0, alpha.1)?, Interval::ordered(beta.0, beta.1)?)
    }

    pub fn classical(p: BsParams) -> Self {
        Self {
            alpha_n: Interval::point(p.alpha).expect("finite"),
            beta_n: Interval::point(p.beta).expect("finite"),
        }
    }

    pub fn alpha_n(&self) -> Interval {
        self.alpha_n
    }

    pub fn beta_n(&self) -> Interval {
        self.beta_n
    }

    pub fn is_degenerate(&self) -> bool {
        self.alpha_n.is_degenerate() && self.beta_n.is_degenerate()
    }

    /// The box `α_N × β_N × t`.
    fn with_time(&self, t: Interval) -> IntervalBox {
        IntervalBox::new(vec![self.alpha_n, self.beta_n, t]).expect("nonempty")
    }

    fn param_box(&self) -> IntervalBox {
        IntervalBox::new(vec![self.alpha_n, self.beta_n]).expect("nonempty")
    }

    fn at(point: &[f64]) -> BsParams {
        BsParams {
            alpha: point[0],
            beta: point[1],
        }
    }

    /// Envelope of `1 − F(t)` over the parameter box (and `t` when it is a
    /// proper interval). Survival is monotone in each coordinate for fixed
    /// others, so corners give the exact range.
    pub fn survival(&self, t: Interval) -> Result<Interval> {
        check_time(t.lo())?;
        envelope(
            |x| std_normal_cdf(-Self::at(x).score(x[2])),
            &self.with_time(t),
            EnvelopeStrategy::Corners,
        )
    }

    pub fn survival_at(&self, t: f64) -> Result<Interval> {
        self.survival(Interval::point(t)?)
    }

    /// Envelope of `F(t)`; exact under corners for the same reason as
    /// [`NbsParams::survival`].
    pub fn cdf(&self, t: Interval) -> Result<Interval> {
        check_time(t.lo())?;
        envelope(
            |x| Self::at(x).cdf_unchecked(x[2]),
            &self.with_time(t),
            EnvelopeStrategy::Corners,
        )
    }

    pub fn cdf_at(&self, t: f64) -> Result<Interval> {
        self.cdf(Interval::point(t)?)
    }

    /// Envelope of the density at `t`.
    ///
    /// For fixed `β` the density is unimodal in `α` with its peak at
    /// `α* = |√(t/β) − √(β/t)|`, so the `α` direction is handled exactly;
    /// `beta_strategy` picks the scale values visited.
    pub fn pdf(&self, t: f64, beta_strategy: EnvelopeStrategy) -> Result<Interval> {
        check_time(t)?;
        let beta_box = IntervalBox::new(vec![self.beta_n])?;
        let points = beta_box.points(beta_strategy)?;
        let mut acc = Extremes::default();
        for i in 0..points.len() {
            let beta = points.point(i)[0];
            let mut alphas = vec![self.alpha_n.lo(), self.alpha_n.hi()];
            let r = (t / beta).sqrt();
            let peak = (r - 1.0 / r).abs();
            if self.alpha_n.contains(peak) && peak > 0.0 {
                alphas.push(peak);
            }
            for alpha in alphas {
                let v = BsParams { alpha, beta }.ln_pdf_unchecked(t).exp();
                if !v.is_finite() {
                    return Err(Error::Evaluation { point: vec![alpha, beta, t] });
                }
                acc.push(v);
            }
        }
        acc.finish().expect("nonempty")
    }

    /// Envelope of the hazard at `t` over the corners of the parameter box.
    pub fn hazard(&self, t: f64) -> Result<Interval> {
        self.hazard_with(t, EnvelopeStrategy::Corners)
    }

    /// Hazard envelope under an explicit strategy. The hazard need not be
    /// monotone in the parameters, so a grid is the safer choice for bands.
    pub fn hazard_with(&self, t: f64, strategy: EnvelopeStrategy) -> Result<Interval> {
        check_time(t)?;
        let bx = self.param_box();
        let points = bx.points(strategy)?;
        let mut acc = Extremes::default();
        for i in 0..points.len() {
            let h = Self::at(&points.point(i)).hazard(t)?;
            acc.push(h);
        }
        acc.finish().expect("nonempty")
    }

    /// Envelope of `E(T^r)`; every term of the moment sum increases in both
    /// parameters, so corners are exact.
    pub fn raw_moment(&self, r: u32) -> Result<Interval> {
        if r < 1 {
            return Err(Error::Domain("moment order must be at least 1".into()));
        }
        envelope(
            |x| Self::at(x).raw_moment(r).expect("r >= 1"),
            &self.param_box(),
            EnvelopeStrategy::Corners,
        )
    }

    /// Envelope of each summary statistic. Mean and variance increase in
    /// both parameters; CV, skewness and kurtosis increase in the shape and
    /// do not depend on the scale.
    pub fn summary_stats(&self) -> SummaryStats<Interval> {
        let bx = self.param_box();
        let band = |f: fn(&SummaryStats<f64>) -> f64| {
            envelope(|x| f(&Self::at(x).summary()), &bx, EnvelopeStrategy::Corners)
                .expect("finite for positive parameters")
        };
        SummaryStats {
            mean: band(|s| s.mean),
            variance: band(|s| s.variance),
            cv: band(|s| s.cv),
            skewness: band(|s| s.skewness),
            kurtosis: band(|s| s.kurtosis),
        }
    }
}

/// One row of a band table: density, distribution and hazard envelopes at `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub t: f64,
    pub pdf: Interval,
    pub cdf: Interval,
    pub hazard: Interval,
}

/// `points` equally spaced times from `t_min` to `t_max` inclusive.
pub fn time_grid(t_min: f64, t_max: f64, points: usize) -> Result<Vec<f64>> {
    if !(t_min.is_finite() && t_max.is_finite() && t_min > 0.0 && t_max >= t_min) {
        return Err(Error::Domain(format!("invalid time range [{t_min}, {t_max}]")));
    }
    if points == 0 {
        return Err(Error::Domain("time grid needs at least one point".into()));
    }
    if points == 1 {
        return Ok(vec![t_min]);
    }
    let step = (t_max - t_min) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| if i == points - 1 { t_max } else { t_min + step * i as f64 })
        .collect())
}

/// Per-dimension grid size used for density and hazard bands.
pub const CURVE_GRID: usize = 33;

/// Band table behind density, distribution and hazard plots.
pub fn curve_bands(params: &NbsParams, times: &[f64]) -> Result<Vec<CurveRow>> {
    times
        .iter()
        .map(|&t| {
            Ok(CurveRow {
                t,
                pdf: params.pdf(t, EnvelopeStrategy::Grid(CURVE_GRID))?,
                cdf: params.cdf_at(t)?,
                hazard: params.hazard_with(t, EnvelopeStrategy::Grid(CURVE_GRID))?,
            })
        })
        .collect()
}
