//! Closed real intervals and min/max envelopes over boxes of intervals.
//!
//! An [`Interval`] carries every neutrosophic quantity in this crate:
//! observations, parameters and reported statistics. A degenerate interval
//! (`lo == hi`) is an ordinary real number.
//!
//! Envelopes are inner approximations: the function is evaluated on a
//! finite point set chosen by an [`EnvelopeStrategy`] and the smallest and
//! largest values seen are reported. Both endpoints are attained values.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rng::RandomStream;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    /// Builds `[lo, hi]`; rejects reversed or non-finite endpoints.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        check_finite(lo)?;
        check_finite(hi)?;
        if lo > hi {
            return Err(Error::Domain(format!("interval endpoints reversed: [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    /// Builds the interval spanned by `a` and `b` in either order.
    pub fn ordered(a: f64, b: f64) -> Result<Self> {
        Self::new(a.min(b), a.max(b))
    }

    pub fn point(v: f64) -> Result<Self> {
        Self::new(v, v)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        self.lo + 0.5 * (self.hi - self.lo)
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Applies an affine map `a + b·x` endpointwise and reorders.
    pub fn affine(&self, a: f64, b: f64) -> Result<Interval> {
        Interval::ordered(a + b * self.lo, a + b * self.hi)
    }

    /// Smallest interval containing every value; `None` when empty.
    pub fn spanning<I: IntoIterator<Item = f64>>(values: I) -> Option<Result<Interval>> {
        let mut acc = Extremes::default();
        for v in values {
            acc.push(v);
        }
        acc.finish()
    }
}

fn check_finite(v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::Range(format!("non-finite value {v}")))
    }
}

/// Running min/max accumulator.
#[derive(Debug, Clone, Copy)]
pub struct Extremes {
    lo: f64,
    hi: f64,
    count: usize,
}

impl Default for Extremes {
    fn default() -> Self {
        Self {
            lo: f64::INFINITY,
            hi: f64::NEG_INFINITY,
            count: 0,
        }
    }
}

impl Extremes {
    pub fn push(&mut self, v: f64) {
        self.lo = self.lo.min(v);
        self.hi = self.hi.max(v);
        self.count += 1;
    }

    pub fn merge(mut self, other: Extremes) -> Extremes {
        self.lo = self.lo.min(other.lo);
        self.hi = self.hi.max(other.hi);
        self.count += other.count;
        self
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn finish(self) -> Option<Result<Interval>> {
        (self.count > 0).then(|| Interval::new(self.lo, self.hi))
    }
}

/// Canonical form `[lo, hi]`. The alternate flag (`{:#}`) prints a
/// degenerate interval as a bare number; a precision applies to both
/// endpoints.
impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one = |f: &mut fmt::Formatter<'_>, v: f64| match f.precision() {
            Some(p) => write!(f, "{v:.p$}"),
            None => write!(f, "{v}"),
        };
        if f.alternate() && self.is_degenerate() {
            return one(f, self.lo);
        }
        f.write_str("[")?;
        one(f, self.lo)?;
        f.write_str(", ")?;
        one(f, self.hi)?;
        f.write_str("]")
    }
}

/// Shortest round-trip text for a real, switching to exponent notation
/// below `1e-4` and from `1e15` in magnitude. Used for CSV output.
pub fn format_real(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

/// Parses `"v"`, `"a, b"` or `"[a, b]"` (whitespace tolerant). A reversed
/// pair is normalized rather than rejected.
pub fn parse_interval(text: &str) -> Result<Interval> {
    let trimmed = text.trim();
    let inner = match (trimmed.strip_prefix('['), trimmed.ends_with(']')) {
        (Some(rest), true) => &rest[..rest.len() - 1],
        (None, false) => trimmed,
        _ => {
            return Err(Error::Parse {
                token: trimmed.to_string(),
                reason: "unbalanced brackets".into(),
            })
        }
    };
    let tokens: Vec<&str> = inner.split(',').map(str::trim).collect();
    let values = tokens
        .iter()
        .map(|tok| parse_real(tok))
        .collect::<Result<Vec<f64>>>()?;
    match values.as_slice() {
        [v] => Interval::point(*v),
        [a, b] => Interval::ordered(*a, *b),
        _ => Err(Error::Parse {
            token: trimmed.to_string(),
            reason: format!("expected one or two numbers, found {}", tokens.len()),
        }),
    }
}

fn parse_real(token: &str) -> Result<f64> {
    if token.is_empty() {
        return Err(Error::Parse {
            token: token.to_string(),
            reason: "empty number".into(),
        });
    }
    let v: f64 = token.parse().map_err(|_| Error::Parse {
        token: token.to_string(),
        reason: "not a decimal number".into(),
    })?;
    check_finite(v)?;
    Ok(v)
}

impl FromStr for Interval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_interval(s)
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        [self.lo, self.hi].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let [lo, hi] = <[f64; 2]>::deserialize(deserializer)?;
        Interval::new(lo, hi).map_err(serde::de::Error::custom)
    }
}

/// Cartesian product of intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalBox {
    dims: Vec<Interval>,
}

impl IntervalBox {
    pub fn new(dims: Vec<Interval>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Domain("a box needs at least one dimension".into()));
        }
        Ok(Self { dims })
    }

    pub fn dims(&self) -> &[Interval] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Number of dimensions with nonzero width.
    pub fn active_dims(&self) -> usize {
        self.dims.iter().filter(|d| !d.is_degenerate()).count()
    }

    pub fn lower(&self) -> Vec<f64> {
        self.dims.iter().map(Interval::lo).collect()
    }

    pub fn upper(&self) -> Vec<f64> {
        self.dims.iter().map(Interval::hi).collect()
    }

    /// The finite point set an envelope evaluates under `strategy`.
    pub fn points(&self, strategy: EnvelopeStrategy) -> Result<PointSet<'_>> {
        PointSet::new(self, strategy)
    }
}

/// Nondegenerate-dimension count up to which full corner enumeration is the
/// default.
pub const DEFAULT_MAX_CORNER_DIMS: usize = 12;

/// Random vertices added by the default strategy above that threshold.
pub const DEFAULT_RANDOM_SAMPLES: usize = 4096;

/// Hard cap on the size of any evaluated point set.
pub const MAX_POINTS: usize = 1 << 24;

/// How an envelope chooses the points it evaluates.
///
/// Degenerate dimensions always contribute their single value, so corner
/// counts are `2^k` for `k` nondegenerate dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvelopeStrategy {
    /// Every vertex of the box.
    Corners,
    /// The all-lower and all-upper vertices only.
    Endpoints,
    /// `k` equally spaced values per nondegenerate dimension, endpoints included.
    Grid(usize),
    /// All vertices when there are at most [`DEFAULT_MAX_CORNER_DIMS`]
    /// nondegenerate dimensions, otherwise the two endpoint vertices; plus
    /// `samples` vertices drawn at random from `seed`.
    CornersPlusRandom { samples: usize, seed: u64 },
}

impl EnvelopeStrategy {
    /// Corners for small boxes, corners-plus-random above the threshold.
    pub fn auto(active_dims: usize, seed: u64) -> Self {
        if active_dims <= DEFAULT_MAX_CORNER_DIMS {
            EnvelopeStrategy::Corners
        } else {
            EnvelopeStrategy::CornersPlusRandom {
                samples: DEFAULT_RANDOM_SAMPLES,
                seed,
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Layout {
    Corners,
    Endpoints,
    Grid(usize),
    Mixed { fixed: usize, all_corners: bool, seed: u64 },
}

/// An indexable, finite set of points inside an [`IntervalBox`].
///
/// Point `i` is a pure function of `i`, so the set can be evaluated in any
/// order or in parallel.
#[derive(Debug, Clone)]
pub struct PointSet<'a> {
    bx: &'a IntervalBox,
    active: Vec<usize>,
    layout: Layout,
    len: usize,
}

impl<'a> PointSet<'a> {
    fn new(bx: &'a IntervalBox, strategy: EnvelopeStrategy) -> Result<Self> {
        let active: Vec<usize> = (0..bx.len()).filter(|&i| !bx.dims[i].is_degenerate()).collect();
        let k = active.len();
        let corner_count = |k: usize| -> Result<usize> {
            if k >= usize::BITS as usize || (1usize << k) > MAX_POINTS {
                Err(Error::Config(format!(
                    "{k} nondegenerate dimensions give too many corners; use a sampling strategy"
                )))
            } else {
                Ok(1usize << k)
            }
        };
        let endpoint_count = if k == 0 { 1 } else { 2 };
        let (layout, len) = match strategy {
            EnvelopeStrategy::Corners => (Layout::Corners, corner_count(k)?),
            EnvelopeStrategy::Endpoints => (Layout::Endpoints, endpoint_count),
            EnvelopeStrategy::Grid(per_dim) => {
                if per_dim < 2 {
                    return Err(Error::Config("grid needs at least 2 points per dimension".into()));
                }
                let mut len = 1usize;
                for _ in 0..k {
                    len = len
                        .checked_mul(per_dim)
                        .filter(|&l| l <= MAX_POINTS)
                        .ok_or_else(|| Error::Config(format!("grid of {per_dim}^{k} points is too large")))?;
                }
                (Layout::Grid(per_dim), len)
            }
            EnvelopeStrategy::CornersPlusRandom { samples, seed } => {
                let all_corners = k <= DEFAULT_MAX_CORNER_DIMS;
                let fixed = if all_corners { corner_count(k)? } else { endpoint_count };
                let samples = if k == 0 { 0 } else { samples };
                let len = fixed
                    .checked_add(samples)
                    .filter(|&l| l <= MAX_POINTS)
                    .ok_or_else(|| Error::Config(format!("{samples} random samples is too many")))?;
                (Layout::Mixed { fixed, all_corners, seed }, len)
            }
        };
        Ok(Self { bx, active, layout, len })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn dims(&self) -> usize {
        self.bx.len()
    }

    /// Writes point `index` into `out` (resized to the box dimension).
    pub fn point_into(&self, index: usize, out: &mut Vec<f64>) {
        assert!(index < self.len, "point index {index} out of range {}", self.len);
        out.clear();
        out.extend(self.bx.dims.iter().map(Interval::lo));
        match self.layout {
            Layout::Corners => self.corner(index, out),
            Layout::Endpoints => self.endpoint(index, out),
            Layout::Grid(per_dim) => {
                let mut rest = index;
                for &d in &self.active {
                    let j = rest % per_dim;
                    rest /= per_dim;
                    let iv = self.bx.dims[d];
                    out[d] = if j == per_dim - 1 {
                        iv.hi
                    } else {
                        iv.lo + iv.width() * (j as f64) / ((per_dim - 1) as f64)
                    };
                }
            }
            Layout::Mixed { fixed, all_corners, seed } => {
                if index < fixed {
                    if all_corners {
                        self.corner(index, out)
                    } else {
                        self.endpoint(index, out)
                    }
                } else {
                    let mut rng = RandomStream::derive(seed, index as u64);
                    for &d in &self.active {
                        if rng.coin() {
                            out[d] = self.bx.dims[d].hi;
                        }
                    }
                }
            }
        }
    }

    pub fn point(&self, index: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dims());
        self.point_into(index, &mut out);
        out
    }

    fn corner(&self, index: usize, out: &mut [f64]) {
        for (bit, &d) in self.active.iter().enumerate() {
            if (index >> bit) & 1 == 1 {
                out[d] = self.bx.dims[d].hi;
            }
        }
    }

    fn endpoint(&self, index: usize, out: &mut [f64]) {
        if index == 1 {
            for &d in &self.active {
                out[d] = self.bx.dims[d].hi;
            }
        }
    }
}

/// `[min, max]` of `f` over the points selected by `strategy`.
pub fn envelope<F>(mut f: F, bx: &IntervalBox, strategy: EnvelopeStrategy) -> Result<Interval>
where
    F: FnMut(&[f64]) -> f64,
{
    let points = bx.points(strategy)?;
    let mut acc = Extremes::default();
    let mut buf = Vec::with_capacity(bx.len());
    for i in 0..points.len() {
        points.point_into(i, &mut buf);
        let v = f(&buf);
        if !v.is_finite() {
            return Err(Error::Evaluation { point: buf });
        }
        acc.push(v);
    }
    acc.finish().expect("point sets are never empty")
}
