//! Birnbaum-Saunders fatigue-life modelling with interval-valued
//! (neutrosophic) parameters and observations.
//!
//! ```
//! use nbsd::{mle, ClassicalSample};
//!
//! let d = ClassicalSample::new(vec![1.0, 2.0]).unwrap();
//! let fit = mle(&d).unwrap();
//! assert!((fit.params.beta() - 2f64.sqrt()).abs() < 1e-9);
//! ```

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod competitors;
pub mod dataset;
pub mod datasets;
pub mod dist;
pub mod error;
pub mod estimation;
pub mod gof;
pub mod interval;
pub mod models;
pub mod rng;
pub mod sim;
pub mod special;

pub use competitors::{fit_competitor, gamma_mle, lognormal_mle, GammaParams, LnParams};
pub use dataset::Dataset;
pub use dist::{curve_bands, time_grid, BsParams, CurveRow, NbsParams, SummaryStats};
pub use error::{Error, ErrorCategory, Result};
pub use estimation::{
    information_criteria, mle, neutro_mle, solve_beta, BsFit, ClassicalSample, Criteria, FitReport, NeutroSample,
};
pub use gof::{cb_transform, ks_star, mc_pvalue, neutro_gof, GofResult};
pub use interval::{envelope, parse_interval, EnvelopeStrategy, Interval, IntervalBox};
pub use models::{fit_neutro, FittedModel, ModelKind};
pub use rng::RandomStream;
pub use sim::{make_neutro_dataset, run_simulation, SimConfig, SimSummary};
