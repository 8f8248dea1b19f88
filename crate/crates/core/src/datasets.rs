//! Bundled reference datasets.

use crate::dataset::Dataset;
use crate::estimation::{ClassicalSample, NeutroSample};

pub const ALUMINIUM_COUPONS: &str = include_str!("../data/aluminium_coupons.txt");
pub const NITROGEN_OXIDES: &str = include_str!("../data/nitrogen_oxides.txt");

/// Fatigue lives of 101 aluminium coupons (point data).
pub fn aluminium_coupons() -> ClassicalSample {
    let d = Dataset::parse(ALUMINIUM_COUPONS).expect("bundled file parses");
    ClassicalSample::new(d.intervals().iter().map(|iv| iv.lo()).collect()).expect("bundled file is valid")
}

/// Nitrogen oxides emissions, 29 years, five of them interval-valued.
pub fn nitrogen_oxides() -> NeutroSample {
    Dataset::parse(NITROGEN_OXIDES)
        .and_then(|d| d.to_sample())
        .expect("bundled file is valid")
}
