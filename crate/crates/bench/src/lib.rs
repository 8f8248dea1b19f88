//! Shared inputs for the benchmarks.

use nbsd::{make_neutro_dataset, BsParams, Interval, IntervalBox, NeutroSample, RandomStream};

/// Synthetic interval sample with `n` observations of half-width up to `eps`.
pub fn synthetic(n: usize, eps: f64, seed: u64) -> NeutroSample {
    let p = BsParams::new(0.5, 1.5).expect("valid parameters");
    make_neutro_dataset(&p, n, eps, &mut RandomStream::new(seed))
        .expect("small eps never exhausts redraws")
        .0
}

/// Box of `dims` unit-width intervals.
pub fn unit_box(dims: usize) -> IntervalBox {
    let dims = (0..dims)
        .map(|i| Interval::new(i as f64, i as f64 + 1.0).expect("ordered"))
        .collect();
    IntervalBox::new(dims).expect("nonempty")
}
