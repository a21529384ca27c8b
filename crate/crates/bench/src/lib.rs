//! Inputs shared by the criterion benches.

use localp2::rep::{direct_sum, point_module, pushforward_module};
use localp2::scalar::{rat, ratio};
use localp2::Representation;

/// `i_*O(d)` in heart 0.
pub fn pushforward(d: i64) -> Representation {
    pushforward_module(d, 0).expect("heart 0 is in range")
}

/// A direct sum of `k` distinct points off the zero section.
pub fn points(k: i64) -> Representation {
    let mut acc = point_module([rat(1), rat(1), rat(0)], ratio(1, 2), 0).expect("nonzero point");
    for i in 1..k {
        let p = point_module([rat(1), rat(i + 1), rat(i * i)], ratio(i, 3), 0).expect("nonzero point");
        acc = direct_sum(&acc, &p).expect("same heart");
    }
    acc
}
