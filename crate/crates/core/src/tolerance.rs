//! Equality tolerance for comparing entries of visit vectors and set
//! PageRanks: relative 1e-9 with an absolute floor of 1e-12.

use std::cmp::Ordering;

pub const REL: f64 = 1e-9;
pub const ABS: f64 = 1e-12;

/// Width of the equality band around `a` and `b`.
pub fn band(a: f64, b: f64) -> f64 {
    (REL * a.abs().max(b.abs())).max(ABS)
}

pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= band(a, b)
}

/// `a > b` by more than the tolerance band.
pub fn strictly_greater(a: f64, b: f64) -> bool {
    a - b > band(a, b)
}

/// Three-way comparison that treats values inside the band as equal.
pub fn compare(a: f64, b: f64) -> Ordering {
    if approx_eq(a, b) {
        Ordering::Equal
    } else if a > b {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}
