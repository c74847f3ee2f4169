//! Fixtures shared by the criterion benches.

use appell_core::numerics::parse_scalar;
use appell_core::series::{Params1, Params2, Point};
use appell_core::Scalar;

fn s(text: &str) -> Scalar {
    parse_scalar(text).expect("fixture literal parses")
}

/// Terminating first-form parameters with lattice size `(t1 + 1) x (t2 + 1)`.
pub fn params1(t1: i64, t2: i64, k1: u32, k2: u32) -> Params1 {
    Params1 {
        a1: s("7/3"),
        a2: s("5/4"),
        b1: s("2/5"),
        b2: s("9/7"),
        c: s("13/6"),
        t1: Scalar::new(t1 as f64, 0.0),
        t2: Scalar::new(t2 as f64, 0.0),
        k1,
        k2,
    }
}

pub fn params2(t: i64, k: u32) -> Params2 {
    Params2 {
        a1: s("7/3"),
        a2: s("5/4"),
        b1: s("2/5"),
        b2: s("9/7"),
        c: s("13/6"),
        t: Scalar::new(t as f64, 0.0),
        k,
    }
}

pub fn point() -> Point {
    Point::new(s("0.3"), s("0.2+0.1i"))
}
