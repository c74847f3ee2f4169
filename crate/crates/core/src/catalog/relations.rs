//! Contiguous and recursion relations in the notation parsed by `dsl`.
//!
//! `th`, `ph` are the Euler operators in x and y; `T1`, `T2`, `T` are the
//! scaled difference operators in t1, t2 and t.

pub(super) const CONTIGUOUS: &[&str] = &[
    "a1 F[a1+1] = (a1 + th) F",
    "(a1 + th - 1) F[a1-1] = (a1 - 1) F",
    "a2 F[a2+1] = (a2 + ph) F",
    "(a2 + ph - 1) F[a2-1] = (a2 - 1) F",
    "b1 F[b1+1] = (b1 + th) F",
    "(b1 + th - 1) F[b1-1] = (b1 - 1) F",
    "b2 F[b2+1] = (b2 + ph) F",
    "(b2 + ph - 1) F[b2-1] = (b2 - 1) F",
    "(c - 1) F[c-1] = (c + th + ph - 1) F",
    "(c + th + ph) F[c+1] = c F",
];

pub(super) const DIFFERENTIAL_RECURSIONS: &[&str] = &[
    "a1 (a1 - 1) F[a1+1] - (a1 + th) (a1 + th - 1) F[a1-1] = 0",
    "a1 (b1 - 1) F[a1+1] - (a1 + th) (b1 + th - 1) F[b1-1] = 0",
    "a1 (b2 - 1) F[a1+1] - (a1 + th) (b2 + ph - 1) F[b2-1] = 0",
    "a1 c F[a1+1] - (a1 + th) (c + th + ph) F[c+1] = 0",
    "a1 (b1 + th) F[a1+1] - b1 (a1 + th) F[b1+1] = 0",
    "a1 (b2 + ph) F[a1+1] - b2 (a1 + th) F[b2+1] = 0",
    "a1 (c + th + ph - 1) F[a1+1] - (c - 1) (a1 + th) F[c-1] = 0",
    "a1 (a2 + ph) F[a1+1] - a2 (a1 + th) F[a2+1] = 0",
    "a1 (a2 - 1) F[a1+1] - (a1 + th) (a2 + ph - 1) F[a2-1] = 0",
    "(a1 + th - 1) (a2 + ph) F[a1-1] - a2 (a1 - 1) F[a2+1] = 0",
    "(a2 - 1) (a1 + th - 1) F[a1-1] - (a1 - 1) (a2 + ph - 1) F[a2-1] = 0",
    "a2 (a2 - 1) F[a2+1] - (a2 + ph) (a2 + ph - 1) F[a2-1] = 0",
    "a2 (b1 - 1) F[a2+1] - (a2 + ph) (b1 + th - 1) F[b1-1] = 0",
    "a2 (b2 - 1) F[a2+1] - (a2 + ph) (b2 + ph - 1) F[b2-1] = 0",
    "a2 c F[a2+1] - (a2 + ph) (c + th + ph) F[c+1] = 0",
    "a2 (b1 + th) F[a2+1] - b1 (a2 + ph) F[b1+1] = 0",
    "a2 (b2 + ph) F[a2+1] - b2 (a2 + ph) F[b2+1] = 0",
    "a2 (c + th + ph - 1) F[a2+1] - (c - 1) (a2 + ph) F[c-1] = 0",
    "(a1 + th - 1) (b1 + th) F[a1-1] - b1 (a1 - 1) F[b1+1] = 0",
    "(a1 + th - 1) (b2 + ph) F[a1-1] - b2 (a1 - 1) F[b2+1] = 0",
    "(a1 + th - 1) (c + th + ph - 1) F[a1-1] - (c - 1) (a1 - 1) F[c-1] = 0",
    "(b1 - 1) (a1 + th - 1) F[a1-1] - (a1 - 1) (b1 + th - 1) F[b1-1] = 0",
    "(b2 - 1) (a1 + th - 1) F[a1-1] - (a1 - 1) (b2 + ph - 1) F[b2-1] = 0",
    "c (a1 + th - 1) F[a1-1] - (a1 - 1) (c + th + ph) F[c+1] = 0",
    "(a2 + ph - 1) (b1 + th) F[a2-1] - b1 (a2 - 1) F[b1+1] = 0",
    "(a2 + ph - 1) (b2 + ph) F[a2-1] - b2 (a2 - 1) F[b2+1] = 0",
    "(a2 + ph - 1) (c + th + ph - 1) F[a2-1] - (c - 1) (a2 - 1) F[c-1] = 0",
    "(b1 - 1) (a2 + ph - 1) F[a2-1] - (a2 - 1) (b1 + th - 1) F[b1-1] = 0",
    "(b2 - 1) (a2 + ph - 1) F[a2-1] - (a2 - 1) (b2 + ph - 1) F[b2-1] = 0",
    "c (a2 + ph - 1) F[a2-1] - (a2 - 1) (c + th + ph) F[c+1] = 0",
    "b1 (b1 - 1) F[b1+1] - (b1 + th) (b1 + th - 1) F[b1-1] = 0",
    "b1 (b2 + ph) F[b1+1] - b2 (b1 + th) F[b2+1] = 0",
    "b1 (b2 - 1) F[b1+1] - (b1 + th) (b2 + ph - 1) F[b2-1] = 0",
    "b1 (c + th + ph - 1) F[b1+1] - (c - 1) (b1 + th) F[c-1] = 0",
    "b1 c F[b1+1] - (c + th + ph) (b1 + th) F[c+1] = 0",
    "b2 (b1 - 1) F[b2+1] - (b2 + ph) (b1 + th - 1) F[b1-1] = 0",
    "b2 (b2 - 1) F[b2+1] - (b2 + ph) (b2 + ph - 1) F[b2-1] = 0",
    "b2 (c + th + ph - 1) F[b2+1] - (c - 1) (b2 + ph) F[c-1] = 0",
    "b2 c F[b2+1] - (c + th + ph) (b2 + ph) F[c+1] = 0",
    "(b2 - 1) (b1 + th - 1) F[b1-1] - (b1 - 1) (b2 + ph - 1) F[b2-1] = 0",
    "(b1 + th - 1) (c + th + ph - 1) F[b1-1] - (c - 1) (b1 - 1) F[c-1] = 0",
    "c (b1 + th - 1) F[b1-1] - (b1 - 1) (c + th + ph) F[c+1] = 0",
    "(b2 + ph - 1) (c + th + ph - 1) F[b2-1] - (c - 1) (b2 - 1) F[c-1] = 0",
    "c (b2 + ph - 1) F[b2-1] - (b2 - 1) (c + th + ph) F[c+1] = 0",
    "c (c - 1) F[c-1] - (c + th + ph - 1) (c + th + ph) F[c+1] = 0",
];

pub(super) const DIFFERENCE_RECURSIONS_1: &[&str] = &[
    "a1 (a1 - 1) F[a1+1] - (a1 + T1) (a1 + T1 - 1) F[a1-1] = 0",
    "a1 (b1 - 1) F[a1+1] - (a1 + T1) (b1 + T1 - 1) F[b1-1] = 0",
    "a1 (b2 - 1) F[a1+1] - (a1 + T1) (b2 + T2 - 1) F[b2-1] = 0",
    "a1 c F[a1+1] - (a1 + T1) (c + T1 + T2) F[c+1] = 0",
    "a1 (b1 + T1) F[a1+1] - b1 (a1 + T1) F[b1+1] = 0",
    "a1 (b2 + T2) F[a1+1] - b2 (a1 + T1) F[b2+1] = 0",
    "a1 (c + T1 + T2 - 1) F[a1+1] - (c - 1) (a1 + T1) F[c-1] = 0",
    "(a1 + T1 - 1) (b1 + T1) F[a1-1] - b1 (a1 - 1) F[b1+1] = 0",
    "(a1 + T1 - 1) (b2 + T2) F[a1-1] - b2 (a1 - 1) F[b2+1] = 0",
    "(a1 + T1 - 1) (c + T1 + T2 - 1) F[a1-1] - (c - 1) (a1 - 1) F[c-1] = 0",
    "(b1 - 1) (a1 + T1 - 1) F[a1-1] - (a1 - 1) (b1 + T1 - 1) F[b1-1] = 0",
    "(b2 - 1) (a1 + T1 - 1) F[a1-1] - (a1 - 1) (b2 + T2 - 1) F[b2-1] = 0",
    "c (a1 + T1 - 1) F[a1-1] - (a1 - 1) (c + T1 + T2) F[c+1] = 0",
    "a1 (a2 + T2) F[a1+1] - a2 (a1 + T1) F[a2+1] = 0",
    "a1 (a2 - 1) F[a1+1] - (a1 + T1) (a2 + T2 - 1) F[a2-1] = 0",
    "(a1 + T1 - 1) (a2 + T2) F[a1-1] - a2 (a1 - 1) F[a2+1] = 0",
    "(a2 - 1) (a1 + T1 - 1) F[a1-1] - (a1 - 1) (a2 + T2 - 1) F[a2-1] = 0",
    "a2 (a2 - 1) F[a2+1] - (a2 + T2) (a2 + T2 - 1) F[a2-1] = 0",
    "a2 (b1 - 1) F[a2+1] - (a2 + T2) (b1 + T1 - 1) F[b1-1] = 0",
    "a2 (b2 - 1) F[a2+1] - (a2 + T2) (b2 + T2 - 1) F[b2-1] = 0",
    "a2 c F[a2+1] - (a2 + T2) (c + T1 + T2) F[c+1] = 0",
    "a2 (b1 + T1) F[a2+1] - b1 (a2 + T2) F[b1+1] = 0",
    "a2 (b2 + T2) F[a2+1] - b2 (a2 + T2) F[b2+1] = 0",
    "a2 (c + T1 + T2 - 1) F[a2+1] - (c - 1) (a2 + T2) F[c-1] = 0",
    "(a2 + T2 - 1) (b1 + T1) F[a2-1] - b1 (a2 - 1) F[b1+1] = 0",
    "(a2 + T2 - 1) (b2 + T2) F[a2-1] - b2 (a2 - 1) F[b2+1] = 0",
    "(a2 + T2 - 1) (c + T1 + T2 - 1) F[a2-1] - (c - 1) (a2 - 1) F[c-1] = 0",
    "(b1 - 1) (a2 + T2 - 1) F[a2-1] - (a2 - 1) (b1 + T1 - 1) F[b1-1] = 0",
    "(b2 - 1) (a2 + T2 - 1) F[a2-1] - (a2 - 1) (b2 + T2 - 1) F[b2-1] = 0",
    "c (a2 + T2 - 1) F[a2-1] - (a2 - 1) (c + T1 + T2) F[c+1] = 0",
    "b1 (b1 - 1) F[b1+1] - (b1 + T1) (b1 + T1 - 1) F[b1-1] = 0",
    "b1 (b2 + T2) F[b1+1] - b2 (b1 + T1) F[b2+1] = 0",
    "b1 (b2 - 1) F[b1+1] - (b1 + T1) (b2 + T2 - 1) F[b2-1] = 0",
    "b1 (c + T1 + T2 - 1) F[b1+1] - (c - 1) (b1 + T1) F[c-1] = 0",
    "b1 c F[b1+1] - (c + T1 + T2) (b1 + T1) F[c+1] = 0",
    "b2 (b1 - 1) F[b2+1] - (b2 + T2) (b1 + T1 - 1) F[b1-1] = 0",
    "b2 (b2 - 1) F[b2+1] - (b2 + T2) (b2 + T2 - 1) F[b2-1] = 0",
    "b2 (c + T1 + T2 - 1) F[b2+1] - (c - 1) (b2 + T2) F[c-1] = 0",
    "b2 c F[b2+1] - (c + T1 + T2) (b2 + T2) F[c+1] = 0",
    "(b2 - 1) (b1 + T1 - 1) F[b1-1] - (b1 - 1) (b2 + T2 - 1) F[b2-1] = 0",
    "(b1 + T1 - 1) (c + T1 + T2 - 1) F[b1-1] - (c - 1) (b1 - 1) F[c-1] = 0",
    "c (b1 + T1 - 1) F[b1-1] - (b1 - 1) (c + T1 + T2) F[c+1] = 0",
    "(b2 + T2 - 1) (c + T1 + T2 - 1) F[b2-1] - (c - 1) (b2 - 1) F[c-1] = 0",
    "c (b2 + T2 - 1) F[b2-1] - (b2 - 1) (c + T1 + T2) F[c+1] = 0",
    "c (c - 1) F[c-1] - (c + T1 + T2 - 1) (c + T1 + T2) F[c+1] = 0",
];

/// Entry 17 of the first difference-recursion list as printed.
pub(super) const QR1_PRINTED_17: &str = "a2 (a1 + T1 - 1) F[a1-1] - (a1 - 1) (a2 + T2 - 1) F[a2-1] = 0";

pub(super) const DIFFERENCE_RECURSIONS_2: &[&str] = &[
    "a1 c F[a1+1] - (a1 + th) (c + T) F[c+1] = 0",
    "a1 (c + T - 1) F[a1+1] - (c - 1) (a1 + th) F[c-1] = 0",
    "(a1 + th - 1) (c + T - 1) F[a1-1] - (c - 1) (a1 - 1) F[c-1] = 0",
    "c (a1 + th - 1) F[a1-1] - (a1 - 1) (c + T) F[c+1] = 0",
    "a2 c F[a2+1] - (a2 + ph) (c + T) F[c+1] = 0",
    "a2 (c + T - 1) F[a2+1] - (c - 1) (a2 + ph) F[c-1] = 0",
    "(a2 + ph - 1) (c + T - 1) F[a2-1] - (c - 1) (a2 - 1) F[c-1] = 0",
    "c (a2 + ph - 1) F[a2-1] - (a2 - 1) (c + T) F[c+1] = 0",
    "b1 (c + T - 1) F[b1+1] - (c - 1) (b1 + th) F[c-1] = 0",
    "b1 c F[b1+1] - (c + T) (b1 + th) F[c+1] = 0",
    "b2 (c + T - 1) F[b2+1] - (c - 1) (b2 + ph) F[c-1] = 0",
    "b2 c F[b2+1] - (c + T) (b2 + ph) F[c+1] = 0",
    "(b1 + th - 1) (c + T - 1) F[b1-1] - (c - 1) (b1 - 1) F[c-1] = 0",
    "c (b1 + th - 1) F[b1-1] - (b1 - 1) (c + T) F[c+1] = 0",
    "(b2 + ph - 1) (c + T - 1) F[b2-1] - (c - 1) (b2 - 1) F[c-1] = 0",
    "c (b2 + ph - 1) F[b2-1] - (b2 - 1) (c + T) F[c+1] = 0",
    "c (c - 1) F[c-1] - (c + T - 1) (c + T) F[c+1] = 0",
];
