//! Shared workloads for the criterion benchmarks.

use ctpower::{fixtures, LaurentPolynomial};

/// The built-in polynomials paired with powers small enough to time quickly.
pub fn workloads() -> Vec<(&'static str, LaurentPolynomial, u32)> {
    [("f39", "39", 10), ("f39", "39", 20), ("dwork4", "dwork4", 25)]
        .into_iter()
        .map(|(label, name, p)| (label, fixtures::polynomial(name).expect("fixture exists"), p))
        .collect()
}
