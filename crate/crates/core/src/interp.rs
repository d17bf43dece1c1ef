//! Equidistant interpolation nodes and single rows of the inverse Vandermonde
//! matrix.
//!
//! For nodes `u_s = s`, `s = 0..=N`, row `r` of `V^{-1}` holds the coefficient
//! of `Y^r` in each Lagrange basis polynomial
//!
//! ```text
//! l_s(Y) = prod_{j != s} (Y - j) / (s - j)
//!        = [P(Y) / (Y - s)] * (-1)^(N-s) / (s! (N-s)!),   P(Y) = prod_j (Y - j).
//! ```
//!
//! `P` is expanded once in `O(N^2)`; each quotient coefficient then costs
//! `O(N)` by synthetic division from the top, for `O(N^2)` time and `O(N)`
//! space per row.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::PrimeField;

/// The nodes `0, 1, ..., N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodeSet {
    highest: usize,
}

impl NodeSet {
    pub fn new(highest: usize) -> Self {
        Self { highest }
    }

    pub fn highest(&self) -> usize {
        self.highest
    }

    pub fn len(&self) -> usize {
        self.highest + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> impl Iterator<Item = u64> {
        0..=self.highest as u64
    }
}

/// Row `row_index` of the inverse Vandermonde matrix modulo a prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseRow {
    row_index: usize,
    entries: Vec<u64>,
    modulus: u64,
}

impl InverseRow {
    pub fn row_index(&self) -> usize {
        self.row_index
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn nodes(&self) -> NodeSet {
        NodeSet::new(self.entries.len() - 1)
    }
}

/// Row `row_index` of the inverse Vandermonde matrix over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactInverseRow {
    pub row_index: usize,
    pub entries: Vec<BigRational>,
}

fn check_row(n: usize, r: usize) -> Result<()> {
    if r > n {
        return Err(Error::RowOutOfRange { row: r, nodes: n });
    }
    Ok(())
}

/// Computes one row of `V^{-1}` for nodes `0..=n` modulo `field`'s prime,
/// which must exceed `n`.
pub fn inverse_vandermonde_row(n: usize, r: usize, field: &PrimeField) -> Result<InverseRow> {
    check_row(n, r)?;
    let q = field.modulus();
    if q <= n as u64 {
        return Err(Error::ModulusTooSmall {
            modulus: q,
            nodes: n,
        });
    }
    // P(Y) = prod_{j=0}^{n} (Y - j), ascending coefficients, degree n + 1.
    let mut prod = vec![0u64; n + 2];
    prod[0] = 1;
    for j in 0..=n as u64 {
        let neg_j = field.neg(j);
        for k in (0..=j as usize + 1).rev() {
            let shifted = if k > 0 { prod[k - 1] } else { 0 };
            prod[k] = field.mul_add(prod[k], neg_j, shifted);
        }
    }

    // inverse factorials 0..=n
    let mut inv_fact = vec![1u64; n + 1];
    let mut fact = 1u64;
    for k in 1..=n as u64 {
        fact = field.mul(fact, k);
    }
    inv_fact[n] = field.inv(fact);
    for k in (1..=n).rev() {
        inv_fact[k - 1] = field.mul(inv_fact[k], k as u64);
    }

    let entries = (0..=n)
        .map(|s| {
            // quotient of P by (Y - s), from the leading coefficient down to Y^r
            let mut quot = prod[n + 1];
            for m in (r + 1..=n).rev() {
                quot = field.mul_add(quot, s as u64, prod[m]);
            }
            let mut e = field.mul(quot, field.mul(inv_fact[s], inv_fact[n - s]));
            if (n - s) % 2 == 1 {
                e = field.neg(e);
            }
            e
        })
        .collect();
    Ok(InverseRow {
        row_index: r,
        entries,
        modulus: q,
    })
}

/// Rational counterpart of [`inverse_vandermonde_row`].
pub fn inverse_vandermonde_row_exact(n: usize, r: usize) -> Result<ExactInverseRow> {
    check_row(n, r)?;
    let mut prod = vec![BigInt::zero(); n + 2];
    prod[0] = BigInt::one();
    for j in 0..=n {
        let neg_j = BigInt::from(-(j as i64));
        for k in (0..=j + 1).rev() {
            let shifted = if k > 0 { prod[k - 1].clone() } else { BigInt::zero() };
            prod[k] = &prod[k] * &neg_j + shifted;
        }
    }
    let mut fact = vec![BigInt::one(); n + 1];
    for k in 1..=n {
        fact[k] = &fact[k - 1] * BigInt::from(k);
    }
    let entries = (0..=n)
        .map(|s| {
            let mut quot = prod[n + 1].clone();
            for m in (r + 1..=n).rev() {
                quot = quot * BigInt::from(s) + &prod[m];
            }
            let mut denom = &fact[s] * &fact[n - s];
            if (n - s) % 2 == 1 {
                denom = -denom;
            }
            BigRational::new(quot, denom)
        })
        .collect();
    Ok(ExactInverseRow {
        row_index: r,
        entries,
    })
}

/// Coefficient of `Y^r` of the interpolant through `(s, values[s])`.
pub fn interpolate_coefficient(values: &[u64], row: &InverseRow, field: &PrimeField) -> Result<u64> {
    if field.modulus() != row.modulus {
        return Err(Error::ModulusMismatch {
            expected: row.modulus,
            found: field.modulus(),
        });
    }
    if values.len() != row.entries.len() {
        return Err(Error::LengthMismatch {
            expected: row.entries.len(),
            found: values.len(),
        });
    }
    Ok(values
        .iter()
        .zip(&row.entries)
        .fold(0, |acc, (&v, &w)| field.mul_add(field.reduce(v), w, acc)))
}

pub fn interpolate_coefficient_exact(values: &[BigRational], row: &ExactInverseRow) -> Result<BigRational> {
    if values.len() != row.entries.len() {
        return Err(Error::LengthMismatch {
            expected: row.entries.len(),
            found: values.len(),
        });
    }
    Ok(values.iter().zip(&row.entries).map(|(v, w)| v * w).sum())
}
