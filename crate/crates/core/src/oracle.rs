//! Ground truth by plain integer arithmetic.
//!
//! Nothing here touches the modular engine: the polynomial is cleared of
//! denominators locally, powered by repeated multiplication over arbitrary
//! precision integers, and a single coefficient of `f^p` is read off with the
//! Cauchy product of `f^r` and `f^(p-r)`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::laurent::LaurentPolynomial;

/// Refuse dense powers with more entries than this.
pub const DEFAULT_SIZE_LIMIT: u128 = 40_000_000;

/// Dense polynomial with arbitrary-precision coefficients, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensePolynomial {
    pub shape: Vec<usize>,
    pub data: Vec<BigInt>,
}

impl DensePolynomial {
    pub fn one(nvars: usize) -> Self {
        Self {
            shape: vec![1; nvars],
            data: vec![BigInt::one()],
        }
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.shape.len()];
        for k in (0..self.shape.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.shape[k + 1];
        }
        strides
    }

    pub fn get(&self, index: &[usize]) -> BigInt {
        if index.iter().zip(&self.shape).any(|(i, n)| i >= n) {
            return BigInt::zero();
        }
        let o: usize = index.iter().zip(self.strides()).map(|(i, s)| i * s).sum();
        self.data[o].clone()
    }

    fn index_of(&self, mut o: usize) -> Vec<usize> {
        let mut idx = vec![0; self.shape.len()];
        for k in (0..self.shape.len()).rev() {
            idx[k] = o % self.shape[k];
            o /= self.shape[k];
        }
        idx
    }

    /// Product with a sparse polynomial given as `(coefficient, exponents)`.
    fn mul_sparse(&self, terms: &[(BigInt, Vec<usize>)], degrees: &[usize]) -> Self {
        let shape: Vec<usize> = self.shape.iter().zip(degrees).map(|(n, d)| n + d).collect();
        let mut out = Self {
            data: vec![BigInt::zero(); shape.iter().product()],
            shape,
        };
        let out_strides = out.strides();
        for (o, c) in self.data.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let idx = self.index_of(o);
            let base: usize = idx.iter().zip(&out_strides).map(|(i, s)| i * s).sum();
            for (tc, te) in terms {
                let shift: usize = te.iter().zip(&out_strides).map(|(e, s)| e * s).sum();
                out.data[base + shift] += c * tc;
            }
        }
        out
    }

    /// Full dense product.
    pub fn mul(&self, other: &Self) -> Self {
        let terms: Vec<(BigInt, Vec<usize>)> = other
            .data
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(o, c)| (c.clone(), other.index_of(o)))
            .collect();
        let degrees: Vec<usize> = other.shape.iter().map(|n| n - 1).collect();
        self.mul_sparse(&terms, &degrees)
    }
}

/// `[g h]_index = sum_{a + b = index} [g]_a [h]_b`.
pub fn cauchy_coefficient(g: &DensePolynomial, h: &DensePolynomial, index: &[usize]) -> BigInt {
    let mut sum = BigInt::zero();
    for (o, c) in g.data.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let a = g.index_of(o);
        if a.iter().zip(index).any(|(ai, ti)| ai > ti) {
            continue;
        }
        let b: Vec<usize> = index.iter().zip(&a).map(|(t, ai)| t - ai).collect();
        let hb = h.get(&b);
        if !hb.is_zero() {
            sum += c * hb;
        }
    }
    sum
}

struct Cleared {
    terms: Vec<(BigInt, Vec<usize>)>,
    shift: Vec<usize>,
    degrees: Vec<usize>,
}

fn clear(h: &LaurentPolynomial) -> Cleared {
    let n = h.nvars();
    let mut shift = vec![0usize; n];
    let mut degrees = vec![0usize; n];
    for t in h.terms() {
        for (r, &e) in t.exponents.iter().enumerate() {
            if e < 0 {
                shift[r] = shift[r].max(e.unsigned_abs() as usize);
            }
        }
    }
    let terms = h
        .terms()
        .iter()
        .map(|t| {
            let e: Vec<usize> = t
                .exponents
                .iter()
                .zip(&shift)
                .map(|(&e, &s)| (i64::from(e) + s as i64) as usize)
                .collect();
            (t.coeff.clone(), e)
        })
        .collect::<Vec<_>>();
    for (_, e) in &terms {
        for (d, &x) in degrees.iter_mut().zip(e) {
            *d = (*d).max(x);
        }
    }
    Cleared {
        terms,
        shift,
        degrees,
    }
}

fn dense_size(degrees: &[usize], power: u32) -> u128 {
    degrees
        .iter()
        .map(|&d| d as u128 * u128::from(power) + 1)
        .product()
}

/// `(S h)^p` as a dense polynomial, with the exponent shift `s` of `S = X^s`.
pub fn dense_power(h: &LaurentPolynomial, power: u32, limit: u128) -> Result<(DensePolynomial, Vec<usize>)> {
    let cleared = clear(h);
    let entries = dense_size(&cleared.degrees, power);
    if entries > limit {
        return Err(Error::SizeGuard { entries, limit });
    }
    let mut acc = DensePolynomial::one(h.nvars());
    for _ in 0..power {
        acc = acc.mul_sparse(&cleared.terms, &cleared.degrees);
    }
    Ok((acc, cleared.shift))
}

/// `[h^p]_alpha` exactly, as the Cauchy product of `(S h)^r` and
/// `(S h)^(p-r)` with `r = p / 2`, read at `alpha + p s`.
pub fn naive_power_coeff(h: &LaurentPolynomial, power: u32, alpha: &[i64]) -> Result<BigInt> {
    naive_power_coeff_limited(h, power, alpha, DEFAULT_SIZE_LIMIT)
}

pub fn naive_power_coeff_limited(h: &LaurentPolynomial, power: u32, alpha: &[i64], limit: u128) -> Result<BigInt> {
    if alpha.len() != h.nvars() {
        return Err(Error::DimensionMismatch {
            expected: h.nvars(),
            found: alpha.len(),
        });
    }
    if h.is_zero() {
        let at_origin = alpha.iter().all(|&a| a == 0);
        return Ok(BigInt::from(u8::from(power == 0 && at_origin)));
    }
    let cleared = clear(h);
    let half = power / 2;
    let entries = dense_size(&cleared.degrees, power - half);
    if entries > limit {
        return Err(Error::SizeGuard { entries, limit });
    }
    let mut target = Vec::with_capacity(alpha.len());
    for ((&a, &s), &d) in alpha.iter().zip(&cleared.shift).zip(&cleared.degrees) {
        let t = a + i64::from(power) * s as i64;
        if t < 0 || t > i64::from(power) * d as i64 {
            return Ok(BigInt::zero());
        }
        target.push(t as usize);
    }
    let mut low = DensePolynomial::one(h.nvars());
    for _ in 0..half {
        low = low.mul_sparse(&cleared.terms, &cleared.degrees);
    }
    let high = if (power - half) == half {
        low.clone()
    } else {
        low.mul_sparse(&cleared.terms, &cleared.degrees)
    };
    Ok(cauchy_coefficient(&low, &high, &target))
}

/// Closed-form constant-term sequences.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `X + 1/X`
    CentralBinomial,
    /// `X + Y + 1/(XY)`
    ThreeTerm,
    /// `X + Y + Z + T + 1/(XYZT)`
    Dwork4,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "central_binomial" => Ok(Self::CentralBinomial),
            "three_term" => Ok(Self::ThreeTerm),
            "dwork4" => Ok(Self::Dwork4),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }
}

impl Family {
    pub fn polynomial(self) -> LaurentPolynomial {
        let text = match self {
            Self::CentralBinomial => "X + X^-1",
            Self::ThreeTerm => "X + Y + X^-1*Y^-1",
            Self::Dwork4 => "X + Y + Z + T + X^-1*Y^-1*Z^-1*T^-1",
        };
        LaurentPolynomial::read(text, crate::laurent::InputFormat::Expr).expect("valid family")
    }

    /// Number of variables plus one: the period of the nonzero terms.
    fn parts(self) -> u32 {
        match self {
            Self::CentralBinomial => 2,
            Self::ThreeTerm => 3,
            Self::Dwork4 => 5,
        }
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `p! / ((p/k)!)^k` when `k | p`, else zero, for the family's `k`.
pub fn known_family(family: Family, power: u32) -> BigInt {
    let k = family.parts();
    if power % k != 0 {
        return BigInt::zero();
    }
    factorial(power) / num_traits::pow(factorial(power / k), k as usize)
}
