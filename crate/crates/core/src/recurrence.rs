//! Constant-term series and the search for the linear recurrence, or
//! equivalently the differential operator in `theta = z d/dz`, that they
//! satisfy.
//!
//! A recurrence of length `k + 1` and degree `d` is a list of integer
//! polynomials `P_0..P_k` of degree at most `d` with
//! `sum_i P_i(n - i) a_{n-i} = 0` for every `n >= 0`, where `a_m = 0` for
//! `m < 0`. The same data read as `L = sum_i z^i P_i(theta)` annihilates
//! `sum_n a_n z^n`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::laurent::LaurentPolynomial;
use crate::linalg::{bareiss, integer_nullspace};
use crate::pipeline::Pipeline;

/// Stability margin: equations withheld to confirm a fit.
pub const DEFAULT_EXTRA: usize = 5;

/// The terms `a_0, a_1, ...` of a power series, with the polynomial that
/// produced them when known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    pub source: Option<Value>,
    pub terms: Vec<BigInt>,
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    poly: Option<Value>,
    terms: Vec<Value>,
}

impl Series {
    pub fn new(terms: Vec<BigInt>) -> Self {
        Self { source: None, terms }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `a_m`, zero for negative `m` and beyond the stored terms.
    pub fn term(&self, m: i64) -> BigInt {
        usize::try_from(m)
            .ok()
            .and_then(|m| self.terms.get(m).cloned())
            .unwrap_or_default()
    }

    /// `{"poly": ..., "terms": ["1", "0", "2", ...]}`.
    pub fn to_json(&self) -> String {
        let doc = SeriesJson {
            poly: self.source.clone(),
            terms: self.terms.iter().map(|t| Value::String(t.to_string())).collect(),
        };
        serde_json::to_string(&doc).expect("series serializes")
    }

    /// Accepts terms as decimal strings or JSON integers.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SeriesJson = serde_json::from_str(text)?;
        let terms = doc
            .terms
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let parsed = match v {
                    Value::String(s) => s.trim().parse::<BigInt>().ok(),
                    Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string().parse().ok(),
                    _ => None,
                };
                parsed.ok_or_else(|| Error::InvalidSeries(format!("term {i} is not an integer: {v}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            source: doc.poly,
            terms,
        })
    }
}

/// `a_p = [h^p]_0` for `p = 0..=max_power`. `progress` sees each term as it
/// is finished.
pub fn constant_term_series(
    h: &LaurentPolynomial,
    max_power: u32,
    pipeline: &Pipeline,
    mut progress: impl FnMut(u32, &BigInt),
) -> Result<Series> {
    let mut terms = Vec::with_capacity(max_power as usize + 1);
    for p in 0..=max_power {
        let a = pipeline.constant_term(h, p)?;
        progress(p, &a);
        terms.push(a);
    }
    Ok(Series {
        source: Some(serde_json::to_value(h.to_json())?),
        terms,
    })
}

/// Integer polynomials `P_0..P_k`, each stored as `d + 1` coefficients in
/// ascending degree. Always normalized: the coefficients are jointly
/// primitive and the leading coefficient of `P_0` is positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Recurrence {
    polys: Vec<Vec<BigInt>>,
}

impl Recurrence {
    /// Normalizes the given polynomials; they must all have the same length
    /// and `P_0` must not vanish.
    pub fn from_polys(polys: Vec<Vec<BigInt>>) -> Result<Self> {
        let Some(first) = polys.first() else {
            return Err(Error::InvalidRecurrence("no polynomials".into()));
        };
        let width = first.len();
        if width == 0 || polys.iter().any(|p| p.len() != width) {
            return Err(Error::InvalidRecurrence(
                "polynomials must share one nonzero coefficient count".into(),
            ));
        }
        if first.iter().all(Zero::is_zero) {
            return Err(Error::InvalidRecurrence("P_0 is identically zero".into()));
        }
        let content = polys.iter().flatten().fold(BigInt::zero(), |g, c| g.gcd(c));
        let lead_negative = first
            .iter()
            .rev()
            .find(|c| !c.is_zero())
            .is_some_and(|c| c.is_negative());
        let scale = if lead_negative { -content } else { content };
        let polys = polys
            .into_iter()
            .map(|p| p.into_iter().map(|c| c / &scale).collect())
            .collect();
        Ok(Self { polys })
    }

    fn from_flat(b: &[BigInt], k: usize, d: usize) -> Result<Self> {
        Self::from_polys(b.chunks(d + 1).take(k + 1).map(<[BigInt]>::to_vec).collect())
    }

    pub fn polys(&self) -> &[Vec<BigInt>] {
        &self.polys
    }

    /// `k`: the recurrence has `k + 1` polynomials.
    pub fn order(&self) -> usize {
        self.polys.len() - 1
    }

    /// `d`: every polynomial has `d + 1` stored coefficients.
    pub fn degree(&self) -> usize {
        self.polys[0].len() - 1
    }

    /// The coefficients `b_ij` laid out in a `(k + 1) x (d + 1)` grid, with
    /// zeros where this recurrence is smaller.
    fn padded(&self, k: usize, d: usize) -> Option<Vec<BigInt>> {
        if self.order() > k || self.degree() > d {
            return None;
        }
        let mut out = vec![BigInt::zero(); (k + 1) * (d + 1)];
        for (i, p) in self.polys.iter().enumerate() {
            for (j, c) in p.iter().enumerate() {
                out[i * (d + 1) + j] = c.clone();
            }
        }
        Some(out)
    }

    /// The residual `sum_i P_i(n - i) a_{n-i}` at `n`.
    pub fn residual(&self, s: &Series, n: usize) -> BigInt {
        let mut total = BigInt::zero();
        for (i, p) in self.polys.iter().enumerate().take(n + 1) {
            let m = (n - i) as i64;
            let a = s.term(m);
            if a.is_zero() {
                continue;
            }
            total += eval(p, &BigInt::from(m)) * a;
        }
        total
    }
}

fn eval(p: &[BigInt], x: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// `sum_i z^i P_i(theta)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialOperator {
    recurrence: Recurrence,
}

impl DifferentialOperator {
    pub fn recurrence(&self) -> &Recurrence {
        &self.recurrence
    }

    /// The first `s.len()` coefficients of `L` applied to the truncated
    /// series, using `theta z^m = m z^m`.
    pub fn apply_to_series(&self, s: &Series) -> Vec<BigInt> {
        let len = s.len();
        let mut out = vec![BigInt::zero(); len];
        for (i, p) in self.recurrence.polys().iter().enumerate() {
            // Horner in theta over the whole series
            let mut w: Vec<BigInt> = vec![BigInt::zero(); len];
            for b in p.iter().rev() {
                for (m, wm) in w.iter_mut().enumerate() {
                    *wm = &*wm * m + b * &s.terms[m];
                }
            }
            for (m, wm) in w.into_iter().enumerate() {
                if m + i < len {
                    out[m + i] += wm;
                }
            }
        }
        out
    }
}

/// One line per nonzero `P_i`: `z^i * ( b θ^d + ... + b_0 )`.
impl fmt::Display for DifferentialOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first_line = true;
        for (i, p) in self.recurrence.polys().iter().enumerate() {
            if p.iter().all(Zero::is_zero) {
                continue;
            }
            if !first_line {
                writeln!(f)?;
            }
            first_line = false;
            write!(f, "z^{i} * (")?;
            let mut first = true;
            for (j, c) in p.iter().enumerate().rev() {
                if c.is_zero() {
                    continue;
                }
                if first {
                    write!(f, " {c}")?;
                } else if c.is_negative() {
                    write!(f, " - {}", c.abs())?;
                } else {
                    write!(f, " + {c}")?;
                }
                first = false;
                match j {
                    0 => {}
                    1 => write!(f, " θ")?,
                    _ => write!(f, " θ^{j}")?,
                }
            }
            write!(f, " )")?;
        }
        Ok(())
    }
}

pub fn recurrence_to_operator(r: &Recurrence) -> DifferentialOperator {
    DifferentialOperator {
        recurrence: r.clone(),
    }
}

/// Whether the recurrence holds at every `n` covered by the series.
pub fn verify_recurrence(r: &Recurrence, s: &Series) -> bool {
    (0..s.len()).all(|n| r.residual(s, n).is_zero())
}

/// Row `n` of the linear system: the coefficient of `b_ij` is
/// `(n - i)^j a_{n-i}`.
fn equation(s: &Series, n: usize, k: usize, d: usize) -> Vec<BigInt> {
    let mut row = Vec::with_capacity((k + 1) * (d + 1));
    for i in 0..=k {
        let m = n as i64 - i as i64;
        let mut v = s.term(m);
        let base = BigInt::from(m);
        for _ in 0..=d {
            row.push(v.clone());
            if !v.is_zero() {
                v *= &base;
            }
        }
    }
    row
}

/// The recurrence of length `k + 1` and degree `d`, if the equations at
/// `n = 0..s.len()` have a one-dimensional solution space that is already
/// determined without the last `extra` of them.
pub fn fit_recurrence(s: &Series, k: usize, d: usize, extra: usize) -> Option<Recurrence> {
    let unknowns = (k + 1) * (d + 1);
    if extra == 0 || s.len() < unknowns + extra {
        return None;
    }
    let held = s.len() - extra;
    let rows: Vec<Vec<BigInt>> = (0..s.len()).map(|n| equation(s, n, k, d)).collect();
    if bareiss(&rows[..held], unknowns).rank() != unknowns - 1 {
        return None;
    }
    let basis = integer_nullspace(&rows[..held], unknowns);
    let b = basis.into_iter().next()?;
    // the full solution space sits inside the held-out one, so it is the same
    // line exactly when the restored equations hold
    let restored = rows[held..]
        .iter()
        .all(|row| row.iter().zip(&b).map(|(x, y)| x * y).sum::<BigInt>().is_zero());
    if !restored {
        return None;
    }
    Recurrence::from_flat(&b, k, d).ok()
}

/// All `(k, d)` with `k <= max_k`, `d <= max_d` and enough equations, in
/// search order: smallest `(k + 1)(d + 1)` first, then smallest `k`.
pub fn search_cells(len: usize, max_k: usize, max_d: usize, extra: usize) -> Vec<(usize, usize)> {
    let mut cells: Vec<(usize, usize)> = (0..=max_k)
        .flat_map(|k| (0..=max_d).map(move |d| (k, d)))
        .filter(|&(k, d)| (k + 1) * (d + 1) + extra <= len)
        .collect();
    cells.sort_by_key(|&(k, d)| ((k + 1) * (d + 1), k));
    cells
}

/// Every stable fit over the search cells, smallest first. A hit whose
/// solution is an earlier hit padded with zeros is dropped.
pub fn search_recurrence(s: &Series, max_k: usize, max_d: usize, extra: usize) -> Vec<Recurrence> {
    let cells = search_cells(s.len(), max_k, max_d, extra);
    let fits: Vec<Option<Recurrence>> = cells
        .par_iter()
        .map(|&(k, d)| fit_recurrence(s, k, d, extra))
        .collect();
    let mut hits: Vec<Recurrence> = Vec::new();
    for (&(k, d), fit) in cells.iter().zip(fits) {
        let Some(r) = fit else { continue };
        let flat = r.padded(k, d).expect("fit has the cell's shape");
        let duplicate = hits.iter().any(|h| h.padded(k, d).is_some_and(|p| p == flat));
        if !duplicate {
            hits.push(r);
        }
    }
    hits
}
