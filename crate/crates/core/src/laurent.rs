//! Laurent polynomials: parsing, printing, and clearing denominators.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::tensor::CoefficientTensor;

/// One monomial `c * X^e` with possibly negative exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: BigInt,
    pub exponents: Vec<i32>,
}

/// A sparse Laurent polynomial with integer coefficients.
///
/// Always canonical: terms have distinct exponent vectors, no zero
/// coefficients, and are sorted by exponent vector in descending
/// lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPolynomial {
    variables: Vec<String>,
    terms: Vec<Term>,
}

/// Input syntax accepted by [`LaurentPolynomial::read`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputFormat {
    Expr,
    Json,
    /// JSON when the text starts with `{`, expression otherwise.
    Auto,
}

impl LaurentPolynomial {
    pub fn new<I>(variables: Vec<String>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BigInt, Vec<i32>)>,
    {
        let mut seen = HashSet::new();
        for v in &variables {
            if !is_identifier(v) {
                return Err(Error::InvalidPolynomial(format!(
                    "`{v}` is not a variable name"
                )));
            }
            if !seen.insert(v.as_str()) {
                return Err(Error::InvalidPolynomial(format!(
                    "variable `{v}` declared twice"
                )));
            }
        }
        let mut merged: BTreeMap<Vec<i32>, BigInt> = BTreeMap::new();
        for (coeff, exponents) in terms {
            if exponents.len() != variables.len() {
                return Err(Error::DimensionMismatch {
                    expected: variables.len(),
                    found: exponents.len(),
                });
            }
            *merged.entry(exponents).or_insert_with(BigInt::zero) += coeff;
        }
        let terms = merged
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(exponents, coeff)| Term { coeff, exponents })
            .collect();
        Ok(Self { variables, terms })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Parses either syntax; see [`InputFormat`].
    pub fn read(text: &str, format: InputFormat) -> Result<Self> {
        match format {
            InputFormat::Expr => parse_expr(text),
            InputFormat::Json => parse_json(text),
            InputFormat::Auto if text.trim_start().starts_with('{') => parse_json(text),
            InputFormat::Auto => parse_expr(text),
        }
    }

    /// Sum of the absolute values of the coefficients.
    pub fn total_weight(&self) -> BigUint {
        self.terms
            .iter()
            .map(|t| t.coeff.magnitude().clone())
            .sum()
    }

    /// Smallest and largest exponent of each variable over all terms.
    pub fn exponent_bounds(&self) -> Vec<(i32, i32)> {
        (0..self.nvars())
            .map(|r| {
                let it = self.terms.iter().map(|t| t.exponents[r]);
                let lo = it.clone().min().unwrap_or(0);
                let hi = it.max().unwrap_or(0);
                (lo, hi)
            })
            .collect()
    }

    /// Renames variables by position: `order[k]` is the old index of the
    /// variable placed at new position `k`.
    pub fn permute_variables(&self, order: &[usize]) -> Result<Self> {
        let mut check = order.to_vec();
        check.sort_unstable();
        if check != (0..self.nvars()).collect::<Vec<_>>() {
            return Err(Error::InvalidPolynomial(
                "variable order is not a permutation".into(),
            ));
        }
        let variables = order.iter().map(|&r| self.variables[r].clone()).collect();
        let terms = self.terms.iter().map(|t| {
            (
                t.coeff.clone(),
                order.iter().map(|&r| t.exponents[r]).collect(),
            )
        });
        Self::new(variables, terms)
    }

    /// Orders variables by descending Laurent degree (`max - min` exponent),
    /// ties kept in input order, and returns the permutation used.
    ///
    /// Elimination runs from the last variable, so this puts the variables
    /// with the fewest interpolation nodes on the outermost levels.
    pub fn sorted_by_degree(&self) -> Result<(Self, Vec<usize>)> {
        let bounds = self.exponent_bounds();
        let mut order: Vec<usize> = (0..self.nvars()).collect();
        order.sort_by_key(|&r| std::cmp::Reverse(bounds[r].1 - bounds[r].0));
        Ok((self.permute_variables(&order)?, order))
    }

    /// Multiplies by the monomial common denominator and lays the result out
    /// densely.
    pub fn normalize(&self) -> Result<NormalizedPolynomial> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let bounds = self.exponent_bounds();
        let shift: Vec<usize> = bounds.iter().map(|&(lo, _)| (-lo).max(0) as usize).collect();
        let degrees: Vec<usize> = bounds
            .iter()
            .zip(&shift)
            .map(|(&(_, hi), &s)| (i64::from(hi) + s as i64) as usize)
            .collect();
        let mut tensor = CoefficientTensor::filled(tensor_shape(&degrees), BigInt::zero())?;
        let mut data = tensor.data().to_vec();
        for t in &self.terms {
            let idx: Vec<usize> = t
                .exponents
                .iter()
                .zip(&shift)
                .map(|(&e, &s)| (i64::from(e) + s as i64) as usize)
                .collect();
            let o = tensor.offset(&idx).expect("shifted exponent lies in the box");
            data[o] = t.coeff.clone();
        }
        tensor = CoefficientTensor::new(tensor_shape(&degrees), data)?;
        Ok(NormalizedPolynomial {
            tensor,
            shift,
            degrees,
        })
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            variables: self.variables.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| TermJson {
                    c: Value::String(t.coeff.to_string()),
                    e: t.exponents.clone(),
                })
                .collect(),
        }
    }
}

fn tensor_shape(degrees: &[usize]) -> Vec<usize> {
    degrees.iter().map(|d| d + 1).collect()
}

/// `f = S * h` as a dense tensor, with `S = X^shift`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedPolynomial {
    pub tensor: CoefficientTensor<BigInt>,
    pub shift: Vec<usize>,
    pub degrees: Vec<usize>,
}

impl NormalizedPolynomial {
    pub fn nvars(&self) -> usize {
        self.degrees.len()
    }

    /// Index into `f^p` holding the coefficient `[h^p]_alpha`, or `None` when
    /// that coefficient is structurally zero.
    pub fn target_index(&self, power: u32, alpha: &[i64]) -> Option<Vec<usize>> {
        if alpha.len() != self.nvars() {
            return None;
        }
        let p = i64::from(power);
        alpha
            .iter()
            .zip(self.shift.iter().zip(&self.degrees))
            .map(|(&a, (&s, &d))| {
                let i = a + p * s as i64;
                (0..=p * d as i64).contains(&i).then_some(i as usize)
            })
            .collect()
    }

    /// The tensor reduced modulo `q`.
    pub fn reduce_mod(&self, q: u64) -> CoefficientTensor<u64> {
        let m = BigInt::from(q);
        self.tensor.map(|c| {
            let r: BigInt = ((c % &m) + &m) % &m;
            u64::try_from(r).expect("residue below modulus")
        })
    }
}

/// Builds `sum_i prod_j X_j^{v_ij}` with unit coefficients from lattice points.
pub fn from_polytope(vertices: &[Vec<i32>]) -> Result<LaurentPolynomial> {
    let first = vertices
        .first()
        .ok_or_else(|| Error::InvalidPolynomial("polytope has no vertices".into()))?;
    let n = first.len();
    if n == 0 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: 0,
        });
    }
    let mut seen = HashSet::new();
    for v in vertices {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        if !seen.insert(v.clone()) {
            return Err(Error::DuplicateVertex(v.clone()));
        }
    }
    LaurentPolynomial::new(
        default_variables(n),
        vertices.iter().map(|v| (BigInt::one(), v.clone())),
    )
}

/// `X, Y, Z, T` for up to four variables, `x1 .. xn` beyond.
pub fn default_variables(n: usize) -> Vec<String> {
    const NAMES: [&str; 4] = ["X", "Y", "Z", "T"];
    if n <= NAMES.len() {
        NAMES[..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            let negative = t.coeff.is_negative();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = t.coeff.magnitude();
            let factors: Vec<String> = t
                .exponents
                .iter()
                .zip(&self.variables)
                .filter(|(&e, _)| e != 0)
                .map(|(&e, v)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                f.write_str(&factors.join("*"))?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Expression syntax

struct Lexer<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            position: self.pos,
            message: message.into(),
        })
    }

    fn digits(&mut self) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.text[start..self.pos]).expect("ascii digits")
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.text.len()
            && (self.text[self.pos].is_ascii_alphabetic() || self.text[self.pos] == b'_')
        {
            while self.pos < self.text.len()
                && (self.text[self.pos].is_ascii_alphanumeric() || self.text[self.pos] == b'_')
            {
                self.pos += 1;
            }
            Some(std::str::from_utf8(&self.text[start..self.pos]).expect("ascii identifier"))
        } else {
            None
        }
    }

    /// Rejects a fractional tail such as `.5` or `/2` after a number.
    fn integral(&mut self, start: usize, is_exponent: bool) -> Result<()> {
        if matches!(self.text.get(self.pos), Some(b'.') | Some(b'/')) {
            return Err(if is_exponent {
                Error::NonIntegerExponent { position: start }
            } else {
                Error::NonIntegerCoefficient { position: start }
            });
        }
        Ok(())
    }
}

fn parse_expr(text: &str) -> Result<LaurentPolynomial> {
    let mut lx = Lexer {
        text: text.as_bytes(),
        pos: 0,
    };
    let mut variables: Vec<String> = Vec::new();
    let mut raw: Vec<(BigInt, Vec<(usize, i32)>)> = Vec::new();

    if lx.peek().is_none() {
        return lx.syntax("empty expression");
    }
    let mut first = true;
    loop {
        let negative = if lx.eat(b'-') {
            true
        } else if lx.eat(b'+') {
            false
        } else if first {
            false
        } else {
            return lx.syntax("expected `+` or `-`");
        };
        first = false;

        let mut coeff = BigInt::one();
        let mut factors = Vec::new();
        let mut need_factor = true;
        match lx.peek() {
            Some(c) if c.is_ascii_digit() => {
                let start = lx.pos;
                coeff = lx.digits().parse().expect("digit run");
                lx.integral(start, false)?;
                need_factor = lx.eat(b'*');
            }
            Some(b'.') => {
                return Err(Error::NonIntegerCoefficient { position: lx.pos });
            }
            _ => {}
        }
        if need_factor {
            loop {
                let Some(name) = lx.ident() else {
                    return lx.syntax("expected a variable");
                };
                let var = match variables.iter().position(|v| v == name) {
                    Some(k) => k,
                    None => {
                        variables.push(name.to_string());
                        variables.len() - 1
                    }
                };
                let mut exp = 1i32;
                if lx.eat(b'^') {
                    let exp_neg = if lx.eat(b'-') {
                        true
                    } else {
                        lx.eat(b'+');
                        false
                    };
                    let start = lx.pos;
                    let digits = lx.digits();
                    if digits.is_empty() {
                        if lx.peek() == Some(b'.') {
                            return Err(Error::NonIntegerExponent { position: start });
                        }
                        return lx.syntax("expected an integer exponent");
                    }
                    lx.integral(start, true)?;
                    exp = digits
                        .parse::<i32>()
                        .or_else(|_| lx.syntax("exponent out of range"))?;
                    if exp_neg {
                        exp = -exp;
                    }
                }
                factors.push((var, exp));
                if !lx.eat(b'*') {
                    break;
                }
            }
        }
        if negative {
            coeff = -coeff;
        }
        raw.push((coeff, factors));
        if lx.peek().is_none() {
            break;
        }
    }

    let n = variables.len();
    let terms = raw.into_iter().map(|(c, factors)| {
        let mut e = vec![0i32; n];
        for (var, exp) in factors {
            e[var] += exp;
        }
        (c, e)
    });
    LaurentPolynomial::new(variables, terms)
}

// ---------------------------------------------------------------------------
// JSON syntax

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermJson {
    pub c: Value,
    pub e: Vec<i32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyJson {
    pub variables: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Deserialize)]
struct PolytopeJson {
    vertices: Vec<Vec<i32>>,
}

fn json_coefficient(c: &Value, position: usize) -> Result<BigInt> {
    match c {
        Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| Error::NonIntegerCoefficient { position }),
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string().parse().expect("integer")),
        _ => Err(Error::NonIntegerCoefficient { position }),
    }
}

impl PolyJson {
    pub fn to_polynomial(&self) -> Result<LaurentPolynomial> {
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(k, t)| Ok((json_coefficient(&t.c, k)?, t.e.clone())))
            .collect::<Result<Vec<_>>>()?;
        LaurentPolynomial::new(self.variables.clone(), terms)
    }
}

fn parse_json(text: &str) -> Result<LaurentPolynomial> {
    let value: Value = serde_json::from_str(text)?;
    if value.get("vertices").is_some() {
        let p: PolytopeJson = serde_json::from_value(value)?;
        return from_polytope(&p.vertices);
    }
    let p: PolyJson = serde_json::from_value(value)?;
    p.to_polynomial()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    fn poly(s: &str) -> LaurentPolynomial {
        LaurentPolynomial::read(s, InputFormat::Expr).unwrap()
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn parses_two_terms() {
        let h = poly("X + X^-1");
        assert_eq!(h.variables(), &["X"]);
        let terms: Vec<_> = h.terms().iter().map(|t| (t.coeff.clone(), t.exponents.clone())).collect();
        assert_eq!(terms, vec![(big(1), vec![1]), (big(1), vec![-1])]);
    }

    #[test]
    fn merges_and_drops_zero() {
        let h = poly("2*X*Y - X*Y + 0*Z");
        assert_eq!(h.variables(), &["X", "Y", "Z"]);
        assert_eq!(h.terms().len(), 1);
        assert_eq!(h.terms()[0].coeff, big(1));
        assert_eq!(h.terms()[0].exponents, vec![1, 1, 0]);
    }

    #[test]
    fn parses_constants_and_signed_exponents() {
        let h = poly("  -3 + 4 * X^+2*Y^-1 - Y");
        assert_eq!(h.to_string(), "4*X^2*Y^-1 - Y - 3");
    }

    #[test]
    fn syntax_errors_report_position() {
        match LaurentPolynomial::read("X + * Y", InputFormat::Expr) {
            Err(Error::Syntax { position, .. }) => assert_eq!(position, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            LaurentPolynomial::read("1.5*X", InputFormat::Expr),
            Err(Error::NonIntegerCoefficient { position: 0 })
        ));
        assert!(matches!(
            LaurentPolynomial::read("X^1.5", InputFormat::Expr),
            Err(Error::NonIntegerExponent { .. })
        ));
        assert!(matches!(
            LaurentPolynomial::read("X^", InputFormat::Expr),
            Err(Error::Syntax { .. })
        ));
        assert!(LaurentPolynomial::read("X Y", InputFormat::Expr).is_err());
        assert!(LaurentPolynomial::read("", InputFormat::Expr).is_err());
    }

    #[test]
    fn f39_has_23_terms_in_4_variables() {
        let h = fixtures::polynomial("39").unwrap();
        assert_eq!(h.nvars(), 4);
        assert_eq!(h.terms().len(), 23);
        assert_eq!(h.total_weight(), BigUint::from(23u32));
        let nf = h.normalize().unwrap();
        assert_eq!(nf.shift, vec![1, 1, 1, 1]);
        assert_eq!(nf.degrees, vec![2, 2, 2, 2]);
    }

    #[test]
    fn normalize_one_variable() {
        let nf = poly("X + X^-1").normalize().unwrap();
        assert_eq!(nf.shift, vec![1]);
        assert_eq!(nf.degrees, vec![2]);
        assert_eq!(nf.tensor.data(), &[big(1), big(0), big(1)]);
    }

    #[test]
    fn normalize_already_polynomial() {
        let nf = poly("X^2*Y").normalize().unwrap();
        assert_eq!(nf.shift, vec![0, 0]);
        assert_eq!(nf.degrees, vec![2, 1]);
        assert_eq!(nf.tensor.get(&[2, 1]), Some(&big(1)));
        assert_eq!(nf.tensor.data().iter().filter(|c| !c.is_zero()).count(), 1);
    }

    #[test]
    fn normalize_rejects_zero() {
        assert!(matches!(poly("X - X").normalize(), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn weights() {
        assert_eq!(poly("X + X^-1").total_weight(), BigUint::from(2u32));
        assert_eq!(poly("3*X - 2*Y").total_weight(), BigUint::from(5u32));
    }

    #[test]
    fn polytopes() {
        let dwork = from_polytope(&[
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
            vec![-1, -1, -1, -1],
        ])
        .unwrap();
        assert_eq!(dwork, poly("X + Y + Z + T + X^-1*Y^-1*Z^-1*T^-1").permute_variables(&[0, 1, 2, 3]).unwrap());
        assert_eq!(from_polytope(&[vec![1]]).unwrap(), poly("X"));
        let two = from_polytope(&[vec![1, 0], vec![-1, 0]]).unwrap();
        assert_eq!(two.variables(), &["X", "Y"]);
        assert_eq!(two.to_string(), "X + X^-1");
        assert!(matches!(
            from_polytope(&[vec![1, 0], vec![1, 0]]),
            Err(Error::DuplicateVertex(_))
        ));
        assert!(matches!(
            from_polytope(&[vec![1, 0], vec![1]]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn json_forms() {
        let h = LaurentPolynomial::read(
            r#"{"variables":["a","b"],"terms":[{"c":"123456789012345678901234567890","e":[1,-1]},{"c":"-2","e":[0,0]}]}"#,
            InputFormat::Auto,
        )
        .unwrap();
        assert_eq!(h.variables(), &["a", "b"]);
        assert_eq!(h.to_string(), "123456789012345678901234567890*a*b^-1 - 2");
        let back = serde_json::to_string(&h.to_json()).unwrap();
        assert_eq!(LaurentPolynomial::read(&back, InputFormat::Json).unwrap(), h);

        let p = LaurentPolynomial::read(r#"{"vertices":[[1,0],[-1,0]]}"#, InputFormat::Auto).unwrap();
        assert_eq!(p.to_string(), "X + X^-1");

        assert!(matches!(
            LaurentPolynomial::read(r#"{"variables":["a"],"terms":[{"c":"1/2","e":[1]}]}"#, InputFormat::Json),
            Err(Error::NonIntegerCoefficient { .. })
        ));
        assert!(matches!(
            LaurentPolynomial::read(r#"{"variables":["a"],"terms":[{"c":1.5,"e":[1]}]}"#, InputFormat::Json),
            Err(Error::NonIntegerCoefficient { .. })
        ));
    }

    #[test]
    fn degree_sort_moves_wide_variables_first() {
        let h = poly("Y + X^2*Y^-1 + X^-2");
        let (sorted, order) = h.sorted_by_degree().unwrap();
        assert_eq!(order, vec![1, 0]);
        let h = poly("X + Y^2 + Y^-2");
        let (sorted2, order2) = h.sorted_by_degree().unwrap();
        assert_eq!(order2, vec![1, 0]);
        assert_eq!(sorted2.variables(), &["Y", "X"]);
        assert_eq!(sorted.variables(), &["X", "Y"]);
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPolynomial> {
        (1usize..=3).prop_flat_map(|n| {
            prop::collection::vec(
                (-5i64..=5, prop::collection::vec(-2i32..=2, n)),
                1..6,
            )
            .prop_map(move |terms| {
                LaurentPolynomial::new(
                    default_variables(n),
                    terms.into_iter().map(|(c, e)| (BigInt::from(c), e)),
                )
                .unwrap()
            })
        })
    }

    fn eval_laurent(h: &LaurentPolynomial, x: &[i64]) -> num_rational::BigRational {
        use num_rational::BigRational;
        h.terms()
            .iter()
            .map(|t| {
                let mut v = BigRational::from_integer(t.coeff.clone());
                for (&e, &xv) in t.exponents.iter().zip(x) {
                    let base = BigRational::from_integer(BigInt::from(xv));
                    let pw = num_traits::pow(base, e.unsigned_abs() as usize);
                    v = if e < 0 { v / pw } else { v * pw };
                }
                v
            })
            .sum()
    }

    proptest! {
        #[test]
        fn print_parse_roundtrip(h in arb_poly()) {
            let printed = h.to_string();
            let back = LaurentPolynomial::read(&printed, InputFormat::Expr).unwrap();
            // Variables that vanished from every term are dropped by the printer.
            let h_vars: Vec<usize> = back.variables().iter()
                .map(|v| h.variables().iter().position(|w| w == v).unwrap())
                .collect();
            if h.is_zero() {
                prop_assert!(back.is_zero());
            } else {
                let projected = LaurentPolynomial::new(
                    back.variables().to_vec(),
                    h.terms().iter().map(|t| (t.coeff.clone(), h_vars.iter().map(|&r| t.exponents[r]).collect())),
                ).unwrap();
                prop_assert_eq!(back, projected);
            }
        }

        #[test]
        fn normalize_matches_evaluation(h in arb_poly(), raw in prop::collection::vec(1i64..=4, 3), signs in prop::collection::vec(any::<bool>(), 3)) {
            prop_assume!(!h.is_zero());
            let nf = h.normalize().unwrap();
            let x: Vec<i64> = raw.iter().zip(&signs).take(h.nvars()).map(|(&v, &s)| if s { -v } else { v }).collect();
            let mut s_val = num_rational::BigRational::from_integer(BigInt::one());
            for (&s, &xv) in nf.shift.iter().zip(&x) {
                s_val *= num_rational::BigRational::from_integer(BigInt::from(xv).pow(s as u32));
            }
            let lhs = s_val * eval_laurent(&h, &x);
            let mut rhs = BigInt::zero();
            for (o, c) in nf.tensor.data().iter().enumerate() {
                let idx = nf.tensor.unravel(o);
                let mut m = c.clone();
                for (&i, &xv) in idx.iter().zip(&x) {
                    m *= BigInt::from(xv).pow(i as u32);
                }
                rhs += m;
            }
            prop_assert_eq!(lhs, num_rational::BigRational::from_integer(rhs));
        }

        #[test]
        fn tensor_holds_exactly_the_terms(h in arb_poly()) {
            prop_assume!(!h.is_zero());
            let nf = h.normalize().unwrap();
            let mut expected = vec![BigInt::zero(); nf.tensor.len()];
            for t in h.terms() {
                let idx: Vec<usize> = t.exponents.iter().zip(&nf.shift).map(|(&e, &s)| (e as i64 + s as i64) as usize).collect();
                expected[nf.tensor.offset(&idx).unwrap()] = t.coeff.clone();
            }
            prop_assert_eq!(nf.tensor.data(), &expected[..]);
            // minimality of the shift and of the degree box
            for r in 0..h.nvars() {
                let top = (0..nf.tensor.len()).any(|o| nf.tensor.unravel(o)[r] == nf.degrees[r] && !nf.tensor.data()[o].is_zero());
                let bottom = (0..nf.tensor.len()).any(|o| nf.tensor.unravel(o)[r] == 0 && !nf.tensor.data()[o].is_zero());
                prop_assert!(top);
                prop_assert!(bottom || nf.shift[r] == 0);
            }
        }
    }
}
