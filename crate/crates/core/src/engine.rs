//! The per-prime coefficient engine.
//!
//! `[f^p]_i` for a dense polynomial `f` is obtained by substituting the
//! interpolation nodes `0..=N_k` for the last variable, recursing on the
//! resulting polynomial in one variable fewer, and combining the `N_k + 1`
//! results with one row of the inverse Vandermonde matrix. The innermost level
//! raises a scalar to the `p`-th power. When the first variable has degree
//! exactly two and its target exponent equals `p`, the last two levels are
//! replaced by the trinomial shortcut in [`split2`].

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::interp::{inverse_vandermonde_row, InverseRow};
use crate::laurent::NormalizedPolynomial;
use crate::tensor::CoefficientTensor;

pub use crate::field::pow_mod;

/// How many interpolation nodes each recursion level uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum NodePolicy {
    /// `N = p * deg` of the variable eliminated at that level.
    #[default]
    PerVariable,
    /// `N = p * max(deg_1, ..., deg_k)` with `k` variables remaining.
    PrefixMax,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineOptions {
    pub split2: bool,
    pub node_policy: NodePolicy,
}

impl Default for EngineOptions {
    fn default() -> Self {
        Self {
            split2: true,
            node_policy: NodePolicy::PerVariable,
        }
    }
}

/// Operation and storage counters for one engine run.
///
/// Storage is counted in field elements, covering the inverse Vandermonde
/// rows, the trinomial table and every intermediate tensor; the input tensor
/// is excluded.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    /// Scalar powerings at the innermost level of the generic recursion.
    pub base_powers: u64,
    /// Calls to the trinomial shortcut.
    pub split_calls: u64,
    /// Field multiplications below the recursion's top level loop: Horner
    /// steps, powerings, interpolation dot products and shortcut sums.
    pub mults: u64,
    live: u64,
    peak: u64,
}

impl Tally {
    fn alloc(&mut self, n: usize) {
        self.live += n as u64;
        self.peak = self.peak.max(self.live);
    }

    fn free(&mut self, n: usize) {
        self.live -= n as u64;
    }

    /// Largest number of field elements live at once.
    pub fn peak_storage(&self) -> u64 {
        self.peak
    }

    /// Adds another run's operation counts. Storage peaks are not additive
    /// across runs, so the larger one is kept.
    pub fn merge(&mut self, other: &Tally) {
        self.base_powers += other.base_powers;
        self.split_calls += other.split_calls;
        self.mults += other.mults;
        self.peak = self.peak.max(other.peak);
    }
}

/// Everything that stays fixed while computing one coefficient modulo one
/// prime: node counts and the cached inverse Vandermonde row of each level.
#[derive(Clone, Debug)]
pub struct PrimeContext {
    field: PrimeField,
    power: u32,
    target: Vec<usize>,
    /// `level_nodes[k]` is `N` for the level that eliminates variable `k`.
    level_nodes: Vec<usize>,
    rows: Vec<Option<InverseRow>>,
    /// `M_j = p! / (j! j! (p - 2j)!)` for `j = 0..=p/2`, when the shortcut is
    /// active.
    trinomials: Option<Vec<u64>>,
}

impl PrimeContext {
    /// Builds the context for `[f^power]_target` where `degrees[k]` is the
    /// degree of `f` in variable `k`.
    pub fn new(
        degrees: &[usize],
        target: &[usize],
        power: u32,
        field: PrimeField,
        options: EngineOptions,
    ) -> Result<Self> {
        Self::with_tally(degrees, target, power, field, options, &mut Tally::default())
    }

    pub fn with_tally(
        degrees: &[usize],
        target: &[usize],
        power: u32,
        field: PrimeField,
        options: EngineOptions,
        tally: &mut Tally,
    ) -> Result<Self> {
        let n = degrees.len();
        if n == 0 {
            return Err(Error::InvalidPolynomial("no variables".into()));
        }
        if target.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: target.len(),
            });
        }
        let p = power as usize;
        let level_nodes: Vec<usize> = match options.node_policy {
            NodePolicy::PerVariable => degrees.iter().map(|d| d * p).collect(),
            NodePolicy::PrefixMax => (0..n)
                .map(|k| degrees[..=k].iter().max().copied().unwrap_or(0) * p)
                .collect(),
        };
        let widest = level_nodes.iter().copied().max().unwrap_or(0).max(p);
        if field.modulus() <= widest as u64 {
            return Err(Error::ModulusTooSmall {
                modulus: field.modulus(),
                nodes: widest,
            });
        }

        let split = options.split2 && n >= 2 && degrees[0] == 2 && target[0] == p;
        let in_range = target.iter().zip(&level_nodes).all(|(t, nk)| t <= nk);
        let mut rows = Vec::with_capacity(n);
        for k in 0..n {
            let needed = in_range && power > 1 && !(split && k == 0);
            rows.push(if needed {
                // the row construction holds P(Y) (N + 2 entries) next to the row
                tally.alloc(level_nodes[k] + 2);
                let row = inverse_vandermonde_row(level_nodes[k], target[k], &field)?;
                tally.free(level_nodes[k] + 2);
                tally.alloc(row.entries().len());
                Some(row)
            } else {
                None
            });
        }
        let trinomials = (split && in_range && power > 1).then(|| {
            let t = trinomial_table(power, &field);
            tally.alloc(t.len());
            t
        });
        Ok(Self {
            field,
            power,
            target: target.to_vec(),
            level_nodes,
            rows,
            trinomials,
        })
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn target(&self) -> &[usize] {
        &self.target
    }

    pub fn level_nodes(&self) -> &[usize] {
        &self.level_nodes
    }

    pub fn uses_split2(&self) -> bool {
        self.trinomials.is_some()
    }

    /// Whether the target lies outside the support of `f^p`.
    fn out_of_range(&self) -> bool {
        self.target
            .iter()
            .zip(&self.level_nodes)
            .any(|(t, nk)| t > nk)
    }

    fn row(&self, k: usize) -> &InverseRow {
        self.rows[k].as_ref().expect("row built for every active level")
    }

    /// Number of nodes on the outermost level; the unit of parallel work.
    pub fn top_node_count(&self) -> usize {
        self.level_nodes[self.level_nodes.len() - 1] + 1
    }

    /// `w_s * V[i_n][s]` for one outermost node `s`, so that
    /// `[f^p]_i = sum_s top_node_term(s)`.
    pub fn top_node_term(&self, a: &CoefficientTensor<u64>, s: usize, tally: &mut Tally) -> Result<u64> {
        self.check_tensor(a)?;
        if self.out_of_range() {
            return Ok(0);
        }
        if self.power <= 1 {
            return Ok(if s == 0 { self.trivial(a) } else { 0 });
        }
        let k = a.ndim();
        let weight = self.row(k - 1).entries()[s];
        if k == 2 && self.trinomials.is_some() {
            // two variables in total: the outermost nodes are the shortcut's
            if s == 0 {
                tally.split_calls += 1;
            }
            tally.mults += self.split2_node_mults(a) + 1;
            return Ok(self.field.mul(self.split2_node(a, s as u64), weight));
        }
        let w = self.node_value(a, s as u64, tally);
        tally.mults += 1;
        Ok(self.field.mul(w, weight))
    }

    fn check_tensor(&self, a: &CoefficientTensor<u64>) -> Result<()> {
        if a.ndim() != self.target.len() {
            return Err(Error::DimensionMismatch {
                expected: self.target.len(),
                found: a.ndim(),
            });
        }
        Ok(())
    }

    // p = 0 gives delta_{i,0}; p = 1 reads the tensor.
    fn trivial(&self, a: &CoefficientTensor<u64>) -> u64 {
        match self.power {
            0 => u64::from(self.target.iter().all(|&t| t == 0)),
            _ => a.get(&self.target).map_or(0, |&v| self.field.reduce(v)),
        }
    }

    /// Value of `[f_{u}^p]_{i'}` after substituting `u` for the last variable.
    fn node_value(&self, a: &CoefficientTensor<u64>, u: u64, tally: &mut Tally) -> u64 {
        let b = horner_counted(a, u, &self.field, tally);
        tally.alloc(b.len());
        let w = if b.ndim() == 0 {
            let (v, m) = self.field.pow_counted(b.data()[0], u64::from(self.power));
            tally.base_powers += 1;
            tally.mults += m;
            v
        } else {
            self.level(&b, tally)
        };
        tally.free(b.len());
        w
    }

    fn level(&self, a: &CoefficientTensor<u64>, tally: &mut Tally) -> u64 {
        if a.ndim() == 2 && self.trinomials.is_some() {
            return self.split2_unchecked(a, tally);
        }
        let row = self.row(a.ndim() - 1);
        let mut acc = 0;
        for (s, &weight) in row.entries().iter().enumerate() {
            let w = self.node_value(a, s as u64, tally);
            acc = self.field.mul_add(w, weight, acc);
        }
        tally.mults += row.entries().len() as u64;
        acc
    }

    fn split2_unchecked(&self, a: &CoefficientTensor<u64>, tally: &mut Tally) -> u64 {
        let row = self.row(1);
        let mut acc = 0;
        for (s, &weight) in row.entries().iter().enumerate() {
            acc = self.field.mul_add(self.split2_node(a, s as u64), weight, acc);
        }
        tally.mults += row.entries().len() as u64 * (self.split2_node_mults(a) + 1);
        tally.split_calls += 1;
        acc
    }

    /// `sum_j M_j y^j t^(m - j)` (times `b` for odd `p`) at `X_2 = u`, where
    /// `y = a c`, `t = b^2` and `m = p / 2`.
    fn split2_node(&self, a: &CoefficientTensor<u64>, u: u64) -> u64 {
        let f = &self.field;
        let trinomials = self.trinomials.as_deref().expect("shortcut active");
        let width = a.shape()[1];
        let (c0, rest) = a.data().split_at(width);
        let (c1, c2) = rest.split_at(width);
        let av = horner_slice(c0, u, f);
        let bv = horner_slice(c1, u, f);
        let cv = horner_slice(c2, u, f);
        let y = f.mul(av, cv);
        let t = f.mul(bv, bv);
        let mut sum = trinomials[0];
        let mut ypow = 1;
        for &m in &trinomials[1..] {
            ypow = f.mul(ypow, y);
            sum = f.mul_add(sum, t, f.mul(m, ypow));
        }
        if self.power % 2 == 1 {
            sum = f.mul(sum, bv);
        }
        sum
    }

    fn split2_node_mults(&self, a: &CoefficientTensor<u64>) -> u64 {
        let half = self.power as u64 / 2;
        3 * (a.shape()[1] as u64 - 1) + 2 + 3 * half + u64::from(self.power % 2 == 1)
    }
}

/// Trinomial coefficients `p! / (j!^2 (p-2j)!)` for `j = 0..=p/2` by the
/// ratio `M_{j+1} / M_j = (p-2j)(p-2j-1) / (j+1)^2`. Needs `q > p`.
pub fn trinomial_table(power: u32, field: &PrimeField) -> Vec<u64> {
    let p = u64::from(power);
    let half = p / 2;
    let mut table = Vec::with_capacity(half as usize + 1);
    let mut m = 1 % field.modulus();
    table.push(m);
    for j in 0..half {
        let num = field.mul(p - 2 * j, p - 2 * j - 1);
        let den = field.inv(field.mul(j + 1, j + 1));
        m = field.mul(m, field.mul(num, den));
        table.push(m);
    }
    table
}

#[inline(always)]
fn horner_slice(coeffs: &[u64], u: u64, f: &PrimeField) -> u64 {
    let (&top, rest) = coeffs.split_last().expect("non-empty axis");
    rest.iter().rev().fold(top, |acc, &c| f.mul_add(acc, u, c))
}

fn horner_counted(
    a: &CoefficientTensor<u64>,
    u: u64,
    f: &PrimeField,
    tally: &mut Tally,
) -> CoefficientTensor<u64> {
    let b = horner_eval_last_axis(a, u, f);
    let last = a.shape()[a.ndim() - 1] as u64;
    tally.mults += b.len() as u64 * (last - 1);
    b
}

/// Substitutes `u` for the last variable: `B[..] = sum_j A[.., j] u^j`,
/// evaluated as `a_0 + u (a_1 + u (a_2 + ...))`.
pub fn horner_eval_last_axis(a: &CoefficientTensor<u64>, u: u64, field: &PrimeField) -> CoefficientTensor<u64> {
    let u = field.reduce(u);
    a.horner_last_axis_with(|&acc, &c| field.mul_add(acc, u, c))
}

/// `[f_A^p]_target mod q` by the recursion, with `ctx` built for `A`'s shape.
pub fn coeff(a: &CoefficientTensor<u64>, ctx: &PrimeContext, tally: &mut Tally) -> Result<u64> {
    ctx.check_tensor(a)?;
    let mut acc = 0;
    for s in 0..ctx.top_node_count() {
        acc = ctx.field.add(acc, ctx.top_node_term(a, s, tally)?);
    }
    Ok(acc)
}

/// The two-variable shortcut for `f = A(X_2) + B(X_2) X_1 + C(X_2) X_1^2`
/// and target exponent `p` in `X_1`:
///
/// ```text
/// [f^p]_(p, i2) = sum_j M_j [(A C)^j B^(p - 2j)]_i2
/// ```
///
/// with each `[.]_i2` obtained by interpolation over the `X_2` nodes.
pub fn split2(a: &CoefficientTensor<u64>, ctx: &PrimeContext, tally: &mut Tally) -> Result<u64> {
    if a.ndim() != 2 || a.shape()[0] != 3 {
        return Err(Error::Split2Precondition("needs degree exactly 2 in the first of two variables"));
    }
    if ctx.target.len() < 2 {
        return Err(Error::Split2Precondition("context built for a single variable"));
    }
    if ctx.target[0] != ctx.power as usize {
        return Err(Error::Split2Precondition("target exponent in the first variable must equal p"));
    }
    if ctx.out_of_range() {
        return Ok(0);
    }
    match &ctx.trinomials {
        Some(_) => Ok(ctx.split2_unchecked(a, tally)),
        None => Err(Error::Split2Precondition("shortcut disabled in this context")),
    }
}

/// `[f^p]_i mod q` for a normalized polynomial, single threaded.
pub fn coefficient_mod_prime(
    nf: &NormalizedPolynomial,
    target: &[usize],
    power: u32,
    field: PrimeField,
    options: EngineOptions,
) -> Result<u64> {
    let mut tally = Tally::default();
    coefficient_mod_prime_tallied(nf, target, power, field, options, &mut tally)
}

pub fn coefficient_mod_prime_tallied(
    nf: &NormalizedPolynomial,
    target: &[usize],
    power: u32,
    field: PrimeField,
    options: EngineOptions,
    tally: &mut Tally,
) -> Result<u64> {
    let ctx = PrimeContext::with_tally(&nf.degrees, target, power, field, options, tally)?;
    let a = nf.reduce_mod(field.modulus());
    coeff(&a, &ctx, tally)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::{InputFormat, LaurentPolynomial};

    const Q: u64 = 2_147_483_629;

    fn nf(s: &str) -> NormalizedPolynomial {
        LaurentPolynomial::read(s, InputFormat::Expr).unwrap().normalize().unwrap()
    }

    fn tensor(shape: Vec<usize>, data: Vec<u64>) -> CoefficientTensor<u64> {
        CoefficientTensor::new(shape, data).unwrap()
    }

    #[test]
    fn horner_examples() {
        let a = tensor(vec![3], vec![1, 2, 3]);
        assert_eq!(horner_eval_last_axis(&a, 2, &PrimeField::new(Q)).data(), &[17]);
        assert_eq!(horner_eval_last_axis(&a, 2, &PrimeField::new(5)).data(), &[2]);
        let a = tensor(vec![2, 3], vec![4, 5, 6, 7, 8, 9]);
        assert_eq!(horner_eval_last_axis(&a, 0, &PrimeField::new(Q)).data(), &[4, 7]);
    }

    #[test]
    fn univariate_binomial() {
        let f = PrimeField::new(101);
        let a = tensor(vec![2], vec![1, 1]);
        let ctx = PrimeContext::new(&[1], &[2], 4, f, EngineOptions::default()).unwrap();
        let mut t = Tally::default();
        assert_eq!(coeff(&a, &ctx, &mut t).unwrap(), 6);
        assert_eq!(t.base_powers, 5);
    }

    #[test]
    fn dummy_variable() {
        // X^2 + 1 with a second variable of degree zero
        let a = tensor(vec![3, 1], vec![1, 0, 1]);
        for split2 in [false, true] {
            let opts = EngineOptions { split2, ..Default::default() };
            let ctx = PrimeContext::new(&[2, 0], &[4, 0], 4, PrimeField::new(Q), opts).unwrap();
            assert_eq!(coeff(&a, &ctx, &mut Tally::default()).unwrap(), 6);
        }
    }

    #[test]
    fn central_binomial_mod_11() {
        let f = nf("X + X^-1");
        let field = PrimeField::new(11);
        assert_eq!(coefficient_mod_prime(&f, &[4], 4, field, EngineOptions::default()).unwrap(), 6);
        assert_eq!(coefficient_mod_prime(&f, &[5], 5, field, EngineOptions::default()).unwrap(), 0);
    }

    #[test]
    fn three_term_constant() {
        let f = nf("X + Y + X^-1*Y^-1");
        let t = f.target_index(3, &[0, 0]).unwrap();
        assert_eq!(t, vec![3, 3]);
        for split2 in [false, true] {
            let opts = EngineOptions { split2, ..Default::default() };
            assert_eq!(coefficient_mod_prime(&f, &t, 3, PrimeField::new(Q), opts).unwrap(), 6);
        }
    }

    #[test]
    fn trivial_powers() {
        let f = nf("2*X + 3*Y^-1 - 5");
        let field = PrimeField::new(Q);
        let o = EngineOptions::default();
        assert_eq!(coefficient_mod_prime(&f, &[0, 0], 0, field, o).unwrap(), 1);
        assert_eq!(coefficient_mod_prime(&f, &[1, 0], 0, field, o).unwrap(), 0);
        assert_eq!(coefficient_mod_prime(&f, &[0, 1], 1, field, o).unwrap(), Q - 5);
        assert_eq!(coefficient_mod_prime(&f, &[1, 1], 1, field, o).unwrap(), 2);
    }

    #[test]
    fn out_of_range_target_is_zero() {
        let f = nf("X + 1");
        let field = PrimeField::new(Q);
        assert_eq!(coefficient_mod_prime(&f, &[7], 3, field, EngineOptions::default()).unwrap(), 0);
    }

    #[test]
    fn modulus_must_exceed_nodes() {
        let f = nf("X^3 + 1");
        assert!(matches!(
            coefficient_mod_prime(&f, &[3], 5, PrimeField::new(13), EngineOptions::default()),
            Err(Error::ModulusTooSmall { .. })
        ));
    }

    #[test]
    fn split2_trinomial_example() {
        // 1 + X1 + X1^2 with a constant second variable
        let a = tensor(vec![3, 1], vec![1, 1, 1]);
        let ctx = PrimeContext::new(&[2, 0], &[2, 0], 2, PrimeField::new(Q), EngineOptions::default()).unwrap();
        assert!(ctx.uses_split2());
        assert_eq!(split2(&a, &ctx, &mut Tally::default()).unwrap(), 3);
    }

    #[test]
    fn split2_only_middle_term() {
        // X1 * (1 + X2)^1: [ (X1 (1+X2))^5 ]_(5, 2) = C(5,2)
        let a = tensor(vec![3, 2], vec![0, 0, 1, 1, 0, 0]);
        let ctx = PrimeContext::new(&[2, 1], &[5, 2], 5, PrimeField::new(Q), EngineOptions::default()).unwrap();
        assert_eq!(split2(&a, &ctx, &mut Tally::default()).unwrap(), 10);
    }

    #[test]
    fn split2_rejects_other_shapes() {
        let a = tensor(vec![2, 2], vec![1, 1, 1, 1]);
        let ctx = PrimeContext::new(&[1, 1], &[2, 2], 2, PrimeField::new(Q), EngineOptions::default()).unwrap();
        assert!(matches!(split2(&a, &ctx, &mut Tally::default()), Err(Error::Split2Precondition(_))));
        let a = tensor(vec![3, 2], vec![1; 6]);
        let ctx = PrimeContext::new(&[2, 1], &[3, 2], 2, PrimeField::new(Q), EngineOptions::default()).unwrap();
        assert!(!ctx.uses_split2());
        assert!(split2(&a, &ctx, &mut Tally::default()).is_err());
    }

    #[test]
    fn trinomials_mod_prime() {
        let f = PrimeField::new(Q);
        // p = 6: 1, 30, 90, 20
        assert_eq!(trinomial_table(6, &f), vec![1, 30, 90, 20]);
        assert_eq!(trinomial_table(1, &f), vec![1]);
    }

    #[test]
    fn work_count_matches_node_product() {
        let f = nf("X*Y^-1 + Y*Z + Z^-1 + X^-1 + 2");
        let p = 3;
        let t = f.target_index(p, &[0, 0, 0]).unwrap();
        let opts = EngineOptions { split2: false, ..Default::default() };
        let mut tally = Tally::default();
        coefficient_mod_prime_tallied(&f, &t, p, PrimeField::new(Q), opts, &mut tally).unwrap();
        let expected: u64 = f.degrees.iter().map(|d| (d * p as usize + 1) as u64).product();
        assert_eq!(tally.base_powers, expected);
    }

    #[test]
    fn prefix_max_policy_agrees() {
        let f = nf("X^2 + Y + X^-1*Y^-1 + 3*X*Y");
        let field = PrimeField::new(Q);
        for p in 0..7 {
            let t = f.target_index(p, &[0, 0]).unwrap();
            let a = coefficient_mod_prime(&f, &t, p, field, EngineOptions::default()).unwrap();
            let b = coefficient_mod_prime(
                &f,
                &t,
                p,
                field,
                EngineOptions { split2: false, node_policy: NodePolicy::PrefixMax },
            )
            .unwrap();
            assert_eq!(a, b, "p={p}");
        }
    }
}
