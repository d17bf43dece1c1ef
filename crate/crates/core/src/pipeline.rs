//! Exact coefficients: bound, prime selection, per-prime engine runs in
//! parallel, and reconstruction.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::engine::{EngineOptions, PrimeContext, Tally};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::laurent::{LaurentPolynomial, NormalizedPolynomial};
use crate::rns::{coefficient_bound_bits, select_primes_below, ModulusSet, RnsValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PipelineConfig {
    /// Worker threads; 0 uses every available core.
    pub threads: usize,
    /// Primes are taken below `2^prime_bits`.
    pub prime_bits: u32,
    pub engine: EngineOptions,
    /// Reorder variables by descending degree before normalizing.
    pub sort_vars: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            threads: 0,
            prime_bits: 31,
            engine: EngineOptions::default(),
            sort_vars: false,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if !(20..=31).contains(&self.prime_bits) {
            return Err(Error::Config(format!(
                "prime bits must lie in 20..=31, got {}",
                self.prime_bits
            )));
        }
        Ok(())
    }
}

/// A configured runner owning its worker pool.
pub struct Pipeline {
    config: PipelineConfig,
    pool: Option<rayon::ThreadPool>,
}

impl Pipeline {
    pub fn new(config: PipelineConfig) -> Result<Self> {
        config.validate()?;
        let pool = if config.threads > 0 {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(config.threads)
                    .build()
                    .map_err(|e| Error::Config(e.to_string()))?,
            )
        } else {
            None
        };
        Ok(Self { config, pool })
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    /// `[h^power]_alpha` exactly.
    pub fn coefficient(&self, h: &LaurentPolynomial, power: u32, alpha: &[i64]) -> Result<BigInt> {
        if alpha.len() != h.nvars() {
            return Err(Error::DimensionMismatch {
                expected: h.nvars(),
                found: alpha.len(),
            });
        }
        let (h, alpha) = if self.config.sort_vars {
            let (sorted, order) = h.sorted_by_degree()?;
            let alpha: Vec<i64> = order.iter().map(|&r| alpha[r]).collect();
            (sorted, alpha)
        } else {
            (h.clone(), alpha.to_vec())
        };
        let nf = h.normalize()?;
        let Some(target) = nf.target_index(power, &alpha) else {
            return Ok(BigInt::zero());
        };
        let bits = coefficient_bound_bits(&h.total_weight(), power);
        let widest = nf.degrees.iter().max().copied().unwrap_or(0) * power as usize;
        let moduli = select_primes_below(bits, widest.max(power as usize) as u64, self.config.prime_bits)?;
        self.install(|| self.exact(&nf, &target, power, &moduli))
    }

    /// The constant term `[h^power]_0`.
    pub fn constant_term(&self, h: &LaurentPolynomial, power: u32) -> Result<BigInt> {
        self.coefficient(h, power, &vec![0; h.nvars()])
    }

    /// Runs `f` inside this pipeline's worker pool.
    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        match &self.pool {
            Some(pool) => pool.install(f),
            None => f(),
        }
    }

    fn exact(&self, nf: &NormalizedPolynomial, target: &[usize], power: u32, moduli: &ModulusSet) -> Result<BigInt> {
        let contexts = moduli
            .moduli()
            .iter()
            .map(|&q| PrimeContext::new(&nf.degrees, target, power, PrimeField::new(q), self.config.engine))
            .collect::<Result<Vec<_>>>()?;
        let tensors: Vec<_> = moduli.moduli().iter().map(|&q| nf.reduce_mod(q)).collect();
        let tasks: Vec<(usize, usize)> = contexts
            .iter()
            .enumerate()
            .flat_map(|(i, ctx)| (0..ctx.top_node_count()).map(move |s| (i, s)))
            .collect();
        let terms = tasks
            .par_iter()
            .map(|&(i, s)| contexts[i].top_node_term(&tensors[i], s, &mut Tally::default()))
            .collect::<Result<Vec<u64>>>()?;
        let mut residues = vec![0u64; contexts.len()];
        for (&(i, _), t) in tasks.iter().zip(terms) {
            residues[i] = contexts[i].field().add(residues[i], t);
        }
        moduli.reconstruct(&RnsValue { residues })
    }
}

/// `[h^power]_alpha` with a one-off pipeline.
pub fn laurent_coefficient(h: &LaurentPolynomial, power: u32, alpha: &[i64], config: &PipelineConfig) -> Result<BigInt> {
    Pipeline::new(*config)?.coefficient(h, power, alpha)
}
