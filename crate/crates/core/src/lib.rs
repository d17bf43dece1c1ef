//! Exact coefficients of powers of multivariate Laurent polynomials.
//!
//! A coefficient `[h^p]_alpha` is computed modulo a set of word-sized primes
//! by recursive univariate interpolation ([`engine`]) and reconstructed with
//! the Chinese remainder theorem ([`rns`]). Constant-term series built this
//! way feed an exact search for linear recurrences and the corresponding
//! differential operators ([`recurrence`]).
//!
//! ```
//! use ctpower::{laurent_coefficient, InputFormat, LaurentPolynomial, PipelineConfig};
//!
//! let h = LaurentPolynomial::read("X + X^-1", InputFormat::Expr).unwrap();
//! let c = laurent_coefficient(&h, 6, &[0], &PipelineConfig::default()).unwrap();
//! assert_eq!(c.to_string(), "20");
//! ```

pub mod engine;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod interp;
pub mod laurent;
pub mod linalg;
pub mod oracle;
pub mod pipeline;
pub mod recurrence;
pub mod rns;
pub mod tensor;

pub use engine::{coefficient_mod_prime, EngineOptions, NodePolicy, PrimeContext, Tally};
pub use error::{Error, Result};
pub use field::PrimeField;
pub use interp::{inverse_vandermonde_row, InverseRow, NodeSet};
pub use laurent::{InputFormat, LaurentPolynomial, NormalizedPolynomial, Term};
pub use oracle::{known_family, naive_power_coeff, Family};
pub use pipeline::{laurent_coefficient, Pipeline, PipelineConfig};
pub use recurrence::{
    constant_term_series, fit_recurrence, recurrence_to_operator, search_recurrence, verify_recurrence,
    DifferentialOperator, Recurrence, Series,
};
pub use rns::{ModulusSet, RnsValue};
pub use tensor::CoefficientTensor;
