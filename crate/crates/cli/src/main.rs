use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use ctpower::engine::coefficient_mod_prime_tallied;
use ctpower::oracle::{naive_power_coeff_limited, DEFAULT_SIZE_LIMIT};
use ctpower::recurrence::DEFAULT_EXTRA;
use ctpower::rns::select_primes;
use ctpower::{
    constant_term_series, fixtures, known_family, recurrence_to_operator, search_recurrence, EngineOptions, Error,
    Family, InputFormat, LaurentPolynomial, ModulusSet, NodePolicy, Pipeline, PipelineConfig, PrimeField, Series,
    Tally,
};

#[derive(Parser)]
#[command(name = "ctpower", version, about = "Exact coefficients of Laurent polynomial powers and operator search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the coefficient [h^p]_index.
    Coeff {
        #[command(flatten)]
        input: PolyInput,
        #[arg(long)]
        power: u32,
        /// Exponent vector, comma separated; defaults to the constant term.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        index: Option<Vec<i64>>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Write the constant-term series a_0..a_count as JSON.
    Series {
        #[command(flatten)]
        input: PolyInput,
        #[arg(long)]
        count: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        quiet: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Search for recurrences satisfied by a series and print them as operators.
    Findop {
        /// Series JSON as written by `series`.
        #[arg(long)]
        series: PathBuf,
        /// Largest number of polynomials P_0..P_k.
        #[arg(long, default_value_t = 9)]
        max_length: usize,
        /// Largest degree of each P_i.
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        /// Equations withheld to confirm a fit.
        #[arg(long, default_value_t = DEFAULT_EXTRA as u64, value_parser = clap::value_parser!(u64).range(1..))]
        extra: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Compute a coefficient by plain integer arithmetic.
    Oracle {
        #[command(flatten)]
        input: PolyInput,
        /// A closed-form family instead of a polynomial: central_binomial, three_term or dwork4.
        #[arg(long, conflicts_with_all = ["poly", "fixture"])]
        family: Option<String>,
        #[arg(long)]
        power: u32,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        index: Option<Vec<i64>>,
        /// Refuse dense intermediate powers with more entries than this.
        #[arg(long, default_value_t = DEFAULT_SIZE_LIMIT)]
        limit: u128,
    },
    /// Time the engine against the oracle for several powers.
    Bench {
        #[command(flatten)]
        input: PolyInput,
        #[arg(long, value_delimiter = ',', required = true)]
        powers: Vec<u32>,
        #[arg(long, default_value_t = DEFAULT_SIZE_LIMIT)]
        limit: u128,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run a handful of quick consistency checks.
    Selftest {
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args)]
struct PolyInput {
    /// Polynomial file, as an expression or JSON.
    #[arg(long, conflicts_with = "fixture")]
    poly: Option<PathBuf>,
    /// Built-in polynomial: 24, 38, 39, 41 or dwork4.
    #[arg(long)]
    fixture: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Auto)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Auto,
    Expr,
    Json,
}

#[derive(Args)]
struct RunArgs {
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long, default_value_t = 31, value_parser = clap::value_parser!(u32).range(20..=31))]
    prime_bits: u32,
    /// Use the generic recursion all the way down.
    #[arg(long)]
    no_split2: bool,
    /// Reorder variables by descending degree.
    #[arg(long)]
    sort_vars: bool,
    /// Use the largest remaining degree for every level's node count.
    #[arg(long)]
    prefix_max_nodes: bool,
}

impl RunArgs {
    fn config(&self) -> PipelineConfig {
        PipelineConfig {
            threads: self.threads,
            prime_bits: self.prime_bits,
            engine: EngineOptions {
                split2: !self.no_split2,
                node_policy: if self.prefix_max_nodes {
                    NodePolicy::PrefixMax
                } else {
                    NodePolicy::PerVariable
                },
            },
            sort_vars: self.sort_vars,
        }
    }
}

/// Failures mapped to exit codes.
enum Failure {
    Usage(String),
    Input(String),
    Guard(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SizeGuard { .. } => Failure::Guard(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Guard(msg)) => {
            eprintln!("refused: {msg}");
            ExitCode::from(4)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("selftest failed: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Coeff { input, power, index, run } => {
            let h = load(&input)?;
            let alpha = index_or_zero(index, &h)?;
            let c = Pipeline::new(run.config())?.coefficient(&h, power, &alpha)?;
            println!("{c}");
        }
        Command::Series { input, count, out, quiet, run } => {
            let h = load(&input)?;
            let pipeline = Pipeline::new(run.config())?;
            let start = Instant::now();
            let s = constant_term_series(&h, count, &pipeline, |p, a| {
                if !quiet {
                    eprintln!("a_{p}: {} digits, {:.1}s", a.magnitude().to_string().len(), start.elapsed().as_secs_f64());
                }
            })?;
            emit(out.as_deref(), &(s.to_json() + "\n"))?;
        }
        Command::Findop { series, max_length, max_degree, extra, out, threads } => {
            let s = Series::from_json(&fs::read_to_string(&series)?)?;
            if max_length == 0 {
                return Err(Failure::Usage("--max-length must be at least 1".into()));
            }
            let search = || search_recurrence(&s, max_length - 1, max_degree, extra as usize);
            let pool = Pipeline::new(PipelineConfig {
                threads,
                ..Default::default()
            })?;
            let hits = pool.install(search);
            let text = if hits.is_empty() {
                "no operator found\n".to_string()
            } else {
                hits.iter()
                    .map(|r| format!("{}\n", recurrence_to_operator(r)))
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            emit(out.as_deref(), &text)?;
        }
        Command::Oracle { input, family, power, index, limit } => {
            let h = match &family {
                Some(name) => name.parse::<Family>()?.polynomial(),
                None => load(&input)?,
            };
            let alpha = index_or_zero(index, &h)?;
            let c = naive_power_coeff_limited(&h, power, &alpha, limit)?;
            if let Some(name) = family {
                if alpha.iter().all(|&a| a == 0) {
                    let closed = known_family(name.parse()?, power);
                    if closed != c {
                        return Err(Failure::Check(format!("closed form gives {closed}, oracle {c}")));
                    }
                }
            }
            println!("{c}");
        }
        Command::Bench { input, powers, limit, run } => bench(&load(&input)?, &powers, limit, &run)?,
        Command::Selftest { run } => selftest(&run)?,
    }
    Ok(())
}

fn load(input: &PolyInput) -> Result<LaurentPolynomial, Failure> {
    let format = match input.format {
        Format::Auto => InputFormat::Auto,
        Format::Expr => InputFormat::Expr,
        Format::Json => InputFormat::Json,
    };
    match (&input.poly, &input.fixture) {
        (Some(path), None) => Ok(LaurentPolynomial::read(&fs::read_to_string(path)?, format)?),
        (None, Some(name)) => Ok(fixtures::polynomial(name)?),
        _ => Err(Failure::Usage("give exactly one of --poly or --fixture".into())),
    }
}

fn index_or_zero(index: Option<Vec<i64>>, h: &LaurentPolynomial) -> Result<Vec<i64>, Failure> {
    let alpha = index.unwrap_or_else(|| vec![0; h.nvars()]);
    if alpha.len() != h.nvars() {
        return Err(Failure::Input(format!(
            "index has {} entries, the polynomial has {} variables",
            alpha.len(),
            h.nvars()
        )));
    }
    Ok(alpha)
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn bench(h: &LaurentPolynomial, powers: &[u32], limit: u128, run: &RunArgs) -> Outcome {
    let config = run.config();
    let pipeline = Pipeline::new(config)?;
    let nf = h.normalize()?;
    println!(
        "{:>5}  {:>10}  {:>10}  {:>12}  {:>14}  {:<8}  value",
        "p", "engine_s", "oracle_s", "peak_elems", "mults/prime", "oracle"
    );
    for &p in powers {
        let zero = vec![0; h.nvars()];
        let t = Instant::now();
        let value = pipeline.coefficient(h, p, &zero)?;
        let engine_s = t.elapsed().as_secs_f64();

        let mut tally = Tally::default();
        if let Some(target) = nf.target_index(p, &zero) {
            let widest = nf.degrees.iter().max().copied().unwrap_or(0) * p as usize;
            let q = select_primes(0, widest.max(p as usize) as u64)?.moduli()[0];
            coefficient_mod_prime_tallied(&nf, &target, p, PrimeField::new(q), config.engine, &mut tally)?;
        }

        let t = Instant::now();
        let (oracle_s, status) = match naive_power_coeff_limited(h, p, &zero, limit) {
            Ok(c) if c == value => (format!("{:.3}", t.elapsed().as_secs_f64()), "agree"),
            Ok(_) => (format!("{:.3}", t.elapsed().as_secs_f64()), "DIFFER"),
            Err(Error::SizeGuard { .. }) => ("-".to_string(), "refused"),
            Err(e) => return Err(e.into()),
        };
        println!(
            "{p:>5}  {engine_s:>10.3}  {oracle_s:>10}  {:>12}  {:>14}  {status:<8}  {value}",
            tally.peak_storage(),
            tally.mults
        );
        if status == "DIFFER" {
            return Err(Failure::Check(format!("engine and oracle disagree at p = {p}")));
        }
    }
    Ok(())
}

fn selftest(run: &RunArgs) -> Outcome {
    let pipeline = Pipeline::new(run.config())?;
    let mut failures = Vec::new();
    let mut check = |name: &str, ok: bool| {
        println!("{} {name}", if ok { "ok  " } else { "FAIL" });
        if !ok {
            failures.push(name.to_string());
        }
    };

    let binomial = Family::CentralBinomial.polynomial();
    check(
        "central binomial p = 6",
        pipeline.constant_term(&binomial, 6)? == BigInt::from(20),
    );
    let dwork = Family::Dwork4.polynomial();
    check("dwork4 p = 10", pipeline.constant_term(&dwork, 10)? == BigInt::from(113_400));

    let h = LaurentPolynomial::read("2*X*Y^-1 - 3*Y + X^-1*Y^2 - 1", InputFormat::Expr)?;
    let mut agree = true;
    for p in 0..=6 {
        for alpha in [[0, 0], [1, 0], [-2, 3]] {
            agree &= pipeline.coefficient(&h, p, &alpha)? == naive_power_coeff_limited(&h, p, &alpha, DEFAULT_SIZE_LIMIT)?;
        }
    }
    check("engine matches oracle", agree);

    let s = constant_term_series(&binomial, 20, &pipeline, |_, _| {})?;
    let hits = search_recurrence(&s, 3, 2, DEFAULT_EXTRA);
    check(
        "central binomial operator",
        hits.first()
            .is_some_and(|r| recurrence_to_operator(r).to_string() == "z^0 * ( 1 θ )\nz^2 * ( -4 θ - 4 )"),
    );

    let ms = ModulusSet::new(vec![2_147_483_647, 2_147_483_629, 2_147_483_587])?;
    let x: BigInt = "-12345678901234567890123".parse().expect("literal");
    check("residue roundtrip", ms.reconstruct(&ms.reduce(&x))? == x);

    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(failures.join(", ")))
    }
}
