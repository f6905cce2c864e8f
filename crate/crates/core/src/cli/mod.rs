//! Command-line front end. `run` parses arguments, dispatches, and maps outcomes to exit codes:
//! 0 when everything certified, 1 on numeric failure, 2 on usage errors.

mod records;

use std::ffi::OsString;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::{Float, Integer};

use crate::constants::{constant, ConstantId, MIN_DIGITS};
use crate::error::Error;
use crate::kernels::{identity_registry, lookup_identity, KernelSpec};
use crate::precision::{bits_for_digits, format_sig, PrecisionReal};
use crate::quadrature::{integrate, residual_upper, verify_identity, VERIFY_SLACK};
use crate::reconstruct::{coeff_table, fourier_table, poly_table, pslq, CoeffFamily, PolyFamily, RelationStatus};

pub use records::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

/// Settings shared by every subcommand.
#[derive(Clone, Debug, Args)]
pub struct RunConfig {
    /// Decimal digits to certify
    #[arg(long, global = true, env = "MALMSTEN_DIGITS", default_value_t = 30,
          value_parser = clap::value_parser!(u32).range(MIN_DIGITS as i64..=5000))]
    pub digits: u32,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Largest coefficient magnitude for relation searches
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub max_height: u64,
    /// Seed for randomized sweeps
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Parser)]
#[command(
    name = "malmsten",
    version,
    about = "Certified quadrature and exact reconstruction for odd zeta and even beta integrals"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check registry identities by quadrature
    Verify {
        /// Identity ids, or `all`
        ids: Vec<String>,
        /// Print the registry instead of checking it
        #[arg(long)]
        list: bool,
    },
    /// Recover rational coefficient rows of a family
    Coeffs {
        /// sin4nx, cos, F7..F11b, F5z:k, F5b:k, F6z:k, F6b:k, xi, lambda
        #[arg(long)]
        family: String,
        /// Largest row
        #[arg(long, default_value_t = 5)]
        n: u32,
    },
    /// Build Xi_n or Lambda_n and integrate it back
    Poly {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: u32,
    },
    /// Integer relation among constants and kernel integrals
    Pslq {
        /// Constant ids (pi, zeta(3), beta2-over-pi1, ...) or kernel ids (F3:1, F5:0:2, ...)
        values: Vec<String>,
        /// Run this many randomized planted-relation trials instead (uses --seed)
        #[arg(long)]
        planted: Option<u32>,
        /// Vector length for planted trials
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(2..=12))]
        size: u32,
    },
    /// Partial sums of the cosine series for pi/4
    Fourier {
        /// Number of terms
        #[arg(default_value_t = 12)]
        k: u32,
    },
    /// Evaluate constants
    Constants { ids: Vec<String> },
    /// Integrate one kernel
    Integrate { kernel: String },
}

/// Outcome of a command: rendered output and exit status.
pub struct Outcome {
    pub stdout: String,
    pub code: u8,
}

fn usage(e: &Error) -> bool {
    matches!(e, Error::UnknownId(_) | Error::Parse(_) | Error::Domain(_) | Error::Unsupported(_))
}

fn fail(e: Error) -> (String, u8) {
    let code = if usage(&e) { 2 } else { 1 };
    (format!("error: {e}"), code)
}

/// Parse and run; returns the process exit code.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let mut so = std::io::stdout().lock();
            let _ = so.write_all(out.stdout.as_bytes());
            ExitCode::from(out.code)
        }
        Err((msg, code)) => {
            eprintln!("{msg}");
            ExitCode::from(code)
        }
    }
}

/// Run a parsed command, returning rendered output or an error message with its exit code.
pub fn execute(cli: &Cli) -> Result<Outcome, (String, u8)> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Verify { ids, list } => cmd_verify(ids, *list, cfg),
        Command::Coeffs { family, n } => cmd_coeffs(family, *n, cfg),
        Command::Poly { family, n } => cmd_poly(family, *n, cfg),
        Command::Pslq { values, planted, size } => match planted {
            Some(t) => cmd_planted(*t, *size as usize, cfg),
            None => cmd_pslq(values, cfg),
        },
        Command::Fourier { k } => cmd_fourier(*k, cfg),
        Command::Constants { ids } => cmd_constants(ids, cfg),
        Command::Integrate { kernel } => cmd_integrate(kernel, cfg),
    }
}

fn emit<R: Render>(r: &R, cfg: &RunConfig, code: u8) -> Result<Outcome, (String, u8)> {
    let stdout = match cfg.format {
        OutputFormat::Text => r.text(),
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(r).map_err(|e| (e.to_string(), 1))?;
            s.push('\n');
            s
        }
        OutputFormat::Csv => {
            let (header, rows) = r.csv();
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&header).map_err(|e| (e.to_string(), 1))?;
            for row in rows {
                w.write_record(&row).map_err(|e| (e.to_string(), 1))?;
            }
            String::from_utf8(w.into_inner().map_err(|e| (e.to_string(), 1))?).expect("csv output is utf-8")
        }
    };
    Ok(Outcome { stdout, code })
}

fn dec(x: &PrecisionReal, sig: u32) -> String {
    x.to_decimal(sig as usize)
}

fn cmd_verify(ids: &[String], list: bool, cfg: &RunConfig) -> Result<Outcome, (String, u8)> {
    if list {
        let recs: Vec<IdentityListing> = identity_registry()
            .iter()
            .map(|s| IdentityListing { id: s.id.clone(), description: s.description.clone() })
            .collect();
        return emit(&IdentityList(recs), cfg, 0);
    }
    if ids.is_empty() {
        return Err(("error: give identity ids or `all` (see --list)".into(), 2));
    }
    let chosen: Vec<String> = if ids.iter().any(|i| i == "all") {
        identity_registry().iter().map(|s| s.id.clone()).collect()
    } else {
        for id in ids {
            lookup_identity(id).map_err(fail)?;
        }
        ids.to_vec()
    };
    let d = cfg.digits;
    let results: Vec<VerifyRecord> = chosen
        .par_iter()
        .map(|id| match verify_identity(id, d) {
            Ok(c) => VerifyRecord {
                id: c.id.clone(),
                pass: c.pass,
                lhs: dec(&c.lhs, d),
                rhs: dec(&c.rhs, d),
                residual_bound: c.residual_bound.clone(),
                threshold: c.threshold.clone(),
                error: None,
            },
            Err(e) => VerifyRecord {
                id: id.clone(),
                pass: false,
                lhs: String::new(),
                rhs: String::new(),
                residual_bound: String::new(),
                threshold: String::new(),
                error: Some(e.to_string()),
            },
        })
        .collect();
    let all_pass = results.iter().all(|r| r.pass);
    let report = VerifyReport { digits: d, slack_digits: VERIFY_SLACK, all_pass, results };
    emit(&report, cfg, if all_pass { 0 } else { 1 })
}

fn cmd_coeffs(family: &str, n: u32, cfg: &RunConfig) -> Result<Outcome, (String, u8)> {
    if n == 0 {
        return Err(("error: --n must be at least 1".into(), 2));
    }
    if let Ok(pf) = family.parse::<PolyFamily>() {
        let polys = poly_table(pf, n, cfg.digits).map_err(fail)?;
        let rows = polys
            .iter()
            .enumerate()
            .map(|(i, p)| {
                // even polynomial: list x^{2n-2}, .., x^0
                let coeffs = p.coeffs().iter().step_by(2).rev().map(|c| c.to_string()).collect();
                CoeffRecord {
                    n: i as u32 + 1,
                    coeffs,
                    certified: true,
                    residual_bound: String::new(),
                    digits_used: cfg.digits,
                }
            })
            .collect();
        let t = CoeffReport { family: pf.to_string(), basis: basis_of_poly(pf).into(), rows };
        return emit(&t, cfg, 0);
    }
    let fam: CoeffFamily = family.parse().map_err(fail)?;
    let table = coeff_table(&fam, n, cfg.digits).map_err(fail)?;
    let all = table.rows.iter().all(|r| r.certified);
    let rows = table
        .rows
        .iter()
        .map(|r| CoeffRecord {
            n: r.n,
            coeffs: r.coeffs.iter().map(|c| c.to_string()).collect(),
            certified: r.certified,
            residual_bound: r.residual_bound.clone(),
            digits_used: r.digits_used,
        })
        .collect();
    let t = CoeffReport { family: table.family, basis: table.basis.to_string(), rows };
    emit(&t, cfg, if all { 0 } else { 1 })
}

fn basis_of_poly(pf: PolyFamily) -> &'static str {
    match pf {
        PolyFamily::Xi => "beta",
        PolyFamily::Lambda => "zeta",
    }
}

fn cmd_poly(family: &str, n: u32, cfg: &RunConfig) -> Result<Outcome, (String, u8)> {
    let pf: PolyFamily = family.parse().map_err(fail)?;
    if n == 0 {
        return Err(("error: --n must be at least 1".into(), 2));
    }
    let d = cfg.digits;
    let p = poly_table(pf, n, d).map_err(fail)?.pop().expect("n >= 1");
    let value = integrate(&pf.kernel(p.clone()), d).map_err(fail)?.value;
    let target = match pf {
        PolyFamily::Xi => ConstantId::BetaOverPi(n),
        PolyFamily::Lambda => ConstantId::ZetaOverPi(n),
    };
    let expected = constant(target, d).map_err(fail)?;
    let bound = residual_upper(&value.sub(&expected));
    let pass = bound < crate::precision::ten_pow_neg(d - VERIFY_SLACK);
    let rec = PolyRecord {
        family: pf.to_string(),
        n,
        polynomial: p.to_string(),
        coeffs: p.coeffs().iter().map(|c| c.to_string()).collect(),
        integral: dec(&value, d),
        expected: target.to_string(),
        residual_bound: format_sig(&bound, 3),
        pass,
    };
    emit(&rec, cfg, if pass { 0 } else { 1 })
}

/// A constant id or a kernel id evaluated to `digits`.
pub fn evaluate_spec(spec: &str, digits: u32) -> crate::Result<PrecisionReal> {
    match spec.parse::<ConstantId>() {
        Ok(c) => constant(c, digits),
        Err(_) => {
            let k: KernelSpec = spec.parse()?;
            Ok(integrate(&k, digits)?.value)
        }
    }
}

fn cmd_pslq(specs: &[String], cfg: &RunConfig) -> Result<Outcome, (String, u8)> {
    if specs.len() < 2 {
        return Err(("error: pslq needs at least two values".into(), 2));
    }
    let d = cfg.digits;
    // parse everything up front so typos are usage errors, not numeric ones
    for s in specs {
        if s.parse::<ConstantId>().is_err() {
            s.parse::<KernelSpec>().map_err(fail)?;
        }
    }
    let values: Vec<PrecisionReal> =
        specs.par_iter().map(|s| evaluate_spec(s, d)).collect::<crate::Result<_>>().map_err(fail)?;
    let r = pslq(&values, d, cfg.max_height).map_err(fail)?;
    let rec = PslqRecord {
        values: specs.to_vec(),
        status: r.status,
        coefficients: r.coefficients.iter().map(|c| c.to_string()).collect(),
        height_bound: r.height_bound,
        digits_used: r.digits_used,
        residual: dec(&r.residual, 10),
        residual_error_bound: r.residual.error_string(),
        norm_lower_bound: r.norm_lower_bound.clone(),
        iterations: r.iterations,
        seed: cfg.seed,
    };
    emit(&rec, cfg, 0)
}

/// Random relations `c_0 v_0 + .. = 0` planted among random reals; every one must be found.
fn cmd_planted(trials: u32, n: usize, cfg: &RunConfig) -> Result<Outcome, (String, u8)> {
    let d = cfg.digits;
    let h = cfg.max_height.min(crate::reconstruct::height_for_digits(n, d)).max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let cases: Vec<(Vec<i64>, Vec<u64>)> = (0..trials)
        .map(|_| {
            let hh = (h as i64).min(i64::MAX / 4);
            let mut c: Vec<i64> = (0..n).map(|_| rng.random_range(-hh..=hh)).collect();
            c[n - 1] = if rng.random_bool(0.5) { 1 } else { -1 };
            let seeds = (0..n - 1).map(|_| rng.random()).collect();
            (c, seeds)
        })
        .collect();
    let prec = bits_for_digits(d) + 32;
    let rows: Vec<PlantedRecord> = cases
        .par_iter()
        .enumerate()
        .map(|(i, (c, seeds))| {
            // v_{n-1} = -c_{n-1} sum_{j<n-1} c_j v_j, so the planted vector is a relation
            let mut v: Vec<Float> = seeds
                .iter()
                .map(|s| {
                    let mut r = ChaCha8Rng::seed_from_u64(*s);
                    let mut x = Float::new(prec);
                    for _ in 0..prec.div_ceil(32) {
                        x = (x << 32) + r.random::<u32>();
                    }
                    x >> (32 * prec.div_ceil(32)) as i32
                })
                .collect();
            // exact sum, then one rounding: the planted relation holds to one ulp
            let mut last = Float::new(prec + 128);
            for (cj, vj) in c.iter().zip(&v) {
                last += Float::with_val(prec + 128, vj * *cj);
            }
            last *= -c[n - 1];
            v.push(Float::with_val(prec, last));
            let vals: Vec<PrecisionReal> = v.into_iter().map(|x| PrecisionReal::rounded(x, d)).collect();
            let planted: Vec<Integer> = c.iter().map(|&x| Integer::from(x)).collect();
            let found = pslq(&vals, d, h);
            let (ok, got) = match &found {
                Ok(r) if r.status == RelationStatus::Found => {
                    let norm: Integer = r.coefficients.iter().map(|x| x.clone().abs()).max().unwrap_or_default();
                    (norm <= h, r.coefficients.iter().map(|x| x.to_string()).collect())
                }
                _ => (false, Vec::new()),
            };
            PlantedRecord { trial: i as u32, planted: planted.iter().map(|x| x.to_string()).collect(), found: got, ok }
        })
        .collect();
    let all = rows.iter().all(|r| r.ok);
    let rep = PlantedReport { seed: cfg.seed, digits: d, height: h, trials, all_found: all, rows };
    emit(&rep, cfg, if all { 0 } else { 1 })
}

fn cmd_fourier(k: u32, cfg: &RunConfig) -> Result<Outcome, (String, u8)> {
    if k == 0 {
        return Err(("error: K must be at least 1".into(), 2));
    }
    let rows = fourier_table(k, cfg.digits).map_err(fail)?;
    let recs: Vec<FourierRecord> = rows
        .iter()
        .map(|r| FourierRecord {
            k: r.k,
            partial_sum: dec(&r.partial_sum, cfg.digits),
            delta: r.delta.to_decimal(12),
            error_bound: r.error_bound.clone(),
        })
        .collect();
    emit(&FourierReport(recs), cfg, 0)
}

const DEFAULT_CONSTANTS: [&str; 8] =
    ["pi", "gamma", "ln2", "lnpi", "zeta(3)", "beta(2)", "zeta3-over-pi2", "beta2-over-pi1"];

fn cmd_constants(ids: &[String], cfg: &RunConfig) -> Result<Outcome, (String, u8)> {
    let list: Vec<String> =
        if ids.is_empty() { DEFAULT_CONSTANTS.iter().map(|s| s.to_string()).collect() } else { ids.to_vec() };
    let parsed: Vec<ConstantId> =
        list.iter().map(|s| s.parse::<ConstantId>()).collect::<crate::Result<_>>().map_err(fail)?;
    let recs: Vec<ConstantRecord> = parsed
        .par_iter()
        .map(|c| {
            constant(*c, cfg.digits).map(|v| ConstantRecord {
                id: c.to_string(),
                value: dec(&v, cfg.digits),
                error_bound: v.error_string(),
                digits: cfg.digits,
            })
        })
        .collect::<crate::Result<_>>()
        .map_err(fail)?;
    emit(&ConstantReport(recs), cfg, 0)
}

fn cmd_integrate(kernel: &str, cfg: &RunConfig) -> Result<Outcome, (String, u8)> {
    let k: KernelSpec = kernel.parse().map_err(fail)?;
    k.validate().map_err(fail)?;
    let r = integrate(&k, cfg.digits).map_err(fail)?;
    let rec = IntegrateRecord {
        kernel: k.to_string(),
        description: k.describe(),
        interval: k.interval().to_string(),
        singularities: k
            .singularities()
            .iter()
            .map(|s| serde_json::to_value(s.class).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default())
            .collect(),
        transform: r.transform.to_string(),
        value: dec(&r.value, cfg.digits),
        error_bound: r.value.error_string(),
        digits: cfg.digits,
        nodes_used: r.nodes_used as u64,
        levels: r.levels,
    };
    emit(&rec, cfg, 0)
}
