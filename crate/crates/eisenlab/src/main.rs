//! Command-line front end: every subcommand prints one machine-readable
//! report to stdout (JSON by default, CSV with --format csv) and keeps
//! diagnostics on stderr. Exit codes: 0 success, 2 bad invocation, 3 a
//! numeric routine gave up (pole, lost accuracy, degenerate input).

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use eisenlab::error::{Error, Result};
use eisenlab::geom::{CosetSelect, QuadratureSpec};
use eisenlab::report::{self, EvalTarget};

#[derive(Parser)]
#[command(
    name = "eisenlab",
    about = "Eisenstein series on Gamma_0(N): cusps, scattering, renormalized kernels",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format for the report on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Relative tolerance for quadrature-backed commands.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Rayon worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct CharArg {
    /// Character selector: trivial | <q> | <q>:<e1,e2,...> | primitive:<q>.
    #[arg(long = "char", default_value = "trivial")]
    character: String,
}

#[derive(Subcommand)]
enum Command {
    /// List the cusps of Gamma_0(N) with widths (and singularity for a character).
    Cusps {
        #[arg(long)]
        level: u64,
        /// Optional character selector to mark singular cusps.
        #[arg(long = "char")]
        character: Option<String>,
    },
    /// Scattering row phi_{inf,a}(1/2+iT, chi) with the unitarity residual.
    Scattering {
        #[arg(long)]
        level: u64,
        #[command(flatten)]
        chi: CharArg,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
    },
    /// Evaluate one Eisenstein series at a point.
    Eval {
        /// classical | pair | pair-star | cusp.
        #[arg(long)]
        kind: String,
        /// Level for kind = cusp.
        #[arg(long)]
        level: Option<u64>,
        /// Character selector for kind = cusp.
        #[arg(long = "char")]
        character: Option<String>,
        /// First character selector for kind = pair / pair-star.
        #[arg(long)]
        chi1: Option<String>,
        /// Second character selector for kind = pair / pair-star.
        #[arg(long)]
        chi2: Option<String>,
        /// Cusp u/f (or inf) for kind = cusp.
        #[arg(long)]
        cusp: Option<String>,
        /// Point x,y in the upper half plane.
        #[arg(long)]
        z: String,
        /// Spectral parameter re,im.
        #[arg(long)]
        s: String,
    },
    /// Traced kernel coefficients: c0 (exact and display shape), cg, oscillating weights.
    Kernel {
        #[arg(long)]
        level: u64,
        #[command(flatten)]
        chi: CharArg,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Trace target M | N (default M = N).
        #[arg(long = "traced-to")]
        traced_to: Option<u64>,
        /// Base the kernel on |E_a|^2 for this cusp instead of the full row.
        #[arg(long = "al-cusp")]
        al_cusp: Option<String>,
    },
    /// Pair the traced kernel against a test-function slice: lhs, main, alpha, residual.
    Que {
        #[arg(long)]
        level: u64,
        #[command(flatten)]
        chi: CharArg,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long = "traced-to")]
        traced_to: Option<u64>,
        #[arg(long = "al-cusp")]
        al_cusp: Option<String>,
        /// Coset slice index, or "all" for the full bump.
        #[arg(long, default_value = "all")]
        coset: String,
    },
    /// Two-route check of the coset-summed pairing at a prime trace level.
    Consistency {
        #[arg(long)]
        level: u64,
        #[command(flatten)]
        chi: CharArg,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Prime trace target M | N.
        #[arg(long = "traced-to")]
        traced_to: u64,
    },
    /// The explicit coset family inside the bounded strip at large level.
    Portion {
        #[arg(long)]
        level: u64,
    },
    /// Fast exact-identity battery over all levels up to a bound.
    Suite {
        #[arg(long = "max-level", default_value_t = 20)]
        max_level: u64,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
    },
}

fn parse_point(text: &str, what: &str) -> Result<Complex64> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| Error::Domain(format!("{what} '{text}': expected re,im")))?;
    let re: f64 =
        a.trim().parse().map_err(|_| Error::Domain(format!("{what} '{text}': bad real part")))?;
    let im: f64 = b
        .trim()
        .parse()
        .map_err(|_| Error::Domain(format!("{what} '{text}': bad imaginary part")))?;
    Ok(Complex64::new(re, im))
}

fn quad_spec(tol: Option<f64>) -> QuadratureSpec {
    let mut spec = QuadratureSpec::default();
    if let Some(t) = tol {
        spec.target_rel_error = t;
    }
    spec
}

fn emit<T: Serialize>(report: &T, format: Format) -> Result<()> {
    let value = serde_json::to_value(report)
        .map_err(|e| Error::Domain(format!("serialization failed: {e}")))?;
    let text = match format {
        Format::Json => {
            let mut t = serde_json::to_string_pretty(&value)
                .map_err(|e| Error::Domain(format!("serialization failed: {e}")))?;
            t.push('\n');
            t
        }
        Format::Csv => report::to_csv(&value),
    };
    use std::io::Write;
    if let Err(e) = std::io::stdout().write_all(text.as_bytes()) {
        // a closed pipe downstream is a reader's choice, not our failure
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        return Err(Error::Domain(format!("could not write the report: {e}")));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Cusps { level, character } => {
            let chi = character
                .as_deref()
                .map(|sel| report::parse_character(sel, Some(*level)))
                .transpose()?;
            emit(&report::cusps_report(*level, chi.as_ref())?, cli.format)
        }
        Command::Scattering { level, chi, t } => {
            let chi = report::parse_character(&chi.character, Some(*level))?;
            emit(&report::scattering_report(*level, &chi, *t)?, cli.format)
        }
        Command::Eval { kind, level, character, chi1, chi2, cusp, z, s } => {
            let z = parse_point(z, "z")?;
            let s = parse_point(s, "s")?;
            let need = |opt: &Option<String>, name: &str| -> Result<String> {
                opt.clone().ok_or_else(|| Error::Domain(format!("--{name} is required for kind = {kind}")))
            };
            let rep = match kind.as_str() {
                "classical" => report::eval_report(&EvalTarget::Classical, z, s)?,
                "pair" | "pair-star" => {
                    let c1 = report::parse_character(&need(chi1, "chi1")?, None)?;
                    let c2 = report::parse_character(&need(chi2, "chi2")?, None)?;
                    report::eval_report(
                        &EvalTarget::Pair { chi1: &c1, chi2: &c2, star: kind == "pair-star" },
                        z,
                        s,
                    )?
                }
                "cusp" => {
                    let n = level.ok_or_else(|| Error::Domain("--level is required for kind = cusp".into()))?;
                    let chi = report::parse_character(
                        character.as_deref().unwrap_or("trivial"),
                        Some(n),
                    )?;
                    let cusp = report::parse_cusp(&need(cusp, "cusp")?, n)?;
                    report::eval_report(&EvalTarget::CuspSeries { level: n, chi: &chi, cusp: &cusp }, z, s)?
                }
                other => {
                    return Err(Error::Domain(format!(
                        "unknown kind '{other}': classical | pair | pair-star | cusp"
                    )))
                }
            };
            emit(&rep, cli.format)
        }
        Command::Kernel { level, chi, t, traced_to, al_cusp } => {
            let chi = report::parse_character(&chi.character, Some(*level))?;
            let a = al_cusp.as_deref().map(|txt| report::parse_cusp(txt, *level)).transpose()?;
            let kernel = report::kernel_for(*level, &chi, *t, a.as_ref())?;
            emit(&report::kernel_report(&kernel, traced_to.unwrap_or(*level))?, cli.format)
        }
        Command::Que { level, chi, t, traced_to, al_cusp, coset } => {
            let chi = report::parse_character(&chi.character, Some(*level))?;
            let a = al_cusp.as_deref().map(|txt| report::parse_cusp(txt, *level)).transpose()?;
            let kernel = report::kernel_for(*level, &chi, *t, a.as_ref())?;
            let select = if coset == "all" {
                CosetSelect::All
            } else {
                let j: usize = coset
                    .parse()
                    .map_err(|_| Error::Domain(format!("coset '{coset}': expected an index or 'all'")))?;
                CosetSelect::Index(j)
            };
            let m = traced_to.unwrap_or(*level);
            emit(&report::que_report(&kernel, m, select, &quad_spec(cli.tol))?, cli.format)
        }
        Command::Consistency { level, chi, t, traced_to } => {
            let chi = report::parse_character(&chi.character, Some(*level))?;
            let kernel = report::kernel_for(*level, &chi, *t, None)?;
            emit(
                &report::consistency_report(&kernel, *traced_to, &quad_spec(cli.tol))?,
                cli.format,
            )
        }
        Command::Portion { level } => emit(&report::portion_report(*level)?, cli.format),
        Command::Suite { max_level, t } => emit(&report::suite_report(*max_level, *t)?, cli.format),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("eisenlab: could not size the thread pool: {e}");
            std::process::exit(2);
        }
    }
    match run(&cli) {
        Ok(()) => {}
        Err(err) => {
            let obj = report::error_object(&err);
            println!("{}", serde_json::to_string_pretty(&obj).expect("error object serializes"));
            eprintln!("eisenlab: {err}");
            let code = match err {
                Error::Domain(_) => 2,
                _ => 3,
            };
            std::process::exit(code);
        }
    }
}
