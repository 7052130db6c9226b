//! `jtheta`: integer sequences, cumulant and moment polynomials, numeric
//! verification suites and the conjecture explorer.

mod render;

use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use jtheta_core::combinatorics::reconcile_thm11;
use jtheta_core::cumulants::CumulantTable;
use jtheta_core::moments::{
    bell_moments, conjecture_check, conjecture_row, d_sequence, dk_sequence, q4n_sequence, table_alpha,
};
use jtheta_core::numkernel::MIN_DIGITS;
use jtheta_core::verify::{build_grid, default_moduli, run_suite, Suite, DEFAULT_NMAX};
use jtheta_core::{Error, ModulusContext, ModulusSpec, DEFAULT_DIGITS};

use render::{Format, Rendered};

#[derive(Parser, Debug)]
#[command(name = "jtheta", version, about = "Taylor coefficients of theta3: sequences, polynomials and identity checks")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write output to a file instead of standard output.
    #[arg(long, global = true)]
    out: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integer sequences: d(n), Q_{4n}, d_k(n).
    Sequences {
        which: Which,
        #[arg(long, default_value_t = 7)]
        count: usize,
        /// Modulus k = 1/sqrt(p) for `dk`.
        #[arg(long)]
        p: Option<u32>,
        /// Multiply `dk` terms by the tabulated alpha_m.
        #[arg(long)]
        scaled: bool,
    },
    /// Exact polynomials in m = k^2.
    Polys {
        #[arg(long, value_enum, default_value_t = PolyKind::R)]
        kind: PolyKind,
        #[arg(long, default_value_t = 6)]
        count: usize,
    },
    /// Numeric identity checks against theta series.
    Verify {
        suite: SuiteArg,
        #[arg(long, default_value_t = DEFAULT_DIGITS)]
        digits: u32,
        /// Modulus, as a decimal or as `1/sqrt(P)`; repeatable.
        #[arg(long = "k")]
        k: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_NMAX)]
        nmax: u32,
    },
    /// Integrality of alpha_m d_k(m) for k = 1/sqrt(p).
    Conjecture {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 6)]
        count: usize,
    },
    /// Test every reading of the cycle-peak cumulant formula.
    Reconcile {
        #[arg(long, default_value_t = 3)]
        nmax: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Which {
    D,
    Q,
    Dk,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PolyKind {
    /// Moment polynomials R_{2n}.
    R,
    /// Schett self-convolutions P_{2n}.
    P,
    /// Graded cumulants kappa_{2n} / (z/2)^{2n}.
    Kappa,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    All,
    Theorem1,
    Theorem3,
    Romik,
    Symmetry,
    /// Printed forms that are expected to fail.
    Printed,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::All => Suite::All,
            SuiteArg::Theorem1 => Suite::Theorem1,
            SuiteArg::Theorem3 => Suite::Theorem3,
            SuiteArg::Romik => Suite::Romik,
            SuiteArg::Symmetry => Suite::Symmetry,
            SuiteArg::Printed => Suite::Printed,
        }
    }
}

/// Failure classes mapped to exit codes.
enum Failure {
    /// Bad arguments or out-of-domain input: exit 2.
    Usage(String),
    /// Internal inconsistency: exit 1.
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Consistency(_) => Failure::Internal(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn parse_modulus(text: &str) -> Result<ModulusSpec, Failure> {
    let trimmed = text.trim();
    let spec = match trimmed.strip_prefix("1/sqrt(").and_then(|r| r.strip_suffix(')')) {
        Some(p) => ModulusSpec::InverseSqrt(
            p.parse()
                .map_err(|_| Failure::Usage(format!("cannot read `{text}` as 1/sqrt(P)")))?,
        ),
        None => ModulusSpec::Decimal(trimmed.to_string()),
    };
    // fail early, before any cell runs
    ModulusContext::from_spec(&spec, MIN_DIGITS)?;
    Ok(spec)
}

fn run(cli: &Cli) -> Result<(Rendered, bool), Failure> {
    let format = cli.format;
    match &cli.command {
        Command::Sequences { which, count, p, scaled } => {
            let rendered = match which {
                Which::D => {
                    if *count == 0 {
                        return Err(Failure::Usage("--count must be at least 1".into()));
                    }
                    let terms = d_sequence(*count)?.iter().map(|x| x.to_string()).collect();
                    render::sequence(format, "d", vec![("count", count.to_string())], (1..=*count).collect(), terms)
                }
                Which::Q => {
                    if *count == 0 {
                        return Err(Failure::Usage("--count must be at least 1".into()));
                    }
                    let terms = q4n_sequence(*count)?.iter().map(|x| x.to_string()).collect();
                    let orders = (1..=*count).map(|n| 4 * n).collect();
                    render::sequence(format, "Q", vec![("count", count.to_string())], orders, terms)
                }
                Which::Dk => {
                    let p = p.ok_or_else(|| Failure::Usage("`sequences dk` needs --p".into()))?;
                    if p < 2 {
                        return Err(Failure::Usage(format!("--p must be at least 2, got {p}")));
                    }
                    if *scaled && table_alpha(p, 0).is_none() {
                        return Err(Failure::Usage(format!("no tabulated alpha_m for p = {p}; drop --scaled")));
                    }
                    let values = dk_sequence(p, *count)?;
                    let terms = values
                        .iter()
                        .enumerate()
                        .skip(1)
                        .map(|(m, v)| {
                            let v = if *scaled {
                                conjecture_row(p, m as u32, v.clone()).scaled
                            } else {
                                v.clone()
                            };
                            jtheta_core::moments::rational_string(&v)
                        })
                        .collect();
                    let params = vec![
                        ("count", count.to_string()),
                        ("p", p.to_string()),
                        ("scaled", scaled.to_string()),
                    ];
                    render::sequence(format, "dk", params, (1..=*count).collect(), terms)
                }
            };
            Ok((rendered, true))
        }
        Command::Polys { kind, count } => {
            let (name, first, terms): (&str, usize, Vec<String>) = match kind {
                PolyKind::R => ("R", 0, bell_moments(*count)?.iter().map(|m| m.r.to_string()).collect()),
                PolyKind::P => {
                    let table = CumulantTable::up_to(*count)?;
                    let terms = (0..=*count)
                        .map(|p| table.p_poly(p).expect("table covers count").to_string())
                        .collect();
                    ("P", 0, terms)
                }
                PolyKind::Kappa => {
                    let table = CumulantTable::up_to(count.saturating_sub(1).max(1))?;
                    let terms = (2..=(*count).max(2))
                        .map(|n| table.cumulant(n).map(|c| c.graded().to_string()))
                        .collect::<Result<Vec<_>, _>>()?;
                    ("kappa", 4, terms)
                }
            };
            // indices are orders: R_0, R_2, ...; kappa_4, kappa_6, ...
            let indices = (0..terms.len()).map(|i| first + 2 * i).collect();
            Ok((render::sequence(format, name, vec![("count", count.to_string())], indices, terms), true))
        }
        Command::Verify { suite, digits, k, nmax } => {
            if *digits < MIN_DIGITS {
                return Err(Failure::Usage(format!("--digits must be at least {MIN_DIGITS}, got {digits}")));
            }
            let moduli = if k.is_empty() {
                default_moduli()
            } else {
                k.iter().map(|text| parse_modulus(text)).collect::<Result<Vec<_>, _>>()?
            };
            let grid = build_grid((*suite).into(), *nmax, &moduli);
            let outcomes = run_suite(&grid, *digits);
            let all_passed = outcomes.iter().all(|o| o.passed());
            Ok((render::reports(format, &outcomes), all_passed))
        }
        Command::Conjecture { p, count } => {
            if *p < 2 {
                return Err(Failure::Usage(format!("--p must be at least 2, got {p}")));
            }
            let rows = conjecture_check(*p, *count)?;
            let zeroth = conjecture_row(*p, 0, dk_sequence(*p, 0)?[0].clone());
            Ok((render::conjecture(format, *p, &rows, &zeroth), true))
        }
        Command::Reconcile { nmax } => {
            let report = reconcile_thm11(*nmax)?;
            let ok = report.winner.is_some();
            Ok((render::reconciliation(format, &report), ok))
        }
    }
}

fn emit(cli: &Cli, rendered: &Rendered) -> io::Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, rendered.as_bytes()),
        None => io::stdout().lock().write_all(rendered.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((rendered, ok)) => {
            if let Err(e) = emit(&cli, &rendered) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(2);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
