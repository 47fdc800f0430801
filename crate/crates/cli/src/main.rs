//! `sdevo`: spectral laboratory for the linear structurally damped
//! σ-evolution equation. Exit codes: 0 all checks pass, 1 failed assertions,
//! 2 usage or configuration errors.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use sdevo_cli::config::{ExperimentConfig, GeneratorFamily, OutputFormat, PittCheckSection};
use sdevo_cli::experiment::{run_experiment, run_pitt_check};
use sdevo_cli::report::ExperimentReport;
use sdevo_core::model::{self, ModelParams};
use sdevo_core::rates::{self, Family, RateQuery, Term};

#[derive(Parser)]
#[command(
    name = "sdevo",
    about = "Spectral laboratory for the damped sigma-evolution equation \
             d2u/dt2 + (-Lap)^sigma u + (-Lap)^delta du/dt = 0",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Prop,
    Thm,
    Cor,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Prop => Family::Proposition,
            FamilyArg::Thm => Family::Theorem,
            FamilyArg::Cor => Family::Corollary,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum GeneratorArg {
    Gaussian,
    Bump,
}

#[derive(Subcommand)]
enum Command {
    /// Print the characteristic roots at one frequency magnitude.
    Roots {
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        delta: f64,
        /// Frequency magnitude |xi|.
        #[arg(long)]
        xi: f64,
    },
    /// Print theoretical decay exponents with validity conditions.
    Rates {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: f64,
        /// Smoothing order; for thm/cor omit to print all three estimates.
        #[arg(long)]
        a: Option<f64>,
        /// Time-derivative order (0 or 1).
        #[arg(long)]
        j: Option<u8>,
    },
    /// Print the critical power 1 + 2m*sigma/(n - 2m*delta).
    Critical {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: f64,
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        delta: f64,
    },
    /// Run a configured experiment and write its report.
    Evolve {
        #[arg(long)]
        config: PathBuf,
    },
    /// Check Pitt-inequality admissibility and sweep the empirical ratio.
    Pitt {
        #[arg(long)]
        r1: f64,
        #[arg(long)]
        r2: f64,
        #[arg(long)]
        s1: f64,
        #[arg(long)]
        s2: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "gaussian")]
        family: GeneratorArg,
    },
    /// Re-render a JSON report as CSV or JSON.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        format: FormatArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Roots { sigma, delta, xi } => {
            let params = ModelParams::new(sigma, delta, 1)?;
            let roots = model::characteristic_roots(&params, xi)?;
            let cross = model::double_root_frequency(&params);
            println!("lambda1    = {:+.12e} {:+.12e}i", roots.lambda1.re, roots.lambda1.im);
            println!("lambda2    = {:+.12e} {:+.12e}i", roots.lambda2.re, roots.lambda2.im);
            println!("degenerate = {}", roots.degenerate);
            println!("double-root frequency = {cross:.12e}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Rates { family, sigma, delta, n, m, a, j } => {
            let params = ModelParams::new(sigma, delta, n)?;
            let family: Family = family.into();
            let combos: Vec<(f64, u8)> = match (family, a, j) {
                (_, Some(a), Some(j)) => vec![(a, j)],
                (_, Some(a), None) => vec![(a, 0)],
                (Family::Proposition, None, j) => vec![(0.0, j.unwrap_or(0))],
                (_, None, Some(j)) => vec![(0.0, j)],
                (_, None, None) => vec![(0.0, 0), (sigma, 0), (0.0, 1)],
            };
            println!("family = {family:?}, sigma = {sigma}, delta = {delta}, n = {n}, m = {m}");
            for (a, j) in combos {
                for term in [Term::U0, Term::U1] {
                    let query = RateQuery { params, m, a, j, family, term };
                    let r = rates::rate(&query)?;
                    println!(
                        "(a = {a}, j = {j}) {:4}: exponent {:+.6}  n > {:.4}  data {}",
                        format!("{term:?}").to_lowercase(),
                        r.exponent,
                        r.dimension_bound,
                        if term == Term::U0 { r.data_space_u0 } else { r.data_space_u1 },
                    );
                    for v in &r.violations {
                        println!("    note: {v}");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Critical { n, m, sigma, delta } => {
            let p = rates::critical_exponent(n, m, sigma, delta)?;
            println!("{p:.4}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Evolve { config } => {
            let text = std::fs::read_to_string(&config)
                .with_context(|| format!("reading {}", config.display()))?;
            let cfg = ExperimentConfig::from_toml(&text)?;
            let report = run_experiment(&cfg)?;
            let rendered = match cfg.output.format {
                OutputFormat::Csv => report.to_csv(),
                OutputFormat::Json => report.to_json()?,
            };
            std::fs::write(&cfg.output.path, rendered)
                .with_context(|| format!("writing {}", cfg.output.path))?;
            let mut failed = 0usize;
            for obs in &report.observables {
                let slope = obs
                    .fit
                    .as_ref()
                    .map(|f| format!("{:+.4} +- {:.4}", f.slope, f.stderr))
                    .unwrap_or_else(|| "degenerate".to_string());
                println!("{}: slope {slope}", obs.label);
                for c in &obs.checks {
                    println!(
                        "  {} {} (m={}) theory {:+.4} tol {:.3}: {}",
                        c.family, c.kind, c.m, c.exponent, c.tolerance, c.verdict
                    );
                    if c.verdict != sdevo_cli::report::Verdict::Pass {
                        failed += 1;
                    }
                }
            }
            for p in &report.pitt {
                let status = if !p.admissible {
                    failed += 1;
                    "inadmissible".to_string()
                } else if p.stable == Some(false) {
                    failed += 1;
                    "unstable".to_string()
                } else {
                    "stable".to_string()
                };
                println!("pitt(r1={} r2={} s1={} s2={}): {status}", p.r1, p.r2, p.s1, p.s2);
            }
            println!("report written to {}", cfg.output.path);
            Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Pitt { r1, r2, s1, s2, n, family } => {
            let check = PittCheckSection {
                r1,
                r2,
                s1,
                s2,
                generator: match family {
                    GeneratorArg::Gaussian => GeneratorFamily::Gaussian,
                    GeneratorArg::Bump => GeneratorFamily::Bump,
                },
            };
            let report = run_pitt_check(&check, n)?;
            if !report.admissible {
                println!("inadmissible:");
                for v in &report.violations {
                    println!("  - {v}");
                }
                return Ok(ExitCode::from(1));
            }
            let parseval = r1 == 2.0 && r2 == 2.0 && s1 == 0.0 && s2 == 0.0;
            let tag = if parseval { " (parseval identity)" } else { "" };
            println!("admissible; ratio {:.6}{tag}", report.ratios[1].1);
            for (lambda, ratio) in &report.ratios {
                println!("  dilation lambda = {lambda}: ratio {ratio:.10}");
            }
            if let Some(refined) = report.refined_ratio {
                println!("  refined grid (2N): ratio {refined:.10}");
            }
            println!(
                "  stable = {}",
                report.stable.map(|s| s.to_string()).unwrap_or_else(|| "-".into())
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Report { input, format } => {
            let text = std::fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            let report = ExperimentReport::from_json(&text)
                .map_err(|e| anyhow!("{} is not a JSON report: {e}", input.display()))?;
            match format {
                FormatArg::Csv => print!("{}", report.to_csv()),
                FormatArg::Json => print!("{}", report.to_json()?),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
