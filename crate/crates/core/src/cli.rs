//! Command-line front end. `cli_main` parses, runs and maps outcomes to
//! exit codes: 0 success, 1 usage or I/O error, 2 numerical failure or an
//! inconclusive report.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::classify::{self, ClassifyOptions, GridKind};
use crate::closedform::{self, IntegrandSpec, SourceEq, Trig, Weight};
use crate::corpus;
use crate::dui::{self, DifferentiatedFamily, DuiOptions};
use crate::error::{Error, Result};
use crate::exec;
use crate::fresnel::{self, Convention};
use crate::oscquad;
use crate::quad::QuadratureConfig;
use crate::report::{self, ReportConfig};
use crate::trace_csv;

pub const THREADS_ENV: &str = "OSCINT_THREADS";

#[derive(Parser, Debug)]
#[command(name = "oscint", version, about = "Fresnel-type oscillatory integrals: values, traces, divergence verdicts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fresnel integrals C(x), S(x)
    Fresnel {
        #[arg(long)]
        x: f64,
        #[arg(long, value_enum, default_value_t = ConventionArg::Paper)]
        convention: ConventionArg,
    },
    /// Closed-form value (valid or historical) of one family member
    Eval(SpecArgs),
    /// Write the partial-integral trace P(T) as CSV
    Trace {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        trace: TraceArgs,
        #[arg(long)]
        out: PathBuf,
        /// Trace P(T) - B(T) instead (weight-x families)
        #[arg(long)]
        residual: bool,
    },
    /// Classify the partial-integral trace and print the verdict as JSON
    Classify {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        trace: TraceArgs,
        #[arg(long)]
        residual: bool,
    },
    /// Compare direct quadrature of int_{-T1}^{T2} x e^{i(x^2+x)} with its integration-by-parts form
    IbpCheck {
        #[arg(long)]
        t1: f64,
        #[arg(long)]
        t2: f64,
    },
    /// Classify the symmetric partials int_{-T}^{T} x e^{i(x^2+x)}
    PvProbe {
        #[arg(long)]
        tmax: f64,
        #[arg(long, default_value_t = 512)]
        samples: usize,
    },
    /// Check differentiation under the integral sign with respect to b
    Dui {
        #[arg(long, value_enum)]
        family: DuiFamilyArg,
        #[arg(long, value_enum, default_value_t = TrigArg::Sin)]
        quad: TrigArg,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long)]
        b: f64,
    },
    /// Run the built-in corpus and write the JSON report
    Report {
        #[arg(long, default_value = "oscint-report.json")]
        out: PathBuf,
        /// Also write one trace CSV per entry into this directory
        #[arg(long)]
        trace_dir: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct SpecArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, value_enum)]
    quad: TrigArg,
    /// Implied by the family; accepted for readability and checked
    #[arg(long, value_enum)]
    lin: Option<TrigArg>,
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: f64,
}

#[derive(Args, Debug)]
struct TraceArgs {
    #[arg(long, default_value_t = 40.0)]
    tmax: f64,
    #[arg(long, default_value_t = 512)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = GridArg::Phase)]
    grid: GridArg,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ConventionArg {
    Paper,
    Classical,
    Amplitude,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TrigArg {
    Sin,
    Cos,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum GridArg {
    Phase,
    Uniform,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
#[value(rename_all = "verbatim")]
enum FamilyArg {
    E1,
    E2,
    E5,
    E6,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum DuiFamilyArg {
    #[value(name = "E5")]
    E5,
    #[value(name = "E6")]
    E6,
    Control,
}

impl From<TrigArg> for Trig {
    fn from(t: TrigArg) -> Trig {
        match t {
            TrigArg::Sin => Trig::Sin,
            TrigArg::Cos => Trig::Cos,
        }
    }
}

impl From<FamilyArg> for SourceEq {
    fn from(f: FamilyArg) -> SourceEq {
        match f {
            FamilyArg::E1 => SourceEq::E1,
            FamilyArg::E2 => SourceEq::E2,
            FamilyArg::E5 => SourceEq::E5,
            FamilyArg::E6 => SourceEq::E6,
        }
    }
}

impl SpecArgs {
    fn spec(&self) -> Result<IntegrandSpec> {
        let (weight, lin) = SourceEq::from(self.family).shape();
        if let Some(given) = self.lin {
            if Trig::from(given) != lin {
                return Err(Error::usage(format!(
                    "family {:?} has linear factor {}, not {}",
                    self.family,
                    lin.name(),
                    Trig::from(given).name()
                )));
            }
        }
        IntegrandSpec::new(weight, self.quad.into(), lin, self.a, self.b)
    }
}

impl TraceArgs {
    fn grid(&self) -> GridKind {
        match self.grid {
            GridArg::Phase => GridKind::UniformPhase,
            GridArg::Uniform => GridKind::UniformT,
        }
    }
}

fn build(spec: &IntegrandSpec, t: &TraceArgs, residual: bool, cfg: &QuadratureConfig) -> Result<classify::PartialIntegralTrace> {
    if residual {
        if spec.weight != Weight::X {
            return Err(Error::usage("--residual needs a weight-x family (E1 or E2)"));
        }
        classify::build_residual_trace(spec, t.tmax, t.samples, t.grid(), cfg)
    } else {
        classify::build_trace(spec, t.tmax, t.samples, t.grid(), cfg)
    }
}

fn fmt_complex(z: Complex64) -> String {
    format!("{:.15e}{:+.15e}i", z.re, z.im)
}

/// Runs one parsed command; returns the exit code for commands whose
/// outcome is not simply success.
fn run(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    let cfg = QuadratureConfig::default();
    match cmd {
        Command::Fresnel { x, convention } => {
            let target = match convention {
                ConventionArg::Paper => Convention::Paper,
                ConventionArg::Classical => Convention::Classical,
                ConventionArg::Amplitude => Convention::Amplitude,
            };
            let p = fresnel::convert_normalization(fresnel::fresnel_cs(x)?, target)?;
            writeln!(out, "convention={} arg={:.17e} C={:.17e} S={:.17e}", p.convention, p.arg, p.c, p.s)?;
        }
        Command::Eval(args) => {
            let spec = args.spec()?;
            match spec.weight {
                Weight::One => {
                    let v = closedform::eval_convergent(&spec)?;
                    writeln!(out, "{} = {:.17e}", spec.id(), v.value)?;
                    writeln!(out, "status={} source={}", v.status, v.source_eq)?;
                }
                Weight::X => {
                    let v = closedform::purported_value(&spec)?;
                    let tr = classify::build_trace(&spec, 40.0, 512, GridKind::UniformPhase, &cfg)?;
                    let verdict = classify::classify(&tr, &ClassifyOptions::default())?;
                    writeln!(out, "status={} source={}", v.status, v.source_eq)?;
                    writeln!(out, "{} (table value, integral does not converge) = {:.17e}", spec.id(), v.value)?;
                    writeln!(out, "verdict={}", verdict.kind)?;
                }
            }
        }
        Command::Trace { spec, trace, out: path, residual } => {
            let s = spec.spec()?;
            let tr = build(&s, &trace, residual, &cfg)?;
            trace_csv::write_trace_file(&tr, &path)?;
            writeln!(out, "wrote {} samples of {} to {}", tr.len(), tr.spec_id, path.display())?;
        }
        Command::Classify { spec, trace, residual } => {
            let s = spec.spec()?;
            let tr = build(&s, &trace, residual, &cfg)?;
            let v = classify::classify(&tr, &ClassifyOptions::default())?;
            writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
        }
        Command::IbpCheck { t1, t2 } => {
            let lhs = oscquad::ibp_identity_lhs(t1, t2, &cfg)?;
            let rhs = oscquad::ibp_identity_rhs(t1, t2, &cfg)?;
            writeln!(out, "direct={}", fmt_complex(lhs))?;
            writeln!(out, "identity={}", fmt_complex(rhs))?;
            writeln!(out, "difference={:.3e}", (lhs - rhs).norm())?;
        }
        Command::PvProbe { tmax, samples } => {
            let v = classify::principal_value_probe(tmax, samples, &cfg)?;
            let parts = oscquad::symmetric_partial_parts(tmax, &cfg)?;
            writeln!(out, "verdict={}", v.kind)?;
            if let Some(env) = v.oscillation_envelope {
                writeln!(out, "envelope={env:.6}")?;
            }
            writeln!(out, "convergent_part={}", fmt_complex(parts.convergent))?;
        }
        Command::Dui { family, quad, a, b } => {
            let fam = match family {
                DuiFamilyArg::E5 => DifferentiatedFamily::table(SourceEq::E5, quad.into(), a)?,
                DuiFamilyArg::E6 => DifferentiatedFamily::table(SourceEq::E6, quad.into(), a)?,
                DuiFamilyArg::Control => DifferentiatedFamily::Control,
            };
            let r = dui::check_interchange(&fam, b, &DuiOptions::default(), &cfg)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&r)?)?;
        }
        Command::Report { out: path, trace_dir } => {
            let r = report::run_report(&corpus::builtin_corpus(), &ReportConfig::default(), &path, trace_dir.as_deref())?;
            let flagged = r.entries.iter().filter(|e| e.agreement_flag == report::Agreement::Mismatch).count();
            writeln!(out, "wrote {} entries ({} mismatches) to {}", r.entries.len(), flagged, path.display())?;
            return Ok(r.exit_code());
        }
    }
    Ok(0)
}

fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(Error::usage(format!("{THREADS_ENV} must be an integer >= 1, got `{v}`"))),
        },
    }
}

fn exit_code_for(e: &Error) -> i32 {
    if e.is_numerical() {
        2
    } else {
        1
    }
}

/// Parse `argv` (including the program name), run, and return the exit code.
pub fn cli_main<I, S>(argv: I, out: &mut (dyn Write + Send), err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = threads_from_env().and_then(|threads| match threads {
        Some(n) => exec::with_threads(n, || run(cli.command, out)),
        None => run(cli.command, out),
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}

/// Entry point for the binary.
pub fn main_with_env() -> ExitCode {
    let code = cli_main(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    ExitCode::from(code as u8)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("oscint").chain(args.iter().copied());
        let code = cli_main(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        let (code, _, err) = run_args(&["fresnel", "--x", "1", "--bogus"]);
        assert_eq!(code, 1);
        assert!(err.contains("Usage"));
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("report"));
    }

    #[test]
    fn domain_errors_exit_one() {
        let (code, _, err) = run_args(&["fresnel", "--x=-1"]);
        assert_eq!(code, 1);
        assert!(err.contains("domain"));
    }

    #[test]
    fn conflicting_lin_is_rejected() {
        let (code, _, _) = run_args(&["eval", "--family", "E1", "--quad", "sin", "--lin", "cos", "--a", "1", "--b", "2"]);
        assert_eq!(code, 1);
    }
}
