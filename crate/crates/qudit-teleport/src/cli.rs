//! Command-line front-end: sampled runs, all-branch verification, and
//! decoy-security experiments, all emitting JSON reports.
//!
//! Exit codes: 0 success, 2 configuration error, 3 cap exceeded,
//! 4 fidelity/verification failure.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use crate::decoy::{run_decoy_experiment, EveModel};
use crate::error::QuditError;
use crate::protocol::{
    random_message_state, run_sampled_with, verify_all_branches_with, ProtocolConfig,
    FIDELITY_THRESHOLD,
};
use crate::register::{Dimension, StateVector};
use crate::statespec;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_FIDELITY: i32 = 4;

#[derive(Parser)]
#[command(
    name = "qudit-teleport",
    about = "Controlled teleportation of multi-qudit states over d-dimensional GHZ channels"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One sampled protocol execution; writes a RunReport.
    Run(RunArgs),
    /// Exhaustive all-branch verification; writes a RunReport.
    Verify(RunArgs),
    /// Decoy-photon eavesdropping experiment; writes a decoy report.
    Decoy(DecoyArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Qudit dimension
    #[arg(long)]
    d: usize,
    /// Message qudit count
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Controller count
    #[arg(long, default_value_t = 0)]
    n: usize,
    /// State-spec file path, or a built-in: random | ghz-like | basis:<digits>
    #[arg(long, default_value = "random")]
    state: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report output path (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    branch_cap: Option<usize>,
    #[arg(long)]
    amp_cap: Option<usize>,
    /// Test hook: corrupt the correction table to prove it is load-bearing
    #[arg(long, hide = true)]
    corrupt_correction: bool,
}

#[derive(Args)]
struct DecoyArgs {
    /// Qudit dimension
    #[arg(long)]
    d: usize,
    /// Number of decoy qudits
    #[arg(long, default_value_t = 1000)]
    count: usize,
    /// Eavesdropper model: none | intercept-resend
    #[arg(long, default_value = "none")]
    eve: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn exit_code_for(err: &QuditError) -> i32 {
    match err {
        QuditError::CapExceeded { .. } | QuditError::BranchCapExceeded { .. } => EXIT_CAP,
        _ => EXIT_CONFIG,
    }
}

fn fail(err: QuditError) -> i32 {
    eprintln!("error: {err}");
    exit_code_for(&err)
}

fn build_config(args: &RunArgs) -> Result<ProtocolConfig, QuditError> {
    let d = Dimension::new(args.d)?;
    if args.m < 1 {
        return Err(QuditError::ShapeMismatch("m must be >= 1".into()));
    }
    let config = ProtocolConfig {
        d,
        m: args.m,
        n: args.n,
        amp_cap: args.amp_cap.unwrap_or(crate::register::DEFAULT_AMP_CAP),
        branch_cap: args
            .branch_cap
            .unwrap_or(crate::protocol::DEFAULT_BRANCH_CAP),
        decoy_count: 0,
    };
    config.check_amp_cap()?;
    Ok(config)
}

fn build_input(
    args: &RunArgs,
    config: &ProtocolConfig,
) -> Result<StateVector, QuditError> {
    match args.state.as_str() {
        "random" => random_message_state(config, args.seed),
        "ghz-like" => ghz_like_state(config),
        s if s.starts_with("basis:") => {
            let digits = &s["basis:".len()..];
            basis_message_state(config, digits)
        }
        path => statespec::load_state(std::path::Path::new(path)),
    }
}

/// (1/√d) Σ_l |l⟩^{⊗m} on the message labels.
fn ghz_like_state(config: &ProtocolConfig) -> Result<StateVector, QuditError> {
    let d = config.d.get();
    let total = config.d.pow_checked(config.m as u32, config.amp_cap)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); total];
    let repunit = if d == 1 { 0 } else { (total - 1) / (d - 1) };
    let scale = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    for l in 0..d {
        amps[l * repunit] = scale;
    }
    StateVector::from_amplitudes(config.d, config.message_labels(), amps)
}

/// |digits⟩ on the message labels, e.g. basis:02 for |0⟩⊗|2⟩.
fn basis_message_state(
    config: &ProtocolConfig,
    digits: &str,
) -> Result<StateVector, QuditError> {
    let d = config.d.get();
    let parsed: Vec<usize> = digits
        .chars()
        .map(|c| {
            c.to_digit(10)
                .map(|x| x as usize)
                .ok_or_else(|| QuditError::InvalidStateSpec(format!("bad digit {c:?}")))
        })
        .collect::<Result<_, _>>()?;
    if parsed.len() != config.m {
        return Err(QuditError::InvalidStateSpec(format!(
            "basis state needs {} digits, got {}",
            config.m,
            parsed.len()
        )));
    }
    let mut index = 0usize;
    for &digit in &parsed {
        if digit >= d {
            return Err(QuditError::IndexOutOfRange {
                value: digit,
                bound: d,
            });
        }
        index = index * d + digit;
    }
    let total = config.d.pow_checked(config.m as u32, config.amp_cap)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); total];
    amps[index] = Complex64::new(1.0, 0.0);
    StateVector::from_amplitudes(config.d, config.message_labels(), amps)
}

fn emit(report: &impl serde::Serialize, out: Option<&PathBuf>) -> Result<(), QuditError> {
    let text = serde_json::to_string_pretty(report)
        .map_err(|e| QuditError::InvalidStateSpec(e.to_string()))?;
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| QuditError::InvalidStateSpec(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn cmd_run(args: &RunArgs) -> i32 {
    let config = match build_config(args) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let input = match build_input(args, &config) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let report = match run_sampled_with(&config, &input, args.seed, args.corrupt_correction) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    if let Err(e) = emit(&report, args.out.as_ref()) {
        return fail(e);
    }
    let fidelity = report.branches[0].fidelity.unwrap_or(0.0);
    if fidelity >= FIDELITY_THRESHOLD {
        EXIT_OK
    } else {
        eprintln!("fidelity {fidelity} below threshold");
        EXIT_FIDELITY
    }
}

fn cmd_verify(args: &RunArgs) -> i32 {
    let config = match build_config(args) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    if let Err(e) = config.check_branch_cap() {
        return fail(e);
    }
    let input = match build_input(args, &config) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let report = match verify_all_branches_with(&config, &input, args.corrupt_correction) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    if let Err(e) = emit(&report, args.out.as_ref()) {
        return fail(e);
    }
    if report.all_good() {
        EXIT_OK
    } else {
        eprintln!(
            "verification failed: min fidelity {}, prob sum {}",
            report.aggregate.min_fidelity, report.aggregate.prob_sum
        );
        EXIT_FIDELITY
    }
}

fn cmd_decoy(args: &DecoyArgs) -> i32 {
    let d = match Dimension::new(args.d) {
        Ok(d) => d,
        Err(e) => return fail(e),
    };
    if args.count < 1 {
        return fail(QuditError::ShapeMismatch("count must be >= 1".into()));
    }
    let eve = match args.eve.as_str() {
        "none" => EveModel::None,
        "intercept-resend" => EveModel::InterceptResend,
        _ => return fail(QuditError::UnsupportedModel),
    };
    let report = match run_decoy_experiment(d, args.count, eve, args.seed) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    if let Err(e) = emit(&report, args.out.as_ref()) {
        return fail(e);
    }
    EXIT_OK
}

/// Parses argv and runs the requested subcommand, returning the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // clap handles --help/--version with success
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Decoy(args) => cmd_decoy(args),
    }
}

pub fn main() -> i32 {
    main_with_args(std::env::args_os())
}
