//! The end-to-end controlled-teleportation state machine.
//!
//! An m-qudit message on labels x_1..x_m is teleported through m
//! (n+2)-particle GHZ channels. Alice Bell-measures each pair (x_k, p_{k,0}),
//! the n controllers measure their particles p_{k,j} in X_d, and the
//! receiver applies U_{p_k q_k} to each remaining particle p_{k,n+1} with
//!
//!   p_k = (α_{k1} + Σ_j β_{kj}) mod d,   q_k = (d − α_{k2}) mod d.
//!
//! Both indices are reduced mod d so they address a valid Pauli. The
//! corrected state equals the input up to the global phase
//! (2π/d) Σ_k α_{k1} α_{k2}, which `verify_all_branches` checks per branch.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::bases::{generalized_pauli, ghz_state, BasisChoice};
use crate::error::{QuditError, Result};
use crate::measure::{enumerate_branches, measure_bell, measure_single, Branch, Outcome, PlanStep};
use crate::register::{Dimension, ParticleLabel, StateVector, DEFAULT_AMP_CAP};

/// Default cap on the number of enumerated branches.
pub const DEFAULT_BRANCH_CAP: usize = 1_000_000;
/// A branch passes when its fidelity is at least this.
pub const FIDELITY_THRESHOLD: f64 = 1.0 - 1e-9;
/// Tolerance on the per-branch global-phase check, in radians.
pub const PHASE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy)]
pub struct ProtocolConfig {
    pub d: Dimension,
    pub m: usize,
    pub n: usize,
    pub amp_cap: usize,
    pub branch_cap: usize,
    /// Decoys transmitted alongside the channel; only affects η_q.
    pub decoy_count: usize,
}

impl ProtocolConfig {
    pub fn new(d: Dimension, m: usize, n: usize) -> Result<Self> {
        let config = ProtocolConfig {
            d,
            m,
            n,
            amp_cap: DEFAULT_AMP_CAP,
            branch_cap: DEFAULT_BRANCH_CAP,
            decoy_count: 0,
        };
        config.check_amp_cap()?;
        Ok(config)
    }

    /// Composite register size: m message qudits + m(n+2) channel qudits.
    pub fn composite_qudits(&self) -> usize {
        self.m * (self.n + 3)
    }

    pub fn channel_qudits(&self) -> usize {
        self.m * (self.n + 2)
    }

    pub fn check_amp_cap(&self) -> Result<()> {
        self.d
            .pow_checked(self.composite_qudits() as u32, self.amp_cap)?;
        Ok(())
    }

    pub fn check_branch_cap(&self) -> Result<()> {
        let required = (self.d.get() as u128)
            .checked_pow(self.channel_qudits() as u32)
            .unwrap_or(u128::MAX);
        if required > self.branch_cap as u128 {
            return Err(QuditError::BranchCapExceeded {
                required,
                cap: self.branch_cap,
            });
        }
        Ok(())
    }

    pub fn message_labels(&self) -> Vec<ParticleLabel> {
        (1..=self.m).map(ParticleLabel::message).collect()
    }

    /// q_u / q_t: useful transmitted qudits over total transmitted qudits.
    pub fn eta_q(&self) -> f64 {
        let useful = self.channel_qudits();
        useful as f64 / (useful + self.decoy_count) as f64
    }
}

/// Measurement record of one protocol run: Alice's Bell results α_{k1}, α_{k2},
/// the controllers' X results β_{kj}, and the derived corrections (p_k, q_k).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub alpha: Vec<[usize; 2]>,
    pub beta: Vec<Vec<usize>>,
    pub corrections: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunMode {
    Sampled,
    AllBranch,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub d: usize,
    pub m: usize,
    pub n: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BranchRecord {
    pub alpha: Vec<[usize; 2]>,
    pub beta: Vec<Vec<usize>>,
    pub p: Vec<usize>,
    pub q: Vec<usize>,
    pub probability: f64,
    pub fidelity: Option<f64>,
    pub phase_ok: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Aggregate {
    pub min_fidelity: f64,
    pub prob_sum: f64,
    pub eta_q: f64,
}

/// Serializable summary of a protocol execution.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub config: ConfigEcho,
    pub mode: RunMode,
    pub seed: Option<u64>,
    pub branches: Vec<BranchRecord>,
    pub aggregate: Aggregate,
}

impl RunReport {
    /// True when every branch reconstructed the input within tolerance,
    /// probabilities account for the whole outcome space, and every
    /// phase check passed.
    pub fn all_good(&self) -> bool {
        self.aggregate.min_fidelity >= FIDELITY_THRESHOLD
            && (self.aggregate.prob_sum - 1.0).abs() < 1e-9
            && self.branches.iter().all(|b| b.phase_ok)
    }
}

/// Tensor product of the m GHZ channel states on labels p_{k,0..n+1}.
pub fn build_channel(config: &ProtocolConfig) -> Result<StateVector> {
    config.check_amp_cap()?;
    let mut channel: Option<StateVector> = None;
    for k in 1..=config.m {
        let labels: Vec<ParticleLabel> = (0..=config.n + 1)
            .map(|j| ParticleLabel::channel(k, j))
            .collect();
        let ghz = ghz_state(config.d, labels)?;
        channel = Some(match channel {
            Some(c) => c.tensor(&ghz)?,
            None => ghz,
        });
    }
    Ok(channel.expect("m >= 1"))
}

fn check_message_labels(config: &ProtocolConfig, input: &StateVector) -> Result<()> {
    if input.dimension() != config.d
        || input.registry().labels() != config.message_labels().as_slice()
    {
        return Err(QuditError::RegistryMismatch);
    }
    Ok(())
}

/// Alice's m generalized Bell-state measurements on pairs (x_k, p_{k,0}),
/// sampled; returns the α outcomes and the retained state.
pub fn alice_measure(
    s: &StateVector,
    config: &ProtocolConfig,
    rng: &mut impl rand::Rng,
) -> Result<(Vec<[usize; 2]>, StateVector)> {
    let mut state = s.clone();
    let mut alpha = Vec::with_capacity(config.m);
    for k in 1..=config.m {
        let branch = measure_bell(
            &state,
            ParticleLabel::message(k),
            ParticleLabel::channel(k, 0),
            rng,
        )?;
        let Outcome::Bell(o) = branch.outcomes[0] else {
            unreachable!()
        };
        alpha.push([o.u, o.v]);
        state = branch.state.ok_or(QuditError::OutOfOrder)?;
    }
    Ok((alpha, state))
}

/// The controllers' m·n X_d measurements on p_{k,j}, sampled in (k, j)
/// lexicographic order. Fails with `OutOfOrder` if Alice's particles are
/// still in the register.
pub fn controllers_measure(
    s: &StateVector,
    config: &ProtocolConfig,
    rng: &mut impl rand::Rng,
) -> Result<(Vec<Vec<usize>>, StateVector)> {
    for k in 1..=config.m {
        if s.registry().contains(ParticleLabel::message(k))
            || s.registry().contains(ParticleLabel::channel(k, 0))
        {
            return Err(QuditError::OutOfOrder);
        }
    }
    let mut state = s.clone();
    let mut beta = Vec::with_capacity(config.m);
    for k in 1..=config.m {
        let mut row = Vec::with_capacity(config.n);
        for j in 1..=config.n {
            let branch = measure_single(
                &state,
                ParticleLabel::channel(k, j),
                BasisChoice::X,
                rng,
            )?;
            let Outcome::Single(o) = branch.outcomes[0] else {
                unreachable!()
            };
            row.push(o.u);
            state = branch.state.ok_or(QuditError::OutOfOrder)?;
        }
        beta.push(row);
    }
    Ok((beta, state))
}

/// p_k = (α_{k1} + Σ_j β_{kj}) mod d, q_k = (d − α_{k2}) mod d.
pub fn compute_correction(
    alpha: &[[usize; 2]],
    beta: &[Vec<usize>],
    d: Dimension,
) -> Result<Vec<[usize; 2]>> {
    if alpha.len() != beta.len() {
        return Err(QuditError::ShapeMismatch(format!(
            "alpha has {} rows, beta has {}",
            alpha.len(),
            beta.len()
        )));
    }
    let dd = d.get();
    let check = |v: usize| -> Result<usize> {
        if v >= dd {
            Err(QuditError::IndexOutOfRange { value: v, bound: dd })
        } else {
            Ok(v)
        }
    };
    let mut corrections = Vec::with_capacity(alpha.len());
    for (a, b) in alpha.iter().zip(beta) {
        let mut p = check(a[0])?;
        for &bj in b {
            p = (p + check(bj)?) % dd;
        }
        let q = (dd - check(a[1])?) % dd;
        corrections.push([p, q]);
    }
    Ok(corrections)
}

/// Applies U_{p_k q_k} to the receiver's particle p_{k,n+1} for each k.
pub fn charlie_correct(
    s: &StateVector,
    corrections: &[[usize; 2]],
    config: &ProtocolConfig,
) -> Result<StateVector> {
    if corrections.len() != config.m {
        return Err(QuditError::ShapeMismatch(format!(
            "{} corrections for m={}",
            corrections.len(),
            config.m
        )));
    }
    let mut state = s.clone();
    for (k, c) in corrections.iter().enumerate() {
        let pauli = generalized_pauli(config.d, c[0], c[1])?;
        state = state.apply_single_qudit_unitary(
            ParticleLabel::channel(k + 1, config.n + 1),
            pauli.matrix(),
        )?;
    }
    Ok(state)
}

fn wrap_angle(x: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let mut y = x % tau;
    if y > std::f64::consts::PI {
        y -= tau;
    } else if y < -std::f64::consts::PI {
        y += tau;
    }
    y
}

/// Checks fidelity and the Eq.-style global-phase identity of a corrected
/// receiver state against the input message.
fn judge_branch(
    input: &StateVector,
    corrected: &StateVector,
    alpha: &[[usize; 2]],
    config: &ProtocolConfig,
) -> Result<(f64, bool)> {
    let relabeled = corrected.relabeled(config.message_labels())?;
    let overlap = input.inner_product(&relabeled)?;
    let fidelity = overlap.norm_sqr();
    let expected_phase: f64 = alpha
        .iter()
        .map(|a| (a[0] * a[1]) % config.d.get())
        .sum::<usize>() as f64
        * std::f64::consts::TAU
        / config.d.get() as f64;
    let phase_ok = wrap_angle(overlap.arg() - expected_phase).abs() < PHASE_TOL;
    Ok((fidelity, phase_ok))
}

fn aggregate(config: &ProtocolConfig, branches: &[BranchRecord]) -> Aggregate {
    Aggregate {
        min_fidelity: branches
            .iter()
            .filter_map(|b| b.fidelity)
            .fold(f64::INFINITY, f64::min),
        prob_sum: branches.iter().map(|b| b.probability).sum(),
        eta_q: config.eta_q(),
    }
}

/// Runs one sampled protocol execution end to end.
pub fn run_sampled(
    config: &ProtocolConfig,
    input: &StateVector,
    seed: u64,
) -> Result<RunReport> {
    run_sampled_with(config, input, seed, false)
}

/// Sampled run with an optional corrupted-correction test hook: the hook
/// shifts p_1 by one, which must break reconstruction on any branch with a
/// nonzero transcript.
pub fn run_sampled_with(
    config: &ProtocolConfig,
    input: &StateVector,
    seed: u64,
    corrupt_correction: bool,
) -> Result<RunReport> {
    check_message_labels(config, input)?;
    let channel = build_channel(config)?;
    let composite = input.tensor(&channel)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);

    let (alpha, state) = alice_measure(&composite, config, &mut rng)?;
    let (beta, state) = controllers_measure(&state, config, &mut rng)?;
    let mut corrections = compute_correction(&alpha, &beta, config.d)?;
    if corrupt_correction {
        corrections[0][0] = (corrections[0][0] + 1) % config.d.get();
    }
    let corrected = charlie_correct(&state, &corrections, config)?;
    let (fidelity, phase_ok) = judge_branch(input, &corrected, &alpha, config)?;

    let record = BranchRecord {
        alpha,
        beta,
        p: corrections.iter().map(|c| c[0]).collect(),
        q: corrections.iter().map(|c| c[1]).collect(),
        probability: 1.0,
        fidelity: Some(fidelity),
        phase_ok,
    };
    let branches = vec![record];
    Ok(RunReport {
        config: ConfigEcho {
            d: config.d.get(),
            m: config.m,
            n: config.n,
        },
        mode: RunMode::Sampled,
        seed: Some(seed),
        aggregate: aggregate(config, &branches),
        branches,
    })
}

fn protocol_plan(config: &ProtocolConfig) -> Vec<PlanStep> {
    let mut plan = Vec::new();
    for k in 1..=config.m {
        plan.push(PlanStep::Bell {
            a: ParticleLabel::message(k),
            b: ParticleLabel::channel(k, 0),
        });
    }
    for k in 1..=config.m {
        for j in 1..=config.n {
            plan.push(PlanStep::Single {
                label: ParticleLabel::channel(k, j),
                basis: BasisChoice::X,
            });
        }
    }
    plan
}

fn split_outcomes(branch: &Branch, config: &ProtocolConfig) -> (Vec<[usize; 2]>, Vec<Vec<usize>>) {
    let mut alpha = Vec::with_capacity(config.m);
    let mut beta = vec![Vec::with_capacity(config.n); config.m];
    for (i, outcome) in branch.outcomes.iter().enumerate() {
        match outcome {
            Outcome::Bell(o) => alpha.push([o.u, o.v]),
            Outcome::Single(o) => beta[(i - config.m) / config.n].push(o.u),
        }
    }
    (alpha, beta)
}

/// Exhaustively enumerates every (α, β) outcome combination and verifies
/// that the corrected receiver state reconstructs the input on each branch.
pub fn verify_all_branches(config: &ProtocolConfig, input: &StateVector) -> Result<RunReport> {
    verify_all_branches_with(config, input, false)
}

/// All-branch verification with the corrupted-correction test hook.
pub fn verify_all_branches_with(
    config: &ProtocolConfig,
    input: &StateVector,
    corrupt_correction: bool,
) -> Result<RunReport> {
    check_message_labels(config, input)?;
    config.check_branch_cap()?;
    let channel = build_channel(config)?;
    let composite = input.tensor(&channel)?;
    let plan = protocol_plan(config);
    let raw = enumerate_branches(&composite, &plan)?;

    let mut branches = Vec::with_capacity(raw.len());
    for branch in &raw {
        let (alpha, beta) = split_outcomes(branch, config);
        let mut corrections = compute_correction(&alpha, &beta, config.d)?;
        if corrupt_correction
            && (alpha.iter().any(|a| a[0] != 0 || a[1] != 0)
                || beta.iter().flatten().any(|&b| b != 0))
        {
            corrections[0][0] = (corrections[0][0] + 1) % config.d.get();
        }
        let (fidelity, phase_ok) = match &branch.state {
            Some(state) => {
                let corrected = charlie_correct(state, &corrections, config)?;
                let (f, ok) = judge_branch(input, &corrected, &alpha, config)?;
                (Some(f), ok)
            }
            None => (None, true),
        };
        branches.push(BranchRecord {
            alpha,
            beta,
            p: corrections.iter().map(|c| c[0]).collect(),
            q: corrections.iter().map(|c| c[1]).collect(),
            probability: branch.probability,
            fidelity,
            phase_ok,
        });
    }

    Ok(RunReport {
        config: ConfigEcho {
            d: config.d.get(),
            m: config.m,
            n: config.n,
        },
        mode: RunMode::AllBranch,
        seed: None,
        aggregate: aggregate(config, &branches),
        branches,
    })
}

/// Seeded random m-qudit message state: complex Gaussian amplitudes,
/// normalized.
pub fn random_message_state(config: &ProtocolConfig, seed: u64) -> Result<StateVector> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let len = config.d.pow_checked(config.m as u32, config.amp_cap)?;
    let amps: Vec<Complex64> = (0..len)
        .map(|_| {
            let (re, im) = gaussian_pair(&mut rng);
            Complex64::new(re, im)
        })
        .collect();
    let norm = crate::register::l2_norm(&amps);
    let amps: Vec<Complex64> = amps.into_iter().map(|a| a / norm).collect();
    StateVector::from_amplitudes(config.d, config.message_labels(), amps)
}

fn gaussian_pair(rng: &mut impl rand::Rng) -> (f64, f64) {
    // Box-Muller
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = std::f64::consts::TAU * u2;
    (r * theta.cos(), r * theta.sin())
}
