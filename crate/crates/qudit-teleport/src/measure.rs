//! Projective measurement: single-qudit Z/X measurements, generalized
//! Bell-state measurements, and exhaustive branch enumeration.
//!
//! Measured particles are removed from the register; only the retained
//! subsystem survives. Sampling is inverse-CDF over the enumerated outcome
//! probabilities with a seeded generator, so runs are reproducible.
//! Zero-probability outcomes carry an absent state instead of a NaN vector.

use rand::Rng;

use crate::bases::{basis_vector, bell_state, BasisChoice};
use crate::error::{QuditError, Result};
use crate::register::{ParticleLabel, StateVector};

/// Probability below which a branch is treated as impossible.
pub const PROB_FLOOR: f64 = 1e-15;

/// Result digit of a single-qudit measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct XOutcome {
    pub u: usize,
}

/// Result pair (u, v) of a generalized Bell-state measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BellOutcome {
    pub u: usize,
    pub v: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Single(XOutcome),
    Bell(BellOutcome),
}

/// One measurement outcome with its probability and collapsed state.
///
/// `state` is `None` when the outcome has (numerically) zero probability.
#[derive(Debug, Clone)]
pub struct Branch {
    pub outcomes: Vec<Outcome>,
    pub probability: f64,
    pub state: Option<StateVector>,
}

/// One step of a measurement plan.
#[derive(Debug, Clone, Copy)]
pub enum PlanStep {
    Single { label: ParticleLabel, basis: BasisChoice },
    Bell { a: ParticleLabel, b: ParticleLabel },
}

/// Projects `s` onto `vector` over the given labels.
///
/// Returns the Born probability and the normalized residual state on the
/// remaining particles (with the measured labels removed). The residual is
/// `None` when the probability is below [`PROB_FLOOR`].
pub fn project_onto(
    s: &StateVector,
    labels: &[ParticleLabel],
    vector: &StateVector,
) -> Result<(f64, Option<StateVector>)> {
    if vector.registry().labels() != labels {
        return Err(QuditError::DimensionMismatch);
    }
    if s.dimension() != vector.dimension() {
        return Err(QuditError::DimensionMismatch);
    }
    let positions: Vec<usize> = labels
        .iter()
        .map(|&l| s.registry().position(l))
        .collect::<Result<_>>()?;

    let d = s.dimension().get();
    let total = s.registry().len();
    let residual_registry = s.registry().without(labels)?;
    let residual_len = d.pow(residual_registry.len() as u32);
    let mut residual = vec![num_complex::Complex64::new(0.0, 0.0); residual_len];

    let v = vector.amplitudes();
    for (idx, &amp) in s.amplitudes().iter().enumerate() {
        if amp.norm_sqr() == 0.0 {
            continue;
        }
        let digits = s.registry().digits(idx);
        let mut measured_idx = 0usize;
        for &pos in &positions {
            measured_idx = measured_idx * d + digits[pos];
        }
        let mut rest_idx = 0usize;
        for (pos, &digit) in digits.iter().enumerate().take(total) {
            if !positions.contains(&pos) {
                rest_idx = rest_idx * d + digit;
            }
        }
        residual[rest_idx] += v[measured_idx].conj() * amp;
    }

    let probability: f64 = residual.iter().map(|a| a.norm_sqr()).sum();
    if probability < PROB_FLOOR {
        return Ok((probability, None));
    }
    Ok((
        probability,
        Some(StateVector::from_raw_normalized(residual_registry, residual)),
    ))
}

/// Enumerates the outcomes of one plan step in lexicographic order.
fn step_branches(s: &StateVector, step: &PlanStep) -> Result<Vec<(Outcome, f64, Option<StateVector>)>> {
    let d = s.dimension();
    let mut out = Vec::new();
    match *step {
        PlanStep::Single { label, basis } => {
            s.registry().position(label)?;
            for u in 0..d.get() {
                let vector = basis_vector(d, basis, u, label)?;
                let (p, residual) = project_onto(s, &[label], &vector)?;
                out.push((Outcome::Single(XOutcome { u }), p, residual));
            }
        }
        PlanStep::Bell { a, b } => {
            if a == b {
                return Err(QuditError::SameParticle);
            }
            s.registry().position(a)?;
            s.registry().position(b)?;
            for u in 0..d.get() {
                for v in 0..d.get() {
                    let vector = bell_state(d, u, v, (a, b))?;
                    let (p, residual) = project_onto(s, &[a, b], &vector)?;
                    out.push((Outcome::Bell(BellOutcome { u, v }), p, residual));
                }
            }
        }
    }
    Ok(out)
}

fn sample_branch(
    branches: Vec<(Outcome, f64, Option<StateVector>)>,
    rng: &mut impl Rng,
) -> Branch {
    let total: f64 = branches.iter().map(|(_, p, _)| p).sum();
    let mut ticket: f64 = rng.gen::<f64>() * total;
    let last = branches.len() - 1;
    for (i, (outcome, p, state)) in branches.into_iter().enumerate() {
        ticket -= p;
        if (ticket <= 0.0 && p > 0.0) || i == last {
            return Branch {
                outcomes: vec![outcome],
                probability: p,
                state,
            };
        }
    }
    unreachable!()
}

/// Measures one particle in the given basis, sampling per the Born rule.
/// The particle is removed from the collapsed state's register.
pub fn measure_single(
    s: &StateVector,
    label: ParticleLabel,
    basis: BasisChoice,
    rng: &mut impl Rng,
) -> Result<Branch> {
    let branches = step_branches(s, &PlanStep::Single { label, basis })?;
    Ok(sample_branch(branches, rng))
}

/// Generalized Bell-state measurement on the pair (a, b); both particles
/// are removed from the collapsed state's register.
pub fn measure_bell(
    s: &StateVector,
    a: ParticleLabel,
    b: ParticleLabel,
    rng: &mut impl Rng,
) -> Result<Branch> {
    let branches = step_branches(s, &PlanStep::Bell { a, b })?;
    Ok(sample_branch(branches, rng))
}

/// Expands every outcome combination of the plan, in lexicographic outcome
/// order, with joint probabilities. Probabilities over all returned branches
/// sum to 1; impossible branches are kept with an absent state.
pub fn enumerate_branches(s: &StateVector, plan: &[PlanStep]) -> Result<Vec<Branch>> {
    let mut frontier = vec![Branch {
        outcomes: Vec::new(),
        probability: 1.0,
        state: Some(s.clone()),
    }];
    for step in plan {
        let mut next = Vec::new();
        for branch in &frontier {
            match &branch.state {
                Some(state) => {
                    for (outcome, p, child) in step_branches(state, step)? {
                        let mut outcomes = branch.outcomes.clone();
                        outcomes.push(outcome);
                        next.push(Branch {
                            outcomes,
                            probability: branch.probability * p,
                            state: child,
                        });
                    }
                }
                None => {
                    // dead branch: fan out zero-probability children so the
                    // outcome grid stays complete
                    let fanout = dead_step_outcomes(s.dimension().get(), step);
                    for outcome in fanout {
                        let mut outcomes = branch.outcomes.clone();
                        outcomes.push(outcome);
                        next.push(Branch {
                            outcomes,
                            probability: 0.0,
                            state: None,
                        });
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(frontier)
}

fn dead_step_outcomes(d: usize, step: &PlanStep) -> Vec<Outcome> {
    match step {
        PlanStep::Single { .. } => (0..d)
            .map(|u| Outcome::Single(XOutcome { u }))
            .collect(),
        PlanStep::Bell { .. } => {
            let mut out = Vec::with_capacity(d * d);
            for u in 0..d {
                for v in 0..d {
                    out.push(Outcome::Bell(BellOutcome { u, v }));
                }
            }
            out
        }
    }
}
