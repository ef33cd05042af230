//! Decoy-photon channel verification with an intercept-resend eavesdropper.
//!
//! The sender inserts single qudits drawn uniformly from the 2d states
//! {|0⟩..|d-1⟩} ∪ {|0⟩_x..|d-1⟩_x} into the transmitted sequences. After
//! transmission the receiver measures each announced decoy in its
//! preparation basis; any outcome differing from the prepared value counts
//! as an error. The channel itself is noiseless, so a nonzero error rate
//! is evidence of the eavesdropper.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bases::{basis_vector, BasisChoice};
use crate::error::{QuditError, Result};
use crate::measure::{measure_single, Outcome};
use crate::register::{Dimension, ParticleLabel, StateVector};

/// Preparation record of one decoy qudit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoyRecord {
    pub basis: BasisChoice,
    pub value: usize,
    /// Insertion position in the host sequence; physically irrelevant in
    /// this model but reported for traceability.
    pub position: usize,
}

/// Eavesdropper model on the quantum line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EveModel {
    None,
    /// Measures every transiting qudit in a uniformly random basis from
    /// {Z, X} and resends the outcome eigenstate.
    InterceptResend,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecoyReport {
    pub d: usize,
    pub count: usize,
    pub eve_model: EveModel,
    pub errors: usize,
    pub rate: f64,
    pub analytic_rate: f64,
    pub seed: u64,
}

/// Draws `count` decoys, each uniform over the 2d preparation states.
pub fn generate_decoys(
    d: Dimension,
    count: usize,
    rng: &mut impl Rng,
) -> Result<Vec<(DecoyRecord, StateVector)>> {
    let mut out = Vec::with_capacity(count);
    for position in 0..count {
        let basis = if rng.gen_bool(0.5) {
            BasisChoice::Z
        } else {
            BasisChoice::X
        };
        let value = rng.gen_range(0..d.get());
        let state = basis_vector(d, basis, value, ParticleLabel::decoy(position))?;
        out.push((DecoyRecord { basis, value, position }, state));
    }
    Ok(out)
}

/// Sends the decoy states through the line, applying the eavesdropper.
pub fn transmit(
    decoys: &[(DecoyRecord, StateVector)],
    eve: EveModel,
    rng: &mut impl Rng,
) -> Result<Vec<StateVector>> {
    let mut out = Vec::with_capacity(decoys.len());
    for (record, state) in decoys {
        let transmitted = match eve {
            EveModel::None => state.clone(),
            EveModel::InterceptResend => {
                let basis = if rng.gen_bool(0.5) {
                    BasisChoice::Z
                } else {
                    BasisChoice::X
                };
                let label = ParticleLabel::decoy(record.position);
                let branch = measure_single(state, label, basis, rng)?;
                let Outcome::Single(o) = branch.outcomes[0] else {
                    unreachable!()
                };
                // resend the outcome eigenstate
                basis_vector(state.dimension(), basis, o.u, label)?
            }
        };
        out.push(transmitted);
    }
    Ok(out)
}

/// Receiver-side check: measure each decoy in its preparation basis and
/// count outcomes that differ from the prepared value.
pub fn check_decoys(
    transmitted: &[StateVector],
    records: &[DecoyRecord],
    rng: &mut impl Rng,
) -> Result<(usize, f64)> {
    if transmitted.len() != records.len() {
        return Err(QuditError::LengthMismatch {
            expected: records.len(),
            got: transmitted.len(),
        });
    }
    let mut errors = 0usize;
    for (state, record) in transmitted.iter().zip(records) {
        let label = ParticleLabel::decoy(record.position);
        let branch = measure_single(state, label, record.basis, rng)?;
        let Outcome::Single(o) = branch.outcomes[0] else {
            unreachable!()
        };
        if o.u != record.value {
            errors += 1;
        }
    }
    let rate = if records.is_empty() {
        0.0
    } else {
        errors as f64 / records.len() as f64
    };
    Ok((errors, rate))
}

/// Closed-form per-decoy detection probability for the supported models.
///
/// Intercept-resend: with probability 1/2 the eavesdropper guesses the
/// preparation basis and passes unnoticed; otherwise the MUB overlap leaves
/// a 1/d chance of passing, so the detection probability is (1/2)(1 − 1/d).
pub fn detection_probability_analytic(d: Dimension, eve: EveModel) -> f64 {
    match eve {
        EveModel::None => 0.0,
        EveModel::InterceptResend => 0.5 * (1.0 - 1.0 / d.get() as f64),
    }
}

/// Generates, transmits and checks `count` decoys with a seeded generator.
pub fn run_decoy_experiment(
    d: Dimension,
    count: usize,
    eve: EveModel,
    seed: u64,
) -> Result<DecoyReport> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    let decoys = generate_decoys(d, count, &mut rng)?;
    let transmitted = transmit(&decoys, eve, &mut rng)?;
    let records: Vec<DecoyRecord> = decoys.iter().map(|(r, _)| *r).collect();
    let (errors, rate) = check_decoys(&transmitted, &records, &mut rng)?;
    Ok(DecoyReport {
        d: d.get(),
        count,
        eve_model: eve,
        errors,
        rate,
        analytic_rate: detection_probability_analytic(d, eve),
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn dim(d: usize) -> Dimension {
        Dimension::new(d).unwrap()
    }

    #[test]
    fn zero_decoys_is_empty() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        assert!(generate_decoys(dim(3), 0, &mut rng).unwrap().is_empty());
    }

    #[test]
    fn decoy_states_are_normalized() {
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        for (_, state) in generate_decoys(dim(5), 200, &mut rng).unwrap() {
            assert!((state.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn decoy_preparation_is_uniform_over_2d_states() {
        let d = 2;
        let n = 100_000usize;
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let decoys = generate_decoys(dim(d), n, &mut rng).unwrap();
        let mut counts = std::collections::HashMap::new();
        for (record, _) in &decoys {
            *counts.entry((record.basis, record.value)).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 2 * d);
        let p = 1.0 / (2 * d) as f64;
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        for (&key, &c) in &counts {
            let freq = c as f64 / n as f64;
            assert!((freq - p).abs() < 4.0 * sigma, "{key:?}: freq={freq}");
        }
    }

    #[test]
    fn no_eavesdropper_no_errors() {
        let report = run_decoy_experiment(dim(3), 5000, EveModel::None, 4).unwrap();
        assert_eq!(report.errors, 0);
        assert_eq!(report.rate, 0.0);
        assert_eq!(report.analytic_rate, 0.0);
    }

    #[test]
    fn analytic_rates() {
        assert!((detection_probability_analytic(dim(2), EveModel::InterceptResend) - 0.25).abs() < 1e-15);
        assert!((detection_probability_analytic(dim(3), EveModel::InterceptResend) - 1.0 / 3.0).abs() < 1e-15);
        assert!((detection_probability_analytic(dim(5), EveModel::InterceptResend) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn intercept_resend_rate_matches_analytic() {
        let n = 100_000usize;
        for (d, seed) in [(2usize, 7u64), (3, 8), (5, 9)] {
            let report =
                run_decoy_experiment(dim(d), n, EveModel::InterceptResend, seed).unwrap();
            let p = report.analytic_rate;
            let sigma = (p * (1.0 - p) / n as f64).sqrt();
            assert!(
                (report.rate - p).abs() < 4.0 * sigma,
                "d={d} rate={} analytic={p}",
                report.rate
            );
        }
    }

    #[test]
    fn detection_rate_increases_with_d() {
        let mut last = 0.0;
        for d in 2..=7 {
            let rate = detection_probability_analytic(dim(d), EveModel::InterceptResend);
            assert!(rate > last);
            last = rate;
        }
    }

    #[test]
    fn eve_guessing_preparation_basis_leaves_state_intact() {
        // transmit with Eve=None: fidelity 1 each
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let decoys = generate_decoys(dim(3), 50, &mut rng).unwrap();
        let sent = transmit(&decoys, EveModel::None, &mut rng).unwrap();
        for ((_, original), transmitted) in decoys.iter().zip(&sent) {
            assert!((original.fidelity(transmitted).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn check_rejects_length_mismatch() {
        let mut rng = ChaCha12Rng::seed_from_u64(12);
        let decoys = generate_decoys(dim(2), 3, &mut rng).unwrap();
        let sent = transmit(&decoys, EveModel::None, &mut rng).unwrap();
        let records: Vec<DecoyRecord> = decoys.iter().take(2).map(|(r, _)| *r).collect();
        assert!(matches!(
            check_decoys(&sent, &records, &mut rng),
            Err(QuditError::LengthMismatch { .. })
        ));
    }
}
