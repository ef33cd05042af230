//! JSON state-spec files: { "d": int, "labels": [...], "amplitudes": [[re,im],...] }
//! with amplitudes in registry order, most-significant digit first.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QuditError, Result};
use crate::register::{Dimension, ParticleLabel, StateVector};

#[derive(Debug, Serialize, Deserialize)]
pub struct StateSpec {
    pub d: usize,
    pub labels: Vec<String>,
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateSpec {
    pub fn from_state(state: &StateVector) -> Self {
        StateSpec {
            d: state.dimension().get(),
            labels: state
                .registry()
                .labels()
                .iter()
                .map(|l| l.to_string())
                .collect(),
            amplitudes: state.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
        }
    }

    pub fn to_state(&self) -> Result<StateVector> {
        let d = Dimension::new(self.d)?;
        let labels: Vec<ParticleLabel> = self
            .labels
            .iter()
            .map(|s| s.parse())
            .collect::<Result<_>>()?;
        let amplitudes: Vec<Complex64> = self
            .amplitudes
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        StateVector::from_amplitudes(d, labels, amplitudes)
    }
}

pub fn load_state(path: &std::path::Path) -> Result<StateVector> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| QuditError::InvalidStateSpec(format!("{}: {e}", path.display())))?;
    let spec: StateSpec = serde_json::from_str(&text)
        .map_err(|e| QuditError::InvalidStateSpec(e.to_string()))?;
    spec.to_state()
}

pub fn save_state(state: &StateVector, path: &std::path::Path) -> Result<()> {
    let spec = StateSpec::from_state(state);
    let text = serde_json::to_string_pretty(&spec)
        .map_err(|e| QuditError::InvalidStateSpec(e.to_string()))?;
    std::fs::write(path, text)
        .map_err(|e| QuditError::InvalidStateSpec(format!("{}: {e}", path.display())))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{random_message_state, ProtocolConfig};

    #[test]
    fn round_trip_preserves_amplitudes() {
        let config = ProtocolConfig::new(Dimension::new(3).unwrap(), 2, 0).unwrap();
        let state = random_message_state(&config, 123).unwrap();
        let spec = StateSpec::from_state(&state);
        let text = serde_json::to_string(&spec).unwrap();
        let back: StateSpec = serde_json::from_str(&text).unwrap();
        let recovered = back.to_state().unwrap();
        // lossless binary64 round trip
        assert_eq!(state.amplitudes(), recovered.amplitudes());
        assert_eq!(state.registry(), recovered.registry());
    }

    #[test]
    fn rejects_malformed_labels() {
        let spec = StateSpec {
            d: 2,
            labels: vec!["bogus".into()],
            amplitudes: vec![[1.0, 0.0], [0.0, 0.0]],
        };
        assert!(matches!(
            spec.to_state(),
            Err(QuditError::InvalidStateSpec(_))
        ));
    }
}
