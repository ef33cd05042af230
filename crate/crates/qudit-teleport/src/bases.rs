//! The Z_d and X_d mutually unbiased bases, generalized Bell states,
//! generalized Pauli (Weyl) unitaries U_uv, and GHZ states.
//!
//! All `⊕` arithmetic is addition mod d. Roots of unity are computed with
//! the exponent reduced mod d first.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{QuditError, Result};
use crate::register::{Dimension, ParticleLabel, StateVector};

/// Which single-qudit measuring basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum BasisChoice {
    Z,
    X,
}

/// e^{2πi·(a mod d)/d}
pub fn root_of_unity(d: Dimension, exponent: usize) -> Complex64 {
    let d = d.get();
    Complex64::from_polar(1.0, TAU * ((exponent % d) as f64) / d as f64)
}

fn check_digit(d: Dimension, value: usize) -> Result<()> {
    if value >= d.get() {
        return Err(QuditError::IndexOutOfRange {
            value,
            bound: d.get(),
        });
    }
    Ok(())
}

/// X_d eigenvector |u⟩_x = (1/√d) Σ_l e^{2πi·ul/d} |l⟩ on a single qudit.
pub fn x_basis_vector(d: Dimension, u: usize, label: ParticleLabel) -> Result<StateVector> {
    check_digit(d, u)?;
    let dd = d.get();
    let scale = 1.0 / (dd as f64).sqrt();
    let amplitudes: Vec<Complex64> = (0..dd)
        .map(|l| root_of_unity(d, u * l) * scale)
        .collect();
    StateVector::from_amplitudes(d, vec![label], amplitudes)
}

/// Eigenvector `value` of the requested basis.
pub fn basis_vector(
    d: Dimension,
    basis: BasisChoice,
    value: usize,
    label: ParticleLabel,
) -> Result<StateVector> {
    match basis {
        BasisChoice::Z => StateVector::basis_state(d, label, value),
        BasisChoice::X => x_basis_vector(d, value, label),
    }
}

/// Generalized Bell state |ψ_uv⟩ = (1/√d) Σ_l e^{2πi·lu/d} |l⟩⊗|l+v mod d⟩.
pub fn bell_state(
    d: Dimension,
    u: usize,
    v: usize,
    labels: (ParticleLabel, ParticleLabel),
) -> Result<StateVector> {
    check_digit(d, u)?;
    check_digit(d, v)?;
    let dd = d.get();
    let scale = 1.0 / (dd as f64).sqrt();
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); dd * dd];
    for l in 0..dd {
        amplitudes[l * dd + (l + v) % dd] = root_of_unity(d, l * u) * scale;
    }
    StateVector::from_amplitudes(d, vec![labels.0, labels.1], amplitudes)
}

/// Generalized Pauli unitary U_uv = Σ_l e^{2πi·ul/d} |l+v mod d⟩⟨l|,
/// combining a phase by u with a cyclic shift by v.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedPauli {
    pub u: usize,
    pub v: usize,
    matrix: Vec<Complex64>,
    d: Dimension,
}

impl GeneralizedPauli {
    /// Row-major d×d matrix: entry [(l+v) mod d][l] = e^{2πi·ul/d}.
    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }

    pub fn dimension(&self) -> Dimension {
        self.d
    }
}

pub fn generalized_pauli(d: Dimension, u: usize, v: usize) -> Result<GeneralizedPauli> {
    check_digit(d, u)?;
    check_digit(d, v)?;
    let dd = d.get();
    let mut matrix = vec![Complex64::new(0.0, 0.0); dd * dd];
    for l in 0..dd {
        matrix[((l + v) % dd) * dd + l] = root_of_unity(d, u * l);
    }
    Ok(GeneralizedPauli { u, v, matrix, d })
}

/// GHZ state (1/√d) Σ_l |l⟩^{⊗parties} on the given labels.
pub fn ghz_state(d: Dimension, labels: Vec<ParticleLabel>) -> Result<StateVector> {
    let parties = labels.len();
    if parties < 2 {
        return Err(QuditError::LengthMismatch {
            expected: 2,
            got: parties,
        });
    }
    let dd = d.get();
    let total = d.pow_checked(parties as u32, crate::register::DEFAULT_AMP_CAP)?;
    let scale = Complex64::new(1.0 / (dd as f64).sqrt(), 0.0);
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); total];
    // |l,l,...,l⟩ has flat index l * (d^{parties}-1)/(d-1)
    let repunit = (total - 1) / (dd - 1);
    for l in 0..dd {
        amplitudes[l * repunit] = scale;
    }
    StateVector::from_amplitudes(d, labels, amplitudes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::register::ParticleRegistry;

    fn x(k: usize) -> ParticleLabel {
        ParticleLabel::message(k)
    }

    fn dim(d: usize) -> Dimension {
        Dimension::new(d).unwrap()
    }

    #[test]
    fn x_basis_qubit_plus_state() {
        let s = x_basis_vector(dim(2), 0, x(1)).unwrap();
        let r = 1.0 / 2f64.sqrt();
        assert!((s.amplitudes()[0] - r).norm() < 1e-15);
        assert!((s.amplitudes()[1] - r).norm() < 1e-15);
    }

    #[test]
    fn x_basis_qutrit_u1() {
        let s = x_basis_vector(dim(3), 1, x(1)).unwrap();
        let r = 1.0 / 3f64.sqrt();
        let omega = Complex64::from_polar(1.0, TAU / 3.0);
        assert!((s.amplitudes()[0] - r).norm() < 1e-15);
        assert!((s.amplitudes()[1] - omega * r).norm() < 1e-15);
        assert!((s.amplitudes()[2] - omega * omega * r).norm() < 1e-15);
    }

    #[test]
    fn x_basis_vectors_are_orthonormal() {
        for d in 2..=7 {
            for u in 0..d {
                for up in 0..d {
                    let a = x_basis_vector(dim(d), u, x(1)).unwrap();
                    let b = x_basis_vector(dim(d), up, x(1)).unwrap();
                    let expected = if u == up { 1.0 } else { 0.0 };
                    assert!(
                        (a.inner_product(&b).unwrap().norm() - expected).abs() < 1e-12,
                        "d={d} u={u} u'={up}"
                    );
                }
            }
        }
    }

    #[test]
    fn mub_overlap_is_one_over_d() {
        for d in 2..=7 {
            for k in 0..d {
                let zk = StateVector::basis_state(dim(d), x(1), k).unwrap();
                for u in 0..d {
                    let xu = x_basis_vector(dim(d), u, x(1)).unwrap();
                    let overlap = zk.fidelity(&xu).unwrap();
                    assert!((overlap - 1.0 / d as f64).abs() < 1e-12, "d={d} k={k} u={u}");
                }
            }
        }
    }

    #[test]
    fn bell_state_qubit_psi00() {
        let s = bell_state(dim(2), 0, 0, (x(1), x(2))).unwrap();
        let r = 1.0 / 2f64.sqrt();
        assert!((s.amplitudes()[0] - r).norm() < 1e-15);
        assert!((s.amplitudes()[3] - r).norm() < 1e-15);
        assert!(s.amplitudes()[1].norm() < 1e-15);
        assert!(s.amplitudes()[2].norm() < 1e-15);
    }

    #[test]
    fn bell_states_form_orthonormal_basis() {
        for d in 2..=5 {
            let mut states = Vec::new();
            for u in 0..d {
                for v in 0..d {
                    states.push(bell_state(dim(d), u, v, (x(1), x(2))).unwrap());
                }
            }
            // Gram matrix = identity
            for (i, a) in states.iter().enumerate() {
                for (j, b) in states.iter().enumerate() {
                    let ip = a.inner_product(b).unwrap();
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((ip.norm() - expected).abs() < 1e-12, "d={d} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn bell_completeness_resolves_identity() {
        // Σ_{uv} |ψ_uv⟩⟨ψ_uv| = I on the two-qudit space
        for d in 2..=5usize {
            let mut projector_sum = vec![Complex64::new(0.0, 0.0); d * d * d * d];
            for u in 0..d {
                for v in 0..d {
                    let s = bell_state(dim(d), u, v, (x(1), x(2))).unwrap();
                    let a = s.amplitudes();
                    for i in 0..d * d {
                        for j in 0..d * d {
                            projector_sum[i * d * d + j] += a[i] * a[j].conj();
                        }
                    }
                }
            }
            for i in 0..d * d {
                for j in 0..d * d {
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (projector_sum[i * d * d + j] - expected).norm() < 1e-12,
                        "d={d}"
                    );
                }
            }
        }
    }

    #[test]
    fn pauli_identity_at_zero() {
        let p = generalized_pauli(dim(3), 0, 0).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert_eq!(p.matrix()[i * 3 + j], Complex64::new(expected, 0.0));
            }
        }
    }

    #[test]
    fn qubit_paulis_are_x_and_z() {
        let bit_flip = generalized_pauli(dim(2), 0, 1).unwrap();
        assert_eq!(bit_flip.matrix()[1], Complex64::new(1.0, 0.0)); // |1⟩⟨0|... row 0 col 1
        assert_eq!(bit_flip.matrix()[2], Complex64::new(1.0, 0.0));
        let phase_flip = generalized_pauli(dim(2), 1, 0).unwrap();
        assert_eq!(phase_flip.matrix()[0], Complex64::new(1.0, 0.0));
        assert!((phase_flip.matrix()[3] - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn pauli_unitarity() {
        for d in 2..=7 {
            for u in 0..d {
                for v in 0..d {
                    let p = generalized_pauli(dim(d), u, v).unwrap();
                    let m = p.matrix();
                    for i in 0..d {
                        for j in 0..d {
                            let mut acc = Complex64::new(0.0, 0.0);
                            for k in 0..d {
                                acc += m[k * d + i].conj() * m[k * d + j];
                            }
                            let expected = if i == j { 1.0 } else { 0.0 };
                            assert!((acc - expected).norm() < 1e-12, "d={d} u={u} v={v}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn pauli_maps_psi00_to_psi_uv() {
        // (I ⊗ U_uv)|ψ00⟩ = |ψ_uv⟩: the operation acts on the second slot
        for d in 2..=7 {
            let psi00 = bell_state(dim(d), 0, 0, (x(1), x(2))).unwrap();
            for u in 0..d {
                for v in 0..d {
                    let pauli = generalized_pauli(dim(d), u, v).unwrap();
                    let moved = psi00
                        .apply_single_qudit_unitary(x(2), pauli.matrix())
                        .unwrap();
                    let target = bell_state(dim(d), u, v, (x(1), x(2))).unwrap();
                    let diff: f64 = moved
                        .amplitudes()
                        .iter()
                        .zip(target.amplitudes())
                        .map(|(a, b)| (a - b).norm())
                        .sum();
                    assert!(diff < 1e-12, "d={d} u={u} v={v} diff={diff}");
                }
            }
        }
    }

    #[test]
    fn ghz_two_parties_is_psi00() {
        let g = ghz_state(dim(2), vec![x(1), x(2)]).unwrap();
        let b = bell_state(dim(2), 0, 0, (x(1), x(2))).unwrap();
        assert!((g.fidelity(&b).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ghz_qutrit_four_parties() {
        let g = ghz_state(dim(3), (1..=4).map(x).collect()).unwrap();
        let nonzero: Vec<_> = g
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > 1e-15)
            .collect();
        assert_eq!(nonzero.len(), 3);
        for (idx, a) in nonzero {
            assert!((a.norm() - 1.0 / 3f64.sqrt()).abs() < 1e-12);
            let digits = ParticleRegistry::new(dim(3), (1..=4).map(x).collect())
                .unwrap()
                .digits(idx);
            assert!(digits.windows(2).all(|w| w[0] == w[1]));
        }
    }

    #[test]
    fn index_out_of_range_rejected() {
        assert!(matches!(
            x_basis_vector(dim(3), 3, x(1)),
            Err(QuditError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            bell_state(dim(2), 0, 2, (x(1), x(2))),
            Err(QuditError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            generalized_pauli(dim(2), 2, 0),
            Err(QuditError::IndexOutOfRange { .. })
        ));
    }
}
