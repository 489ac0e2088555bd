use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_8};

use serde::{Deserialize, Serialize};

use super::{Projector, StateVector, Unitary};
use crate::error::{Error, Result};

/// Subsystem layout of the two-lab space: particle₁, particle₂, memory₁, memory₂.
pub const EWFS_DIMS: [usize; 4] = [2, 2, 2, 2];

/// Which laboratory a superobserver measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LabSide {
    One,
    Two,
}

impl LabSide {
    /// (particle, memory) subsystem indices within [`EWFS_DIMS`].
    pub fn subsystems(self) -> [usize; 2] {
        match self {
            LabSide::One => [0, 2],
            LabSide::Two => [1, 3],
        }
    }
}

/// Superobserver measurement on a whole lab.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LabKind {
    /// Basis `{|Z+⟩, |Z−⟩}`, the friend's own basis.
    Z,
    /// Basis `{(|Z+⟩ ± |Z−⟩)/√2}`.
    X,
}

/// Coefficients of the two-particle state exactly as printed, in the
/// `(++, +−, −+, −−)` z-basis order. Their norm is `1/√2`.
pub fn brukner_raw_coefficients() -> [f64; 4] {
    let (s, c) = FRAC_PI_8.sin_cos();
    [0.5 * s, 0.5 * c, -0.5 * c, 0.5 * s]
}

/// The two-particle state used in the lab-basis CHSH argument, renormalized.
pub fn brukner_state() -> StateVector {
    StateVector::from_real(&brukner_raw_coefficients(), vec![2, 2])
        .expect("fixed coefficients are valid")
}

/// `(|+z,−z⟩ − |−z,+z⟩)/√2`.
pub fn singlet() -> StateVector {
    StateVector::from_real(&[0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0], vec![2, 2])
        .expect("fixed coefficients are valid")
}

/// Spin projectors `[up, down]` along `angle` in the x–z plane.
pub fn spin_measurement_basis(angle: f64) -> Vec<Projector> {
    let up = StateVector::spin_up(angle);
    let down = StateVector::spin_up(angle + std::f64::consts::PI);
    vec![Projector::rank_one(&up), Projector::rank_one(&down)]
}

/// The friend's measurement as a unitary on particle ⊗ memory:
/// `|±z⟩|m₀⟩ → |±z⟩|m±⟩` with `m₀ = m₊ = |0⟩`.
pub fn friend_entangler() -> Unitary {
    Unitary::cnot()
}

fn lab_vectors() -> (StateVector, StateVector) {
    let z_plus = StateVector::from_real(&[1.0, 0.0, 0.0, 0.0], vec![2, 2]).unwrap();
    let z_minus = StateVector::from_real(&[0.0, 0.0, 0.0, 1.0], vec![2, 2]).unwrap();
    (z_plus, z_minus)
}

/// Measurement on one lab (particle ⊗ memory, 4-dim): the `+` and `−`
/// projectors followed by the rank-2 complement onto records that
/// disagree with the particle.
pub fn lab_measurement_basis(kind: LabKind) -> Vec<Projector> {
    let (zp, zm) = lab_vectors();
    let (plus, minus) = match kind {
        LabKind::Z => (zp, zm),
        LabKind::X => {
            let a = zp.amplitudes();
            let b = zm.amplitudes();
            let sum: Vec<_> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            let diff: Vec<_> = a.iter().zip(b).map(|(x, y)| x - y).collect();
            (
                StateVector::new(sum, vec![2, 2]).unwrap(),
                StateVector::new(diff, vec![2, 2]).unwrap(),
            )
        }
    };
    let complement = Projector::span(&[
        StateVector::from_real(&[0.0, 1.0, 0.0, 0.0], vec![2, 2]).unwrap(),
        StateVector::from_real(&[0.0, 0.0, 1.0, 0.0], vec![2, 2]).unwrap(),
    ])
    .unwrap();
    vec![
        Projector::rank_one(&plus),
        Projector::rank_one(&minus),
        complement,
    ]
}

/// Lab measurement lifted to the full 16-dim two-lab space.
pub fn lab_projectors_on_ewfs(side: LabSide, kind: LabKind) -> Vec<Projector> {
    lab_measurement_basis(kind)
        .into_iter()
        .map(|p| p.lift(&EWFS_DIMS, &side.subsystems()).unwrap())
        .collect()
}

/// Attach two ready memories and let both friends measure in z.
pub fn entangle_friends(particles: &StateVector) -> Result<StateVector> {
    if particles.dims() != [2, 2] {
        return Err(Error::Dimension(format!(
            "expected a two-qubit state, got dims {:?}",
            particles.dims()
        )));
    }
    let memories = StateVector::basis(2, 0).tensor(&StateVector::basis(2, 0));
    let mut s = particles.tensor(&memories);
    for side in [LabSide::One, LabSide::Two] {
        let u = friend_entangler().lift(&EWFS_DIMS, &side.subsystems())?;
        s = s.apply(&u)?;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::born_probabilities;
    use approx::assert_abs_diff_eq;

    #[test]
    fn brukner_amplitudes() {
        let s = brukner_state();
        let raw = brukner_raw_coefficients();
        let raw_norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert_abs_diff_eq!(raw_norm, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(s.norm(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.amplitude(1).re, 0.653_281_482_438_188_3, epsilon = 1e-12);
        let signs: Vec<f64> = s.amplitudes().iter().map(|a| a.re.signum()).collect();
        assert_eq!(signs, vec![1.0, 1.0, -1.0, 1.0]);
    }

    #[test]
    fn lab_bases_are_complete() {
        for kind in [LabKind::Z, LabKind::X] {
            let set = lab_measurement_basis(kind);
            assert_eq!(set.len(), 3);
            let s = StateVector::from_real(&[0.3, -0.5, 0.2, 0.9], vec![2, 2]).unwrap();
            let p = born_probabilities(&s, &set).unwrap();
            assert_abs_diff_eq!(p.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn z_and_x_on_z_plus() {
        let z_plus = StateVector::from_real(&[1.0, 0.0, 0.0, 0.0], vec![2, 2]).unwrap();
        let pz = born_probabilities(&z_plus, &lab_measurement_basis(LabKind::Z)).unwrap();
        assert_eq!(pz, vec![1.0, 0.0, 0.0]);
        let px = born_probabilities(&z_plus, &lab_measurement_basis(LabKind::X)).unwrap();
        assert_abs_diff_eq!(px[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(px[1], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(px[2], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn singlet_tensor_memories_support() {
        let s = singlet().tensor(&StateVector::basis(2, 0).tensor(&StateVector::basis(2, 0)));
        assert_eq!(s.dim(), 16);
        for (i, a) in s.amplitudes().iter().enumerate() {
            // memory bits are the two least significant digits
            if i & 0b11 != 0 {
                assert_eq!(a.norm(), 0.0, "index {i}");
            }
        }
        assert_abs_diff_eq!(s.amplitude(0b0100).re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitude(0b1000).re, -FRAC_1_SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn entangle_rejects_wrong_dims() {
        assert!(entangle_friends(&StateVector::basis(2, 0)).is_err());
    }
}
