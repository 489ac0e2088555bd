use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{Unitary, NORM_TOL};
use crate::error::{Error, Result};

/// Pure state over a composite Hilbert space.
///
/// Amplitudes are stored in the canonical flat ordering: the first subsystem
/// is the most significant digit of the index.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: DVector<Complex64>,
    dims: Vec<usize>,
}

impl StateVector {
    /// Build a state from raw amplitudes. The result is normalized.
    pub fn new(amplitudes: Vec<Complex64>, dims: Vec<usize>) -> Result<Self> {
        let expected: usize = dims.iter().product();
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::Dimension(format!("invalid subsystem dims {dims:?}")));
        }
        if expected != amplitudes.len() {
            return Err(Error::Dimension(format!(
                "{} amplitudes for dims {:?} (product {})",
                amplitudes.len(),
                dims,
                expected
            )));
        }
        if expected > super::MAX_DIM {
            return Err(Error::Dimension(format!(
                "total dimension {expected} exceeds {}",
                super::MAX_DIM
            )));
        }
        let mut s = StateVector {
            amplitudes: DVector::from_vec(amplitudes),
            dims,
        };
        s.normalize()?;
        Ok(s)
    }

    /// Real-amplitude convenience constructor.
    pub fn from_real(amplitudes: &[f64], dims: Vec<usize>) -> Result<Self> {
        Self::new(
            amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect(),
            dims,
        )
    }

    /// Computational basis vector `|index⟩` of a single `dim`-level system.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dim {dim}");
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        StateVector {
            amplitudes: DVector::from_vec(amps),
            dims: vec![dim],
        }
    }

    /// Qubit `alpha|0⟩ + beta|1⟩`, normalized.
    pub fn qubit(alpha: Complex64, beta: Complex64) -> Result<Self> {
        Self::new(vec![alpha, beta], vec![2])
    }

    /// Spin-up state along a direction at `angle` from +z in the x–z plane.
    pub fn spin_up(angle: f64) -> Self {
        let (s, c) = (angle / 2.0).sin_cos();
        StateVector {
            amplitudes: DVector::from_vec(vec![Complex64::new(c, 0.0), Complex64::new(s, 0.0)]),
            dims: vec![2],
        }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        self.amplitudes.as_slice()
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Total Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if n < 1e-300 || !n.is_finite() {
            return Err(Error::Degenerate("cannot normalize a zero state".into()));
        }
        self.amplitudes.unscale_mut(n);
        Ok(())
    }

    /// Kronecker product; subsystem dims are concatenated.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in self.amplitudes.iter() {
            for b in other.amplitudes.iter() {
                amps.push(a * b);
            }
        }
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let mut s = StateVector {
            amplitudes: DVector::from_vec(amps),
            dims,
        };
        // inputs are normalized so this only trims rounding
        s.normalize().expect("product of normalized states is nonzero");
        s
    }

    pub fn apply(&self, u: &Unitary) -> Result<StateVector> {
        if u.dim() != self.dim() {
            return Err(Error::Dimension(format!(
                "unitary of dim {} applied to state of dim {}",
                u.dim(),
                self.dim()
            )));
        }
        Ok(StateVector {
            amplitudes: u.matrix() * &self.amplitudes,
            dims: self.dims.clone(),
        })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// `⟨self|M|self⟩` for an operator of matching dimension.
    pub fn expectation(&self, op: &DMatrix<Complex64>) -> Complex64 {
        self.amplitudes.dotc(&(op * &self.amplitudes))
    }

    /// Apply an arbitrary operator without renormalizing.
    pub(crate) fn map_unnormalized(&self, op: &DMatrix<Complex64>) -> StateVector {
        StateVector {
            amplitudes: op * &self.amplitudes,
            dims: self.dims.clone(),
        }
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= NORM_TOL
    }
}

/// Kronecker product of two states.
pub fn tensor(a: &StateVector, b: &StateVector) -> StateVector {
    a.tensor(b)
}
