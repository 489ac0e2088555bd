use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{StateVector, STRUCT_TOL};
use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn check_square(m: &CMatrix, what: &str) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::Dimension(format!(
            "{what} must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

/// Orthogonal projector (Hermitian and idempotent).
#[derive(Clone, Debug, PartialEq)]
pub struct Projector {
    matrix: CMatrix,
}

impl Projector {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        check_square(&matrix, "projector")?;
        let herm = max_abs(&(&matrix - matrix.adjoint()));
        let idem = max_abs(&(&matrix * &matrix - &matrix));
        if herm > STRUCT_TOL || idem > STRUCT_TOL {
            return Err(Error::Contract(format!(
                "not a projector (hermiticity defect {herm:.3e}, idempotence defect {idem:.3e})"
            )));
        }
        Ok(Projector { matrix })
    }

    /// `|v⟩⟨v|` for a normalized vector.
    pub fn rank_one(v: &StateVector) -> Self {
        let col = CMatrix::from_column_slice(v.dim(), 1, v.amplitudes());
        Projector {
            matrix: &col * col.adjoint(),
        }
    }

    /// Sum of mutually orthogonal rank-one projectors onto the given vectors.
    pub fn span(vectors: &[StateVector]) -> Result<Self> {
        let dim = vectors
            .first()
            .map(StateVector::dim)
            .ok_or_else(|| Error::Contract("empty span".into()))?;
        let mut m = CMatrix::zeros(dim, dim);
        for v in vectors {
            m += Projector::rank_one(v).matrix;
        }
        Projector::new(m)
    }

    pub fn identity(dim: usize) -> Self {
        Projector {
            matrix: CMatrix::identity(dim, dim),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Embed this projector on `targets` of a composite system with `dims`.
    pub fn lift(&self, dims: &[usize], targets: &[usize]) -> Result<Self> {
        Ok(Projector {
            matrix: embed(&self.matrix, dims, targets)?,
        })
    }
}

/// Unitary operator.
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary {
    matrix: CMatrix,
}

impl Unitary {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        check_square(&matrix, "unitary")?;
        let n = matrix.nrows();
        let defect = max_abs(&(matrix.adjoint() * &matrix - CMatrix::identity(n, n)));
        if defect > STRUCT_TOL {
            return Err(Error::Contract(format!(
                "not unitary (U†U defect {defect:.3e})"
            )));
        }
        Ok(Unitary { matrix })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn lift(&self, dims: &[usize], targets: &[usize]) -> Result<Self> {
        Ok(Unitary {
            matrix: embed(&self.matrix, dims, targets)?,
        })
    }

    /// Controlled-NOT on (control, target) qubits: `|z⟩|m⟩ → |z⟩|m ⊕ z⟩`.
    pub fn cnot() -> Self {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = c(1.0);
        m[(1, 1)] = c(1.0);
        m[(2, 3)] = c(1.0);
        m[(3, 2)] = c(1.0);
        Unitary { matrix: m }
    }

    /// Rotation of a spin-1/2 about y by `angle`, taking `|+z⟩` to the
    /// spin-up state at `angle` in the x–z plane.
    pub fn rotation_y(angle: f64) -> Self {
        let (s, co) = (angle / 2.0).sin_cos();
        Unitary {
            matrix: CMatrix::from_row_slice(2, 2, &[c(co), c(-s), c(s), c(co)]),
        }
    }
}

/// Expand `local` (acting on the subsystems `targets`, in that order) to the
/// full space described by `dims`, acting as identity elsewhere.
pub fn embed(local: &CMatrix, dims: &[usize], targets: &[usize]) -> Result<CMatrix> {
    for (i, &t) in targets.iter().enumerate() {
        if t >= dims.len() || targets[..i].contains(&t) {
            return Err(Error::Dimension(format!(
                "invalid target list {targets:?} for dims {dims:?}"
            )));
        }
    }
    let local_dim: usize = targets.iter().map(|&t| dims[t]).product();
    if local.nrows() != local_dim || local.ncols() != local_dim {
        return Err(Error::Dimension(format!(
            "operator of dim {} does not match targets {targets:?} (dim {local_dim})",
            local.nrows()
        )));
    }
    let total: usize = dims.iter().product();
    let digits = |mut idx: usize| {
        let mut d = vec![0usize; dims.len()];
        for k in (0..dims.len()).rev() {
            d[k] = idx % dims[k];
            idx /= dims[k];
        }
        d
    };
    let local_index = |d: &[usize]| targets.iter().fold(0, |acc, &t| acc * dims[t] + d[t]);
    let all_digits: Vec<Vec<usize>> = (0..total).map(digits).collect();

    let mut out = CMatrix::zeros(total, total);
    for (i, di) in all_digits.iter().enumerate() {
        for (j, dj) in all_digits.iter().enumerate() {
            let spectators_match = (0..dims.len())
                .filter(|k| !targets.contains(k))
                .all(|k| di[k] == dj[k]);
            if spectators_match {
                out[(i, j)] = local[(local_index(di), local_index(dj))];
            }
        }
    }
    Ok(out)
}
