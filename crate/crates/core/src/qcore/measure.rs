use rand::Rng;

use super::{CMatrix, Projector, StateVector, STRUCT_TOL};
use crate::error::{Error, Result};

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn check_complete(dim: usize, projectors: &[Projector]) -> Result<()> {
    if projectors.is_empty() {
        return Err(Error::Contract("empty projector set".into()));
    }
    if let Some(p) = projectors.iter().find(|p| p.dim() != dim) {
        return Err(Error::Dimension(format!(
            "projector of dim {} for state of dim {dim}",
            p.dim()
        )));
    }
    let mut sum = CMatrix::zeros(dim, dim);
    for p in projectors {
        sum += p.matrix();
    }
    let defect = max_abs(&(sum - CMatrix::identity(dim, dim)));
    if defect > STRUCT_TOL {
        return Err(Error::Contract(format!(
            "projectors do not sum to identity (defect {defect:.3e})"
        )));
    }
    for (i, p) in projectors.iter().enumerate() {
        for q in &projectors[i + 1..] {
            let overlap = max_abs(&(p.matrix() * q.matrix()));
            if overlap > STRUCT_TOL {
                return Err(Error::Contract(format!(
                    "projectors not mutually orthogonal (overlap {overlap:.3e})"
                )));
            }
        }
    }
    Ok(())
}

/// A projector set validated once as complete and orthogonal, reusable
/// across many states.
#[derive(Clone, Debug)]
pub struct ProjectiveMeasurement {
    projectors: Vec<Projector>,
}

impl ProjectiveMeasurement {
    pub fn new(projectors: Vec<Projector>) -> Result<Self> {
        let dim = projectors.first().map(Projector::dim).unwrap_or(0);
        check_complete(dim, &projectors)?;
        Ok(ProjectiveMeasurement { projectors })
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].dim()
    }

    pub fn projectors(&self) -> &[Projector] {
        &self.projectors
    }

    pub fn probabilities(&self, s: &StateVector) -> Result<Vec<f64>> {
        if s.dim() != self.dim() {
            return Err(Error::Dimension(format!(
                "measurement of dim {} on state of dim {}",
                self.dim(),
                s.dim()
            )));
        }
        Ok(self
            .projectors
            .iter()
            .map(|p| s.expectation(p.matrix()).re.max(0.0))
            .collect())
    }

    /// Sample an outcome with Born probability and return the collapsed,
    /// renormalized post-measurement state.
    pub fn collapse<R: Rng + ?Sized>(
        &self,
        s: &StateVector,
        rng: &mut R,
    ) -> Result<(usize, StateVector)> {
        let probs = self.probabilities(s)?;
        let i = sample_index(&probs, rng)?;
        let mut post = s.map_unnormalized(self.projectors[i].matrix());
        post.normalize()?;
        Ok((i, post))
    }
}

/// Draw an index from (possibly unnormalized) weights; weights below 1e-15
/// are never selected.
pub fn sample_index<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> Result<usize> {
    if weights.iter().all(|&p| p < 1e-15) {
        return Err(Error::Degenerate("all outcome probabilities vanish".into()));
    }
    let total: f64 = weights.iter().filter(|&&p| p >= 1e-15).sum();
    let u: f64 = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    let mut chosen = 0;
    for (i, &p) in weights.iter().enumerate() {
        if p < 1e-15 {
            continue;
        }
        acc += p;
        chosen = i;
        if u < acc {
            break;
        }
    }
    Ok(chosen)
}

/// Born probabilities `⟨s|Pᵢ|s⟩` for a complete orthogonal projector set.
pub fn born_probabilities(s: &StateVector, projectors: &[Projector]) -> Result<Vec<f64>> {
    check_complete(s.dim(), projectors)?;
    ProjectiveMeasurement {
        projectors: projectors.to_vec(),
    }
    .probabilities(s)
}

/// One-shot form of [`ProjectiveMeasurement::collapse`].
pub fn project_and_collapse<R: Rng + ?Sized>(
    s: &StateVector,
    projectors: &[Projector],
    rng: &mut R,
) -> Result<(usize, StateVector)> {
    check_complete(s.dim(), projectors)?;
    ProjectiveMeasurement {
        projectors: projectors.to_vec(),
    }
    .collapse(s, rng)
}
