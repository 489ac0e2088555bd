use std::fmt;

use serde::{Deserialize, Serialize};

use super::ExpectationMatrix;
use crate::error::Result;

/// Local bound shared by all eight CHSH facets.
pub const CHSH_BOUND: f64 = 2.0;

/// One of the eight CHSH facets of the two-setting local polytope:
/// `sign · (Σ E(x,y) − 2·E(minus_at))`.
///
/// Variant 0 is the canonical `E11 + E12 + E21 − E22`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChshVariant {
    /// Setting pair whose term is subtracted.
    pub minus_at: (u8, u8),
    /// Whether the whole expression is negated.
    pub negated: bool,
}

impl ChshVariant {
    pub const CANONICAL: ChshVariant = ChshVariant {
        minus_at: (2, 2),
        negated: false,
    };

    const MINUS_ORDER: [(u8, u8); 4] = [(2, 2), (2, 1), (1, 2), (1, 1)];

    pub fn all() -> impl Iterator<Item = ChshVariant> {
        Self::MINUS_ORDER.into_iter().flat_map(|minus_at| {
            [false, true].into_iter().map(move |negated| ChshVariant { minus_at, negated })
        })
    }

    pub fn id(self) -> u8 {
        let pos = Self::MINUS_ORDER
            .iter()
            .position(|&m| m == self.minus_at)
            .expect("valid minus position") as u8;
        pos * 2 + u8::from(self.negated)
    }

    /// Coefficient of `E(x, y)`.
    pub fn coefficient(self, x: u8, y: u8) -> f64 {
        let s = if (x, y) == self.minus_at { -1.0 } else { 1.0 };
        if self.negated {
            -s
        } else {
            s
        }
    }

    pub fn evaluate(self, values: &[[f64; 2]; 2]) -> f64 {
        let mut s = 0.0;
        for x in 1..=2u8 {
            for y in 1..=2u8 {
                s += self.coefficient(x, y) * values[usize::from(x) - 1][usize::from(y) - 1];
            }
        }
        s
    }
}

impl fmt::Display for ChshVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = String::new();
        for x in 1..=2u8 {
            for y in 1..=2u8 {
                let sign = if self.coefficient(x, y) > 0.0 { '+' } else { '-' };
                terms.push_str(&format!("{sign}E{x}{y}"));
            }
        }
        f.write_str(terms.trim_start_matches('+'))
    }
}

fn quadrature_se(e: &ExpectationMatrix) -> f64 {
    e.standard_errors.iter().flatten().map(|s| s * s).sum::<f64>().sqrt()
}

/// Canonical `S = E11 + E12 + E21 − E22` with its standard error.
pub fn chsh_value(e: &ExpectationMatrix) -> Result<(f64, f64)> {
    e.check_populated()?;
    Ok((ChshVariant::CANONICAL.evaluate(&e.values), quadrature_se(e)))
}

/// Largest value over the eight CHSH facets and the facet attaining it.
/// Ties go to the lowest variant id.
pub fn chsh_max_variant(e: &ExpectationMatrix) -> Result<(f64, ChshVariant)> {
    e.check_populated()?;
    let mut best = (f64::NEG_INFINITY, ChshVariant::CANONICAL);
    for v in ChshVariant::all() {
        let s = v.evaluate(&e.values);
        if s > best.0 {
            best = (s, v);
        }
    }
    Ok(best)
}

/// Summary of a CHSH evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChshSummary {
    /// Canonical-form value.
    pub canonical: f64,
    /// Largest facet value; this is what is compared with the bound.
    pub max: f64,
    pub variant: ChshVariant,
    pub standard_error: f64,
}

impl ChshSummary {
    pub fn from_expectations(e: &ExpectationMatrix) -> Result<Self> {
        let (canonical, standard_error) = chsh_value(e)?;
        let (max, variant) = chsh_max_variant(e)?;
        Ok(ChshSummary {
            canonical,
            max,
            variant,
            standard_error,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn variant_ids_are_unique() {
        let mut ids: Vec<u8> = ChshVariant::all().map(ChshVariant::id).collect();
        ids.sort();
        assert_eq!(ids, (0..8).collect::<Vec<_>>());
        assert_eq!(ChshVariant::CANONICAL.id(), 0);
        assert_eq!(ChshVariant::CANONICAL.to_string(), "E11+E12+E21-E22");
    }

    #[test]
    fn canonical_examples() {
        let (s, se) = chsh_value(&ExpectationMatrix::exact([[1.0, 1.0], [1.0, 1.0]])).unwrap();
        assert_eq!((s, se), (2.0, 0.0));
        let (s, _) = chsh_value(&ExpectationMatrix::exact([[1.0, 1.0], [1.0, -1.0]])).unwrap();
        assert_eq!(s, 4.0);
    }

    #[test]
    fn max_variant_examples() {
        let (s, v) = chsh_max_variant(&ExpectationMatrix::exact([[-1.0, -1.0], [-1.0, 1.0]])).unwrap();
        assert_eq!(s, 4.0);
        assert_eq!(v, ChshVariant { minus_at: (2, 2), negated: true });
        let (s, _) = chsh_max_variant(&ExpectationMatrix::exact([[0.0; 2]; 2])).unwrap();
        assert_eq!(s, 0.0);
    }

    #[test]
    fn se_by_quadrature() {
        let e = ExpectationMatrix {
            values: [[0.0; 2]; 2],
            standard_errors: [[0.3, 0.4], [0.0, 0.0]],
        };
        assert!((chsh_value(&e).unwrap().1 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn empty_cell_errors() {
        let mut e = ExpectationMatrix::exact([[0.0; 2]; 2]);
        e.values[1][0] = f64::NAN;
        assert!(matches!(chsh_value(&e), Err(Error::EmptyCell { x: 2, y: 1 })));
        assert!(chsh_max_variant(&e).is_err());
    }
}
