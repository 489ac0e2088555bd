//! Deterministic local strategies `λ = (A₁, A₂, B₁, B₂)`.

use serde::{Deserialize, Serialize};

/// One of the 16 deterministic assignments of ±1 to both settings of both
/// parties. Bit 3 is A₁, bit 2 A₂, bit 1 B₁, bit 0 B₂; a set bit means −1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Strategy(u8);

impl Strategy {
    pub const COUNT: usize = 16;

    pub fn new(id: u8) -> Option<Self> {
        (usize::from(id) < Self::COUNT).then_some(Strategy(id))
    }

    pub fn from_values(a1: i8, a2: i8, b1: i8, b2: i8) -> Self {
        let bit = |v: i8| u8::from(v < 0);
        Strategy(bit(a1) << 3 | bit(a2) << 2 | bit(b1) << 1 | bit(b2))
    }

    pub fn all() -> impl Iterator<Item = Strategy> {
        (0..Self::COUNT as u8).map(Strategy)
    }

    pub fn id(self) -> u8 {
        self.0
    }

    fn value(self, bit: u8) -> i8 {
        if self.0 >> bit & 1 == 1 {
            -1
        } else {
            1
        }
    }

    /// Alice's outcome for setting `x ∈ {1, 2}`.
    pub fn a(self, x: u8) -> i8 {
        match x {
            1 => self.value(3),
            2 => self.value(2),
            _ => panic!("setting {x} out of range"),
        }
    }

    /// Bob's outcome for setting `y ∈ {1, 2}`.
    pub fn b(self, y: u8) -> i8 {
        match y {
            1 => self.value(1),
            2 => self.value(0),
            _ => panic!("setting {y} out of range"),
        }
    }
}
