use serde::{Deserialize, Serialize};
use std::fmt;

/// Face / link / ancilla color of a 3-colorable lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Green,
    Blue,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::Red, Color::Green, Color::Blue];

    pub fn index(self) -> usize {
        match self {
            Color::Red => 0,
            Color::Green => 1,
            Color::Blue => 2,
        }
    }

    pub fn from_index(index: usize) -> Color {
        Color::ALL[index % 3]
    }

    /// The two colors different from `self`, in canonical order.
    pub fn others(self) -> [Color; 2] {
        match self {
            Color::Red => [Color::Green, Color::Blue],
            Color::Green => [Color::Red, Color::Blue],
            Color::Blue => [Color::Red, Color::Green],
        }
    }

    /// The color distinct from both `a` and `b` (which must differ).
    pub fn third(a: Color, b: Color) -> Color {
        debug_assert_ne!(a, b);
        Color::from_index(3 - a.index() - b.index())
    }

    pub fn letter(self) -> char {
        match self {
            Color::Red => 'r',
            Color::Green => 'g',
            Color::Blue => 'b',
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Color::Red => "red",
            Color::Green => "green",
            Color::Blue => "blue",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Primality {
    Primal,
    Dual,
}

impl Primality {
    /// Layers with even time are primal.
    pub fn of_layer(t: usize) -> Primality {
        if t % 2 == 0 {
            Primality::Primal
        } else {
            Primality::Dual
        }
    }

    pub fn opposite(self) -> Primality {
        match self {
            Primality::Primal => Primality::Dual,
            Primality::Dual => Primality::Primal,
        }
    }

    /// Parity of the layers whose ancillas carry this primality.
    pub fn layer_parity(self) -> usize {
        match self {
            Primality::Primal => 0,
            Primality::Dual => 1,
        }
    }
}

impl fmt::Display for Primality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Primality::Primal => "primal",
            Primality::Dual => "dual",
        })
    }
}
