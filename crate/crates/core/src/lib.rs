//! Color-code-based cluster states (CCCS) and Raussendorf cluster states (RTCS):
//! lattice and graph construction, shrunk-lattice chain complexes, Pauli/stabilizer
//! algebra, noise sampling, matching decoders, threshold estimation and resource
//! overhead optimization.

pub mod chain;
pub mod color;
pub mod decoder;
pub mod error;
pub mod f2;
pub mod graph;
pub mod lattice;
pub mod matching;
pub mod noise;
pub mod pauli;
pub mod region;
pub mod resources;
pub mod stabilizer;
pub mod threshold;
pub mod verify;

pub use color::{Color, Primality};
pub use error::{Error, Result};
