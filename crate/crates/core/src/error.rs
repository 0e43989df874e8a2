use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{family} lattice of size {lx}x{ly} cannot be 3-face-colored on a torus")]
    ColoringInfeasible { family: String, lx: usize, ly: usize },
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("contract violation: {0}")]
    ContractViolation(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("no crossing in range: {0}")]
    NoCrossing(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
