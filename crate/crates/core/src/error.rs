use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the domain of the model (non-finite fields, bad anisotropy, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Request would exceed a hard resource cap.
    #[error("resource limit: {0}")]
    Resource(String),

    /// Ground state could not be selected unambiguously.
    #[error("degenerate ground state: {0}")]
    Degeneracy(String),

    /// Gapless mode with no well-defined Bogoliubov angle.
    #[error("degenerate mode at k = {k}, h = {field}")]
    DegenerateMode { k: f64, field: f64 },

    /// Time average did not settle before the maximum horizon.
    #[error("time average not converged at horizon {horizon}: residual {residual:e} (partial value {partial})")]
    Convergence {
        partial: f64,
        residual: f64,
        horizon: f64,
    },

    #[error("fit domain error: {0}")]
    FitDomain(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
