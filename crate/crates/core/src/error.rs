use alloc::string::String;

/// Errors raised by the simulation core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("pauli site {site} out of range for {n_qubits} qubit(s)")]
    SiteOutOfRange { site: usize, n_qubits: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not hermitian (max asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("no protected subspace: E_mx and E_my are both zero")]
    NoProtectedSubspace,

    #[error("singular coupling: {0}")]
    SingularCoupling(&'static str),

    #[error("duplicate noise channel {0}")]
    DuplicateChannel(String),

    #[error("resonator is off resonance (omega0 = {omega0:e}, 2 E_z = {two_ez:e}); doublets not constructed")]
    OffResonance { omega0: f64, two_ez: f64 },

    #[error("invalid noise spectrum: {0}")]
    InvalidSpectrum(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("time step {dt:e} s exceeds the limit {limit:e} s")]
    StepTooLarge { dt: f64, limit: f64 },

    #[error("norm drift {drift:e} exceeds tolerance (step too large)")]
    NormDrift { drift: f64 },

    #[error("too few trajectories: {got} (need at least {need})")]
    TooFewTrajectories { got: usize, need: usize },

    #[error("unsupported: {0}")]
    Unsupported(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
