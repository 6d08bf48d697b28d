use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("{what} is not normalized (squared norm {norm_sqr})")]
    NotNormalized { what: &'static str, norm_sqr: f64 },

    #[error("density matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("density matrix has trace {0} instead of 1")]
    BadTrace(f64),

    #[error("density matrix has eigenvalue {0:.3e} below the positivity tolerance")]
    NotPositive(f64),

    #[error("fidelity has imaginary residue {0:.3e}")]
    ComplexFidelity(f64),

    #[error("joint dimension {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("Fock truncation too small: {context} has weight {weight:.3e} at or beyond fock_dim = {fock_dim}")]
    Truncation {
        context: &'static str,
        weight: f64,
        fock_dim: usize,
    },

    #[error("invalid `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("observable `{observable}` is undefined for {num_qubits} qubit(s)")]
    UndefinedObservable { observable: String, num_qubits: usize },

    #[error("search window [{start}, {end}] is empty")]
    EmptyWindow { start: f64, end: f64 },
}

impl Error {
    pub(crate) fn invalid(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
