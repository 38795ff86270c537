use thiserror::Error;

/// Errors raised anywhere in the solver stack.
#[derive(Debug, Error)]
pub enum Error {
    #[error("Boys function argument must be non-negative, got {0}")]
    BoysDomain(f64),

    #[error("unsupported element `{0}`: the built-in integral path handles hydrogen only")]
    UnsupportedElement(String),

    #[error("unsupported basis set `{0}`")]
    UnsupportedBasis(String),

    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("invalid electron count {n_electrons} for {n_orbitals} spatial orbitals")]
    ElectronCount { n_electrons: usize, n_orbitals: usize },

    #[error("SCF did not converge in {cycles} cycles (last commutator norm {commutator:.3e})")]
    ScfNotConverged { cycles: usize, commutator: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("index {index} out of range for {size} modes")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("two-body tensor is not antisymmetric at {0:?}")]
    Antisymmetry([usize; 4]),

    #[error("operator is not anti-Hermitian (largest offending coefficient {0:.3e})")]
    NotAntiHermitian(f64),

    #[error("projected norm {0:.3e} is below the degeneracy threshold")]
    DegenerateProjection(f64),

    #[error("invalid genealogical coupling path: {0}")]
    CouplingPath(String),

    #[error("symmetry classification unavailable: {0}")]
    SymmetryUnavailable(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
