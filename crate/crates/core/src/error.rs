use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid algebra: {0}")]
    InvalidSpec(String),

    #[error("invalid weight {label:?}: {reason}")]
    InvalidWeight { label: Vec<u32>, reason: String },

    #[error("S-matrix normalization failed: {0}")]
    Normalization(String),

    #[error("S-matrix is not unitary: max |SS* - I| = {deviation:e}")]
    NonUnitary { deviation: f64 },

    #[error("fusion coefficient N[{a}][{b}]^{c} = {value} is not a nonnegative integer (distance {distance:e})")]
    NonIntegralFusion {
        a: usize,
        b: usize,
        c: usize,
        value: Complex64,
        distance: f64,
    },

    #[error("fixed-point fusion mismatch at ({i},{j},{k}): closed form {closed_form}, Verlinde {verlinde}")]
    FusionMismatch {
        i: usize,
        j: usize,
        k: usize,
        closed_form: f64,
        verlinde: Complex64,
    },

    #[error(
        "orbit fusion <{a} {b}, {c}> = {orbit_sum} but resolved Verlinde aggregate is {resolved}"
    )]
    OrbitFusionMismatch {
        a: String,
        b: String,
        c: String,
        orbit_sum: u32,
        resolved: u32,
    },

    #[error("out of implemented scope: {0}")]
    OutOfScope(String),

    #[error("b({i}, {alpha}) has imaginary part {imag:e}; branching data is inconsistent")]
    ComplexBValue { i: String, alpha: String, imag: f64 },

    #[error("anomaly factor undefined: |Δ±| = {0:e}")]
    AnomalyUndefined(f64),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("unknown label {label:?} for {theory}")]
    UnknownLabel { label: Vec<u32>, theory: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for the errors a front end should map to "out of scope".
    pub fn is_out_of_scope(&self) -> bool {
        matches!(self, Error::OutOfScope(_))
    }
}
