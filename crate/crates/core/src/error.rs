use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter `{name}` = {value} is outside its domain ({domain})")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid spectrum: eigenvalue {value:e} is below the clipping threshold -1e-10")]
    InvalidSpectrum { value: f64 },

    #[error("invalid probability table: entry {index} = {value:e}")]
    InvalidProbability { index: usize, value: f64 },

    #[error("matrix is not Hermitian: |A[{row},{col}] - conj(A[{col},{row}])| = {deviation:e}")]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("matrix is not positive semidefinite: minimum eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("invalid Fock cutoff {n_max}: need n_max >= 2")]
    InvalidCutoff { n_max: usize },

    #[error(
        "truncation inconsistency in {context}: deviation {deviation:e} exceeds tolerance {tolerance:e} \
         (cutoff n_max = {n_max}; increase the cutoff or loosen eps_tail)"
    )]
    Truncation {
        context: &'static str,
        deviation: f64,
        tolerance: f64,
        n_max: usize,
    },

    #[error(
        "quadrature normalization failed: integral of q = {integral:.12} deviates from 1 by {deviation:e} \
         > eps_int = {eps_int:e} ({radial} radial x {angular} angular nodes, R_max = {r_max})"
    )]
    QuadratureNormalization {
        integral: f64,
        deviation: f64,
        eps_int: f64,
        radial: usize,
        angular: usize,
        r_max: f64,
    },

    #[error("cross-check failed in {context}: {lhs:.15} vs {rhs:.15} (|diff| = {diff:e} > {tolerance:e})")]
    CrossCheck {
        context: &'static str,
        lhs: f64,
        rhs: f64,
        diff: f64,
        tolerance: f64,
    },

    #[error(
        "optimizer did not converge after {iterations} iterations; iterates (t, H): {trace:?}"
    )]
    NoConvergence {
        iterations: usize,
        trace: Vec<(f64, f64)>,
    },

    #[error("measure `{measure}` needs parameter `{name}`")]
    MissingParameter {
        measure: &'static str,
        name: &'static str,
    },

    #[error("unknown measure `{0}`")]
    UnknownMeasure(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_domain(
    name: &'static str,
    value: f64,
    ok: bool,
    domain: &'static str,
) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            domain,
        })
    }
}

pub(crate) fn check_probability(name: &'static str, p: f64) -> Result<()> {
    check_domain(name, p, (0.0..=1.0).contains(&p), "[0, 1]")
}

pub(crate) fn check_unit_interval_open(name: &'static str, x: f64) -> Result<()> {
    check_domain(name, x, (0.0..1.0).contains(&x), "[0, 1)")
}
