use thiserror::Error;

use crate::ComplexValue;

pub type Result<T> = std::result::Result<T, CslError>;

/// Every failure a numerical operation in this crate can signal.
///
/// The `Display` text always starts with the stable error name returned by
/// [`CslError::name`], so callers that only see a string can still dispatch.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CslError {
    #[error("PoleError: gamma pole within guard radius of {pole} (argument {z})")]
    Pole { z: ComplexValue, pole: f64 },

    #[error("SingularityError: argument {z} within guard radius {guard} of 1")]
    Singularity { z: ComplexValue, guard: f64 },

    #[error("PrefactorSingularityError: |1 - 2^(1-z)| = {modulus:e} <= {guard:e} at z = {z}")]
    PrefactorSingularity {
        z: ComplexValue,
        modulus: f64,
        guard: f64,
    },

    #[error("DomainError: {0}")]
    Domain(String),

    #[error("OverflowError: sin({z}) exceeds double range")]
    Overflow { z: ComplexValue },

    #[error("DivisionByNearZero: |denominator| = {modulus:e} at {context}")]
    DivisionByNearZero { modulus: f64, context: String },

    #[error("NoConvergence: Newton refinement from t = {t_seed} did not converge in {iterations} iterations (|zeta| = {residual:e})")]
    NoConvergence {
        t_seed: f64,
        iterations: usize,
        residual: f64,
    },

    #[error("EscapedStrip: Newton iterate {z} left the critical strip (seed t = {t_seed})")]
    EscapedStrip { z: ComplexValue, t_seed: f64 },

    #[error("WindowTooCoarse: scan step {step} exceeds {max_step}")]
    WindowTooCoarse { step: f64, max_step: f64 },

    #[error("InvalidWindow: {0}")]
    InvalidWindow(String),

    #[error("InsufficientDomain: only {usable} grid points satisfy |Im z| <= 2*pi*n/C (|Im z| = {im_abs}, C = {hl_constant}, need n >= {n_min:.1}); at least 3 required")]
    InsufficientDomain {
        usable: usize,
        im_abs: f64,
        hl_constant: f64,
        n_min: f64,
    },

    #[error("BudgetExceeded: n_base * 2^m = {requested} exceeds budget {budget}")]
    BudgetExceeded { requested: u128, budget: u64 },

    #[error("InvalidConfig: {0}")]
    InvalidConfig(String),

    #[error("InvalidInput: {0}")]
    InvalidInput(String),

    #[error("ParseError: line {line}: cannot parse {content:?} as an ordinate")]
    Parse { line: usize, content: String },

    #[error("NonMonotonicError: line {line}: ordinate {value} does not exceed previous {previous}")]
    NonMonotonic {
        line: usize,
        value: f64,
        previous: f64,
    },

    #[error("IoError: {path}: {message}")]
    Io { path: String, message: String },
}

impl CslError {
    /// Stable identifier used in CLI messages and reports.
    pub fn name(&self) -> &'static str {
        match self {
            CslError::Pole { .. } => "PoleError",
            CslError::Singularity { .. } => "SingularityError",
            CslError::PrefactorSingularity { .. } => "PrefactorSingularityError",
            CslError::Domain(_) => "DomainError",
            CslError::Overflow { .. } => "OverflowError",
            CslError::DivisionByNearZero { .. } => "DivisionByNearZero",
            CslError::NoConvergence { .. } => "NoConvergence",
            CslError::EscapedStrip { .. } => "EscapedStrip",
            CslError::WindowTooCoarse { .. } => "WindowTooCoarse",
            CslError::InvalidWindow(_) => "InvalidWindow",
            CslError::InsufficientDomain { .. } => "InsufficientDomain",
            CslError::BudgetExceeded { .. } => "BudgetExceeded",
            CslError::InvalidConfig(_) => "InvalidConfig",
            CslError::InvalidInput(_) => "InvalidInput",
            CslError::Parse { .. } => "ParseError",
            CslError::NonMonotonic { .. } => "NonMonotonicError",
            CslError::Io { .. } => "IoError",
        }
    }
}
