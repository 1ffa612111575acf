use thiserror::Error;

/// Modulus below which a divisor is treated as zero.
pub const MIN_DIVISOR: f64 = 1e-300;

/// Errors raised while evaluating expressions, superpotentials or potentials.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by a value with modulus below 1e-300")]
    TinyDivisor,
    #[error("power of a near-zero base with non-integer exponent")]
    PowNearZero,
    #[error("square root at zero has no finite derivative")]
    SqrtAtZero,
    #[error("non-finite value produced at x = {x}")]
    NonFinite { x: f64 },
    #[error(
        "superpotential denominator W+(x) vanishes at x = {x}, away from the regularized zero"
    )]
    DenominatorVanished { x: f64 },
    #[error("branch cut crossed while evaluating {what}")]
    BranchCut { what: &'static str },
}
