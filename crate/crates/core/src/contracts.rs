//! Function contracts passed between modules.
//!
//! Everything is pure and `Send + Sync`, so contracts may be evaluated
//! concurrently from many threads.

use num_complex::Complex64;

use crate::error::EvalError;
use crate::jet::{Jet2, Jet3};

/// A complex-valued function of a real variable, value only.
pub trait ComplexFn1: Send + Sync {
    fn value(&self, x: f64) -> Result<Complex64, EvalError>;
}

impl<F> ComplexFn1 for F
where
    F: Fn(f64) -> Result<Complex64, EvalError> + Send + Sync,
{
    fn value(&self, x: f64) -> Result<Complex64, EvalError> {
        self(x)
    }
}

/// A complex-valued function evaluated with two derivatives.
pub trait JetFn: Send + Sync {
    fn jet(&self, x: f64) -> Result<Jet2, EvalError>;

    fn value(&self, x: f64) -> Result<Complex64, EvalError> {
        self.jet(x).map(|j| j.v)
    }
}

impl<F> JetFn for F
where
    F: Fn(f64) -> Result<Jet2, EvalError> + Send + Sync,
{
    fn jet(&self, x: f64) -> Result<Jet2, EvalError> {
        self(x)
    }
}

/// A complex-valued function evaluated with three derivatives.
///
/// Generating functions must supply this order: building `W` and `W1`
/// consumes one derivative of `W+`, so second-order output jets need
/// third-order input jets.
pub trait Jet3Fn: Send + Sync {
    fn jet3(&self, x: f64) -> Result<Jet3, EvalError>;
}

impl<F> Jet3Fn for F
where
    F: Fn(f64) -> Result<Jet3, EvalError> + Send + Sync,
{
    fn jet3(&self, x: f64) -> Result<Jet3, EvalError> {
        self(x)
    }
}
