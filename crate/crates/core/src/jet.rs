//! Truncated Taylor jets of complex-valued functions of a real variable.
//!
//! [`Jet2`] carries a value and two derivatives and is the evaluation
//! currency of the whole crate. [`Jet3`] carries one extra derivative and is
//! used for generating functions, where quotients of the form
//! `(W+' - eps) / W+` consume one derivative order.

use num_complex::Complex64;

use crate::error::{EvalError, MIN_DIVISOR};

/// Value and first two derivatives of a complex function at a real point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub v: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
}

/// Value and first three derivatives of a complex function at a real point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet3 {
    pub v: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
    pub d3: Complex64,
}

impl Jet2 {
    pub fn new(v: Complex64, d1: Complex64, d2: Complex64) -> Self {
        Self { v, d1, d2 }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(c, Complex64::ZERO, Complex64::ZERO)
    }

    /// The identity function evaluated at `x`.
    pub fn variable(x: f64) -> Self {
        Self::new(Complex64::new(x, 0.0), Complex64::ONE, Complex64::ZERO)
    }

    pub fn is_finite(&self) -> bool {
        finite(self.v) && finite(self.d1) && finite(self.d2)
    }

    /// Embed as a third-order jet with unknown third derivative set to zero.
    ///
    /// Valid for computing results up to second order only: `d3` of anything
    /// derived from the lift is meaningless.
    pub fn lift(self) -> Jet3 {
        Jet3 {
            v: self.v,
            d1: self.d1,
            d2: self.d2,
            d3: Complex64::ZERO,
        }
    }

    #[allow(clippy::should_implement_trait)] // fallible, unlike ops::Div
    pub fn div(self, rhs: Self) -> Result<Self, EvalError> {
        Ok(self.lift().div(rhs.lift())?.truncate())
    }
}

impl Jet3 {
    pub fn new(v: Complex64, d1: Complex64, d2: Complex64, d3: Complex64) -> Self {
        Self { v, d1, d2, d3 }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(c, Complex64::ZERO, Complex64::ZERO, Complex64::ZERO)
    }

    pub fn variable(x: f64) -> Self {
        Self::new(
            Complex64::new(x, 0.0),
            Complex64::ONE,
            Complex64::ZERO,
            Complex64::ZERO,
        )
    }

    pub fn truncate(self) -> Jet2 {
        Jet2::new(self.v, self.d1, self.d2)
    }

    pub fn is_finite(&self) -> bool {
        finite(self.v) && finite(self.d1) && finite(self.d2) && finite(self.d3)
    }

    pub fn scale(self, c: Complex64) -> Self {
        Self::new(c * self.v, c * self.d1, c * self.d2, c * self.d3)
    }

    /// Quotient rule up to third order.
    #[allow(clippy::should_implement_trait)] // fallible, unlike ops::Div
    pub fn div(self, rhs: Self) -> Result<Self, EvalError> {
        if rhs.v.norm() < MIN_DIVISOR {
            return Err(EvalError::TinyDivisor);
        }
        let q = self.v / rhs.v;
        let q1 = (self.d1 - q * rhs.d1) / rhs.v;
        let q2 = (self.d2 - 2.0 * q1 * rhs.d1 - q * rhs.d2) / rhs.v;
        let q3 = (self.d3 - 3.0 * q2 * rhs.d1 - 3.0 * q1 * rhs.d2 - q * rhs.d3) / rhs.v;
        Ok(Self::new(q, q1, q2, q3))
    }

    /// Chain rule for a scalar map with derivatives `u1..u3` at `self.v`.
    fn chain(self, u: Complex64, u1: Complex64, u2: Complex64, u3: Complex64) -> Self {
        let f1 = self.d1;
        let f2 = self.d2;
        let f3 = self.d3;
        Self::new(
            u,
            u1 * f1,
            u2 * f1 * f1 + u1 * f2,
            u3 * f1 * f1 * f1 + 3.0 * u2 * f1 * f2 + u1 * f3,
        )
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e, e)
    }

    pub fn sin(self) -> Self {
        let s = self.v.sin();
        let c = self.v.cos();
        self.chain(s, c, -s, -c)
    }

    pub fn cos(self) -> Self {
        let s = self.v.sin();
        let c = self.v.cos();
        self.chain(c, -s, -c, s)
    }

    pub fn sinh(self) -> Self {
        let s = self.v.sinh();
        let c = self.v.cosh();
        self.chain(s, c, s, c)
    }

    pub fn cosh(self) -> Self {
        let s = self.v.sinh();
        let c = self.v.cosh();
        self.chain(c, s, c, s)
    }

    pub fn tanh(self) -> Self {
        let t = self.v.tanh();
        let sech2 = Complex64::ONE - t * t;
        // (tanh)'' = -2 t sech^2, (tanh)''' = sech^2 (6 t^2 - 2)
        self.chain(t, sech2, -2.0 * t * sech2, sech2 * (6.0 * t * t - 2.0))
    }

    pub fn sqrt(self) -> Result<Self, EvalError> {
        let s = self.v.sqrt();
        if s.norm() < MIN_DIVISOR {
            return Err(EvalError::SqrtAtZero);
        }
        let u1 = 0.5 / s;
        let u2 = -0.25 / (s * s * s);
        let u3 = 0.375 / (s * s * s * s * s);
        Ok(self.chain(s, u1, u2, u3))
    }

    /// Raise to a literal constant power.
    ///
    /// Real integer exponents in `-64..=64` go through repeated
    /// multiplication, which is exact at a zero base. Anything else uses the
    /// principal branch `exp(c log z)` and rejects near-zero bases.
    pub fn pow_literal(self, c: Complex64) -> Result<Self, EvalError> {
        if c.im == 0.0 && c.re.fract() == 0.0 && c.re.abs() <= 64.0 {
            let n = c.re as i64;
            return if n >= 0 {
                Ok(self.powi_unsigned(n as u64))
            } else {
                Jet3::constant(Complex64::ONE).div(self.powi_unsigned(n.unsigned_abs()))
            };
        }
        if self.v.norm() < MIN_DIVISOR {
            return Err(EvalError::PowNearZero);
        }
        let u = self.v.powc(c);
        let u1 = c * self.v.powc(c - Complex64::ONE);
        let u2 = c * (c - Complex64::ONE) * self.v.powc(c - 2.0);
        let u3 = c * (c - Complex64::ONE) * (c - 2.0 * Complex64::ONE) * self.v.powc(c - 3.0);
        Ok(self.chain(u, u1, u2, u3))
    }

    fn powi_unsigned(self, mut n: u64) -> Self {
        let mut acc = Jet3::constant(Complex64::ONE);
        let mut base = self;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }
}

fn finite(c: Complex64) -> bool {
    c.re.is_finite() && c.im.is_finite()
}

macro_rules! impl_linear_ops {
    ($t:ty { $($f:ident),+ }) => {
        impl std::ops::Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                <$t>::new($(self.$f + rhs.$f),+)
            }
        }
        impl std::ops::Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                <$t>::new($(self.$f - rhs.$f),+)
            }
        }
        impl std::ops::Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                <$t>::new($(-self.$f),+)
            }
        }
    };
}

impl_linear_ops!(Jet2 { v, d1, d2 });
impl_linear_ops!(Jet3 { v, d1, d2, d3 });

impl std::ops::Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: Jet2) -> Jet2 {
        Jet2::new(
            self.v * rhs.v,
            self.d1 * rhs.v + self.v * rhs.d1,
            self.d2 * rhs.v + 2.0 * self.d1 * rhs.d1 + self.v * rhs.d2,
        )
    }
}

impl std::ops::Mul for Jet3 {
    type Output = Jet3;
    fn mul(self, rhs: Jet3) -> Jet3 {
        Jet3::new(
            self.v * rhs.v,
            self.d1 * rhs.v + self.v * rhs.d1,
            self.d2 * rhs.v + 2.0 * self.d1 * rhs.d1 + self.v * rhs.d2,
            self.d3 * rhs.v + 3.0 * self.d2 * rhs.d1 + 3.0 * self.d1 * rhs.d2 + self.v * rhs.d3,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Central finite differences of a scalar function, for cross-checking
    /// jet arithmetic. Test-only; the library never differentiates this way.
    fn fd_jet3(f: impl Fn(f64) -> Complex64, x: f64, h: f64) -> (Complex64, Complex64, Complex64) {
        let d1 = (f(x + h) - f(x - h)) / (2.0 * h);
        let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        let d3 =
            (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) / (2.0 * h * h * h);
        (d1, d2, d3)
    }

    #[test]
    fn product_rule_matches_finite_differences() {
        let eval = |x: f64| {
            let a = Jet3::variable(x).sinh();
            let b = Jet3::variable(x).exp();
            a * b
        };
        let j = eval(0.7);
        let (d1, d2, d3) = fd_jet3(|x| x.sinh() * x.exp() * Complex64::ONE, 0.7, 1e-4);
        assert_relative_eq!(j.d1.re, d1.re, max_relative = 1e-6);
        assert_relative_eq!(j.d2.re, d2.re, max_relative = 1e-5);
        assert_relative_eq!(j.d3.re, d3.re, max_relative = 1e-4);
    }

    #[test]
    fn quotient_rule_matches_finite_differences() {
        let eval = |x: f64| {
            let num = Jet3::variable(x).sin();
            let den = Jet3::variable(x).cosh() + Jet3::constant(c(0.0, 0.5));
            num.div(den).unwrap()
        };
        let j = eval(-1.2);
        let f = |x: f64| (x.sin() * Complex64::ONE) / (x.cosh() + c(0.0, 0.5));
        let (d1, d2, d3) = fd_jet3(f, -1.2, 1e-4);
        assert!((j.d1 - d1).norm() < 1e-7 * (1.0 + d1.norm()));
        assert!((j.d2 - d2).norm() < 1e-5 * (1.0 + d2.norm()));
        assert!((j.d3 - d3).norm() < 1e-3 * (1.0 + d3.norm()));
    }

    #[test]
    fn integer_powers_are_exact_at_zero() {
        let j = Jet3::variable(0.0).pow_literal(c(2.0, 0.0)).unwrap();
        assert_eq!(j.v, Complex64::ZERO);
        assert_eq!(j.d1, Complex64::ZERO);
        assert_eq!(j.d2, c(2.0, 0.0));
        assert_eq!(j.d3, Complex64::ZERO);
    }

    #[test]
    fn negative_power_is_reciprocal() {
        let j = Jet3::variable(2.0).pow_literal(c(-1.0, 0.0)).unwrap();
        assert_relative_eq!(j.v.re, 0.5);
        assert_relative_eq!(j.d1.re, -0.25);
        assert_relative_eq!(j.d2.re, 0.25);
    }

    #[test]
    fn principal_branch_power_on_positive_real_part() {
        // (2 + i)^(1/3) against exp(log/3)
        let base = Jet3::constant(c(2.0, 1.0));
        let j = base.pow_literal(c(1.0 / 3.0, 0.0)).unwrap();
        let expect = (c(2.0, 1.0).ln() / 3.0).exp();
        assert!((j.v - expect).norm() < 1e-14);
    }

    #[test]
    fn division_by_tiny_value_fails() {
        let err = Jet3::constant(c(1.0, 0.0))
            .div(Jet3::constant(c(0.0, 0.0)))
            .unwrap_err();
        assert_eq!(err, EvalError::TinyDivisor);
    }

    #[test]
    fn tanh_third_derivative() {
        let j = Jet3::variable(0.4).tanh();
        let (_, _, d3) = fd_jet3(|x| x.tanh() * Complex64::ONE, 0.4, 1e-3);
        assert!((j.d3 - d3).norm() < 1e-5);
    }

    #[test]
    fn jet2_division_consistent_with_lift() {
        let a = Jet2::new(c(1.0, 2.0), c(0.5, -1.0), c(2.0, 0.0));
        let b = Jet2::new(c(3.0, -1.0), c(1.0, 1.0), c(0.0, 2.0));
        let q = a.div(b).unwrap();
        let back = q * b;
        assert!((back.v - a.v).norm() < 1e-14);
        assert!((back.d1 - a.d1).norm() < 1e-14);
        assert!((back.d2 - a.d2).norm() < 1e-13);
    }
}
