//! Complexified non-polynomial oscillator family, generated by
//! `W+ = a x + i b x^{2m}`.
//!
//! For `m >= 1` the zero at the origin is type 2 and `eps = a`. The `m = 0`
//! member is the shifted oscillator with a constant imaginary part,
//! conventionally parameterized by `(alpha, c)` through `a = 2`,
//! `b = -2c`, `eps = 4 alpha`.

use std::sync::Arc;

use num_complex::Complex64;

use super::FamilyError;
use crate::jet::Jet3;
use crate::susy::{GeneratingFunction, SusyError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorFamily {
    m: usize,
    a: f64,
    b: f64,
    eps: f64,
    /// `(alpha, c)` when constructed through the shifted-oscillator form.
    pt_form: Option<(f64, f64)>,
}

impl OscillatorFamily {
    /// Member with `m >= 1`; the factorization energy is forced to `a`.
    pub fn new(m: usize, a: f64, b: f64) -> Result<Self, FamilyError> {
        if m == 0 {
            return Err(FamilyError::Invalid(
                "m = 0 must be built with OscillatorFamily::pt_oscillator".into(),
            ));
        }
        if a <= 0.0 || a.is_nan() {
            return Err(FamilyError::Invalid(format!("need a > 0, got a = {a}")));
        }
        if b == 0.0 {
            return Err(FamilyError::Invalid("need b != 0".into()));
        }
        Ok(Self {
            m,
            a,
            b,
            eps: a,
            pt_form: None,
        })
    }

    /// The `m = 0` member in its `(alpha, c)` presentation:
    /// `a = 2`, `b = -2c`, `eps = 4 alpha`.
    ///
    /// `c = 0` removes the imaginary shift, which is only regular for
    /// `alpha = 1/2` (the harmonic case).
    pub fn pt_oscillator(alpha: f64, c: f64) -> Result<Self, FamilyError> {
        if alpha <= 0.0 || alpha.is_nan() {
            return Err(FamilyError::Invalid(format!(
                "need alpha > 0, got alpha = {alpha}"
            )));
        }
        if c == 0.0 && alpha != 0.5 {
            return Err(FamilyError::Invalid(
                "c = 0 makes the potential singular unless alpha = 1/2".into(),
            ));
        }
        Ok(Self {
            m: 0,
            a: 2.0,
            b: -2.0 * c,
            eps: 4.0 * alpha,
            pt_form: Some((alpha, c)),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn x0(&self) -> f64 {
        0.0
    }

    /// `a + i b x^{2m-1}`, the never-vanishing denominator (`a > 0`).
    fn denom(&self, x: f64) -> Complex64 {
        Complex64::new(self.a, self.b * x.powi(2 * self.m as i32 - 1))
    }

    /// Closed form of `V+`.
    pub fn potential(&self, x: f64) -> Complex64 {
        let (a, b) = (self.a, self.b);
        if self.m == 0 {
            let (alpha, c) = self.pt_form.expect("m = 0 carries its (alpha, c) form");
            let shifted = Complex64::new(x, -c);
            let mut v = shifted * shifted + 2.0 * (alpha - 1.0);
            let coef = alpha * alpha - 0.25;
            if coef != 0.0 {
                v += coef / (shifted * shifted);
            }
            return v;
        }
        let m = self.m as i32;
        let mf = self.m as f64;
        let mut acc = Complex64::new(
            -b * b * x.powi(4 * m) + a * a * x * x - 2.0 * a,
            2.0 * a * b * x.powi(2 * m + 1) - 8.0 * mf * b * x.powi(2 * m - 1),
        );
        // Rational tails carry a 4m(m-1) factor and vanish for m = 1.
        if self.m >= 2 {
            let coef = Complex64::new(0.0, 4.0 * mf * (mf - 1.0) * b) * x.powi(2 * m - 3);
            let d = self.denom(x);
            acc += coef / d + coef * a / (d * d);
        }
        0.25 * acc
    }

    /// Closed form of the two known eigenstates, `m >= 1` only (the `m = 0`
    /// member is exactly solvable and out of scope here).
    pub fn psi(&self, x: f64, level: usize) -> Result<Complex64, FamilyError> {
        if self.m == 0 {
            return Err(FamilyError::NoClosedFormEigenstate { m: self.m });
        }
        assert!(level <= 1, "only the two constructed levels exist");
        let (a, b) = (self.a, self.b);
        let m = self.m as i32;
        let mf = self.m as f64;
        let exponent = Complex64::new(
            -0.25 * a * x * x,
            -b * x.powi(2 * m + 1) / (2.0 * (2.0 * mf + 1.0)),
        );
        let power = if level == 0 {
            mf / (2.0 * mf - 1.0)
        } else {
            (mf - 1.0) / (2.0 * mf - 1.0)
        };
        let prefactor = if power == 0.0 {
            Complex64::ONE
        } else {
            self.denom(x).powf(power)
        };
        let head = if level == 0 {
            Complex64::ONE
        } else {
            Complex64::new(x, 0.0)
        };
        Ok(head * prefactor * exponent.exp())
    }

    /// Gauge variable `z = x (a + i b x^{2m-1})^{-1/(2m-1)}`, `m >= 1`.
    pub fn z(&self, x: f64) -> Result<Complex64, FamilyError> {
        if self.m == 0 {
            return Err(FamilyError::NoClosedFormEigenstate { m: self.m });
        }
        let power = -1.0 / (2.0 * self.m as f64 - 1.0);
        Ok(x * self.denom(x).powf(power))
    }

    /// `W+ = a x + i b x^{2m}` as a third-order jet contract at `x0 = 0`.
    pub fn as_generating_function(&self) -> Result<GeneratingFunction, SusyError> {
        let (m, a, b) = (self.m as i32, self.a, self.b);
        let wplus = move |x: f64| {
            let im = |coef: f64, k: i32| if coef == 0.0 { 0.0 } else { coef * x.powi(k) };
            let mf = m as f64;
            Ok(Jet3::new(
                Complex64::new(a * x, im(b, 2 * m)),
                Complex64::new(a, im(2.0 * mf * b, 2 * m - 1)),
                Complex64::new(0.0, im(2.0 * mf * (2.0 * mf - 1.0) * b, 2 * m - 2)),
                Complex64::new(
                    0.0,
                    im(
                        2.0 * mf * (2.0 * mf - 1.0) * (2.0 * mf - 2.0) * b,
                        2 * m - 3,
                    ),
                ),
            ))
        };
        GeneratingFunction::new(Arc::new(wplus), 0.0)
    }
}
