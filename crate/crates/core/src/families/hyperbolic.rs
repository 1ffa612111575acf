//! Complexified hyperbolic family, generated by `W+ = A sinh(alpha x) + iB`.
//!
//! `B = 0` pins `eps = A alpha` (type-2 zero); any `B != 0` leaves `eps`
//! free. The closed-form eigenstates take four different shapes depending
//! on how `B^2` compares with `A^2`.

use std::sync::Arc;

use num_complex::Complex64;

use super::FamilyError;
use crate::jet::Jet3;
use crate::susy::{GeneratingFunction, SusyError};

/// Which closed-form branch of the eigenstates applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HyperbolicRegime {
    BZero,
    BBelowA,
    BEqualsA,
    BAboveA,
}

/// Relative threshold for the degenerate `B^2 = A^2` branch.
const REGIME_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicFamily {
    big_a: f64,
    alpha: f64,
    big_b: f64,
    eps: f64,
    regime: HyperbolicRegime,
}

impl HyperbolicFamily {
    /// `eps` is required for `B != 0`; for `B = 0` it may be omitted and is
    /// forced to `A alpha` (a supplied value must match).
    pub fn new(big_a: f64, alpha: f64, big_b: f64, eps: Option<f64>) -> Result<Self, FamilyError> {
        if big_a <= 0.0 || big_a.is_nan() || alpha <= 0.0 || alpha.is_nan() {
            return Err(FamilyError::Invalid(format!(
                "need A > 0 and alpha > 0, got A = {big_a}, alpha = {alpha}"
            )));
        }
        let regime = if big_b == 0.0 {
            HyperbolicRegime::BZero
        } else if (big_b * big_b - big_a * big_a).abs() < REGIME_TOL * big_a * big_a {
            HyperbolicRegime::BEqualsA
        } else if big_b * big_b < big_a * big_a {
            HyperbolicRegime::BBelowA
        } else {
            HyperbolicRegime::BAboveA
        };
        let eps = match (regime, eps) {
            (HyperbolicRegime::BZero, None) => big_a * alpha,
            (HyperbolicRegime::BZero, Some(e)) => {
                if (e - big_a * alpha).abs() > 1e-12 * (big_a * alpha) {
                    return Err(FamilyError::Invalid(format!(
                        "B = 0 forces eps = A alpha = {}, got {e}",
                        big_a * alpha
                    )));
                }
                big_a * alpha
            }
            (_, Some(e)) if e > 0.0 => e,
            (_, Some(e)) => {
                return Err(FamilyError::Invalid(format!("need eps > 0, got {e}")));
            }
            (_, None) => {
                return Err(FamilyError::Invalid(
                    "eps must be supplied when B != 0 (it is a free parameter)".into(),
                ));
            }
        };
        Ok(Self {
            big_a,
            alpha,
            big_b,
            eps,
            regime,
        })
    }

    pub fn big_a(&self) -> f64 {
        self.big_a
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn big_b(&self) -> f64 {
        self.big_b
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn regime(&self) -> HyperbolicRegime {
        self.regime
    }

    pub fn x0(&self) -> f64 {
        0.0
    }

    /// `nu = sqrt(A^2 - B^2)`, defined in the `0 <= B^2 < A^2` regimes.
    pub fn nu(&self) -> Option<f64> {
        match self.regime {
            HyperbolicRegime::BZero | HyperbolicRegime::BBelowA => {
                Some((self.big_a * self.big_a - self.big_b * self.big_b).sqrt())
            }
            _ => None,
        }
    }

    /// `mu = sqrt(B^2 - A^2)`, defined for `B^2 > A^2`.
    pub fn mu(&self) -> Option<f64> {
        match self.regime {
            HyperbolicRegime::BAboveA => {
                Some((self.big_b * self.big_b - self.big_a * self.big_a).sqrt())
            }
            _ => None,
        }
    }

    fn delta(&self) -> f64 {
        self.big_b.signum()
    }

    /// Closed form of `V+`.
    ///
    /// For `B = 0` the rational tail has numerator `eps^2 - alpha^2 A^2 = 0`
    /// by the forced `eps`, and is taken as exactly zero (no 0/0 at x = 0).
    pub fn potential(&self, x: f64) -> Complex64 {
        let (a, al, b, eps) = (self.big_a, self.alpha, self.big_b, self.eps);
        let sh = (al * x).sinh();
        let ch = (al * x).cosh();
        let mut acc = Complex64::new(
            a * a * sh * sh - 4.0 * a * al * ch + 2.0 * eps + al * al - b * b,
            2.0 * a * b * sh,
        );
        if self.regime != HyperbolicRegime::BZero {
            let numer = eps * eps - al * al * (a * a - b * b);
            let den = Complex64::new(a * sh, b);
            acc += numer / (den * den);
        }
        0.25 * acc
    }

    /// Closed form of the two known eigenstates in the regime-matching
    /// branch. Overall constants and phases follow the branch conventions;
    /// comparisons should always be ratio-based.
    ///
    /// Both states descend from
    /// `psi = sqrt(W+) exp(-(A/2a) cosh ax - iBx/2 -+ (eps/2) J)`
    /// with `J = Int dx / (A sinh ax + iB)`, so every eps-dependent term
    /// flips sign between the levels.
    pub fn psi(&self, x: f64, level: usize) -> Complex64 {
        assert!(level <= 1, "only the two constructed levels exist");
        let (a, al, b, eps) = (self.big_a, self.alpha, self.big_b, self.eps);
        let sh = (al * x).sinh();
        let ch = (al * x).cosh();
        let th = (al * x).tanh();
        let decay = -a / (2.0 * al) * ch;
        let sign = if level == 0 { 1.0 } else { -1.0 };
        match self.regime {
            HyperbolicRegime::BZero => {
                let half = 0.5 * al * x;
                let head = if level == 0 { half.cosh() } else { half.sinh() };
                Complex64::new(head * decay.exp(), 0.0)
            }
            HyperbolicRegime::BBelowA => {
                let nu = self.nu().expect("nu defined in this regime");
                let p_minus = 0.25 * (1.0 - eps / (al * nu));
                let p_plus = 0.25 * (1.0 + eps / (al * nu));
                let amp = (a * ch - nu).powf(sign * p_minus) * (a * ch + nu).powf(sign * p_plus);
                let phase = -0.5 * b * x - sign * 0.5 * (a / b * sh).atan()
                    + sign * eps / (2.0 * al * nu) * (nu / b * th).atan();
                let head = if level == 0 {
                    Complex64::ONE
                } else {
                    Complex64::new(a * sh, b)
                };
                head * amp * Complex64::new(decay, phase).exp()
            }
            HyperbolicRegime::BEqualsA => {
                let d = self.delta();
                let sech = 1.0 / ch;
                let extra = sign * eps / (2.0 * a * al) * Complex64::new(sech, d * th);
                let arg = Complex64::new(decay, -0.5 * d * a * x) + extra;
                // sqrt(sinh + i delta): never on the branch cut (Im = +-1).
                Complex64::new(sh, d).sqrt() * arg.exp()
            }
            HyperbolicRegime::BAboveA => {
                let mu = self.mu().expect("mu defined in this regime");
                let q = b * b + a * a * sh * sh;
                let amp = q.powf(sign * 0.25);
                let real_part = decay - sign * eps / (2.0 * al * mu) * (a * ch / mu).atan();
                let phase = -0.5 * b * x - sign * 0.5 * (a / b * sh).atan()
                    + sign * eps / (2.0 * al * mu) * (mu / b * th).atanh();
                let head = if level == 0 {
                    Complex64::ONE
                } else {
                    Complex64::new(a * sh, b)
                };
                head * amp * Complex64::new(real_part, phase).exp()
            }
        }
    }

    /// `W+ = A sinh(alpha x) + iB` as a third-order jet contract at `x0 = 0`.
    pub fn as_generating_function(&self) -> Result<GeneratingFunction, SusyError> {
        let (a, al, b) = (self.big_a, self.alpha, self.big_b);
        let wplus = move |x: f64| {
            let sh = (al * x).sinh();
            let ch = (al * x).cosh();
            Ok(Jet3::new(
                Complex64::new(a * sh, b),
                Complex64::new(a * al * ch, 0.0),
                Complex64::new(a * al * al * sh, 0.0),
                Complex64::new(a * al * al * al * ch, 0.0),
            ))
        };
        GeneratingFunction::new(Arc::new(wplus), 0.0)
    }
}
