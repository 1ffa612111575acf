//! Construction of superpotential pairs with two known eigenvalues.
//!
//! Given a generating function `W+` with a single simple zero of its real
//! part at `x0`, the pair
//!
//! ```text
//! W  = (W+ - (W+' - eps)/W+) / 2
//! W1 = (W+ + (W+' - eps)/W+) / 2
//! ```
//!
//! satisfies `W^2 + W' = W1^2 - W1' + eps`, so the Hamiltonian built from
//! `V+ = W^2 - W'` has eigenvalues `0` and `eps` with closed-form
//! eigenstates. The quotient is regular at `x0` either because `Im W+(x0)`
//! is nonzero (`eps` free) or because `eps` is pinned to `W+'(x0)`
//! (removable singularity, evaluated by series inside a guard window).

use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::contracts::{ComplexFn1, Jet3Fn, JetFn};
use crate::error::{EvalError, MIN_DIVISOR};
use crate::jet::{Jet2, Jet3};

/// Relative threshold deciding whether a quantity at `x0` counts as zero.
pub const ZERO_TOL: f64 = 1e-10;

/// Relative half-width, in `|W+|`, of the removable-singularity window.
pub const GUARD_FACTOR: f64 = 1e-6;

/// Tolerance for a caller-supplied `eps` against the forced value.
pub const EPS_MATCH_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum SusyError {
    #[error("Re W+(x0) = {re_w} is not zero at x0 = {x0} (|.| > 1e-10 * scale)")]
    ZeroNotAtX0 { x0: f64, re_w: f64 },
    #[error("zero of Re W+ at x0 = {x0} is not simple: |W+'(x0)| = {slope} below threshold")]
    ZeroNotSimple { x0: f64, slope: f64 },
    #[error("Re W+'(x0) = {slope} must be positive for sgn(f(+/-inf)) = +/-1")]
    WrongOrientation { slope: f64 },
    #[error("type-1 construction requires an explicit eps > 0")]
    EpsRequired,
    #[error("eps must be positive, got {eps}")]
    EpsNotPositive { eps: f64 },
    #[error("type-2 zero forces eps = {forced}; supplied {supplied}")]
    EpsMismatch { forced: f64, supplied: f64 },
    #[error("type-2 regularization impossible: Im W+'(x0) = {im_slope} is nonzero")]
    ImaginarySlopeAtZero { im_slope: f64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// A generating function `W+` together with the declared location `x0`
/// of the single simple zero of its real part.
pub struct GeneratingFunction {
    wplus: Arc<dyn Jet3Fn>,
    x0: f64,
    scale: f64,
    at_x0: Jet3,
}

impl GeneratingFunction {
    /// Checks `Re W+(x0) = 0` and `Re W+'(x0) > 0` at construction.
    /// `x0` is declared by the caller, never root-found.
    pub fn new(wplus: Arc<dyn Jet3Fn>, x0: f64) -> Result<Self, SusyError> {
        let at_x0 = wplus.jet3(x0)?;
        let scale = at_x0.d1.norm().max(1.0);
        if at_x0.v.re.abs() > ZERO_TOL * scale {
            return Err(SusyError::ZeroNotAtX0 {
                x0,
                re_w: at_x0.v.re,
            });
        }
        if at_x0.d1.re.abs() < ZERO_TOL * scale {
            return Err(SusyError::ZeroNotSimple {
                x0,
                slope: at_x0.d1.re,
            });
        }
        if at_x0.d1.re < 0.0 {
            return Err(SusyError::WrongOrientation { slope: at_x0.d1.re });
        }
        Ok(Self {
            wplus,
            x0,
            scale,
            at_x0,
        })
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    /// `max(1, |W+'(x0)|)`, the reference magnitude for all relative checks.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn wplus_jet3(&self, x: f64) -> Result<Jet3, EvalError> {
        self.wplus.jet3(x)
    }

    pub fn wplus_jet(&self, x: f64) -> Result<Jet2, EvalError> {
        self.wplus.jet3(x).map(Jet3::truncate)
    }
}

/// How the zero of `Re W+` at `x0` is kept out of the denominators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZeroClass {
    /// `Im W+(x0) != 0`: the denominator never vanishes and `eps` is free.
    Type1 { g_plus_x0: f64 },
    /// `W+(x0) = 0`: the singularity is removable only for `eps = W+'(x0)`.
    Type2 { eps_forced: f64 },
}

/// Decide between the two regularization regimes at `x0`.
pub fn classify_zero(gen: &GeneratingFunction) -> Result<ZeroClass, SusyError> {
    let g0 = gen.at_x0.v.im;
    if g0.abs() > ZERO_TOL * gen.scale {
        Ok(ZeroClass::Type1 { g_plus_x0: g0 })
    } else {
        let eps_forced = gen.at_x0.d1.re;
        if eps_forced <= 0.0 {
            return Err(SusyError::EpsNotPositive { eps: eps_forced });
        }
        Ok(ZeroClass::Type2 { eps_forced })
    }
}

/// Taylor data of `(W+' - eps)/W+` about `x0`, used inside the guard window.
///
/// With `t = x - x0` the quotient equals `P(t)/Q(t)` where
/// `P = n1 + n2 t/2` and `Q = d1 + d2 t/2 + d3 t^2/6`. The second
/// derivative of the quotient omits the unknown fourth derivative of `W+`,
/// an `O(guard width)` truncation confined to the window.
struct RatioSeries {
    n1: Complex64,
    n2: Complex64,
    q0: Complex64,
    q1: Complex64,
    q2: Complex64,
    x_window: f64,
}

impl RatioSeries {
    fn eval(&self, t: f64) -> Result<Jet2, EvalError> {
        let p = Jet2::new(self.n1 + 0.5 * t * self.n2, 0.5 * self.n2, Complex64::ZERO);
        let q = Jet2::new(
            self.q0 + 0.5 * t * self.q1 + t * t / 6.0 * self.q2,
            0.5 * self.q1 + t / 3.0 * self.q2,
            self.q2 / 3.0,
        );
        p.div(q)
    }
}

struct PairInner {
    gen: GeneratingFunction,
    eps: f64,
    class: ZeroClass,
    delta_guard: f64,
    series: Option<RatioSeries>,
}

impl PairInner {
    fn ratio_jet(&self, x: f64) -> Result<Jet2, EvalError> {
        let wp = self.gen.wplus_jet3(x)?;
        if wp.v.norm() < self.delta_guard {
            if let Some(series) = &self.series {
                let t = x - self.gen.x0;
                if t.abs() <= series.x_window {
                    return series.eval(t);
                }
            }
            if wp.v.norm() < MIN_DIVISOR {
                return Err(EvalError::DenominatorVanished { x });
            }
            if self.series.is_some() {
                // |W+| small but far from x0: a second, unregularized zero.
                return Err(EvalError::DenominatorVanished { x });
            }
        }
        let numer = Jet3::new(
            wp.d1 - self.eps,
            wp.d2,
            wp.d3,
            Complex64::ZERO, // fourth derivative of W+ unknown; d3 of the quotient is discarded
        );
        Ok(numer.div(wp)?.truncate())
    }

    fn superpotential_jet(&self, x: f64, sign: f64) -> Result<Jet2, EvalError> {
        let wp = self.gen.wplus_jet3(x)?.truncate();
        let r = self.ratio_jet(x)?;
        Ok(Jet2::new(
            0.5 * (wp.v + sign * r.v),
            0.5 * (wp.d1 + sign * r.d1),
            0.5 * (wp.d2 + sign * r.d2),
        ))
    }
}

/// One member of a constructed pair, evaluable as a jet contract.
#[derive(Clone)]
pub struct Superpotential {
    inner: Arc<PairInner>,
    sign: f64,
}

impl JetFn for Superpotential {
    fn jet(&self, x: f64) -> Result<Jet2, EvalError> {
        self.inner.superpotential_jet(x, self.sign)
    }
}

/// The constructed pair `(W, W1)` with its factorization energy `eps`.
pub struct SuperpotentialPair {
    inner: Arc<PairInner>,
}

/// Build the pair from a generating function.
///
/// For a type-1 zero `eps_choice` is required and must be positive. For a
/// type-2 zero `eps` is forced to `W+'(x0)`; a supplied value must agree
/// within [`EPS_MATCH_TOL`] relative to scale.
pub fn build_pair(
    gen: GeneratingFunction,
    eps_choice: Option<f64>,
) -> Result<SuperpotentialPair, SusyError> {
    let class = classify_zero(&gen)?;
    let (eps, series) = match class {
        ZeroClass::Type1 { .. } => {
            let eps = eps_choice.ok_or(SusyError::EpsRequired)?;
            if eps <= 0.0 {
                return Err(SusyError::EpsNotPositive { eps });
            }
            (eps, None)
        }
        ZeroClass::Type2 { eps_forced } => {
            if let Some(supplied) = eps_choice {
                if (supplied - eps_forced).abs() > EPS_MATCH_TOL * gen.scale {
                    return Err(SusyError::EpsMismatch {
                        forced: eps_forced,
                        supplied,
                    });
                }
            }
            let im_slope = gen.at_x0.d1.im;
            if im_slope.abs() > ZERO_TOL * gen.scale {
                return Err(SusyError::ImaginarySlopeAtZero { im_slope });
            }
            let delta_guard = GUARD_FACTOR * gen.scale;
            let d1 = gen.at_x0.d1;
            let series = RatioSeries {
                n1: gen.at_x0.d2,
                n2: gen.at_x0.d3,
                q0: d1,
                q1: gen.at_x0.d2,
                q2: gen.at_x0.d3,
                x_window: 8.0 * delta_guard / d1.norm().max(MIN_DIVISOR),
            };
            (eps_forced, Some(series))
        }
    };
    let delta_guard = GUARD_FACTOR * gen.scale;
    Ok(SuperpotentialPair {
        inner: Arc::new(PairInner {
            gen,
            eps,
            class,
            delta_guard,
            series,
        }),
    })
}

impl SuperpotentialPair {
    pub fn w(&self) -> Superpotential {
        Superpotential {
            inner: Arc::clone(&self.inner),
            sign: -1.0,
        }
    }

    pub fn w1(&self) -> Superpotential {
        Superpotential {
            inner: Arc::clone(&self.inner),
            sign: 1.0,
        }
    }

    pub fn eps(&self) -> f64 {
        self.inner.eps
    }

    pub fn x0(&self) -> f64 {
        self.inner.gen.x0
    }

    pub fn scale(&self) -> f64 {
        self.inner.gen.scale
    }

    pub fn class(&self) -> ZeroClass {
        self.inner.class
    }

    pub fn generating(&self) -> &GeneratingFunction {
        &self.inner.gen
    }

    /// `W^2 + W' - W1^2 + W1' - eps`; vanishes identically by construction.
    pub fn constraint_residual(&self, x: f64) -> Result<Complex64, EvalError> {
        let w = self.inner.superpotential_jet(x, -1.0)?;
        let w1 = self.inner.superpotential_jet(x, 1.0)?;
        Ok(w.v * w.v + w.d1 - w1.v * w1.v + w1.d1 - self.inner.eps)
    }

    pub fn partner_potentials(&self) -> PartnerPotentials {
        PartnerPotentials {
            w: self.w(),
            w1: self.w1(),
            eps: self.inner.eps,
        }
    }

    pub fn split_real_imag(&self) -> RealImagSplit {
        RealImagSplit {
            w: self.w(),
            w1: self.w1(),
        }
    }
}

/// The partner potentials `V+- = W^2 -+ W'` as evaluable contracts.
pub struct PartnerPotentials {
    w: Superpotential,
    w1: Superpotential,
    eps: f64,
}

/// Selects which partner a [`PotentialContract`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Partner {
    Plus,
    Minus,
}

impl PartnerPotentials {
    pub fn vplus(&self, x: f64) -> Result<Complex64, EvalError> {
        let j = self.w.jet(x)?;
        Ok(j.v * j.v - j.d1)
    }

    pub fn vminus(&self, x: f64) -> Result<Complex64, EvalError> {
        let j = self.w.jet(x)?;
        Ok(j.v * j.v + j.d1)
    }

    /// `V-` computed from the second superpotential as `W1^2 - W1' + eps`;
    /// must agree with [`Self::vminus`].
    pub fn vminus_via_w1(&self, x: f64) -> Result<Complex64, EvalError> {
        let j = self.w1.jet(x)?;
        Ok(j.v * j.v - j.d1 + self.eps)
    }

    pub fn vplus_re(&self, x: f64) -> Result<f64, EvalError> {
        Ok(self.vplus(x)?.re)
    }

    pub fn vplus_im(&self, x: f64) -> Result<f64, EvalError> {
        Ok(self.vplus(x)?.im)
    }

    pub fn vminus_re(&self, x: f64) -> Result<f64, EvalError> {
        Ok(self.vminus(x)?.re)
    }

    pub fn vminus_im(&self, x: f64) -> Result<f64, EvalError> {
        Ok(self.vminus(x)?.im)
    }

    /// A cloneable value contract for one of the partners.
    pub fn contract(&self, which: Partner) -> PotentialContract {
        PotentialContract {
            w: self.w.clone(),
            sign: match which {
                Partner::Plus => -1.0,
                Partner::Minus => 1.0,
            },
        }
    }
}

/// `W^2 + sign * W'` as a [`ComplexFn1`].
#[derive(Clone)]
pub struct PotentialContract {
    w: Superpotential,
    sign: f64,
}

impl ComplexFn1 for PotentialContract {
    fn value(&self, x: f64) -> Result<Complex64, EvalError> {
        let j = self.w.jet(x)?;
        Ok(j.v * j.v + self.sign * j.d1)
    }
}

/// Real and imaginary parts of the pair as real-valued contracts.
pub struct RealImagSplit {
    w: Superpotential,
    w1: Superpotential,
}

impl RealImagSplit {
    pub fn f(&self, x: f64) -> Result<f64, EvalError> {
        Ok(self.w.jet(x)?.v.re)
    }

    pub fn g(&self, x: f64) -> Result<f64, EvalError> {
        Ok(self.w.jet(x)?.v.im)
    }

    pub fn f1(&self, x: f64) -> Result<f64, EvalError> {
        Ok(self.w1.jet(x)?.v.re)
    }

    pub fn g1(&self, x: f64) -> Result<f64, EvalError> {
        Ok(self.w1.jet(x)?.v.im)
    }
}

/// `A psi = psi' + W psi` evaluated from a value/derivative pair at `x`.
pub fn apply_a(
    w: &dyn JetFn,
    x: f64,
    psi: Complex64,
    dpsi: Complex64,
) -> Result<Complex64, EvalError> {
    Ok(dpsi + w.value(x)? * psi)
}

/// `Abar psi = -psi' + W psi` evaluated from a value/derivative pair at `x`.
pub fn apply_abar(
    w: &dyn JetFn,
    x: f64,
    psi: Complex64,
    dpsi: Complex64,
) -> Result<Complex64, EvalError> {
    Ok(-dpsi + w.value(x)? * psi)
}

/// Sup over the samples of `|conj(V(2 x0 - x)) - V(x)|`, the deviation from
/// PT symmetry about the mirror point `x0`.
pub fn pt_defect(v: &dyn ComplexFn1, x0: f64, xs: &[f64]) -> Result<f64, EvalError> {
    let mut sup: f64 = 0.0;
    for &x in xs {
        let direct = v.value(x)?;
        let mirrored = v.value(2.0 * x0 - x)?.conj();
        sup = sup.max((mirrored - direct).norm());
    }
    Ok(sup)
}

/// Signs of `f` and `f1` probed at `x0 +- x_max`.
///
/// Diagnostic only: the asymptotic conditions are checked at finite range,
/// not proven.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignReport {
    pub f_ok: bool,
    pub f1_ok: bool,
}

pub fn asymptotic_sign_check(
    split: &RealImagSplit,
    x0: f64,
    x_max: f64,
) -> Result<SignReport, EvalError> {
    let f_ok = split.f(x0 + x_max)? > 0.0 && split.f(x0 - x_max)? < 0.0;
    let f1_ok = split.f1(x0 + x_max)? > 0.0 && split.f1(x0 - x_max)? < 0.0;
    Ok(SignReport { f_ok, f1_ok })
}
