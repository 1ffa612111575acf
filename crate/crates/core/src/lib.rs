//! Generation and verification of complex PT-symmetric potentials with two
//! exactly known real eigenvalues.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`expr`] parses a generating function `W+(x)` and evaluates it with
//!    exact derivatives (forward-mode jets).
//! 2. [`susy`] classifies the zero of `Re W+`, picks the regularization,
//!    and builds the superpotential pair `(W, W1)` together with the
//!    partner potentials `V+- = W^2 -+ W'`.
//! 3. [`wavefun`] materializes the two exact eigenstates on a grid by
//!    quadrature and measures Schroedinger residuals.
//! 4. [`spectral`] discretizes `H = -d^2/dx^2 + V` and confirms by shifted
//!    inverse iteration that `0` and `eps` are eigenvalues.
//!
//! [`families`] holds closed-form oracles for the two worked potential
//! families, used to cross-validate the generic pipeline, and [`sl2`]
//! verifies the hidden-algebra operator identity for the quartic case.

pub mod contracts;
pub mod error;
pub mod expr;
pub mod families;
pub mod grid;
pub mod jet;
pub mod sl2;
pub mod spectral;
pub mod susy;
pub mod wavefun;

pub use contracts::{ComplexFn1, Jet3Fn, JetFn};
pub use error::EvalError;
pub use expr::{eval_jet, eval_jet3, parse, ExprAst, ParseError};
pub use families::{FamilyError, HyperbolicFamily, HyperbolicRegime, OscillatorFamily};
pub use grid::{linspace, Grid, GridError};
pub use jet::{Jet2, Jet3};
pub use sl2::{
    operator_equal, quadratic_combination_matrix, sl2_generators, t_apply_pointwise,
    t_operator_matrix, CPoly, EqualityReport, PolyOperator, Sl2Error,
};
pub use spectral::{
    discretize, inverse_iteration, richardson_order, solve_shifted, verify_energies, EigenResult,
    EnergyReport, ObservedOrder, SpectralError, TargetReport, TridiagonalOperator,
};
pub use susy::{
    apply_a, apply_abar, asymptotic_sign_check, build_pair, classify_zero, pt_defect,
    GeneratingFunction, Partner, PartnerPotentials, RealImagSplit, SignReport, Superpotential,
    SuperpotentialPair, SusyError, ZeroClass,
};
pub use wavefun::{
    cumulative_integral, psi0, psi1, ratio_check, recommended_half_width, schrodinger_residual,
    stencil_limited_half_width, Normalization, WavefunError, WavefunctionGrid,
};
