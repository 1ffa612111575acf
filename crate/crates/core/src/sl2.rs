//! Polynomial-space representation of the gauge-transformed operator
//!
//! ```text
//! T = -a^{-2/(2m-1)} (1 - i b z^{2m-1})^{4m/(2m-1)} d^2/dz^2 + a z d/dz
//! ```
//!
//! and of the sl(2) generators
//!
//! ```text
//! J+ = z^2 d/dz - N z,   J0 = z d/dz - N/2,   J- = d/dz,
//! ```
//!
//! together with the check that for `m = 1` (quartic coefficient) `T` is a
//! quadratic combination of the generators in the `N = 1` representation.
//! For `m >= 2` no polynomial matrix form exists; only pointwise
//! application is offered.

use num_complex::Complex64;
use thiserror::Error;

use crate::error::EvalError;

#[derive(Debug, Error)]
pub enum Sl2Error {
    #[error("degree bound {d} too small; need at least {min}")]
    DegreeTooSmall { d: usize, min: usize },
    #[error("input degree {degree} exceeds the valid bound {max} of this operator")]
    DegreeOverflow { degree: usize, max: usize },
    #[error("operators have different dimensions: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
}

/// Complex polynomial, coefficients by ascending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct CPoly {
    coeffs: Vec<Complex64>,
}

impl CPoly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Complex64::ZERO; k + 1];
        coeffs[k] = Complex64::ONE;
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Largest index with a nonzero coefficient (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| *c != Complex64::ZERO)
            .unwrap_or(0)
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(Complex64::ZERO)
    }

    /// Value and first two derivatives at a complex point (Horner).
    pub fn eval_with_derivatives(&self, z: Complex64) -> (Complex64, Complex64, Complex64) {
        let mut v = Complex64::ZERO;
        let mut d1 = Complex64::ZERO;
        let mut d2 = Complex64::ZERO;
        for &c in self.coeffs.iter().rev() {
            d2 = d2 * z + 2.0 * d1;
            d1 = d1 * z + v;
            v = v * z + c;
        }
        (v, d1, d2)
    }
}

/// A linear operator on polynomials of degree at most `dim - 1`, stored as
/// a matrix over the monomial basis.
///
/// `max_input` is the largest input degree for which no contribution was
/// truncated at the top of the basis; comparisons and applications beyond
/// it are rejected.
#[derive(Debug, Clone)]
pub struct PolyOperator {
    dim: usize,
    data: Vec<Complex64>,
    raise: i32,
    max_input: usize,
}

impl PolyOperator {
    fn zeros(dim: usize, raise: i32, max_input: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::ZERO; dim * dim],
            raise,
            max_input,
        }
    }

    pub fn identity(degree_bound: usize) -> Self {
        let dim = degree_bound + 1;
        let mut op = Self::zeros(dim, 0, degree_bound);
        for j in 0..dim {
            op.set(j, j, Complex64::ONE);
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree_bound(&self) -> usize {
        self.dim - 1
    }

    pub fn max_input_degree(&self) -> usize {
        self.max_input
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    fn set(&mut self, row: usize, col: usize, v: Complex64) {
        self.data[row * self.dim + col] = v;
    }

    fn add_to(&mut self, row: usize, col: usize, v: Complex64) {
        self.data[row * self.dim + col] += v;
    }

    pub fn scale(mut self, c: Complex64) -> Self {
        for v in &mut self.data {
            *v *= c;
        }
        self
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, Sl2Error> {
        if self.dim != rhs.dim {
            return Err(Sl2Error::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        let mut out = Self::zeros(
            self.dim,
            self.raise.max(rhs.raise),
            self.max_input.min(rhs.max_input),
        );
        for (o, (a, b)) in out.data.iter_mut().zip(self.data.iter().zip(&rhs.data)) {
            *o = a + b;
        }
        Ok(out)
    }

    /// Operator composition `self * rhs` (apply `rhs` first).
    pub fn mul(&self, rhs: &Self) -> Result<Self, Sl2Error> {
        if self.dim != rhs.dim {
            return Err(Sl2Error::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        let n = self.dim;
        // Valid inputs: rhs must accept them and its output must fit self.
        let max_input = rhs
            .max_input
            .min((self.max_input as i64 - rhs.raise as i64).max(0) as usize);
        let mut out = Self::zeros(n, self.raise + rhs.raise, max_input);
        for i in 0..n {
            for k in 0..n {
                let a = self.entry(i, k);
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.entry(k, j);
                    if b != Complex64::ZERO {
                        out.add_to(i, j, a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, p: &CPoly) -> Result<CPoly, Sl2Error> {
        let deg = p.degree();
        if deg > self.max_input {
            return Err(Sl2Error::DegreeOverflow {
                degree: deg,
                max: self.max_input,
            });
        }
        let mut out = vec![Complex64::ZERO; self.dim];
        for j in 0..=deg.min(self.dim - 1) {
            let c = p.coeff(j);
            if c == Complex64::ZERO {
                continue;
            }
            for (i, out_i) in out.iter_mut().enumerate() {
                let e = self.entry(i, j);
                if e != Complex64::ZERO {
                    *out_i += e * c;
                }
            }
        }
        Ok(CPoly::new(out))
    }
}

/// The three generators `(J+, J0, J-)` of the representation labelled `N`
/// on monomials up to `z^degree_bound`.
pub fn sl2_generators(
    n_label: f64,
    degree_bound: usize,
) -> Result<(PolyOperator, PolyOperator, PolyOperator), Sl2Error> {
    if degree_bound < 2 {
        return Err(Sl2Error::DegreeTooSmall {
            d: degree_bound,
            min: 2,
        });
    }
    let dim = degree_bound + 1;
    let mut j_plus = PolyOperator::zeros(dim, 1, degree_bound - 1);
    let mut j_zero = PolyOperator::zeros(dim, 0, degree_bound);
    let mut j_minus = PolyOperator::zeros(dim, -1, degree_bound);
    for j in 0..dim {
        let jf = j as f64;
        if j + 1 < dim {
            j_plus.set(j + 1, j, Complex64::new(jf - n_label, 0.0));
        }
        j_zero.set(j, j, Complex64::new(jf - n_label / 2.0, 0.0));
        if j >= 1 {
            j_minus.set(j - 1, j, Complex64::new(jf, 0.0));
        }
    }
    Ok((j_plus, j_zero, j_minus))
}

/// Matrix of `T` for `m = 1`, where the second-derivative coefficient is
/// the quartic `(1 - i b z)^4 / a^2`.
pub fn t_operator_matrix(a: f64, b: f64, degree_bound: usize) -> Result<PolyOperator, Sl2Error> {
    if degree_bound < 6 {
        return Err(Sl2Error::DegreeTooSmall {
            d: degree_bound,
            min: 6,
        });
    }
    let dim = degree_bound + 1;
    let b2 = b * b;
    let b3 = b2 * b;
    let b4 = b2 * b2;
    let a_inv2 = 1.0 / (a * a);
    // (1 - i b z)^4 by ascending degree
    let quartic = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, -4.0 * b),
        Complex64::new(-6.0 * b2, 0.0),
        Complex64::new(0.0, 4.0 * b3),
        Complex64::new(b4, 0.0),
    ];
    let mut t = PolyOperator::zeros(dim, 2, degree_bound - 2);
    for j in 0..dim {
        let jf = j as f64;
        t.add_to(j, j, Complex64::new(a * jf, 0.0));
        if j >= 2 {
            let factor = -a_inv2 * jf * (jf - 1.0);
            for (k, qc) in quartic.iter().enumerate() {
                let row = j - 2 + k;
                if row < dim {
                    t.add_to(row, j, factor * qc);
                }
            }
        }
    }
    Ok(t)
}

/// The quadratic sl(2) combination equal to `T` for `m = 1`, `N = 1`:
///
/// ```text
/// T = a^{-2} ( -b^4 J+^2 - 4i b^3 J+ J0 + 6 b^2 J+ J- + 4i b J0 J- - J-^2
///              - 2i b^3 J+ + (6 b^2 + a^3) J0 + 2i b J- + 3 b^2 + a^3/2 )
/// ```
///
/// The `a^3 J0 + a^3/2` part realizes the `a z d/dz` half of `T`
/// (`z d/dz = J0 + N/2`); everything else assembles the quartic times
/// `-d^2/dz^2`.
pub fn quadratic_combination_matrix(
    a: f64,
    b: f64,
    degree_bound: usize,
) -> Result<PolyOperator, Sl2Error> {
    if degree_bound < 6 {
        return Err(Sl2Error::DegreeTooSmall {
            d: degree_bound,
            min: 6,
        });
    }
    let (j_plus, j_zero, j_minus) = sl2_generators(1.0, degree_bound)?;
    let b2 = b * b;
    let b3 = b2 * b;
    let b4 = b2 * b2;
    let a3 = a * a * a;
    let a_inv2 = Complex64::new(1.0 / (a * a), 0.0);

    let re = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);

    let terms = [
        j_plus.mul(&j_plus)?.scale(re(-b4)),
        j_plus.mul(&j_zero)?.scale(im(-4.0 * b3)),
        j_plus.mul(&j_minus)?.scale(re(6.0 * b2)),
        j_zero.mul(&j_minus)?.scale(im(4.0 * b)),
        j_minus.mul(&j_minus)?.scale(re(-1.0)),
        j_plus.clone().scale(im(-2.0 * b3)),
        j_zero.clone().scale(re(6.0 * b2 + a3)),
        j_minus.clone().scale(im(2.0 * b)),
        PolyOperator::identity(degree_bound).scale(re(3.0 * b2 + 0.5 * a3)),
    ];
    let mut acc = terms[0].clone();
    for t in &terms[1..] {
        acc = acc.add(t)?;
    }
    // The identity holds on every degree the quadratic products support.
    acc.max_input = degree_bound - 2;
    Ok(acc.scale(a_inv2))
}

/// Entrywise comparison on all columns up to `input_degree`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EqualityReport {
    pub equal: bool,
    pub max_discrepancy: f64,
}

pub fn operator_equal(
    p: &PolyOperator,
    q: &PolyOperator,
    input_degree: usize,
    tol: f64,
) -> Result<EqualityReport, Sl2Error> {
    if p.dim != q.dim {
        return Err(Sl2Error::DimensionMismatch {
            left: p.dim,
            right: q.dim,
        });
    }
    let max = input_degree;
    if max > p.max_input || max > q.max_input {
        return Err(Sl2Error::DegreeOverflow {
            degree: max,
            max: p.max_input.min(q.max_input),
        });
    }
    let mut sup: f64 = 0.0;
    for col in 0..=max {
        for row in 0..p.dim {
            sup = sup.max((p.entry(row, col) - q.entry(row, col)).norm());
        }
    }
    Ok(EqualityReport {
        equal: sup <= tol,
        max_discrepancy: sup,
    })
}

/// Apply the general-`m` operator `T` to a function at a point, from its
/// value and two derivatives. The only representation available for
/// `m >= 2`, where `T` does not act within polynomials.
pub fn t_apply_pointwise(
    m: usize,
    a: f64,
    b: f64,
    phi: &dyn Fn(Complex64) -> (Complex64, Complex64, Complex64),
    z: Complex64,
) -> Result<Complex64, EvalError> {
    assert!(m >= 1, "the gauge-transformed operator needs m >= 1");
    let mf = m as f64;
    let base = Complex64::ONE - Complex64::I * b * z.powi(2 * m as i32 - 1);
    if base.re <= 0.0 && base.im.abs() < 1e-12 {
        return Err(EvalError::BranchCut {
            what: "(1 - i b z^{2m-1})^{4m/(2m-1)}",
        });
    }
    let power = 4.0 * mf / (2.0 * mf - 1.0);
    let coeff = -a.powf(-2.0 / (2.0 * mf - 1.0)) * base.powf(power);
    let (_, d1, d2) = phi(z);
    Ok(coeff * d2 + a * z * d1)
}
