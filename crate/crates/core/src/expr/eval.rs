use num_complex::Complex64;

use super::ast::{BinOp, ExprAst, Func};
use crate::contracts::{Jet3Fn, JetFn};
use crate::error::EvalError;
use crate::jet::{Jet2, Jet3};

/// Evaluate an expression and its first two derivatives at a real point.
pub fn eval_jet(ast: &ExprAst, x: f64) -> Result<Jet2, EvalError> {
    eval_jet3(ast, x).map(Jet3::truncate)
}

/// Evaluate an expression and its first three derivatives at a real point.
pub fn eval_jet3(ast: &ExprAst, x: f64) -> Result<Jet3, EvalError> {
    let jet = eval_node(ast, x)?;
    if jet.is_finite() {
        Ok(jet)
    } else {
        Err(EvalError::NonFinite { x })
    }
}

fn eval_node(ast: &ExprAst, x: f64) -> Result<Jet3, EvalError> {
    let jet = match ast {
        ExprAst::Literal(c) => Jet3::constant(*c),
        ExprAst::Var => Jet3::variable(x),
        ExprAst::ImaginaryUnit => Jet3::constant(Complex64::I),
        // 0 - v rather than -v: negating a real value must not flip the
        // sign of its zero imaginary part onto the other side of the
        // principal branch cuts (sqrt, non-integer powers).
        ExprAst::Neg(inner) => Jet3::constant(Complex64::ZERO) - eval_node(inner, x)?,
        ExprAst::Binary { op, lhs, rhs } => {
            let a = eval_node(lhs, x)?;
            let b = eval_node(rhs, x)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => a.div(b)?,
            }
        }
        ExprAst::Pow { base, exponent } => eval_node(base, x)?.pow_literal(*exponent)?,
        ExprAst::Apply { func, arg } => {
            let a = eval_node(arg, x)?;
            match func {
                Func::Exp => a.exp(),
                Func::Sin => a.sin(),
                Func::Cos => a.cos(),
                Func::Sinh => a.sinh(),
                Func::Cosh => a.cosh(),
                Func::Tanh => a.tanh(),
                Func::Sqrt => a.sqrt()?,
            }
        }
    };
    if jet.is_finite() {
        Ok(jet)
    } else {
        Err(EvalError::NonFinite { x })
    }
}

impl JetFn for ExprAst {
    fn jet(&self, x: f64) -> Result<Jet2, EvalError> {
        eval_jet(self, x)
    }
}

impl Jet3Fn for ExprAst {
    fn jet3(&self, x: f64) -> Result<Jet3, EvalError> {
        eval_jet3(self, x)
    }
}
