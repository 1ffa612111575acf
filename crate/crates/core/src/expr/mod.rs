//! Parsing and differentiable evaluation of generating-function expressions.

mod ast;
mod eval;
mod parser;

pub use ast::{BinOp, ExprAst, Func};
pub use eval::{eval_jet, eval_jet3};
pub use parser::{parse, ParseError};
