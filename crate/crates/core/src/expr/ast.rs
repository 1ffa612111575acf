use std::fmt;

use num_complex::Complex64;

/// Binary operators, in source syntax.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Built-in single-argument functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Tanh,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 7] = [
        Func::Exp,
        Func::Sin,
        Func::Cos,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.iter().copied().find(|f| f.name() == name)
    }
}

/// Expression tree over the variable `x` and the imaginary unit `i`.
///
/// Power exponents are restricted to literal constants, so complex powers
/// can always be taken on the principal branch.
#[derive(Debug, Clone, PartialEq)]
pub enum ExprAst {
    Literal(Complex64),
    Var,
    ImaginaryUnit,
    Neg(Box<ExprAst>),
    Binary {
        op: BinOp,
        lhs: Box<ExprAst>,
        rhs: Box<ExprAst>,
    },
    Pow {
        base: Box<ExprAst>,
        exponent: Complex64,
    },
    Apply {
        func: Func,
        arg: Box<ExprAst>,
    },
}

impl ExprAst {
    pub fn literal(re: f64) -> Self {
        ExprAst::Literal(Complex64::new(re, 0.0))
    }

    pub fn binary(op: BinOp, lhs: ExprAst, rhs: ExprAst) -> Self {
        ExprAst::Binary {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            ExprAst::Binary {
                op: BinOp::Add | BinOp::Sub,
                ..
            } => 1,
            ExprAst::Binary {
                op: BinOp::Mul | BinOp::Div,
                ..
            } => 2,
            ExprAst::Neg(_) => 3,
            ExprAst::Pow { .. } => 4,
            _ => 5,
        }
    }
}

fn fmt_child(f: &mut fmt::Formatter<'_>, child: &ExprAst, min_prec: u8) -> fmt::Result {
    let needs_parens = child.precedence() < min_prec
        || matches!(child, ExprAst::Literal(c) if c.im != 0.0 || c.re < 0.0);
    if needs_parens {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

impl fmt::Display for ExprAst {
    /// Prints in the source grammar; reparsing yields an equivalent tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprAst::Literal(c) => {
                if c.im == 0.0 {
                    write!(f, "{}", c.re)
                } else if c.re == 0.0 {
                    write!(f, "{}*i", c.im)
                } else {
                    write!(f, "{} + {}*i", c.re, c.im)
                }
            }
            ExprAst::Var => write!(f, "x"),
            ExprAst::ImaginaryUnit => write!(f, "i"),
            ExprAst::Neg(inner) => {
                write!(f, "-")?;
                fmt_child(f, inner, 3)
            }
            ExprAst::Binary { op, lhs, rhs } => {
                let (sym, prec) = match op {
                    BinOp::Add => ("+", 1),
                    BinOp::Sub => ("-", 1),
                    BinOp::Mul => ("*", 2),
                    BinOp::Div => ("/", 2),
                };
                fmt_child(f, lhs, prec)?;
                write!(f, " {sym} ")?;
                // Left-associative, so the right child needs strictly higher precedence.
                fmt_child(f, rhs, prec + 1)
            }
            ExprAst::Pow { base, exponent } => {
                fmt_child(f, base, 5)?;
                if exponent.im == 0.0 {
                    write!(f, "^{}", exponent.re)
                } else if exponent.re == 0.0 && exponent.im == 1.0 {
                    write!(f, "^i")
                } else if exponent.re == 0.0 && exponent.im == -1.0 {
                    write!(f, "^-i")
                } else {
                    // No literal token spells a general complex exponent; such
                    // trees only arise programmatically.
                    write!(f, "^({} + {}*i)", exponent.re, exponent.im)
                }
            }
            ExprAst::Apply { func, arg } => write!(f, "{}({arg})", func.name()),
        }
    }
}
