//! A small expression language for prior and weight functions of the bin
//! probabilities.
//!
//! Expressions use the variables `p1 … pn`, numeric literals, the binary
//! operators `+ - * / ^` (`^` binds tightest and associates to the right),
//! a single leading unary minus, and the functions `exp`, `log`, `sqrt`,
//! `abs` and `pow(x, y)`. For example
//!
//! ```text
//! p1^0.5 * exp(-5*(p1-0.3)^2)
//! ```
//!
//! Evaluation is plain `f64` arithmetic, except that domain edges are errors
//! rather than infinities: `log(0)`, `0^-1`, division by zero and negative
//! bases of `^` all fail, as does a negative final result.

mod ast;
mod eval;
mod lexer;
mod parser;

use thiserror::Error;

pub use ast::{BinaryOp, Expr, Function};

use crate::error::Error;
use crate::quadrature::Integrand;
use crate::sphere::SimplexPoint;

/// Maximum number of AST nodes.
pub const MAX_NODES: usize = 10_000;
/// Maximum nesting depth of parentheses and powers.
pub const MAX_DEPTH: usize = 256;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("column {column}: {kind}")]
pub struct ParseError {
    /// 1-based character column.
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected {found}, expected one of: {}", expected.join(", "))]
    Syntax { found: String, expected: Vec<String> },
    #[error("unexpected character `{0}`")]
    UnexpectedCharacter(char),
    #[error("invalid number `{0}`")]
    InvalidNumber(String),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("unknown identifier `{0}` (variables are p1, p2, ...)")]
    UnknownIdentifier(String),
    #[error("`{function}` takes {expected} argument(s), got {found}")]
    Arity {
        function: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("expression exceeds {MAX_NODES} nodes or nesting depth {MAX_DEPTH}")]
    TooComplex,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("`{operation}` undefined at {value}")]
    Domain { operation: &'static str, value: f64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("`{operation}` produced a non-finite value")]
    NonFinite { operation: &'static str },
    #[error("result {0} is negative; priors must be nonnegative")]
    NegativeResult(f64),
    #[error("variable p{variable} not defined for {bins} bins")]
    UnboundVariable { variable: usize, bins: usize },
}

/// A parsed prior expression.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorExpression {
    source: String,
    ast: Expr,
    /// Number of bins the expression needs: the largest variable index.
    min_bins: usize,
}

impl PriorExpression {
    pub fn parse(source: &str) -> Result<Self, ParseError> {
        let tokens = lexer::tokenize(source)?;
        let ast = parser::Parser::new(tokens).parse_all()?;
        let mut vars = Vec::new();
        ast.visit_vars(&mut vars);
        let min_bins = vars.iter().max().map_or(0, |i| i + 1);
        Ok(Self {
            source: source.to_string(),
            ast,
            min_bins,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn ast(&self) -> &Expr {
        &self.ast
    }

    /// Distinct variables used, 0-based and sorted.
    pub fn variables(&self) -> Vec<usize> {
        let mut vars = Vec::new();
        self.ast.visit_vars(&mut vars);
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    /// Checks that every referenced variable exists for `bins` bins.
    pub fn bind(&self, bins: usize) -> Result<(), EvalError> {
        if self.min_bins > bins {
            return Err(EvalError::UnboundVariable {
                variable: self.min_bins,
                bins,
            });
        }
        Ok(())
    }

    /// Canonical, fully parenthesized text that parses back to the same tree.
    pub fn canonical(&self) -> String {
        self.ast.to_string()
    }

    pub fn evaluate(&self, point: &SimplexPoint) -> Result<f64, EvalError> {
        self.evaluate_slice(point.as_slice())
    }

    /// Evaluates at raw coordinates without checking the simplex constraint.
    pub fn evaluate_slice(&self, p: &[f64]) -> Result<f64, EvalError> {
        let v = eval::eval(&self.ast, p)?;
        if v < 0.0 {
            return Err(EvalError::NegativeResult(v));
        }
        Ok(v)
    }
}

impl Integrand for PriorExpression {
    fn value(&self, p: &[f64]) -> crate::error::Result<f64> {
        self.evaluate_slice(p).map_err(|e| Error::IntegrandFailed {
            message: e.to_string(),
            point: p.to_vec(),
        })
    }
}
