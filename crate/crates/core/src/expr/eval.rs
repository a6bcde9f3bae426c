use super::ast::{BinaryOp, Expr, Function};
use super::EvalError;

fn finite(v: f64, op: &'static str) -> Result<f64, EvalError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite { operation: op })
    }
}

/// Real power: `0^y = 0` for `y > 0`, `0^0 = 1`, negative bases rejected.
pub(crate) fn real_pow(x: f64, y: f64) -> Result<f64, EvalError> {
    if x < 0.0 {
        return Err(EvalError::Domain {
            operation: "^",
            value: x,
        });
    }
    if x == 0.0 {
        return if y > 0.0 {
            Ok(0.0)
        } else if y == 0.0 {
            Ok(1.0)
        } else {
            Err(EvalError::Domain {
                operation: "^",
                value: y,
            })
        };
    }
    finite(x.powf(y), "^")
}

pub(crate) fn eval(e: &Expr, p: &[f64]) -> Result<f64, EvalError> {
    match e {
        Expr::Number(v) => Ok(*v),
        Expr::Var(i) => p.get(*i).copied().ok_or(EvalError::UnboundVariable {
            variable: i + 1,
            bins: p.len(),
        }),
        Expr::Neg(inner) => Ok(-eval(inner, p)?),
        Expr::Binary(op, a, b) => {
            let x = eval(a, p)?;
            let y = eval(b, p)?;
            match op {
                BinaryOp::Add => finite(x + y, "+"),
                BinaryOp::Sub => finite(x - y, "-"),
                BinaryOp::Mul => finite(x * y, "*"),
                BinaryOp::Div => {
                    if y == 0.0 {
                        Err(EvalError::DivisionByZero)
                    } else {
                        finite(x / y, "/")
                    }
                }
                BinaryOp::Pow => real_pow(x, y),
            }
        }
        Expr::Call(func, args) => {
            let x = eval(&args[0], p)?;
            match func {
                Function::Exp => finite(x.exp(), "exp"),
                Function::Log => {
                    if x <= 0.0 {
                        Err(EvalError::Domain {
                            operation: "log",
                            value: x,
                        })
                    } else {
                        Ok(x.ln())
                    }
                }
                Function::Sqrt => {
                    if x < 0.0 {
                        Err(EvalError::Domain {
                            operation: "sqrt",
                            value: x,
                        })
                    } else {
                        Ok(x.sqrt())
                    }
                }
                Function::Abs => Ok(x.abs()),
                Function::Pow => real_pow(x, eval(&args[1], p)?),
            }
        }
    }
}
