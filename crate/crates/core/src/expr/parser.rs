//! Recursive descent over the grammar
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := unary ('^' factor)?
//! unary  := '-'? atom
//! atom   := number | ident | ident '(' args ')' | '(' expr ')'
//! ```

use super::ast::{BinaryOp, Expr, Function};
use super::lexer::{Token, TokenKind};
use super::{ParseError, ParseErrorKind, MAX_DEPTH, MAX_NODES};

const ATOM_START: &[&str] = &["number", "identifier", "`(`", "`-`"];

pub(crate) struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    depth: usize,
    nodes: usize,
}

impl Parser {
    pub(crate) fn new(tokens: Vec<Token>) -> Self {
        Self {
            tokens,
            pos: 0,
            depth: 0,
            nodes: 0,
        }
    }

    pub(crate) fn parse_all(mut self) -> Result<Expr, ParseError> {
        let e = self.expr()?;
        if self.peek().kind != TokenKind::End {
            return Err(self.unexpected(&["operator", "end of input"]));
        }
        Ok(e)
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.kind != TokenKind::End {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let t = self.peek();
        ParseError {
            column: t.column,
            kind: ParseErrorKind::Syntax {
                found: t.kind.describe(),
                expected: expected.iter().map(|s| s.to_string()).collect(),
            },
        }
    }

    fn node(&mut self, e: Expr) -> Result<Expr, ParseError> {
        self.nodes += 1;
        if self.nodes > MAX_NODES {
            return Err(ParseError {
                column: self.peek().column,
                kind: ParseErrorKind::TooComplex,
            });
        }
        Ok(e)
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError {
                column: self.peek().column,
                kind: ParseErrorKind::TooComplex,
            });
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().kind {
                TokenKind::Plus => BinaryOp::Add,
                TokenKind::Minus => BinaryOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            lhs = self.node(Expr::Binary(op, Box::new(lhs), Box::new(rhs)))?;
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek().kind {
                TokenKind::Star => BinaryOp::Mul,
                TokenKind::Slash => BinaryOp::Div,
                _ => break,
            };
            self.bump();
            let rhs = self.factor()?;
            lhs = self.node(Expr::Binary(op, Box::new(lhs), Box::new(rhs)))?;
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let base = self.unary()?;
        let out = if self.peek().kind == TokenKind::Caret {
            self.bump();
            let exponent = self.factor()?;
            self.node(Expr::Binary(BinaryOp::Pow, Box::new(base), Box::new(exponent)))?
        } else {
            base
        };
        self.depth -= 1;
        Ok(out)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek().kind == TokenKind::Minus {
            self.bump();
            let inner = self.atom(&["number", "identifier", "`(`"])?;
            return self.node(Expr::Neg(Box::new(inner)));
        }
        self.atom(ATOM_START)
    }

    fn atom(&mut self, expected: &[&str]) -> Result<Expr, ParseError> {
        let token = self.peek().clone();
        match token.kind {
            TokenKind::Number(v) => {
                self.bump();
                self.node(Expr::Number(v))
            }
            TokenKind::LParen => {
                self.bump();
                let e = self.expr()?;
                if self.peek().kind != TokenKind::RParen {
                    return Err(self.unexpected(&["`)`", "operator"]));
                }
                self.bump();
                Ok(e)
            }
            TokenKind::Ident(ref name) => {
                self.bump();
                if self.peek().kind == TokenKind::LParen {
                    let func = Function::from_name(name).ok_or(ParseError {
                        column: token.column,
                        kind: ParseErrorKind::UnknownFunction(name.clone()),
                    })?;
                    self.bump();
                    let args = self.args()?;
                    if args.len() != func.arity() {
                        return Err(ParseError {
                            column: token.column,
                            kind: ParseErrorKind::Arity {
                                function: func.name(),
                                expected: func.arity(),
                                found: args.len(),
                            },
                        });
                    }
                    return self.node(Expr::Call(func, args));
                }
                match variable_index(name) {
                    Some(i) => self.node(Expr::Var(i)),
                    None => Err(ParseError {
                        column: token.column,
                        kind: if Function::from_name(name).is_some() {
                            ParseErrorKind::Syntax {
                                found: token.kind.describe(),
                                expected: vec![format!("`(` after `{name}`")],
                            }
                        } else {
                            ParseErrorKind::UnknownIdentifier(name.clone())
                        },
                    }),
                }
            }
            _ => Err(self.unexpected(expected)),
        }
    }

    fn args(&mut self) -> Result<Vec<Expr>, ParseError> {
        let mut args = vec![self.expr()?];
        loop {
            match self.peek().kind {
                TokenKind::Comma => {
                    self.bump();
                    args.push(self.expr()?);
                }
                TokenKind::RParen => {
                    self.bump();
                    return Ok(args);
                }
                _ => return Err(self.unexpected(&["`,`", "`)`", "operator"])),
            }
        }
    }
}

/// `p<digits>` with a positive index, returned 0-based.
fn variable_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('p')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let i: usize = digits.parse().ok()?;
    i.checked_sub(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variable_names() {
        assert_eq!(variable_index("p1"), Some(0));
        assert_eq!(variable_index("p12"), Some(11));
        assert_eq!(variable_index("p0"), None);
        assert_eq!(variable_index("p"), None);
        assert_eq!(variable_index("px"), None);
        assert_eq!(variable_index("q1"), None);
    }
}
