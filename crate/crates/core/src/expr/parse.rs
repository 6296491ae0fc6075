//! Recursive-descent parser for the expression language.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := ('-'|'+')? base ('^' uint)?
//! base   := 'z' uint | number | 'i' | '(' expr ')'
//!         | ('exp'|'sin'|'cos') '(' expr ')'
//! ```
//!
//! Whitespace is ignored everywhere. A leading sign on a factor is accepted
//! in addition to the core grammar.

use super::{HoloExpr, Node};
use crate::error::{Error, ParseError, Result};
use crate::point::CNum;
use std::sync::Arc;

/// Parse `text` as an expression in `arity` variables.
pub fn parse(text: &str, arity: usize) -> Result<HoloExpr> {
    if arity == 0 {
        return Err(Error::InvalidArgument("arity must be at least 1".into()));
    }
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        arity,
    };
    let root = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input").into());
    }
    Ok(HoloExpr::from_node(root, arity))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    arity: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ParseError {
        ParseError {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)).into())
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Node::Add(Arc::new(lhs), Arc::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Node::Sub(Arc::new(lhs), Arc::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(b'*') {
                lhs = Node::Mul(Arc::new(lhs), Arc::new(self.factor()?));
            } else if self.eat(b'/') {
                lhs = Node::Div(Arc::new(lhs), Arc::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Node> {
        if self.eat(b'-') {
            return Ok(Node::Neg(Arc::new(self.power()?)));
        }
        self.eat(b'+');
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.base()?;
        if self.eat(b'^') {
            self.skip_ws();
            let k = self
                .uint()
                .ok_or_else(|| self.error("expected a nonnegative integer exponent"))?;
            let k = u32::try_from(k).map_err(|_| self.error("exponent too large"))?;
            return Ok(Node::Pow(Arc::new(base), k));
        }
        Ok(base)
    }

    fn uint(&mut self) -> Option<u64> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()?
            .parse()
            .ok()
    }

    fn base(&mut self) -> Result<Node> {
        let Some(c) = self.peek() else {
            return Err(self.error("unexpected end of input").into());
        };
        match c {
            b'(' => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            b'0'..=b'9' | b'.' => self.number(),
            b'a'..=b'z' | b'A'..=b'Z' => self.word(),
            _ => Err(self.error(&format!("unexpected '{}'", c as char)).into()),
        }
    }

    fn number(&mut self) -> Result<Node> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            self.pos = start;
            return Err(self.error("malformed number").into());
        }
        // Exponent only when followed by digits, so "2e" never swallows a name.
        if self.pos < self.src.len() && matches!(self.src[self.pos], b'e' | b'E') {
            let save = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && matches!(self.src[self.pos], b'+' | b'-') {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let x: f64 = text.parse().map_err(|_| ParseError {
            offset: start,
            message: format!("malformed number '{text}'"),
        })?;
        Ok(Node::Const(CNum::new(x, 0.0)))
    }

    fn word(&mut self) -> Result<Node> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        match name {
            "z" => {
                let at = self.pos;
                let k = self.uint().ok_or_else(|| ParseError {
                    offset: at,
                    message: "expected a variable index after 'z'".into(),
                })?;
                let k = usize::try_from(k).unwrap_or(usize::MAX);
                if k == 0 || k > self.arity {
                    return Err(Error::VariableOutOfRange {
                        index: k,
                        arity: self.arity,
                    });
                }
                Ok(Node::Var(k - 1))
            }
            "i" => Ok(Node::Const(CNum::new(0.0, 1.0))),
            "exp" | "sin" | "cos" => {
                self.expect(b'(')?;
                let arg = Arc::new(self.expr()?);
                self.expect(b')')?;
                Ok(match name {
                    "exp" => Node::Exp(arg),
                    "sin" => Node::Sin(arg),
                    _ => Node::Cos(arg),
                })
            }
            _ => Err(ParseError {
                offset: start,
                message: format!("unknown name '{name}'"),
            }
            .into()),
        }
    }
}
