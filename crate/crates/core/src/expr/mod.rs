//! Holomorphic (and meromorphic) expressions in n complex variables.
//!
//! Expressions are immutable trees with shared subtrees, so composing an
//! expression with a map (translates, orbits, line restrictions) is cheap.
//! Evaluation propagates first-order jets forward; second derivatives are
//! never formed.

mod eval;
mod parse;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

pub use eval::{Jet, ProjectiveJet, POLE_THRESHOLD};
pub use parse::parse;

use crate::error::{Error, Result};
use crate::point::CNum;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Node {
    /// 0-based variable index.
    Var(usize),
    Const(CNum),
    Neg(Arc<Node>),
    Add(Arc<Node>, Arc<Node>),
    Sub(Arc<Node>, Arc<Node>),
    Mul(Arc<Node>, Arc<Node>),
    Div(Arc<Node>, Arc<Node>),
    Pow(Arc<Node>, u32),
    Exp(Arc<Node>),
    Sin(Arc<Node>),
    Cos(Arc<Node>),
}

/// A parsed expression over the variables `z1 … zn`.
#[derive(Debug, Clone, PartialEq)]
pub struct HoloExpr {
    root: Arc<Node>,
    arity: usize,
}

impl HoloExpr {
    pub(crate) fn from_node(root: Node, arity: usize) -> Self {
        HoloExpr {
            root: Arc::new(root),
            arity,
        }
    }

    pub(crate) fn node(&self) -> &Node {
        &self.root
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Parse `text` with the given arity; see [`parse`].
    pub fn parse(text: &str, arity: usize) -> Result<Self> {
        parse(text, arity)
    }

    pub fn constant(c: CNum, arity: usize) -> Self {
        HoloExpr::from_node(Node::Const(c), arity)
    }

    pub fn real(x: f64, arity: usize) -> Self {
        HoloExpr::constant(CNum::new(x, 0.0), arity)
    }

    /// The coordinate function `z_{k+1}` (0-based `k`).
    pub fn var(k: usize, arity: usize) -> Self {
        assert!(
            k < arity,
            "variable index {k} out of range for arity {arity}"
        );
        HoloExpr::from_node(Node::Var(k), arity)
    }

    pub fn powu(&self, k: u32) -> Self {
        HoloExpr::from_node(Node::Pow(self.root.clone(), k), self.arity)
    }

    pub fn exp(&self) -> Self {
        HoloExpr::from_node(Node::Exp(self.root.clone()), self.arity)
    }

    pub fn sin(&self) -> Self {
        HoloExpr::from_node(Node::Sin(self.root.clone()), self.arity)
    }

    pub fn cos(&self) -> Self {
        HoloExpr::from_node(Node::Cos(self.root.clone()), self.arity)
    }

    pub fn reciprocal(&self) -> Self {
        HoloExpr::real(1.0, self.arity) / self.clone()
    }

    /// Composition `self ∘ (g₁, …, g_n)`.
    ///
    /// Every replacement must share one arity, which becomes the arity of the
    /// result.
    pub fn substitute(&self, replacements: &[HoloExpr]) -> Result<HoloExpr> {
        if replacements.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: replacements.len(),
            });
        }
        let m = replacements[0].arity;
        if let Some(bad) = replacements.iter().find(|r| r.arity != m) {
            return Err(Error::ArityMismatch {
                expected: m,
                found: bad.arity,
            });
        }
        let subs: Vec<Arc<Node>> = replacements.iter().map(|r| r.root.clone()).collect();
        Ok(HoloExpr {
            root: substitute_node(&self.root, &subs),
            arity: m,
        })
    }

    /// Whether every literal in the tree is real.
    pub fn has_real_coefficients(&self) -> bool {
        fn walk(n: &Node) -> bool {
            match n {
                Node::Var(_) => true,
                Node::Const(c) => c.im == 0.0,
                Node::Neg(a) | Node::Pow(a, _) | Node::Exp(a) | Node::Sin(a) | Node::Cos(a) => {
                    walk(a)
                }
                Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                    walk(a) && walk(b)
                }
            }
        }
        walk(&self.root)
    }

    fn binary(self, rhs: HoloExpr, op: fn(Arc<Node>, Arc<Node>) -> Node) -> HoloExpr {
        let arity = self.arity.max(rhs.arity);
        HoloExpr::from_node(op(self.root, rhs.root), arity)
    }
}

fn substitute_node(node: &Arc<Node>, subs: &[Arc<Node>]) -> Arc<Node> {
    let s = |a: &Arc<Node>| substitute_node(a, subs);
    match node.as_ref() {
        Node::Var(k) => subs[*k].clone(),
        Node::Const(_) => node.clone(),
        Node::Neg(a) => Arc::new(Node::Neg(s(a))),
        Node::Add(a, b) => Arc::new(Node::Add(s(a), s(b))),
        Node::Sub(a, b) => Arc::new(Node::Sub(s(a), s(b))),
        Node::Mul(a, b) => Arc::new(Node::Mul(s(a), s(b))),
        Node::Div(a, b) => Arc::new(Node::Div(s(a), s(b))),
        Node::Pow(a, k) => Arc::new(Node::Pow(s(a), *k)),
        Node::Exp(a) => Arc::new(Node::Exp(s(a))),
        Node::Sin(a) => Arc::new(Node::Sin(s(a))),
        Node::Cos(a) => Arc::new(Node::Cos(s(a))),
    }
}

impl Add for HoloExpr {
    type Output = HoloExpr;
    fn add(self, rhs: HoloExpr) -> HoloExpr {
        self.binary(rhs, Node::Add)
    }
}

impl Sub for HoloExpr {
    type Output = HoloExpr;
    fn sub(self, rhs: HoloExpr) -> HoloExpr {
        self.binary(rhs, Node::Sub)
    }
}

impl Mul for HoloExpr {
    type Output = HoloExpr;
    fn mul(self, rhs: HoloExpr) -> HoloExpr {
        self.binary(rhs, Node::Mul)
    }
}

impl Div for HoloExpr {
    type Output = HoloExpr;
    fn div(self, rhs: HoloExpr) -> HoloExpr {
        self.binary(rhs, Node::Div)
    }
}

impl Neg for HoloExpr {
    type Output = HoloExpr;
    fn neg(self) -> HoloExpr {
        HoloExpr::from_node(Node::Neg(self.root), self.arity)
    }
}

// Printing uses the parser's grammar, so the output parses back to an
// expression with the same values. Literals are printed with round-trip
// precision.
impl fmt::Display for HoloExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(f, &self.root, 0)
    }
}

fn write_real(f: &mut fmt::Formatter<'_>, x: f64) -> fmt::Result {
    if x == x.trunc() && x.abs() < 1e15 {
        write!(f, "{}", x.abs() as i64)
    } else {
        write!(f, "{:e}", x.abs())
    }
}

fn write_const(f: &mut fmt::Formatter<'_>, c: CNum) -> fmt::Result {
    match (c.re != 0.0, c.im != 0.0) {
        (_, false) => {
            if c.re < 0.0 {
                write!(f, "(-")?;
                write_real(f, c.re)?;
                write!(f, ")")
            } else {
                write_real(f, c.re)
            }
        }
        (false, true) => {
            write!(f, "(")?;
            if c.im < 0.0 {
                write!(f, "-")?;
            }
            write_real(f, c.im)?;
            write!(f, "*i)")
        }
        (true, true) => {
            write!(f, "(")?;
            if c.re < 0.0 {
                write!(f, "-")?;
            }
            write_real(f, c.re)?;
            write!(f, "{}", if c.im < 0.0 { "-" } else { "+" })?;
            write_real(f, c.im)?;
            write!(f, "*i)")
        }
    }
}

type Writer<'a> = Box<dyn Fn(&mut fmt::Formatter<'_>) -> fmt::Result + 'a>;

// Precedence levels: 0 = sum, 1 = product, 2 = power operand.
fn write_node(f: &mut fmt::Formatter<'_>, node: &Node, prec: u8) -> fmt::Result {
    let (own, body): (u8, Writer<'_>) = match node {
        Node::Var(k) => (3, Box::new(move |f| write!(f, "z{}", k + 1))),
        Node::Const(c) => (3, Box::new(move |f| write_const(f, *c))),
        Node::Neg(a) => (
            0,
            Box::new(move |f| {
                write!(f, "-")?;
                write_node(f, a, 2)
            }),
        ),
        Node::Add(a, b) => (
            0,
            Box::new(move |f| {
                write_node(f, a, 0)?;
                write!(f, " + ")?;
                write_node(f, b, 1)
            }),
        ),
        Node::Sub(a, b) => (
            0,
            Box::new(move |f| {
                write_node(f, a, 0)?;
                write!(f, " - ")?;
                write_node(f, b, 1)
            }),
        ),
        Node::Mul(a, b) => (
            1,
            Box::new(move |f| {
                write_node(f, a, 1)?;
                write!(f, "*")?;
                write_node(f, b, 2)
            }),
        ),
        Node::Div(a, b) => (
            1,
            Box::new(move |f| {
                write_node(f, a, 1)?;
                write!(f, "/")?;
                write_node(f, b, 2)
            }),
        ),
        Node::Pow(a, k) => (
            2,
            Box::new(move |f| {
                write_node(f, a, 3)?;
                write!(f, "^{}", k)
            }),
        ),
        Node::Exp(a) => (3, Box::new(move |f| call(f, "exp", a))),
        Node::Sin(a) => (3, Box::new(move |f| call(f, "sin", a))),
        Node::Cos(a) => (3, Box::new(move |f| call(f, "cos", a))),
    };
    if own < prec {
        write!(f, "(")?;
        body(f)?;
        write!(f, ")")
    } else {
        body(f)
    }
}

fn call(f: &mut fmt::Formatter<'_>, name: &str, a: &Node) -> fmt::Result {
    write!(f, "{}(", name)?;
    write_node(f, a, 0)?;
    write!(f, ")")
}
