//! Scalar field expressions over chart coordinates `x1..x4`.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' ['-' | '+'] INTEGER)?
//! primary := NUMBER | 'x1' | 'x2' | 'x3' | 'x4'
//!          | FUNC '(' expr ')' | '(' expr ')'
//! FUNC    := 'sin' | 'cos' | 'exp' | 'log' | 'sqrt'
//! ```
//!
//! Numbers are decimal with an optional exponent (`1.5e-3`).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet2;
use crate::Point;

/// 1-based source location.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }
}

#[derive(Clone, Debug)]
pub enum Node {
    Const(f64),
    /// Zero-based coordinate index.
    Var(usize),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

/// An expression node together with the location of its operator.
#[derive(Clone, Debug)]
pub struct Expr {
    pub node: Node,
    pub span: Span,
}

/// Structural equality; spans are ignored.
impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        match (&self.node, &other.node) {
            (Node::Const(a), Node::Const(b)) => a.to_bits() == b.to_bits(),
            (Node::Var(a), Node::Var(b)) => a == b,
            (Node::Neg(a), Node::Neg(b)) => a == b,
            (Node::Binary(o1, a1, b1), Node::Binary(o2, a2, b2)) => o1 == o2 && a1 == a2 && b1 == b2,
            (Node::Pow(a, n), Node::Pow(b, m)) => n == m && a == b,
            (Node::Call(f, a), Node::Call(g, b)) => f == g && a == b,
            _ => false,
        }
    }
}

impl Expr {
    fn new(node: Node, span: Span) -> Self {
        Expr { node, span }
    }

    pub fn depth(&self) -> usize {
        1 + match &self.node {
            Node::Const(_) | Node::Var(_) => 0,
            Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => a.depth(),
            Node::Binary(_, a, b) => a.depth().max(b.depth()),
        }
    }

    fn eval(&self, vars: &[Jet2; 4]) -> Result<Jet2> {
        let domain = |op: &'static str, message: String| Error::Domain {
            span: self.span,
            op,
            message,
        };
        Ok(match &self.node {
            Node::Const(c) => Jet2::constant(*c),
            Node::Var(i) => vars[*i],
            Node::Neg(a) => -a.eval(vars)?,
            Node::Binary(op, a, b) => {
                let (a, b) = (a.eval(vars)?, b.eval(vars)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b.value == 0.0 || !b.value.is_finite() {
                            return Err(domain("/", format!("divisor evaluates to {}", b.value)));
                        }
                        a / b
                    }
                }
            }
            Node::Pow(a, n) => {
                let a = a.eval(vars)?;
                if *n < 0 {
                    if a.value == 0.0 {
                        return Err(domain("^", "negative power of zero".into()));
                    }
                    a.recip().powi(-n)
                } else {
                    a.powi(*n)
                }
            }
            Node::Call(f, a) => {
                let a = a.eval(vars)?;
                match f {
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Exp => a.exp(),
                    Func::Log => {
                        if a.value <= 0.0 {
                            return Err(domain("log", format!("argument {} is not positive", a.value)));
                        }
                        a.ln()
                    }
                    Func::Sqrt => {
                        if a.value <= 0.0 {
                            return Err(domain("sqrt", format!("argument {} is not positive", a.value)));
                        }
                        a.sqrt()
                    }
                }
            }
        })
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, parent: u8) -> fmt::Result {
        // precedence: 1 additive, 2 multiplicative, 3 unary, 4 power, 5 atom
        let own = match &self.node {
            Node::Const(c) if *c < 0.0 || c.is_sign_negative() => 3,
            Node::Const(_) | Node::Var(_) | Node::Call(..) => 5,
            Node::Neg(_) => 3,
            Node::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Node::Binary(..) => 2,
            Node::Pow(..) => 4,
        };
        let paren = own < parent;
        if paren {
            f.write_str("(")?;
        }
        match &self.node {
            Node::Const(c) => write_number(f, *c)?,
            Node::Var(i) => write!(f, "x{}", i + 1)?,
            Node::Neg(a) => {
                f.write_str("-")?;
                match a.node {
                    Node::Const(c) if !c.is_sign_negative() => {
                        f.write_str("(")?;
                        write_number(f, c)?;
                        f.write_str(")")?;
                    }
                    _ => a.fmt_prec(f, 3)?,
                }
            }
            Node::Binary(op, a, b) => {
                let p = own;
                a.fmt_prec(f, p)?;
                write!(f, " {} ", op.symbol())?;
                // left-associative: the right operand binds tighter
                b.fmt_prec(f, p + 1)?;
            }
            Node::Pow(a, n) => {
                a.fmt_prec(f, 5)?;
                write!(f, "^{n}")?;
            }
            Node::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                a.fmt_prec(f, 0)?;
                f.write_str(")")?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

fn write_number(f: &mut fmt::Formatter<'_>, c: f64) -> fmt::Result {
    // `{:?}` is the shortest representation that round-trips.
    let s = format!("{c:?}");
    f.write_str(&s)
}

/// A parsed scalar field. Immutable; cheap to clone and share.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldExpr {
    root: Expr,
}

impl FieldExpr {
    pub fn parse(src: &str) -> Result<Self> {
        let tokens = lex(src)?;
        let mut parser = Parser { tokens, pos: 0 };
        let root = parser.expr()?;
        match parser.peek() {
            Tok::End => Ok(FieldExpr { root }),
            _ => Err(Error::Syntax {
                span: parser.span(),
                message: format!("unexpected {}", parser.peek().describe()),
            }),
        }
    }

    pub fn constant(c: f64) -> Self {
        FieldExpr {
            root: Expr::new(Node::Const(c), Span::default()),
        }
    }

    pub fn root(&self) -> &Expr {
        &self.root
    }

    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    /// Value, gradient and Hessian at `p`.
    pub fn eval_jet2(&self, p: &Point) -> Result<Jet2> {
        let vars = [
            Jet2::variable(0, p[0]),
            Jet2::variable(1, p[1]),
            Jet2::variable(2, p[2]),
            Jet2::variable(3, p[3]),
        ];
        self.root.eval(&vars)
    }

    pub fn eval(&self, p: &Point) -> Result<f64> {
        self.eval_jet2(p).map(|j| j.value)
    }
}

impl fmt::Display for FieldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt_prec(f, 0)
    }
}

impl FromStr for FieldExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FieldExpr::parse(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64, String),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Comma,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(_, s) => format!("number `{s}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Op(c) => format!("`{c}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Span)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, col };
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() || c == '.' {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let value = text.parse::<f64>().map_err(|_| Error::Syntax {
                span,
                message: format!("malformed number `{text}`"),
            })?;
            Tok::Num(value, text)
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else {
            i += 1;
            match c {
                '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                _ => {
                    return Err(Error::Syntax {
                        span,
                        message: format!("unexpected character `{c}`"),
                    })
                }
            }
        };
        col += i - start;
        out.push((tok, span));
    }
    out.push((Tok::End, Span { line, col }));
    Ok(out)
}

struct Parser {
    tokens: Vec<(Tok, Span)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].0
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> Error {
        Error::Syntax {
            span: self.span(),
            message: format!("expected {expected}, found {}", self.peek().describe()),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Tok::Op(c @ ('+' | '-')) = *self.peek() {
            let (_, span) = self.bump();
            let rhs = self.term()?;
            let op = if c == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::new(Node::Binary(op, Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Tok::Op(c @ ('*' | '/')) = *self.peek() {
            let (_, span) = self.bump();
            let rhs = self.unary()?;
            let op = if c == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::new(Node::Binary(op, Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        match *self.peek() {
            Tok::Op('-') => {
                let (_, span) = self.bump();
                // a bare literal folds into a negative constant unless it is
                // the base of a power (`-2^2` is `-(2^2)`)
                if let (Tok::Num(v, _), next) = (
                    self.peek().clone(),
                    &self.tokens[(self.pos + 1).min(self.tokens.len() - 1)].0,
                ) {
                    if *next != Tok::Op('^') {
                        self.bump();
                        return Ok(Expr::new(Node::Const(-v), span));
                    }
                }
                let inner = self.unary()?;
                Ok(Expr::new(Node::Neg(Box::new(inner)), span))
            }
            Tok::Op('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if let Tok::Op('^') = self.peek() {
            let (_, span) = self.bump();
            let negative = match self.peek() {
                Tok::Op('-') => {
                    self.bump();
                    true
                }
                Tok::Op('+') => {
                    self.bump();
                    false
                }
                _ => false,
            };
            let exp_span = self.span();
            let n = match self.bump().0 {
                Tok::Num(v, text)
                    if v.fract() == 0.0 && v.abs() <= i32::MAX as f64 && !text.contains(['.', 'e', 'E']) =>
                {
                    v as i32
                }
                other => {
                    return Err(Error::Syntax {
                        span: exp_span,
                        message: format!("expected integer exponent, found {}", other.describe()),
                    })
                }
            };
            let n = if negative { -n } else { n };
            return Ok(Expr::new(Node::Pow(Box::new(base), n), span));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        let (tok, span) = self.bump();
        match tok {
            Tok::Num(v, _) => Ok(Expr::new(Node::Const(v), span)),
            Tok::LParen => {
                let inner = self.expr()?;
                match self.peek() {
                    Tok::RParen => {
                        self.bump();
                        Ok(inner)
                    }
                    _ => Err(self.unexpected("`)`")),
                }
            }
            Tok::Ident(name) => {
                if let Some(func) = Func::from_name(&name) {
                    if *self.peek() != Tok::LParen {
                        return Err(self.unexpected(&format!("`(` after `{name}`")));
                    }
                    self.bump();
                    let mut args = vec![self.expr()?];
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        args.push(self.expr()?);
                    }
                    if *self.peek() != Tok::RParen {
                        return Err(self.unexpected("`)`"));
                    }
                    self.bump();
                    if args.len() != 1 {
                        return Err(Error::Arity {
                            span,
                            name,
                            found: args.len(),
                        });
                    }
                    let arg = args.pop().expect("one argument");
                    return Ok(Expr::new(Node::Call(func, Box::new(arg)), span));
                }
                match name.as_str() {
                    "x1" => Ok(Expr::new(Node::Var(0), span)),
                    "x2" => Ok(Expr::new(Node::Var(1), span)),
                    "x3" => Ok(Expr::new(Node::Var(2), span)),
                    "x4" => Ok(Expr::new(Node::Var(3), span)),
                    _ => Err(Error::UnknownIdentifier { span, name }),
                }
            }
            other => {
                self.pos -= usize::from(other != Tok::End);
                Err(self.unexpected("a number, coordinate, function or `(`"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn constant_field_has_zero_derivatives() {
        let j = FieldExpr::parse("2.5")
            .unwrap()
            .eval_jet2(&[1.0, 2.0, 3.0, 4.0])
            .unwrap();
        assert_eq!(j, Jet2::constant(2.5));
    }

    #[test]
    fn square_of_first_coordinate() {
        let j = FieldExpr::parse("x1^2")
            .unwrap()
            .eval_jet2(&[3.0, 0.0, 0.0, 0.0])
            .unwrap();
        assert_eq!(j.value, 9.0);
        assert_eq!(j.grad, [6.0, 0.0, 0.0, 0.0]);
        let mut h = [[0.0; 4]; 4];
        h[0][0] = 2.0;
        assert_eq!(j.hess, h);
    }

    #[test]
    fn nested_rational_parses_deep() {
        let f = FieldExpr::parse("1/(1+x1^2+x2^2)^2").unwrap();
        assert!(f.depth() >= 3);
        let v = f.eval(&[1.0, 1.0, 0.0, 0.0]).unwrap();
        assert!((v - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn unknown_coordinate() {
        match FieldExpr::parse("x5") {
            Err(Error::UnknownIdentifier { name, span }) => {
                assert_eq!(name, "x5");
                assert_eq!(span, Span { line: 1, col: 1 });
            }
            other => panic!("expected unknown identifier, got {other:?}"),
        }
    }

    #[test]
    fn unbalanced_parenthesis_reports_column() {
        match FieldExpr::parse("sin(x1") {
            Err(Error::Syntax { span, .. }) => assert_eq!(span, Span { line: 1, col: 7 }),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn arity_and_location_errors() {
        assert!(matches!(
            FieldExpr::parse("sin(x1, x2)"),
            Err(Error::Arity { found: 2, .. })
        ));
        match FieldExpr::parse("1 +\n  * x2") {
            Err(Error::Syntax { span, .. }) => assert_eq!(span, Span { line: 2, col: 3 }),
            other => panic!("{other:?}"),
        }
        assert!(matches!(FieldExpr::parse("x1^1.5"), Err(Error::Syntax { .. })));
        assert!(matches!(FieldExpr::parse("sin x1"), Err(Error::Syntax { .. })));
        assert!(matches!(FieldExpr::parse(""), Err(Error::Syntax { .. })));
    }

    #[test]
    fn domain_errors_carry_location() {
        let f = FieldExpr::parse("1 + log(x1 - 1)").unwrap();
        match f.eval_jet2(&[1.0, 0.0, 0.0, 0.0]) {
            Err(Error::Domain { op, span, .. }) => {
                assert_eq!(op, "log");
                assert_eq!(span, Span { line: 1, col: 5 });
            }
            other => panic!("{other:?}"),
        }
        let g = FieldExpr::parse("x2 / x1").unwrap();
        assert!(matches!(g.eval(&[0.0; 4]), Err(Error::Domain { op: "/", .. })));
        let h = FieldExpr::parse("x1^-2").unwrap();
        assert!(matches!(h.eval(&[0.0; 4]), Err(Error::Domain { op: "^", .. })));
        assert_eq!(h.eval(&[2.0, 0.0, 0.0, 0.0]).unwrap(), 0.25);
    }

    #[test]
    fn precedence() {
        let f = FieldExpr::parse("-x1^2 + 2*x2 - x3/x4 - 1").unwrap();
        let v = f.eval(&[3.0, 1.0, 2.0, 4.0]).unwrap();
        assert_eq!(v, -9.0 + 2.0 - 0.5 - 1.0);
        let g = FieldExpr::parse("2 - 3 - 4").unwrap();
        assert_eq!(g.eval(&[0.0; 4]).unwrap(), -5.0);
        let h = FieldExpr::parse("1.5e-1 * 2E+1").unwrap();
        assert!((h.eval(&[0.0; 4]).unwrap() - 3.0).abs() < 1e-15);
    }

    /// Central differences with Richardson extrapolation (h and h/2).
    fn fd_jet(f: &FieldExpr, p: &Point, h: f64) -> ([f64; 4], [[f64; 4]; 4]) {
        let eval = |q: Point| f.eval(&q).unwrap();
        let shifted = |i: usize, a: f64, j: usize, b: f64| {
            let mut q = *p;
            q[i] += a;
            q[j] += b;
            eval(q)
        };
        let grad_at = |h: f64| {
            let mut g = [0.0; 4];
            for (i, gi) in g.iter_mut().enumerate() {
                *gi = (shifted(i, h, i, 0.0) - shifted(i, -h, i, 0.0)) / (2.0 * h);
            }
            g
        };
        let hess_at = |h: f64| {
            let mut m = [[0.0; 4]; 4];
            for i in 0..4 {
                for j in 0..4 {
                    m[i][j] = (shifted(i, h, j, h) - shifted(i, h, j, -h) - shifted(i, -h, j, h)
                        + shifted(i, -h, j, -h))
                        / (4.0 * h * h);
                }
            }
            m
        };
        let (g1, g2) = (grad_at(h), grad_at(h / 2.0));
        let (h1, h2) = (hess_at(h), hess_at(h / 2.0));
        let mut g = [0.0; 4];
        let mut hh = [[0.0; 4]; 4];
        for i in 0..4 {
            g[i] = (4.0 * g2[i] - g1[i]) / 3.0;
            for j in 0..4 {
                hh[i][j] = (4.0 * h2[i][j] - h1[i][j]) / 3.0;
            }
        }
        (g, hh)
    }

    fn assert_matches_fd(src: &str, p: Point) {
        let f = FieldExpr::parse(src).unwrap();
        let jet = f.eval_jet2(&p).unwrap();
        let (g, h) = fd_jet(&f, &p, 1e-3);
        let scale = 1.0 + jet.value.abs();
        for i in 0..4 {
            let err = (jet.grad[i] - g[i]).abs() / (scale + jet.grad[i].abs());
            assert!(err < 1e-6, "{src}: grad[{i}] {} vs {}", jet.grad[i], g[i]);
            for j in 0..4 {
                let err = (jet.hess[i][j] - h[i][j]).abs() / (scale + jet.hess[i][j].abs());
                assert!(err < 1e-6, "{src}: hess[{i}][{j}] {} vs {}", jet.hess[i][j], h[i][j]);
            }
        }
    }

    #[test]
    fn jets_agree_with_finite_differences() {
        let corpus = [
            ("sin(x1)*exp(x2)", [0.3, -0.2, 0.0, 0.0]),
            ("1/(1+x1^2+x2^2+x3^2+x4^2)^2", [0.4, 0.1, -0.7, 0.2]),
            ("log(2 + cos(x1*x3)) - sqrt(1 + x4^2)/x2", [0.5, 1.3, -0.4, 0.9]),
            ("exp(2*sin(6.283185307179586*x1)) * x3^-1", [0.1, 0.0, 1.5, 0.0]),
            ("(x1 - x2*x3)^3 / (3 + x4)", [0.2, 0.7, 0.1, -1.2]),
        ];
        for (src, p) in corpus {
            assert_matches_fd(src, p);
        }
    }

    fn expr_strategy() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (-50i32..50).prop_map(|n| Expr::new(Node::Const(n as f64 / 4.0), Span::default())),
            (0usize..4).prop_map(|i| Expr::new(Node::Var(i), Span::default())),
        ];
        leaf.prop_recursive(5, 40, 2, |inner| {
            prop_oneof![
                inner
                    .clone()
                    .prop_map(|a| Expr::new(Node::Neg(Box::new(a)), Span::default())),
                (inner.clone(), inner.clone(), 0..4u8).prop_map(|(a, b, k)| {
                    let op = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div][k as usize];
                    Expr::new(Node::Binary(op, Box::new(a), Box::new(b)), Span::default())
                }),
                (inner.clone(), -3i32..4).prop_map(|(a, n)| Expr::new(Node::Pow(Box::new(a), n), Span::default())),
                (inner, 0..5u8).prop_map(|(a, k)| {
                    let f = [Func::Sin, Func::Cos, Func::Exp, Func::Log, Func::Sqrt][k as usize];
                    Expr::new(Node::Call(f, Box::new(a)), Span::default())
                }),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(root in expr_strategy()) {
            let e = FieldExpr { root };
            let printed = e.to_string();
            let back = FieldExpr::parse(&printed).unwrap();
            prop_assert_eq!(&back, &e, "printed as {}", printed);
            prop_assert_eq!(back.to_string(), printed);
        }
    }
}
