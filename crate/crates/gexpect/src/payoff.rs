//! Payoff expression DSL.
//!
//! Parses and evaluates the continuous payoffs used as initial conditions for
//! the PDE solver, as multi-increment cylinder payoffs, and as event
//! predicates for the scenario engine.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr    := term  (('+' | '-') term)*
//! term    := unary ('*' unary)*
//! unary   := '-' unary | atom
//! atom    := number | variable | call | '(' expr ')'
//! call    := 'abs' '(' expr ')'
//!          | 'exp' '(' expr ')'
//!          | 'min' '(' expr (',' expr)* ')'
//!          | 'max' '(' expr (',' expr)* ')'
//!          | 'pow' '(' expr ',' integer ')'
//! variable := 'x' digits          -- x1, x2, ... (positional)
//! ```
//!
//! There is no division and no fractional power, so every expressible payoff
//! is continuous on all of R^n and evaluation at finite inputs stays finite
//! in exact arithmetic. `exp` is admitted for convenience; keeping its
//! argument within a range that does not overflow f64 is the caller's
//! responsibility (the PDE solver truncates domains, which controls growth
//! there).

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use thiserror::Error;

/// Errors from parsing or evaluating payoff expressions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PayoffError {
    /// Source text could not be parsed. `expected` lists the token classes
    /// that would have been accepted at `offset` (a byte position).
    #[error("syntax error at byte {offset}: expected {expected}, found {found}")]
    Syntax {
        offset: usize,
        expected: String,
        found: String,
    },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("exponent of pow at byte {offset} must be a nonnegative integer")]
    InvalidExponent { offset: usize },
    #[error("empty payoff source")]
    Empty,
    #[error("payoff references x{arity} but the evaluation point has only {got} coordinates")]
    DimensionMismatch { arity: usize, got: usize },
}

/// A single expression node. Variables are stored 0-based and display as
/// `x1`, `x2`, ...
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(usize),
    Neg(Box<Expr>),
    Abs(Box<Expr>),
    Exp(Box<Expr>),
    /// Integer power with nonnegative exponent.
    Pow(Box<Expr>, u32),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// n-ary minimum, at least one argument.
    Min(Vec<Expr>),
    /// n-ary maximum, at least one argument.
    Max(Vec<Expr>),
}

impl Expr {
    fn max_var(&self) -> usize {
        match self {
            Expr::Const(_) => 0,
            Expr::Var(i) => i + 1,
            Expr::Neg(e) | Expr::Abs(e) | Expr::Exp(e) | Expr::Pow(e, _) => e.max_var(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.max_var().max(b.max_var()),
            Expr::Min(es) | Expr::Max(es) => es.iter().map(Expr::max_var).max().unwrap_or(0),
        }
    }

    fn valid(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var(_) => true,
            Expr::Neg(e) | Expr::Abs(e) | Expr::Exp(e) | Expr::Pow(e, _) => e.valid(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.valid() && b.valid(),
            Expr::Min(es) | Expr::Max(es) => !es.is_empty() && es.iter().all(Expr::valid),
        }
    }

    fn eval(&self, point: &[f64]) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Var(i) => point[*i],
            Expr::Neg(e) => -e.eval(point),
            Expr::Abs(e) => e.eval(point).abs(),
            Expr::Exp(e) => e.eval(point).exp(),
            Expr::Pow(e, k) => e.eval(point).powi(*k as i32),
            Expr::Add(a, b) => a.eval(point) + b.eval(point),
            Expr::Sub(a, b) => a.eval(point) - b.eval(point),
            Expr::Mul(a, b) => a.eval(point) * b.eval(point),
            Expr::Min(es) => es
                .iter()
                .map(|e| e.eval(point))
                .fold(f64::INFINITY, f64::min),
            Expr::Max(es) => es
                .iter()
                .map(|e| e.eval(point))
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }

    // Precedence levels: 1 additive, 2 multiplicative, 3 unary/atom.
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        let own = match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Const(c) if *c < 0.0 => 3,
            _ => 4,
        };
        let parens = own < prec;
        if parens {
            write!(f, "(")?;
        }
        match self {
            Expr::Const(c) => write!(f, "{c}")?,
            Expr::Var(i) => write!(f, "x{}", i + 1)?,
            Expr::Neg(e) => {
                write!(f, "-")?;
                e.fmt_prec(f, 3)?;
            }
            Expr::Abs(e) => {
                write!(f, "abs(")?;
                e.fmt_prec(f, 1)?;
                write!(f, ")")?;
            }
            Expr::Exp(e) => {
                write!(f, "exp(")?;
                e.fmt_prec(f, 1)?;
                write!(f, ")")?;
            }
            Expr::Pow(e, k) => {
                write!(f, "pow(")?;
                e.fmt_prec(f, 1)?;
                write!(f, ", {k})")?;
            }
            Expr::Add(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " + ")?;
                b.fmt_prec(f, 2)?;
            }
            Expr::Sub(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " - ")?;
                b.fmt_prec(f, 2)?;
            }
            Expr::Mul(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, " * ")?;
                b.fmt_prec(f, 3)?;
            }
            Expr::Min(es) | Expr::Max(es) => {
                write!(
                    f,
                    "{}(",
                    if matches!(self, Expr::Min(_)) {
                        "min"
                    } else {
                        "max"
                    }
                )?;
                for (i, e) in es.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    e.fmt_prec(f, 1)?;
                }
                write!(f, ")")?;
            }
        }
        if parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 1)
    }
}

/// An immutable, parsed payoff expression together with its arity (the
/// highest variable index referenced; 0 for constants).
///
/// Values are immutable after construction and safe to evaluate concurrently
/// from multiple workers.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffExpr {
    root: Expr,
    arity: usize,
}

impl PayoffExpr {
    /// Parse payoff source text. Whitespace is insignificant.
    pub fn parse(src: &str) -> Result<Self, PayoffError> {
        let mut p = Parser::new(src);
        if p.peek().kind == TokenKind::Eof {
            return Err(PayoffError::Empty);
        }
        let root = p.expr()?;
        p.expect_eof()?;
        Self::new(root)
    }

    /// Wrap a programmatically built expression tree.
    pub fn new(root: Expr) -> Result<Self, PayoffError> {
        if !root.valid() {
            return Err(PayoffError::Syntax {
                offset: 0,
                expected: "min/max with at least one argument".into(),
                found: "empty argument list".into(),
            });
        }
        let arity = root.max_var();
        Ok(PayoffExpr { root, arity })
    }

    /// Constant payoff.
    pub fn constant(c: f64) -> Self {
        PayoffExpr {
            root: Expr::Const(c),
            arity: 0,
        }
    }

    pub fn root(&self) -> &Expr {
        &self.root
    }

    /// Highest variable index referenced (x1 -> 1). 0 when constant.
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Pointwise negation, used for the `-X` side of mean-certainty checks
    /// and the sub-indicator capacity bound.
    pub fn negated(&self) -> Self {
        PayoffExpr {
            root: Expr::Neg(Box::new(self.root.clone())),
            arity: self.arity,
        }
    }

    /// Evaluate at a point. The point may have more coordinates than the
    /// arity; extras are ignored.
    pub fn eval(&self, point: &[f64]) -> Result<f64, PayoffError> {
        if point.len() < self.arity {
            return Err(PayoffError::DimensionMismatch {
                arity: self.arity,
                got: point.len(),
            });
        }
        Ok(self.root.eval(point))
    }

    /// Elementwise [`eval`](Self::eval) over many points.
    pub fn eval_batch(&self, points: &[Vec<f64>]) -> Result<Vec<f64>, PayoffError> {
        points.iter().map(|p| self.eval(p)).collect()
    }
}

impl fmt::Display for PayoffExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

impl Serialize for PayoffExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PayoffExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let src = String::deserialize(d)?;
        PayoffExpr::parse(&src).map_err(D::Error::custom)
    }
}

/// Order relation of an [`EventPredicate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        })
    }
}

/// A comparison of two payoff expressions, used for capacity events and
/// feedback policies. The variable binding is supplied by the evaluation
/// context (e.g. `x1` = terminal state, `x2` = quadratic variation).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventPredicate {
    pub lhs: PayoffExpr,
    pub relation: Relation,
    pub rhs: PayoffExpr,
}

impl EventPredicate {
    pub fn new(lhs: PayoffExpr, relation: Relation, rhs: PayoffExpr) -> Self {
        EventPredicate { lhs, relation, rhs }
    }

    /// Highest variable index referenced on either side.
    pub fn arity(&self) -> usize {
        self.lhs.arity().max(self.rhs.arity())
    }

    pub fn holds(&self, point: &[f64]) -> Result<bool, PayoffError> {
        let l = self.lhs.eval(point)?;
        let r = self.rhs.eval(point)?;
        Ok(match self.relation {
            Relation::Lt => l < r,
            Relation::Le => l <= r,
            Relation::Ge => l >= r,
            Relation::Gt => l > r,
        })
    }
}

impl fmt::Display for EventPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.relation, self.rhs)
    }
}

// ---------------------------------------------------------------------------
// Recursive-descent parser
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
enum TokenKind {
    Number,
    Ident,
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
    Comma,
    Eof,
    Unknown,
}

#[derive(Debug, Clone)]
struct Token<'a> {
    kind: TokenKind,
    text: &'a str,
    offset: usize,
}

struct Parser<'a> {
    tokens: Vec<Token<'a>>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        let tokens = lex(src);
        Parser { tokens, pos: 0 }
    }

    fn peek(&self) -> &Token<'a> {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token<'a> {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, expected: &str) -> PayoffError {
        let t = self.peek();
        let found = match t.kind {
            TokenKind::Eof => "end of input".to_string(),
            _ => format!("`{}`", t.text),
        };
        PayoffError::Syntax {
            offset: t.offset,
            expected: expected.to_string(),
            found,
        }
    }

    fn expect(&mut self, kind: TokenKind, expected: &str) -> Result<Token<'a>, PayoffError> {
        if self.peek().kind == kind {
            Ok(self.bump())
        } else {
            Err(self.err(expected))
        }
    }

    fn expect_eof(&self) -> Result<(), PayoffError> {
        if self.peek().kind == TokenKind::Eof {
            Ok(())
        } else {
            Err(self.err("`+`, `-`, `*` or end of input"))
        }
    }

    fn expr(&mut self) -> Result<Expr, PayoffError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().kind {
                TokenKind::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                TokenKind::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, PayoffError> {
        let mut lhs = self.unary()?;
        while self.peek().kind == TokenKind::Star {
            self.bump();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, PayoffError> {
        if self.peek().kind == TokenKind::Minus {
            self.bump();
            let inner = self.unary()?;
            // Fold a negated literal into a negative constant so that
            // pretty-printing round-trips structurally.
            return Ok(match inner {
                Expr::Const(c) => Expr::Const(-c),
                other => Expr::Neg(Box::new(other)),
            });
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, PayoffError> {
        match self.peek().kind {
            TokenKind::Number => {
                let t = self.bump();
                let v: f64 = t.text.parse().map_err(|_| PayoffError::Syntax {
                    offset: t.offset,
                    expected: "a numeric literal".into(),
                    found: format!("`{}`", t.text),
                })?;
                Ok(Expr::Const(v))
            }
            TokenKind::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(TokenKind::RParen, "`)`")?;
                Ok(e)
            }
            TokenKind::Ident => self.call_or_var(),
            _ => Err(self.err("a number, variable, function call or `(`")),
        }
    }

    fn call_or_var(&mut self) -> Result<Expr, PayoffError> {
        let t = self.bump();
        let name = t.text;
        if let Some(idx) = name.strip_prefix('x') {
            if !idx.is_empty() && idx.bytes().all(|b| b.is_ascii_digit()) {
                let i: usize = idx.parse().map_err(|_| PayoffError::UnknownIdentifier {
                    offset: t.offset,
                    name: name.to_string(),
                })?;
                if i == 0 {
                    return Err(PayoffError::UnknownIdentifier {
                        offset: t.offset,
                        name: name.to_string(),
                    });
                }
                return Ok(Expr::Var(i - 1));
            }
        }
        match name {
            "abs" | "exp" => {
                self.expect(TokenKind::LParen, "`(`")?;
                let e = self.expr()?;
                self.expect(TokenKind::RParen, "`)`")?;
                Ok(if name == "abs" {
                    Expr::Abs(Box::new(e))
                } else {
                    Expr::Exp(Box::new(e))
                })
            }
            "min" | "max" => {
                self.expect(TokenKind::LParen, "`(`")?;
                let mut args = vec![self.expr()?];
                while self.peek().kind == TokenKind::Comma {
                    self.bump();
                    args.push(self.expr()?);
                }
                self.expect(TokenKind::RParen, "`)` or `,`")?;
                Ok(if name == "min" {
                    Expr::Min(args)
                } else {
                    Expr::Max(args)
                })
            }
            "pow" => {
                self.expect(TokenKind::LParen, "`(`")?;
                let base = self.expr()?;
                self.expect(TokenKind::Comma, "`,`")?;
                let et = self.peek().clone();
                let exp_offset = et.offset;
                // Accept an optionally negated numeric literal so the error
                // distinguishes "pow(x1, -1)" from a syntax error.
                let mut neg = false;
                if et.kind == TokenKind::Minus {
                    self.bump();
                    neg = true;
                }
                let nt = self.expect(TokenKind::Number, "a nonnegative integer exponent")?;
                let val: f64 = nt
                    .text
                    .parse()
                    .map_err(|_| PayoffError::InvalidExponent { offset: exp_offset })?;
                let val = if neg { -val } else { val };
                if val < 0.0 || val.fract() != 0.0 || val > u32::MAX as f64 {
                    return Err(PayoffError::InvalidExponent { offset: exp_offset });
                }
                self.expect(TokenKind::RParen, "`)`")?;
                Ok(Expr::Pow(Box::new(base), val as u32))
            }
            _ => Err(PayoffError::UnknownIdentifier {
                offset: t.offset,
                name: name.to_string(),
            }),
        }
    }
}

fn lex(src: &str) -> Vec<Token<'_>> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let kind = match b {
            b'+' => {
                i += 1;
                TokenKind::Plus
            }
            b'-' => {
                i += 1;
                TokenKind::Minus
            }
            b'*' => {
                i += 1;
                TokenKind::Star
            }
            b'(' => {
                i += 1;
                TokenKind::LParen
            }
            b')' => {
                i += 1;
                TokenKind::RParen
            }
            b',' => {
                i += 1;
                TokenKind::Comma
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                TokenKind::Number
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                TokenKind::Ident
            }
            _ => {
                i += 1;
                TokenKind::Unknown
            }
        };
        tokens.push(Token {
            kind,
            text: &src[start..i],
            offset: start,
        });
    }
    tokens.push(Token {
        kind: TokenKind::Eof,
        text: "",
        offset: src.len(),
    });
    tokens
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(src: &str) -> PayoffExpr {
        PayoffExpr::parse(src).unwrap()
    }

    #[test]
    fn parses_min_against_zero() {
        let e = p("min(x1, 0)");
        assert_eq!(e.root(), &Expr::Min(vec![Expr::Var(0), Expr::Const(0.0)]));
        assert_eq!(e.arity(), 1);
    }

    #[test]
    fn parses_sum_of_squares_with_arity_two() {
        let e = p("pow(x1,2) + pow(x2,2)");
        assert_eq!(e.arity(), 2);
        assert_eq!(e.eval(&[3.0, 4.0]).unwrap(), 25.0);
    }

    #[test]
    fn evaluates_hat_payoff() {
        let e = p("max(0, 1 - abs(x1))");
        assert_eq!(e.eval(&[0.25]).unwrap(), 0.75);
    }

    #[test]
    fn eval_examples() {
        let e = p("min(x1,0)");
        assert_eq!(e.eval(&[-2.0]).unwrap(), -2.0);
        assert_eq!(e.eval(&[3.0]).unwrap(), 0.0);
        assert_eq!(p("pow(x1,2)").eval(&[1.5]).unwrap(), 2.25);
    }

    #[test]
    fn eval_batch_matches_pointwise() {
        let e = p("min(x1,0)");
        let pts = vec![vec![-1.0], vec![0.0], vec![1.0]];
        assert_eq!(e.eval_batch(&pts).unwrap(), vec![-1.0, 0.0, 0.0]);

        let c = p("5");
        let pts3 = vec![vec![0.0], vec![2.0], vec![-7.0]];
        assert_eq!(c.eval_batch(&pts3).unwrap(), vec![5.0, 5.0, 5.0]);

        let a = p("abs(x1)");
        assert_eq!(
            a.eval_batch(&[vec![-2.0], vec![2.0]]).unwrap(),
            vec![2.0, 2.0]
        );
    }

    #[test]
    fn precedence_is_conventional() {
        assert_eq!(p("1 - 2 - 3").eval(&[]).unwrap(), -4.0);
        assert_eq!(p("2*3 + 4*5").eval(&[]).unwrap(), 26.0);
        assert_eq!(p("2*(3 + 4)*5").eval(&[]).unwrap(), 70.0);
        assert_eq!(p("-x1*3").eval(&[2.0]).unwrap(), -6.0);
    }

    #[test]
    fn whitespace_is_insignificant() {
        assert_eq!(p(" min ( x1 , 0 ) "), p("min(x1,0)"));
    }

    #[test]
    fn structural_equality_of_reparses() {
        let a = p("max(0, 1 - abs(x1 - 2))");
        let b = p("max(0,1-abs(x1-2))");
        assert_eq!(a, b);
    }

    #[test]
    fn syntax_error_reports_offset_and_expectation() {
        let err = PayoffExpr::parse("min(x1,").unwrap_err();
        match err {
            PayoffError::Syntax {
                offset, expected, ..
            } => {
                assert_eq!(offset, 7);
                assert!(expected.contains("number"), "expected set: {expected}");
            }
            other => panic!("wrong error: {other:?}"),
        }
    }

    #[test]
    fn unknown_identifier_is_reported() {
        let err = PayoffExpr::parse("foo(x1)").unwrap_err();
        assert_eq!(
            err,
            PayoffError::UnknownIdentifier {
                offset: 0,
                name: "foo".into()
            }
        );
        assert!(matches!(
            PayoffExpr::parse("x0").unwrap_err(),
            PayoffError::UnknownIdentifier { .. }
        ));
    }

    #[test]
    fn pow_rejects_bad_exponents() {
        assert!(matches!(
            PayoffExpr::parse("pow(x1, -1)").unwrap_err(),
            PayoffError::InvalidExponent { .. }
        ));
        assert!(matches!(
            PayoffExpr::parse("pow(x1, 0.5)").unwrap_err(),
            PayoffError::InvalidExponent { .. }
        ));
        // Integer-valued literals are fine.
        assert_eq!(p("pow(x1, 3)").eval(&[2.0]).unwrap(), 8.0);
    }

    #[test]
    fn dimension_mismatch() {
        let e = p("x2");
        assert_eq!(
            e.eval(&[1.0]).unwrap_err(),
            PayoffError::DimensionMismatch { arity: 2, got: 1 }
        );
    }

    #[test]
    fn empty_source_is_rejected() {
        assert_eq!(PayoffExpr::parse("   ").unwrap_err(), PayoffError::Empty);
    }

    #[test]
    fn negative_literal_round_trips_structurally() {
        let e = p("-2.5");
        assert_eq!(e.root(), &Expr::Const(-2.5));
        assert_eq!(PayoffExpr::parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn display_round_trips_on_nested_expression() {
        let e = p("min(x1, -x2*3, abs(1 - x1)) + pow(x1, 2) - -4");
        let printed = e.to_string();
        assert_eq!(PayoffExpr::parse(&printed).unwrap(), e);
    }

    #[test]
    fn event_predicate_holds() {
        let ev = EventPredicate::new(p("abs(x1)"), Relation::Le, p("1"));
        assert!(ev.holds(&[0.5]).unwrap());
        assert!(!ev.holds(&[1.5]).unwrap());
        assert_eq!(ev.arity(), 1);
    }

    #[test]
    fn serde_uses_source_strings() {
        let ev = EventPredicate::new(p("x2"), Relation::Lt, p("1"));
        let json = serde_json::to_string(&ev).unwrap();
        assert_eq!(json, r#"{"lhs":"x2","relation":"<","rhs":"1"}"#);
        let back: EventPredicate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, ev);
    }
}
