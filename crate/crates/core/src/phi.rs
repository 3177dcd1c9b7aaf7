//! Expressions for the polar tangential angle φ(θ).
//!
//! A [`PhiFunction`] is parsed from ordinary infix text over the single
//! variable `theta` and evaluated together with its exact first derivative by
//! forward propagation of (value, derivative) pairs.
//!
//! Grammar, lowest precedence first:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?          (right-associative)
//! primary := number | 'theta' | 'pi' | func '(' expr ')' | '(' expr ')'
//! func    := 'sqrt' | 'sin' | 'cos' | 'exp' | 'ln'
//! ```

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty expression")]
    Empty,
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { offset: usize, name: String },
}

impl ParseError {
    /// Character offset of the failure, when there is one.
    pub fn offset(&self) -> Option<usize> {
        match self {
            ParseError::Empty => None,
            ParseError::Syntax { offset, .. } | ParseError::UnknownIdentifier { offset, .. } => {
                Some(*offset)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainReason {
    NegativeSqrt,
    NonpositiveLog,
    DivisionByZero,
    ZeroToNegativePower,
    NegativeBaseFractionalPower,
    NonfiniteValue,
    NonfiniteDerivative,
}

impl fmt::Display for DomainReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DomainReason::NegativeSqrt => "square root of a negative number",
            DomainReason::NonpositiveLog => "logarithm of a non-positive number",
            DomainReason::DivisionByZero => "division by zero",
            DomainReason::ZeroToNegativePower => "zero raised to a negative power",
            DomainReason::NegativeBaseFractionalPower => {
                "negative base raised to a non-integer power"
            }
            DomainReason::NonfiniteValue => "value is not finite",
            DomainReason::NonfiniteDerivative => "derivative is not finite",
        };
        f.write_str(s)
    }
}

/// Evaluation left the real domain of the expression.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("domain error at theta = {theta} in `{node}`: {reason}")]
pub struct DomainError {
    pub theta: f64,
    /// The offending sub-expression, serialized.
    pub node: String,
    pub reason: DomainReason,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
            BinaryOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Sin,
    Cos,
    Exp,
    Ln,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sqrt" => Func::Sqrt,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            _ => return None,
        })
    }
}

/// Expression tree over `theta`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Theta,
    Pi,
    Neg(Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    /// True when the subtree references `theta`.
    pub fn depends_on_theta(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Pi => false,
            Expr::Theta => true,
            Expr::Neg(e) | Expr::Call(_, e) => e.depends_on_theta(),
            Expr::Binary(_, l, r) => l.depends_on_theta() || r.depends_on_theta(),
        }
    }
}

/// Fully parenthesized serialization; parsing it back yields the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c:?}"),
            Expr::Theta => f.write_str("theta"),
            Expr::Pi => f.write_str("pi"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Binary(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

/// φ and dφ/dθ at one polar angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiValue {
    pub phi: f64,
    pub dphi_dtheta: f64,
}

/// A parsed φ(θ). Immutable after parsing.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiFunction {
    source: String,
    ast: Expr,
}

impl PhiFunction {
    pub fn parse(source: &str) -> Result<Self, ParseError> {
        let ast = Parser::new(source).parse()?;
        Ok(PhiFunction {
            source: source.to_string(),
            ast,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn ast(&self) -> &Expr {
        &self.ast
    }

    /// φ(θ) only. Points where just the derivative is singular (for example
    /// `sqrt(theta)` at 0) are accepted here.
    pub fn eval(&self, theta: f64) -> Result<f64, DomainError> {
        eval_node(&self.ast, theta, false).map(|d| d.value)
    }

    /// φ(θ) and its exact derivative.
    pub fn eval_with_derivative(&self, theta: f64) -> Result<PhiValue, DomainError> {
        let d = eval_node(&self.ast, theta, true)?;
        Ok(PhiValue {
            phi: d.value,
            dphi_dtheta: d.deriv,
        })
    }
}

impl FromStr for PhiFunction {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PhiFunction::parse(s)
    }
}

impl fmt::Display for PhiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

#[derive(Debug, Clone, Copy)]
struct Dual {
    value: f64,
    deriv: f64,
}

impl Dual {
    fn constant(value: f64) -> Self {
        Dual { value, deriv: 0.0 }
    }
}

fn eval_node(node: &Expr, theta: f64, check_deriv: bool) -> Result<Dual, DomainError> {
    let fail = |reason| DomainError {
        theta,
        node: node.to_string(),
        reason,
    };
    let out = match node {
        Expr::Const(c) => Dual::constant(*c),
        Expr::Pi => Dual::constant(std::f64::consts::PI),
        Expr::Theta => Dual {
            value: theta,
            deriv: 1.0,
        },
        Expr::Neg(e) => {
            let u = eval_node(e, theta, check_deriv)?;
            Dual {
                value: -u.value,
                deriv: -u.deriv,
            }
        }
        Expr::Binary(op, l, r) => {
            let u = eval_node(l, theta, check_deriv)?;
            let v = eval_node(r, theta, check_deriv)?;
            match op {
                BinaryOp::Add => Dual {
                    value: u.value + v.value,
                    deriv: u.deriv + v.deriv,
                },
                BinaryOp::Sub => Dual {
                    value: u.value - v.value,
                    deriv: u.deriv - v.deriv,
                },
                BinaryOp::Mul => Dual {
                    value: u.value * v.value,
                    deriv: u.deriv * v.value + u.value * v.deriv,
                },
                BinaryOp::Div => {
                    if v.value == 0.0 {
                        return Err(fail(DomainReason::DivisionByZero));
                    }
                    Dual {
                        value: u.value / v.value,
                        deriv: (u.deriv * v.value - u.value * v.deriv) / (v.value * v.value),
                    }
                }
                BinaryOp::Pow => power(u, v, r.depends_on_theta()).map_err(fail)?,
            }
        }
        Expr::Call(func, e) => {
            let u = eval_node(e, theta, check_deriv)?;
            match func {
                Func::Sqrt => {
                    if u.value < 0.0 {
                        return Err(fail(DomainReason::NegativeSqrt));
                    }
                    let s = u.value.sqrt();
                    Dual {
                        value: s,
                        deriv: u.deriv / (2.0 * s),
                    }
                }
                Func::Sin => Dual {
                    value: u.value.sin(),
                    deriv: u.value.cos() * u.deriv,
                },
                Func::Cos => Dual {
                    value: u.value.cos(),
                    deriv: -u.value.sin() * u.deriv,
                },
                Func::Exp => {
                    let e = u.value.exp();
                    Dual {
                        value: e,
                        deriv: e * u.deriv,
                    }
                }
                Func::Ln => {
                    if u.value <= 0.0 {
                        return Err(fail(DomainReason::NonpositiveLog));
                    }
                    Dual {
                        value: u.value.ln(),
                        deriv: u.deriv / u.value,
                    }
                }
            }
        }
    };
    if !out.value.is_finite() {
        return Err(fail(DomainReason::NonfiniteValue));
    }
    if check_deriv && !out.deriv.is_finite() {
        return Err(fail(DomainReason::NonfiniteDerivative));
    }
    Ok(out)
}

fn power(base: Dual, exponent: Dual, variable_exponent: bool) -> Result<Dual, DomainReason> {
    if variable_exponent {
        // u^v = exp(v ln u)
        if base.value <= 0.0 {
            return Err(DomainReason::NonpositiveLog);
        }
        let value = base.value.powf(exponent.value);
        let ln_u = base.value.ln();
        return Ok(Dual {
            value,
            deriv: value * (exponent.deriv * ln_u + exponent.value * base.deriv / base.value),
        });
    }
    let c = exponent.value;
    if base.value == 0.0 && c < 0.0 {
        return Err(DomainReason::ZeroToNegativePower);
    }
    if base.value < 0.0 && c.fract() != 0.0 {
        return Err(DomainReason::NegativeBaseFractionalPower);
    }
    let value = base.value.powf(c);
    // c * u^(c-1) * u'; the u' == 0 case keeps constant subtrees exact at u = 0.
    let deriv = if base.deriv == 0.0 || c == 0.0 {
        0.0
    } else {
        c * base.value.powf(c - 1.0) * base.deriv
    };
    Ok(Dual { value, deriv })
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Number(v) => format!("number {v}"),
            Token::Ident(s) => format!("identifier `{s}`"),
            Token::Plus => "`+`".into(),
            Token::Minus => "`-`".into(),
            Token::Star => "`*`".into(),
            Token::Slash => "`/`".into(),
            Token::Caret => "`^`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::End => "end of input".into(),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Token::Plus,
            '-' => Token::Minus,
            '*' => Token::Star,
            '/' => Token::Slash,
            '^' => Token::Caret,
            '(' => Token::LParen,
            ')' => Token::RParen,
            c if c.is_ascii_digit() || c == '.' => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i < chars.len() && chars[i] == '.' {
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                // exponent only when digits follow, so `2e` stays an error
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
                let value = text.parse::<f64>().map_err(|_| ParseError::Syntax {
                    offset: start,
                    message: format!("malformed number `{text}`"),
                })?;
                out.push((start, Token::Number(value)));
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((start, Token::Ident(chars[start..i].iter().collect())));
                continue;
            }
            other => {
                return Err(ParseError::Syntax {
                    offset: start,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((chars.len(), Token::End));
    Ok(out)
}

struct Parser<'a> {
    source: &'a str,
    tokens: Vec<(usize, Token)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(source: &'a str) -> Self {
        Parser {
            source,
            tokens: Vec::new(),
            pos: 0,
        }
    }

    fn parse(mut self) -> Result<Expr, ParseError> {
        if self.source.trim().is_empty() {
            return Err(ParseError::Empty);
        }
        self.tokens = tokenize(self.source)?;
        let e = self.expr()?;
        match self.peek() {
            Token::End => Ok(e),
            _ => Err(self.unexpected("operator or end of input")),
        }
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos].1
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].0
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].1.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        ParseError::Syntax {
            offset: self.offset(),
            message: format!("expected {expected}, found {}", self.peek().describe()),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Token::Plus => BinaryOp::Add,
                Token::Minus => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Token::Star => BinaryOp::Mul,
                Token::Slash => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Token::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if *self.peek() == Token::Caret {
            self.bump();
            let exponent = self.unary()?;
            return Ok(Expr::Binary(
                BinaryOp::Pow,
                Box::new(base),
                Box::new(exponent),
            ));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let offset = self.offset();
        match self.peek().clone() {
            Token::Number(v) => {
                self.bump();
                Ok(Expr::Const(v))
            }
            Token::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect_rparen()?;
                Ok(e)
            }
            Token::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "theta" => Ok(Expr::Theta),
                    "pi" => Ok(Expr::Pi),
                    _ => match Func::from_name(&name) {
                        Some(func) => {
                            if *self.peek() != Token::LParen {
                                return Err(self.unexpected("`(` after function name"));
                            }
                            self.bump();
                            let arg = self.expr()?;
                            self.expect_rparen()?;
                            Ok(Expr::Call(func, Box::new(arg)))
                        }
                        None => Err(ParseError::UnknownIdentifier { offset, name }),
                    },
                }
            }
            _ => Err(self.unexpected("number, identifier or `(`")),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Token::RParen {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected("`)`"))
        }
    }
}
