//! Text front end: parsing expressions and operation words, and emitting
//! machine-readable computation records.
//!
//! Expression grammar (whitespace insignificant):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := INT | GEN ('^' UINT)? | '(' expr ')' | '-' factor
//! GEN    := ('x' | 'y') UINT | 'tau'
//! ```
//!
//! Integer literals are reduced mod l.  The Unicode letter `τ` is accepted
//! on input as an alias for `tau`; output always spells it `tau`.  Exterior
//! generators never carry an exponent above 1: `x1^0` is 1, `x1^1` is `x1`,
//! and anything higher is an elaboration error rather than being rewritten.
//!
//! Two guards keep elaboration total on adversarial input: exponents are
//! capped at 2^20 and nesting (parentheses and unary minus) at depth 500.
//! Both raise position-tagged errors instead of crashing.
//!
//! Operation words are comma-separated lists of `Q<i>`, `P<i>`, or `beta`;
//! `Q0` and `beta` elaborate to the same operation.  The leftmost entry
//! applies last, so "Q1,Q0" means: Bockstein first, then Q_1.

use std::fmt;

use serde::Serialize;

use crate::ops::{OperationWord, PrimitiveOp};
use crate::ring::{Element, Monomial, RingContext};

/// Largest exponent accepted from text, for tau and the y generators.
pub const MAX_EXPONENT: u64 = 1 << 20;
/// Deepest accepted nesting of parentheses and unary minus.
pub const MAX_DEPTH: u32 = 500;

// ---------------------------------------------------------------------------
// errors
// ---------------------------------------------------------------------------

/// Parse and elaboration errors, all carrying a source position (1-based
/// line and column, counted in characters).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprError {
    Syntax { line: u32, col: u32, message: String },
    UnknownGenerator { line: u32, col: u32, name: String },
    IndexOutOfRange { line: u32, col: u32, name: String, rank: u32 },
    /// An exterior generator with an exponent of 2 or more.
    ExteriorSquare { line: u32, col: u32, name: String, exponent: u64 },
    ExponentTooLarge { line: u32, col: u32, text: String },
    TooDeep { line: u32, col: u32 },
    /// A bad token in an operation word; `position` counts tokens from 1.
    UnknownOperation { position: usize, token: String },
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprError::Syntax { line, col, message } => {
                write!(f, "line {line}, column {col}: {message}")
            }
            ExprError::UnknownGenerator { line, col, name } => write!(
                f,
                "line {line}, column {col}: unknown generator '{name}' (expected x<i>, y<i>, or tau)"
            ),
            ExprError::IndexOutOfRange { line, col, name, rank } => write!(
                f,
                "line {line}, column {col}: generator '{name}' is out of range, the ring has rank {rank}"
            ),
            ExprError::ExteriorSquare { line, col, name, exponent } => write!(
                f,
                "line {line}, column {col}: '{name}^{exponent}' is not accepted; exterior generators only carry exponents 0 and 1"
            ),
            ExprError::ExponentTooLarge { line, col, text } => write!(
                f,
                "line {line}, column {col}: exponent '{text}' exceeds the supported bound {MAX_EXPONENT}"
            ),
            ExprError::TooDeep { line, col } => write!(
                f,
                "line {line}, column {col}: expression nests deeper than {MAX_DEPTH} levels"
            ),
            ExprError::UnknownOperation { position, token } => write!(
                f,
                "operation {position}: unrecognized token '{token}' (expected beta, P<i>, or Q<i>)"
            ),
        }
    }
}

impl std::error::Error for ExprError {}

// ---------------------------------------------------------------------------
// lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Int(String),
    Name(String),
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Plus => "'+'".into(),
            Token::Minus => "'-'".into(),
            Token::Star => "'*'".into(),
            Token::Caret => "'^'".into(),
            Token::LParen => "'('".into(),
            Token::RParen => "')'".into(),
            Token::Int(s) => format!("'{s}'"),
            Token::Name(s) => format!("'{s}'"),
        }
    }
}

struct Lexed {
    tokens: Vec<(Token, u32, u32)>,
    eof: (u32, u32),
}

fn lex(input: &str) -> Result<Lexed, ExprError> {
    let mut tokens = Vec::new();
    let mut chars = input.chars().peekable();
    let (mut line, mut col) = (1u32, 1u32);
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        let tok = match c {
            '+' => {
                bump(&mut chars);
                Token::Plus
            }
            '-' => {
                bump(&mut chars);
                Token::Minus
            }
            '*' => {
                bump(&mut chars);
                Token::Star
            }
            '^' => {
                bump(&mut chars);
                Token::Caret
            }
            '(' => {
                bump(&mut chars);
                Token::LParen
            }
            ')' => {
                bump(&mut chars);
                Token::RParen
            }
            '0'..='9' => {
                let mut digits = String::new();
                while matches!(chars.peek(), Some('0'..='9')) {
                    digits.push(bump(&mut chars));
                }
                Token::Int(digits)
            }
            c if c.is_alphabetic() => {
                let mut name = String::new();
                while chars.peek().is_some_and(|&c| c.is_alphanumeric()) {
                    name.push(bump(&mut chars));
                }
                Token::Name(name)
            }
            other => {
                return Err(ExprError::Syntax {
                    line: tline,
                    col: tcol,
                    message: format!("unexpected character '{other}'"),
                })
            }
        };
        tokens.push((tok, tline, tcol));
    }
    Ok(Lexed { tokens, eof: (line, col) })
}

// ---------------------------------------------------------------------------
// parser
// ---------------------------------------------------------------------------

/// Parse and elaborate an expression in the given ring.
pub fn parse_element(ctx: &RingContext, input: &str) -> Result<Element, ExprError> {
    let lexed = lex(input)?;
    let mut parser = Parser { ctx, tokens: lexed.tokens, eof: lexed.eof, at: 0, depth: 0 };
    let value = parser.expr()?;
    match parser.peek() {
        None => Ok(value),
        Some(tok) => {
            let (line, col) = parser.pos();
            Err(ExprError::Syntax {
                line,
                col,
                message: format!("expected end of input, found {}", tok.describe()),
            })
        }
    }
}

struct Parser<'c> {
    ctx: &'c RingContext,
    tokens: Vec<(Token, u32, u32)>,
    eof: (u32, u32),
    at: usize,
    depth: u32,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at).map(|(t, _, _)| t)
    }

    /// Position of the current token, or of end of input.
    fn pos(&self) -> (u32, u32) {
        self.tokens
            .get(self.at)
            .map(|&(_, l, c)| (l, c))
            .unwrap_or(self.eof)
    }

    fn bump(&mut self) -> Option<Token> {
        let tok = self.tokens.get(self.at).map(|(t, _, _)| t.clone());
        if tok.is_some() {
            self.at += 1;
        }
        tok
    }

    fn enter(&mut self) -> Result<(), ExprError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            let (line, col) = self.pos();
            return Err(ExprError::TooDeep { line, col });
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Element, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = acc.add(&rhs).expect("one parser, one context");
                }
                Some(Token::Minus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = acc.sub(&rhs).expect("one parser, one context");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Element, ExprError> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Token::Star)) {
            self.bump();
            let rhs = self.factor()?;
            acc = acc.mul(&rhs).expect("one parser, one context");
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Element, ExprError> {
        match self.peek() {
            Some(Token::Minus) => {
                self.bump();
                self.enter()?;
                let inner = self.factor()?;
                self.depth -= 1;
                Ok(inner.scalar_mul(-1))
            }
            Some(Token::LParen) => {
                self.bump();
                self.enter()?;
                let inner = self.expr()?;
                self.depth -= 1;
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    got => Err(self.unexpected("')'", got)),
                }
            }
            Some(Token::Int(_)) => {
                let Some(Token::Int(digits)) = self.bump() else { unreachable!() };
                // Reduce while folding so literals of any length work.
                let p = self.ctx.prime() as u64;
                let mut value = 0u64;
                for b in digits.bytes() {
                    value = (value * 10 + (b - b'0') as u64) % p;
                }
                Ok(self.ctx.scalar(value as i64))
            }
            Some(Token::Name(_)) => {
                let (line, col) = self.pos();
                let Some(Token::Name(name)) = self.bump() else { unreachable!() };
                let exponent = self.exponent()?;
                self.generator(name, exponent, line, col)
            }
            got => {
                let got = got.cloned();
                Err(self.unexpected("a number, generator, '(' or '-'", got))
            }
        }
    }

    fn unexpected(&self, wanted: &str, got: Option<Token>) -> ExprError {
        let found = got.map_or("end of input".to_string(), |t| t.describe());
        // `bump` already advanced past the offending token, so point at the
        // previous position when we consumed one.
        let (line, col) = if self.at > 0 && self.at <= self.tokens.len() {
            let (_, l, c) = self.tokens[self.at - 1];
            (l, c)
        } else {
            self.pos()
        };
        ExprError::Syntax { line, col, message: format!("expected {wanted}, found {found}") }
    }

    /// The optional `'^' UINT` suffix of a generator.
    fn exponent(&mut self) -> Result<Option<(u64, u32, u32)>, ExprError> {
        if !matches!(self.peek(), Some(Token::Caret)) {
            return Ok(None);
        }
        self.bump();
        let (line, col) = self.pos();
        match self.bump() {
            Some(Token::Int(digits)) => {
                let mut value = 0u64;
                for b in digits.bytes() {
                    value = value.saturating_mul(10).saturating_add((b - b'0') as u64);
                }
                if value > MAX_EXPONENT {
                    return Err(ExprError::ExponentTooLarge { line, col, text: digits });
                }
                Ok(Some((value, line, col)))
            }
            got => Err(self.unexpected("an exponent", got)),
        }
    }

    fn generator(
        &mut self,
        name: String,
        exponent: Option<(u64, u32, u32)>,
        line: u32,
        col: u32,
    ) -> Result<Element, ExprError> {
        let exp = exponent.map(|(e, _, _)| e).unwrap_or(1);
        let n = self.ctx.rank() as usize;
        if name == "tau" || name == "τ" {
            let mon = Monomial::raw(exp as u32, vec![0; n], vec![]);
            return Ok(self.ctx.combine([(mon, 1)]).expect("rank matches"));
        }
        let mut chars = name.chars();
        let head = chars.next().expect("lexer produces nonempty names");
        let rest = chars.as_str();
        if (head != 'x' && head != 'y') || rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ExprError::UnknownGenerator { line, col, name });
        }
        let mut index = 0u64;
        for b in rest.bytes() {
            index = index.saturating_mul(10).saturating_add((b - b'0') as u64);
        }
        if index == 0 || index > self.ctx.rank() as u64 {
            return Err(ExprError::IndexOutOfRange { line, col, name, rank: self.ctx.rank() });
        }
        let index = index as u32;
        if head == 'x' {
            return match exp {
                0 => Ok(self.ctx.one()),
                1 => Ok(self.ctx.x(index).expect("index checked")),
                e => Err(ExprError::ExteriorSquare { line, col, name, exponent: e }),
            };
        }
        let mut ys = vec![0u32; n];
        ys[(index - 1) as usize] = exp as u32;
        let mon = Monomial::raw(0, ys, vec![]);
        Ok(self.ctx.combine([(mon, 1)]).expect("rank matches"))
    }
}

// ---------------------------------------------------------------------------
// operation words
// ---------------------------------------------------------------------------

/// Parse a comma-separated operation word such as "Q1,Q0", "P2", or "beta".
pub fn parse_word(input: &str) -> Result<OperationWord, ExprError> {
    let mut ops = Vec::new();
    for (idx, raw) in input.split(',').enumerate() {
        let position = idx + 1;
        let tok = raw.trim();
        if tok == "beta" {
            ops.push(PrimitiveOp::Bockstein);
            continue;
        }
        let mut chars = tok.chars();
        let head = chars.next();
        let index = chars.as_str().parse::<u32>();
        match (head, index) {
            (Some('Q'), Ok(0)) => ops.push(PrimitiveOp::Bockstein),
            (Some('Q'), Ok(i)) => ops.push(PrimitiveOp::Milnor(i)),
            (Some('P'), Ok(i)) => ops.push(PrimitiveOp::Power(i)),
            _ => {
                return Err(ExprError::UnknownOperation { position, token: tok.to_string() });
            }
        }
    }
    Ok(OperationWord::new(ops))
}

// ---------------------------------------------------------------------------
// machine-readable records
// ---------------------------------------------------------------------------

/// One monomial of an output element, with its coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TermRecord {
    pub coeff: u32,
    pub tau: u32,
    pub ys: Vec<u32>,
    pub xs: Vec<u32>,
}

/// The result of applying an operation word to an element, as one flat
/// record.  Serialized as a single JSON line with exactly this key order:
/// prime, rank, input, word, output, output_terms, input_bidegree, shift,
/// output_bidegree, is_zero.  Bidegrees serialize as two-element arrays
/// `[m, w]`, or `null` where undefined (zero or inhomogeneous elements).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComputationRecord {
    pub prime: u32,
    pub rank: u32,
    pub input: String,
    pub word: String,
    pub output: String,
    pub output_terms: Vec<TermRecord>,
    pub input_bidegree: Option<[i64; 2]>,
    pub shift: [i64; 2],
    pub output_bidegree: Option<[i64; 2]>,
    pub is_zero: bool,
}

impl ComputationRecord {
    /// Build the record for `output = word(input)`.  The input and output
    /// strings are the canonical renderings, so parsing them back reproduces
    /// the computation exactly.
    pub fn new(word: &OperationWord, input: &Element, output: &Element) -> ComputationRecord {
        let ctx = input.context();
        let as_pair = |e: &Element| e.bidegree().ok().map(|b| [b.degree, b.weight]);
        let shift = word.shift(ctx.prime());
        ComputationRecord {
            prime: ctx.prime(),
            rank: ctx.rank(),
            input: input.to_string(),
            word: word.to_string(),
            output: output.to_string(),
            output_terms: output
                .terms()
                .map(|(m, c)| TermRecord {
                    coeff: c,
                    tau: m.tau_exponent(),
                    ys: m.y_exponents().to_vec(),
                    xs: m.x_indices().to_vec(),
                })
                .collect(),
            input_bidegree: as_pair(input),
            shift: [shift.degree, shift.weight],
            output_bidegree: as_pair(output),
            is_zero: output.is_zero(),
        }
    }

    /// The record as one line of JSON (no trailing newline).
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serialization cannot fail")
    }
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------
