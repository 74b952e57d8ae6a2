//! Hand-written lexer and recursive-descent parser for bounds, types,
//! terms and `.cufl` source files.

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use super::{Term, Type};
use crate::bounds::{BoundExpr, SizeVar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigUint),
    Backslash,
    Caret,
    Dot,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    ColonEq,
    FatArrow,
    Arrow,
    Bar,
    Plus,
    Minus,
    Star,
    Eq,
    Hash,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("{other:?}"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let start = (line, col);
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i, &mut col);
            continue;
        }
        let next = chars.get(i + 1).copied();
        if c == '-' && next == Some('-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let push = |out: &mut Vec<Spanned>, tok: Tok| {
            out.push(Spanned {
                tok,
                line: start.0,
                col: start.1,
            })
        };
        if is_ident_start(c) {
            let mut s = String::new();
            while i < chars.len() && is_ident_char(chars[i]) {
                s.push(chars[i]);
                advance(1, &mut i, &mut col);
            }
            push(&mut out, Tok::Ident(s));
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                s.push(chars[i]);
                advance(1, &mut i, &mut col);
            }
            push(&mut out, Tok::Int(s.parse().expect("digits")));
            continue;
        }
        let (tok, len) = match (c, next) {
            ('-', Some('>')) => (Tok::Arrow, 2),
            ('=', Some('>')) => (Tok::FatArrow, 2),
            (':', Some('=')) => (Tok::ColonEq, 2),
            ('\\', _) => (Tok::Backslash, 1),
            ('^', _) => (Tok::Caret, 1),
            ('.', _) => (Tok::Dot, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('[', _) => (Tok::LBracket, 1),
            (']', _) => (Tok::RBracket, 1),
            (',', _) => (Tok::Comma, 1),
            (';', _) => (Tok::Semi, 1),
            (':', _) => (Tok::Colon, 1),
            ('|', _) => (Tok::Bar, 1),
            ('+', _) => (Tok::Plus, 1),
            ('-', _) => (Tok::Minus, 1),
            ('*', _) => (Tok::Star, 1),
            ('=', _) => (Tok::Eq, 1),
            ('#', _) => (Tok::Hash, 1),
            _ => {
                return Err(ParseError {
                    line,
                    col,
                    message: format!("unexpected character `{c}`"),
                })
            }
        };
        push(&mut out, tok);
        advance(len, &mut i, &mut col);
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

const TERM_KEYWORDS: &[&str] = &[
    "unit", "inl", "inr", "prl", "prr", "rec", "case", "of", "def",
];
const TYPE_KEYWORDS: &[&str] = &["Unit", "Bot"];
const BOUND_KEYWORDS: &[&str] = &["iter", "max"];

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let s = &self.toks[self.pos];
        (s.line, s.col)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.here();
        Err(ParseError {
            line,
            col,
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!(
                "expected {}, found {}",
                tok.describe(),
                self.peek().describe()
            ))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.is_keyword(kw) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected `{kw}`, found {}", self.peek().describe()))
        }
    }

    fn ident(&mut self, reserved: &[&str]) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !reserved.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            other => self.error(format!("expected identifier, found {}", other.describe())),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.error(format!("unexpected {}", self.peek().describe()))
        }
    }

    // ---- bounds ----

    fn bound(&mut self) -> Result<BoundExpr, ParseError> {
        let mut lhs = self.bound_term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = lhs + self.bound_term()?;
                }
                Tok::Minus => {
                    self.bump();
                    lhs = lhs - self.bound_term()?;
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn bound_term(&mut self) -> Result<BoundExpr, ParseError> {
        let mut lhs = self.bound_pow()?;
        while *self.peek() == Tok::Star {
            self.bump();
            lhs = lhs * self.bound_pow()?;
        }
        Ok(lhs)
    }

    fn bound_pow(&mut self) -> Result<BoundExpr, ParseError> {
        let base = self.bound_postfix()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let exp = self.bound_pow()?;
            return Ok(BoundExpr::pow(base, exp));
        }
        Ok(base)
    }

    fn bound_postfix(&mut self) -> Result<BoundExpr, ParseError> {
        let mut e = self.bound_atom()?;
        while *self.peek() == Tok::LBracket {
            self.bump();
            let var = self.ident(BOUND_KEYWORDS)?;
            self.expect(Tok::ColonEq)?;
            let repl = self.bound()?;
            self.expect(Tok::RBracket)?;
            e = BoundExpr::subst(e, SizeVar::new(var), repl);
        }
        Ok(e)
    }

    fn bound_atom(&mut self) -> Result<BoundExpr, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                if n.is_zero() {
                    return self.error("bound literals must be positive");
                }
                self.bump();
                Ok(BoundExpr::Lit(n))
            }
            Tok::LParen => {
                self.bump();
                let e = self.bound()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(s) if s == "iter" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let body = self.bound()?;
                self.expect(Tok::Semi)?;
                let count = self.bound()?;
                self.expect(Tok::Semi)?;
                let var = self.ident(BOUND_KEYWORDS)?;
                self.expect(Tok::RParen)?;
                Ok(BoundExpr::iter(body, count, SizeVar::new(var)))
            }
            Tok::Ident(s) if s == "max" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let a = self.bound()?;
                self.expect(Tok::Comma)?;
                let b = self.bound()?;
                self.expect(Tok::RParen)?;
                Ok(BoundExpr::max(a, b))
            }
            Tok::Ident(_) => Ok(BoundExpr::Var(SizeVar::new(self.ident(BOUND_KEYWORDS)?))),
            other => self.error(format!("expected bound, found {}", other.describe())),
        }
    }

    // ---- types ----

    fn ty(&mut self) -> Result<Type, ParseError> {
        let lhs = self.ty_sum()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            self.expect(Tok::LBracket)?;
            let v = self.ident(BOUND_KEYWORDS)?;
            self.expect(Tok::Semi)?;
            let alpha = self.bound()?;
            self.expect(Tok::Semi)?;
            let beta = self.bound()?;
            self.expect(Tok::RBracket)?;
            let rhs = self.ty()?;
            return Ok(Type::arrow(lhs, SizeVar::new(v), alpha, beta, rhs));
        }
        Ok(lhs)
    }

    fn ty_sum(&mut self) -> Result<Type, ParseError> {
        let lhs = self.ty_prod()?;
        if *self.peek() == Tok::Plus {
            self.bump();
            return Ok(Type::sum(lhs, self.ty_sum()?));
        }
        Ok(lhs)
    }

    fn ty_prod(&mut self) -> Result<Type, ParseError> {
        let lhs = self.ty_atom()?;
        if *self.peek() == Tok::Star {
            self.bump();
            return Ok(Type::prod(lhs, self.ty_prod()?));
        }
        Ok(lhs)
    }

    fn ty_atom(&mut self) -> Result<Type, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "Unit" => {
                self.bump();
                Ok(Type::Unit)
            }
            Tok::Ident(s) if s == "Bot" => {
                self.bump();
                Ok(Type::Bottom)
            }
            Tok::Ident(_) => Ok(Type::TVar(self.ident(TYPE_KEYWORDS)?)),
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            other => self.error(format!("expected type, found {}", other.describe())),
        }
    }

    // ---- terms ----

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Tok::Backslash => self.lambda(),
            Tok::Ident(s) if s == "case" => self.case(),
            _ => self.application(),
        }
    }

    fn lambda(&mut self) -> Result<Term, ParseError> {
        self.expect(Tok::Backslash)?;
        let x = self.ident(TERM_KEYWORDS)?;
        self.expect(Tok::Caret)?;
        let v = self.ident(BOUND_KEYWORDS)?;
        self.expect(Tok::Dot)?;
        let body = self.term()?;
        Ok(Term::lam(x, SizeVar::new(v), body))
    }

    fn case(&mut self) -> Result<Term, ParseError> {
        self.expect_keyword("case")?;
        let scrutinee = self.term()?;
        self.expect_keyword("of")?;
        self.expect_keyword("inl")?;
        let lx = self.ident(TERM_KEYWORDS)?;
        self.expect(Tok::FatArrow)?;
        let left = self.term()?;
        self.expect(Tok::Bar)?;
        self.expect_keyword("inr")?;
        let rx = self.ident(TERM_KEYWORDS)?;
        self.expect(Tok::FatArrow)?;
        let right = self.term()?;
        Ok(Term::case(scrutinee, lx, left, rx, right))
    }

    fn starts_arg(&self) -> bool {
        match self.peek() {
            Tok::LParen | Tok::Backslash => true,
            Tok::Ident(s) => s != "of",
            _ => false,
        }
    }

    fn application(&mut self) -> Result<Term, ParseError> {
        let mut head = self.arg()?;
        while self.starts_arg() {
            let a = self.arg()?;
            head = Term::app(head, a);
        }
        Ok(head)
    }

    fn arg(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Backslash => self.lambda(),
            Tok::Ident(s) => match s.as_str() {
                "case" => self.case(),
                "unit" => {
                    self.bump();
                    Ok(Term::Unit)
                }
                "inl" => {
                    self.bump();
                    Ok(Term::inl(self.arg()?))
                }
                "inr" => {
                    self.bump();
                    Ok(Term::inr(self.arg()?))
                }
                "prl" => {
                    self.bump();
                    Ok(Term::prl(self.arg()?))
                }
                "prr" => {
                    self.bump();
                    Ok(Term::prr(self.arg()?))
                }
                "rec" => {
                    self.bump();
                    let f = self.arg()?;
                    let k = self.arg()?;
                    let a = self.arg()?;
                    Ok(Term::rec(f, k, a))
                }
                _ => Ok(Term::Var(self.ident(TERM_KEYWORDS)?)),
            },
            Tok::LParen => {
                self.bump();
                let first = self.term()?;
                if *self.peek() == Tok::Comma {
                    self.bump();
                    let second = self.term()?;
                    self.expect(Tok::RParen)?;
                    return Ok(Term::pair(first, second));
                }
                self.expect(Tok::RParen)?;
                Ok(first)
            }
            other => self.error(format!("expected term, found {}", other.describe())),
        }
    }
}

pub fn parse_bound(text: &str) -> Result<BoundExpr, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.bound()?;
    p.finish()?;
    Ok(e)
}

pub fn parse_type(text: &str) -> Result<Type, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Directive {
    Check,
    Run,
    Quote,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    Def {
        name: String,
        ty: Type,
        term: Term,
        line: usize,
        col: usize,
    },
    Directive {
        kind: Directive,
        name: String,
        line: usize,
        col: usize,
    },
}

/// A parsed `.cufl` file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SourceFile {
    pub items: Vec<Item>,
}

pub fn parse_file(text: &str) -> Result<SourceFile, ParseError> {
    let mut p = Parser::new(text)?;
    let mut items = Vec::new();
    loop {
        let (line, col) = p.here();
        match p.peek().clone() {
            Tok::Eof => break,
            Tok::Ident(s) if s == "def" => {
                p.bump();
                let name = p.ident(TERM_KEYWORDS)?;
                p.expect(Tok::Colon)?;
                let ty = p.ty()?;
                p.expect(Tok::Eq)?;
                let term = p.term()?;
                p.expect(Tok::Semi)?;
                items.push(Item::Def {
                    name,
                    ty,
                    term,
                    line,
                    col,
                });
            }
            Tok::Hash => {
                p.bump();
                let kind = match p.peek().clone() {
                    Tok::Ident(s) if s == "check" => Directive::Check,
                    Tok::Ident(s) if s == "run" => Directive::Run,
                    Tok::Ident(s) if s == "quote" => Directive::Quote,
                    other => {
                        return p.error(format!(
                            "unknown directive {}; expected check, run or quote",
                            other.describe()
                        ))
                    }
                };
                p.bump();
                let name = p.ident(TERM_KEYWORDS)?;
                if *p.peek() == Tok::Semi {
                    p.bump();
                }
                items.push(Item::Directive {
                    kind,
                    name,
                    line,
                    col,
                });
            }
            other => {
                return p.error(format!(
                    "expected `def` or a directive, found {}",
                    other.describe()
                ))
            }
        }
    }
    Ok(SourceFile { items })
}
