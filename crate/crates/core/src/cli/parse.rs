//! Text grammar for polynomials, maps and bimodule operators.
//!
//! ```text
//! poly   := ['-'] term (('+' | '-') term)*
//! term   := coeff ('*' factor)* | factor ('*' factor)*
//! factor := generator | '(' poly ')' | factor '^' nat
//! coeff  := int | int '/' int
//! map    := generator '->' poly (';' generator '->' poly)* [';']
//! ```
//!
//! Whitespace is ignored. Operators use the reserved generators `zl`, `zr`.

use num_bigint::BigInt;

use crate::bimodule::{BiMono, BiOpPoly};
use crate::endo::Endomorphism;
use crate::error::{Error, Result};
use crate::freealg::{Alphabet, Field, NcPoly, Scalar};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Arrow,
    Semi,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(n) => format!("integer `{n}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Semi => "`;`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ';' => Some(Tok::Semi),
            _ => None,
        };
        let tok = if let Some(t) = single {
            i += 1;
            col += 1;
            t
        } else if c == '-' {
            if chars.get(i + 1) == Some(&'>') {
                i += 2;
                col += 2;
                Tok::Arrow
            } else {
                i += 1;
                col += 1;
                Tok::Minus
            }
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            col += i - start;
            let digits: String = chars[start..i].iter().collect();
            Tok::Int(digits.parse().expect("digits"))
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            Tok::Ident(chars[start..i].iter().collect())
        } else {
            return Err(syntax(l0, c0, format!("unexpected character `{c}`")));
        };
        out.push(Spanned {
            tok,
            line: l0,
            column: c0,
        });
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column: col,
    });
    Ok(out)
}

fn degree(p: &NcPoly) -> usize {
    p.degree().finite().unwrap_or(0)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    alphabet: &'a Alphabet,
    field: Field,
}

const MAX_DEPTH: usize = 200;
/// Bounds on the term count and degree of any intermediate product.
const MAX_TERMS: f64 = 50_000.0;
const MAX_DEGREE: usize = 100_000;
const MAX_EXPONENT: u32 = MAX_DEGREE as u32;

impl<'a> Parser<'a> {
    fn new(text: &str, alphabet: &'a Alphabet, field: Field) -> Result<Parser<'a>> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            alphabet,
            field,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let s = &self.toks[self.pos];
        (s.line, s.column)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let (l, c) = self.here();
        syntax(l, c, message)
    }

    fn unexpected(&self, wanted: &str) -> Error {
        self.error(format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn poly(&mut self, depth: usize) -> Result<NcPoly> {
        if depth > MAX_DEPTH {
            return Err(self.error("nesting too deep"));
        }
        let mut negate = false;
        if *self.peek() == Tok::Minus {
            self.bump();
            negate = true;
        }
        let first = self.term(depth)?;
        let mut acc = if negate { -&first } else { first };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term(depth)?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term(depth)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self, depth: usize) -> Result<NcPoly> {
        let mut acc = if let Tok::Int(_) = self.peek() {
            NcPoly::constant(self.alphabet, self.coeff()?)
        } else {
            self.factor(depth)?
        };
        while *self.peek() == Tok::Star {
            self.bump();
            let rhs = self.factor(depth)?;
            self.check_size(
                acc.num_terms() as f64 * rhs.num_terms() as f64,
                degree(&acc) + degree(&rhs),
            )?;
            acc = &acc * &rhs;
        }
        Ok(acc)
    }

    fn coeff(&mut self) -> Result<Scalar> {
        let (l, c) = self.here();
        let Tok::Int(num) = self.bump() else {
            unreachable!("caller checked for an integer")
        };
        if *self.peek() != Tok::Slash {
            return Ok(Scalar::from_bigint(self.field, &num));
        }
        self.bump();
        let Tok::Int(den) = self.bump() else {
            self.pos -= 1;
            return Err(self.unexpected("denominator"));
        };
        Scalar::from_ratio(self.field, &num, &den).map_err(|_| syntax(l, c, format!("zero denominator in {num}/{den}")))
    }

    fn factor(&mut self, depth: usize) -> Result<NcPoly> {
        let mut base = match self.peek().clone() {
            Tok::Ident(name) => {
                let idx = self.alphabet.index_of(&name).ok_or(Error::UnknownGenerator(name))?;
                self.bump();
                NcPoly::generator(self.alphabet, self.field, idx)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.poly(depth + 1)?;
                self.expect(Tok::RParen, "`)`")?;
                inner
            }
            _ => return Err(self.unexpected("generator, `(` or coefficient")),
        };
        while *self.peek() == Tok::Caret {
            self.bump();
            let Tok::Int(n) = self.peek().clone() else {
                return Err(self.unexpected("exponent"));
            };
            let e: u32 = u32::try_from(&n)
                .ok()
                .filter(|&e| e <= MAX_EXPONENT)
                .ok_or_else(|| self.error(format!("exponent {n} exceeds {MAX_EXPONENT}")))?;
            self.check_size((base.num_terms() as f64).powi(e as i32), degree(&base) * e as usize)?;
            self.bump();
            base = base.pow(e);
        }
        Ok(base)
    }

    fn check_size(&self, terms: f64, degree: usize) -> Result<()> {
        if terms > MAX_TERMS || degree > MAX_DEGREE {
            Err(self.error("expression expands to too many terms"))
        } else {
            Ok(())
        }
    }

    fn end(&self) -> Result<()> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }
}

/// Parses a polynomial over `alphabet`.
pub fn parse_poly(text: &str, alphabet: &Alphabet, field: Field) -> Result<NcPoly> {
    let mut p = Parser::new(text, alphabet, field)?;
    let out = p.poly(0)?;
    p.end()?;
    Ok(out)
}

/// Left-hand generators of a map, in order of appearance.
pub fn map_generators(text: &str) -> Result<Vec<String>> {
    let toks = lex(text)?;
    let mut names = Vec::new();
    let mut expect_name = true;
    let mut depth = 0usize;
    for (i, t) in toks.iter().enumerate() {
        match &t.tok {
            Tok::LParen => depth += 1,
            Tok::RParen => depth = depth.saturating_sub(1),
            Tok::Semi if depth == 0 => expect_name = true,
            Tok::Ident(s) if expect_name && toks.get(i + 1).map(|n| &n.tok) == Some(&Tok::Arrow) => {
                names.push(s.clone());
                expect_name = false;
            }
            _ => {}
        }
    }
    Ok(names)
}

/// Parses `x -> ...; y -> ...` naming every generator of `alphabet`
/// exactly once.
pub fn parse_map(text: &str, alphabet: &Alphabet, field: Field) -> Result<Endomorphism> {
    let mut p = Parser::new(text, alphabet, field)?;
    let mut images: Vec<Option<NcPoly>> = vec![None; alphabet.len()];
    loop {
        let (l, c) = p.here();
        let Tok::Ident(name) = p.peek().clone() else {
            return Err(p.unexpected("generator"));
        };
        let idx = alphabet.index_of(&name).ok_or_else(|| Error::UnknownGenerator(name.clone()))?;
        p.bump();
        p.expect(Tok::Arrow, "`->`")?;
        let image = p.poly(0)?;
        if images[idx].replace(image).is_some() {
            return Err(syntax(l, c, format!("generator `{name}` assigned twice")));
        }
        if *p.peek() == Tok::Semi {
            p.bump();
        }
        if *p.peek() == Tok::End {
            break;
        }
    }
    let (l, c) = p.here();
    let mut out = Vec::with_capacity(images.len());
    for (i, img) in images.into_iter().enumerate() {
        out.push(img.ok_or_else(|| syntax(l, c, format!("no image for generator `{}`", alphabet.name(i))))?);
    }
    Endomorphism::new(alphabet, field, out)
}

/// Parses an operator in `zl`, `zr`.
pub fn parse_biop(text: &str, field: Field) -> Result<BiOpPoly> {
    let alphabet = Alphabet::new(["zl", "zr"]).expect("valid");
    let p = parse_poly(text, &alphabet, field)?;
    BiOpPoly::from_terms(
        field,
        p.terms()
            .map(|(w, c)| (BiMono::new(w.count(0) as u32, w.count(1) as u32), c.clone())),
    )
}

/// Inverse of [`parse_map`].
pub fn print_map(e: &Endomorphism) -> String {
    e.to_string()
}
