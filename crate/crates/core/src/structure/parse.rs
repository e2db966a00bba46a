use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;

use super::desc::{Base, MixedSpec, Structure};
use super::value::{Sign, Value};
use crate::error::{Error, Result};
use crate::xreal::XReal;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    LParen,
    RParen,
    Comma,
    Semi,
    Colon,
    DotDot,
    Op { ins: bool, bar: bool },
}

fn lex_struct(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let rest = &src[i..];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let op = [("b\\/", false, true), ("b/\\", true, true), ("\\/", false, false), ("/\\", true, false)]
            .into_iter()
            .find(|(s, ..)| rest.starts_with(s));
        if let Some((s, ins, bar)) = op {
            out.push((i, Tok::Op { ins, bar }));
            i += s.len();
            continue;
        }
        let single = match c {
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b',' => Some(Tok::Comma),
            b';' => Some(Tok::Semi),
            b':' => Some(Tok::Colon),
            _ => None,
        };
        if let Some(t) = single {
            out.push((i, t));
            i += 1;
        } else if rest.starts_with("..") {
            out.push((i, Tok::DotDot));
            i += 2;
        } else if c.is_ascii_digit() || (c == b'-' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            let start = i;
            i += 1;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Int(src[start..i].parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else {
            return Err(Error::parse(i, format!("unexpected character {:?}", rest.chars().next().unwrap())));
        }
    }
    Ok(out)
}

struct StructParser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl StructParser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let at = self.offset();
        match self.next() {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(Error::parse(at, format!("expected {what}, found {t:?}"))),
            None => Err(Error::parse(at, format!("expected {what}, found end of input"))),
        }
    }

    fn int(&mut self) -> Result<BigInt> {
        let at = self.offset();
        match self.next() {
            Some(Tok::Int(n)) => Ok(n),
            _ => Err(Error::parse(at, "expected an integer")),
        }
    }

    fn expr(&mut self) -> Result<Structure> {
        let left = self.operand()?;
        let Some(&Tok::Op { ins, bar }) = self.peek() else { return Ok(left) };
        self.pos += 1;
        let right = self.operand()?;
        if let Some(Tok::Op { .. }) = self.peek() {
            return Err(Error::parse(self.offset(), "parentheses required: insertion operators do not chain"));
        }
        if ins {
            Structure::ins(left, right, bar)
        } else {
            Structure::sins(left, right, bar)
        }
    }

    fn operand(&mut self) -> Result<Structure> {
        let at = self.offset();
        match self.next() {
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => self.named(&name, at),
            Some(t) => Err(Error::parse(at, format!("expected a structure, found {t:?}"))),
            None => Err(Error::parse(at, "expected a structure, found end of input")),
        }
    }

    fn nesting(&mut self) -> Result<usize> {
        self.expect(Tok::LParen, "'('")?;
        let at = self.offset();
        let n = self.int()?;
        self.expect(Tok::RParen, "')'")?;
        match usize::try_from(&n) {
            Ok(n) if (1..=64).contains(&n) => Ok(n),
            _ => Err(Error::parse(at, "nesting depth must be between 1 and 64")),
        }
    }

    fn named(&mut self, name: &str, at: usize) -> Result<Structure> {
        if let Some(b) = base_named(name) {
            return Ok(Structure::base(b));
        }
        Ok(match name {
            "S" => Structure::s(),
            "O" => Structure::o(),
            "P" => Structure::p(),
            "Obar" => Structure::obar(),
            "Sbar" => Structure::sbar(),
            "Sn" => Structure::sn(self.nesting()?),
            "On" => Structure::on(self.nesting()?),
            "Pn" => Structure::pn(self.nesting()?),
            "double" => {
                self.expect(Tok::LParen, "'('")?;
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Structure::double(inner)?
            }
            "mixed" => self.mixed()?,
            _ => return Err(Error::parse(at, format!("unknown structure name {name:?}"))),
        })
    }

    fn mixed(&mut self) -> Result<Structure> {
        self.expect(Tok::LParen, "'('")?;
        let at = self.offset();
        let level = match self.next() {
            Some(Tok::Ident(n)) => base_named(&n).filter(|b| b.is_integral()),
            _ => None,
        }
        .ok_or_else(|| Error::parse(at, "mixed insertion levels must be N0 or Z"))?;
        self.expect(Tok::Semi, "';'")?;
        let lo = if let Some(Tok::Int(_)) = self.peek() { Some(self.int()?) } else { None };
        self.expect(Tok::DotDot, "'..'")?;
        let hi = if let Some(Tok::Int(_)) = self.peek() { Some(self.int()?) } else { None };
        let mut fibers = BTreeMap::new();
        let mut default = None;
        while self.peek() == Some(&Tok::Semi) {
            self.pos += 1;
            if self.peek() == Some(&Tok::Ident("default".into())) {
                self.pos += 1;
                self.expect(Tok::Colon, "':'")?;
                default = Some(self.expr()?);
                continue;
            }
            loop {
                let at = self.offset();
                let lvl = self.int()?;
                self.expect(Tok::Colon, "':'")?;
                let fiber = self.expr()?;
                if fibers.insert(lvl.clone(), fiber).is_some() {
                    return Err(Error::parse(at, format!("level {lvl} listed twice")));
                }
                if self.peek() != Some(&Tok::Comma) {
                    break;
                }
                self.pos += 1;
            }
        }
        self.expect(Tok::RParen, "')'")?;
        Structure::mixed(MixedSpec { level, lo, hi, fibers, default })
    }
}

fn base_named(name: &str) -> Option<Base> {
    Some(match name {
        "N0" => Base::N0,
        "Z" => Base::Z,
        "Rc" => Base::Rc,
        "Ro" => Base::Ro,
        "Nbar0" | "NBar0" => Base::NBar0,
        _ => return None,
    })
}

impl FromStr for Structure {
    type Err = Error;

    fn from_str(src: &str) -> Result<Structure> {
        let toks = lex_struct(src)?;
        let mut p = StructParser { toks, pos: 0, end: src.len() };
        let s = p.expr()?;
        if p.pos < p.toks.len() {
            return Err(Error::parse(p.offset(), "unexpected trailing input"));
        }
        Ok(s)
    }
}

/// Element literal before it is matched against a descriptor.
#[derive(Debug, Clone)]
enum Raw {
    Atom(usize, String),
    Tuple(usize, Vec<Raw>),
    Signed(usize, Sign, Box<Raw>),
}

impl Raw {
    fn pos(&self) -> usize {
        match self {
            Raw::Atom(p, _) | Raw::Tuple(p, _) | Raw::Signed(p, ..) => *p,
        }
    }
}

struct LitParser<'a> {
    src: &'a str,
    i: usize,
}

impl LitParser<'_> {
    fn skip_ws(&mut self) {
        while self.src[self.i..].starts_with(|c: char| c.is_ascii_whitespace()) {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.as_bytes().get(self.i).copied()
    }

    fn raw(&mut self) -> Result<Raw> {
        let at = {
            self.skip_ws();
            self.i
        };
        match self.peek() {
            Some(b'(') => {
                self.i += 1;
                let mut items = vec![self.raw()?];
                loop {
                    match self.peek() {
                        Some(b',') => {
                            self.i += 1;
                            items.push(self.raw()?);
                        }
                        Some(b')') => {
                            self.i += 1;
                            break;
                        }
                        _ => return Err(Error::parse(self.i, "expected ',' or ')'")),
                    }
                }
                Ok(Raw::Tuple(at, items))
            }
            Some(c @ (b'+' | b'-')) if self.src[self.i + 1..].trim_start().starts_with('(') => {
                self.i += 1;
                let sign = if c == b'+' { Sign::Plus } else { Sign::Minus };
                Ok(Raw::Signed(at, sign, Box::new(self.raw()?)))
            }
            Some(b'+') => {
                self.i += 1;
                Ok(Raw::Signed(at, Sign::Plus, Box::new(self.raw()?)))
            }
            Some(_) => {
                let start = self.i;
                let bytes = self.src.as_bytes();
                if bytes[self.i] == b'-' {
                    self.i += 1;
                }
                while self.i < bytes.len() && (bytes[self.i].is_ascii_alphanumeric() || bytes[self.i] == b'/') {
                    self.i += 1;
                }
                if start == self.i || (self.i == start + 1 && bytes[start] == b'-') {
                    return Err(Error::parse(start, "expected a literal"));
                }
                Ok(Raw::Atom(start, self.src[start..self.i].to_string()))
            }
            None => Err(Error::parse(self.i, "expected a literal, found end of input")),
        }
    }
}

fn lex_int(pos: usize, s: &str) -> Result<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(pos, format!("expected an integer, found {s:?}")));
    }
    Ok(s.parse().expect("integer"))
}

fn lex_real(pos: usize, s: &str) -> Result<XReal> {
    s.parse::<XReal>().map_err(|e| match e {
        Error::Parse { pos: p, msg } => Error::parse(pos + p, msg),
        other => other,
    })
}

impl Structure {
    /// Parses an element literal against this descriptor.
    pub fn parse_value(&self, src: &str) -> Result<Value> {
        let mut p = LitParser { src, i: 0 };
        let raw = p.raw()?;
        if p.peek().is_some() {
            return Err(Error::parse(p.i, "unexpected trailing input"));
        }
        let v = self.interpret(&raw)?;
        self.check(&v)?;
        Ok(v)
    }

    fn interpret(&self, raw: &Raw) -> Result<Value> {
        let pos = raw.pos();
        let mismatch = || Error::parse(pos, format!("literal does not match the shape of {self}"));
        match (self, raw) {
            (_, Raw::Atom(_, a)) if a == "top" => {
                if self.is_bar() {
                    Ok(Value::Top)
                } else {
                    Err(Error::parse(pos, format!("{self} has no top")))
                }
            }
            (Structure::Base(Base::N0 | Base::Z), Raw::Atom(p, a)) => Ok(Value::Int(lex_int(*p, a)?)),
            (Structure::Base(_), Raw::Atom(p, a)) => Ok(Value::Real(lex_real(*p, a)?)),
            (Structure::Base(_), _) => Err(mismatch()),
            (_, Raw::Atom(_, a)) if a == "0" => Ok(self.zero()),
            (Structure::SIns { level, residue, .. } | Structure::Ins { level, residue, .. }, Raw::Tuple(p, items)) => {
                let (first, rest) = items.split_first().expect("nonempty tuple");
                if rest.is_empty() {
                    return Err(mismatch());
                }
                let a = level.interpret(first)?;
                let b = if rest.len() == 1 {
                    residue.interpret(&rest[0])?
                } else {
                    residue.interpret(&Raw::Tuple(rest[0].pos(), rest.to_vec()))?
                };
                let v = Value::pair(a, b);
                self.check(&v).map_err(|e| Error::parse(*p, e.to_string()))?;
                Ok(v)
            }
            (Structure::Mixed(spec), Raw::Tuple(p, items)) if items.len() >= 2 => {
                let Raw::Atom(lp, l) = &items[0] else { return Err(mismatch()) };
                let level = lex_int(*lp, l)?;
                let fiber = spec.fiber(&level).map_err(|e| Error::parse(*lp, e.to_string()))?;
                let rest = &items[1..];
                let b = if rest.len() == 1 {
                    fiber.interpret(&rest[0])?
                } else {
                    fiber.interpret(&Raw::Tuple(rest[0].pos(), rest.to_vec()))?
                };
                let v = Value::pair(Value::Int(level), b);
                self.check(&v).map_err(|e| Error::parse(*p, e.to_string()))?;
                Ok(v)
            }
            (Structure::Double(inner), Raw::Signed(_, sign, m)) => Ok(Value::signed(*sign, inner.interpret(m)?)),
            (Structure::Double(inner), Raw::Atom(p, a)) if a.starts_with('-') => {
                Ok(Value::signed(Sign::Minus, inner.interpret(&Raw::Atom(p + 1, a[1..].to_string()))?))
            }
            (Structure::Double(inner), other) => Ok(Value::signed(Sign::Plus, inner.interpret(other)?)),
            _ => Err(mismatch()),
        }
    }

    /// Canonical literal of a value (the inverse of `parse_value`).
    pub fn format_value(&self, v: &Value) -> String {
        v.to_string()
    }
}
