//! Small expression language over element literals.
//!
//! ```text
//! expr    := product ('+' product)*
//! product := unary ('*' unary)*
//! unary   := '-' unary | '+' unary | primary
//! primary := literal | '(' expr ')' | call
//! call    := inv(expr) | neg(expr) | cmp(expr, expr)
//!          | sum(args) | sup(args)
//! args    := expr (',' expr)* [';' tail] | ';' tail
//! tail    := repeat(expr) | ramp(start, step, residue) | rramp(level, start, step)
//! ```
//!
//! A parenthesised group containing a top-level comma is an element literal,
//! otherwise it is grouping.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::structure::{SeqGen, Structure, Tail, Value};
use crate::xreal::XReal;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evaluated {
    Value(Value),
    Order(Ordering),
}

impl fmt::Display for Evaluated {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evaluated::Value(v) => write!(f, "{v}"),
            Evaluated::Order(Ordering::Less) => f.write_str("lt"),
            Evaluated::Order(Ordering::Equal) => f.write_str("eq"),
            Evaluated::Order(Ordering::Greater) => f.write_str("gt"),
        }
    }
}

pub fn eval(d: &Structure, src: &str) -> Result<Evaluated> {
    let mut p = Parser { d, src, i: 0 };
    let out = p.expr()?;
    p.ws();
    if p.i < src.len() {
        return Err(Error::parse(p.i, "unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    d: &'a Structure,
    src: &'a str,
    i: usize,
}

impl Parser<'_> {
    fn ws(&mut self) {
        while self.src[self.i..].starts_with(|c: char| c.is_ascii_whitespace()) {
            self.i += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.ws();
        if self.src[self.i..].starts_with(c) {
            self.i += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::parse(self.i, format!("expected '{c}'")))
        }
    }

    fn value(&mut self) -> Result<Value> {
        let at = self.i;
        match self.expr()? {
            Evaluated::Value(v) => Ok(v),
            Evaluated::Order(_) => Err(Error::parse(at, "cmp() yields an ordering, not an element")),
        }
    }

    fn expr(&mut self) -> Result<Evaluated> {
        let first = self.product()?;
        if !self.peek_is('+') {
            return Ok(first);
        }
        let Evaluated::Value(mut acc) = first else {
            return Err(Error::parse(self.i, "cannot add an ordering"));
        };
        while self.eat('+') {
            let rhs = self.unary_value()?;
            let rhs = self.product_rest(rhs)?;
            acc = self.d.add(&acc, &rhs)?;
        }
        Ok(Evaluated::Value(acc))
    }

    fn peek_is(&mut self, c: char) -> bool {
        self.ws();
        self.src[self.i..].starts_with(c)
    }

    fn product(&mut self) -> Result<Evaluated> {
        let first = self.unary()?;
        if !self.peek_is('*') {
            return Ok(first);
        }
        let Evaluated::Value(v) = first else {
            return Err(Error::parse(self.i, "cannot multiply an ordering"));
        };
        Ok(Evaluated::Value(self.product_rest(v)?))
    }

    fn product_rest(&mut self, mut acc: Value) -> Result<Value> {
        while self.eat('*') {
            let rhs = self.unary_value()?;
            acc = self.d.mul(&acc, &rhs)?;
        }
        Ok(acc)
    }

    fn unary_value(&mut self) -> Result<Value> {
        let at = self.i;
        match self.unary()? {
            Evaluated::Value(v) => Ok(v),
            Evaluated::Order(_) => Err(Error::parse(at, "cmp() yields an ordering, not an element")),
        }
    }

    fn unary(&mut self) -> Result<Evaluated> {
        self.ws();
        let rest = &self.src[self.i..];
        if rest.starts_with('-') && !rest[1..].starts_with(|c: char| c.is_ascii_digit()) {
            self.i += 1;
            let v = self.unary_value()?;
            return Ok(Evaluated::Value(self.d.neg(&v)?));
        }
        if rest.starts_with('+') {
            self.i += 1;
            return self.unary();
        }
        self.primary()
    }

    /// Byte index of the parenthesis closing the one at `open`, and whether a comma
    /// occurs at depth one in between.
    fn matching(&self, open: usize) -> Result<(usize, bool)> {
        let mut depth = 0usize;
        let mut comma = false;
        for (k, c) in self.src[open..].char_indices() {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok((open + k, comma));
                    }
                }
                ',' if depth == 1 => comma = true,
                _ => {}
            }
        }
        Err(Error::parse(open, "unbalanced parenthesis"))
    }

    fn literal(&mut self, start: usize, end: usize) -> Result<Value> {
        self.i = end;
        self.d.parse_value(&self.src[start..end]).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::parse(start + pos, msg),
            other => other,
        })
    }

    fn primary(&mut self) -> Result<Evaluated> {
        self.ws();
        let start = self.i;
        let rest = &self.src[start..];
        if rest.starts_with('(') {
            let (close, comma) = self.matching(start)?;
            if comma {
                return Ok(Evaluated::Value(self.literal(start, close + 1)?));
            }
            self.i += 1;
            let inner = self.expr()?;
            self.expect(')')?;
            return Ok(inner);
        }
        let len = rest
            .char_indices()
            .find(|&(k, c)| !(c.is_ascii_alphanumeric() || c == '/' || (k == 0 && c == '-')))
            .map_or(rest.len(), |(k, _)| k);
        if len == 0 {
            return Err(Error::parse(start, "expected an element"));
        }
        let word = &rest[..len];
        self.i = start + len;
        if matches!(word, "inv" | "neg" | "cmp" | "sum" | "sup") && self.peek_is('(') {
            return self.call(word);
        }
        Ok(Evaluated::Value(self.literal(start, start + len)?))
    }

    fn call(&mut self, name: &str) -> Result<Evaluated> {
        self.expect('(')?;
        let out = match name {
            "inv" => Evaluated::Value(self.d.inv(&self.value()?)?),
            "neg" => Evaluated::Value(self.d.neg(&self.value()?)?),
            "cmp" => {
                let x = self.value()?;
                self.expect(',')?;
                let y = self.value()?;
                Evaluated::Order(self.d.cmp(&x, &y)?)
            }
            _ => {
                let seq = self.seq_args()?;
                let v = if name == "sum" { self.d.sum_sequence(&seq)? } else { self.d.sup_sequence(&seq)? };
                self.expect(')')?;
                return Ok(Evaluated::Value(v));
            }
        };
        self.expect(')')?;
        Ok(out)
    }

    fn seq_args(&mut self) -> Result<SeqGen> {
        let mut head = Vec::new();
        if !self.peek_is(';') {
            head.push(self.value()?);
            while self.eat(',') {
                head.push(self.value()?);
            }
        }
        let tail = if self.eat(';') { self.tail()? } else { Tail::None };
        Ok(SeqGen { head, tail })
    }

    fn word(&mut self) -> &str {
        self.ws();
        let start = self.i;
        let rest = &self.src[start..];
        let len = rest
            .char_indices()
            .find(|&(k, c)| !(c.is_ascii_alphanumeric() || c == '/' || (k == 0 && c == '-')))
            .map_or(rest.len(), |(k, _)| k);
        self.i += len;
        &self.src[start..start + len]
    }

    fn int_arg(&mut self) -> Result<BigInt> {
        let at = self.i;
        self.word().parse().map_err(|_| Error::parse(at, "expected an integer"))
    }

    fn real_arg(&mut self) -> Result<XReal> {
        let at = self.i;
        self.word().parse::<XReal>().map_err(|_| Error::parse(at, "expected a nonnegative rational"))
    }

    fn tail(&mut self) -> Result<Tail> {
        let at = self.i;
        let kind = self.word().to_string();
        self.expect('(')?;
        let parts = self
            .d
            .split()
            .map(|(l, r)| (l.clone(), r.clone()))
            .ok_or_else(|| Error::Shape(format!("ramps need an insertion, not {}", self.d)));
        let tail = match kind.as_str() {
            "repeat" => Tail::Repeat(self.value()?),
            "ramp" => {
                let start = self.int_arg()?;
                self.expect(',')?;
                let step = self.int_arg()?;
                self.expect(',')?;
                let s = self.i;
                let (close, _) = self.matching_arg()?;
                let text = self.src[s..close].trim().to_string();
                self.i = close;
                let residue = parts?.1.parse_value(&text)?;
                Tail::LevelRamp { start, step, residue }
            }
            "rramp" => {
                let s = self.i;
                let (comma, _) = self.matching_arg()?;
                let text = self.src[s..comma].trim().to_string();
                self.i = comma;
                let level = parts?.0.parse_value(&text)?;
                self.expect(',')?;
                let start = self.real_arg()?;
                self.expect(',')?;
                let step = self.real_arg()?;
                Tail::ResidueRamp { level, start, step }
            }
            _ => return Err(Error::parse(at, format!("unknown tail {kind:?}; expected repeat, ramp or rramp"))),
        };
        self.expect(')')?;
        Ok(tail)
    }

    /// End of the current call argument: the next depth-zero ',' or ')'.
    fn matching_arg(&self) -> Result<(usize, char)> {
        let mut depth = 0usize;
        for (k, c) in self.src[self.i..].char_indices() {
            match c {
                '(' => depth += 1,
                ')' if depth == 0 => return Ok((self.i + k, c)),
                ')' => depth -= 1,
                ',' if depth == 0 => return Ok((self.i + k, c)),
                _ => {}
            }
        }
        Err(Error::parse(self.i, "unterminated argument"))
    }
}
