use std::fmt;

use num_bigint::BigInt;

use crate::xreal::XReal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// An element of some described structure. Values carry no descriptor of their
/// own; every operation takes the `Structure` they belong to.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    /// The adjoined zero of an insertion, mixed insertion or double.
    Zero,
    /// The adjoined greatest element of a bar-extension.
    Top,
    /// Element of `N0` or `Z`.
    Int(BigInt),
    /// Element of `Rc`, `Ro` or `Nbar0`.
    Real(XReal),
    Pair(Box<Value>, Box<Value>),
    Signed(Sign, Box<Value>),
}

impl Value {
    pub fn int(n: impl Into<BigInt>) -> Value {
        Value::Int(n.into())
    }

    pub fn real(x: XReal) -> Value {
        Value::Real(x)
    }

    /// `p/q` as a residue value; panics on a negative value or zero denominator,
    /// so reserve it for literals known to be valid.
    pub fn ratio(p: i64, q: i64) -> Value {
        Value::Real(XReal::ratio(p, q).expect("nonnegative ratio"))
    }

    pub fn inf() -> Value {
        Value::Real(XReal::Inf)
    }

    pub fn pair(a: Value, b: Value) -> Value {
        Value::Pair(Box::new(a), Box::new(b))
    }

    /// `(level, p/q)` in an 𝕊/𝕆/ℙ-shaped structure.
    pub fn lv(level: i64, p: i64, q: i64) -> Value {
        Value::pair(Value::int(level), Value::ratio(p, q))
    }

    pub fn signed(sign: Sign, magnitude: Value) -> Value {
        Value::Signed(sign, Box::new(magnitude))
    }

    pub fn as_pair(&self) -> Option<(&Value, &Value)> {
        match self {
            Value::Pair(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Value::Int(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_real(&self) -> Option<&XReal> {
        match self {
            Value::Real(x) => Some(x),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Zero => f.write_str("0"),
            Value::Top => f.write_str("top"),
            Value::Int(n) => write!(f, "{n}"),
            Value::Real(x) => write!(f, "{x}"),
            Value::Pair(a, b) => write!(f, "({a},{b})"),
            Value::Signed(Sign::Plus, m) => write!(f, "{m}"),
            Value::Signed(Sign::Minus, m) => write!(f, "-{m}"),
        }
    }
}
