//! Nonnegative exact rationals extended by a single infinity.
//!
//! `XReal` is the residue type for the bases `[0,∞]`, `[0,∞)` and `ℕ₀∪{∞}`.
//! Rationals are stored reduced with a positive denominator (guaranteed by
//! `BigRational`). Conventions: `∞ + a = ∞`, `a·∞ = ∞` for `a > 0`, and
//! `0·∞ = 0` so that zero stays absorbing.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum XReal {
    Fin(BigRational),
    Inf,
}

impl XReal {
    pub fn zero() -> Self {
        XReal::Fin(BigRational::zero())
    }

    pub fn one() -> Self {
        XReal::Fin(BigRational::one())
    }

    /// Builds `num/den`; rejects negative values and zero denominators.
    pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        Self::from_rational(BigRational::new(num.into(), den))
    }

    pub fn from_rational(r: BigRational) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::Domain(format!("negative value {r} is not an extended nonnegative real")));
        }
        Ok(XReal::Fin(r))
    }

    pub fn int(n: u64) -> Self {
        XReal::Fin(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, XReal::Fin(r) if r.is_zero())
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, XReal::Inf)
    }

    pub fn is_integer(&self) -> bool {
        match self {
            XReal::Fin(r) => r.is_integer(),
            XReal::Inf => true,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            XReal::Fin(r) => Some(r),
            XReal::Inf => None,
        }
    }

    pub fn add(&self, other: &XReal) -> XReal {
        match (self, other) {
            (XReal::Fin(a), XReal::Fin(b)) => XReal::Fin(a + b),
            _ => XReal::Inf,
        }
    }

    pub fn mul(&self, other: &XReal) -> XReal {
        match (self, other) {
            (XReal::Fin(a), XReal::Fin(b)) => XReal::Fin(a * b),
            (x, y) if x.is_zero() || y.is_zero() => XReal::zero(),
            _ => XReal::Inf,
        }
    }

    /// Exact quotient of finite values; the divisor must be positive.
    pub fn div(&self, other: &XReal) -> Result<XReal> {
        match (self, other) {
            (XReal::Fin(_), XReal::Fin(b)) if b.is_zero() => Err(Error::Domain("division by zero".into())),
            (XReal::Fin(a), XReal::Fin(b)) => Ok(XReal::Fin(a / b)),
            _ => Err(Error::Domain("division involving infinity".into())),
        }
    }

    /// `self - other` for `self >= other`. `∞ - finite = ∞`; `∞ - ∞` is undefined.
    pub fn checked_sub(&self, other: &XReal) -> Result<XReal> {
        match (self, other) {
            (XReal::Fin(a), XReal::Fin(b)) if a >= b => Ok(XReal::Fin(a - b)),
            (XReal::Inf, XReal::Fin(_)) => Ok(XReal::Inf),
            (XReal::Inf, XReal::Inf) => Err(Error::Domain("∞ - ∞ is undefined".into())),
            _ => Err(Error::Domain(format!("{self} - {other} would be negative"))),
        }
    }

    /// Multiplicative inverse of a finite positive value.
    pub fn recip(&self) -> Result<XReal> {
        XReal::one().div(self)
    }
}

impl Add for &XReal {
    type Output = XReal;
    fn add(self, rhs: &XReal) -> XReal {
        XReal::add(self, rhs)
    }
}

impl Mul for &XReal {
    type Output = XReal;
    fn mul(self, rhs: &XReal) -> XReal {
        XReal::mul(self, rhs)
    }
}

impl fmt::Display for XReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XReal::Inf => f.write_str("inf"),
            XReal::Fin(r) if r.is_integer() => write!(f, "{}", r.numer()),
            XReal::Fin(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl FromStr for XReal {
    type Err = Error;

    /// Accepts `inf`, `p` or `p/q` with nonnegative integers and `q > 0`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "inf" {
            return Ok(XReal::Inf);
        }
        let digits = |t: &str, pos: usize| -> Result<BigInt> {
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::parse(pos, format!("expected a nonnegative integer, found {t:?}")));
            }
            Ok(t.parse::<BigInt>().expect("digits parse"))
        };
        match s.split_once('/') {
            None => Ok(XReal::Fin(BigRational::from_integer(digits(s, 0)?))),
            Some((p, q)) => {
                let num = digits(p, 0)?;
                let den = digits(q, p.len() + 1)?;
                if den.is_zero() {
                    return Err(Error::parse(p.len() + 1, "denominator must be positive"));
                }
                Ok(XReal::Fin(BigRational::new(num, den)))
            }
        }
    }
}

impl PartialEq<u64> for XReal {
    fn eq(&self, other: &u64) -> bool {
        *self == XReal::int(*other)
    }
}

impl PartialOrd<u64> for XReal {
    fn partial_cmp(&self, other: &u64) -> Option<Ordering> {
        Some(self.cmp(&XReal::int(*other)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x(s: &str) -> XReal {
        s.parse().unwrap()
    }

    #[test]
    fn addition_examples() {
        assert_eq!(x("1/4").add(&x("1/2")), x("3/4"));
        assert_eq!(XReal::Inf.add(&x("7/3")), XReal::Inf);
        assert_eq!(x("0").add(&x("0")), x("0"));
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(x("3/4").mul(&x("2")), x("3/2"));
        assert_eq!(XReal::Inf.mul(&x("1/2")), XReal::Inf);
        assert_eq!(x("0").mul(&XReal::Inf), x("0"));
        assert_eq!(XReal::Inf.mul(&x("0")), x("0"));
    }

    #[test]
    fn division_examples() {
        assert_eq!(x("3/4").div(&x("1/2")).unwrap(), x("3/2"));
        assert_eq!(x("5/7").div(&x("5/7")).unwrap(), x("1"));
        assert_eq!(x("1").div(&x("3")).unwrap(), x("1/3"));
        assert!(x("1").div(&x("0")).is_err());
        assert!(XReal::Inf.div(&x("2")).is_err());
        assert!(x("2").div(&XReal::Inf).is_err());
    }

    #[test]
    fn literals_are_reduced() {
        assert_eq!(x("6/8").to_string(), "3/4");
        assert_eq!(x("4/2").to_string(), "2");
        assert_eq!(x("inf").to_string(), "inf");
        assert!("-1".parse::<XReal>().is_err());
        assert!("1/0".parse::<XReal>().is_err());
        assert!("1/".parse::<XReal>().is_err());
    }

    #[test]
    fn order_puts_infinity_last() {
        assert!(x("1/3") < x("1/2"));
        assert!(x("1000000") < XReal::Inf);
    }

    #[test]
    fn subtraction() {
        assert_eq!(x("3/4").checked_sub(&x("1/4")).unwrap(), x("1/2"));
        assert_eq!(XReal::Inf.checked_sub(&x("1")).unwrap(), XReal::Inf);
        assert!(XReal::Inf.checked_sub(&XReal::Inf).is_err());
        assert!(x("1/4").checked_sub(&x("3/4")).is_err());
    }

    fn arb_xreal() -> impl Strategy<Value = XReal> {
        prop_oneof![
            9 => (0u32..20, 1u32..8).prop_map(|(p, q)| XReal::ratio(p, q).unwrap()),
            1 => Just(XReal::Inf),
        ]
    }

    proptest! {
        #[test]
        fn add_mul_commute_and_associate(a in arb_xreal(), b in arb_xreal(), c in arb_xreal()) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn distributive_with_infinity(a in arb_xreal(), b in arb_xreal(), c in arb_xreal()) {
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }

        #[test]
        fn order_compatible(a in arb_xreal(), b in arb_xreal(), c in arb_xreal()) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(lo.add(&c) <= hi.add(&c));
            prop_assert!(lo.mul(&c) <= hi.mul(&c));
        }

        #[test]
        fn display_roundtrip(a in arb_xreal()) {
            prop_assert_eq!(a.to_string().parse::<XReal>().unwrap(), a);
        }
    }
}
