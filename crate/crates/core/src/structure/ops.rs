use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed as _, Zero as _};

use super::desc::{Base, Structure};
use super::value::{Sign, Value};
use crate::error::{Error, Result};
use crate::xreal::XReal;

fn shape(d: &Structure, v: &Value) -> Error {
    Error::Shape(format!("{v} is not an element of {d}"))
}

impl Structure {
    /// Additive identity.
    pub fn zero(&self) -> Value {
        match self {
            Structure::Base(Base::N0 | Base::Z) => Value::int(0),
            Structure::Base(_) => Value::Real(XReal::zero()),
            Structure::SIns { level, residue, .. } => Value::pair(level.zero(), residue.zero()),
            Structure::Ins { .. } | Structure::Mixed(_) | Structure::Double(_) => Value::Zero,
        }
    }

    pub fn is_zero(&self, v: &Value) -> bool {
        match (self, v) {
            (_, Value::Zero) => true,
            (Structure::Base(_), Value::Int(n)) => n.is_zero(),
            (Structure::Base(_), Value::Real(x)) => x.is_zero(),
            (Structure::SIns { level, residue, .. }, Value::Pair(a, b)) => level.is_zero(a) && residue.is_zero(b),
            _ => false,
        }
    }

    /// Multiplicative identity `(0_A, 1_B)` of a semiring.
    pub fn one(&self) -> Result<Value> {
        if !self.is_semiring() {
            return Err(Error::Capability(format!("{self} is not a semiring")));
        }
        Ok(self.one_raw())
    }

    fn one_raw(&self) -> Value {
        match self {
            Structure::Base(Base::N0) => Value::int(1),
            Structure::Base(_) => Value::Real(XReal::one()),
            Structure::Ins { level, residue, .. } => Value::pair(level.zero(), residue.one_raw()),
            _ => unreachable!("one of a non-semiring"),
        }
    }

    /// Validates that `v` is a well-shaped element of this structure.
    pub fn check(&self, v: &Value) -> Result<()> {
        let ok = match (self, v) {
            (Structure::Base(Base::N0), Value::Int(n)) => !n.is_negative(),
            (Structure::Base(Base::Z), Value::Int(_)) => true,
            (Structure::Base(Base::Rc), Value::Real(_)) => true,
            (Structure::Base(Base::Ro), Value::Real(x)) => !x.is_inf(),
            (Structure::Base(Base::NBar0), Value::Real(x)) => x.is_integer(),
            (Structure::SIns { bar, .. } | Structure::Ins { bar, .. }, Value::Top) => *bar,
            (Structure::Ins { .. } | Structure::Mixed(_) | Structure::Double(_), Value::Zero) => true,
            (Structure::SIns { level, residue, .. }, Value::Pair(a, b)) => {
                level.check(a)?;
                residue.check(b)?;
                true
            }
            (Structure::Ins { level, residue, .. }, Value::Pair(a, b)) => {
                level.check(a)?;
                residue.check(b)?;
                if residue.is_zero(b) {
                    return Err(Error::Shape(format!("{v}: the residue of an insertion element cannot be zero")));
                }
                true
            }
            (Structure::Mixed(spec), Value::Pair(a, b)) => {
                let Value::Int(l) = &**a else { return Err(shape(self, v)) };
                let fiber = spec.fiber(l)?;
                fiber.check(b)?;
                if fiber.is_zero(b) {
                    return Err(Error::Shape(format!("{v}: zero residue in a mixed insertion")));
                }
                true
            }
            (Structure::Double(inner), Value::Signed(_, m)) => {
                inner.check(m)?;
                if inner.is_zero(m) {
                    return Err(Error::Shape("signed zero is not an element of a double".into()));
                }
                true
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(shape(self, v))
        }
    }

    pub fn cmp(&self, x: &Value, y: &Value) -> Result<Ordering> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.cmp_raw(x, y))
    }

    pub fn add(&self, x: &Value, y: &Value) -> Result<Value> {
        self.check(x)?;
        self.check(y)?;
        if let Structure::Double(inner) = self {
            return double_add(inner, x, y);
        }
        if !self.is_semigroup() && !self.is_group() {
            return Err(Error::Capability(format!("{self} has no addition")));
        }
        Ok(self.add_raw(x, y))
    }

    pub fn mul(&self, x: &Value, y: &Value) -> Result<Value> {
        if !self.is_semiring() {
            return Err(Error::Capability(format!("{self} is not a semiring")));
        }
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul_raw(x, y))
    }

    pub fn inv(&self, x: &Value) -> Result<Value> {
        if !self.is_semifield() {
            return Err(Error::Capability(format!("{self} is not a semifield")));
        }
        self.check(x)?;
        self.inv_raw(x)
    }

    /// Negation in a double.
    pub fn neg(&self, x: &Value) -> Result<Value> {
        let Structure::Double(_) = self else {
            return Err(Error::Capability(format!("negation needs a double, got {self}")));
        };
        self.check(x)?;
        Ok(match x {
            Value::Signed(s, m) => Value::Signed(s.flip(), m.clone()),
            other => other.clone(),
        })
    }

    /// The level 𝔏(x).
    pub fn level(&self, x: &Value) -> Result<Value> {
        self.check(x)?;
        match x {
            Value::Zero => Err(Error::Domain("the level of 0 is undefined".into())),
            Value::Top => Err(Error::Domain("the level of top is undefined".into())),
            Value::Pair(a, _) => Ok((**a).clone()),
            _ => Err(Error::Capability(format!("elements of {self} have no level"))),
        }
    }

    /// The residue ℜ(x), with ℜ(0) = 0.
    pub fn residue(&self, x: &Value) -> Result<Value> {
        self.check(x)?;
        match x {
            Value::Zero => Ok(Value::Zero),
            Value::Top => Err(Error::Domain("the residue of top is undefined".into())),
            Value::Pair(_, b) => Ok((**b).clone()),
            _ => Err(Error::Capability(format!("elements of {self} have no residue"))),
        }
    }

    pub(crate) fn cmp_raw(&self, x: &Value, y: &Value) -> Ordering {
        match (x, y) {
            (Value::Top, Value::Top) | (Value::Zero, Value::Zero) => return Ordering::Equal,
            (Value::Top, _) => return Ordering::Greater,
            (_, Value::Top) => return Ordering::Less,
            _ => {}
        }
        match self {
            Structure::Base(_) => match (x, y) {
                (Value::Int(a), Value::Int(b)) => a.cmp(b),
                (Value::Real(a), Value::Real(b)) => a.cmp(b),
                _ => unreachable!("checked base values"),
            },
            Structure::Double(inner) => {
                let key = |v: &Value| match v {
                    Value::Zero => 0,
                    Value::Signed(Sign::Plus, _) => 1,
                    _ => -1,
                };
                match key(x).cmp(&key(y)) {
                    Ordering::Equal => match (x, y) {
                        (Value::Signed(Sign::Plus, a), Value::Signed(_, b)) => inner.cmp_raw(a, b),
                        (Value::Signed(Sign::Minus, a), Value::Signed(_, b)) => inner.cmp_raw(b, a),
                        _ => Ordering::Equal,
                    },
                    o => o,
                }
            }
            _ => match (x, y) {
                (Value::Zero, _) => Ordering::Less,
                (_, Value::Zero) => Ordering::Greater,
                (Value::Pair(g, s), Value::Pair(h, t)) => {
                    let by_level = self.level_structure_cmp(g, h);
                    by_level.then_with(|| self.residue_structure_at(g).cmp_raw(s, t))
                }
                _ => unreachable!("checked pair values"),
            },
        }
    }

    fn level_structure_cmp(&self, g: &Value, h: &Value) -> Ordering {
        match self {
            Structure::SIns { level, .. } | Structure::Ins { level, .. } => level.cmp_raw(g, h),
            Structure::Mixed(_) => g.as_int().cmp(&h.as_int()),
            _ => unreachable!(),
        }
    }

    fn residue_structure_at(&self, g: &Value) -> &Structure {
        match self {
            Structure::SIns { residue, .. } | Structure::Ins { residue, .. } => residue,
            Structure::Mixed(spec) => spec.fiber(g.as_int().expect("checked level")).expect("checked fiber"),
            _ => unreachable!(),
        }
    }

    pub(crate) fn add_raw(&self, x: &Value, y: &Value) -> Value {
        match (x, y) {
            (Value::Top, _) | (_, Value::Top) => return Value::Top,
            (Value::Zero, v) | (v, Value::Zero) => return v.clone(),
            _ => {}
        }
        match self {
            Structure::Base(_) => match (x, y) {
                (Value::Int(a), Value::Int(b)) => Value::Int(a + b),
                (Value::Real(a), Value::Real(b)) => Value::Real(a.add(b)),
                _ => unreachable!("checked base values"),
            },
            Structure::Double(inner) => double_add(inner, x, y).expect("checked double values"),
            _ => {
                let (Value::Pair(g, s), Value::Pair(h, t)) = (x, y) else { unreachable!("checked pair values") };
                match self.level_structure_cmp(g, h) {
                    Ordering::Greater => x.clone(),
                    Ordering::Less => y.clone(),
                    Ordering::Equal => {
                        let r = self.residue_structure_at(g).add_raw(s, t);
                        Value::Pair(g.clone(), Box::new(r))
                    }
                }
            }
        }
    }

    pub(crate) fn mul_raw(&self, x: &Value, y: &Value) -> Value {
        match self {
            Structure::Base(_) => match (x, y) {
                (Value::Int(a), Value::Int(b)) => Value::Int(a * b),
                (Value::Real(a), Value::Real(b)) => Value::Real(a.mul(b)),
                _ => unreachable!("checked base values"),
            },
            Structure::Ins { level, residue, .. } => match (x, y) {
                (Value::Zero, _) | (_, Value::Zero) => Value::Zero,
                (Value::Top, _) | (_, Value::Top) => Value::Top,
                (Value::Pair(g, s), Value::Pair(h, t)) => Value::pair(level.add_raw(g, h), residue.mul_raw(s, t)),
                _ => unreachable!("checked pair values"),
            },
            _ => unreachable!("multiplication on a non-semiring"),
        }
    }

    fn inv_raw(&self, x: &Value) -> Result<Value> {
        match (self, x) {
            (Structure::Base(Base::Ro), Value::Real(r)) => Ok(Value::Real(r.recip()?)),
            (Structure::Ins { residue, .. }, Value::Pair(g, s)) => {
                let Value::Int(g) = &**g else { unreachable!("semifield levels are integers") };
                Ok(Value::pair(Value::Int(-g), residue.inv_raw(s)?))
            }
            (_, Value::Zero) => Err(Error::Domain("0 has no multiplicative inverse".into())),
            _ => Err(shape(self, x)),
        }
    }

    /// Successor of a level in an integer level set.
    pub(crate) fn successor(&self, g: &Value) -> Option<Value> {
        match (self, g) {
            (Structure::Base(Base::N0 | Base::Z), Value::Int(n)) => Some(Value::Int(n + BigInt::one())),
            (Structure::Base(Base::NBar0), Value::Real(XReal::Fin(r))) => {
                Some(Value::Real(XReal::Fin(r + num_rational::BigRational::one())))
            }
            _ => None,
        }
    }

    /// Least element strictly above zero, when there is one.
    pub(crate) fn least_positive(&self) -> Option<Value> {
        match self {
            Structure::Base(Base::N0) => Some(Value::int(1)),
            Structure::Base(Base::NBar0) => Some(Value::Real(XReal::one())),
            Structure::SIns { level, residue, .. } | Structure::Ins { level, residue, .. } => match **level {
                Structure::Base(Base::N0 | Base::NBar0) => Some(Value::pair(level.zero(), residue.least_positive()?)),
                _ => None,
            },
            _ => None,
        }
    }

    /// Greatest element, when there is one.
    pub(crate) fn top(&self) -> Option<Value> {
        match self {
            Structure::Base(Base::Rc | Base::NBar0) => Some(Value::inf()),
            Structure::SIns { bar: true, .. } | Structure::Ins { bar: true, .. } => Some(Value::Top),
            Structure::SIns { level, residue, .. } | Structure::Ins { level, residue, .. } => {
                Some(Value::pair(level.top()?, residue.top()?))
            }
            _ => None,
        }
    }
}

/// The artificial addition of a double: same signs add magnitudes, opposite signs
/// follow level dominance and subtract residues at equal levels.
fn double_add(inner: &Structure, x: &Value, y: &Value) -> Result<Value> {
    let supported = matches!(
        inner,
        Structure::Ins { level, residue, bar: false }
            if matches!(**level, Structure::Base(Base::N0 | Base::Z))
                && matches!(**residue, Structure::Base(Base::Rc | Base::Ro))
    );
    if !supported {
        return Err(Error::Capability(format!("double addition is only defined over S or O, not {inner}")));
    }
    let (Value::Signed(sx, mx), Value::Signed(sy, my)) = (x, y) else {
        return Ok(match (x, y) {
            (Value::Zero, v) | (v, Value::Zero) => v.clone(),
            _ => unreachable!("checked double values"),
        });
    };
    if sx == sy {
        return Ok(Value::signed(*sx, inner.add_raw(mx, my)));
    }
    let (Value::Pair(i, s), Value::Pair(j, t)) = (&**mx, &**my) else { unreachable!("checked magnitudes") };
    let (s, t) = (s.as_real().expect("real residue"), t.as_real().expect("real residue"));
    Ok(match i.as_int().cmp(&j.as_int()) {
        Ordering::Greater => x.clone(),
        Ordering::Less => y.clone(),
        Ordering::Equal => match s.cmp(t) {
            Ordering::Equal => Value::Zero,
            Ordering::Greater => Value::signed(*sx, Value::pair((**i).clone(), Value::Real(s.checked_sub(t)?))),
            Ordering::Less => Value::signed(*sy, Value::pair((**i).clone(), Value::Real(t.checked_sub(s)?))),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s() -> Structure {
        Structure::s()
    }

    #[test]
    fn comparison_is_lexicographic() {
        let o = Structure::o();
        assert_eq!(o.cmp(&Value::lv(0, 5, 1), &Value::lv(1, 1, 10)).unwrap(), Ordering::Less);
        assert_eq!(s().cmp(&Value::Zero, &Value::lv(0, 1, 100)).unwrap(), Ordering::Less);
        let top_cmp = Structure::obar().cmp(&Value::pair(Value::int(3), Value::inf()), &Value::Top);
        assert_eq!(top_cmp.unwrap(), Ordering::Less);
    }

    #[test]
    fn addition_cases() {
        let x = Value::lv(2, 1, 3);
        let y = Value::pair(Value::int(1), Value::inf());
        assert_eq!(s().add(&x, &y).unwrap(), x);
        assert_eq!(s().add(&Value::lv(1, 1, 4), &Value::lv(1, 1, 2)).unwrap(), Value::lv(1, 3, 4));
        assert_eq!(s().add(&x, &Value::Zero).unwrap(), x);
        assert_eq!(Structure::obar().add(&Value::Top, &Value::lv(5, 2, 1)).unwrap(), Value::Top);
    }

    #[test]
    fn multiplication_in_p() {
        let p = Structure::p();
        let x = Value::lv(-3, 2, 7);
        assert_eq!(p.mul(&x, &p.one().unwrap()).unwrap(), x);
        assert_eq!(p.one().unwrap(), Value::lv(0, 1, 1));
    }

    #[test]
    fn inverses_multiply_back_to_one() {
        let p = Structure::p();
        assert_eq!(p.inv(&Value::lv(0, 1, 2)).unwrap(), Value::lv(0, 2, 1));
        assert_eq!(p.inv(&Value::lv(0, 1, 1)).unwrap(), Value::lv(0, 1, 1));
        let p2 = Structure::pn(2);
        let x = Value::pair(Value::int(-1), Value::lv(2, 3, 1));
        let y = p2.inv(&x).unwrap();
        assert_eq!(y, Value::pair(Value::int(1), Value::lv(-2, 1, 3)));
        assert_eq!(p2.mul(&x, &y).unwrap(), p2.one().unwrap());
        assert!(matches!(p.inv(&Value::Zero), Err(Error::Domain(_))));
        assert!(matches!(Structure::o().inv(&Value::lv(0, 1, 1)), Err(Error::Capability(_))));
    }

    #[test]
    fn level_and_residue() {
        let o = Structure::o();
        let x = Value::lv(3, 1, 2);
        assert_eq!(o.level(&x).unwrap(), Value::int(3));
        assert_eq!(o.residue(&x).unwrap(), Value::ratio(1, 2));
        assert_eq!(o.residue(&Value::Zero).unwrap(), Value::Zero);
        assert!(matches!(Structure::obar().level(&Value::Top), Err(Error::Domain(_))));
        assert!(matches!(o.level(&Value::Zero), Err(Error::Domain(_))));
    }

    #[test]
    fn top_and_zero_products() {
        let ob = Structure::obar();
        assert_eq!(ob.mul(&Value::Zero, &Value::Top).unwrap(), Value::Zero);
        assert_eq!(ob.mul(&Value::Top, &Value::lv(-4, 1, 9)).unwrap(), Value::Top);
    }

    #[test]
    fn ill_shaped_values_are_rejected() {
        assert!(s().check(&Value::pair(Value::int(1), Value::ratio(0, 1))).is_err());
        assert!(s().check(&Value::lv(-1, 1, 1)).is_err());
        assert!(s().check(&Value::Top).is_err());
        assert!(Structure::p().check(&Value::pair(Value::int(0), Value::inf())).is_err());
    }

    #[test]
    fn double_addition_cases() {
        let d = Structure::double(Structure::s()).unwrap();
        let pos = |l, p, q| Value::signed(Sign::Plus, Value::lv(l, p, q));
        let neg = |l, p, q| Value::signed(Sign::Minus, Value::lv(l, p, q));
        assert_eq!(d.add(&pos(2, 5, 1), &neg(1, 3, 1)).unwrap(), pos(2, 5, 1));
        assert_eq!(d.add(&pos(1, 3, 4), &neg(1, 1, 4)).unwrap(), pos(1, 1, 2));
        assert_eq!(d.add(&pos(1, 3, 4), &neg(1, 3, 4)).unwrap(), Value::Zero);
        assert_eq!(d.add(&neg(1, 3, 4), &pos(1, 1, 4)).unwrap(), neg(1, 1, 2));
        assert_eq!(d.add(&neg(0, 1, 1), &neg(0, 1, 2)).unwrap(), neg(0, 3, 2));
        let bad = Structure::double(Structure::base(Base::N0)).unwrap();
        let one = Value::signed(Sign::Plus, Value::int(1));
        assert!(matches!(bad.add(&one, &one), Err(Error::Capability(_))));
    }
}
