//! Integrals of atomwise-constant functions against L-measures.

use std::cmp::Ordering;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::measure::{Event, LMeasure};
use crate::structure::{Base, Sign, Structure, Value};
use crate::xreal::XReal;

/// A function constant on each atom, listed in atom order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimpleFunction {
    RealValued(Vec<XReal>),
    LValued { desc: Structure, values: Vec<Value> },
    SignedLValued { desc: Structure, values: Vec<Value> },
}

impl SimpleFunction {
    pub fn len(&self) -> usize {
        match self {
            SimpleFunction::RealValued(v) => v.len(),
            SimpleFunction::LValued { values, .. } | SimpleFunction::SignedLValued { values, .. } => values.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn check_against(&self, m: &LMeasure) -> Result<()> {
        if self.len() != m.space().len() {
            return Err(Error::Invalid(format!("function has {} values for {} atoms", self.len(), m.space().len())));
        }
        match self {
            SimpleFunction::RealValued(_) => Ok(()),
            SimpleFunction::LValued { desc, values } | SimpleFunction::SignedLValued { desc, values } => {
                values.iter().try_for_each(|v| desc.check(v))
            }
        }
    }
}

fn top_of(k: &Structure) -> Result<Value> {
    if k.has_top() {
        Ok(Value::Top)
    } else {
        Err(Error::NotRepresentable(format!("the integral is top, which {k} does not contain")))
    }
}

/// `Σ_k (k, ∫ f dν_k)` over atoms given as (measure value, weight) pairs.
///
/// Levels below the largest attained one contribute `(k,∞)` and are absorbed, so
/// only atoms at the largest level reach the residue integral.
fn real_integral(k: &Structure, atoms: &[(&Value, &XReal)]) -> Result<Value> {
    match k {
        Structure::Base(Base::Rc | Base::Ro) => {
            let total = atoms.iter().fold(XReal::zero(), |acc, (v, f)| acc.add(&v.as_real().expect("real atom value").mul(f)));
            let out = Value::Real(total);
            k.check(&out).map_err(|_| Error::NotRepresentable(format!("the integral {out} is not in {k}")))?;
            Ok(out)
        }
        Structure::Ins { level, residue, .. } | Structure::SIns { level, residue, .. }
            if matches!(**level, Structure::Base(Base::N0 | Base::Z)) =>
        {
            let live: Vec<_> = atoms.iter().filter(|(v, f)| !f.is_zero() && !k.is_zero(v)).copied().collect();
            if live.iter().any(|(v, _)| **v == Value::Top) {
                return top_of(k);
            }
            let Some(top_level) = live.iter().filter_map(|(v, _)| v.as_pair()?.0.as_int()).max().cloned() else {
                return Ok(k.zero());
            };
            let at_top: Vec<_> = live
                .iter()
                .filter_map(|(v, f)| {
                    let (g, r) = v.as_pair()?;
                    (g.as_int() == Some(&top_level)).then_some((r, *f))
                })
                .collect();
            let inner = real_integral(residue, &at_top)?;
            Ok(Value::pair(Value::Int(top_level), inner))
        }
        _ => Err(Error::Capability(format!("integration needs integer levels over a real base, got {k}"))),
    }
}

fn atoms_of<'a>(m: &'a LMeasure, a: &Event, f: &'a [XReal]) -> Vec<(&'a Value, &'a XReal)> {
    a.iter().map(|i| (m.atom_value(i), &f[i])).collect()
}

fn check_event(m: &LMeasure, a: &Event) -> Result<()> {
    match a.0.last() {
        Some(&i) if i >= m.space().len() => Err(Error::Invalid(format!("atom index {i} out of range"))),
        _ => Ok(()),
    }
}

/// `∫_A f dν` for a real-valued `f`.
pub fn integrate_real(m: &LMeasure, f: &[XReal], a: &Event) -> Result<Value> {
    SimpleFunction::RealValued(f.to_vec()).check_against(m)?;
    check_event(m, a)?;
    real_integral(m.desc(), &atoms_of(m, a, f))
}

/// The element of `k` equal to one except for level `shift` at nesting depth `depth`.
fn unit_at(k: &Structure, depth: usize, shift: &BigInt) -> Result<Value> {
    match k {
        Structure::Ins { level, residue, .. } | Structure::SIns { level, residue, .. } => {
            if depth == 0 {
                let g = Value::Int(shift.clone());
                level.check(&g).map_err(|_| Error::Domain(format!("level shift {shift} leaves {level}")))?;
                Ok(Value::pair(g, residue.one()?))
            } else {
                Ok(Value::pair(level.zero(), unit_at(residue, depth - 1, shift)?))
            }
        }
        _ => Err(Error::Shape(format!("no level at depth {depth} in {k}"))),
    }
}

/// Level-partition recursion: `Σ_k (k, ∫_{B_k} ℜ(g) dν)` where `B_k` collects the
/// atoms whose value has level `k`, the pairing acting as a level shift at the
/// current nesting depth.
fn lvalued(m: &LMeasure, g_desc: &Structure, g: &[Option<Value>], b: &Event, depth: usize) -> Result<Value> {
    let k = m.desc();
    let Some((_, residue_desc)) = g_desc.split() else {
        let f: Vec<XReal> = g
            .iter()
            .map(|v| match v {
                Some(Value::Real(x)) => x.clone(),
                Some(Value::Int(n)) => XReal::from_rational(n.clone().into()).expect("finite"),
                _ => XReal::zero(),
            })
            .collect();
        return real_integral(k, &atoms_of(m, b, &f));
    };
    let mut groups: std::collections::BTreeMap<BigInt, Vec<usize>> = Default::default();
    for i in b.iter() {
        let Some(v) = &g[i] else { continue };
        match v {
            Value::Top => {
                if !k.is_zero(m.atom_value(i)) {
                    return top_of(k);
                }
            }
            Value::Pair(level, _) => {
                groups.entry(level.as_int().expect("integer level").clone()).or_default().push(i);
            }
            _ => {}
        }
    }
    let mut total = k.zero();
    for (level, members) in groups {
        let cell = Event::from_indices(members.iter().copied());
        let inner: Vec<Option<Value>> = g
            .iter()
            .enumerate()
            .map(|(i, v)| if cell.0.contains(&i) { v.as_ref().and_then(|v| v.as_pair()).map(|(_, r)| r.clone()) } else { None })
            .collect();
        let part = lvalued(m, residue_desc, &inner, &cell, depth + 1)?;
        if part == Value::Top {
            return top_of(k);
        }
        let shifted = if k.is_zero(&part) { part } else { k.mul(&unit_at(k, depth, &level)?, &part)? };
        total = k.add(&total, &shifted)?;
    }
    Ok(total)
}

fn check_lvalued_shape(m: &LMeasure, desc: &Structure) -> Result<()> {
    let k = m.desc();
    if !k.is_semiring() {
        return Err(Error::Capability(format!(
            "L-valued integration multiplies in the measure structure, and {k} is not a semiring"
        )));
    }
    if !desc.is_right_nested() || !k.is_right_nested() {
        return Err(Error::Capability(format!("L-valued integration needs right-nested shapes, got {desc} against {k}")));
    }
    if desc.depth() > k.depth() {
        return Err(Error::Shape(format!(
            "integrand {desc} is nested {} deep but the measure structure {k} only {}",
            desc.depth(),
            k.depth()
        )));
    }
    let (gb, kb) = (desc.level_bases(), k.level_bases());
    if gb.iter().zip(&kb).any(|(a, b)| a != b) {
        return Err(Error::Shape(format!("level sets of {desc} and {k} differ")));
    }
    Ok(())
}

/// `∫_B g dν` for an L-valued `g`.
pub fn integrate_lvalued(m: &LMeasure, desc: &Structure, g: &[Value], b: &Event) -> Result<Value> {
    SimpleFunction::LValued { desc: desc.clone(), values: g.to_vec() }.check_against(m)?;
    check_event(m, b)?;
    check_lvalued_shape(m, desc)?;
    let g: Vec<Option<Value>> = g.iter().map(|v| (!desc.is_zero(v)).then(|| v.clone())).collect();
    lvalued(m, desc, &g, b, 0)
}

/// Result of a signed integral with the two parts it was assembled from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedIntegral {
    pub value: Value,
    pub positive: Value,
    pub negative: Value,
}

/// `∫_A f dν` for `f` in the double of `L`: `P = ∫ f₊`, `N = ∫ f₋`, combined by the
/// signed sum `P + (-N)`.
pub fn integrate_signed(m: &LMeasure, desc: &Structure, f: &[Value], a: &Event) -> Result<SignedIntegral> {
    SimpleFunction::SignedLValued { desc: desc.clone(), values: f.to_vec() }.check_against(m)?;
    let Structure::Double(inner) = desc else {
        return Err(Error::Capability(format!("signed integrands live in a double, got {desc}")));
    };
    let part = |want: Sign| -> Vec<Value> {
        f.iter()
            .map(|v| match v {
                Value::Signed(s, mag) if *s == want => (**mag).clone(),
                _ => inner.zero(),
            })
            .collect()
    };
    let p = integrate_lvalued(m, inner, &part(Sign::Plus), a)?;
    let n = integrate_lvalued(m, inner, &part(Sign::Minus), a)?;
    let k = m.desc();
    let dk = Structure::double(k.clone())?;
    let lift = |sign: Sign, v: &Value| if k.is_zero(v) { Value::Zero } else { Value::signed(sign, v.clone()) };
    let value = dk.add(&lift(Sign::Plus, &p), &lift(Sign::Minus, &n))?;
    Ok(SignedIntegral { value, positive: p, negative: n })
}

/// Outer level of a (possibly signed) integral value, for reporting which case applied.
pub fn signed_case(s: &SignedIntegral) -> &'static str {
    let level = |v: &Value| v.as_pair().and_then(|(g, _)| g.as_int()).cloned();
    match (level(&s.positive), level(&s.negative)) {
        (None, None) => "zero",
        (Some(_), None) => "positive dominates",
        (None, Some(_)) => "negative dominates",
        (Some(p), Some(n)) => match p.cmp(&n) {
            Ordering::Greater => "positive dominates",
            Ordering::Less => "negative dominates",
            Ordering::Equal => "levels match",
        },
    }
}
