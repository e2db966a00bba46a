//! Countable sums and suprema of finitely described sequences.
//!
//! A `SeqGen` is a finite head followed by one of a few infinite tails whose
//! level behaviour is decidable. Sums are evaluated as the least upper bound of
//! the partial sums: the residues at the greatest attained level are summed in the
//! residue structure, and when that sum escapes the residue structure the result
//! moves to the next level if the structure has one to offer.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Signed;

use super::desc::{Base, Structure};
use super::value::Value;
use crate::error::{Error, Result};
use crate::xreal::XReal;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tail {
    None,
    /// The same value repeated forever.
    Repeat(Value),
    /// `(start + n*step, residue)` for `n = 0, 1, 2, ...`.
    LevelRamp {
        start: BigInt,
        step: BigInt,
        residue: Value,
    },
    /// `(level, start + n*step)` for `n = 0, 1, 2, ...`, over a base residue structure.
    ResidueRamp {
        level: Value,
        start: XReal,
        step: XReal,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqGen {
    pub head: Vec<Value>,
    pub tail: Tail,
}

impl SeqGen {
    pub fn finite(head: Vec<Value>) -> Self {
        SeqGen { head, tail: Tail::None }
    }

    /// The first `n` terms, for testing and display.
    pub fn take(&self, n: usize) -> Vec<Value> {
        let mut out: Vec<Value> = self.head.iter().take(n).cloned().collect();
        let mut k: u64 = 0;
        while out.len() < n {
            let term = match &self.tail {
                Tail::None => break,
                Tail::Repeat(v) => v.clone(),
                Tail::LevelRamp { start, step, residue } => {
                    Value::pair(Value::Int(start + step * BigInt::from(k)), residue.clone())
                }
                Tail::ResidueRamp { level, start, step } => {
                    Value::pair(level.clone(), Value::Real(start.add(&step.mul(&XReal::int(k)))))
                }
            };
            out.push(term);
            k += 1;
        }
        out
    }
}

enum Outcome {
    Val(Value),
    /// Exceeds every element of the structure.
    Unbounded,
    /// Bounded, but the upper bounds have no least element.
    NoLub,
}

impl Structure {
    fn check_seq(&self, s: &SeqGen) -> Result<()> {
        for v in &s.head {
            self.check(v)?;
        }
        match &s.tail {
            Tail::None => Ok(()),
            Tail::Repeat(v) => self.check(v),
            Tail::LevelRamp { start, step, residue } => {
                if !step.is_positive() {
                    return Err(Error::Invalid("a level ramp needs a positive step".into()));
                }
                self.check(&Value::pair(Value::Int(start.clone()), residue.clone()))
            }
            Tail::ResidueRamp { level, start, step } => {
                if step.is_zero() || step.is_inf() || start.is_inf() {
                    return Err(Error::Invalid("a residue ramp needs a finite start and a finite positive step".into()));
                }
                let (_, residue) = self.split().ok_or_else(|| Error::Shape(format!("{self} has no residues")))?;
                if !matches!(residue, Structure::Base(Base::Rc | Base::Ro | Base::NBar0 | Base::N0)) {
                    return Err(Error::Shape("residue ramps need a base residue structure".into()));
                }
                if !(start.is_integer() && step.is_integer()) && matches!(residue, Structure::Base(Base::N0 | Base::NBar0)) {
                    return Err(Error::Shape("integer residue structure needs integer ramp values".into()));
                }
                let first = residue_value(residue, start);
                let probe = if residue.is_zero(&first) { residue_value(residue, step) } else { first };
                self.check(&Value::pair(level.clone(), probe))
            }
        }
    }

    /// Countable sum `x_1 + x_2 + ...`.
    pub fn sum_sequence(&self, s: &SeqGen) -> Result<Value> {
        self.check_seq(s)?;
        match self.sum_outcome(s)? {
            Outcome::Val(v) => Ok(v),
            Outcome::Unbounded => Err(Error::NotSummable(format!("the partial sums are unbounded in {self}"))),
            Outcome::NoLub => Err(Error::NotRepresentable(format!("the partial sums have no least upper bound in {self}"))),
        }
    }

    /// Least upper bound of the terms of a sequence.
    pub fn sup_sequence(&self, s: &SeqGen) -> Result<Value> {
        self.check_seq(s)?;
        match self.sup_outcome(s)? {
            Outcome::Val(v) => Ok(v),
            Outcome::Unbounded => Err(Error::Unbounded(format!("the terms are unbounded in {self}"))),
            Outcome::NoLub => Err(Error::NotRepresentable(format!("the terms have no least upper bound in {self}"))),
        }
    }

    /// Maximum of a finite nonempty set.
    pub fn sup_finite(&self, xs: &[Value]) -> Result<Value> {
        let mut best: Option<&Value> = None;
        for x in xs {
            self.check(x)?;
            if best.is_none_or(|b| self.cmp_raw(x, b) == Ordering::Greater) {
                best = Some(x);
            }
        }
        best.cloned().ok_or_else(|| Error::Domain("supremum of an empty set".into()))
    }

    fn fold_add(&self, xs: &[Value]) -> Value {
        xs.iter().fold(self.zero(), |acc, x| self.add_raw(&acc, x))
    }

    fn sum_outcome(&self, s: &SeqGen) -> Result<Outcome> {
        let head = self.fold_add(&s.head);
        let tail_zero = match &s.tail {
            Tail::None => true,
            Tail::Repeat(v) => self.is_zero(v),
            _ => false,
        };
        if tail_zero || head == Value::Top {
            return Ok(Outcome::Val(head));
        }
        match self {
            Structure::Base(b) => match (&s.tail, b) {
                (Tail::Repeat(_), Base::Rc | Base::NBar0) => Ok(Outcome::Val(Value::inf())),
                (Tail::Repeat(_), _) => Ok(Outcome::Unbounded),
                _ => Err(Error::Shape(format!("ramps need an insertion, not {self}"))),
            },
            Structure::SIns { level, residue, bar } | Structure::Ins { level, residue, bar } => {
                if let Tail::Repeat(Value::Top) = s.tail {
                    return Ok(Outcome::Val(Value::Top));
                }
                let (tail_level, inner_tail) = match &s.tail {
                    Tail::Repeat(v) => {
                        let (g, r) = v.as_pair().expect("checked pair");
                        (g.clone(), Tail::Repeat(r.clone()))
                    }
                    Tail::LevelRamp { .. } => {
                        return Ok(if *bar { Outcome::Val(Value::Top) } else { Outcome::Unbounded });
                    }
                    // infinitely many terms of at least `step` at one level
                    Tail::ResidueRamp { level: g, step, .. } => (g.clone(), Tail::Repeat(residue_value(residue, step))),
                    Tail::None => unreachable!(),
                };
                let head_level = head.as_pair().map(|(g, _)| g);
                let top_level = match head_level {
                    Some(h) if level.cmp_raw(h, &tail_level) == Ordering::Greater => return Ok(Outcome::Val(head)),
                    _ => tail_level,
                };
                let head_residue = match head_level {
                    Some(h) if level.cmp_raw(h, &top_level) == Ordering::Equal => vec![head.as_pair().unwrap().1.clone()],
                    _ => Vec::new(),
                };
                let inner = residue.sum_outcome(&SeqGen { head: head_residue, tail: inner_tail })?;
                self.lift(level, residue, top_level, inner)
            }
            _ => Err(Error::Capability(format!("countable sums are not supported in {self}"))),
        }
    }

    fn sup_outcome(&self, s: &SeqGen) -> Result<Outcome> {
        let mut finite = s.head.clone();
        match &s.tail {
            Tail::None => {}
            Tail::Repeat(v) => finite.push(v.clone()),
            Tail::LevelRamp { .. } => {
                return Ok(if self.is_bar() { Outcome::Val(Value::Top) } else { Outcome::Unbounded });
            }
            Tail::ResidueRamp { level: g, .. } => {
                let (level, residue) = self.split().expect("checked shape");
                let inner = match residue.top() {
                    Some(t) => Outcome::Val(t),
                    None => Outcome::Unbounded,
                };
                match self.lift(level, residue, g.clone(), inner)? {
                    Outcome::Val(v) => finite.push(v),
                    other => {
                        let above = s.head.iter().any(|h| {
                            h.as_pair().is_some_and(|(hg, _)| level.cmp_raw(hg, g) == Ordering::Greater) || *h == Value::Top
                        });
                        if !above {
                            return Ok(other);
                        }
                    }
                }
            }
        }
        if finite.is_empty() {
            return Err(Error::Domain("supremum of an empty set".into()));
        }
        Ok(Outcome::Val(self.sup_finite(&finite)?))
    }

    /// Places an inner residue outcome at level `g`. An unbounded residue family at
    /// level `g` has least upper bound `(g+1, least positive)` when both exist.
    fn lift(&self, level: &Structure, residue: &Structure, g: Value, inner: Outcome) -> Result<Outcome> {
        Ok(match inner {
            Outcome::Val(r) => Outcome::Val(Value::pair(g, r)),
            Outcome::NoLub => Outcome::NoLub,
            Outcome::Unbounded => {
                let next = level.successor(&g);
                let floor = match self {
                    Structure::SIns { .. } => Some(residue.zero()),
                    _ => residue.least_positive(),
                };
                match (next, floor) {
                    (Some(n), Some(f)) => {
                        let v = Value::pair(n, f);
                        if self.check(&v).is_ok() {
                            Outcome::Val(v)
                        } else {
                            Outcome::NoLub
                        }
                    }
                    _ if level.has_top() && level.top().as_ref() == Some(&g) => {
                        if self.is_bar() {
                            Outcome::Val(Value::Top)
                        } else {
                            Outcome::Unbounded
                        }
                    }
                    _ => Outcome::NoLub,
                }
            }
        })
    }
}

fn residue_value(residue: &Structure, x: &XReal) -> Value {
    match residue {
        Structure::Base(Base::N0) => Value::Int(x.as_rational().expect("finite").to_integer()),
        _ => Value::Real(x.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp_at(level: i64) -> Tail {
        Tail::ResidueRamp { level: Value::int(level), start: XReal::int(1), step: XReal::int(1) }
    }

    #[test]
    fn unbounded_levels_sum_to_top_in_bar_structures() {
        let seq = SeqGen { head: vec![], tail: Tail::LevelRamp { start: 1.into(), step: 1.into(), residue: Value::ratio(1, 1) } };
        assert_eq!(Structure::obar().sum_sequence(&seq).unwrap(), Value::Top);
        assert!(matches!(Structure::o().sum_sequence(&seq), Err(Error::NotSummable(_))));
    }

    #[test]
    fn repeated_terms_below_the_head_do_not_count() {
        let seq = SeqGen { head: vec![Value::lv(2, 1, 2)], tail: Tail::Repeat(Value::lv(1, 5, 1)) };
        assert_eq!(Structure::s().sum_sequence(&seq).unwrap(), Value::lv(2, 1, 2));
    }

    #[test]
    fn repeated_max_level_terms_sum_to_infinity() {
        let seq = SeqGen { head: vec![], tail: Tail::Repeat(Value::lv(3, 1, 2)) };
        assert_eq!(Structure::sbar().sum_sequence(&seq).unwrap(), Value::pair(Value::int(3), Value::inf()));
    }

    #[test]
    fn residue_ramp_suprema() {
        let seq = SeqGen { head: vec![], tail: ramp_at(4) };
        assert_eq!(Structure::s().sup_sequence(&seq).unwrap(), Value::pair(Value::int(4), Value::inf()));
        assert!(matches!(Structure::p().sup_sequence(&seq), Err(Error::NotRepresentable(_))));
        // a larger head element dominates the ramp
        let seq = SeqGen { head: vec![Value::lv(5, 1, 1)], tail: ramp_at(4) };
        assert_eq!(Structure::p().sup_sequence(&seq).unwrap(), Value::lv(5, 1, 1));
    }

    #[test]
    fn unbounded_residues_move_up_a_level_over_discrete_residues() {
        let s: Structure = "N0 /\\ N0".parse().unwrap();
        let seq = SeqGen { head: vec![], tail: Tail::Repeat(Value::pair(Value::int(1), Value::int(1))) };
        assert_eq!(s.sum_sequence(&seq).unwrap(), Value::pair(Value::int(2), Value::int(1)));
        let p = Structure::p();
        let seq = SeqGen { head: vec![], tail: Tail::Repeat(Value::lv(0, 1, 1)) };
        assert!(matches!(p.sum_sequence(&seq), Err(Error::NotRepresentable(_))));
    }

    #[test]
    fn finite_sums_and_maxima() {
        let seq = SeqGen::finite(vec![Value::lv(1, 1, 4), Value::lv(1, 1, 2), Value::lv(0, 7, 1)]);
        assert_eq!(Structure::s().sum_sequence(&seq).unwrap(), Value::lv(1, 3, 4));
        assert_eq!(Structure::s().sup_sequence(&seq).unwrap(), Value::lv(1, 1, 2));
    }

    #[test]
    fn take_expands_tails() {
        let seq = SeqGen {
            head: vec![Value::lv(0, 1, 1)],
            tail: Tail::LevelRamp { start: 2.into(), step: 3.into(), residue: Value::ratio(1, 2) },
        };
        let t = seq.take(3);
        assert_eq!(t[2], Value::lv(5, 1, 2));
    }
}
