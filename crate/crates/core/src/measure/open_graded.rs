//! The canonical open-graded 𝕆̄-measure on `[0,∞]`.
//!
//! `[0,∞]` is identified with the picture of 𝕆̄: a point is `0`, `top`, or a pair
//! `(level, t)` with `t ∈ (0,∞]`, ordered lexicographically. A measurable set is
//! described level by level as a finite union of intervals in `(0,∞]`, optionally
//! together with everything above or below some level. Its measure is the
//! Lebesgue length at the largest level where that length is positive.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::structure::Value;
use crate::xreal::XReal;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: XReal,
    pub hi: XReal,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    fn validate(&self) -> Result<()> {
        if self.lo > self.hi {
            return Err(Error::Invalid(format!("interval {self} has its endpoints reversed")));
        }
        if self.lo.is_zero() && self.lo_closed {
            return Err(Error::Invalid("intervals live in (0,inf]; 0 cannot be included".into()));
        }
        if self.lo == self.hi && !(self.lo_closed && self.hi_closed) {
            return Err(Error::Invalid(format!("interval {self} is empty")));
        }
        Ok(())
    }

    pub fn length(&self) -> XReal {
        self.hi.checked_sub(&self.lo).unwrap_or_else(|_| XReal::zero())
    }

    pub fn contains(&self, t: &XReal) -> bool {
        let above = match t.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Less => false,
        };
        let below = match t.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Greater => false,
        };
        above && below
    }

    fn overlaps(&self, other: &Interval) -> bool {
        let (a, b) = if self.lo <= other.lo { (self, other) } else { (other, self) };
        match a.hi.cmp(&b.lo) {
            Ordering::Greater => true,
            Ordering::Equal => a.hi_closed && b.lo_closed,
            Ordering::Less => false,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_closed { '[' } else { '(' };
        let r = if self.hi_closed { ']' } else { ')' };
        write!(f, "{l}{},{}{r}", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub level: BigInt,
    pub interval: Interval,
}

impl FromStr for Piece {
    type Err = Error;

    /// `level:(a,b]` with any mix of brackets.
    fn from_str(s: &str) -> Result<Piece> {
        let s = s.trim();
        let (level, iv) = s.split_once(':').ok_or_else(|| Error::parse(0, "expected level:interval"))?;
        let level: BigInt = level.trim().parse().map_err(|_| Error::parse(0, "expected an integer level"))?;
        let iv = iv.trim();
        let off = s.len() - iv.len();
        let lo_closed = match iv.chars().next() {
            Some('[') => true,
            Some('(') => false,
            _ => return Err(Error::parse(off, "expected '[' or '('")),
        };
        let hi_closed = match iv.chars().last() {
            Some(']') => true,
            Some(')') => false,
            _ => return Err(Error::parse(s.len().saturating_sub(1), "expected ']' or ')'")),
        };
        let inner = &iv[1..iv.len() - 1];
        let (a, b) = inner.split_once(',').ok_or_else(|| Error::parse(off, "expected two endpoints"))?;
        let interval = Interval { lo: a.trim().parse()?, hi: b.trim().parse()?, lo_closed, hi_closed };
        interval.validate()?;
        Ok(Piece { level, interval })
    }
}

/// A set in the picture space of 𝕆̄.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GradedIntervalSet {
    pub pieces: Vec<Piece>,
    /// Contains every point whose level exceeds this one, and top.
    pub above: Option<BigInt>,
    /// Contains every point whose level is below this one, and 0.
    pub below: Option<BigInt>,
    pub zero: bool,
    pub top: bool,
}

impl GradedIntervalSet {
    pub fn validate(&self) -> Result<()> {
        for (i, p) in self.pieces.iter().enumerate() {
            p.interval.validate()?;
            for q in &self.pieces[i + 1..] {
                if p.level == q.level && p.interval.overlaps(&q.interval) {
                    return Err(Error::Invalid(format!("pieces {} and {} overlap at level {}", p.interval, q.interval, p.level)));
                }
            }
        }
        Ok(())
    }

    pub fn point(p: &Point) -> GradedIntervalSet {
        match p {
            Point::Zero => GradedIntervalSet { zero: true, ..Default::default() },
            Point::Top => GradedIntervalSet { top: true, ..Default::default() },
            Point::At(level, t) => GradedIntervalSet {
                pieces: vec![Piece {
                    level: level.clone(),
                    interval: Interval { lo: t.clone(), hi: t.clone(), lo_closed: true, hi_closed: true },
                }],
                ..Default::default()
            },
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        match p {
            Point::Zero => self.zero || self.below.is_some(),
            Point::Top => self.top || self.above.is_some(),
            Point::At(level, t) => {
                self.above.as_ref().is_some_and(|a| level > a)
                    || self.below.as_ref().is_some_and(|b| level < b)
                    || self.pieces.iter().any(|p| &p.level == level && p.interval.contains(t))
            }
        }
    }
}

impl FromStr for GradedIntervalSet {
    type Err = Error;

    /// Items separated by `;`: pieces `level:(a,b)`, `above:j`, `below:j`, `zero`, `top`.
    fn from_str(s: &str) -> Result<Self> {
        let mut set = GradedIntervalSet::default();
        for item in s.split(';').map(str::trim).filter(|t| !t.is_empty()) {
            let int = |t: &str| t.trim().parse::<BigInt>().map_err(|_| Error::parse(0, format!("bad level in {item:?}")));
            if item == "zero" {
                set.zero = true;
            } else if item == "top" {
                set.top = true;
            } else if let Some(j) = item.strip_prefix("above:") {
                set.above = Some(int(j)?);
            } else if let Some(j) = item.strip_prefix("below:") {
                set.below = Some(int(j)?);
            } else {
                set.pieces.push(item.parse()?);
            }
        }
        set.validate()?;
        Ok(set)
    }
}

/// A point of the picture space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Point {
    Zero,
    At(BigInt, XReal),
    Top,
}

impl Point {
    fn key(&self) -> (u8, Option<&BigInt>, Option<&XReal>) {
        match self {
            Point::Zero => (0, None, None),
            Point::At(l, t) => (1, Some(l), Some(t)),
            Point::Top => (2, None, None),
        }
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Zero => f.write_str("0"),
            Point::Top => f.write_str("top"),
            Point::At(l, t) => write!(f, "({l},{t})"),
        }
    }
}

/// ν(E) for the canonical example.
pub fn open_graded_measure(e: &GradedIntervalSet) -> Result<Value> {
    e.validate()?;
    if e.above.is_some() {
        return Ok(Value::Top);
    }
    let mut lengths: BTreeMap<BigInt, XReal> = BTreeMap::new();
    for p in &e.pieces {
        let len = p.interval.length();
        let slot = lengths.entry(p.level.clone()).or_insert_with(XReal::zero);
        *slot = slot.add(&len);
    }
    if let Some(b) = &e.below {
        let just_below = b - 1;
        let slot = lengths.entry(just_below).or_insert_with(XReal::zero);
        *slot = XReal::Inf;
    }
    Ok(match lengths.into_iter().rev().find(|(_, len)| !len.is_zero()) {
        Some((level, len)) => Value::pair(Value::Int(level), Value::Real(len)),
        None => Value::Zero,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenGradedReport {
    pub k: BigInt,
    pub points_checked: usize,
    pub points_in_union: usize,
    pub open: bool,
    /// A point of the union none of whose sampled neighbourhoods stays inside it.
    pub witness: Option<String>,
}

/// Sample points at levels `k-2..=k+2`: a rational grid in `(0,4]`, `∞`, plus `0` and top.
fn sample_points(k: &BigInt) -> Vec<Point> {
    let mut pts = vec![Point::Zero, Point::Top];
    for dl in -2..=2i32 {
        let level = k + dl;
        for n in 1..=16u32 {
            pts.push(Point::At(level.clone(), XReal::ratio(n, 4).expect("grid")));
        }
        pts.push(Point::At(level, XReal::Inf));
    }
    pts.sort();
    pts
}

/// Checks the open-graded condition at `k` for the canonical measure.
pub fn verify_open_graded(k: &BigInt) -> Result<OpenGradedReport> {
    verify_open_graded_with(k, &open_graded_measure)
}

/// Checks, on a sample of the picture space, that the union of all sets `E` with
/// `ν(E) < (k,∞)` or `ν(E) = 0` is open in the order topology.
///
/// Measures are monotone, so a point lies in that union exactly when its singleton
/// qualifies. Openness is checked against the sampled order: every member must
/// have its sampled neighbours on both sides in the union as well, except on a side
/// where it is an extreme element of the space (`0` below, `top` above).
pub fn verify_open_graded_with(k: &BigInt, nu: &dyn Fn(&GradedIntervalSet) -> Result<Value>) -> Result<OpenGradedReport> {
    let bound = Value::pair(Value::Int(k.clone()), Value::inf());
    let o = crate::structure::Structure::obar();
    let pts = sample_points(k);
    let member = pts
        .iter()
        .map(|p| {
            let v = nu(&GradedIntervalSet::point(p))?;
            Ok(v == Value::Zero || o.cmp(&v, &bound)? == Ordering::Less)
        })
        .collect::<Result<Vec<bool>>>()?;
    let mut witness = None;
    for (i, p) in pts.iter().enumerate() {
        if !member[i] {
            continue;
        }
        let left_ok = i == 0 || member[i - 1];
        let right_ok = i + 1 == pts.len() || member[i + 1];
        if !(left_ok && right_ok) {
            witness = Some(p.to_string());
            break;
        }
    }
    Ok(OpenGradedReport {
        k: k.clone(),
        points_checked: pts.len(),
        points_in_union: member.iter().filter(|m| **m).count(),
        open: witness.is_none(),
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> GradedIntervalSet {
        s.parse().unwrap()
    }

    #[test]
    fn measure_of_interval_sets() {
        assert_eq!(open_graded_measure(&set("2:(1/2,3/4)")).unwrap(), Value::lv(2, 1, 4));
        assert_eq!(open_graded_measure(&set("2:[1,1]; 5:[3,3]; zero")).unwrap(), Value::Zero);
        assert_eq!(open_graded_measure(&set("0:(0,1); 1:(2,5)")).unwrap(), Value::lv(1, 3, 1));
        assert_eq!(open_graded_measure(&set("above:3")).unwrap(), Value::Top);
        assert_eq!(open_graded_measure(&set("below:0; -4:(0,1)")).unwrap(), Value::pair(Value::int(-1), Value::inf()));
        assert_eq!(open_graded_measure(&set("1:(0,1); 1:[2,inf]")).unwrap(), Value::pair(Value::int(1), Value::inf()));
    }

    #[test]
    fn malformed_sets_are_rejected() {
        assert!("1:(0,1); 1:(1/2,2)".parse::<GradedIntervalSet>().is_err());
        assert!("1:[0,1)".parse::<GradedIntervalSet>().is_err());
        assert!("1:(2,1)".parse::<GradedIntervalSet>().is_err());
        assert!("1:(1,1)".parse::<GradedIntervalSet>().is_err());
        assert!("1:(1,2);1:[2,3)".parse::<GradedIntervalSet>().is_ok());
        assert!("1:(1,2];1:[2,3)".parse::<GradedIntervalSet>().is_err());
    }

    #[test]
    fn canonical_measure_is_open_graded() {
        for k in -5..=5 {
            let r = verify_open_graded(&BigInt::from(k)).unwrap();
            assert!(r.open, "{r:?}");
        }
    }

    #[test]
    fn mass_on_an_open_region_breaks_openness() {
        // every point of level 0 strictly between 1 and 2 carries a large mass, so
        // the qualifying union misses an open set and keeps its boundary points
        let spiked = |e: &GradedIntervalSet| -> Result<Value> {
            let hit = e
                .pieces
                .iter()
                .any(|p| p.level == BigInt::from(0) && p.interval.hi > XReal::one() && p.interval.lo < XReal::int(2));
            if hit {
                Ok(Value::lv(9, 1, 1))
            } else {
                open_graded_measure(e)
            }
        };
        let r = verify_open_graded_with(&BigInt::from(0), &spiked).unwrap();
        assert!(!r.open);
        assert_eq!(r.witness.as_deref(), Some("(0,1)"));
    }

    #[test]
    fn containment() {
        let s = set("below:0; 3:(1,2]; top");
        assert!(s.contains(&Point::Zero));
        assert!(s.contains(&Point::At((-7).into(), XReal::Inf)));
        assert!(s.contains(&Point::At(3.into(), XReal::int(2))));
        assert!(!s.contains(&Point::At(3.into(), XReal::int(1))));
        assert!(s.contains(&Point::Top));
    }
}
