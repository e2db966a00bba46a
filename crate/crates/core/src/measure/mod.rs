//! L-valued measures on finite atom spaces.
//!
//! The σ-algebra is the full powerset of the atoms, so a measure is determined
//! by its atom values and `ν(E)` is the sum of the values of the atoms in `E`.

mod open_graded;
mod scenes;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::structure::{Base, Structure, Value};
use crate::xreal::XReal;

pub use open_graded::{
    open_graded_measure, verify_open_graded, verify_open_graded_with, GradedIntervalSet, Interval, OpenGradedReport, Piece, Point,
};
pub use scenes::{builtin, dartboard, BUILTIN_SCENES};

/// A set of atoms, by index into the atom space.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Event(pub BTreeSet<usize>);

impl Event {
    pub fn empty() -> Event {
        Event::default()
    }

    pub fn from_indices(ix: impl IntoIterator<Item = usize>) -> Event {
        Event(ix.into_iter().collect())
    }

    /// The event whose atoms are the set bits of `mask`.
    pub fn from_mask(mask: u64) -> Event {
        Event((0..64).filter(|i| mask >> i & 1 == 1).collect())
    }

    pub fn union(&self, other: &Event) -> Event {
        Event(self.0.union(&other.0).copied().collect())
    }

    pub fn intersection(&self, other: &Event) -> Event {
        Event(self.0.intersection(&other.0).copied().collect())
    }

    pub fn is_disjoint(&self, other: &Event) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomSpace {
    atoms: Vec<String>,
    index: HashMap<String, usize>,
    events: BTreeMap<String, Event>,
}

impl AtomSpace {
    pub fn new<S: Into<String>>(atoms: impl IntoIterator<Item = S>) -> Result<Self> {
        let atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        let mut index = HashMap::new();
        for (i, a) in atoms.iter().enumerate() {
            if index.insert(a.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate atom {a:?}")));
            }
        }
        Ok(AtomSpace { atoms, index, events: BTreeMap::new() })
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn atom_index(&self, id: &str) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| Error::Invalid(format!("unknown atom {id:?}")))
    }

    pub fn whole(&self) -> Event {
        Event::from_indices(0..self.len())
    }

    pub fn event_of<S: AsRef<str>>(&self, ids: &[S]) -> Result<Event> {
        ids.iter().map(|id| self.atom_index(id.as_ref())).collect::<Result<BTreeSet<_>>>().map(Event)
    }

    pub fn define_event<S: AsRef<str>>(&mut self, name: &str, ids: &[S]) -> Result<()> {
        if self.index.contains_key(name) {
            return Err(Error::Invalid(format!("event name {name:?} collides with an atom id")));
        }
        let e = self.event_of(ids)?;
        self.events.insert(name.to_string(), e);
        Ok(())
    }

    pub fn events(&self) -> &BTreeMap<String, Event> {
        &self.events
    }

    /// A named event, a single atom id, or `X` for the whole space.
    pub fn named(&self, name: &str) -> Result<Event> {
        if let Some(e) = self.events.get(name) {
            return Ok(e.clone());
        }
        if let Some(&i) = self.index.get(name) {
            return Ok(Event::from_indices([i]));
        }
        match name {
            "X" => Ok(self.whole()),
            "empty" => Ok(Event::empty()),
            _ => Err(Error::Invalid(format!("unknown event {name:?}"))),
        }
    }

    /// Event expression: names joined by `&` (intersection, binds tighter) and `|` (union).
    pub fn parse_event(&self, src: &str) -> Result<Event> {
        let mut out = Event::empty();
        for (k, alt) in src.split('|').enumerate() {
            let mut acc: Option<Event> = None;
            for name in alt.split('&') {
                let name = name.trim();
                if name.is_empty() {
                    return Err(Error::parse(k, format!("empty operand in event expression {src:?}")));
                }
                let e = self.named(name)?;
                acc = Some(match acc {
                    None => e,
                    Some(a) => a.intersection(&e),
                });
            }
            out = out.union(&acc.expect("nonempty alternative"));
        }
        Ok(out)
    }

    pub fn describe(&self, e: &Event) -> Vec<&str> {
        e.iter().map(|i| self.atoms[i].as_str()).collect()
    }
}

/// Number of attained levels, or infinite when a top atom makes levels unbounded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Height {
    Finite(BigInt),
    Infinite,
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Height::Finite(h) => write!(f, "{h}"),
            Height::Infinite => f.write_str("infinite"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LMeasure {
    desc: Structure,
    space: AtomSpace,
    values: Vec<Value>,
}

impl LMeasure {
    pub fn new(desc: Structure, space: AtomSpace, values: Vec<Value>) -> Result<Self> {
        if !desc.is_semigroup() {
            return Err(Error::Capability(format!("measures need an ordered semigroup, got {desc}")));
        }
        if values.len() != space.len() {
            return Err(Error::Invalid(format!("{} atoms but {} values", space.len(), values.len())));
        }
        for v in &values {
            desc.check(v)?;
        }
        Ok(LMeasure { desc, space, values })
    }

    pub fn desc(&self) -> &Structure {
        &self.desc
    }

    pub fn space(&self) -> &AtomSpace {
        &self.space
    }

    pub fn space_mut(&mut self) -> &mut AtomSpace {
        &mut self.space
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn atom_value(&self, i: usize) -> &Value {
        &self.values[i]
    }

    pub fn whole(&self) -> Event {
        self.space.whole()
    }

    fn check_event(&self, e: &Event) -> Result<()> {
        match e.0.last() {
            Some(&i) if i >= self.space.len() => Err(Error::Invalid(format!("atom index {i} out of range"))),
            _ => Ok(()),
        }
    }

    /// ν(E).
    pub fn measure(&self, e: &Event) -> Result<Value> {
        self.check_event(e)?;
        Ok(e.iter().fold(self.desc.zero(), |acc, i| self.desc.add_raw(&acc, &self.values[i])))
    }

    pub fn measure_named(&self, expr: &str) -> Result<Value> {
        self.measure(&self.space.parse_event(expr)?)
    }

    fn require_integer_levels(&self) -> Result<Base> {
        match self.desc.split() {
            Some((Structure::Base(b @ (Base::N0 | Base::Z)), _)) => Ok(*b),
            _ => Err(Error::Capability(format!("level bookkeeping needs integer levels, got {}", self.desc))),
        }
    }

    /// Outer level of an atom value, if it has one.
    fn level_of(v: &Value) -> Option<&BigInt> {
        v.as_pair().and_then(|(g, _)| g.as_int())
    }

    /// Distinct outer levels attained by atoms, ascending.
    pub fn attained_levels(&self) -> Result<BTreeSet<BigInt>> {
        self.require_integer_levels()?;
        Ok(self.values.iter().filter_map(Self::level_of).cloned().collect())
    }

    /// The slice `ν_k(E)`: the residue at level `k`, `∞` above it, `0` below.
    pub fn slice(&self, k: &BigInt, e: &Event) -> Result<XReal> {
        if !self.desc.is_simple_level_shape() {
            return Err(Error::Capability(format!("slices need a level-over-real shape such as S or O, got {}", self.desc)));
        }
        Ok(match self.measure(e)? {
            Value::Zero => XReal::zero(),
            Value::Top => XReal::Inf,
            Value::Pair(g, r) => {
                let g = g.as_int().expect("integer level");
                match g.cmp(k) {
                    std::cmp::Ordering::Equal => r.as_real().expect("real residue").clone(),
                    std::cmp::Ordering::Greater => XReal::Inf,
                    std::cmp::Ordering::Less => XReal::zero(),
                }
            }
            _ => unreachable!("insertion values"),
        })
    }

    /// Atomwise slices over the levels `lo..=hi`.
    pub fn slices(&self, lo: &BigInt, hi: &BigInt) -> Result<BTreeMap<BigInt, Vec<XReal>>> {
        let mut out = BTreeMap::new();
        let mut k = lo.clone();
        while &k <= hi {
            let row = (0..self.space.len()).map(|i| self.slice(&k, &Event::from_indices([i]))).collect::<Result<_>>()?;
            out.insert(k.clone(), row);
            k += 1;
        }
        Ok(out)
    }

    /// A window of levels that strictly contains every attained level.
    pub fn slice_window(&self) -> Result<(BigInt, BigInt)> {
        let levels = self.attained_levels()?;
        let lo = levels.first().cloned().unwrap_or_default() - 1;
        let hi = levels.last().cloned().unwrap_or_default() + 1;
        Ok((lo, hi))
    }

    /// Rebuilds a measure from atomwise slices: each atom sits at the largest level
    /// whose slice is positive, with that slice as residue.
    pub fn recover_from_slices(desc: Structure, space: AtomSpace, slices: &BTreeMap<BigInt, Vec<XReal>>) -> Result<Self> {
        if !desc.is_simple_level_shape() {
            return Err(Error::Capability(format!("slices need a level-over-real shape such as S or O, got {desc}")));
        }
        let n = space.len();
        if slices.values().any(|row| row.len() != n) {
            return Err(Error::Invalid("every slice must list one value per atom".into()));
        }
        let top = slices.keys().next_back();
        let mut values = Vec::with_capacity(n);
        for a in 0..n {
            let found = slices.iter().rev().find(|(_, row)| !row[a].is_zero());
            let v = match found {
                None => Value::Zero,
                Some((j, row)) => {
                    if row[a].is_inf() && Some(j) == top {
                        return Err(Error::Invalid(format!(
                            "atom {:?} is infinite at the top of the window, so its level is undetermined",
                            space.atoms()[a]
                        )));
                    }
                    if let Some((i, _)) = slices.range(..j).find(|(_, row)| !row[a].is_inf()) {
                        return Err(Error::Invalid(format!(
                            "inconsistent slices for atom {:?}: finite at level {i} below its level {j}",
                            space.atoms()[a]
                        )));
                    }
                    Value::pair(Value::Int(j.clone()), Value::Real(row[a].clone()))
                }
            };
            values.push(v);
        }
        LMeasure::new(desc, space, values)
    }

    /// `max - min + 1` over attained levels.
    pub fn total_height(&self) -> Result<Height> {
        if self.values.contains(&Value::Top) {
            return Ok(Height::Infinite);
        }
        let levels = self.attained_levels()?;
        match (levels.first(), levels.last()) {
            (Some(lo), Some(hi)) => Ok(Height::Finite(hi - lo + 1)),
            _ => Err(Error::Domain("a zero measure attains no levels".into())),
        }
    }

    /// No level strictly between two attained levels is skipped.
    pub fn is_proximal(&self) -> Result<bool> {
        let levels = self.attained_levels()?;
        Ok(match (levels.first(), levels.last()) {
            (Some(lo), Some(hi)) => BigInt::from(levels.len()) == hi - lo + 1,
            _ => true,
        })
    }

    fn map_levels(&self, f: impl Fn(&BigInt) -> BigInt) -> Result<Self> {
        let base = self.require_integer_levels()?;
        let values = self
            .values
            .iter()
            .map(|v| match v.as_pair() {
                Some((Value::Int(g), r)) => {
                    let g2 = f(g);
                    if base == Base::N0 && g2.is_negative() {
                        return Err(Error::Domain(format!("level {g2} is not in N0")));
                    }
                    Ok(Value::pair(Value::Int(g2), r.clone()))
                }
                _ => Ok(v.clone()),
            })
            .collect::<Result<_>>()?;
        LMeasure::new(self.desc.clone(), self.space.clone(), values)
    }

    /// Closes gaps between attained levels by moving every level above a gap down;
    /// the lowest attained level stays where it is.
    pub fn align_levels(&self) -> Result<Self> {
        let levels = self.attained_levels()?;
        let Some(lo) = levels.first().cloned() else { return Ok(self.clone()) };
        let rank: HashMap<BigInt, BigInt> = levels.iter().enumerate().map(|(r, g)| (g.clone(), &lo + BigInt::from(r))).collect();
        self.map_levels(|g| rank[g].clone())
    }

    /// Adds `k` to every level, i.e. multiplies every atom value by `(k,1)`.
    pub fn shift_levels(&self, k: &BigInt) -> Result<Self> {
        if k.is_zero() {
            self.require_integer_levels()?;
            return Ok(self.clone());
        }
        self.map_levels(|g| g + k)
    }

    /// Same atoms and events with different values.
    pub fn with_values(&self, values: Vec<Value>) -> Result<Self> {
        LMeasure::new(self.desc.clone(), self.space.clone(), values)
    }
}
