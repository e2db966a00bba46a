use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};

/// The primitive ordered structures everything else is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    /// ℕ₀
    N0,
    /// ℤ, an ordered group (zero is not least, so it only appears as a level set)
    Z,
    /// [0,∞]
    Rc,
    /// [0,∞)
    Ro,
    /// ℕ₀ ∪ {∞}
    NBar0,
}

impl Base {
    pub fn name(self) -> &'static str {
        match self {
            Base::N0 => "N0",
            Base::Z => "Z",
            Base::Rc => "Rc",
            Base::Ro => "Ro",
            Base::NBar0 => "Nbar0",
        }
    }

    /// Integer-valued bases can serve as level sets with a successor function.
    pub fn is_integral(self) -> bool {
        matches!(self, Base::N0 | Base::Z)
    }
}

/// Levels `lo..=hi` of a mixed insertion together with the fiber inserted at each level.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MixedSpec {
    pub level: Base,
    pub lo: Option<BigInt>,
    pub hi: Option<BigInt>,
    pub fibers: BTreeMap<BigInt, Structure>,
    pub default: Option<Structure>,
}

impl MixedSpec {
    pub fn in_range(&self, level: &BigInt) -> bool {
        self.lo.as_ref().is_none_or(|lo| level >= lo) && self.hi.as_ref().is_none_or(|hi| level <= hi)
    }

    pub fn fiber(&self, level: &BigInt) -> Result<&Structure> {
        if !self.in_range(level) {
            return Err(Error::Shape(format!("level {level} outside the mixed range")));
        }
        self.fibers
            .get(level)
            .or(self.default.as_ref())
            .ok_or_else(|| Error::Shape(format!("no fiber inserted at level {level}")))
    }
}

/// Descriptor of an ordered structure assembled from bases by insertion combinators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Structure {
    Base(Base),
    /// s-insertion `A ⊙∨ B = A × B`; with `bar` a greatest element is adjoined.
    SIns {
        level: Box<Structure>,
        residue: Box<Structure>,
        bar: bool,
    },
    /// insertion `A ⊙∧ B = A × (B∖{0}) ∪ {0}`; with `bar` a greatest element is adjoined.
    Ins {
        level: Box<Structure>,
        residue: Box<Structure>,
        bar: bool,
    },
    Mixed(Box<MixedSpec>),
    /// The signed double `{0} ∪ {+,-} × (L∖{0})`.
    Double(Box<Structure>),
}

impl Structure {
    pub fn base(b: Base) -> Self {
        Structure::Base(b)
    }

    pub fn sins(level: Structure, residue: Structure, bar: bool) -> Result<Self> {
        for (side, s) in [("left", &level), ("right", &residue)] {
            if !s.is_semigroup() {
                return Err(Error::Capability(format!(
                    "s-insertion needs ordered abelian semigroups; {side} operand {s} is not one"
                )));
            }
        }
        Ok(Structure::SIns { level: Box::new(level), residue: Box::new(residue), bar })
    }

    pub fn ins(level: Structure, residue: Structure, bar: bool) -> Result<Self> {
        if !(level.is_group() || level.is_semigroup()) {
            return Err(Error::Capability(format!(
                "insertion needs an ordered group or semigroup on the left; {level} is neither"
            )));
        }
        if !residue.is_semigroup() {
            return Err(Error::Capability(format!(
                "insertion needs an ordered abelian semigroup on the right; {residue} is not one"
            )));
        }
        Ok(Structure::Ins { level: Box::new(level), residue: Box::new(residue), bar })
    }

    pub fn mixed(mut spec: MixedSpec) -> Result<Self> {
        if spec.level == Base::N0 && spec.lo.is_none() {
            spec.lo = Some(BigInt::from(0));
        }
        if !spec.level.is_integral() {
            return Err(Error::Capability("mixed insertion levels must be N0 or Z".into()));
        }
        if let (Some(lo), Some(hi)) = (&spec.lo, &spec.hi) {
            if lo > hi {
                return Err(Error::Invalid(format!("empty level range {lo}..{hi}")));
            }
        }
        if spec.level == Base::N0 && spec.lo.as_ref().is_some_and(|lo| lo < &BigInt::from(0)) {
            return Err(Error::Invalid("N0 levels cannot be negative".into()));
        }
        for (lvl, fiber) in &spec.fibers {
            if !spec.in_range(lvl) {
                return Err(Error::Invalid(format!("fiber level {lvl} lies outside the range")));
            }
            if !fiber.is_semigroup() {
                return Err(Error::Capability(format!("fiber {fiber} at level {lvl} is not a semigroup")));
            }
        }
        if let Some(d) = &spec.default {
            if !d.is_semigroup() {
                return Err(Error::Capability(format!("default fiber {d} is not a semigroup")));
            }
        }
        if spec.default.is_none() {
            let covered = match (&spec.lo, &spec.hi) {
                (Some(lo), Some(hi)) => {
                    let mut l = lo.clone();
                    let mut all = true;
                    while &l <= hi {
                        all &= spec.fibers.contains_key(&l);
                        l += 1;
                    }
                    all
                }
                _ => false,
            };
            if !covered {
                return Err(Error::Invalid("mixed insertion needs a fiber or a default for every level in range".into()));
            }
        }
        Ok(Structure::Mixed(Box::new(spec)))
    }

    pub fn double(inner: Structure) -> Result<Self> {
        if !inner.is_semigroup() {
            return Err(Error::Capability(format!("double needs an ordered semigroup, got {inner}")));
        }
        Ok(Structure::Double(Box::new(inner)))
    }

    /// 𝕊 = ℕ₀ ⊙∧ [0,∞]
    pub fn s() -> Self {
        Self::ins(Self::base(Base::N0), Self::base(Base::Rc), false).unwrap()
    }

    /// 𝕆 = ℤ ⊙∧ [0,∞]
    pub fn o() -> Self {
        Self::ins(Self::base(Base::Z), Self::base(Base::Rc), false).unwrap()
    }

    /// ℙ = ℤ ⊙∧ [0,∞)
    pub fn p() -> Self {
        Self::pn(1)
    }

    /// 𝕆̄ = ℤ ⊙̄∧ [0,∞]
    pub fn obar() -> Self {
        Self::on(1)
    }

    /// 𝕊̄ = ℕ₀ ⊙̄∧ [0,∞]
    pub fn sbar() -> Self {
        Self::sn(1)
    }

    fn nested(n: usize, level: Base, innermost: Base, bar: bool) -> Self {
        assert!(n >= 1, "nesting depth must be at least one");
        let mut s = Self::base(innermost);
        for _ in 0..n {
            s = Self::ins(Self::base(level), s, bar).unwrap();
        }
        s
    }

    /// 𝕊̄ₙ: `n` right-nested barred insertions of ℕ₀ ending in [0,∞].
    pub fn sn(n: usize) -> Self {
        Self::nested(n, Base::N0, Base::Rc, true)
    }

    /// 𝕆̄ₙ: `n` right-nested barred insertions of ℤ ending in [0,∞].
    pub fn on(n: usize) -> Self {
        Self::nested(n, Base::Z, Base::Rc, true)
    }

    /// ℙₙ: `n` right-nested insertions of ℤ ending in [0,∞).
    pub fn pn(n: usize) -> Self {
        Self::nested(n, Base::Z, Base::Ro, false)
    }

    pub fn is_bar(&self) -> bool {
        matches!(self, Structure::SIns { bar: true, .. } | Structure::Ins { bar: true, .. })
    }

    /// Ordered abelian group (only ℤ among the supported descriptors).
    pub fn is_group(&self) -> bool {
        matches!(self, Structure::Base(Base::Z))
    }

    /// Ordered abelian semigroup in the sense used here: zero is the least element
    /// and `a + b >= b`.
    pub fn is_semigroup(&self) -> bool {
        !matches!(self, Structure::Base(Base::Z) | Structure::Double(_))
    }

    pub fn is_semiring(&self) -> bool {
        match self {
            Structure::Base(b) => *b != Base::Z,
            Structure::Ins { residue, .. } => residue.is_semiring(),
            _ => false,
        }
    }

    pub fn is_semifield(&self) -> bool {
        match self {
            Structure::Base(Base::Ro) => true,
            Structure::Ins { level, residue, bar: false } => level.is_group() && residue.is_semifield(),
            _ => false,
        }
    }

    pub fn has_top(&self) -> bool {
        match self {
            Structure::Base(b) => matches!(b, Base::Rc | Base::NBar0),
            Structure::SIns { level, residue, bar } | Structure::Ins { level, residue, bar } => {
                *bar || (level.has_top() && residue.has_top())
            }
            Structure::Mixed(_) | Structure::Double(_) => false,
        }
    }

    /// Every nonempty subset has a least element.
    fn is_well_ordered(&self) -> bool {
        matches!(self, Structure::Base(Base::N0 | Base::NBar0))
    }

    /// Every bounded nonempty subset has a greatest element.
    fn has_discrete_maxima(&self) -> bool {
        matches!(self, Structure::Base(Base::N0 | Base::Z | Base::NBar0))
    }

    /// A least element strictly above zero.
    pub fn has_least_positive(&self) -> bool {
        match self {
            Structure::Base(b) => matches!(b, Base::N0 | Base::NBar0),
            Structure::SIns { level, residue, .. } => level.is_well_ordered() && residue.has_least_positive(),
            Structure::Ins { level, residue, .. } => level.is_well_ordered() && residue.has_least_positive(),
            _ => false,
        }
    }

    /// Least upper bound property, following the sufficient conditions for
    /// insertions: discrete level maxima, and a residue structure that either has a
    /// greatest element or a least positive element over a well-ordered level set.
    pub fn has_lub(&self) -> bool {
        match self {
            Structure::Base(_) => true,
            Structure::SIns { level, residue, .. } | Structure::Ins { level, residue, .. } => {
                level.has_discrete_maxima()
                    && residue.has_lub()
                    && (residue.has_top() || (residue.has_least_positive() && level.is_well_ordered()))
            }
            Structure::Mixed(_) | Structure::Double(_) => false,
        }
    }

    /// Every countable sum of positive elements evaluates inside the structure.
    pub fn is_summable(&self) -> bool {
        match self {
            Structure::Base(b) => matches!(b, Base::Rc | Base::NBar0),
            Structure::SIns { bar, .. } | Structure::Ins { bar, .. } => *bar && self.has_lub(),
            _ => false,
        }
    }

    /// Number of right-nested insertion levels above the innermost base
    /// (𝕆̄ₙ and ℙₙ have depth `n`; bases have depth 0).
    pub fn depth(&self) -> usize {
        match self {
            Structure::Ins { residue, .. } | Structure::SIns { residue, .. } => 1 + residue.depth(),
            _ => 0,
        }
    }

    /// Level set and residue structure of an insertion-shaped descriptor.
    pub fn split(&self) -> Option<(&Structure, &Structure)> {
        match self {
            Structure::Ins { level, residue, .. } | Structure::SIns { level, residue, .. } => Some((level, residue)),
            _ => None,
        }
    }

    /// True when this is `ℕ₀` or `ℤ` inserted over a [0,∞]-style base, the shape that
    /// admits real-valued slices.
    pub fn is_simple_level_shape(&self) -> bool {
        matches!(
            self,
            Structure::Ins { level, residue, .. }
                if matches!(**level, Structure::Base(Base::N0 | Base::Z))
                    && matches!(**residue, Structure::Base(Base::Rc | Base::Ro | Base::NBar0))
        )
    }

    /// True for right-nested insertions over integer level bases, i.e. 𝕊̄ₙ/𝕆̄ₙ/ℙₙ-like.
    pub fn is_right_nested(&self) -> bool {
        match self {
            Structure::Ins { level, residue, .. } => {
                matches!(**level, Structure::Base(Base::N0 | Base::Z))
                    && match &**residue {
                        Structure::Base(b) => matches!(b, Base::Rc | Base::Ro | Base::NBar0),
                        inner => inner.is_right_nested(),
                    }
            }
            _ => false,
        }
    }

    /// Level bases from the outside in, for right-nested descriptors.
    pub fn level_bases(&self) -> Vec<Base> {
        let mut out = Vec::new();
        let mut cur = self;
        while let Structure::Ins { level, residue, .. } = cur {
            match **level {
                Structure::Base(b) => out.push(b),
                _ => break,
            }
            cur = residue;
        }
        out
    }

    /// The innermost base of a right-nested descriptor.
    pub fn innermost(&self) -> &Structure {
        let mut cur = self;
        while let Structure::Ins { residue, .. } | Structure::SIns { residue, .. } = cur {
            cur = residue;
        }
        cur
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, s: &Structure) -> fmt::Result {
    match s {
        Structure::SIns { .. } | Structure::Ins { .. } => write!(f, "({s})"),
        _ => write!(f, "{s}"),
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Structure::Base(b) => f.write_str(b.name()),
            Structure::SIns { level, residue, bar } | Structure::Ins { level, residue, bar } => {
                let op = match (matches!(self, Structure::Ins { .. }), bar) {
                    (true, false) => "/\\",
                    (true, true) => "b/\\",
                    (false, false) => "\\/",
                    (false, true) => "b\\/",
                };
                write_operand(f, level)?;
                write!(f, " {op} ")?;
                write_operand(f, residue)
            }
            Structure::Double(inner) => write!(f, "double({inner})"),
            Structure::Mixed(spec) => {
                write!(f, "mixed({}; ", spec.level.name())?;
                if let Some(lo) = &spec.lo {
                    write!(f, "{lo}")?;
                }
                f.write_str("..")?;
                if let Some(hi) = &spec.hi {
                    write!(f, "{hi}")?;
                }
                if !spec.fibers.is_empty() {
                    f.write_str("; ")?;
                    for (i, (lvl, fiber)) in spec.fibers.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{lvl}:{fiber}")?;
                    }
                }
                if let Some(d) = &spec.default {
                    write!(f, "; default:{d}")?;
                }
                f.write_str(")")
            }
        }
    }
}
