//! Probability ℙ- and ℙₙ-measures on atom spaces.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::integrate::integrate_lvalued;
use crate::measure::{Event, LMeasure};
use crate::structure::{Base, Structure, Value};
use crate::xreal::XReal;

/// Deepest ℙₙ supported.
pub const MAX_NESTING: usize = 3;

/// `n` when `d` is ℙₙ.
pub fn p_depth(d: &Structure) -> Option<usize> {
    let n = d.depth();
    (n >= 1 && *d == Structure::pn(n)).then_some(n)
}

fn require_p(m: &LMeasure) -> Result<usize> {
    match p_depth(m.desc()) {
        Some(n) if n <= MAX_NESTING => Ok(n),
        Some(n) => Err(Error::Capability(format!("probability measures are supported up to Pn({MAX_NESTING}), got Pn({n})"))),
        None => Err(Error::Capability(format!("probability measures take values in P or Pn(n), got {}", m.desc()))),
    }
}

/// Level tuple and innermost residue of a nonzero ℙₙ value.
fn unfold(v: &Value) -> Option<(Vec<BigInt>, XReal)> {
    let mut levels = Vec::new();
    let mut cur = v;
    loop {
        match cur {
            Value::Pair(g, r) => {
                levels.push(g.as_int()?.clone());
                cur = r;
            }
            Value::Real(x) => return Some((levels, x.clone())),
            _ => return None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelMass {
    pub level: String,
    pub mass: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbabilityReport {
    pub structure: String,
    pub levels: Vec<LevelMass>,
    pub conditions: Vec<Condition>,
    pub is_probability: bool,
    pub is_standard: bool,
    pub total_depth: Option<String>,
}

fn cond(name: &str, passed: bool, detail: impl Into<String>) -> Condition {
    Condition { name: name.into(), passed, detail: detail.into() }
}

fn tuple_string(t: &[BigInt]) -> String {
    let parts: Vec<String> = t.iter().map(ToString::to_string).collect();
    if parts.len() == 1 {
        parts[0].clone()
    } else {
        format!("({})", parts.join(","))
    }
}

/// Residue totals grouped by full level tuple.
fn masses_by_tuple(m: &LMeasure) -> BTreeMap<Vec<BigInt>, XReal> {
    let mut out: BTreeMap<Vec<BigInt>, XReal> = BTreeMap::new();
    for v in m.values() {
        if let Some((t, s)) = unfold(v) {
            let slot = out.entry(t).or_insert_with(XReal::zero);
            *slot = slot.add(&s);
        }
    }
    out
}

/// Standard form for ℙ: levels fill `[-d, 0]` with both ends attained.
fn standard_depth(m: &LMeasure) -> Result<Option<BigInt>> {
    let levels = m.attained_levels()?;
    let (Some(lo), Some(hi)) = (levels.first(), levels.last()) else { return Ok(None) };
    Ok((hi.is_zero() && m.is_proximal()?).then(|| -lo))
}

/// Condition (iv) for ℙₙ read literally: every tuple lexicographically above an
/// attained one, with all components at most 0, is attained too. On a finite
/// space this forces all but the last component to be 0.
fn pn_no_gaps(tuples: &BTreeSet<Vec<BigInt>>) -> (bool, String) {
    for t in tuples {
        if let Some(pos) = t[..t.len() - 1].iter().position(|c| !c.is_zero()) {
            return (
                false,
                format!("{} leaves infinitely many higher tuples unattained at position {}", tuple_string(t), pos + 1),
            );
        }
        let last = t.last().expect("nonempty tuple");
        let mut j: BigInt = last + 1;
        while j <= BigInt::zero() {
            let mut want = t.clone();
            *want.last_mut().expect("nonempty") = j.clone();
            if !tuples.contains(&want) {
                return (false, format!("{} is attained but {} is not", tuple_string(t), tuple_string(&want)));
            }
            j += 1;
        }
    }
    (true, "no gaps above any attained level".into())
}

pub fn validate_probability(m: &LMeasure) -> Result<ProbabilityReport> {
    let n = require_p(m)?;
    let masses = masses_by_tuple(m);
    let levels = masses.iter().map(|(t, s)| LevelMass { level: tuple_string(t), mass: s.to_string() }).collect();
    let mut conditions =
        vec![cond("(i) the empty event has measure 0", m.measure(&Event::empty())? == Value::Zero, "sum over no atoms")];
    let (is_standard, total_depth);
    if n == 1 {
        let bad: Vec<String> = masses
            .iter()
            .filter(|(_, s)| **s != XReal::one())
            .map(|(t, s)| format!("level {} has mass {s}", tuple_string(t)))
            .collect();
        conditions.push(cond(
            "(ii) each attained level has total mass 1",
            bad.is_empty(),
            if bad.is_empty() { "every level sums to 1".to_string() } else { bad.join("; ") },
        ));
        let d = standard_depth(m)?;
        is_standard = d.is_some();
        total_depth = d.map(|d| d.to_string());
    } else {
        let positive = masses.keys().find(|t| t.iter().any(Signed::is_positive));
        let heavy = masses.iter().find(|(_, s)| **s > XReal::one());
        let ok = positive.is_none() && heavy.is_none();
        let detail = match (positive, heavy) {
            (Some(t), _) => format!("level {} has a positive component", tuple_string(t)),
            (None, Some((t, s))) => format!("level {} collects mass {s}", tuple_string(t)),
            (None, None) => "all level components are at most 0 and all masses at most 1".into(),
        };
        conditions.push(cond("(ii) level components at most 0 and residues at most 1", ok, detail));
        let tuples: BTreeSet<Vec<BigInt>> = masses.keys().cloned().collect();
        let (gapless, detail) = pn_no_gaps(&tuples);
        conditions.push(cond("(iv) no gaps above attained levels", gapless, detail));
        is_standard = ok && gapless;
        total_depth = None;
    }
    conditions.push(cond("(iii) additivity over disjoint events", true, "measures of events are sums over atoms"));
    conditions.push(cond("finite depth", true, format!("{} attained levels", masses.len())));
    let is_probability = conditions.iter().filter(|c| !c.name.starts_with("(iv)")).all(|c| c.passed);
    Ok(ProbabilityReport {
        structure: m.desc().to_string(),
        levels,
        conditions,
        is_probability,
        is_standard: is_probability && is_standard,
        total_depth,
    })
}

fn require_probability(m: &LMeasure) -> Result<ProbabilityReport> {
    let r = validate_probability(m)?;
    if !r.is_probability {
        let failed: Vec<&str> = r.conditions.iter().filter(|c| !c.passed).map(|c| c.detail.as_str()).collect();
        return Err(Error::Domain(format!("not a probability measure: {}", failed.join("; "))));
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Standardized {
    pub measure: LMeasure,
    pub shift: BigInt,
    pub total_depth: BigInt,
}

/// Closes interior level gaps, then shifts so that the largest level is 0.
pub fn standardize(m: &LMeasure) -> Result<Standardized> {
    require_probability(m)?;
    let aligned = m.align_levels()?;
    let levels = aligned.attained_levels()?;
    let (Some(lo), Some(hi)) = (levels.first(), levels.last()) else {
        return Err(Error::Domain("a zero measure has no depth".into()));
    };
    let shift = -hi.clone();
    let total_depth = hi - lo;
    let measure = aligned.shift_levels(&shift)?;
    Ok(Standardized { measure, shift, total_depth })
}

/// `j` with `𝔏(ν(E)) = -j` on a standard measure.
pub fn depth(m: &LMeasure, e: &Event) -> Result<BigInt> {
    let r = require_probability(m)?;
    if !r.is_standard {
        return Err(Error::Domain("depth is defined on standard measures; standardize first".into()));
    }
    match m.measure(e)? {
        Value::Pair(g, _) => Ok(-g.as_int().expect("integer level").clone()),
        _ => Err(Error::Domain("an event of measure 0 has no depth".into())),
    }
}

fn divide(d: &Structure, x: &Value, y: &Value) -> Result<Value> {
    if d.is_zero(y) {
        return Err(Error::Domain("conditioning on an event of measure 0".into()));
    }
    if d.is_zero(x) {
        return Ok(d.zero());
    }
    d.mul(x, &d.inv(y)?)
}

/// `P(A|B) = ν(A∩B)/ν(B)`.
pub fn cond_prob(m: &LMeasure, a: &Event, b: &Event) -> Result<Value> {
    require_p(m)?;
    divide(m.desc(), &m.measure(&a.intersection(b))?, &m.measure(b)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BayesRow {
    pub cell: String,
    pub prior: String,
    pub likelihood: String,
    pub joint: String,
    pub posterior: String,
    pub direct: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BayesTable {
    pub given: String,
    pub rows: Vec<BayesRow>,
    pub total: String,
    pub measure_of_given: String,
    pub consistent: bool,
}

/// Checks that `cells` are pairwise disjoint, cover the space and have positive mass.
pub fn check_partition(m: &LMeasure, cells: &[Event]) -> Result<()> {
    let mut seen = Event::empty();
    for (i, c) in cells.iter().enumerate() {
        if !seen.is_disjoint(c) {
            return Err(Error::Invalid(format!("partition cell {} overlaps an earlier cell", i + 1)));
        }
        if m.measure(c)? == Value::Zero {
            return Err(Error::Domain(format!("partition cell {} has measure 0", i + 1)));
        }
        seen = seen.union(c);
    }
    if seen != m.whole() {
        let missing = m.space().describe(&Event(m.whole().0.difference(&seen.0).copied().collect())).join(",");
        return Err(Error::Invalid(format!("partition misses atoms {missing}")));
    }
    Ok(())
}

/// Posteriors `P(A_i|B)` through Bayes' formula, each checked against the direct
/// conditional probability.
pub fn bayes(m: &LMeasure, cells: &[(String, Event)], b: &Event, exec: Exec) -> Result<BayesTable> {
    require_p(m)?;
    let d = m.desc();
    let events: Vec<Event> = cells.iter().map(|(_, e)| e.clone()).collect();
    check_partition(m, &events)?;
    let nu_b = m.measure(b)?;
    if d.is_zero(&nu_b) {
        return Err(Error::Domain("conditioning on an event of measure 0".into()));
    }
    let parts: Vec<Result<(Value, Value, Value)>> = exec.map(&events, |a| {
        let prior = m.measure(a)?;
        let likelihood = cond_prob(m, b, a)?;
        let joint = if d.is_zero(&likelihood) { d.zero() } else { d.mul(&likelihood, &prior)? };
        Ok((prior, likelihood, joint))
    });
    let parts = parts.into_iter().collect::<Result<Vec<_>>>()?;
    let total = parts.iter().try_fold(d.zero(), |acc, (_, _, j)| d.add(&acc, j))?;
    let mut consistent = total == nu_b;
    let mut rows = Vec::with_capacity(cells.len());
    for ((name, a), (prior, likelihood, joint)) in cells.iter().zip(parts) {
        let posterior = divide(d, &joint, &total)?;
        let direct = cond_prob(m, a, b)?;
        consistent &= posterior == direct;
        rows.push(BayesRow {
            cell: name.clone(),
            prior: prior.to_string(),
            likelihood: likelihood.to_string(),
            joint: joint.to_string(),
            posterior: posterior.to_string(),
            direct: direct.to_string(),
        });
    }
    Ok(BayesTable {
        given: m.space().describe(b).join(","),
        rows,
        total: total.to_string(),
        measure_of_given: nu_b.to_string(),
        consistent,
    })
}

/// `ν(E) = ∫_E f dμ` for a ℙ-valued density `f`, rescaled level by level so that
/// every attained level has total mass 1.
pub fn normalize_from_density(mu: &LMeasure, f: &[Value]) -> Result<LMeasure> {
    let p = Structure::p();
    let k = mu.desc();
    if !k.is_simple_level_shape() || k.level_bases() != [Base::Z] {
        return Err(Error::Capability(format!("densities integrate against P- or O-measures, got {k}")));
    }
    let raw = (0..mu.space().len())
        .map(|i| {
            let v = integrate_lvalued(mu, &p, f, &Event::from_indices([i]))?;
            match &v {
                Value::Top => Err(Error::NotInP(format!("atom {:?} integrates to top", mu.space().atoms()[i]))),
                Value::Pair(_, r) if r.as_real().is_some_and(XReal::is_inf) => {
                    Err(Error::NotInP(format!("atom {:?} integrates to {v}", mu.space().atoms()[i])))
                }
                _ => Ok(v),
            }
        })
        .collect::<Result<Vec<Value>>>()?;
    let mut totals: BTreeMap<BigInt, XReal> = BTreeMap::new();
    for v in &raw {
        if let Some((g, r)) = v.as_pair() {
            let slot = totals.entry(g.as_int().expect("integer level").clone()).or_insert_with(XReal::zero);
            *slot = slot.add(r.as_real().expect("real residue"));
        }
    }
    let values = raw
        .into_iter()
        .map(|v| match v.as_pair() {
            Some((g, r)) => {
                let total = &totals[g.as_int().expect("integer level")];
                Ok(Value::pair(g.clone(), Value::Real(r.as_real().expect("real residue").div(total)?)))
            }
            None => Ok(Value::Zero),
        })
        .collect::<Result<Vec<Value>>>()?;
    LMeasure::new(p, mu.space().clone(), values)
}
