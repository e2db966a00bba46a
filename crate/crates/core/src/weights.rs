//! L-weight systems on branched graphs, branch equations and multiplier cocycles.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::prob::p_depth;
use crate::structure::{Structure, Value};
use crate::xreal::XReal;

/// A sector end: sector id plus an end tag such as `head` or `tail`.
pub type End = (String, String);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Switch {
    pub name: String,
    pub side1: Vec<End>,
    pub side2: Vec<End>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchedGraph {
    sectors: Vec<String>,
    switches: Vec<Switch>,
}

impl BranchedGraph {
    pub fn new(sectors: Vec<String>, switches: Vec<Switch>) -> Result<Self> {
        let mut known = HashMap::new();
        for (i, s) in sectors.iter().enumerate() {
            if known.insert(s.as_str(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate sector {s:?}")));
            }
        }
        let mut used: HashMap<&End, &str> = HashMap::new();
        for sw in &switches {
            if sw.side1.is_empty() || sw.side2.is_empty() {
                return Err(Error::Invalid(format!("switch {} needs at least one sector end per side", sw.name)));
            }
            for end in sw.side1.iter().chain(&sw.side2) {
                if !known.contains_key(end.0.as_str()) {
                    return Err(Error::Invalid(format!("switch {} names unknown sector {:?}", sw.name, end.0)));
                }
                if let Some(prev) = used.insert(end, &sw.name) {
                    return Err(Error::Invalid(format!("sector end {}.{} appears in {prev} and {}", end.0, end.1, sw.name)));
                }
            }
        }
        Ok(BranchedGraph { sectors, switches })
    }

    pub fn sectors(&self) -> &[String] {
        &self.sectors
    }

    pub fn switches(&self) -> &[Switch] {
        &self.switches
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSystem {
    pub desc: Structure,
    pub weights: BTreeMap<String, Value>,
}

impl WeightSystem {
    pub fn new(desc: Structure, weights: BTreeMap<String, Value>) -> Result<Self> {
        if !desc.is_semiring() {
            return Err(Error::Capability(format!("weights are multiplied by scalars, so {desc} must be a semiring")));
        }
        for (s, v) in &weights {
            desc.check(v).map_err(|e| Error::Shape(format!("weight of {s}: {e}")))?;
        }
        Ok(WeightSystem { desc, weights })
    }

    fn weight(&self, sector: &str) -> Result<&Value> {
        self.weights.get(sector).ok_or_else(|| Error::Invalid(format!("no weight for sector {sector:?}")))
    }
}

/// Multipliers picked up by sector ends that cross a cohomology curve.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Cocycle {
    pub crossings: BTreeMap<End, Value>,
}

impl Cocycle {
    pub fn multiplier(&self, end: &End) -> Option<&Value> {
        self.crossings.get(end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SwitchOutcome {
    pub name: String,
    pub side1: String,
    pub side2: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchReport {
    pub structure: String,
    pub switches: Vec<SwitchOutcome>,
    pub passed: bool,
}

fn check_cocycle(w: &WeightSystem, c: &Cocycle) -> Result<()> {
    for (end, m) in &c.crossings {
        w.desc.check(m).map_err(|e| Error::Shape(format!("multiplier at {}.{}: {e}", end.0, end.1)))?;
        if w.desc.is_zero(m) || *m == Value::Top {
            return Err(Error::Domain(format!("multiplier at {}.{} must be a unit, got {m}", end.0, end.1)));
        }
    }
    Ok(())
}

fn side_sum(w: &WeightSystem, c: &Cocycle, side: &[End]) -> Result<Value> {
    side.iter().try_fold(w.desc.zero(), |acc, end| {
        let x = w.weight(&end.0)?;
        let x = match c.multiplier(end) {
            Some(m) => w.desc.mul(m, x)?,
            None => x.clone(),
        };
        w.desc.add(&acc, &x)
    })
}

/// At every switch, the multiplier-weighted sums of the two sides agree.
pub fn check_branch_equations(g: &BranchedGraph, w: &WeightSystem, c: &Cocycle, exec: Exec) -> Result<BranchReport> {
    for s in g.sectors() {
        w.weight(s)?;
    }
    check_cocycle(w, c)?;
    let per: Vec<Result<SwitchOutcome>> = exec.map(g.switches(), |sw| {
        let (a, b) = (side_sum(w, c, &sw.side1)?, side_sum(w, c, &sw.side2)?);
        Ok(SwitchOutcome { name: sw.name.clone(), holds: a == b, side1: a.to_string(), side2: b.to_string() })
    });
    let switches = per.into_iter().collect::<Result<Vec<_>>>()?;
    let passed = switches.iter().all(|s| s.holds);
    Ok(BranchReport { structure: w.desc.to_string(), switches, passed })
}

/// Multiplies every weight by the unit `lambda`.
pub fn apply_deck(w: &WeightSystem, lambda: &Value) -> Result<WeightSystem> {
    let d = &w.desc;
    d.check(lambda)?;
    if d.is_zero(lambda) {
        return Err(Error::Domain("the deck scalar must be nonzero".into()));
    }
    if d.is_semifield() {
        d.inv(lambda)?;
    } else if *lambda == Value::Top {
        return Err(Error::Domain("the deck scalar must be invertible".into()));
    }
    let weights = w.weights.iter().map(|(s, v)| Ok((s.clone(), d.mul(lambda, v)?))).collect::<Result<_>>()?;
    WeightSystem::new(d.clone(), weights)
}

/// Divides the weight of `sector` by `u` and multiplies the multiplier of each of
/// its ends that appears in a switch by `u`.
pub fn gauge(g: &BranchedGraph, w: &WeightSystem, c: &Cocycle, sector: &str, u: &Value) -> Result<(WeightSystem, Cocycle)> {
    let d = &w.desc;
    let inv = d.inv(u)?;
    let mut w2 = w.clone();
    let x = w.weight(sector)?;
    w2.weights.insert(sector.to_string(), d.mul(&inv, x)?);
    let mut c2 = c.clone();
    for end in g.switches().iter().flat_map(|s| s.side1.iter().chain(&s.side2)).filter(|e| e.0 == sector) {
        let m = match c.multiplier(end) {
            Some(m) => d.mul(m, u)?,
            None => u.clone(),
        };
        c2.crossings.insert(end.clone(), m);
    }
    Ok((w2, c2))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossingSplit {
    pub sector: String,
    pub end: String,
    pub level_shift: Vec<String>,
    pub stretch: String,
}

/// Level-shift and stretch parts of each multiplier: `n` level maps and one
/// stretch for ℙₙ.
pub fn cocycle_split(desc: &Structure, c: &Cocycle) -> Result<Vec<CrossingSplit>> {
    if p_depth(desc).is_none() {
        return Err(Error::Capability(format!(
            "multipliers split into level shifts and stretches only in P or Pn(n), got {desc}"
        )));
    }
    c.crossings
        .iter()
        .map(|((sector, end), m)| {
            desc.check(m)?;
            let (levels, stretch) = unfold(m).ok_or_else(|| Error::Domain(format!("multiplier {m} is not a unit")))?;
            Ok(CrossingSplit {
                sector: sector.clone(),
                end: end.clone(),
                level_shift: levels.iter().map(ToString::to_string).collect(),
                stretch: stretch.to_string(),
            })
        })
        .collect()
}

/// Rebuilds a multiplier from its level shifts and stretch.
pub fn recombine(levels: &[BigInt], stretch: &XReal) -> Value {
    levels.iter().rev().fold(Value::Real(stretch.clone()), |acc, g| Value::pair(Value::Int(g.clone()), acc))
}

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

#[cfg(test)]
mod tests {
    use super::*;

    fn end(s: &str, e: &str) -> End {
        (s.to_string(), e.to_string())
    }

    fn one_switch(side1: &[&str], side2: &[&str]) -> BranchedGraph {
        let mut sectors: Vec<String> = side1.iter().chain(side2).map(|s| s.to_string()).collect();
        sectors.dedup();
        BranchedGraph::new(
            sectors,
            vec![Switch {
                name: "s".into(),
                side1: side1.iter().map(|s| end(s, "head")).collect(),
                side2: side2.iter().map(|s| end(s, "tail")).collect(),
            }],
        )
        .unwrap()
    }

    fn ws(pairs: &[(&str, Value)]) -> WeightSystem {
        WeightSystem::new(Structure::p(), pairs.iter().map(|(s, v)| (s.to_string(), v.clone())).collect()).unwrap()
    }

    #[test]
    fn branch_equations() {
        let g = one_switch(&["a"], &["b", "c"]);
        let none = Cocycle::default();
        let zero = ws(&[("a", Value::Zero), ("b", Value::Zero), ("c", Value::Zero)]);
        assert!(check_branch_equations(&g, &zero, &none, Exec::Sequential).unwrap().passed);
        let flat = ws(&[("a", Value::lv(0, 2, 1)), ("b", Value::lv(0, 1, 1)), ("c", Value::lv(0, 1, 1))]);
        assert!(check_branch_equations(&g, &flat, &none, Exec::Sequential).unwrap().passed);
        let dominated = ws(&[("a", Value::lv(1, 2, 1)), ("b", Value::lv(1, 2, 1)), ("c", Value::lv(0, 5, 1))]);
        assert!(check_branch_equations(&g, &dominated, &none, Exec::Sequential).unwrap().passed);
        let off = ws(&[("a", Value::lv(1, 2, 1)), ("b", Value::lv(1, 1, 1)), ("c", Value::lv(0, 5, 1))]);
        let r = check_branch_equations(&g, &off, &none, Exec::Sequential).unwrap();
        assert!(!r.passed);
        assert_eq!((r.switches[0].side1.as_str(), r.switches[0].side2.as_str()), ("(1,2)", "(1,1)"));
    }

    #[test]
    fn spring_leaf() {
        let g = BranchedGraph::new(
            vec!["a".into(), "b".into()],
            vec![Switch { name: "s".into(), side1: vec![end("a", "head")], side2: vec![end("a", "tail"), end("b", "tail")] }],
        )
        .unwrap();
        let mut c = Cocycle::default();
        c.crossings.insert(end("a", "tail"), Value::lv(-1, 1, 1));
        let w = ws(&[("a", Value::lv(0, 1, 1)), ("b", Value::lv(0, 1, 1))]);
        assert!(check_branch_equations(&g, &w, &c, Exec::Sequential).unwrap().passed);
        c.crossings.insert(end("a", "tail"), Value::lv(0, 1, 2));
        let w = ws(&[("a", Value::lv(0, 2, 1)), ("b", Value::lv(0, 1, 1))]);
        assert!(check_branch_equations(&g, &w, &c, Exec::Sequential).unwrap().passed);

        let (w2, c2) = gauge(&g, &w, &c, "b", &Value::lv(3, 1, 5)).unwrap();
        assert_eq!(w2.weights["b"], Value::lv(-3, 5, 1));
        assert!(check_branch_equations(&g, &w2, &c2, Exec::Sequential).unwrap().passed);
    }

    #[test]
    fn deck_scaling() {
        let w = ws(&[("a", Value::lv(1, 3, 1)), ("b", Value::lv(1, 1, 2))]);
        let down = apply_deck(&w, &Value::lv(-1, 1, 1)).unwrap();
        assert_eq!(down.weights["a"], Value::lv(0, 3, 1));
        assert_eq!(apply_deck(&w, &Value::lv(0, 1, 1)).unwrap(), w);
        assert_eq!(apply_deck(&w, &Value::lv(0, 1, 2)).unwrap().weights["b"], Value::lv(1, 1, 4));
        assert!(apply_deck(&w, &Value::Zero).is_err());
    }

    #[test]
    fn splitting_multipliers() {
        let mut c = Cocycle::default();
        c.crossings.insert(end("a", "tail"), Value::lv(-1, 1, 1));
        c.crossings.insert(end("b", "tail"), Value::lv(0, 1, 2));
        let s = cocycle_split(&Structure::p(), &c).unwrap();
        assert_eq!((s[0].level_shift.clone(), s[0].stretch.as_str()), (vec!["-1".to_string()], "1"));
        assert_eq!((s[1].level_shift.clone(), s[1].stretch.as_str()), (vec!["0".to_string()], "1/2"));

        let p2 = Structure::pn(2);
        let mut c = Cocycle::default();
        let alpha = Value::pair(Value::int(-1), Value::lv(0, 1, 1));
        let beta = Value::pair(Value::int(0), Value::lv(-1, 1, 1));
        c.crossings.insert(end("a", "tail"), alpha.clone());
        c.crossings.insert(end("c", "tail"), beta.clone());
        let s = cocycle_split(&p2, &c).unwrap();
        assert_eq!(s[0].level_shift, vec!["-1", "0"]);
        assert_eq!(s[1].level_shift, vec!["0", "-1"]);
        assert_eq!(recombine(&[BigInt::from(-1), BigInt::from(0)], &XReal::one()), alpha);
        assert!(cocycle_split(&Structure::o(), &c).is_err());
    }

    #[test]
    fn malformed_graphs() {
        let sw = |s1: Vec<End>, s2: Vec<End>| Switch { name: "s".into(), side1: s1, side2: s2 };
        assert!(BranchedGraph::new(vec!["a".into()], vec![sw(vec![end("a", "head")], vec![end("x", "tail")])]).is_err());
        assert!(BranchedGraph::new(vec!["a".into()], vec![sw(vec![end("a", "head")], vec![end("a", "head")])]).is_err());
        assert!(BranchedGraph::new(vec!["a".into()], vec![sw(vec![], vec![end("a", "head")])]).is_err());
    }
}
