//! Randomized law suites for the algebraic axioms.
//!
//! Suites run against the `Arith` trait rather than against `Structure`
//! directly so that a deliberately broken operation can be substituted to show
//! that the suites actually detect violations.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::Result;
use crate::exec::Exec;
use crate::gen;
use crate::structure::{psi, psi_target, Structure, Value};

pub trait Arith: Sync {
    fn structure(&self) -> &Structure;

    fn add(&self, x: &Value, y: &Value) -> Result<Value> {
        self.structure().add(x, y)
    }

    fn mul(&self, x: &Value, y: &Value) -> Result<Value> {
        self.structure().mul(x, y)
    }

    fn inv(&self, x: &Value) -> Result<Value> {
        self.structure().inv(x)
    }

    fn cmp(&self, x: &Value, y: &Value) -> Result<Ordering> {
        self.structure().cmp(x, y)
    }
}

/// The library's own operations.
pub struct Native(pub Structure);

impl Arith for Native {
    fn structure(&self) -> &Structure {
        &self.0
    }
}

/// Addition that keeps the left residue when levels tie instead of adding.
pub struct LeftBiasedAdd(pub Structure);

impl Arith for LeftBiasedAdd {
    fn structure(&self) -> &Structure {
        &self.0
    }

    fn add(&self, x: &Value, y: &Value) -> Result<Value> {
        let d = &self.0;
        if let (Some((g, _)), Some((h, _))) = (x.as_pair(), y.as_pair()) {
            if g == h {
                d.check(x)?;
                d.check(y)?;
                return Ok(x.clone());
            }
        }
        d.add(x, y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawOutcome {
    pub structure: String,
    pub law: String,
    pub cases: usize,
    pub failures: usize,
    pub counterexample: Option<String>,
}

impl LawOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

type Law = fn(&dyn Arith, &[Value; 3]) -> Result<bool>;

fn is_regular(v: &Value) -> bool {
    matches!(v, Value::Pair(..))
}

fn level_structure(d: &Structure) -> &Structure {
    d.split().expect("insertion-shaped").0
}

const ADDITIVE: &[(&str, Law)] = &[
    ("addition is commutative", |a, [x, y, _]| Ok(a.add(x, y)? == a.add(y, x)?)),
    ("addition is associative", |a, [x, y, z]| Ok(a.add(&a.add(x, y)?, z)? == a.add(x, &a.add(y, z)?)?)),
    ("zero is the additive identity", |a, [x, ..]| {
        let zero = a.structure().zero();
        Ok(a.add(x, &zero)? == *x && a.add(&zero, x)? == *x)
    }),
    ("a + b >= b", |a, [x, y, _]| Ok(a.cmp(&a.add(x, y)?, y)? != Ordering::Less)),
    ("addition preserves order", |a, [x, y, z]| {
        let (lo, hi) = if a.cmp(x, y)? == Ordering::Greater { (y, x) } else { (x, y) };
        Ok(a.cmp(&a.add(lo, z)?, &a.add(hi, z)?)? != Ordering::Greater)
    }),
    ("level of a sum is the larger level", |a, [x, y, _]| {
        if !(is_regular(x) && is_regular(y)) {
            return Ok(true);
        }
        let d = a.structure();
        let (gx, gy) = (d.level(x)?, d.level(y)?);
        let max = if level_structure(d).cmp(&gx, &gy)? == Ordering::Less { gy } else { gx };
        Ok(d.level(&a.add(x, y)?)? == max)
    }),
];

const MULTIPLICATIVE: &[(&str, Law)] = &[
    ("multiplication is commutative", |a, [x, y, _]| Ok(a.mul(x, y)? == a.mul(y, x)?)),
    ("multiplication is associative", |a, [x, y, z]| Ok(a.mul(&a.mul(x, y)?, z)? == a.mul(x, &a.mul(y, z)?)?)),
    ("multiplication distributes over addition", |a, [x, y, z]| {
        let left = a.mul(x, &a.add(y, z)?)?;
        let right = a.add(&a.mul(x, y)?, &a.mul(x, z)?)?;
        let left2 = a.mul(&a.add(y, z)?, x)?;
        let right2 = a.add(&a.mul(y, x)?, &a.mul(z, x)?)?;
        Ok(left == right && left2 == right2)
    }),
    ("one is the multiplicative identity", |a, [x, ..]| {
        let one = a.structure().one()?;
        Ok(a.mul(x, &one)? == *x && a.mul(&one, x)? == *x)
    }),
    ("zero is absorbing", |a, [x, ..]| {
        let zero = a.structure().zero();
        Ok(a.mul(x, &zero)? == zero && a.mul(&zero, x)? == zero)
    }),
    ("level of a product is the sum of levels", |a, [x, y, _]| {
        if !(is_regular(x) && is_regular(y)) {
            return Ok(true);
        }
        let d = a.structure();
        let expected = level_structure(d).add(&d.level(x)?, &d.level(y)?)?;
        Ok(d.level(&a.mul(x, y)?)? == expected)
    }),
    ("multiplication preserves order", |a, [x, y, z]| {
        let (lo, hi) = if a.cmp(x, y)? == Ordering::Greater { (y, x) } else { (x, y) };
        Ok(a.cmp(&a.mul(lo, z)?, &a.mul(hi, z)?)? != Ordering::Greater)
    }),
];

const TOP: &[(&str, Law)] = &[("top absorbs addition and nonzero products", |a, [x, ..]| {
    let zero = a.structure().zero();
    let sum_ok = a.add(&Value::Top, x)? == Value::Top;
    let prod = a.mul(&Value::Top, x)?;
    let prod_ok = if *x == zero { prod == zero } else { prod == Value::Top };
    Ok(sum_ok && prod_ok)
})];

const INVERSE: &[(&str, Law)] = &[("x * inv(x) is one", |a, [x, ..]| {
    if !is_regular(x) {
        return Ok(true);
    }
    Ok(a.mul(x, &a.inv(x)?)? == a.structure().one()?)
})];

/// Every law applicable to the structure, in a fixed order.
fn applicable(d: &Structure) -> Vec<(&'static str, Law)> {
    let mut laws: Vec<(&str, Law)> = ADDITIVE.to_vec();
    if d.split().is_none() {
        laws.retain(|(n, _)| !n.starts_with("level"));
    }
    if d.is_semiring() {
        laws.extend_from_slice(MULTIPLICATIVE);
        if d.is_bar() {
            laws.extend_from_slice(TOP);
        }
    }
    if d.is_semifield() {
        laws.extend_from_slice(INVERSE);
    }
    laws
}

/// Runs every applicable law on `cases` random triples drawn from `seed`.
pub fn check_laws(a: &dyn Arith, seed: u64, cases: usize, exec: Exec) -> Vec<LawOutcome> {
    let d = a.structure();
    let laws = applicable(d);
    let stream = stream_of(d);
    let per_case: Vec<Vec<Option<String>>> = exec.map_range(cases, |i| {
        let mut rng = gen::case_rng(seed, stream, i as u64);
        let triple = [gen::value(d, &mut rng), gen::value(d, &mut rng), gen::value(d, &mut rng)];
        laws.iter()
            .map(|(_, law)| match law(a, &triple) {
                Ok(true) => None,
                Ok(false) => Some(format!("x={}, y={}, z={}", triple[0], triple[1], triple[2])),
                Err(e) => Some(format!("x={}, y={}, z={}: {e}", triple[0], triple[1], triple[2])),
            })
            .collect()
    });
    laws.iter()
        .enumerate()
        .map(|(k, (name, _))| {
            let mut failing = per_case.iter().filter_map(|c| c[k].as_ref());
            let counterexample = failing.next().cloned();
            LawOutcome {
                structure: d.to_string(),
                law: (*name).to_string(),
                cases,
                failures: counterexample.iter().count() + failing.count(),
                counterexample,
            }
        })
        .collect()
}

/// ψ on random pairs of `A \/ (B \/ C)`: bijective on the sample, monotone, additive.
pub fn check_psi(d: &Structure, seed: u64, cases: usize, exec: Exec) -> Result<Vec<LawOutcome>> {
    let target = psi_target(d)?;
    let stream = stream_of(d);
    let names = ["psi preserves order", "psi preserves addition", "psi is invertible"];
    let per_case: Vec<[Option<String>; 3]> = exec.map_range(cases, |i| {
        let mut rng = gen::case_rng(seed, stream, i as u64);
        let (x, y) = (gen::value(d, &mut rng), gen::value(d, &mut rng));
        let run = || -> Result<[bool; 3]> {
            let (px, py) = (psi(d, &x)?, psi(d, &y)?);
            let order = d.cmp(&x, &y)? == target.cmp(&px, &py)?;
            let add = psi(d, &d.add(&x, &y)?)? == target.add(&px, &py)?;
            let inv = crate::structure::psi_inverse(&target, &px)? == x;
            Ok([order, add, inv])
        };
        match run() {
            Ok(flags) => flags.map(|ok| (!ok).then(|| format!("x={x}, y={y}"))),
            Err(e) => [0, 1, 2].map(|_| Some(format!("x={x}, y={y}: {e}"))),
        }
    });
    Ok(names
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let mut failing = per_case.iter().filter_map(|c| c[k].as_ref());
            let counterexample = failing.next().cloned();
            LawOutcome {
                structure: d.to_string(),
                law: (*name).to_string(),
                cases,
                failures: counterexample.iter().count() + failing.count(),
                counterexample,
            }
        })
        .collect())
}

/// A stable stream id per structure so that suites on different structures draw
/// independent values from the same seed.
fn stream_of(d: &Structure) -> u64 {
    d.to_string().bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ u64::from(b)).wrapping_mul(0x100_0000_01b3))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn native_laws_hold_on_small_samples() {
        for d in [Structure::s(), Structure::p(), Structure::obar(), Structure::pn(2), Structure::sn(2)] {
            for out in check_laws(&Native(d), 3, 300, Exec::Sequential) {
                assert!(out.passed(), "{out:?}");
            }
        }
    }

    #[test]
    fn mutated_addition_is_caught_by_name() {
        let report = check_laws(&LeftBiasedAdd(Structure::s()), 3, 300, Exec::Sequential);
        let failed: Vec<_> = report.iter().filter(|o| !o.passed()).map(|o| o.law.as_str()).collect();
        assert!(failed.contains(&"addition is commutative"), "{failed:?}");
    }

    #[test]
    fn sequential_and_parallel_reports_match() {
        let a = Native(Structure::o());
        assert_eq!(check_laws(&a, 11, 200, Exec::Sequential), check_laws(&a, 11, 200, Exec::Parallel));
    }

    #[test]
    fn psi_suite_passes() {
        let d: Structure = "N0 \\/ (Rc \\/ N0)".parse().unwrap();
        for out in check_psi(&d, 5, 300, Exec::Parallel).unwrap() {
            assert!(out.passed(), "{out:?}");
        }
    }
}
