//! Deterministic property suites over every module, driven by one seed.
//!
//! Each suite draws its inputs from its own generator stream, so suites can run
//! in any order or in parallel and still report the same outcomes.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use rand::seq::index;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::formats::{builtin_track, BUILTIN_TRACKS};
use crate::gen::{self, case_rng};
use crate::integrate::{integrate_lvalued, integrate_real, integrate_signed};
use crate::laws::{check_laws, check_psi, Arith, LawOutcome, LeftBiasedAdd, Native};
use crate::measure::{verify_open_graded, AtomSpace, Event, LMeasure};
use crate::prob::{bayes, cond_prob, depth, standardize, validate_probability};
use crate::structure::{Base, SeqGen, Structure, Tail, Value};
use crate::tree::{random_tree, verify_metric};
use crate::weights::{apply_deck, check_branch_equations, gauge, BranchedGraph, Cocycle, Switch, WeightSystem};
use crate::xreal::XReal;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub counterexample: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    pub seed: u64,
    /// Scale of the run; `10_000` is the full suite, `1` a smoke run.
    pub cases: usize,
    /// Swap addition for a broken rule so the law suites have something to catch.
    pub mutant: bool,
    pub exec: Exec,
}

pub const SUITES: &[&str] = &["laws", "psi", "sums", "measure", "integrate", "prob", "tree", "weights", "roundtrip"];

pub fn run(suite: &str, opts: &Options) -> Result<Vec<Check>> {
    match suite {
        "laws" => Ok(laws(opts)),
        "psi" => psi_suite(opts),
        "sums" => sums(opts),
        "measure" => measure(opts),
        "integrate" => integrate(opts),
        "prob" => prob(opts),
        "tree" => Ok(trees(opts)),
        "weights" => weights(opts),
        "roundtrip" => Ok(roundtrip(opts)),
        other => Err(Error::Invalid(format!("unknown suite {other:?}; expected one of {}", SUITES.join(", ")))),
    }
}

/// Every suite, in `SUITES` order. An error inside a suite becomes a failed check.
pub fn run_all(opts: &Options) -> Vec<Check> {
    SUITES
        .iter()
        .flat_map(|s| {
            run(s, opts).unwrap_or_else(|e| {
                vec![Check {
                    suite: s.to_string(),
                    name: "suite ran".into(),
                    cases: 1,
                    failures: 1,
                    counterexample: Some(e.to_string()),
                }]
            })
        })
        .collect()
}

fn scaled(cases: usize, div: usize) -> usize {
    (cases / div).max(1)
}

/// Collects per-case results into one check; `None` means the case passed.
fn tally(suite: &str, name: impl Into<String>, results: Vec<Option<String>>) -> Check {
    let mut bad = results.iter().flatten();
    let counterexample = bad.next().cloned();
    Check {
        suite: suite.into(),
        name: name.into(),
        cases: results.len(),
        failures: counterexample.iter().count() + bad.count(),
        counterexample,
    }
}

fn verdict(r: Result<bool>, what: impl FnOnce() -> String) -> Option<String> {
    match r {
        Ok(true) => None,
        Ok(false) => Some(what()),
        Err(e) => Some(format!("{}: {e}", what())),
    }
}

fn from_law(suite: &str, o: LawOutcome) -> Check {
    Check {
        suite: suite.into(),
        name: format!("{} in {}", o.law, o.structure),
        cases: o.cases,
        failures: o.failures,
        counterexample: o.counterexample,
    }
}

pub fn law_structures() -> Vec<Structure> {
    vec![Structure::s(), Structure::o(), Structure::p(), Structure::obar(), Structure::sn(2), Structure::on(2), Structure::pn(2)]
}

fn laws(opts: &Options) -> Vec<Check> {
    law_structures()
        .into_iter()
        .flat_map(|d| {
            let a: Box<dyn Arith> = if opts.mutant { Box::new(LeftBiasedAdd(d)) } else { Box::new(Native(d)) };
            check_laws(a.as_ref(), opts.seed, opts.cases, opts.exec)
        })
        .map(|o| from_law("laws", o))
        .collect()
}

const PSI_STREAM: u64 = 0x70_7369;

/// `A \/ (B \/ C)` for three distinct seeded base choices; `Z` only ever sits in a level slot.
pub fn psi_structures(seed: u64) -> Vec<Structure> {
    let levels = [Base::N0, Base::Z, Base::Rc, Base::Ro, Base::NBar0];
    let residues = [Base::N0, Base::Rc, Base::Ro, Base::NBar0];
    let mut rng = case_rng(seed, PSI_STREAM, 0);
    let mut out = Vec::new();
    while out.len() < 3 {
        let a = Structure::base(levels[rng.random_range(0..levels.len())]);
        let b = Structure::base(levels[rng.random_range(0..levels.len())]);
        let c = Structure::base(residues[rng.random_range(0..residues.len())]);
        if let Ok(d) = Structure::sins(b, c, false).and_then(|bc| Structure::sins(a, bc, false)) {
            if !out.contains(&d) {
                out.push(d);
            }
        }
    }
    out
}

fn psi_suite(opts: &Options) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for d in psi_structures(opts.seed) {
        out.extend(check_psi(&d, opts.seed, opts.cases, opts.exec)?.into_iter().map(|o| from_law("psi", o)));
    }
    Ok(out)
}

const SUMS_STREAM: u64 = 0x73_756d;

/// Closed form for a finite head followed by a constant nonzero tail in a
/// level-over-real insertion: top if anything is top; otherwise the greatest level,
/// with an infinite residue if the tail reaches it and the head's residues there if not.
fn repeat_sum_oracle(head: &[Value], tail: &Value) -> Value {
    if *tail == Value::Top || head.contains(&Value::Top) {
        return Value::Top;
    }
    let level = |v: &Value| v.as_pair().map(|(g, _)| g.as_int().expect("integer level").clone());
    let tail_level = level(tail).expect("nonzero tail");
    let top = head.iter().filter_map(level).chain([tail_level.clone()]).max().expect("nonempty");
    if top == tail_level {
        return Value::pair(Value::Int(top), Value::inf());
    }
    let residue = head
        .iter()
        .filter(|v| level(v).as_ref() == Some(&top))
        .map(|v| v.as_pair().unwrap().1.as_real().unwrap().clone())
        .fold(XReal::zero(), |a, b| a.add(&b));
    Value::pair(Value::Int(top), Value::Real(residue))
}

fn grid_structure(n: usize) -> Structure {
    let n0 = Structure::base(Base::N0);
    (1..n).fold(n0.clone(), |acc, _| Structure::sins(n0.clone(), acc, false).expect("s-insertion of N0"))
}

fn grid_value(coords: &[u32]) -> Value {
    match coords {
        [a] => Value::int(*a),
        [a, rest @ ..] => Value::pair(Value::int(*a), grid_value(rest)),
        [] => unreachable!("nonempty grid point"),
    }
}

fn grid_point(n: usize, mut ix: usize) -> Vec<u32> {
    let mut c = vec![0; n];
    for slot in c.iter_mut().rev() {
        *slot = (ix % GRID) as u32;
        ix /= GRID;
    }
    c
}

const GRID: usize = 5;
/// Set sizes whose number of subsets stays below this are enumerated in full.
pub const EXHAUSTIVE_SUBSETS: u64 = 250_000;

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

fn sup_check(d: &Structure, n: usize, set: &[usize]) -> Option<String> {
    let points: Vec<Vec<u32>> = set.iter().map(|&i| grid_point(n, i)).collect();
    let expected = grid_value(points.iter().max().expect("nonempty"));
    let values: Vec<Value> = points.iter().map(|p| grid_value(p)).collect();
    match d.sup_finite(&values) {
        Ok(v) if v == expected => None,
        Ok(v) => Some(format!("sup of {points:?} gave {v}, expected {expected}")),
        Err(e) => Some(format!("sup of {points:?}: {e}")),
    }
}

fn sums(opts: &Options) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let ramp_real =
        SeqGen { head: vec![], tail: Tail::LevelRamp { start: 1.into(), step: 1.into(), residue: Value::Real(XReal::one()) } };
    out.push(tally(
        "sums",
        "sum of (n,1) over n >= 1 is top in Obar",
        vec![verdict(Structure::obar().sum_sequence(&ramp_real).map(|v| v == Value::Top), || "sum of (n,1)".into())],
    ));

    let repeat_structures = [Structure::sbar(), Structure::obar(), Structure::s(), Structure::o()];
    let n = scaled(opts.cases, 10);
    let results = opts.exec.map_range(n, |i| {
        let d = &repeat_structures[i % repeat_structures.len()];
        let mut rng = case_rng(opts.seed, SUMS_STREAM, i as u64);
        let head: Vec<Value> = (0..rng.random_range(0..4)).map(|_| gen::value(d, &mut rng)).collect();
        let tail = if d.has_top() && rng.random_ratio(1, 10) { Value::Top } else { gen::nonzero_finite(d, &mut rng) };
        let expected = repeat_sum_oracle(&head, &tail);
        let seq = SeqGen { head, tail: Tail::Repeat(tail) };
        match d.sum_sequence(&seq) {
            Ok(v) if v == expected => None,
            Ok(v) => Some(format!("{d}: {seq:?} summed to {v}, expected {expected}")),
            Err(e) => Some(format!("{d}: {seq:?}: {e}")),
        }
    });
    out.push(tally("sums", "constant tails sum to the max-level closed form", results));

    let ramps = |d: Structure, want: fn(&Result<Value>, &Value) -> bool| {
        opts.exec.map_range(n, |i| {
            let mut rng = case_rng(opts.seed, SUMS_STREAM + 1, i as u64);
            let level = Value::int(rng.random_range(0..6u32));
            let start = XReal::ratio(rng.random_range(0..8u32), rng.random_range(1..4u32)).expect("ratio");
            let step = XReal::ratio(rng.random_range(1..8u32), rng.random_range(1..4u32)).expect("ratio");
            let seq = SeqGen { head: vec![], tail: Tail::ResidueRamp { level: level.clone(), start, step } };
            let got = d.sup_sequence(&seq);
            (!want(&got, &level)).then(|| format!("{d}: {seq:?} gave {got:?}"))
        })
    };
    out.push(tally(
        "sums",
        "sup of (i,t) over growing t is (i,inf) in S",
        ramps(Structure::s(), |got, level| *got == Ok(Value::pair(level.clone(), Value::inf()))),
    ));
    out.push(tally(
        "sums",
        "sup of (i,t) over growing t is not representable in P",
        ramps(Structure::p(), |got, _| matches!(got, Err(Error::NotRepresentable(_)))),
    ));

    let samples = (opts.cases * 2).min(20_000);
    for n in 1..=4usize {
        let d = grid_structure(n);
        let points = GRID.pow(n as u32);
        let mut results = Vec::new();
        for size in 1..=6usize.min(points) {
            if binomial(points as u64, size as u64) <= EXHAUSTIVE_SUBSETS {
                let sets: Vec<Vec<usize>> = (0..points).combinations(size).collect();
                results.extend(opts.exec.map(&sets, |s| sup_check(&d, n, s)));
            } else {
                results.extend(opts.exec.map_range(samples, |i| {
                    let mut rng = case_rng(opts.seed, SUMS_STREAM + 2 + n as u64, (size * 1_000_000 + i) as u64);
                    sup_check(&d, n, &index::sample(&mut rng, points, size).into_vec())
                }));
            }
        }
        out.push(tally("sums", format!("finite sup is the lexicographic maximum in {d}"), results));
    }
    Ok(out)
}

const MEASURE_STREAM: u64 = 0x6d_6561;

fn random_space(n: usize) -> AtomSpace {
    AtomSpace::new((0..n).map(|i| format!("a{i}"))).expect("distinct atoms")
}

/// A random measure with no top atoms and at least one nonzero atom.
fn random_measure<R: Rng>(d: &Structure, n: usize, rng: &mut R) -> LMeasure {
    let mut values: Vec<Value> = (0..n)
        .map(|_| loop {
            let v = gen::value(d, rng);
            if v != Value::Top {
                break v;
            }
        })
        .collect();
    if values.iter().all(|v| d.is_zero(v)) {
        values[0] = gen::nonzero_finite(d, rng);
    }
    LMeasure::new(d.clone(), random_space(n), values).expect("valid measure")
}

fn measure(opts: &Options) -> Result<Vec<Check>> {
    let shapes = [Structure::o(), Structure::p(), Structure::obar(), Structure::s()];
    let n = scaled(opts.cases, 10);
    let mut out = Vec::new();

    let results = opts.exec.map_range(n, |i| {
        let d = &shapes[i % shapes.len()];
        let mut rng = case_rng(opts.seed, MEASURE_STREAM, i as u64);
        let m = random_measure(d, rng.random_range(1..=10), &mut rng);
        let run = || -> Result<bool> {
            let (lo, hi) = m.slice_window()?;
            let back = LMeasure::recover_from_slices(d.clone(), m.space().clone(), &m.slices(&lo, &hi)?)?;
            Ok(back == m)
        };
        verdict(run(), || format!("{d}: {:?}", m.values()))
    });
    out.push(tally("measure", "slices recover the measure", results));

    // Every ordered pair of disjoint events, as a base-3 digit per atom.
    let spaces = scaled(opts.cases, 1000).max(10);
    let mut results = Vec::new();
    for i in 0..spaces {
        let d = &shapes[i % shapes.len()];
        let atoms = 1 + i % 10;
        let mut rng = case_rng(opts.seed, MEASURE_STREAM + 1, i as u64);
        let m = random_measure(d, atoms, &mut rng);
        let table: Vec<Value> = (0..1u64 << atoms).map(|mask| m.measure(&Event::from_mask(mask))).collect::<Result<_>>()?;
        results.extend(opts.exec.map_range(3usize.pow(atoms as u32), |code| {
            let (mut e, mut f, mut c) = (0usize, 0usize, code);
            for a in 0..atoms {
                match c % 3 {
                    1 => e |= 1 << a,
                    2 => f |= 1 << a,
                    _ => {}
                }
                c /= 3;
            }
            verdict(d.add(&table[e], &table[f]).map(|s| s == table[e | f]), || {
                format!("{d}: E={e:b}, F={f:b} in {:?}", m.values())
            })
        }));
    }
    out.push(tally("measure", "measure adds over disjoint events", results));

    let results = opts.exec.map_range(n, |i| {
        let d = &shapes[i % shapes.len()];
        let mut rng = case_rng(opts.seed, MEASURE_STREAM + 2, i as u64);
        let m = random_measure(d, rng.random_range(1..=10), &mut rng);
        let run = || -> Result<bool> {
            let a = m.align_levels()?;
            Ok(a.align_levels()? == a && a.is_proximal()?)
        };
        verdict(run(), || format!("{d}: {:?}", m.values()))
    });
    out.push(tally("measure", "alignment is idempotent and proximal", results));

    let results = opts.exec.map_range(n, |i| {
        let d = &shapes[i % shapes.len()];
        let mut rng = case_rng(opts.seed, MEASURE_STREAM + 3, i as u64);
        let m = random_measure(d, rng.random_range(1..=10), &mut rng);
        let k = if *d == Structure::s() { rng.random_range(0..=4i32) } else { rng.random_range(-4..=4i32) };
        let k = BigInt::from(k);
        verdict(m.shift_levels(&k).and_then(|s| s.shift_levels(&-&k)).map(|b| b == m), || {
            format!("{d}: shift {k} of {:?}", m.values())
        })
    });
    out.push(tally("measure", "shifting down undoes shifting up", results));

    let results = (-5..=5i32).map(|k| verdict(verify_open_graded(&k.into()).map(|r| r.open), || format!("k={k}"))).collect();
    out.push(tally("measure", "sub-level unions of the interval measure are open", results));
    Ok(out)
}

const INTEGRATE_STREAM: u64 = 0x69_6e74;

fn random_real<R: Rng>(rng: &mut R) -> XReal {
    if rng.random_ratio(1, 5) {
        XReal::zero()
    } else {
        XReal::ratio(rng.random_range(1..=8u32), rng.random_range(1..=4u32)).expect("ratio")
    }
}

fn random_event<R: Rng>(n: usize, rng: &mut R) -> Event {
    Event::from_indices((0..n).filter(|_| rng.random_bool(0.5)))
}

fn integrate(opts: &Options) -> Result<Vec<Check>> {
    let shapes = [Structure::o(), Structure::p()];
    let n = scaled(opts.cases, 10);
    let mut out = Vec::new();

    let dirac = {
        let m = LMeasure::new(Structure::o(), random_space(2), vec![Value::lv(-1, 1, 1), Value::lv(0, 1, 1)])?;
        let delta = [Value::lv(1, 1, 1), Value::Zero];
        integrate_lvalued(&m, &Structure::obar(), &delta, &m.whole())
    };
    out.push(tally(
        "integrate",
        "Dirac integrand over an infinitesimal atom gives (0,1)",
        vec![verdict(dirac.map(|v| v == Value::lv(0, 1, 1)), || "Dirac example".into())],
    ));

    let results = opts.exec.map_range(n, |i| {
        let d = &shapes[i % 2];
        let mut rng = case_rng(opts.seed, INTEGRATE_STREAM, i as u64);
        let atoms = rng.random_range(1..=8);
        let m = random_measure(d, atoms, &mut rng);
        let f: Vec<XReal> = (0..atoms).map(|_| random_real(&mut rng)).collect();
        let (mut a, mut b) = (Event::empty(), Event::empty());
        for x in 0..atoms {
            match rng.random_range(0..3) {
                0 => a.0.insert(x),
                1 => b.0.insert(x),
                _ => false,
            };
        }
        let run = || -> Result<bool> {
            let whole = integrate_real(&m, &f, &a.union(&b))?;
            Ok(whole == d.add(&integrate_real(&m, &f, &a)?, &integrate_real(&m, &f, &b)?)?)
        };
        verdict(run(), || format!("{d}: {:?}, f={f:?}, A={a:?}, B={b:?}", m.values()))
    });
    out.push(tally("integrate", "integral adds over disjoint events", results));

    let results = opts.exec.map_range(n, |i| {
        let d = &shapes[i % 2];
        let mut rng = case_rng(opts.seed, INTEGRATE_STREAM + 1, i as u64);
        let atoms = rng.random_range(1..=8);
        let level = rng.random_range(-3..=3i32);
        let residues: Vec<XReal> = (0..atoms).map(|_| random_real(&mut rng)).collect();
        let values = residues
            .iter()
            .map(|r| if r.is_zero() { Value::Zero } else { Value::pair(Value::int(level), Value::Real(r.clone())) })
            .collect();
        let m = LMeasure::new(d.clone(), random_space(atoms), values).expect("valid measure");
        let f: Vec<XReal> = (0..atoms).map(|_| random_real(&mut rng)).collect();
        let e = random_event(atoms, &mut rng);
        let sum = e.iter().map(|x| f[x].mul(&residues[x])).fold(XReal::zero(), |s, t| s.add(&t));
        let expected = if sum.is_zero() { Value::Zero } else { Value::pair(Value::int(level), Value::Real(sum)) };
        verdict(integrate_real(&m, &f, &e).map(|v| v == expected), || {
            format!("{d}: {residues:?} at level {level}, f={f:?}, E={e:?}")
        })
    });
    out.push(tally("integrate", "single-level integral is the weighted sum of residues", results));

    let results = opts.exec.map_range(n, |i| {
        let d = &shapes[i % 2];
        let mut rng = case_rng(opts.seed, INTEGRATE_STREAM + 2, i as u64);
        let atoms = rng.random_range(1..=8);
        let m = random_measure(d, atoms, &mut rng);
        let f: Vec<XReal> = (0..atoms).map(|_| random_real(&mut rng)).collect();
        let c = XReal::ratio(rng.random_range(1..=6u32), rng.random_range(1..=6u32)).expect("ratio");
        let cf: Vec<XReal> = f.iter().map(|x| x.mul(&c)).collect();
        let run = || -> Result<bool> {
            let base = integrate_real(&m, &f, &m.whole())?;
            let scaled = match &base {
                Value::Pair(g, r) => Value::pair((**g).clone(), Value::Real(r.as_real().expect("real").mul(&c))),
                other => other.clone(),
            };
            Ok(integrate_real(&m, &cf, &m.whole())? == scaled)
        };
        verdict(run(), || format!("{d}: {:?}, f={f:?}, c={c}", m.values()))
    });
    out.push(tally("integrate", "scaling the integrand scales the residue", results));

    let (o, obar) = (Structure::o(), Structure::obar());
    let results = opts.exec.map_range(n, |i| {
        let mut rng = case_rng(opts.seed, INTEGRATE_STREAM + 3, i as u64);
        let atoms = rng.random_range(1..=8);
        // the integral lives in the measure's structure, so top is only reachable over Obar
        let d = if i % 2 == 0 { &o } else { &obar };
        let m = random_measure(d, atoms, &mut rng);
        let g: Vec<Value> = (0..atoms).map(|_| gen::value(&obar, &mut rng)).collect();
        let e = random_event(atoms, &mut rng);
        let run = || -> Result<bool> {
            let direct = e.iter().try_fold(obar.zero(), |acc, x| obar.add(&acc, &obar.mul(&g[x], m.atom_value(x))?))?;
            match integrate_lvalued(&m, &obar, &g, &e) {
                Err(Error::NotRepresentable(_)) if direct == Value::Top && !d.has_top() => Ok(true),
                got => Ok(got? == direct),
            }
        };
        verdict(run(), || format!("{:?}, g={g:?}, E={e:?}", m.values()))
    });
    out.push(tally("integrate", "L-valued integral is the sum of products over atoms", results));

    let signed = Structure::double(Structure::o())?;
    let results = opts.exec.map_range(n, |i| {
        let mut rng = case_rng(opts.seed, INTEGRATE_STREAM + 4, i as u64);
        let atoms = rng.random_range(1..=8);
        let m = random_measure(&o, atoms, &mut rng);
        let f: Vec<Value> = (0..atoms).map(|_| gen::value(&signed, &mut rng)).collect();
        let e = random_event(atoms, &mut rng);
        let run = || -> Result<bool> {
            let neg: Vec<Value> = f.iter().map(|v| signed.neg(v)).collect::<Result<_>>()?;
            let a = integrate_signed(&m, &signed, &f, &e)?;
            let b = integrate_signed(&m, &signed, &neg, &e)?;
            Ok(b.value == signed.neg(&a.value)? && a.positive == b.negative && a.negative == b.positive)
        };
        verdict(run(), || format!("{:?}, f={f:?}, E={e:?}", m.values()))
    });
    out.push(tally("integrate", "negating the integrand negates the signed integral", results));
    Ok(out)
}

const PROB_STREAM: u64 = 0x7072_6f62;

/// A probability measure on `n` atoms over some of the levels -2, -1, 0: every used
/// level carries total mass 1.
pub fn random_probability<R: Rng>(n: usize, rng: &mut R) -> LMeasure {
    let mut levels: Vec<i64> = (-2..=0).filter(|_| rng.random_bool(0.6)).collect();
    if levels.is_empty() {
        levels.push(rng.random_range(-2..=0));
    }
    levels.truncate(n);
    let assign: Vec<i64> =
        (0..n).map(|i| if i < levels.len() { levels[i] } else { levels[rng.random_range(0..levels.len())] }).collect();
    let weights: Vec<i64> = (0..n).map(|_| rng.random_range(1..=4)).collect();
    let mut totals: BTreeMap<i64, i64> = BTreeMap::new();
    for (g, w) in assign.iter().zip(&weights) {
        *totals.entry(*g).or_default() += w;
    }
    let values = assign.iter().zip(&weights).map(|(g, w)| Value::lv(*g, *w, totals[g])).collect();
    LMeasure::new(Structure::p(), random_space(n), values).expect("valid measure")
}

fn prob(opts: &Options) -> Result<Vec<Check>> {
    let scenes = scaled(opts.cases, 100);
    let p = Structure::p();
    let per: Vec<[Vec<Option<String>>; 5]> = opts.exec.map_range(scenes, |i| {
        let mut rng = case_rng(opts.seed, PROB_STREAM, i as u64);
        let n = 1 + i % 8;
        let m = random_probability(n, &mut rng);
        let label = || format!("{:?}", m.values());
        let cells_n = rng.random_range(1..=3usize).min(n);
        let mut cells = vec![Event::empty(); cells_n];
        for x in 0..n {
            let c = if x < cells_n { x } else { rng.random_range(0..cells_n) };
            cells[c].0.insert(x);
        }
        let named: Vec<(String, Event)> = cells.iter().enumerate().map(|(k, e)| (format!("C{k}"), e.clone())).collect();
        let events: Vec<Event> = (0..1u64 << n).map(Event::from_mask).collect();

        let valid = vec![verdict(validate_probability(&m).map(|r| r.is_probability), label)];

        let total = events
            .iter()
            .map(|b| {
                let run = || -> Result<bool> {
                    let sum = cells.iter().try_fold(p.zero(), |acc, a| {
                        let term = p.mul(&cond_prob(&m, b, a)?, &m.measure(a)?)?;
                        p.add(&acc, &term)
                    })?;
                    Ok(sum == m.measure(b)?)
                };
                verdict(run(), || format!("{} with B={b:?}", label()))
            })
            .collect();

        let posterior = events
            .iter()
            .filter(|b| !m.measure(b).map(|v| p.is_zero(&v)).unwrap_or(true))
            .map(|b| {
                verdict(bayes(&m, &named, b, Exec::Sequential).map(|t| t.consistent), || format!("{} with B={b:?}", label()))
            })
            .collect();

        let k = BigInt::from(rng.random_range(-3..=3i32));
        let (a, b) = (random_event(n, &mut rng), m.whole());
        let shift = vec![verdict(m.shift_levels(&k).and_then(|s| Ok(cond_prob(&s, &a, &b)? == cond_prob(&m, &a, &b)?)), || {
            format!("{} shifted by {k}", label())
        })];

        let depths = match standardize(&m) {
            Err(e) => vec![Some(format!("{}: {e}", label()))],
            Ok(s) => events
                .iter()
                .filter(|e| !e.is_empty())
                .map(|e| {
                    verdict(depth(&s.measure, e).map(|j| j >= BigInt::from(0) && j <= s.total_depth), || {
                        format!("{} event {e:?}", label())
                    })
                })
                .collect(),
        };
        [valid, total, posterior, shift, depths]
    });
    let names = [
        "random level-normalized scenes are probability measures",
        "law of total probability over a partition, every event",
        "Bayes posteriors equal direct conditionals, every event",
        "conditionals are invariant under level shifts",
        "depths of a standardized measure lie in [0, total depth]",
    ];
    Ok(names.iter().enumerate().map(|(k, name)| tally("prob", *name, per.iter().flat_map(|c| c[k].clone()).collect())).collect())
}

const TREE_STREAM: u64 = 0x74_7265;

fn trees(opts: &Options) -> Vec<Check> {
    let count = scaled(opts.cases, 50);
    let shapes = [Structure::o(), Structure::obar(), Structure::s(), Structure::p(), Structure::on(2)];
    let reports = opts.exec.map_range(count, |i| {
        let d = &shapes[i % shapes.len()];
        let n = 1 + i % crate::tree::EXHAUSTIVE_LIMIT;
        let t = random_tree(d, n, opts.seed, TREE_STREAM + i as u64);
        (d.to_string(), verify_metric(&t, opts.seed, 0, Exec::Sequential))
    });
    let mut out: Vec<Check> = Vec::new();
    for (i, (d, r)) in reports.iter().enumerate() {
        for (k, o) in r.outcomes.iter().enumerate() {
            if out.len() <= k {
                out.push(Check { suite: "tree".into(), name: o.name.clone(), cases: 0, failures: 0, counterexample: None });
            }
            let c = &mut out[k];
            c.cases += o.checked;
            c.failures += o.failures;
            if c.counterexample.is_none() {
                c.counterexample = o.counterexample.as_ref().map(|x| format!("tree {i} over {d}: {x}"));
            }
        }
    }
    out.push(Check {
        suite: "tree".into(),
        name: "random trees checked on every triple".into(),
        cases: count,
        failures: 0,
        counterexample: None,
    });
    out
}

const WEIGHTS_STREAM: u64 = 0x7765_6967;

fn weights(opts: &Options) -> Result<Vec<Check>> {
    let tracks: Vec<_> = BUILTIN_TRACKS.iter().map(|(name, _)| (*name, builtin_track(name).expect("shipped"))).collect();
    let mut out = Vec::new();
    let results = tracks
        .iter()
        .map(|(name, t)| {
            verdict(check_branch_equations(&t.graph, &t.weights, &t.cocycle, opts.exec).map(|r| r.passed), || name.to_string())
        })
        .collect();
    out.push(tally("weights", "example tracks satisfy the branch equations", results));

    let scalars = scaled(opts.cases, 100);
    let mut results = Vec::new();
    for (k, (name, t)) in tracks.iter().enumerate() {
        results.extend(opts.exec.map_range(scalars, |i| {
            let mut rng = case_rng(opts.seed, WEIGHTS_STREAM + k as u64, i as u64);
            let lambda = gen::nonzero_finite(&t.weights.desc, &mut rng);
            let run = || -> Result<bool> {
                let w = apply_deck(&t.weights, &lambda)?;
                Ok(check_branch_equations(&t.graph, &w, &t.cocycle, Exec::Sequential)?.passed)
            };
            verdict(run(), || format!("{name} scaled by {lambda}"))
        }));
    }
    out.push(tally("weights", "deck scalars preserve the branch equations", results));

    let systems = scaled(opts.cases, 100);
    let results = opts.exec.map_range(systems, |i| {
        let mut rng = case_rng(opts.seed, WEIGHTS_STREAM + 100, i as u64);
        let d = if i % 2 == 0 { Structure::p() } else { Structure::pn(2) };
        let (g, w, c) = random_system(&d, &mut rng);
        let sector = g.sectors()[rng.random_range(0..g.sectors().len())].clone();
        let u = gen::nonzero_finite(&d, &mut rng);
        let run = || -> Result<bool> {
            let before = check_branch_equations(&g, &w, &c, Exec::Sequential)?;
            let (w2, c2) = gauge(&g, &w, &c, &sector, &u)?;
            Ok(check_branch_equations(&g, &w2, &c2, Exec::Sequential)? == before)
        };
        verdict(run(), || format!("system {i} over {d}, gauge {u} on {sector}"))
    });
    out.push(tally("weights", "gauge moves leave every switch sum unchanged", results));
    Ok(out)
}

/// Random sectors and switches with random weights; the equations usually fail,
/// which is fine for invariance checks.
fn random_system<R: Rng>(d: &Structure, rng: &mut R) -> (BranchedGraph, WeightSystem, Cocycle) {
    let sectors: Vec<String> = (0..rng.random_range(2..=5)).map(|i| format!("s{i}")).collect();
    let mut ends: Vec<(String, String)> =
        sectors.iter().flat_map(|s| [(s.clone(), "head".to_string()), (s.clone(), "tail".to_string())]).collect();
    let mut switches = Vec::new();
    while ends.len() >= 2 && switches.len() < 3 {
        let side1 = vec![ends.swap_remove(rng.random_range(0..ends.len()))];
        let mut side2 = vec![ends.swap_remove(rng.random_range(0..ends.len()))];
        if !ends.is_empty() && rng.random_bool(0.5) {
            side2.push(ends.swap_remove(rng.random_range(0..ends.len())));
        }
        switches.push(Switch { name: format!("w{}", switches.len()), side1, side2 });
    }
    let mut c = Cocycle::default();
    for sw in &switches {
        for end in sw.side1.iter().chain(&sw.side2) {
            if rng.random_bool(0.5) {
                c.crossings.insert(end.clone(), gen::nonzero_finite(d, rng));
            }
        }
    }
    let weights = sectors.iter().map(|s| (s.clone(), gen::value(d, rng))).collect();
    let g = BranchedGraph::new(sectors, switches).expect("distinct ends");
    (g, WeightSystem::new(d.clone(), weights).expect("semiring"), c)
}

/// Structures exercised by the literal round-trip fuzz.
pub fn roundtrip_structures() -> Vec<Structure> {
    let mut out = law_structures();
    out.extend(
        [
            "Sbar",
            "N0",
            "Z",
            "Rc",
            "Ro",
            "NBar0",
            "(N0 \\/ N0) \\/ N0",
            "N0 \\/ (Rc \\/ NBar0)",
            "(N0 /\\ N0) /\\ N0",
            "mixed(Z; -1..1; 0:N0; default:Rc)",
            "double(O)",
            "double(Pn(2))",
        ]
        .iter()
        .map(|s| s.parse().expect("known structure")),
    );
    out
}

const ROUNDTRIP_STREAM: u64 = 0x7274;

fn roundtrip(opts: &Options) -> Vec<Check> {
    let structures = roundtrip_structures();
    let described =
        structures.iter().map(|d| verdict(d.to_string().parse::<Structure>().map(|back| back == *d), || d.to_string())).collect();
    let results = opts.exec.map_range(opts.cases, |i| {
        let d = &structures[i % structures.len()];
        let mut rng = case_rng(opts.seed, ROUNDTRIP_STREAM, i as u64);
        let v = gen::value(d, &mut rng);
        let text = d.format_value(&v);
        let run = || -> Result<bool> {
            let back = d.parse_value(&text)?;
            Ok(back == v && d.format_value(&back) == text)
        };
        verdict(run(), || format!("{d}: {text}"))
    });
    vec![
        tally("roundtrip", "structure descriptors print and parse back", described),
        tally("roundtrip", "element literals print and parse back", results),
    ]
}
