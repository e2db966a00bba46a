use std::collections::BTreeMap;

use proptest::prelude::*;
use stratum::exec::Exec;
use stratum::formats::{builtin_track, Track};
use stratum::tree::{random_tree, verify_metric, LTree};
use stratum::weights::{apply_deck, check_branch_equations, cocycle_split, BranchedGraph, Cocycle, Switch, WeightSystem};
use stratum::{Structure, Value, XReal};

fn star() -> LTree {
    let e = Value::lv(0, 1, 1);
    LTree::new(Structure::o(), &["c", "p", "q", "r"], &[("c", "p", e.clone()), ("c", "q", e.clone()), ("c", "r", e)]).unwrap()
}

#[test]
fn segments_meets_and_distances() {
    let t =
        LTree::new(Structure::o(), &["a", "b", "c"], &[("a", "b", Value::lv(1, 1, 1)), ("b", "c", Value::lv(0, 5, 1))]).unwrap();
    assert_eq!(t.segment("a", "c").unwrap(), vec!["a", "b", "c"]);
    assert_eq!(t.segment("a", "a").unwrap(), vec!["a"]);
    assert_eq!(t.distance("a", "c").unwrap(), Value::lv(1, 1, 1));
    assert_eq!(t.distance("b", "b").unwrap(), Value::Zero);
    let s = star();
    assert_eq!(s.meet("p", "q", "r").unwrap(), "c");
    assert_eq!(s.meet("p", "q", "q").unwrap(), "q");
}

#[test]
fn metric_axioms() {
    assert!(verify_metric(&star(), 0, 0, Exec::Sequential).passed);
    for n in [2, 5, 12, 30] {
        let t = random_tree(&Structure::obar(), n, 9, n as u64);
        assert!(verify_metric(&t, 9, 500, Exec::Parallel).passed, "{n} nodes");
    }
    let degenerate =
        LTree::new(Structure::o(), &["a", "b", "c"], &[("a", "b", Value::Zero), ("b", "c", Value::lv(0, 1, 1))]).unwrap();
    let r = verify_metric(&degenerate, 0, 0, Exec::Sequential);
    assert!(!r.passed);
    let failing: Vec<&str> = r.outcomes.iter().filter(|o| o.failures > 0).map(|o| o.name.as_str()).collect();
    assert!(failing.contains(&"d(x,y) = 0 exactly when x = y"), "{failing:?}");
}

fn one_switch(side2: &[&str], weights: &[(&str, Value)]) -> (BranchedGraph, WeightSystem) {
    let sectors: Vec<String> = weights.iter().map(|(s, _)| s.to_string()).collect();
    let end = |s: &str| (s.to_string(), "head".to_string());
    let sw = Switch { name: "s".into(), side1: vec![end("a")], side2: side2.iter().map(|s| end(s)).collect() };
    let g = BranchedGraph::new(sectors, vec![sw]).unwrap();
    let w = WeightSystem::new(Structure::p(), weights.iter().map(|(s, v)| (s.to_string(), v.clone())).collect()).unwrap();
    (g, w)
}

#[test]
fn branch_equations() {
    let check =
        |g: &BranchedGraph, w: &WeightSystem| check_branch_equations(g, w, &Cocycle::default(), Exec::Sequential).unwrap().passed;
    let (g, w) = one_switch(&["b", "c"], &[("a", Value::Zero), ("b", Value::Zero), ("c", Value::Zero)]);
    assert!(check(&g, &w));
    let (g, w) = one_switch(&["b", "c"], &[("a", Value::lv(0, 2, 1)), ("b", Value::lv(0, 1, 1)), ("c", Value::lv(0, 1, 1))]);
    assert!(check(&g, &w));
    let (g, w) = one_switch(&["b", "c"], &[("a", Value::lv(1, 2, 1)), ("b", Value::lv(1, 2, 1)), ("c", Value::lv(0, 5, 1))]);
    assert!(check(&g, &w));
    let (g, w) = one_switch(&["b", "c"], &[("a", Value::lv(1, 2, 1)), ("b", Value::lv(1, 1, 1)), ("c", Value::lv(0, 5, 1))]);
    assert!(!check(&g, &w));
}

#[test]
fn deck_scalars() {
    let w = WeightSystem::new(
        Structure::p(),
        BTreeMap::from([("a".to_string(), Value::lv(1, 3, 2)), ("b".to_string(), Value::lv(1, 1, 5))]),
    )
    .unwrap();
    let down = apply_deck(&w, &Value::lv(-1, 1, 1)).unwrap();
    assert_eq!(down.weights["a"], Value::lv(0, 3, 2));
    assert_eq!(down.weights["b"], Value::lv(0, 1, 5));
    assert_eq!(apply_deck(&w, &Value::lv(0, 1, 1)).unwrap(), w);
    assert!(apply_deck(&w, &Value::Zero).is_err());
}

fn split(track: &Track) -> Vec<(Vec<String>, String)> {
    cocycle_split(&track.weights.desc, &track.cocycle).unwrap().into_iter().map(|s| (s.level_shift, s.stretch)).collect()
}

#[test]
fn multiplier_splits() {
    let shift = builtin_track("level-shift").unwrap();
    assert_eq!(split(&shift), vec![(vec!["-1".to_string()], "1".to_string())]);
    let stretch = builtin_track("stretch").unwrap();
    assert!(split(&stretch).contains(&(vec!["0".to_string()], "1/2".to_string())));
    let p2 = builtin_track("p2").unwrap();
    let mut got = split(&p2);
    got.sort();
    let s = |a: &str, b: &str| (vec![a.to_string(), b.to_string()], "1".to_string());
    assert_eq!(got, vec![s("-1", "0"), s("0", "-1")]);
    for name in ["stretch", "level-shift", "mixed", "p2"] {
        let t = builtin_track(name).unwrap();
        assert!(check_branch_equations(&t.graph, &t.weights, &t.cocycle, Exec::Sequential).unwrap().passed, "{name}");
    }
}

/// Edge values as (level, numerator, denominator) with positive finite residues.
fn tree_spec() -> impl Strategy<Value = Vec<(usize, i64, i64, i64)>> {
    prop::collection::vec((any::<prop::sample::Index>(), -3i64..3, 1i64..6, 1i64..4), 1..10)
        .prop_map(|es| es.into_iter().enumerate().map(|(i, (p, l, a, b))| (p.index(i + 1), l, a, b)).collect())
}

fn path_to_root(parent: &[usize], mut x: usize) -> Vec<usize> {
    let mut out = vec![x];
    while x != 0 {
        x = parent[x];
        out.push(x);
    }
    out
}

proptest! {
    #[test]
    fn distance_is_dominant_edge_total(spec in tree_spec(), x in any::<prop::sample::Index>(), y in any::<prop::sample::Index>()) {
        let n = spec.len() + 1;
        let names: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
        let mut parent = vec![0; n];
        let mut edge = vec![(0, 0, 1); n];
        let edges: Vec<(String, String, Value)> = spec
            .iter()
            .enumerate()
            .map(|(i, &(p, l, a, b))| {
                parent[i + 1] = p;
                edge[i + 1] = (l, a, b);
                (names[p].clone(), names[i + 1].clone(), Value::lv(l, a, b))
            })
            .collect();
        let t = LTree::new(Structure::o(), &names, &edges).unwrap();
        let (x, y) = (x.index(n), y.index(n));
        let (px, py) = (path_to_root(&parent, x), path_to_root(&parent, y));
        let on_path: Vec<usize> = px.iter().chain(&py).copied().filter(|v| !(px.contains(v) && py.contains(v))).collect();
        let want = match on_path.iter().map(|&v| edge[v].0).max() {
            None => Value::Zero,
            Some(top) => {
                let total = on_path
                    .iter()
                    .filter(|&&v| edge[v].0 == top)
                    .fold(XReal::zero(), |acc, &v| acc.add(&XReal::ratio(edge[v].1, edge[v].2).unwrap()));
                Value::pair(Value::int(top), Value::Real(total))
            }
        };
        prop_assert_eq!(t.distance(&names[x], &names[y]).unwrap(), want);
        let seg = t.segment(&names[x], &names[y]).unwrap();
        prop_assert_eq!(seg.len(), on_path.len() + 1);
    }

    #[test]
    fn deck_scalars_preserve_balance(name in prop::sample::select(vec!["stretch", "level-shift", "mixed"]), l in -4i64..4, p in 1i64..9, q in 1i64..9) {
        let t = builtin_track(name).unwrap();
        let w = apply_deck(&t.weights, &Value::lv(l, p, q)).unwrap();
        prop_assert!(check_branch_equations(&t.graph, &w, &t.cocycle, Exec::Sequential).unwrap().passed);
    }
}
