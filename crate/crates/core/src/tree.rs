//! Finite order trees with L-valued edge lengths.
//!
//! Points are the nodes; each edge carries the measure of the open arc between its
//! endpoints, and nodes carry no mass.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gen;
use crate::structure::{Structure, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LTree {
    desc: Structure,
    nodes: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize, Value)>,
    /// Rooted at node 0: parent node and the edge leading to it.
    parent: Vec<Option<(usize, usize)>>,
    depth: Vec<usize>,
}

impl LTree {
    pub fn new<S: AsRef<str>>(desc: Structure, nodes: &[S], edges: &[(S, S, Value)]) -> Result<Self> {
        if !desc.is_semigroup() {
            return Err(Error::Capability(format!("edge lengths need an ordered semigroup, got {desc}")));
        }
        if nodes.is_empty() {
            return Err(Error::Invalid("a tree needs at least one node".into()));
        }
        let nodes: Vec<String> = nodes.iter().map(|n| n.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, n) in nodes.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate node {n:?}")));
            }
        }
        if edges.len() + 1 != nodes.len() {
            return Err(Error::Invalid(format!("{} nodes need {} edges, got {}", nodes.len(), nodes.len() - 1, edges.len())));
        }
        let lookup = |n: &str| index.get(n).copied().ok_or_else(|| Error::Invalid(format!("unknown node {n:?}")));
        let mut adj = vec![Vec::new(); nodes.len()];
        let mut es = Vec::with_capacity(edges.len());
        for (k, (a, b, v)) in edges.iter().enumerate() {
            let (a, b) = (lookup(a.as_ref())?, lookup(b.as_ref())?);
            if a == b {
                return Err(Error::Invalid(format!("edge {} is a loop at {:?}", k + 1, nodes[a])));
            }
            desc.check(v)?;
            adj[a].push((b, k));
            adj[b].push((a, k));
            es.push((a, b, v.clone()));
        }
        let mut parent = vec![None; nodes.len()];
        let mut depth = vec![0; nodes.len()];
        let mut seen = vec![false; nodes.len()];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(u) = queue.pop_front() {
            for &(v, k) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some((u, k));
                    depth[v] = depth[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::Invalid(format!("node {:?} is not connected to {:?}", nodes[i], nodes[0])));
        }
        Ok(LTree { desc, nodes, index, edges: es, parent, depth })
    }

    pub fn desc(&self) -> &Structure {
        &self.desc
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, name: &str) -> Result<usize> {
        self.index.get(name).copied().ok_or_else(|| Error::Invalid(format!("unknown node {name:?}")))
    }

    /// Every edge has nonzero length.
    pub fn has_full_support(&self) -> bool {
        self.edges.iter().all(|(_, _, v)| !self.desc.is_zero(v))
    }

    fn lca(&self, mut x: usize, mut y: usize) -> usize {
        while self.depth[x] > self.depth[y] {
            x = self.parent[x].expect("non-root").0;
        }
        while self.depth[y] > self.depth[x] {
            y = self.parent[y].expect("non-root").0;
        }
        while x != y {
            x = self.parent[x].expect("non-root").0;
            y = self.parent[y].expect("non-root").0;
        }
        x
    }

    /// Nodes and edges from `x` up to (not including) the ancestor `top`.
    fn climb(&self, mut x: usize, top: usize) -> (Vec<usize>, Vec<usize>) {
        let (mut ns, mut es) = (Vec::new(), Vec::new());
        while x != top {
            let (p, k) = self.parent[x].expect("below the ancestor");
            ns.push(x);
            es.push(k);
            x = p;
        }
        (ns, es)
    }

    fn path(&self, x: usize, y: usize) -> (Vec<usize>, Vec<usize>) {
        let w = self.lca(x, y);
        let (mut nx, mut ex) = self.climb(x, w);
        let (ny, ey) = self.climb(y, w);
        nx.push(w);
        nx.extend(ny.into_iter().rev());
        ex.extend(ey.into_iter().rev());
        (nx, ex)
    }

    /// `[x,y]` in order from `x` to `y`.
    pub fn segment_ix(&self, x: usize, y: usize) -> Vec<usize> {
        self.path(x, y).0
    }

    pub fn segment(&self, x: &str, y: &str) -> Result<Vec<&str>> {
        let s = self.segment_ix(self.node(x)?, self.node(y)?);
        Ok(s.into_iter().map(|i| self.nodes[i].as_str()).collect())
    }

    /// The `w` with `[x,y] ∩ [x,z] = [x,w]`.
    pub fn meet_ix(&self, x: usize, y: usize, z: usize) -> usize {
        [self.lca(x, y), self.lca(x, z), self.lca(y, z)].into_iter().max_by_key(|&w| self.depth[w]).expect("three candidates")
    }

    pub fn meet(&self, x: &str, y: &str, z: &str) -> Result<&str> {
        Ok(&self.nodes[self.meet_ix(self.node(x)?, self.node(y)?, self.node(z)?)])
    }

    /// `ν([x,y])`, the sum of edge lengths along the segment.
    pub fn distance_ix(&self, x: usize, y: usize) -> Value {
        self.path(x, y).1.into_iter().fold(self.desc.zero(), |acc, k| self.desc.add_raw(&acc, &self.edges[k].2))
    }

    pub fn distance(&self, x: &str, y: &str) -> Result<Value> {
        Ok(self.distance_ix(self.node(x)?, self.node(y)?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomOutcome {
    pub name: String,
    pub checked: usize,
    pub failures: usize,
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MetricReport {
    pub nodes: usize,
    pub exhaustive: bool,
    pub triples: usize,
    pub outcomes: Vec<AxiomOutcome>,
    pub passed: bool,
}

/// Trees up to this size are checked on every triple of nodes.
pub const EXHAUSTIVE_LIMIT: usize = 12;

const AXIOMS: [&str; 7] = [
    "reversed segment is the opposite order",
    "[x,y] and [x,z] intersect in [x,w]",
    "segments meeting at one point join into a segment",
    "d(x,y) = 0 exactly when x = y",
    "d is symmetric",
    "triangle inequality",
    "distance adds along a segment",
];

fn check_triple(t: &LTree, x: usize, y: usize, z: usize) -> [bool; 7] {
    let d = &t.desc;
    let seg = |a, b| t.segment_ix(a, b);
    let le = |a: &Value, b: &Value| d.cmp_raw(a, b) != Ordering::Greater;

    let mut rev = seg(y, x);
    rev.reverse();
    let reversal = seg(x, y) == rev;

    let sy: BTreeSet<usize> = seg(x, y).into_iter().collect();
    let common: Vec<usize> = seg(x, z).into_iter().filter(|n| sy.contains(n)).collect();
    let intersection = common == seg(x, t.meet_ix(x, y, z));

    let concat = {
        let (a, b) = (seg(x, y), seg(y, z));
        let sb: BTreeSet<usize> = b.iter().copied().collect();
        let single = a.iter().filter(|n| sb.contains(n)).count() == 1;
        !single || {
            let mut joined = a.clone();
            joined.extend_from_slice(&b[1..]);
            joined == seg(x, z)
        }
    };

    let dxy = t.distance_ix(x, y);
    let identity = d.is_zero(&dxy) == (x == y);
    let symmetric = dxy == t.distance_ix(y, x);
    let triangle = le(&t.distance_ix(y, z), &d.add_raw(&t.distance_ix(y, x), &t.distance_ix(x, z)));
    let along = !sy.contains(&z) || dxy == d.add_raw(&t.distance_ix(x, z), &t.distance_ix(z, y));

    [reversal, intersection, concat, identity, symmetric, triangle, along]
}

/// Order-tree axioms and metric axioms over all triples of a small tree, or over
/// `samples` seeded random triples of a large one.
pub fn verify_metric(t: &LTree, seed: u64, samples: usize, exec: Exec) -> MetricReport {
    let n = t.len();
    let exhaustive = n <= EXHAUSTIVE_LIMIT;
    let triples = if exhaustive { n * n * n } else { samples };
    let per: Vec<([bool; 7], (usize, usize, usize))> = exec.map_range(triples, |i| {
        let (x, y, z) = if exhaustive {
            (i / (n * n), (i / n) % n, i % n)
        } else {
            let mut rng = gen::case_rng(seed, 0x7472_6565, i as u64);
            (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n))
        };
        (check_triple(t, x, y, z), (x, y, z))
    });
    let outcomes: Vec<AxiomOutcome> = AXIOMS
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let mut bad = per.iter().filter(|(ok, _)| !ok[k]);
            let counterexample =
                bad.next().map(|(_, (x, y, z))| format!("x={}, y={}, z={}", t.nodes[*x], t.nodes[*y], t.nodes[*z]));
            AxiomOutcome {
                name: (*name).to_string(),
                checked: triples,
                failures: counterexample.iter().count() + bad.count(),
                counterexample,
            }
        })
        .collect();
    let passed = outcomes.iter().all(|o| o.failures == 0);
    MetricReport { nodes: n, exhaustive, triples, outcomes, passed }
}

/// Random tree on `n` nodes: node `i > 0` hangs off a uniformly chosen earlier node.
pub fn random_tree(d: &Structure, n: usize, seed: u64, stream: u64) -> LTree {
    let mut rng = gen::case_rng(seed, stream, 0);
    let nodes: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    let edges: Vec<(String, String, Value)> = (1..n)
        .map(|i| {
            let p = rng.random_range(0..i);
            (nodes[p].clone(), nodes[i].clone(), gen::nonzero_finite(d, &mut rng))
        })
        .collect();
    LTree::new(d.clone(), &nodes, &edges).expect("well-formed random tree")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_abc() -> LTree {
        LTree::new(Structure::o(), &["a", "b", "c"], &[("a", "b", Value::lv(1, 1, 1)), ("b", "c", Value::lv(0, 5, 1))]).unwrap()
    }

    #[test]
    fn segments_and_distances() {
        let t = path_abc();
        assert_eq!(t.segment("a", "c").unwrap(), vec!["a", "b", "c"]);
        assert_eq!(t.segment("a", "a").unwrap(), vec!["a"]);
        assert_eq!(t.segment("c", "a").unwrap(), vec!["c", "b", "a"]);
        assert_eq!(t.distance("a", "c").unwrap(), Value::lv(1, 1, 1));
        assert_eq!(t.distance("b", "b").unwrap(), Value::Zero);
        assert!(t.segment("a", "zz").is_err());
    }

    #[test]
    fn star_meet() {
        let e = |a: &'static str| ("c", a, Value::lv(0, 1, 1));
        let t = LTree::new(Structure::o(), &["c", "p", "q", "r"], &[e("p"), e("q"), e("r")]).unwrap();
        assert_eq!(t.meet("p", "q", "r").unwrap(), "c");
        assert_eq!(t.meet("p", "q", "q").unwrap(), "q");
    }

    #[test]
    fn malformed_trees() {
        let v = Value::lv(0, 1, 1);
        assert!(LTree::new(Structure::o(), &["a", "b", "c"], &[("a", "b", v.clone()), ("a", "b", v.clone())]).is_err());
        assert!(LTree::new(Structure::o(), &["a", "b"], &[("a", "x", v.clone())]).is_err());
        assert!(LTree::new(Structure::base(crate::structure::Base::Z), &["a"], &[]).is_err());
    }

    #[test]
    fn metric_axioms() {
        assert!(verify_metric(&path_abc(), 0, 0, Exec::Sequential).passed);
        let t = random_tree(&Structure::obar(), 40, 9, 1);
        let r = verify_metric(&t, 9, 2000, Exec::Parallel);
        assert!(r.passed && !r.exhaustive, "{r:?}");

        let degenerate = LTree::new(Structure::o(), &["a", "b"], &[("a", "b", Value::Zero)]).unwrap();
        let r = verify_metric(&degenerate, 0, 0, Exec::Sequential);
        assert!(!r.passed);
        let failed: Vec<&str> = r.outcomes.iter().filter(|o| o.failures > 0).map(|o| o.name.as_str()).collect();
        assert_eq!(failed, vec!["d(x,y) = 0 exactly when x = y"]);
    }
}
