//! JSON files for scenes, functions, trees and tracks.
//!
//! Every value in a file is an element literal in the grammar of the file's
//! structure, so files round-trip exactly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrate::SimpleFunction;
use crate::measure::{AtomSpace, LMeasure};
use crate::structure::{Structure, Value};
use crate::tree::LTree;
use crate::weights::{BranchedGraph, Cocycle, Switch, WeightSystem};
use crate::xreal::XReal;

fn from_json<'a, T: Deserialize<'a>>(src: &'a str) -> Result<T> {
    serde_json::from_str(src).map_err(|e| {
        let pos = src.lines().take(e.line().saturating_sub(1)).map(|l| l.len() + 1).sum::<usize>() + e.column().saturating_sub(1);
        Error::parse(pos, format!("malformed JSON: {e}"))
    })
}

fn structure(src: &str) -> Result<Structure> {
    src.parse()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AtomEntry {
    pub id: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SceneFile {
    pub structure: String,
    pub atoms: Vec<AtomEntry>,
    #[serde(default)]
    pub events: BTreeMap<String, Vec<String>>,
}

impl SceneFile {
    pub fn from_measure(m: &LMeasure) -> Self {
        let d = m.desc();
        SceneFile {
            structure: d.to_string(),
            atoms: m
                .space()
                .atoms()
                .iter()
                .zip(m.values())
                .map(|(id, v)| AtomEntry { id: id.clone(), value: d.format_value(v) })
                .collect(),
            events: m
                .space()
                .events()
                .iter()
                .map(|(name, e)| (name.clone(), m.space().describe(e).into_iter().map(String::from).collect()))
                .collect(),
        }
    }

    pub fn into_measure(self) -> Result<LMeasure> {
        let d = structure(&self.structure)?;
        let mut space = AtomSpace::new(self.atoms.iter().map(|a| a.id.clone()))?;
        for (name, ids) in &self.events {
            space.define_event(name, ids)?;
        }
        let values = self
            .atoms
            .iter()
            .map(|a| d.parse_value(&a.value).map_err(|e| annotate(e, &format!("atom {:?}", a.id))))
            .collect::<Result<Vec<_>>>()?;
        LMeasure::new(d, space, values)
    }
}

fn annotate(e: Error, ctx: &str) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse { pos, msg: format!("{ctx}: {msg}") },
        Error::Shape(m) => Error::Shape(format!("{ctx}: {m}")),
        other => other,
    }
}

pub fn parse_scene(src: &str) -> Result<LMeasure> {
    from_json::<SceneFile>(src)?.into_measure()
}

pub fn scene_to_json(m: &LMeasure) -> String {
    serde_json::to_string(&SceneFile::from_measure(m)).expect("serializable")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionKind {
    Real,
    Lvalued,
    Signed,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FunctionFile {
    pub kind: FunctionKind,
    #[serde(default)]
    pub structure: Option<String>,
    pub values: BTreeMap<String, String>,
}

/// A function file resolved against the atoms of `m`; atoms it does not list are an error.
pub fn parse_function(src: &str, m: &LMeasure) -> Result<SimpleFunction> {
    let f: FunctionFile = from_json(src)?;
    let atoms = m.space().atoms();
    for id in f.values.keys() {
        m.space().atom_index(id)?;
    }
    let literal =
        |id: &String| f.values.get(id).ok_or_else(|| Error::Invalid(format!("the function gives no value for atom {id:?}")));
    let desc = || -> Result<Structure> {
        structure(f.structure.as_deref().ok_or_else(|| Error::Invalid("L-valued functions need a structure".into()))?)
    };
    Ok(match f.kind {
        FunctionKind::Real => {
            SimpleFunction::RealValued(atoms.iter().map(|id| literal(id)?.parse::<XReal>()).collect::<Result<Vec<_>>>()?)
        }
        FunctionKind::Lvalued | FunctionKind::Signed => {
            let d = desc()?;
            let values = atoms
                .iter()
                .map(|id| d.parse_value(literal(id)?).map_err(|e| annotate(e, &format!("atom {id:?}"))))
                .collect::<Result<Vec<Value>>>()?;
            if f.kind == FunctionKind::Lvalued {
                SimpleFunction::LValued { desc: d, values }
            } else {
                SimpleFunction::SignedLValued { desc: d, values }
            }
        }
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeEntry {
    pub a: String,
    pub b: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TreeFile {
    pub structure: String,
    pub nodes: Vec<String>,
    pub edges: Vec<EdgeEntry>,
}

pub fn parse_tree(src: &str) -> Result<LTree> {
    let f: TreeFile = from_json(src)?;
    let d = structure(&f.structure)?;
    let edges = f
        .edges
        .iter()
        .map(|e| {
            Ok((e.a.clone(), e.b.clone(), d.parse_value(&e.value).map_err(|x| annotate(x, &format!("edge {}-{}", e.a, e.b)))?))
        })
        .collect::<Result<Vec<_>>>()?;
    LTree::new(d, &f.nodes, &edges)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SwitchEntry {
    #[serde(default)]
    pub name: Option<String>,
    pub side1: Vec<(String, String)>,
    pub side2: Vec<(String, String)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CrossingEntry {
    pub sector: String,
    pub end: String,
    pub multiplier: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrackFile {
    pub structure: String,
    pub sectors: Vec<String>,
    pub switches: Vec<SwitchEntry>,
    pub weights: BTreeMap<String, String>,
    #[serde(default)]
    pub crossings: Vec<CrossingEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Track {
    pub graph: BranchedGraph,
    pub weights: WeightSystem,
    pub cocycle: Cocycle,
}

pub fn parse_track(src: &str) -> Result<Track> {
    let f: TrackFile = from_json(src)?;
    let d = structure(&f.structure)?;
    let switches = f
        .switches
        .into_iter()
        .enumerate()
        .map(|(i, s)| Switch { name: s.name.unwrap_or_else(|| format!("s{}", i + 1)), side1: s.side1, side2: s.side2 })
        .collect();
    let graph = BranchedGraph::new(f.sectors, switches)?;
    for s in f.weights.keys() {
        if !graph.sectors().contains(s) {
            return Err(Error::Invalid(format!("weight given for unknown sector {s:?}")));
        }
    }
    let weights = f
        .weights
        .iter()
        .map(|(s, lit)| Ok((s.clone(), d.parse_value(lit).map_err(|e| annotate(e, &format!("weight of {s:?}")))?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let weights = WeightSystem::new(d.clone(), weights)?;
    let mut cocycle = Cocycle::default();
    for c in f.crossings {
        if !graph.sectors().contains(&c.sector) {
            return Err(Error::Invalid(format!("crossing on unknown sector {:?}", c.sector)));
        }
        let m = d.parse_value(&c.multiplier).map_err(|e| annotate(e, &format!("multiplier at {}.{}", c.sector, c.end)))?;
        cocycle.crossings.insert((c.sector, c.end), m);
    }
    Ok(Track { graph, weights, cocycle })
}

pub fn track_to_json(t: &Track) -> String {
    let d = &t.weights.desc;
    let f = TrackFile {
        structure: d.to_string(),
        sectors: t.graph.sectors().to_vec(),
        switches: t
            .graph
            .switches()
            .iter()
            .map(|s| SwitchEntry { name: Some(s.name.clone()), side1: s.side1.clone(), side2: s.side2.clone() })
            .collect(),
        weights: t.weights.weights.iter().map(|(s, v)| (s.clone(), d.format_value(v))).collect(),
        crossings: t
            .cocycle
            .crossings
            .iter()
            .map(|((sector, end), m)| CrossingEntry { sector: sector.clone(), end: end.clone(), multiplier: d.format_value(m) })
            .collect(),
    };
    serde_json::to_string(&f).expect("serializable")
}

/// Example tracks shipped with the library, by name.
pub const BUILTIN_TRACKS: &[(&str, &str)] = &[
    ("stretch", include_str!("../data/tracks/stretch.json")),
    ("level-shift", include_str!("../data/tracks/level-shift.json")),
    ("mixed", include_str!("../data/tracks/mixed.json")),
    ("p2", include_str!("../data/tracks/p2.json")),
];

pub fn builtin_track(name: &str) -> Option<Track> {
    BUILTIN_TRACKS.iter().find(|(n, _)| *n == name).map(|(_, src)| parse_track(src).expect("shipped tracks parse"))
}
