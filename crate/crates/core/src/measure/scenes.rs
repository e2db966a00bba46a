//! Built-in scenes.

use crate::structure::{Structure, Value};

use super::{AtomSpace, LMeasure};

pub const BUILTIN_SCENES: &[&str] = &["dartboard", "dartboard-depth2"];

const ATOMS: [&str; 9] = ["q1", "q2", "q3", "q4", "up", "down", "left", "right", "center"];

const EVENTS: &[(&str, &[&str])] = &[
    ("B", &["q1", "q2", "up", "left", "right", "center"]),
    ("Y", &["up", "down", "left", "right", "center"]),
    ("A", &["up"]),
    ("H", &["left", "right", "center"]),
    ("A1", &["q1", "right", "up", "center"]),
    ("A2", &["q2"]),
    ("A3", &["q3", "left", "down"]),
    ("A4", &["q4"]),
];

/// A uniformly random dart on the unit square: four quadrants of area 1/4, four
/// arms of the central cross with one-dimensional measure 1/4 each, and the
/// centre point. With `depth2` the centre carries a point mass one level further down.
pub fn dartboard(depth2: bool) -> LMeasure {
    let mut space = AtomSpace::new(ATOMS).expect("distinct atoms");
    for (name, ids) in EVENTS {
        space.define_event(name, ids).expect("known atoms");
    }
    let mut values = vec![Value::lv(0, 1, 4); 4];
    values.extend(std::iter::repeat_n(Value::lv(-1, 1, 4), 4));
    values.push(if depth2 { Value::lv(-2, 1, 1) } else { Value::Zero });
    LMeasure::new(Structure::p(), space, values).expect("valid scene")
}

pub fn builtin(name: &str) -> Option<LMeasure> {
    match name {
        "dartboard" => Some(dartboard(false)),
        "dartboard-depth2" => Some(dartboard(true)),
        _ => None,
    }
}
