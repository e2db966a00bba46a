//! The reassociation isomorphism `A ⊙∨ (B ⊙∨ C) → (A ⊙∨ B) ⊙∨ C`.

use super::desc::Structure;
use super::value::Value;
use crate::error::{Error, Result};

fn right_nested(d: &Structure) -> Result<(&Structure, &Structure, &Structure, bool)> {
    match d {
        Structure::SIns { level: a, residue, bar } => match &**residue {
            Structure::SIns { level: b, residue: c, bar: false } => Ok((a, b, c, *bar)),
            _ => Err(Error::Shape(format!("{d} is not of the form A \\/ (B \\/ C)"))),
        },
        _ => Err(Error::Shape(format!("{d} is not of the form A \\/ (B \\/ C)"))),
    }
}

fn left_nested(d: &Structure) -> Result<(&Structure, &Structure, &Structure, bool)> {
    match d {
        Structure::SIns { level, residue: c, bar } => match &**level {
            Structure::SIns { level: a, residue: b, bar: false } => Ok((a, b, c, *bar)),
            _ => Err(Error::Shape(format!("{d} is not of the form (A \\/ B) \\/ C"))),
        },
        _ => Err(Error::Shape(format!("{d} is not of the form (A \\/ B) \\/ C"))),
    }
}

/// The codomain `(A ⊙∨ B) ⊙∨ C` of ψ for a domain `A ⊙∨ (B ⊙∨ C)`.
pub fn psi_target(d: &Structure) -> Result<Structure> {
    let (a, b, c, bar) = right_nested(d)?;
    Structure::sins(Structure::sins(a.clone(), b.clone(), false)?, c.clone(), bar)
}

/// ψ((a,(b,c))) = ((a,b),c).
pub fn psi(d: &Structure, x: &Value) -> Result<Value> {
    right_nested(d)?;
    d.check(x)?;
    Ok(match x {
        Value::Pair(a, bc) => {
            let (b, c) = bc.as_pair().expect("checked inner pair");
            Value::pair(Value::Pair(a.clone(), Box::new(b.clone())), c.clone())
        }
        other => other.clone(),
    })
}

/// ψ⁻¹((a,b),c) = (a,(b,c)), with `d` the left-nested structure.
pub fn psi_inverse(d: &Structure, x: &Value) -> Result<Value> {
    left_nested(d)?;
    d.check(x)?;
    Ok(match x {
        Value::Pair(ab, c) => {
            let (a, b) = ab.as_pair().expect("checked inner pair");
            Value::pair(a.clone(), Value::Pair(Box::new(b.clone()), c.clone()))
        }
        other => other.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reassociates_triples() {
        let d: Structure = "N0 \\/ (N0 \\/ N0)".parse().unwrap();
        let x = d.parse_value("(1,(2,3))").unwrap();
        let target = psi_target(&d).unwrap();
        assert_eq!(target.to_string(), "(N0 \\/ N0) \\/ N0");
        let y = psi(&d, &x).unwrap();
        assert_eq!(y.to_string(), "((1,2),3)");
        assert_eq!(psi_inverse(&target, &y).unwrap(), x);
        assert_eq!(psi(&d, &d.zero()).unwrap(), target.zero());
    }

    #[test]
    fn rejects_insertion_shapes() {
        let d: Structure = "N0 /\\ (N0 /\\ N0)".parse().unwrap();
        assert!(psi_target(&d).is_err());
    }
}
