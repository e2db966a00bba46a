use super::desc::{Base, Structure};
use super::value::Value;
use crate::error::{Error, Result};

/// A vector in `L^n` for an insertion-shaped `L` such as 𝕆.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OVector {
    pub entries: Vec<Value>,
}

impl OVector {
    pub fn new(d: &Structure, entries: Vec<Value>) -> Result<Self> {
        if !matches!(d, Structure::Ins { .. }) {
            return Err(Error::Shape(format!("vectors need an insertion structure, got {d}")));
        }
        if entries.is_empty() {
            return Err(Error::Invalid("vectors need at least one entry".into()));
        }
        for e in &entries {
            d.check(e)?;
        }
        Ok(OVector { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entrywise product `λw`.
    pub fn scalar_mul(&self, d: &Structure, lambda: &Value) -> Result<OVector> {
        let entries = self.entries.iter().map(|e| d.mul(lambda, e)).collect::<Result<_>>()?;
        Ok(OVector { entries })
    }

    /// Lattice points are the vectors whose entries all have residue `∞`.
    pub fn is_lattice_point(&self, d: &Structure) -> Result<bool> {
        let Structure::Ins { residue, .. } = d else {
            return Err(Error::Shape(format!("vectors need an insertion structure, got {d}")));
        };
        if **residue != Structure::Base(Base::Rc) {
            return Err(Error::Shape("lattice points need [0,∞] residues".into()));
        }
        Ok(self.entries.iter().all(|e| matches!(e.as_pair(), Some((_, r)) if *r == Value::inf())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_shift_by_scalar() {
        let o = Structure::o();
        let w = OVector::new(&o, vec![Value::lv(0, 2, 1), Value::pair(Value::int(3), Value::inf())]).unwrap();
        let shifted = w.scalar_mul(&o, &Value::lv(1, 1, 1)).unwrap();
        assert_eq!(shifted.entries, vec![Value::lv(1, 2, 1), Value::pair(Value::int(4), Value::inf())]);
        assert_eq!(w.scalar_mul(&o, &Value::lv(0, 1, 1)).unwrap(), w);
    }

    #[test]
    fn lattice_points() {
        let o = Structure::o();
        let lattice =
            OVector::new(&o, vec![Value::pair(Value::int(2), Value::inf()), Value::pair(Value::int(0), Value::inf())]).unwrap();
        assert!(lattice.is_lattice_point(&o).unwrap());
        let not = OVector::new(&o, vec![Value::pair(Value::int(2), Value::inf()), Value::lv(0, 1, 1)]).unwrap();
        assert!(!not.is_lattice_point(&o).unwrap());
    }
}
