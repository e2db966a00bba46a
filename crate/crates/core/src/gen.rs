//! Seeded random elements for property suites.
//!
//! Values are drawn from small ranges on purpose: equal levels and equal residues
//! must collide often, otherwise the interesting branches of addition never run.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::structure::{Base, Sign, Structure, Value};
use crate::xreal::XReal;

/// Independent generator for case `case` of stream `stream`, so that cases can be
/// evaluated in any order and still see the same inputs.
pub fn case_rng(seed: u64, stream: u64, case: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos(u128::from(case) << 8);
    rng
}

fn residue_real<R: Rng>(rng: &mut R, allow_inf: bool) -> XReal {
    if allow_inf && rng.random_ratio(1, 12) {
        return XReal::Inf;
    }
    XReal::ratio(rng.random_range(0..=12u32), rng.random_range(1..=4u32)).expect("valid ratio")
}

/// Any element of `d`, including zero and top.
pub fn value<R: Rng>(d: &Structure, rng: &mut R) -> Value {
    match d {
        Structure::Base(Base::N0) => Value::int(rng.random_range(0..=5u32)),
        Structure::Base(Base::Z) => Value::int(rng.random_range(-4..=4i32)),
        Structure::Base(Base::Rc) => Value::Real(residue_real(rng, true)),
        Structure::Base(Base::Ro) => Value::Real(residue_real(rng, false)),
        Structure::Base(Base::NBar0) => {
            if rng.random_ratio(1, 12) {
                Value::inf()
            } else {
                Value::Real(XReal::int(rng.random_range(0..=5)))
            }
        }
        Structure::SIns { bar, .. } | Structure::Ins { bar, .. } => {
            if *bar && rng.random_ratio(1, 15) {
                return Value::Top;
            }
            if rng.random_ratio(1, 12) {
                return d.zero();
            }
            nonzero_finite(d, rng)
        }
        Structure::Mixed(_) | Structure::Double(_) => {
            if rng.random_ratio(1, 12) {
                Value::Zero
            } else {
                nonzero_finite(d, rng)
            }
        }
    }
}

/// A nonzero element of `d` other than top.
pub fn nonzero_finite<R: Rng>(d: &Structure, rng: &mut R) -> Value {
    match d {
        Structure::SIns { level, residue, .. } => loop {
            let v = Value::pair(inner(level, rng), inner(residue, rng));
            if !d.is_zero(&v) {
                return v;
            }
        },
        Structure::Ins { level, residue, .. } => Value::pair(inner(level, rng), nonzero_inner(residue, rng)),
        Structure::Mixed(spec) => {
            let lo = spec.lo.clone().unwrap_or_else(|| spec.hi.clone().unwrap_or_default() - 3);
            let hi = spec.hi.clone().unwrap_or_else(|| lo.clone() + 3);
            let hi = hi.min(lo.clone() + 6);
            let span = u32::try_from(&(hi - &lo)).expect("small span");
            let level = lo + BigInt::from(rng.random_range(0..=span));
            let fiber = spec.fiber(&level).expect("level in range");
            Value::pair(Value::Int(level), nonzero_inner(fiber, rng))
        }
        Structure::Double(m) => {
            let sign = if rng.random_bool(0.5) { Sign::Plus } else { Sign::Minus };
            Value::signed(sign, nonzero_inner(m, rng))
        }
        Structure::Base(_) => nonzero_inner(d, rng),
    }
}

/// A component value: nested structures may contribute their own zero and top.
fn inner<R: Rng>(d: &Structure, rng: &mut R) -> Value {
    value(d, rng)
}

fn nonzero_inner<R: Rng>(d: &Structure, rng: &mut R) -> Value {
    loop {
        let v = value(d, rng);
        if !d.is_zero(&v) {
            return v;
        }
    }
}
