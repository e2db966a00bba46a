use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use stratum::expr::{eval, Evaluated};
use stratum::structure::{psi, psi_inverse, psi_target, OVector, SeqGen, Tail};
use stratum::{Error, Sign, Structure, Value, XReal};

fn x(s: &str) -> XReal {
    s.parse().unwrap()
}

fn v(d: &Structure, s: &str) -> Value {
    d.parse_value(s).unwrap()
}

#[test]
fn extended_reals() {
    assert_eq!(x("1/4").add(&x("1/2")), x("3/4"));
    assert_eq!(XReal::Inf.add(&x("7/3")), XReal::Inf);
    assert_eq!(XReal::zero().add(&XReal::zero()), XReal::zero());
    assert_eq!(x("3/4").mul(&x("2")), x("3/2"));
    assert_eq!(XReal::Inf.mul(&x("1/2")), XReal::Inf);
    assert_eq!(XReal::zero().mul(&XReal::Inf), XReal::zero());
    assert_eq!(x("3/4").div(&x("1/2")).unwrap(), x("3/2"));
    assert_eq!(x("5/7").div(&x("5/7")).unwrap(), XReal::one());
    assert_eq!(x("1").div(&x("3")).unwrap(), x("1/3"));
    assert!(x("1").div(&XReal::zero()).is_err());
    assert!(XReal::Inf.div(&x("2")).is_err());
    assert!(x("2").div(&XReal::Inf).is_err());
}

#[test]
fn structure_descriptors() {
    let o: Structure = "Z /\\ Rc".parse().unwrap();
    assert_eq!(o, Structure::o());
    let s: Structure = "(N0 \\/ N0) /\\ Rc".parse().unwrap();
    assert_eq!(s.to_string(), "(N0 \\/ N0) /\\ Rc");
    assert!("N0 /\\ N0 /\\ N0".parse::<Structure>().unwrap_err().is_parse());
}

#[test]
fn order() {
    let (o, s, obar) = (Structure::o(), Structure::s(), Structure::obar());
    assert_eq!(o.cmp(&v(&o, "(0,5)"), &v(&o, "(1,1/10)")).unwrap(), Ordering::Less);
    assert_eq!(s.cmp(&Value::Zero, &v(&s, "(0,1/100)")).unwrap(), Ordering::Less);
    assert_eq!(obar.cmp(&v(&obar, "(3,inf)"), &Value::Top).unwrap(), Ordering::Less);
}

#[test]
fn addition() {
    let (s, obar) = (Structure::s(), Structure::obar());
    assert_eq!(s.add(&v(&s, "(2,1/3)"), &v(&s, "(1,inf)")).unwrap(), v(&s, "(2,1/3)"));
    assert_eq!(s.add(&v(&s, "(1,1/4)"), &v(&s, "(1,1/2)")).unwrap(), v(&s, "(1,3/4)"));
    assert_eq!(s.add(&v(&s, "(4,2)"), &Value::Zero).unwrap(), v(&s, "(4,2)"));
    assert_eq!(obar.add(&Value::Top, &v(&obar, "(5,2)")).unwrap(), Value::Top);
}

#[test]
fn multiplication_and_nesting() {
    let right: Structure = "N0 /\\ (N0 /\\ N0)".parse().unwrap();
    assert_eq!(right.mul(&v(&right, "(1,(1,1))"), &v(&right, "(2,(1,1))")).unwrap(), v(&right, "(3,(2,1))"));
    let left: Structure = "(N0 /\\ N0) /\\ N0".parse().unwrap();
    assert_eq!(left.mul(&v(&left, "((1,1),1)"), &v(&left, "((2,1),1)")).unwrap(), v(&left, "((2,1),1)"));
    let p = Structure::p();
    let a = v(&p, "(-3,2/7)");
    assert_eq!(p.mul(&a, &p.one().unwrap()).unwrap(), a);
}

#[test]
fn inverses() {
    let p = Structure::p();
    assert_eq!(p.inv(&v(&p, "(0,1/2)")).unwrap(), v(&p, "(0,2)"));
    assert_eq!(p.inv(&v(&p, "(0,1)")).unwrap(), v(&p, "(0,1)"));
    let p2 = Structure::pn(2);
    let a = v(&p2, "(-1,(2,3))");
    let inv = p2.inv(&a).unwrap();
    assert_eq!(inv, v(&p2, "(1,(-2,1/3))"));
    assert_eq!(p2.mul(&a, &inv).unwrap(), v(&p2, "(0,(0,1))"));
    assert!(p.inv(&Value::Zero).is_err());
    assert!(matches!(Structure::s().inv(&v(&Structure::s(), "(1,1)")), Err(Error::Capability(_))));
}

#[test]
fn level_and_residue() {
    let (o, obar) = (Structure::o(), Structure::obar());
    let a = v(&o, "(3,1/2)");
    assert_eq!(o.level(&a).unwrap(), Value::int(3));
    assert_eq!(o.residue(&a).unwrap(), Value::ratio(1, 2));
    assert_eq!(o.residue(&Value::Zero).unwrap(), Value::Zero);
    assert!(o.level(&Value::Zero).is_err());
    assert!(obar.level(&Value::Top).is_err());
}

#[test]
fn countable_sums() {
    let (s, sbar, obar, o) = (Structure::s(), Structure::sbar(), Structure::obar(), Structure::o());
    let ramp = SeqGen {
        head: vec![],
        tail: Tail::LevelRamp { start: BigInt::from(1), step: BigInt::from(1), residue: Value::ratio(1, 1) },
    };
    assert_eq!(obar.sum_sequence(&ramp).unwrap(), Value::Top);
    assert!(matches!(o.sum_sequence(&ramp), Err(Error::NotSummable(_))));
    let head_wins = SeqGen { head: vec![v(&s, "(2,1/2)")], tail: Tail::Repeat(v(&s, "(1,5)")) };
    assert_eq!(s.sum_sequence(&head_wins).unwrap(), v(&s, "(2,1/2)"));
    let repeat = SeqGen { head: vec![], tail: Tail::Repeat(v(&sbar, "(3,1/2)")) };
    assert_eq!(sbar.sum_sequence(&repeat).unwrap(), v(&sbar, "(3,inf)"));
}

#[test]
fn suprema() {
    let (s, p) = (Structure::s(), Structure::p());
    let residues = |level: i64| SeqGen {
        head: vec![],
        tail: Tail::ResidueRamp { level: Value::int(level), start: XReal::one(), step: XReal::one() },
    };
    assert_eq!(s.sup_sequence(&residues(4)).unwrap(), v(&s, "(4,inf)"));
    assert!(matches!(p.sup_sequence(&residues(4)), Err(Error::NotRepresentable(_))));
    let n4: Structure = "N0 \\/ (N0 \\/ (N0 \\/ N0))".parse().unwrap();
    let xs: Vec<Value> = ["(1,(2,(0,5)))", "(1,(3,(0,0)))", "(0,(9,(9,9)))"].iter().map(|t| v(&n4, t)).collect();
    assert_eq!(n4.sup_finite(&xs).unwrap(), xs[1]);
}

#[test]
fn reassociation() {
    let d: Structure = "N0 \\/ (N0 \\/ N0)".parse().unwrap();
    let target = psi_target(&d).unwrap();
    let image = psi(&d, &v(&d, "(1,(2,3))")).unwrap();
    assert_eq!(image, v(&target, "((1,2),3)"));
    assert_eq!(psi_inverse(&target, &image).unwrap(), v(&d, "(1,(2,3))"));
}

#[test]
fn signed_addition() {
    let d = Structure::double(Structure::o()).unwrap();
    let neg = |s: &str| Value::signed(Sign::Minus, v(&Structure::o(), s));
    assert_eq!(d.add(&v(&d, "(2,5)"), &neg("(1,3)")).unwrap(), v(&d, "(2,5)"));
    assert_eq!(d.add(&v(&d, "(1,3/4)"), &neg("(1,1/4)")).unwrap(), v(&d, "(1,1/2)"));
    assert_eq!(d.add(&v(&d, "(1,3/4)"), &neg("(1,3/4)")).unwrap(), Value::Zero);
    assert_eq!(d.format_value(&neg("(0,1/2)")), "-(0,1/2)");
}

#[test]
fn vectors() {
    let o = Structure::o();
    let w = OVector::new(&o, vec![v(&o, "(0,2)"), v(&o, "(3,inf)")]).unwrap();
    let shifted = w.scalar_mul(&o, &v(&o, "(1,1)")).unwrap();
    assert_eq!(shifted.entries, vec![v(&o, "(1,2)"), v(&o, "(4,inf)")]);
    assert_eq!(w.scalar_mul(&o, &o.one().unwrap()).unwrap(), w);
    assert!(!w.is_lattice_point(&o).unwrap());
    let lattice = OVector::new(&o, vec![v(&o, "(2,inf)"), v(&o, "(0,inf)")]).unwrap();
    assert!(lattice.is_lattice_point(&o).unwrap());
}

#[test]
fn expressions() {
    let p = Structure::p();
    assert_eq!(eval(&p, "(-1,3/4) * inv((0,1/2))").unwrap(), Evaluated::Value(v(&p, "(-1,3/2)")));
    assert_eq!(eval(&Structure::o(), "cmp((1,1/2), (0,inf))").unwrap(), Evaluated::Order(Ordering::Greater));
    assert!(eval(&p, "(1,").unwrap_err().is_parse());
}

/// 𝕆 as a plain tuple: `None` is zero, a `None` residue is ∞.
#[derive(Debug, Clone, PartialEq)]
struct Model(Option<(i64, Option<BigRational>)>);

impl Model {
    fn cmp(&self, other: &Model) -> Ordering {
        let key = |m: &Model| m.0.as_ref().map(|(l, r)| (*l, r.is_none(), r.clone()));
        key(self).cmp(&key(other))
    }

    fn add(&self, other: &Model) -> Model {
        match (&self.0, &other.0) {
            (None, _) => other.clone(),
            (_, None) => self.clone(),
            (Some((i, s)), Some((j, t))) if i == j => Model(Some((*i, s.as_ref().zip(t.as_ref()).map(|(s, t)| s + t)))),
            (Some((i, _)), Some((j, _))) => {
                if i > j {
                    self.clone()
                } else {
                    other.clone()
                }
            }
        }
    }

    fn mul(&self, other: &Model) -> Model {
        match (&self.0, &other.0) {
            (Some((i, s)), Some((j, t))) => Model(Some((i + j, s.as_ref().zip(t.as_ref()).map(|(s, t)| s * t)))),
            _ => Model(None),
        }
    }

    fn value(&self) -> Value {
        match &self.0 {
            None => Value::Zero,
            Some((l, None)) => Value::pair(Value::int(*l), Value::inf()),
            Some((l, Some(r))) => Value::pair(Value::int(*l), Value::Real(XReal::from_rational(r.clone()).unwrap())),
        }
    }
}

fn model() -> impl Strategy<Value = Model> {
    let residue = prop_oneof![
        1 => Just(None),
        6 => (1i64..40, 1i64..9).prop_map(|(p, q)| Some(BigRational::new(p.into(), q.into()))),
    ];
    prop_oneof![
        1 => Just(Model(None)),
        8 => (-4i64..5, residue).prop_map(|(l, r)| Model(Some((l, r)))),
    ]
}

proptest! {
    #[test]
    fn o_matches_tuple_model(a in model(), b in model()) {
        let o = Structure::o();
        prop_assert_eq!(o.cmp(&a.value(), &b.value()).unwrap(), a.cmp(&b));
        prop_assert_eq!(o.add(&a.value(), &b.value()).unwrap(), a.add(&b).value());
        prop_assert_eq!(o.mul(&a.value(), &b.value()).unwrap(), a.mul(&b).value());
    }

    #[test]
    fn literals_round_trip(a in model()) {
        let o = Structure::o();
        let text = o.format_value(&a.value());
        prop_assert_eq!(o.parse_value(&text).unwrap(), a.value());
    }

    #[test]
    fn p_inverse_is_two_sided(l in -6i64..6, p in 1i64..50, q in 1i64..50) {
        let d = Structure::p();
        let a = Value::lv(l, p, q);
        let inv = d.inv(&a).unwrap();
        prop_assert_eq!(d.mul(&a, &inv).unwrap(), d.one().unwrap());
        prop_assert_eq!(d.mul(&inv, &a).unwrap(), d.one().unwrap());
    }

    #[test]
    fn signed_sum_cancels_its_negation(a in model()) {
        let d = Structure::double(Structure::o()).unwrap();
        let pos = match a.value() { Value::Zero => Value::Zero, m => Value::signed(Sign::Plus, m) };
        let neg = d.neg(&pos).unwrap();
        prop_assert_eq!(d.add(&pos, &neg).unwrap(), Value::Zero);
    }
}
