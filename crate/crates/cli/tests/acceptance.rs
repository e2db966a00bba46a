//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Tolerances are pinned here. Every value comparison is exact equality of
//! rationals; the only tolerances are wall-clock limits.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use stratum::exec::Exec;
use stratum::expr::{eval, Evaluated};
use stratum::formats::{builtin_track, BUILTIN_TRACKS};
use stratum::integrate::integrate_lvalued;
use stratum::measure::{dartboard, AtomSpace, LMeasure};
use stratum::prob::{bayes, cond_prob};
use stratum::selfcheck::{self, psi_structures, Check, Options};
use stratum::weights::check_branch_equations;
use stratum::{Structure, Value};

const SEED: u64 = 42;
const FULL: usize = 10_000;
const DARTBOARD_LIMIT: Duration = Duration::from_secs(1);
const LAWS_LIMIT: Duration = Duration::from_secs(30);

type Verdict = Result<String, String>;

fn opts() -> Options {
    Options { seed: SEED, cases: FULL, mutant: false, exec: Exec::Parallel }
}

fn suite(name: &str) -> Result<Vec<Check>, String> {
    selfcheck::run(name, &opts()).map_err(|e| e.to_string())
}

fn all_pass(checks: &[Check]) -> Result<(), String> {
    match checks.iter().find(|c| !c.passed()) {
        None => Ok(()),
        Some(c) => {
            Err(format!("{}: {} of {} failed, e.g. {}", c.name, c.failures, c.cases, c.counterexample.as_deref().unwrap_or("?")))
        }
    }
}

fn find<'a>(checks: &'a [Check], prefix: &str) -> Result<&'a Check, String> {
    checks.iter().find(|c| c.name.starts_with(prefix)).ok_or_else(|| format!("no check named {prefix:?}"))
}

fn expect(what: &str, got: &Value, want: &str) -> Result<(), String> {
    if got.to_string() == want {
        Ok(())
    } else {
        Err(format!("{what} = {got}, expected {want}"))
    }
}

fn dartboard_exactness() -> Verdict {
    let start = Instant::now();
    let m = dartboard(false);
    let e = |s: &str| m.space().parse_event(s).unwrap();
    for (a, b, want) in [("Y", "B", "(-1,3/2)"), ("A", "Y", "(0,1/4)"), ("A", "B&Y", "(0,1/3)"), ("A", "B", "(-1,1/2)")] {
        let got = cond_prob(&m, &e(a), &e(b)).map_err(|x| x.to_string())?;
        expect(&format!("P({a}|{b})"), &got, want)?;
    }
    let t = start.elapsed();
    if t > DARTBOARD_LIMIT {
        return Err(format!("took {t:?}, limit {DARTBOARD_LIMIT:?}"));
    }
    Ok(format!("4 conditionals exact in {t:?}"))
}

fn bayes_exactness() -> Verdict {
    let m = dartboard(false);
    let cells: Vec<_> = ["A1", "A2", "A3", "A4"].iter().map(|n| (n.to_string(), m.space().named(n).unwrap())).collect();
    let t = bayes(&m, &cells, &m.space().named("H").unwrap(), Exec::Parallel).map_err(|e| e.to_string())?;
    let likelihoods: Vec<&str> = t.rows.iter().map(|r| r.likelihood.as_str()).collect();
    // A3 ∩ B is the left ray of mass (-1,1/4)
    // and A3 has mass (0,1/4), so the quotient is (-1,1), matching A1.
    let want = ["(-1,1)", "0", "(-1,1)", "0"];
    if likelihoods != want {
        return Err(format!("likelihoods {likelihoods:?}, expected {want:?}"));
    }
    if t.total != "(-1,1/2)" || t.rows[0].posterior != "(0,1/2)" || !t.consistent {
        return Err(format!("total {}, posterior {}, consistent {}", t.total, t.rows[0].posterior, t.consistent));
    }
    Ok("likelihoods (-1,1), 0, (-1,1), 0; total (-1,1/2); P(A1|B) = (0,1/2); P(B|A3) = (-1,1)".into())
}

fn non_associativity() -> Verdict {
    let run = |d: &str, e: &str| -> Result<String, String> {
        let d: Structure = d.parse().map_err(|x: stratum::Error| x.to_string())?;
        match eval(&d, e).map_err(|x| x.to_string())? {
            Evaluated::Value(v) => Ok(v.to_string()),
            other => Err(format!("unexpected {other}")),
        }
    };
    let right = run("N0 /\\ (N0 /\\ N0)", "(1,(1,1))*(2,(1,1))")?;
    let left = run("(N0 /\\ N0) /\\ N0", "((1,1),1)*((2,1),1)")?;
    if right != "(3,(2,1))" || left != "((2,1),1)" {
        return Err(format!("got {right} and {left}"));
    }
    Ok(format!("{right} and {left}"))
}

const REQUIRED_LAWS: &[&str] = &[
    "addition is commutative",
    "multiplication is commutative",
    "addition is associative",
    "multiplication is associative",
    "multiplication distributes over addition",
    "zero is the additive identity",
    "one is the multiplicative identity",
    "zero is absorbing",
    "a + b >= b",
    "level of a product is the sum of levels",
    "level of a sum is the larger level",
];

fn law_suites() -> Verdict {
    let start = Instant::now();
    let checks = suite("laws")?;
    let t = start.elapsed();
    all_pass(&checks)?;
    for d in selfcheck::law_structures() {
        let mut required: Vec<&str> = REQUIRED_LAWS.to_vec();
        if d == Structure::p() || d == Structure::pn(2) {
            required.push("x * inv(x) is one");
        }
        for law in required {
            let c = find(&checks, &format!("{law} in {d}"))?;
            if c.cases < FULL {
                return Err(format!("{} ran on {} triples", c.name, c.cases));
            }
        }
    }
    if t > LAWS_LIMIT {
        return Err(format!("took {t:?}, limit {LAWS_LIMIT:?}"));
    }
    Ok(format!("{} law checks over 7 structures, {FULL} triples each, in {t:?}", checks.len()))
}

fn psi_isomorphism() -> Verdict {
    let checks = suite("psi")?;
    all_pass(&checks)?;
    let structures: Vec<String> = psi_structures(SEED).iter().map(ToString::to_string).collect();
    for d in &structures {
        for law in ["psi preserves order", "psi preserves addition"] {
            let c = find(&checks, &format!("{law} in {d}"))?;
            if c.cases < FULL {
                return Err(format!("{} ran on {} pairs", c.name, c.cases));
            }
        }
    }
    Ok(format!("order and addition preserved on {FULL} pairs in each of {}", structures.join("; ")))
}

fn summability() -> Verdict {
    let checks = suite("sums")?;
    all_pass(&checks)?;
    for name in [
        "sum of (n,1) over n >= 1 is top in Obar",
        "constant tails sum to the max-level closed form",
        "sup of (i,t) over growing t is (i,inf) in S",
        "sup of (i,t) over growing t is not representable in P",
    ] {
        find(&checks, name)?;
    }
    let sups: Vec<String> = checks.iter().filter(|c| c.name.starts_with("finite sup")).map(|c| c.cases.to_string()).collect();
    if sups.len() != 4 {
        return Err(format!("expected finite-sup checks for n = 1..4, found {}", sups.len()));
    }
    Ok(format!(
        "closed forms, lub and NotRepresentable cases hold; finite sups on {} sets for n = 1..4 (exhaustive where a size has at most {} subsets, sampled otherwise)",
        sups.join("/"),
        selfcheck::EXHAUSTIVE_SUBSETS
    ))
}

fn measure_roundtrips() -> Verdict {
    let checks = suite("measure")?;
    all_pass(&checks)?;
    let rt = find(&checks, "slices recover the measure")?;
    if rt.cases < 1000 {
        return Err(format!("only {} roundtrips", rt.cases));
    }
    let add = find(&checks, "measure adds over disjoint events")?;
    for name in ["alignment is idempotent and proximal", "shifting down undoes shifting up"] {
        find(&checks, name)?;
    }
    Ok(format!("{} roundtrips; {} disjoint pairs over spaces of 1..10 atoms; align and shift hold", rt.cases, add.cases))
}

fn integration() -> Verdict {
    let space = AtomSpace::new(["y", "rest"]).unwrap();
    let m = LMeasure::new(Structure::o(), space, vec![Value::lv(-1, 1, 1), Value::lv(0, 1, 1)]).unwrap();
    let dirac =
        integrate_lvalued(&m, &Structure::obar(), &[Value::lv(1, 1, 1), Value::Zero], &m.whole()).map_err(|e| e.to_string())?;
    expect("Dirac integral", &dirac, "(0,1)")?;
    let checks = suite("integrate")?;
    all_pass(&checks)?;
    for name in ["integral adds over disjoint events", "single-level integral is the weighted sum of residues"] {
        let c = find(&checks, name)?;
        if c.cases < 1000 {
            return Err(format!("{} ran on {} cases", c.name, c.cases));
        }
    }
    find(&checks, "negating the integrand negates the signed integral")?;
    Ok("Dirac gives (0,1); additivity, single-level oracle, scaling, product oracle and negation hold".into())
}

fn tree_metric() -> Verdict {
    let checks = suite("tree")?;
    all_pass(&checks)?;
    let trees = find(&checks, "random trees")?.cases;
    if trees < 200 {
        return Err(format!("only {trees} trees"));
    }
    for name in ["triangle inequality", "distance adds along a segment", "[x,y] and [x,z] intersect in [x,w]"] {
        find(&checks, name)?;
    }
    Ok(format!("{trees} trees of 1..12 nodes, every triple, all seven axioms"))
}

fn weights() -> Verdict {
    for (name, _) in BUILTIN_TRACKS {
        let t = builtin_track(name).unwrap();
        let r = check_branch_equations(&t.graph, &t.weights, &t.cocycle, Exec::Parallel).map_err(|e| e.to_string())?;
        if !r.passed {
            return Err(format!("example track {name} fails its branch equations"));
        }
    }
    let checks = suite("weights")?;
    all_pass(&checks)?;
    let deck = find(&checks, "deck scalars")?.cases;
    if deck < 100 * BUILTIN_TRACKS.len() {
        return Err(format!("only {deck} deck checks"));
    }
    let gauge = find(&checks, "gauge moves")?.cases;
    Ok(format!("{} example tracks balanced; {deck} deck scalings; {gauge} gauge moves", BUILTIN_TRACKS.len()))
}

fn cli() -> Verdict {
    let bin = env!("CARGO_BIN_EXE_stratum");
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let cases: &[(&str, &[&str])] = &[
        ("eval-division", &["eval", "P", "(-1,3/4) * inv((0,1/2))"]),
        ("eval-sum", &["eval", "S", "(1,1/4)+(1,1/2)"]),
        ("eval-right-nested", &["eval", "N0 /\\ (N0 /\\ N0)", "(1,(1,1))*(2,(1,1))"]),
        ("prob-cond-y-given-b", &["prob", "cond", "--builtin", "dartboard", "--event", "Y", "--given", "B"]),
        ("prob-cond-a-given-by", &["prob", "cond", "--builtin", "dartboard", "--event", "A", "--given", "B&Y"]),
        ("prob-bayes-horizontal", &["prob", "bayes", "--builtin", "dartboard", "--partition", "A1,A2,A3,A4", "--given", "H"]),
    ];
    for (name, args) in cases {
        let out = Command::new(bin).args(*args).output().map_err(|e| e.to_string())?;
        let want = std::fs::read(golden.join(format!("{name}.json"))).map_err(|e| e.to_string())?;
        if out.stdout != want {
            return Err(format!("{name}: output differs from the golden file"));
        }
    }
    let rt = suite("roundtrip")?;
    all_pass(&rt)?;
    let fuzzed = find(&rt, "element literals")?.cases;
    let args = ["selfcheck", "--seed", "42", "--cases", "10000"];
    let a = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
    let b = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
    if !a.status.success() {
        return Err("selfcheck --seed 42 --cases 10000 failed".into());
    }
    if a.stdout != b.stdout {
        return Err("selfcheck output differs between two runs with the same seed".into());
    }
    Ok(format!(
        "{} golden outputs bit-exact; {fuzzed} literals round-trip; selfcheck(42, 10000) passes identically twice",
        cases.len()
    ))
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: &[Criterion] = &[
        ("dartboard exactness", dartboard_exactness),
        ("Bayes exactness", bayes_exactness),
        ("non-associativity witness", non_associativity),
        ("algebraic law suites", law_suites),
        ("s-insertion associativity isomorphism", psi_isomorphism),
        ("summability and least upper bounds", summability),
        ("measure roundtrips", measure_roundtrips),
        ("integration", integration),
        ("tree metric", tree_metric),
        ("weights", weights),
        ("CLI goldens, literal fuzz, deterministic selfcheck", cli),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = f();
        let t = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("[PASS] {} {name} ({t:.2} s): {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("[FAIL] {} {name} ({t:.2} s): {reason}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
