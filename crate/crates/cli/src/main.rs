//! `stratum`: command-line front end for exact level arithmetic, L-measures,
//! depth probability, L-trees and train-track weights.
//!
//! Exit codes: 0 success, 1 domain or validation failure, 2 usage or parse error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use stratum::exec::Exec;
use stratum::expr::{self, Evaluated};
use stratum::formats::{self, SceneFile, Track};
use stratum::integrate::{integrate_lvalued, integrate_real, integrate_signed, signed_case, SimpleFunction};
use stratum::measure::{self, open_graded_measure, verify_open_graded, Event, GradedIntervalSet, LMeasure};
use stratum::prob::{self, bayes, cond_prob, normalize_from_density, standardize, validate_probability};
use stratum::selfcheck::{self, Options, SUITES};
use stratum::tree::{verify_metric, LTree};
use stratum::weights::{apply_deck, check_branch_equations, cocycle_split};
use stratum::{Error, Structure};

#[derive(Parser)]
#[command(name = "stratum", version, about = "Exact arithmetic on lexicographic level structures")]
struct Cli {
    /// Output format; json prints one object per line.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate an expression over element literals of a structure.
    Eval {
        structure: String,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Probability on P-valued scenes.
    #[command(subcommand)]
    Prob(ProbCmd),
    /// Level-valued measures and integrals.
    #[command(subcommand)]
    Measure(MeasureCmd),
    /// Trees with level-valued edge lengths.
    #[command(subcommand)]
    Tree(TreeCmd),
    /// Weight systems on branched graphs.
    #[command(subcommand)]
    Weights(WeightsCmd),
    /// Run the property suites.
    Selfcheck {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        cases: usize,
        /// Run only these suites (repeatable).
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: Vec<String>,
        /// Evaluate cases on one thread.
        #[arg(long)]
        sequential: bool,
        #[arg(long, hide = true)]
        mutant: bool,
    },
}

#[derive(Args)]
struct SceneArgs {
    /// Scene file.
    scene: Option<PathBuf>,
    /// Use a built-in scene instead of a file.
    #[arg(long, conflicts_with = "scene")]
    builtin: Option<String>,
}

#[derive(Subcommand)]
enum ProbCmd {
    /// Check the conditions for a depth-probability measure.
    Validate(SceneArgs),
    /// P(A|B).
    Cond {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long)]
        event: String,
        #[arg(long)]
        given: String,
    },
    /// Posteriors P(A_i|B) over a partition, through Bayes' formula.
    Bayes {
        #[command(flatten)]
        scene: SceneArgs,
        /// Comma-separated event names.
        #[arg(long, value_delimiter = ',')]
        partition: Vec<String>,
        #[arg(long)]
        given: String,
    },
    /// Close level gaps and move the top level to 0.
    Standardize(SceneArgs),
    /// Depth of an event under a standard measure.
    Depth {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long)]
        event: String,
    },
    /// Probability measure with a given P-valued density.
    Normalize {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long)]
        density: PathBuf,
    },
}

#[derive(Subcommand)]
enum MeasureCmd {
    /// Measure of an event (the whole space by default).
    Eval {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long)]
        event: Option<String>,
    },
    /// Extended-real slice at a level.
    Slice {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long, allow_hyphen_values = true)]
        level: i64,
        #[arg(long)]
        event: Option<String>,
    },
    /// Number of levels between the lowest and highest attained level.
    Height(SceneArgs),
    /// Close gaps between attained levels.
    Align(SceneArgs),
    /// Add a constant to every level.
    Shift {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long, allow_hyphen_values = true)]
        by: i64,
    },
    /// Integral of a simple function.
    Integrate {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        event: Option<String>,
    },
    /// Measure of a graded interval set, or the openness check at a level.
    OpenGraded {
        /// Pieces such as `0:(0,1]; 1:[2,3)`, plus `above:j`, `below:j`, `zero`, `top`.
        #[arg(required_unless_present = "verify")]
        set: Option<String>,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "set")]
        verify: Option<i64>,
    },
}

#[derive(Subcommand)]
enum TreeCmd {
    /// Distance between two nodes.
    Dist { file: PathBuf, x: String, y: String },
    /// Nodes on the segment from x to y.
    Segment { file: PathBuf, x: String, y: String },
    /// Meet of three nodes.
    Meet { file: PathBuf, x: String, y: String, z: String },
    /// Order-tree and metric axioms on every triple, or on samples of a large tree.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        cases: usize,
    },
}

#[derive(Args)]
struct TrackArgs {
    /// Track file.
    track: Option<PathBuf>,
    /// Use a shipped example track instead of a file.
    #[arg(long, conflicts_with = "track")]
    builtin: Option<String>,
}

#[derive(Subcommand)]
enum WeightsCmd {
    /// Check the branch equation at every switch.
    Check(TrackArgs),
    /// Multiply every weight by a unit and recheck.
    Deck {
        #[command(flatten)]
        track: TrackArgs,
        #[arg(long, allow_hyphen_values = true)]
        scalar: String,
    },
    /// Level-shift and stretch parts of every multiplier.
    Split(TrackArgs),
}

enum Failure {
    Lib(Error),
    Usage(String),
    /// The result was printed and reports a failed check.
    Rejected,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<(), Failure>;

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "parse",
        Error::Capability(_) => "capability",
        Error::Shape(_) => "shape",
        Error::Domain(_) => "domain",
        Error::NotSummable(_) => "not_summable",
        Error::NotRepresentable(_) => "not_representable",
        Error::Unbounded(_) => "unbounded",
        Error::NotInP(_) => "not_in_p",
        Error::Invalid(_) => "invalid",
    }
}

struct Out {
    format: Format,
}

impl Out {
    fn emit(&self, json: Json, text: impl FnOnce() -> String) {
        match self.format {
            Format::Json => println!("{json}"),
            Format::Text => println!("{}", text()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_scene(a: &SceneArgs) -> Result<LMeasure, Failure> {
    match (&a.scene, &a.builtin) {
        (Some(p), None) => Ok(formats::parse_scene(&read(p)?)?),
        (None, Some(name)) => measure::builtin(name).ok_or_else(|| {
            Failure::Usage(format!("unknown built-in scene {name:?}; available: {}", measure::BUILTIN_SCENES.join(", ")))
        }),
        _ => Err(Failure::Usage("give a scene file or --builtin <name>".into())),
    }
}

fn load_track(a: &TrackArgs) -> Result<Track, Failure> {
    match (&a.track, &a.builtin) {
        (Some(p), None) => Ok(formats::parse_track(&read(p)?)?),
        (None, Some(name)) => formats::builtin_track(name).ok_or_else(|| {
            let names: Vec<&str> = formats::BUILTIN_TRACKS.iter().map(|(n, _)| *n).collect();
            Failure::Usage(format!("unknown built-in track {name:?}; available: {}", names.join(", ")))
        }),
        _ => Err(Failure::Usage("give a track file or --builtin <name>".into())),
    }
}

fn load_tree(p: &Path) -> Result<LTree, Failure> {
    Ok(formats::parse_tree(&read(p)?)?)
}

fn event(m: &LMeasure, src: Option<&str>) -> Result<Event, Failure> {
    Ok(match src {
        Some(s) => m.space().parse_event(s)?,
        None => m.whole(),
    })
}

fn scene_json(m: &LMeasure) -> Json {
    serde_json::to_value(SceneFile::from_measure(m)).expect("serializable")
}

fn lit(d: &Structure, v: &stratum::Value) -> String {
    d.format_value(v)
}

fn run(cli: Cli) -> Outcome {
    let out = Out { format: cli.format };
    match cli.cmd {
        Cmd::Eval { structure, expr: src } => {
            let d: Structure = structure.parse()?;
            let r = expr::eval(&d, &src)?;
            let result = match &r {
                Evaluated::Value(v) => lit(&d, v),
                other => other.to_string(),
            };
            out.emit(json!({"structure": d.to_string(), "expr": src, "result": result}), || result.clone());
            Ok(())
        }
        Cmd::Prob(c) => run_prob(&out, c),
        Cmd::Measure(c) => run_measure(&out, c),
        Cmd::Tree(c) => run_tree(&out, c),
        Cmd::Weights(c) => run_weights(&out, c),
        Cmd::Selfcheck { seed, cases, suite, sequential, mutant } => {
            let opts = Options { seed, cases, mutant, exec: if sequential { Exec::Sequential } else { Exec::Parallel } };
            let checks = if suite.is_empty() {
                selfcheck::run_all(&opts)
            } else {
                let mut all = Vec::new();
                for s in &suite {
                    all.extend(selfcheck::run(s, &opts)?);
                }
                all
            };
            for c in &checks {
                out.emit(serde_json::to_value(c).expect("serializable"), || {
                    let mark = if c.passed() { "ok  " } else { "FAIL" };
                    let mut line = format!("{mark} {}: {} ({} cases)", c.suite, c.name, c.cases);
                    if let Some(x) = &c.counterexample {
                        line.push_str(&format!("\n     {} failures, e.g. {x}", c.failures));
                    }
                    line
                });
            }
            let failed = checks.iter().filter(|c| !c.passed()).count();
            out.emit(json!({"summary": {"seed": seed, "cases": cases, "checks": checks.len(), "failed": failed}}), || {
                format!("{} checks, {failed} failed (seed {seed}, cases {cases})", checks.len())
            });
            if failed > 0 {
                Err(Failure::Rejected)
            } else {
                Ok(())
            }
        }
    }
}

fn run_prob(out: &Out, c: ProbCmd) -> Outcome {
    match c {
        ProbCmd::Validate(s) => {
            let m = load_scene(&s)?;
            let r = validate_probability(&m)?;
            out.emit(serde_json::to_value(&r).expect("serializable"), || {
                let mut lines = vec![format!(
                    "{}: {}",
                    r.structure,
                    if r.is_probability { "probability measure" } else { "not a probability measure" }
                )];
                for c in &r.conditions {
                    lines.push(format!("  [{}] {} {}", if c.passed { "ok" } else { "fail" }, c.name, c.detail));
                }
                lines.join("\n")
            });
            if r.is_probability {
                Ok(())
            } else {
                Err(Failure::Rejected)
            }
        }
        ProbCmd::Cond { scene, event: a, given: b } => {
            let m = load_scene(&scene)?;
            let v = cond_prob(&m, &m.space().parse_event(&a)?, &m.space().parse_event(&b)?)?;
            let v = lit(m.desc(), &v);
            out.emit(json!({"event": a, "given": b, "value": v}), || format!("P({a}|{b}) = {v}"));
            Ok(())
        }
        ProbCmd::Bayes { scene, partition, given } => {
            let m = load_scene(&scene)?;
            let cells = partition
                .iter()
                .map(|name| Ok((name.clone(), m.space().parse_event(name)?)))
                .collect::<Result<Vec<_>, Error>>()?;
            let t = bayes(&m, &cells, &m.space().parse_event(&given)?, Exec::Parallel)?;
            out.emit(serde_json::to_value(&t).expect("serializable"), || {
                let mut lines = vec![format!("given {given}: total {} = measure {}", t.total, t.measure_of_given)];
                for r in &t.rows {
                    lines
                        .push(format!("  {}: prior {}, likelihood {}, posterior {}", r.cell, r.prior, r.likelihood, r.posterior));
                }
                lines.join("\n")
            });
            if t.consistent {
                Ok(())
            } else {
                Err(Failure::Rejected)
            }
        }
        ProbCmd::Standardize(s) => {
            let m = load_scene(&s)?;
            let st = standardize(&m)?;
            out.emit(
                json!({"shift": st.shift.to_string(), "total_depth": st.total_depth.to_string(), "scene": scene_json(&st.measure)}),
                || formats::scene_to_json(&st.measure),
            );
            Ok(())
        }
        ProbCmd::Depth { scene, event: e } => {
            let m = load_scene(&scene)?;
            let j = prob::depth(&m, &m.space().parse_event(&e)?)?;
            out.emit(json!({"event": e, "depth": j.to_string()}), || j.to_string());
            Ok(())
        }
        ProbCmd::Normalize { scene, density } => {
            let mu = load_scene(&scene)?;
            let f = match formats::parse_function(&read(&density)?, &mu)? {
                SimpleFunction::LValued { values, .. } => values,
                _ => return Err(Failure::Usage("the density must be an lvalued function over P".into())),
            };
            let nu = normalize_from_density(&mu, &f)?;
            out.emit(scene_json(&nu), || formats::scene_to_json(&nu));
            Ok(())
        }
    }
}

fn run_measure(out: &Out, c: MeasureCmd) -> Outcome {
    match c {
        MeasureCmd::Eval { scene, event: e } => {
            let m = load_scene(&scene)?;
            let v = lit(m.desc(), &m.measure(&event(&m, e.as_deref())?)?);
            out.emit(json!({"event": e, "value": v}), || v.clone());
            Ok(())
        }
        MeasureCmd::Slice { scene, level, event: e } => {
            let m = load_scene(&scene)?;
            let v = m.slice(&level.into(), &event(&m, e.as_deref())?)?.to_string();
            out.emit(json!({"level": level, "event": e, "value": v}), || v.clone());
            Ok(())
        }
        MeasureCmd::Height(s) => {
            let m = load_scene(&s)?;
            let (h, proximal) = (m.total_height()?.to_string(), m.is_proximal()?);
            out.emit(json!({"height": h, "proximal": proximal}), || format!("height {h}, proximal {proximal}"));
            Ok(())
        }
        MeasureCmd::Align(s) => {
            let m = load_scene(&s)?.align_levels()?;
            out.emit(scene_json(&m), || formats::scene_to_json(&m));
            Ok(())
        }
        MeasureCmd::Shift { scene, by } => {
            let m = load_scene(&scene)?.shift_levels(&by.into())?;
            out.emit(scene_json(&m), || formats::scene_to_json(&m));
            Ok(())
        }
        MeasureCmd::Integrate { scene, function, event: e } => {
            let m = load_scene(&scene)?;
            let a = event(&m, e.as_deref())?;
            let d = m.desc().clone();
            match formats::parse_function(&read(&function)?, &m)? {
                SimpleFunction::RealValued(f) => {
                    let v = lit(&d, &integrate_real(&m, &f, &a)?);
                    out.emit(json!({"kind": "real", "value": v}), || v.clone());
                }
                SimpleFunction::LValued { desc, values } => {
                    let v = lit(&d, &integrate_lvalued(&m, &desc, &values, &a)?);
                    out.emit(json!({"kind": "lvalued", "value": v}), || v.clone());
                }
                SimpleFunction::SignedLValued { desc, values } => {
                    let s = integrate_signed(&m, &desc, &values, &a)?;
                    let signed = Structure::double(d.clone())?;
                    let (v, p, n) = (lit(&signed, &s.value), lit(&d, &s.positive), lit(&d, &s.negative));
                    let case = signed_case(&s);
                    out.emit(json!({"kind": "signed", "value": v, "positive": p, "negative": n, "case": case}), || {
                        format!("{v} ({case}: positive part {p}, negative part {n})")
                    });
                }
            }
            Ok(())
        }
        MeasureCmd::OpenGraded { set, verify } => {
            if let Some(k) = verify {
                let r = verify_open_graded(&k.into())?;
                let witness = r.witness.clone();
                out.emit(
                    json!({"k": k, "points_checked": r.points_checked, "points_in_union": r.points_in_union, "open": r.open, "witness": witness}),
                    || format!("level {k}: {} ({} of {} sample points in the union)", if r.open { "open" } else { "not open" }, r.points_in_union, r.points_checked),
                );
                return if r.open { Ok(()) } else { Err(Failure::Rejected) };
            }
            let src = set.expect("clap requires a set without --verify");
            let e: GradedIntervalSet = src.parse()?;
            let v = lit(&Structure::obar(), &open_graded_measure(&e)?);
            out.emit(json!({"set": src, "value": v}), || v.clone());
            Ok(())
        }
    }
}

fn run_tree(out: &Out, c: TreeCmd) -> Outcome {
    match c {
        TreeCmd::Dist { file, x, y } => {
            let t = load_tree(&file)?;
            let v = lit(t.desc(), &t.distance(&x, &y)?);
            out.emit(json!({"x": x, "y": y, "distance": v}), || v.clone());
        }
        TreeCmd::Segment { file, x, y } => {
            let t = load_tree(&file)?;
            let s = t.segment(&x, &y)?;
            out.emit(json!({"x": x, "y": y, "segment": s}), || s.join(" "));
        }
        TreeCmd::Meet { file, x, y, z } => {
            let t = load_tree(&file)?;
            let w = t.meet(&x, &y, &z)?;
            out.emit(json!({"x": x, "y": y, "z": z, "meet": w}), || w.to_string());
        }
        TreeCmd::Verify { file, seed, cases } => {
            let t = load_tree(&file)?;
            let r = verify_metric(&t, seed, cases, Exec::Parallel);
            out.emit(serde_json::to_value(&r).expect("serializable"), || {
                let mut lines = vec![format!(
                    "{} nodes, {} triples{}",
                    r.nodes,
                    r.triples,
                    if r.exhaustive { " (all)" } else { " (sampled)" }
                )];
                for o in &r.outcomes {
                    lines.push(format!("  [{}] {}", if o.failures == 0 { "ok" } else { "fail" }, o.name));
                }
                lines.join("\n")
            });
            if !r.passed {
                return Err(Failure::Rejected);
            }
        }
    }
    Ok(())
}

fn branch_text(r: &stratum::weights::BranchReport) -> String {
    let mut lines =
        vec![format!("{}: {}", r.structure, if r.passed { "all branch equations hold" } else { "branch equations fail" })];
    for s in &r.switches {
        lines.push(format!("  {} {} {} {}", s.name, s.side1, if s.holds { "=" } else { "!=" }, s.side2));
    }
    lines.join("\n")
}

fn run_weights(out: &Out, c: WeightsCmd) -> Outcome {
    match c {
        WeightsCmd::Check(a) => {
            let t = load_track(&a)?;
            let r = check_branch_equations(&t.graph, &t.weights, &t.cocycle, Exec::Parallel)?;
            out.emit(serde_json::to_value(&r).expect("serializable"), || branch_text(&r));
            if !r.passed {
                return Err(Failure::Rejected);
            }
        }
        WeightsCmd::Deck { track, scalar } => {
            let t = load_track(&track)?;
            let d = t.weights.desc.clone();
            let lambda = d.parse_value(&scalar)?;
            let w = apply_deck(&t.weights, &lambda)?;
            let r = check_branch_equations(&t.graph, &w, &t.cocycle, Exec::Parallel)?;
            let weights: serde_json::Map<String, Json> =
                w.weights.iter().map(|(s, v)| (s.clone(), Json::String(lit(&d, v)))).collect();
            out.emit(json!({"scalar": lit(&d, &lambda), "weights": weights, "report": r}), || branch_text(&r));
            if !r.passed {
                return Err(Failure::Rejected);
            }
        }
        WeightsCmd::Split(a) => {
            let t = load_track(&a)?;
            for s in cocycle_split(&t.weights.desc, &t.cocycle)? {
                out.emit(serde_json::to_value(&s).expect("serializable"), || {
                    format!("{}.{}: level shift ({}), stretch {}", s.sector, s.end, s.level_shift.join(","), s.stretch)
                });
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Rejected) => ExitCode::from(1),
        Err(f) => {
            let (kind, msg, code) = match f {
                Failure::Lib(e) => (error_kind(&e), e.to_string(), if e.is_parse() { 2 } else { 1 }),
                Failure::Usage(m) => ("usage", m, 2),
                Failure::Rejected => unreachable!("handled above"),
            };
            match format {
                Format::Json => eprintln!("{}", json!({"error": kind, "message": msg})),
                Format::Text => eprintln!("error: {msg}"),
            }
            ExitCode::from(code)
        }
    }
}
