//! Property suites over random and named instances.
//!
//! Each suite runs `trials` independent trials in parallel, each drawing
//! from its own random stream, then folds the outcomes in trial order. A
//! report therefore depends only on the configuration and the input
//! presentation, never on scheduling. Named checks on fixed examples run
//! once per suite and carry no trial index.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::RepError;
use crate::fixtures;
use crate::format::{parse_presentation, serialize_morphism, serialize_presentation, serialize_representation, Presentation};
use crate::hilbert::graded_piece_dim;
use crate::path::{count_paths, IdealPresentation, Path};
use crate::quiver::{ArrowId, WeightedQuiver};
use crate::random;
use crate::regrade::{regrade, split_arrow, SplitTrace};
use crate::representation::{
    counit_epsilon, functor_f, functor_g, functor_on_morphism, DegreeWindow, Direction, GradedMorphism, GradedRep,
};
use crate::scalar::{Field, Scalar, DEFAULT_PRIME};

/// Relations drawn for random instances have at most this degree.
const RANDOM_RELATION_DEGREE: u32 = 3;
/// Hilbert checks skip any degree with more basis paths than this.
const PATH_LIMIT: u128 = 4000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Split,
    Functor,
    Hilbert,
}

impl Suite {
    pub const ALL: [Suite; 3] = [Suite::Split, Suite::Functor, Suite::Hilbert];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Split => "split",
            Suite::Functor => "functor",
            Suite::Hilbert => "hilbert",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub master_seed: u64,
    pub trials: u64,
    pub window: DegreeWindow,
    pub max_dim: usize,
    pub field: Field,
    /// Largest degree in the Hilbert tables.
    pub max_degree: u32,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            master_seed: 0,
            trials: 200,
            window: DegreeWindow::new(-2, 10).expect("nonempty"),
            max_dim: 3,
            field: Field::Prime(DEFAULT_PRIME),
            max_degree: 10,
        }
    }
}

/// A replayable failure: rerunning the suite with `seed` reproduces it at
/// `trial` (absent for the fixed named checks).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub seed: u64,
    pub trial: Option<u64>,
    pub detail: String,
    /// The failing input in the presentation file format.
    pub input: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub property: String,
    pub trials: u64,
    pub failures: u64,
    pub first_counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub trials: u64,
    pub window: String,
    pub max_dim: usize,
    pub field: String,
    pub properties: Vec<PropertyReport>,
    pub warnings: Vec<String>,
    /// Not rendered, so that reports stay byte-identical across runs.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(|p| p.failures == 0)
    }

    pub fn property(&self, name: &str) -> Option<&PropertyReport> {
        self.properties.iter().find(|p| p.property == name)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "{} suite: seed {}, {} trials, window {}, max-dim {}, field {}",
            self.suite, self.seed, self.trials, self.window, self.max_dim, self.field
        )
        .expect("write to string");
        for p in &self.properties {
            if p.failures == 0 {
                writeln!(out, "  ok    {:<24} {} checked", p.property, p.trials).expect("write to string");
                continue;
            }
            writeln!(out, "  FAIL  {:<24} {} of {} failed", p.property, p.failures, p.trials).expect("write to string");
            if let Some(c) = &p.first_counterexample {
                match c.trial {
                    Some(t) => writeln!(out, "        first failure: seed {} trial {}: {}", c.seed, t, c.detail),
                    None => writeln!(out, "        failure: {}", c.detail),
                }
                .expect("write to string");
                for line in c.input.lines() {
                    writeln!(out, "        | {line}").expect("write to string");
                }
            }
        }
        for w in &self.warnings {
            writeln!(out, "  warning: {w}").expect("write to string");
        }
        out
    }
}

/// Text for several reports, in order.
pub fn render_text(reports: &[SuiteReport]) -> String {
    reports.iter().map(SuiteReport::render_text).collect::<Vec<_>>().join("\n")
}

/// JSON for several reports.
pub fn render_json(reports: &[SuiteReport]) -> String {
    #[derive(Serialize)]
    struct Doc<'a> {
        passed: bool,
        suites: &'a [SuiteReport],
    }
    let doc = Doc {
        passed: reports.iter().all(SuiteReport::passed),
        suites: reports,
    };
    serde_json::to_string_pretty(&doc).expect("reports serialize") + "\n"
}

/// Runs one suite against `file`, whose coefficients must be rational.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig, file: &Presentation) -> SuiteReport {
    let started = Instant::now();
    let mut report = match suite {
        Suite::Split => run_split_suite(cfg, file),
        Suite::Functor => run_functor_suite(cfg, file),
        Suite::Hilbert => run_hilbert_suite(cfg, file),
    };
    report.wall_time = started.elapsed();
    report
}

// ---------------------------------------------------------------------------
// Aggregation

#[derive(Debug)]
struct Failure {
    detail: String,
    input: String,
}

type Check = Result<(), Failure>;

fn fail(detail: impl Into<String>, input: impl Into<String>) -> Check {
    Err(Failure {
        detail: detail.into(),
        input: input.into(),
    })
}

#[derive(Default)]
struct Outcomes {
    checks: Vec<(&'static str, Check)>,
    warnings: Vec<String>,
}

impl Outcomes {
    fn push(&mut self, property: &'static str, check: Check) {
        self.checks.push((property, check));
    }
}

struct Aggregator {
    seed: u64,
    properties: Vec<PropertyReport>,
    warnings: Vec<String>,
}

impl Aggregator {
    fn new(seed: u64, names: &[&str]) -> Self {
        Aggregator {
            seed,
            properties: names
                .iter()
                .map(|n| PropertyReport {
                    property: n.to_string(),
                    trials: 0,
                    failures: 0,
                    first_counterexample: None,
                })
                .collect(),
            warnings: Vec::new(),
        }
    }

    fn absorb(&mut self, trial: Option<u64>, outcomes: Outcomes) {
        for (name, check) in outcomes.checks {
            let p = self
                .properties
                .iter_mut()
                .find(|p| p.property == name)
                .expect("property is registered");
            p.trials += 1;
            if let Err(f) = check {
                p.failures += 1;
                p.first_counterexample.get_or_insert(Counterexample {
                    seed: self.seed,
                    trial,
                    detail: f.detail,
                    input: f.input,
                });
            }
        }
        self.warnings.extend(outcomes.warnings);
    }

    fn finish(self, suite: Suite, cfg: &SuiteConfig, started: Instant) -> SuiteReport {
        SuiteReport {
            suite: suite.name().to_string(),
            seed: cfg.master_seed,
            trials: cfg.trials,
            window: cfg.window.to_string(),
            max_dim: cfg.max_dim,
            field: cfg.field.to_string(),
            properties: self.properties,
            warnings: self.warnings,
            wall_time: started.elapsed(),
        }
    }
}

/// Named checks, then every trial in index order.
fn run(
    suite: Suite,
    cfg: &SuiteConfig,
    names: &[&str],
    fixed: Outcomes,
    trial: impl Fn(u64) -> Outcomes + Sync,
) -> SuiteReport {
    let started = Instant::now();
    let mut agg = Aggregator::new(cfg.master_seed, names);
    agg.absorb(None, fixed);
    let results: Vec<Outcomes> = (0..cfg.trials).into_par_iter().map(&trial).collect();
    for (i, outcomes) in results.into_iter().enumerate() {
        agg.absorb(Some(i as u64), outcomes);
    }
    agg.finish(suite, cfg, started)
}

/// Reads a rational ideal into `field`, or explains why it cannot be.
fn reduce(ideal: &IdealPresentation, field: Field) -> Result<IdealPresentation, String> {
    if let Field::Prime(p) = field {
        for g in ideal.generators() {
            for (_, c) in g.sum().terms() {
                match c {
                    Scalar::Rational(r) if (r.denom() % p).bits() == 0 => {
                        return Err(format!("relation `{g}` has a denominator divisible by {p}"));
                    }
                    Scalar::Mod { modulus, .. } if *modulus != p => {
                        return Err(format!("relation `{g}` has coefficients modulo {modulus}"));
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(ideal.over(field))
}

fn describe_split(t: &SplitTrace, ideal: &IdealPresentation) -> String {
    format!("# split of `{}`\n{}", t.split_arrow, serialize_presentation(&t.before, ideal))
}

fn rep_error(context: &str, e: RepError) -> Failure {
    Failure {
        detail: format!("{context}: {e}"),
        input: String::new(),
    }
}

/// The first place two representations differ, for failure messages.
fn first_difference(a: &GradedRep, b: &GradedRep) -> String {
    if a.window() != b.window() {
        return format!("windows {} and {}", a.window(), b.window());
    }
    for v in a.quiver().vertices() {
        if a.spaces(v) != b.spaces(v) {
            return format!("spaces at `{v}`: {:?} vs {:?}", a.spaces(v), b.spaces(v));
        }
    }
    for ((arrow, d), m) in a.maps() {
        if b.map(arrow, *d) != Some(m) {
            return format!("matrix of `{arrow}` at degree {d}");
        }
    }
    "quiver or field".to_string()
}

// ---------------------------------------------------------------------------
// Split suite

const SPLIT_PROPERTIES: [&str; 9] = [
    "example_golden",
    "rewrite_golden",
    "kxy_golden",
    "file_regrade",
    "discrepancy_decrement",
    "split_shape",
    "regrade_terminates",
    "rewrite_multiplicative",
    "rewrite_degree",
];

/// Splits, full regrading and the rewrite map.
pub fn run_split_suite(cfg: &SuiteConfig, file: &Presentation) -> SuiteReport {
    let mut fixed = Outcomes::default();
    for deg in [2, 3] {
        fixed.push("example_golden", example_golden(deg));
    }
    fixed.push("rewrite_golden", rewrite_golden());
    fixed.push("kxy_golden", kxy_golden());
    fixed.push("file_regrade", file_regrade(file));

    let field = cfg.field;
    run(Suite::Split, cfg, &SPLIT_PROPERTIES, fixed, |trial| {
        let mut rng = random::trial_rng(cfg.master_seed, trial);
        let q = random::quiver(&mut rng, true);
        let ideal = random::ideal(&mut rng, &q, field, RANDOM_RELATION_DEGREE).unwrap_or_default();
        let b = random::split_target(&mut rng, &q).expect("quiver has a splittable arrow");
        let mut pairs = Vec::new();
        for j in 0..4 {
            let p = random::path(&mut rng, &q, 4);
            let r = if j < 2 {
                random::path_from(&mut rng, &q, p.target(), 4)
            } else {
                random::path(&mut rng, &q, 4)
            };
            pairs.push((p, r));
        }

        let input = serialize_presentation(&q, &ideal);
        let mut out = Outcomes::default();
        let t = split_arrow(&q, &b).expect("degree at least 2");
        out.push("discrepancy_decrement", {
            let (before, after) = (q.weight_discrepancy(), t.after.weight_discrepancy());
            if after + 1 == before {
                Ok(())
            } else {
                fail(format!("splitting `{b}`: D went from {before} to {after}"), input.clone())
            }
        });
        out.push("split_shape", split_shape(&t).or_else(|d| fail(d, input.clone())));
        out.push("regrade_terminates", regrade_terminates(&q, &ideal).or_else(|d| fail(d, input.clone())));
        let whole = regrade(&q, &ideal);
        for (p, r) in &pairs {
            let single = multiplicative(p, r, |x| t.rewrite_path(x));
            let composite = multiplicative(p, r, |x| whole.rewrite_path(x));
            out.push(
                "rewrite_multiplicative",
                single
                    .and(composite)
                    .or_else(|d| fail(format!("f({p} · {r}): {d}"), format!("# split of `{b}`\n{input}"))),
            );
            for x in [p, r] {
                out.push(
                    "rewrite_degree",
                    rewrite_degree(&t, x).or_else(|d| fail(d, format!("# split of `{b}`\n{input}"))),
                );
            }
        }
        out
    })
}

fn example_golden(deg: i64) -> Check {
    let q = fixtures::two_vertex_quiver(deg);
    let t = split_arrow(&q, &ArrowId::new("b")).expect("b splits");
    let expected = WeightedQuiver::from_parts(
        &["v1", "v2", "z"],
        &[
            ("a", "v1", "v1", 1),
            ("b'", "v1", "z", 1),
            ("b''", "z", "v2", deg - 1),
            ("c", "v1", "v2", 1),
            ("d", "v2", "v2", 1),
        ],
    )
    .expect("valid quiver");
    if t.after == expected {
        Ok(())
    } else {
        fail(
            format!("split of b with degree {deg} gave an unexpected quiver"),
            serialize_presentation(&t.after, &IdealPresentation::empty()),
        )
    }
}

fn rewrite_golden() -> Check {
    let q = fixtures::two_vertex_quiver(2);
    let t = split_arrow(&q, &ArrowId::new("b")).expect("b splits");
    for (word, want) in [("a*a*b*d", "a*a*b'*b''*d"), ("a*c*d", "a*c*d")] {
        let p = Path::parse(&q, word).expect("golden path");
        let got = t.rewrite_path(&p).to_string();
        if got != want {
            return fail(format!("f({word}) = {got}, expected {want}"), serialize_presentation(&q, &IdealPresentation::empty()));
        }
    }
    Ok(())
}

fn kxy_golden() -> Check {
    let (q, ideal) = fixtures::kxy();
    let r = regrade(&q, &ideal);
    let expected = WeightedQuiver::from_parts(&["v", "z"], &[("x", "v", "v", 1), ("y'", "v", "z", 1), ("y''", "z", "v", 1)])
        .expect("valid quiver");
    let relations: Vec<String> = r.final_ideal.generators().iter().map(|g| g.to_string()).collect();
    if r.trace.len() == 1 && r.final_quiver == expected && relations == ["x*y'*y'' - y'*y''*x"] {
        Ok(())
    } else {
        fail(
            format!("k[x,y] regraded in {} splits to an unexpected presentation", r.trace.len()),
            serialize_presentation(&r.final_quiver, &r.final_ideal),
        )
    }
}

fn file_regrade(file: &Presentation) -> Check {
    let r = regrade(&file.quiver, &file.ideal);
    let input = file.to_string();
    let d = file.quiver.weight_discrepancy();
    if r.trace.len() as u64 != d || r.final_quiver.weight_discrepancy() != 0 {
        return fail(format!("regrading took {} splits for D = {d}", r.trace.len()), input);
    }
    let text = serialize_presentation(&r.final_quiver, &r.final_ideal);
    match parse_presentation(&text, Field::Rational) {
        Ok(p) if p.quiver == r.final_quiver && p.ideal == r.final_ideal => Ok(()),
        Ok(_) => fail("regraded output re-parses to a different presentation", text),
        Err(e) => fail(format!("regraded output does not re-parse: {e}"), text),
    }
}

fn split_shape(t: &SplitTrace) -> Result<(), String> {
    let b = t.split_data();
    let (before, after) = (&t.before, &t.after);
    if before.has_vertex(&t.new_vertex) || !after.has_vertex(&t.new_vertex) {
        return Err(format!("`{}` is not a fresh vertex", t.new_vertex));
    }
    if after.vertex_count() != before.vertex_count() + 1 || after.arrow_count() != before.arrow_count() + 1 {
        return Err("split changed more than one vertex and one arrow".into());
    }
    let first = after.arrow(&t.first).ok_or("first half missing")?;
    let second = after.arrow(&t.second).ok_or("second half missing")?;
    if first.source != b.source || first.target != t.new_vertex || first.degree != 1 {
        return Err(format!("`{}` is not {} → {} in degree 1", t.first, b.source, t.new_vertex));
    }
    if second.source != t.new_vertex || second.target != b.target || second.degree != b.degree - 1 {
        return Err(format!("`{}` is not {} → {} in degree {}", t.second, t.new_vertex, b.target, b.degree - 1));
    }
    for (id, a) in before.arrows() {
        if *id != t.split_arrow && after.arrow(id) != Some(a) {
            return Err(format!("arrow `{id}` changed"));
        }
    }
    if after.arrow(&t.split_arrow).is_some() {
        return Err(format!("`{}` survived its split", t.split_arrow));
    }
    Ok(())
}

fn regrade_terminates(q: &WeightedQuiver, ideal: &IdealPresentation) -> Result<(), String> {
    let r = regrade(q, ideal);
    let d = q.weight_discrepancy();
    if r.trace.len() as u64 != d {
        return Err(format!("{} splits for D = {d}", r.trace.len()));
    }
    if r.final_quiver.max_degree() > 1 {
        return Err(format!("final maximum degree {}", r.final_quiver.max_degree()));
    }
    for (k, step) in r.trace.iter().enumerate() {
        if step.after.weight_discrepancy() + 1 != step.before.weight_discrepancy() {
            return Err(format!("step {k} did not lower D by one"));
        }
    }
    if r.final_ideal.len() != ideal.len() {
        return Err("relations were lost while regrading".into());
    }
    for (old, new) in ideal.generators().iter().zip(r.final_ideal.generators()) {
        if (old.source(), old.target(), old.degree()) != (new.source(), new.target(), new.degree()) {
            return Err(format!("`{old}` became `{new}` with different endpoints or degree"));
        }
    }
    Ok(())
}

/// `f(pq) = f(p)f(q)`, with both sides zero when `p`, `q` do not compose.
fn multiplicative(p: &Path, q: &Path, f: impl Fn(&Path) -> Path) -> Result<(), String> {
    match (p.multiply(q), f(p).multiply(&f(q))) {
        (Some(pq), Some(image)) if f(&pq) == image => Ok(()),
        (Some(pq), Some(image)) => Err(format!("f(pq) = {} but f(p)f(q) = {image}", f(&pq))),
        (None, None) => Ok(()),
        (Some(_), None) => Err("images do not compose".into()),
        (None, Some(_)) => Err("images compose but the paths do not".into()),
    }
}

fn rewrite_degree(t: &SplitTrace, p: &Path) -> Result<(), String> {
    let image = t.rewrite_path(p);
    if image.degree() != p.degree() {
        return Err(format!("deg f({p}) = {} but deg {p} = {}", image.degree(), p.degree()));
    }
    if image.source() != p.source() || image.target() != p.target() {
        return Err(format!("f({p}) = {image} moved an endpoint"));
    }
    if !image.belongs_to(&t.after) {
        return Err(format!("f({p}) = {image} is not a path of the split quiver"));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Functor suite

const FUNCTOR_PROPERTIES: [&str; 7] = [
    "gf_identity",
    "relation_transport",
    "shift_compatibility",
    "exactness",
    "counit_support",
    "counit_on_image",
    "naturality",
];

/// One split with the relations of its source quiver.
struct Instance {
    trace: SplitTrace,
    ideal: IdealPresentation,
    kxy: bool,
}

/// The split steps of the input file, each with the relations it starts from.
fn file_steps(file: &Presentation, field: Field) -> Result<Vec<(SplitTrace, IdealPresentation)>, String> {
    let ideal = reduce(&file.ideal, field)?;
    let r = regrade(&file.quiver, &ideal);
    let mut current = ideal;
    let mut steps = Vec::new();
    for t in r.trace {
        let next = t.rewrite_ideal(&current);
        steps.push((t, current));
        current = next;
    }
    Ok(steps)
}

/// Every fourth trial uses a split of the input file (when it has one),
/// the next uses k[x,y], the rest a random quiver and ideal.
fn instance(rng: &mut impl Rng, trial: u64, field: Field, steps: &[(SplitTrace, IdealPresentation)]) -> Instance {
    match trial % 4 {
        0 if !steps.is_empty() => {
            let (trace, ideal) = &steps[rng.gen_range(0..steps.len())];
            Instance {
                trace: trace.clone(),
                ideal: ideal.clone(),
                kxy: false,
            }
        }
        1 => {
            let (q, ideal) = fixtures::kxy_over(field);
            Instance {
                trace: split_arrow(&q, &ArrowId::new("y")).expect("y has degree 2"),
                ideal,
                kxy: true,
            }
        }
        _ => {
            let q = random::quiver(rng, true);
            let ideal = random::ideal(rng, &q, field, RANDOM_RELATION_DEGREE).unwrap_or_default();
            let b = random::split_target(rng, &q).expect("quiver has a splittable arrow");
            Instance {
                trace: split_arrow(&q, &b).expect("degree at least 2"),
                ideal,
                kxy: false,
            }
        }
    }
}

/// The representation-level functors and the counit.
pub fn run_functor_suite(cfg: &SuiteConfig, file: &Presentation) -> SuiteReport {
    let mut fixed = Outcomes::default();
    let steps = file_steps(file, cfg.field).unwrap_or_else(|why| {
        fixed.warnings.push(format!("input file skipped: {why}"));
        Vec::new()
    });
    let (field, window, max_dim) = (cfg.field, cfg.window, cfg.max_dim);
    run(Suite::Functor, cfg, &FUNCTOR_PROPERTIES, fixed, |trial| {
        let mut rng = random::trial_rng(cfg.master_seed, trial);
        let inst = instance(&mut rng, trial, field, &steps);
        let t = &inst.trace;
        let m = if inst.kxy && rng.gen_bool(0.5) {
            random::commuting_kxy(&mut rng, &t.before, field, window, max_dim)
        } else {
            random::representation(&mut rng, &t.before, field, window, max_dim)
        };
        let n = random::representation(&mut rng, &t.after, field, window, max_dim);
        let phi = random::morphism(&mut rng, &t.before, field, window, max_dim).expect("random morphism");
        let psi = random::morphism(&mut rng, &t.after, field, window, max_dim).expect("random morphism");

        let split = describe_split(t, &inst.ideal);
        let with_rep = |m: &GradedRep| format!("{split}{}", serialize_representation(m));
        let with_morphism = |phi: &GradedMorphism| format!("{split}{}", serialize_morphism(phi));
        let attach = |check: Check, input: String| {
            check.map_err(|f| Failure {
                input: if f.input.is_empty() { input } else { f.input },
                ..f
            })
        };

        let mut out = Outcomes::default();
        out.push("gf_identity", attach(gf_identity(t, &m), with_rep(&m)));
        if !inst.ideal.is_empty() {
            out.push("relation_transport", attach(relation_transport(t, &inst.ideal, &m), with_rep(&m)));
        }
        out.push("shift_compatibility", attach(shift_compatibility(t, &m), with_rep(&m)));
        out.push("exactness", attach(exactness(t, &phi), with_morphism(&phi)));
        out.push("counit_support", attach(counit_support(t, &n), with_rep(&n)));
        out.push("counit_on_image", attach(counit_on_image(t, &m), with_rep(&m)));
        out.push("naturality", attach(naturality(t, &psi), with_morphism(&psi)));
        out
    })
}

fn gf_identity(t: &SplitTrace, m: &GradedRep) -> Check {
    let fm = functor_f(t, m).map_err(|e| rep_error("F(M)", e))?;
    let gfm = functor_g(t, &fm).map_err(|e| rep_error("G(F(M))", e))?;
    if gfm == *m {
        Ok(())
    } else {
        fail(format!("G(F(M)) differs from M at {}", first_difference(&gfm, m)), "")
    }
}

fn relation_transport(t: &SplitTrace, ideal: &IdealPresentation, m: &GradedRep) -> Check {
    let fm = functor_f(t, m).map_err(|e| rep_error("F(M)", e))?;
    for rho in ideal.generators() {
        let image = t.rewrite_sum(rho);
        for d in m.interior_degrees(rho) {
            let lhs = fm.evaluate_relation(&image, d).map_err(|e| rep_error("F(M) on f(ρ)", e))?;
            let rhs = m.evaluate_relation(rho, d).map_err(|e| rep_error("M on ρ", e))?;
            if lhs != rhs {
                return fail(format!("F(M) on `{image}` differs from M on `{rho}` at degree {d}"), "");
            }
        }
    }
    if m.satisfies(ideal) && !fm.satisfies(&t.rewrite_ideal(ideal)) {
        return fail("M satisfies the relations but F(M) violates the rewritten ones", "");
    }
    Ok(())
}

fn shift_compatibility(t: &SplitTrace, m: &GradedRep) -> Check {
    let lhs = functor_f(t, &m.shift(1)).map_err(|e| rep_error("F(M(1))", e))?;
    let rhs = functor_f(t, m).map_err(|e| rep_error("F(M)", e))?.shift(1);
    if lhs == rhs {
        Ok(())
    } else {
        fail(format!("F(M(1)) and F(M)(1) differ at {}", first_difference(&lhs, &rhs)), "")
    }
}

/// `0 → K → A → C → 0` from the kernel of a random `φ: A → B`; both it and
/// its image under `F` are checked by ranks at every vertex and degree.
fn exactness(t: &SplitTrace, phi: &GradedMorphism) -> Check {
    let (_, iota) = phi.kernel().map_err(|e| rep_error("kernel", e))?;
    let (_, pi) = iota.cokernel().map_err(|e| rep_error("cokernel", e))?;
    short_exact(&iota, &pi).map_err(|d| Failure {
        detail: format!("constructed sequence is not exact: {d}"),
        input: String::new(),
    })?;
    let f_iota = functor_on_morphism(t, Direction::F, &iota).map_err(|e| rep_error("F(ι)", e))?;
    let f_pi = functor_on_morphism(t, Direction::F, &pi).map_err(|e| rep_error("F(π)", e))?;
    short_exact(&f_iota, &f_pi).or_else(|d| fail(format!("F breaks exactness: {d}"), ""))
}

fn short_exact(i: &GradedMorphism, p: &GradedMorphism) -> Result<(), String> {
    let middle = i.target();
    for v in middle.quiver().vertices() {
        for d in middle.spaces(v).degrees() {
            let (Some(a), Some(b)) = (i.block(v, d), p.block(v, d)) else {
                return Err(format!("a map is unknown at ({v}, {d})"));
            };
            let n = middle.dim(v, d).expect("known degree");
            let (ra, rb) = (a.rank(), b.rank());
            if ra != a.cols() {
                return Err(format!("not injective at ({v}, {d})"));
            }
            if rb != b.rows() {
                return Err(format!("not surjective at ({v}, {d})"));
            }
            if !b.compose(a).is_zero() || ra + rb != n {
                return Err(format!("image and kernel differ at ({v}, {d})"));
            }
        }
    }
    Ok(())
}

fn counit_support(t: &SplitTrace, n: &GradedRep) -> Check {
    let eps = counit_epsilon(t, n).map_err(|e| rep_error("ε_N", e))?;
    let (ker, _) = eps.kernel().map_err(|e| rep_error("Ker ε_N", e))?;
    let (cok, _) = eps.cokernel().map_err(|e| rep_error("Coker ε_N", e))?;
    for (name, r) in [("Ker", &ker), ("Coker", &cok)] {
        for v in r.quiver().vertices() {
            if *v == t.new_vertex {
                continue;
            }
            if let Some(d) = r.spaces(v).degrees().find(|&d| r.dim(v, d) != Some(0)) {
                return fail(format!("{name} ε_N is nonzero at ({v}, {d})"), "");
            }
        }
        if let Some(((a, d), _)) = r.maps().find(|(_, m)| !m.is_zero()) {
            return fail(format!("arrow `{a}` acts nontrivially on {name} ε_N at degree {d}"), "");
        }
    }
    Ok(())
}

fn counit_on_image(t: &SplitTrace, m: &GradedRep) -> Check {
    let fm = functor_f(t, m).map_err(|e| rep_error("F(M)", e))?;
    let eps = counit_epsilon(t, &fm).map_err(|e| rep_error("ε_F(M)", e))?;
    if eps.is_isomorphism() {
        Ok(())
    } else {
        fail("ε_F(M) is not an isomorphism", "")
    }
}

fn naturality(t: &SplitTrace, psi: &GradedMorphism) -> Check {
    let g = functor_on_morphism(t, Direction::G, psi).map_err(|e| rep_error("G(ψ)", e))?;
    let fg = functor_on_morphism(t, Direction::F, &g).map_err(|e| rep_error("FG(ψ)", e))?;
    let eps_source = counit_epsilon(t, psi.source()).map_err(|e| rep_error("ε_N", e))?;
    let eps_target = counit_epsilon(t, psi.target()).map_err(|e| rep_error("ε_N'", e))?;
    let lhs = eps_target.compose(&fg).map_err(|e| rep_error("ε_N' ∘ FG(ψ)", e))?;
    let rhs = psi.compose(&eps_source).map_err(|e| rep_error("ψ ∘ ε_N", e))?;
    if lhs.support() != rhs.support() {
        return fail("the two composites are known on different degrees", "");
    }
    let differs = lhs.blocks().zip(rhs.blocks()).find(|(x, y)| x != y).map(|((k, _), _)| k.clone());
    match differs {
        None => Ok(()),
        Some((v, d)) => fail(format!("ε_N' ∘ FG(ψ) and ψ ∘ ε_N differ at ({v}, {d})"), ""),
    }
}

// ---------------------------------------------------------------------------
// Hilbert suite

const HILBERT_PROPERTIES: [&str; 5] = [
    "kxy_golden",
    "naive_crosscheck",
    "field_agreement",
    "definitional_dims",
    "free_algebra",
];

/// Graded-piece dimensions of named presentations and of `F(M)`.
pub fn run_hilbert_suite(cfg: &SuiteConfig, file: &Presentation) -> SuiteReport {
    let mut fixed = Outcomes::default();
    let (kq, kideal) = fixtures::kxy();
    for d in 0..=cfg.max_degree {
        let dim = graded_piece_dim(&kq, &kideal, d, None, Field::Rational);
        let want = d as usize / 2 + 1;
        fixed.push(
            "kxy_golden",
            if dim == want {
                Ok(())
            } else {
                fail(format!("dim (k[x,y])_{d} = {dim}, expected {want}"), fixtures::KXY_FILE)
            },
        );
    }

    let kxy_regraded = regrade(&kq, &kideal);
    let file_regraded = regrade(&file.quiver, &file.ideal);
    let mut goldens = vec![
        ("k[x,y]".to_string(), kq.clone(), kideal.clone()),
        ("regraded k[x,y]".to_string(), kxy_regraded.final_quiver.clone(), kxy_regraded.final_ideal.clone()),
    ];
    for deg in [2, 3] {
        let q = fixtures::two_vertex_quiver(deg);
        let split = split_arrow(&q, &ArrowId::new("b")).expect("b splits");
        goldens.push((format!("two-vertex example, deg b = {deg}"), q, IdealPresentation::empty()));
        goldens.push((format!("two-vertex example split, deg b = {deg}"), split.after, IdealPresentation::empty()));
    }
    goldens.push(("input file".to_string(), file.quiver.clone(), file.ideal.clone()));
    goldens.push(("regraded input file".to_string(), file_regraded.final_quiver, file_regraded.final_ideal));

    for (name, q, ideal) in &goldens[1..2].iter().chain(&goldens[goldens.len() - 1..]).collect::<Vec<_>>() {
        naive_crosscheck(name, q, ideal, cfg.max_degree, &mut fixed);
    }
    let prime = match cfg.field {
        Field::Prime(p) => Field::Prime(p),
        Field::Rational => Field::Prime(DEFAULT_PRIME),
    };
    for (name, q, ideal) in &goldens {
        field_agreement(name, q, ideal, cfg.max_degree, prime, &mut fixed);
    }

    let (field, window, max_dim) = (cfg.field, cfg.window, cfg.max_dim);
    let steps = file_steps(file, field).unwrap_or_default();
    run(Suite::Hilbert, cfg, &HILBERT_PROPERTIES, fixed, |trial| {
        let mut rng = random::trial_rng(cfg.master_seed, trial);
        let inst = instance(&mut rng, trial, field, &steps);
        let m = random::representation(&mut rng, &inst.trace.before, field, window, max_dim);
        let q = random::quiver(&mut rng, false);
        let mut out = Outcomes::default();
        out.push(
            "definitional_dims",
            definitional_dims(&inst.trace, &m).or_else(|d| {
                fail(d, format!("{}{}", describe_split(&inst.trace, &inst.ideal), serialize_representation(&m)))
            }),
        );
        out.push(
            "free_algebra",
            free_algebra(&q, cfg.max_degree.min(4), field)
                .or_else(|d| fail(d, serialize_presentation(&q, &IdealPresentation::empty()))),
        );
        out
    })
}

fn naive_crosscheck(name: &str, q: &WeightedQuiver, ideal: &IdealPresentation, max_degree: u32, out: &mut Outcomes) {
    let Ok(ideal) = reduce(ideal, Field::Rational) else {
        out.warnings.push(format!("{name}: naive cross-check needs rational coefficients"));
        return;
    };
    for v in q.vertices() {
        for d in 0..=max_degree {
            if count_paths(q, d, Some(v)) > PATH_LIMIT {
                out.warnings
                    .push(format!("{name}: naive cross-check stops at degree {d} at `{v}`; too many paths"));
                break;
            }
            let primary = graded_piece_dim(q, &ideal, d, Some(v), Field::Rational);
            let other = naive::piece_dim(q, &ideal, d, v.name());
            out.push(
                "naive_crosscheck",
                if primary == other {
                    Ok(())
                } else {
                    fail(
                        format!("{name}: dim e_{v} A_{d} is {primary} by elimination, {other} by closure"),
                        serialize_presentation(q, &ideal),
                    )
                },
            );
        }
    }
}

/// Disagreement between ℚ and F_p is reported as a warning: a prime can
/// only lower a rank, and an unlucky one does so legitimately.
fn field_agreement(
    name: &str,
    q: &WeightedQuiver,
    ideal: &IdealPresentation,
    max_degree: u32,
    prime: Field,
    out: &mut Outcomes,
) {
    let reduced = match reduce(ideal, prime) {
        Ok(r) => r,
        Err(why) => {
            out.warnings.push(format!("{name}: ℚ and {prime} not compared: {why}"));
            return;
        }
    };
    for d in 0..=max_degree {
        if count_paths(q, d, None) > PATH_LIMIT {
            out.warnings.push(format!("{name}: field comparison stops at degree {d}; too many paths"));
            break;
        }
        let over_q = graded_piece_dim(q, ideal, d, None, Field::Rational);
        let over_p = graded_piece_dim(q, &reduced, d, None, prime);
        if over_q != over_p {
            out.warnings.push(format!(
                "{name}: degree {d} has dimension {over_q} over q but {over_p} over {prime}; try another prime"
            ));
        }
        out.push("field_agreement", Ok(()));
    }
}

fn definitional_dims(t: &SplitTrace, m: &GradedRep) -> Result<(), String> {
    let fm = functor_f(t, m).map_err(|e| format!("F(M): {e}"))?;
    let s = &t.split_data().source;
    let lo = m.window().lo();
    for d in m.window().degrees() {
        for v in m.quiver().vertices() {
            if fm.dim(v, d) != m.dim(v, d) {
                return Err(format!("dim F(M) at ({v}, {d}) is {:?}, expected {:?}", fm.dim(v, d), m.dim(v, d)));
            }
        }
        let want = if d > lo { m.dim(s, d - 1) } else { None };
        if fm.dim(&t.new_vertex, d) != want {
            return Err(format!(
                "dim F(M) at ({}, {d}) is {:?}, expected {want:?}",
                t.new_vertex,
                fm.dim(&t.new_vertex, d)
            ));
        }
    }
    Ok(())
}

fn free_algebra(q: &WeightedQuiver, max_degree: u32, field: Field) -> Result<(), String> {
    let empty = IdealPresentation::empty();
    for d in 0..=max_degree {
        let total = graded_piece_dim(q, &empty, d, None, field);
        let count = count_paths(q, d, None);
        let by_vertex: usize = q.vertices().map(|v| graded_piece_dim(q, &empty, d, Some(v), field)).sum();
        if total as u128 != count || by_vertex != total {
            return Err(format!("free algebra in degree {d}: {total} (by vertex {by_vertex}), {count} paths"));
        }
    }
    Ok(())
}

/// A second, deliberately plain computation of `dim e_v (kQ/I)_d` over ℚ:
/// close the generators under multiplication by single arrows on either
/// side, then eliminate over dense rational rows.
mod naive {
    use std::collections::{BTreeMap, BTreeSet, HashMap};

    use num_rational::BigRational;
    use num_traits::{One, Zero};

    use crate::path::IdealPresentation;
    use crate::quiver::WeightedQuiver;
    use crate::scalar::Scalar;

    /// `(source, arrow names)`; trivial words have no arrows.
    type Word = (String, Vec<String>);

    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
    struct Element {
        degree: u32,
        source: String,
        target: String,
        terms: BTreeMap<Word, BigRational>,
    }

    struct Arrows {
        list: Vec<(String, String, String, u32)>,
    }

    impl Arrows {
        fn new(q: &WeightedQuiver) -> Self {
            Arrows {
                list: q
                    .arrows()
                    .map(|(id, a)| (id.to_string(), a.source.to_string(), a.target.to_string(), a.degree))
                    .collect(),
            }
        }

        fn words(&self, from: &str, d: u32) -> Vec<Word> {
            let mut out = Vec::new();
            let mut stack = vec![(from.to_string(), Vec::new(), 0u32)];
            while let Some((at, word, deg)) = stack.pop() {
                if deg == d {
                    out.push((from.to_string(), word));
                    continue;
                }
                for (name, s, t, k) in &self.list {
                    if *s == at && deg + k <= d {
                        let mut next = word.clone();
                        next.push(name.clone());
                        stack.push((t.clone(), next, deg + k));
                    }
                }
            }
            out
        }
    }

    pub fn piece_dim(q: &WeightedQuiver, ideal: &IdealPresentation, d: u32, vertex: &str) -> usize {
        let arrows = Arrows::new(q);
        let basis = arrows.words(vertex, d);
        let index: HashMap<&Word, usize> = basis.iter().enumerate().map(|(i, w)| (w, i)).collect();

        let mut seen: BTreeSet<Element> = BTreeSet::new();
        let mut frontier: Vec<Element> = ideal
            .generators()
            .iter()
            .filter(|g| g.degree() <= d)
            .map(|g| Element {
                degree: g.degree(),
                source: g.source().to_string(),
                target: g.target().to_string(),
                terms: g
                    .sum()
                    .terms()
                    .map(|(p, c)| {
                        let Scalar::Rational(r) = c else { panic!("naive check runs over ℚ") };
                        let word = (p.source().to_string(), p.arrows().iter().map(|a| a.to_string()).collect());
                        (word, r.clone())
                    })
                    .collect(),
            })
            .collect();
        while let Some(x) = frontier.pop() {
            if !seen.insert(x.clone()) || x.degree == d {
                continue;
            }
            for (name, s, t, k) in &arrows.list {
                if x.degree + k > d {
                    continue;
                }
                if *t == x.source {
                    frontier.push(Element {
                        degree: x.degree + k,
                        source: s.clone(),
                        target: x.target.clone(),
                        terms: x
                            .terms
                            .iter()
                            .map(|((_, w), c)| {
                                let mut word = vec![name.clone()];
                                word.extend(w.iter().cloned());
                                ((s.clone(), word), c.clone())
                            })
                            .collect(),
                    });
                }
                if *s == x.target {
                    frontier.push(Element {
                        degree: x.degree + k,
                        source: x.source.clone(),
                        target: t.clone(),
                        terms: x
                            .terms
                            .iter()
                            .map(|((src, w), c)| {
                                let mut word = w.clone();
                                word.push(name.clone());
                                ((src.clone(), word), c.clone())
                            })
                            .collect(),
                    });
                }
            }
        }

        let mut rows: Vec<Vec<BigRational>> = seen
            .iter()
            .filter(|x| x.degree == d && x.source == vertex)
            .map(|x| {
                let mut row = vec![BigRational::zero(); basis.len()];
                for (w, c) in &x.terms {
                    row[index[w]] = c.clone();
                }
                row
            })
            .collect();
        basis.len() - rank(&mut rows, basis.len())
    }

    fn rank(rows: &mut [Vec<BigRational>], cols: usize) -> usize {
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
            rows.swap(r, p);
            let inv = BigRational::one() / rows[r][c].clone();
            for x in rows[r].iter_mut() {
                *x = &*x * &inv;
            }
            let pivot = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && !row[c].is_zero() {
                    let factor = row[c].clone();
                    for (x, p) in row.iter_mut().zip(&pivot) {
                        *x = &*x - &(&factor * p);
                    }
                }
            }
            r += 1;
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kxy_file() -> Presentation {
        parse_presentation(fixtures::KXY_FILE, Field::Rational).unwrap()
    }

    fn small(trials: u64) -> SuiteConfig {
        SuiteConfig {
            master_seed: 3,
            trials,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn naive_dims_match_the_monomial_count() {
        let (q, ideal) = fixtures::kxy();
        for d in 0..=8 {
            assert_eq!(naive::piece_dim(&q, &ideal, d, "v"), d as usize / 2 + 1);
        }
    }

    #[test]
    fn suites_pass_on_kxy() {
        let file = kxy_file();
        for suite in Suite::ALL {
            let report = run_suite(suite, &small(12), &file);
            assert!(report.passed(), "{}", report.render_text());
            assert!(report.warnings.is_empty(), "{:?}", report.warnings);
        }
    }

    #[test]
    fn reports_are_reproducible() {
        let file = kxy_file();
        let a = run_functor_suite(&small(8), &file);
        let b = run_functor_suite(&small(8), &file);
        assert_eq!(a.render_text(), b.render_text());
        assert_eq!(render_json(&[a]), render_json(&[b]));
    }

    #[test]
    fn failures_carry_a_counterexample() {
        let mut agg = Aggregator::new(5, &["p"]);
        let mut out = Outcomes::default();
        out.push("p", Ok(()));
        out.push("p", fail("broken", "[quiver]\nvertex v\n"));
        agg.absorb(Some(4), out);
        let report = agg.finish(Suite::Split, &SuiteConfig::default(), Instant::now());
        assert!(!report.passed());
        let c = report.properties[0].first_counterexample.as_ref().unwrap();
        assert_eq!((c.seed, c.trial), (5, Some(4)));
        let text = report.render_text();
        assert!(text.contains("FAIL  p"), "{text}");
        assert!(text.contains("| vertex v"), "{text}");
        let json = render_json(&[report]);
        for key in ["\"property\"", "\"trials\"", "\"failures\"", "\"first_counterexample\"", "\"seed\""] {
            assert!(json.contains(key), "{json}");
        }
    }
}
