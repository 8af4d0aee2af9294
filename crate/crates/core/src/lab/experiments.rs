use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::config::{LabConfig, VERSION};
use super::group_file::load_group;
use crate::boundary::{covering_degree, default_threshold};
use crate::cayley::{CayleyBall, Dist, GeneratorSet};
use crate::circle::{koebe_check, schwarzian, schwarzian_sample_points, chart_radius, ChartWord, Element, LiftedMap};
use crate::discreteness::{discreteness_profile, Interval, Verdict};
use crate::error::{Error, Result};
use crate::expansion::{
    build_expansion_graph, build_expansion_line, convergence_experiment, expanding_radius, line_quasi_geodesic_audit,
    quasi_isometry_audit, uniform_constants, verify_line, ExpansionConstants, Gammas, MAX_ENRICH,
};
use crate::zoo::GroupSpec;

/// Experiment names, one-line descriptions and CSV columns (after the
/// leading `config_hash,version`).
pub const EXPERIMENTS: &[(&str, &str, &[&str])] = &[
    (
        "constants",
        "uniform expansion constants on a grid",
        &["x", "best_generator", "log_derivative"],
    ),
    (
        "line",
        "greedy lines of expansion and their quasi-geodesic audit",
        &["x", "m", "generator", "point", "partial", "error"],
    ),
    (
        "converge",
        "distance between two lines at the first small cocycle gap",
        &[
            "trial", "x", "f_start", "start_distance", "threshold", "m", "n", "cocycle_gap", "distance", "error",
        ],
    ),
    (
        "gamma-graph",
        "quasi-isometry between the word metric and the expansion graph",
        &["x", "vertices", "edges", "pairs", "max_d_over_dgamma", "max_dgamma_over_d", "passes", "error"],
    ),
    (
        "hyperbolicity",
        "vertex-sampled thin-triangle constant of a ball",
        &["radius", "ball_size", "delta", "triangles", "skipped", "exhaustive"],
    ),
    (
        "boundary-degree",
        "fiber cardinalities of the boundary map",
        &["direction", "x", "cardinality", "intervals"],
    ),
    (
        "discreteness",
        "closest nontrivial ball element to the identity, by radius",
        &["radius", "best_word", "c0_distance", "candidates", "verdict"],
    ),
    (
        "schwarzian",
        "Schwarzian derivative of each generator in the affine chart",
        &["generator", "t", "value"],
    ),
    (
        "koebe",
        "distortion and image containment on half-radius balls",
        &["word", "x", "r", "kappa_measured", "image_contains_ball", "pass", "error"],
    ),
];

pub fn columns(name: &str) -> Option<&'static [&'static str]> {
    EXPERIMENTS.iter().find(|e| e.0 == name).map(|e| e.2)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub group: String,
    pub config_hash: String,
    pub version: String,
    pub summary: Value,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub csv: String,
}

impl ExperimentReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Writes `<experiment>.csv` and `<experiment>.json` into `dir`.
    pub fn write(&self, dir: &std::path::Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(format!("{}.csv", self.experiment)), &self.csv)?;
        let json = serde_json::to_string_pretty(self).expect("reports serialize");
        std::fs::write(dir.join(format!("{}.json", self.experiment)), json + "\n")?;
        Ok(())
    }
}

/// Exit status for an error: 2 for usage and configuration problems, 3 for
/// numerical failures.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_)
        | Error::ParseError { .. }
        | Error::UnknownExperiment(_)
        | Error::UnknownGenerator(_)
        | Error::Io(_)
        | Error::InvalidDepth
        | Error::InvalidSampleCount
        | Error::UnsupportedGenus(_)
        | Error::NotHyperbolic(..)
        | Error::CoverMismatch(..) => 2,
        _ => 3,
    }
}

struct Table {
    prefix: [String; 2],
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    fn new(name: &str, hash: &str) -> Self {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["config_hash", "version"];
        header.extend(columns(name).expect("known experiment"));
        writer.write_record(&header).expect("in-memory write");
        Table {
            prefix: [hash.to_string(), VERSION.to_string()],
            writer,
        }
    }

    fn row(&mut self, fields: Vec<String>) {
        let rec = self.prefix.iter().cloned().chain(fields);
        self.writer.write_record(rec).expect("in-memory write");
    }

    fn finish(self) -> String {
        String::from_utf8(self.writer.into_inner().expect("in-memory write")).expect("utf-8 csv")
    }
}

fn fmt_dist(d: Dist) -> String {
    match d {
        Dist::Exact(d) => d.to_string(),
        Dist::Greater(r) => format!(">{r}"),
    }
}

fn check(name: &str, expected: impl ToString, observed: impl ToString, pass: bool) -> Check {
    Check {
        name: name.to_string(),
        expected: expected.to_string(),
        observed: observed.to_string(),
        pass,
    }
}

struct Ctx<'a> {
    config: &'a LabConfig,
    spec: GroupSpec,
    gens: GeneratorSet,
    rng: ChaCha8Rng,
    table: Table,
}

impl Ctx<'_> {
    fn constants(&self) -> Result<ExpansionConstants> {
        uniform_constants(&self.gens, self.config.params.grid.unwrap_or(4096))
    }

    fn rate(&self, k: &ExpansionConstants) -> Result<f64> {
        match self.config.params.c {
            Some(c) => Ok(c),
            None if k.expanding() => Ok(k.default_c()),
            None => Err(Error::InvalidArgument(format!(
                "{} is not expanding (c_lower = {}); pass an explicit rate",
                self.spec.name, k.c_lower
            ))),
        }
    }

    fn random_points(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.rng.gen_range(0.0..1.0)).collect()
    }
}

pub fn run_experiment(config: &LabConfig, name: &str) -> Result<ExperimentReport> {
    if columns(name).is_none() {
        return Err(Error::UnknownExperiment(name.to_string()));
    }
    config.validate()?;
    let spec = load_group(&config.group)?;
    let needs_expansion = matches!(name, "line" | "converge" | "gamma-graph" | "boundary-degree");
    let radius = match config.params.enrich {
        Some(r) => r.max(1),
        None if needs_expansion => expanding_radius(spec.generators(), MAX_ENRICH, 4096)?.map_or(1, |(r, _)| r),
        None => 1,
    };
    let gens = if radius > 1 {
        spec.generators().enriched(radius)?
    } else {
        spec.generators().clone()
    };
    let hash = config.hash();
    let mut ctx = Ctx {
        config,
        gens,
        rng: ChaCha8Rng::seed_from_u64(config.seed),
        table: Table::new(name, &hash),
        spec,
    };
    let (mut summary, checks) = match name {
        "constants" => constants(&mut ctx)?,
        "line" => line(&mut ctx)?,
        "converge" => converge(&mut ctx)?,
        "gamma-graph" => gamma_graph(&mut ctx)?,
        "hyperbolicity" => hyperbolicity(&mut ctx)?,
        "boundary-degree" => boundary_degree(&mut ctx)?,
        "discreteness" => discreteness(&mut ctx)?,
        "schwarzian" => schwarzian_check(&mut ctx)?,
        "koebe" => koebe(&mut ctx)?,
        _ => unreachable!(),
    };
    if let Value::Object(m) = &mut summary {
        m.insert("generating_radius".into(), json!(radius));
        m.insert("generators".into(), json!(ctx.gens.len()));
    }
    Ok(ExperimentReport {
        experiment: name.to_string(),
        group: ctx.spec.name.clone(),
        config_hash: hash,
        version: VERSION.to_string(),
        summary,
        checks,
        csv: ctx.table.finish(),
    })
}

type Outcome = Result<(Value, Vec<Check>)>;

fn constants(ctx: &mut Ctx) -> Outcome {
    let k = ctx.constants()?;
    for (i, &s) in k.witness.iter().enumerate() {
        let x = i as f64 / k.grid_size as f64;
        ctx.table.row(vec![
            x.to_string(),
            ctx.gens.name(s).to_string(),
            ctx.gens.element(s).log_derivative(x).to_string(),
        ]);
    }
    let group_radius = expanding_radius(ctx.spec.generators(), MAX_ENRICH, k.grid_size)?.map(|(r, _)| r);
    let mut checks = Vec::new();
    if let Some(e) = ctx.spec.expected.expanding {
        let observed = group_radius.is_some();
        checks.push(check("expanding", e, observed, e == observed));
    }
    let summary = json!({
        "c_lower": k.c_lower,
        "c_upper": k.c_upper,
        "margin": k.margin,
        "lipschitz": k.lipschitz,
        "worst_point": k.worst_point,
        "grid": k.grid_size,
        "expanding": k.expanding(),
        "expanding_radius": group_radius,
    });
    Ok((summary, checks))
}

fn line(ctx: &mut Ctx) -> Outcome {
    let p = &ctx.config.params;
    let (n_points, length, radius) = (p.points.unwrap_or(20), p.length.unwrap_or(30), p.radius.unwrap_or(8));
    let k = ctx.constants()?;
    let c = ctx.rate(&k)?;
    let ball = CayleyBall::build(&ctx.gens, radius)?;
    let xs = ctx.random_points(n_points);
    let (mut verified, mut audited, mut failures) = (0usize, 0usize, 0usize);
    let mut alpha_measured = 1.0f64;
    for &x in &xs {
        match build_expansion_line(&ctx.gens, x, c, length, LiftedMap::identity(ctx.gens.k())) {
            Ok(l) => {
                for m in 0..=l.len() {
                    let g = if m == 0 { String::new() } else { ctx.gens.name(l.steps[m - 1]).to_string() };
                    ctx.table.row(vec![
                        x.to_string(),
                        m.to_string(),
                        g,
                        l.points[m].to_string(),
                        l.partial[m].to_string(),
                        String::new(),
                    ]);
                }
                verified += usize::from(verify_line(&l, c));
                let audit = line_quasi_geodesic_audit(&ball, &l, c, k.c_upper)?;
                audited += usize::from(audit.passes);
                alpha_measured = alpha_measured.max(audit.alpha_measured);
            }
            Err(e) => {
                failures += 1;
                let row = vec![x.to_string(), String::new(), String::new(), String::new(), String::new(), e.to_string()];
                ctx.table.row(row);
            }
        }
    }
    let checks = vec![
        check("lines built", n_points, n_points - failures, failures == 0),
        check("verify_line", n_points, verified, verified == n_points),
        check("quasi-geodesic", n_points, audited, audited == n_points),
    ];
    let summary = json!({
        "c": c,
        "c_lower": k.c_lower,
        "c_upper": k.c_upper,
        "alpha": (k.c_upper / c).max(1.0),
        "alpha_measured": alpha_measured,
        "alpha_rule": "c_upper / c (a ratio c / c_upper would be below 1)",
        "radius": radius,
        "length": length,
    });
    Ok((summary, checks))
}

fn converge(ctx: &mut Ctx) -> Outcome {
    let p = ctx.config.params.clone();
    let trials = p.trials.unwrap_or(50);
    let radius = p.radius.unwrap_or(12);
    let start_radius = p.depth.unwrap_or(3) as u32;
    let k = ctx.constants()?;
    let c = ctx.rate(&k)?;
    let gammas = Gammas::new(c, k.c_upper);
    let max_depth = p
        .max_depth
        // starts of norm ≤ r are at most 2r apart
        .unwrap_or_else(|| gammas.threshold(2 * start_radius).ceil() as usize + 200);
    let ball = CayleyBall::build(&ctx.gens, radius.max(start_radius))?;
    let starts: Vec<usize> = (0..ball.len()).filter(|&i| ball.norm(i) <= start_radius).collect();
    let mut worst: Option<Dist> = None;
    let mut resolved = 0usize;
    let mut failures = 0usize;
    for t in 0..trials {
        let x: f64 = ctx.rng.gen_range(0.0..1.0);
        let f = *starts.choose(&mut ctx.rng).expect("identity is in the ball");
        let f_start: Element = *ball.element(f);
        let e_start = LiftedMap::identity(ctx.gens.k());
        let mut row = vec![t.to_string(), x.to_string(), ball.word_string(f)];
        match convergence_experiment(&ctx.gens, x, c, k.c_upper, e_start, f_start, max_depth, &ball) {
            Ok(r) => {
                resolved += usize::from(r.distance.exact().is_some());
                worst = Some(match worst {
                    None => r.distance,
                    Some(w) => max_dist(w, r.distance),
                });
                row.extend([
                    r.start_distance.to_string(),
                    r.threshold.to_string(),
                    r.m.to_string(),
                    r.n.to_string(),
                    r.cocycle_gap.to_string(),
                    fmt_dist(r.distance),
                    String::new(),
                ]);
            }
            Err(e) => {
                failures += 1;
                row.extend(std::iter::repeat(String::new()).take(6));
                row.push(e.to_string());
            }
        }
        ctx.table.row(row);
    }
    let summary = json!({
        "c": c,
        "gamma1": gammas.gamma1,
        "gamma2": gammas.gamma2,
        "max_depth": max_depth,
        "radius": ball.radius(),
        "max_distance": worst.map(fmt_dist),
        "resolved": resolved,
        "trials": trials,
    });
    let checks = vec![check("trials matched", trials, trials - failures, failures == 0)];
    Ok((summary, checks))
}

/// Larger of two distance bounds; `>r` counts as `r + 1`.
pub fn max_dist(a: Dist, b: Dist) -> Dist {
    if b.lower() > a.lower() || (b.lower() == a.lower() && b.exact().is_none()) {
        b
    } else {
        a
    }
}

fn gamma_graph(ctx: &mut Ctx) -> Outcome {
    let p = &ctx.config.params;
    let (n_points, radius) = (p.points.unwrap_or(3), p.radius.unwrap_or(5));
    let k = ctx.constants()?;
    if !k.expanding() {
        return Err(Error::InvalidArgument(format!("{} is not expanding", ctx.spec.name)));
    }
    let ball = CayleyBall::build(&ctx.gens, radius)?;
    let mut passes = 0usize;
    for x in ctx.random_points(n_points) {
        let g = build_expansion_graph(&ball, x, k.c_lower);
        let mut row = vec![x.to_string(), ball.len().to_string(), g.edge_count().to_string()];
        match quasi_isometry_audit(&g, &ball) {
            Ok(a) => {
                passes += usize::from(a.passes);
                row.extend([
                    a.pairs.to_string(),
                    a.max_ratio_d_over_dgamma.to_string(),
                    a.max_ratio_dgamma_over_d.to_string(),
                    a.passes.to_string(),
                    String::new(),
                ]);
            }
            Err(e) => row.extend([String::new(), String::new(), String::new(), "false".into(), e.to_string()]),
        }
        ctx.table.row(row);
    }
    let summary = json!({"c_lower": k.c_lower, "radius": radius, "ball_size": ball.len()});
    Ok((summary, vec![check("quasi-isometry", n_points, passes, passes == n_points)]))
}

fn hyperbolicity(ctx: &mut Ctx) -> Outcome {
    let radius = ctx.config.params.radius.unwrap_or(4);
    let ball = CayleyBall::build(&ctx.gens, radius)?;
    let est = ball.delta_estimate_with(crate::cayley::TRIPLE_CAP, crate::cayley::GEODESIC_CAP, ctx.config.seed);
    ctx.table.row(vec![
        radius.to_string(),
        ball.len().to_string(),
        est.delta.to_string(),
        est.triangles.to_string(),
        est.skipped.to_string(),
        est.exhaustive.to_string(),
    ]);
    let summary = serde_json::to_value(&est).expect("serializable");
    Ok((summary, vec![check("delta finite", "finite", est.delta, est.delta.is_finite())]))
}

fn boundary_degree(ctx: &mut Ctx) -> Outcome {
    let p = &ctx.config.params;
    let radius = p.radius.unwrap_or(6);
    let grid = p.grid.unwrap_or(512);
    let n = p.directions.unwrap_or(20);
    let threshold = p.threshold.unwrap_or_else(|| default_threshold(radius as usize));
    let k = uniform_constants(&ctx.gens, 4096)?;
    let c = match p.c {
        Some(c) => c,
        None if k.expanding() => k.c_lower,
        None => return Err(Error::InvalidArgument(format!("{} is not expanding", ctx.spec.name))),
    };
    let ball = CayleyBall::build(&ctx.gens, radius)?;
    let report = covering_degree(&ctx.gens, &ball, n, grid, threshold, c)?;
    for (j, f) in report.fibers.iter().enumerate() {
        let intervals: Vec<String> = f.preimages.iter().map(|(a, b)| format!("{a}-{b}")).collect();
        ctx.table.row(vec![
            j.to_string(),
            f.direction.x.to_string(),
            f.cardinality.to_string(),
            intervals.join(";"),
        ]);
    }
    let mut checks = Vec::new();
    if let Some(d) = ctx.spec.expected.degree {
        checks.push(check("degree", d, report.k_estimate, d as usize == report.k_estimate));
    }
    let summary = json!({
        "k_estimate": report.k_estimate,
        "n_directions": report.n_directions,
        "grid": report.grid,
        "depth": report.depth,
        "threshold": report.threshold,
        "histogram": report.histogram,
    });
    Ok((summary, checks))
}

fn discreteness(ctx: &mut Ctx) -> Outcome {
    let p = &ctx.config.params;
    // steps of two: conjugation words such as f⁻ⁿ g fⁿ only exist at odd
    // norms, so consecutive radii would fake a plateau
    let radii = p.radii.clone().unwrap_or_else(|| {
        let top = p.radius.unwrap_or(8);
        let mut r: Vec<u32> = (1..=top).rev().step_by(2).take(3).collect();
        r.reverse();
        r
    });
    let (lo, hi) = p.interval.unwrap_or((0.2, 0.45));
    let band = p.band.unwrap_or((-10.0, 10.0));
    let profile = discreteness_profile(&ctx.gens, &radii, Interval::new(lo, hi)?, band)?;
    for r in &profile.records {
        ctx.table.row(vec![
            r.radius.to_string(),
            r.best_word.clone(),
            r.c0_distance.to_string(),
            r.candidates.to_string(),
            profile.verdict.label().to_string(),
        ]);
    }
    let mut checks = Vec::new();
    if let Some(d) = ctx.spec.expected.discrete {
        let want = if d { Verdict::LocallyDiscrete } else { Verdict::NonLocallyDiscrete };
        checks.push(check("discrete", want, profile.verdict, want == profile.verdict));
    }
    let summary = json!({
        "verdict": profile.verdict.label(),
        "ratios": profile.ratios,
        "floor": profile.floor,
        "decay_ratio": profile.decay_ratio,
        "interval": [lo, hi],
        "band": [band.0, band.1],
    });
    Ok((summary, checks))
}

/// Tolerance of the Schwarzian check.
pub const SCHWARZIAN_TOL: f64 = 1e-6;

fn schwarzian_check(ctx: &mut Ctx) -> Outcome {
    let n = ctx.config.params.points.unwrap_or(100);
    let mut worst = 0.0f64;
    for i in ctx.spec.primary_indices() {
        let g = ctx.spec.generators().element(i).base();
        for t in schwarzian_sample_points(&g, n) {
            let v = schwarzian(&g, t)?;
            worst = worst.max(v.abs());
            ctx.table
                .row(vec![ctx.spec.generators().name(i).to_string(), t.to_string(), v.to_string()]);
        }
    }
    let summary = json!({"max_abs": worst, "tolerance": SCHWARZIAN_TOL});
    Ok((summary, vec![check("vanishes", format!("<= {SCHWARZIAN_TOL}"), worst, worst <= SCHWARZIAN_TOL)]))
}

/// Halvings of the radius tried before a word is reported as failing.
const KOEBE_HALVINGS: usize = 30;

fn koebe(ctx: &mut Ctx) -> Outcome {
    let p = &ctx.config.params;
    let (n_words, len) = (p.words.unwrap_or(50), p.word_length.unwrap_or(6));
    let mut samples = Vec::with_capacity(n_words);
    for _ in 0..n_words {
        let word: Vec<usize> = (0..len).map(|_| ctx.rng.gen_range(0..ctx.gens.len())).collect();
        let x: f64 = ctx.rng.gen_range(0.0..1.0);
        samples.push((word, x));
    }
    let mut passes = 0usize;
    let mut worst = 0.0f64;
    for (word, x) in samples {
        let letters: Vec<Element> = word.iter().map(|&i| *ctx.gens.element(i)).collect();
        let g = ChartWord::new(&letters);
        let center = Complex64::new(x, 0.0);
        let mut r = chart_radius(ctx.gens.k());
        let mut outcome = Err(Error::NoPositiveRadius);
        for _ in 0..KOEBE_HALVINGS {
            outcome = koebe_check(&g, center, r, r / 2.0);
            if outcome.is_ok() {
                break;
            }
            r /= 2.0;
        }
        let name = ctx.gens.word_string(&word);
        let row = match outcome {
            Ok(rec) => {
                let ok = rec.kappa_measured <= crate::circle::KOEBE_KAPPA && rec.image_contains_ball;
                passes += usize::from(ok);
                worst = worst.max(rec.kappa_measured);
                vec![
                    name,
                    x.to_string(),
                    r.to_string(),
                    rec.kappa_measured.to_string(),
                    rec.image_contains_ball.to_string(),
                    ok.to_string(),
                    String::new(),
                ]
            }
            Err(e) => vec![name, x.to_string(), String::new(), String::new(), String::new(), "false".into(), e.to_string()],
        };
        ctx.table.row(row);
    }
    let summary = json!({"words": n_words, "word_length": len, "max_kappa": worst, "kappa0": crate::circle::KOEBE_KAPPA});
    Ok((summary, vec![check("koebe", n_words, passes, passes == n_words)]))
}
