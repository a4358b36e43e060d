//! Executes a parsed experiment and writes its outputs.

use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::adversary::adversary;
use super::build::{self, ScheduleContext};
use super::config::{ConfigError, ExperimentConfig, FuzzSpec, FuzzSuite, Mode, Source};
use super::output::{write_rows, write_summary, write_trace, FuzzRow, RegretRow, Summary};
use crate::bounds::{gd_full_bound, md_bound, og_adversarial_bound, og_game_bound, social_bound};
use crate::bregman::MirrorMap;
use crate::comparators::{check_prox_optimality, key_inequality_gap, Comparator};
use crate::games::{self_play, SmoothConvexGame};
use crate::geometry::{random_unit, ConvexSet};
use crate::learners::{run, Learner, LearnerKind};
use crate::regret::{
    bregman_proximal_regret, external_regret, gradient_equilibrium_norm, proximal_regret,
    RegretReport, Trace,
};
use crate::{Matrix, Vector};

/// Relative tolerance before a realized regret counts as exceeding its bound.
pub const BOUND_TOL: f64 = 1e-9;

/// Slack allowed when true-loss regret is compared with linearized regret.
pub const LOSS_TOL: f64 = 1e-8;

/// A fuzz gap below this counts as a violation.
pub const FUZZ_TOL: f64 = 1e-8;

/// Settings supplied on the command line that override the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub assert_bounds: bool,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub out_dir: PathBuf,
    pub summary: Summary,
    pub assert_bounds: bool,
}

impl RunOutcome {
    /// Process exit code: 1 when asserted bounds failed, 0 otherwise.
    pub fn exit_code(&self) -> u8 {
        let failed = self.summary.bound_violations > 0
            || self.summary.fuzz_min_gap.is_some_and(|g| g < -FUZZ_TOL);
        if self.assert_bounds && failed {
            1
        } else {
            0
        }
    }
}

/// Parses `src`, runs it and writes the outputs into `out_dir`, or into the
/// config's `[output] dir` when `out_dir` is `None`.
pub fn run_source(
    src: &Source,
    out_dir: Option<&Path>,
    overrides: &Overrides,
) -> Result<RunOutcome, ConfigError> {
    let mut cfg = src.parse()?;
    if let Some(seed) = overrides.seed {
        cfg.seed = seed;
    }
    let out_dir = match (out_dir, &cfg.output.dir) {
        (Some(d), _) => d.to_path_buf(),
        (None, Some(d)) => src.base_dir().join(d),
        (None, None) => PathBuf::from("out"),
    };
    let assert_bounds = overrides.assert_bounds || cfg.assert_bounds;
    fs::create_dir_all(&out_dir).map_err(|e| io_error(&out_dir, e))?;
    let summary = match cfg.mode {
        Mode::Adversarial => adversarial(&cfg, src, &out_dir)?,
        Mode::SelfPlay => self_play_run(&cfg, src, &out_dir)?,
        Mode::Fuzz => fuzz(&cfg, src, &out_dir)?,
    };
    let path = out_dir.join("summary.json");
    write_summary(&path, &summary).map_err(|e| io_error(&path, e))?;
    Ok(RunOutcome {
        out_dir,
        summary,
        assert_bounds,
    })
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> ConfigError {
    ConfigError {
        path: path.to_path_buf(),
        line: None,
        column: None,
        message: e.to_string(),
    }
}

fn runtime(src: &Source, e: crate::Error) -> ConfigError {
    src.error(e.to_string())
}

fn require<'a, T>(
    value: &'a Option<T>,
    key: &str,
    mode: Mode,
    src: &Source,
) -> Result<&'a T, ConfigError> {
    value
        .as_ref()
        .ok_or_else(|| src.error_at("mode", format!("mode \"{mode}\" needs `{key}`")))
}

fn rounds(cfg: &ExperimentConfig, mode: Mode, src: &Source) -> Result<usize, ConfigError> {
    let t = *require(&cfg.rounds, "rounds", mode, src)?;
    if t == 0 {
        return Err(src.error_at("rounds", "rounds must be at least 1"));
    }
    Ok(t)
}

fn generator_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    rng
}

/// Explicit comparators for `player` (all players when `None` is given in
/// the file) followed by generated ones, built against `set`.
fn comparators_for(
    cfg: &ExperimentConfig,
    player: Option<usize>,
    set: &ConvexSet,
    rng: &mut ChaCha8Rng,
    src: &Source,
) -> Result<Vec<Comparator>, ConfigError> {
    let mut out = Vec::new();
    for (k, spec) in cfg.comparators.iter().enumerate() {
        if player.is_some() && spec.player().is_some() && spec.player() != player {
            continue;
        }
        out.push(build::comparator(spec, set.dim(), k, src)?);
    }
    for spec in &cfg.generators {
        out.extend(build::generate(spec, set, rng, src)?);
    }
    Ok(out)
}

struct Scored {
    row: RegretRow,
    violated: bool,
}

type Loss<'a> = &'a (dyn Fn(usize, &Vector) -> Option<f64> + Sync);

fn loss_regret(trace: &Trace, report: &RegretReport, loss: Loss<'_>) -> Option<f64> {
    trace
        .rounds()
        .iter()
        .zip(&report.prox_path)
        .map(|(r, p)| Some(loss(r.t, &r.x)? - loss(r.t, p)?))
        .sum()
}

fn score(
    trace: &Trace,
    report: &RegretReport,
    bound: Option<f64>,
    loss: Option<Loss<'_>>,
) -> Scored {
    let slack = bound.map(|b| b - report.regret);
    let true_regret = loss.and_then(|l| loss_regret(trace, report, l));
    let over_bound = match (bound, slack) {
        (Some(b), Some(s)) => s < -BOUND_TOL * b.abs().max(1.0),
        _ => false,
    };
    let over_linear = true_regret.is_some_and(|r| r > report.regret + LOSS_TOL);
    let violated = over_bound || over_linear;
    Scored {
        row: RegretRow {
            comparator_id: report.comparator_id.clone(),
            regret: report.regret,
            d_obs: report.d_obs,
            bf_obs: report.bf_obs,
            bound,
            slack,
            loss_regret: true_regret,
        },
        violated,
    }
}

/// Regret of `trace` against each comparator with the matching bound:
/// the full GD bound, the OG bound for convex comparators, or the
/// mirror-descent bound with the Bregman prox.
fn evaluate(
    trace: &Trace,
    kind: LearnerKind,
    map: Option<&MirrorMap>,
    comparators: &[Comparator],
    loss: Option<Loss<'_>>,
) -> crate::Result<Vec<Scored>> {
    comparators
        .par_iter()
        .map(|f| {
            let (report, bound) = match (kind, map) {
                (LearnerKind::Md, Some(map)) => {
                    let report = bregman_proximal_regret(trace, f, map)?;
                    let bound = md_bound(trace, &report, map)?;
                    (report, Some(bound))
                }
                (LearnerKind::Og, _) => {
                    let report = proximal_regret(trace, f)?;
                    let bound = if f.rho() == 0.0 {
                        Some(og_adversarial_bound(trace, &report)?)
                    } else {
                        None
                    };
                    (report, bound)
                }
                _ => {
                    let report = proximal_regret(trace, f)?;
                    let bound = gd_full_bound(trace, &report)?;
                    (report, Some(bound))
                }
            };
            Ok(score(trace, &report, bound, loss))
        })
        .collect()
}

fn fill_regret_summary(summary: &mut Summary, scored: &[Scored]) {
    summary.comparators = scored.len();
    summary.bound_violations = scored.iter().filter(|s| s.violated).count();
    summary.bounds_hold = summary.bound_violations == 0;
    if let Some(top) = scored
        .iter()
        .reduce(|a, b| if b.row.regret > a.row.regret { b } else { a })
    {
        summary.max_regret = Some(top.row.regret);
        summary.max_regret_comparator = Some(top.row.comparator_id.clone());
        summary.bound_at_max = top.row.bound;
    }
    summary.min_slack = scored.iter().filter_map(|s| s.row.slack).reduce(f64::min);
}

fn adversarial(cfg: &ExperimentConfig, src: &Source, out: &Path) -> Result<Summary, ConfigError> {
    let mode = Mode::Adversarial;
    let set = build::set(require(&cfg.set, "set", mode, src)?, src, "set")?;
    let lspec = require(&cfg.learner, "learner", mode, src)?;
    let aspec = require(&cfg.adversary, "adversary", mode, src)?;
    let rounds = rounds(cfg, mode, src)?;
    let ctx = ScheduleContext {
        set: &set,
        rounds,
        game: None,
    };
    let sched = build::schedule(&lspec.schedule, &ctx, src)?;
    let mut learner = build::learner(lspec, &set, sched, src)?;
    let mut adv = adversary(aspec, set.dim(), cfg.seed)
        .map_err(|e| src.error_at("adversary", e.to_string()))?;
    let mut rng = generator_rng(cfg.seed);
    let comparators = comparators_for(cfg, None, &set, &mut rng, src)?;
    if comparators.is_empty() {
        return Err(src.error("no comparators: add [[comparators]] or [[generators]]"));
    }

    let trace = run(&mut learner, &mut adv, rounds).map_err(|e| runtime(src, e))?;
    let map = build::mirror_map(lspec, &set);
    let loss = |t: usize, x: &Vector| adv.loss(t, x);
    let has_loss = trace
        .rounds()
        .first()
        .is_some_and(|r| adv.loss(r.t, &r.x).is_some());
    let scored = evaluate(
        &trace,
        learner.kind(),
        map.as_ref(),
        &comparators,
        has_loss.then_some(&loss as Loss<'_>),
    )
    .map_err(|e| runtime(src, e))?;

    let path = out.join("trace.csv");
    write_trace(&path, &trace).map_err(|e| io_error(&path, e))?;
    let rows: Vec<&RegretRow> = scored.iter().map(|s| &s.row).collect();
    let path = out.join("regret.csv");
    write_rows(&path, &rows).map_err(|e| io_error(&path, e))?;

    let mut summary = Summary::new(mode.to_string(), cfg.seed);
    summary.rounds = Some(rounds);
    fill_regret_summary(&mut summary, &scored);
    if set.is_bounded() && !trace.is_empty() {
        summary.external_regret = Some(external_regret(&trace, None).map_err(|e| runtime(src, e))?);
    }
    if !trace.is_empty() {
        summary.gradient_equilibrium_norm =
            Some(gradient_equilibrium_norm(&trace).map_err(|e| runtime(src, e))?);
    }
    Ok(summary)
}

fn build_players(
    cfg: &ExperimentConfig,
    game: &SmoothConvexGame,
    rounds: usize,
    src: &Source,
) -> Result<Vec<Learner>, ConfigError> {
    let lspec = require(&cfg.learner, "learner", Mode::SelfPlay, src)?;
    if lspec.start.is_some() && game.n() > 1 {
        return Err(src.error_at("start", "`start` is not supported in self-play"));
    }
    game.sets()
        .iter()
        .map(|set| {
            let ctx = ScheduleContext {
                set,
                rounds,
                game: Some(game),
            };
            let sched = build::schedule(&lspec.schedule, &ctx, src)?;
            build::learner(lspec, set, sched, src)
        })
        .collect()
}

fn self_play_run(cfg: &ExperimentConfig, src: &Source, out: &Path) -> Result<Summary, ConfigError> {
    let mode = Mode::SelfPlay;
    let game = build::game(require(&cfg.game, "game", mode, src)?, src)?;
    let rounds = rounds(cfg, mode, src)?;
    let lspec = require(&cfg.learner, "learner", mode, src)?;
    for spec in &cfg.comparators {
        if let Some(p) = spec.player() {
            if p >= game.n() {
                return Err(src.error_at(
                    "player",
                    format!("comparator for player {p} in a {}-player game", game.n()),
                ));
            }
        }
    }
    let mut learners = build_players(cfg, &game, rounds, src)?;
    let record = self_play(&game, &mut learners, rounds).map_err(|e| runtime(src, e))?;

    let mut rng = generator_rng(cfg.seed);
    let mut scored = Vec::new();
    let mut epsilon: Option<f64> = None;
    for (i, (trace, learner)) in record.traces.iter().zip(&learners).enumerate() {
        let set = game.set(i);
        let comparators: Vec<Comparator> = comparators_for(cfg, Some(i), set, &mut rng, src)?
            .into_iter()
            .filter(|f| f.dim().is_none_or(|d| d == set.dim()))
            .map(|f| {
                let label = format!("p{i}/{}", f.label());
                f.with_label(label)
            })
            .collect();
        let map = build::mirror_map(lspec, set);
        let mut player_scored = match learner.kind() {
            LearnerKind::Og if learner.schedule().is_constant() => {
                og_game_scores(trace, &game, learner.eta(), &comparators)
                    .map_err(|e| runtime(src, e))?
            }
            kind => evaluate(trace, kind, map.as_ref(), &comparators, None)
                .map_err(|e| runtime(src, e))?,
        };
        if rounds > 0 {
            for s in &player_scored {
                let eps = s.row.regret / rounds as f64;
                epsilon = Some(epsilon.map_or(eps, |e| e.max(eps)));
            }
        }
        scored.append(&mut player_scored);
        let path = out.join(format!("trace_p{i}.csv"));
        write_trace(&path, trace).map_err(|e| io_error(&path, e))?;
    }
    let rows: Vec<&RegretRow> = scored.iter().map(|s| &s.row).collect();
    let path = out.join("regret.csv");
    write_rows(&path, &rows).map_err(|e| io_error(&path, e))?;

    let mut summary = Summary::new(mode.to_string(), cfg.seed);
    summary.rounds = Some(rounds);
    summary.players = Some(game.n());
    fill_regret_summary(&mut summary, &scored);
    summary.epsilon = epsilon;
    if rounds > 0 {
        let mut ext: Option<f64> = None;
        let mut gen = 0.0f64;
        for trace in &record.traces {
            if trace.set().is_bounded() {
                let r = external_regret(trace, None).map_err(|e| runtime(src, e))?;
                ext = Some(ext.map_or(r, |m| m.max(r)));
            }
            gen = gen.max(gradient_equilibrium_norm(trace).map_err(|e| runtime(src, e))?);
        }
        summary.external_regret = ext;
        summary.gradient_equilibrium_norm = Some(gen);
    }

    if let Some(social) = &cfg.social {
        let (value, bound) = social_run(social, &game, &learners, &record.traces, src)?;
        summary.social_regret = Some(value);
        summary.social_bound = Some(bound);
        if value > bound + BOUND_TOL * bound.abs().max(1.0) {
            summary.bound_violations += 1;
            summary.bounds_hold = false;
        }
    }
    Ok(summary)
}

/// Per-player OG game bound with `D` the larger of the observed and anchor
/// distances.
fn og_game_scores(
    trace: &Trace,
    game: &SmoothConvexGame,
    eta: f64,
    comparators: &[Comparator],
) -> crate::Result<Vec<Scored>> {
    comparators
        .par_iter()
        .map(|f| {
            let report = proximal_regret(trace, f)?;
            let d = report.d_obs.max(report.d_anchor.unwrap_or(0.0));
            let bound = og_game_bound(
                d,
                report.bf_obs,
                game.g(),
                game.l(),
                game.n(),
                trace.len(),
                eta,
            );
            Ok(score(trace, &report, Some(bound), None))
        })
        .collect()
}

fn social_run(
    social: &super::config::SocialSpec,
    game: &SmoothConvexGame,
    learners: &[Learner],
    traces: &[Trace],
    src: &Source,
) -> Result<(f64, f64), ConfigError> {
    if learners
        .iter()
        .any(|l| l.kind() != LearnerKind::Og || !l.schedule().is_constant())
    {
        return Err(src.error_at(
            "social",
            "[social] needs OG learners with a constant schedule",
        ));
    }
    if !(social.alpha > 0.0 && social.alpha.is_finite()) {
        return Err(src.error_at(
            "alpha",
            format!("alpha must be positive, got {}", social.alpha),
        ));
    }
    if let Some(c) = &social.centers {
        if c.len() != game.n() {
            return Err(src.error_at(
                "centers",
                format!("{} centers for {} players", c.len(), game.n()),
            ));
        }
    }
    let mut regret = 0.0;
    let mut diameters = Vec::with_capacity(game.n());
    let mut bfs = Vec::with_capacity(game.n());
    for (i, trace) in traces.iter().enumerate() {
        let set = game.set(i);
        let z = match &social.centers {
            Some(c) => {
                if c[i].len() != set.dim() {
                    return Err(
                        src.error_at("centers", format!("center {i} has the wrong dimension"))
                    );
                }
                Vector::from_column_slice(&c[i])
            }
            None => set.center(),
        };
        let d = set.dim();
        let f = Comparator::quadratic(Matrix::identity(d, d) * social.alpha, -z * social.alpha)
            .map_err(|e| src.error_at("social", e.to_string()))?;
        let report = proximal_regret(trace, &f).map_err(|e| runtime(src, e))?;
        regret += report.regret;
        bfs.push(report.bf_obs);
        diameters.push(
            set.diameter()
                .map_err(|_| src.error_at("social", "[social] needs bounded player sets"))?,
        );
    }
    let eta = learners[0].eta();
    let bound = social_bound(&diameters, &bfs, game.g(), game.l(), social.alpha, eta)
        .map_err(|e| src.error_at("schedule", e.to_string()))?;
    Ok((regret, bound))
}

fn fuzz_set(rng: &mut ChaCha8Rng, dim: usize) -> ConvexSet {
    let built = match rng.random_range(0..4) {
        0 => {
            let lo = Vector::from_fn(dim, |_, _| rng.random_range(-2.0..0.0));
            let hi = Vector::from_fn(dim, |i, _| lo[i] + rng.random_range(0.1..3.0));
            ConvexSet::boxed(lo, hi)
        }
        1 => {
            let c = Vector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0));
            ConvexSet::ball(c, rng.random_range(0.1..3.0))
        }
        2 => ConvexSet::simplex(dim),
        _ => ConvexSet::whole_space(dim),
    };
    built.expect("fuzz set parameters are valid")
}

fn fuzz_comparator(
    rng: &mut ChaCha8Rng,
    set: &ConvexSet,
    rho_max: f64,
) -> crate::Result<Comparator> {
    let d = set.dim();
    Ok(match rng.random_range(0..4) {
        0 => {
            let g = Matrix::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0));
            let u = g.qr().q();
            let eigs = Vector::from_fn(d, |_, _| rng.random_range(-rho_max..2.0));
            let q = &u * Matrix::from_diagonal(&eigs) * u.transpose();
            let q = (&q + q.transpose()) * 0.5;
            let c = Vector::from_fn(d, |_, _| rng.random_range(-1.0..1.0));
            Comparator::quadratic(q, c)?
        }
        1 => Comparator::linear(random_unit(d, rng) * rng.random_range(0.0..2.0))?,
        2 => Comparator::indicator_point(set.sample_member(rng))?,
        _ => Comparator::constant(rng.random_range(-1.0..1.0)),
    })
}

fn set_name(set: &ConvexSet) -> &'static str {
    use crate::geometry::SetKind;
    match set.kind() {
        SetKind::Box { .. } => "box",
        SetKind::Ball { .. } => "ball",
        SetKind::Simplex => "simplex",
        SetKind::WholeSpace => "whole-space",
        SetKind::Translate { .. } => "translate",
    }
}

fn random_point(rng: &mut ChaCha8Rng, set: &ConvexSet) -> Vector {
    let base = if set.is_bounded() {
        set.center()
    } else {
        Vector::zeros(set.dim())
    };
    base + Vector::from_fn(set.dim(), |_, _| rng.random_range(-3.0..3.0))
}

fn fuzz_sample(spec: &FuzzSpec, seed: u64, k: usize) -> crate::Result<FuzzRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k as u64 + 2);
    let dim = rng.random_range(1..=spec.max_dim);
    let set = fuzz_set(&mut rng, dim);
    let x = random_point(&mut rng, &set);
    let (comparator, gap) = match spec.suite {
        FuzzSuite::Projection => {
            let y = set.sample_member(&mut rng);
            let px = set.project(&x)?;
            ("none".to_string(), -(&x - &px).dot(&(y - &px)))
        }
        FuzzSuite::KeyInequality => {
            let f = fuzz_comparator(&mut rng, &set, spec.rho_max)?;
            let p = match f.kind() {
                crate::comparators::ComparatorKind::IndicatorPoint(x0) => x0.clone(),
                _ => set.sample_member(&mut rng),
            };
            (f.label().to_string(), key_inequality_gap(&f, &set, &x, &p)?)
        }
        FuzzSuite::ProxOptimality => {
            let f = fuzz_comparator(&mut rng, &set, spec.rho_max)?;
            let p = f.prox_point(&set, &x)?;
            (
                f.label().to_string(),
                -check_prox_optimality(&f, &set, &x, &p),
            )
        }
    };
    Ok(FuzzRow {
        sample: k,
        dim,
        set: set_name(&set).to_string(),
        comparator,
        gap,
    })
}

fn fuzz(cfg: &ExperimentConfig, src: &Source, out: &Path) -> Result<Summary, ConfigError> {
    let spec = require(&cfg.fuzz, "fuzz", Mode::Fuzz, src)?;
    if spec.max_dim == 0 {
        return Err(src.error_at("max_dim", "max_dim must be positive"));
    }
    if !(0.0..1.0).contains(&spec.rho_max) {
        return Err(src.error_at(
            "rho_max",
            format!("rho_max must lie in [0, 1), got {}", spec.rho_max),
        ));
    }
    let rows = (0..spec.samples)
        .into_par_iter()
        .map(|k| fuzz_sample(spec, cfg.seed, k))
        .collect::<crate::Result<Vec<_>>>()
        .map_err(|e| runtime(src, e))?;
    let path = out.join("fuzz.csv");
    write_rows(&path, &rows).map_err(|e| io_error(&path, e))?;

    let mut summary = Summary::new(Mode::Fuzz.to_string(), cfg.seed);
    let min_gap = rows.iter().map(|r| r.gap).reduce(f64::min);
    let violations = rows.iter().filter(|r| r.gap < -FUZZ_TOL).count();
    summary.fuzz_suite = Some(spec.suite.to_string());
    summary.fuzz_samples = Some(spec.samples);
    summary.fuzz_min_gap = min_gap;
    summary.bound_violations = violations;
    summary.bounds_hold = violations == 0;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn source(text: &str) -> Source {
        Source {
            path: PathBuf::from("exp.toml"),
            text: text.to_string(),
        }
    }

    #[test]
    fn adversarial_gd_respects_bounds() {
        let dir = tempfile::tempdir().unwrap();
        let src = source(
            r#"
mode = "adversarial"
seed = 3
rounds = 200

[set]
kind = "cube"
dim = 2
lo = -1.0
hi = 1.0

[learner]
algorithm = "gd"
schedule = { kind = "inverse-sqrt" }

[adversary]
kind = "iid-linear"

[[comparators]]
kind = "constant"

[[generators]]
kind = "random-quadratics"
count = 5
"#,
        );
        let outcome = run_source(&src, Some(dir.path()), &Overrides::default()).unwrap();
        assert_eq!(outcome.summary.comparators, 6);
        assert!(outcome.summary.bounds_hold);
        assert_eq!(outcome.summary.rounds, Some(200));
        assert!(dir.path().join("trace.csv").exists());
        assert!(dir.path().join("regret.csv").exists());
    }

    #[test]
    fn fuzz_suites_are_clean() {
        for suite in ["key-inequality", "projection", "prox-optimality"] {
            let dir = tempfile::tempdir().unwrap();
            let src = source(&format!(
                "mode = \"fuzz\"\nseed = 1\n[fuzz]\nsuite = \"{suite}\"\nsamples = 300\nmax_dim = 4\n"
            ));
            let outcome = run_source(&src, Some(dir.path()), &Overrides::default()).unwrap();
            let gap = outcome.summary.fuzz_min_gap.unwrap();
            assert!(gap >= -FUZZ_TOL, "{suite}: {gap}");
            assert_eq!(outcome.exit_code(), 0);
        }
    }

    #[test]
    fn exit_code_follows_assertion() {
        let mut outcome = RunOutcome {
            out_dir: PathBuf::new(),
            summary: Summary::new("adversarial", 0),
            assert_bounds: true,
        };
        assert_eq!(outcome.exit_code(), 0);
        outcome.summary.bound_violations = 1;
        outcome.summary.bounds_hold = false;
        assert_eq!(outcome.exit_code(), 1);
        outcome.assert_bounds = false;
        assert_eq!(outcome.exit_code(), 0);
        outcome.assert_bounds = true;
        outcome.summary.bound_violations = 0;
        outcome.summary.fuzz_min_gap = Some(-1e-3);
        assert_eq!(outcome.exit_code(), 1);
    }

    #[test]
    fn missing_section_is_anchored() {
        let src = source("seed = 1\nmode = \"adversarial\"\nrounds = 10\n");
        let dir = tempfile::tempdir().unwrap();
        let err = run_source(&src, Some(dir.path()), &Overrides::default()).unwrap_err();
        assert_eq!(err.line, Some(2));
        assert!(err.message.contains("`set`"));
    }
}
