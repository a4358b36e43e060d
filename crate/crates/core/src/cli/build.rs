//! Turns parsed config specs into library objects.

use std::path::Path;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::config::{
    Algorithm, ComparatorSpec, ConfigError, GameSpec, GeneratorSpec, LearnerSpec, Mirror,
    ScheduleSpec, SetSpec, Source,
};
use crate::bounds::social_step_max;
use crate::bregman::MirrorMap;
use crate::comparators::{
    affine_to_comparator, interpolate_endomorphism, interpolation_alpha, Comparator,
};
use crate::games::SmoothConvexGame;
use crate::geometry::{random_unit, ConvexSet};
use crate::learners::{Learner, StepSchedule};
use crate::{Matrix, Vector};

type Built<T> = Result<T, ConfigError>;

fn vector(xs: &[f64]) -> Vector {
    Vector::from_column_slice(xs)
}

pub fn matrix(rows: &[Vec<f64>], src: &Source, key: &str) -> Built<Matrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if r == 0 || c == 0 {
        return Err(src.error_at(key, format!("`{key}` must be a non-empty matrix")));
    }
    if rows.iter().any(|row| row.len() != c) {
        return Err(src.error_at(key, format!("`{key}` rows have different lengths")));
    }
    Ok(Matrix::from_fn(r, c, |i, j| rows[i][j]))
}

/// Reads a headerless numeric CSV as a matrix.
pub fn csv_matrix(path: &str, src: &Source, key: &str) -> Built<Matrix> {
    let full = src.base_dir().join(path);
    let rows =
        read_csv_rows(&full).map_err(|e| src.error_at(key, format!("{}: {e}", full.display())))?;
    matrix(&rows, src, key)
}

fn read_csv_rows(path: &Path) -> std::result::Result<Vec<Vec<f64>>, String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| e.to_string())?;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| e.to_string())?;
        let row = record
            .iter()
            .map(|s| s.parse::<f64>().map_err(|e| format!("`{s}`: {e}")))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(rows)
}

pub fn set(spec: &SetSpec, src: &Source, key: &str) -> Built<ConvexSet> {
    let built = match spec {
        SetSpec::Box { lo, hi } => ConvexSet::boxed(vector(lo), vector(hi)),
        SetSpec::Cube { dim, lo, hi } => ConvexSet::cube(*dim, *lo, *hi),
        SetSpec::Ball { center, radius } => ConvexSet::ball(vector(center), *radius),
        SetSpec::Simplex { dim } => ConvexSet::simplex(*dim),
        SetSpec::WholeSpace { dim } => ConvexSet::whole_space(*dim),
        SetSpec::Translate { inner, offset } => {
            let inner = set(inner, src, key)?;
            ConvexSet::translate(inner, vector(offset))
        }
    };
    built.map_err(|e| src.error_at(key, format!("invalid set: {e}")))
}

/// Game-dependent quantities a schedule may need.
pub struct ScheduleContext<'a> {
    pub set: &'a ConvexSet,
    pub rounds: usize,
    pub game: Option<&'a SmoothConvexGame>,
}

pub fn schedule(
    spec: &ScheduleSpec,
    ctx: &ScheduleContext<'_>,
    src: &Source,
) -> Built<StepSchedule> {
    let err = |e: crate::Error| src.error_at("schedule", e.to_string());
    match spec {
        ScheduleSpec::Constant { eta } => StepSchedule::constant(*eta).map_err(err),
        ScheduleSpec::InverseSqrt => Ok(StepSchedule::InverseSqrt),
        ScheduleSpec::Optimized { d, bf, g } => {
            let d = match d {
                Some(d) => *d,
                None => ctx.set.diameter().map_err(|_| {
                    src.error_at(
                        "schedule",
                        "optimized schedule on an unbounded set needs `d`",
                    )
                })?,
            };
            StepSchedule::optimized(d, *bf, *g, ctx.rounds).map_err(err)
        }
        ScheduleSpec::QuarterPower => {
            StepSchedule::constant((ctx.rounds as f64).powf(-0.25)).map_err(err)
        }
        ScheduleSpec::SocialMax { alpha } => {
            let game = ctx
                .game
                .ok_or_else(|| src.error_at("schedule", "`social-max` schedule needs a game"))?;
            let eta = social_step_max(*alpha, game.n(), game.l());
            if !eta.is_finite() {
                return Err(src.error_at("schedule", "`social-max` needs a game with L > 0"));
            }
            StepSchedule::constant(eta).map_err(err)
        }
    }
}

pub fn learner(
    spec: &LearnerSpec,
    set: &ConvexSet,
    sched: StepSchedule,
    src: &Source,
) -> Built<Learner> {
    let err = |e: crate::Error| src.error_at("learner", e.to_string());
    if spec.mirror.is_some() && spec.algorithm != Algorithm::Md {
        return Err(src.error_at("mirror", "`mirror` only applies to algorithm = \"md\""));
    }
    let l = match spec.algorithm {
        Algorithm::Gd => Learner::gd(set.clone(), sched),
        Algorithm::Og => Learner::og(set.clone(), sched),
        Algorithm::Md => {
            let map = match spec.mirror.unwrap_or(Mirror::Euclidean) {
                Mirror::Euclidean => MirrorMap::squared_euclidean(set.clone()),
                Mirror::Entropy => MirrorMap::entropy(set.clone()).map_err(err)?,
            };
            Learner::md(map, sched)
        }
    }
    .map_err(err)?;
    match &spec.start {
        Some(x) => l
            .with_start(vector(x))
            .map_err(|e| src.error_at("start", e.to_string())),
        None => Ok(l),
    }
}

pub fn mirror_map(spec: &LearnerSpec, set: &ConvexSet) -> Option<MirrorMap> {
    match (spec.algorithm, spec.mirror.unwrap_or(Mirror::Euclidean)) {
        (Algorithm::Md, Mirror::Entropy) => MirrorMap::entropy(set.clone()).ok(),
        (Algorithm::Md, Mirror::Euclidean) => Some(MirrorMap::squared_euclidean(set.clone())),
        _ => None,
    }
}

fn check_len(v: &[f64], dim: usize, src: &Source, key: &str) -> Built<()> {
    if v.len() != dim {
        return Err(src.error_at(
            key,
            format!("`{key}` has length {}, expected {dim}", v.len()),
        ));
    }
    Ok(())
}

pub fn comparator(
    spec: &ComparatorSpec,
    dim: usize,
    index: usize,
    src: &Source,
) -> Built<Comparator> {
    let err = |e: crate::Error| src.error_at("comparators", format!("comparator {index}: {e}"));
    let (id, f) = match spec {
        ComparatorSpec::IndicatorPoint { id, point, .. } => {
            check_len(point, dim, src, "point")?;
            (id, Comparator::indicator_point(vector(point)).map_err(err)?)
        }
        ComparatorSpec::IndicatorSet { id, set: s, .. } => {
            let s = set(s, src, "set")?;
            if s.dim() != dim {
                return Err(src.error_at(
                    "comparators",
                    format!("comparator {index}: set dimension {} != {dim}", s.dim()),
                ));
            }
            (id, Comparator::indicator_set(s))
        }
        ComparatorSpec::Linear { id, v, .. } => {
            check_len(v, dim, src, "v")?;
            (id, Comparator::linear(vector(v)).map_err(err)?)
        }
        ComparatorSpec::Quadratic { id, q, c, .. } => {
            check_len(c, dim, src, "c")?;
            let q = matrix(q, src, "q")?;
            (id, Comparator::quadratic(q, vector(c)).map_err(err)?)
        }
        ComparatorSpec::Constant { id, value, .. } => (id, Comparator::constant(*value)),
        ComparatorSpec::Affine {
            id,
            a,
            b,
            interpolate,
            ..
        } => {
            check_len(b, dim, src, "b")?;
            let a = matrix(a, src, "a")?;
            let b = vector(b);
            let (a, b) = if *interpolate {
                let alpha = interpolation_alpha(&a);
                interpolate_endomorphism(&a, &b, alpha).map_err(err)?
            } else {
                (a, b)
            };
            (id, affine_to_comparator(&a, &b).map_err(err)?)
        }
    };
    if f.dim().is_some_and(|d| d != dim) {
        return Err(src.error_at(
            "comparators",
            format!("comparator {index}: dimension mismatch with the set"),
        ));
    }
    let label = id
        .clone()
        .unwrap_or_else(|| format!("{}#{index}", kind_name(spec)));
    Ok(f.with_label(label))
}

fn kind_name(spec: &ComparatorSpec) -> &'static str {
    match spec {
        ComparatorSpec::IndicatorPoint { .. } => "indicator-point",
        ComparatorSpec::IndicatorSet { .. } => "indicator-set",
        ComparatorSpec::Linear { .. } => "linear",
        ComparatorSpec::Quadratic { .. } => "quadratic",
        ComparatorSpec::Constant { .. } => "constant",
        ComparatorSpec::Affine { .. } => "affine",
    }
}

fn symmetric_with_spectrum(eigs: &[f64], rng: &mut ChaCha8Rng) -> Matrix {
    let d = eigs.len();
    let g = Matrix::from_fn(d, d, |_, _| rng.sample::<f64, _>(StandardNormal));
    let u = g.qr().q();
    let m = &u * Matrix::from_diagonal(&Vector::from_column_slice(eigs)) * u.transpose();
    (&m + m.transpose()) * 0.5
}

pub fn generate(
    spec: &GeneratorSpec,
    set: &ConvexSet,
    rng: &mut ChaCha8Rng,
    src: &Source,
) -> Built<Vec<Comparator>> {
    let d = set.dim();
    let err = |e: crate::Error| src.error_at("generators", e.to_string());
    let mut out = Vec::new();
    match spec {
        GeneratorSpec::Vertices => {
            let vertices = set.extreme_points().ok_or_else(|| {
                src.error_at(
                    "generators",
                    "`vertices` needs a box or simplex with few vertices",
                )
            })?;
            for (k, p) in vertices.into_iter().enumerate() {
                out.push(
                    Comparator::indicator_point(p)
                        .map_err(err)?
                        .with_label(format!("vertex#{k}")),
                );
            }
        }
        GeneratorSpec::RandomPoints { count } => {
            for k in 0..*count {
                let p = set.sample_member(rng);
                out.push(
                    Comparator::indicator_point(p)
                        .map_err(err)?
                        .with_label(format!("point#{k}")),
                );
            }
        }
        GeneratorSpec::UnitLinear { count } => {
            for k in 0..*count {
                out.push(
                    Comparator::linear(random_unit(d, rng))
                        .map_err(err)?
                        .with_label(format!("unit-linear#{k}")),
                );
            }
        }
        GeneratorSpec::RandomQuadratics {
            count,
            min_eig,
            max_eig,
        } => {
            if !(*min_eig > -1.0 && min_eig <= max_eig && max_eig.is_finite()) {
                return Err(src.error_at(
                    "generators",
                    format!("random-quadratics needs -1 < min_eig <= max_eig, got [{min_eig}, {max_eig}]"),
                ));
            }
            for k in 0..*count {
                let eigs: Vec<f64> = (0..d)
                    .map(|_| {
                        if min_eig == max_eig {
                            *min_eig
                        } else {
                            rng.random_range(*min_eig..*max_eig)
                        }
                    })
                    .collect();
                let q = symmetric_with_spectrum(&eigs, rng);
                let c = Vector::from_fn(d, |_, _| rng.random_range(-1.0..1.0));
                out.push(
                    Comparator::quadratic(q, c)
                        .map_err(err)?
                        .with_label(format!("quadratic#{k}")),
                );
            }
        }
        GeneratorSpec::RandomAffine { count } => {
            for k in 0..*count {
                let eigs: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
                let a = symmetric_with_spectrum(&eigs, rng);
                let b = Vector::from_fn(d, |_, _| rng.random_range(-0.3..0.3));
                let (aa, ba) =
                    interpolate_endomorphism(&a, &b, interpolation_alpha(&a)).map_err(err)?;
                out.push(
                    affine_to_comparator(&aa, &ba)
                        .map_err(err)?
                        .with_label(format!("affine#{k}")),
                );
            }
        }
    }
    Ok(out)
}

pub fn game(spec: &GameSpec, src: &Source) -> Built<SmoothConvexGame> {
    let err = |e: crate::Error| src.error_at("game", format!("invalid game: {e}"));
    match spec {
        GameSpec::BilinearZeroSum {
            m,
            m_csv,
            row_set,
            col_set,
        } => {
            let m = match (m, m_csv) {
                (Some(rows), None) => matrix(rows, src, "m")?,
                (None, Some(path)) => csv_matrix(path, src, "m_csv")?,
                _ => {
                    return Err(src.error_at(
                        "game",
                        "bilinear-zero-sum needs exactly one of `m` or `m_csv`",
                    ))
                }
            };
            let rows = match row_set {
                Some(s) => set(s, src, "row_set")?,
                None => ConvexSet::simplex(m.nrows()).map_err(err)?,
            };
            let cols = match col_set {
                Some(s) => set(s, src, "col_set")?,
                None => ConvexSet::simplex(m.ncols()).map_err(err)?,
            };
            SmoothConvexGame::bilinear_zero_sum(m, rows, cols).map_err(err)
        }
        GameSpec::NormalForm {
            actions,
            payoffs,
            payoffs_csv,
        } => {
            let tables = match (payoffs, payoffs_csv) {
                (Some(p), None) => p.clone(),
                (None, Some(paths)) => paths
                    .iter()
                    .map(|p| {
                        let full = src.base_dir().join(p);
                        read_csv_rows(&full)
                            .map(|rows| rows.into_iter().flatten().collect())
                            .map_err(|e| {
                                src.error_at("payoffs_csv", format!("{}: {e}", full.display()))
                            })
                    })
                    .collect::<Built<Vec<Vec<f64>>>>()?,
                _ => {
                    return Err(src.error_at(
                        "game",
                        "normal-form needs exactly one of `payoffs` or `payoffs_csv`",
                    ))
                }
            };
            SmoothConvexGame::normal_form(actions.clone(), tables).map_err(err)
        }
        GameSpec::Quadratic { players } => {
            let n = players.len();
            let mut sets = Vec::with_capacity(n);
            let mut own = Vec::with_capacity(n);
            let mut linear = Vec::with_capacity(n);
            let mut couplings = Vec::with_capacity(n);
            for p in players {
                sets.push(set(&p.set, src, "set")?);
                own.push(matrix(&p.own, src, "own")?);
                linear.push(vector(&p.linear));
                let mut row = vec![None; n];
                for c in &p.couplings {
                    if c.with >= n {
                        return Err(
                            src.error_at("with", format!("coupling with player {} of {n}", c.with))
                        );
                    }
                    row[c.with] = Some(matrix(&c.c, src, "c")?);
                }
                couplings.push(row);
            }
            SmoothConvexGame::quadratic(sets, own, couplings, linear).map_err(err)
        }
    }
}
