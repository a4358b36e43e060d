//! Smooth convex games and simultaneous self-play.
//!
//! Players maximize utilities `u_i`, so the loss fed to player `i` is the
//! linear function `<-∇_{x_i} u_i(x^t), ·>`.

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::comparators::Comparator;
use crate::error::{Error, Result};
use crate::geometry::ConvexSet;
use crate::learners::Learner;
use crate::linalg::{check_dim, require_symmetric, spectral_norm, sym_eigenvalues, Matrix, Vector};
use crate::regret::{family_regret, proximal_regret, ComparatorFamily, RegretReport};
use crate::trace::Trace;

/// Slack allowed when checking observed gradients against `G`.
pub const CONSTANT_TOL: f64 = 1e-9;

/// `(player, joint profile) -> ∇_{x_i} u_i(x)`.
pub type GradientOracle = Arc<dyn Fn(usize, &[Vector]) -> Vector + Send + Sync>;

#[derive(Clone)]
pub enum GameKind {
    /// Two players, `u_0 = x_0ᵀ M x_1 = -u_1`.
    BilinearZeroSum { m: Matrix },
    /// `u_i = -½ x_iᵀ P_i x_i + Σ_{j≠i} x_iᵀ C_ij x_j + c_iᵀ x_i` with `P_i ⪰ 0`.
    Quadratic {
        own: Vec<Matrix>,
        couplings: Vec<Vec<Option<Matrix>>>,
        linear: Vec<Vector>,
    },
    /// Mixed extension of a finite game. `payoffs[i]` lists `U_i(a)` over
    /// joint actions in row-major order, player 0 most significant.
    NormalForm {
        actions: Vec<usize>,
        payoffs: Vec<Vec<f64>>,
    },
    /// User oracle with declared constants.
    Custom { oracle: GradientOracle },
}

impl fmt::Debug for GameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameKind::BilinearZeroSum { m } => {
                f.debug_struct("BilinearZeroSum").field("m", m).finish()
            }
            GameKind::Quadratic {
                own,
                couplings,
                linear,
            } => f
                .debug_struct("Quadratic")
                .field("own", own)
                .field("couplings", couplings)
                .field("linear", linear)
                .finish(),
            GameKind::NormalForm { actions, payoffs } => f
                .debug_struct("NormalForm")
                .field("actions", actions)
                .field("payoffs", payoffs)
                .finish(),
            GameKind::Custom { .. } => f.write_str("Custom"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SmoothConvexGame {
    sets: Vec<ConvexSet>,
    kind: GameKind,
    g: f64,
    l: f64,
}

fn joint_size(actions: &[usize]) -> usize {
    actions.iter().product()
}

/// `norm · radius`, with a zero operator contributing nothing on unbounded sets.
fn scaled(norm: f64, radius: f64) -> f64 {
    if norm == 0.0 {
        0.0
    } else {
        norm * radius
    }
}

/// Decodes a row-major joint action index.
fn decode(mut index: usize, actions: &[usize], out: &mut [usize]) {
    for (slot, &m) in out.iter_mut().zip(actions).rev() {
        *slot = index % m;
        index /= m;
    }
}

impl SmoothConvexGame {
    pub fn bilinear_zero_sum(m: Matrix, row_set: ConvexSet, col_set: ConvexSet) -> Result<Self> {
        if m.nrows() != row_set.dim() {
            return Err(Error::DimensionMismatch {
                expected: row_set.dim(),
                got: m.nrows(),
            });
        }
        if m.ncols() != col_set.dim() {
            return Err(Error::DimensionMismatch {
                expected: col_set.dim(),
                got: m.ncols(),
            });
        }
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = spectral_norm(&m);
        let g = scaled(norm, row_set.norm_bound().max(col_set.norm_bound()));
        Ok(Self {
            sets: vec![row_set, col_set],
            kind: GameKind::BilinearZeroSum { m },
            g,
            l: norm,
        })
    }

    /// Bilinear zero-sum game with both players on simplices.
    pub fn matrix_game(m: Matrix) -> Result<Self> {
        let rows = ConvexSet::simplex(m.nrows())?;
        let cols = ConvexSet::simplex(m.ncols())?;
        Self::bilinear_zero_sum(m, rows, cols)
    }

    pub fn quadratic(
        sets: Vec<ConvexSet>,
        own: Vec<Matrix>,
        couplings: Vec<Vec<Option<Matrix>>>,
        linear: Vec<Vector>,
    ) -> Result<Self> {
        let n = sets.len();
        if n == 0 {
            return Err(Error::InvalidParameter(
                "a game needs at least one player".into(),
            ));
        }
        for (name, len) in [
            ("own", own.len()),
            ("couplings", couplings.len()),
            ("linear", linear.len()),
        ] {
            if len != n {
                return Err(Error::InvalidParameter(format!(
                    "{name} has {len} entries for {n} players"
                )));
            }
        }
        let dims: Vec<usize> = sets.iter().map(|s| s.dim()).collect();
        let mut g: f64 = 0.0;
        let mut l: f64 = 0.0;
        for i in 0..n {
            let p = &own[i];
            if p.nrows() != dims[i] || p.ncols() != dims[i] {
                return Err(Error::DimensionMismatch {
                    expected: dims[i],
                    got: p.nrows(),
                });
            }
            require_symmetric(p)?;
            if sym_eigenvalues(p).first().is_some_and(|&lo| lo < -1e-12) {
                return Err(Error::InvalidParameter(format!(
                    "player {i}'s own matrix must be positive semidefinite for a concave utility"
                )));
            }
            check_dim(&linear[i], dims[i])?;
            if couplings[i].len() != n {
                return Err(Error::InvalidParameter(format!(
                    "couplings[{i}] has {} entries for {n} players",
                    couplings[i].len()
                )));
            }
            let total: usize = dims.iter().sum();
            let mut row = Matrix::zeros(dims[i], total);
            let mut offset = 0;
            let mut gi = scaled(spectral_norm(p), sets[i].norm_bound()) + linear[i].norm();
            for j in 0..n {
                if j == i {
                    row.view_mut((0, offset), (dims[i], dims[j]))
                        .copy_from(&(-p));
                } else if let Some(c) = &couplings[i][j] {
                    if c.nrows() != dims[i] || c.ncols() != dims[j] {
                        return Err(Error::DimensionMismatch {
                            expected: dims[j],
                            got: c.ncols(),
                        });
                    }
                    gi += scaled(spectral_norm(c), sets[j].norm_bound());
                    row.view_mut((0, offset), (dims[i], dims[j])).copy_from(c);
                }
                offset += dims[j];
            }
            g = g.max(gi);
            l = l.max(spectral_norm(&row));
        }
        Ok(Self {
            sets,
            kind: GameKind::Quadratic {
                own,
                couplings,
                linear,
            },
            g,
            l,
        })
    }

    pub fn normal_form(actions: Vec<usize>, payoffs: Vec<Vec<f64>>) -> Result<Self> {
        let n = actions.len();
        if n == 0 || actions.contains(&0) {
            return Err(Error::InvalidParameter(
                "every player needs at least one action".into(),
            ));
        }
        if payoffs.len() != n {
            return Err(Error::InvalidParameter(format!(
                "{} payoff tables for {n} players",
                payoffs.len()
            )));
        }
        let size = joint_size(&actions);
        for (i, table) in payoffs.iter().enumerate() {
            if table.len() != size {
                return Err(Error::InvalidParameter(format!(
                    "player {i}'s payoff table has {} entries, expected {size}",
                    table.len()
                )));
            }
            if table.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        let sets = actions
            .iter()
            .map(|&m| ConvexSet::simplex(m))
            .collect::<Result<Vec<_>>>()?;
        let (g, l) = normal_form_constants(&actions, &payoffs);
        Ok(Self {
            sets,
            kind: GameKind::NormalForm { actions, payoffs },
            g,
            l,
        })
    }

    /// Game defined by a gradient oracle and declared constants. Use
    /// [`SmoothConvexGame::spot_check`] to test the declaration.
    pub fn custom(sets: Vec<ConvexSet>, oracle: GradientOracle, g: f64, l: f64) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::InvalidParameter(
                "a game needs at least one player".into(),
            ));
        }
        if !(g >= 0.0 && l >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "G and L must be non-negative, got {g}, {l}"
            )));
        }
        Ok(Self {
            sets,
            kind: GameKind::Custom { oracle },
            g,
            l,
        })
    }

    pub fn n(&self) -> usize {
        self.sets.len()
    }

    pub fn sets(&self) -> &[ConvexSet] {
        &self.sets
    }

    pub fn set(&self, i: usize) -> &ConvexSet {
        &self.sets[i]
    }

    pub fn kind(&self) -> &GameKind {
        &self.kind
    }

    /// Bound on `||∇_{x_i} u_i||` over feasible profiles.
    pub fn g(&self) -> f64 {
        self.g
    }

    /// Bound on `||∇_{x_i} u_i(x) - ∇_{x_i} u_i(x')|| / ||x - x'||`.
    pub fn l(&self) -> f64 {
        self.l
    }

    fn check_profile(&self, profile: &[Vector]) -> Result<()> {
        if profile.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: profile.len(),
            });
        }
        for (x, s) in profile.iter().zip(&self.sets) {
            check_dim(x, s.dim())?;
        }
        Ok(())
    }

    /// `∇_{x_i} u_i(x)`.
    pub fn gradient(&self, i: usize, profile: &[Vector]) -> Result<Vector> {
        self.check_profile(profile)?;
        if i >= self.n() {
            return Err(Error::InvalidParameter(format!("player {i} out of range")));
        }
        let grad = match &self.kind {
            GameKind::BilinearZeroSum { m } => {
                if i == 0 {
                    m * &profile[1]
                } else {
                    -(m.transpose() * &profile[0])
                }
            }
            GameKind::Quadratic {
                own,
                couplings,
                linear,
            } => {
                let mut grad = &linear[i] - &own[i] * &profile[i];
                for (j, c) in couplings[i].iter().enumerate() {
                    if let (true, Some(c)) = (j != i, c) {
                        grad += c * &profile[j];
                    }
                }
                grad
            }
            GameKind::NormalForm { actions, payoffs } => {
                let mut grad = Vector::zeros(actions[i]);
                let mut a = vec![0; actions.len()];
                for (index, u) in payoffs[i].iter().enumerate() {
                    decode(index, actions, &mut a);
                    let weight: f64 = (0..actions.len())
                        .filter(|&j| j != i)
                        .map(|j| profile[j][a[j]])
                        .product();
                    grad[a[i]] += u * weight;
                }
                grad
            }
            GameKind::Custom { oracle } => {
                let grad = oracle(i, profile);
                check_dim(&grad, self.sets[i].dim())?;
                grad
            }
        };
        if grad.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(grad)
    }

    /// `u_i(x)` for built-in kinds.
    pub fn utility(&self, i: usize, profile: &[Vector]) -> Option<f64> {
        self.check_profile(profile).ok()?;
        match &self.kind {
            GameKind::BilinearZeroSum { m } => {
                let u = profile[0].dot(&(m * &profile[1]));
                Some(if i == 0 { u } else { -u })
            }
            GameKind::Quadratic {
                own,
                couplings,
                linear,
            } => {
                let x = &profile[i];
                let mut u = linear[i].dot(x) - 0.5 * x.dot(&(&own[i] * x));
                for (j, c) in couplings[i].iter().enumerate() {
                    if let (true, Some(c)) = (j != i, c) {
                        u += x.dot(&(c * &profile[j]));
                    }
                }
                Some(u)
            }
            GameKind::NormalForm { .. } => {
                let grad = self.gradient(i, profile).ok()?;
                Some(grad.dot(&profile[i]))
            }
            GameKind::Custom { .. } => None,
        }
    }

    /// Samples feasible profiles and checks the declared `G` and `L`.
    pub fn spot_check(&self, samples: usize, seed: u64) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let x: Vec<Vector> = self
                .sets
                .iter()
                .map(|s| s.sample_member(&mut rng))
                .collect();
            let y: Vec<Vector> = self
                .sets
                .iter()
                .map(|s| s.sample_member(&mut rng))
                .collect();
            let dist = x
                .iter()
                .zip(&y)
                .map(|(a, b)| (a - b).norm_squared())
                .sum::<f64>()
                .sqrt();
            for i in 0..self.n() {
                let gx = self.gradient(i, &x)?;
                let gy = self.gradient(i, &y)?;
                let norm = gx.norm();
                if norm > self.g + CONSTANT_TOL {
                    return Err(Error::ConstantsViolated {
                        player: i,
                        round: 0,
                        norm,
                        bound: self.g,
                    });
                }
                let diff = (gx - gy).norm();
                if diff > self.l * dist + CONSTANT_TOL {
                    return Err(Error::Oracle(format!(
                        "player {i}: gradient moved {diff} over distance {dist}, declared L = {}",
                        self.l
                    )));
                }
            }
        }
        Ok(())
    }
}

fn normal_form_constants(actions: &[usize], payoffs: &[Vec<f64>]) -> (f64, f64) {
    let n = actions.len();
    let size = joint_size(actions);
    let mut a = vec![0; n];
    let mut g: f64 = 0.0;
    let mut l: f64 = 0.0;
    for i in 0..n {
        // ∇_i is a convex combination of the columns U_i(·, a_{-i}).
        let mut columns = std::collections::HashMap::<usize, Vector>::new();
        for index in 0..size {
            decode(index, actions, &mut a);
            let rest: usize = (0..n)
                .filter(|&j| j != i)
                .fold(0, |acc, j| acc * actions[j] + a[j]);
            columns
                .entry(rest)
                .or_insert_with(|| Vector::zeros(actions[i]))[a[i]] = payoffs[i][index];
        }
        for c in columns.values() {
            g = g.max(c.norm());
        }
        let mut li_sq = 0.0;
        for j in (0..n).filter(|&j| j != i) {
            // Jacobian block ∂∇_i/∂x_j is a convex combination of the
            // matrices U_i(·, ·, a_rest).
            let mut blocks = std::collections::HashMap::<usize, Matrix>::new();
            for index in 0..size {
                decode(index, actions, &mut a);
                let rest: usize = (0..n)
                    .filter(|&k| k != i && k != j)
                    .fold(0, |acc, k| acc * actions[k] + a[k]);
                blocks
                    .entry(rest)
                    .or_insert_with(|| Matrix::zeros(actions[i], actions[j]))[(a[i], a[j])] =
                    payoffs[i][index];
            }
            let lij = blocks.values().map(spectral_norm).fold(0.0, f64::max);
            li_sq += lij * lij;
        }
        l = l.max(li_sq.sqrt());
    }
    (g, l)
}

/// Per-player traces of a self-play run plus the joint profiles.
#[derive(Debug, Clone, PartialEq)]
pub struct PlayRecord {
    pub traces: Vec<Trace>,
    /// `profiles[t-1][i] = x_i^t`.
    pub profiles: Vec<Vec<Vector>>,
}

impl PlayRecord {
    pub fn n(&self) -> usize {
        self.traces.len()
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    /// Mean of player `i`'s strategies under the empirical distribution.
    pub fn average_strategy(&self, i: usize) -> Option<Vector> {
        let first = self.profiles.first()?;
        let mut sum = Vector::zeros(first[i].len());
        for p in &self.profiles {
            sum += &p[i];
        }
        Some(sum / self.profiles.len() as f64)
    }
}

/// Simultaneous play: each round every player commits `x_i^t` from its
/// pre-round state, then receives `g_i^t = -∇_{x_i} u_i(x^t)`.
pub fn self_play(
    game: &SmoothConvexGame,
    learners: &mut [Learner],
    rounds: usize,
) -> Result<PlayRecord> {
    if learners.len() != game.n() {
        return Err(Error::InvalidParameter(format!(
            "{} learners for a {}-player game",
            learners.len(),
            game.n()
        )));
    }
    for (i, (l, s)) in learners.iter().zip(game.sets()).enumerate() {
        if l.set() != s {
            return Err(Error::InvalidParameter(format!(
                "player {i}'s learner set does not match the game set"
            )));
        }
    }
    let mut traces: Vec<Trace> = learners.iter().map(|l| l.empty_trace()).collect();
    let mut profiles = Vec::with_capacity(rounds);
    for t in 1..=rounds {
        let profile = learners
            .iter_mut()
            .map(|l| l.play())
            .collect::<Result<Vec<_>>>()?;
        let mut feedback = Vec::with_capacity(game.n());
        for i in 0..game.n() {
            let g = -game.gradient(i, &profile)?;
            let norm = g.norm();
            if norm > game.g() + CONSTANT_TOL {
                return Err(Error::ConstantsViolated {
                    player: i,
                    round: t,
                    norm,
                    bound: game.g(),
                });
            }
            feedback.push(g);
        }
        for ((l, g), trace) in learners.iter_mut().zip(&feedback).zip(&mut traces) {
            trace.push(l.observe(g)?);
        }
        profiles.push(profile);
    }
    for (l, trace) in learners.iter().zip(&mut traces) {
        trace.set_next_point(l.current().cloned());
    }
    Ok(PlayRecord { traces, profiles })
}

/// `Σ_i Reg_{f_i}` together with the per-player reports.
pub fn social_regret(
    record: &PlayRecord,
    comparators: &[Comparator],
) -> Result<(f64, Vec<RegretReport>)> {
    if comparators.len() != record.n() {
        return Err(Error::InvalidParameter(format!(
            "{} comparators for {} players",
            comparators.len(),
            record.n()
        )));
    }
    let reports = record
        .traces
        .iter()
        .zip(comparators)
        .map(|(t, f)| proximal_regret(t, f))
        .collect::<Result<Vec<_>>>()?;
    Ok((reports.iter().map(|r| r.regret).sum(), reports))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PceGap {
    /// `max_i max_{f in family_i} Reg_f / T`.
    pub epsilon: f64,
    pub player: usize,
    pub comparator_id: String,
    /// Some family was sampled, so `epsilon` is a lower bound.
    pub lower_bound: bool,
}

/// Linearized approximate-equilibrium certificate of the empirical
/// distribution. `families` holds one family per player, or a single family
/// shared by all.
pub fn pce_gap(record: &PlayRecord, families: &[ComparatorFamily]) -> Result<PceGap> {
    if record.is_empty() {
        return Err(Error::EmptyTrace);
    }
    if families.len() != 1 && families.len() != record.n() {
        return Err(Error::InvalidParameter(format!(
            "{} families for {} players",
            families.len(),
            record.n()
        )));
    }
    let horizon = record.len() as f64;
    let mut best: Option<PceGap> = None;
    let mut lower_bound = false;
    for (i, trace) in record.traces.iter().enumerate() {
        let family = &families[if families.len() == 1 { 0 } else { i }];
        let result = family_regret(trace, family)?;
        lower_bound |= result.lower_bound;
        let top = result.max();
        let eps = top.regret / horizon;
        if best.as_ref().is_none_or(|b| eps > b.epsilon) {
            best = Some(PceGap {
                epsilon: eps,
                player: i,
                comparator_id: top.comparator_id.clone(),
                lower_bound: false,
            });
        }
    }
    let mut gap = best.ok_or(Error::EmptyFamily)?;
    gap.lower_bound = lower_bound;
    Ok(gap)
}

/// `P^T` for player `i`, with `g^0 = 0`.
pub fn gradient_variation(record: &PlayRecord, i: usize) -> f64 {
    record.traces[i].gradient_variation()
}
