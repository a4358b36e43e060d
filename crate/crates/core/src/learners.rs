//! Online gradient descent, optimistic gradient and mirror descent as
//! single-step state machines.

use crate::bregman::MirrorMap;
use crate::error::{Error, Result};
use crate::geometry::{ConvexSet, TOL};
use crate::linalg::{check_dim, check_finite, Vector};
use crate::trace::{Round, Trace};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSchedule {
    Constant(f64),
    /// `η_t = 1/√t`.
    InverseSqrt,
    /// Fixed `η = √((D² + 2B_f)/(G²T))`.
    Optimized {
        d: f64,
        bf: f64,
        g: f64,
        horizon: usize,
    },
}

impl StepSchedule {
    pub fn constant(eta: f64) -> Result<Self> {
        let s = Self::Constant(eta);
        s.validate()?;
        Ok(s)
    }

    pub fn optimized(d: f64, bf: f64, g: f64, horizon: usize) -> Result<Self> {
        let s = Self::Optimized { d, bf, g, horizon };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Constant(eta) if !(eta > 0.0 && eta.is_finite()) => Err(Error::InvalidParameter(
                format!("constant step size {eta} must be positive and finite"),
            )),
            Self::Optimized { d, bf, g, horizon } => {
                if !(d >= 0.0 && bf >= 0.0 && g > 0.0 && horizon >= 1)
                    || !(d * d + 2.0 * bf > 0.0)
                    || !(d.is_finite() && bf.is_finite() && g.is_finite())
                {
                    return Err(Error::InvalidParameter(format!(
                        "optimized schedule needs D, B_f >= 0 (not both zero), G > 0, T >= 1; got D={d}, B_f={bf}, G={g}, T={horizon}"
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Step size for 1-based round `t`.
    pub fn eta(&self, t: usize) -> f64 {
        match *self {
            Self::Constant(eta) => eta,
            Self::InverseSqrt => 1.0 / (t.max(1) as f64).sqrt(),
            Self::Optimized { d, bf, g, horizon } => {
                ((d * d + 2.0 * bf) / (g * g * horizon as f64)).sqrt()
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        !matches!(self, Self::InverseSqrt)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum State {
    Gd {
        x: Vector,
    },
    Og {
        w: Vector,
        g_prev: Vector,
        /// `x^t` once predicted for the current round.
        predicted: Option<Vector>,
    },
    Md {
        x: Vector,
        map: MirrorMap,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LearnerKind {
    Gd,
    Og,
    Md,
}

/// An online learner over a fixed feasible set. Starts at the set's center
/// unless overridden.
#[derive(Debug, Clone, PartialEq)]
pub struct Learner {
    set: ConvexSet,
    schedule: StepSchedule,
    t: usize,
    state: State,
}

impl Learner {
    pub fn gd(set: ConvexSet, schedule: StepSchedule) -> Result<Self> {
        schedule.validate()?;
        let x = set.center();
        Ok(Self {
            set,
            schedule,
            t: 1,
            state: State::Gd { x },
        })
    }

    pub fn og(set: ConvexSet, schedule: StepSchedule) -> Result<Self> {
        schedule.validate()?;
        let w = set.center();
        let g_prev = Vector::zeros(set.dim());
        Ok(Self {
            set,
            schedule,
            t: 1,
            state: State::Og {
                w,
                g_prev,
                predicted: None,
            },
        })
    }

    pub fn md(map: MirrorMap, schedule: StepSchedule) -> Result<Self> {
        schedule.validate()?;
        let set = map.domain().clone();
        let x = set.center();
        Ok(Self {
            set,
            schedule,
            t: 1,
            state: State::Md { x, map },
        })
    }

    /// Overrides `x^1` (GD, MD) or `w^0` (OG). Only valid before round 1.
    pub fn with_start(mut self, start: Vector) -> Result<Self> {
        check_dim(&start, self.set.dim())?;
        check_finite(&start)?;
        if self.t != 1 {
            return Err(Error::Protocol("start point set after play began".into()));
        }
        if !self.set.contains(&start, TOL) {
            return Err(Error::InvalidParameter(
                "start point is not in the feasible set".into(),
            ));
        }
        match &mut self.state {
            State::Gd { x } => *x = start,
            State::Og { w, .. } => *w = start,
            State::Md { x, map } => {
                if map.gradient(&start).is_err() {
                    return Err(Error::BoundaryDivergence);
                }
                *x = start
            }
        }
        Ok(self)
    }

    pub fn kind(&self) -> LearnerKind {
        match self.state {
            State::Gd { .. } => LearnerKind::Gd,
            State::Og { .. } => LearnerKind::Og,
            State::Md { .. } => LearnerKind::Md,
        }
    }

    pub fn set(&self) -> &ConvexSet {
        &self.set
    }

    pub fn schedule(&self) -> &StepSchedule {
        &self.schedule
    }

    /// Index of the round about to be played (1-based).
    pub fn round(&self) -> usize {
        self.t
    }

    pub fn eta(&self) -> f64 {
        self.schedule.eta(self.t)
    }

    /// OG anchor `w^{t-1}`.
    pub fn anchor(&self) -> Option<&Vector> {
        match &self.state {
            State::Og { w, .. } => Some(w),
            _ => None,
        }
    }

    /// Current iterate for GD and MD.
    pub fn current(&self) -> Option<&Vector> {
        match &self.state {
            State::Gd { x } | State::Md { x, .. } => Some(x),
            State::Og { .. } => None,
        }
    }

    fn check_feedback(&self, g: &Vector) -> Result<()> {
        check_dim(g, self.set.dim())?;
        check_finite(g)
    }

    /// `x ← Π[x - η_t g]`.
    pub fn gd_step(&mut self, g: &Vector) -> Result<()> {
        self.check_feedback(g)?;
        let eta = self.eta();
        match &mut self.state {
            State::Gd { x } => {
                *x = self.set.project_unchecked(&(&*x - g * eta));
            }
            _ => return Err(Error::Protocol("gd_step called on a non-GD learner".into())),
        }
        self.t += 1;
        Ok(())
    }

    /// `x ← argmin <η_t g, ·> + D_φ(·|x)`.
    pub fn md_step(&mut self, g: &Vector) -> Result<()> {
        self.check_feedback(g)?;
        let eta = self.eta();
        match &mut self.state {
            State::Md { x, map } => {
                *x = map.md_argmin(x, g, eta)?;
            }
            _ => return Err(Error::Protocol("md_step called on a non-MD learner".into())),
        }
        self.t += 1;
        Ok(())
    }

    /// `x^t = Π[w^{t-1} - η_t g^{t-1}]`; must be called exactly once per round.
    pub fn og_predict(&mut self) -> Result<Vector> {
        let eta = self.eta();
        match &mut self.state {
            State::Og {
                w,
                g_prev,
                predicted,
            } => {
                if predicted.is_some() {
                    return Err(Error::Protocol(
                        "og_predict called twice in one round".into(),
                    ));
                }
                let x = self.set.project_unchecked(&(&*w - &*g_prev * eta));
                *predicted = Some(x.clone());
                Ok(x)
            }
            _ => Err(Error::Protocol(
                "og_predict called on a non-OG learner".into(),
            )),
        }
    }

    /// `w^t = Π[w^{t-1} - η_t g^t]`, then `g^{t-1} ← g^t`.
    pub fn og_update(&mut self, g: &Vector) -> Result<()> {
        self.check_feedback(g)?;
        let eta = self.eta();
        match &mut self.state {
            State::Og {
                w,
                g_prev,
                predicted,
            } => {
                if predicted.take().is_none() {
                    return Err(Error::Protocol("og_update called before og_predict".into()));
                }
                *w = self.set.project_unchecked(&(&*w - g * eta));
                g_prev.clone_from(g);
            }
            _ => {
                return Err(Error::Protocol(
                    "og_update called on a non-OG learner".into(),
                ))
            }
        }
        self.t += 1;
        Ok(())
    }

    /// The point to play this round.
    pub fn play(&mut self) -> Result<Vector> {
        match &self.state {
            State::Gd { x } | State::Md { x, .. } => Ok(x.clone()),
            State::Og {
                predicted: Some(x), ..
            } => Ok(x.clone()),
            State::Og { .. } => self.og_predict(),
        }
    }

    /// Feeds back `g` for the point returned by `play` and returns the round
    /// record.
    pub fn observe(&mut self, g: &Vector) -> Result<Round> {
        let t = self.t;
        let eta = self.eta();
        let x = match &self.state {
            State::Gd { x } | State::Md { x, .. } => x.clone(),
            State::Og {
                predicted: Some(x), ..
            } => x.clone(),
            State::Og {
                predicted: None, ..
            } => {
                return Err(Error::Protocol(
                    "feedback received before the round was played".into(),
                ))
            }
        };
        match self.kind() {
            LearnerKind::Gd => self.gd_step(g)?,
            LearnerKind::Og => self.og_update(g)?,
            LearnerKind::Md => self.md_step(g)?,
        }
        Ok(Round {
            t,
            x,
            g: g.clone(),
            eta,
            anchor: self.anchor().cloned(),
        })
    }

    /// Empty trace carrying this learner's set and initial anchor.
    pub fn empty_trace(&self) -> Trace {
        Trace::new(self.set.clone()).with_initial_anchor(self.anchor().cloned())
    }
}

/// Maps `(t, x^t)` to the gradient feedback `g^t`.
pub trait LossOracle {
    fn gradient(&mut self, t: usize, x: &Vector) -> Result<Vector>;
}

impl<F> LossOracle for F
where
    F: FnMut(usize, &Vector) -> Result<Vector>,
{
    fn gradient(&mut self, t: usize, x: &Vector) -> Result<Vector> {
        self(t, x)
    }
}

/// Runs the online protocol for `rounds` rounds.
pub fn run<O: LossOracle + ?Sized>(
    learner: &mut Learner,
    oracle: &mut O,
    rounds: usize,
) -> Result<Trace> {
    let mut trace = learner.empty_trace();
    for _ in 0..rounds {
        let x = learner.play()?;
        let g = oracle.gradient(learner.round(), &x)?;
        trace.push(learner.observe(&g)?);
    }
    trace.set_next_point(learner.current().cloned());
    Ok(trace)
}
