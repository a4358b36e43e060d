//! Per-round records produced by an online run.

use crate::geometry::{norm_unchecked, ConvexSet, Norm};
use crate::linalg::Vector;

#[derive(Debug, Clone, PartialEq)]
pub struct Round {
    /// 1-based round index.
    pub t: usize,
    /// Point played.
    pub x: Vector,
    /// Gradient feedback received at `x`.
    pub g: Vector,
    pub eta: f64,
    /// OG anchor `w^t` after this round's update.
    pub anchor: Option<Vector>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    set: ConvexSet,
    rounds: Vec<Round>,
    initial_anchor: Option<Vector>,
    next_point: Option<Vector>,
}

impl Trace {
    pub fn new(set: ConvexSet) -> Self {
        Self {
            set,
            rounds: Vec::new(),
            initial_anchor: None,
            next_point: None,
        }
    }

    pub(crate) fn with_initial_anchor(mut self, w0: Option<Vector>) -> Self {
        self.initial_anchor = w0;
        self
    }

    pub(crate) fn push(&mut self, round: Round) {
        debug_assert_eq!(round.t, self.rounds.len() + 1);
        self.rounds.push(round);
    }

    pub(crate) fn set_next_point(&mut self, x: Option<Vector>) {
        self.next_point = x;
    }

    /// Builds a trace from raw rounds, e.g. when replaying recorded play.
    pub fn from_rounds(set: ConvexSet, rounds: Vec<Round>, initial_anchor: Option<Vector>) -> Self {
        Self {
            set,
            rounds,
            initial_anchor,
            next_point: None,
        }
    }

    pub fn set(&self) -> &ConvexSet {
        &self.set
    }

    pub fn rounds(&self) -> &[Round] {
        &self.rounds
    }

    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    /// `w^0` for OG traces.
    pub fn initial_anchor(&self) -> Option<&Vector> {
        self.initial_anchor.as_ref()
    }

    /// `x^{T+1}` when the learner exposes it.
    pub fn next_point(&self) -> Option<&Vector> {
        self.next_point.as_ref()
    }

    /// `w^0, w^1, ..., w^T` when every round carries an anchor.
    pub fn anchors(&self) -> Option<Vec<&Vector>> {
        let mut out = vec![self.initial_anchor.as_ref()?];
        for r in &self.rounds {
            out.push(r.anchor.as_ref()?);
        }
        Some(out)
    }

    pub fn final_eta(&self) -> Option<f64> {
        self.rounds.last().map(|r| r.eta)
    }

    pub fn gradient_sum(&self) -> Vector {
        let mut sum = Vector::zeros(self.set.dim());
        for r in &self.rounds {
            sum += &r.g;
        }
        sum
    }

    /// Largest gradient norm observed.
    pub fn max_gradient_norm(&self, which: Norm) -> f64 {
        self.rounds
            .iter()
            .map(|r| norm_unchecked(&r.g, which))
            .fold(0.0, f64::max)
    }

    /// `||g^t - g^{t-1}||²` for each round, with `g^0 = 0`.
    pub fn variation_terms(&self) -> Vec<f64> {
        let mut prev = Vector::zeros(self.set.dim());
        self.rounds
            .iter()
            .map(|r| {
                let term = (&r.g - &prev).norm_squared();
                prev.clone_from(&r.g);
                term
            })
            .collect()
    }

    /// `P^T = Σ_t ||g^t - g^{t-1}||²`.
    pub fn gradient_variation(&self) -> f64 {
        self.variation_terms().iter().sum()
    }
}
