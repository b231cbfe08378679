use std::collections::VecDeque;

use crate::error::Error;

/// A uniformly sampled sequence of states: `states[k]` is the state at
/// time `t0 + (offset + k)·h`.
///
/// `offset` is nonzero only when a capped iteration dropped its oldest
/// states.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<P> {
    pub t0: f64,
    pub h: f64,
    pub offset: usize,
    pub states: Vec<P>,
}

impl<P: Copy> Trajectory<P> {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Index (step count) of the stored state at position `i`.
    pub fn step_index(&self, i: usize) -> usize {
        self.offset + i
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + self.step_index(i) as f64 * self.h
    }

    pub fn last(&self) -> Option<P> {
        self.states.last().copied()
    }

    /// `(step index, time, state)` triples.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64, P)> + '_ {
        self.states
            .iter()
            .enumerate()
            .map(move |(i, &s)| (self.step_index(i), self.time(i), s))
    }

    /// The last `n` states (or all of them).
    pub fn tail(&self, n: usize) -> &[P] {
        &self.states[self.states.len().saturating_sub(n)..]
    }
}

/// Iteration stopped early: `index` is the step that could not be
/// produced, `partial` holds everything before it.
#[derive(Debug, Clone, PartialEq)]
pub struct IterateError<P> {
    pub index: usize,
    pub error: Error,
    pub partial: Trajectory<P>,
}

impl<P: std::fmt::Debug> std::fmt::Display for IterateError<P> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "iteration stopped at step {}: {}",
            self.index, self.error
        )
    }
}

impl<P: std::fmt::Debug> std::error::Error for IterateError<P> {}

/// Ring buffer keeping the most recent `cap` states.
pub(crate) struct Recorder<P> {
    t0: f64,
    h: f64,
    cap: usize,
    pushed: usize,
    buf: VecDeque<P>,
}

impl<P> Recorder<P> {
    pub(crate) fn new(t0: f64, h: f64, cap: usize, expected: usize) -> Self {
        Recorder {
            t0,
            h,
            cap,
            pushed: 0,
            buf: VecDeque::with_capacity(expected.min(cap)),
        }
    }

    pub(crate) fn push(&mut self, x: P) {
        if self.buf.len() == self.cap {
            self.buf.pop_front();
        }
        self.buf.push_back(x);
        self.pushed += 1;
    }

    pub(crate) fn finish(self) -> Trajectory<P> {
        Trajectory {
            t0: self.t0,
            h: self.h,
            offset: self.pushed - self.buf.len(),
            states: self.buf.into(),
        }
    }
}
