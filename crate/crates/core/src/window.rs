//! Sliding window over the last w samples.
//!
//! The window produces two things: the update pair (the incoming regressor
//! plus the sqrt(lambda^w)-weighted evicted regressor together with the
//! synthetic output they must interpolate), and the direct windowed
//! information matrix
//!
//! ```text
//! A_k = sum_{j=k-w+1..k} lambda^(k-j) phi_j phi_j'
//! ```
//!
//! computed by plain summation. Moving the window one step is equivalent to
//! `A_k = lambda A_{k-1} + q_new q_new' - q_old q_old'`; tests cross-check the
//! recursion against the direct sum.

use std::collections::VecDeque;

use thiserror::Error;

use crate::harmonic::{RegressorVector, SignalSample};
use crate::numerics::{SymMatrix, Vec2};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WindowError {
    #[error("sample step {got} is not consecutive with the window (expected {expected})")]
    NonConsecutiveStep { expected: u64, got: u64 },
    #[error(
        "window misaligned: current step {current} minus evicted step {evicted} must equal the window size {w}"
    )]
    WindowMisaligned {
        current: u64,
        evicted: u64,
        w: usize,
    },
}

/// Ring buffer of the most recent samples, oldest first.
///
/// Stores raw samples only; forgetting weights are computed on demand so a
/// reconfigured lambda can never disagree with stored data.
#[derive(Debug, Clone)]
pub struct SampleWindow {
    capacity: usize,
    buf: VecDeque<SignalSample>,
}

impl SampleWindow {
    /// Panics if `capacity < 2`.
    pub fn new(capacity: usize) -> Self {
        assert!(capacity >= 2, "window size must be at least 2");
        Self {
            capacity,
            buf: VecDeque::with_capacity(capacity + 1),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.buf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buf.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.buf.len() == self.capacity
    }

    pub fn newest_step(&self) -> Option<u64> {
        self.buf.back().map(|s| s.k)
    }

    pub fn oldest(&self) -> Option<&SignalSample> {
        self.buf.front()
    }

    /// Stored samples, oldest first.
    pub fn samples(&self) -> impl Iterator<Item = &SignalSample> {
        self.buf.iter()
    }

    /// Append a sample; returns the evicted oldest sample once the buffer
    /// is full. Steps must arrive consecutively.
    pub fn push(&mut self, sample: SignalSample) -> Result<Option<SignalSample>, WindowError> {
        if let Some(last) = self.buf.back() {
            if sample.k != last.k + 1 {
                return Err(WindowError::NonConsecutiveStep {
                    expected: last.k + 1,
                    got: sample.k,
                });
            }
        }
        self.buf.push_back(sample);
        if self.buf.len() > self.capacity {
            Ok(self.buf.pop_front())
        } else {
            Ok(None)
        }
    }

    /// Direct (non-recursive) windowed information matrix with exponential
    /// forgetting, weights anchored at the newest stored step.
    pub fn direct_information_matrix(&self, lambda: f64) -> SymMatrix {
        assert!(!self.buf.is_empty(), "window is empty");
        assert!(lambda > 0.0 && lambda <= 1.0, "lambda must be in (0, 1]");
        let newest = self.buf.back().expect("nonempty").k;
        let dim = self.buf.back().expect("nonempty").phi.dim();
        let mut a = SymMatrix::zeros(dim);
        for sample in &self.buf {
            let weight = lambda.powi((newest - sample.k) as i32);
            a.add_scaled_outer(weight, &sample.phi.values);
        }
        a
    }
}

/// The two-column update: new data first, downdated data second, matching
/// the fixed signature diag[1, -1], plus the synthetic output.
#[derive(Debug, Clone, PartialEq)]
pub struct UpdatePair {
    /// Step of the incoming sample.
    pub k: u64,
    /// phi_k, weight one.
    pub q_new: RegressorVector,
    /// sqrt(lambda^w) * phi_{k-w}; the lowest-priority data leaving the window.
    pub q_old: Vec<f64>,
    /// [y_k, sqrt(lambda^w) * y_{k-w}].
    pub y_tilde: Vec2,
}

/// Build the update pair from the incoming and evicted samples.
pub fn make_update_pair(
    current: &SignalSample,
    evicted: &SignalSample,
    lambda: f64,
    w: usize,
) -> Result<UpdatePair, WindowError> {
    assert!(lambda > 0.0 && lambda <= 1.0, "lambda must be in (0, 1]");
    if current.k.checked_sub(evicted.k) != Some(w as u64) {
        return Err(WindowError::WindowMisaligned {
            current: current.k,
            evicted: evicted.k,
            w,
        });
    }
    let scale = lambda.powi(w as i32).sqrt();
    Ok(UpdatePair {
        k: current.k,
        q_new: current.phi.clone(),
        q_old: evicted.phi.values.iter().map(|v| scale * v).collect(),
        y_tilde: [current.y, scale * evicted.y],
    })
}
