//! Brute-force reference computations for tests and verification.
//!
//! Everything here is direct summation plus dense inversion — deliberately
//! slow and structure-free so it cannot share bugs with the recursive gain
//! updates it is used to check.

use crate::harmonic::SignalSample;
use crate::numerics::{dot, invert_sym, SingularError, SymMatrix};
use crate::window::{SampleWindow, UpdatePair};

/// Inverse of the directly summed window information matrix.
///
/// Fails when the window is not persistently exciting. Panics unless the
/// window is full.
pub fn batch_gain(window: &SampleWindow, lambda: f64) -> Result<SymMatrix, SingularError> {
    assert!(window.is_full(), "window must be full");
    invert_sym(&window.direct_information_matrix(lambda))
}

/// Inverse of the exponentially weighted sum over an entire sample history,
/// weights anchored at the last sample.
///
/// This is the information matrix implied by the rank-one recursion; it needs
/// at least as many samples as the parameter dimension to stand a chance of
/// being invertible.
pub fn full_history_gain(
    samples: &[SignalSample],
    lambda: f64,
) -> Result<SymMatrix, SingularError> {
    assert!(!samples.is_empty(), "history must be nonempty");
    assert!(lambda > 0.0 && lambda <= 1.0, "lambda must be in (0, 1]");
    let dim = samples[0].phi.dim();
    assert!(
        samples.len() >= dim,
        "need at least {dim} samples for a {dim}-dimensional history"
    );
    let newest = samples.last().expect("nonempty").k;
    let mut a = SymMatrix::zeros(dim);
    for sample in samples {
        let weight = lambda.powi((newest - sample.k) as i32);
        a.add_scaled_outer(weight, &sample.phi.values);
    }
    invert_sym(&a)
}

/// Interpolation residuals of the rank-two law at both window endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalityReport {
    pub step: u64,
    /// |q_new' theta - y_tilde[0]|.
    pub residual_new: f64,
    /// |q_old' theta - y_tilde[1]|.
    pub residual_old: f64,
}

impl OrthogonalityReport {
    pub fn max_residual(&self) -> f64 {
        self.residual_new.max(self.residual_old)
    }
}

/// Measure how well `theta` interpolates both endpoints of an update pair.
pub fn orthogonality_report(pair: &UpdatePair, theta: &[f64]) -> OrthogonalityReport {
    OrthogonalityReport {
        step: pair.k,
        residual_new: (pair.q_new.dot(theta) - pair.y_tilde[0]).abs(),
        residual_old: (dot(&pair.q_old, theta) - pair.y_tilde[1]).abs(),
    }
}
