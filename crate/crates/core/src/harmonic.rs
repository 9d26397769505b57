//! Harmonic regressors and synthetic oscillating signals.
//!
//! A harmonic regressor stacks cosine/sine pairs at h+1 known frequencies
//! evaluated at an integer step k:
//!
//! ```text
//! phi_k = [cos(q0 k), sin(q0 k), ..., cos(qh k), sin(qh k)]
//! ```
//!
//! Its squared Euclidean norm is h+1 at every step, independent of k — the
//! estimators rely on that constant excitation level. Signals are synthesized
//! as `y_k = phi_k' theta*(k) + noise` with piecewise-constant true parameters
//! so tracking experiments can inject step changes.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

/// Construction-time validation failures for grids and trajectories.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarmonicError {
    #[error("frequencies: at least one frequency is required")]
    EmptyGrid,
    #[error("frequencies: value {value} at index {index} is outside the open interval (0, pi)")]
    FrequencyOutOfRange { index: usize, value: f64 },
    #[error("frequencies: value {value} is repeated at indices {first} and {second}")]
    DuplicateFrequency {
        value: f64,
        first: usize,
        second: usize,
    },
    #[error("segments: at least one segment is required")]
    EmptyTrajectory,
    #[error("segments: first segment must start at step 1, got {0}")]
    TrajectoryStart(u64),
    #[error("segments: start steps must be strictly increasing ({previous} then {current})")]
    UnsortedSegments { previous: u64, current: u64 },
    #[error("segments: segment {index} has parameter length {got}, expected {expected}")]
    SegmentLength {
        index: usize,
        got: usize,
        expected: usize,
    },
}

/// The known frequencies q0..qh, in radians per sample.
///
/// All frequencies must lie strictly inside (0, pi) and be pairwise distinct;
/// a zero or pi frequency would make one sine column identically zero and
/// destroy persistent excitation.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    frequencies: Vec<f64>,
}

impl FrequencyGrid {
    pub fn new(frequencies: Vec<f64>) -> Result<Self, HarmonicError> {
        if frequencies.is_empty() {
            return Err(HarmonicError::EmptyGrid);
        }
        for (index, &value) in frequencies.iter().enumerate() {
            if !(value > 0.0 && value < PI) {
                return Err(HarmonicError::FrequencyOutOfRange { index, value });
            }
        }
        for i in 0..frequencies.len() {
            for j in i + 1..frequencies.len() {
                if frequencies[i] == frequencies[j] {
                    return Err(HarmonicError::DuplicateFrequency {
                        value: frequencies[i],
                        first: i,
                        second: j,
                    });
                }
            }
        }
        Ok(Self { frequencies })
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    /// Number of frequencies, h+1.
    pub fn frequency_count(&self) -> usize {
        self.frequencies.len()
    }

    /// Parameter dimension 2(h+1): one cosine and one sine weight per frequency.
    pub fn param_dim(&self) -> usize {
        2 * self.frequencies.len()
    }
}

/// The regressor phi_k; length 2(h+1), cos/sin interleaved per frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressorVector {
    pub values: Vec<f64>,
}

impl RegressorVector {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn dot(&self, theta: &[f64]) -> f64 {
        crate::numerics::dot(&self.values, theta)
    }

    pub fn norm_sq(&self) -> f64 {
        crate::numerics::dot(&self.values, &self.values)
    }
}

/// Evaluate the harmonic regressor at step `k`.
pub fn eval_regressor(grid: &FrequencyGrid, k: u64) -> RegressorVector {
    let t = k as f64;
    let mut values = Vec::with_capacity(grid.param_dim());
    for &q in grid.frequencies() {
        let (s, c) = (q * t).sin_cos();
        values.push(c);
        values.push(s);
    }
    RegressorVector { values }
}

/// Piecewise-constant true parameters theta*(k).
///
/// Each segment holds from its start step until the next segment begins;
/// instantaneous steps are the sharpest change events a tracking run can see.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterTrajectory {
    segments: Vec<(u64, Vec<f64>)>,
}

impl ParameterTrajectory {
    pub fn new(segments: Vec<(u64, Vec<f64>)>) -> Result<Self, HarmonicError> {
        if segments.is_empty() {
            return Err(HarmonicError::EmptyTrajectory);
        }
        if segments[0].0 != 1 {
            return Err(HarmonicError::TrajectoryStart(segments[0].0));
        }
        let expected = segments[0].1.len();
        for (index, (start, theta)) in segments.iter().enumerate() {
            if theta.len() != expected {
                return Err(HarmonicError::SegmentLength {
                    index,
                    got: theta.len(),
                    expected,
                });
            }
            if index > 0 && *start <= segments[index - 1].0 {
                return Err(HarmonicError::UnsortedSegments {
                    previous: segments[index - 1].0,
                    current: *start,
                });
            }
        }
        Ok(Self { segments })
    }

    /// Single segment holding `theta` from step 1 onward.
    pub fn constant(theta: Vec<f64>) -> Self {
        Self {
            segments: vec![(1, theta)],
        }
    }

    pub fn segments(&self) -> &[(u64, Vec<f64>)] {
        &self.segments
    }

    pub fn param_dim(&self) -> usize {
        self.segments[0].1.len()
    }

    /// True parameters in effect at step `k` (k >= 1).
    pub fn theta_at(&self, k: u64) -> &[f64] {
        let mut current = &self.segments[0].1;
        for (start, theta) in &self.segments {
            if *start <= k {
                current = theta;
            } else {
                break;
            }
        }
        current
    }
}

/// One measured step: the regressor and the scalar output.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalSample {
    pub k: u64,
    pub phi: RegressorVector,
    pub y: f64,
}

/// Synthesize `y_k = phi_k' theta*(k) + eps_k` for k = 1..=steps.
///
/// Noise is Gaussian with the given standard deviation, drawn from a
/// ChaCha8 stream seeded with `seed`; the same seed reproduces the exact
/// same sequence. With `noise_std = 0` the outputs are exact.
pub fn synthesize_signal(
    grid: &FrequencyGrid,
    trajectory: &ParameterTrajectory,
    steps: u64,
    noise_std: f64,
    seed: u64,
) -> Vec<SignalSample> {
    assert!(steps >= 1, "steps must be at least 1");
    assert!(
        noise_std >= 0.0 && noise_std.is_finite(),
        "noise_std must be finite and non-negative"
    );
    assert_eq!(
        trajectory.param_dim(),
        grid.param_dim(),
        "trajectory dimension must match the grid"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = (noise_std > 0.0).then(|| Normal::new(0.0, noise_std).expect("valid std dev"));
    (1..=steps)
        .map(|k| {
            let phi = eval_regressor(grid, k);
            let mut y = phi.dot(trajectory.theta_at(k));
            if let Some(noise) = &noise {
                y += noise.sample(&mut rng);
            }
            SignalSample { k, phi, y }
        })
        .collect()
}
