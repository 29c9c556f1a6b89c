//! Squeezed-coherent states of the harmonic oscillator, computed three ways.
//!
//! * [`closedform`]: the exact complex Gaussians in position and momentum space.
//! * [`fockexp`]: the number-basis expansion summed through `L_n^{(−1/2)}`.
//! * [`operators`]: truncated Fock matrices for `a`, `D(α)`, `S(ξ)` and the
//!   operator-built position and momentum eigenvectors.
//!
//! [`identities`] checks the exponential disentangling and reordering identities
//! in 2×2, 3×3 and Fock representations, and [`dynamics`] handles free time
//! evolution, overlaps and animation frames.

// `!(x > 0.0)` is the validation idiom here because it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closedform;
pub mod dynamics;
pub mod error;
pub mod fockexp;
pub mod frame;
pub mod gaussian;
pub mod identities;
pub mod linalg;
pub mod operators;
pub mod parallel;
pub mod quadrature;
pub mod sampled;
pub mod special;
pub mod state;

pub use error::{Error, Result};
pub use frame::OscillatorFrame;
pub use gaussian::{gaussian_norm_and_moments, GaussianMoments, GaussianWaveform};
pub use sampled::{CoordinateKind, FockVector, Method, SampleMeta, SampledWavefunction};
pub use state::SqueezedCoherentSpec;

pub use num_complex::Complex64;
