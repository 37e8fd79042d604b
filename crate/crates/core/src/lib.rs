//! Conversions between electrical network representations.
//!
//! Z, Y, G, H, A (ABCD), B, S and T parameters are all treated the same way:
//! each is defined by an ordered list of output and input port signals, and
//! any conversion is a linear fractional transform whose coefficient matrix
//! is generated from those lists (see [`transform`]).
//!
//! All numerics are generic over [`Real`]; the `*64` aliases below cover
//! the usual double-precision case.

pub mod error;
pub mod matrix;
pub mod network;
pub mod oracle;
pub mod repr;
pub mod scalar;
pub mod touchstone;
pub mod transform;
pub mod wave;

pub use error::{Error, Result};
pub use matrix::ComplexMatrix;
pub use network::{NetworkPoint, NetworkSweep};
pub use repr::{descriptor, Representation, RepresentationDescriptor, SignalKind, SignalRef};
pub use scalar::{Cx, Real};
pub use touchstone::{DataFormat, FreqUnit, TouchstoneError, TouchstoneOptions};
pub use transform::{
    a_to_b, build_p, cascade, cascade_sweeps, convert, convert_sweep, moebius, stacking_matrix, through_like, TransformMatrix,
};
pub use wave::{vi_to_waves, wave_k, waves_to_vi, PortNormalization, WaveConvention, WaveKind};

pub type ComplexMatrix64 = ComplexMatrix<f64>;
pub type ComplexMatrix32 = ComplexMatrix<f32>;
pub type NetworkPoint64 = NetworkPoint<f64>;
pub type NetworkPoint32 = NetworkPoint<f32>;
pub type NetworkSweep64 = NetworkSweep<f64>;
pub type NetworkSweep32 = NetworkSweep<f32>;
pub type PortNormalization64 = PortNormalization<f64>;
pub type WaveConvention64 = WaveConvention<f64>;
pub type TransformMatrix64 = TransformMatrix<f64>;
