//! Single-frequency network samples and frequency sweeps.

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::repr::Representation;
use crate::scalar::Real;
use crate::wave::{PortNormalization, WaveConvention};

/// One frequency sample of a network in a given representation.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkPoint<T: Real> {
    frequency: T,
    rep: Representation,
    matrix: ComplexMatrix<T>,
    norm: PortNormalization<T>,
    convention: WaveConvention<T>,
}

impl<T: Real> NetworkPoint<T> {
    pub fn new(
        frequency: T,
        rep: Representation,
        matrix: ComplexMatrix<T>,
        norm: PortNormalization<T>,
        convention: WaveConvention<T>,
    ) -> Result<Self> {
        if !frequency.is_finite() {
            return Err(Error::NonFinite("frequency"));
        }
        if frequency < T::zero() {
            return Err(Error::NonMonotonicFrequency(0));
        }
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: "square parameter matrix".into(),
                got: format!("{}x{}", matrix.rows(), matrix.cols()),
            });
        }
        if !matrix.is_finite() {
            return Err(Error::NonFinite("parameter matrix"));
        }
        let n = matrix.rows();
        rep.check_ports(n)?;
        norm.check_ports(n)?;
        Ok(Self {
            frequency,
            rep,
            matrix,
            norm,
            convention,
        })
    }

    /// A point with uniform real reference impedance and the default
    /// (Kurokawa) wave convention.
    pub fn with_z0(frequency: T, rep: Representation, matrix: ComplexMatrix<T>, z0: T) -> Result<Self> {
        let norm = PortNormalization::uniform_real(matrix.rows(), z0)?;
        Self::new(frequency, rep, matrix, norm, WaveConvention::default())
    }

    pub fn frequency(&self) -> T {
        self.frequency
    }

    pub fn rep(&self) -> Representation {
        self.rep
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    pub fn norm(&self) -> &PortNormalization<T> {
        &self.norm
    }

    pub fn convention(&self) -> &WaveConvention<T> {
        &self.convention
    }

    pub fn n_ports(&self) -> usize {
        self.matrix.rows()
    }

    /// Same metadata, different representation and matrix. Used by the
    /// conversion routines, which have already checked the shape.
    pub(crate) fn with_matrix(&self, rep: Representation, matrix: ComplexMatrix<T>) -> Self {
        Self {
            frequency: self.frequency,
            rep,
            matrix,
            norm: self.norm.clone(),
            convention: self.convention,
        }
    }
}

/// Ordered list of network points sharing port count, representation,
/// normalization and wave convention.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkSweep<T: Real> {
    points: Vec<NetworkPoint<T>>,
}

impl<T: Real> NetworkSweep<T> {
    pub fn new(points: Vec<NetworkPoint<T>>) -> Result<Self> {
        if let Some(first) = points.first() {
            for (idx, pair) in points.windows(2).enumerate() {
                if pair[1].frequency <= pair[0].frequency {
                    return Err(Error::NonMonotonicFrequency(idx + 1));
                }
            }
            for p in &points[1..] {
                if p.n_ports() != first.n_ports() {
                    return Err(Error::NonUniformSweep("port count"));
                }
                if p.rep != first.rep {
                    return Err(Error::NonUniformSweep("representation"));
                }
                if p.norm != first.norm {
                    return Err(Error::NonUniformSweep("normalization"));
                }
                if p.convention != first.convention {
                    return Err(Error::NonUniformSweep("wave convention"));
                }
            }
        }
        Ok(Self { points })
    }

    /// Builds a sweep from parallel frequency and matrix lists.
    pub fn from_matrices(
        frequencies: &[T],
        rep: Representation,
        matrices: Vec<ComplexMatrix<T>>,
        norm: PortNormalization<T>,
        convention: WaveConvention<T>,
    ) -> Result<Self> {
        if frequencies.len() != matrices.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} matrices", frequencies.len()),
                got: format!("{}", matrices.len()),
            });
        }
        let points = frequencies
            .iter()
            .zip(matrices)
            .map(|(&f, m)| NetworkPoint::new(f, rep, m, norm.clone(), convention))
            .collect::<Result<Vec<_>>>()?;
        Self::new(points)
    }

    pub fn empty() -> Self {
        Self { points: Vec::new() }
    }

    pub fn points(&self) -> &[NetworkPoint<T>] {
        &self.points
    }

    pub fn into_points(self) -> Vec<NetworkPoint<T>> {
        self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn frequencies(&self) -> Vec<T> {
        self.points.iter().map(|p| p.frequency).collect()
    }

    pub fn rep(&self) -> Option<Representation> {
        self.points.first().map(|p| p.rep)
    }

    pub fn n_ports(&self) -> Option<usize> {
        self.points.first().map(|p| p.n_ports())
    }

    pub fn norm(&self) -> Option<&PortNormalization<T>> {
        self.points.first().map(|p| &p.norm)
    }
}
