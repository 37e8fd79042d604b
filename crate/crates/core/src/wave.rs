//! Port normalization and the voltage/current ↔ wave relations.
//!
//! Waves are `a = k(V + Z0·I)` and `b = k(V − Z0·I)` with no conjugation of
//! `Z0`. Two choices of `k` are supported, see [`WaveKind`].

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{cx, is_finite, Cx, Real};

/// Which scaling constant `k` the waves use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum WaveKind {
    /// `k = 1 / (2·√Re{Z0})`.
    #[default]
    Kurokawa,
    /// `k = α·√Re{Z0} / (2·|Z0|)`.
    Traveling,
}

/// Wave definition: the `k` formula and the unit-modulus phase `alpha`
/// (only read by [`WaveKind::Traveling`]).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaveConvention<T: Real> {
    kind: WaveKind,
    alpha: Cx<T>,
}

impl<T: Real> WaveConvention<T> {
    pub fn kurokawa() -> Self {
        Self {
            kind: WaveKind::Kurokawa,
            alpha: Cx::one(),
        }
    }

    pub fn traveling(alpha: Cx<T>) -> Result<Self> {
        Self::new(WaveKind::Traveling, alpha)
    }

    pub fn new(kind: WaveKind, alpha: Cx<T>) -> Result<Self> {
        if !is_finite(&alpha) {
            return Err(Error::NonFinite("alpha"));
        }
        let modulus = alpha.norm();
        if (modulus - T::one()).abs() > T::unit_tolerance() {
            return Err(Error::NonUnitAlpha(modulus.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { kind, alpha })
    }

    pub fn kind(&self) -> WaveKind {
        self.kind
    }

    pub fn alpha(&self) -> Cx<T> {
        self.alpha
    }
}

impl<T: Real> Default for WaveConvention<T> {
    fn default() -> Self {
        Self::kurokawa()
    }
}

/// Wave scaling constant `k` for one port.
pub fn wave_k<T: Real>(convention: &WaveConvention<T>, z0: Cx<T>) -> Result<Cx<T>> {
    check_z0(z0)?;
    let root = z0.re.sqrt();
    let two = T::lit(2.0);
    Ok(match convention.kind {
        WaveKind::Kurokawa => cx(T::one() / (two * root), T::zero()),
        WaveKind::Traveling => convention.alpha * (root / (two * z0.norm())),
    })
}

/// Incident and reflected wave `(a, b)` from port voltage and current.
#[inline]
pub fn vi_to_waves<T: Real>(v: Cx<T>, i: Cx<T>, z0: Cx<T>, k: Cx<T>) -> (Cx<T>, Cx<T>) {
    let zi = z0 * i;
    (k * (v + zi), k * (v - zi))
}

/// Port voltage and current `(v, i)` from incident and reflected wave.
pub fn waves_to_vi<T: Real>(a: Cx<T>, b: Cx<T>, z0: Cx<T>, k: Cx<T>) -> Result<(Cx<T>, Cx<T>)> {
    if k.is_zero() {
        return Err(Error::ZeroK);
    }
    if z0.is_zero() {
        return Err(Error::ZeroImpedance);
    }
    let half_over_k: Cx<T> = Cx::<T>::one() / (k * T::lit(2.0));
    let y0: Cx<T> = Cx::<T>::one() / z0;
    Ok(((a + b) * half_over_k, (y0 * a - y0 * b) * half_over_k))
}

fn check_z0<T: Real>(z0: Cx<T>) -> Result<()> {
    if !is_finite(&z0) {
        return Err(Error::NonFinite("normalization impedance"));
    }
    if z0.re <= T::zero() {
        return Err(Error::NonPositiveRealPart {
            re: z0.re.to_f64().unwrap_or(f64::NAN),
            im: z0.im.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

/// Per-port reference impedances.
#[derive(Clone, Debug, PartialEq)]
pub struct PortNormalization<T: Real> {
    z0: Vec<Cx<T>>,
}

impl<T: Real> PortNormalization<T> {
    pub fn new(z0: Vec<Cx<T>>) -> Result<Self> {
        for &z in &z0 {
            check_z0(z)?;
        }
        Ok(Self { z0 })
    }

    /// The same impedance on every port.
    pub fn uniform(n_ports: usize, z0: Cx<T>) -> Result<Self> {
        Self::new(vec![z0; n_ports])
    }

    pub fn uniform_real(n_ports: usize, r: T) -> Result<Self> {
        Self::uniform(n_ports, cx(r, T::zero()))
    }

    pub fn n_ports(&self) -> usize {
        self.z0.len()
    }

    pub fn z0(&self) -> &[Cx<T>] {
        &self.z0
    }

    /// `k` for every port under `convention`.
    pub fn k(&self, convention: &WaveConvention<T>) -> Vec<Cx<T>> {
        self.z0
            .iter()
            .map(|&z| wave_k(convention, z).expect("validated at construction"))
            .collect()
    }

    /// `Some(r)` when every port uses the same purely real impedance `r`.
    pub fn uniform_real_value(&self) -> Option<T> {
        let first = *self.z0.first()?;
        let same = self.z0.iter().all(|z| *z == first);
        (same && first.im.is_zero()).then_some(first.re)
    }

    pub fn check_ports(&self, n_ports: usize) -> Result<()> {
        if self.z0.len() == n_ports {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: format!("{n_ports} normalization impedances"),
                got: format!("{}", self.z0.len()),
            })
        }
    }
}
