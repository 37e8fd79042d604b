//! Definitional sampling oracle.
//!
//! A network given in one representation is excited with random input
//! vectors; each response is expanded into the full set of port signals
//! `(V, I, a, b)`. Any other representation can then be recovered by
//! reading its own input/output signals off those records and fitting a
//! matrix by least squares. Nothing here touches [`crate::transform`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{least_squares, ComplexMatrix};
use crate::repr::{descriptor, Representation, SignalKind, SignalRef};
use crate::scalar::{Cx, Real};
use crate::wave::{vi_to_waves, waves_to_vi, PortNormalization, WaveConvention};

/// One consistent assignment of every port signal.
#[derive(Clone, Debug, PartialEq)]
pub struct PortSignalSample<T: Real> {
    pub v: Vec<Cx<T>>,
    pub i: Vec<Cx<T>>,
    pub a: Vec<Cx<T>>,
    pub b: Vec<Cx<T>>,
}

impl<T: Real> PortSignalSample<T> {
    /// Value of a signed signal reference.
    pub fn get(&self, sig: &SignalRef) -> Cx<T> {
        let p = sig.port - 1;
        let raw = match sig.kind {
            SignalKind::V => self.v[p],
            SignalKind::I => self.i[p],
            SignalKind::A => self.a[p],
            SignalKind::B => self.b[p],
        };
        if sig.sign < 0 {
            -raw
        } else {
            raw
        }
    }

    pub fn n_ports(&self) -> usize {
        self.v.len()
    }
}

/// Draws `2N` random excitations of the network `r` (given in `rep`) and
/// returns the full port-signal record of each. Deterministic in `seed`.
pub fn sample_network<T: Real>(
    rep: Representation,
    r: &ComplexMatrix<T>,
    norm: &PortNormalization<T>,
    convention: &WaveConvention<T>,
    seed: u64,
) -> Result<Vec<PortSignalSample<T>>> {
    let n = norm.n_ports();
    if r.rows() != n || r.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("{n}x{n} parameter matrix"),
            got: format!("{}x{}", r.rows(), r.cols()),
        });
    }
    let desc = descriptor(rep, n)?;
    let k = norm.k(convention);
    let z0 = norm.z0();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tau = T::TAU();

    (0..2 * n)
        .map(|_| {
            let u = ComplexMatrix::from_fn(n, 1, |_, _| Cx::from_polar(T::one(), tau * T::lit(rng.gen::<f64>())));
            let o = r * &u;

            let mut v = vec![None; n];
            let mut i = vec![None; n];
            let mut a = vec![None; n];
            let mut b = vec![None; n];
            let assigned = desc
                .outputs
                .iter()
                .zip(o.as_slice())
                .chain(desc.inputs.iter().zip(u.as_slice()));
            for (sig, &value) in assigned {
                let value = if sig.sign < 0 { -value } else { value };
                let slot = match sig.kind {
                    SignalKind::V => &mut v[sig.port - 1],
                    SignalKind::I => &mut i[sig.port - 1],
                    SignalKind::A => &mut a[sig.port - 1],
                    SignalKind::B => &mut b[sig.port - 1],
                };
                debug_assert!(slot.is_none(), "{sig} assigned twice");
                *slot = Some(value);
            }

            let mut sample = PortSignalSample {
                v: Vec::with_capacity(n),
                i: Vec::with_capacity(n),
                a: Vec::with_capacity(n),
                b: Vec::with_capacity(n),
            };
            for p in 0..n {
                let (vp, ip) = match (v[p], i[p], a[p], b[p]) {
                    (Some(vp), Some(ip), None, None) => (vp, ip),
                    (None, None, Some(ap), Some(bp)) => waves_to_vi(ap, bp, z0[p], k[p])?,
                    _ => unreachable!("descriptor covers each port with one signal pair"),
                };
                let (ap, bp) = vi_to_waves(vp, ip, z0[p], k[p]);
                if let (Some(given_a), Some(given_b)) = (a[p], b[p]) {
                    let scale = given_a.norm().max(given_b.norm()).max(T::one());
                    let tol = T::lit(1e3) * T::epsilon() * scale;
                    debug_assert!((ap - given_a).norm() <= tol && (bp - given_b).norm() <= tol);
                }
                sample.v.push(vp);
                sample.i.push(ip);
                sample.a.push(ap);
                sample.b.push(bp);
            }
            Ok(sample)
        })
        .collect()
}

/// Least-squares estimate of a representation together with its relative
/// residual `‖O − R·U‖_F / ‖O‖_F`.
#[derive(Clone, Debug, PartialEq)]
pub struct Fit<T: Real> {
    pub matrix: ComplexMatrix<T>,
    pub residual: T,
}

/// Recovers `target` from signal records by solving `O' = R'·U'` in the
/// least-squares sense over all samples.
///
/// Fails with [`Error::RankDeficient`] when the target inputs do not span
/// the port space (the target representation does not exist), and with
/// [`Error::InconsistentFit`] when the records do not obey any linear
/// relation of the target form.
pub fn fit_representation<T: Real>(
    samples: &[PortSignalSample<T>],
    target: Representation,
    norm: &PortNormalization<T>,
    _convention: &WaveConvention<T>,
) -> Result<Fit<T>> {
    let n = norm.n_ports();
    let desc = descriptor(target, n)?;
    if samples.len() < n {
        return Err(Error::RankDeficient(0.0));
    }
    if let Some(bad) = samples.iter().find(|s| s.n_ports() != n) {
        return Err(Error::DimensionMismatch {
            expected: format!("{n}-port samples"),
            got: format!("{}-port sample", bad.n_ports()),
        });
    }
    let m = samples.len();
    let u_t = ComplexMatrix::from_fn(m, n, |s, j| samples[s].get(&desc.inputs[j]));
    let o_t = ComplexMatrix::from_fn(m, n, |s, j| samples[s].get(&desc.outputs[j]));

    let ls = least_squares(&u_t, &o_t);
    if ls.rcond < T::rank_rcond() {
        return Err(Error::RankDeficient(ls.rcond.to_f64().unwrap_or(0.0)));
    }
    let fitted = &u_t * &ls.solution;
    let o_norm = o_t.frobenius();
    let err = (&o_t - &fitted).frobenius();
    let residual = if o_norm > T::zero() { err / o_norm } else { err };
    if residual.is_nan() || residual > T::max_fit_residual() {
        return Err(Error::InconsistentFit(residual.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(Fit {
        matrix: ls.solution.transpose(),
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn real(rows: &[[f64; 2]]) -> ComplexMatrix<f64> {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    fn norm50() -> PortNormalization<f64> {
        PortNormalization::uniform_real(2, 50.0).unwrap()
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() <= 1e-12 * a.norm().max(b.norm()).max(1.0)
    }

    #[test]
    fn z_samples_obey_impedance_relation() {
        let z = real(&[[100., 50.], [50., 100.]]);
        let samples = sample_network(Representation::Z, &z, &norm50(), &WaveConvention::default(), 1).unwrap();
        assert_eq!(samples.len(), 4);
        for s in &samples {
            for r in 0..2 {
                let vz = z[(r, 0)] * s.i[0] + z[(r, 1)] * s.i[1];
                assert!(close(s.v[r], vz));
            }
        }
    }

    #[test]
    fn through_samples_tie_ports() {
        let s_thru = real(&[[0., 1.], [1., 0.]]);
        let samples = sample_network(Representation::S, &s_thru, &norm50(), &WaveConvention::default(), 1).unwrap();
        for s in &samples {
            assert!(close(s.v[0], s.v[1]));
            assert!(close(s.i[0], -s.i[1]));
        }
    }

    #[test]
    fn chain_samples_follow_series_element() {
        let a = real(&[[1., 50.], [0., 1.]]);
        let samples = sample_network(Representation::A, &a, &norm50(), &WaveConvention::default(), 1).unwrap();
        for s in &samples {
            assert!(close(s.v[0], s.v[1] + (-s.i[1]) * 50.0));
            assert!(close(s.i[0], -s.i[1]));
        }
    }

    #[test]
    fn samples_are_wave_consistent() {
        let norm = PortNormalization::new(vec![Complex64::new(50.0, 10.0), Complex64::new(75.0, -5.0)]).unwrap();
        let conv = WaveConvention::traveling(Complex64::from_polar(1.0, 0.7)).unwrap();
        let s = real(&[[0.2, 0.5], [0.6, -0.1]]);
        let k = norm.k(&conv);
        for sample in sample_network(Representation::S, &s, &norm, &conv, 3).unwrap() {
            for p in 0..2 {
                let (a, b) = vi_to_waves(sample.v[p], sample.i[p], norm.z0()[p], k[p]);
                assert_eq!((a, b), (sample.a[p], sample.b[p]));
            }
        }
    }

    #[test]
    fn same_seed_same_samples() {
        let z = real(&[[10., 2.], [3., 40.]]);
        let a = sample_network(Representation::Z, &z, &norm50(), &WaveConvention::default(), 9).unwrap();
        let b = sample_network(Representation::Z, &z, &norm50(), &WaveConvention::default(), 9).unwrap();
        let c = sample_network(Representation::Z, &z, &norm50(), &WaveConvention::default(), 10).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn fit_z_to_y_is_inverse() {
        let z = real(&[[100., 50.], [50., 100.]]);
        let conv = WaveConvention::default();
        let samples = sample_network(Representation::Z, &z, &norm50(), &conv, 1).unwrap();
        let fit = fit_representation(&samples, Representation::Y, &norm50(), &conv).unwrap();
        let want = real(&[[100., -50.], [-50., 100.]]).scale(Complex64::new(1.0 / 7500.0, 0.0));
        assert!(fit.matrix.rel_diff(&want) < 1e-13);
        assert!(fit.residual < 1e-12);
    }

    #[test]
    fn fit_s_to_t() {
        let s = real(&[[1. / 3., 2. / 3.], [2. / 3., 1. / 3.]]);
        let conv = WaveConvention::default();
        let samples = sample_network(Representation::S, &s, &norm50(), &conv, 1).unwrap();
        let fit = fit_representation(&samples, Representation::T, &norm50(), &conv).unwrap();
        assert!(fit.matrix.rel_diff(&real(&[[1.5, -0.5], [0.5, 0.5]])) < 1e-13);
        assert!(fit.residual < 1e-12);
    }

    #[test]
    fn fit_through_to_z_is_rank_deficient() {
        let conv = WaveConvention::default();
        let samples = sample_network(Representation::S, &real(&[[0., 1.], [1., 0.]]), &norm50(), &conv, 1).unwrap();
        assert!(matches!(
            fit_representation(&samples, Representation::Z, &norm50(), &conv),
            Err(Error::RankDeficient(_))
        ));
    }

    #[test]
    fn fit_rejects_inconsistent_records() {
        let conv = WaveConvention::default();
        let mut samples = sample_network(Representation::Z, &real(&[[10., 1.], [1., 10.]]), &norm50(), &conv, 2).unwrap();
        samples[3].v[0] += Complex64::new(5.0, 0.0);
        assert!(matches!(
            fit_representation(&samples, Representation::Z, &norm50(), &conv),
            Err(Error::InconsistentFit(_))
        ));
    }
}
