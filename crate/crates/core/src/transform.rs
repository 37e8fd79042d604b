//! Conversion between representations.
//!
//! Every representation's stacked vector `[outputs; inputs]` is a linear
//! function of the canonical port vector `[V1..VN, I1..IN]`, written as a
//! stacking matrix `M`. The map between two representations is then
//! `P = M_to · M_from⁻¹`, and with `P` split into `N×N` quadrants the new
//! parameter matrix is
//!
//! ```text
//! R' = (P11·R + P12)·(P21·R + P22)⁻¹
//! ```
//!
//! A singular `P21·R + P22` means the target representation does not exist
//! for that network.

use num_complex::Complex;
use num_traits::One;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::network::{NetworkPoint, NetworkSweep};
use crate::repr::{descriptor, Representation, SignalKind};
use crate::scalar::{Cx, Real};
use crate::wave::{PortNormalization, WaveConvention};

/// Column of signal `kind` at 1-based `port` in the canonical basis.
fn basis_column(kind: SignalKind, port: usize, n_ports: usize) -> usize {
    match kind {
        SignalKind::V | SignalKind::A | SignalKind::B => port - 1,
        SignalKind::I => n_ports + port - 1,
    }
}

/// Expresses the stacked `[outputs; inputs]` vector of `rep` over the
/// canonical basis `[V1..VN, I1..IN]`. Wave rows follow
/// `a = k(V + Z0·I)`, `b = k(V − Z0·I)` with per-port `Z0` and `k`.
pub fn stacking_matrix<T: Real>(
    rep: Representation,
    norm: &PortNormalization<T>,
    convention: &WaveConvention<T>,
) -> Result<ComplexMatrix<T>> {
    let n = norm.n_ports();
    let desc = descriptor(rep, n)?;
    let k = norm.k(convention);
    let mut m = ComplexMatrix::zeros(2 * n, 2 * n);
    for (row, sig) in desc.stacked().enumerate() {
        let sign = if sig.sign < 0 { -T::one() } else { T::one() };
        let p = sig.port - 1;
        let v_col = basis_column(SignalKind::V, sig.port, n);
        let i_col = basis_column(SignalKind::I, sig.port, n);
        match sig.kind {
            SignalKind::V => m[(row, v_col)] = Complex::new(sign, T::zero()),
            SignalKind::I => m[(row, i_col)] = Complex::new(sign, T::zero()),
            SignalKind::A | SignalKind::B => {
                let zk = norm.z0()[p] * k[p];
                let zk = if sig.kind == SignalKind::A { zk } else { -zk };
                m[(row, v_col)] = k[p] * sign;
                m[(row, i_col)] = zk * sign;
            }
        }
    }
    Ok(m)
}

/// The `2N×2N` map between two stacked signal vectors, kept together with
/// its quadrants.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformMatrix<T: Real> {
    from: Representation,
    to: Representation,
    p: ComplexMatrix<T>,
    p11: ComplexMatrix<T>,
    p12: ComplexMatrix<T>,
    p21: ComplexMatrix<T>,
    p22: ComplexMatrix<T>,
}

impl<T: Real> TransformMatrix<T> {
    /// Wraps an explicit `2N×2N` matrix taking `from` signals to `to` signals.
    pub fn from_matrix(from: Representation, to: Representation, p: ComplexMatrix<T>) -> Result<Self> {
        if !p.is_square() || !p.rows().is_multiple_of(2) {
            return Err(Error::DimensionMismatch {
                expected: "2N x 2N transformation matrix".into(),
                got: format!("{}x{}", p.rows(), p.cols()),
            });
        }
        let n = p.rows() / 2;
        Ok(Self {
            from,
            to,
            p11: p.block(0, 0, n, n),
            p12: p.block(0, n, n, n),
            p21: p.block(n, 0, n, n),
            p22: p.block(n, n, n, n),
            p,
        })
    }

    pub fn identity(rep: Representation, n_ports: usize) -> Self {
        Self::from_matrix(rep, rep, ComplexMatrix::identity(2 * n_ports)).expect("even square identity")
    }

    pub fn from(&self) -> Representation {
        self.from
    }

    pub fn to(&self) -> Representation {
        self.to
    }

    pub fn n_ports(&self) -> usize {
        self.p.rows() / 2
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.p
    }

    pub fn p11(&self) -> &ComplexMatrix<T> {
        &self.p11
    }

    pub fn p12(&self) -> &ComplexMatrix<T> {
        &self.p12
    }

    pub fn p21(&self) -> &ComplexMatrix<T> {
        &self.p21
    }

    pub fn p22(&self) -> &ComplexMatrix<T> {
        &self.p22
    }

    /// `c·P`. The conversion it performs is unchanged.
    pub fn scaled(&self, c: Cx<T>) -> Self {
        Self::from_matrix(self.from, self.to, self.p.scale(c)).expect("shape preserved")
    }

    /// Map for the reverse direction.
    pub fn inverse(&self) -> Result<Self> {
        Self::from_matrix(self.to, self.from, self.p.inverse()?)
    }

    /// Composition `other ∘ self` (first `self`, then `other`).
    pub fn then(&self, other: &Self) -> Result<Self> {
        if self.to != other.from || self.n_ports() != other.n_ports() {
            return Err(Error::DimensionMismatch {
                expected: format!("map from {} on {} ports", self.to, self.n_ports()),
                got: format!("map from {} on {} ports", other.from, other.n_ports()),
            });
        }
        Self::from_matrix(self.from, other.to, &other.p * &self.p)
    }

    fn numerator_denominator(&self, r: &ComplexMatrix<T>) -> Result<(ComplexMatrix<T>, ComplexMatrix<T>)> {
        let n = self.n_ports();
        if r.rows() != n || r.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: format!("{n}x{n} parameter matrix"),
                got: format!("{}x{}", r.rows(), r.cols()),
            });
        }
        let num = &(&self.p11 * r) + &self.p12;
        let den = &(&self.p21 * r) + &self.p22;
        Ok((num, den))
    }
}

/// Builds `P = M_to · M_from⁻¹` for the given normalization. Identical
/// representations give the exact identity.
pub fn build_p<T: Real>(
    from: Representation,
    to: Representation,
    norm: &PortNormalization<T>,
    convention: &WaveConvention<T>,
) -> Result<TransformMatrix<T>> {
    let n = norm.n_ports();
    from.check_ports(n)?;
    to.check_ports(n)?;
    if from == to {
        return Ok(TransformMatrix::identity(from, n));
    }
    let m_from = stacking_matrix(from, norm, convention)?;
    let m_to = stacking_matrix(to, norm, convention)?;
    let (p, rcond) = m_to.solve_right(&m_from)?;
    // Stacking matrices of valid descriptors are always invertible.
    if rcond < T::singular_rcond() {
        return Err(Error::SingularMatrix(rcond.to_f64().unwrap_or(0.0)));
    }
    TransformMatrix::from_matrix(from, to, p)
}

/// Applies `R' = (P11·R + P12)(P21·R + P22)⁻¹` through a linear solve.
pub fn moebius<T: Real>(p: &TransformMatrix<T>, r: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let (num, den) = p.numerator_denominator(r)?;
    let (out, rcond) = num.solve_right(&den)?;
    if rcond < T::singular_rcond() || !out.is_finite() {
        return Err(Error::SingularConversion {
            from: p.from,
            to: p.to,
            rcond: rcond.to_f64().unwrap_or(0.0),
        });
    }
    Ok(out)
}

/// Reciprocal condition number of the conversion denominator `P21·R + P22`.
pub fn denominator_rcond<T: Real>(p: &TransformMatrix<T>, r: &ComplexMatrix<T>) -> Result<T> {
    let (_, den) = p.numerator_denominator(r)?;
    Ok(den.lu()?.rcond())
}

/// Converts one network point into `target`, keeping frequency,
/// normalization and wave convention.
pub fn convert<T: Real>(point: &NetworkPoint<T>, target: Representation) -> Result<NetworkPoint<T>> {
    if target == point.rep() {
        return Ok(point.clone());
    }
    let p = build_p(point.rep(), target, point.norm(), point.convention())?;
    let m = moebius(&p, point.matrix())?;
    Ok(point.with_matrix(target, m))
}

/// Converts every point of a sweep. Points are processed in parallel; the
/// result keeps the input order and reports the lowest failing frequency.
pub fn convert_sweep<T: Real>(sweep: &NetworkSweep<T>, target: Representation) -> Result<NetworkSweep<T>> {
    let Some(first) = sweep.points().first() else {
        return Ok(NetworkSweep::empty());
    };
    if first.rep() == target {
        return Ok(sweep.clone());
    }
    let p = build_p(first.rep(), target, first.norm(), first.convention())?;
    let results: Vec<Result<NetworkPoint<T>>> = sweep
        .points()
        .par_iter()
        .map(|pt| moebius(&p, pt.matrix()).map(|m| pt.with_matrix(target, m)))
        .collect();
    let points = collect_in_order(sweep.points(), results)?;
    NetworkSweep::new(points)
}

fn collect_in_order<T: Real>(
    inputs: &[NetworkPoint<T>],
    results: Vec<Result<NetworkPoint<T>>>,
) -> Result<Vec<NetworkPoint<T>>> {
    inputs
        .iter()
        .zip(results)
        .map(|(pt, res)| {
            res.map_err(|e| Error::AtFrequency {
                frequency: pt.frequency().to_f64().unwrap_or(f64::NAN),
                source: Box::new(e),
            })
        })
        .collect()
}

/// Inverse chain matrix `B = A⁻¹`.
pub fn a_to_b<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    if a.rows() != 2 || a.cols() != 2 {
        return Err(Error::DimensionMismatch {
            expected: "2x2 chain matrix".into(),
            got: format!("{}x{}", a.rows(), a.cols()),
        });
    }
    let lu = a.lu()?;
    let rcond = lu.rcond();
    if rcond < T::singular_rcond() {
        return Err(Error::SingularConversion {
            from: Representation::A,
            to: Representation::B,
            rcond: rcond.to_f64().unwrap_or(0.0),
        });
    }
    Ok(lu.inverse())
}

/// Chains two 2-ports (port 2 of `first` feeds port 1 of `second`). The
/// result is in the A representation.
pub fn cascade<T: Real>(first: &NetworkPoint<T>, second: &NetworkPoint<T>) -> Result<NetworkPoint<T>> {
    if first.n_ports() != 2 || second.n_ports() != 2 {
        return Err(Error::IncompatibleOperands("port count (cascade needs 2-ports)"));
    }
    if first.frequency() != second.frequency() {
        return Err(Error::IncompatibleOperands("frequency"));
    }
    if first.norm() != second.norm() {
        return Err(Error::IncompatibleOperands("normalization"));
    }
    if first.convention() != second.convention() {
        return Err(Error::IncompatibleOperands("wave convention"));
    }
    let a1 = convert(first, Representation::A)?;
    let a2 = convert(second, Representation::A)?;
    let product = a1.matrix() * a2.matrix();
    Ok(first.with_matrix(Representation::A, product))
}

/// Cascades two sweeps point by point. The frequency grids must match
/// exactly.
pub fn cascade_sweeps<T: Real>(first: &NetworkSweep<T>, second: &NetworkSweep<T>) -> Result<NetworkSweep<T>> {
    if first.frequencies() != second.frequencies() {
        return Err(Error::IncompatibleOperands("frequency grid"));
    }
    let results: Vec<Result<NetworkPoint<T>>> = first
        .points()
        .par_iter()
        .zip(second.points().par_iter())
        .map(|(a, b)| cascade(a, b))
        .collect();
    let points = collect_in_order(first.points(), results)?;
    NetworkSweep::new(points)
}

/// `A = I` for every frequency of `template`, i.e. an ideal through.
pub fn through_like<T: Real>(template: &NetworkPoint<T>) -> NetworkPoint<T> {
    let mut id = ComplexMatrix::zeros(2, 2);
    id[(0, 0)] = Cx::one();
    id[(1, 1)] = Cx::one();
    template.with_matrix(Representation::A, id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use Representation::*;

    const K50: f64 = 0.070_710_678_118_654_75;

    fn real(rows: &[[f64; 2]]) -> ComplexMatrix<f64> {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    fn real4(rows: &[[f64; 4]]) -> ComplexMatrix<f64> {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    fn norm50(n: usize) -> PortNormalization<f64> {
        PortNormalization::uniform_real(n, 50.0).unwrap()
    }

    fn kuro() -> WaveConvention<f64> {
        WaveConvention::kurokawa()
    }

    fn point(rep: Representation, m: ComplexMatrix<f64>) -> NetworkPoint<f64> {
        NetworkPoint::with_z0(1e9, rep, m, 50.0).unwrap()
    }

    fn assert_close(got: &ComplexMatrix<f64>, want: &ComplexMatrix<f64>, tol: f64) {
        let d = got.rel_diff(want);
        assert!(d <= tol, "deviation {d:e}\ngot {got:?}\nwant {want:?}");
    }

    #[test]
    fn stacking_z_is_identity() {
        let m = stacking_matrix(Z, &norm50(2), &kuro()).unwrap();
        assert_eq!(m, ComplexMatrix::identity(4));
    }

    #[test]
    fn stacking_g_is_permutation() {
        let m = stacking_matrix(G, &norm50(2), &kuro()).unwrap();
        let want = real4(&[[0., 0., 1., 0.], [0., 1., 0., 0.], [1., 0., 0., 0.], [0., 0., 0., 1.]]);
        assert_eq!(m, want);
    }

    #[test]
    fn stacking_s_rows() {
        let m = stacking_matrix(S, &norm50(2), &kuro()).unwrap();
        let want = real4(&[
            [1., 0., -50., 0.],
            [0., 1., 0., -50.],
            [1., 0., 50., 0.],
            [0., 1., 0., 50.],
        ])
        .scale(Complex64::new(K50, 0.0));
        assert_close(&m, &want, 1e-15);
    }

    #[test]
    fn stacking_applies_descriptor_sign() {
        let m = stacking_matrix(A, &norm50(2), &kuro()).unwrap();
        assert_eq!(m[(3, 3)], Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn p_z_to_g_is_printed_permutation() {
        let p = build_p(Z, G, &norm50(2), &kuro()).unwrap();
        let want = real4(&[[0., 0., 1., 0.], [0., 1., 0., 0.], [1., 0., 0., 0.], [0., 0., 0., 1.]]);
        assert_eq!(p.matrix(), &want);
        assert_eq!(p.p11(), &real(&[[0., 0.], [0., 1.]]));
        assert_eq!(p.p12(), &real(&[[1., 0.], [0., 0.]]));
        assert_eq!(p.p21(), &real(&[[1., 0.], [0., 0.]]));
        assert_eq!(p.p22(), &real(&[[0., 0.], [0., 1.]]));
    }

    #[test]
    fn p_s_to_y_has_signed_admittance() {
        let p = build_p(S, Y, &norm50(2), &kuro()).unwrap();
        let y0 = 0.02;
        let want = real4(&[
            [-y0, 0., y0, 0.],
            [0., -y0, 0., y0],
            [1., 0., 1., 0.],
            [0., 1., 0., 1.],
        ])
        .scale(Complex64::new(1.0 / (2.0 * K50), 0.0));
        assert_close(p.matrix(), &want, 1e-14);
    }

    #[test]
    fn p_z_to_y_is_block_swap() {
        for n in 1..=4 {
            let p = build_p(Z, Y, &norm50(n), &kuro()).unwrap();
            let i = ComplexMatrix::identity(n);
            let o = ComplexMatrix::zeros(n, n);
            assert_eq!(p.matrix(), &ComplexMatrix::from_blocks(&o, &i, &i, &o));
        }
    }

    #[test]
    fn p_same_rep_is_identity() {
        let p = build_p(S, S, &norm50(3), &kuro()).unwrap();
        assert_eq!(p.matrix(), &ComplexMatrix::identity(6));
    }

    #[test]
    fn build_p_port_mismatch() {
        assert!(matches!(build_p(S, T, &norm50(3), &kuro()), Err(Error::PortCountMismatch { .. })));
    }

    #[test]
    fn moebius_identity() {
        let r = ComplexMatrix::from_fn(3, 3, |i, j| Complex64::new(i as f64 + 1.0, j as f64 - 0.5));
        let out = moebius(&TransformMatrix::identity(Z, 3), &r).unwrap();
        assert_eq!(out, r);
    }

    #[test]
    fn moebius_s_to_t() {
        let p = build_p(S, T, &norm50(2), &kuro()).unwrap();
        let s = real(&[[1. / 3., 2. / 3.], [2. / 3., 1. / 3.]]);
        let t = moebius(&p, &s).unwrap();
        assert_close(&t, &real(&[[1.5, -0.5], [0.5, 0.5]]), 1e-14);
    }

    #[test]
    fn moebius_through_has_no_z() {
        let p = build_p(S, Z, &norm50(2), &kuro()).unwrap();
        let err = moebius(&p, &real(&[[0., 1.], [1., 0.]])).unwrap_err();
        assert!(matches!(err, Error::SingularConversion { from: S, to: Z, .. }));
    }

    #[test]
    fn moebius_invariant_under_scaling() {
        let p = build_p(Z, S, &norm50(2), &kuro()).unwrap();
        let r = real(&[[80., 30.], [25., 60.]]);
        let base = moebius(&p, &r).unwrap();
        let scaled = moebius(&p.scaled(Complex64::new(-3.0, 7.5)), &r).unwrap();
        assert_close(&scaled, &base, 1e-14);
    }

    #[test]
    fn series_element_vectors() {
        let y = point(Y, real(&[[0.02, -0.02], [-0.02, 0.02]]));
        let s = convert(&y, S).unwrap();
        assert_close(s.matrix(), &real(&[[1. / 3., 2. / 3.], [2. / 3., 1. / 3.]]), 1e-14);
        let h = convert(&y, H).unwrap();
        assert_close(h.matrix(), &real(&[[50., 1.], [-1., 0.]]), 1e-14);
        let a = convert(&y, A).unwrap();
        assert_close(a.matrix(), &real(&[[1., 50.], [0., 1.]]), 1e-14);
        assert!(matches!(convert(&y, Z), Err(Error::SingularConversion { .. })));
        assert!(matches!(convert(&s, Z), Err(Error::SingularConversion { .. })));
    }

    #[test]
    fn shunt_element_vectors() {
        let z = point(Z, real(&[[20., 20.], [20., 20.]]));
        let a = convert(&z, A).unwrap();
        assert_close(a.matrix(), &real(&[[1., 0.], [0.05, 1.]]), 1e-14);
        assert!(matches!(convert(&z, Y), Err(Error::SingularConversion { from: Z, to: Y, .. })));
    }

    #[test]
    fn convert_to_same_rep_is_identity() {
        let s = point(S, real(&[[0.1, 0.2], [0.3, 0.4]]));
        assert_eq!(convert(&s, S).unwrap(), s);
    }

    #[test]
    fn a_to_b_examples() {
        assert_eq!(a_to_b(&ComplexMatrix::<f64>::identity(2)).unwrap(), ComplexMatrix::identity(2));
        assert_close(&a_to_b(&real(&[[1., 50.], [0., 1.]])).unwrap(), &real(&[[1., -50.], [0., 1.]]), 1e-15);
        let inverter = real(&[[0., 50.], [0.02, 0.]]);
        assert_close(&a_to_b(&inverter).unwrap(), &inverter, 1e-15);
        assert!(matches!(
            a_to_b(&real(&[[1., 2.], [2., 4.]])),
            Err(Error::SingularConversion { from: A, to: B, .. })
        ));
    }

    #[test]
    fn cascade_examples() {
        let series = point(A, real(&[[1., 50.], [0., 1.]]));
        let shunt = point(A, real(&[[1., 0.], [0.02, 1.]]));
        let two = cascade(&series, &series).unwrap();
        assert_close(two.matrix(), &real(&[[1., 100.], [0., 1.]]), 1e-15);
        let mixed = cascade(&series, &shunt).unwrap();
        assert_close(mixed.matrix(), &real(&[[2., 50.], [0.02, 1.]]), 1e-15);
        let thru = point(S, real(&[[0., 1.], [1., 0.]]));
        let same = cascade(&series, &thru).unwrap();
        assert_close(same.matrix(), series.matrix(), 1e-12);
    }

    #[test]
    fn cascade_rejects_mismatched_frequency() {
        let a = point(A, ComplexMatrix::identity(2));
        let b = NetworkPoint::with_z0(2e9, A, ComplexMatrix::identity(2), 50.0).unwrap();
        assert_eq!(cascade(&a, &b).unwrap_err(), Error::IncompatibleOperands("frequency"));
    }

    #[test]
    fn sweep_error_names_first_frequency() {
        let mats = vec![
            real(&[[0.1, 0.5], [0.5, 0.1]]),
            real(&[[0., 1.], [1., 0.]]),
            real(&[[0., 1.], [1., 0.]]),
        ];
        let sweep = NetworkSweep::from_matrices(&[1e6, 2e6, 3e6], S, mats, norm50(2), kuro()).unwrap();
        match convert_sweep(&sweep, Z).unwrap_err() {
            Error::AtFrequency { frequency, source } => {
                assert_eq!(frequency, 2e6);
                assert!(matches!(*source, Error::SingularConversion { .. }));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn single_precision_conversion() {
        let y = NetworkPoint::<f32>::with_z0(
            1e9,
            Y,
            ComplexMatrix::from_real_rows(&[[0.02f32, -0.02], [-0.02, 0.02]]).unwrap(),
            50.0,
        )
        .unwrap();
        let s = convert(&y, S).unwrap();
        let want = ComplexMatrix::from_real_rows(&[[1.0f32 / 3.0, 2.0 / 3.0], [2.0 / 3.0, 1.0 / 3.0]]).unwrap();
        assert!(s.matrix().rel_diff(&want) < 1e-5);
    }
}
