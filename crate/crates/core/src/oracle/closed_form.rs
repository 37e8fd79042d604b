//! Textbook conversion formulas for a uniform real reference impedance.
//! These are spot checks for the generated transforms, not an alternative
//! conversion path.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::repr::Representation;
use crate::scalar::{Cx, Real};

/// Pairs with a closed-form formula.
pub const CLOSED_FORM_PAIRS: [(Representation, Representation); 6] = [
    (Representation::Z, Representation::Y),
    (Representation::Y, Representation::Z),
    (Representation::Z, Representation::S),
    (Representation::S, Representation::Z),
    (Representation::S, Representation::T),
    (Representation::T, Representation::S),
];

/// Converts `m` with the textbook formula for `pair`:
///
/// * `Y = Z⁻¹`, `Z = Y⁻¹`
/// * `S = (Z − z0·I)(Z + z0·I)⁻¹`
/// * `Z = z0·(I + S)(I − S)⁻¹`
/// * `T = (1/S21)·[[1, −S22], [S11, S12·S21 − S11·S22]]` and its inverse.
pub fn closed_form_convert<F: Real>(
    pair: (Representation, Representation),
    m: &ComplexMatrix<F>,
    z0: F,
) -> Result<ComplexMatrix<F>> {
    use Representation::*;
    let (from, to) = pair;
    let singular = |rcond: f64| Error::SingularConversion { from, to, rcond };
    let n = m.rows();
    let eye = ComplexMatrix::<F>::identity(n);
    let z0_eye = eye.scale(Cx::new(z0, F::zero()));
    let inv = |x: &ComplexMatrix<F>| {
        x.inverse().map_err(|e| match e {
            Error::SingularMatrix(r) => singular(r),
            other => other,
        })
    };
    match pair {
        (Z, Y) | (Y, Z) => inv(m),
        (Z, S) => Ok(&(m - &z0_eye) * &inv(&(m + &z0_eye))?),
        (S, Z) => Ok(&(&z0_eye + &(&z0_eye * m)) * &inv(&(&eye - m))?),
        (S, T) => {
            two_port(m, pair)?;
            let (s11, s12, s21, s22) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
            pivot_check(s21, m, singular)?;
            let rows = [[Cx::from(F::one()), -s22], [s11, s12 * s21 - s11 * s22]];
            Ok(ComplexMatrix::from_rows(&rows)?.scale(s21.inv()))
        }
        (T, S) => {
            two_port(m, pair)?;
            let (t11, t12, t21, t22) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
            pivot_check(t11, m, singular)?;
            let det = t11 * t22 - t12 * t21;
            let rows = [[t21, det], [Cx::from(F::one()), -t12]];
            Ok(ComplexMatrix::from_rows(&rows)?.scale(t11.inv()))
        }
        _ => Err(Error::UnsupportedPair { from, to }),
    }
}

fn two_port<F: Real>(m: &ComplexMatrix<F>, pair: (Representation, Representation)) -> Result<()> {
    if m.rows() == 2 && m.cols() == 2 {
        Ok(())
    } else {
        Err(Error::PortCountMismatch {
            rep: pair.0,
            expected: 2,
            got: m.rows(),
        })
    }
}

fn pivot_check<F: Real>(pivot: Cx<F>, m: &ComplexMatrix<F>, singular: impl Fn(f64) -> Error) -> Result<()> {
    let ratio = pivot.norm() / m.max_abs().max(F::min_positive_value());
    if pivot.is_zero() || ratio < F::singular_rcond() {
        Err(singular(ratio.to_f64().unwrap_or(0.0)))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use Representation::*;

    fn real(rows: &[[f64; 2]]) -> ComplexMatrix<f64> {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn z_to_y_hand_inverse() {
        let y = closed_form_convert((Z, Y), &real(&[[100., 50.], [50., 100.]]), 50.0).unwrap();
        let want = real(&[[100., -50.], [-50., 100.]]).scale(Complex64::new(1.0 / 7500.0, 0.0));
        assert!(y.rel_diff(&want) < 1e-15);
    }

    #[test]
    fn matched_loads() {
        let s = closed_form_convert((Z, S), &real(&[[50., 0.], [0., 50.]]), 50.0).unwrap();
        assert_eq!(s.max_abs(), 0.0);
        let z = closed_form_convert((S, Z), &ComplexMatrix::zeros(2, 2), 50.0).unwrap();
        assert_eq!(z, real(&[[50., 0.], [0., 50.]]));
    }

    #[test]
    fn s_t_pair() {
        let s = real(&[[1. / 3., 2. / 3.], [2. / 3., 1. / 3.]]);
        let t = closed_form_convert((S, T), &s, 50.0).unwrap();
        assert!(t.rel_diff(&real(&[[1.5, -0.5], [0.5, 0.5]])) < 1e-15);
        let back = closed_form_convert((T, S), &t, 50.0).unwrap();
        assert!(back.rel_diff(&s) < 1e-15);
    }

    #[test]
    fn structural_singularities() {
        let thru = real(&[[0., 1.], [1., 0.]]);
        assert!(matches!(closed_form_convert((S, Z), &thru, 50.0), Err(Error::SingularConversion { .. })));
        let isolator = real(&[[0., 1.], [0., 0.]]);
        assert!(matches!(closed_form_convert((S, T), &isolator, 50.0), Err(Error::SingularConversion { .. })));
    }

    #[test]
    fn unsupported_pair() {
        assert!(matches!(
            closed_form_convert((G, H), &ComplexMatrix::<f64>::identity(2), 50.0),
            Err(Error::UnsupportedPair { .. })
        ));
    }
}
