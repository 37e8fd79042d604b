//! Dense complex matrices and the handful of factorizations the
//! conversions need: LU with partial pivoting for square solves and
//! Householder QR for least squares.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{is_finite, Cx, Real};

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Cx<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    /// Builds a matrix from row-major entries, rejecting NaN and infinities.
    pub fn new(rows: usize, cols: usize, data: Vec<Cx<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries", rows * cols),
                got: format!("{} entries", data.len()),
            });
        }
        if !data.iter().all(is_finite) {
            return Err(Error::NonFinite("matrix entry"));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows. All rows must have equal length.
    pub fn from_rows<R: AsRef<[Cx<T>]>>(rows: &[R]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != n_cols {
                return Err(Error::DimensionMismatch {
                    expected: format!("rows of length {n_cols}"),
                    got: format!("row of length {}", r.len()),
                });
            }
            data.extend_from_slice(r);
        }
        Self::new(n_rows, n_cols, data)
    }

    /// Builds a matrix from nested rows of real values.
    pub fn from_real_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let rows: Vec<Vec<Cx<T>>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| Cx::new(x, T::zero())).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cx<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Cx::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { Cx::one() } else { Cx::zero() })
    }

    pub fn diagonal(diag: &[Cx<T>]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |r, c| if r == c { diag[r] } else { Cx::zero() })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major view of the entries.
    #[inline]
    pub fn as_slice(&self) -> &[Cx<T>] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Cx<T>] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(is_finite)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(Cx<T>) -> Cx<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    /// Copies the `rows × cols` block whose top-left corner is `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "block out of range");
        Self::from_fn(rows, cols, |r, c| self[(r0 + r, c0 + c)])
    }

    /// Tiles four blocks into `[[a, b], [c, d]]`.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let rows = a.rows + c.rows;
        let cols = a.cols + b.cols;
        Self::from_fn(rows, cols, |r, col| {
            let (blk, rr) = if r < a.rows { ((a, b), r) } else { ((c, d), r - a.rows) };
            if col < a.cols {
                blk.0[(rr, col)]
            } else {
                blk.1[(rr, col - a.cols)]
            }
        })
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    /// Induced 1-norm (maximum absolute column sum).
    pub fn norm1(&self) -> T {
        (0..self.cols)
            .map(|c| (0..self.rows).map(|r| self[(r, c)].norm()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    pub fn frobenius(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// `max|self - other| / max(max|other|, tiny)`, the comparison used
    /// throughout the test and verification code.
    pub fn rel_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let diff = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max);
        diff / other.max_abs().max(T::min_positive_value())
    }

    /// LU factorization with partial pivoting. Fails only for non-square input;
    /// singularity is reported through [`Lu::rcond`] and [`Lu::is_singular`].
    pub fn lu(&self) -> Result<Lu<T>> {
        Lu::factor(self)
    }

    /// Inverse via LU; errors when the reciprocal condition number falls below
    /// `T::singular_rcond()`.
    pub fn inverse(&self) -> Result<Self> {
        let lu = self.lu()?;
        let rcond = lu.rcond();
        if rcond < T::singular_rcond() {
            return Err(Error::SingularMatrix(rcond.to_f64().unwrap_or(0.0)));
        }
        Ok(lu.inverse())
    }

    /// Computes `self · d⁻¹` through a factorization of `dᵀ`, returning the
    /// result together with the reciprocal condition number of `d`.
    pub fn solve_right(&self, d: &Self) -> Result<(Self, T)> {
        if !d.is_square() || d.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{0}x{0} right operand", self.cols),
                got: format!("{}x{}", d.rows, d.cols),
            });
        }
        let lu = d.transpose().lu()?;
        let rcond = lu.rcond();
        if lu.is_singular() {
            return Ok((Self::zeros(self.rows, self.cols), rcond));
        }
        let xt = lu.solve(&self.transpose());
        Ok((xt.transpose(), rcond))
    }
}

impl<T: Real> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Cx<T>;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Cx<T> {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Cx<T> {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl<'a, T: Real> Mul<&'a ComplexMatrix<T>> for &'a ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(self, rhs: &'a ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    out[(r, c)] += a * rhs[(k, c)];
                }
            }
        }
        out
    }
}

impl<'a, T: Real> Add<&'a ComplexMatrix<T>> for &'a ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn add(self, rhs: &'a ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a, T: Real> Sub<&'a ComplexMatrix<T>> for &'a ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn sub(self, rhs: &'a ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<T: Real> Neg for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn neg(self) -> ComplexMatrix<T> {
        self.map(|z| -z)
    }
}

impl<T: Real> fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:>12.6e}{:+.6e}j  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// LU factorization `P·A = L·U` of a square matrix.
#[derive(Clone, Debug)]
pub struct Lu<T: Real> {
    n: usize,
    lu: ComplexMatrix<T>,
    perm: Vec<usize>,
    sign_flips: usize,
    anorm: T,
    singular: bool,
}

impl<T: Real> Lu<T> {
    fn factor(a: &ComplexMatrix<T>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch {
                expected: "square matrix".into(),
                got: format!("{}x{}", a.rows, a.cols),
            });
        }
        let n = a.rows;
        let anorm = a.norm1();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign_flips = 0;
        let mut singular = false;

        for k in 0..n {
            let (pivot_row, pivot_mag) = (k..n)
                .map(|r| (r, lu[(r, k)].norm()))
                .fold((k, T::zero()), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot_mag.is_zero() {
                singular = true;
                continue;
            }
            if pivot_row != k {
                for c in 0..n {
                    lu.data.swap(k * n + c, pivot_row * n + c);
                }
                perm.swap(k, pivot_row);
                sign_flips += 1;
            }
            let pivot = lu[(k, k)];
            for r in k + 1..n {
                let factor = lu[(r, k)] / pivot;
                lu[(r, k)] = factor;
                if factor.is_zero() {
                    continue;
                }
                for c in k + 1..n {
                    let u = lu[(k, c)];
                    lu[(r, c)] -= factor * u;
                }
            }
        }
        Ok(Self {
            n,
            lu,
            perm,
            sign_flips,
            anorm,
            singular,
        })
    }

    /// True when an exactly zero pivot was met.
    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn det(&self) -> Cx<T> {
        let mut d: Cx<T> = (0..self.n).map(|k| self.lu[(k, k)]).fold(Cx::one(), |acc, x| acc * x);
        if self.sign_flips % 2 == 1 {
            d = -d;
        }
        d
    }

    /// Solves `A·X = B` for every column of `b`. Undefined (NaN-free zeros)
    /// when the factorization is singular; check [`Lu::is_singular`] first.
    pub fn solve(&self, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(b.rows, self.n);
        let n = self.n;
        let mut x = ComplexMatrix::from_fn(n, b.cols, |r, c| b[(self.perm[r], c)]);
        if self.singular {
            return ComplexMatrix::zeros(n, b.cols);
        }
        for col in 0..b.cols {
            for r in 0..n {
                let mut acc = x[(r, col)];
                for k in 0..r {
                    acc -= self.lu[(r, k)] * x[(k, col)];
                }
                x[(r, col)] = acc;
            }
            for r in (0..n).rev() {
                let mut acc = x[(r, col)];
                for k in r + 1..n {
                    acc -= self.lu[(r, k)] * x[(k, col)];
                }
                x[(r, col)] = acc / self.lu[(r, r)];
            }
        }
        x
    }

    pub fn inverse(&self) -> ComplexMatrix<T> {
        self.solve(&ComplexMatrix::identity(self.n))
    }

    /// Exact 1-norm reciprocal condition number `1 / (‖A‖₁·‖A⁻¹‖₁)`.
    /// The inverse is formed explicitly; the matrices here are at most a few
    /// dozen rows.
    pub fn rcond(&self) -> T {
        if self.n == 0 {
            return T::one();
        }
        if self.singular || self.anorm.is_zero() {
            return T::zero();
        }
        let inv_norm = self.inverse().norm1();
        if !inv_norm.is_finite() || inv_norm.is_zero() {
            return T::zero();
        }
        T::one() / (self.anorm * inv_norm)
    }
}

/// Least-squares solution of an overdetermined system.
#[derive(Clone, Debug)]
pub struct LeastSquares<T: Real> {
    pub solution: ComplexMatrix<T>,
    /// 1-norm reciprocal condition of the column-equilibrated triangular
    /// factor.
    pub rcond: T,
}

/// Solves `min ‖A·X − B‖_F` for a tall `a` (rows ≥ cols) by Householder QR
/// after scaling the columns of `a` to unit norm. When the system is
/// numerically rank deficient the returned `rcond` is tiny and `solution`
/// is zero.
pub fn least_squares<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> LeastSquares<T> {
    let (m, n) = (a.rows, a.cols);
    assert!(m >= n, "least_squares needs a tall system");
    assert_eq!(b.rows, m);

    let col_scale: Vec<T> = (0..n)
        .map(|c| {
            let s = (0..m).map(|r| a[(r, c)].norm_sqr()).sum::<T>().sqrt();
            if s.is_zero() {
                T::one()
            } else {
                s
            }
        })
        .collect();
    let mut qr = ComplexMatrix::from_fn(m, n, |r, c| a[(r, c)] / col_scale[c]);
    let mut rhs = b.clone();

    for k in 0..n {
        let norm_x = (k..m).map(|r| qr[(r, k)].norm_sqr()).sum::<T>().sqrt();
        if norm_x.is_zero() {
            continue;
        }
        let x0 = qr[(k, k)];
        let phase = if x0.norm().is_zero() {
            Cx::one()
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm_x;
        // v = x - alpha·e1, normalized so that H = I - 2 v vᴴ / (vᴴ v)
        let mut v: Vec<Cx<T>> = (k..m).map(|r| qr[(r, k)]).collect();
        v[0] -= alpha;
        let vnorm2: T = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2.is_zero() {
            continue;
        }
        let two = T::lit(2.0);
        let reflect = |mat: &mut ComplexMatrix<T>, col: usize| {
            let dot: Cx<T> = v
                .iter()
                .enumerate()
                .map(|(i, vi)| vi.conj() * mat[(k + i, col)])
                .fold(Cx::zero(), |acc, x| acc + x);
            let f = dot * (two / vnorm2);
            for (i, vi) in v.iter().enumerate() {
                let cur = mat[(k + i, col)];
                mat[(k + i, col)] = cur - *vi * f;
            }
        };
        for c in k..n {
            reflect(&mut qr, c);
        }
        for c in 0..rhs.cols {
            reflect(&mut rhs, c);
        }
    }

    let r = ComplexMatrix::from_fn(n, n, |i, j| if j >= i { qr[(i, j)] } else { Cx::zero() });
    let rcond = triangular_rcond(&r);
    if rcond < T::epsilon() {
        return LeastSquares {
            solution: ComplexMatrix::zeros(n, b.cols),
            rcond,
        };
    }
    let mut x = ComplexMatrix::zeros(n, b.cols);
    for col in 0..b.cols {
        for i in (0..n).rev() {
            let mut acc = rhs[(i, col)];
            for j in i + 1..n {
                acc -= r[(i, j)] * x[(j, col)];
            }
            x[(i, col)] = acc / r[(i, i)];
        }
    }
    for i in 0..n {
        for col in 0..b.cols {
            x[(i, col)] /= col_scale[i];
        }
    }
    LeastSquares { solution: x, rcond }
}

fn triangular_rcond<T: Real>(r: &ComplexMatrix<T>) -> T {
    let n = r.rows;
    if n == 0 {
        return T::one();
    }
    let max_diag = (0..n).map(|i| r[(i, i)].norm()).fold(T::zero(), T::max);
    if max_diag.is_zero() {
        return T::zero();
    }
    // Diagonal entries below round-off of the largest one mean a dependent
    // column; treat as exactly singular before inverting.
    if (0..n).any(|i| r[(i, i)].norm() <= max_diag * T::epsilon()) {
        return T::zero();
    }
    let lu = match r.lu() {
        Ok(lu) => lu,
        Err(_) => return T::zero(),
    };
    lu.rcond()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_nan() {
        let err = ComplexMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]).unwrap_err();
        assert_eq!(err, Error::NonFinite("matrix entry"));
    }

    #[test]
    fn rejects_ragged_rows() {
        let rows: Vec<Vec<Complex64>> = vec![vec![c(1.0, 0.0)], vec![]];
        assert!(ComplexMatrix::from_rows(&rows).is_err());
    }

    #[test]
    fn inverse_of_2x2() {
        let a = ComplexMatrix::from_real_rows(&[[1.0, 50.0], [0.0, 1.0]]).unwrap();
        let inv = a.inverse().unwrap();
        let want = ComplexMatrix::from_real_rows(&[[1.0, -50.0], [0.0, 1.0]]).unwrap();
        assert!(inv.rel_diff(&want) < 1e-15);
    }

    #[test]
    fn complex_solve_and_det() {
        let a = ComplexMatrix::from_rows(&[[c(0.0, 1.0), c(2.0, 0.0)], [c(1.0, -1.0), c(0.5, 0.5)]]).unwrap();
        let lu = a.lu().unwrap();
        let det = c(0.0, 1.0) * c(0.5, 0.5) - c(2.0, 0.0) * c(1.0, -1.0);
        assert!((lu.det() - det).norm() < 1e-14);
        let prod = &a * &lu.inverse();
        assert!(prod.rel_diff(&ComplexMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn singular_rcond_is_zero() {
        let a = ComplexMatrix::from_real_rows(&[[1.0, -1.0], [-1.0, 1.0]]).unwrap();
        assert_eq!(a.lu().unwrap().rcond(), 0.0);
        assert!(matches!(a.inverse(), Err(Error::SingularMatrix(_))));
    }

    #[test]
    fn rcond_of_diagonal() {
        let a = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(1e-3, 0.0)]);
        assert!((a.lu().unwrap().rcond() - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn solve_right_matches_inverse() {
        let num = ComplexMatrix::from_rows(&[[c(1.0, 2.0), c(0.0, -1.0)], [c(3.0, 0.0), c(1.0, 1.0)]]).unwrap();
        let den = ComplexMatrix::from_rows(&[[c(2.0, 0.0), c(1.0, 1.0)], [c(0.0, 1.0), c(4.0, 0.0)]]).unwrap();
        let (x, rcond) = num.solve_right(&den).unwrap();
        assert!(rcond > 0.1);
        let want = &num * &den.inverse().unwrap();
        assert!(x.rel_diff(&want) < 1e-14);
    }

    #[test]
    fn blocks_tile_back() {
        let m = ComplexMatrix::<f64>::from_fn(4, 4, |r, col| c(r as f64, col as f64));
        let t = ComplexMatrix::from_blocks(&m.block(0, 0, 2, 2), &m.block(0, 2, 2, 2), &m.block(2, 0, 2, 2), &m.block(2, 2, 2, 2));
        assert_eq!(t, m);
    }

    #[test]
    fn least_squares_exact_system() {
        // A (4x2) X (2x2) = B with known X
        let a = ComplexMatrix::from_rows(&[
            [c(1.0, 0.0), c(0.0, 1.0)],
            [c(2.0, -1.0), c(1.0, 0.0)],
            [c(0.0, 0.5), c(-1.0, 2.0)],
            [c(3.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let x = ComplexMatrix::from_rows(&[[c(1.0, 1.0), c(-2.0, 0.0)], [c(0.0, 3.0), c(0.5, -0.5)]]).unwrap();
        let b = &a * &x;
        let ls = least_squares(&a, &b);
        assert!(ls.rcond > 0.01);
        assert!(ls.solution.rel_diff(&x) < 1e-14);
    }

    #[test]
    fn least_squares_rank_deficient() {
        let a = ComplexMatrix::from_rows(&[
            [c(1.0, 0.0), c(-1.0, 0.0)],
            [c(0.0, 1.0), c(0.0, -1.0)],
            [c(2.0, 2.0), c(-2.0, -2.0)],
        ])
        .unwrap();
        let b = ComplexMatrix::zeros(3, 1);
        assert!(least_squares(&a, &b).rcond < 1e-10);
    }
}
