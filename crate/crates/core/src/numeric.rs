//! Dense f64 matrices for the matrix realizations, backed by nalgebra.
//! The exponential is computed here since nalgebra only offers it with std.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{to_f64, Matrix};

/// Dense real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DMatrix(nalgebra::DMatrix<f64>);

impl DMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DMatrix(nalgebra::DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        DMatrix(nalgebra::DMatrix::identity(n, n))
    }

    /// From row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length");
        DMatrix(nalgebra::DMatrix::from_row_slice(rows, cols, &data))
    }

    pub fn from_rational(m: &Matrix) -> Self {
        let data: Vec<f64> = m.entries().iter().map(to_f64).collect();
        DMatrix(nalgebra::DMatrix::from_row_slice(m.rows(), m.cols(), &data))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    /// Entries in row-major order.
    pub fn row_major(&self) -> Vec<f64> {
        self.0.transpose().as_slice().to_vec()
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.0[(r, c)]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.0[(r, c)] = v;
    }

    pub fn mul(&self, other: &DMatrix) -> DMatrix {
        assert_eq!(self.cols(), other.rows(), "inner dimensions");
        DMatrix(&self.0 * &other.0)
    }

    pub fn add(&self, other: &DMatrix) -> DMatrix {
        assert_eq!(self.0.shape(), other.0.shape(), "shapes");
        DMatrix(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &DMatrix) -> DMatrix {
        assert_eq!(self.0.shape(), other.0.shape(), "shapes");
        DMatrix(&self.0 - &other.0)
    }

    pub fn scale(&self, c: f64) -> DMatrix {
        DMatrix(&self.0 * c)
    }

    pub fn transpose(&self) -> DMatrix {
        DMatrix(self.0.transpose())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.amax()
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        self.0
            .column_iter()
            .map(|c| c.iter().map(|a| libm::fabs(*a)).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.0.norm()
    }

    /// Spectral norm, the largest singular value.
    pub fn operator_norm(&self) -> f64 {
        singular_values(self).first().copied().unwrap_or(0.0)
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols(), "vector length");
        (&self.0 * nalgebra::DVector::from_column_slice(v)).as_slice().to_vec()
    }

    /// LU inverse; `None` for a singular matrix.
    pub fn inverse(&self) -> Option<DMatrix> {
        assert_eq!(self.rows(), self.cols(), "square matrix");
        self.0.clone().try_inverse().map(DMatrix)
    }

    pub fn determinant(&self) -> f64 {
        assert_eq!(self.rows(), self.cols(), "square matrix");
        self.0.determinant()
    }
}

/// Padé (6,6) coefficients for `exp`.
const PADE6: [f64; 7] = [
    1.0,
    0.5,
    5.0 / 44.0,
    1.0 / 66.0,
    1.0 / 792.0,
    1.0 / 15840.0,
    1.0 / 665280.0,
];

/// Matrix exponential by scaling and squaring with a diagonal Padé (6,6)
/// approximant on `A / 2^s`, `||A / 2^s||_1 <= 1/2`.
pub fn expm(a: &DMatrix) -> DMatrix {
    assert_eq!(a.rows(), a.cols(), "square matrix");
    let n = a.rows();
    let norm = a.norm_1();
    let mut s = 0u32;
    if norm > 0.5 {
        s = libm::ceil(libm::log2(norm / 0.5)) as u32;
    }
    let a = a.scale(libm::ldexp(1.0, -(s as i32)));
    let mut power = DMatrix::identity(n);
    let mut even = DMatrix::zeros(n, n);
    let mut odd = DMatrix::zeros(n, n);
    for (k, &c) in PADE6.iter().enumerate() {
        let term = power.scale(c);
        if k % 2 == 0 {
            even = even.add(&term);
        } else {
            odd = odd.add(&term);
        }
        power = power.mul(&a);
    }
    // N = E + O, D = E - O
    let num = even.add(&odd);
    let den = even.sub(&odd);
    let mut r = den
        .inverse()
        .expect("Padé denominator is invertible for small norm")
        .mul(&num);
    for _ in 0..s {
        r = r.mul(&r);
    }
    r
}

/// Singular values in decreasing order.
pub fn singular_values(m: &DMatrix) -> Vec<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return Vec::new();
    }
    let mut sv = m.0.singular_values().as_slice().to_vec();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Rank from singular values: values at most `tol * max(1, s_max)` count as
/// zero, and the kept/dropped boundary must be separated by `gap_ratio`.
pub fn numeric_rank(singular_values: &[f64], tol: f64, gap_ratio: f64) -> Result<usize> {
    let top = singular_values.first().copied().unwrap_or(0.0);
    let cutoff = tol * top.max(1.0);
    let rank = singular_values.iter().filter(|&&s| s > cutoff).count();
    let ambiguous = match (
        rank.checked_sub(1).map(|i| singular_values[i]),
        singular_values.get(rank),
    ) {
        (Some(kept), Some(&dropped)) => dropped > 0.0 && kept / dropped < gap_ratio,
        _ => false,
    };
    if ambiguous {
        return Err(Error::UnknownRank {
            singular_values: singular_values.to_vec(),
        });
    }
    Ok(rank)
}

/// Least-squares slope of `log r` against `log t`; `None` if any value is
/// not strictly positive or fewer than two points are given.
pub fn log_slope(ts: &[f64], rs: &[f64]) -> Option<f64> {
    if ts.len() != rs.len() || ts.len() < 2 || ts.iter().chain(rs).any(|&v| v <= 0.0 || !v.is_finite()) {
        return None;
    }
    let xs: Vec<f64> = ts.iter().map(|&t| libm::log(t)).collect();
    let ys: Vec<f64> = rs.iter().map(|&r| libm::log(r)).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn close(a: &DMatrix, b: &DMatrix, tol: f64) -> bool {
        a.sub(b).max_abs() <= tol
    }

    #[test]
    fn exp_of_rotation_generator() {
        let theta = 0.7;
        let x = DMatrix::from_vec(2, 2, vec![0.0, -theta, theta, 0.0]);
        let r = expm(&x);
        let expected = DMatrix::from_vec(
            2,
            2,
            vec![libm::cos(theta), -libm::sin(theta), libm::sin(theta), libm::cos(theta)],
        );
        assert!(close(&r, &expected, 1e-14));
        let big = expm(&x.scale(10.0));
        let orth = big.transpose().mul(&big);
        assert!(close(&orth, &DMatrix::identity(2), 1e-12));
    }

    #[test]
    fn exp_of_nilpotent_is_polynomial() {
        let x = DMatrix::from_vec(2, 2, vec![0.0, 3.0, 0.0, 0.0]);
        assert!(close(
            &expm(&x),
            &DMatrix::from_vec(2, 2, vec![1.0, 3.0, 0.0, 1.0]),
            1e-14
        ));
        assert!(close(&expm(&DMatrix::zeros(3, 3)), &DMatrix::identity(3), 0.0));
    }

    #[test]
    fn inverse_and_determinant() {
        let m = DMatrix::from_vec(3, 3, vec![2.0, 1.0, 0.0, 0.0, 1.0, 4.0, 1.0, 0.0, 1.0]);
        let inv = m.inverse().unwrap();
        assert!(close(&m.mul(&inv), &DMatrix::identity(3), 1e-14));
        assert!((m.determinant() - 6.0).abs() < 1e-12);
        assert!(DMatrix::from_vec(2, 2, vec![1.0, 2.0, 2.0, 4.0]).inverse().is_none());
    }

    #[test]
    fn singular_values_of_known_matrices() {
        let m = DMatrix::from_vec(2, 3, vec![3.0, 0.0, 0.0, 0.0, 0.0, 2.0]);
        let sv = singular_values(&m);
        assert!((sv[0] - 3.0).abs() < 1e-14 && (sv[1] - 2.0).abs() < 1e-14);
        let rank_one = DMatrix::from_vec(2, 2, vec![1.0, 2.0, 2.0, 4.0]);
        let sv = singular_values(&rank_one);
        assert!((sv[0] - 5.0).abs() < 1e-12 && sv[1] < 1e-12);
        assert_eq!(numeric_rank(&sv, 1e-9, 1e6).unwrap(), 1);
    }

    #[test]
    fn ambiguous_rank_is_reported() {
        let sv = [1.0, 1e-6, 1e-10];
        assert!(matches!(numeric_rank(&sv, 1e-9, 1e6), Err(Error::UnknownRank { .. })));
        assert_eq!(numeric_rank(&[1.0, 0.5, 0.0], 1e-9, 1e6).unwrap(), 2);
    }

    #[test]
    fn slope_fit() {
        let ts = [1e-1, 1e-2, 1e-3];
        let rs: Vec<f64> = ts.iter().map(|t| 5.0 * t * t).collect();
        assert!((log_slope(&ts, &rs).unwrap() - 2.0).abs() < 1e-12);
        assert!(log_slope(&ts, &[1.0, 0.0, 1.0]).is_none());
    }
}
