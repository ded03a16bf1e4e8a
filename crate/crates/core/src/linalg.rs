//! Exact rational vectors, dense matrices and canonical subspaces.
//!
//! Every [`Subspace`] stores its basis in reduced row-echelon form, so two
//! equal subspaces compare equal structurally.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact scalar: an arbitrary-precision fraction in lowest terms.
pub type Rational = num_rational::BigRational;

/// Coordinate vector with respect to some fixed basis.
pub type Vector = Vec<Rational>;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero_vector(n: usize) -> Vector {
    vec![Rational::zero(); n]
}

pub fn unit_vector(n: usize, i: usize) -> Vector {
    let mut v = zero_vector(n);
    v[i] = Rational::one();
    v
}

pub fn vector_from_i64(values: &[i64]) -> Vector {
    values.iter().map(|&x| rat(x)).collect()
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Returns `Some(i)` when `v` is the `i`-th standard basis vector.
pub fn basis_index(v: &[Rational]) -> Option<usize> {
    let mut found = None;
    for (i, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        if !x.is_one() || found.is_some() {
            return None;
        }
        found = Some(i);
    }
    found
}

pub fn add(a: &[Rational], b: &[Rational]) -> Vector {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vector {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(c: &Rational, v: &[Rational]) -> Vector {
    v.iter().map(|x| c * x).collect()
}

pub fn neg(v: &[Rational]) -> Vector {
    v.iter().map(|x| -x).collect()
}

/// `acc += c * v`
pub fn axpy(acc: &mut [Rational], c: &Rational, v: &[Rational]) {
    debug_assert_eq!(acc.len(), v.len());
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += c * x;
        }
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

/// Linear combination `sum_i coeffs[i] * vectors[i]` in dimension `n`.
pub fn combine(n: usize, coeffs: &[Rational], vectors: &[Vector]) -> Vector {
    let mut out = zero_vector(n);
    for (c, v) in coeffs.iter().zip(vectors) {
        axpy(&mut out, c, v);
    }
    out
}

pub fn to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for r in 0..self.rows {
            if r > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for c in 0..self.cols {
                if c > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl core::ops::Index<(usize, usize)> for Matrix {
    type Output = Rational;

    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        &self.entries[r * self.cols + c]
    }
}

impl core::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        &mut self.entries[r * self.cols + c]
    }
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Builds a matrix from rows of equal length `cols`.
    pub fn from_rows(rows: &[Vector], cols: usize) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            entries.extend(row.iter().cloned());
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(columns: &[Vector], rows: usize) -> Result<Self> {
        Ok(Matrix::from_rows(columns, rows)?.transpose())
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vector> = rows.iter().map(|r| vector_from_i64(r)).collect();
        Matrix::from_rows(&rows, cols).expect("ragged integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `M v`.
    pub fn apply(&self, v: &[Rational]) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows).map(|r| dot(self.row(r), v)).collect())
    }

    pub fn checked_add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn checked_sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn scaled(&self, c: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| c * x).collect(),
        }
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch {
                expected_rows: self.rows,
                expected_cols: self.cols,
                rows: other.rows,
                cols: other.cols,
            });
        }
        Ok(())
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn rank(&self) -> usize {
        self.rref_with_pivots().1.len()
    }

    /// Reduced row-echelon form together with the pivot columns.
    pub fn rref_with_pivots(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead_row = 0;
        for col in 0..m.cols {
            if lead_row == m.rows {
                break;
            }
            let Some(p) = (lead_row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(p, lead_row);
            let inv = m[(lead_row, col)].recip();
            for c in col..m.cols {
                let x = &m[(lead_row, c)] * &inv;
                m[(lead_row, c)] = x;
            }
            for r in 0..m.rows {
                if r == lead_row || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for c in col..m.cols {
                    if m[(lead_row, c)].is_zero() {
                        continue;
                    }
                    let delta = &factor * &m[(lead_row, c)];
                    m[(r, c)] -= delta;
                }
            }
            pivots.push(col);
            lead_row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Exact determinant by fraction-preserving elimination.
    pub fn determinant(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch {
                expected_rows: self.rows,
                expected_cols: self.rows,
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let pivot = m[(col, col)].clone();
            det *= &pivot;
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = &m[(r, col)] / &pivot;
                for c in col..n {
                    let delta = &factor * &m[(col, c)];
                    m[(r, c)] -= delta;
                }
            }
        }
        Ok(det)
    }

    /// Two-sided inverse, or `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n + r)] = Rational::one();
        }
        let (red, pivots) = aug.rref_with_pivots();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv[(r, c)] = red[(r, n + c)].clone();
            }
        }
        Some(inv)
    }
}

/// Reduced row-echelon form of `m`.
pub fn rref(m: &Matrix) -> Matrix {
    m.rref_with_pivots().0
}

/// Null space `{v : M v = 0}` as a canonical subspace.
pub fn kernel(m: &Matrix) -> Subspace {
    let (red, pivots) = m.rref_with_pivots();
    let n = m.cols();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = zero_vector(n);
        v[free] = Rational::one();
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = -red[(row, free)].clone();
        }
        basis.push(v);
    }
    Subspace::span_unchecked(basis, n)
}

/// A particular solution of `M x = b`, or `None` when the system is inconsistent.
pub fn solve(m: &Matrix, b: &[Rational]) -> Result<Option<Vector>> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: b.len(),
        });
    }
    let n = m.cols();
    let mut aug = Matrix::zeros(m.rows(), n + 1);
    for r in 0..m.rows() {
        for c in 0..n {
            aug[(r, c)] = m[(r, c)].clone();
        }
        aug[(r, n)] = b[r].clone();
    }
    let (red, pivots) = aug.rref_with_pivots();
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = zero_vector(n);
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = red[(row, n)].clone();
    }
    Ok(Some(x))
}

/// A linear subspace of `Q^n`, stored as a reduced row-echelon basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(n={}, basis=[", self.ambient_dim)?;
        for (i, b) in self.basis.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("(")?;
            for (j, x) in b.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")?;
        }
        f.write_str("])")
    }
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: (0..ambient_dim).map(|i| unit_vector(ambient_dim, i)).collect(),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Canonical span of `vectors`, each of length `ambient_dim`.
    pub fn span(vectors: &[Vector], ambient_dim: usize) -> Result<Self> {
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: v.len(),
                });
            }
        }
        Ok(Self::span_unchecked(vectors.to_vec(), ambient_dim))
    }

    pub(crate) fn span_unchecked(vectors: Vec<Vector>, ambient_dim: usize) -> Self {
        let rows = vectors.len();
        let m = Matrix {
            rows,
            cols: ambient_dim,
            entries: vectors.into_iter().flatten().collect(),
        };
        let (red, pivots) = m.rref_with_pivots();
        let basis = (0..pivots.len()).map(|r| red.row(r).to_vec()).collect();
        Subspace {
            ambient_dim,
            basis,
            pivots,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient_dim
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_ambient(&self, n: usize) -> Result<()> {
        if n != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: n,
            });
        }
        Ok(())
    }

    /// Coordinates of `v` in this subspace's basis, if `v` lies in it.
    ///
    /// Because the basis is in RREF, the candidate coordinates are the
    /// entries of `v` at the pivot columns.
    pub fn coordinates(&self, v: &[Rational]) -> Result<Option<Vector>> {
        self.check_ambient(v.len())?;
        let coords: Vector = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let rebuilt = combine(self.ambient_dim, &coords, &self.basis);
        Ok((rebuilt.as_slice() == v).then_some(coords))
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool> {
        Ok(self.coordinates(v)?.is_some())
    }

    /// `v` minus its component along the pivot coordinates; zero iff `v` is in the subspace.
    pub fn reduce(&self, v: &[Rational]) -> Result<Vector> {
        self.check_ambient(v.len())?;
        let mut out = v.to_vec();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            let c = out[p].clone();
            if !c.is_zero() {
                axpy(&mut out, &-c, b);
            }
        }
        Ok(out)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        other.check_ambient(self.ambient_dim)?;
        for b in &self.basis {
            if !other.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other.ambient_dim)?;
        let vectors: Vec<Vector> = self.basis.iter().chain(&other.basis).cloned().collect();
        Ok(Self::span_unchecked(vectors, self.ambient_dim))
    }

    /// Adds vectors to the subspace.
    pub fn extended(&self, vectors: &[Vector]) -> Result<Subspace> {
        for v in vectors {
            self.check_ambient(v.len())?;
        }
        let all: Vec<Vector> = self.basis.iter().chain(vectors).cloned().collect();
        Ok(Self::span_unchecked(all, self.ambient_dim))
    }

    /// Orthogonal complement under the standard dot product.
    pub fn perp(&self) -> Subspace {
        let m = Matrix {
            rows: self.basis.len(),
            cols: self.ambient_dim,
            entries: self.basis.iter().flatten().cloned().collect(),
        };
        kernel(&m)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other.ambient_dim)?;
        Ok(self.perp().sum(&other.perp())?.perp())
    }

    /// Indices not used as pivots; their unit vectors span a complement.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient_dim];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient_dim).filter(|&c| !is_pivot[c]).collect()
    }

    /// Basis vectors as the columns of an `n x dim` matrix.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_columns(&self.basis, self.ambient_dim).expect("basis vectors have ambient length")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(values: &[i64]) -> Vector {
        vector_from_i64(values)
    }

    #[test]
    fn rref_examples() {
        let id = Matrix::identity(2);
        assert_eq!(rref(&id), id);
        assert_eq!(
            rref(&Matrix::from_i64(&[&[2, 4], &[1, 2]])),
            Matrix::from_i64(&[&[1, 2], &[0, 0]])
        );
        assert_eq!(rref(&Matrix::from_i64(&[&[0, 1], &[1, 0]])), id);
    }

    #[test]
    fn span_examples() {
        assert_eq!(Subspace::span(&[], 3).unwrap().dim(), 0);
        let s = Subspace::span(&[v(&[1, 1]), v(&[2, 2])], 2).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(s.basis(), &[v(&[1, 1])]);
        let s = Subspace::span(&[v(&[1, 0]), v(&[1, 1])], 2).unwrap();
        assert!(s.is_full());
        assert_eq!(s, Subspace::full(2));
    }

    #[test]
    fn span_rejects_wrong_length() {
        assert!(matches!(
            Subspace::span(&[v(&[1, 0, 0])], 2),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn subspace_set_operations() {
        let x = Subspace::span(&[v(&[1, 0])], 2).unwrap();
        let y = Subspace::span(&[v(&[0, 1])], 2).unwrap();
        assert!(x.contains(&v(&[2, 0])).unwrap());
        assert!(!x.contains(&v(&[2, 1])).unwrap());
        assert!(x.intersect(&y).unwrap().is_zero());
        assert!(x.sum(&y).unwrap().is_full());
        let k = kernel(&Matrix::from_i64(&[&[1, 1]]));
        assert_eq!(k, Subspace::span(&[v(&[1, -1])], 2).unwrap());
        assert!(x.contains(&v(&[1])).is_err());
    }

    #[test]
    fn coordinates_use_pivots() {
        let s = Subspace::span(&[v(&[1, 2, 3]), v(&[0, 1, 1])], 3).unwrap();
        let target = v(&[2, 5, 7]);
        let c = s.coordinates(&target).unwrap().unwrap();
        assert_eq!(combine(3, &c, s.basis()), target);
        assert!(s.coordinates(&v(&[0, 0, 1])).unwrap().is_none());
    }

    #[test]
    fn determinant_and_inverse() {
        let m = Matrix::from_i64(&[&[2, 1], &[7, 4]]);
        assert_eq!(m.determinant().unwrap(), rat(1));
        let inv = m.inverse().unwrap();
        assert_eq!(inv.checked_mul(&m).unwrap(), Matrix::identity(2));
        assert!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
        let p = Matrix::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 3]]);
        assert_eq!(p.determinant().unwrap(), rat(-3));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = Matrix::from_i64(&[&[1, 1], &[1, -1]]);
        let x = solve(&m, &v(&[3, 1])).unwrap().unwrap();
        assert_eq!(x, v(&[2, 1]));
        let sing = Matrix::from_i64(&[&[1, 1], &[2, 2]]);
        assert!(solve(&sing, &v(&[1, 3])).unwrap().is_none());
    }
}
