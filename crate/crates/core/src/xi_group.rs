//! Covering pairs `(A^{-1}, ξ)` of unit groups, linear ξ-groups in product
//! form `G = {x0 + x1 : p(x0) = 0, x1 ∈ V1}` and their tangent spaces.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{matrix_extension, GradedAlgebra};
use crate::error::{Error, Result};
use crate::huliu::{closure_report, verify_all};
use crate::linalg::{kernel, solve, sub, to_f64, unit_vector, Matrix, Rational, Subspace, Vector};
use crate::numeric::{expm, numeric_rank, singular_values, DMatrix};
use crate::passages::derive_huliu;
use crate::report::{Clause, Report, Witness};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const RANK_GAP_RATIO: f64 = 1e6;

/// A faithful unital representation of a graded algebra by square
/// matrices, together with a faithful representation of its even part used
/// to state the even constraints.
#[derive(Debug, Clone)]
pub struct MatrixRealization {
    graded: GradedAlgebra,
    size: usize,
    images: Vec<Matrix>,
    even_size: usize,
    even_images: Vec<Matrix>,
    left_inverse: Matrix,
    images_f64: Vec<DMatrix>,
    even_images_f64: Vec<DMatrix>,
    left_inverse_f64: DMatrix,
}

fn flatten(m: &Matrix) -> Vector {
    m.entries().to_vec()
}

fn sum_images(size: usize, coeffs: &[Rational], images: &[Matrix]) -> Matrix {
    let mut out = Matrix::zeros(size, size);
    for (c, m) in coeffs.iter().zip(images) {
        if !c.is_zero() {
            out = out.checked_add(&m.scaled(c)).expect("same shape");
        }
    }
    out
}

fn sum_images_f64(size: usize, coeffs: &[f64], images: &[DMatrix]) -> DMatrix {
    let mut out = DMatrix::zeros(size, size);
    for (&c, m) in coeffs.iter().zip(images) {
        if c != 0.0 {
            out = out.add(&m.scale(c));
        }
    }
    out
}

fn check_square(images: &[Matrix], size: usize, what: &str) -> Result<()> {
    for (i, m) in images.iter().enumerate() {
        if m.rows() != size || m.cols() != size {
            return Err(Error::Realization(format!(
                "{what} image {i} is {}x{}, expected {size}x{size}",
                m.rows(),
                m.cols()
            )));
        }
    }
    Ok(())
}

/// `(B^T B)^{-1} B^T` for the matrix `B` whose columns are the flattened
/// images; `None` if the images are dependent.
fn flattened_left_inverse(images: &[Matrix], size: usize) -> Option<Matrix> {
    let cols: Vec<Vector> = images.iter().map(flatten).collect();
    let b = Matrix::from_columns(&cols, size * size).ok()?;
    let bt = b.transpose();
    let gram = bt.checked_mul(&b).ok()?;
    gram.inverse()?.checked_mul(&bt).ok()
}

impl MatrixRealization {
    /// Verifies that both maps are injective, multiplicative on basis pairs
    /// and send the unit to the identity.
    pub fn new(graded: GradedAlgebra, images: Vec<Matrix>, even_images: Vec<Matrix>) -> Result<Self> {
        let n = graded.dim();
        let unit = graded.algebra().unit().cloned().ok_or(Error::NotUnital)?;
        if images.len() != n {
            return Err(Error::Realization(format!("expected {n} images, got {}", images.len())));
        }
        let evens = graded.even_indices().to_vec();
        if even_images.len() != evens.len() {
            return Err(Error::Realization(format!(
                "expected {} even images, got {}",
                evens.len(),
                even_images.len()
            )));
        }
        let size = images.first().map_or(0, Matrix::rows);
        let even_size = even_images.first().map_or(0, Matrix::rows);
        check_square(&images, size, "algebra")?;
        check_square(&even_images, even_size, "even")?;

        let product = graded.algebra().product();
        for i in 0..n {
            for j in 0..n {
                let lhs = sum_images(size, product.basis_product(i, j), &images);
                let rhs = images[i].checked_mul(&images[j])?;
                if lhs != rhs {
                    return Err(Error::Realization(format!(
                        "not multiplicative on basis pair ({i}, {j})"
                    )));
                }
            }
        }
        if sum_images(size, &unit, &images) != Matrix::identity(size) {
            return Err(Error::Realization("unit is not sent to the identity".into()));
        }
        let left_inverse = flattened_left_inverse(&images, size)
            .ok_or_else(|| Error::Realization("images are linearly dependent".into()))?;

        let even_coords = |v: &[Rational]| -> Vector { evens.iter().map(|&i| v[i].clone()).collect() };
        for (a, &i) in evens.iter().enumerate() {
            for (b, &j) in evens.iter().enumerate() {
                let lhs = sum_images(even_size, &even_coords(product.basis_product(i, j)), &even_images);
                let rhs = even_images[a].checked_mul(&even_images[b])?;
                if lhs != rhs {
                    return Err(Error::Realization(format!(
                        "even block not multiplicative on basis pair ({i}, {j})"
                    )));
                }
            }
        }
        if sum_images(even_size, &even_coords(&unit), &even_images) != Matrix::identity(even_size) {
            return Err(Error::Realization("even unit is not sent to the identity".into()));
        }
        if !evens.is_empty() && flattened_left_inverse(&even_images, even_size).is_none() {
            return Err(Error::Realization("even images are linearly dependent".into()));
        }

        Ok(MatrixRealization {
            size,
            even_size,
            images_f64: images.iter().map(DMatrix::from_rational).collect(),
            even_images_f64: even_images.iter().map(DMatrix::from_rational).collect(),
            left_inverse_f64: DMatrix::from_rational(&left_inverse),
            graded,
            images,
            even_images,
            left_inverse,
        })
    }

    /// `x -> (y -> xy)` on the whole algebra; the even block is the same
    /// action of `A0` on itself.
    pub fn left_regular(graded: GradedAlgebra) -> Result<Self> {
        let n = graded.dim();
        let evens = graded.even_indices().to_vec();
        let images: Vec<Matrix> = (0..n)
            .map(|i| graded.algebra().left_multiplication(&unit_vector(n, i)))
            .collect();
        let even_images = evens
            .iter()
            .map(|&i| {
                let full = &images[i];
                let entries = evens
                    .iter()
                    .flat_map(|&r| evens.iter().map(move |&c| full[(r, c)].clone()))
                    .collect();
                Matrix::new(evens.len(), evens.len(), entries).expect("square block")
            })
            .collect();
        Self::new(graded, images, even_images)
    }

    /// `Mat(n) ⊕ εMat(n)` as `x0 + εx1 -> [[x0, x1], [0, x0]]`, with even
    /// block `x0` itself.
    pub fn matrix_extension_block(n: usize) -> Result<Self> {
        let graded = matrix_extension(n);
        let mut images = Vec::with_capacity(2 * n * n);
        let mut even_images = Vec::with_capacity(n * n);
        for odd in [false, true] {
            for i in 0..n {
                for j in 0..n {
                    let mut m = Matrix::zeros(2 * n, 2 * n);
                    let mut e = Matrix::zeros(n, n);
                    let one = Rational::one();
                    if odd {
                        m = set(m, i, n + j, one);
                    } else {
                        m = set(m, i, j, one.clone());
                        m = set(m, n + i, n + j, one.clone());
                        e = set(e, i, j, one);
                        even_images.push(e);
                    }
                    images.push(m);
                }
            }
        }
        Self::new(graded, images, even_images)
    }

    pub fn graded(&self) -> &GradedAlgebra {
        &self.graded
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn even_size(&self) -> usize {
        self.even_size
    }

    pub fn images(&self) -> &[Matrix] {
        &self.images
    }

    pub fn embed(&self, x: &[Rational]) -> Matrix {
        sum_images(self.size, x, &self.images)
    }

    pub fn embed_f64(&self, x: &[f64]) -> DMatrix {
        sum_images_f64(self.size, x, &self.images_f64)
    }

    /// Exact inverse of [`embed`](Self::embed).
    pub fn coordinates(&self, m: &Matrix) -> Result<Vector> {
        let coords = self.left_inverse.apply(&flatten(m))?;
        if &self.embed(&coords) != m {
            return Err(Error::Realization("matrix is outside the realized algebra".into()));
        }
        Ok(coords)
    }

    /// Least-squares coordinates of `m`; errors when `m` is farther than
    /// `tol * max(1, |m|)` from the realized algebra.
    pub fn coordinates_f64(&self, m: &DMatrix, tol: f64) -> Result<Vec<f64>> {
        let coords = self.left_inverse_f64.apply(&m.row_major());
        let off = self.embed_f64(&coords).sub(m).max_abs();
        if off > tol * m.max_abs().max(1.0) {
            return Err(Error::Realization(format!(
                "matrix is {off:e} away from the realized algebra"
            )));
        }
        Ok(coords)
    }

    fn even_coords_f64(&self, x: &[f64]) -> Vec<f64> {
        self.graded.even_indices().iter().map(|&i| x[i]).collect()
    }

    /// The even block of `x0`, the matrix the constraints act on.
    pub fn even_block(&self, x: &[Rational]) -> Matrix {
        let coords: Vector = self.graded.even_indices().iter().map(|&i| x[i].clone()).collect();
        sum_images(self.even_size, &coords, &self.even_images)
    }

    pub fn even_block_f64(&self, x: &[f64]) -> DMatrix {
        sum_images_f64(self.even_size, &self.even_coords_f64(x), &self.even_images_f64)
    }

    pub fn operator_norm(&self, x: &[f64]) -> f64 {
        self.embed_f64(x).operator_norm()
    }
}

fn set(mut m: Matrix, r: usize, c: usize, v: Rational) -> Matrix {
    let cols = m.cols();
    let mut entries = m.entries().to_vec();
    entries[r * cols + c] = v;
    m = Matrix::new(m.rows(), cols, entries).expect("same shape");
    m
}

/// `ξ(x0 + x1) = x0`.
pub fn xi(graded: &GradedAlgebra, x: &[Rational]) -> Vector {
    graded.even_part(x)
}

/// `x^{-1} = x0^{-1} - x0^{-1} x1 x0^{-1}`; `x` is a unit exactly when `x0`
/// is invertible in `A0`.
pub fn invert_unit(graded: &GradedAlgebra, x: &[Rational]) -> Result<Vector> {
    let n = graded.dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.len(),
        });
    }
    let unit = graded.algebra().unit().cloned().ok_or(Error::NotUnital)?;
    let x0 = graded.even_part(x);
    let x1 = graded.odd_part(x);
    let evens = graded.even_indices();
    let cols: Vec<Vector> = evens
        .iter()
        .map(|&j| graded.multiply(&x0, &unit_vector(n, j)).expect("lengths match"))
        .collect();
    let system = Matrix::from_columns(&cols, n)?;
    let c = solve(&system, &unit)?.ok_or(Error::NotAUnit)?;
    let mut y = vec![Rational::zero(); n];
    for (&j, cj) in evens.iter().zip(c) {
        y[j] = cj;
    }
    if graded.multiply(&y, &x0)? != unit {
        return Err(Error::NotAUnit);
    }
    let correction = graded.multiply(&graded.multiply(&y, &x1)?, &y)?;
    let inv = sub(&y, &correction);
    assert_eq!(graded.multiply(x, &inv)?, unit, "right inverse");
    assert_eq!(graded.multiply(&inv, x)?, unit, "left inverse");
    Ok(inv)
}

/// The unit group `A^{-1}` with the idempotent endomorphism `ξ`.
#[derive(Debug, Clone)]
pub struct CoveringPair {
    graded: GradedAlgebra,
}

impl CoveringPair {
    pub fn new(graded: GradedAlgebra) -> Result<Self> {
        if graded.algebra().unit().is_none() {
            return Err(Error::NotUnital);
        }
        Ok(CoveringPair { graded })
    }

    pub fn graded(&self) -> &GradedAlgebra {
        &self.graded
    }

    pub fn xi(&self, x: &[Rational]) -> Vector {
        xi(&self.graded, x)
    }

    pub fn is_unit(&self, x: &[Rational]) -> bool {
        invert_unit(&self.graded, x).is_ok()
    }

    pub fn inverse(&self, x: &[Rational]) -> Result<Vector> {
        invert_unit(&self.graded, x)
    }

    pub fn multiply(&self, x: &[Rational], y: &[Rational]) -> Result<Vector> {
        self.graded.multiply(x, y)
    }

    /// `ξ(ξ(x)) = ξ(x)` and `ξ(xy) = ξ(x)ξ(y)`.
    pub fn xi_laws_hold(&self, x: &[Rational], y: &[Rational]) -> Result<bool> {
        let idempotent = self.xi(&self.xi(x)) == self.xi(x);
        let multiplicative = self.xi(&self.multiply(x, y)?) == self.multiply(&self.xi(x), &self.xi(y))?;
        Ok(idempotent && multiplicative)
    }
}

/// Named polynomial constraint families on the even block `ρ(x0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EvenConstraint {
    None,
    /// `ρ(x0)^T ρ(x0) = I`
    Orthogonal,
    /// `det ρ(x0) = 1`
    SpecialLinear,
    /// `ρ(x0) - I` strictly upper triangular
    UnipotentBlock,
}

impl EvenConstraint {
    pub const ALL: [EvenConstraint; 4] = [
        EvenConstraint::None,
        EvenConstraint::Orthogonal,
        EvenConstraint::SpecialLinear,
        EvenConstraint::UnipotentBlock,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EvenConstraint::None => "none",
            EvenConstraint::Orthogonal => "orthogonal",
            EvenConstraint::SpecialLinear => "special-linear",
            EvenConstraint::UnipotentBlock => "unipotent-block",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }

    /// Constraint values at a block; all vanish on the group.
    pub fn residuals(self, block: &DMatrix) -> Vec<f64> {
        let k = block.rows();
        match self {
            EvenConstraint::None => Vec::new(),
            EvenConstraint::Orthogonal => {
                let g = block.transpose().mul(block).sub(&DMatrix::identity(k));
                (0..k)
                    .flat_map(|i| (i..k).map(move |j| (i, j)))
                    .map(|(i, j)| g.get(i, j))
                    .collect()
            }
            EvenConstraint::SpecialLinear => vec![block.determinant() - 1.0],
            EvenConstraint::UnipotentBlock => (0..k)
                .flat_map(|i| (0..=i).map(move |j| (i, j)))
                .map(|(i, j)| block.get(i, j) - if i == j { 1.0 } else { 0.0 })
                .collect(),
        }
    }

    /// Rows of the derivative at the identity, as functionals on the even
    /// coordinates.
    pub fn jacobian_at_unit(self, even_images: &[Matrix]) -> Vec<Vector> {
        let k = even_images.first().map_or(0, Matrix::rows);
        let functional = |f: &dyn Fn(&Matrix) -> Rational| -> Vector { even_images.iter().map(f).collect() };
        match self {
            EvenConstraint::None => Vec::new(),
            EvenConstraint::Orthogonal => (0..k)
                .flat_map(|i| (i..k).map(move |j| (i, j)))
                .map(|(i, j)| functional(&|m: &Matrix| m[(i, j)].clone() + m[(j, i)].clone()))
                .collect(),
            EvenConstraint::SpecialLinear => vec![functional(&|m: &Matrix| m.trace())],
            EvenConstraint::UnipotentBlock => (0..k)
                .flat_map(|i| (0..=i).map(move |j| (i, j)))
                .map(|(i, j)| functional(&|m: &Matrix| m[(i, j)].clone()))
                .collect(),
        }
    }
}

/// A ξ-group in product form over a matrix realization.
#[derive(Debug, Clone)]
pub struct LinearXiGroup {
    realization: MatrixRealization,
    constraints: Vec<EvenConstraint>,
    odd_subspace: Subspace,
    tolerance: f64,
    odd_frame: Vec<Vec<f64>>,
}

impl LinearXiGroup {
    /// `odd_subspace` lives in the full coordinate space and must lie inside
    /// the odd part.
    pub fn new(
        realization: MatrixRealization,
        constraints: Vec<EvenConstraint>,
        odd_subspace: Subspace,
        tolerance: f64,
    ) -> Result<Self> {
        let g = realization.graded();
        if odd_subspace.ambient_dim() != g.dim() {
            return Err(Error::DimensionMismatch {
                expected: g.dim(),
                found: odd_subspace.ambient_dim(),
            });
        }
        if !odd_subspace.is_subspace_of(&g.odd_subspace())? {
            return Err(Error::InvalidInput("odd subspace has even components".into()));
        }
        if !(tolerance.is_finite() && tolerance >= 0.0) {
            return Err(Error::InvalidInput("tolerance must be a nonnegative real".into()));
        }
        let odd_frame = orthonormal_frame(odd_subspace.basis());
        let group = LinearXiGroup {
            realization,
            constraints,
            odd_subspace,
            tolerance,
            odd_frame,
        };
        let unit: Vec<f64> = group
            .realization
            .graded()
            .algebra()
            .unit()
            .expect("unital")
            .iter()
            .map(to_f64)
            .collect();
        if group.constraint_residual(&unit) > tolerance {
            return Err(Error::InvalidInput("identity violates the constraints".into()));
        }
        Ok(group)
    }

    /// All of `A1` as the odd subspace.
    pub fn with_full_odd(realization: MatrixRealization, constraints: Vec<EvenConstraint>) -> Result<Self> {
        let odd = realization.graded().odd_subspace();
        Self::new(realization, constraints, odd, DEFAULT_TOLERANCE)
    }

    pub fn realization(&self) -> &MatrixRealization {
        &self.realization
    }

    pub fn constraints(&self) -> &[EvenConstraint] {
        &self.constraints
    }

    pub fn odd_subspace(&self) -> &Subspace {
        &self.odd_subspace
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn constraint_residual(&self, x: &[f64]) -> f64 {
        let block = self.realization.even_block_f64(x);
        self.constraints
            .iter()
            .flat_map(|c| c.residuals(&block))
            .fold(0.0, |m, r| m.max(libm::fabs(r)))
    }

    /// Sup-norm distance of the odd part of `x` from `V1`.
    pub fn odd_distance(&self, x: &[f64]) -> f64 {
        let g = self.realization.graded();
        let mut r: Vec<f64> = (0..x.len())
            .map(|i| if g.is_even_index(i) { 0.0 } else { x[i] })
            .collect();
        for q in &self.odd_frame {
            let c: f64 = q.iter().zip(&r).map(|(a, b)| a * b).sum();
            for (ri, qi) in r.iter_mut().zip(q) {
                *ri -= c * qi;
            }
        }
        r.iter().fold(0.0, |m, &v| m.max(libm::fabs(v)))
    }

    pub fn membership_residual(&self, x: &[f64]) -> f64 {
        self.constraint_residual(x).max(self.odd_distance(x))
    }

    fn jacobian_rows(&self) -> Vec<Vector> {
        self.constraints
            .iter()
            .flat_map(|c| c.jacobian_at_unit(&self.realization.even_images))
            .collect()
    }

    /// `ker(dp at 1) ⊕ V1`, computed exactly: every supported family has
    /// rational coefficients.
    pub fn tangent_space(&self) -> Result<TangentSpace> {
        let g = self.realization.graded();
        let n = g.dim();
        let evens = g.even_indices();
        let rows = self.jacobian_rows();
        let jac = if rows.is_empty() {
            Matrix::zeros(0, evens.len())
        } else {
            Matrix::from_rows(&rows, evens.len())?
        };
        let even_kernel = kernel(&jac);
        let mut basis: Vec<Vector> = even_kernel
            .basis()
            .iter()
            .map(|k| {
                let mut v = vec![Rational::zero(); n];
                for (&i, c) in evens.iter().zip(k) {
                    v[i] = c.clone();
                }
                v
            })
            .collect();
        basis.extend(self.odd_subspace.basis().iter().cloned());
        let subspace = Subspace::span(&basis, n)?;
        Ok(TangentSpace {
            even_dim: even_kernel.dim(),
            odd_dim: self.odd_subspace.dim(),
            subspace,
            exact: true,
        })
    }

    /// Tangent dimension from a central-difference Jacobian and a singular
    /// value gap test.
    pub fn numeric_tangent_dimension(&self, step: f64) -> Result<usize> {
        let g = self.realization.graded();
        let unit: Vec<f64> = g.algebra().unit().expect("unital").iter().map(to_f64).collect();
        let evens = g.even_indices();
        let residual_vector = |x: &[f64]| -> Vec<f64> {
            let block = self.realization.even_block_f64(x);
            self.constraints.iter().flat_map(|c| c.residuals(&block)).collect()
        };
        let m = residual_vector(&unit).len();
        if m == 0 {
            return Ok(evens.len() + self.odd_subspace.dim());
        }
        let mut jac = DMatrix::zeros(m, evens.len());
        for (col, &i) in evens.iter().enumerate() {
            let mut plus = unit.clone();
            let mut minus = unit.clone();
            plus[i] += step;
            minus[i] -= step;
            let (fp, fm) = (residual_vector(&plus), residual_vector(&minus));
            for r in 0..m {
                jac.set(r, col, (fp[r] - fm[r]) / (2.0 * step));
            }
        }
        let rank = numeric_rank(&singular_values(&jac), step, RANK_GAP_RATIO)?;
        Ok(evens.len() - rank + self.odd_subspace.dim())
    }

    /// Seeded sampler: `x0 = exp(X0)` for a random even tangent direction,
    /// `x1` uniform over a box in `V1`.
    pub fn sampler(&self, seed: u64) -> Result<XiSampler<'_>> {
        let tangent = self.tangent_space()?;
        let g = self.realization.graded();
        let even_directions = tangent
            .subspace
            .basis()
            .iter()
            .filter(|v| (0..v.len()).all(|i| g.is_even_index(i) || v[i].is_zero()))
            .map(|v| v.iter().map(to_f64).collect())
            .collect();
        let odd_directions = self
            .odd_subspace
            .basis()
            .iter()
            .map(|v| v.iter().map(to_f64).collect())
            .collect();
        Ok(XiSampler {
            group: self,
            rng: ChaCha8Rng::seed_from_u64(seed),
            even_directions,
            odd_directions,
        })
    }

    /// Samples pairs `(x, h)` and checks `ξ(x) h ξ(x)^{-1} ∈ G`, `xh ∈ G`
    /// and `x^{-1} ∈ G`, each within the tolerance scaled by operator norms.
    pub fn check_xi_group(&self, samples: usize, seed: u64) -> Result<XiCheckReport> {
        let mut sampler = self.sampler(seed)?;
        let r = &self.realization;
        let g = r.graded();
        let mut report = XiCheckReport {
            samples,
            worst_conjugation: 0.0,
            worst_product: 0.0,
            worst_inverse: 0.0,
            tolerance: self.tolerance,
            violation: None,
        };
        for _ in 0..samples {
            let x = sampler.sample()?;
            let h = sampler.sample()?;
            let ex = r.embed_f64(&x);
            let eh = r.embed_f64(&h);
            let x0: Vec<f64> = (0..x.len())
                .map(|i| if g.is_even_index(i) { x[i] } else { 0.0 })
                .collect();
            let ex0 = r.embed_f64(&x0);
            let ex0_inv = ex0
                .inverse()
                .ok_or_else(|| Error::Sampling("sampled element has singular even part".into()))?;
            let ex_inv = ex
                .inverse()
                .ok_or_else(|| Error::Sampling("sampled element is singular".into()))?;
            let scale = 1.0f64.max(ex0.operator_norm() * eh.operator_norm() * ex0_inv.operator_norm());
            let loose = self.tolerance * 1e3;
            let checks = [
                (XiCheckKind::Conjugation, ex0.mul(&eh).mul(&ex0_inv)),
                (XiCheckKind::Product, ex.mul(&eh)),
                (XiCheckKind::Inverse, ex_inv),
            ];
            for (kind, m) in checks {
                let coords = r.coordinates_f64(&m, loose)?;
                let residual = self.membership_residual(&coords);
                let worst = match kind {
                    XiCheckKind::Conjugation => &mut report.worst_conjugation,
                    XiCheckKind::Product => &mut report.worst_product,
                    XiCheckKind::Inverse => &mut report.worst_inverse,
                };
                *worst = worst.max(residual);
                let allowed = self.tolerance * scale;
                if residual > allowed && report.violation.is_none() {
                    report.violation = Some(XiViolation {
                        kind,
                        x: x.clone(),
                        h: h.clone(),
                        residual,
                        allowed,
                    });
                }
            }
        }
        Ok(report)
    }

    /// Residuals along `t -> exp(tX)` in the realization.
    pub fn exp_curve_check(&self, x: &[f64], t_grid: &[f64]) -> Result<CurveReport> {
        let ex = self.realization.embed_f64(x);
        self.curve_check(t_grid, |t| expm(&ex.scale(t)))
    }

    /// Residuals along the chord `t -> 1 + tX`, which shares `a'(0) = X`
    /// with the exponential curve.
    pub fn chord_curve_check(&self, x: &[f64], t_grid: &[f64]) -> Result<CurveReport> {
        let ex = self.realization.embed_f64(x);
        let id = DMatrix::identity(self.realization.size());
        self.curve_check(t_grid, |t| id.add(&ex.scale(t)))
    }

    fn curve_check(&self, t_grid: &[f64], curve: impl Fn(f64) -> DMatrix) -> Result<CurveReport> {
        let mut points = Vec::with_capacity(t_grid.len());
        for &t in t_grid {
            let coords = self.realization.coordinates_f64(&curve(t), self.tolerance * 1e3)?;
            points.push(CurvePoint {
                t,
                constraint_residual: self.constraint_residual(&coords),
                odd_distance: self.odd_distance(&coords),
            });
        }
        Ok(CurveReport {
            points,
            tolerance: self.tolerance,
        })
    }
}

fn orthonormal_frame(basis: &[Vector]) -> Vec<Vec<f64>> {
    let mut frame: Vec<Vec<f64>> = Vec::new();
    for b in basis {
        let mut v: Vec<f64> = b.iter().map(to_f64).collect();
        for _ in 0..2 {
            for q in &frame {
                let c: f64 = q.iter().zip(&v).map(|(a, b)| a * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= c * qi;
                }
            }
        }
        let norm = libm::sqrt(v.iter().map(|a| a * a).sum());
        if norm > 0.0 {
            frame.push(v.into_iter().map(|a| a / norm).collect());
        }
    }
    frame
}

/// Seeded generator of group elements.
pub struct XiSampler<'a> {
    group: &'a LinearXiGroup,
    rng: ChaCha8Rng,
    even_directions: Vec<Vec<f64>>,
    odd_directions: Vec<Vec<f64>>,
}

impl XiSampler<'_> {
    pub fn sample(&mut self) -> Result<Vec<f64>> {
        let r = &self.group.realization;
        let n = r.graded().dim();
        let mut x0 = vec![0.0; n];
        for d in &self.even_directions {
            let c: f64 = self.rng.gen_range(-1.0..=1.0);
            for (xi, di) in x0.iter_mut().zip(d) {
                *xi += c * di;
            }
        }
        let tol = self.group.tolerance;
        let mut x = r.coordinates_f64(&expm(&r.embed_f64(&x0)), tol * 1e3)?;
        // the exponential of an even element is even up to roundoff
        for (i, c) in x.iter_mut().enumerate() {
            if !r.graded().is_even_index(i) {
                *c = 0.0;
            }
        }
        for d in &self.odd_directions {
            let c: f64 = self.rng.gen_range(-1.0..=1.0);
            for (xi, di) in x.iter_mut().zip(d) {
                *xi += c * di;
            }
        }
        let scale = r.operator_norm(&x).max(1.0);
        let residual = self.group.membership_residual(&x);
        if residual > tol * scale {
            return Err(Error::Sampling(format!("sample misses the group by {residual:e}")));
        }
        Ok(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XiCheckKind {
    Conjugation,
    Product,
    Inverse,
}

impl XiCheckKind {
    pub fn name(self) -> &'static str {
        match self {
            XiCheckKind::Conjugation => "conjugation",
            XiCheckKind::Product => "product",
            XiCheckKind::Inverse => "inverse",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct XiViolation {
    pub kind: XiCheckKind,
    pub x: Vec<f64>,
    pub h: Vec<f64>,
    pub residual: f64,
    pub allowed: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct XiCheckReport {
    pub samples: usize,
    pub worst_conjugation: f64,
    pub worst_product: f64,
    pub worst_inverse: f64,
    pub tolerance: f64,
    pub violation: Option<XiViolation>,
}

impl XiCheckReport {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }

    pub fn worst(&self) -> f64 {
        self.worst_conjugation.max(self.worst_product).max(self.worst_inverse)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangentSpace {
    pub subspace: Subspace,
    /// Always true for the built-in families, whose Jacobians are rational.
    pub exact: bool,
    pub even_dim: usize,
    pub odd_dim: usize,
}

impl TangentSpace {
    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }
}

/// Closure of `T` under both derived brackets, agreement of the brackets
/// computed through the realization with the coordinate brackets, and the
/// full identity suite on the restricted tensors.
pub fn verify_tangent_huliu(t: &TangentSpace, r: &MatrixRealization) -> Result<Report> {
    let g = r.graded();
    let h = derive_huliu(g)?;
    let basis = t.subspace.basis();
    let mut checked = 0;
    for x in basis {
        let mx = r.embed(x);
        for y in basis {
            let my = r.embed(y);
            let my0 = r.embed(&g.even_part(y));
            let via_angle = mx.checked_mul(&my0)?.checked_sub(&my0.checked_mul(&mx)?)?;
            let via_square = mx.checked_mul(&my)?.checked_sub(&my.checked_mul(&mx)?)?;
            for (via, tensor) in [(via_angle, h.angle()), (via_square, h.square())] {
                checked += 1;
                let lhs = r.coordinates(&via)?;
                let rhs = tensor.apply(x, y)?;
                if lhs != rhs {
                    return Ok(Report::failed(
                        Witness {
                            clause: Clause::RealizationAgreement,
                            inputs: vec![x.clone(), y.clone()],
                            lhs,
                            rhs,
                        },
                        checked,
                    ));
                }
            }
        }
    }
    let closure = closure_report(h.angle(), h.square(), &t.subspace)?;
    let report = Report::passed(checked).and_then(|| closure);
    if !report.holds() {
        return Ok(report);
    }
    let angle = h
        .angle()
        .restrict(&t.subspace)?
        .expect("closed under the angle bracket");
    let square = h
        .square()
        .restrict(&t.subspace)?
        .expect("closed under the square bracket");
    Ok(report.and_then(|| verify_all(&angle, &square)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub t: f64,
    pub constraint_residual: f64,
    pub odd_distance: f64,
}

impl CurvePoint {
    pub fn residual(&self) -> f64 {
        self.constraint_residual.max(self.odd_distance)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveReport {
    pub points: Vec<CurvePoint>,
    pub tolerance: f64,
}

impl CurveReport {
    pub fn max_residual(&self) -> f64 {
        self.points.iter().map(CurvePoint::residual).fold(0.0, f64::max)
    }

    pub fn within_tolerance(&self) -> bool {
        self.max_residual() <= self.tolerance
    }

    /// Fitted slope of `log residual` against `log t`.
    pub fn log_slope(&self) -> Option<f64> {
        let ts: Vec<f64> = self.points.iter().map(|p| p.t).collect();
        let rs: Vec<f64> = self.points.iter().map(CurvePoint::residual).collect();
        crate::numeric::log_slope(&ts, &rs)
    }
}

/// Diagnostic text for a violation.
pub fn describe_violation(v: &XiViolation) -> String {
    format!(
        "{} check: residual {:e} exceeds {:e}",
        v.kind.name(),
        v.residual,
        v.allowed
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::upper_triangular;
    use crate::linalg::vector_from_i64;

    fn v(values: &[i64]) -> Vector {
        vector_from_i64(values)
    }

    fn orthogonal_group(n: usize) -> LinearXiGroup {
        let r = MatrixRealization::matrix_extension_block(n).unwrap();
        LinearXiGroup::with_full_odd(r, vec![EvenConstraint::Orthogonal]).unwrap()
    }

    #[test]
    fn inverse_examples() {
        let g = upper_triangular();
        assert_eq!(invert_unit(&g, &v(&[1, 1, 0])).unwrap(), v(&[1, 1, 0]));
        assert_eq!(invert_unit(&g, &v(&[1, 1, 1])).unwrap(), v(&[1, 1, -1]));
        assert!(matches!(invert_unit(&g, &v(&[0, 0, 1])), Err(Error::NotAUnit)));
        assert!(matches!(invert_unit(&g, &v(&[1, 0, 1])), Err(Error::NotAUnit)));
    }

    #[test]
    fn xi_examples() {
        let g = upper_triangular();
        assert_eq!(xi(&g, &v(&[2, 3, 0])), v(&[2, 3, 0]));
        assert_eq!(xi(&g, &v(&[0, 0, 5])), v(&[0, 0, 0]));
        assert_eq!(xi(&g, &v(&[1, 1, 1])), v(&[1, 1, 0]));
        let pair = CoveringPair::new(g).unwrap();
        assert!(pair.xi_laws_hold(&v(&[1, 2, 3]), &v(&[-1, 4, 2])).unwrap());
    }

    #[test]
    fn realizations_verify() {
        let r = MatrixRealization::left_regular(upper_triangular()).unwrap();
        assert_eq!(r.size(), 3);
        let x = v(&[1, 2, 3]);
        assert_eq!(r.coordinates(&r.embed(&x)).unwrap(), x);
        let b = MatrixRealization::matrix_extension_block(2).unwrap();
        assert_eq!(b.size(), 4);
        assert_eq!(b.even_size(), 2);
        let bad = MatrixRealization::new(
            upper_triangular(),
            vec![Matrix::identity(1), Matrix::identity(1), Matrix::identity(1)],
            vec![Matrix::identity(1), Matrix::identity(1)],
        );
        assert!(matches!(bad, Err(Error::Realization(_))));
    }

    #[test]
    fn tangent_examples() {
        let r = MatrixRealization::left_regular(upper_triangular()).unwrap();
        let full = LinearXiGroup::with_full_odd(r, vec![EvenConstraint::None]).unwrap();
        assert!(full.tangent_space().unwrap().subspace.is_full());

        for (n, dim) in [(2, 5), (3, 12)] {
            let g = orthogonal_group(n);
            let t = g.tangent_space().unwrap();
            assert_eq!(t.dim(), dim);
            assert_eq!(g.numeric_tangent_dimension(1e-6).unwrap(), dim);
            assert!(verify_tangent_huliu(&t, g.realization()).unwrap().holds());
        }
    }

    #[test]
    fn enlarged_tangent_space_fails_closure() {
        let g = orthogonal_group(2);
        let t = g.tangent_space().unwrap();
        // E11 is symmetric
        let enlarged = TangentSpace {
            subspace: t.subspace.extended(&[unit_vector(8, 0)]).unwrap(),
            ..t
        };
        let report = verify_tangent_huliu(&enlarged, g.realization()).unwrap();
        let w = report.witness().unwrap();
        assert!(matches!(w.clause, Clause::AngleClosure | Clause::SquareClosure));
    }

    #[test]
    fn other_families() {
        let r = MatrixRealization::matrix_extension_block(2).unwrap();
        let sl = LinearXiGroup::with_full_odd(r.clone(), vec![EvenConstraint::SpecialLinear]).unwrap();
        assert_eq!(sl.tangent_space().unwrap().dim(), 3 + 4);
        assert!(sl.check_xi_group(50, 1).unwrap().holds());
        let uni = LinearXiGroup::with_full_odd(r, vec![EvenConstraint::UnipotentBlock]).unwrap();
        let t = uni.tangent_space().unwrap();
        assert_eq!(t.dim(), 1 + 4);
        assert!(verify_tangent_huliu(&t, uni.realization()).unwrap().holds());
        assert!(uni.check_xi_group(50, 2).unwrap().holds());
    }

    #[test]
    fn xi_group_checks() {
        let g = orthogonal_group(2);
        let report = g.check_xi_group(200, 7).unwrap();
        assert!(report.holds(), "{report:?}");
        assert!(report.worst() <= 1e-9);

        let r = MatrixRealization::left_regular(upper_triangular()).unwrap();
        let full = LinearXiGroup::with_full_odd(r, vec![EvenConstraint::None]).unwrap();
        assert!(full.check_xi_group(100, 3).unwrap().holds());

        // V1 = span(εE11) is moved by rotations
        let r = MatrixRealization::matrix_extension_block(2).unwrap();
        let line = Subspace::span(&[unit_vector(8, 4)], 8).unwrap();
        let g = LinearXiGroup::new(r, vec![EvenConstraint::Orthogonal], line, DEFAULT_TOLERANCE).unwrap();
        let report = g.check_xi_group(20, 5).unwrap();
        assert_eq!(report.violation.unwrap().kind, XiCheckKind::Conjugation);
    }

    #[test]
    fn curve_examples() {
        let g = orthogonal_group(2);
        let zero = vec![0.0; 8];
        assert_eq!(g.exp_curve_check(&zero, &[0.1, 1.0]).unwrap().max_residual(), 0.0);

        // E12 - E21 is skew, E12 + E21 symmetric
        let mut skew = vec![0.0; 8];
        skew[1] = 1.0;
        skew[2] = -1.0;
        let along = g.exp_curve_check(&skew, &[0.1, 0.5, 1.0]).unwrap();
        assert!(along.max_residual() <= 1e-12);

        let mut sym = vec![0.0; 8];
        sym[1] = 1.0;
        sym[2] = 1.0;
        let off = g.exp_curve_check(&sym, &[1e-1, 1e-2, 1e-3, 1e-4]).unwrap();
        assert!(!off.within_tolerance());
        let slope = off.log_slope().unwrap();
        assert!((slope - 1.0).abs() < 0.1, "{slope}");

        let chord = g.chord_curve_check(&skew, &[1e-1, 1e-2, 1e-3, 1e-4]).unwrap();
        assert!(chord.log_slope().unwrap() >= 1.8);
    }
}
