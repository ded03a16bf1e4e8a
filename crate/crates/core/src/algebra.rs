//! Bilinear products given by structure constants, special Z2-gradings and
//! the constructors for square-zero graded algebras.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, axpy, unit_vector, zero_vector, Matrix, Rational, Vector};
use crate::report::{Clause, Report, Witness};

/// Dense structure constants `c[i][j][k]` of a bilinear map on `Q^dim`:
/// `e_i * e_j = sum_k c[i][j][k] e_k`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StructureTensor {
    dim: usize,
    data: Vec<Rational>,
}

impl core::fmt::Debug for StructureTensor {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "StructureTensor(dim={}, [", self.dim)?;
        for (n, (i, j, k, c)) in self.nonzero_entries().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({i},{j},{k})={c}")?;
        }
        f.write_str("])")
    }
}

impl StructureTensor {
    pub fn zeros(dim: usize) -> Self {
        StructureTensor {
            dim,
            data: vec![Rational::zero(); dim * dim * dim],
        }
    }

    /// Builds a tensor from sparse `(i, j, k, value)` entries; repeated
    /// positions are summed.
    pub fn from_entries<I>(dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, usize, Rational)>,
    {
        let mut t = StructureTensor::zeros(dim);
        for (i, j, k, c) in entries {
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::InvalidInput(format!(
                    "tensor index ({i}, {j}, {k}) out of range for dimension {dim}"
                )));
            }
            t.data[(i * dim + j) * dim + k] += c;
        }
        Ok(t)
    }

    /// Convenience for tests and fixtures with integer constants.
    pub fn from_i64_entries(dim: usize, entries: &[(usize, usize, usize, i64)]) -> Result<Self> {
        Self::from_entries(dim, entries.iter().map(|&(i, j, k, c)| (i, j, k, linalg::rat(c))))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.data[(i * self.dim + j) * self.dim + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, value: Rational) {
        self.data[(i * self.dim + j) * self.dim + k] = value;
    }

    /// Coordinates of `e_i * e_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[Rational] {
        let start = (i * self.dim + j) * self.dim;
        &self.data[start..start + self.dim]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize, usize, &Rational)> + '_ {
        let d = self.dim;
        self.data
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(n, c)| (n / (d * d), (n / d) % d, n % d, c))
    }

    /// Bilinear extension of the structure constants.
    pub fn apply(&self, x: &[Rational], y: &[Rational]) -> Result<Vector> {
        for v in [x, y] {
            if v.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: v.len(),
                });
            }
        }
        Ok(self.apply_unchecked(x, y))
    }

    pub(crate) fn apply_unchecked(&self, x: &[Rational], y: &[Rational]) -> Vector {
        let mut out = zero_vector(self.dim);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                axpy(&mut out, &c, self.basis_product(i, j));
            }
        }
        out
    }

    /// Matrix of `v -> x * v` (columns are images of basis vectors).
    pub fn left_operator(&self, x: &[Rational]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim)
            .map(|j| self.apply_unchecked(x, &unit_vector(self.dim, j)))
            .collect();
        Matrix::from_columns(&cols, self.dim).expect("square operator")
    }

    /// Matrix of `v -> v * x`.
    pub fn right_operator(&self, x: &[Rational]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim)
            .map(|j| self.apply_unchecked(&unit_vector(self.dim, j), x))
            .collect();
        Matrix::from_columns(&cols, self.dim).expect("square operator")
    }

    /// Structure constants in the basis `f_a = sum_i p[i][a] e_i`.
    pub fn change_basis(&self, p: &Matrix) -> Result<StructureTensor> {
        if p.rows() != self.dim || p.cols() != self.dim {
            return Err(Error::ShapeMismatch {
                expected_rows: self.dim,
                expected_cols: self.dim,
                rows: p.rows(),
                cols: p.cols(),
            });
        }
        let inv = p
            .inverse()
            .ok_or_else(|| Error::InvalidInput("change of basis is singular".into()))?;
        let cols: Vec<Vector> = (0..self.dim).map(|a| p.column(a)).collect();
        let mut out = StructureTensor::zeros(self.dim);
        for a in 0..self.dim {
            for b in 0..self.dim {
                let prod = self.apply_unchecked(&cols[a], &cols[b]);
                let coords = inv.apply(&prod)?;
                for (k, c) in coords.into_iter().enumerate() {
                    out.set(a, b, k, c);
                }
            }
        }
        Ok(out)
    }

    /// Restriction to a subspace closed under the product, in the
    /// subspace's basis; `None` if some product leaves the subspace.
    pub fn restrict(&self, sub: &linalg::Subspace) -> Result<Option<StructureTensor>> {
        if sub.ambient_dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: sub.ambient_dim(),
            });
        }
        let k = sub.dim();
        let mut out = StructureTensor::zeros(k);
        for (a, x) in sub.basis().iter().enumerate() {
            for (b, y) in sub.basis().iter().enumerate() {
                let Some(coords) = sub.coordinates(&self.apply_unchecked(x, y))? else {
                    return Ok(None);
                };
                for (c, v) in coords.into_iter().enumerate() {
                    out.set(a, b, c, v);
                }
            }
        }
        Ok(Some(out))
    }

    /// Direct sum of two tensors: the blocks do not interact.
    pub fn direct_sum(&self, other: &StructureTensor) -> StructureTensor {
        let (m, n) = (self.dim, other.dim);
        let mut out = StructureTensor::zeros(m + n);
        for (i, j, k, c) in self.nonzero_entries() {
            out.set(i, j, k, c.clone());
        }
        for (i, j, k, c) in other.nonzero_entries() {
            out.set(m + i, m + j, m + k, c.clone());
        }
        out
    }
}

pub fn default_basis_names(dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("e{i}")).collect()
}

/// Finite-dimensional algebra: a named basis and a bilinear product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algebra {
    basis_names: Vec<String>,
    product: StructureTensor,
    unit: Option<Vector>,
}

impl Algebra {
    pub fn new(basis_names: Vec<String>, product: StructureTensor) -> Result<Self> {
        if basis_names.len() != product.dim() {
            return Err(Error::DimensionMismatch {
                expected: product.dim(),
                found: basis_names.len(),
            });
        }
        let unit = find_unit(&product);
        Ok(Algebra {
            basis_names,
            product,
            unit,
        })
    }

    pub fn with_default_names(product: StructureTensor) -> Self {
        let names = default_basis_names(product.dim());
        Algebra::new(names, product).expect("names match dimension")
    }

    pub fn dim(&self) -> usize {
        self.product.dim()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn product(&self) -> &StructureTensor {
        &self.product
    }

    /// Coordinates of the two-sided identity, when one exists.
    pub fn unit(&self) -> Option<&Vector> {
        self.unit.as_ref()
    }

    pub fn multiply(&self, x: &[Rational], y: &[Rational]) -> Result<Vector> {
        self.product.apply(x, y)
    }

    pub fn left_multiplication(&self, x: &[Rational]) -> Matrix {
        self.product.left_operator(x)
    }

    pub fn right_multiplication(&self, x: &[Rational]) -> Matrix {
        self.product.right_operator(x)
    }

    /// Checks `(e_i e_j) e_k = e_i (e_j e_k)` on every basis triple.
    pub fn verify_associative(&self) -> Report {
        verify_associative(&self.product)
    }
}

/// Exhaustive associativity check of a structure tensor.
pub fn verify_associative(product: &StructureTensor) -> Report {
    let n = product.dim();
    let mut checked = 0;
    for i in 0..n {
        for j in 0..n {
            let ij = product.basis_product(i, j).to_vec();
            for k in 0..n {
                checked += 1;
                let lhs = product.apply_unchecked(&ij, &unit_vector(n, k));
                let rhs = product.apply_unchecked(&unit_vector(n, i), product.basis_product(j, k));
                if lhs != rhs {
                    let inputs = vec![unit_vector(n, i), unit_vector(n, j), unit_vector(n, k)];
                    return Report::failed(
                        Witness {
                            clause: Clause::Associativity,
                            inputs,
                            lhs,
                            rhs,
                        },
                        checked,
                    );
                }
            }
        }
    }
    Report::passed(checked)
}

/// Solves `u e_j = e_j = e_j u` for all `j`. A solution is necessarily the
/// unique identity.
fn find_unit(product: &StructureTensor) -> Option<Vector> {
    let n = product.dim();
    if n == 0 {
        return None;
    }
    let mut rows = Vec::with_capacity(2 * n * n);
    let mut rhs = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for k in 0..n {
            // sum_i u_i c[i][j][k] = delta_jk
            rows.push((0..n).map(|i| product.get(i, j, k).clone()).collect::<Vector>());
            rhs.push(if j == k { Rational::one() } else { Rational::zero() });
            // sum_i u_i c[j][i][k] = delta_jk
            rows.push((0..n).map(|i| product.get(j, i, k).clone()).collect::<Vector>());
            rhs.push(if j == k { Rational::one() } else { Rational::zero() });
        }
    }
    let m = Matrix::from_rows(&rows, n).ok()?;
    linalg::solve(&m, &rhs).ok().flatten()
}

/// An algebra together with a split of its basis into even and odd indices.
///
/// [`GradedAlgebra::new`] only accepts associative algebras whose split
/// satisfies `A0 A0 ⊆ A0`, `A0 A1 + A1 A0 ⊆ A1` and `A1 A1 = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedAlgebra {
    algebra: Algebra,
    even: Vec<usize>,
    odd: Vec<usize>,
    is_even: Vec<bool>,
}

impl GradedAlgebra {
    pub fn new(algebra: Algebra, even: Vec<usize>) -> Result<Self> {
        let g = Self::new_unchecked(algebra, even)?;
        let assoc = g.algebra.verify_associative();
        if !assoc.holds() {
            return Err(Error::NotAssociative(assoc));
        }
        let grading = g.verify_special_grading();
        if !grading.holds() {
            return Err(Error::NotSpeciallyGraded(grading));
        }
        Ok(g)
    }

    /// Accepts any partition of the basis; use the verifiers to inspect it.
    pub fn new_unchecked(algebra: Algebra, mut even: Vec<usize>) -> Result<Self> {
        let n = algebra.dim();
        even.sort_unstable();
        even.dedup();
        if let Some(&bad) = even.iter().find(|&&i| i >= n) {
            return Err(Error::InvalidInput(format!(
                "even index {bad} out of range for dimension {n}"
            )));
        }
        let mut is_even = vec![false; n];
        for &i in &even {
            is_even[i] = true;
        }
        let odd = (0..n).filter(|&i| !is_even[i]).collect();
        Ok(GradedAlgebra {
            algebra,
            even,
            odd,
            is_even,
        })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn even_indices(&self) -> &[usize] {
        &self.even
    }

    pub fn odd_indices(&self) -> &[usize] {
        &self.odd
    }

    pub fn is_even_index(&self, i: usize) -> bool {
        self.is_even[i]
    }

    /// Even component `x0` of `x = x0 + x1`.
    pub fn even_part(&self, x: &[Rational]) -> Vector {
        x.iter()
            .zip(&self.is_even)
            .map(|(c, &e)| if e { c.clone() } else { Rational::zero() })
            .collect()
    }

    /// Odd component `x1` of `x = x0 + x1`.
    pub fn odd_part(&self, x: &[Rational]) -> Vector {
        x.iter()
            .zip(&self.is_even)
            .map(|(c, &e)| if e { Rational::zero() } else { c.clone() })
            .collect()
    }

    pub fn even_subspace(&self) -> linalg::Subspace {
        let n = self.dim();
        linalg::Subspace::span_unchecked(self.even.iter().map(|&i| unit_vector(n, i)).collect(), n)
    }

    pub fn odd_subspace(&self) -> linalg::Subspace {
        let n = self.dim();
        linalg::Subspace::span_unchecked(self.odd.iter().map(|&i| unit_vector(n, i)).collect(), n)
    }

    pub fn multiply(&self, x: &[Rational], y: &[Rational]) -> Result<Vector> {
        self.algebra.multiply(x, y)
    }

    /// Checks the three grading clauses on every ordered basis pair.
    pub fn verify_special_grading(&self) -> Report {
        let n = self.dim();
        let product = self.algebra.product();
        let mut checked = 0;
        for i in 0..n {
            for j in 0..n {
                checked += 1;
                let p = product.basis_product(i, j).to_vec();
                let (clause, allowed) = match (self.is_even[i], self.is_even[j]) {
                    (true, true) => (Clause::EvenClosed, self.even_part(&p)),
                    (false, false) => (Clause::OddSquareZero, zero_vector(n)),
                    _ => (Clause::OddBimodule, self.odd_part(&p)),
                };
                if p != allowed {
                    return Report::failed(
                        Witness {
                            clause,
                            inputs: vec![unit_vector(n, i), unit_vector(n, j)],
                            lhs: p,
                            rhs: allowed,
                        },
                        checked,
                    );
                }
            }
        }
        Report::passed(checked)
    }
}

/// Left and right actions of an algebra on a module `M = Q^m`.
///
/// `left[a]` is the matrix of `m -> e_a · m` and `right[a]` the matrix of
/// `m -> m · e_a`, both acting on column coordinate vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BimoduleActions {
    pub module_dim: usize,
    pub left: Vec<Matrix>,
    pub right: Vec<Matrix>,
}

impl BimoduleActions {
    /// Both actions zero: always a bimodule.
    pub fn zero(algebra_dim: usize, module_dim: usize) -> Self {
        BimoduleActions {
            module_dim,
            left: vec![Matrix::zeros(module_dim, module_dim); algebra_dim],
            right: vec![Matrix::zeros(module_dim, module_dim); algebra_dim],
        }
    }

    /// The algebra acting on itself by left and right multiplication.
    pub fn regular(a0: &Algebra) -> Self {
        let n = a0.dim();
        BimoduleActions {
            module_dim: n,
            left: (0..n).map(|a| a0.left_multiplication(&unit_vector(n, a))).collect(),
            right: (0..n).map(|a| a0.right_multiplication(&unit_vector(n, a))).collect(),
        }
    }

    fn check_shapes(&self, algebra_dim: usize) -> Result<()> {
        for list in [&self.left, &self.right] {
            if list.len() != algebra_dim {
                return Err(Error::DimensionMismatch {
                    expected: algebra_dim,
                    found: list.len(),
                });
            }
            for m in list {
                if m.rows() != self.module_dim || m.cols() != self.module_dim {
                    return Err(Error::ShapeMismatch {
                        expected_rows: self.module_dim,
                        expected_cols: self.module_dim,
                        rows: m.rows(),
                        cols: m.cols(),
                    });
                }
            }
        }
        Ok(())
    }

    fn left_of(&self, x: &[Rational]) -> Matrix {
        action_of(&self.left, x, self.module_dim)
    }

    fn right_of(&self, x: &[Rational]) -> Matrix {
        action_of(&self.right, x, self.module_dim)
    }

    /// Checks the three bimodule axioms on basis elements. Witness vectors
    /// live in the coordinates of the trivial extension `A0 ⊕ M`.
    pub fn verify(&self, a0: &Algebra) -> Result<Report> {
        self.check_shapes(a0.dim())?;
        let (d0, d1) = (a0.dim(), self.module_dim);
        let n = d0 + d1;
        let embed_a = |a: usize| unit_vector(n, a);
        let embed_m = |v: &[Rational]| {
            let mut out = zero_vector(n);
            out[d0..].clone_from_slice(v);
            out
        };
        let mut checked = 0;
        for a in 0..d0 {
            for b in 0..d0 {
                let ab = a0.product().basis_product(a, b);
                let left_ab = self.left_of(ab);
                let right_ab = self.right_of(ab);
                for m in 0..d1 {
                    checked += 1;
                    let mv = unit_vector(d1, m);
                    let inputs = vec![embed_a(a), embed_a(b), embed_m(&mv)];
                    // a·(b·m) = (ab)·m
                    let lhs = self.left[a].apply(&self.left[b].apply(&mv)?)?;
                    let rhs = left_ab.apply(&mv)?;
                    if lhs != rhs {
                        return Ok(Report::failed(
                            Witness {
                                clause: Clause::LeftAction,
                                inputs,
                                lhs: embed_m(&lhs),
                                rhs: embed_m(&rhs),
                            },
                            checked,
                        ));
                    }
                    // (m·a)·b = m·(ab)
                    let lhs = self.right[b].apply(&self.right[a].apply(&mv)?)?;
                    let rhs = right_ab.apply(&mv)?;
                    if lhs != rhs {
                        return Ok(Report::failed(
                            Witness {
                                clause: Clause::RightAction,
                                inputs,
                                lhs: embed_m(&lhs),
                                rhs: embed_m(&rhs),
                            },
                            checked,
                        ));
                    }
                    // (a·m)·b = a·(m·b)
                    let lhs = self.right[b].apply(&self.left[a].apply(&mv)?)?;
                    let rhs = self.left[a].apply(&self.right[b].apply(&mv)?)?;
                    if lhs != rhs {
                        return Ok(Report::failed(
                            Witness {
                                clause: Clause::ActionsCommute,
                                inputs,
                                lhs: embed_m(&lhs),
                                rhs: embed_m(&rhs),
                            },
                            checked,
                        ));
                    }
                }
            }
        }
        Ok(Report::passed(checked))
    }
}

fn action_of(list: &[Matrix], x: &[Rational], m: usize) -> Matrix {
    let mut out = Matrix::zeros(m, m);
    for (c, mat) in x.iter().zip(list) {
        if !c.is_zero() {
            out = out.checked_add(&mat.scaled(c)).expect("same shape");
        }
    }
    out
}

/// Square-zero extension `A0 ⊕ M` with `(a+m)(b+n) = ab + (a·n + m·b)`.
///
/// The basis is that of `A0` (even) followed by `module_dim` module
/// vectors named `m1, m2, ...` (odd).
pub fn make_trivial_extension(a0: &Algebra, actions: &BimoduleActions) -> Result<GradedAlgebra> {
    let names: Vec<String> = a0
        .basis_names()
        .iter()
        .cloned()
        .chain((1..=actions.module_dim).map(|i| format!("m{i}")))
        .collect();
    make_trivial_extension_named(a0, actions, names)
}

pub fn make_trivial_extension_named(
    a0: &Algebra,
    actions: &BimoduleActions,
    names: Vec<String>,
) -> Result<GradedAlgebra> {
    let assoc = a0.verify_associative();
    if !assoc.holds() {
        return Err(Error::NotAssociative(assoc));
    }
    let bimodule = actions.verify(a0)?;
    if !bimodule.holds() {
        return Err(Error::NotABimodule(bimodule));
    }
    let (d0, d1) = (a0.dim(), actions.module_dim);
    let n = d0 + d1;
    let mut t = StructureTensor::zeros(n);
    for (i, j, k, c) in a0.product().nonzero_entries() {
        t.set(i, j, k, c.clone());
    }
    for a in 0..d0 {
        for m in 0..d1 {
            for k in 0..d1 {
                // e_a · m_m = sum_k left[a][k][m] m_k
                t.set(a, d0 + m, d0 + k, actions.left[a][(k, m)].clone());
                t.set(d0 + m, a, d0 + k, actions.right[a][(k, m)].clone());
            }
        }
    }
    GradedAlgebra::new(Algebra::new(names, t)?, (0..d0).collect())
}

/// Full matrix algebra `Mat(n)` with basis `E_ij` in row-major order.
pub fn matrix_algebra(n: usize) -> Algebra {
    let idx = |i: usize, j: usize| i * n + j;
    let mut entries = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                // E_ij E_jl = E_il
                entries.push((idx(i, j), idx(j, l), idx(i, l), Rational::one()));
            }
        }
    }
    let t = StructureTensor::from_entries(n * n, entries).expect("indices in range");
    let names = (0..n)
        .flat_map(|i| (0..n).map(move |j| matrix_unit_name(i, j, n)))
        .collect();
    Algebra::new(names, t).expect("names match dimension")
}

fn matrix_unit_name(i: usize, j: usize, n: usize) -> String {
    if n < 10 {
        format!("E{}{}", i + 1, j + 1)
    } else {
        format!("E{}_{}", i + 1, j + 1)
    }
}

/// Block upper-triangular matrices `[[X, M], [0, Y]]` with `X` of size
/// `p`, `Y` of size `q`. Basis order: units of `X`, units of `Y` (even),
/// then units of `M` (odd), named by their position in the full matrix.
pub fn make_block_upper(p: usize, q: usize) -> Result<GradedAlgebra> {
    if p == 0 || q == 0 {
        return Err(Error::InvalidInput("block sizes must be positive".into()));
    }
    let size = p + q;
    let mut positions = Vec::new();
    for i in 0..p {
        for j in 0..p {
            positions.push((i, j));
        }
    }
    for i in p..size {
        for j in p..size {
            positions.push((i, j));
        }
    }
    for i in 0..p {
        for j in p..size {
            positions.push((i, j));
        }
    }
    let index_of = |pos: (usize, usize)| positions.iter().position(|&x| x == pos);
    let mut entries = Vec::new();
    for (a, &(i, j)) in positions.iter().enumerate() {
        for (b, &(j2, l)) in positions.iter().enumerate() {
            if j != j2 {
                continue;
            }
            if let Some(c) = index_of((i, l)) {
                entries.push((a, b, c, Rational::one()));
            }
        }
    }
    let dim = positions.len();
    let t = StructureTensor::from_entries(dim, entries)?;
    let names = positions.iter().map(|&(i, j)| matrix_unit_name(i, j, size)).collect();
    let even = (0..p * p + q * q).collect();
    GradedAlgebra::new(Algebra::new(names, t)?, even)
}

/// Upper-triangular 2x2 matrices with basis `E11, E22` (even) and `E12` (odd).
pub fn upper_triangular() -> GradedAlgebra {
    make_block_upper(1, 1).expect("valid block sizes")
}

/// Dual numbers `Q[ε]/(ε²)` with basis `u` (even, the unit) and `ε` (odd).
pub fn dual_numbers() -> GradedAlgebra {
    let t =
        StructureTensor::from_i64_entries(2, &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)]).expect("indices in range");
    let names = vec![String::from("u"), String::from("ε")];
    GradedAlgebra::new(Algebra::new(names, t).expect("names match"), vec![0]).expect("dual numbers are graded")
}

/// `Mat(n) ⊕ εMat(n)`: the trivial extension of `Mat(n)` by its regular
/// bimodule. Odd basis vectors are named `εE_ij`.
pub fn matrix_extension(n: usize) -> GradedAlgebra {
    let a0 = matrix_algebra(n);
    let names: Vec<String> = a0
        .basis_names()
        .iter()
        .cloned()
        .chain(a0.basis_names().iter().map(|s| format!("ε{s}")))
        .collect();
    make_trivial_extension_named(&a0, &BimoduleActions::regular(&a0), names)
        .expect("regular bimodule of an associative algebra")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vector_from_i64;

    fn v(values: &[i64]) -> Vector {
        vector_from_i64(values)
    }

    #[test]
    fn multiply_dual_numbers() {
        let g = dual_numbers();
        // (u + ε)(u + ε) = u + 2ε
        assert_eq!(g.multiply(&v(&[1, 1]), &v(&[1, 1])).unwrap(), v(&[1, 2]));
        assert_eq!(g.multiply(&v(&[0, 0]), &v(&[3, -2])).unwrap(), v(&[0, 0]));
        assert!(g.multiply(&v(&[1]), &v(&[1, 0])).is_err());
    }

    #[test]
    fn multiply_upper_triangular() {
        let g = upper_triangular();
        assert_eq!(g.algebra().basis_names(), &["E11", "E22", "E12"]);
        // E12 · E11 = 0, E11 · E12 = E12, E12 · E22 = E12
        assert_eq!(g.multiply(&v(&[0, 0, 1]), &v(&[1, 0, 0])).unwrap(), v(&[0, 0, 0]));
        assert_eq!(g.multiply(&v(&[1, 0, 0]), &v(&[0, 0, 1])).unwrap(), v(&[0, 0, 1]));
        assert_eq!(g.multiply(&v(&[0, 0, 1]), &v(&[0, 1, 0])).unwrap(), v(&[0, 0, 1]));
    }

    #[test]
    fn associativity_examples() {
        assert!(dual_numbers().algebra().verify_associative().holds());
        assert!(upper_triangular().algebra().verify_associative().holds());
        let scaled = StructureTensor::from_i64_entries(1, &[(0, 0, 0, 2)]).unwrap();
        assert!(verify_associative(&scaled).holds());

        // e1e1 = e2, e2e1 = e1: (e1e1)e1 = e1 but e1(e1e1) = 0
        let bad = StructureTensor::from_i64_entries(2, &[(0, 0, 1, 1), (1, 0, 0, 1)]).unwrap();
        let report = verify_associative(&bad);
        let w = report.witness().unwrap();
        assert_eq!(w.basis_indices().unwrap(), vec![0, 0, 0]);
        assert_eq!(w.lhs, v(&[1, 0]));
        assert_eq!(w.rhs, v(&[0, 0]));
    }

    #[test]
    fn grading_examples() {
        assert!(upper_triangular().verify_special_grading().holds());
        assert!(dual_numbers().verify_special_grading().holds());
        // Mat(2) with diagonal units even: E12 · E21 = E11 breaks A1A1 = 0
        let mat = matrix_algebra(2);
        let g = GradedAlgebra::new_unchecked(mat.clone(), vec![0, 3]).unwrap();
        let report = g.verify_special_grading();
        let w = report.witness().unwrap();
        assert_eq!(w.clause, Clause::OddSquareZero);
        assert_eq!(w.basis_indices().unwrap(), vec![1, 2]);
        assert_eq!(w.lhs, v(&[1, 0, 0, 0]));
        assert!(matches!(
            GradedAlgebra::new(mat, vec![0, 3]),
            Err(Error::NotSpeciallyGraded(_))
        ));
    }

    #[test]
    fn units_are_found() {
        assert_eq!(dual_numbers().algebra().unit(), Some(&v(&[1, 0])));
        assert_eq!(upper_triangular().algebra().unit(), Some(&v(&[1, 1, 0])));
        assert_eq!(matrix_algebra(2).unit(), Some(&v(&[1, 0, 0, 1])));
        let nil = StructureTensor::from_i64_entries(2, &[(0, 0, 1, 1)]).unwrap();
        assert_eq!(Algebra::with_default_names(nil).unit(), None);
    }

    #[test]
    fn trivial_extension_of_rationals_is_dual_numbers() {
        let q = Algebra::with_default_names(StructureTensor::from_i64_entries(1, &[(0, 0, 0, 1)]).unwrap());
        let id = Matrix::identity(1);
        let actions = BimoduleActions {
            module_dim: 1,
            left: vec![id.clone()],
            right: vec![id],
        };
        let g = make_trivial_extension(&q, &actions).unwrap();
        assert_eq!(g.algebra().product(), dual_numbers().algebra().product());
        assert_eq!(g.even_indices(), &[0]);
    }

    #[test]
    fn trivial_extension_of_two_idempotents_is_upper_triangular() {
        let qq =
            Algebra::with_default_names(StructureTensor::from_i64_entries(2, &[(0, 0, 0, 1), (1, 1, 1, 1)]).unwrap());
        let one = Matrix::identity(1);
        let zero = Matrix::zeros(1, 1);
        // f1 · m = m, m · f2 = m, f2 · m = m · f1 = 0
        let actions = BimoduleActions {
            module_dim: 1,
            left: vec![one.clone(), zero.clone()],
            right: vec![zero, one],
        };
        let g = make_trivial_extension(&qq, &actions).unwrap();
        assert_eq!(g.algebra().product(), upper_triangular().algebra().product());
    }

    #[test]
    fn matrix_extension_is_graded() {
        let g = matrix_extension(2);
        assert_eq!(g.dim(), 8);
        assert!(g.verify_special_grading().holds());
        assert!(g.algebra().verify_associative().holds());
        assert_eq!(g.algebra().basis_names()[5], "εE12");
    }

    #[test]
    fn bimodule_violation_is_reported() {
        let q = Algebra::with_default_names(StructureTensor::from_i64_entries(1, &[(0, 0, 0, 1)]).unwrap());
        // e · m = 2m is not a module action of an idempotent: e·(e·m) = 4m ≠ 2m
        let actions = BimoduleActions {
            module_dim: 1,
            left: vec![Matrix::from_i64(&[&[2]])],
            right: vec![Matrix::zeros(1, 1)],
        };
        match make_trivial_extension(&q, &actions) {
            Err(Error::NotABimodule(report)) => {
                let w = report.witness().unwrap();
                assert_eq!(w.clause, Clause::LeftAction);
                assert_eq!(w.lhs, v(&[0, 4]));
                assert_eq!(w.rhs, v(&[0, 2]));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn block_upper_dimensions() {
        assert_eq!(make_block_upper(1, 1).unwrap().dim(), 3);
        let g = make_block_upper(2, 1).unwrap();
        assert_eq!(g.dim(), 7);
        assert_eq!(g.odd_indices(), &[5, 6]);
        for &i in g.odd_indices() {
            for &j in g.odd_indices() {
                assert!(g.algebra().product().basis_product(i, j).iter().all(Zero::is_zero));
            }
        }
        assert!(make_block_upper(0, 2).is_err());
    }

    #[test]
    fn change_basis_round_trip() {
        let t = upper_triangular().algebra().product().clone();
        let p = Matrix::from_i64(&[&[1, 1, 0], &[0, 1, 0], &[2, 0, 1]]);
        let moved = t.change_basis(&p).unwrap();
        let back = moved.change_basis(&p.inverse().unwrap()).unwrap();
        assert_eq!(back, t);
    }
}
