//! Invariant subspaces of a finite set of linear operators.
//!
//! Ideals of a (Leibniz or Hu-Liu) algebra are exactly the subspaces
//! invariant under its multiplication operators, so simplicity questions
//! reduce to module theory over the associative algebra those operators
//! generate:
//!
//! * [`OperatorSet::spin`] computes the smallest invariant subspace
//!   containing some vectors.
//! * [`test_irreducible`] is a MeatAxe-style test over `Q`. It looks for
//!   random algebra elements with a rational eigenvalue of geometric
//!   multiplicity one; spinning the eigenvector and the dual eigenvector
//!   either exposes an invariant subspace or proves irreducibility
//!   (Norton's criterion). Burnside's theorem settles the absolutely
//!   irreducible case directly for small modules.
//! * [`invariant_complement`] solves the linear system for an equivariant
//!   projection onto an invariant subspace.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, is_zero_vector, kernel, rat, Matrix, Rational, Subspace, Vector};

/// Largest module dimension for which the enveloping algebra is computed.
const BURNSIDE_LIMIT: usize = 12;

/// Bounds for the randomized irreducibility search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub seed: u64,
    pub attempts: usize,
    pub max_word_len: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            seed: 0,
            attempts: 64,
            max_word_len: 8,
        }
    }
}

/// A finite set of square matrices acting on column vectors of `Q^dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorSet {
    dim: usize,
    ops: Vec<Matrix>,
}

impl OperatorSet {
    pub fn new(dim: usize, ops: Vec<Matrix>) -> Result<Self> {
        for m in &ops {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::ShapeMismatch {
                    expected_rows: dim,
                    expected_cols: dim,
                    rows: m.rows(),
                    cols: m.cols(),
                });
            }
        }
        Ok(OperatorSet { dim, ops })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ops(&self) -> &[Matrix] {
        &self.ops
    }

    /// Smallest invariant subspace containing `seeds`.
    pub fn spin(&self, seeds: &[Vector]) -> Subspace {
        let mut echelon = Echelon::new(self.dim);
        let mut queue: Vec<Vector> = seeds.to_vec();
        while let Some(v) = queue.pop() {
            if let Some(added) = echelon.insert(v) {
                if echelon.len() == self.dim {
                    break;
                }
                for op in &self.ops {
                    queue.push(op.apply(&added).expect("operator shape"));
                }
            }
        }
        echelon.into_subspace()
    }

    pub fn is_invariant(&self, s: &Subspace) -> bool {
        s.basis().iter().all(|b| {
            self.ops
                .iter()
                .all(|op| s.contains(&op.apply(b).expect("operator shape")).expect("ambient"))
        })
    }

    /// Action on an invariant subspace, in the coordinates of its basis.
    pub fn restrict(&self, s: &Subspace) -> Result<OperatorSet> {
        let k = s.dim();
        let mut ops = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            let mut cols = Vec::with_capacity(k);
            for b in s.basis() {
                let image = op.apply(b)?;
                let coords = s
                    .coordinates(&image)?
                    .ok_or_else(|| Error::InvalidInput("subspace is not invariant".into()))?;
                cols.push(coords);
            }
            ops.push(Matrix::from_columns(&cols, k)?);
        }
        OperatorSet::new(k, ops)
    }

    /// Action on the quotient by an invariant subspace. Quotient coordinates
    /// are the entries at the subspace's free (non-pivot) columns.
    pub fn quotient(&self, s: &Subspace) -> Result<(OperatorSet, QuotientMap)> {
        let map = QuotientMap {
            sub: s.clone(),
            free: s.free_columns(),
        };
        let q = map.free.len();
        let mut ops = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            let cols: Vec<Vector> = (0..q)
                .map(|c| {
                    let lifted = map.lift(&linalg::unit_vector(q, c));
                    map.project(&op.apply(&lifted).expect("operator shape"))
                })
                .collect();
            ops.push(Matrix::from_columns(&cols, q)?);
        }
        Ok((OperatorSet::new(q, ops)?, map))
    }

    pub fn transpose(&self) -> OperatorSet {
        OperatorSet {
            dim: self.dim,
            ops: self.ops.iter().map(Matrix::transpose).collect(),
        }
    }
}

/// Coordinates on `V / S` for a canonical subspace `S`.
#[derive(Debug, Clone)]
pub struct QuotientMap {
    sub: Subspace,
    free: Vec<usize>,
}

impl QuotientMap {
    pub fn project(&self, v: &[Rational]) -> Vector {
        let reduced = self.sub.reduce(v).expect("ambient");
        self.free.iter().map(|&c| reduced[c].clone()).collect()
    }

    pub fn lift(&self, q: &[Rational]) -> Vector {
        let mut v = linalg::zero_vector(self.sub.ambient_dim());
        for (&c, x) in self.free.iter().zip(q) {
            v[c] = x.clone();
        }
        v
    }

    /// Preimage of a subspace of the quotient.
    pub fn preimage(&self, q: &Subspace) -> Subspace {
        let lifted: Vec<Vector> = q.basis().iter().map(|b| self.lift(b)).collect();
        self.sub.extended(&lifted).expect("ambient")
    }
}

/// Incremental row-echelon basis.
struct Echelon {
    dim: usize,
    rows: Vec<(usize, Vector)>,
}

impl Echelon {
    fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new() }
    }

    fn len(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v`; keeps and returns it when it is new.
    fn insert(&mut self, mut v: Vector) -> Option<Vector> {
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let c = -v[*p].clone();
                linalg::axpy(&mut v, &c, row);
            }
        }
        let p = v.iter().position(|x| !x.is_zero())?;
        let inv = v[p].recip();
        let v: Vector = v.iter().map(|x| x * &inv).collect();
        self.rows.push((p, v.clone()));
        Some(v)
    }

    fn into_subspace(self) -> Subspace {
        let rows = self.rows.into_iter().map(|(_, v)| v).collect();
        Subspace::span_unchecked(rows, self.dim)
    }
}

/// Why a module is known to be irreducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IrreducibilityProof {
    /// dimension one
    OneDimensional,
    /// the operators generate the full matrix algebra
    Burnside,
    /// `ker(θ - λ)` is one-dimensional and both it and its dual spin to the whole space
    Norton { eigenvalue: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible(IrreducibilityProof),
    /// A proper nonzero invariant subspace.
    Reducible(Subspace),
    /// The search budget ran out without a proof either way.
    Inconclusive {
        attempts: usize,
    },
}

/// Decides whether the module `Q^dim` under `ops` has a proper nonzero
/// invariant subspace. Never answers wrongly; may be inconclusive.
pub fn test_irreducible(ops: &OperatorSet, budget: &SearchBudget) -> Irreducibility {
    let d = ops.dim();
    if d <= 1 {
        return Irreducibility::Irreducible(IrreducibilityProof::OneDimensional);
    }
    let dual = ops.transpose();
    for i in 0..d {
        let e = linalg::unit_vector(d, i);
        let s = ops.spin(core::slice::from_ref(&e));
        if s.dim() < d {
            return Irreducibility::Reducible(s);
        }
        let w = dual.spin(&[e]);
        if w.dim() < d {
            return Irreducibility::Reducible(w.perp());
        }
    }
    if d <= BURNSIDE_LIMIT && enveloping_dimension(ops) == d * d {
        return Irreducibility::Irreducible(IrreducibilityProof::Burnside);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    for _ in 0..budget.attempts {
        let theta = random_element(ops, budget.max_word_len, &mut rng);
        for lambda in rational_eigenvalues(&theta) {
            let shifted = theta.checked_sub(&Matrix::identity(d).scaled(&lambda)).expect("square");
            let eigenspace = kernel(&shifted);
            for v in eigenspace.basis() {
                let s = ops.spin(core::slice::from_ref(v));
                if s.dim() < d {
                    return Irreducibility::Reducible(s);
                }
            }
            if eigenspace.dim() == 1 {
                let dual_space = kernel(&shifted.transpose());
                let w = dual.spin(dual_space.basis());
                if w.dim() < d {
                    return Irreducibility::Reducible(w.perp());
                }
                return Irreducibility::Irreducible(IrreducibilityProof::Norton { eigenvalue: lambda });
            }
        }
    }
    Irreducibility::Inconclusive {
        attempts: budget.attempts,
    }
}

/// Dimension of the unital associative algebra generated by the operators.
fn enveloping_dimension(ops: &OperatorSet) -> usize {
    let d = ops.dim();
    let flat = |m: &Matrix| m.entries().to_vec();
    let unflat = |v: &Vector| Matrix::new(d, d, v.clone()).expect("square");
    let mut echelon = Echelon::new(d * d);
    let mut queue = vec![flat(&Matrix::identity(d))];
    while let Some(v) = queue.pop() {
        if echelon.insert(v.clone()).is_some() {
            if echelon.len() == d * d {
                break;
            }
            let m = unflat(&v);
            for op in ops.ops() {
                queue.push(flat(&op.checked_mul(&m).expect("square")));
            }
        }
    }
    echelon.len()
}

/// `c0 I + sum c_w w` over a few random words in the generators.
fn random_element(ops: &OperatorSet, max_word_len: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let d = ops.dim();
    let mut theta = Matrix::identity(d).scaled(&rat(rng.gen_range(-3..=3)));
    if ops.ops().is_empty() {
        return theta;
    }
    let words = rng.gen_range(1..=3);
    for _ in 0..words {
        let len = rng.gen_range(1..=max_word_len.max(1));
        let mut word = Matrix::identity(d);
        for _ in 0..len {
            let g = &ops.ops()[rng.gen_range(0..ops.ops().len())];
            word = g.checked_mul(&word).expect("square");
        }
        let mut c = rng.gen_range(-3..=3);
        if c == 0 {
            c = 1;
        }
        theta = theta.checked_add(&word.scaled(&rat(c))).expect("square");
    }
    theta
}

/// Characteristic polynomial coefficients `[c0, c1, ..., cn]` (monic, `cn = 1`)
/// by the Faddeev-LeVerrier recurrence.
pub fn characteristic_polynomial(a: &Matrix) -> Vec<Rational> {
    let n = a.rows();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut m = Matrix::zeros(n, n);
    for k in 1..=n {
        let shift = Matrix::identity(n).scaled(&coeffs[n + 1 - k]);
        m = a.checked_mul(&m).expect("square").checked_add(&shift).expect("square");
        let am = a.checked_mul(&m).expect("square");
        coeffs[n - k] = -am.trace() / rat(k as i64);
    }
    coeffs
}

fn evaluate(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Distinct rational eigenvalues of `a`, found with the rational root
/// theorem. Candidates whose divisor enumeration is too large are skipped,
/// so the list may be incomplete but never contains a non-root.
pub fn rational_eigenvalues(a: &Matrix) -> Vec<Rational> {
    let coeffs = characteristic_polynomial(a);
    rational_roots(&coeffs)
}

pub fn rational_roots(coeffs: &[Rational]) -> Vec<Rational> {
    let mut roots = Vec::new();
    let mut lo = 0;
    while lo < coeffs.len() && coeffs[lo].is_zero() {
        lo += 1;
    }
    if lo == coeffs.len() {
        return roots;
    }
    if lo > 0 {
        roots.push(Rational::zero());
    }
    let trimmed = &coeffs[lo..];
    if trimmed.len() < 2 {
        return roots;
    }
    let ints = primitive_integer_coefficients(trimmed);
    let (Some(ps), Some(qs)) = (
        divisors(ints[0].magnitude().clone().into()),
        divisors(ints[ints.len() - 1].magnitude().clone().into()),
    ) else {
        return roots;
    };
    if ps.len() * qs.len() > 20_000 {
        return roots;
    }
    let mut candidates: Vec<Rational> = Vec::new();
    for p in &ps {
        for q in &qs {
            for sign in [1, -1] {
                let r = Rational::new(BigInt::from(*p) * sign, BigInt::from(*q));
                if !candidates.contains(&r) {
                    candidates.push(r);
                }
            }
        }
    }
    for r in candidates {
        if evaluate(trimmed, &r).is_zero() {
            roots.push(r);
        }
    }
    roots
}

fn primitive_integer_coefficients(coeffs: &[Rational]) -> Vec<BigInt> {
    let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints
        .iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Positive divisors of `n`, or `None` when `n` cannot be factored by trial
/// division up to `10^6` with a provably prime cofactor.
fn divisors(n: BigInt) -> Option<Vec<u64>> {
    if n.sign() == Sign::NoSign {
        return None;
    }
    let n = n.abs().to_u64()?;
    let mut rest = n;
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut p = 2u64;
    while p <= 1_000_000 && p * p <= rest {
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        if rest > 1_000_000_000_000 {
            return None;
        }
        factors.push((rest, 1));
    }
    let mut divs = vec![1u64];
    for (p, e) in factors {
        let current = divs.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            divs.extend(current.iter().map(|d| d * pk));
        }
        if divs.len() > 20_000 {
            return None;
        }
    }
    Some(divs)
}

/// An invariant complement of the invariant subspace `sub`, if one exists.
///
/// Solves for a projection `P: V -> sub` (in the subspace's basis) with
/// `P|sub = id` and `P op = op|sub P` for every operator; its kernel is then
/// an invariant complement, and conversely every invariant complement
/// yields such a `P`.
pub fn invariant_complement(ops: &OperatorSet, sub: &Subspace) -> Result<Option<Subspace>> {
    let n = ops.dim();
    let k = sub.dim();
    if sub.ambient_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: sub.ambient_dim(),
        });
    }
    if k == 0 {
        return Ok(Some(Subspace::full(n)));
    }
    let restricted = ops.restrict(sub)?;
    let var = |r: usize, c: usize| r * n + c;
    let unknowns = k * n;
    let mut rows: Vec<Vector> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    for (j, b) in sub.basis().iter().enumerate() {
        for r in 0..k {
            let mut row = linalg::zero_vector(unknowns);
            for (c, x) in b.iter().enumerate() {
                row[var(r, c)] = x.clone();
            }
            rows.push(row);
            rhs.push(if r == j { Rational::one() } else { Rational::zero() });
        }
    }
    for (op, op_sub) in ops.ops().iter().zip(restricted.ops()) {
        for r in 0..k {
            for c in 0..n {
                let mut row = linalg::zero_vector(unknowns);
                for m in 0..n {
                    row[var(r, m)] += &op[(m, c)];
                }
                for s in 0..k {
                    row[var(s, c)] -= &op_sub[(r, s)];
                }
                if !is_zero_vector(&row) {
                    rows.push(row);
                    rhs.push(Rational::zero());
                }
            }
        }
    }
    let system = Matrix::from_rows(&rows, unknowns)?;
    let Some(solution) = linalg::solve(&system, &rhs)? else {
        return Ok(None);
    };
    let projection = Matrix::new(k, n, solution)?;
    let complement = kernel(&projection);
    debug_assert!(ops.is_invariant(&complement));
    Ok(Some(complement))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ratio, vector_from_i64};

    fn ops(dim: usize, mats: &[&[&[i64]]]) -> OperatorSet {
        OperatorSet::new(dim, mats.iter().map(|m| Matrix::from_i64(m)).collect()).unwrap()
    }

    #[test]
    fn spin_of_nilpotent_shift() {
        // e1 -> 0, e2 -> e1
        let s = ops(2, &[&[&[0, 1], &[0, 0]]]);
        assert_eq!(s.spin(&[vector_from_i64(&[1, 0])]).dim(), 1);
        assert_eq!(s.spin(&[vector_from_i64(&[0, 1])]).dim(), 2);
    }

    #[test]
    fn reducible_shift_is_found() {
        let s = ops(2, &[&[&[0, 1], &[0, 0]]]);
        match test_irreducible(&s, &SearchBudget::default()) {
            Irreducibility::Reducible(sub) => {
                assert_eq!(sub.dim(), 1);
                assert!(s.is_invariant(&sub));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn full_matrix_algebra_is_irreducible() {
        let s = ops(2, &[&[&[0, 1], &[0, 0]], &[&[0, 0], &[1, 0]]]);
        assert_eq!(
            test_irreducible(&s, &SearchBudget::default()),
            Irreducibility::Irreducible(IrreducibilityProof::Burnside)
        );
    }

    #[test]
    fn rotation_by_quarter_turn_has_no_rational_certificate() {
        // irreducible over Q but not absolutely irreducible
        let s = ops(2, &[&[&[0, -1], &[1, 0]]]);
        let budget = SearchBudget {
            attempts: 8,
            ..SearchBudget::default()
        };
        assert_eq!(
            test_irreducible(&s, &budget),
            Irreducibility::Inconclusive { attempts: 8 }
        );
    }

    #[test]
    fn norton_path_on_large_module() {
        // a single Jordan block of size 13 is reducible; a cyclic shift
        // together with a diagonal operator of distinct eigenvalues is not
        let n = 13;
        let mut shift = Matrix::zeros(n, n);
        let mut diag = Matrix::zeros(n, n);
        for i in 0..n {
            shift[((i + 1) % n, i)] = Rational::one();
            diag[(i, i)] = rat(i as i64);
        }
        let s = OperatorSet::new(n, vec![shift, diag]).unwrap();
        match test_irreducible(&s, &SearchBudget::default()) {
            Irreducibility::Irreducible(IrreducibilityProof::Norton { .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn characteristic_polynomial_and_roots() {
        let a = Matrix::from_i64(&[&[2, 1], &[0, 3]]);
        // (x-2)(x-3) = x^2 - 5x + 6
        assert_eq!(characteristic_polynomial(&a), vector_from_i64(&[6, -5, 1]));
        let mut roots = rational_eigenvalues(&a);
        roots.sort();
        assert_eq!(roots, vector_from_i64(&[2, 3]));
        // 4x^2 - 1 has roots ±1/2; x^2 + 1 has none
        let mut r = rational_roots(&vector_from_i64(&[-1, 0, 4]));
        r.sort();
        assert_eq!(r, vec![ratio(-1, 2), ratio(1, 2)]);
        assert!(rational_roots(&vector_from_i64(&[1, 0, 1])).is_empty());
        assert_eq!(rational_roots(&vector_from_i64(&[0, 0, 1])), vec![Rational::zero()]);
    }

    #[test]
    fn complement_exists_for_semisimple_and_not_for_shift() {
        // diag(1, 2): span(e1) has complement span(e2)
        let d = ops(2, &[&[&[1, 0], &[0, 2]]]);
        let line = Subspace::span(&[vector_from_i64(&[1, 0])], 2).unwrap();
        let c = invariant_complement(&d, &line).unwrap().unwrap();
        assert_eq!(c, Subspace::span(&[vector_from_i64(&[0, 1])], 2).unwrap());
        // nilpotent shift: span(e1) is invariant but has no invariant complement
        let s = ops(2, &[&[&[0, 1], &[0, 0]]]);
        assert!(invariant_complement(&s, &line).unwrap().is_none());
    }

    #[test]
    fn quotient_action() {
        // upper triangular [[1,1],[0,2]] on Q^2 / span(e1) acts as 2
        let s = ops(2, &[&[&[1, 1], &[0, 2]]]);
        let line = Subspace::span(&[vector_from_i64(&[1, 0])], 2).unwrap();
        let (q, map) = s.quotient(&line).unwrap();
        assert_eq!(q.ops()[0], Matrix::from_i64(&[&[2]]));
        assert_eq!(map.preimage(&Subspace::zero(1)), line);
    }
}
