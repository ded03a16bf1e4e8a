//! Right Leibniz algebras: the identity `<<x,y>,z> = <x,<y,z>> + <<x,z>,y>`,
//! the annihilator, ideals, simplicity and homomorphisms.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{default_basis_names, StructureTensor};
use crate::error::{Error, Result};
use crate::invariant::{OperatorSet, SearchBudget};
use crate::linalg::{add, kernel, unit_vector, Matrix, Rational, Subspace, Vector};
use crate::report::{Clause, Report, Witness};
use crate::simplicity::{self, SimplicityVerdict};

/// A verified right Leibniz algebra with its annihilator precomputed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeibnizAlgebra {
    basis_names: Vec<String>,
    angle: StructureTensor,
    annihilator: Subspace,
}

impl LeibnizAlgebra {
    /// Rejects brackets that fail the right Leibniz identity.
    pub fn new(basis_names: Vec<String>, angle: StructureTensor) -> Result<Self> {
        if basis_names.len() != angle.dim() {
            return Err(Error::DimensionMismatch {
                expected: angle.dim(),
                found: basis_names.len(),
            });
        }
        let report = verify_right_leibniz(&angle);
        if !report.holds() {
            return Err(Error::NotLeibniz(report));
        }
        let annihilator = annihilator_of(&angle);
        Ok(LeibnizAlgebra {
            basis_names,
            angle,
            annihilator,
        })
    }

    pub fn from_tensor(angle: StructureTensor) -> Result<Self> {
        Self::new(default_basis_names(angle.dim()), angle)
    }

    pub fn dim(&self) -> usize {
        self.angle.dim()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn angle(&self) -> &StructureTensor {
        &self.angle
    }

    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Result<Vector> {
        self.angle.apply(x, y)
    }

    /// `L^ann`, the span of all `<x,x>`.
    pub fn annihilator(&self) -> &Subspace {
        &self.annihilator
    }

    /// Right and left multiplication operators `v -> <v,e_i>`, `v -> <e_i,v>`.
    pub fn operators(&self) -> OperatorSet {
        multiplication_operators(&self.angle)
    }

    /// `<I,L> ⊆ I` and `<L,I> ⊆ I`.
    pub fn is_ideal(&self, ideal: &Subspace) -> Result<bool> {
        check_ambient(self.dim(), ideal)?;
        Ok(self.operators().is_invariant(ideal))
    }

    /// Smallest ideal containing `seed`.
    pub fn ideal_closure(&self, seed: &Subspace) -> Result<Subspace> {
        check_ambient(self.dim(), seed)?;
        Ok(ideal_closure_under(&self.operators(), seed))
    }

    pub fn classify_simplicity(&self, budget: &SearchBudget) -> Result<SimplicityVerdict> {
        simplicity::classify(&self.operators(), &self.annihilator, budget)
    }

    /// `<L^ann, L> != 0`, the hypothesis under which a simple algebra is
    /// expected to be linear. Informational only.
    pub fn annihilator_acts_nontrivially(&self) -> bool {
        let n = self.dim();
        self.annihilator
            .basis()
            .iter()
            .any(|a| (0..n).any(|j| !crate::linalg::is_zero_vector(&self.angle.apply_unchecked(a, &unit_vector(n, j)))))
    }

    pub fn direct_sum(&self, other: &LeibnizAlgebra) -> Result<LeibnizAlgebra> {
        let names = self.basis_names.iter().chain(&other.basis_names).cloned().collect();
        LeibnizAlgebra::new(names, self.angle.direct_sum(&other.angle))
    }
}

fn check_ambient(dim: usize, s: &Subspace) -> Result<()> {
    if s.ambient_dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: s.ambient_dim(),
        });
    }
    Ok(())
}

pub(crate) fn multiplication_operators(angle: &StructureTensor) -> OperatorSet {
    let n = angle.dim();
    let mut ops = Vec::with_capacity(2 * n);
    for i in 0..n {
        let e = unit_vector(n, i);
        ops.push(angle.right_operator(&e));
        ops.push(angle.left_operator(&e));
    }
    OperatorSet::new(n, ops).expect("square operators")
}

/// Least fixpoint of `I -> I + <I,L> + <L,I>` (plus any extra operators)
/// starting from `seed`.
pub(crate) fn ideal_closure_under(ops: &OperatorSet, seed: &Subspace) -> Subspace {
    ops.spin(seed.basis())
}

/// The two sides of the right Leibniz identity at `(x, y, z)`.
pub fn right_leibniz_sides(
    angle: &StructureTensor,
    x: &[Rational],
    y: &[Rational],
    z: &[Rational],
) -> Result<(Vector, Vector)> {
    let xy = angle.apply(x, y)?;
    let lhs = angle.apply(&xy, z)?;
    let rhs = add(
        &angle.apply(x, &angle.apply(y, z)?)?,
        &angle.apply(&angle.apply(x, z)?, y)?,
    );
    Ok((lhs, rhs))
}

/// Checks the right Leibniz identity on every basis triple, which suffices
/// by trilinearity.
pub fn verify_right_leibniz(angle: &StructureTensor) -> Report {
    let n = angle.dim();
    let mut checked = 0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                checked += 1;
                let (x, y, z) = (unit_vector(n, i), unit_vector(n, j), unit_vector(n, k));
                let (lhs, rhs) = right_leibniz_sides(angle, &x, &y, &z).expect("basis vectors");
                if lhs != rhs {
                    return Report::failed(
                        Witness {
                            clause: Clause::RightLeibniz,
                            inputs: vec![x, y, z],
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

/// Both presentations of the annihilator: the span of squares `<x,x>` over
/// the polarization set `{e_i} ∪ {e_i + e_j}`, and the span of symmetrized
/// brackets `<e_i,e_j> + <e_j,e_i>`.
pub fn annihilator_spans(angle: &StructureTensor) -> (Subspace, Subspace) {
    let n = angle.dim();
    let mut squares = Vec::new();
    let mut symmetrized = Vec::new();
    for i in 0..n {
        let ei = unit_vector(n, i);
        squares.push(angle.apply_unchecked(&ei, &ei));
        for j in i..n {
            let ej = unit_vector(n, j);
            symmetrized.push(add(angle.basis_product(i, j), angle.basis_product(j, i)));
            if j > i {
                let s = add(&ei, &ej);
                squares.push(angle.apply_unchecked(&s, &s));
            }
        }
    }
    (
        Subspace::span_unchecked(squares, n),
        Subspace::span_unchecked(symmetrized, n),
    )
}

/// `L^ann`; both presentations must agree in characteristic zero.
pub fn annihilator_of(angle: &StructureTensor) -> Subspace {
    let (squares, symmetrized) = annihilator_spans(angle);
    assert_eq!(
        squares, symmetrized,
        "annihilator presentations disagree; this is a bug in the span computation"
    );
    squares
}

/// Result of checking a candidate homomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomomorphismReport {
    pub report: Report,
    pub injective: bool,
    pub kernel: Subspace,
}

pub(crate) fn check_map_shape(phi: &Matrix, source: usize, target: usize) -> Result<()> {
    if phi.rows() != target || phi.cols() != source {
        return Err(Error::ShapeMismatch {
            expected_rows: target,
            expected_cols: source,
            rows: phi.rows(),
            cols: phi.cols(),
        });
    }
    Ok(())
}

/// Checks `phi(e_i ∘ e_j) = phi(e_i) ∘ phi(e_j)` for one bracket.
pub(crate) fn bracket_preserved(
    source: &StructureTensor,
    target: &StructureTensor,
    phi: &Matrix,
    clause: Clause,
) -> Report {
    let n = source.dim();
    let images: Vec<Vector> = (0..n).map(|j| phi.column(j)).collect();
    let mut checked = 0;
    for i in 0..n {
        for j in 0..n {
            checked += 1;
            let lhs = phi.apply(source.basis_product(i, j)).expect("shape checked");
            let rhs = target.apply_unchecked(&images[i], &images[j]);
            if lhs != rhs {
                return Report::failed(
                    Witness {
                        clause,
                        inputs: vec![unit_vector(n, i), unit_vector(n, j)],
                        lhs,
                        rhs,
                    },
                    checked,
                );
            }
        }
    }
    Report::passed(checked)
}

/// `phi` is given as a `dim(target) x dim(source)` matrix whose columns are
/// the images of the source basis.
pub fn check_leibniz_homomorphism(
    source: &LeibnizAlgebra,
    target: &LeibnizAlgebra,
    phi: &Matrix,
) -> Result<HomomorphismReport> {
    check_map_shape(phi, source.dim(), target.dim())?;
    let report = bracket_preserved(&source.angle, &target.angle, phi, Clause::AngleHomomorphism);
    let kernel = kernel(phi);
    Ok(HomomorphismReport {
        report,
        injective: kernel.is_zero(),
        kernel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vector_from_i64;
    use crate::simplicity::{NotSimpleCertificate, Stage};

    fn v(values: &[i64]) -> Vector {
        vector_from_i64(values)
    }

    /// dim 2, only nonzero bracket <e2,e2> = e1
    fn two_dim() -> LeibnizAlgebra {
        LeibnizAlgebra::from_tensor(StructureTensor::from_i64_entries(2, &[(1, 1, 0, 1)]).unwrap()).unwrap()
    }

    fn span(vectors: &[&[i64]], n: usize) -> Subspace {
        Subspace::span(&vectors.iter().map(|x| v(x)).collect::<Vec<_>>(), n).unwrap()
    }

    #[test]
    fn identity_examples() {
        assert!(verify_right_leibniz(&StructureTensor::zeros(3)).holds());
        assert!(verify_right_leibniz(two_dim().angle()).holds());

        let bad = StructureTensor::from_i64_entries(1, &[(0, 0, 0, 1)]).unwrap();
        let report = verify_right_leibniz(&bad);
        let w = report.witness().unwrap();
        assert_eq!(w.basis_indices().unwrap(), vec![0, 0, 0]);
        assert_eq!(w.lhs, v(&[1]));
        assert_eq!(w.rhs, v(&[2]));
        let (lhs, rhs) = right_leibniz_sides(&bad, &w.inputs[0], &w.inputs[1], &w.inputs[2]).unwrap();
        assert_eq!((lhs, rhs), (w.lhs.clone(), w.rhs.clone()));
        assert!(matches!(LeibnizAlgebra::from_tensor(bad), Err(Error::NotLeibniz(_))));
    }

    #[test]
    fn annihilator_examples() {
        let zero = LeibnizAlgebra::from_tensor(StructureTensor::zeros(3)).unwrap();
        assert!(zero.annihilator().is_zero());
        assert_eq!(two_dim().annihilator(), &span(&[&[1, 0]], 2));
    }

    #[test]
    fn ideal_examples() {
        let l = two_dim();
        assert!(l.is_ideal(&Subspace::zero(2)).unwrap());
        assert!(l.is_ideal(&span(&[&[1, 0]], 2)).unwrap());
        assert!(!l.is_ideal(&span(&[&[0, 1]], 2)).unwrap());
        assert!(l.is_ideal(&Subspace::zero(3)).is_err());
    }

    #[test]
    fn closure_examples() {
        let l = two_dim();
        assert!(l.ideal_closure(&Subspace::zero(2)).unwrap().is_zero());
        assert!(l.ideal_closure(&span(&[&[0, 1]], 2)).unwrap().is_full());
        assert_eq!(l.ideal_closure(&span(&[&[1, 0]], 2)).unwrap(), span(&[&[1, 0]], 2));
    }

    #[test]
    fn simplicity_examples() {
        let budget = SearchBudget::default();
        let zero = LeibnizAlgebra::from_tensor(StructureTensor::zeros(2)).unwrap();
        assert_eq!(
            zero.classify_simplicity(&budget).unwrap(),
            SimplicityVerdict::NotSimple(NotSimpleCertificate::AnnihilatorZero)
        );

        let verdict = two_dim().classify_simplicity(&budget).unwrap();
        assert!(verdict.is_simple(), "{verdict:?}");

        let sum = two_dim().direct_sum(&two_dim()).unwrap();
        let verdict = sum.classify_simplicity(&budget).unwrap();
        let ideal = verdict.certificate_ideal().expect("proper ideal certificate");
        assert!(sum.is_ideal(ideal).unwrap());
        assert!(!ideal.is_zero() && !ideal.is_full());
        assert_ne!(ideal, sum.annihilator());
    }

    #[test]
    fn quotient_stage_certificate() {
        // squares all land in e3, so L/N carries the zero action
        let t = StructureTensor::from_i64_entries(3, &[(0, 0, 2, 1), (1, 1, 2, 1), (0, 1, 2, 1)]).unwrap();
        let h = LeibnizAlgebra::from_tensor(t).unwrap();
        let verdict = h.classify_simplicity(&SearchBudget::default()).unwrap();
        match verdict {
            SimplicityVerdict::NotSimple(NotSimpleCertificate::ProperIdeal { ideal, found_by }) => {
                assert_eq!(found_by, Stage::Quotient);
                assert!(h.is_ideal(&ideal).unwrap());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn homomorphism_examples() {
        let l = two_dim();
        let id = check_leibniz_homomorphism(&l, &l, &Matrix::identity(2)).unwrap();
        assert!(id.report.holds() && id.injective);
        let zero = check_leibniz_homomorphism(&l, &l, &Matrix::zeros(2, 2)).unwrap();
        assert!(zero.report.holds());
        assert!(!zero.injective);
        let swap = Matrix::from_i64(&[&[0, 1], &[1, 0]]);
        let r = check_leibniz_homomorphism(&l, &l, &swap).unwrap();
        let w = r.report.witness().unwrap();
        assert_eq!(w.basis_indices().unwrap(), vec![0, 0]);
        assert!(r.injective);
        assert!(check_leibniz_homomorphism(&l, &l, &Matrix::zeros(3, 2)).is_err());
    }

    #[test]
    fn zero_map_into_abelian_target_is_a_homomorphism() {
        let target = LeibnizAlgebra::from_tensor(StructureTensor::zeros(3)).unwrap();
        let src = LeibnizAlgebra::from_tensor(StructureTensor::zeros(2)).unwrap();
        let r = check_leibniz_homomorphism(&src, &target, &Matrix::zeros(3, 2)).unwrap();
        assert!(r.report.holds());
        assert_eq!(r.kernel, Subspace::full(2));
    }
}
