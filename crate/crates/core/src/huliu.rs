//! Hu-Liu Leibniz algebras: a right Leibniz bracket `<,>` together with a
//! Lie bracket `[,]` tied to it by four compatibility identities.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::algebra::{default_basis_names, StructureTensor};
use crate::error::{Error, Result};
use crate::invariant::{OperatorSet, SearchBudget};
use crate::leibniz::{
    annihilator_of, bracket_preserved, check_map_shape, ideal_closure_under, multiplication_operators,
    right_leibniz_sides, LeibnizAlgebra,
};
use crate::linalg::{
    add, is_zero_vector, kernel, neg, sub, unit_vector, zero_vector, Matrix, Rational, Subspace, Vector,
};
use crate::report::{Clause, Report, Witness};
use crate::simplicity::{self, SimplicityVerdict};

/// The four compatibility identities, in checking order.
pub const HULIU_CLAUSES: [Clause; 4] = [
    Clause::AngleAbsorbsSquare,
    Clause::SquaresActAlike,
    Clause::ThreeTermSum,
    Clause::FourTermSum,
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HuLiuAlgebra {
    leibniz: LeibnizAlgebra,
    square: StructureTensor,
}

impl HuLiuAlgebra {
    pub fn new(leibniz: LeibnizAlgebra, square: StructureTensor) -> Result<Self> {
        if square.dim() != leibniz.dim() {
            return Err(Error::DimensionMismatch {
                expected: leibniz.dim(),
                found: square.dim(),
            });
        }
        let lie = verify_lie(&square);
        if !lie.holds() {
            return Err(Error::NotLie(lie));
        }
        let report = verify_huliu_identities(leibniz.angle(), &square);
        if !report.holds() {
            return Err(Error::NotHuLiu(report));
        }
        Ok(HuLiuAlgebra { leibniz, square })
    }

    pub fn from_tensors(basis_names: Vec<String>, angle: StructureTensor, square: StructureTensor) -> Result<Self> {
        Self::new(LeibnizAlgebra::new(basis_names, angle)?, square)
    }

    pub fn from_tensors_default(angle: StructureTensor, square: StructureTensor) -> Result<Self> {
        let names = default_basis_names(angle.dim());
        Self::from_tensors(names, angle, square)
    }

    pub fn dim(&self) -> usize {
        self.leibniz.dim()
    }

    pub fn basis_names(&self) -> &[String] {
        self.leibniz.basis_names()
    }

    pub fn leibniz(&self) -> &LeibnizAlgebra {
        &self.leibniz
    }

    pub fn angle(&self) -> &StructureTensor {
        self.leibniz.angle()
    }

    pub fn square(&self) -> &StructureTensor {
        &self.square
    }

    pub fn annihilator(&self) -> &Subspace {
        self.leibniz.annihilator()
    }

    /// `R_x`, `L_x` and `ad_x` for every basis vector `x`.
    pub fn operators(&self) -> OperatorSet {
        huliu_operators(self.angle(), &self.square)
    }

    pub fn is_ideal(&self, ideal: &Subspace) -> Result<bool> {
        check_ambient(self.dim(), ideal)?;
        Ok(self.operators().is_invariant(ideal))
    }

    pub fn is_subalgebra(&self, s: &Subspace) -> Result<bool> {
        check_ambient(self.dim(), s)?;
        Ok(closure_report(self.angle(), &self.square, s)?.holds())
    }

    pub fn ideal_closure(&self, seed: &Subspace) -> Result<Subspace> {
        check_ambient(self.dim(), seed)?;
        Ok(ideal_closure_under(&self.operators(), seed))
    }

    pub fn classify_simplicity(&self, budget: &SearchBudget) -> Result<SimplicityVerdict> {
        simplicity::classify(&self.operators(), self.annihilator(), budget)
    }

    pub fn annihilator_abelian_check(&self) -> Report {
        annihilator_abelian_check(self.angle(), &self.square)
    }

    /// `K(x,y) = tr(ad_x ad_y)` on the basis.
    pub fn killing_form(&self) -> Matrix {
        killing_form(&self.square)
    }

    pub fn killing_form_degenerate(&self) -> bool {
        self.killing_form().determinant().expect("square matrix").is_zero()
    }

    /// `<L^ann, L> != 0`.
    pub fn angle_hypothesis(&self) -> bool {
        self.leibniz.annihilator_acts_nontrivially()
    }

    /// `[L^ann, L] != 0`, the hypothesis paired with linearity of Hu-Liu
    /// algebras. Informational only.
    pub fn square_hypothesis(&self) -> bool {
        let n = self.dim();
        self.annihilator()
            .basis()
            .iter()
            .any(|a| (0..n).any(|j| !is_zero_vector(&self.square.apply_unchecked(a, &unit_vector(n, j)))))
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

pub(crate) fn huliu_operators(angle: &StructureTensor, square: &StructureTensor) -> OperatorSet {
    let base = multiplication_operators(angle);
    let n = angle.dim();
    let mut ops = base.ops().to_vec();
    for i in 0..n {
        ops.push(square.left_operator(&unit_vector(n, i)));
    }
    OperatorSet::new(n, ops).expect("square operators")
}

fn witness(clause: Clause, inputs: Vec<Vector>, lhs: Vector, rhs: Vector) -> Witness {
    Witness {
        clause,
        inputs,
        lhs,
        rhs,
    }
}

/// Evaluates both sides of `clause` at `inputs`, so that any witness can be
/// replayed. Sum identities report the sum as `lhs` and zero as `rhs`;
/// `SquaresActAlike` is evaluated in its polarized three-argument form.
pub fn clause_sides(
    angle: &StructureTensor,
    square: &StructureTensor,
    clause: Clause,
    inputs: &[Vector],
) -> Result<(Vector, Vector)> {
    let n = angle.dim();
    let arity = match clause {
        Clause::Antisymmetry | Clause::AnnihilatorAbelian => 2,
        Clause::RightLeibniz
        | Clause::Jacobi
        | Clause::AngleAbsorbsSquare
        | Clause::SquaresActAlike
        | Clause::ThreeTermSum
        | Clause::FourTermSum => 3,
        other => {
            return Err(Error::InvalidInput(alloc::format!(
                "clause {other} is not a bracket identity"
            )))
        }
    };
    if inputs.len() != arity {
        return Err(Error::InvalidInput(alloc::format!(
            "clause {clause} takes {arity} inputs, got {}",
            inputs.len()
        )));
    }
    for v in inputs {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
    }
    let a = |x: &[Rational], y: &[Rational]| angle.apply_unchecked(x, y);
    let s = |x: &[Rational], y: &[Rational]| square.apply_unchecked(x, y);
    let x = &inputs[0];
    let y = &inputs[1];
    Ok(match clause {
        Clause::Antisymmetry => (s(x, y), neg(&s(y, x))),
        Clause::AnnihilatorAbelian => (s(x, y), zero_vector(n)),
        Clause::RightLeibniz => right_leibniz_sides(angle, x, y, &inputs[2])?,
        Clause::Jacobi => {
            let z = &inputs[2];
            let sum = add(&add(&s(&s(x, y), z), &s(&s(y, z), x)), &s(&s(z, x), y));
            (sum, zero_vector(n))
        }
        Clause::AngleAbsorbsSquare => {
            let z = &inputs[2];
            (a(x, &s(y, z)), a(x, &a(y, z)))
        }
        Clause::SquaresActAlike => {
            let z = &inputs[2];
            let sym = add(&a(x, y), &a(y, x));
            (s(&sym, z), a(&sym, z))
        }
        Clause::ThreeTermSum => {
            let z = &inputs[2];
            let sum = add(&add(&a(&s(x, y), z), &s(&a(y, z), x)), &s(y, &a(x, z)));
            (sum, zero_vector(n))
        }
        Clause::FourTermSum => {
            let z = &inputs[2];
            let sum = add(
                &add(&s(&a(x, y), z), &s(z, &s(x, y))),
                &add(&s(z, &a(y, x)), &a(z, &a(x, y))),
            );
            (sum, zero_vector(n))
        }
        _ => unreachable!(),
    })
}

/// `[<x,x>,y]` and `<<x,x>,y>` for a single `x`, the unpolarized form.
pub fn squares_act_alike_quadratic(
    angle: &StructureTensor,
    square: &StructureTensor,
    x: &[Rational],
    y: &[Rational],
) -> Result<(Vector, Vector)> {
    let xx = angle.apply(x, x)?;
    Ok((square.apply(&xx, y)?, angle.apply(&xx, y)?))
}

fn check_triples(angle: &StructureTensor, square: &StructureTensor, clause: Clause) -> Report {
    let n = angle.dim();
    let mut checked = 0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                checked += 1;
                let inputs = vec![unit_vector(n, i), unit_vector(n, j), unit_vector(n, k)];
                let (lhs, rhs) = clause_sides(angle, square, clause, &inputs).expect("arity fixed");
                if lhs != rhs {
                    return Report::failed(witness(clause, inputs, lhs, rhs), checked);
                }
            }
        }
    }
    Report::passed(checked)
}

/// Antisymmetry on basis pairs, then Jacobi on basis triples.
pub fn verify_lie(square: &StructureTensor) -> Report {
    let n = square.dim();
    let mut checked = 0;
    for i in 0..n {
        for j in i..n {
            checked += 1;
            let inputs = vec![unit_vector(n, i), unit_vector(n, j)];
            let (lhs, rhs) = clause_sides(square, square, Clause::Antisymmetry, &inputs).expect("arity fixed");
            if lhs != rhs {
                return Report::failed(witness(Clause::Antisymmetry, inputs, lhs, rhs), checked);
            }
        }
    }
    Report::passed(checked).and_then(|| check_triples(square, square, Clause::Jacobi))
}

/// The four compatibility identities on basis triples; the squares identity
/// in its polarized bilinear form, which is equivalent over Q.
pub fn verify_huliu_identities(angle: &StructureTensor, square: &StructureTensor) -> Report {
    assert_eq!(angle.dim(), square.dim(), "bracket dimensions differ");
    HULIU_CLAUSES.iter().fold(Report::passed(0), |acc, &clause| {
        acc.and_then(|| check_triples(angle, square, clause))
    })
}

/// Every verifier a Hu-Liu algebra must pass, on raw tensors.
pub fn verify_all(angle: &StructureTensor, square: &StructureTensor) -> Report {
    crate::leibniz::verify_right_leibniz(angle)
        .and_then(|| verify_lie(square))
        .and_then(|| verify_huliu_identities(angle, square))
}

/// `[a,b] = 0` over a basis of the annihilator of `angle`. Works on raw
/// tensors that need not satisfy any identity.
pub fn annihilator_abelian_check(angle: &StructureTensor, square: &StructureTensor) -> Report {
    let ann = annihilator_of(angle);
    let mut checked = 0;
    for a in ann.basis() {
        for b in ann.basis() {
            checked += 1;
            let inputs = vec![a.clone(), b.clone()];
            let (lhs, rhs) = clause_sides(angle, square, Clause::AnnihilatorAbelian, &inputs).expect("arity fixed");
            if lhs != rhs {
                return Report::failed(witness(Clause::AnnihilatorAbelian, inputs, lhs, rhs), checked);
            }
        }
    }
    Report::passed(checked)
}

/// Closure of `s` under both brackets, checked on a basis of `s`.
pub fn closure_report(angle: &StructureTensor, square: &StructureTensor, s: &Subspace) -> Result<Report> {
    check_ambient(angle.dim(), s)?;
    let mut checked = 0;
    for x in s.basis() {
        for y in s.basis() {
            for (clause, tensor) in [(Clause::AngleClosure, angle), (Clause::SquareClosure, square)] {
                checked += 1;
                let product = tensor.apply_unchecked(x, y);
                let residual = s.reduce(&product)?;
                if !is_zero_vector(&residual) {
                    let inside = sub(&product, &residual);
                    return Ok(Report::failed(
                        witness(clause, vec![x.clone(), y.clone()], product, inside),
                        checked,
                    ));
                }
            }
        }
    }
    Ok(Report::passed(checked))
}

pub fn killing_form(square: &StructureTensor) -> Matrix {
    let n = square.dim();
    let ads: Vec<Matrix> = (0..n).map(|i| square.left_operator(&unit_vector(n, i))).collect();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            entries.push(ads[i].checked_mul(&ads[j]).expect("square").trace());
        }
    }
    Matrix::new(n, n, entries).expect("n x n")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HuLiuHomomorphismReport {
    pub report: Report,
    pub injective: bool,
    pub kernel: Subspace,
    pub image: Subspace,
    pub kernel_is_ideal: bool,
    pub image_is_subalgebra: bool,
}

/// Both brackets preserved on basis pairs. For a passing map the kernel is
/// an ideal of the source and the image a subalgebra of the target; both
/// are re-checked.
pub fn check_huliu_homomorphism(
    source: &HuLiuAlgebra,
    target: &HuLiuAlgebra,
    phi: &Matrix,
) -> Result<HuLiuHomomorphismReport> {
    check_map_shape(phi, source.dim(), target.dim())?;
    let report = bracket_preserved(source.angle(), target.angle(), phi, Clause::AngleHomomorphism)
        .and_then(|| bracket_preserved(&source.square, &target.square, phi, Clause::SquareHomomorphism));
    let kernel = kernel(phi);
    let images: Vec<Vector> = (0..phi.cols()).map(|j| phi.column(j)).collect();
    let image = Subspace::span(&images, target.dim())?;
    let kernel_is_ideal = source.is_ideal(&kernel)?;
    let image_is_subalgebra = target.is_subalgebra(&image)?;
    if report.holds() {
        assert!(kernel_is_ideal, "kernel of a homomorphism is not an ideal");
        assert!(image_is_subalgebra, "image of a homomorphism is not a subalgebra");
    }
    Ok(HuLiuHomomorphismReport {
        report,
        injective: kernel.is_zero(),
        kernel,
        image,
        kernel_is_ideal,
        image_is_subalgebra,
    })
}
