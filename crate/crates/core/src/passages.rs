//! From a special Z2-graded associative algebra to its Leibniz and Hu-Liu
//! brackets: `<x,y> = x y0 - y0 x` and `[x,y] = xy - yx`.

use alloc::vec;

use crate::algebra::{GradedAlgebra, StructureTensor};
use crate::error::{Error, Result};
use crate::huliu::{check_huliu_homomorphism, HuLiuAlgebra};
use crate::leibniz::{check_leibniz_homomorphism, LeibnizAlgebra};
use crate::linalg::{sub, Matrix};
use crate::report::{Clause, Report, Witness};

fn check_graded(g: &GradedAlgebra) -> Result<()> {
    let assoc = g.algebra().verify_associative();
    if !assoc.holds() {
        return Err(Error::NotAssociative(assoc));
    }
    let grading = g.verify_special_grading();
    if !grading.holds() {
        return Err(Error::NotSpeciallyGraded(grading));
    }
    Ok(())
}

/// `<e_i,e_j> = e_i e_j - e_j e_i` for even `e_j`, zero for odd `e_j`.
pub fn angle_tensor(g: &GradedAlgebra) -> StructureTensor {
    let n = g.dim();
    let product = g.algebra().product();
    let mut t = StructureTensor::zeros(n);
    for i in 0..n {
        for &j in g.even_indices() {
            let v = sub(product.basis_product(i, j), product.basis_product(j, i));
            for (k, c) in v.into_iter().enumerate() {
                t.set(i, j, k, c);
            }
        }
    }
    t
}

/// The commutator bracket of an associative product.
pub fn commutator_tensor(product: &StructureTensor) -> StructureTensor {
    let n = product.dim();
    let mut t = StructureTensor::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let v = sub(product.basis_product(i, j), product.basis_product(j, i));
            for (k, c) in v.into_iter().enumerate() {
                t.set(i, j, k, c);
            }
        }
    }
    t
}

pub fn derive_leibniz(g: &GradedAlgebra) -> Result<LeibnizAlgebra> {
    check_graded(g)?;
    let l = LeibnizAlgebra::new(g.algebra().basis_names().to_vec(), angle_tensor(g));
    Ok(l.expect("the derived bracket of a graded algebra satisfies the right Leibniz identity"))
}

pub fn derive_huliu(g: &GradedAlgebra) -> Result<HuLiuAlgebra> {
    let leibniz = derive_leibniz(g)?;
    let square = commutator_tensor(g.algebra().product());
    Ok(HuLiuAlgebra::new(leibniz, square).expect("the derived pair of a graded algebra is Hu-Liu"))
}

/// The first kernel vector of `phi`, as an injectivity witness: the input is
/// the nonzero source vector, `lhs` its image (zero) and `rhs` the vector.
fn injectivity(phi: &Matrix) -> Report {
    let kernel = crate::linalg::kernel(phi);
    match kernel.basis().first() {
        None => Report::passed(1),
        Some(x) => Report::failed(
            Witness {
                clause: Clause::Injectivity,
                inputs: vec![x.clone()],
                lhs: phi.apply(x).expect("shape checked"),
                rhs: x.clone(),
            },
            1,
        ),
    }
}

/// `phi` is an injective Leibniz homomorphism into the derived algebra of `g`.
pub fn verify_leibniz_embedding(l: &LeibnizAlgebra, g: &GradedAlgebra, phi: &Matrix) -> Result<Report> {
    let target = derive_leibniz(g)?;
    let hom = check_leibniz_homomorphism(l, &target, phi)?;
    Ok(hom.report.and_then(|| injectivity(phi)))
}

/// `phi` is an injective Hu-Liu homomorphism into the derived pair of `g`.
pub fn verify_huliu_embedding(h: &HuLiuAlgebra, g: &GradedAlgebra, phi: &Matrix) -> Result<Report> {
    let target = derive_huliu(g)?;
    let hom = check_huliu_homomorphism(h, &target, phi)?;
    Ok(hom.report.and_then(|| injectivity(phi)))
}
