use huliu_core::algebra::{make_block_upper, matrix_extension, upper_triangular, GradedAlgebra, StructureTensor};
use huliu_core::huliu::{clause_sides, squares_act_alike_quadratic};
use huliu_core::leibniz::annihilator_spans;
use huliu_core::linalg::{add, kernel, rat, rref, scale, sub, vector_from_i64, Matrix, Subspace, Vector};
use huliu_core::passages::{derive_huliu, derive_leibniz};
use huliu_core::report::Clause;
use huliu_core::xi_group::{invert_unit, xi};
use proptest::prelude::*;

fn small_vec(n: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(-3i64..=3, n).prop_map(|v| vector_from_i64(&v))
}

fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-2i64..=2, rows * cols)
        .prop_map(move |v| Matrix::new(rows, cols, v.into_iter().map(rat).collect()).unwrap())
}

fn small_vectors(n: usize, max: usize) -> impl Strategy<Value = Vec<Vector>> {
    prop::collection::vec(small_vec(n), 0..=max)
}

fn raw_tensor(n: usize) -> impl Strategy<Value = StructureTensor> {
    prop::collection::vec(-1i64..=1, n * n * n).prop_map(move |v| {
        let entries: Vec<_> = v
            .into_iter()
            .enumerate()
            .map(|(idx, c)| (idx / (n * n), (idx / n) % n, idx % n, c))
            .collect();
        StructureTensor::from_i64_entries(n, &entries).unwrap()
    })
}

fn graded_model() -> impl Strategy<Value = GradedAlgebra> {
    prop_oneof![
        Just(upper_triangular()),
        Just(make_block_upper(1, 2).unwrap()),
        Just(matrix_extension(2)),
    ]
}

proptest! {
    #[test]
    fn rank_plus_nullity(m in small_matrix(3, 5)) {
        prop_assert_eq!(m.rank() + kernel(&m).dim(), 5);
    }

    #[test]
    fn rref_is_idempotent(m in small_matrix(4, 4)) {
        let r = rref(&m);
        prop_assert_eq!(rref(&r), r.clone());
        prop_assert_eq!(r.rank(), m.rank());
    }

    #[test]
    fn span_of_basis_is_itself(vs in small_vectors(4, 5)) {
        let s = Subspace::span(&vs, 4).unwrap();
        prop_assert_eq!(Subspace::span(s.basis(), 4).unwrap(), s.clone());
        for v in &vs {
            prop_assert!(s.contains(v).unwrap());
        }
    }

    #[test]
    fn dimension_formula(a in small_vectors(4, 3), b in small_vectors(4, 3)) {
        let u = Subspace::span(&a, 4).unwrap();
        let w = Subspace::span(&b, 4).unwrap();
        let sum = u.sum(&w).unwrap();
        let meet = u.intersect(&w).unwrap();
        prop_assert_eq!(sum.dim() + meet.dim(), u.dim() + w.dim());
        prop_assert!(meet.is_subspace_of(&u).unwrap() && meet.is_subspace_of(&w).unwrap());
    }

    #[test]
    fn bracket_is_bilinear(t in raw_tensor(3), x in small_vec(3), y in small_vec(3), z in small_vec(3), c in -3i64..=3) {
        let c = rat(c);
        let lhs = t.apply(&add(&x, &scale(&c, &y)), &z).unwrap();
        let rhs = add(&t.apply(&x, &z).unwrap(), &scale(&c, &t.apply(&y, &z).unwrap()));
        prop_assert_eq!(lhs, rhs);
        let lhs = t.apply(&z, &add(&x, &scale(&c, &y))).unwrap();
        let rhs = add(&t.apply(&z, &x).unwrap(), &scale(&c, &t.apply(&z, &y).unwrap()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn annihilator_presentations_agree_on_raw_tensors(t in raw_tensor(3)) {
        let (squares, symmetrized) = annihilator_spans(&t);
        prop_assert_eq!(squares, symmetrized);
    }

    #[test]
    fn squares_identity_polarizes(angle in raw_tensor(2), square in raw_tensor(2), x in small_vec(2), y in small_vec(2), z in small_vec(2)) {
        // defect(x) = [<x,x>,z] - <<x,x>,z>; defect(x+y) - defect(x) - defect(y)
        // is the polarized defect at (x, y, z)
        let defect = |v: &Vector| {
            let (l, r) = squares_act_alike_quadratic(&angle, &square, v, &z).unwrap();
            sub(&l, &r)
        };
        let polar = sub(&sub(&defect(&add(&x, &y)), &defect(&x)), &defect(&y));
        let (l, r) = clause_sides(&angle, &square, Clause::SquaresActAlike, &[x.clone(), y.clone(), z.clone()]).unwrap();
        prop_assert_eq!(polar, sub(&l, &r));
    }

    #[test]
    fn ideal_closure_laws(g in graded_model(), a in small_vectors(8, 2), b in small_vectors(8, 2)) {
        let l = derive_leibniz(&g).unwrap();
        let n = l.dim();
        let trim = |vs: &[Vector]| -> Vec<Vector> { vs.iter().map(|v| v[..n].to_vec()).collect() };
        let s = Subspace::span(&trim(&a), n).unwrap();
        let t = s.sum(&Subspace::span(&trim(&b), n).unwrap()).unwrap();
        let cs = l.ideal_closure(&s).unwrap();
        prop_assert!(s.is_subspace_of(&cs).unwrap());
        prop_assert_eq!(l.ideal_closure(&cs).unwrap(), cs.clone());
        prop_assert!(l.is_ideal(&cs).unwrap());
        prop_assert!(cs.is_subspace_of(&l.ideal_closure(&t).unwrap()).unwrap());
    }

    #[test]
    fn derived_brackets_agree_on_even_arguments(g in graded_model(), x in small_vec(8), y in small_vec(8)) {
        let h = derive_huliu(&g).unwrap();
        let n = h.dim();
        let x0 = g.even_part(&x[..n]);
        let y0 = g.even_part(&y[..n]);
        prop_assert_eq!(h.angle().apply(&x0, &y0).unwrap(), h.square().apply(&x0, &y0).unwrap());
        // the square of any element is odd
        let xx = h.angle().apply(&x[..n], &x[..n]).unwrap();
        prop_assert!(g.odd_subspace().contains(&xx).unwrap());
    }

    #[test]
    fn xi_is_an_idempotent_homomorphism(g in graded_model(), x in small_vec(8), y in small_vec(8)) {
        let n = g.dim();
        let (x, y) = (&x[..n], &y[..n]);
        prop_assert_eq!(xi(&g, &xi(&g, x)), xi(&g, x));
        let xy = g.multiply(x, y).unwrap();
        prop_assert_eq!(xi(&g, &xy), g.multiply(&xi(&g, x), &xi(&g, y)).unwrap());
    }

    #[test]
    fn inverse_is_two_sided(g in graded_model(), x in small_vec(8)) {
        let n = g.dim();
        let x = &x[..n];
        let unit = g.algebra().unit().unwrap().clone();
        match invert_unit(&g, x) {
            Ok(inv) => {
                prop_assert_eq!(g.multiply(x, &inv).unwrap(), unit.clone());
                prop_assert_eq!(g.multiply(&inv, x).unwrap(), unit);
            }
            Err(_) => {
                // not a unit: the even block of x0 is singular in the left-regular action
                let x0 = g.even_part(x);
                prop_assert_eq!(g.algebra().left_multiplication(&x0).determinant().unwrap(), rat(0));
            }
        }
    }
}
