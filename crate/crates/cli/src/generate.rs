//! Seeded random trivial extensions `A0 ⊕ M` with small integer structure
//! constants.

use huliu_core::algebra::{make_trivial_extension, Algebra, BimoduleActions, GradedAlgebra, StructureTensor};
use huliu_core::linalg::{rat, Matrix, Rational};
use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::Rng;

/// Largest absolute value allowed in a generated structure constant.
pub const MAX_CONSTANT: i64 = 2;

const ATTEMPTS: usize = 64;

/// splitmix64 of `seed` mixed with `index`: the seed of one fuzz trial.
pub fn trial_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed
        ^ index
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// What went into a generated algebra, for reports and dump files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub graded: GradedAlgebra,
    pub a0: String,
    pub bimodule: String,
}

fn tensor(dim: usize, entries: &[(usize, usize, usize, i64)]) -> StructureTensor {
    StructureTensor::from_i64_entries(dim, entries).expect("indices in range")
}

/// Small associative algebras of dimension `d` in their natural bases.
fn seed_algebra<R: Rng>(rng: &mut R, d: usize) -> (StructureTensor, String) {
    let mut pick: Vec<(StructureTensor, &str)> = vec![(StructureTensor::zeros(d), "zero")];
    // Q^d: idempotents e_i e_i = e_i
    let diag: Vec<_> = (0..d).map(|i| (i, i, i, 1)).collect();
    pick.push((tensor(d, &diag), "diagonal"));
    // left and right zero semigroups: e_i e_j = e_i, e_i e_j = e_j
    let left: Vec<_> = (0..d).flat_map(|i| (0..d).map(move |j| (i, j, i, 1))).collect();
    pick.push((tensor(d, &left), "left-zero-semigroup"));
    let right: Vec<_> = (0..d).flat_map(|i| (0..d).map(move |j| (i, j, j, 1))).collect();
    pick.push((tensor(d, &right), "right-zero-semigroup"));
    // truncated polynomials Q[t]/t^d with basis 1, t, ..., t^(d-1)
    let poly: Vec<_> = (0..d)
        .flat_map(|i| (0..d).filter(move |j| i + j < d).map(move |j| (i, j, i + j, 1)))
        .collect();
    pick.push((tensor(d, &poly), "truncated-polynomial"));
    // non-unital t Q[t]/t^(d+1)
    let nil: Vec<_> = (0..d)
        .flat_map(|i| (0..d).filter(move |j| i + j + 1 < d).map(move |j| (i, j, i + j + 1, 1)))
        .collect();
    pick.push((tensor(d, &nil), "nilpotent-polynomial"));
    match d {
        2 => {
            // e1 idempotent, e2 e1 = e2: a one-sided unit
            pick.push((tensor(2, &[(0, 0, 0, 1), (1, 0, 1, 1)]), "right-unit"));
            pick.push((tensor(2, &[(0, 0, 0, 1), (0, 1, 1, 1)]), "left-unit"));
            pick.push((tensor(2, &[(0, 0, 0, 1)]), "idempotent-plus-zero"));
        }
        3 => {
            // upper-triangular 2x2 with basis E11, E22, E12
            pick.push((
                tensor(3, &[(0, 0, 0, 1), (1, 1, 1, 1), (0, 2, 2, 1), (2, 1, 2, 1)]),
                "upper-triangular",
            ));
            // Q × Q[t]/t^2
            pick.push((
                tensor(3, &[(0, 0, 0, 1), (1, 1, 1, 1), (1, 2, 2, 1), (2, 1, 2, 1)]),
                "line-times-dual",
            ));
            // e1 e2 = e3 only
            pick.push((tensor(3, &[(0, 1, 2, 1)]), "heisenberg-product"));
        }
        _ => {}
    }
    let (t, name) = pick.choose(rng).expect("nonempty").clone();
    (t, name.to_string())
}

/// A sparse random tensor with entries in `{-1, 0, 1}`, kept if associative.
fn random_associative<R: Rng>(rng: &mut R, d: usize) -> Option<StructureTensor> {
    let mut t = StructureTensor::zeros(d);
    let nonzero = rng.gen_range(1..=d * d);
    for _ in 0..nonzero {
        let (i, j, k) = (rng.gen_range(0..d), rng.gen_range(0..d), rng.gen_range(0..d));
        let c = if rng.gen_bool(0.5) { 1 } else { -1 };
        t.set(i, j, k, rat(c));
    }
    huliu_core::algebra::verify_associative(&t).holds().then_some(t)
}

fn elementary_unimodular<R: Rng>(rng: &mut R, d: usize) -> Matrix {
    let mut p = Matrix::identity(d);
    if d < 2 {
        return p;
    }
    let steps = rng.gen_range(1..=2);
    for _ in 0..steps {
        let i = rng.gen_range(0..d);
        let mut j = rng.gen_range(0..d - 1);
        if j >= i {
            j += 1;
        }
        let c = if rng.gen_bool(0.5) { rat(1) } else { rat(-1) };
        // column i += c * column j
        for r in 0..d {
            let v = p[(r, i)].clone() + c.clone() * p[(r, j)].clone();
            p[(r, i)] = v;
        }
    }
    p
}

fn signed_permutation<R: Rng>(rng: &mut R, d: usize) -> Matrix {
    let mut perm: Vec<usize> = (0..d).collect();
    perm.shuffle(rng);
    let mut p = Matrix::zeros(d, d);
    for (col, &row) in perm.iter().enumerate() {
        p[(row, col)] = if rng.gen_bool(0.75) { rat(1) } else { rat(-1) };
    }
    p
}

fn random_basis_change<R: Rng>(rng: &mut R, d: usize) -> Matrix {
    match rng.gen_range(0..3) {
        0 => Matrix::identity(d),
        1 => signed_permutation(rng, d),
        _ => elementary_unimodular(rng, d),
    }
}

fn small(t: &StructureTensor) -> bool {
    let bound = rat(MAX_CONSTANT);
    t.nonzero_entries().all(|(_, _, _, c)| c.abs() <= bound)
}

fn random_a0<R: Rng>(rng: &mut R, d: usize) -> (Algebra, String) {
    let (t, name) = if rng.gen_bool(0.2) {
        match (0..8).find_map(|_| random_associative(rng, d)) {
            Some(t) => (t, "random-sparse".to_string()),
            None => seed_algebra(rng, d),
        }
    } else {
        seed_algebra(rng, d)
    };
    let p = random_basis_change(rng, d);
    let changed = t.change_basis(&p).expect("unimodular change of basis");
    let (t, name) = if small(&changed) && !p.checked_sub(&Matrix::identity(d)).expect("square").is_zero() {
        (changed, format!("{name}+basis-change"))
    } else {
        (t, name)
    };
    (Algebra::with_default_names(t), name)
}

/// Algebra homomorphisms `A0 -> Q` with values in `{-1, 0, 1}`, including
/// the zero map.
fn characters(a0: &Algebra) -> Vec<Vec<Rational>> {
    let d = a0.dim();
    let mut out = Vec::new();
    let total = 3usize.pow(d as u32);
    for code in 0..total {
        let mut c = code;
        let chi: Vec<Rational> = (0..d)
            .map(|_| {
                let v = (c % 3) as i64 - 1;
                c /= 3;
                rat(v)
            })
            .collect();
        let ok = (0..d).all(|i| {
            (0..d).all(|j| {
                let prod: Rational = (0..d).map(|k| a0.product().get(i, j, k).clone() * chi[k].clone()).sum();
                prod == chi[i].clone() * chi[j].clone()
            })
        });
        if ok {
            out.push(chi);
        }
    }
    out
}

fn character_actions(d: usize, chis: &[Vec<Rational>]) -> Vec<Matrix> {
    let m = chis.len();
    (0..d)
        .map(|a| {
            let mut mat = Matrix::zeros(m, m);
            for (i, chi) in chis.iter().enumerate() {
                mat[(i, i)] = chi[a].clone();
            }
            mat
        })
        .collect()
}

fn direct_sum_actions(a: &BimoduleActions, b: &BimoduleActions) -> BimoduleActions {
    let m = a.module_dim + b.module_dim;
    let block = |x: &Matrix, y: &Matrix| {
        let mut out = Matrix::zeros(m, m);
        for r in 0..x.rows() {
            for c in 0..x.cols() {
                out[(r, c)] = x[(r, c)].clone();
            }
        }
        for r in 0..y.rows() {
            for c in 0..y.cols() {
                out[(a.module_dim + r, a.module_dim + c)] = y[(r, c)].clone();
            }
        }
        out
    };
    BimoduleActions {
        module_dim: m,
        left: a.left.iter().zip(&b.left).map(|(x, y)| block(x, y)).collect(),
        right: a.right.iter().zip(&b.right).map(|(x, y)| block(x, y)).collect(),
    }
}

/// `Q^-1 X Q` on every action matrix: the same bimodule in another basis.
fn conjugate_actions(actions: &BimoduleActions, q: &Matrix) -> BimoduleActions {
    let qi = q.inverse().expect("unimodular");
    let conj = |x: &Matrix| qi.checked_mul(&x.checked_mul(q).expect("shape")).expect("shape");
    BimoduleActions {
        module_dim: actions.module_dim,
        left: actions.left.iter().map(conj).collect(),
        right: actions.right.iter().map(conj).collect(),
    }
}

fn random_actions<R: Rng>(rng: &mut R, a0: &Algebra, m: usize) -> BimoduleActions {
    let d = a0.dim();
    let nonzero = rng.gen_range(1..=(2 * d * m * m).max(1));
    let mut left = vec![Matrix::zeros(m, m); d];
    let mut right = vec![Matrix::zeros(m, m); d];
    for _ in 0..nonzero {
        let side = if rng.gen_bool(0.5) { &mut left } else { &mut right };
        let (a, r, c) = (rng.gen_range(0..d), rng.gen_range(0..m), rng.gen_range(0..m));
        side[a][(r, c)] = if rng.gen_bool(0.5) { rat(1) } else { rat(-1) };
    }
    BimoduleActions {
        module_dim: m,
        left,
        right,
    }
}

fn is_bimodule(a0: &Algebra, actions: &BimoduleActions) -> bool {
    actions.verify(a0).map(|r| r.holds()).unwrap_or(false)
}

/// A bimodule of dimension exactly `m`, built from pieces of smaller size.
fn random_bimodule<R: Rng>(rng: &mut R, a0: &Algebra, m: usize) -> (BimoduleActions, String) {
    let d = a0.dim();
    if m == 0 {
        return (BimoduleActions::zero(d, 0), "none".into());
    }
    let choice = rng.gen_range(0..5);
    if choice == 0 && d <= m {
        let regular = BimoduleActions::regular(a0);
        let (rest, name) = random_bimodule(rng, a0, m - d);
        let sides = rng.gen_range(0..3);
        let regular = match sides {
            0 => regular,
            1 => BimoduleActions {
                right: vec![Matrix::zeros(d, d); d],
                ..regular
            },
            _ => BimoduleActions {
                left: vec![Matrix::zeros(d, d); d],
                ..regular
            },
        };
        let label = ["regular", "left-regular", "right-regular"][sides];
        return (direct_sum_actions(&regular, &rest), format!("{label}+{name}"));
    }
    if choice <= 2 {
        let chis = characters(a0);
        let left: Vec<_> = (0..m).map(|_| chis.choose(rng).expect("zero map").clone()).collect();
        let right: Vec<_> = (0..m).map(|_| chis.choose(rng).expect("zero map").clone()).collect();
        let actions = BimoduleActions {
            module_dim: m,
            left: character_actions(d, &left),
            right: character_actions(d, &right),
        };
        let q = random_basis_change(rng, m);
        return (conjugate_actions(&actions, &q), "characters".into());
    }
    if choice == 3 {
        for _ in 0..ATTEMPTS {
            let actions = random_actions(rng, a0, m);
            if is_bimodule(a0, &actions) {
                return (actions, "random-sparse".into());
            }
        }
    }
    (BimoduleActions::zero(d, m), "zero".into())
}

/// Generates a trivial extension with `dim A0` in `1..=dim0` and
/// `dim M` in `0..=dim1`, retrying basis changes that push constants out of
/// `[-2, 2]`. `None` after a bounded number of attempts.
pub fn generate<R: Rng>(rng: &mut R, dim0: usize, dim1: usize) -> Option<Generated> {
    let d0 = rng.gen_range(1..=dim0.max(1));
    let d1 = rng.gen_range(0..=dim1);
    for _ in 0..ATTEMPTS {
        let (a0, a0_name) = random_a0(rng, d0);
        let (actions, bimodule) = random_bimodule(rng, &a0, d1);
        let Ok(graded) = make_trivial_extension(&a0, &actions) else {
            continue;
        };
        if small(graded.algebra().product()) {
            return Some(Generated {
                graded,
                a0: a0_name,
                bimodule,
            });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_algebras_are_graded_and_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let g = generate(&mut rng, 3, 3).expect("zero fallback always succeeds").graded;
            assert!(g.algebra().verify_associative().holds());
            assert!(g.verify_special_grading().holds());
            assert!(small(g.algebra().product()));
            assert!(g.even_indices().len() <= 3 && g.odd_indices().len() <= 3);
        }
    }

    #[test]
    fn corpus_is_varied() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut kinds = std::collections::BTreeSet::new();
        let mut nonzero_odd = 0;
        for _ in 0..200 {
            let g = generate(&mut rng, 3, 3).unwrap();
            kinds.insert(g.bimodule.split('+').next().unwrap().to_string());
            let n = g.graded.dim();
            let d0 = g.graded.even_indices().len();
            let acts = (0..d0).any(|a| {
                (d0..n).any(|m| {
                    !g.graded
                        .algebra()
                        .product()
                        .basis_product(a, m)
                        .iter()
                        .all(num_traits::Zero::is_zero)
                })
            });
            nonzero_odd += usize::from(acts);
        }
        assert!(kinds.len() >= 4, "{kinds:?}");
        assert!(nonzero_odd > 50, "{nonzero_odd}");
    }

    #[test]
    fn characters_include_zero_and_counit() {
        // Q[t]/t^2: characters send t to 0, 1 to 0 or 1
        let a0 = Algebra::with_default_names(tensor(2, &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)]));
        let chis = characters(&a0);
        assert_eq!(chis, vec![vec![rat(0), rat(0)], vec![rat(1), rat(0)]]);
    }

    #[test]
    fn trial_seeds_differ() {
        let seeds: std::collections::BTreeSet<_> = (0..1000).map(|i| trial_seed(7, i)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_ne!(trial_seed(7, 0), trial_seed(8, 0));
    }
}
