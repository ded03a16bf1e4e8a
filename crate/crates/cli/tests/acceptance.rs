//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any
//! criterion other than the embedding witness fails; that one is checked
//! literally and is expected to fail (see the note printed with it).

use std::process::Command;
use std::time::Instant;

use huliu_cli::fuzz::{self, FuzzConfig};
use huliu_cli::generate::generate;
use huliu_core::algebra::{upper_triangular, GradedAlgebra, StructureTensor};
use huliu_core::huliu::{annihilator_abelian_check, verify_huliu_identities, verify_lie};
use huliu_core::invariant::SearchBudget;
use huliu_core::leibniz::{annihilator_spans, verify_right_leibniz, LeibnizAlgebra};
use huliu_core::linalg::{rat, unit_vector, Matrix, Subspace, Vector};
use huliu_core::passages::{derive_huliu, derive_leibniz, verify_leibniz_embedding};
use huliu_core::report::Clause;
use huliu_core::simplicity::SimplicityVerdict;
use huliu_core::xi_group::{verify_tangent_huliu, EvenConstraint, LinearXiGroup, MatrixRealization};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

const CORPUS_SEED: u64 = 2024;

fn corpus() -> Vec<GradedAlgebra> {
    let config = FuzzConfig {
        trials: 500,
        seed: CORPUS_SEED,
        dim0: 3,
        dim1: 3,
    };
    let report = fuzz::run(&config);
    assert!(report.infeasible.is_empty(), "generation gave up");
    report.outcomes.into_iter().map(|o| o.generated.graded).collect()
}

fn first_failure<T>(items: &[T], mut ok: impl FnMut(&T) -> bool) -> Option<usize> {
    items.iter().position(|x| !ok(x))
}

fn criterion_1(corpus: &[GradedAlgebra]) -> Outcome {
    let bad = first_failure(corpus, |g| {
        let l = derive_leibniz(g).expect("generated algebras are graded");
        verify_right_leibniz(l.angle()).holds()
    });
    match bad {
        None => outcome(
            true,
            format!("{} extensions, right Leibniz identity exact", corpus.len()),
        ),
        Some(i) => outcome(false, format!("extension {i} fails")),
    }
}

fn criterion_2(corpus: &[GradedAlgebra]) -> Outcome {
    let bad = first_failure(corpus, |g| {
        let h = derive_huliu(g).expect("generated algebras are graded");
        verify_lie(h.square()).holds() && verify_huliu_identities(h.angle(), h.square()).holds()
    });
    match bad {
        None => outcome(
            true,
            format!("{} extensions, Lie and all four identities exact", corpus.len()),
        ),
        Some(i) => outcome(false, format!("extension {i} fails")),
    }
}

fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    loop {
        let entries = (0..n * n).map(|_| rat(rng.gen_range(-1..=1))).collect();
        let m = Matrix::new(n, n, entries).unwrap();
        if m.inverse().is_some() {
            return m;
        }
    }
}

fn criterion_3(corpus: &[GradedAlgebra]) -> Outcome {
    let mut tensors: Vec<StructureTensor> = corpus
        .iter()
        .map(|g| derive_leibniz(g).unwrap().angle().clone())
        .collect();
    // raw Leibniz tensors: derived brackets in a random rational basis
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut raw = 0;
    while raw < 100 {
        let g = generate(&mut rng, 3, 3).unwrap().graded;
        let p = random_invertible(&mut rng, g.dim());
        let t = derive_leibniz(&g).unwrap().angle().change_basis(&p).unwrap();
        if !verify_right_leibniz(&t).holds() {
            return outcome(false, "a change of basis broke the Leibniz identity");
        }
        tensors.push(t);
        raw += 1;
    }
    let bad = first_failure(&tensors, |t| {
        let (squares, symmetrized) = annihilator_spans(t);
        squares == symmetrized
    });
    match bad {
        None => outcome(true, format!("{} tensors ({} raw), spans equal", tensors.len(), raw)),
        Some(i) => outcome(false, format!("tensor {i} differs")),
    }
}

fn criterion_4(corpus: &[GradedAlgebra]) -> Outcome {
    let mut nonzero = 0;
    let bad = first_failure(corpus, |g| {
        let h = derive_huliu(g).unwrap();
        nonzero += usize::from(!h.annihilator().is_zero());
        h.annihilator().is_subspace_of(&g.odd_subspace()).unwrap()
            && annihilator_abelian_check(h.angle(), h.square()).holds()
    });
    match bad {
        None => outcome(
            true,
            format!(
                "{} algebras ({} with nonzero annihilator): odd and abelian",
                corpus.len(),
                nonzero
            ),
        ),
        Some(i) => outcome(false, format!("algebra {i} fails")),
    }
}

fn criterion_5(corpus: &[GradedAlgebra]) -> Outcome {
    let bad = first_failure(corpus, |g| {
        let h = derive_huliu(g).unwrap();
        let n = h.dim();
        [Subspace::zero(n), h.annihilator().clone(), Subspace::full(n)]
            .iter()
            .all(|s| h.is_ideal(s).unwrap())
    });
    match bad {
        None => outcome(
            true,
            format!("{} algebras: 0, annihilator and L are Hu-Liu ideals", corpus.len()),
        ),
        Some(i) => outcome(false, format!("algebra {i} fails")),
    }
}

/// All vectors of `Q^n` with coordinates in `-r..=r`.
fn grid(n: usize, r: i64) -> Vec<Vector> {
    let side = (2 * r + 1) as usize;
    (0..side.pow(n as u32))
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let c = (code % side) as i64 - r;
                    code /= side;
                    rat(c)
                })
                .collect()
        })
        .collect()
}

/// Brute-force ideal generated by `v`: add left and right products with
/// basis vectors until nothing new appears.
fn brute_closure(t: &StructureTensor, v: &Vector) -> Subspace {
    let n = t.dim();
    let mut s = Subspace::span(std::slice::from_ref(v), n).unwrap();
    loop {
        let mut new = Vec::new();
        for b in s.basis() {
            for i in 0..n {
                let e = unit_vector(n, i);
                new.push(t.apply(b, &e).unwrap());
                new.push(t.apply(&e, b).unwrap());
            }
        }
        let bigger = s.extended(&new).unwrap();
        if bigger.dim() == s.dim() {
            return s;
        }
        s = bigger;
    }
}

/// Simple by exhaustive search: nonzero annihilator (from squares of grid
/// vectors) and every principal ideal is the annihilator or everything.
fn brute_simple(t: &StructureTensor) -> bool {
    let n = t.dim();
    let squares: Vec<Vector> = grid(n, 1).iter().map(|x| t.apply(x, x).unwrap()).collect();
    let ann = Subspace::span(&squares, n).unwrap();
    if ann.is_zero() {
        return false;
    }
    let full = Subspace::full(n);
    grid(n, 3).iter().filter(|v| v.iter().any(|c| *c != rat(0))).all(|v| {
        let c = brute_closure(t, v);
        c == ann || c == full
    })
}

fn all_tensors(n: usize) -> impl Iterator<Item = StructureTensor> {
    let cells = n * n * n;
    (0..3usize.pow(cells as u32)).map(move |mut code| {
        let mut entries = Vec::new();
        for cell in 0..cells {
            let c = (code % 3) as i64 - 1;
            code /= 3;
            entries.push((cell / (n * n), (cell / n) % n, cell % n, c));
        }
        StructureTensor::from_i64_entries(n, &entries).unwrap()
    })
}

fn criterion_6() -> Outcome {
    let budget = SearchBudget::default();
    let (mut leibniz, mut simple, mut unknown) = (0, 0, 0);
    for n in 1..=2 {
        for t in all_tensors(n) {
            if !verify_right_leibniz(&t).holds() {
                continue;
            }
            leibniz += 1;
            let l = LeibnizAlgebra::from_tensor(t.clone()).unwrap();
            let verdict = l.classify_simplicity(&budget).unwrap();
            if let SimplicityVerdict::Unknown { .. } = verdict {
                unknown += 1;
                continue;
            }
            if verdict.is_simple() != brute_simple(&t) {
                return outcome(false, format!("disagreement on {t:?}: {}", verdict.tag()));
            }
            simple += usize::from(verdict.is_simple());
        }
    }
    let example = LeibnizAlgebra::from_tensor(StructureTensor::from_i64_entries(2, &[(1, 1, 0, 1)]).unwrap()).unwrap();
    let example_simple = example.classify_simplicity(&budget).unwrap().is_simple();
    outcome(
        unknown == 0 && example_simple,
        format!(
            "{leibniz} Leibniz algebras of dim <= 2, {simple} simple, {unknown} unknown; <e2,e2> = e1 simple: {example_simple}"
        ),
    )
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut pass = true;
    for (n, expected) in [(2, 5), (3, 12)] {
        let r = MatrixRealization::matrix_extension_block(n).unwrap();
        let group = LinearXiGroup::with_full_odd(r, vec![EvenConstraint::Orthogonal]).unwrap();
        let t = group.tangent_space().unwrap();
        let verified = verify_tangent_huliu(&t, group.realization()).unwrap().holds();
        let check = group.check_xi_group(1000, 7).unwrap();
        let worst = check.worst();
        pass &= t.dim() == expected && verified && check.holds() && worst <= 1e-9;
        details.push(format!(
            "n={n}: dim {} (want {expected}), brackets verified {verified}, worst residual {worst:.1e}",
            t.dim()
        ));
    }
    let secs = start.elapsed().as_secs_f64();
    pass &= secs < 10.0;
    outcome(pass, format!("{}; {secs:.1}s", details.join("; ")))
}

fn criterion_8() -> Outcome {
    let r = MatrixRealization::matrix_extension_block(2).unwrap();
    let group = LinearXiGroup::with_full_odd(r, vec![EvenConstraint::Orthogonal]).unwrap();
    let grid = [1e-1, 1e-2, 1e-3, 1e-4];
    // tangent X = (E12 - E21) + εE11, non-tangent S = E12 + E21
    let mut x = vec![0.0; 8];
    x[1] = 1.0;
    x[2] = -1.0;
    x[4] = 1.0;
    let mut s = vec![0.0; 8];
    s[1] = 1.0;
    s[2] = 1.0;
    // first-order curve 1 + tX leaves G at order t^2
    let chord = group.chord_curve_check(&x, &grid).unwrap().log_slope().unwrap();
    // exp(tX) stays in G: residual bounded by t^2 at every t (roundoff level)
    let along = group.exp_curve_check(&x, &grid).unwrap();
    let exp_bounded = along.points.iter().all(|p| p.residual() <= p.t * p.t);
    let off = group.exp_curve_check(&s, &grid).unwrap().log_slope().unwrap();
    outcome(
        chord >= 1.8 && exp_bounded && (off - 1.0).abs() <= 0.1,
        format!(
            "tangent chord slope {chord:.3}, exp(tX) residual max {:.1e} (<= t^2: {exp_bounded}), symmetric slope {off:.3}",
            along.max_residual()
        ),
    )
}

fn criterion_9() -> Outcome {
    let dir = std::env::temp_dir().join(format!("huliu-acceptance-{}", std::process::id()));
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_huliu"))
            .args(["fuzz", "--trials", "100", "--seed", "7", "--dump-dir"])
            .arg(&dir)
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    let _ = std::fs::remove_dir_all(&dir);
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    outcome(
        same && a.status.success(),
        format!(
            "{} bytes, identical: {same}, exit {:?}",
            a.stdout.len(),
            a.status.code()
        ),
    )
}

/// The literal claim: e1 -> -E12, e2 -> E11 + E12 embeds `<e2,e2> = e1`
/// into the derived upper-triangular algebra. It does not: the bracket of
/// the images of (e1, e2) is E12 while the image of their bracket is 0.
fn criterion_10() -> (Outcome, bool) {
    let l = LeibnizAlgebra::from_tensor(StructureTensor::from_i64_entries(2, &[(1, 1, 0, 1)]).unwrap()).unwrap();
    // basis E11, E22, E12; columns are the images
    let phi = Matrix::from_i64(&[&[0, 1], &[0, 0], &[-1, 1]]);
    let report = verify_leibniz_embedding(&l, &upper_triangular(), &phi).unwrap();
    let w = report.witness();
    let documented = matches!(w, Some(w) if w.clause == Clause::AngleHomomorphism
        && w.basis_indices() == Some(vec![0, 1])
        && w.lhs == vec![rat(0), rat(0), rat(0)]
        && w.rhs == vec![rat(0), rat(0), rat(1)]);
    let detail = match w {
        None => "embedding verified".to_string(),
        Some(w) => format!(
            "not a homomorphism: {} at basis pair {:?}, phi(<x,y>) = {:?}, <phi x, phi y> = {:?}; no injective homomorphism into this 3-dim algebra exists",
            w.clause,
            w.basis_indices().unwrap_or_default(),
            w.lhs.iter().map(ToString::to_string).collect::<Vec<_>>(),
            w.rhs.iter().map(ToString::to_string).collect::<Vec<_>>()
        ),
    };
    (outcome(report.holds(), detail), documented)
}

fn main() {
    let start = Instant::now();
    let corpus = corpus();
    let mut lines: Vec<(usize, Outcome)> = vec![
        (1, criterion_1(&corpus)),
        (2, criterion_2(&corpus)),
        (3, criterion_3(&corpus)),
        (4, criterion_4(&corpus)),
        (5, criterion_5(&corpus)),
        (6, criterion_6()),
        (7, criterion_7()),
        (8, criterion_8()),
        (9, criterion_9()),
    ];
    let (ten, documented) = criterion_10();
    lines.push((10, ten));
    let mut unexpected = 0;
    for (i, o) in &lines {
        println!(
            "criterion {i:>2}: {} - {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.pass && *i != 10 {
            unexpected += 1;
        }
    }
    if !documented {
        println!("criterion 10: verifier output differs from the documented counterexample");
        unexpected += 1;
    }
    println!("acceptance finished in {:.1}s", start.elapsed().as_secs_f64());
    if unexpected > 0 {
        std::process::exit(1);
    }
}
