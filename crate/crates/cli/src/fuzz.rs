//! Deterministic fuzzing of the passages from graded algebras to Leibniz and
//! Hu-Liu brackets.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use huliu_core::algebra::GradedAlgebra;
use huliu_core::huliu::{
    annihilator_abelian_check, squares_act_alike_quadratic, verify_huliu_identities, verify_lie, HuLiuAlgebra,
};
use huliu_core::leibniz::{annihilator_spans, verify_right_leibniz};
use huliu_core::linalg::{rat, unit_vector, Subspace, Vector};
use huliu_core::passages::{angle_tensor, commutator_tensor};
use huliu_core::report::Report;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::format;
use crate::generate::{generate, trial_seed, Generated};
use crate::schema::AlgebraFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FuzzConfig {
    pub trials: usize,
    pub seed: u64,
    pub dim0: usize,
    pub dim1: usize,
}

/// Names of the per-trial checks, in the order they run.
pub const CHECKS: [&str; 11] = [
    "associative",
    "special-grading",
    "right-leibniz",
    "lie",
    "huliu-identities",
    "squares-quadratic",
    "annihilator-spans",
    "annihilator-odd",
    "annihilator-abelian",
    "ideal-triple",
    "even-agreement",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    /// `None` when the check passed.
    pub failure: Option<String>,
}

#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub index: usize,
    pub seed: u64,
    pub generated: Generated,
    pub checks: Vec<CheckResult>,
    /// Killing form of the square bracket is degenerate (informational;
    /// expected whenever the annihilator is nonzero).
    pub killing_degenerate: bool,
    pub annihilator_dim: usize,
}

impl TrialOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failure.is_none())
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn from_report(name: &'static str, names: &[String], r: &Report) -> CheckResult {
    CheckResult {
        name,
        failure: r.witness().map(|w| format::witness(names, w)),
    }
}

fn from_bool(name: &'static str, ok: bool, detail: impl FnOnce() -> String) -> CheckResult {
    CheckResult {
        name,
        failure: (!ok).then(detail),
    }
}

fn random_vector<R: Rng>(rng: &mut R, n: usize) -> Vector {
    (0..n).map(|_| rat(rng.gen_range(-3..=3))).collect()
}

/// Runs every check on one algebra. `rng` feeds the quadratic form check.
pub fn check_algebra<R: Rng>(g: &GradedAlgebra, rng: &mut R) -> (Vec<CheckResult>, bool, usize) {
    let names = g.algebra().basis_names().to_vec();
    let n = g.dim();
    let angle = angle_tensor(g);
    let square = commutator_tensor(g.algebra().product());
    let mut checks = vec![
        from_report("associative", &names, &g.algebra().verify_associative()),
        from_report("special-grading", &names, &g.verify_special_grading()),
        from_report("right-leibniz", &names, &verify_right_leibniz(&angle)),
        from_report("lie", &names, &verify_lie(&square)),
        from_report("huliu-identities", &names, &verify_huliu_identities(&angle, &square)),
    ];

    let mut quadratic = None;
    for _ in 0..4 {
        let (x, z) = (random_vector(rng, n), random_vector(rng, n));
        let (l, r) = squares_act_alike_quadratic(&angle, &square, &x, &z).expect("dimensions agree");
        if l != r && quadratic.is_none() {
            quadratic = Some(format!(
                "[<x,x>,z] != <<x,x>,z> at x = {}, z = {}",
                format::vector(&names, &x),
                format::vector(&names, &z)
            ));
        }
    }
    checks.push(CheckResult {
        name: "squares-quadratic",
        failure: quadratic,
    });

    let (squares, symmetrized) = annihilator_spans(&angle);
    let spans_agree = squares == symmetrized;
    checks.push(from_bool("annihilator-spans", spans_agree, || {
        format!(
            "span of squares {} differs from span of symmetrized brackets {}",
            format::subspace(&names, &squares),
            format::subspace(&names, &symmetrized)
        )
    }));
    let ann = squares;
    let odd = g.odd_subspace();
    checks.push(from_bool(
        "annihilator-odd",
        ann.is_subspace_of(&odd).expect("same ambient space"),
        || format!("annihilator {} leaves the odd part", format::subspace(&names, &ann)),
    ));
    checks.push(from_report(
        "annihilator-abelian",
        &names,
        &annihilator_abelian_check(&angle, &square),
    ));

    // the ideal triple needs a constructed algebra, which needs the identities
    let identities_hold = checks.iter().all(|c| c.failure.is_none());
    let mut killing_degenerate = false;
    let triple = if identities_hold {
        let h = HuLiuAlgebra::from_tensors(names.clone(), angle.clone(), square.clone())
            .expect("identities verified above");
        killing_degenerate = h.killing_form_degenerate();
        let candidates = [Subspace::zero(n), h.annihilator().clone(), Subspace::full(n)];
        candidates
            .iter()
            .find(|s| !h.is_ideal(s).expect("same ambient space"))
            .map(|s| format!("{} is not an ideal", format::subspace(&names, s)))
    } else {
        Some("skipped: identities failed".to_string())
    };
    checks.push(CheckResult {
        name: "ideal-triple",
        failure: triple,
    });

    let mut agreement = None;
    'outer: for &i in g.even_indices() {
        for &j in g.even_indices() {
            let (x, y) = (unit_vector(n, i), unit_vector(n, j));
            if angle.apply(&x, &y).expect("dims") != square.apply(&x, &y).expect("dims") {
                agreement = Some(format!("<{0},{1}> != [{0},{1}]", names[i], names[j]));
                break 'outer;
            }
        }
    }
    checks.push(CheckResult {
        name: "even-agreement",
        failure: agreement,
    });
    debug_assert_eq!(checks.iter().map(|c| c.name).collect::<Vec<_>>(), CHECKS);
    (checks, killing_degenerate, ann.dim())
}

/// One trial, reproducible from `(config.seed, index)` alone.
pub fn run_trial(config: &FuzzConfig, index: usize) -> Option<TrialOutcome> {
    let seed = trial_seed(config.seed, index as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let generated = generate(&mut rng, config.dim0, config.dim1)?;
    let (checks, killing_degenerate, annihilator_dim) = check_algebra(&generated.graded, &mut rng);
    Some(TrialOutcome {
        index,
        seed,
        generated,
        checks,
        killing_degenerate,
        annihilator_dim,
    })
}

#[derive(Debug, Clone)]
pub struct FuzzReport {
    pub config: FuzzConfig,
    pub outcomes: Vec<TrialOutcome>,
    /// Trials whose generation gave up.
    pub infeasible: Vec<usize>,
}

impl FuzzReport {
    pub fn failed(&self) -> impl Iterator<Item = &TrialOutcome> {
        self.outcomes.iter().filter(|o| !o.passed())
    }

    pub fn all_passed(&self) -> bool {
        self.infeasible.is_empty() && self.failed().next().is_none()
    }

    /// Exit code: 0 all pass, 1 some trial failed, 2 generation infeasible.
    pub fn exit_code(&self) -> i32 {
        if !self.infeasible.is_empty() {
            2
        } else if self.failed().next().is_some() {
            1
        } else {
            0
        }
    }

    pub fn render(&self, dumped: &[(usize, PathBuf)]) -> String {
        let c = &self.config;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "fuzz: {} trials, seed {}, dim A0 <= {}, dim A1 <= {}",
            c.trials, c.seed, c.dim0, c.dim1
        );
        for o in &self.outcomes {
            let g = &o.generated;
            let status = if o.passed() { "ok" } else { "FAIL" };
            let _ = writeln!(
                out,
                "trial {:>4} seed {:016x} dims {}+{} a0 {} bimodule {} ann {} killing-degenerate {}: {}",
                o.index,
                o.seed,
                g.graded.even_indices().len(),
                g.graded.odd_indices().len(),
                g.a0,
                g.bimodule,
                o.annihilator_dim,
                o.killing_degenerate,
                status
            );
            for check in &o.checks {
                if let Some(f) = &check.failure {
                    let _ = writeln!(out, "  {}: {}", check.name, f.replace('\n', "\n    "));
                }
            }
            if let Some((_, path)) = dumped.iter().find(|(i, _)| *i == o.index) {
                let _ = writeln!(out, "  dumped to {}", path.display());
            }
        }
        for i in &self.infeasible {
            let _ = writeln!(out, "trial {i:>4}: generation infeasible after bounded retries");
        }
        let failed = self.failed().count();
        let _ = writeln!(
            out,
            "summary: {} passed, {} failed, {} infeasible",
            self.outcomes.len() - failed,
            failed,
            self.infeasible.len()
        );
        out
    }

    pub fn to_json(&self, dumped: &[(usize, PathBuf)]) -> serde_json::Value {
        let trials: Vec<_> = self
            .outcomes
            .iter()
            .map(|o| {
                serde_json::json!({
                    "index": o.index,
                    "seed": o.seed,
                    "dim0": o.generated.graded.even_indices().len(),
                    "dim1": o.generated.graded.odd_indices().len(),
                    "a0": o.generated.a0,
                    "bimodule": o.generated.bimodule,
                    "annihilator_dim": o.annihilator_dim,
                    "killing_degenerate": o.killing_degenerate,
                    "passed": o.passed(),
                    "failures": o.checks.iter().filter_map(|c| c.failure.as_ref().map(|f| serde_json::json!({"check": c.name, "detail": f}))).collect::<Vec<_>>(),
                    "dump": dumped.iter().find(|(i, _)| *i == o.index).map(|(_, p)| p.display().to_string()),
                })
            })
            .collect();
        serde_json::json!({
            "trials": self.config.trials,
            "seed": self.config.seed,
            "dim0": self.config.dim0,
            "dim1": self.config.dim1,
            "results": trials,
            "infeasible": self.infeasible,
            "passed": self.all_passed(),
        })
    }
}

/// Runs all trials in parallel; results are ordered by trial index.
pub fn run(config: &FuzzConfig) -> FuzzReport {
    let results: Vec<(usize, Option<TrialOutcome>)> = (0..config.trials)
        .into_par_iter()
        .map(|i| (i, run_trial(config, i)))
        .collect();
    let mut outcomes = Vec::with_capacity(results.len());
    let mut infeasible = Vec::new();
    for (i, r) in results {
        match r {
            Some(o) => outcomes.push(o),
            None => infeasible.push(i),
        }
    }
    FuzzReport {
        config: *config,
        outcomes,
        infeasible,
    }
}

/// Writes each failing algebra as a graded file `trial-<index>.json`.
pub fn dump_failures(report: &FuzzReport, dir: &Path) -> std::io::Result<Vec<(usize, PathBuf)>> {
    let mut out = Vec::new();
    for o in report.failed() {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(format!("trial-{}.json", o.index));
        std::fs::write(&path, AlgebraFile::from_graded(&o.generated.graded).to_json() + "\n")?;
        out.push((o.index, path));
    }
    Ok(out)
}
