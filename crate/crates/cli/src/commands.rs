//! Command bodies. Each returns its output and exit code instead of
//! printing, so tests can drive them directly.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use huliu_core::algebra::{GradedAlgebra, StructureTensor};
use huliu_core::error::Error;
use huliu_core::huliu::{clause_sides, verify_all, HuLiuAlgebra};
use huliu_core::invariant::SearchBudget;
use huliu_core::leibniz::{verify_right_leibniz, LeibnizAlgebra};
use huliu_core::linalg::{Rational, Vector};
use huliu_core::passages::{angle_tensor, commutator_tensor, derive_huliu, derive_leibniz};
use huliu_core::report::{Clause, Report, Witness};
use huliu_core::simplicity::SimplicityVerdict;
use huliu_core::xi_group::{describe_violation, verify_tangent_huliu, LinearXiGroup};
use serde_json::{json, Value};

use crate::format;
use crate::fuzz::{self, FuzzConfig};
use crate::schema::{self, parse_vector, AlgebraFile, InputError, Kind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSIFIED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

/// Finite-difference step of the numeric tangent cross-check.
const TANGENT_STEP: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn new(code: i32, stdout: String) -> Self {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn input_error(e: impl std::fmt::Display) -> Self {
        Outcome {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }

    fn json(code: i32, value: Value) -> Self {
        Outcome::new(code, schema::pretty(&value) + "\n")
    }
}

fn load(path: &Path) -> Result<AlgebraFile, Outcome> {
    let file = schema::read(path).map_err(Outcome::input_error)?;
    file.check_fields().map_err(Outcome::input_error)?;
    Ok(file)
}

fn input<T>(r: Result<T, InputError>) -> Result<T, Outcome> {
    r.map_err(Outcome::input_error)
}

/// A verifier refused the input: report the witness with exit 1.
fn refused(names: &[String], label: &str, report: &Report, json: bool) -> Outcome {
    if json {
        Outcome::json(EXIT_FALSIFIED, format::report_json(label, report))
    } else {
        Outcome::new(EXIT_FALSIFIED, format::report(names, label, report) + "\n")
    }
}

/// Maps a core error: failed verifications become exit 1 with their
/// witness, everything else is an input error.
fn core_error(names: &[String], e: Error, json: bool) -> Outcome {
    let labelled = match &e {
        Error::NotAssociative(r) => Some(("associative", r)),
        Error::NotSpeciallyGraded(r) => Some(("special-grading", r)),
        Error::NotABimodule(r) => Some(("bimodule", r)),
        Error::NotLeibniz(r) => Some(("right-leibniz", r)),
        Error::NotLie(r) => Some(("lie", r)),
        Error::NotHuLiu(r) => Some(("huliu-identities", r)),
        _ => None,
    };
    match labelled {
        Some((label, r)) => refused(names, label, r, json),
        None if matches!(e, Error::UnknownRank { .. }) => Outcome {
            code: EXIT_UNKNOWN,
            stdout: String::new(),
            stderr: format!("unknown: {e}\n"),
        },
        None => Outcome::input_error(e),
    }
}

/// What `verify` checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum VerifyKind {
    /// associativity of the product
    Assoc,
    /// associativity and the special grading
    Grading,
    /// the right Leibniz identity
    Leibniz,
    /// Leibniz, Lie and the four compatibility identities
    Huliu,
}

impl VerifyKind {
    fn name(self) -> &'static str {
        match self {
            VerifyKind::Assoc => "assoc",
            VerifyKind::Grading => "grading",
            VerifyKind::Leibniz => "leibniz",
            VerifyKind::Huliu => "huliu",
        }
    }

    fn default_for(kind: Kind) -> Self {
        match kind {
            Kind::Algebra => VerifyKind::Assoc,
            Kind::Graded | Kind::Xigroup => VerifyKind::Grading,
            Kind::Leibniz => VerifyKind::Leibniz,
            Kind::Huliu => VerifyKind::Huliu,
        }
    }
}

/// The brackets a file describes: given directly, or derived from a graded
/// product. `square` is `None` for Leibniz files.
fn brackets(file: &AlgebraFile) -> Result<(StructureTensor, Option<StructureTensor>), Outcome> {
    match file.kind {
        Kind::Leibniz => Ok((input(file.angle_tensor())?, None)),
        Kind::Huliu => Ok((input(file.angle_tensor())?, Some(input(file.square_tensor())?))),
        Kind::Graded | Kind::Xigroup => {
            let g = input(file.graded_unchecked())?;
            Ok((angle_tensor(&g), Some(commutator_tensor(g.algebra().product()))))
        }
        Kind::Algebra => Err(Outcome::input_error("an algebra file has no grading, so no brackets")),
    }
}

fn graded_report(g: &GradedAlgebra) -> Report {
    g.algebra().verify_associative().and_then(|| g.verify_special_grading())
}

pub fn verify(path: &Path, kind: Option<VerifyKind>, json: bool) -> Outcome {
    match verify_inner(path, kind, json) {
        Ok(o) | Err(o) => o,
    }
}

fn verify_inner(path: &Path, kind: Option<VerifyKind>, json: bool) -> Result<Outcome, Outcome> {
    let file = load(path)?;
    let names = input(file.basis_names())?;
    let kind = kind.unwrap_or_else(|| VerifyKind::default_for(file.kind));
    let report = match kind {
        VerifyKind::Assoc => {
            if matches!(file.kind, Kind::Leibniz | Kind::Huliu) {
                return Err(Outcome::input_error(format!("a {} file has no product", file.kind)));
            }
            input(file.algebra())?.verify_associative()
        }
        VerifyKind::Grading => {
            if !matches!(file.kind, Kind::Graded | Kind::Xigroup) {
                return Err(Outcome::input_error(format!("a {} file has no grading", file.kind)));
            }
            graded_report(&input(file.graded_unchecked())?)
        }
        VerifyKind::Leibniz => verify_right_leibniz(&brackets(&file)?.0),
        VerifyKind::Huliu => match brackets(&file)? {
            (angle, Some(square)) => verify_all(&angle, &square),
            (_, None) => return Err(Outcome::input_error("a leibniz file has no square bracket")),
        },
    };
    let code = if report.holds() { EXIT_OK } else { EXIT_FALSIFIED };
    if json {
        return Ok(Outcome::json(code, format::report_json(kind.name(), &report)));
    }
    Ok(Outcome::new(code, format::report(&names, kind.name(), &report) + "\n"))
}

/// The Leibniz algebra of a file, refusing brackets that fail the identity.
fn leibniz_of(file: &AlgebraFile, names: &[String], json: bool) -> Result<LeibnizAlgebra, Outcome> {
    if matches!(file.kind, Kind::Graded | Kind::Xigroup) {
        let g = input(file.graded_unchecked())?;
        return derive_leibniz(&g).map_err(|e| core_error(names, e, json));
    }
    let (angle, _) = brackets(file)?;
    LeibnizAlgebra::new(names.to_vec(), angle).map_err(|e| core_error(names, e, json))
}

fn huliu_of(file: &AlgebraFile, names: &[String], json: bool) -> Result<HuLiuAlgebra, Outcome> {
    if matches!(file.kind, Kind::Graded | Kind::Xigroup) {
        let g = input(file.graded_unchecked())?;
        return derive_huliu(&g).map_err(|e| core_error(names, e, json));
    }
    match brackets(file)? {
        (angle, Some(square)) => {
            HuLiuAlgebra::from_tensors(names.to_vec(), angle, square).map_err(|e| core_error(names, e, json))
        }
        (_, None) => Err(Outcome::input_error("a leibniz file has no square bracket")),
    }
}

pub fn annihilator(path: &Path, json: bool) -> Outcome {
    let run = || -> Result<Outcome, Outcome> {
        let file = load(path)?;
        let names = input(file.basis_names())?;
        let l = leibniz_of(&file, &names, json)?;
        let ann = l.annihilator();
        if json {
            return Ok(Outcome::json(
                EXIT_OK,
                json!({"dim": ann.dim(), "basis": format::subspace_json(ann)}),
            ));
        }
        Ok(Outcome::new(
            EXIT_OK,
            format!(
                "annihilator: dim {}\nbasis: {}\n",
                ann.dim(),
                format::subspace(&names, ann)
            ),
        ))
    };
    run().unwrap_or_else(|o| o)
}

pub fn simple(path: &Path, huliu: bool, seed: u64, json: bool) -> Outcome {
    let run = || -> Result<Outcome, Outcome> {
        let file = load(path)?;
        let names = input(file.basis_names())?;
        let budget = SearchBudget {
            seed,
            ..SearchBudget::default()
        };
        let as_huliu = huliu || file.kind == Kind::Huliu;
        let verdict = if as_huliu {
            huliu_of(&file, &names, json)?.classify_simplicity(&budget)
        } else {
            leibniz_of(&file, &names, json)?.classify_simplicity(&budget)
        }
        .map_err(Outcome::input_error)?;
        let code = match &verdict {
            SimplicityVerdict::Simple(_) => EXIT_OK,
            SimplicityVerdict::NotSimple(_) => EXIT_FALSIFIED,
            SimplicityVerdict::Unknown { .. } => EXIT_UNKNOWN,
        };
        let notion = if as_huliu { "huliu" } else { "leibniz" };
        if json {
            return Ok(Outcome::json(
                code,
                json!({
                    "notion": notion,
                    "verdict": verdict.tag(),
                    "reason": verdict.reason(),
                    "ideal": verdict.certificate_ideal().map(format::subspace_json),
                }),
            ));
        }
        let mut out = format!(
            "notion: {notion}\nverdict: {}\nreason: {}\n",
            verdict.tag(),
            verdict.reason()
        );
        if let Some(ideal) = verdict.certificate_ideal() {
            let _ = writeln!(out, "ideal: {}", format::subspace(&names, ideal));
        }
        Ok(Outcome::new(code, out))
    };
    run().unwrap_or_else(|o| o)
}

pub fn derive(path: &Path, huliu: bool, output: Option<&Path>, json: bool) -> Outcome {
    let run = || -> Result<Outcome, Outcome> {
        let file = load(path)?;
        let names = input(file.basis_names())?;
        if !matches!(file.kind, Kind::Graded | Kind::Xigroup) {
            return Err(Outcome::input_error(format!(
                "derive needs a graded file, got {}",
                file.kind
            )));
        }
        let derived = if huliu {
            let h = huliu_of(&file, &names, json)?;
            AlgebraFile::from_huliu(&names, h.angle(), h.square())
        } else {
            let l = leibniz_of(&file, &names, json)?;
            AlgebraFile::from_leibniz(&names, l.angle())
        };
        let text = derived.to_json() + "\n";
        match output {
            None => Ok(Outcome::new(EXIT_OK, text)),
            Some(out) => {
                std::fs::write(out, &text).map_err(|e| Outcome::input_error(format!("{}: {e}", out.display())))?;
                let msg = if json {
                    schema::pretty(&json!({"written": out.display().to_string(), "kind": derived.kind})) + "\n"
                } else {
                    format!("wrote {} file to {}\n", derived.kind, out.display())
                };
                Ok(Outcome::new(EXIT_OK, msg))
            }
        }
    };
    run().unwrap_or_else(|o| o)
}

fn xi_group_of(file: &AlgebraFile, names: &[String], json: bool) -> Result<LinearXiGroup, Outcome> {
    if file.kind != Kind::Xigroup {
        return Err(Outcome::input_error(format!(
            "expected an xigroup file, got {}",
            file.kind
        )));
    }
    input(file.xi_group())?.map_err(|e| core_error(names, e, json))
}

fn floats(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.6e}")).collect();
    format!("[{}]", parts.join(", "))
}

pub fn tangent(path: &Path, json: bool) -> Outcome {
    let run = || -> Result<Outcome, Outcome> {
        let file = load(path)?;
        let names = input(file.basis_names())?;
        let group = xi_group_of(&file, &names, json)?;
        let t = group.tangent_space().map_err(|e| core_error(&names, e, json))?;
        let numeric = group.numeric_tangent_dimension(TANGENT_STEP);
        let report = verify_tangent_huliu(&t, group.realization()).map_err(|e| core_error(&names, e, json))?;
        let (numeric_dim, numeric_text) = match &numeric {
            Ok(d) => (Some(*d), d.to_string()),
            Err(Error::UnknownRank { singular_values }) => {
                (None, format!("unknown (singular values {})", floats(singular_values)))
            }
            Err(e) => return Err(Outcome::input_error(e)),
        };
        let agrees = numeric_dim == Some(t.dim());
        let code = if !report.holds() || (numeric_dim.is_some() && !agrees) {
            EXIT_FALSIFIED
        } else if numeric_dim.is_none() {
            EXIT_UNKNOWN
        } else {
            EXIT_OK
        };
        if json {
            return Ok(Outcome::json(
                code,
                json!({
                    "dim": t.dim(),
                    "even_dim": t.even_dim,
                    "odd_dim": t.odd_dim,
                    "exact": t.exact,
                    "basis": format::subspace_json(&t.subspace),
                    "numeric_dim": numeric_dim,
                    "report": format::report_json("tangent-huliu", &report),
                }),
            ));
        }
        let mut out = format!(
            "tangent space: dim {} (even {}, odd {}, exact)\nbasis: {}\nnumeric dimension: {}\n",
            t.dim(),
            t.even_dim,
            t.odd_dim,
            format::subspace(&names, &t.subspace),
            numeric_text
        );
        out.push_str(&format::report(&names, "tangent-huliu", &report));
        out.push('\n');
        Ok(Outcome::new(code, out))
    };
    run().unwrap_or_else(|o| o)
}

pub fn xi_check(path: &Path, samples: usize, seed: u64, json: bool) -> Outcome {
    let run = || -> Result<Outcome, Outcome> {
        let file = load(path)?;
        let names = input(file.basis_names())?;
        let group = xi_group_of(&file, &names, json)?;
        let report = match group.check_xi_group(samples, seed) {
            Ok(r) => r,
            Err(e @ Error::Sampling(_)) => {
                return Ok(Outcome {
                    code: EXIT_FALSIFIED,
                    stdout: String::new(),
                    stderr: format!("falsified: {e}\n"),
                })
            }
            Err(e) => return Err(core_error(&names, e, json)),
        };
        let code = if report.holds() { EXIT_OK } else { EXIT_FALSIFIED };
        if json {
            let violation = report.violation.as_ref().map(
                |v| json!({"kind": v.kind.name(), "x": v.x, "h": v.h, "residual": v.residual, "allowed": v.allowed}),
            );
            return Ok(Outcome::json(
                code,
                json!({
                    "samples": report.samples,
                    "worst_conjugation": report.worst_conjugation,
                    "worst_product": report.worst_product,
                    "worst_inverse": report.worst_inverse,
                    "tolerance": report.tolerance,
                    "holds": report.holds(),
                    "violation": violation,
                }),
            ));
        }
        let mut out = format!(
            "samples: {}\nworst conjugation residual: {:.3e}\nworst product residual: {:.3e}\nworst inverse residual: {:.3e}\ntolerance: {:.3e}\n",
            report.samples, report.worst_conjugation, report.worst_product, report.worst_inverse, report.tolerance
        );
        match &report.violation {
            None => out.push_str("xi-group: holds\n"),
            Some(v) => {
                let _ = writeln!(
                    out,
                    "xi-group: FALSIFIED\n  {}\n  x = {}\n  h = {}",
                    describe_violation(v),
                    floats(&v.x),
                    floats(&v.h)
                );
            }
        }
        Ok(Outcome::new(code, out))
    };
    run().unwrap_or_else(|o| o)
}

/// A witness read back from JSON: either a bare witness object or a report
/// carrying one under `witness`.
fn read_witness(path: &Path) -> Result<(Clause, Vec<Vector>, Vector, Vector), Outcome> {
    let text = std::fs::read_to_string(path).map_err(|e| Outcome::input_error(format!("{}: {e}", path.display())))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| Outcome::input_error(format!("{}: {e}", path.display())))?;
    let w = match value.get("witness") {
        Some(Value::Null) => return Err(Outcome::input_error("the report holds; there is no witness to replay")),
        Some(w) => w.clone(),
        None => value,
    };
    #[derive(serde::Deserialize)]
    struct Raw {
        clause: String,
        inputs: Vec<Vec<String>>,
        lhs: Vec<String>,
        rhs: Vec<String>,
        #[allow(dead_code)]
        #[serde(default)]
        basis_indices: Option<Vec<usize>>,
    }
    let raw: Raw = serde_path_to_error::deserialize(w)
        .map_err(|e| Outcome::input_error(format!("{}: field `{}`: {}", path.display(), e.path(), e.inner())))?;
    let clause = Clause::from_name(&raw.clause)
        .ok_or_else(|| Outcome::input_error(format!("unknown clause `{}`", raw.clause)))?;
    let vec = |v: &[String]| parse_vector(v, v.len()).map_err(Outcome::input_error);
    let inputs = raw.inputs.iter().map(|v| vec(v)).collect::<Result<Vec<_>, _>>()?;
    Ok((clause, inputs, vec(&raw.lhs)?, vec(&raw.rhs)?))
}

fn arity(clause: Clause, n: usize, inputs: &[Vector]) -> Result<(), Outcome> {
    if inputs.len() != n {
        return Err(Outcome::input_error(format!(
            "clause {clause} takes {n} inputs, got {}",
            inputs.len()
        )));
    }
    Ok(())
}

/// Both sides of `clause` at `inputs`, evaluated against `file`.
fn evaluate(file: &AlgebraFile, clause: Clause, inputs: &[Vector]) -> Result<(Vector, Vector), Outcome> {
    let core = |e: Error| Outcome::input_error(e);
    match clause {
        Clause::Associativity => {
            arity(clause, 3, inputs)?;
            let a = input(file.algebra())?;
            let (x, y, z) = (&inputs[0], &inputs[1], &inputs[2]);
            let lhs = a.multiply(&a.multiply(x, y).map_err(core)?, z).map_err(core)?;
            let rhs = a.multiply(x, &a.multiply(y, z).map_err(core)?).map_err(core)?;
            Ok((lhs, rhs))
        }
        Clause::EvenClosed | Clause::OddBimodule | Clause::OddSquareZero => {
            arity(clause, 2, inputs)?;
            if !matches!(file.kind, Kind::Graded | Kind::Xigroup) {
                return Err(Outcome::input_error(format!("clause {clause} needs a graded file")));
            }
            let g = input(file.graded_unchecked())?;
            let p = g.multiply(&inputs[0], &inputs[1]).map_err(core)?;
            let allowed = match clause {
                Clause::EvenClosed => g.even_part(&p),
                Clause::OddBimodule => g.odd_part(&p),
                _ => vec![Rational::from_integer(0.into()); p.len()],
            };
            Ok((p, allowed))
        }
        Clause::RealizationAgreement | Clause::AngleClosure | Clause::SquareClosure if file.kind == Kind::Xigroup => {
            arity(clause, 2, inputs)?;
            let names = input(file.basis_names())?;
            let group = xi_group_of(file, &names, false)?;
            let t = group.tangent_space().map_err(core)?;
            let g = group.realization().graded();
            let h = derive_huliu(g).map_err(core)?;
            let (x, y) = (&inputs[0], &inputs[1]);
            match clause {
                Clause::RealizationAgreement => Err(Outcome::input_error(
                    "realization-agreement witnesses name a bracket implicitly; rerun tangent instead",
                )),
                _ => {
                    let tensor = if clause == Clause::AngleClosure {
                        h.angle()
                    } else {
                        h.square()
                    };
                    let product = tensor.apply(x, y).map_err(core)?;
                    let residual = t.subspace.reduce(&product).map_err(core)?;
                    Ok((product.clone(), huliu_core::linalg::sub(&product, &residual)))
                }
            }
        }
        Clause::RightLeibniz
        | Clause::Antisymmetry
        | Clause::Jacobi
        | Clause::AngleAbsorbsSquare
        | Clause::SquaresActAlike
        | Clause::ThreeTermSum
        | Clause::FourTermSum
        | Clause::AnnihilatorAbelian => {
            let (angle, square) = if file.kind == Kind::Xigroup {
                // identities of the tangent algebra, in tangent coordinates
                let names = input(file.basis_names())?;
                let group = xi_group_of(file, &names, false)?;
                let t = group.tangent_space().map_err(core)?;
                let h = derive_huliu(group.realization().graded()).map_err(core)?;
                let restrict = |s: &StructureTensor| {
                    s.restrict(&t.subspace)
                        .map_err(core)?
                        .ok_or_else(|| Outcome::input_error("the tangent space is not closed under the brackets"))
                };
                (restrict(h.angle())?, Some(restrict(h.square())?))
            } else {
                brackets(file)?
            };
            let square = match (clause, square) {
                (_, Some(s)) => s,
                (Clause::RightLeibniz, None) => angle.clone(),
                (_, None) => return Err(Outcome::input_error(format!("clause {clause} needs a square bracket"))),
            };
            clause_sides(&angle, &square, clause, inputs).map_err(core)
        }
        other => Err(Outcome::input_error(format!(
            "clause {other} involves more than one algebra and cannot be replayed from a single file"
        ))),
    }
}

pub fn replay(path: &Path, witness_path: &Path, json: bool) -> Outcome {
    let run = || -> Result<Outcome, Outcome> {
        let file = load(path)?;
        let names = input(file.basis_names())?;
        let (clause, inputs, lhs, rhs) = read_witness(witness_path)?;
        let dim = inputs.first().map_or(file.dim, Vec::len);
        let (new_lhs, new_rhs) = evaluate(&file, clause, &inputs)?;
        let reproduced = new_lhs != new_rhs && new_lhs == lhs && new_rhs == rhs;
        let code = if reproduced { EXIT_FALSIFIED } else { EXIT_OK };
        let names = if dim == file.dim {
            names
        } else {
            (1..=dim).map(|i| format!("t{i}")).collect()
        };
        let w = Witness {
            clause,
            inputs,
            lhs: new_lhs.clone(),
            rhs: new_rhs.clone(),
        };
        if json {
            return Ok(Outcome::json(
                code,
                json!({"reproduced": reproduced, "holds": new_lhs == new_rhs, "witness": format::witness_json(&w)}),
            ));
        }
        let verdict = if reproduced {
            "replay: failure reproduced"
        } else if new_lhs == new_rhs {
            "replay: the clause holds at these inputs"
        } else {
            "replay: the clause fails, but with different values than recorded"
        };
        Ok(Outcome::new(
            code,
            format!("{verdict}\n{}\n", format::witness(&names, &w)),
        ))
    };
    run().unwrap_or_else(|o| o)
}

pub fn fuzz(config: FuzzConfig, dump_dir: Option<PathBuf>, json: bool) -> Outcome {
    if config.trials == 0 || config.dim0 == 0 || config.dim1 == 0 {
        return Outcome::input_error("fuzz parameters --trials, --dim0 and --dim1 must be positive");
    }
    let report = fuzz::run(&config);
    let dir = dump_dir.unwrap_or_else(|| PathBuf::from("fuzz-failures"));
    let dumped = match fuzz::dump_failures(&report, &dir) {
        Ok(d) => d,
        Err(e) => return Outcome::input_error(format!("{}: {e}", dir.display())),
    };
    let code = report.exit_code();
    if json {
        return Outcome::json(code, report.to_json(&dumped));
    }
    Outcome::new(code, report.render(&dumped))
}
