//! Human-readable and JSON renderings of vectors, subspaces and witnesses.

use huliu_core::linalg::{Rational, Subspace};
use huliu_core::report::{Report, Witness};
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::schema::vector_strings;

/// `2 e1 - 1/2 e3`, or `0`.
pub fn vector(names: &[String], v: &[Rational]) -> String {
    let mut out = String::new();
    for (name, c) in names.iter().zip(v) {
        if c.is_zero() {
            continue;
        }
        let magnitude = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        if !magnitude.is_one() {
            out.push_str(&magnitude.to_string());
            out.push(' ');
        }
        out.push_str(name);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `{e1, e2 + e3}`; `{}` for the zero subspace.
pub fn subspace(names: &[String], s: &Subspace) -> String {
    let parts: Vec<String> = s.basis().iter().map(|v| vector(names, v)).collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn subspace_json(s: &Subspace) -> Value {
    Value::Array(s.basis().iter().map(|v| json!(vector_strings(v))).collect())
}

/// Basis indices `(0,0,0)` when every input is a basis vector.
pub fn indices(w: &Witness) -> Option<String> {
    let idx = w.basis_indices()?;
    let parts: Vec<String> = idx.iter().map(usize::to_string).collect();
    Some(format!("({})", parts.join(",")))
}

pub fn witness(names: &[String], w: &Witness) -> String {
    let inputs: Vec<String> = w.inputs.iter().map(|v| vector(names, v)).collect();
    let mut out = format!("witness: {} fails at ({})", w.clause, inputs.join(", "));
    if let Some(idx) = indices(w) {
        out.push_str(&format!("\n  basis indices {idx}"));
    }
    out.push_str(&format!(
        "\n  lhs = {}\n  rhs = {}",
        vector(names, &w.lhs),
        vector(names, &w.rhs)
    ));
    out
}

pub fn witness_json(w: &Witness) -> Value {
    json!({
        "clause": w.clause.name(),
        "inputs": w.inputs.iter().map(|v| vector_strings(v)).collect::<Vec<_>>(),
        "basis_indices": w.basis_indices(),
        "lhs": vector_strings(&w.lhs),
        "rhs": vector_strings(&w.rhs),
    })
}

/// `holds (N checks)` or the witness.
pub fn report(names: &[String], label: &str, r: &Report) -> String {
    match r.witness() {
        None => format!("{label}: holds ({} checks)", r.checked()),
        Some(w) => format!("{label}: FALSIFIED after {} checks\n{}", r.checked(), witness(names, w)),
    }
}

pub fn report_json(label: &str, r: &Report) -> Value {
    json!({
        "check": label,
        "holds": r.holds(),
        "checked": r.checked(),
        "witness": r.witness().map(witness_json),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use huliu_core::linalg::{ratio, vector_from_i64};

    fn names(n: usize) -> Vec<String> {
        huliu_core::algebra::default_basis_names(n)
    }

    #[test]
    fn vectors() {
        assert_eq!(vector(&names(3), &vector_from_i64(&[0, 0, 0])), "0");
        assert_eq!(vector(&names(3), &vector_from_i64(&[1, 0, 0])), "e1");
        assert_eq!(vector(&names(3), &vector_from_i64(&[-1, 2, -1])), "-e1 + 2 e2 - e3");
        assert_eq!(vector(&names(1), &[ratio(-1, 2)]), "-1/2 e1");
    }

    #[test]
    fn subspaces() {
        let s = Subspace::span(&[vector_from_i64(&[1, 0])], 2).unwrap();
        assert_eq!(subspace(&names(2), &s), "{e1}");
        assert_eq!(subspace(&names(2), &Subspace::zero(2)), "{}");
    }
}
