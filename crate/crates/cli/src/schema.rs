//! The JSON file format: one object per file, sparse structure constants
//! `[i, j, k, "p/q"]` with zero-based indices.

use std::fmt;
use std::str::FromStr;

use huliu_core::algebra::{default_basis_names, Algebra, GradedAlgebra, StructureTensor};
use huliu_core::linalg::{Rational, Subspace, Vector};
use huliu_core::xi_group::{EvenConstraint, LinearXiGroup, MatrixRealization, DEFAULT_TOLERANCE};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Algebra,
    Graded,
    Leibniz,
    Huliu,
    Xigroup,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::Algebra => "algebra",
            Kind::Graded => "graded",
            Kind::Leibniz => "leibniz",
            Kind::Huliu => "huliu",
            Kind::Xigroup => "xigroup",
        };
        f.write_str(s)
    }
}

/// `[i, j, k, "p/q"]`: `e_i ∘ e_j` has coefficient `p/q` on `e_k`.
pub type Entry = (usize, usize, usize, String);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintSpec {
    pub family: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub kind: Kind,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub product: Option<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub even: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub square: Option<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraints: Option<Vec<ConstraintSpec>>,
    /// Vectors in the odd coordinates, in the order of the odd basis indices.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub odd_subspace: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    /// "left-regular" (default) or "matrix-block".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realization: Option<String>,
}

/// A file that parsed as JSON but does not describe a valid object, or did
/// not parse at all.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input_error(msg: impl Into<String>) -> InputError {
    InputError(msg.into())
}

/// Parses a file body, reporting the JSON path and line/column of the
/// first problem.
pub fn parse(text: &str) -> Result<AlgebraFile, InputError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: AlgebraFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." || path.is_empty() {
            input_error(format!("{inner}"))
        } else {
            input_error(format!("field `{path}`: {inner}"))
        }
    })?;
    Ok(file)
}

pub fn read(path: &std::path::Path) -> Result<AlgebraFile, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

pub fn parse_rational(s: &str) -> Result<Rational, InputError> {
    let t = s.trim();
    Rational::from_str(t).map_err(|_| input_error(format!("`{s}` is not a rational number p/q")))
}

pub fn rational_string(q: &Rational) -> String {
    q.to_string()
}

pub fn vector_strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(rational_string).collect()
}

pub fn parse_vector(v: &[String], dim: usize) -> Result<Vector, InputError> {
    if v.len() != dim {
        return Err(input_error(format!("vector has {} entries, expected {dim}", v.len())));
    }
    v.iter().map(|s| parse_rational(s)).collect()
}

pub fn entries_of(t: &StructureTensor) -> Vec<Entry> {
    t.nonzero_entries()
        .map(|(i, j, k, c)| (i, j, k, rational_string(c)))
        .collect()
}

impl AlgebraFile {
    fn empty(kind: Kind, dim: usize, basis: Vec<String>) -> Self {
        AlgebraFile {
            kind,
            dim,
            basis: Some(basis),
            product: None,
            even: None,
            angle: None,
            square: None,
            constraints: None,
            odd_subspace: None,
            tolerance: None,
            realization: None,
        }
    }

    pub fn from_algebra(a: &Algebra) -> Self {
        let mut f = Self::empty(Kind::Algebra, a.dim(), a.basis_names().to_vec());
        f.product = Some(entries_of(a.product()));
        f
    }

    pub fn from_graded(g: &GradedAlgebra) -> Self {
        let mut f = Self::from_algebra(g.algebra());
        f.kind = Kind::Graded;
        f.even = Some(g.even_indices().to_vec());
        f
    }

    pub fn from_leibniz(names: &[String], angle: &StructureTensor) -> Self {
        let mut f = Self::empty(Kind::Leibniz, angle.dim(), names.to_vec());
        f.angle = Some(entries_of(angle));
        f
    }

    pub fn from_huliu(names: &[String], angle: &StructureTensor, square: &StructureTensor) -> Self {
        let mut f = Self::empty(Kind::Huliu, angle.dim(), names.to_vec());
        f.angle = Some(entries_of(angle));
        f.square = Some(entries_of(square));
        f
    }

    /// Pretty JSON with every list of scalars on one line.
    pub fn to_json(&self) -> String {
        pretty(&serde_json::to_value(self).expect("plain data serializes"))
    }

    pub fn basis_names(&self) -> Result<Vec<String>, InputError> {
        match &self.basis {
            None => Ok(default_basis_names(self.dim)),
            Some(b) if b.len() == self.dim => Ok(b.clone()),
            Some(b) => Err(input_error(format!(
                "field `basis` has {} names but dim is {}",
                b.len(),
                self.dim
            ))),
        }
    }

    fn tensor(&self, field: &str, entries: &Option<Vec<Entry>>) -> Result<StructureTensor, InputError> {
        let entries = entries
            .as_ref()
            .ok_or_else(|| input_error(format!("a {} file needs field `{field}`", self.kind)))?;
        let mut parsed = Vec::with_capacity(entries.len());
        for (n, (i, j, k, c)) in entries.iter().enumerate() {
            if *i >= self.dim || *j >= self.dim || *k >= self.dim {
                return Err(input_error(format!(
                    "field `{field}[{n}]`: index out of range for dim {}",
                    self.dim
                )));
            }
            let c = parse_rational(c).map_err(|e| input_error(format!("field `{field}[{n}]`: {e}")))?;
            parsed.push((*i, *j, *k, c));
        }
        StructureTensor::from_entries(self.dim, parsed).map_err(|e| input_error(e.to_string()))
    }

    fn forbid(&self, field: &str, present: bool) -> Result<(), InputError> {
        if present {
            return Err(input_error(format!(
                "field `{field}` is not allowed in a {} file",
                self.kind
            )));
        }
        Ok(())
    }

    /// Rejects fields that do not belong to this kind.
    pub fn check_fields(&self) -> Result<(), InputError> {
        let has_product_fields = matches!(self.kind, Kind::Algebra | Kind::Graded | Kind::Xigroup);
        self.forbid("product", !has_product_fields && self.product.is_some())?;
        self.forbid(
            "even",
            !matches!(self.kind, Kind::Graded | Kind::Xigroup) && self.even.is_some(),
        )?;
        self.forbid(
            "angle",
            !matches!(self.kind, Kind::Leibniz | Kind::Huliu) && self.angle.is_some(),
        )?;
        self.forbid("square", self.kind != Kind::Huliu && self.square.is_some())?;
        let xi = self.kind == Kind::Xigroup;
        self.forbid("constraints", !xi && self.constraints.is_some())?;
        self.forbid("odd_subspace", !xi && self.odd_subspace.is_some())?;
        self.forbid("tolerance", !xi && self.tolerance.is_some())?;
        self.forbid("realization", !xi && self.realization.is_some())?;
        self.basis_names()?;
        Ok(())
    }

    pub fn product_tensor(&self) -> Result<StructureTensor, InputError> {
        self.tensor("product", &self.product)
    }

    pub fn angle_tensor(&self) -> Result<StructureTensor, InputError> {
        self.tensor("angle", &self.angle)
    }

    pub fn square_tensor(&self) -> Result<StructureTensor, InputError> {
        self.tensor("square", &self.square)
    }

    pub fn algebra(&self) -> Result<Algebra, InputError> {
        Algebra::new(self.basis_names()?, self.product_tensor()?).map_err(|e| input_error(e.to_string()))
    }

    /// The graded algebra without verification; use the verifiers on it.
    pub fn graded_unchecked(&self) -> Result<GradedAlgebra, InputError> {
        let even = self
            .even
            .clone()
            .ok_or_else(|| input_error(format!("a {} file needs field `even`", self.kind)))?;
        GradedAlgebra::new_unchecked(self.algebra()?, even).map_err(|e| input_error(e.to_string()))
    }

    /// Constraint families, odd subspace, tolerance and realization of a
    /// ξ-group file. Errors from the core (non-graded algebra, bad
    /// realization) are returned as they are.
    pub fn xi_group(&self) -> Result<Result<LinearXiGroup, huliu_core::error::Error>, InputError> {
        let g = self.graded_unchecked()?;
        let mut constraints = Vec::new();
        for (n, c) in self.constraints.iter().flatten().enumerate() {
            let family = EvenConstraint::from_name(&c.family).ok_or_else(|| {
                input_error(format!(
                    "field `constraints[{n}].family`: unknown family `{}` (expected orthogonal, special-linear, unipotent-block or none)",
                    c.family
                ))
            })?;
            constraints.push(family);
        }
        let odd = g.odd_indices().to_vec();
        let odd_subspace = match &self.odd_subspace {
            None => g.odd_subspace(),
            Some(vectors) => {
                let mut full = Vec::with_capacity(vectors.len());
                for (n, v) in vectors.iter().enumerate() {
                    let coords = parse_vector(v, odd.len())
                        .map_err(|e| input_error(format!("field `odd_subspace[{n}]`: {e}")))?;
                    let mut x = vec![Rational::from_integer(0.into()); self.dim];
                    for (&i, c) in odd.iter().zip(coords) {
                        x[i] = c;
                    }
                    full.push(x);
                }
                Subspace::span(&full, self.dim).map_err(|e| input_error(e.to_string()))?
            }
        };
        let tolerance = self.tolerance.unwrap_or(DEFAULT_TOLERANCE);
        if !(tolerance.is_finite() && tolerance >= 0.0) {
            return Err(input_error("field `tolerance`: must be a nonnegative number"));
        }
        let realization = match self.realization.as_deref().unwrap_or("left-regular") {
            "left-regular" => Ok(()),
            "matrix-block" => Ok(()),
            other => Err(input_error(format!(
                "field `realization`: unknown realization `{other}` (expected left-regular or matrix-block)"
            ))),
        };
        realization?;
        let build = || -> huliu_core::error::Result<LinearXiGroup> {
            let assoc = g.algebra().verify_associative();
            if !assoc.holds() {
                return Err(huliu_core::error::Error::NotAssociative(assoc));
            }
            let grading = g.verify_special_grading();
            if !grading.holds() {
                return Err(huliu_core::error::Error::NotSpeciallyGraded(grading));
            }
            let r = match self.realization.as_deref() {
                Some("matrix-block") => matrix_block_for(&g)?,
                _ => MatrixRealization::left_regular(g.clone())?,
            };
            LinearXiGroup::new(r, constraints.clone(), odd_subspace.clone(), tolerance)
        };
        Ok(build())
    }
}

/// Pretty JSON with every list of scalars on one line.
pub fn pretty(value: &serde_json::Value) -> String {
    let mut out = String::new();
    write_compact(value, 0, &mut out);
    out
}

fn write_compact(v: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let scalar = |v: &Value| !matches!(v, Value::Array(_) | Value::Object(_));
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(items) if items.iter().all(scalar) => {
            let parts: Vec<String> = items
                .iter()
                .map(|x| serde_json::to_string(x).expect("plain data"))
                .collect();
            out.push('[');
            out.push_str(&parts.join(", "));
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_compact(item, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(k).expect("string"));
                out.push_str(": ");
                write_compact(item, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        _ => out.push_str(&serde_json::to_string(v).expect("plain data")),
    }
}

/// The block realization, available when the file describes `Mat(n) ⊕ εMat(n)`
/// in its standard basis.
fn matrix_block_for(g: &GradedAlgebra) -> huliu_core::error::Result<MatrixRealization> {
    let d = g.dim();
    let n = (1..=8).find(|n| 2 * n * n == d);
    let r = n.map(MatrixRealization::matrix_extension_block).transpose()?;
    match r {
        Some(r)
            if r.graded().algebra().product() == g.algebra().product()
                && r.graded().even_indices() == g.even_indices() =>
        {
            Ok(r)
        }
        _ => Err(huliu_core::error::Error::Realization(
            "matrix-block realization needs Mat(n) ⊕ εMat(n) in its standard basis".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let g = huliu_core::algebra::upper_triangular();
        let f = AlgebraFile::from_graded(&g);
        let back = parse(&f.to_json()).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.graded_unchecked().unwrap(), g);
    }

    #[test]
    fn unknown_field_is_rejected_with_location() {
        let text = "{\n  \"kind\": \"leibniz\",\n  \"dim\": 1,\n  \"angel\": []\n}";
        let err = parse(text).unwrap_err().0;
        assert!(err.contains("angel"), "{err}");
        assert!(err.contains("line 4"), "{err}");
    }

    #[test]
    fn bad_rational_names_the_entry() {
        let text = r#"{"kind": "leibniz", "dim": 1, "angle": [[0, 0, 0, "1/0"]]}"#;
        let f = parse(text).unwrap();
        let err = f.angle_tensor().unwrap_err().0;
        assert!(err.contains("angle[0]"), "{err}");
    }

    #[test]
    fn misplaced_field() {
        let text = r#"{"kind": "leibniz", "dim": 1, "angle": [], "even": [0]}"#;
        assert!(parse(text).unwrap().check_fields().is_err());
    }
}
