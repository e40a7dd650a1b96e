//! JSON file formats.
//!
//! Scalars: integers are decimal strings (arbitrary precision; bare JSON
//! integers are accepted on input), polynomials over `F_p` are arrays of
//! ascending coefficients. Exponent vectors are `{"atoms": {"<label>": e}}`,
//! matrices `{"rows": r, "cols": c, "entries": [...]}` in row-major order.

use std::collections::BTreeMap;
use std::fmt;

use hornlab_core::horn::{Check, HornReport};
use hornlab_core::linalg::primitive;
use hornlab_core::lr::SetTriple;
use hornlab_core::module::{Submodule, TorsionModule};
use hornlab_core::schubert::Subspace;
use hornlab_core::{Atom, ExponentVector, GfPoly, Integer, Matrix, Partition, PerAtom, Pid};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// A malformed input, with the JSON path of the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() || self.path == "." {
            write!(f, "{}", self.message)
        } else {
            write!(f, "at {}: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for FormatError {}

fn err(path: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError { path: path.into(), message: message.into() }
}

/// Deserializes `text`, reporting the path of the first bad field.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T, FormatError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        err(path, e.into_inner().to_string())
    })
}

/// Scalars with a JSON encoding.
pub trait JsonScalar: Pid {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self, String>;
}

impl JsonScalar for Integer {
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }

    fn from_json(v: &Value) -> Result<Self, String> {
        match v {
            Value::String(s) => Integer::parse(s).map_err(|e| e.to_string()),
            Value::Number(n) => n.as_i64().map(Integer::new).ok_or_else(|| format!("{n} is not an integer")),
            other => Err(format!("expected an integer string, found {other}")),
        }
    }
}

impl<const P: u64> JsonScalar for GfPoly<P> {
    fn to_json(&self) -> Value {
        Value::Array(self.coeffs().iter().map(|&c| Value::from(c)).collect())
    }

    fn from_json(v: &Value) -> Result<Self, String> {
        let Value::Array(cs) = v else {
            return Err(format!("expected a coefficient array, found {v}"));
        };
        let cs: Vec<i64> = cs
            .iter()
            .map(|c| c.as_i64().ok_or_else(|| format!("coefficient {c} is not an integer")))
            .collect::<Result<_, _>>()?;
        Ok(GfPoly::from_coeffs(&cs))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentJson {
    pub atoms: BTreeMap<String, u32>,
}

impl ExponentJson {
    pub fn from_core(e: &ExponentVector) -> Self {
        Self { atoms: e.iter().map(|(a, x)| (a.0.to_string(), x)).collect() }
    }

    pub fn to_core(&self, path: &str) -> Result<ExponentVector, FormatError> {
        let mut pairs = Vec::new();
        for (label, &x) in &self.atoms {
            let a: u64 = label.parse().map_err(|_| err(format!("{path}.atoms.{label}"), "atom labels are decimal integers"))?;
            pairs.push((Atom(a), x));
        }
        Ok(ExponentVector::from_pairs(pairs))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Value>,
}

impl MatrixJson {
    pub fn from_core<R: JsonScalar>(m: &Matrix<R>) -> Self {
        Self { rows: m.rows(), cols: m.cols(), entries: m.entries().iter().map(R::to_json).collect() }
    }

    pub fn to_core<R: JsonScalar>(&self, path: &str) -> Result<Matrix<R>, FormatError> {
        if self.rows == 0 || self.cols == 0 {
            return Err(err(format!("{path}.rows"), "dimensions must be positive"));
        }
        if self.entries.len() != self.rows * self.cols {
            return Err(err(
                format!("{path}.entries"),
                format!("expected {} entries, found {}", self.rows * self.cols, self.entries.len()),
            ));
        }
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, v)| R::from_json(v).map_err(|m| err(format!("{path}.entries[{i}]"), m)))
            .collect::<Result<Vec<R>, _>>()?;
        Matrix::new(self.rows, self.cols, entries).map_err(|e| err(path, e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleJson {
    pub pid: String,
    pub theta: Vec<ExponentJson>,
}

impl ModuleJson {
    pub fn from_core<R: Pid>(m: &TorsionModule<R>) -> Self {
        Self { pid: R::tag(), theta: m.theta().iter().map(ExponentJson::from_core).collect() }
    }

    pub fn to_core<R: Pid>(&self, path: &str) -> Result<TorsionModule<R>, FormatError> {
        if self.pid != R::tag() {
            return Err(err(format!("{path}.pid"), format!("expected {}, found {}", R::tag(), self.pid)));
        }
        if self.theta.is_empty() {
            return Err(err(format!("{path}.theta"), "rank must be positive"));
        }
        let theta = self
            .theta
            .iter()
            .enumerate()
            .map(|(i, e)| e.to_core(&format!("{path}.theta[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        TorsionModule::new(theta).map_err(|e| err(format!("{path}.theta"), e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubmoduleJson {
    pub generators: Vec<Vec<Value>>,
}

impl SubmoduleJson {
    pub fn from_core<R: JsonScalar>(s: &Submodule<R>) -> Self {
        Self { generators: vectors_to_json(s.generators()) }
    }

    pub fn to_core<R: JsonScalar>(&self, m: &TorsionModule<R>, path: &str) -> Result<Submodule<R>, FormatError> {
        let mut gens = Vec::new();
        for (g, v) in self.generators.iter().enumerate() {
            if v.len() != m.rank() {
                return Err(err(format!("{path}.generators[{g}]"), format!("expected {} coordinates, found {}", m.rank(), v.len())));
            }
            let coords = v
                .iter()
                .enumerate()
                .map(|(i, x)| R::from_json(x).map_err(|msg| err(format!("{path}.generators[{g}][{i}]"), msg)))
                .collect::<Result<Vec<R>, _>>()?;
            gens.push(coords);
        }
        Submodule::new(m, gens).map_err(|e| err(format!("{path}.generators"), e.to_string()))
    }
}

pub fn vectors_to_json<R: JsonScalar>(vs: &[Vec<R>]) -> Vec<Vec<Value>> {
    vs.iter().map(|v| v.iter().map(R::to_json).collect()).collect()
}

/// A module together with a submodule, as written by `realize`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairJson {
    pub module: ModuleJson,
    pub sub: SubmoduleJson,
    pub lambda: BTreeMap<String, Vec<u32>>,
    pub mu: BTreeMap<String, Vec<u32>>,
    pub nu: BTreeMap<String, Vec<u32>>,
}

pub fn per_atom_json(p: &PerAtom) -> BTreeMap<String, Vec<u32>> {
    p.iter().map(|(a, part)| (a.0.to_string(), part.parts().to_vec())).collect()
}

pub fn partition_json(p: &Partition) -> Vec<u32> {
    p.parts().to_vec()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckJson {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckJson {
    pub fn from_core(c: &Check) -> Self {
        Self { name: c.name.clone(), pass: c.pass, detail: c.detail.clone() }
    }
}

/// Rows of a subspace scaled to primitive vectors over the ring.
pub fn subspace_json<R: JsonScalar>(q: &Subspace<R>) -> MatrixJson {
    let rows: Vec<Vec<R>> = q.basis().iter().map(|v| primitive(v)).collect();
    MatrixJson {
        rows: rows.len(),
        cols: q.ambient(),
        entries: rows.iter().flatten().map(R::to_json).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessJson {
    pub triple: String,
    #[serde(rename = "Q")]
    pub q: MatrixJson,
    pub strategy: String,
    pub dual: bool,
    pub seed: u64,
    pub attempt: u32,
    pub checks: Vec<CheckJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplementsJson {
    pub in_module: Vec<Vec<Value>>,
    pub in_sub: Vec<Vec<Value>>,
    pub quotient: ModuleJson,
    pub in_quotient: Vec<Vec<Value>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportJson {
    pub triple: String,
    pub n: usize,
    pub lambda: BTreeMap<String, Vec<u32>>,
    pub mu: BTreeMap<String, Vec<u32>>,
    pub nu: BTreeMap<String, Vec<u32>>,
    pub beta: Option<Vec<ExponentJson>>,
    pub beta_prime: Option<Vec<ExponentJson>>,
    pub beta_double_prime: Option<Vec<ExponentJson>>,
    pub checks: Vec<CheckJson>,
    pub saturation: bool,
    pub witness_unavailable: bool,
    pub witness: Option<WitnessJson>,
    pub special: Option<Vec<Vec<Value>>>,
    pub complements: Option<ComplementsJson>,
}

fn exps_json(v: &Option<Vec<ExponentVector>>) -> Option<Vec<ExponentJson>> {
    v.as_ref().map(|v| v.iter().map(ExponentJson::from_core).collect())
}

impl ReportJson {
    pub fn from_core<R: JsonScalar>(r: &HornReport<R>) -> Self {
        let checks: Vec<CheckJson> = r.checks.iter().map(CheckJson::from_core).collect();
        Self {
            triple: r.triple.to_string(),
            n: r.n,
            lambda: per_atom_json(&r.lambda),
            mu: per_atom_json(&r.mu),
            nu: per_atom_json(&r.nu),
            beta: exps_json(&r.beta),
            beta_prime: exps_json(&r.beta_prime),
            beta_double_prime: exps_json(&r.beta_double_prime),
            checks: checks.clone(),
            saturation: r.saturation,
            witness_unavailable: r.witness_unavailable(),
            witness: r.witness.as_ref().map(|w| WitnessJson {
                triple: r.triple.to_string(),
                q: subspace_json(&w.q),
                strategy: w.strategy.as_str().into(),
                dual: w.dual,
                seed: w.seed,
                attempt: w.attempt,
                checks,
            }),
            special: r.special.as_ref().map(|s| vectors_to_json(s.generators())),
            complements: r.complements.as_ref().map(|c| ComplementsJson {
                in_module: vectors_to_json(c.in_module.generators()),
                in_sub: vectors_to_json(c.in_sub.generators()),
                quotient: ModuleJson::from_core(&c.quotient),
                in_quotient: vectors_to_json(c.in_quotient.generators()),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnfJson {
    pub pid: String,
    pub u: MatrixJson,
    pub v: MatrixJson,
    pub d: MatrixJson,
    pub factors: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LrJson {
    pub lambda: Vec<u32>,
    pub mu: Vec<u32>,
    pub nu: Vec<u32>,
    pub coefficient: u64,
    pub tableaux: Vec<Vec<Vec<u32>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriplesJson {
    pub n: usize,
    pub r: usize,
    pub triples: Vec<String>,
}

pub fn triple_strings(ts: &[SetTriple]) -> Vec<String> {
    ts.iter().map(SetTriple::to_string).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelftestJson {
    pub suites: Vec<CheckJson>,
}
