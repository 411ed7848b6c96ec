//! JSON files for user-defined algebras, their realizations, and exponents.
//!
//! Algebra files look like
//!
//! ```json
//! {"schema": 1, "dim": 3, "names": ["X", "Y", "Z"],
//!  "brackets": [{"i": 0, "j": 1, "coeffs": {"2": "1"}}],
//!  "chart": {"dim": 1, "coords": ["q"]},
//!  "fields": [{"generator": 0, "components": [{"const": "1", "linear": {}}]}]}
//! ```
//!
//! Omitted brackets are zero and omitted fields act trivially. Bracket
//! coefficient keys are basis indices or basis names. Rationals are strings.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::action::{ActionRealization, AffineVectorField};
use crate::error::{Error, Result};
use crate::exact::{Monomial, Rational, TruncPoly};
use crate::exponent::InfExponent;
use crate::lie::{AlgebraElement, LieAlgebra};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraConfig {
    pub schema: u32,
    pub dim: usize,
    pub names: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart: Option<ChartSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fields: Vec<FieldSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketSpec {
    pub i: usize,
    pub j: usize,
    pub coeffs: BTreeMap<String, Rational>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSpec {
    pub dim: usize,
    pub coords: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub generator: usize,
    pub components: Vec<ComponentSpec>,
}

/// One component `const + Σ linear[c]·c` of an affine field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    #[serde(rename = "const", default = "Rational::zero")]
    pub constant: Rational,
    #[serde(default)]
    pub linear: BTreeMap<String, Rational>,
}

impl AlgebraConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Exports a realization, listing each bracket once and every field.
    pub fn from_realization(act: &ActionRealization) -> Self {
        let alg = act.algebra();
        let n = alg.dim();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let coeffs: BTreeMap<String, Rational> =
                    alg.structure(i, j).support().map(|(k, c)| (k.to_string(), c.clone())).collect();
                if !coeffs.is_empty() {
                    brackets.push(BracketSpec { i, j, coeffs });
                }
            }
        }
        let coords = act.coords();
        let (chart, fields) = if coords.is_empty() {
            (None, Vec::new())
        } else {
            let fields = act
                .fields()
                .iter()
                .enumerate()
                .filter(|(_, f)| !f.is_zero())
                .map(|(g, f)| FieldSpec {
                    generator: g,
                    components: f
                        .components()
                        .iter()
                        .map(|p| ComponentSpec {
                            constant: p.coeff(&vec![0; coords.len()]),
                            linear: (0..coords.len())
                                .filter_map(|v| {
                                    let mut m = vec![0; coords.len()];
                                    m[v] = 1;
                                    let c = p.coeff(&m);
                                    (!c.is_zero()).then(|| (coords[v].clone(), c))
                                })
                                .collect(),
                        })
                        .collect(),
                })
                .collect();
            (Some(ChartSpec { dim: coords.len(), coords: coords.to_vec() }), fields)
        };
        AlgebraConfig { schema: SCHEMA_VERSION, dim: n, names: alg.names().to_vec(), brackets, chart, fields }
    }

    /// Builds and checks the algebra (antisymmetry, Jacobi) and, when a chart
    /// or fields are given, the realization (commutator closure).
    pub fn build(&self, name: &str) -> Result<(LieAlgebra, Option<ActionRealization>)> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::Config(format!("unsupported schema {}, expected {SCHEMA_VERSION}", self.schema)));
        }
        let n = self.dim;
        if self.names.len() != n {
            return Err(Error::Config(format!("dim is {n} but {} names given", self.names.len())));
        }
        let mut brackets = Vec::with_capacity(self.brackets.len());
        for b in &self.brackets {
            let mut v = vec![Rational::zero(); n];
            for (key, c) in &b.coeffs {
                let k = key
                    .parse::<usize>()
                    .ok()
                    .filter(|&k| k < n)
                    .or_else(|| self.names.iter().position(|s| s == key))
                    .ok_or_else(|| Error::Config(format!("bracket coefficient key {key:?} is not a basis index or name")))?;
                v[k] += c;
            }
            if b.i >= n || b.j >= n {
                return Err(Error::Config(format!("bracket ({}, {}) out of range for dim {n}", b.i, b.j)));
            }
            brackets.push((b.i, b.j, AlgebraElement::new(v)));
        }
        let alg = LieAlgebra::from_brackets(name, self.names.clone(), &brackets)?;

        if self.chart.is_none() && !self.fields.is_empty() {
            return Err(Error::Config("fields given without a chart".into()));
        }
        let Some(chart) = &self.chart else {
            return Ok((alg, None));
        };
        let d = chart.dim;
        if chart.coords.len() != d {
            return Err(Error::Config(format!("chart dim is {d} but {} coords given", chart.coords.len())));
        }
        let mut fields = vec![AffineVectorField::zero(d); n];
        let mut seen = vec![false; n];
        for f in &self.fields {
            if f.generator >= n || std::mem::replace(&mut seen[f.generator], true) {
                return Err(Error::Config(format!("field for generator {} is out of range or repeated", f.generator)));
            }
            if f.components.len() != d {
                return Err(Error::Config(format!(
                    "field for {} has {} components, chart has {d}",
                    self.names[f.generator],
                    f.components.len()
                )));
            }
            let mut constant = Vec::with_capacity(d);
            let mut linear = Vec::with_capacity(d);
            for comp in &f.components {
                let mut row = vec![Rational::zero(); d];
                for (coord, c) in &comp.linear {
                    let v = chart
                        .coords
                        .iter()
                        .position(|s| s == coord)
                        .ok_or_else(|| Error::Config(format!("unknown coordinate {coord:?}")))?;
                    row[v] += c;
                }
                constant.push(comp.constant.clone());
                linear.push(row);
            }
            fields[f.generator] = AffineVectorField::affine(&constant, &linear)?;
        }
        let act = ActionRealization::new(Arc::new(alg.clone()), chart.coords.clone(), fields)?;
        Ok((alg, Some(act)))
    }
}

/// Reads and checks an algebra file. The algebra is named after the file stem.
pub fn load_algebra_config(path: &Path) -> Result<(LieAlgebra, Option<ActionRealization>)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let name = path.file_stem().map_or_else(|| "custom".to_string(), |s| s.to_string_lossy().into_owned());
    AlgebraConfig::from_json(&text)?.build(&name)
}

/// Like [`load_algebra_config`], always returning a realization: the
/// trivial action on a point when the file has no chart.
pub fn load_realization(path: &Path) -> Result<ActionRealization> {
    let (alg, act) = load_algebra_config(path)?;
    Ok(act.unwrap_or_else(|| ActionRealization::trivial(Arc::new(alg), Vec::new())))
}

/// An exponent given by its nonzero pair values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentInput {
    pub schema: u32,
    pub entries: Vec<ExponentEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentEntry {
    pub pair: [String; 2],
    pub terms: Vec<ExponentTerm>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentTerm {
    pub monomial: Monomial,
    pub coeff: Rational,
}

impl ExponentInput {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn build(&self, act: &ActionRealization, degree_cap: u32) -> Result<InfExponent> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::Config(format!("unsupported schema {}, expected {SCHEMA_VERSION}", self.schema)));
        }
        let alg = act.algebra();
        let mut xi = InfExponent::zero(act, degree_cap);
        for e in &self.entries {
            let idx = |name: &String| {
                alg.index_of(name).ok_or_else(|| Error::Config(format!("unknown generator {name:?}")))
            };
            let (i, j) = (idx(&e.pair[0])?, idx(&e.pair[1])?);
            if i == j {
                return Err(Error::Config(format!("pair ({0}, {0}) is not allowed", e.pair[0])));
            }
            let value = TruncPoly::from_terms(
                act.chart_dim(),
                degree_cap,
                e.terms.iter().map(|t| (t.monomial.clone(), t.coeff.clone())),
            )
            .map_err(|err| Error::Config(format!("pair ({}, {}): {err}", e.pair[0], e.pair[1])))?;
            let value = xi.get(i, j).add(&value)?;
            xi.set(i, j, value)?;
        }
        Ok(xi)
    }
}

pub fn load_exponent(path: &Path, act: &ActionRealization, degree_cap: u32) -> Result<InfExponent> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    ExponentInput::from_json(&text)?.build(act, degree_cap)
}
