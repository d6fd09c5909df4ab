//! Spec config files.
//!
//! ```toml
//! field = { p = 5, m = 2 }            # optional: modulus = [2, 4, 1]
//! sets = ["subfield:5", "subfield:5", [0, 1, 2, 3, 4, 5, 6]]
//! ```
//!
//! A set is an explicit list of element encodings, `"subfield:d"`,
//! `"subgroup:g"` or `"subgroup:g,withzero"`.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::sets::{subgroup_with_zero, CartesianSpec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    pub p: u32,
    #[serde(default = "one")]
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

fn one() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SetConfig {
    Explicit(Vec<u32>),
    Shorthand(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecConfig {
    pub field: FieldConfig,
    pub sets: Vec<SetConfig>,
}

impl SpecConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Explicit-list form of an existing spec.
    pub fn from_spec(spec: &CartesianSpec) -> Self {
        let field = spec.field();
        SpecConfig {
            field: FieldConfig {
                p: field.characteristic(),
                m: field.degree(),
                modulus: (field.degree() > 1).then(|| field.modulus().to_vec()),
            },
            sets: spec
                .sets()
                .iter()
                .map(|s| SetConfig::Explicit(s.iter().map(|e| e.encoding()).collect()))
                .collect(),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("spec configs always serialize")
    }

    pub fn field(&self) -> Result<Field> {
        let FieldConfig { p, m, modulus } = &self.field;
        match modulus {
            Some(coeffs) => Field::with_modulus(*p, *m, coeffs),
            None => Field::new(*p, *m),
        }
    }

    /// Builds the spec without validating the nesting conditions.
    pub fn build(&self) -> Result<CartesianSpec> {
        let field = Arc::new(self.field()?);
        let sets = self
            .sets
            .iter()
            .map(|s| resolve_set(&field, s))
            .collect::<Result<Vec<_>>>()?;
        CartesianSpec::new(field, sets)
    }
}

fn resolve_set(field: &Field, set: &SetConfig) -> Result<Vec<Elem>> {
    let bad = |s: &str| Error::Config(format!("unrecognized set shorthand {s:?}"));
    match set {
        SetConfig::Explicit(list) => list.iter().map(|&e| field.elem(e)).collect(),
        SetConfig::Shorthand(s) => {
            let (kind, arg) = s.split_once(':').ok_or_else(|| bad(s))?;
            match kind.trim() {
                "subfield" => {
                    let d = arg.trim().parse().map_err(|_| bad(s))?;
                    field.subfield_elements(d)
                }
                "subgroup" => {
                    let (g, with_zero) = match arg.split_once(',') {
                        Some((g, flag)) if flag.trim() == "withzero" => (g, true),
                        Some(_) => return Err(bad(s)),
                        None => (arg, false),
                    };
                    let g = field.elem(g.trim().parse().map_err(|_| bad(s))?)?;
                    let mut out = subgroup_with_zero(field, g)?;
                    if !with_zero {
                        out.retain(|e| !e.is_zero());
                    }
                    Ok(out)
                }
                _ => Err(bad(s)),
            }
        }
    }
}
