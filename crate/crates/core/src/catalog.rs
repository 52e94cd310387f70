//! The built-in catalog: every algebra with its reference forms, published
//! perturbations, and expected values tagged by source table.
//!
//! The catalog ships embedded in the binary as JSON (`default_catalog.json`)
//! and can be replaced at runtime; `validate` re-checks everything a file
//! could get wrong (grammar, degrees, Jacobi, unknown source tags).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exterior::KForm;
use crate::liealg::LieAlgebra;
use crate::notation::{parse_form, parse_salamon};

pub const DEFAULT_CATALOG_JSON: &str = include_str!("default_catalog.json");

/// Quantity keys understood by the reproduce harness.
pub const KNOWN_QUANTITIES: &[&str] = &[
    "z3",
    "z4",
    "dim_aut",
    "stab_closed",
    "stab_coclosed",
    "stab_perturbed",
    "b3",
    "moduli_closed",
    "moduli_coclosed",
    "nilpotency_step",
    "closed_form_closed",
    "closed_form_positive",
    "coclosed_form_closed",
];

/// Source tags that expected values may carry.
pub const KNOWN_SOURCES: &[&str] = &[
    "table1", "table2", "table3", "table4", "table5", "table6", "table7", "table8", "table9",
    "section3", "section4",
];

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Catalog {
    pub schema_version: u32,
    pub entries: Vec<CatalogEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CatalogEntry {
    pub name: String,
    /// Structure-equation tuple; absent for entries whose equations are not
    /// published here (expected values only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub salamon: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposable: Option<bool>,
    /// Closed reference 3-form.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<String>,
    /// Coclosed reference 4-form, direct or via SU(3) data.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coclosed: Option<CoclosedSource>,
    /// Published perturbation directions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_perturbation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coclosed_perturbation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub expected: BTreeMap<String, Expected>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum CoclosedSource {
    Form { form: String },
    Su3 { su3: Su3Data },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Su3Data {
    pub omega: String,
    pub psi_minus: String,
    pub eta: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Expected {
    pub value: i64,
    pub source: String,
    /// The published value is only claimed as an upper bound.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub upper_bound: bool,
    /// Second candidate value where the source tables disagree internally;
    /// computing it yields a flag instead of a mismatch.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alternate: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogError {
    pub entry: String,
    pub field: String,
    pub message: String,
}

impl fmt::Display for CatalogError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "catalog entry '{}', field '{}': {}",
            self.entry, self.field, self.message
        )
    }
}

impl std::error::Error for CatalogError {}

impl CatalogEntry {
    pub fn algebra(&self) -> Option<Result<LieAlgebra, CatalogError>> {
        let s = self.salamon.as_deref()?;
        Some(
            parse_salamon(s)
                .map_err(|e| self.err("salamon", e.to_string()))
                .and_then(|spec| {
                    LieAlgebra::from_salamon(&spec).map_err(|e| self.err("salamon", e.to_string()))
                }),
        )
    }

    /// The coclosed reference 4-form, building psi from SU(3) data when given
    /// that way.
    pub fn coclosed_form(&self, dim: usize) -> Option<Result<KForm, CatalogError>> {
        match self.coclosed.as_ref()? {
            CoclosedSource::Form { form } => Some(
                parse_form(form, dim).map_err(|e| self.err("coclosed.form", e.to_string())),
            ),
            CoclosedSource::Su3 { su3 } => {
                let parse = |field: &str, text: &str| {
                    parse_form(text, dim).map_err(|e| self.err(field, e.to_string()))
                };
                Some((|| {
                    let omega = parse("coclosed.su3.omega", &su3.omega)?;
                    let psi_minus = parse("coclosed.su3.psi_minus", &su3.psi_minus)?;
                    let eta = parse("coclosed.su3.eta", &su3.eta)?;
                    Ok(crate::g2::build_psi_su3(&omega, &psi_minus, &eta).form)
                })())
            }
        }
    }

    fn err(&self, field: &str, message: String) -> CatalogError {
        CatalogError {
            entry: self.name.clone(),
            field: field.to_string(),
            message,
        }
    }
}

impl Catalog {
    pub fn default_catalog() -> Catalog {
        let c: Catalog =
            serde_json::from_str(DEFAULT_CATALOG_JSON).expect("embedded catalog is valid JSON");
        c.validate().expect("embedded catalog validates");
        c
    }

    pub fn from_json(text: &str) -> Result<Catalog, CatalogError> {
        let c: Catalog = serde_json::from_str(text).map_err(|e| CatalogError {
            entry: String::new(),
            field: String::new(),
            message: format!("invalid JSON: {e}"),
        })?;
        c.validate()?;
        Ok(c)
    }

    pub fn get(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// Full validation: unique names, schema version, parsable tuples passing
    /// Jacobi, forms of the right degree, recognized quantity/source tags.
    pub fn validate(&self) -> Result<(), CatalogError> {
        if self.schema_version != crate::SCHEMA_VERSION {
            return Err(CatalogError {
                entry: String::new(),
                field: "schema_version".into(),
                message: format!(
                    "unsupported schema version {} (expected {})",
                    self.schema_version,
                    crate::SCHEMA_VERSION
                ),
            });
        }
        let mut seen = std::collections::BTreeSet::new();
        for entry in &self.entries {
            if !seen.insert(entry.name.as_str()) {
                return Err(entry.err("name", "duplicate entry name".into()));
            }
            let dim = match entry.algebra() {
                Some(Ok(g)) => Some(g.dim()),
                Some(Err(e)) => return Err(e),
                None => None,
            };
            let dim = dim.unwrap_or(7);
            let check_degree = |field: &str, text: &str, degree: usize| {
                let f = parse_form(text, dim).map_err(|e| entry.err(field, e.to_string()))?;
                if !f.is_zero() && f.degree() != degree {
                    return Err(entry.err(
                        field,
                        format!("expected a {degree}-form, got degree {}", f.degree()),
                    ));
                }
                Ok(())
            };
            if let Some(t) = &entry.closed_form {
                check_degree("closed_form", t, 3)?;
            }
            match &entry.coclosed {
                Some(CoclosedSource::Form { form }) => check_degree("coclosed.form", form, 4)?,
                Some(CoclosedSource::Su3 { su3 }) => {
                    check_degree("coclosed.su3.omega", &su3.omega, 2)?;
                    check_degree("coclosed.su3.psi_minus", &su3.psi_minus, 3)?;
                    check_degree("coclosed.su3.eta", &su3.eta, 1)?;
                }
                None => {}
            }
            if let Some(t) = &entry.closed_perturbation {
                check_degree("closed_perturbation", t, 3)?;
            }
            if let Some(t) = &entry.coclosed_perturbation {
                check_degree("coclosed_perturbation", t, 4)?;
            }
            for (quantity, exp) in &entry.expected {
                if !KNOWN_QUANTITIES.contains(&quantity.as_str()) {
                    return Err(entry.err("expected", format!("unknown quantity '{quantity}'")));
                }
                if !KNOWN_SOURCES.contains(&exp.source.as_str()) {
                    return Err(entry.err(
                        "expected",
                        format!("unknown source tag '{}' on '{quantity}'", exp.source),
                    ));
                }
            }
        }
        Ok(())
    }
}
