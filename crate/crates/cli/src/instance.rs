//! Instance files: a hypersurface, named automorphisms, named points and
//! optional expectations, in one JSON document.

use std::path::Path;

use galois_core::exactnum::{conductor_containing, CycloField, CycloNum};
use galois_core::hypersurface::Hypersurface;
use galois_core::projlin::ProjMatrix;
use galois_core::text::{parse_polynomial, parse_scalar};
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

pub const SCHEMA: &str = "galois-scope/1";

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub schema: String,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub n: usize,
    pub d: u32,
    /// Conductor of the coefficient field.
    pub field: u32,
    pub polynomial: String,
    /// Smoothness deadline in seconds used when none is given on the command line.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smooth_deadline: Option<f64>,
    /// Row-major matrices of coefficient expressions.
    #[serde(default)]
    pub automorphisms: IndexMap<String, Vec<Vec<String>>>,
    #[serde(default)]
    pub candidates: IndexMap<String, Vec<String>>,
    /// Groups by generator names.
    #[serde(default)]
    pub groups: IndexMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Expectations>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Expectations {
    /// `certified_smooth`, `certified_singular`, or `optional` (a timeout is accepted).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smooth: Option<String>,
    #[serde(default)]
    pub automorphisms: IndexMap<String, AutExpect>,
    /// Point name to `inner`, `outer` or `none`.
    #[serde(default)]
    pub points: IndexMap<String, String>,
    #[serde(default)]
    pub groups: IndexMap<String, GroupExpect>,
    /// No Galois point among the candidates, the coordinate points and the
    /// eigenpoints of the automorphisms.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub no_galois_points: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<CountExpect>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discrepancy: Option<Discrepancy>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct AutExpect {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariant: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u64>,
    /// `inner`, `outer` or `none`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate_point: Option<Vec<String>>,
    /// No power `g^k`, `1 <= k < ord(g)`, passes the shape test.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub no_certificate_in_powers: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_points: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_max_dim: Option<i32>,
    /// Maximal fixed-component dimension of `g^k`, keyed by `k`.
    #[serde(default)]
    pub power_fixed_max_dim: IndexMap<String, i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_of_g: Option<u32>,
    /// Rows that must be among the classification rows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table1_rows: Option<Vec<u8>>,
    /// `holds`, `fails` or `indeterminate`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicate: Option<String>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GroupExpect {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abelian: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cyclic: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler_term: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stabilizer_sum: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient_genus: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_counts: Option<Vec<u32>>,
    /// `pass`, `fail` or `not_applicable`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abelian_check: Option<String>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CountExpect {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer: Option<u32>,
}

/// A statement about the instance that the computation does not confirm.
#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Discrepancy {
    pub automorphism: String,
    pub statement: String,
    pub computed_fixed_points: u32,
    pub computed_max_dim: i32,
}

/// A parsed and validated instance.
#[derive(Clone, Debug)]
pub struct Instance {
    pub file: InstanceFile,
    pub hash: String,
    pub field: CycloField,
    pub x: Hypersurface,
    pub automorphisms: Vec<(String, ProjMatrix)>,
    pub candidates: Vec<(String, Vec<CycloNum>)>,
}

fn input<E: std::fmt::Display>(ctx: &str) -> impl Fn(E) -> CliError + '_ {
    move |e| CliError::Input(format!("{ctx}: {e}"))
}

pub fn parse_matrix(rows: &[Vec<String>], field: &CycloField) -> Result<ProjMatrix, CliError> {
    let parsed = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|s| parse_scalar(s, field))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ProjMatrix::from_rows(parsed)?)
}

pub fn parse_point(coords: &[String], field: &CycloField) -> Result<Vec<CycloNum>, CliError> {
    Ok(coords
        .iter()
        .map(|s| parse_scalar(s, field))
        .collect::<Result<Vec<_>, _>>()?)
}

/// Semicolon-separated rows of comma-separated entries.
pub fn split_matrix_text(text: &str) -> Vec<Vec<String>> {
    text.split(';')
        .map(|r| r.split(',').map(|e| e.trim().to_string()).collect())
        .collect()
}

impl Instance {
    pub fn load(path: &Path, field_override: Option<u32>) -> Result<Instance, CliError> {
        let text = std::fs::read_to_string(path).map_err(input(&path.display().to_string()))?;
        Instance::from_json(&text, field_override)
    }

    pub fn from_json(text: &str, field_override: Option<u32>) -> Result<Instance, CliError> {
        let file: InstanceFile = serde_json::from_str(text).map_err(input("instance"))?;
        let hash = hex::encode(Sha256::digest(text.as_bytes()));
        Instance::from_file(file, hash, field_override)
    }

    pub fn from_file(
        file: InstanceFile,
        hash: String,
        field_override: Option<u32>,
    ) -> Result<Instance, CliError> {
        if file.schema != SCHEMA {
            return Err(CliError::Input(format!(
                "unsupported schema {:?}",
                file.schema
            )));
        }
        let conductor = match field_override {
            Some(m) => conductor_containing(file.field, m),
            None => file.field,
        };
        let field = CycloField::new(conductor)?;
        let f = parse_polynomial(&file.polynomial, file.n + 2, &field)?;
        if f.degree() != file.d {
            return Err(CliError::Input(format!(
                "polynomial has degree {}, instance says {}",
                f.degree(),
                file.d
            )));
        }
        let x = Hypersurface::new(file.n, f)?;
        let mut automorphisms = Vec::new();
        for (name, rows) in &file.automorphisms {
            let m = parse_matrix(rows, &field)
                .map_err(|e| CliError::Input(format!("automorphism {name}: {e}")))?;
            if m.size() != file.n + 2 {
                return Err(CliError::Input(format!(
                    "automorphism {name} has size {}",
                    m.size()
                )));
            }
            automorphisms.push((name.clone(), m));
        }
        let mut candidates = Vec::new();
        for (name, coords) in &file.candidates {
            let p = parse_point(coords, &field)
                .map_err(|e| CliError::Input(format!("point {name}: {e}")))?;
            if p.len() != file.n + 2 || p.iter().all(|c| c.is_zero()) {
                return Err(CliError::Input(format!(
                    "point {name} is not a point of P^{}",
                    file.n + 1
                )));
            }
            candidates.push((name.clone(), p));
        }
        for (g, gens) in &file.groups {
            for name in gens {
                if !file.automorphisms.contains_key(name) {
                    return Err(CliError::Input(format!(
                        "group {g} names unknown automorphism {name}"
                    )));
                }
            }
        }
        if let Some(e) = &file.expect {
            for name in e.automorphisms.keys() {
                if !file.automorphisms.contains_key(name) {
                    return Err(CliError::Input(format!(
                        "expectation for unknown automorphism {name}"
                    )));
                }
            }
            for name in e.points.keys() {
                if !file.candidates.contains_key(name) {
                    return Err(CliError::Input(format!(
                        "expectation for unknown point {name}"
                    )));
                }
            }
            for name in e.groups.keys() {
                if !file.groups.contains_key(name) {
                    return Err(CliError::Input(format!(
                        "expectation for unknown group {name}"
                    )));
                }
            }
            if let Some(dsc) = &e.discrepancy {
                if !file.automorphisms.contains_key(&dsc.automorphism) {
                    return Err(CliError::Input(format!(
                        "discrepancy names unknown automorphism {}",
                        dsc.automorphism
                    )));
                }
            }
        }
        Ok(Instance {
            file,
            hash,
            field,
            x,
            automorphisms,
            candidates,
        })
    }

    pub fn name(&self) -> &str {
        &self.file.name
    }

    pub fn automorphism(&self, name: &str) -> Result<&ProjMatrix, CliError> {
        self.automorphisms
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m)
            .ok_or_else(|| CliError::Input(format!("no automorphism named {name}")))
    }

    pub fn candidate(&self, name: &str) -> Result<&Vec<CycloNum>, CliError> {
        self.candidates
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, p)| p)
            .ok_or_else(|| CliError::Input(format!("no point named {name}")))
    }
}
