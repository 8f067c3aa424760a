//! Correction-factor tables backing the empirical equations.
//!
//! Tables live as plain-text `key = value` files under `factors/` and are
//! compiled into the library. See `factors/README.md` for the format.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

use sha2::{Digest, Sha256};

use crate::equations::{EquationId, ShapeTag};
use crate::error::{Error, Result};

const EMBEDDED: [(EquationId, &str, &str); 8] = [
    (EquationId::Ciria, "ciria.factors", include_str!("../factors/ciria.factors")),
    (EquationId::Tamu, "tamu.factors", include_str!("../factors/tamu.factors")),
    (EquationId::Hec18, "hec18.factors", include_str!("../factors/hec18.factors")),
    (EquationId::Melville, "melville.factors", include_str!("../factors/melville.factors")),
    (EquationId::Froehlich, "froehlich.factors", include_str!("../factors/froehlich.factors")),
    (
        EquationId::MelvilleSutherland,
        "melville_sutherland.factors",
        include_str!("../factors/melville_sutherland.factors"),
    ),
    (EquationId::Chitale, "chitale.factors", include_str!("../factors/chitale.factors")),
    (EquationId::Laursen, "laursen.factors", include_str!("../factors/laursen.factors")),
];

/// Published checksums for the embedded tables.
pub const CHECKSUMS: &str = include_str!("../factors/CHECKSUMS");

/// One parsed factor file.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorTable {
    name: String,
    values: BTreeMap<String, f64>,
}

impl FactorTable {
    pub fn parse(name: &str, text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::FactorTable {
                table: name.to_string(),
                message: format!("line {}: {message}", lineno + 1),
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got {line:?}")))?;
            let key = key.trim();
            if key.is_empty() {
                return Err(err("empty key".into()));
            }
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| err(format!("value for {key} is not a number")))?;
            if !value.is_finite() {
                return Err(err(format!("value for {key} is not finite")));
            }
            if values.insert(key.to_string(), value).is_some() {
                return Err(err(format!("duplicate key {key}")));
            }
        }
        Ok(FactorTable {
            name: name.to_string(),
            values,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn get(&self, key: &str) -> Result<f64> {
        self.values.get(key).copied().ok_or_else(|| Error::FactorTable {
            table: self.name.clone(),
            message: format!("missing key {key}"),
        })
    }

    /// Value for `key`, or `default` when the row is absent.
    pub fn get_or(&self, key: &str, default: f64) -> f64 {
        self.values.get(key).copied().unwrap_or(default)
    }

    pub fn shape(&self, tag: ShapeTag) -> Result<f64> {
        self.get(&format!("shape.{}", tag.as_str()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.values.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

/// The full set of eight tables.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorTables {
    tables: Vec<FactorTable>,
}

impl FactorTables {
    /// The tables compiled into the library.
    pub fn embedded() -> &'static FactorTables {
        static TABLES: OnceLock<FactorTables> = OnceLock::new();
        TABLES.get_or_init(|| {
            let tables = EMBEDDED
                .iter()
                .map(|(_, name, text)| FactorTable::parse(name, text))
                .collect::<Result<Vec<_>>>()
                .expect("embedded factor tables parse");
            FactorTables { tables }
        })
    }

    /// Loads every table from `dir`, using the embedded file names.
    pub fn load_dir(dir: &Path) -> Result<FactorTables> {
        let tables = EMBEDDED
            .iter()
            .map(|(_, name, _)| {
                let text = std::fs::read_to_string(dir.join(name))?;
                FactorTable::parse(name, &text)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FactorTables { tables })
    }

    pub fn table(&self, eq: EquationId) -> &FactorTable {
        &self.tables[eq.index()]
    }
}

/// File name of the table for `eq`.
pub fn file_name(eq: EquationId) -> &'static str {
    EMBEDDED[eq.index()].1
}

/// Raw text of the embedded table for `eq`.
pub fn embedded_text(eq: EquationId) -> &'static str {
    EMBEDDED[eq.index()].2
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Checks the embedded tables against `CHECKSUMS`. Returns the names whose
/// digest differs or that are missing from the checksum list.
pub fn verify_checksums() -> Vec<String> {
    let listed: BTreeMap<&str, &str> = CHECKSUMS
        .lines()
        .filter_map(|l| {
            let mut parts = l.split_whitespace();
            Some((parts.nth(1)?, l.split_whitespace().next()?))
        })
        .collect();
    EMBEDDED
        .iter()
        .filter(|(_, name, text)| listed.get(name).copied() != Some(sha256_hex(text.as_bytes()).as_str()))
        .map(|(_, name, _)| name.to_string())
        .collect()
}
