//! Element database: first three rows of the periodic table.
//!
//! Masses are standard atomic weights in amu. The embedded table can be
//! overridden by a JSON document of `{ "symbol": .., "z": .., "mass_amu": .. }`
//! records.

use crate::error::Error;
use crate::units;
use crate::Result;
use serde::Deserialize;

/// One chemical element: symbol, nuclear charge magnitude, and mass.
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    pub symbol: &'static str,
    pub atomic_number: u32,
    pub mass_amu: f64,
}

impl Element {
    /// Mass in atomic units (electron masses).
    pub fn mass_au(&self) -> f64 {
        units::amu_to_au(self.mass_amu)
    }
}

/// H through Ar.
pub const ELEMENTS: &[Element] = &[
    Element {
        symbol: "H",
        atomic_number: 1,
        mass_amu: 1.008,
    },
    Element {
        symbol: "He",
        atomic_number: 2,
        mass_amu: 4.002602,
    },
    Element {
        symbol: "Li",
        atomic_number: 3,
        mass_amu: 6.94,
    },
    Element {
        symbol: "Be",
        atomic_number: 4,
        mass_amu: 9.0121831,
    },
    Element {
        symbol: "B",
        atomic_number: 5,
        mass_amu: 10.81,
    },
    Element {
        symbol: "C",
        atomic_number: 6,
        mass_amu: 12.011,
    },
    Element {
        symbol: "N",
        atomic_number: 7,
        mass_amu: 14.007,
    },
    Element {
        symbol: "O",
        atomic_number: 8,
        mass_amu: 15.999,
    },
    Element {
        symbol: "F",
        atomic_number: 9,
        mass_amu: 18.998403163,
    },
    Element {
        symbol: "Ne",
        atomic_number: 10,
        mass_amu: 20.1797,
    },
    Element {
        symbol: "Na",
        atomic_number: 11,
        mass_amu: 22.98976928,
    },
    Element {
        symbol: "Mg",
        atomic_number: 12,
        mass_amu: 24.305,
    },
    Element {
        symbol: "Al",
        atomic_number: 13,
        mass_amu: 26.9815385,
    },
    Element {
        symbol: "Si",
        atomic_number: 14,
        mass_amu: 28.085,
    },
    Element {
        symbol: "P",
        atomic_number: 15,
        mass_amu: 30.973761998,
    },
    Element {
        symbol: "S",
        atomic_number: 16,
        mass_amu: 32.06,
    },
    Element {
        symbol: "Cl",
        atomic_number: 17,
        mass_amu: 35.45,
    },
    Element {
        symbol: "Ar",
        atomic_number: 18,
        mass_amu: 39.948,
    },
];

/// Look up an element by symbol in the embedded table.
pub fn by_symbol(symbol: &str) -> Result<&'static Element> {
    ELEMENTS
        .iter()
        .find(|e| e.symbol == symbol)
        .ok_or_else(|| Error::schema(format!("unknown element symbol: {symbol:?}")))
}

#[derive(Debug, Deserialize)]
struct ElementRecord {
    symbol: String,
    z: u32,
    mass_amu: f64,
}

/// An element table with optional user overrides layered on the embedded one.
#[derive(Debug, Clone, Default)]
pub struct ElementTable {
    overrides: Vec<(String, u32, f64)>,
}

impl ElementTable {
    pub fn embedded() -> Self {
        Self::default()
    }

    /// Parse a JSON array of `{symbol, z, mass_amu}` records as overrides.
    pub fn with_overrides_json(json: &str) -> Result<Self> {
        let records: Vec<ElementRecord> =
            serde_json::from_str(json).map_err(|e| Error::schema(format!("element table: {e}")))?;
        let mut overrides = Vec::new();
        for r in records {
            if r.z == 0 {
                return Err(Error::domain(format!(
                    "element {}: atomic number must be >= 1",
                    r.symbol
                )));
            }
            if r.mass_amu <= 0.0 {
                return Err(Error::domain(format!(
                    "element {}: mass must be positive",
                    r.symbol
                )));
            }
            if overrides.iter().any(|(s, _, _)| *s == r.symbol) {
                return Err(Error::schema(format!(
                    "duplicate element symbol: {}",
                    r.symbol
                )));
            }
            overrides.push((r.symbol, r.z, r.mass_amu));
        }
        Ok(Self { overrides })
    }

    /// Resolve a symbol to (atomic number, mass in amu).
    pub fn lookup(&self, symbol: &str) -> Result<(u32, f64)> {
        if let Some((_, z, m)) = self.overrides.iter().find(|(s, _, _)| s == symbol) {
            return Ok((*z, *m));
        }
        by_symbol(symbol).map(|e| (e.atomic_number, e.mass_amu))
    }
}
