//! Family definition files (TOML) and run configuration.
//!
//! A family file lists `d` sequences, each given either as an exponential
//! sum with rational roots or as a linear recurrence with initial terms
//! `G(1), ..., G(k)`:
//!
//! ```toml
//! name = "t1"
//!
//! [[sequence]]
//! name = "2^n"
//! terms = [{ coeff = "1", root = "2" }]
//!
//! [[sequence]]
//! name = "F"
//! recurrence = { coeffs = ["1", "1"], initial = ["1", "1"] }
//! ```
//!
//! All numbers may be written as TOML integers or as decimal strings
//! (required once they exceed 64 bits). An empty `terms` list denotes the
//! identically-zero sequence.

use serde::Deserialize;

use crate::dyadic::parse_rat;
use crate::family::ThueFamily;
use crate::sequences::RecurrenceSpec;
use crate::{Error, Int, Rat, Result};

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum NumLit {
    Int(i64),
    Str(String),
}

impl NumLit {
    fn to_rat(&self) -> Result<Rat> {
        match self {
            NumLit::Int(i) => Ok(Rat::from_integer(Int::from(*i))),
            NumLit::Str(s) => {
                parse_rat(s).map_err(|e| Error::Config(format!("bad number `{s}`: {e}")))
            }
        }
    }

    fn to_int(&self) -> Result<Int> {
        match self {
            NumLit::Int(i) => Ok(Int::from(*i)),
            NumLit::Str(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad integer `{s}`"))),
        }
    }
}

#[derive(Debug, Deserialize)]
struct TermRaw {
    coeff: NumLit,
    root: NumLit,
}

#[derive(Debug, Deserialize)]
struct RecurrenceRaw {
    coeffs: Vec<NumLit>,
    initial: Vec<NumLit>,
}

#[derive(Debug, Deserialize)]
struct SequenceRaw {
    name: String,
    #[serde(default)]
    terms: Option<Vec<TermRaw>>,
    #[serde(default)]
    recurrence: Option<RecurrenceRaw>,
}

#[derive(Debug, Deserialize)]
struct FamilyRaw {
    name: String,
    #[serde(rename = "sequence")]
    sequences: Vec<SequenceRaw>,
}

/// Parse a family definition from TOML text.
pub fn family_from_str(text: &str) -> Result<ThueFamily> {
    let raw: FamilyRaw =
        toml::from_str(text).map_err(|e| Error::Config(format!("family file: {e}")))?;
    let mut seqs = Vec::with_capacity(raw.sequences.len());
    for s in &raw.sequences {
        let spec = match (&s.terms, &s.recurrence) {
            (Some(terms), None) => {
                let parsed: Vec<(Rat, Rat)> = terms
                    .iter()
                    .map(|t| Ok((t.coeff.to_rat()?, t.root.to_rat()?)))
                    .collect::<Result<_>>()?;
                RecurrenceSpec::exp_sum(&s.name, parsed)?
            }
            (None, Some(rec)) => {
                let coeffs: Vec<Int> =
                    rec.coeffs.iter().map(NumLit::to_int).collect::<Result<_>>()?;
                let initial: Vec<Int> =
                    rec.initial.iter().map(NumLit::to_int).collect::<Result<_>>()?;
                RecurrenceSpec::recurrence(&s.name, coeffs, initial)?
            }
            _ => {
                return Err(Error::Config(format!(
                    "sequence `{}` must define exactly one of `terms` or `recurrence`",
                    s.name
                )))
            }
        };
        seqs.push(spec);
    }
    ThueFamily::new(&raw.name, seqs)
}

/// Load a family definition from a TOML file.
pub fn load_family(path: &std::path::Path) -> Result<ThueFamily> {
    let text = std::fs::read_to_string(path).map_err(Error::Io)?;
    family_from_str(&text).map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Shared run configuration for verification pipelines.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Working precision in bits (>= 64).
    pub precision: u32,
    /// Pohst regulator constant (default 1/100).
    pub pohst_c: Rat,
    /// Baker-style linear-form constant (default 1e9; externally sourced
    /// values should be supplied by the caller).
    pub baker_c: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision: 128,
            pohst_c: Rat::new(Int::from(1), Int::from(100)),
            baker_c: 1e9,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.precision < 64 {
            return Err(Error::Config(format!(
                "precision must be >= 64 bits (got {})",
                self.precision
            )));
        }
        if !num_traits::Signed::is_positive(&self.pohst_c) {
            return Err(Error::Config("pohst_c must be positive".into()));
        }
        if self.baker_c <= 0.0 {
            return Err(Error::Config("baker_c must be positive".into()));
        }
        Ok(())
    }
}
