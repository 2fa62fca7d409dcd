//! Deterministic report emission: versioned JSON envelopes and CSV plot
//! data. Big integers are serialized as decimal strings; real values as
//! fixed-precision decimal strings so byte-identical output does not
//! depend on parallelism or platform.

use serde::Serialize;

use crate::dyadic::rat_to_decimal;
use crate::{Rat, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Machine-readable finding attached to a report (nontrivial solution,
/// bound violation, fit instability, ...).
#[derive(Debug, Clone, Serialize)]
pub struct Finding {
    pub code: String,
    pub message: String,
}

impl Finding {
    pub fn new(code: &str, message: impl Into<String>) -> Self {
        Finding {
            code: code.into(),
            message: message.into(),
        }
    }
}

/// Versioned envelope wrapped around every JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct ReportEnvelope<T: Serialize> {
    pub schema_version: u32,
    pub kind: String,
    pub findings: Vec<Finding>,
    pub data: T,
}

impl<T: Serialize> ReportEnvelope<T> {
    pub fn new(kind: &str, data: T, findings: Vec<Finding>) -> Self {
        ReportEnvelope {
            schema_version: SCHEMA_VERSION,
            kind: kind.into(),
            findings,
            data,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

/// Fixed-precision decimal rendering of an exact rational for reports
/// (30 fractional digits).
pub fn real_str(x: &Rat) -> String {
    rat_to_decimal(x, 30)
}

/// Render an f64 deterministically for reports.
pub fn f64_str(x: f64) -> String {
    format!("{x:.12e}")
}

/// Write CSV rows (with header) to a file; rows must be pre-sorted by the
/// caller for determinism.
pub fn write_csv(path: &std::path::Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Int;

    #[test]
    fn envelope_is_deterministic() {
        #[derive(Serialize)]
        struct Data {
            value: String,
        }
        let mk = || {
            ReportEnvelope::new(
                "test",
                Data {
                    value: "42".into(),
                },
                vec![Finding::new("demo", "message")],
            )
            .to_json()
        };
        let a = mk();
        assert_eq!(a, mk());
        assert!(a.contains("\"schema_version\": 1"));
        assert!(a.ends_with('\n'));
    }

    #[test]
    fn real_rendering() {
        let x = Rat::new(Int::from(1), Int::from(3));
        let s = real_str(&x);
        assert!(s.starts_with("0.3333333333"));
        assert_eq!(f64_str(1.0), "1.000000000000e0");
    }

    #[test]
    fn csv_output() {
        let dir = std::env::temp_dir().join("splithue-report-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("t.csv");
        write_csv(
            &path,
            &["n", "value"],
            &[vec!["1".into(), "2".into()], vec!["2".into(), "4".into()]],
        )
        .unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "n,value\n1,2\n2,4\n");
    }
}
