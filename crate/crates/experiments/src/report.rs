//! Report and table output.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nlslab_core::snapshot::save_field;
use nlslab_core::Field;

use crate::Result;

pub const FOOTER: &str = "note: no explicit constants are available for the limiting statements; \
ladder experiments demonstrate monotone improvement only";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Clamped,
    InvalidBoundaryMass,
    Error,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Clamped => "clamped",
            Status::InvalidBoundaryMass => "invalid-boundary-mass",
            Status::Error => "error",
        }
    }

    /// Keeps the more severe of the two.
    pub fn worst(self, other: Status) -> Status {
        let rank = |s: Status| match s {
            Status::Ok => 0,
            Status::Clamped => 1,
            Status::InvalidBoundaryMass => 2,
            Status::Error => 3,
        };
        if rank(other) > rank(self) {
            other
        } else {
            self
        }
    }
}

/// Fixed-width scientific notation used in every CSV cell.
pub fn num(x: f64) -> String {
    format!("{x:.12e}")
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }
}

/// Everything one run writes to its output directory.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub experiment: String,
    pub status: Status,
    pub summary: Vec<(String, String)>,
    pub notes: Vec<String>,
    pub table: Table,
    pub fields: Vec<(String, Field)>,
}

impl Outcome {
    pub fn new(experiment: &str, table: Table) -> Self {
        Self {
            experiment: experiment.to_string(),
            status: Status::Ok,
            summary: Vec::new(),
            notes: Vec::new(),
            table,
            fields: Vec::new(),
        }
    }

    pub fn failed(experiment: &str, message: &str) -> Self {
        let mut o = Self::new(experiment, Table::default());
        o.status = Status::Error;
        o.notes.push(format!("error: {message}"));
        o
    }

    pub fn put(&mut self, key: &str, value: impl ToString) {
        self.summary.push((key.to_string(), value.to_string()));
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn flag(&mut self, s: Status) {
        self.status = self.status.worst(s);
    }

    pub fn report_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "experiment: {}", self.experiment);
        let _ = writeln!(s, "status: {}", self.status.as_str());
        s.push('\n');
        for (k, v) in &self.summary {
            let _ = writeln!(s, "{k} = {v}");
        }
        if !self.notes.is_empty() {
            s.push('\n');
            for n in &self.notes {
                let _ = writeln!(s, "{n}");
            }
        }
        s.push('\n');
        s.push_str(FOOTER);
        s.push('\n');
        s
    }

    /// Writes `report.txt`, `results.csv` and, when asked, one NLSF1 file per field.
    pub fn write(&self, dir: impl AsRef<Path>, dump_fields: bool) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;
        fs::write(dir.join("report.txt"), self.report_text())?;
        fs::write(dir.join("results.csv"), self.table.to_csv())?;
        if dump_fields {
            for (name, f) in &self.fields {
                save_field(dir.join(format!("{name}.nlsf")), f)?;
            }
        }
        Ok(())
    }
}
