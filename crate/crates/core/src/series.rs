use std::io::Write;

use crate::{Error, Result};

/// Real-valued time series with a label.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagnosticSeries {
    pub label: String,
    times: Vec<f64>,
    values: Vec<f64>,
}

impl DiagnosticSeries {
    pub fn new(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            times: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn from_parts(label: impl Into<String>, times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::InvalidParameter(format!(
                "series has {} times but {} values",
                times.len(),
                values.len()
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter("series times must be strictly increasing".into()));
        }
        Ok(Self {
            label: label.into(),
            times,
            values,
        })
    }

    pub fn push(&mut self, t: f64, v: f64) -> Result<()> {
        if let Some(&last) = self.times.last() {
            if !(t > last) {
                return Err(Error::InvalidParameter(format!("time {t} does not follow {last}")));
            }
        }
        self.times.push(t);
        self.values.push(v);
        Ok(())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Series `|v(t) - v(0)| / |v(0)|` (absolute drift when `v(0) = 0`).
    pub fn relative_drift(&self) -> DiagnosticSeries {
        let v0 = self.values.first().copied().unwrap_or(0.0);
        let scale = if v0 == 0.0 { 1.0 } else { v0.abs() };
        DiagnosticSeries {
            label: format!("{} relative drift", self.label),
            times: self.times.clone(),
            values: self.values.iter().map(|v| (v - v0).abs() / scale).collect(),
        }
    }

    /// Writes `time,<label>...` for several series sharing one time axis.
    pub fn write_csv<W: Write>(out: &mut W, series: &[&DiagnosticSeries]) -> Result<()> {
        let Some(first) = series.first() else {
            return Ok(());
        };
        if series.iter().any(|s| s.times != first.times) {
            return Err(Error::InvalidParameter("series do not share a time axis".into()));
        }
        write!(out, "time")?;
        for s in series {
            write!(out, ",{}", s.label.replace(',', ";"))?;
        }
        writeln!(out)?;
        for (k, t) in first.times.iter().enumerate() {
            write!(out, "{t:.17e}")?;
            for s in series {
                write!(out, ",{:.17e}", s.values[k])?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    pub fn read_csv(text: &str) -> Result<Vec<DiagnosticSeries>> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Format("empty series CSV".into()))?;
        let labels: Vec<&str> = header.split(',').skip(1).collect();
        let mut times = Vec::new();
        let mut cols = vec![Vec::new(); labels.len()];
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let mut it = line.split(',');
            let parse = |s: Option<&str>| -> Result<f64> {
                s.ok_or_else(|| Error::Format(format!("short row: {line}")))?
                    .trim()
                    .parse()
                    .map_err(|e| Error::Format(format!("{e}: {line}")))
            };
            times.push(parse(it.next())?);
            for c in cols.iter_mut() {
                c.push(parse(it.next())?);
            }
        }
        labels
            .into_iter()
            .zip(cols)
            .map(|(l, v)| DiagnosticSeries::from_parts(l, times.clone(), v))
            .collect()
    }
}
