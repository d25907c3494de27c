//! Fixed-schema CSV tables.

use std::path::Path;

use crate::error::LabError;

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub stage: &'static str,
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(stage: &'static str, header: &'static [&'static str]) -> Self {
        Self {
            stage,
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Formats a finite float (shortest round-trip form).
    pub fn num(&self, field: &str, x: f64) -> Result<String, LabError> {
        if x.is_finite() {
            Ok(x.to_string())
        } else {
            Err(LabError::Numeric {
                stage: self.stage,
                field: field.into(),
            })
        }
    }

    /// Empty cell for `None`.
    pub fn opt(&self, field: &str, x: Option<f64>) -> Result<String, LabError> {
        x.map_or(Ok(String::new()), |v| self.num(field, v))
    }

    pub fn write(&self, path: &Path) -> Result<(), LabError> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// A CSV file read back as header plus string rows.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Loaded {
    pub fn read(path: &Path) -> Result<Self, LabError> {
        let mut r = csv::Reader::from_path(path)?;
        let header = r.headers()?.iter().map(String::from).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|x| x.iter().map(String::from).collect()))
            .collect::<Result<_, _>>()?;
        Ok(Self { header, rows })
    }

    /// Index of the first column named `name`.
    pub fn col(&self, name: &str) -> Result<usize, LabError> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| LabError::Report(format!("missing column `{name}`")))
    }

    pub fn f64_at(&self, row: usize, col: usize) -> Result<f64, LabError> {
        self.rows[row][col]
            .parse()
            .map_err(|_| LabError::Report(format!("bad number `{}`", self.rows[row][col])))
    }
}
