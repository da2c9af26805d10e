//! Experiment reports: metric values and measured-versus-bound rows.

use std::io::Write;

use super::checks::BoundCheck;
use super::format::fmt12;
use crate::error::Result;

pub const REPORT_HEADER: &str = "check,tau_or_interval,measured,bound,pass";

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub check: String,
    /// Window length, interval, comparator policy or `-`.
    pub scope: String,
    pub measured: f64,
    /// `None` for plain metric rows.
    pub bound: Option<f64>,
}

impl ReportRow {
    pub fn metric(name: &str, scope: impl Into<String>, value: f64) -> Self {
        Self { check: name.into(), scope: scope.into(), measured: value, bound: None }
    }

    pub fn pass(&self) -> Option<bool> {
        self.bound.map(|b| self.measured <= b)
    }

    pub fn to_csv(&self) -> String {
        let bound = self.bound.map_or("-".to_string(), fmt12);
        let pass = self.pass().map_or("-", |p| if p { "true" } else { "false" });
        format!("{},{},{},{},{}", self.check, self.scope, fmt12(self.measured), bound, pass)
    }
}

impl From<BoundCheck> for ReportRow {
    fn from(c: BoundCheck) -> Self {
        Self { check: c.check.into(), scope: c.scope, measured: c.measured, bound: Some(c.bound) }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub rows: Vec<ReportRow>,
}

impl Report {
    pub fn push(&mut self, row: ReportRow) {
        self.rows.push(row);
    }

    /// True iff every bound row holds.
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass() != Some(false))
    }

    pub fn violations(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| r.pass() == Some(false))
    }

    /// The value of a metric row, if present.
    pub fn metric(&self, check: &str, scope: &str) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.bound.is_none() && r.check == check && r.scope == scope)
            .map(|r| r.measured)
    }

    pub fn write_csv(&self, out: &mut impl Write) -> Result<()> {
        writeln!(out, "{REPORT_HEADER}")?;
        for row in &self.rows {
            writeln!(out, "{}", row.to_csv())?;
        }
        Ok(())
    }
}
