//! Identity reports and their JSON / CSV encodings.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::instances::InstanceDescriptor;
use crate::{Error, Result};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// First line of every report CSV; bump the version when columns change.
pub const CSV_HEADER_COMMENT: &str =
    "# lfunlab identity-report v1: op,instance,inputs,lhs_re,lhs_im,rhs_re,rhs_im,residual,bound,pass,constants,extras,flags";

/// Outcome of one numerical check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub op: String,
    pub instance: String,
    pub inputs: BTreeMap<String, f64>,
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// `|lhs - rhs|` or the op-specific defect.
    #[serde(with = "lenient_f64")]
    pub residual: f64,
    #[serde(with = "lenient_f64")]
    pub bound: f64,
    pub pass: bool,
    pub constants: BTreeMap<String, f64>,
    /// Secondary measured quantities.
    pub extras: BTreeMap<String, f64>,
    pub flags: Vec<String>,
}

impl IdentityReport {
    /// `pass` is derived as `residual <= bound`.
    pub fn new(
        op: &str,
        instance: &str,
        lhs: Complex64,
        rhs: Complex64,
        residual: f64,
        bound: f64,
    ) -> Self {
        IdentityReport {
            op: op.to_string(),
            instance: instance.to_string(),
            inputs: BTreeMap::new(),
            lhs,
            rhs,
            residual,
            bound,
            pass: residual <= bound,
            constants: BTreeMap::new(),
            extras: BTreeMap::new(),
            flags: Vec::new(),
        }
    }

    pub fn input(mut self, name: &str, value: f64) -> Self {
        self.inputs.insert(name.to_string(), value);
        self
    }

    pub fn constant(mut self, name: &str, value: f64) -> Self {
        self.constants.insert(name.to_string(), value);
        self
    }

    pub fn constants_from(mut self, map: &BTreeMap<String, f64>) -> Self {
        self.constants
            .extend(map.iter().map(|(k, v)| (k.clone(), *v)));
        self
    }

    pub fn extra(mut self, name: &str, value: f64) -> Self {
        self.extras.insert(name.to_string(), value);
        self
    }

    pub fn flag(mut self, flag: &str) -> Self {
        if !self.flags.iter().any(|f| f == flag) {
            self.flags.push(flag.to_string());
        }
        self
    }

    pub fn has_flag(&self, flag: &str) -> bool {
        self.flags.iter().any(|f| f == flag)
    }

    /// Whether `pass` agrees with the stored residual and bound.
    pub fn is_consistent(&self) -> bool {
        self.pass == (self.residual <= self.bound)
    }
}

mod lenient_f64 {
    //! JSON has no inf/NaN; those are written as strings.
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_str(&x.to_string())
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    op: String,
    instance: String,
    inputs: String,
    lhs_re: f64,
    lhs_im: f64,
    rhs_re: f64,
    rhs_im: f64,
    residual: f64,
    bound: f64,
    pass: bool,
    constants: String,
    extras: String,
    flags: String,
}

impl TryFrom<&IdentityReport> for CsvRow {
    type Error = Error;

    fn try_from(r: &IdentityReport) -> Result<Self> {
        Ok(CsvRow {
            op: r.op.clone(),
            instance: r.instance.clone(),
            inputs: serde_json::to_string(&r.inputs)?,
            lhs_re: r.lhs.re,
            lhs_im: r.lhs.im,
            rhs_re: r.rhs.re,
            rhs_im: r.rhs.im,
            residual: r.residual,
            bound: r.bound,
            pass: r.pass,
            constants: serde_json::to_string(&r.constants)?,
            extras: serde_json::to_string(&r.extras)?,
            flags: r.flags.join(";"),
        })
    }
}

impl TryFrom<CsvRow> for IdentityReport {
    type Error = Error;

    fn try_from(row: CsvRow) -> Result<Self> {
        Ok(IdentityReport {
            op: row.op,
            instance: row.instance,
            inputs: serde_json::from_str(&row.inputs)?,
            lhs: Complex64::new(row.lhs_re, row.lhs_im),
            rhs: Complex64::new(row.rhs_re, row.rhs_im),
            residual: row.residual,
            bound: row.bound,
            pass: row.pass,
            constants: serde_json::from_str(&row.constants)?,
            extras: serde_json::from_str(&row.extras)?,
            flags: if row.flags.is_empty() {
                Vec::new()
            } else {
                row.flags.split(';').map(str::to_string).collect()
            },
        })
    }
}

/// Encodes reports as CSV, preceded by the versioned header comment.
pub fn reports_to_csv(reports: &[IdentityReport]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for r in reports {
        writer.serialize(CsvRow::try_from(r)?)?;
    }
    if reports.is_empty() {
        writer.write_record([
            "op", "instance", "inputs", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual", "bound",
            "pass", "constants", "extras", "flags",
        ])?;
    }
    let body = writer
        .into_inner()
        .map_err(|e| Error::Io(e.to_string()))?;
    let mut out = String::from(CSV_HEADER_COMMENT);
    out.push('\n');
    out.push_str(&String::from_utf8(body).map_err(|e| Error::Parse(e.to_string()))?);
    Ok(out)
}

pub fn reports_from_csv(text: &str) -> Result<Vec<IdentityReport>> {
    let mut lines = text.splitn(2, '\n');
    let first = lines.next().unwrap_or_default();
    if first.trim_end() != CSV_HEADER_COMMENT {
        return Err(Error::Parse(format!(
            "unexpected CSV header comment {first:?}"
        )));
    }
    let mut reader = csv::Reader::from_reader(lines.next().unwrap_or_default().as_bytes());
    reader
        .deserialize::<CsvRow>()
        .map(|row| IdentityReport::try_from(row?))
        .collect()
}

/// A run's full output: manifest of constants, instance descriptors and reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: String,
    pub constants: BTreeMap<String, f64>,
    pub parameters: BTreeMap<String, String>,
    pub instances: Vec<InstanceDescriptor>,
    pub reports: Vec<IdentityReport>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            schema_version: REPORT_SCHEMA_VERSION,
            command: command.to_string(),
            constants: BTreeMap::new(),
            parameters: BTreeMap::new(),
            instances: Vec::new(),
            reports: Vec::new(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let report: RunReport = serde_json::from_str(text)?;
        if report.schema_version != REPORT_SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "report schema version {} is not supported",
                report.schema_version
            )));
        }
        Ok(report)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, reports_to_csv(&self.reports)?)?;
        Ok(())
    }
}

/// Concatenates runs in order. Constants that disagree between runs are an error.
pub fn merge_reports(runs: &[RunReport]) -> Result<RunReport> {
    let mut merged = RunReport::new("merge");
    for run in runs {
        for (k, v) in &run.constants {
            match merged.constants.get(k) {
                Some(old) if old.to_bits() != v.to_bits() => {
                    return Err(Error::Domain(format!(
                        "constant {k} differs between runs ({old} vs {v})"
                    )))
                }
                _ => {
                    merged.constants.insert(k.clone(), *v);
                }
            }
        }
        for (k, v) in &run.parameters {
            merged
                .parameters
                .insert(format!("{}.{k}", run.command), v.clone());
        }
        for d in &run.instances {
            if !merged.instances.contains(d) {
                merged.instances.push(d.clone());
            }
        }
        merged.reports.extend(run.reports.iter().cloned());
    }
    Ok(merged)
}
