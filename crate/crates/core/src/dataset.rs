//! Pier-scour records: CSV ingestion, imputation of missing inputs, zero
//! exclusions and per-parameter summaries.
//!
//! The canonical file is UTF-8 CSV with `.` decimals, preceded by the line
//! `# scourbench-schema v1`. Columns are listed in [`COLUMNS`]; an optional
//! trailing `flags` column carries `;`-separated imputation flags so a
//! processed dataset can be written and read back losslessly.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::equations::{critical_velocity, InputParam, PierShape, ScourInputs, ShapeTag};
use crate::error::{Error, Result};
use crate::reference::{Source, DEFAULT_SPACING};

pub const SCHEMA_HEADER: &str = "# scourbench-schema v1";

pub const COLUMNS: [&str; 13] = [
    "id",
    "kind",
    "ys_measured_m",
    "pier_width_m",
    "pier_length_m",
    "flow_depth_m",
    "velocity_ms",
    "critical_velocity_ms",
    "attack_angle_deg",
    "d50_mm",
    "pier_shape",
    "pier_spacing_m",
    "measurement_method",
];

/// Columns that must hold a value on every row.
const REQUIRED: [&str; 6] = ["id", "kind", "ys_measured_m", "pier_width_m", "flow_depth_m", "velocity_ms"];

const FLAGS_COLUMN: &str = "flags";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Flag {
    #[serde(rename = "L_imputed")]
    LengthImputed,
    #[serde(rename = "S_defaulted")]
    SpacingDefaulted,
    #[serde(rename = "Vc_imputed")]
    VcImputed,
    #[serde(rename = "excluded_zero_y1")]
    ExcludedZeroDepth,
    #[serde(rename = "excluded_zero_V1")]
    ExcludedZeroVelocity,
}

impl Flag {
    pub fn as_str(self) -> &'static str {
        match self {
            Flag::LengthImputed => "L_imputed",
            Flag::SpacingDefaulted => "S_defaulted",
            Flag::VcImputed => "Vc_imputed",
            Flag::ExcludedZeroDepth => "excluded_zero_y1",
            Flag::ExcludedZeroVelocity => "excluded_zero_V1",
        }
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Flag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Flag::LengthImputed,
            Flag::SpacingDefaulted,
            Flag::VcImputed,
            Flag::ExcludedZeroDepth,
            Flag::ExcludedZeroVelocity,
        ]
        .into_iter()
        .find(|f| f.as_str().eq_ignore_ascii_case(s.trim()))
        .ok_or_else(|| Error::domain(format!("unknown flag {s:?}")))
    }
}

/// One measured scour observation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PierScourRecord {
    pub id: String,
    pub kind: Source,
    /// Measured scour depth (m).
    pub ys_measured: f64,
    pub pier_width: f64,
    pub pier_length: Option<f64>,
    pub flow_depth: f64,
    pub velocity: f64,
    pub critical_velocity: Option<f64>,
    pub attack_angle: Option<f64>,
    pub d50_mm: Option<f64>,
    pub shape: Option<PierShape>,
    pub spacing: Option<f64>,
    pub measurement_method: Option<String>,
    pub flags: BTreeSet<Flag>,
}

impl PierScourRecord {
    pub fn has(&self, flag: Flag) -> bool {
        self.flags.contains(&flag)
    }

    /// Value of `param` as stored on the record.
    pub fn get(&self, param: InputParam) -> Option<f64> {
        match param {
            InputParam::Width => Some(self.pier_width),
            InputParam::Length => self.pier_length,
            InputParam::Depth => Some(self.flow_depth),
            InputParam::Velocity => Some(self.velocity),
            InputParam::CriticalVelocity => self.critical_velocity,
            InputParam::Angle => self.attack_angle,
            InputParam::D50 => self.d50_mm,
            InputParam::Shape => match self.shape {
                Some(PierShape::ContinuousFactor(v)) => Some(v),
                _ => None,
            },
            InputParam::Spacing => self.spacing,
        }
    }

    /// Equation inputs for this record. Lab records always see theta = 0 and
    /// a cylindrical pier.
    pub fn to_inputs(&self) -> ScourInputs {
        let (angle, shape) = match self.kind {
            Source::Lab => (Some(0.0), Some(PierShape::Categorical(ShapeTag::Cylindrical))),
            Source::Field => (self.attack_angle, self.shape),
        };
        ScourInputs {
            pier_width: self.pier_width,
            pier_length: self.pier_length,
            flow_depth: self.flow_depth,
            velocity: self.velocity,
            critical_velocity: self.critical_velocity,
            attack_angle: angle,
            d50_mm: self.d50_mm,
            shape,
            spacing: self.spacing,
        }
    }
}

/// A data row that could not be turned into a record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowError {
    /// 1-based line number in the file, counting the schema comment.
    pub line: u64,
    pub id: Option<String>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoadReport {
    pub records: Vec<PierScourRecord>,
    pub row_errors: Vec<RowError>,
}

/// Reads a canonical file. The schema comment line is required.
pub fn load_records(path: &Path, kind: Source) -> Result<LoadReport> {
    let file = File::open(path)?;
    read_records(BufReader::new(file), path, kind, true)
}

/// Reads an export that follows the column schema but may lack the schema
/// comment line, as produced by converting the published spreadsheets.
pub fn load_export(path: &Path, kind: Source) -> Result<LoadReport> {
    let file = File::open(path)?;
    read_records(BufReader::new(file), path, kind, false)
}

pub fn read_records<R: Read>(reader: R, path: &Path, kind: Source, require_schema: bool) -> Result<LoadReport> {
    let schema_err = |message: String| Error::Schema {
        path: path.to_path_buf(),
        message,
    };
    let mut reader = BufReader::new(reader);
    let mut first = String::new();
    reader.read_line(&mut first)?;
    let first_trim = first.trim_start_matches('\u{feff}').trim();
    let (header_line, line_offset) = if first_trim.starts_with('#') {
        if first_trim != SCHEMA_HEADER {
            return Err(schema_err(format!(
                "unsupported schema line {first_trim:?}, expected {SCHEMA_HEADER:?}"
            )));
        }
        (None, 1)
    } else if require_schema {
        return Err(schema_err(format!("missing schema line {SCHEMA_HEADER:?}")));
    } else {
        (Some(first.trim_start_matches('\u{feff}').to_string()), 0)
    };

    let rest: Box<dyn Read> = match header_line {
        Some(h) => Box::new(std::io::Cursor::new(h.into_bytes()).chain(reader)),
        None => Box::new(reader),
    };
    let mut csv = csv::ReaderBuilder::new().flexible(false).trim(csv::Trim::All).from_reader(rest);
    let headers = csv.headers()?.clone();
    let index: HashMap<&str, usize> = headers.iter().enumerate().map(|(i, h)| (h, i)).collect();
    let missing: Vec<&str> = COLUMNS.iter().copied().filter(|c| !index.contains_key(c)).collect();
    if !missing.is_empty() {
        return Err(schema_err(format!("missing column(s): {}", missing.join(", "))));
    }
    let flags_idx = index.get(FLAGS_COLUMN).copied();

    let mut records = Vec::new();
    let mut row_errors = Vec::new();
    for row in csv.records() {
        let row = match row {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line() + line_offset);
                row_errors.push(RowError { line, id: None, message: e.to_string() });
                continue;
            }
        };
        let line = row.position().map_or(0, |p| p.line() + line_offset);
        let cells = Cells { row: &row, index: &index };
        let cell = |name: &str| cells.get(name).to_string();
        match parse_row(&cells, flags_idx.map(|i| row.get(i).unwrap_or("")), kind) {
            Ok(rec) => records.push(rec),
            Err(message) => row_errors.push(RowError {
                line,
                id: Some(cell("id").to_string()).filter(|s| !s.is_empty()),
                message,
            }),
        }
    }
    Ok(LoadReport { records, row_errors })
}

struct Cells<'a> {
    row: &'a csv::StringRecord,
    index: &'a HashMap<&'a str, usize>,
}

impl<'a> Cells<'a> {
    fn get(&self, name: &str) -> &'a str {
        self.row.get(self.index[name]).unwrap_or("")
    }
}

fn parse_row(cells: &Cells<'_>, flags: Option<&str>, kind: Source) -> std::result::Result<PierScourRecord, String> {
    let cell = |name: &str| cells.get(name);
    for name in REQUIRED {
        if cell(name).is_empty() {
            return Err(format!("{name} is empty"));
        }
    }
    let row_kind: Source = cell("kind").parse().map_err(|e: Error| e.to_string())?;
    if row_kind != kind {
        return Err(format!("kind {row_kind} in a {kind} file"));
    }
    let num = |name: &str| -> std::result::Result<Option<f64>, String> {
        let s = cell(name);
        if s.is_empty() {
            return Ok(None);
        }
        let v: f64 = s.parse().map_err(|_| format!("{name}: cannot parse {s:?} as a number"))?;
        if !v.is_finite() {
            return Err(format!("{name}: {s:?} is not finite"));
        }
        Ok(Some(v))
    };
    let req = |name: &str| num(name).map(|v| v.expect("checked non-empty"));

    let ys = req("ys_measured_m")?;
    let b = req("pier_width_m")?;
    let y1 = req("flow_depth_m")?;
    let v1 = req("velocity_ms")?;
    if ys < 0.0 {
        return Err(format!("ys_measured_m = {ys} is negative"));
    }
    if b <= 0.0 {
        return Err(format!("pier_width_m = {b} must be positive"));
    }
    if y1 < 0.0 || v1 < 0.0 {
        return Err("flow_depth_m and velocity_ms must be non-negative".into());
    }
    let positive = |name: &str| -> std::result::Result<Option<f64>, String> {
        match num(name)? {
            Some(v) if v <= 0.0 => Err(format!("{name} = {v} must be positive")),
            v => Ok(v),
        }
    };
    let pier_length = positive("pier_length_m")?;
    let critical = positive("critical_velocity_ms")?;
    let d50 = positive("d50_mm")?;
    let spacing = positive("pier_spacing_m")?;
    let angle = num("attack_angle_deg")?;
    if let Some(t) = angle {
        if !(0.0..=90.0).contains(&t) {
            return Err(format!("attack_angle_deg = {t} outside [0, 90]"));
        }
    }
    let shape = match cell("pier_shape") {
        "" => None,
        s => Some(s.parse::<PierShape>().map_err(|e| e.to_string())?),
    };
    let method = Some(cell("measurement_method").to_string()).filter(|s| !s.is_empty());
    let mut flag_set = BTreeSet::new();
    for f in flags.unwrap_or("").split(';').filter(|s| !s.trim().is_empty()) {
        flag_set.insert(f.parse::<Flag>().map_err(|e| e.to_string())?);
    }

    let (angle, shape) = match kind {
        Source::Lab => (Some(0.0), Some(PierShape::Categorical(ShapeTag::Cylindrical))),
        Source::Field => (angle, shape),
    };
    Ok(PierScourRecord {
        id: cell("id").to_string(),
        kind,
        ys_measured: ys,
        pier_width: b,
        pier_length,
        flow_depth: y1,
        velocity: v1,
        critical_velocity: critical,
        attack_angle: angle,
        d50_mm: d50,
        shape,
        spacing,
        measurement_method: method,
        flags: flag_set,
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes records in the canonical format, flags included. Floats use the
/// shortest representation that parses back to the same value.
pub fn write_records<W: Write>(out: W, records: &[PierScourRecord]) -> Result<()> {
    let mut out = out;
    writeln!(out, "{SCHEMA_HEADER}")?;
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = COLUMNS.to_vec();
    header.push(FLAGS_COLUMN);
    w.write_record(&header)?;
    for r in records {
        let flags: Vec<&str> = r.flags.iter().map(|f| f.as_str()).collect();
        w.write_record([
            r.id.clone(),
            r.kind.to_string(),
            r.ys_measured.to_string(),
            r.pier_width.to_string(),
            fmt_opt(r.pier_length),
            r.flow_depth.to_string(),
            r.velocity.to_string(),
            fmt_opt(r.critical_velocity),
            fmt_opt(r.attack_angle),
            fmt_opt(r.d50_mm),
            r.shape.map(|s| s.to_string()).unwrap_or_default(),
            fmt_opt(r.spacing),
            r.measurement_method.clone().unwrap_or_default(),
            flags.join(";"),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_records(path: &Path, records: &[PierScourRecord]) -> Result<()> {
    let file = File::create(path)?;
    write_records(std::io::BufWriter::new(file), records)
}

/// Sets a missing pier length to `ratio * B`.
pub fn impute_length(rec: &PierScourRecord, ratio: f64) -> Result<PierScourRecord> {
    if !(ratio > 0.0) || !ratio.is_finite() {
        return Err(Error::Config(format!("length ratio must be positive, got {ratio}")));
    }
    let mut out = rec.clone();
    if out.pier_length.is_none() {
        out.pier_length = Some(ratio * out.pier_width);
        out.flags.insert(Flag::LengthImputed);
    }
    Ok(out)
}

/// Sets a missing pier spacing to the default 3 m.
pub fn default_spacing(rec: &PierScourRecord) -> PierScourRecord {
    let mut out = rec.clone();
    if out.spacing.is_none() {
        out.spacing = Some(DEFAULT_SPACING);
        out.flags.insert(Flag::SpacingDefaulted);
    }
    out
}

/// Fills a missing critical velocity from D50 and y1 when both allow it.
pub fn impute_critical_velocity(rec: &PierScourRecord) -> PierScourRecord {
    let mut out = rec.clone();
    if out.critical_velocity.is_none() {
        if let Some(d50) = out.d50_mm {
            if out.flow_depth > 0.0 {
                out.critical_velocity = Some(critical_velocity(out.flow_depth, d50));
                out.flags.insert(Flag::VcImputed);
            }
        }
    }
    out
}

/// All prediction-time imputations: length, spacing and critical velocity.
pub fn prepare(records: &[PierScourRecord], length_ratio: f64) -> Result<Vec<PierScourRecord>> {
    records
        .iter()
        .map(|r| Ok(impute_critical_velocity(&default_spacing(&impute_length(r, length_ratio)?))))
        .collect()
}

/// Splits off records with y1 = 0 or V1 = 0, flagging why. Order is kept in
/// both halves.
pub fn filter_invalid(records: &[PierScourRecord]) -> (Vec<PierScourRecord>, Vec<PierScourRecord>) {
    let mut kept = Vec::new();
    let mut excluded = Vec::new();
    for r in records {
        let mut r = r.clone();
        if r.flow_depth == 0.0 {
            r.flags.insert(Flag::ExcludedZeroDepth);
        }
        if r.velocity == 0.0 {
            r.flags.insert(Flag::ExcludedZeroVelocity);
        }
        if r.has(Flag::ExcludedZeroDepth) || r.has(Flag::ExcludedZeroVelocity) {
            excluded.push(r);
        } else {
            kept.push(r);
        }
    }
    (kept, excluded)
}

/// Pulls pier lengths and measurement methods from a companion table with
/// columns `id, pier_length_m, measurement_method`. Only absent values are
/// filled. Returns the merged records and how many lengths were filled.
pub fn merge_lengths(records: &[PierScourRecord], companion: &Path) -> Result<(Vec<PierScourRecord>, usize)> {
    let mut csv = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(companion)?;
    let headers = csv.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (Some(id_i), Some(len_i)) = (col("id"), col("pier_length_m")) else {
        return Err(Error::Schema {
            path: companion.to_path_buf(),
            message: "companion table needs id and pier_length_m columns".into(),
        });
    };
    let method_i = col("measurement_method");
    let mut table: HashMap<String, (Option<f64>, Option<String>)> = HashMap::new();
    for (n, row) in csv.records().enumerate() {
        let row = row?;
        let id = row.get(id_i).unwrap_or("").to_string();
        let len = match row.get(len_i).unwrap_or("") {
            "" => None,
            s => Some(s.parse::<f64>().ok().filter(|v| *v > 0.0 && v.is_finite()).ok_or_else(|| {
                Error::Schema {
                    path: companion.to_path_buf(),
                    message: format!("row {}: bad pier_length_m {s:?}", n + 2),
                }
            })?),
        };
        let method = method_i
            .and_then(|i| row.get(i))
            .filter(|s| !s.is_empty())
            .map(str::to_string);
        table.insert(id, (len, method));
    }
    let mut filled = 0;
    let merged = records
        .iter()
        .map(|r| {
            let mut r = r.clone();
            if let Some((len, method)) = table.get(&r.id) {
                if r.pier_length.is_none() && len.is_some() {
                    r.pier_length = *len;
                    filled += 1;
                }
                if r.measurement_method.is_none() {
                    r.measurement_method = method.clone();
                }
            }
            r
        })
        .collect();
    Ok((merged, filled))
}

/// One summary row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub parameter: InputParam,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    /// Sample standard deviation (n - 1); 0 for a single value.
    pub sd: f64,
    pub count_used: usize,
    pub count_excluded: usize,
}

/// Whether zeros of `param` are left out of its statistics.
pub fn excludes_zero(param: InputParam) -> bool {
    matches!(param, InputParam::Depth | InputParam::Velocity)
}

/// Values of `param` that enter its summary: present, and non-zero for y1
/// and V1.
pub fn usable_values(records: &[PierScourRecord], param: InputParam) -> Vec<f64> {
    records
        .iter()
        .filter_map(|r| r.get(param))
        .filter(|&v| !(excludes_zero(param) && v == 0.0))
        .collect()
}

/// min, max, mean and sample standard deviation of `param`. Zero y1 and V1
/// values are excluded per parameter, so a record with V1 = 0 still counts
/// towards the other parameters.
pub fn summarize(records: &[PierScourRecord], param: InputParam) -> Result<SummaryRow> {
    let values = usable_values(records, param);
    if values.is_empty() {
        return Err(Error::EmptyParameter(param.symbol().to_string()));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sd = if values.len() > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    Ok(SummaryRow {
        parameter: param,
        min: values.iter().copied().fold(f64::INFINITY, f64::min),
        max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        // clamp guards the last-bit rounding of the mean of equal values
        mean: mean.clamp(
            values.iter().copied().fold(f64::INFINITY, f64::min),
            values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        ),
        sd,
        count_used: values.len(),
        count_excluded: records.len() - values.len(),
    })
}

/// Summaries for the measured parameters of a dataset.
pub fn summarize_source(records: &[PierScourRecord], source: Source) -> Vec<Result<SummaryRow>> {
    summary_params(source).iter().map(|&p| summarize(records, p)).collect()
}

/// Parameters that carry measured statistics for a source.
pub fn summary_params(source: Source) -> &'static [InputParam] {
    use InputParam::*;
    match source {
        Source::Field => &[Width, Length, Depth, Velocity, Angle, D50],
        Source::Lab => &[Width, Depth, Velocity, CriticalVelocity, D50],
    }
}
