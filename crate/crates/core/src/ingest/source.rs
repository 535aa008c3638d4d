//! CSV readers for the director-factors (DIF) and board-connections (BCE)
//! files.
//!
//! Headers are matched case-insensitively against the canonical column set.
//! A [`HeaderMapping`] renames canonical columns for inputs that drift from
//! it. Rows that fail to parse are skipped and reported; only I/O failures
//! and missing required columns abort.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::io::Read;

use csv::ByteRecord;

use crate::error::IngestError;
use crate::model::{
    CompanyId, DiagCode, Diagnostic, DirectorId, Gender, InfSeries, Ownership, RawEdgeRow,
    SeatRecord, Year, INF_FIRST_YEAR,
};

pub const DIF_FILE: &str = "dif";
pub const BCE_FILE: &str = "bce";

pub const DIF_COLUMNS: [&str; 26] = [
    "DIRECTOR_ID",
    "DIRECTOR_NAME",
    "ISSUER_ID",
    "ISSUER_NAME",
    "GENDER",
    "AGE",
    "TENURE",
    "DIRECTOR_SINCE",
    "CEO_SINCE",
    "CHAIRMAN_SINCE",
    "LEAD_DIR_SINCE",
    "FOUNDER",
    "FAMILY",
    "FOUNDER_FIRM",
    "CO_SERVED",
    "ACTIVIST",
    "OWNERSHIP_CATEGORY",
    "MKTCAP_LEAGUE",
    "IND_SEC",
    "HQ_COUNTRY",
    "INF_TODAY",
    "INF_2018",
    "INF_2019",
    "INF_2020",
    "INF_2021",
    "INF_2022",
];

const DIF_REQUIRED: [&str; 4] = ["DIRECTOR_ID", "DIRECTOR_NAME", "ISSUER_ID", "ISSUER_NAME"];

pub const BCE_COLUMNS: [&str; 7] = [
    "ISSUER_ID",
    "ISSUER_NAME",
    "BM_N1_ID",
    "BM_N1_NAME",
    "BM_N2_ID",
    "BM_N2_NAME",
    "OVERLAP_YRS",
];

/// Canonical column name → header text actually present in a file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HeaderMapping {
    renames: BTreeMap<String, String>,
}

impl HeaderMapping {
    /// Parse `CANONICAL=Actual Header` lines. Blank lines and `#` comments
    /// are ignored. Unknown canonical names are rejected.
    pub fn parse(text: &str) -> Result<Self, IngestError> {
        let mut renames = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(IngestError::Mapping {
                    line: idx + 1,
                    message: "expected key=value".into(),
                });
            };
            let key = key.trim().to_ascii_uppercase();
            if !DIF_COLUMNS.contains(&key.as_str()) && !BCE_COLUMNS.contains(&key.as_str()) {
                return Err(IngestError::Mapping {
                    line: idx + 1,
                    message: format!("unknown canonical column {key}"),
                });
            }
            renames.insert(key, value.trim().to_string());
        }
        Ok(HeaderMapping { renames })
    }

    pub fn insert(&mut self, canonical: &str, actual: &str) {
        self.renames
            .insert(canonical.to_ascii_uppercase(), actual.to_string());
    }

    fn header_for<'a>(&'a self, canonical: &'a str) -> &'a str {
        self.renames
            .get(canonical)
            .map(String::as_str)
            .unwrap_or(canonical)
    }
}

/// Rows parsed from one file plus the anomalies found along the way.
#[derive(Debug, Clone, Default)]
pub struct Parsed<T> {
    pub rows: Vec<T>,
    pub diagnostics: Vec<Diagnostic>,
    /// Non-empty data lines seen after the header.
    pub physical_rows: usize,
    pub skipped: usize,
}

struct Columns {
    index: BTreeMap<&'static str, usize>,
    width: usize,
}

impl Columns {
    fn resolve(
        file: &str,
        headers: &ByteRecord,
        canonical: &[&'static str],
        required: &[&'static str],
        mapping: &HeaderMapping,
    ) -> Result<Self, IngestError> {
        let names: Vec<String> = headers
            .iter()
            .map(|h| {
                String::from_utf8_lossy(h)
                    .trim_start_matches('\u{feff}')
                    .trim()
                    .to_ascii_uppercase()
            })
            .collect();
        let mut index = BTreeMap::new();
        for &col in canonical {
            let wanted = mapping.header_for(col).trim().to_ascii_uppercase();
            if let Some(pos) = names.iter().position(|n| *n == wanted) {
                index.insert(col, pos);
            }
        }
        for &col in required {
            if !index.contains_key(col) {
                return Err(IngestError::MissingColumn {
                    file: file.to_string(),
                    column: col.to_string(),
                });
            }
        }
        Ok(Columns {
            index,
            width: names.len(),
        })
    }
}

/// Field-level failure; the row is skipped with this as its diagnostic.
struct FieldError {
    code: DiagCode,
    message: String,
}

fn bad(column: &str, value: &str, what: &str) -> FieldError {
    FieldError {
        code: DiagCode::BadField,
        message: format!("{column}: {what}, got {value:?}"),
    }
}

struct Row<'r> {
    record: &'r ByteRecord,
    columns: &'r Columns,
}

impl<'r> Row<'r> {
    fn text(&self, column: &str) -> Result<&'r str, FieldError> {
        let Some(&pos) = self.columns.index.get(column) else {
            return Ok("");
        };
        let raw = self.record.get(pos).unwrap_or_default();
        std::str::from_utf8(raw)
            .map(str::trim)
            .map_err(|_| FieldError {
                code: DiagCode::BadRecord,
                message: format!("{column}: invalid UTF-8"),
            })
    }

    fn opt_text(&self, column: &str) -> Result<Option<&'r str>, FieldError> {
        let t = self.text(column)?;
        Ok((!is_missing(t)).then_some(t))
    }

    fn id(&self, column: &str) -> Result<u64, FieldError> {
        let t = self.text(column)?;
        if t.is_empty() {
            return Err(FieldError {
                code: DiagCode::MissingId,
                message: format!("{column}: missing"),
            });
        }
        match t.parse::<u64>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(bad(column, t, "expected a positive integer id")),
        }
    }

    fn number(&self, column: &str) -> Result<Option<f64>, FieldError> {
        let Some(t) = self.opt_text(column)? else {
            return Ok(None);
        };
        match t.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Some(v)),
            _ => Err(bad(column, t, "expected a number")),
        }
    }

    fn integer(&self, column: &str) -> Result<Option<i64>, FieldError> {
        let Some(t) = self.opt_text(column)? else {
            return Ok(None);
        };
        t.parse::<i64>()
            .map(Some)
            .map_err(|_| bad(column, t, "expected an integer"))
    }

    fn flag(&self, column: &str) -> Result<bool, FieldError> {
        let t = self.text(column)?;
        parse_bool(t).ok_or_else(|| bad(column, t, "expected T/F, Yes/No or true/false"))
    }
}

fn is_missing(t: &str) -> bool {
    t.is_empty()
        || t.eq_ignore_ascii_case("na")
        || t.eq_ignore_ascii_case("n/a")
        || t.eq_ignore_ascii_case("null")
}

/// `T`/`F`, `Yes`/`No`, `true`/`false` (any case); empty is false.
pub fn parse_bool(raw: &str) -> Option<bool> {
    match raw.trim().to_ascii_lowercase().as_str() {
        "" | "f" | "no" | "false" => Some(false),
        "t" | "yes" | "true" => Some(true),
        _ => None,
    }
}

fn open_reader<R: Read>(
    file: &str,
    source: R,
) -> Result<(csv::Reader<R>, ByteRecord), IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .has_headers(true)
        .from_reader(source);
    let headers = reader.byte_headers().map_err(|e| csv_fatal(file, e))?.clone();
    if headers.is_empty() || headers.iter().all(|h| h.is_empty()) {
        return Err(IngestError::Header {
            file: file.to_string(),
            message: "no header row".into(),
        });
    }
    Ok((reader, headers))
}

fn csv_fatal(file: &str, err: csv::Error) -> IngestError {
    let message = err.to_string();
    match err.into_kind() {
        csv::ErrorKind::Io(source) => IngestError::Io {
            file: file.to_string(),
            source,
        },
        _ => IngestError::Header {
            file: file.to_string(),
            message,
        },
    }
}

/// Drive a CSV reader row by row, converting each record with `convert`.
fn parse_rows<R: Read, T>(
    file: &str,
    source: R,
    canonical: &[&'static str],
    required: &[&'static str],
    mapping: &HeaderMapping,
    mut convert: impl FnMut(&Row<'_>, u64, &mut Vec<Diagnostic>) -> Result<T, FieldError>,
) -> Result<Parsed<T>, IngestError> {
    let (mut reader, headers) = open_reader(file, source)?;
    let columns = Columns::resolve(file, &headers, canonical, required, mapping)?;
    let mut out = Parsed {
        rows: Vec::new(),
        diagnostics: Vec::new(),
        physical_rows: 0,
        skipped: 0,
    };
    let mut record = ByteRecord::new();
    loop {
        match reader.read_byte_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) => {
                // The csv reader only surfaces I/O failures for flexible byte records.
                return Err(csv_fatal(file, e));
            }
        }
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        out.physical_rows += 1;
        if record.len() != columns.width {
            out.skipped += 1;
            out.diagnostics.push(Diagnostic::new(
                file,
                line,
                DiagCode::BadRecord,
                format!(
                    "expected {} fields, found {}",
                    columns.width,
                    record.len()
                ),
            ));
            continue;
        }
        let row = Row {
            record: &record,
            columns: &columns,
        };
        match convert(&row, line, &mut out.diagnostics) {
            Ok(v) => out.rows.push(v),
            Err(e) => {
                out.skipped += 1;
                out.diagnostics
                    .push(Diagnostic::new(file, line, e.code, e.message));
            }
        }
    }
    Ok(out)
}

/// Parse the director-factors file. Role "since" years later than
/// `reference_year` are dropped from the row with a diagnostic. Repeated
/// (director, company) pairs keep their first occurrence.
pub fn parse_dif<R: Read>(
    source: R,
    reference_year: Year,
    mapping: &HeaderMapping,
) -> Result<Parsed<SeatRecord>, IngestError> {
    let mut seen = HashMap::new();
    let mut parsed = parse_rows(
        DIF_FILE,
        source,
        &DIF_COLUMNS,
        &DIF_REQUIRED,
        mapping,
        |row, line, diags| {
            let director_id = DirectorId(row.id("DIRECTOR_ID")?);
            let company_id = CompanyId(row.id("ISSUER_ID")?);
            let mut seat = SeatRecord::new(
                director_id,
                row.text("DIRECTOR_NAME")?,
                company_id,
                row.text("ISSUER_NAME")?,
            );
            seat.gender = Gender::parse(row.text("GENDER")?);
            seat.age = match row.integer("AGE")? {
                None => None,
                Some(a) if (0..=150).contains(&a) => Some(a as u32),
                Some(a) => return Err(bad("AGE", &a.to_string(), "out of range")),
            };
            seat.tenure = match row.number("TENURE")? {
                Some(t) if t < 0.0 => return Err(bad("TENURE", &t.to_string(), "negative")),
                t => t,
            };
            let mut year = |column: &'static str| -> Result<Option<Year>, FieldError> {
                match row.integer(column)? {
                    None => Ok(None),
                    Some(y) if y > reference_year as i64 => {
                        diags.push(Diagnostic::new(
                            DIF_FILE,
                            line,
                            DiagCode::FutureYear,
                            format!("{column}: {y} is after reference year {reference_year}; dropped"),
                        ));
                        Ok(None)
                    }
                    Some(y) => Year::try_from(y)
                        .map(Some)
                        .map_err(|_| bad(column, &y.to_string(), "out of range")),
                }
            };
            seat.director_since = year("DIRECTOR_SINCE")?;
            seat.ceo_since = year("CEO_SINCE")?;
            seat.chairman_since = year("CHAIRMAN_SINCE")?;
            seat.lead_dir_since = year("LEAD_DIR_SINCE")?;
            seat.founder = row.flag("FOUNDER")?;
            seat.family = row.flag("FAMILY")?;
            seat.founder_firm = row.flag("FOUNDER_FIRM")?;
            seat.co_served = row.flag("CO_SERVED")?;
            seat.activist = row.flag("ACTIVIST")?;
            seat.ownership_category = Ownership::parse(row.text("OWNERSHIP_CATEGORY")?);
            seat.league_code = row.integer("MKTCAP_LEAGUE")?.unwrap_or(0);
            seat.sector = row.text("IND_SEC")?.to_string();
            seat.hq_country = row.text("HQ_COUNTRY")?.to_ascii_uppercase();
            seat.inf_today = row.number("INF_TODAY")?;
            let mut series = InfSeries::default();
            for (i, col) in ["INF_2018", "INF_2019", "INF_2020", "INF_2021", "INF_2022"]
                .into_iter()
                .enumerate()
            {
                series.set(INF_FIRST_YEAR + i as Year, row.number(col)?);
            }
            seat.inf_by_year = series;

            match seen.entry((director_id, company_id)) {
                Entry::Occupied(first) => Err(FieldError {
                    code: DiagCode::DuplicateSeat,
                    message: format!(
                        "director {director_id} at company {company_id} already listed on line {}; row ignored",
                        first.get()
                    ),
                }),
                Entry::Vacant(slot) => {
                    slot.insert(line);
                    Ok(seat)
                }
            }
        },
    )?;
    parsed.rows.shrink_to_fit();
    Ok(parsed)
}

/// Parse the board-connections file. Negative overlaps are skipped.
pub fn parse_bce<R: Read>(
    source: R,
    mapping: &HeaderMapping,
) -> Result<Parsed<RawEdgeRow>, IngestError> {
    parse_rows(
        BCE_FILE,
        source,
        &BCE_COLUMNS,
        &BCE_COLUMNS,
        mapping,
        |row, line, _| {
            let company_id = CompanyId(row.id("ISSUER_ID")?);
            let n1_id = DirectorId(row.id("BM_N1_ID")?);
            let n2_id = DirectorId(row.id("BM_N2_ID")?);
            let overlap = row.number("OVERLAP_YRS")?.ok_or_else(|| FieldError {
                code: DiagCode::BadField,
                message: "OVERLAP_YRS: missing".into(),
            })?;
            if overlap < 0.0 {
                return Err(FieldError {
                    code: DiagCode::NegativeOverlap,
                    message: format!("OVERLAP_YRS: negative overlap {overlap}"),
                });
            }
            Ok(RawEdgeRow {
                company_id,
                company_name: row.text("ISSUER_NAME")?.to_string(),
                n1_id,
                n1_name: row.text("BM_N1_NAME")?.to_string(),
                n2_id,
                n2_name: row.text("BM_N2_NAME")?.to_string(),
                overlap,
                line,
            })
        },
    )
}
