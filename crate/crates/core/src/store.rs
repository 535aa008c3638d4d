//! Snapshot persistence: one CSV file per table plus `manifest.json`.
//!
//! The manifest records the format version, the declared column types of
//! every table, row counts and a SHA-256 per file. The snapshot id is the
//! SHA-256 over the per-table digests, so identical content always gets the
//! same id and saving a loaded snapshot reproduces the files byte for byte.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::StoreError;
use crate::model::{
    CompanyId, CompanyProfile, ConnectionEdge, Diagnostic, DirectorId, DirectorProfile, Gender,
    InfLongRow, InfSeries, Ownership, SeatRecord, Year,
};
use crate::snapshot::{Snapshot, SnapshotParts};

pub const FORMAT: &str = "boardgraph-snapshot";
pub const FORMAT_VERSION: u32 = 1;
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnSpec {
    pub name: String,
    #[serde(rename = "type")]
    pub kind: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub name: String,
    pub file: String,
    pub rows: usize,
    pub sha256: String,
    pub columns: Vec<ColumnSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub format: String,
    pub format_version: u32,
    pub reference_year: Year,
    pub snapshot_id: String,
    pub tables: Vec<TableEntry>,
}

impl Manifest {
    pub fn rows(&self, table: &str) -> Option<usize> {
        self.tables.iter().find(|t| t.name == table).map(|t| t.rows)
    }
}

#[derive(Debug)]
pub struct Loaded {
    pub snapshot: Snapshot,
    pub manifest: Manifest,
}

#[derive(Debug, Serialize, Deserialize)]
struct SeatRow {
    director_id: DirectorId,
    director_name: String,
    company_id: CompanyId,
    company_name: String,
    gender: Gender,
    age: Option<u32>,
    tenure: Option<f64>,
    director_since: Option<Year>,
    ceo_since: Option<Year>,
    chairman_since: Option<Year>,
    lead_dir_since: Option<Year>,
    founder: bool,
    family: bool,
    founder_firm: bool,
    co_served: bool,
    activist: bool,
    ownership_category: Ownership,
    league_code: i64,
    sector: String,
    hq_country: String,
    inf_today: Option<f64>,
    inf_2018: Option<f64>,
    inf_2019: Option<f64>,
    inf_2020: Option<f64>,
    inf_2021: Option<f64>,
    inf_2022: Option<f64>,
}

impl From<&SeatRecord> for SeatRow {
    fn from(s: &SeatRecord) -> Self {
        let [inf_2018, inf_2019, inf_2020, inf_2021, inf_2022] = *s.inf_by_year.values();
        SeatRow {
            director_id: s.director_id,
            director_name: s.director_name.clone(),
            company_id: s.company_id,
            company_name: s.company_name.clone(),
            gender: s.gender,
            age: s.age,
            tenure: s.tenure,
            director_since: s.director_since,
            ceo_since: s.ceo_since,
            chairman_since: s.chairman_since,
            lead_dir_since: s.lead_dir_since,
            founder: s.founder,
            family: s.family,
            founder_firm: s.founder_firm,
            co_served: s.co_served,
            activist: s.activist,
            ownership_category: s.ownership_category,
            league_code: s.league_code,
            sector: s.sector.clone(),
            hq_country: s.hq_country.clone(),
            inf_today: s.inf_today,
            inf_2018,
            inf_2019,
            inf_2020,
            inf_2021,
            inf_2022,
        }
    }
}

impl From<SeatRow> for SeatRecord {
    fn from(r: SeatRow) -> Self {
        SeatRecord {
            director_id: r.director_id,
            director_name: r.director_name,
            company_id: r.company_id,
            company_name: r.company_name,
            gender: r.gender,
            age: r.age,
            tenure: r.tenure,
            director_since: r.director_since,
            ceo_since: r.ceo_since,
            chairman_since: r.chairman_since,
            lead_dir_since: r.lead_dir_since,
            founder: r.founder,
            family: r.family,
            founder_firm: r.founder_firm,
            co_served: r.co_served,
            activist: r.activist,
            ownership_category: r.ownership_category,
            league_code: r.league_code,
            sector: r.sector,
            hq_country: r.hq_country,
            inf_today: r.inf_today,
            inf_by_year: InfSeries::new([r.inf_2018, r.inf_2019, r.inf_2020, r.inf_2021, r.inf_2022]),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CountryRow {
    code: String,
    name: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct WarningRow {
    file: String,
    line: u64,
    code: crate::model::DiagCode,
    message: String,
}

const SEAT_COLUMNS: &[(&str, &str)] = &[
    ("director_id", "u64"),
    ("director_name", "string"),
    ("company_id", "u64"),
    ("company_name", "string"),
    ("gender", "enum"),
    ("age", "u32?"),
    ("tenure", "f64?"),
    ("director_since", "i32?"),
    ("ceo_since", "i32?"),
    ("chairman_since", "i32?"),
    ("lead_dir_since", "i32?"),
    ("founder", "bool"),
    ("family", "bool"),
    ("founder_firm", "bool"),
    ("co_served", "bool"),
    ("activist", "bool"),
    ("ownership_category", "enum"),
    ("league_code", "i64"),
    ("sector", "string"),
    ("hq_country", "string"),
    ("inf_today", "f64?"),
    ("inf_2018", "f64?"),
    ("inf_2019", "f64?"),
    ("inf_2020", "f64?"),
    ("inf_2021", "f64?"),
    ("inf_2022", "f64?"),
];
const DIRECTOR_COLUMNS: &[(&str, &str)] = &[
    ("director_id", "u64"),
    ("full_name", "string"),
    ("gender", "enum"),
    ("age", "u32?"),
    ("co_served", "bool"),
    ("activist", "bool"),
    ("source", "enum"),
];
const COMPANY_COLUMNS: &[(&str, &str)] = &[
    ("company_id", "u64"),
    ("name", "string"),
    ("sector", "string"),
    ("hq_country", "string"),
    ("league_code", "i64"),
    ("league", "enum"),
    ("ownership_category", "enum"),
    ("family_firm", "bool"),
];
const EDGE_COLUMNS: &[(&str, &str)] = &[
    ("company_id", "u64"),
    ("a", "u64"),
    ("b", "u64"),
    ("overlap", "f64"),
];
const INF_COLUMNS: &[(&str, &str)] = &[
    ("company_id", "u64"),
    ("director_id", "u64"),
    ("year", "i32"),
    ("inf", "f64"),
    ("league", "enum"),
    ("sector", "string"),
    ("hq_country", "string"),
];
const COUNTRY_COLUMNS: &[(&str, &str)] = &[("code", "string"), ("name", "string")];
const WARNING_COLUMNS: &[(&str, &str)] = &[
    ("file", "string"),
    ("line", "u64"),
    ("code", "enum"),
    ("message", "string"),
];

const TABLES: [(&str, &[(&str, &str)]); 7] = [
    ("seats", SEAT_COLUMNS),
    ("directors", DIRECTOR_COLUMNS),
    ("companies", COMPANY_COLUMNS),
    ("edges", EDGE_COLUMNS),
    ("inf_long", INF_COLUMNS),
    ("countries", COUNTRY_COLUMNS),
    ("warnings", WARNING_COLUMNS),
];

fn table_error(table: &str, message: impl Into<String>) -> StoreError {
    StoreError::Table {
        table: table.to_string(),
        message: message.into(),
    }
}

fn encode<T: Serialize>(table: &str, columns: &[(&str, &str)], rows: impl Iterator<Item = T>) -> Result<Vec<u8>, StoreError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(columns.iter().map(|(n, _)| *n))
        .map_err(|e| table_error(table, e.to_string()))?;
    for row in rows {
        w.serialize(row).map_err(|e| table_error(table, e.to_string()))?;
    }
    w.into_inner().map_err(|e| table_error(table, e.to_string()))
}

fn decode<T: DeserializeOwned>(table: &str, columns: &[(&str, &str)], bytes: &[u8]) -> Result<Vec<T>, StoreError> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(bytes);
    let header = r.headers().map_err(|e| table_error(table, e.to_string()))?;
    if !header.iter().eq(columns.iter().map(|(n, _)| *n)) {
        return Err(table_error(table, "column set does not match the format"));
    }
    r.deserialize()
        .map(|row| row.map_err(|e| table_error(table, e.to_string())))
        .collect()
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Table name, encoded bytes and row count.
type EncodedTable = (&'static str, Vec<u8>, usize);

/// Serialize every table in table order.
fn encode_tables(p: &SnapshotParts) -> Result<Vec<EncodedTable>, StoreError> {
    Ok(vec![
        ("seats", encode("seats", SEAT_COLUMNS, p.seats.iter().map(SeatRow::from))?, p.seats.len()),
        ("directors", encode("directors", DIRECTOR_COLUMNS, p.directors.values())?, p.directors.len()),
        ("companies", encode("companies", COMPANY_COLUMNS, p.companies.values())?, p.companies.len()),
        ("edges", encode("edges", EDGE_COLUMNS, p.edges.iter())?, p.edges.len()),
        ("inf_long", encode("inf_long", INF_COLUMNS, p.inf_long.iter())?, p.inf_long.len()),
        (
            "countries",
            encode(
                "countries",
                COUNTRY_COLUMNS,
                p.country_names.iter().map(|(code, name)| CountryRow {
                    code: code.clone(),
                    name: name.clone(),
                }),
            )?,
            p.country_names.len(),
        ),
        (
            "warnings",
            encode(
                "warnings",
                WARNING_COLUMNS,
                p.warnings.iter().map(|d| WarningRow {
                    file: d.file.clone(),
                    line: d.line,
                    code: d.code,
                    message: d.message.clone(),
                }),
            )?,
            p.warnings.len(),
        ),
    ])
}

fn build_manifest(reference_year: Year, tables: &[(&'static str, Vec<u8>, usize)]) -> Manifest {
    let mut id = Sha256::new();
    let entries = tables
        .iter()
        .zip(TABLES.iter())
        .map(|((name, bytes, rows), (_, cols))| {
            let sha256 = sha256_hex(bytes);
            id.update(sha256.as_bytes());
            TableEntry {
                name: name.to_string(),
                file: format!("{name}.csv"),
                rows: *rows,
                sha256,
                columns: cols
                    .iter()
                    .map(|(n, k)| ColumnSpec {
                        name: n.to_string(),
                        kind: k.to_string(),
                    })
                    .collect(),
            }
        })
        .collect();
    id.update(reference_year.to_string().as_bytes());
    Manifest {
        format: FORMAT.to_string(),
        format_version: FORMAT_VERSION,
        reference_year,
        snapshot_id: hex::encode(id.finalize()),
        tables: entries,
    }
}

/// Content id the snapshot would get when saved.
pub fn snapshot_id(snapshot: &Snapshot) -> Result<String, StoreError> {
    let tables = encode_tables(snapshot.parts())?;
    Ok(build_manifest(snapshot.reference_year(), &tables).snapshot_id)
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> StoreError + '_ {
    move |source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Write the snapshot into `dir` (created if needed). The manifest is
/// written last.
pub fn save(snapshot: &Snapshot, dir: &Path) -> Result<Manifest, StoreError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let tables = encode_tables(snapshot.parts())?;
    let manifest = build_manifest(snapshot.reference_year(), &tables);
    for (name, bytes, _) in &tables {
        let path = dir.join(format!("{name}.csv"));
        fs::write(&path, bytes).map_err(io_err(&path))?;
    }
    let path = dir.join(MANIFEST_FILE);
    let mut text = serde_json::to_string_pretty(&manifest)
        .map_err(|e| StoreError::Manifest(e.to_string()))?;
    text.push('\n');
    fs::write(&path, text).map_err(io_err(&path))?;
    Ok(manifest)
}

pub fn read_manifest(dir: &Path) -> Result<Manifest, StoreError> {
    let path = dir.join(MANIFEST_FILE);
    let text = fs::read_to_string(&path).map_err(io_err(&path))?;
    let manifest: Manifest =
        serde_json::from_str(&text).map_err(|e| StoreError::Manifest(e.to_string()))?;
    if manifest.format != FORMAT {
        return Err(StoreError::Manifest(format!("unexpected format {:?}", manifest.format)));
    }
    if manifest.format_version != FORMAT_VERSION {
        return Err(StoreError::Manifest(format!(
            "unsupported format version {} (expected {FORMAT_VERSION})",
            manifest.format_version
        )));
    }
    Ok(manifest)
}

/// Load and verify a snapshot: format version, per-file checksums, row
/// counts, column sets, and every snapshot invariant.
pub fn load(dir: &Path) -> Result<Loaded, StoreError> {
    let manifest = read_manifest(dir)?;
    let mut bytes: Vec<Vec<u8>> = Vec::with_capacity(TABLES.len());
    for (name, _) in TABLES {
        let entry = manifest
            .tables
            .iter()
            .find(|t| t.name == name)
            .ok_or_else(|| StoreError::Manifest(format!("table {name} not listed")))?;
        let path: PathBuf = dir.join(&entry.file);
        let data = fs::read(&path).map_err(io_err(&path))?;
        if sha256_hex(&data) != entry.sha256 {
            return Err(table_error(name, "checksum mismatch"));
        }
        bytes.push(data);
    }

    let seats: Vec<SeatRow> = decode("seats", SEAT_COLUMNS, &bytes[0])?;
    let directors: Vec<DirectorProfile> = decode("directors", DIRECTOR_COLUMNS, &bytes[1])?;
    let companies: Vec<CompanyProfile> = decode("companies", COMPANY_COLUMNS, &bytes[2])?;
    let edges: Vec<ConnectionEdge> = decode("edges", EDGE_COLUMNS, &bytes[3])?;
    let inf_long: Vec<InfLongRow> = decode("inf_long", INF_COLUMNS, &bytes[4])?;
    let countries: Vec<CountryRow> = decode("countries", COUNTRY_COLUMNS, &bytes[5])?;
    let warnings: Vec<WarningRow> = decode("warnings", WARNING_COLUMNS, &bytes[6])?;

    let counts = [
        seats.len(),
        directors.len(),
        companies.len(),
        edges.len(),
        inf_long.len(),
        countries.len(),
        warnings.len(),
    ];
    for ((name, _), n) in TABLES.iter().zip(counts) {
        if manifest.rows(name) != Some(n) {
            return Err(table_error(name, format!("manifest lists {:?} rows, file has {n}", manifest.rows(name))));
        }
    }

    let directors_len = directors.len();
    let companies_len = companies.len();
    let parts = SnapshotParts {
        seats: seats.into_iter().map(SeatRecord::from).collect(),
        directors: directors.into_iter().map(|d| (d.director_id, d)).collect(),
        companies: companies.into_iter().map(|c| (c.company_id, c)).collect(),
        edges,
        inf_long,
        country_names: countries.into_iter().map(|c| (c.code, c.name)).collect(),
        reference_year: manifest.reference_year,
        warnings: warnings
            .into_iter()
            .map(|w| Diagnostic {
                file: w.file,
                line: w.line,
                code: w.code,
                message: w.message,
            })
            .collect(),
    };
    if parts.directors.len() != directors_len {
        return Err(StoreError::Invalid("duplicate director id".into()));
    }
    if parts.companies.len() != companies_len {
        return Err(StoreError::Invalid("duplicate company id".into()));
    }
    let snapshot = Snapshot::from_parts(parts);
    let violations = snapshot.validate();
    if !violations.is_empty() {
        let shown: Vec<&str> = violations.iter().take(20).map(String::as_str).collect();
        return Err(StoreError::Invalid(format!(
            "{} violation(s): {}",
            violations.len(),
            shown.join("; ")
        )));
    }
    Ok(Loaded { snapshot, manifest })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{build_snapshot, HeaderMapping};

    const DIF: &str = "DIRECTOR_ID,DIRECTOR_NAME,ISSUER_ID,ISSUER_NAME,GENDER,AGE,TENURE,MKTCAP_LEAGUE,IND_SEC,HQ_COUNTRY,INF_TODAY,INF_2018,INF_2019,INF_2020,INF_2021,INF_2022\n\
        1,\"Doe, Jane\",10,Acme,Female,50,3.5,4,Energy,US,12.25,1,2,,4,5\n\
        2,John Roe,10,Acme,Male,61,0.1,4,Energy,US,,,,,,\n";
    const BCE: &str = "ISSUER_ID,ISSUER_NAME,BM_N1_ID,BM_N1_NAME,BM_N2_ID,BM_N2_NAME,OVERLAP_YRS\n\
        10,Acme,2,John Roe,1,\"Doe, Jane\",0.1\n\
        11,Other,3,Ghost,1,\"Doe, Jane\",7.3\n";

    #[test]
    fn save_load_save_is_byte_identical() {
        let snap = build_snapshot(DIF.as_bytes(), BCE.as_bytes(), 2022, &HeaderMapping::default()).unwrap();
        let d1 = tempfile::tempdir().unwrap();
        let d2 = tempfile::tempdir().unwrap();
        let m1 = save(&snap, d1.path()).unwrap();
        let loaded = load(d1.path()).unwrap();
        assert_eq!(loaded.manifest, m1);
        let m2 = save(&loaded.snapshot, d2.path()).unwrap();
        assert_eq!(m1, m2);
        for (name, _) in TABLES {
            let f = format!("{name}.csv");
            assert_eq!(fs::read(d1.path().join(&f)).unwrap(), fs::read(d2.path().join(&f)).unwrap(), "{f}");
        }
        assert_eq!(loaded.snapshot.seats(), snap.seats());
        assert_eq!(loaded.snapshot.edges(), snap.edges());
        assert_eq!(snapshot_id(&snap).unwrap(), m1.snapshot_id);
    }

    #[test]
    fn corrupt_file_is_rejected() {
        let snap = build_snapshot(DIF.as_bytes(), BCE.as_bytes(), 2022, &HeaderMapping::default()).unwrap();
        let d = tempfile::tempdir().unwrap();
        save(&snap, d.path()).unwrap();
        let path = d.path().join("edges.csv");
        let mut text = fs::read_to_string(&path).unwrap();
        text.push_str("10,1,999,1.0\n");
        fs::write(&path, text).unwrap();
        assert!(matches!(load(d.path()), Err(StoreError::Table { .. })));
    }

    #[test]
    fn missing_manifest_is_io_error() {
        let d = tempfile::tempdir().unwrap();
        assert!(matches!(load(d.path()), Err(StoreError::Io { .. })));
    }
}
