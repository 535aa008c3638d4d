//! Domain types shared by ingest, graph and analytics.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Calendar year.
pub type Year = i32;

/// First and last year of the per-seat influence series carried by the
/// factors file.
pub const INF_FIRST_YEAR: Year = 2018;
pub const INF_LAST_YEAR: Year = 2022;

/// Completed years used for the rolling average and the long-form table.
/// The final year of the series is partial and is left out.
pub const INF_COMPLETE_YEARS: [Year; 4] = [2018, 2019, 2020, 2021];

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct DirectorId(pub u64);

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct CompanyId(pub u64);

impl fmt::Display for DirectorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Display for CompanyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Ordering follows the text form (`Female` < `Male`), with `Unknown`
/// lowest so that any known value wins a max-fold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Gender {
    Unknown,
    Female,
    Male,
}

impl Gender {
    pub fn parse(raw: &str) -> Gender {
        match raw.trim().to_ascii_lowercase().as_str() {
            "female" | "f" | "woman" => Gender::Female,
            "male" | "m" | "man" => Gender::Male,
            _ => Gender::Unknown,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Gender::Female => "Female",
            Gender::Male => "Male",
            Gender::Unknown => "Unknown",
        }
    }

    pub fn is_known(self) -> bool {
        self != Gender::Unknown
    }
}

/// Ordering follows the printed text (`Controlled` < `Principal Shareholder`
/// < `Widely Held`), `Unknown` lowest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Ownership {
    Unknown,
    Controlled,
    PrincipalShareholder,
    WidelyHeld,
}

impl Ownership {
    pub fn parse(raw: &str) -> Ownership {
        let key: String = raw
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_lowercase())
            .collect();
        match key.as_str() {
            "controlled" => Ownership::Controlled,
            "principalshareholder" => Ownership::PrincipalShareholder,
            "widelyheld" => Ownership::WidelyHeld,
            _ => Ownership::Unknown,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Ownership::Controlled => "Controlled",
            Ownership::PrincipalShareholder => "Principal Shareholder",
            Ownership::WidelyHeld => "Widely Held",
            Ownership::Unknown => "Unknown",
        }
    }
}

/// Market-cap bucket: Small ≤ $2B, Medium $2–10B, Large $10–200B, Mega ≥ $200B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum League {
    Small,
    Medium,
    Large,
    Mega,
    Unknown,
}

impl League {
    /// Decode the numeric league code of the factors file. Total: anything
    /// outside 1..=4 is `Unknown`.
    pub fn from_code(code: i64) -> League {
        match code {
            1 => League::Small,
            2 => League::Medium,
            3 => League::Large,
            4 => League::Mega,
            _ => League::Unknown,
        }
    }

    pub fn parse(raw: &str) -> Option<League> {
        match raw.trim().to_ascii_lowercase().as_str() {
            "small" | "1" => Some(League::Small),
            "medium" | "2" => Some(League::Medium),
            "large" | "3" => Some(League::Large),
            "mega" | "4" => Some(League::Mega),
            "unknown" => Some(League::Unknown),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            League::Small => "Small",
            League::Medium => "Medium",
            League::Large => "Large",
            League::Mega => "Mega",
            League::Unknown => "Unknown",
        }
    }
}

/// Free-function form of [`League::from_code`].
pub fn league_description(code: i64) -> League {
    League::from_code(code)
}

/// Per-seat influence values for 2018 through 2022, each optional.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct InfSeries([Option<f64>; 5]);

impl InfSeries {
    pub fn new(values: [Option<f64>; 5]) -> Self {
        InfSeries(values)
    }

    pub fn get(&self, year: Year) -> Option<f64> {
        if (INF_FIRST_YEAR..=INF_LAST_YEAR).contains(&year) {
            self.0[(year - INF_FIRST_YEAR) as usize]
        } else {
            None
        }
    }

    pub fn set(&mut self, year: Year, value: Option<f64>) {
        if (INF_FIRST_YEAR..=INF_LAST_YEAR).contains(&year) {
            self.0[(year - INF_FIRST_YEAR) as usize] = value;
        }
    }

    pub fn values(&self) -> &[Option<f64>; 5] {
        &self.0
    }

    /// `(year, value)` for every present value in the completed years.
    pub fn complete_years(&self) -> impl Iterator<Item = (Year, f64)> + '_ {
        INF_COMPLETE_YEARS
            .iter()
            .filter_map(move |&y| self.get(y).map(|v| (y, v)))
    }
}

/// One director × company row of the factors file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeatRecord {
    pub director_id: DirectorId,
    pub director_name: String,
    pub company_id: CompanyId,
    pub company_name: String,
    pub gender: Gender,
    pub age: Option<u32>,
    pub tenure: Option<f64>,
    pub director_since: Option<Year>,
    pub ceo_since: Option<Year>,
    pub chairman_since: Option<Year>,
    pub lead_dir_since: Option<Year>,
    pub founder: bool,
    pub family: bool,
    pub founder_firm: bool,
    pub co_served: bool,
    pub activist: bool,
    pub ownership_category: Ownership,
    pub league_code: i64,
    pub sector: String,
    pub hq_country: String,
    pub inf_today: Option<f64>,
    pub inf_by_year: InfSeries,
}

impl SeatRecord {
    /// Blank seat with only the keys and names filled in.
    pub fn new(
        director_id: DirectorId,
        director_name: impl Into<String>,
        company_id: CompanyId,
        company_name: impl Into<String>,
    ) -> Self {
        SeatRecord {
            director_id,
            director_name: director_name.into(),
            company_id,
            company_name: company_name.into(),
            gender: Gender::Unknown,
            age: None,
            tenure: None,
            director_since: None,
            ceo_since: None,
            chairman_since: None,
            lead_dir_since: None,
            founder: false,
            family: false,
            founder_firm: false,
            co_served: false,
            activist: false,
            ownership_category: Ownership::Unknown,
            league_code: 0,
            sector: String::new(),
            hq_country: String::new(),
            inf_today: None,
            inf_by_year: InfSeries::default(),
        }
    }

    pub fn is_ceo(&self) -> bool {
        self.ceo_since.is_some()
    }

    pub fn is_chair(&self) -> bool {
        self.chairman_since.is_some()
    }
}

/// Mean of the present values among the four completed years; `None` when
/// all four are missing. `inf_today` and the partial final year are ignored.
pub fn inf_prev4_avg(seat: &SeatRecord) -> Option<f64> {
    let (sum, n) = seat
        .inf_by_year
        .complete_years()
        .fold((0.0, 0usize), |(s, n), (_, v)| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ProfileSource {
    FromFactors,
    EdgesOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectorProfile {
    pub director_id: DirectorId,
    pub full_name: String,
    pub gender: Gender,
    pub age: Option<u32>,
    pub co_served: bool,
    pub activist: bool,
    pub source: ProfileSource,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompanyProfile {
    pub company_id: CompanyId,
    pub name: String,
    pub sector: String,
    pub hq_country: String,
    pub league_code: i64,
    pub league: League,
    pub ownership_category: Ownership,
    /// True when any seat at the company carries the family flag.
    pub family_firm: bool,
}

/// One line of the connections file, before normalization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawEdgeRow {
    pub company_id: CompanyId,
    pub company_name: String,
    pub n1_id: DirectorId,
    pub n1_name: String,
    pub n2_id: DirectorId,
    pub n2_name: String,
    pub overlap: f64,
    /// Physical line in the source file (header is line 1); 0 when synthetic.
    #[serde(default)]
    pub line: u64,
}

/// Normalized, undirected co-service tie at one company. `a < b` always.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConnectionEdge {
    pub company_id: CompanyId,
    pub a: DirectorId,
    pub b: DirectorId,
    pub overlap: f64,
}

impl ConnectionEdge {
    pub fn other(&self, id: DirectorId) -> DirectorId {
        if self.a == id {
            self.b
        } else {
            self.a
        }
    }

    pub fn touches(&self, id: DirectorId) -> bool {
        self.a == id || self.b == id
    }
}

/// One transposed (seat, year) influence value with company attributes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfLongRow {
    pub company_id: CompanyId,
    pub director_id: DirectorId,
    pub year: Year,
    pub inf: f64,
    pub league: League,
    pub sector: String,
    pub hq_country: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DiagCode {
    BadField,
    MissingId,
    BadRecord,
    DuplicateSeat,
    FutureYear,
    NegativeOverlap,
    SelfLoop,
    DuplicateEdge,
    NameConflict,
    GenderConflict,
    FlagConflict,
    CompanyFieldMismatch,
    UnknownCountry,
}

impl DiagCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagCode::BadField => "BAD_FIELD",
            DiagCode::MissingId => "MISSING_ID",
            DiagCode::BadRecord => "BAD_RECORD",
            DiagCode::DuplicateSeat => "DUPLICATE_SEAT",
            DiagCode::FutureYear => "FUTURE_YEAR",
            DiagCode::NegativeOverlap => "NEGATIVE_OVERLAP",
            DiagCode::SelfLoop => "SELF_LOOP",
            DiagCode::DuplicateEdge => "DUPLICATE_EDGE",
            DiagCode::NameConflict => "NAME_CONFLICT",
            DiagCode::GenderConflict => "GENDER_CONFLICT",
            DiagCode::FlagConflict => "FLAG_CONFLICT",
            DiagCode::CompanyFieldMismatch => "COMPANY_FIELD_MISMATCH",
            DiagCode::UnknownCountry => "UNKNOWN_COUNTRY",
        }
    }
}

/// One anomaly found while ingesting. `line` is 0 for anomalies that are not
/// tied to a single physical line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub file: String,
    pub line: u64,
    pub code: DiagCode,
    pub message: String,
}

impl Diagnostic {
    pub fn new(file: &str, line: u64, code: DiagCode, message: impl Into<String>) -> Self {
        Diagnostic {
            file: file.to_string(),
            line,
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: {}: {}",
            self.file,
            self.line,
            self.code.as_str(),
            self.message
        )
    }
}
