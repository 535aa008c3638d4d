//! Seeded generator for schema-compatible factors/connections corpora with
//! injectable data defects and a ground-truth manifest.
//!
//! Every same-board director pair gets one connection row whose overlap is
//! the shorter of the two tenures, rounded to 0.1 year. The truth manifest
//! is computed from the generator's own board model, independently of the
//! ingest code, so ingest results can be scored exactly.

use std::collections::{BTreeSet, HashSet};
use std::fs;
use std::path::Path;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Pareto};
use serde::{Deserialize, Serialize};

use crate::error::SynthConfigError;
use crate::ingest::{BCE_COLUMNS, DIF_COLUMNS};
use crate::model::{DirectorId, Year};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AnomalyRates {
    /// Per connection row: probability of an extra identical row.
    pub duplicate_edge: f64,
    /// Per connection row: probability the pair is written larger id first.
    pub swapped_nodes: f64,
    /// Per director: probability of being left out of the factors file.
    pub edges_only_director: f64,
    /// Per company with two or more factor rows: probability that one
    /// non-first row disagrees on sector, league or country.
    pub mismatched_company_fields: f64,
    /// Per connection row: probability of an extra row pairing a director
    /// with itself.
    pub self_loop: f64,
}

impl AnomalyRates {
    pub const NAMES: [&'static str; 5] = [
        "duplicate_edge",
        "swapped_nodes",
        "edges_only_director",
        "mismatched_company_fields",
        "self_loop",
    ];

    /// Set a rate by name.
    pub fn set(&mut self, name: &str, rate: f64) -> Result<(), SynthConfigError> {
        let slot = match name {
            "duplicate_edge" => &mut self.duplicate_edge,
            "swapped_nodes" => &mut self.swapped_nodes,
            "edges_only_director" => &mut self.edges_only_director,
            "mismatched_company_fields" => &mut self.mismatched_company_fields,
            "self_loop" => &mut self.self_loop,
            other => {
                return Err(SynthConfigError {
                    field: format!("anomaly_rates.{other}"),
                    message: format!("unknown anomaly; expected one of {}", Self::NAMES.join(", ")),
                })
            }
        };
        *slot = rate;
        Ok(())
    }

    fn iter(&self) -> [(&'static str, f64); 5] {
        [
            ("duplicate_edge", self.duplicate_edge),
            ("swapped_nodes", self.swapped_nodes),
            ("edges_only_director", self.edges_only_director),
            ("mismatched_company_fields", self.mismatched_company_fields),
            ("self_loop", self.self_loop),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub seed: u64,
    pub companies: usize,
    pub board_min: usize,
    pub board_max: usize,
    pub multi_seat_fraction: f64,
    pub female_fraction: f64,
    pub anomaly_rates: AnomalyRates,
    pub inf_normalized_per_company: bool,
    pub reference_year: Year,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            seed: 1,
            companies: 3,
            board_min: 4,
            board_max: 4,
            multi_seat_fraction: 0.0,
            female_fraction: 0.3,
            anomaly_rates: AnomalyRates::default(),
            inf_normalized_per_company: true,
            reference_year: 2022,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<(), SynthConfigError> {
        let err = |field: &str, message: &str| SynthConfigError {
            field: field.to_string(),
            message: message.to_string(),
        };
        if self.companies < 1 {
            return Err(err("companies", "must be at least 1"));
        }
        if self.board_min < 1 {
            return Err(err("board_min", "must be at least 1"));
        }
        if self.board_min > self.board_max {
            return Err(err("board_max", "must be >= board_min"));
        }
        let fractions = [
            ("multi_seat_fraction", self.multi_seat_fraction),
            ("female_fraction", self.female_fraction),
        ];
        let rates = self.anomaly_rates.iter();
        for (name, v) in fractions.iter().chain(rates.iter()) {
            if !(0.0..=1.0).contains(v) {
                return Err(err(name, "must be within [0, 1]"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TruthCounts {
    pub dif_rows: usize,
    pub bce_rows: usize,
    /// Cleaned seats; equals `dif_rows` since the generator never repeats a seat.
    pub seats: usize,
    /// Distinct directors after cleaning, edges-only stubs included.
    pub directors: usize,
    pub directors_from_factors: usize,
    pub edges_only_directors: usize,
    pub companies: usize,
    /// Normalized (company, pair) edges.
    pub edges: usize,
    pub inf_long_rows: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct InjectedAnomalies {
    pub duplicate_edge_lines: Vec<u64>,
    pub swapped_node_lines: Vec<u64>,
    pub self_loop_lines: Vec<u64>,
    /// Lines of the factors file carrying a disagreeing company field.
    pub mismatched_company_lines: Vec<u64>,
    /// Directors present only in the connections file.
    pub edges_only_director_ids: Vec<DirectorId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Truth {
    pub config: SynthConfig,
    pub counts: TruthCounts,
    pub injected: InjectedAnomalies,
}

#[derive(Debug, Clone)]
pub struct SynthOutput {
    pub dif_csv: Vec<u8>,
    pub bce_csv: Vec<u8>,
    pub truth: Truth,
}

impl SynthOutput {
    /// Write `dif.csv`, `bce.csv` and `truth.json` into `dir`.
    pub fn write_to_dir(&self, dir: &Path) -> std::io::Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("dif.csv"), &self.dif_csv)?;
        fs::write(dir.join("bce.csv"), &self.bce_csv)?;
        let mut truth = serde_json::to_string_pretty(&self.truth).map_err(std::io::Error::other)?;
        truth.push('\n');
        fs::write(dir.join("truth.json"), truth)
    }
}

const SYLLABLES: [&str; 24] = [
    "ka", "lo", "mi", "ra", "ten", "vor", "an", "el", "is", "dor", "bra", "sel", "mon", "tri",
    "gal", "hun", "wex", "po", "ru", "fen", "sa", "lin", "ot", "mar",
];
const COMPANY_SUFFIXES: [&str; 6] = ["Holdings", "Corporation", "Group", "AG", "Inc.", "PLC"];
const SECTORS: [&str; 11] = [
    "Communication Services",
    "Consumer Discretionary",
    "Consumer Staples",
    "Energy",
    "Financials",
    "Health Care",
    "Industrials",
    "Information Technology",
    "Materials",
    "Real Estate",
    "Utilities",
];
const COUNTRIES: [&str; 20] = [
    "US", "US", "US", "US", "US", "US", "GB", "GB", "DE", "FR", "JP", "JP", "KR", "CN", "CA",
    "AU", "NO", "SE", "CH", "NL",
];
const OWNERSHIP: [&str; 3] = ["Controlled", "Principal Shareholder", "Widely Held"];

fn word(rng: &mut ChaCha8Rng, syllables: usize) -> String {
    let mut s: String = (0..syllables)
        .map(|_| *SYLLABLES.choose(rng).expect("non-empty"))
        .collect();
    if let Some(first) = s.get_mut(0..1) {
        first.make_ascii_uppercase();
    }
    s
}

fn round_to(v: f64, places: i32) -> f64 {
    let f = 10f64.powi(places);
    (v * f).round() / f
}

struct Director {
    id: DirectorId,
    name: String,
    female: bool,
    age: u32,
    co_served: bool,
    activist: bool,
    withheld: bool,
}

struct Seat {
    director: usize,
    tenure: f64,
    ceo_since: Option<Year>,
    chairman_since: Option<Year>,
    lead_dir_since: Option<Year>,
    founder: bool,
    family: bool,
    inf_today: f64,
    inf_years: [f64; 5],
}

struct Company {
    id: u64,
    name: String,
    sector: &'static str,
    country: &'static str,
    league: i64,
    ownership: &'static str,
    founder_firm: bool,
    board: Vec<Seat>,
}

/// Generate a corpus. Identical configs give byte-identical output.
pub fn generate(config: &SynthConfig) -> Result<SynthOutput, SynthConfigError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let year = config.reference_year;
    let pareto = Pareto::new(1.0, 1.3).expect("valid pareto");
    let jitter = Normal::new(0.0, 0.05).expect("valid normal");

    let mut directors: Vec<Director> = Vec::new();
    let mut companies: Vec<Company> = Vec::with_capacity(config.companies);
    for ci in 0..config.companies {
        let size = rng.random_range(config.board_min..=config.board_max);
        let family_firm = rng.random_bool(0.15);
        let mut company = Company {
            id: ci as u64 + 1,
            name: format!(
                "{} {}",
                word(&mut rng, 3),
                COMPANY_SUFFIXES.choose(&mut rng).expect("non-empty")
            ),
            sector: SECTORS.choose(&mut rng).expect("non-empty"),
            country: COUNTRIES.choose(&mut rng).expect("non-empty"),
            league: rng.random_range(1..=4),
            ownership: OWNERSHIP.choose(&mut rng).expect("non-empty"),
            founder_firm: rng.random_bool(0.1),
            board: Vec::with_capacity(size),
        };
        let mut on_board: HashSet<usize> = HashSet::new();
        for slot in 0..size {
            let mut pick = None;
            if !directors.is_empty() && rng.random_bool(config.multi_seat_fraction) {
                for _ in 0..8 {
                    let cand = rng.random_range(0..directors.len());
                    if !on_board.contains(&cand) {
                        pick = Some(cand);
                        break;
                    }
                }
            }
            let director = pick.unwrap_or_else(|| {
                let idx = directors.len();
                directors.push(Director {
                    id: DirectorId(10_000 + idx as u64),
                    name: format!("{} {}", word(&mut rng, 2), word(&mut rng, 3)),
                    female: rng.random_bool(config.female_fraction),
                    age: rng.random_range(35..=85),
                    co_served: rng.random_bool(0.1),
                    activist: rng.random_bool(0.02),
                    withheld: rng.random_bool(config.anomaly_rates.edges_only_director),
                });
                idx
            });
            on_board.insert(director);
            let tenure = rng.random_range(0..=250) as f64 / 10.0;
            let served = tenure.floor() as Year;
            let raw_inf: f64 = pareto.sample(&mut rng);
            company.board.push(Seat {
                director,
                tenure,
                ceo_since: (slot == 0 && rng.random_bool(0.8))
                    .then(|| year - rng.random_range(0..=served)),
                chairman_since: (slot == 1.min(size - 1) && rng.random_bool(0.9))
                    .then(|| year - rng.random_range(0..=served)),
                lead_dir_since: (slot == 2 && rng.random_bool(0.3))
                    .then(|| year - rng.random_range(0..=served)),
                founder: rng.random_bool(0.03),
                family: family_firm && rng.random_bool(0.4),
                inf_today: raw_inf,
                inf_years: [0.0; 5],
            });
        }
        set_influence(
            &mut company,
            &directors,
            config.inf_normalized_per_company,
            &mut rng,
            &jitter,
        );
        companies.push(company);
    }

    let (dif_csv, dif_rows, mismatched) = write_dif(&companies, &directors, config, &mut rng);
    let (bce_csv, bce) = write_bce(&companies, &directors, config, &mut rng);

    let mut from_factors: BTreeSet<usize> = BTreeSet::new();
    let mut edges_only: BTreeSet<usize> = BTreeSet::new();
    let mut company_count = 0usize;
    let mut edges = 0usize;
    for c in &companies {
        let visible = c.board.iter().any(|s| !directors[s.director].withheld);
        let pairs = c.board.len() * (c.board.len() - 1) / 2;
        edges += pairs;
        if visible || pairs > 0 {
            company_count += 1;
        }
        for s in &c.board {
            if !directors[s.director].withheld {
                from_factors.insert(s.director);
            } else if pairs > 0 {
                edges_only.insert(s.director);
            }
        }
    }
    let counts = TruthCounts {
        dif_rows,
        bce_rows: bce.rows,
        seats: dif_rows,
        directors: from_factors.len() + edges_only.len(),
        directors_from_factors: from_factors.len(),
        edges_only_directors: edges_only.len(),
        companies: company_count,
        edges,
        inf_long_rows: dif_rows * 4,
    };
    let injected = InjectedAnomalies {
        duplicate_edge_lines: bce.duplicates,
        swapped_node_lines: bce.swapped,
        self_loop_lines: bce.self_loops,
        mismatched_company_lines: mismatched,
        edges_only_director_ids: edges_only.iter().map(|&i| directors[i].id).collect(),
    };
    Ok(SynthOutput {
        dif_csv,
        bce_csv,
        truth: Truth {
            config: config.clone(),
            counts,
            injected,
        },
    })
}

/// Heavy-tailed current influence, optionally scaled so the visible board
/// sums to exactly 100.00, plus a jittered five-year history.
fn set_influence(
    company: &mut Company,
    directors: &[Director],
    normalized: bool,
    rng: &mut ChaCha8Rng,
    jitter: &Normal<f64>,
) {
    let visible: Vec<usize> = (0..company.board.len())
        .filter(|&i| !directors[company.board[i].director].withheld)
        .collect();
    if normalized && !visible.is_empty() {
        let total: f64 = visible.iter().map(|&i| company.board[i].inf_today).sum();
        let mut cents: Vec<i64> = visible
            .iter()
            .map(|&i| (company.board[i].inf_today / total * 10_000.0).round() as i64)
            .collect();
        let residual = 10_000 - cents.iter().sum::<i64>();
        let largest = (0..cents.len()).max_by_key(|&k| (cents[k], std::cmp::Reverse(k))).expect("non-empty");
        cents[largest] += residual;
        for (k, &i) in visible.iter().enumerate() {
            company.board[i].inf_today = cents[k] as f64 / 100.0;
        }
    } else {
        for seat in &mut company.board {
            seat.inf_today = round_to((seat.inf_today * 5.0).min(100.0), 2);
        }
    }
    for seat in &mut company.board {
        for v in seat.inf_years.iter_mut() {
            *v = round_to((seat.inf_today * (1.0 + jitter.sample(rng))).max(0.0), 2);
        }
    }
}

fn flag(v: bool, yes_no: bool) -> &'static str {
    match (v, yes_no) {
        (true, true) => "Yes",
        (false, true) => "No",
        (true, false) => "T",
        (false, false) => "",
    }
}

fn opt_year(v: Option<Year>) -> String {
    v.map(|y| y.to_string()).unwrap_or_default()
}

fn write_dif(
    companies: &[Company],
    directors: &[Director],
    config: &SynthConfig,
    rng: &mut ChaCha8Rng,
) -> (Vec<u8>, usize, Vec<u64>) {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(DIF_COLUMNS).expect("in-memory write");
    let mut line = 1u64;
    let mut rows = 0usize;
    let mut mismatched = Vec::new();
    for c in companies {
        let visible: Vec<&Seat> = c
            .board
            .iter()
            .filter(|s| !directors[s.director].withheld)
            .collect();
        let corrupt = (visible.len() >= 2
            && rng.random_bool(config.anomaly_rates.mismatched_company_fields))
        .then(|| rng.random_range(1..visible.len()));
        for (k, seat) in visible.iter().enumerate() {
            let d = &directors[seat.director];
            line += 1;
            rows += 1;
            let (mut sector, mut league, mut country) =
                (c.sector.to_string(), c.league, c.country.to_string());
            if corrupt == Some(k) {
                mismatched.push(line);
                match rng.random_range(0..3) {
                    0 => sector = format!("{sector} (legacy)"),
                    1 => league = if league == 4 { 3 } else { league + 1 },
                    _ => country = if country == "US" { "CA".into() } else { "US".into() },
                }
            }
            let since = config.reference_year - seat.tenure.floor() as Year;
            let record: Vec<String> = vec![
                d.id.to_string(),
                d.name.clone(),
                c.id.to_string(),
                c.name.clone(),
                if d.female { "Female" } else { "Male" }.to_string(),
                d.age.to_string(),
                format!("{:.1}", seat.tenure),
                since.to_string(),
                opt_year(seat.ceo_since),
                opt_year(seat.chairman_since),
                opt_year(seat.lead_dir_since),
                flag(seat.founder, false).to_string(),
                flag(seat.family, true).to_string(),
                flag(c.founder_firm, true).to_string(),
                flag(d.co_served, false).to_string(),
                flag(d.activist, false).to_string(),
                c.ownership.to_string(),
                league.to_string(),
                sector,
                country,
                format!("{:.2}", seat.inf_today),
            ]
            .into_iter()
            .chain(seat.inf_years.iter().map(|v| format!("{v:.2}")))
            .collect();
            w.write_record(&record).expect("in-memory write");
        }
    }
    (w.into_inner().expect("in-memory write"), rows, mismatched)
}

struct BceStats {
    rows: usize,
    duplicates: Vec<u64>,
    swapped: Vec<u64>,
    self_loops: Vec<u64>,
}

fn write_bce(
    companies: &[Company],
    directors: &[Director],
    config: &SynthConfig,
    rng: &mut ChaCha8Rng,
) -> (Vec<u8>, BceStats) {
    let rates = &config.anomaly_rates;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(BCE_COLUMNS).expect("in-memory write");
    let mut stats = BceStats {
        rows: 0,
        duplicates: Vec::new(),
        swapped: Vec::new(),
        self_loops: Vec::new(),
    };
    let mut line = 1u64;
    let mut emit = |w: &mut csv::Writer<Vec<u8>>, c: &Company, x: &Director, y: &Director, overlap: f64| {
        w.write_record([
            c.id.to_string(),
            c.name.clone(),
            x.id.to_string(),
            x.name.clone(),
            y.id.to_string(),
            y.name.clone(),
            format!("{overlap:.1}"),
        ])
        .expect("in-memory write");
        line += 1;
        line
    };
    for c in companies {
        for i in 0..c.board.len() {
            for j in i + 1..c.board.len() {
                let (si, sj) = (&c.board[i], &c.board[j]);
                let overlap = round_to(si.tenure.min(sj.tenure), 1);
                let (mut lo, mut hi) = (&directors[si.director], &directors[sj.director]);
                if lo.id > hi.id {
                    std::mem::swap(&mut lo, &mut hi);
                }
                let swap = rng.random_bool(rates.swapped_nodes);
                let (x, y) = if swap { (hi, lo) } else { (lo, hi) };
                let l = emit(&mut w, c, x, y, overlap);
                stats.rows += 1;
                if swap {
                    stats.swapped.push(l);
                }
                if rng.random_bool(rates.duplicate_edge) {
                    stats.duplicates.push(emit(&mut w, c, x, y, overlap));
                    stats.rows += 1;
                }
                if rng.random_bool(rates.self_loop) {
                    stats.self_loops.push(emit(&mut w, c, x, x, overlap));
                    stats.rows += 1;
                }
            }
        }
    }
    (w.into_inner().expect("in-memory write"), stats)
}
