//! Governance queries: director and company drill-through, influence by
//! country, tenure summaries and peer comparison, gender power gap.
//!
//! Missing tenure or influence values are left out of means, never imputed.
//! Seat-level queries apply the family restriction to the seat's own family
//! flag; company attributes come from the cleaned company profile.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::QueryError;
use crate::filter::FilterSpec;
use crate::model::{
    inf_prev4_avg, CompanyId, DirectorId, DirectorProfile, Gender, League, Ownership, SeatRecord,
    Year,
};
use crate::snapshot::Snapshot;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeatRoles {
    pub chairman_since: Option<Year>,
    pub lead_dir_since: Option<Year>,
    pub director_since: Option<Year>,
    pub ceo_since: Option<Year>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectorSeat {
    pub company_id: CompanyId,
    pub company_name: String,
    pub roles: SeatRoles,
    pub family: bool,
    pub founder: bool,
    pub ownership_category: Ownership,
    pub inf_today: Option<f64>,
    pub inf_avg: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Connection {
    pub company_id: CompanyId,
    pub company_name: String,
    pub director_id: DirectorId,
    pub connected_director_name: String,
    pub overlap: f64,
    pub hq_country: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectorDetail {
    pub profile: DirectorProfile,
    pub seats: Vec<DirectorSeat>,
    pub company_count: usize,
    pub connections: Vec<Connection>,
}

/// Full profile of one director: seats from the factors data and every
/// incident co-service edge, unfiltered. Connections are sorted by overlap
/// descending, then connected director name.
pub fn director_detail(snapshot: &Snapshot, id: DirectorId) -> Result<DirectorDetail, QueryError> {
    let profile = snapshot
        .director(id)
        .cloned()
        .ok_or(QueryError::UnknownDirector {
            id,
            endpoint: "director",
        })?;
    let mut seats: Vec<DirectorSeat> = snapshot
        .seats_of_director(id)
        .map(|s| DirectorSeat {
            company_id: s.company_id,
            company_name: company_name(snapshot, s.company_id, &s.company_name),
            roles: SeatRoles {
                chairman_since: s.chairman_since,
                lead_dir_since: s.lead_dir_since,
                director_since: s.director_since,
                ceo_since: s.ceo_since,
            },
            family: s.family,
            founder: s.founder,
            ownership_category: s.ownership_category,
            inf_today: s.inf_today,
            inf_avg: inf_prev4_avg(s),
        })
        .collect();
    seats.sort_by(|a, b| {
        (a.company_name.as_str(), a.company_id).cmp(&(b.company_name.as_str(), b.company_id))
    });

    let mut connections: Vec<Connection> = snapshot
        .edges_of(id)
        .map(|e| {
            let other = e.other(id);
            let company = snapshot.company(e.company_id);
            Connection {
                company_id: e.company_id,
                company_name: company.map(|c| c.name.clone()).unwrap_or_default(),
                director_id: other,
                connected_director_name: snapshot
                    .director(other)
                    .map(|d| d.full_name.clone())
                    .unwrap_or_default(),
                overlap: e.overlap,
                hq_country: company.map(|c| c.hq_country.clone()).unwrap_or_default(),
            }
        })
        .collect();
    connections.sort_by(|a, b| {
        b.overlap
            .total_cmp(&a.overlap)
            .then_with(|| a.connected_director_name.cmp(&b.connected_director_name))
            .then_with(|| a.company_name.cmp(&b.company_name))
            .then_with(|| (a.company_id, a.director_id).cmp(&(b.company_id, b.director_id)))
    });

    Ok(DirectorDetail {
        profile,
        company_count: seats.len(),
        seats,
        connections,
    })
}

fn company_name(snapshot: &Snapshot, id: CompanyId, fallback: &str) -> String {
    snapshot
        .company(id)
        .map_or_else(|| fallback.to_string(), |c| c.name.clone())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompanyDirectorRow {
    pub director_id: DirectorId,
    pub director_name: String,
    pub gender: Gender,
    pub age: Option<u32>,
    pub tenure: Option<f64>,
    pub ceo: bool,
    pub inf_today: Option<f64>,
    /// Seats this director holds across the whole snapshot.
    pub companies_count: usize,
    pub chairperson: bool,
}

/// One row per current seat at the company, sorted by director name.
pub fn company_directors(
    snapshot: &Snapshot,
    id: CompanyId,
) -> Result<Vec<CompanyDirectorRow>, QueryError> {
    if snapshot.company(id).is_none() {
        return Err(QueryError::UnknownCompany(id));
    }
    let mut rows: Vec<CompanyDirectorRow> = snapshot
        .seats_of_company(id)
        .map(|s| {
            let profile = snapshot.director(s.director_id);
            CompanyDirectorRow {
                director_id: s.director_id,
                director_name: profile.map_or_else(|| s.director_name.clone(), |p| p.full_name.clone()),
                gender: profile.map_or(s.gender, |p| p.gender),
                age: s.age,
                tenure: s.tenure,
                ceo: s.is_ceo(),
                inf_today: s.inf_today,
                companies_count: snapshot.seat_count(s.director_id),
                chairperson: s.is_chair(),
            }
        })
        .collect();
    rows.sort_by(|a, b| {
        (a.director_name.as_str(), a.director_id).cmp(&(b.director_name.as_str(), b.director_id))
    });
    Ok(rows)
}

/// Seats matching `filter`, with their resolved company attributes.
fn matching_seats<'a>(
    snapshot: &'a Snapshot,
    filter: &'a FilterSpec,
) -> impl Iterator<Item = (&'a SeatRecord, &'a crate::model::CompanyProfile)> + 'a {
    snapshot.seats().iter().filter_map(move |s| {
        let company = snapshot.company(s.company_id)?;
        filter
            .matches_seat(s, company, snapshot.gender_of(s.director_id))
            .then_some((s, company))
    })
}

#[derive(Debug, Clone, Copy, Default)]
struct Mean {
    sum: f64,
    n: usize,
}

impl Mean {
    fn add(&mut self, v: f64) {
        self.sum += v;
        self.n += 1;
    }

    fn get(&self) -> Option<f64> {
        (self.n > 0).then(|| self.sum / self.n as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendPoint {
    pub year: Year,
    pub mean_inf: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountryInfluence {
    pub country: String,
    pub name: String,
    /// Mean current influence over matching seats; absent when no matching
    /// seat in the country reports a current value.
    pub mean_inf: Option<f64>,
    pub seat_count: usize,
    pub trend: Vec<TrendPoint>,
}

/// Influence per headquarters country. A country appears when at least one
/// long-form influence row matches the filter. Sorted by `mean_inf`
/// descending (absent last), then country code.
pub fn influence_by_country(snapshot: &Snapshot, filter: &FilterSpec) -> Vec<CountryInfluence> {
    let family: Option<HashMap<(DirectorId, CompanyId), bool>> = filter.family_firm.map(|_| {
        snapshot
            .seats()
            .iter()
            .map(|s| ((s.director_id, s.company_id), s.family))
            .collect()
    });

    let mut trend: BTreeMap<&str, BTreeMap<Year, Mean>> = BTreeMap::new();
    for row in snapshot.inf_long() {
        if row.hq_country.is_empty() {
            continue;
        }
        let Some(company) = snapshot.company(row.company_id) else {
            continue;
        };
        if !filter.matches_company_attrs(company)
            || !filter.matches_gender(snapshot.gender_of(row.director_id))
        {
            continue;
        }
        if let (Some(want), Some(map)) = (filter.family_firm, family.as_ref()) {
            if map.get(&(row.director_id, row.company_id)) != Some(&want) {
                continue;
            }
        }
        trend
            .entry(row.hq_country.as_str())
            .or_default()
            .entry(row.year)
            .or_default()
            .add(row.inf);
    }

    let mut current: HashMap<&str, (Mean, usize)> = HashMap::new();
    for (seat, company) in matching_seats(snapshot, filter) {
        if !trend.contains_key(company.hq_country.as_str()) {
            continue;
        }
        let slot = current.entry(company.hq_country.as_str()).or_default();
        slot.1 += 1;
        if let Some(v) = seat.inf_today {
            slot.0.add(v);
        }
    }

    let mut out: Vec<CountryInfluence> = trend
        .into_iter()
        .map(|(code, years)| {
            let (mean, seats) = current.get(code).copied().unwrap_or_default();
            CountryInfluence {
                country: code.to_string(),
                name: snapshot
                    .country_names()
                    .get(code)
                    .cloned()
                    .unwrap_or_else(|| code.to_string()),
                mean_inf: mean.get(),
                seat_count: seats,
                trend: years
                    .into_iter()
                    .filter_map(|(year, m)| m.get().map(|mean_inf| TrendPoint { year, mean_inf }))
                    .collect(),
            }
        })
        .collect();
    out.sort_by(|a, b| match (a.mean_inf, b.mean_inf) {
        (Some(x), Some(y)) => y.total_cmp(&x).then_with(|| a.country.cmp(&b.country)),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => a.country.cmp(&b.country),
    });
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TenureCell {
    pub mean_tenure: f64,
    pub seat_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectorTenure {
    pub league: League,
    pub sector: String,
    pub mean_tenure: f64,
    pub seat_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TenureSummary {
    pub per_league: BTreeMap<League, TenureCell>,
    /// Ordered by league, then sector.
    pub per_league_sector: Vec<SectorTenure>,
}

/// Mean seat tenure per league and per (league, sector) over matching seats
/// with a tenure value. Empty cells are omitted.
pub fn tenure_summary(snapshot: &Snapshot, filter: &FilterSpec) -> TenureSummary {
    let mut league: BTreeMap<League, Mean> = BTreeMap::new();
    let mut cells: BTreeMap<(League, &str), Mean> = BTreeMap::new();
    for (seat, company) in matching_seats(snapshot, filter) {
        let Some(t) = seat.tenure else { continue };
        league.entry(company.league).or_default().add(t);
        cells
            .entry((company.league, company.sector.as_str()))
            .or_default()
            .add(t);
    }
    TenureSummary {
        per_league: league
            .into_iter()
            .filter_map(|(l, m)| {
                m.get().map(|mean_tenure| {
                    (
                        l,
                        TenureCell {
                            mean_tenure,
                            seat_count: m.n,
                        },
                    )
                })
            })
            .collect(),
        per_league_sector: cells
            .into_iter()
            .filter_map(|((l, sector), m)| {
                m.get().map(|mean_tenure| SectorTenure {
                    league: l,
                    sector: sector.to_string(),
                    mean_tenure,
                    seat_count: m.n,
                })
            })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeerComparison {
    pub company_id: CompanyId,
    pub company_mean: f64,
    pub peer_mean: Option<f64>,
    pub ratio: Option<f64>,
    pub peer_companies: usize,
    pub peer_seats: usize,
}

/// Board tenure against peers: other companies with the same league,
/// headquarters country and family-firm status. `peer_mean` is the
/// seat-weighted mean over peer seats with a tenure value.
pub fn tenure_vs_peers(snapshot: &Snapshot, id: CompanyId) -> Result<PeerComparison, QueryError> {
    let target = snapshot.company(id).ok_or(QueryError::UnknownCompany(id))?;
    let mut own = Mean::default();
    for s in snapshot.seats_of_company(id) {
        if let Some(t) = s.tenure {
            own.add(t);
        }
    }
    let company_mean = own.get().ok_or(QueryError::NoTenure(id))?;

    let mut peer = Mean::default();
    let mut peer_companies = 0usize;
    for c in snapshot.companies().values() {
        if c.company_id == id
            || c.league != target.league
            || c.hq_country != target.hq_country
            || c.family_firm != target.family_firm
        {
            continue;
        }
        let before = peer.n;
        for s in snapshot.seats_of_company(c.company_id) {
            if let Some(t) = s.tenure {
                peer.add(t);
            }
        }
        if peer.n > before {
            peer_companies += 1;
        }
    }
    let peer_mean = peer.get();
    Ok(PeerComparison {
        company_id: id,
        company_mean,
        peer_mean,
        ratio: peer_mean.filter(|m| *m > 0.0).map(|m| company_mean / m),
        peer_companies,
        peer_seats: peer.n,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenderPower {
    pub country: String,
    pub name: String,
    pub seat_share_female: f64,
    pub inf_share_female: f64,
    /// `seat_share_female - inf_share_female`; positive when women hold
    /// seats without a matching share of influence.
    pub power_gap: f64,
    pub seat_count: usize,
}

/// Female seat share against female share of current influence, per
/// country, over seats with known gender and a current influence value.
/// Countries whose counted influence sums to zero are omitted. Sorted by
/// `power_gap` descending, then country code.
pub fn gender_power(snapshot: &Snapshot, filter: &FilterSpec) -> Vec<GenderPower> {
    #[derive(Default)]
    struct Acc {
        seats: usize,
        female_seats: usize,
        inf: f64,
        female_inf: f64,
    }
    let mut by_country: BTreeMap<&str, Acc> = BTreeMap::new();
    for (seat, company) in matching_seats(snapshot, filter) {
        let gender = snapshot.gender_of(seat.director_id);
        let Some(inf) = seat.inf_today else { continue };
        if !gender.is_known() || company.hq_country.is_empty() {
            continue;
        }
        let acc = by_country.entry(company.hq_country.as_str()).or_default();
        acc.seats += 1;
        acc.inf += inf;
        if gender == Gender::Female {
            acc.female_seats += 1;
            acc.female_inf += inf;
        }
    }
    let mut out: Vec<GenderPower> = by_country
        .into_iter()
        .filter(|(_, a)| a.seats > 0 && a.inf > 0.0)
        .map(|(code, a)| {
            let seat_share_female = a.female_seats as f64 / a.seats as f64;
            let inf_share_female = a.female_inf / a.inf;
            GenderPower {
                country: code.to_string(),
                name: snapshot
                    .country_names()
                    .get(code)
                    .cloned()
                    .unwrap_or_else(|| code.to_string()),
                seat_share_female,
                inf_share_female,
                power_gap: seat_share_female - inf_share_female,
                seat_count: a.seats,
            }
        })
        .collect();
    out.sort_by(|a, b| {
        b.power_gap
            .total_cmp(&a.power_gap)
            .then_with(|| a.country.cmp(&b.country))
    });
    out
}
