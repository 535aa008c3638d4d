//! Group-by-max reshaping of parsed rows into lookup tables.
//!
//! "Max" is made total per field kind: numbers compare numerically, text
//! lexicographically (byte order), booleans with true winning, and any known
//! gender beats `Unknown`. Present optional values beat absent ones.

use std::collections::BTreeMap;

use crate::model::{
    CompanyId, CompanyProfile, DiagCode, Diagnostic, DirectorId, DirectorProfile, Gender, League,
    InfLongRow, Ownership, ProfileSource, RawEdgeRow, SeatRecord,
};

const CLEAN: &str = "clean";

fn max_string(slot: &mut String, candidate: &str) {
    if candidate > slot.as_str() {
        *slot = candidate.to_string();
    }
}

/// One profile per director across seats and edges. Directors seen only in
/// edge rows get an `EdgesOnly` stub named by the max of their edge names.
pub fn build_unique_directors(
    seats: &[SeatRecord],
    edges: &[RawEdgeRow],
) -> (BTreeMap<DirectorId, DirectorProfile>, Vec<Diagnostic>) {
    struct Acc {
        profile: DirectorProfile,
        names_differ: bool,
        saw_female: bool,
        saw_male: bool,
        co_served_mixed: bool,
        activist_mixed: bool,
    }

    let mut accs: BTreeMap<DirectorId, Acc> = BTreeMap::new();
    for seat in seats {
        match accs.get_mut(&seat.director_id) {
            None => {
                accs.insert(
                    seat.director_id,
                    Acc {
                        profile: DirectorProfile {
                            director_id: seat.director_id,
                            full_name: seat.director_name.clone(),
                            gender: seat.gender,
                            age: seat.age,
                            co_served: seat.co_served,
                            activist: seat.activist,
                            source: ProfileSource::FromFactors,
                        },
                        names_differ: false,
                        saw_female: seat.gender == Gender::Female,
                        saw_male: seat.gender == Gender::Male,
                        co_served_mixed: false,
                        activist_mixed: false,
                    },
                );
            }
            Some(acc) => {
                let p = &mut acc.profile;
                acc.names_differ |= p.full_name != seat.director_name;
                max_string(&mut p.full_name, &seat.director_name);
                acc.saw_female |= seat.gender == Gender::Female;
                acc.saw_male |= seat.gender == Gender::Male;
                p.gender = p.gender.max(seat.gender);
                p.age = p.age.max(seat.age);
                acc.co_served_mixed |= p.co_served != seat.co_served;
                acc.activist_mixed |= p.activist != seat.activist;
                p.co_served |= seat.co_served;
                p.activist |= seat.activist;
            }
        }
    }

    let mut diagnostics = Vec::new();
    let mut out = BTreeMap::new();
    for (id, acc) in accs {
        if acc.names_differ {
            diagnostics.push(Diagnostic::new(
                CLEAN,
                0,
                DiagCode::NameConflict,
                format!("director {id}: name spellings differ; kept {:?}", acc.profile.full_name),
            ));
        }
        if acc.saw_female && acc.saw_male {
            diagnostics.push(Diagnostic::new(
                CLEAN,
                0,
                DiagCode::GenderConflict,
                format!("director {id}: listed as both Female and Male; kept Male"),
            ));
        }
        if acc.co_served_mixed || acc.activist_mixed {
            diagnostics.push(Diagnostic::new(
                CLEAN,
                0,
                DiagCode::FlagConflict,
                format!("director {id}: inconsistent CoServed/Activist flags; kept true"),
            ));
        }
        out.insert(id, acc.profile);
    }

    let mut stubs: BTreeMap<DirectorId, String> = BTreeMap::new();
    for e in edges {
        for (id, name) in [(e.n1_id, &e.n1_name), (e.n2_id, &e.n2_name)] {
            if out.contains_key(&id) {
                continue;
            }
            stubs
                .entry(id)
                .and_modify(|n| max_string(n, name))
                .or_insert_with(|| name.clone());
        }
    }
    for (id, full_name) in stubs {
        out.insert(
            id,
            DirectorProfile {
                director_id: id,
                full_name,
                gender: Gender::Unknown,
                age: None,
                co_served: false,
                activist: false,
                source: ProfileSource::EdgesOnly,
            },
        );
    }
    (out, diagnostics)
}

/// One profile per company. Companies seen only in edges get empty sector and
/// country and an `Unknown` league.
pub fn build_companies(
    seats: &[SeatRecord],
    edges: &[RawEdgeRow],
) -> (BTreeMap<CompanyId, CompanyProfile>, Vec<Diagnostic>) {
    #[derive(Default)]
    struct Mismatch {
        name: bool,
        sector: bool,
        country: bool,
        league: bool,
        ownership: bool,
    }

    let mut accs: BTreeMap<CompanyId, (CompanyProfile, Mismatch)> = BTreeMap::new();
    for seat in seats {
        match accs.get_mut(&seat.company_id) {
            None => {
                accs.insert(
                    seat.company_id,
                    (
                        CompanyProfile {
                            company_id: seat.company_id,
                            name: seat.company_name.clone(),
                            sector: seat.sector.clone(),
                            hq_country: seat.hq_country.clone(),
                            league_code: seat.league_code,
                            league: League::Unknown,
                            ownership_category: seat.ownership_category,
                            family_firm: seat.family,
                        },
                        Mismatch::default(),
                    ),
                );
            }
            Some((p, m)) => {
                m.name |= p.name != seat.company_name;
                m.sector |= p.sector != seat.sector;
                m.country |= p.hq_country != seat.hq_country;
                m.league |= p.league_code != seat.league_code;
                m.ownership |= p.ownership_category != seat.ownership_category;
                max_string(&mut p.name, &seat.company_name);
                max_string(&mut p.sector, &seat.sector);
                max_string(&mut p.hq_country, &seat.hq_country);
                p.league_code = p.league_code.max(seat.league_code);
                p.ownership_category = p.ownership_category.max(seat.ownership_category);
                p.family_firm |= seat.family;
            }
        }
    }

    let mut diagnostics = Vec::new();
    let mut out = BTreeMap::new();
    for (id, (mut p, m)) in accs {
        p.league = League::from_code(p.league_code);
        let fields: Vec<&str> = [
            (m.name, "name"),
            (m.sector, "sector"),
            (m.country, "hq_country"),
            (m.league, "league"),
            (m.ownership, "ownership"),
        ]
        .into_iter()
        .filter_map(|(hit, f)| hit.then_some(f))
        .collect();
        if !fields.is_empty() {
            diagnostics.push(Diagnostic::new(
                CLEAN,
                0,
                DiagCode::CompanyFieldMismatch,
                format!(
                    "company {id}: seat rows disagree on {}; kept max values",
                    fields.join(", ")
                ),
            ));
        }
        out.insert(id, p);
    }

    let mut edge_only: BTreeMap<CompanyId, String> = BTreeMap::new();
    for e in edges {
        if out.contains_key(&e.company_id) {
            continue;
        }
        edge_only
            .entry(e.company_id)
            .and_modify(|n| max_string(n, &e.company_name))
            .or_insert_with(|| e.company_name.clone());
    }
    for (id, name) in edge_only {
        out.insert(
            id,
            CompanyProfile {
                company_id: id,
                name,
                sector: String::new(),
                hq_country: String::new(),
                league_code: 0,
                league: League::Unknown,
                ownership_category: Ownership::Unknown,
                family_firm: false,
            },
        );
    }
    (out, diagnostics)
}

/// One long-form row per seat and present completed-year value, in seat order.
pub fn transpose_inf_long(
    seats: &[SeatRecord],
    companies: &BTreeMap<CompanyId, CompanyProfile>,
) -> Vec<InfLongRow> {
    let mut out = Vec::with_capacity(seats.len() * 4);
    for seat in seats {
        let (league, sector, country) = match companies.get(&seat.company_id) {
            Some(c) => (c.league, c.sector.as_str(), c.hq_country.as_str()),
            None => (
                League::from_code(seat.league_code),
                seat.sector.as_str(),
                seat.hq_country.as_str(),
            ),
        };
        for (year, inf) in seat.inf_by_year.complete_years() {
            out.push(InfLongRow {
                company_id: seat.company_id,
                director_id: seat.director_id,
                year,
                inf,
                league,
                sector: sector.to_string(),
                hq_country: country.to_string(),
            });
        }
    }
    out
}
