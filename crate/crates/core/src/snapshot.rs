//! The immutable, fully cleaned dataset that every query reads from.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::model::{
    CompanyId, CompanyProfile, ConnectionEdge, Diagnostic, DirectorId, DirectorProfile, Gender,
    InfLongRow, League, ProfileSource, SeatRecord, Year,
};

/// Owned tables a [`Snapshot`] is assembled from.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SnapshotParts {
    pub seats: Vec<SeatRecord>,
    pub directors: BTreeMap<DirectorId, DirectorProfile>,
    pub companies: BTreeMap<CompanyId, CompanyProfile>,
    pub edges: Vec<ConnectionEdge>,
    pub inf_long: Vec<InfLongRow>,
    pub country_names: BTreeMap<String, String>,
    pub reference_year: Year,
    pub warnings: Vec<Diagnostic>,
}

#[derive(Debug, Default)]
struct Index {
    seats_by_director: HashMap<DirectorId, Vec<usize>>,
    seats_by_company: HashMap<CompanyId, Vec<usize>>,
    edges_by_director: HashMap<DirectorId, Vec<usize>>,
}

#[derive(Debug)]
pub struct Snapshot {
    parts: SnapshotParts,
    index: Index,
}

impl Snapshot {
    /// Assemble a snapshot and build its lookup indexes. Does not check
    /// invariants; see [`Snapshot::validate`].
    pub fn from_parts(parts: SnapshotParts) -> Self {
        let mut index = Index::default();
        for (i, s) in parts.seats.iter().enumerate() {
            index.seats_by_director.entry(s.director_id).or_default().push(i);
            index.seats_by_company.entry(s.company_id).or_default().push(i);
        }
        for (i, e) in parts.edges.iter().enumerate() {
            index.edges_by_director.entry(e.a).or_default().push(i);
            index.edges_by_director.entry(e.b).or_default().push(i);
        }
        Snapshot { parts, index }
    }

    pub fn empty(reference_year: Year) -> Self {
        Snapshot::from_parts(SnapshotParts {
            reference_year,
            ..Default::default()
        })
    }

    pub fn parts(&self) -> &SnapshotParts {
        &self.parts
    }

    pub fn seats(&self) -> &[SeatRecord] {
        &self.parts.seats
    }

    pub fn directors(&self) -> &BTreeMap<DirectorId, DirectorProfile> {
        &self.parts.directors
    }

    pub fn companies(&self) -> &BTreeMap<CompanyId, CompanyProfile> {
        &self.parts.companies
    }

    pub fn edges(&self) -> &[ConnectionEdge] {
        &self.parts.edges
    }

    pub fn inf_long(&self) -> &[InfLongRow] {
        &self.parts.inf_long
    }

    pub fn country_names(&self) -> &BTreeMap<String, String> {
        &self.parts.country_names
    }

    pub fn reference_year(&self) -> Year {
        self.parts.reference_year
    }

    pub fn warnings(&self) -> &[Diagnostic] {
        &self.parts.warnings
    }

    pub fn director(&self, id: DirectorId) -> Option<&DirectorProfile> {
        self.parts.directors.get(&id)
    }

    pub fn company(&self, id: CompanyId) -> Option<&CompanyProfile> {
        self.parts.companies.get(&id)
    }

    /// Resolved gender of a director, `Unknown` if absent.
    pub fn gender_of(&self, id: DirectorId) -> Gender {
        self.director(id).map_or(Gender::Unknown, |d| d.gender)
    }

    pub fn seats_of_director(&self, id: DirectorId) -> impl Iterator<Item = &SeatRecord> + '_ {
        self.index
            .seats_by_director
            .get(&id)
            .into_iter()
            .flatten()
            .map(|&i| &self.parts.seats[i])
    }

    pub fn seats_of_company(&self, id: CompanyId) -> impl Iterator<Item = &SeatRecord> + '_ {
        self.index
            .seats_by_company
            .get(&id)
            .into_iter()
            .flatten()
            .map(|&i| &self.parts.seats[i])
    }

    pub fn seat_count(&self, id: DirectorId) -> usize {
        self.index.seats_by_director.get(&id).map_or(0, Vec::len)
    }

    pub fn edges_of(&self, id: DirectorId) -> impl Iterator<Item = &ConnectionEdge> + '_ {
        self.index
            .edges_by_director
            .get(&id)
            .into_iter()
            .flatten()
            .map(|&i| &self.parts.edges[i])
    }

    /// Check every snapshot invariant. Returns one message per violation.
    pub fn validate(&self) -> Vec<String> {
        let p = &self.parts;
        let mut v = Vec::new();
        let year = p.reference_year;

        let mut seat_keys = HashSet::with_capacity(p.seats.len());
        let mut expected_inf = 0usize;
        for s in &p.seats {
            let key = (s.director_id, s.company_id);
            if s.director_id.0 == 0 || s.company_id.0 == 0 {
                v.push(format!("seat {key:?}: zero id"));
            }
            if !seat_keys.insert(key) {
                v.push(format!("seat {key:?}: duplicate"));
            }
            for (name, y) in [
                ("director_since", s.director_since),
                ("ceo_since", s.ceo_since),
                ("chairman_since", s.chairman_since),
                ("lead_dir_since", s.lead_dir_since),
            ] {
                if y.is_some_and(|y| y > year) {
                    v.push(format!("seat {key:?}: {name} after reference year {year}"));
                }
            }
            if s.tenure.is_some_and(|t| t.is_nan() || t < 0.0) {
                v.push(format!("seat {key:?}: negative tenure"));
            }
            if !p.directors.contains_key(&s.director_id) {
                v.push(format!("seat {key:?}: director unresolved"));
            }
            if !p.companies.contains_key(&s.company_id) {
                v.push(format!("seat {key:?}: company unresolved"));
            }
            expected_inf += s.inf_by_year.complete_years().count();
        }

        for (id, d) in &p.directors {
            if d.director_id != *id {
                v.push(format!("director {id}: key does not match profile id"));
            }
            let seats = self.seat_count(*id);
            match d.source {
                ProfileSource::EdgesOnly => {
                    if d.gender != Gender::Unknown || d.age.is_some() {
                        v.push(format!("director {id}: edges-only profile carries factor data"));
                    }
                    if seats > 0 {
                        v.push(format!("director {id}: edges-only profile has seats"));
                    }
                }
                ProfileSource::FromFactors => {
                    if seats == 0 {
                        v.push(format!("director {id}: factor profile without seats"));
                    }
                }
            }
        }

        for (id, c) in &p.companies {
            if c.company_id != *id {
                v.push(format!("company {id}: key does not match profile id"));
            }
            if c.league != League::from_code(c.league_code) {
                v.push(format!("company {id}: league does not decode league code"));
            }
        }

        let mut prev: Option<(CompanyId, DirectorId, DirectorId)> = None;
        for e in &p.edges {
            let key = (e.company_id, e.a, e.b);
            if e.a >= e.b {
                v.push(format!("edge {key:?}: endpoints not in canonical order"));
            }
            if !e.overlap.is_finite() || e.overlap < 0.0 {
                v.push(format!("edge {key:?}: invalid overlap {}", e.overlap));
            }
            if prev.is_some_and(|p| p >= key) {
                v.push(format!("edge {key:?}: duplicate or out of order"));
            }
            prev = Some(key);
            for end in [e.a, e.b] {
                if !p.directors.contains_key(&end) {
                    v.push(format!("edge {key:?}: endpoint {end} unresolved"));
                }
            }
            if !p.companies.contains_key(&e.company_id) {
                v.push(format!("edge {key:?}: company unresolved"));
            }
        }

        if p.inf_long.len() != expected_inf {
            v.push(format!(
                "inf_long has {} rows, seats imply {expected_inf}",
                p.inf_long.len()
            ));
        }
        for code in p.country_names.keys() {
            if !p.companies.values().any(|c| &c.hq_country == code) {
                v.push(format!("country {code}: not observed in companies"));
            }
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_snapshot_is_valid() {
        let s = Snapshot::empty(2022);
        assert!(s.validate().is_empty());
        assert_eq!(s.seat_count(DirectorId(1)), 0);
        assert_eq!(s.edges_of(DirectorId(1)).count(), 0);
    }

    #[test]
    fn dangling_edge_is_reported() {
        let parts = SnapshotParts {
            edges: vec![ConnectionEdge {
                company_id: CompanyId(1),
                a: DirectorId(1),
                b: DirectorId(2),
                overlap: 1.0,
            }],
            reference_year: 2022,
            ..Default::default()
        };
        let v = Snapshot::from_parts(parts).validate();
        assert!(v.iter().any(|m| m.contains("endpoint 1 unresolved")), "{v:?}");
        assert!(v.iter().any(|m| m.contains("company unresolved")), "{v:?}");
    }
}
