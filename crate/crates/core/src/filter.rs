//! Query-side selection over companies and directors.
//!
//! `None` means "no restriction"; `Some` of an empty set matches nothing.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::QueryError;
use crate::model::{CompanyId, CompanyProfile, Gender, League, SeatRecord};
use crate::ingest::parse_bool;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sectors: Option<BTreeSet<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub countries: Option<BTreeSet<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leagues: Option<BTreeSet<League>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genders: Option<BTreeSet<Gender>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family_firm: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub company_ids: Option<BTreeSet<CompanyId>>,
}

fn allows<T: Ord>(set: &Option<BTreeSet<T>>, value: &T) -> bool {
    set.as_ref().is_none_or(|s| s.contains(value))
}

impl FilterSpec {
    pub fn all() -> Self {
        Self::default()
    }

    pub fn with_leagues(mut self, leagues: impl IntoIterator<Item = League>) -> Self {
        self.leagues = Some(leagues.into_iter().collect());
        self
    }

    pub fn with_countries<S: Into<String>>(mut self, codes: impl IntoIterator<Item = S>) -> Self {
        self.countries = Some(
            codes
                .into_iter()
                .map(|c| c.into().to_ascii_uppercase())
                .collect(),
        );
        self
    }

    pub fn with_sectors<S: Into<String>>(mut self, sectors: impl IntoIterator<Item = S>) -> Self {
        self.sectors = Some(sectors.into_iter().map(Into::into).collect());
        self
    }

    pub fn with_genders(mut self, genders: impl IntoIterator<Item = Gender>) -> Self {
        self.genders = Some(genders.into_iter().collect());
        self
    }

    pub fn with_family_firm(mut self, family: bool) -> Self {
        self.family_firm = Some(family);
        self
    }

    pub fn with_companies(mut self, ids: impl IntoIterator<Item = CompanyId>) -> Self {
        self.company_ids = Some(ids.into_iter().collect());
        self
    }

    pub fn is_unrestricted(&self) -> bool {
        *self == FilterSpec::default()
    }

    /// Company-level fields: sector, country, league, company id and (when
    /// set) the company's family-firm status.
    pub fn matches_company(&self, company: &CompanyProfile) -> bool {
        allows(&self.sectors, &company.sector)
            && allows(&self.countries, &company.hq_country)
            && allows(&self.leagues, &company.league)
            && allows(&self.company_ids, &company.company_id)
            && self.family_firm.is_none_or(|f| f == company.family_firm)
    }

    /// Company-level fields without the family-firm test, used where the
    /// family restriction applies per seat instead.
    pub fn matches_company_attrs(&self, company: &CompanyProfile) -> bool {
        allows(&self.sectors, &company.sector)
            && allows(&self.countries, &company.hq_country)
            && allows(&self.leagues, &company.league)
            && allows(&self.company_ids, &company.company_id)
    }

    pub fn matches_gender(&self, gender: Gender) -> bool {
        allows(&self.genders, &gender)
    }

    /// Seat-level test: company attributes, the director's resolved gender
    /// and the seat's own family flag.
    pub fn matches_seat(&self, seat: &SeatRecord, company: &CompanyProfile, gender: Gender) -> bool {
        self.matches_company_attrs(company)
            && self.matches_gender(gender)
            && self.family_firm.is_none_or(|f| f == seat.family)
    }

    /// Apply one `key=value` restriction. Repeating a set-valued key adds to
    /// the set. Keys: sector, country, league, gender, family, company.
    pub fn push(&mut self, key: &str, value: &str) -> Result<(), QueryError> {
        let value = value.trim();
        match key.trim().to_ascii_lowercase().as_str() {
            "sector" => {
                self.sectors
                    .get_or_insert_with(BTreeSet::new)
                    .insert(value.to_string());
            }
            "country" => {
                self.countries
                    .get_or_insert_with(BTreeSet::new)
                    .insert(value.to_ascii_uppercase());
            }
            "league" => {
                let league = League::parse(value).ok_or_else(|| {
                    QueryError::InvalidArgument(format!("unknown league {value:?}"))
                })?;
                self.leagues.get_or_insert_with(BTreeSet::new).insert(league);
            }
            "gender" => {
                let gender = match value.to_ascii_lowercase().as_str() {
                    "unknown" => Gender::Unknown,
                    _ => match Gender::parse(value) {
                        Gender::Unknown => {
                            return Err(QueryError::InvalidArgument(format!(
                                "unknown gender {value:?}"
                            )))
                        }
                        g => g,
                    },
                };
                self.genders.get_or_insert_with(BTreeSet::new).insert(gender);
            }
            "family" | "family_firm" => {
                let flag = parse_bool(value)
                    .filter(|_| !value.is_empty())
                    .ok_or_else(|| {
                        QueryError::InvalidArgument(format!("family expects a boolean, got {value:?}"))
                    })?;
                self.family_firm = Some(flag);
            }
            "company" | "company_id" => {
                let id = value.parse::<u64>().map_err(|_| {
                    QueryError::InvalidArgument(format!("company expects an integer id, got {value:?}"))
                })?;
                self.company_ids
                    .get_or_insert_with(BTreeSet::new)
                    .insert(CompanyId(id));
            }
            other => {
                return Err(QueryError::InvalidArgument(format!(
                    "unknown filter key {other:?}"
                )))
            }
        }
        Ok(())
    }

    pub fn from_pairs<'a>(
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, QueryError> {
        let mut spec = FilterSpec::default();
        for (k, v) in pairs {
            spec.push(k, v)?;
        }
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Ownership;

    fn company(league: League, country: &str) -> CompanyProfile {
        CompanyProfile {
            company_id: CompanyId(1),
            name: "C".into(),
            sector: "Energy".into(),
            hq_country: country.into(),
            league_code: 0,
            league,
            ownership_category: Ownership::Unknown,
            family_firm: false,
        }
    }

    #[test]
    fn absent_vs_empty() {
        let c = company(League::Mega, "US");
        assert!(FilterSpec::all().matches_company(&c));
        let none = FilterSpec {
            leagues: Some(BTreeSet::new()),
            ..Default::default()
        };
        assert!(!none.matches_company(&c));
    }

    #[test]
    fn pairs_parse() {
        let f = FilterSpec::from_pairs([
            ("league", "Mega"),
            ("league", "small"),
            ("country", "kr"),
            ("gender", "Female"),
            ("family", "yes"),
        ])
        .unwrap();
        assert_eq!(f.leagues.as_ref().unwrap().len(), 2);
        assert!(f.countries.as_ref().unwrap().contains("KR"));
        assert_eq!(f.family_firm, Some(true));
        assert!(FilterSpec::from_pairs([("league", "giant")]).is_err());
        assert!(FilterSpec::from_pairs([("colour", "red")]).is_err());
        assert!(FilterSpec::from_pairs([("family", "")]).is_err());
    }
}
