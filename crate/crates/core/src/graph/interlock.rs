use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::error::QueryError;
use crate::model::{CompanyId, DirectorId};
use crate::snapshot::Snapshot;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Interlock {
    pub company_a: CompanyId,
    pub company_b: CompanyId,
    pub shared_directors: BTreeSet<DirectorId>,
    pub count: usize,
}

/// Company pairs whose current boards (seats in the factors data) share at
/// least `min_shared` directors. Sorted by count descending, then ids.
pub fn company_interlocks(
    snapshot: &Snapshot,
    min_shared: usize,
) -> Result<Vec<Interlock>, QueryError> {
    if min_shared < 1 {
        return Err(QueryError::InvalidArgument(
            "min_shared must be at least 1".into(),
        ));
    }
    let mut boards: HashMap<DirectorId, Vec<CompanyId>> = HashMap::new();
    for seat in snapshot.seats() {
        boards.entry(seat.director_id).or_default().push(seat.company_id);
    }
    let mut shared: HashMap<(CompanyId, CompanyId), BTreeSet<DirectorId>> = HashMap::new();
    for (director, mut companies) in boards {
        if companies.len() < 2 {
            continue;
        }
        companies.sort_unstable();
        for (i, &a) in companies.iter().enumerate() {
            for &b in &companies[i + 1..] {
                shared.entry((a, b)).or_default().insert(director);
            }
        }
    }
    let mut out: Vec<Interlock> = shared
        .into_iter()
        .filter(|(_, ds)| ds.len() >= min_shared)
        .map(|((company_a, company_b), shared_directors)| Interlock {
            company_a,
            company_b,
            count: shared_directors.len(),
            shared_directors,
        })
        .collect();
    out.sort_by(|x, y| {
        y.count
            .cmp(&x.count)
            .then((x.company_a, x.company_b).cmp(&(y.company_a, y.company_b)))
    });
    Ok(out)
}
