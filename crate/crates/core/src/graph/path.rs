use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::edge_passes;
use crate::error::QueryError;
use crate::filter::FilterSpec;
use crate::model::{CompanyId, DirectorId};
use crate::snapshot::Snapshot;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hop {
    pub from: DirectorId,
    pub to: DirectorId,
    pub company_id: CompanyId,
    pub overlap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathResult {
    /// Directors visited, endpoints included.
    pub directors: Vec<DirectorId>,
    pub hops: Vec<Hop>,
}

impl PathResult {
    pub fn hop_count(&self) -> usize {
        self.hops.len()
    }
}

/// Minimum-hop connection between two directors over the filtered graph.
///
/// Among equally short paths the lexicographically smallest director
/// sequence wins; each hop names the company with the largest overlap for
/// that pair (smallest company id on ties). `Ok(None)` when disconnected.
pub fn shortest_path(
    snapshot: &Snapshot,
    from: DirectorId,
    to: DirectorId,
    filter: &FilterSpec,
) -> Result<Option<PathResult>, QueryError> {
    if snapshot.director(from).is_none() {
        return Err(QueryError::UnknownDirector {
            id: from,
            endpoint: "from",
        });
    }
    if snapshot.director(to).is_none() {
        return Err(QueryError::UnknownDirector {
            id: to,
            endpoint: "to",
        });
    }
    if from == to {
        return Ok(Some(PathResult {
            directors: vec![from],
            hops: Vec::new(),
        }));
    }

    let mut company_ok = HashMap::new();
    let neighbors = |id: DirectorId, company_ok: &mut HashMap<CompanyId, bool>| {
        snapshot
            .edges_of(id)
            .filter(|e| edge_passes(snapshot, filter, e, company_ok))
            .map(|e| e.other(id))
            .collect::<Vec<_>>()
    };

    // Distances to `to`. Stopping as soon as `from` is reached is enough:
    // every node closer to `to` than `from` has been labelled by then.
    let mut dist: HashMap<DirectorId, usize> = HashMap::from([(to, 0)]);
    let mut queue = VecDeque::from([to]);
    'bfs: while let Some(u) = queue.pop_front() {
        let d = dist[&u];
        for v in neighbors(u, &mut company_ok) {
            if dist.contains_key(&v) {
                continue;
            }
            dist.insert(v, d + 1);
            if v == from {
                break 'bfs;
            }
            queue.push_back(v);
        }
    }
    let Some(&total) = dist.get(&from) else {
        return Ok(None);
    };

    let mut directors = vec![from];
    let mut hops = Vec::with_capacity(total);
    let mut cur = from;
    for remaining in (0..total).rev() {
        let next = neighbors(cur, &mut company_ok)
            .into_iter()
            .filter(|v| dist.get(v) == Some(&remaining))
            .min()
            .expect("bfs labelling guarantees a closer neighbor");
        let (company_id, overlap) = snapshot
            .edges_of(cur)
            .filter(|e| e.other(cur) == next && edge_passes(snapshot, filter, e, &mut company_ok))
            .map(|e| (e.company_id, e.overlap))
            .max_by(|(ca, oa), (cb, ob)| oa.total_cmp(ob).then(cb.cmp(ca)))
            .expect("neighbor implies an edge");
        hops.push(Hop {
            from: cur,
            to: next,
            company_id,
            overlap,
        });
        directors.push(next);
        cur = next;
    }
    Ok(Some(PathResult { directors, hops }))
}
