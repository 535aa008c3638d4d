//! Undirected co-service graph: edge normalization, filtered director
//! graphs with overlap weights, clusters, shortest paths and company
//! interlocks.

mod components;
mod interlock;
mod path;

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

pub use components::{clusters, Cluster, DisjointSet};
pub use interlock::{company_interlocks, Interlock};
pub use path::{shortest_path, Hop, PathResult};

use crate::filter::FilterSpec;
use crate::ingest::BCE_FILE;
use crate::model::{CompanyId, ConnectionEdge, DiagCode, Diagnostic, DirectorId, RawEdgeRow};
use crate::snapshot::Snapshot;

/// Canonicalize raw connection rows: order each pair so `a < b`, drop
/// self-loops, merge repeated (company, a, b) rows keeping the largest
/// overlap. Output is sorted by (company, a, b); diagnostics by line.
pub fn normalize_edges(raw: &[RawEdgeRow]) -> (Vec<ConnectionEdge>, Vec<Diagnostic>) {
    let mut diagnostics = Vec::new();
    let mut keyed: Vec<(ConnectionEdge, u64)> = Vec::with_capacity(raw.len());
    for row in raw {
        if row.n1_id == row.n2_id {
            diagnostics.push(Diagnostic::new(
                BCE_FILE,
                row.line,
                DiagCode::SelfLoop,
                format!(
                    "director {} paired with itself at company {}; dropped",
                    row.n1_id, row.company_id
                ),
            ));
            continue;
        }
        let (a, b) = if row.n1_id < row.n2_id {
            (row.n1_id, row.n2_id)
        } else {
            (row.n2_id, row.n1_id)
        };
        keyed.push((
            ConnectionEdge {
                company_id: row.company_id,
                a,
                b,
                overlap: row.overlap,
            },
            row.line,
        ));
    }
    keyed.sort_by(|(x, xl), (y, yl)| {
        (x.company_id, x.a, x.b, xl).cmp(&(y.company_id, y.a, y.b, yl))
    });

    let mut edges: Vec<ConnectionEdge> = Vec::with_capacity(keyed.len());
    for (edge, line) in keyed {
        match edges.last_mut() {
            Some(last)
                if (last.company_id, last.a, last.b) == (edge.company_id, edge.a, edge.b) =>
            {
                diagnostics.push(Diagnostic::new(
                    BCE_FILE,
                    line,
                    DiagCode::DuplicateEdge,
                    format!(
                        "pair ({}, {}) at company {} repeated; kept max overlap",
                        edge.a, edge.b, edge.company_id
                    ),
                ));
                last.overlap = last.overlap.max(edge.overlap);
            }
            _ => edges.push(edge),
        }
    }
    diagnostics.sort_by_key(|d| d.line);
    (edges, diagnostics)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NodeWeight {
    /// Sum of overlap over every surviving (company, pair) edge at this node.
    pub total_overlap: f64,
    /// Number of distinct neighbors.
    pub degree: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairEdge {
    pub avg_overlap: f64,
    /// Overlap per company justifying this pair.
    pub companies: BTreeMap<CompanyId, f64>,
}

/// Adjacency view over the edges that survive a filter.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectorGraph {
    nodes: BTreeMap<DirectorId, NodeWeight>,
    pairs: BTreeMap<(DirectorId, DirectorId), PairEdge>,
    filter: FilterSpec,
}

impl DirectorGraph {
    fn from_edges<'a>(edges: impl Iterator<Item = &'a ConnectionEdge>, filter: FilterSpec) -> Self {
        let mut nodes: BTreeMap<DirectorId, NodeWeight> = BTreeMap::new();
        let mut pairs: BTreeMap<(DirectorId, DirectorId), PairEdge> = BTreeMap::new();
        for e in edges {
            for end in [e.a, e.b] {
                nodes
                    .entry(end)
                    .or_insert(NodeWeight {
                        total_overlap: 0.0,
                        degree: 0,
                    })
                    .total_overlap += e.overlap;
            }
            pairs
                .entry((e.a, e.b))
                .or_insert_with(|| PairEdge {
                    avg_overlap: 0.0,
                    companies: BTreeMap::new(),
                })
                .companies
                .insert(e.company_id, e.overlap);
        }
        for (&(a, b), pair) in pairs.iter_mut() {
            pair.avg_overlap =
                pair.companies.values().sum::<f64>() / pair.companies.len() as f64;
            for end in [a, b] {
                if let Some(n) = nodes.get_mut(&end) {
                    n.degree += 1;
                }
            }
        }
        DirectorGraph {
            nodes,
            pairs,
            filter,
        }
    }

    pub fn nodes(&self) -> &BTreeMap<DirectorId, NodeWeight> {
        &self.nodes
    }

    pub fn pairs(&self) -> &BTreeMap<(DirectorId, DirectorId), PairEdge> {
        &self.pairs
    }

    pub fn filter(&self) -> &FilterSpec {
        &self.filter
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Number of distinct director pairs (rendered lines).
    pub fn edge_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn total_overlap(&self, id: DirectorId) -> Option<f64> {
        self.nodes.get(&id).map(|n| n.total_overlap)
    }

    /// Undirected lookup: `(b, a)` finds the `(a, b)` entry.
    pub fn pair(&self, x: DirectorId, y: DirectorId) -> Option<&PairEdge> {
        self.pairs.get(&(x.min(y), x.max(y)))
    }

    /// Keep the highest-total-overlap nodes (ties by smaller id) and their
    /// induced edges, adding nodes until the next one would exceed either
    /// cap. Returns the graph unchanged with `false` when already within caps.
    pub fn truncate(&self, max_nodes: usize, max_edges: usize) -> (DirectorGraph, bool) {
        if self.node_count() <= max_nodes && self.edge_count() <= max_edges {
            return (self.clone(), false);
        }
        let mut ranked: Vec<(&DirectorId, &NodeWeight)> = self.nodes.iter().collect();
        ranked.sort_by(|(ia, wa), (ib, wb)| {
            wb.total_overlap
                .total_cmp(&wa.total_overlap)
                .then(ia.cmp(ib))
        });
        let mut neighbors: HashMap<DirectorId, Vec<DirectorId>> = HashMap::new();
        for &(a, b) in self.pairs.keys() {
            neighbors.entry(a).or_default().push(b);
            neighbors.entry(b).or_default().push(a);
        }
        let mut kept: std::collections::HashSet<DirectorId> = Default::default();
        let mut edge_total = 0usize;
        for (id, _) in ranked {
            if kept.len() == max_nodes {
                break;
            }
            let added = neighbors
                .get(id)
                .map_or(0, |ns| ns.iter().filter(|n| kept.contains(n)).count());
            if edge_total + added > max_edges {
                break;
            }
            edge_total += added;
            kept.insert(*id);
        }
        let edges: Vec<ConnectionEdge> = self
            .pairs
            .iter()
            .filter(|((a, b), _)| kept.contains(a) && kept.contains(b))
            .flat_map(|(&(a, b), p)| {
                p.companies.iter().map(move |(&company_id, &overlap)| ConnectionEdge {
                    company_id,
                    a,
                    b,
                    overlap,
                })
            })
            .collect();
        let mut g = DirectorGraph::from_edges(edges.iter(), self.filter.clone());
        // Node weights stay those of the filtered graph so sizes are comparable
        // with the untruncated view; survivors without induced edges remain.
        g.nodes = kept.iter().map(|id| (*id, self.nodes[id])).collect();
        (g, true)
    }
}

/// Edge-level filter test: the edge's company must match the company-level
/// fields and both endpoints must match the gender restriction.
pub(crate) fn edge_passes(
    snapshot: &Snapshot,
    filter: &FilterSpec,
    edge: &ConnectionEdge,
    company_ok: &mut HashMap<CompanyId, bool>,
) -> bool {
    let ok = *company_ok.entry(edge.company_id).or_insert_with(|| {
        snapshot
            .company(edge.company_id)
            .is_some_and(|c| filter.matches_company(c))
    });
    ok && (filter.genders.is_none()
        || (filter.matches_gender(snapshot.gender_of(edge.a))
            && filter.matches_gender(snapshot.gender_of(edge.b))))
}

/// Graph over the snapshot edges that survive `filter`.
pub fn build_graph(snapshot: &Snapshot, filter: &FilterSpec) -> DirectorGraph {
    let mut company_ok = HashMap::new();
    let edges = snapshot
        .edges()
        .iter()
        .filter(|e| edge_passes(snapshot, filter, e, &mut company_ok));
    DirectorGraph::from_edges(edges, filter.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CompanyProfile, DirectorProfile, Gender, League, Ownership, ProfileSource};
    use crate::snapshot::SnapshotParts;

    fn raw(c: u64, n1: u64, n2: u64, overlap: f64, line: u64) -> RawEdgeRow {
        RawEdgeRow {
            company_id: CompanyId(c),
            company_name: format!("C{c}"),
            n1_id: DirectorId(n1),
            n1_name: format!("D{n1}"),
            n2_id: DirectorId(n2),
            n2_name: format!("D{n2}"),
            overlap,
            line,
        }
    }

    #[test]
    fn swapped_duplicate_merges() {
        let (edges, diags) = normalize_edges(&[raw(1, 7, 3, 5.0, 2), raw(1, 3, 7, 5.0, 3)]);
        assert_eq!(
            edges,
            vec![ConnectionEdge {
                company_id: CompanyId(1),
                a: DirectorId(3),
                b: DirectorId(7),
                overlap: 5.0
            }]
        );
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, DiagCode::DuplicateEdge);
        assert_eq!(diags[0].line, 3);
    }

    #[test]
    fn self_loop_dropped() {
        let (edges, diags) = normalize_edges(&[raw(1, 4, 4, 2.0, 2)]);
        assert!(edges.is_empty());
        assert_eq!(diags[0].code, DiagCode::SelfLoop);
    }

    #[test]
    fn duplicate_keeps_max_overlap() {
        let (edges, _) = normalize_edges(&[raw(1, 1, 2, 3.0, 2), raw(1, 2, 1, 4.5, 3)]);
        assert_eq!(edges[0].overlap, 4.5);
    }

    #[test]
    fn us_steel_jackson_sorted_consistently() {
        // Jackson (19063) appears as N1 in some rows, N2 in others.
        let rows = vec![
            raw(9, 11, 19063, 5.0, 2),
            raw(9, 12, 19063, 4.0, 3),
            raw(9, 19063, 30001, 2.0, 4),
            raw(9, 19063, 30002, 1.0, 5),
        ];
        let (edges, diags) = normalize_edges(&rows);
        assert!(diags.is_empty());
        assert_eq!(edges.len(), 4);
        for e in &edges {
            assert!(e.touches(DirectorId(19063)));
            assert!(e.a < e.b);
        }
        assert_eq!(edges[0].b, DirectorId(19063));
        assert_eq!(edges[3].a, DirectorId(19063));
    }

    fn small_snapshot() -> Snapshot {
        let mut parts = SnapshotParts {
            reference_year: 2022,
            ..Default::default()
        };
        for id in 1..=5u64 {
            parts.directors.insert(
                DirectorId(id),
                DirectorProfile {
                    director_id: DirectorId(id),
                    full_name: format!("D{id}"),
                    gender: if id % 2 == 0 { Gender::Female } else { Gender::Male },
                    age: None,
                    co_served: false,
                    activist: false,
                    source: ProfileSource::EdgesOnly,
                },
            );
        }
        for (id, league) in [(1u64, League::Mega), (2, League::Small)] {
            parts.companies.insert(
                CompanyId(id),
                CompanyProfile {
                    company_id: CompanyId(id),
                    name: format!("C{id}"),
                    sector: "S".into(),
                    hq_country: "US".into(),
                    league_code: if league == League::Mega { 4 } else { 1 },
                    league,
                    ownership_category: Ownership::Unknown,
                    family_firm: false,
                },
            );
        }
        let (edges, _) = normalize_edges(&[
            raw(1, 1, 2, 12.6, 2),
            raw(1, 1, 3, 15.3, 3),
            raw(1, 1, 4, 17.3, 4),
            raw(2, 1, 2, 2.0, 5),
            raw(2, 4, 5, 1.0, 6),
        ]);
        parts.edges = edges;
        Snapshot::from_parts(parts)
    }

    #[test]
    fn weights_on_unfiltered_graph() {
        let s = small_snapshot();
        let g = build_graph(&s, &FilterSpec::all());
        assert_eq!(g.node_count(), 5);
        assert_eq!(g.edge_count(), 4);
        assert!((g.total_overlap(DirectorId(1)).unwrap() - 47.2).abs() < 1e-9);
        let p = g.pair(DirectorId(2), DirectorId(1)).unwrap();
        assert!((p.avg_overlap - 7.3).abs() < 1e-9);
        assert_eq!(p.companies.len(), 2);
    }

    #[test]
    fn league_filter_keeps_mega_only() {
        let s = small_snapshot();
        let g = build_graph(&s, &FilterSpec::all().with_leagues([League::Mega]));
        assert_eq!(g.edge_count(), 3);
        // Sum of the three connection overlaps of director 1.
        assert!((g.total_overlap(DirectorId(1)).unwrap() - 45.2).abs() < 1e-9);
        assert!(g.total_overlap(DirectorId(5)).is_none());
    }

    #[test]
    fn gender_filter_requires_both_endpoints() {
        let s = small_snapshot();
        let g = build_graph(&s, &FilterSpec::all().with_genders([Gender::Female]));
        assert_eq!(g.edge_count(), 0);
        let g = build_graph(&s, &FilterSpec::all().with_genders([Gender::Female, Gender::Male]));
        assert_eq!(g.edge_count(), 4);
    }

    #[test]
    fn truncate_keeps_heaviest() {
        let s = small_snapshot();
        let g = build_graph(&s, &FilterSpec::all());
        let (t, truncated) = g.truncate(2, 100);
        assert!(truncated);
        assert_eq!(t.node_count(), 2);
        assert!(t.nodes().contains_key(&DirectorId(1)));
        assert!(t.nodes().contains_key(&DirectorId(4)));
        assert_eq!(t.edge_count(), 1);
        let (same, truncated) = g.truncate(100, 100);
        assert!(!truncated);
        assert_eq!(same, g);
        let (t, _) = g.truncate(100, 1);
        assert!(t.edge_count() <= 1);
    }
}
