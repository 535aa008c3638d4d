#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::path::PathBuf;

use boardgraph_core::filter::FilterSpec;
use boardgraph_core::ingest::{build_snapshot, build_snapshot_from_paths, HeaderMapping};
use boardgraph_core::model::{CompanyId, DirectorId, Gender, SeatRecord};
use boardgraph_core::synth::{generate, SynthConfig, SynthOutput};
use boardgraph_core::Snapshot;

pub fn fixture(name: &str) -> Snapshot {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    build_snapshot_from_paths(&dir.join("dif.csv"), &dir.join("bce.csv"), 2022, None)
        .expect("fixture ingests")
}

pub fn synth_snapshot(config: &SynthConfig) -> (SynthOutput, Snapshot) {
    let out = generate(config).expect("valid config");
    let snap = build_snapshot(
        out.dif_csv.as_slice(),
        out.bce_csv.as_slice(),
        config.reference_year,
        &HeaderMapping::default(),
    )
    .expect("synthetic corpus ingests");
    (out, snap)
}

pub fn small_config(seed: u64) -> SynthConfig {
    SynthConfig {
        seed,
        companies: 12,
        board_min: 2,
        board_max: 7,
        multi_seat_fraction: 0.35,
        female_fraction: 0.4,
        ..Default::default()
    }
}

/// Filter test written against the documented semantics, independent of
/// `FilterSpec`'s own matchers.
pub fn company_passes(snap: &Snapshot, f: &FilterSpec, id: CompanyId, family: Option<bool>) -> bool {
    let Some(c) = snap.company(id) else { return false };
    if let Some(s) = &f.sectors {
        if !s.contains(&c.sector) {
            return false;
        }
    }
    if let Some(s) = &f.countries {
        if !s.contains(&c.hq_country) {
            return false;
        }
    }
    if let Some(s) = &f.leagues {
        if !s.contains(&c.league) {
            return false;
        }
    }
    if let Some(s) = &f.company_ids {
        if !s.contains(&id) {
            return false;
        }
    }
    match (f.family_firm, family) {
        (Some(want), Some(have)) => want == have,
        _ => true,
    }
}

pub fn gender_passes(f: &FilterSpec, g: Gender) -> bool {
    f.genders.as_ref().is_none_or(|s| s.contains(&g))
}

pub fn seat_passes(snap: &Snapshot, f: &FilterSpec, s: &SeatRecord) -> bool {
    company_passes(snap, f, s.company_id, Some(s.family))
        && gender_passes(f, snap.director(s.director_id).map_or(Gender::Unknown, |d| d.gender))
}

pub fn edge_adjacency(snap: &Snapshot, f: &FilterSpec) -> BTreeMap<DirectorId, BTreeSet<DirectorId>> {
    let mut adj: BTreeMap<DirectorId, BTreeSet<DirectorId>> = BTreeMap::new();
    for e in snap.edges() {
        let family = snap.company(e.company_id).map(|c| c.family_firm);
        let ga = snap.director(e.a).map_or(Gender::Unknown, |d| d.gender);
        let gb = snap.director(e.b).map_or(Gender::Unknown, |d| d.gender);
        if company_passes(snap, f, e.company_id, family) && gender_passes(f, ga) && gender_passes(f, gb) {
            adj.entry(e.a).or_default().insert(e.b);
            adj.entry(e.b).or_default().insert(e.a);
        }
    }
    adj
}

/// Full single-source BFS distances.
pub fn bfs_all(adj: &BTreeMap<DirectorId, BTreeSet<DirectorId>>, src: DirectorId) -> HashMap<DirectorId, usize> {
    let mut dist = HashMap::from([(src, 0usize)]);
    let mut q = VecDeque::from([src]);
    while let Some(u) = q.pop_front() {
        let d = dist[&u];
        for &v in adj.get(&u).into_iter().flatten() {
            if let std::collections::hash_map::Entry::Vacant(slot) = dist.entry(v) {
                slot.insert(d + 1);
                q.push_back(v);
            }
        }
    }
    dist
}

pub fn rel_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}
