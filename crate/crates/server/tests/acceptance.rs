//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Run with `cargo test -p boardgraph-server --test acceptance`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod common;

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use boardgraph_core::analytics::{
    company_directors, director_detail, gender_power, influence_by_country, tenure_summary,
    tenure_vs_peers,
};
use boardgraph_core::graph::{build_graph, company_interlocks, shortest_path};
use boardgraph_core::ingest::{build_snapshot, HeaderMapping};
use boardgraph_core::model::{
    inf_prev4_avg, CompanyId, DirectorId, Gender, League, ProfileSource, SeatRecord,
    INF_COMPLETE_YEARS,
};
use boardgraph_core::synth::{generate, AnomalyRates, SynthConfig, SynthOutput};
use boardgraph_core::{FilterSpec, Snapshot};
use boardgraph_server::{AppState, VERSION_HEADER};
use common::{fixture_snapshot, saved};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err(format!($($arg)+));
        }
    };
}

fn ingest(out: &SynthOutput) -> Snapshot {
    build_snapshot(
        out.dif_csv.as_slice(),
        out.bce_csv.as_slice(),
        out.truth.config.reference_year,
        &HeaderMapping::default(),
    )
    .expect("synthetic corpus ingests")
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

const PAPER_SEATS: usize = 80_610;
const PAPER_INF_LONG: usize = 322_440;
const PAPER_EDGES: usize = 1_160_000;

fn table1_accounting() -> Outcome {
    ensure!(PAPER_INF_LONG == 4 * PAPER_SEATS, "reference identity broken");
    let mut config = SynthConfig {
        seed: 2022,
        companies: 8939,
        board_min: 13,
        board_max: 20,
        female_fraction: 0.25,
        ..Default::default()
    };
    config.anomaly_rates.edges_only_director = 0.457;
    let out = generate(&config).map_err(|e| e.to_string())?;
    let started = Instant::now();
    let snap = ingest(&out);
    let elapsed = started.elapsed();
    let seats = snap.seats().len();
    ensure!(
        seats.abs_diff(PAPER_SEATS) * 100 <= PAPER_SEATS,
        "{seats} seats is not paper scale"
    );
    ensure!(
        snap.edges().len().abs_diff(PAPER_EDGES) * 50 <= PAPER_EDGES,
        "{} edges is not paper scale",
        snap.edges().len()
    );
    ensure!(
        snap.seats()
            .iter()
            .all(|s| INF_COMPLETE_YEARS.iter().all(|y| s.inf_by_year.get(*y).is_some())),
        "a seat lacks a prior-year influence value"
    );
    ensure!(
        snap.inf_long().len() == 4 * seats,
        "inf_long {} != 4 x {seats}",
        snap.inf_long().len()
    );
    ensure!(elapsed < Duration::from_secs(60), "ingest took {elapsed:?}");
    Ok(format!(
        "inf_long {} = 4 x {seats} seats, {} edges, ingest {:.2}s",
        snap.inf_long().len(),
        snap.edges().len(),
        elapsed.as_secs_f64()
    ))
}

fn buffett_fixture() -> Outcome {
    let snap = fixture_snapshot("buffett");
    let d = director_detail(&snap, DirectorId(1001)).map_err(|e| e.to_string())?;
    let bh = d
        .seats
        .iter()
        .find(|s| s.company_name == "BERKSHIRE HATHAWAY INC.")
        .ok_or("no Berkshire seat")?;
    let today = format!("{:.2}", bh.inf_today.unwrap_or(f64::NAN));
    let avg = format!("{:.2}", bh.inf_avg.unwrap_or(f64::NAN));
    ensure!(today == "64.13", "INF Today {today}");
    ensure!(avg == "64.39", "INF Avg {avg}");
    ensure!(d.company_count == 4, "# Companies {}", d.company_count);
    let conns: Vec<String> = d
        .connections
        .iter()
        .map(|c| format!("{}|{}|{:.2}", c.company_name, c.connected_director_name, c.overlap))
        .collect();
    let want = [
        "THE COCA-COLA COMPANY|Herbert Allen|17.30",
        "THE COCA-COLA COMPANY|Ronald Allen|15.30",
        "THE COCA-COLA COMPANY|Cathleen Black|12.60",
    ];
    ensure!(conns == want, "connections {conns:?}");
    Ok(format!("INF Today {today}, INF Avg {avg}, 4 companies, overlaps 17.30/15.30/12.60"))
}

fn heidelberg_arithmetic() -> Outcome {
    let snap = fixture_snapshot("heidelberg");
    let rows = company_directors(&snap, CompanyId(601)).map_err(|e| e.to_string())?;
    let tenures: Vec<f64> = rows.iter().filter_map(|r| r.tenure).collect();
    ensure!(tenures.len() == 12, "{} tenures", tenures.len());
    let mean = tenures.iter().sum::<f64>() / 12.0;
    let total: f64 = rows.iter().filter_map(|r| r.inf_today).sum();
    let de = gender_power(&snap, &FilterSpec::all())
        .into_iter()
        .find(|g| g.country == "DE")
        .ok_or("no DE row")?;
    ensure!((mean - 7.0833).abs() <= 1e-4, "mean tenure {mean}");
    ensure!((total - 100.0).abs() <= 0.01, "board INF {total}");
    ensure!(
        format!("{:.4}", de.seat_share_female) == "0.5000",
        "female seat share {}",
        de.seat_share_female
    );
    ensure!(
        (de.inf_share_female - 0.1838).abs() <= 1e-4,
        "female INF share {}",
        de.inf_share_female
    );
    Ok(format!(
        "mean tenure {mean:.4}, INF {total:.2}, seat share {:.4}, INF share {:.4}",
        de.seat_share_female, de.inf_share_female
    ))
}

fn prior_year_averages() -> Outcome {
    let snap = fixture_snapshot("malone");
    let avg = |id: u64| {
        snap.seats_of_company(CompanyId(id))
            .next()
            .and_then(inf_prev4_avg)
            .unwrap_or(f64::NAN)
    };
    let (qurate, liberty) = (avg(803), avg(802));
    ensure!((qurate - 59.565).abs() <= 1e-3, "QURATE {qurate}");
    ensure!((liberty - 9.575).abs() <= 1e-3, "LIBERTY GLOBAL {liberty}");
    Ok(format!("QURATE {qurate:.3}, LIBERTY GLOBAL {liberty:.3}"))
}

fn random_config(seed: u64) -> SynthConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let board_min = rng.random_range(1..=6);
    SynthConfig {
        seed,
        companies: rng.random_range(1..=50),
        board_min,
        board_max: board_min + rng.random_range(0..=6),
        multi_seat_fraction: rng.random_range(0.0..0.5),
        female_fraction: rng.random_range(0.0..=1.0),
        anomaly_rates: AnomalyRates {
            duplicate_edge: rng.random_range(0.0..0.5),
            swapped_nodes: rng.random_range(0.0..=1.0),
            edges_only_director: rng.random_range(0.0..0.4),
            mismatched_company_fields: rng.random_range(0.0..0.5),
            self_loop: rng.random_range(0.0..0.2),
        },
        inf_normalized_per_company: rng.random_bool(0.5),
        reference_year: 2022,
    }
}

fn seat_passes(snap: &Snapshot, f: &FilterSpec, s: &SeatRecord) -> bool {
    let Some(c) = snap.company(s.company_id) else {
        return false;
    };
    let gender = snap.director(s.director_id).map_or(Gender::Unknown, |d| d.gender);
    f.sectors.as_ref().is_none_or(|x| x.contains(&c.sector))
        && f.countries.as_ref().is_none_or(|x| x.contains(&c.hq_country))
        && f.leagues.as_ref().is_none_or(|x| x.contains(&c.league))
        && f.genders.as_ref().is_none_or(|x| x.contains(&gender))
        && f.family_firm.is_none_or(|want| want == s.family)
}

fn oracle_filters() -> Vec<FilterSpec> {
    vec![
        FilterSpec::all(),
        FilterSpec::all().with_leagues([League::Mega]),
        FilterSpec::all().with_genders([Gender::Female]),
        FilterSpec::all().with_family_firm(true),
        FilterSpec::all()
            .with_countries(["US"])
            .with_leagues([League::Large, League::Mega]),
    ]
}

/// Largest relative error between the query results and brute-force folds.
fn aggregate_error(snap: &Snapshot, f: &FilterSpec) -> Result<f64, String> {
    let mut worst: f64 = 0.0;
    let mut note = |a: f64, b: f64| worst = worst.max(rel_err(a, b));

    let mut tenure: BTreeMap<League, (f64, usize)> = BTreeMap::new();
    let mut gender: BTreeMap<&str, (usize, usize, f64, f64)> = BTreeMap::new();
    let mut trend: BTreeMap<(&str, i32), (f64, usize)> = BTreeMap::new();
    for s in snap.seats().iter().filter(|s| seat_passes(snap, f, s)) {
        let c = snap.company(s.company_id).expect("seat company");
        if let Some(t) = s.tenure {
            let e = tenure.entry(c.league).or_default();
            e.0 += t;
            e.1 += 1;
        }
        let g = snap.director(s.director_id).map_or(Gender::Unknown, |d| d.gender);
        if let (Some(inf), true) = (s.inf_today, g != Gender::Unknown) {
            let e = gender.entry(c.hq_country.as_str()).or_default();
            e.0 += 1;
            e.2 += inf;
            if g == Gender::Female {
                e.1 += 1;
                e.3 += inf;
            }
        }
        for y in INF_COMPLETE_YEARS {
            if let Some(v) = s.inf_by_year.get(y) {
                let e = trend.entry((c.hq_country.as_str(), y)).or_default();
                e.0 += v;
                e.1 += 1;
            }
        }
    }

    let got = tenure_summary(snap, f);
    ensure!(got.per_league.len() == tenure.len(), "tenure league count");
    for (l, (sum, n)) in &tenure {
        let cell = got.per_league[l];
        ensure!(cell.seat_count == *n, "tenure seat count for {l:?}");
        note(cell.mean_tenure, sum / *n as f64);
    }

    gender.retain(|_, a| a.2 > 0.0);
    let got = gender_power(snap, f);
    ensure!(got.len() == gender.len(), "gender country count");
    for g in &got {
        let a = gender[g.country.as_str()];
        ensure!(g.seat_count == a.0, "gender seat count for {}", g.country);
        note(g.seat_share_female, a.1 as f64 / a.0 as f64);
        note(g.inf_share_female, a.3 / a.2);
    }

    for c in influence_by_country(snap, f) {
        for p in &c.trend {
            let (sum, n) = trend[&(c.country.as_str(), p.year)];
            note(p.mean_inf, sum / n as f64);
        }
    }

    if f.is_unrestricted() {
        for (id, target) in snap.companies() {
            let Ok(got) = tenure_vs_peers(snap, *id) else { continue };
            let peer: Vec<f64> = snap
                .companies()
                .values()
                .filter(|c| {
                    c.company_id != *id
                        && c.league == target.league
                        && c.hq_country == target.hq_country
                        && c.family_firm == target.family_firm
                })
                .flat_map(|c| snap.seats_of_company(c.company_id).filter_map(|s| s.tenure))
                .collect();
            ensure!(got.peer_seats == peer.len(), "peer seats for {id}");
            if let Some(m) = got.peer_mean {
                note(m, peer.iter().sum::<f64>() / peer.len() as f64);
            }
        }
        let g = build_graph(snap, f);
        let mut weight: HashMap<DirectorId, f64> = HashMap::new();
        for e in snap.edges() {
            *weight.entry(e.a).or_default() += e.overlap;
            *weight.entry(e.b).or_default() += e.overlap;
        }
        ensure!(g.node_count() == weight.len(), "graph node count");
        for (id, w) in weight {
            note(g.total_overlap(id).unwrap_or(f64::NAN), w);
        }
    }
    Ok(worst)
}

fn bfs(adj: &HashMap<DirectorId, Vec<DirectorId>>, src: DirectorId) -> HashMap<DirectorId, usize> {
    let mut dist = HashMap::from([(src, 0)]);
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        let d = dist[&u];
        for &v in adj.get(&u).map(Vec::as_slice).unwrap_or_default() {
            if let std::collections::hash_map::Entry::Vacant(slot) = dist.entry(v) {
                slot.insert(d + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

fn oracle_equivalence() -> Outcome {
    let mut pairs_checked = 0usize;
    let mut connected = 0usize;
    let mut worst: f64 = 0.0;
    for seed in 0..100u64 {
        let config = random_config(seed);
        let out = generate(&config).map_err(|e| e.to_string())?;
        let snap = ingest(&out);
        let t = &out.truth.counts;
        let stubs = snap
            .directors()
            .values()
            .filter(|d| d.source == ProfileSource::EdgesOnly)
            .count();
        let got = (
            snap.seats().len(),
            snap.directors().len(),
            stubs,
            snap.companies().len(),
            snap.edges().len(),
            snap.inf_long().len(),
        );
        let want = (t.seats, t.directors, t.edges_only_directors, t.companies, t.edges, t.inf_long_rows);
        ensure!(got == want, "seed {seed}: counts {got:?} != truth {want:?}");

        let mut adj: HashMap<DirectorId, Vec<DirectorId>> = HashMap::new();
        for e in snap.edges() {
            adj.entry(e.a).or_default().push(e.b);
            adj.entry(e.b).or_default().push(e.a);
        }
        let ids: Vec<DirectorId> = snap.directors().keys().copied().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let mut cache: HashMap<DirectorId, HashMap<DirectorId, usize>> = HashMap::new();
        for _ in 0..1000 {
            let from = ids[rng.random_range(0..ids.len())];
            let to = ids[rng.random_range(0..ids.len())];
            let want = cache.entry(to).or_insert_with(|| bfs(&adj, to)).get(&from).copied();
            let got = shortest_path(&snap, from, to, &FilterSpec::all())
                .map_err(|e| e.to_string())?
                .map(|p| p.hop_count());
            ensure!(got == want, "seed {seed}: {from}->{to} hops {got:?}, oracle {want:?}");
            pairs_checked += 1;
            connected += usize::from(want.is_some());
        }

        for f in oracle_filters() {
            let err = aggregate_error(&snap, &f).map_err(|e| format!("seed {seed}: {e}"))?;
            ensure!(err <= 1e-9, "seed {seed}: relative error {err:e} under {f:?}");
            worst = worst.max(err);
        }
    }
    Ok(format!(
        "100 graphs, {pairs_checked} pairs ({connected} connected), counts exact, max aggregate rel err {worst:.1e}"
    ))
}

fn defect_tolerance() -> Outcome {
    let config = SynthConfig {
        seed: 404,
        companies: 40,
        board_min: 3,
        board_max: 12,
        multi_seat_fraction: 0.2,
        anomaly_rates: AnomalyRates {
            swapped_nodes: 1.0,
            duplicate_edge: 0.3,
            edges_only_director: 0.2,
            ..Default::default()
        },
        ..Default::default()
    };
    let out = generate(&config).map_err(|e| e.to_string())?;
    let snap = build_snapshot(
        out.dif_csv.as_slice(),
        out.bce_csv.as_slice(),
        2022,
        &HeaderMapping::default(),
    )
    .map_err(|e| format!("ingest failed: {e}"))?;
    ensure!(
        snap.edges().len() == out.truth.counts.edges,
        "edges {} != truth {}",
        snap.edges().len(),
        out.truth.counts.edges
    );
    let stubs: Vec<DirectorId> = snap
        .directors()
        .values()
        .filter(|d| d.source == ProfileSource::EdgesOnly)
        .map(|d| d.director_id)
        .collect();
    ensure!(!stubs.is_empty(), "no edges-only directors injected");
    ensure!(
        stubs == out.truth.injected.edges_only_director_ids,
        "edges-only set differs from truth"
    );
    for id in &stubs {
        let d = director_detail(&snap, *id).map_err(|e| format!("{id}: {e}"))?;
        ensure!(!d.connections.is_empty(), "{id} has no connections");
    }
    Ok(format!(
        "{} raw rows -> {} edges, {} edges-only directors resolve",
        out.truth.counts.bce_rows,
        snap.edges().len(),
        stubs.len()
    ))
}

struct Expect {
    snapshot_id: String,
    seats: u64,
    network_nodes: u64,
    probe_name: String,
}

fn expect_for(snap: &Snapshot, snapshot_id: &str, probe: DirectorId) -> Expect {
    Expect {
        snapshot_id: snapshot_id.to_string(),
        seats: snap.seats().len() as u64,
        network_nodes: build_graph(snap, &FilterSpec::all().with_leagues([League::Mega])).node_count() as u64,
        probe_name: snap.director(probe).map(|d| d.full_name.clone()).unwrap_or_default(),
    }
}

/// Returns a description of the first inconsistency in one response.
fn inconsistency(kind: usize, header: Option<u64>, body: &Value, expect: &HashMap<u64, Expect>) -> Option<String> {
    let version = body["version"].as_u64()?;
    if header != Some(version) {
        return Some(format!("header {header:?} vs body {version}"));
    }
    let Some(e) = expect.get(&version) else {
        return Some(format!("unknown version {version}"));
    };
    if body["snapshot_id"] != e.snapshot_id.as_str() {
        return Some(format!("version {version} carries a foreign snapshot id"));
    }
    let data = &body["data"];
    let ok = match kind {
        0 => data["counts"]["seats"] == e.seats,
        1 => data["total_nodes"] == e.network_nodes,
        _ => data["profile"]["full_name"] == e.probe_name.as_str(),
    };
    (!ok).then(|| format!("version {version} response carries the other snapshot's data"))
}

fn reload_atomicity() -> Outcome {
    const REQUESTS: usize = 1200;
    let probe = DirectorId(10_000);
    let corpus = |seed| {
        let config = SynthConfig {
            seed,
            companies: 400,
            board_min: 5,
            board_max: 12,
            multi_seat_fraction: 0.2,
            ..Default::default()
        };
        ingest(&generate(&config).expect("valid config"))
    };
    let (first, second) = (corpus(1), corpus(2));
    let (dir_a, dir_b) = (saved(&first), saved(&second));
    let id = |dir: &std::path::Path| {
        boardgraph_core::store::read_manifest(dir)
            .expect("manifest")
            .snapshot_id
    };
    let expect: HashMap<u64, Expect> = HashMap::from([
        (1, expect_for(&first, &id(dir_a.path()), probe)),
        (2, expect_for(&second, &id(dir_b.path()), probe)),
    ]);
    ensure!(expect[&1].seats != expect[&2].seats, "snapshots not distinguishable");
    ensure!(expect[&1].probe_name != expect[&2].probe_name, "probe not distinguishable");

    let runtime = tokio::runtime::Builder::new_multi_thread()
        .worker_threads(4)
        .enable_all()
        .build()
        .map_err(|e| e.to_string())?;
    runtime.block_on(async move {
        let state = AppState::load(&common::config(dir_a.path())).map_err(|e| e.to_string())?;
        let listener = tokio::net::TcpListener::bind("127.0.0.1:0")
            .await
            .map_err(|e| e.to_string())?;
        let addr = listener.local_addr().map_err(|e| e.to_string())?;
        let (stop, stopped) = tokio::sync::oneshot::channel::<()>();
        let server = tokio::spawn(boardgraph_server::serve_with_listener(
            listener,
            state.clone(),
            None,
            async {
                let _ = stopped.await;
            },
        ));

        let client = reqwest::Client::new();
        let first_done = Arc::new(tokio::sync::Notify::new());
        let (reloaded_tx, reloaded_rx) = tokio::sync::watch::channel(false);
        let in_flight = Arc::new(AtomicUsize::new(0));
        let peak = Arc::new(AtomicUsize::new(0));
        let mut tasks = tokio::task::JoinSet::new();
        for i in 0..REQUESTS {
            let client = client.clone();
            let first_done = first_done.clone();
            let mut reloaded = reloaded_rx.clone();
            let (in_flight, peak) = (in_flight.clone(), peak.clone());
            tasks.spawn(async move {
                // The second half only starts once the swap has happened.
                if i % 2 == 1 {
                    let _ = reloaded.wait_for(|done| *done).await;
                }
                let kind = i % 3;
                let path = match kind {
                    0 => "/api/meta".to_string(),
                    1 => "/api/network?league=Mega".to_string(),
                    _ => format!("/api/director/{}", probe.0),
                };
                let now = in_flight.fetch_add(1, Ordering::SeqCst) + 1;
                peak.fetch_max(now, Ordering::SeqCst);
                let resp = client.get(format!("http://{addr}{path}")).send().await;
                in_flight.fetch_sub(1, Ordering::SeqCst);
                first_done.notify_one();
                let resp = resp.map_err(|e| e.to_string())?;
                let header = resp
                    .headers()
                    .get(VERSION_HEADER)
                    .and_then(|v| v.to_str().ok())
                    .and_then(|v| v.parse::<u64>().ok());
                let body: Value = resp.json().await.map_err(|e| e.to_string())?;
                Ok::<_, String>((kind, header, body))
            });
        }

        first_done.notified().await;
        let reload = state
            .reload(Some(dir_b.path()))
            .await
            .map_err(|e| e.to_string())?;
        let _ = reloaded_tx.send(true);
        ensure!(reload.version == 2, "reload produced version {}", reload.version);

        let mut per_version: BTreeMap<u64, usize> = BTreeMap::new();
        let mut mixed = Vec::new();
        while let Some(joined) = tasks.join_next().await {
            let (kind, header, body) = joined.map_err(|e| e.to_string())??;
            if let Some(problem) = inconsistency(kind, header, &body, &expect) {
                mixed.push(problem);
            }
            if let Some(v) = body["version"].as_u64() {
                *per_version.entry(v).or_default() += 1;
            }
        }
        let _ = stop.send(());
        server
            .await
            .map_err(|e| e.to_string())?
            .map_err(|e| e.to_string())?;

        ensure!(mixed.is_empty(), "{} mixed responses, first: {}", mixed.len(), mixed[0]);
        ensure!(
            per_version.values().sum::<usize>() == REQUESTS,
            "responses {per_version:?}"
        );
        ensure!(
            per_version.contains_key(&1) && per_version.contains_key(&2),
            "reload not spanned: {per_version:?}"
        );
        Ok(format!(
            "{REQUESTS} requests (peak {} in flight), v1={} v2={}, 0 mixed",
            peak.load(Ordering::SeqCst),
            per_version[&1],
            per_version[&2]
        ))
    })
}

fn planted_findings() -> Outcome {
    let snap = fixture_snapshot("findings");
    let norway = gender_power(&snap, &FilterSpec::all())
        .into_iter()
        .find(|g| g.country == "NO")
        .ok_or("no Norway row")?;
    ensure!(norway.power_gap > 0.0, "Norway gap {}", norway.power_gap);
    let peers = tenure_vs_peers(&snap, CompanyId(711)).map_err(|e| e.to_string())?;
    let ratio = peers.ratio.ok_or("no peer ratio")?;
    ensure!((ratio - 2.0).abs() <= 0.01, "tenure ratio {ratio}");
    let triple = company_interlocks(&snap, 3).map_err(|e| e.to_string())?;
    let pairs: Vec<(u64, u64)> = triple.iter().map(|i| (i.company_a.0, i.company_b.0)).collect();
    ensure!(
        pairs == [(721, 722), (721, 723), (722, 723)],
        "interlocks at 3: {pairs:?}"
    );
    Ok(format!(
        "Norway gap {:.4}, tenure ratio {ratio:.4}, triple {{721, 722, 723}} found",
        norway.power_gap
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("inf_long accounting at paper scale", table1_accounting),
        ("Buffett director detail fixture", buffett_fixture),
        ("HeidelbergCement board arithmetic", heidelberg_arithmetic),
        ("prior-year influence averaging", prior_year_averages),
        ("oracle equivalence on 100 synthetic graphs", oracle_equivalence),
        ("defect tolerance", defect_tolerance),
        ("reload atomicity under concurrent reads", reload_atomicity),
        ("planted findings detected", planted_findings),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{}] {name} ({secs:.2}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
