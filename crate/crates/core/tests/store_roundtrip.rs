mod common;

use std::fs;

use boardgraph_core::store::{load, read_manifest, save, snapshot_id};
use boardgraph_core::synth::SynthConfig;
use boardgraph_core::StoreError;
use common::{fixture, synth_snapshot};
use proptest::prelude::*;

fn dir_bytes(dir: &std::path::Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn save_load_save_is_byte_identical(seed in any::<u64>(), edges_only in 0.0..0.5f64, dup in 0.0..0.5f64) {
        let mut cfg = SynthConfig { seed, companies: 15, board_min: 1, board_max: 8, multi_seat_fraction: 0.3, ..Default::default() };
        cfg.anomaly_rates.edges_only_director = edges_only;
        cfg.anomaly_rates.duplicate_edge = dup;
        cfg.anomaly_rates.mismatched_company_fields = 0.5;
        let (_, snap) = synth_snapshot(&cfg);
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let m1 = save(&snap, a.path()).unwrap();
        let loaded = load(a.path()).unwrap();
        prop_assert_eq!(loaded.snapshot.parts(), snap.parts());
        let m2 = save(&loaded.snapshot, b.path()).unwrap();
        prop_assert_eq!(&m1, &m2);
        prop_assert_eq!(dir_bytes(a.path()), dir_bytes(b.path()));
        prop_assert_eq!(m1.snapshot_id, snapshot_id(&snap).unwrap());
    }
}

#[test]
fn figure_fixture_roundtrip() {
    for name in ["buffett", "heidelberg", "findings", "malone"] {
        let snap = fixture(name);
        let dir = tempfile::tempdir().unwrap();
        let manifest = save(&snap, dir.path()).unwrap();
        assert_eq!(read_manifest(dir.path()).unwrap(), manifest);
        assert_eq!(manifest.rows("seats"), Some(snap.seats().len()));
        assert_eq!(load(dir.path()).unwrap().snapshot.parts(), snap.parts());
    }
}

#[test]
fn distinct_content_distinct_id() {
    let (_, a) = synth_snapshot(&SynthConfig { seed: 1, ..Default::default() });
    let (_, b) = synth_snapshot(&SynthConfig { seed: 2, ..Default::default() });
    assert_ne!(snapshot_id(&a).unwrap(), snapshot_id(&b).unwrap());
}

#[test]
fn dangling_endpoint_is_rejected() {
    let snap = fixture("buffett");
    let dir = tempfile::tempdir().unwrap();
    save(&snap, dir.path()).unwrap();
    // Rewrite the edges table to point at an unknown director and fix up
    // the checksum so only the semantic check can catch it.
    let path = dir.path().join("edges.csv");
    let text = fs::read_to_string(&path).unwrap();
    let bad = text.replacen("1001", "9999", 1);
    assert_ne!(bad, text);
    fs::write(&path, &bad).unwrap();
    let mut manifest: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("manifest.json")).unwrap()).unwrap();
    use sha2::Digest;
    let digest = hex::encode(sha2::Sha256::digest(bad.as_bytes()));
    for t in manifest["tables"].as_array_mut().unwrap() {
        if t["name"] == "edges" {
            t["sha256"] = serde_json::Value::String(digest.clone());
        }
    }
    fs::write(dir.path().join("manifest.json"), serde_json::to_vec_pretty(&manifest).unwrap()).unwrap();
    match load(dir.path()) {
        Err(StoreError::Invalid(msg)) => assert!(msg.contains("9999"), "{msg}"),
        other => panic!("expected invalid snapshot, got {other:?}"),
    }
}
