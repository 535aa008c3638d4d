#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use boardgraph_core::ingest::build_snapshot_from_paths;
use boardgraph_core::store;
use boardgraph_core::Snapshot;
use boardgraph_server::{router, AppState, RenderCap, ServerConfig};
use serde_json::Value;
use tempfile::TempDir;
use tower::ServiceExt;

pub fn fixture_snapshot(name: &str) -> Snapshot {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    build_snapshot_from_paths(&dir.join("dif.csv"), &dir.join("bce.csv"), 2022, None).unwrap()
}

pub fn saved(snapshot: &Snapshot) -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    store::save(snapshot, dir.path()).unwrap();
    dir
}

pub fn config(dir: &Path) -> ServerConfig {
    ServerConfig::new("127.0.0.1:0".parse().unwrap(), dir)
}

pub fn app_with(dir: &Path, cap: RenderCap, token: Option<&str>) -> (Arc<AppState>, Router) {
    let mut cfg = config(dir);
    cfg.render_cap = cap;
    cfg.reload_token = token.map(str::to_string);
    let state = AppState::load(&cfg).unwrap();
    let app = router(state.clone(), None).unwrap();
    (state, app)
}

pub fn app(dir: &Path) -> (Arc<AppState>, Router) {
    app_with(dir, RenderCap::default(), None)
}

pub async fn send(app: &Router, req: Request<Body>) -> (StatusCode, Option<u64>, Vec<u8>) {
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let version = resp
        .headers()
        .get(boardgraph_server::VERSION_HEADER)
        .map(|v| v.to_str().unwrap().parse().unwrap());
    let body = axum::body::to_bytes(resp.into_body(), usize::MAX).await.unwrap();
    (status, version, body.to_vec())
}

pub async fn get_raw(app: &Router, uri: &str) -> (StatusCode, Option<u64>, Vec<u8>) {
    send(app, Request::get(uri).body(Body::empty()).unwrap()).await
}

pub async fn get(app: &Router, uri: &str) -> (StatusCode, Value) {
    let (status, _, body) = get_raw(app, uri).await;
    (status, serde_json::from_slice(&body).unwrap())
}
