//! HTTP+JSON query service over a persisted snapshot.
//!
//! Each request pins the snapshot version current when it starts and
//! answers entirely from it; reload builds the replacement off to the side
//! and swaps a single pointer, so no response mixes two versions.

mod api;
mod error;
mod json;

use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use arc_swap::ArcSwap;
use boardgraph_core::store::{self, Loaded};
use boardgraph_core::{Snapshot, StoreError};
use tokio::net::TcpListener;
use tokio::sync::Mutex;

pub use api::router;
pub use error::ApiError;

pub const VERSION_HEADER: &str = "x-snapshot-version";
pub const RELOAD_TOKEN_HEADER: &str = "x-reload-token";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderCap {
    pub max_nodes: usize,
    pub max_edges: usize,
}

impl Default for RenderCap {
    fn default() -> Self {
        RenderCap {
            max_nodes: 2000,
            max_edges: 5000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ServerConfig {
    pub listen: SocketAddr,
    pub snapshot_dir: PathBuf,
    pub render_cap: RenderCap,
    pub reload_token: Option<String>,
    /// Allowed browser origin; any origin when unset.
    pub cors_origin: Option<String>,
}

impl ServerConfig {
    pub fn new(listen: SocketAddr, snapshot_dir: impl Into<PathBuf>) -> Self {
        ServerConfig {
            listen,
            snapshot_dir: snapshot_dir.into(),
            render_cap: RenderCap::default(),
            reload_token: None,
            cors_origin: None,
        }
    }

    pub fn validate(&self) -> Result<(), ServerError> {
        if self.render_cap.max_nodes < 1 || self.render_cap.max_edges < 1 {
            return Err(ServerError::Config("render caps must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ServerError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot load snapshot from {path}: {source}")]
    Snapshot {
        path: PathBuf,
        #[source]
        source: StoreError,
    },
    #[error("cannot listen on {addr}: {source}")]
    Bind {
        addr: SocketAddr,
        #[source]
        source: std::io::Error,
    },
    #[error("server failed: {0}")]
    Io(#[from] std::io::Error),
}

/// One immutable served version.
#[derive(Debug)]
pub struct Versioned {
    pub version: u64,
    pub snapshot_id: String,
    pub snapshot: Snapshot,
}

#[derive(Debug)]
pub struct AppState {
    current: ArcSwap<Versioned>,
    reload_lock: Mutex<()>,
    snapshot_dir: PathBuf,
    render_cap: RenderCap,
    reload_token: Option<String>,
}

impl AppState {
    /// State serving the snapshot stored at `config.snapshot_dir`.
    pub fn load(config: &ServerConfig) -> Result<Arc<AppState>, ServerError> {
        config.validate()?;
        let Loaded { snapshot, manifest } =
            store::load(&config.snapshot_dir).map_err(|source| ServerError::Snapshot {
                path: config.snapshot_dir.clone(),
                source,
            })?;
        Ok(Arc::new(AppState {
            current: ArcSwap::from_pointee(Versioned {
                version: 1,
                snapshot_id: manifest.snapshot_id,
                snapshot,
            }),
            reload_lock: Mutex::new(()),
            snapshot_dir: config.snapshot_dir.clone(),
            render_cap: config.render_cap,
            reload_token: config.reload_token.clone(),
        }))
    }

    pub fn current(&self) -> Arc<Versioned> {
        self.current.load_full()
    }

    pub fn render_cap(&self) -> RenderCap {
        self.render_cap
    }

    fn token_matches(&self, presented: Option<&str>) -> bool {
        match &self.reload_token {
            None => true,
            Some(expected) => presented == Some(expected.as_str()),
        }
    }

    /// Load the snapshot at `dir` (default: the configured directory) and
    /// make it current. On failure the served version is untouched.
    pub async fn reload(&self, dir: Option<&Path>) -> Result<Arc<Versioned>, ReloadError> {
        let _guard = self
            .reload_lock
            .try_lock()
            .map_err(|_| ReloadError::Busy)?;
        let dir = dir.unwrap_or(&self.snapshot_dir).to_path_buf();
        let Loaded { snapshot, manifest } = tokio::task::spawn_blocking(move || store::load(&dir))
            .await
            .map_err(|e| ReloadError::Invalid(StoreError::Invalid(e.to_string())))?
            .map_err(ReloadError::Invalid)?;
        let next = Arc::new(Versioned {
            version: self.current.load().version + 1,
            snapshot_id: manifest.snapshot_id,
            snapshot,
        });
        self.current.store(next.clone());
        tracing::info!(version = next.version, snapshot_id = %next.snapshot_id, "snapshot reloaded");
        Ok(next)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ReloadError {
    #[error("a reload is already in progress")]
    Busy,
    #[error("snapshot rejected: {0}")]
    Invalid(StoreError),
}

/// Serve on an already-bound listener until `shutdown` resolves.
pub async fn serve_with_listener(
    listener: TcpListener,
    state: Arc<AppState>,
    cors_origin: Option<&str>,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> Result<(), ServerError> {
    let app = router(state, cors_origin)?;
    axum::serve(listener, app)
        .with_graceful_shutdown(shutdown)
        .await?;
    Ok(())
}

/// Load the snapshot, bind and serve until interrupted.
pub async fn serve(config: ServerConfig) -> Result<(), ServerError> {
    let state = AppState::load(&config)?;
    let listener = TcpListener::bind(config.listen)
        .await
        .map_err(|source| ServerError::Bind {
            addr: config.listen,
            source,
        })?;
    let current = state.current();
    tracing::info!(
        addr = %listener.local_addr()?,
        version = current.version,
        snapshot_id = %current.snapshot_id,
        "serving"
    );
    serve_with_listener(listener, state, config.cors_origin.as_deref(), async {
        let _ = tokio::signal::ctrl_c().await;
    })
    .await
}
