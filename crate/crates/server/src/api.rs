use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, RawQuery, State};
use axum::http::{header, HeaderMap, HeaderName, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use boardgraph_core::analytics::{
    company_directors, director_detail, gender_power, influence_by_country, tenure_summary,
    tenure_vs_peers, PeerComparison,
};
use boardgraph_core::graph::{build_graph, company_interlocks, shortest_path, Hop};
use boardgraph_core::model::{CompanyId, CompanyProfile, DirectorId, ProfileSource};
use boardgraph_core::FilterSpec;
use serde::{Deserialize, Serialize};
use tower_http::cors::{AllowOrigin, CorsLayer};

use crate::error::ApiError;
use crate::json::envelope;
use crate::{AppState, ReloadError, ServerError, Versioned, RELOAD_TOKEN_HEADER, VERSION_HEADER};

/// Query parameters split into endpoint controls and filter fields.
struct Params {
    pairs: Vec<(String, String)>,
}

impl Params {
    fn parse(raw: Option<String>) -> Params {
        let pairs = raw
            .map(|q| {
                form_urlencoded::parse(q.as_bytes())
                    .into_owned()
                    .filter(|(k, _)| !k.is_empty())
                    .collect()
            })
            .unwrap_or_default();
        Params { pairs }
    }

    /// Remove every `key` and return the last value.
    fn take(&mut self, key: &str) -> Option<String> {
        let mut found = None;
        self.pairs.retain(|(k, v)| {
            if k == key {
                found = Some(v.clone());
                false
            } else {
                true
            }
        });
        found
    }

    fn take_number<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>, ApiError> {
        self.take(key)
            .map(|v| {
                v.trim()
                    .parse::<T>()
                    .map_err(|_| ApiError::bad_request(format!("{key} expects an integer, got {v:?}")))
            })
            .transpose()
    }

    fn page(&mut self) -> Result<Page, ApiError> {
        Ok(Page {
            offset: self.take_number("offset")?.unwrap_or(0),
            limit: self.take_number("limit")?,
        })
    }

    /// Remaining parameters must all be filter fields.
    fn filter(self) -> Result<FilterSpec, ApiError> {
        FilterSpec::from_pairs(self.pairs.iter().map(|(k, v)| (k.as_str(), v.as_str())))
            .map_err(ApiError::from)
    }
}

struct Page {
    offset: usize,
    limit: Option<usize>,
}

#[derive(Serialize)]
struct Paged<T> {
    total: usize,
    offset: usize,
    limit: Option<usize>,
    items: Vec<T>,
}

impl Page {
    fn apply<T>(&self, items: Vec<T>) -> Paged<T> {
        let total = items.len();
        let items = items
            .into_iter()
            .skip(self.offset)
            .take(self.limit.unwrap_or(usize::MAX))
            .collect();
        Paged {
            total,
            offset: self.offset,
            limit: self.limit,
            items,
        }
    }
}

fn parse_id(raw: &str, what: &str) -> Result<u64, ApiError> {
    raw.trim()
        .parse::<u64>()
        .map_err(|_| ApiError::bad_request(format!("{what} expects an integer id, got {raw:?}")))
}

/// Run `f` against the version current at request start, off the async
/// workers, and wrap the result.
async fn answer<T, F>(state: Arc<AppState>, f: F) -> Response
where
    T: Serialize,
    F: FnOnce(&AppState, &Versioned) -> Result<T, ApiError> + Send + 'static,
{
    let v = state.current();
    let version = v.version;
    let result = tokio::task::spawn_blocking(move || {
        f(&state, &v).and_then(|data| envelope(&v, &data))
    })
    .await;
    match result {
        Ok(Ok(resp)) => resp,
        Ok(Err(e)) => e.with_version(version).into_response(),
        Err(e) => ApiError::internal(e.to_string())
            .with_version(version)
            .into_response(),
    }
}

#[derive(Serialize)]
struct NetworkNode {
    id: DirectorId,
    name: String,
    total_overlap: f64,
    degree: usize,
    source: Option<ProfileSource>,
}

#[derive(Serialize)]
struct CompanyOverlap {
    company_id: CompanyId,
    overlap: f64,
}

#[derive(Serialize)]
struct NetworkEdge {
    a: DirectorId,
    b: DirectorId,
    avg_overlap: f64,
    companies: Vec<CompanyOverlap>,
}

#[derive(Serialize)]
struct Network {
    filter: FilterSpec,
    truncated: bool,
    total_nodes: usize,
    total_edges: usize,
    nodes: Vec<NetworkNode>,
    edges: Vec<NetworkEdge>,
}

/// Nodes are ordered by total overlap descending, then id; edges by pair.
async fn network(State(state): State<Arc<AppState>>, RawQuery(q): RawQuery) -> Response {
    answer(state, move |app, v| {
        let filter = Params::parse(q).filter()?;
        let full = build_graph(&v.snapshot, &filter);
        let cap = app.render_cap();
        let (graph, truncated) = full.truncate(cap.max_nodes, cap.max_edges);
        let mut nodes: Vec<NetworkNode> = graph
            .nodes()
            .iter()
            .map(|(id, w)| {
                let profile = v.snapshot.director(*id);
                NetworkNode {
                    id: *id,
                    name: profile.map(|p| p.full_name.clone()).unwrap_or_default(),
                    total_overlap: w.total_overlap,
                    degree: w.degree,
                    source: profile.map(|p| p.source),
                }
            })
            .collect();
        nodes.sort_by(|x, y| {
            y.total_overlap
                .total_cmp(&x.total_overlap)
                .then(x.id.cmp(&y.id))
        });
        let edges = graph
            .pairs()
            .iter()
            .map(|(&(a, b), p)| NetworkEdge {
                a,
                b,
                avg_overlap: p.avg_overlap,
                companies: p
                    .companies
                    .iter()
                    .map(|(&company_id, &overlap)| CompanyOverlap {
                        company_id,
                        overlap,
                    })
                    .collect(),
            })
            .collect();
        Ok(Network {
            filter,
            truncated,
            total_nodes: full.node_count(),
            total_edges: full.edge_count(),
            nodes,
            edges,
        })
    })
    .await
}

async fn director(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Response {
    answer(state, move |_, v| {
        let id = DirectorId(parse_id(&id, "director")?);
        Ok(director_detail(&v.snapshot, id)?)
    })
    .await
}

#[derive(Serialize)]
struct CompanyView {
    company: CompanyProfile,
    directors: Vec<boardgraph_core::analytics::CompanyDirectorRow>,
}

async fn company(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Response {
    answer(state, move |_, v| {
        let id = CompanyId(parse_id(&id, "company")?);
        let directors = company_directors(&v.snapshot, id)?;
        let company = v
            .snapshot
            .company(id)
            .cloned()
            .ok_or_else(|| ApiError::not_found(format!("unknown company {id}")))?;
        Ok(CompanyView { company, directors })
    })
    .await
}

#[derive(Serialize)]
struct NamedDirector {
    id: DirectorId,
    name: String,
}

#[derive(Serialize)]
struct PathView {
    from: DirectorId,
    to: DirectorId,
    found: bool,
    hop_count: Option<usize>,
    directors: Vec<NamedDirector>,
    hops: Vec<Hop>,
}

async fn path(State(state): State<Arc<AppState>>, RawQuery(q): RawQuery) -> Response {
    answer(state, move |_, v| {
        let mut params = Params::parse(q);
        let from = params
            .take_number::<u64>("from")?
            .ok_or_else(|| ApiError::bad_request("missing from"))?;
        let to = params
            .take_number::<u64>("to")?
            .ok_or_else(|| ApiError::bad_request("missing to"))?;
        let filter = params.filter()?;
        let (from, to) = (DirectorId(from), DirectorId(to));
        let found = shortest_path(&v.snapshot, from, to, &filter)?;
        let name = |id: DirectorId| NamedDirector {
            id,
            name: v
                .snapshot
                .director(id)
                .map(|p| p.full_name.clone())
                .unwrap_or_default(),
        };
        Ok(match found {
            Some(p) => PathView {
                from,
                to,
                found: true,
                hop_count: Some(p.hop_count()),
                directors: p.directors.iter().map(|&id| name(id)).collect(),
                hops: p.hops,
            },
            None => PathView {
                from,
                to,
                found: false,
                hop_count: None,
                directors: Vec::new(),
                hops: Vec::new(),
            },
        })
    })
    .await
}

#[derive(Serialize)]
struct InterlockView {
    company_a: CompanyId,
    company_a_name: String,
    company_b: CompanyId,
    company_b_name: String,
    count: usize,
    shared_directors: Vec<NamedDirector>,
}

#[derive(Serialize)]
struct Interlocks {
    min_shared: usize,
    #[serde(flatten)]
    page: Paged<InterlockView>,
}

async fn interlocks(State(state): State<Arc<AppState>>, RawQuery(q): RawQuery) -> Response {
    answer(state, move |_, v| {
        let mut params = Params::parse(q);
        let min_shared = params.take_number::<usize>("min")?.unwrap_or(1);
        let page = params.page()?;
        if !params.pairs.is_empty() {
            return Err(ApiError::bad_request(format!(
                "unexpected parameter {:?}",
                params.pairs[0].0
            )));
        }
        let snap = &v.snapshot;
        let company_name = |id: CompanyId| snap.company(id).map(|c| c.name.clone()).unwrap_or_default();
        let items = company_interlocks(snap, min_shared)?
            .into_iter()
            .map(|i| InterlockView {
                company_a_name: company_name(i.company_a),
                company_b_name: company_name(i.company_b),
                company_a: i.company_a,
                company_b: i.company_b,
                count: i.count,
                shared_directors: i
                    .shared_directors
                    .iter()
                    .map(|&id| NamedDirector {
                        id,
                        name: snap.director(id).map(|p| p.full_name.clone()).unwrap_or_default(),
                    })
                    .collect(),
            })
            .collect();
        Ok(Interlocks {
            min_shared,
            page: page.apply(items),
        })
    })
    .await
}

async fn influence(State(state): State<Arc<AppState>>, RawQuery(q): RawQuery) -> Response {
    answer(state, move |_, v| {
        let mut params = Params::parse(q);
        let page = params.page()?;
        let filter = params.filter()?;
        Ok(page.apply(influence_by_country(&v.snapshot, &filter)))
    })
    .await
}

async fn tenure(State(state): State<Arc<AppState>>, RawQuery(q): RawQuery) -> Response {
    answer(state, move |_, v| {
        let filter = Params::parse(q).filter()?;
        Ok(tenure_summary(&v.snapshot, &filter))
    })
    .await
}

#[derive(Serialize)]
struct PeerView {
    company_name: String,
    #[serde(flatten)]
    comparison: PeerComparison,
}

async fn tenure_peer(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Response {
    answer(state, move |_, v| {
        let id = CompanyId(parse_id(&id, "company")?);
        let comparison = tenure_vs_peers(&v.snapshot, id)?;
        Ok(PeerView {
            company_name: v.snapshot.company(id).map(|c| c.name.clone()).unwrap_or_default(),
            comparison,
        })
    })
    .await
}

async fn gender(State(state): State<Arc<AppState>>, RawQuery(q): RawQuery) -> Response {
    answer(state, move |_, v| {
        let mut params = Params::parse(q);
        let page = params.page()?;
        let filter = params.filter()?;
        Ok(page.apply(gender_power(&v.snapshot, &filter)))
    })
    .await
}

#[derive(Serialize)]
struct Counts {
    seats: usize,
    directors: usize,
    edges_only_directors: usize,
    companies: usize,
    edges: usize,
    inf_long: usize,
    countries: usize,
    warnings: BTreeMap<&'static str, usize>,
}

#[derive(Serialize)]
struct Meta {
    reference_year: i32,
    counts: Counts,
    max_nodes: usize,
    max_edges: usize,
}

async fn meta(State(state): State<Arc<AppState>>) -> Response {
    answer(state, move |app, v| {
        let s = &v.snapshot;
        let mut warnings = BTreeMap::new();
        for d in s.warnings() {
            *warnings.entry(d.code.as_str()).or_insert(0) += 1;
        }
        let cap = app.render_cap();
        Ok(Meta {
            reference_year: s.reference_year(),
            counts: Counts {
                seats: s.seats().len(),
                directors: s.directors().len(),
                edges_only_directors: s
                    .directors()
                    .values()
                    .filter(|d| d.source == ProfileSource::EdgesOnly)
                    .count(),
                companies: s.companies().len(),
                edges: s.edges().len(),
                inf_long: s.inf_long().len(),
                countries: s.country_names().len(),
                warnings,
            },
            max_nodes: cap.max_nodes,
            max_edges: cap.max_edges,
        })
    })
    .await
}

#[derive(Deserialize)]
struct ReloadRequest {
    path: Option<PathBuf>,
}

#[derive(Serialize)]
struct ReloadView {
    version: u64,
    snapshot_id: String,
    previous_version: u64,
}

async fn reload(State(state): State<Arc<AppState>>, headers: HeaderMap, body: Bytes) -> Response {
    let previous = state.current().version;
    let presented = headers
        .get(RELOAD_TOKEN_HEADER)
        .and_then(|h| h.to_str().ok());
    if !state.token_matches(presented) {
        return ApiError::new(StatusCode::UNAUTHORIZED, "INVALID_TOKEN", "reload token mismatch")
            .with_version(previous)
            .into_response();
    }
    let request = if body.iter().all(u8::is_ascii_whitespace) {
        ReloadRequest { path: None }
    } else {
        match serde_json::from_slice::<ReloadRequest>(&body) {
            Ok(r) => r,
            Err(e) => {
                return ApiError::bad_request(format!("invalid reload body: {e}"))
                    .with_version(previous)
                    .into_response()
            }
        }
    };
    match state.reload(request.path.as_deref()).await {
        Ok(next) => {
            let view = ReloadView {
                version: next.version,
                snapshot_id: next.snapshot_id.clone(),
                previous_version: previous,
            };
            envelope(&next, &view).unwrap_or_else(IntoResponse::into_response)
        }
        Err(ReloadError::Busy) => {
            ApiError::new(StatusCode::CONFLICT, "RELOAD_IN_PROGRESS", ReloadError::Busy.to_string())
                .with_version(previous)
                .into_response()
        }
        Err(e @ ReloadError::Invalid(_)) => {
            tracing::warn!(error = %e, "reload rejected");
            ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "INVALID_SNAPSHOT", e.to_string())
                .with_version(state.current().version)
                .into_response()
        }
    }
}

async fn fallback(State(state): State<Arc<AppState>>) -> Response {
    ApiError::not_found("no such endpoint")
        .with_version(state.current().version)
        .into_response()
}

/// The full endpoint set with CORS for `cors_origin` (any origin if unset).
pub fn router(state: Arc<AppState>, cors_origin: Option<&str>) -> Result<Router, ServerError> {
    let origin = match cors_origin {
        None => AllowOrigin::any(),
        Some(o) => AllowOrigin::exact(
            HeaderValue::from_str(o).map_err(|_| ServerError::Config(format!("bad CORS origin {o:?}")))?,
        ),
    };
    let cors = CorsLayer::new()
        .allow_origin(origin)
        .allow_methods([Method::GET, Method::POST, Method::OPTIONS])
        .allow_headers([header::CONTENT_TYPE, HeaderName::from_static(RELOAD_TOKEN_HEADER)])
        .expose_headers([HeaderName::from_static(VERSION_HEADER)]);
    Ok(Router::new()
        .route("/api/network", get(network))
        .route("/api/director/{id}", get(director))
        .route("/api/company/{id}", get(company))
        .route("/api/path", get(path))
        .route("/api/interlocks", get(interlocks))
        .route("/api/influence/countries", get(influence))
        .route("/api/tenure/summary", get(tenure))
        .route("/api/tenure/peer/{company}", get(tenure_peer))
        .route("/api/gender/countries", get(gender))
        .route("/api/meta", get(meta))
        .route("/api/reload", post(reload))
        .fallback(fallback)
        .layer(cors)
        .with_state(state))
}
