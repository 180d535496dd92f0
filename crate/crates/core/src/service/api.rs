//! HTTP/JSON API over a session.
//!
//! Every response is `{"schema_version":1,"fingerprint":"…","data":…}` (or
//! `"error"` in place of `"data"`). Section payloads are produced by the same
//! code as the batch document. Rangeset requests with view parameters are
//! computed on the blocking pool; a newer request for the same attribute
//! supersedes an older one still running, which then answers 409.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use axum::body::Bytes;
use axum::extract::{Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::Router;
use serde::Serialize;

use super::config::SessionConfig;
use super::document::{prepare, AttributeSection, Prepared, RangesetDocument, RunError, ViewParams, SCHEMA_VERSION};

struct Snapshot {
    /// As supplied, paths unresolved; `version` is authoritative.
    config: SessionConfig,
    prepared: Prepared,
    doc: RangesetDocument,
}

pub struct AppState {
    base_dir: PathBuf,
    snapshot: RwLock<Arc<Snapshot>>,
    // latest request generation per attribute
    sessions: Mutex<HashMap<String, Arc<AtomicU64>>>,
    // config replacements are applied one at a time
    config_writer: tokio::sync::Mutex<()>,
}

impl AppState {
    /// Runs the full pipeline once so that plain GETs are served from cache.
    pub fn new(config: SessionConfig, base_dir: &Path) -> Result<Self, RunError> {
        let snapshot = build_snapshot(config, base_dir)?;
        Ok(Self {
            base_dir: base_dir.to_path_buf(),
            snapshot: RwLock::new(Arc::new(snapshot)),
            sessions: Mutex::new(HashMap::new()),
            config_writer: tokio::sync::Mutex::new(()),
        })
    }

    fn current(&self) -> Arc<Snapshot> {
        self.snapshot.read().expect("snapshot lock").clone()
    }

    fn session(&self, key: &str) -> Arc<AtomicU64> {
        self.sessions.lock().expect("session lock").entry(key.to_string()).or_default().clone()
    }

    /// The batch document for the current config.
    pub fn document(&self) -> RangesetDocument {
        self.current().doc.clone()
    }
}

fn build_snapshot(config: SessionConfig, base_dir: &Path) -> Result<Snapshot, RunError> {
    let prepared = prepare(&config.resolve(base_dir))?;
    let doc = prepared.document()?;
    Ok(Snapshot { config, prepared, doc })
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/dataset", get(dataset))
        .route("/api/embedding", get(embedding))
        .route("/api/quality", get(quality))
        .route("/api/topology", get(topology))
        .route("/api/histogram", get(histogram))
        .route("/api/rangeset", get(rangeset))
        .route("/api/config", get(get_config).put(put_config))
        .with_state(state)
}

/// Binds `host:port` and serves until the process ends.
pub async fn serve(state: Arc<AppState>, host: &str, port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind((host, port)).await?;
    axum::serve(listener, router(state)).await
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    fingerprint: &'a str,
    data: &'a T,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    code: &'a str,
    message: String,
}

#[derive(Serialize)]
struct ErrorEnvelope<'a> {
    schema_version: u32,
    error: ErrorBody<'a>,
}

fn json_response(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn ok<T: Serialize>(fingerprint: &str, data: &T) -> Response {
    let body = serde_json::to_string(&Envelope { schema_version: SCHEMA_VERSION, fingerprint, data })
        .expect("sections serialize");
    json_response(StatusCode::OK, body)
}

fn error(status: StatusCode, code: &str, message: impl Into<String>) -> Response {
    let body = serde_json::to_string(&ErrorEnvelope {
        schema_version: SCHEMA_VERSION,
        error: ErrorBody { code, message: message.into() },
    })
    .expect("errors serialize");
    json_response(status, body)
}

fn run_error(e: RunError) -> Response {
    match e {
        RunError::Cancelled => error(StatusCode::CONFLICT, "superseded", e.to_string()),
        RunError::Dataset(super::dataset::DatasetError::UnknownColumn(_)) => {
            error(StatusCode::NOT_FOUND, "unknown_attribute", e.to_string())
        }
        RunError::Binning { .. } | RunError::Config(_) => error(StatusCode::UNPROCESSABLE_ENTITY, "invalid", e.to_string()),
        _ => error(StatusCode::INTERNAL_SERVER_ERROR, "pipeline", e.to_string()),
    }
}

async fn dataset(State(s): State<Arc<AppState>>) -> Response {
    let snap = s.current();
    ok(&snap.doc.fingerprint, &snap.doc.dataset)
}

async fn embedding(State(s): State<Arc<AppState>>) -> Response {
    let snap = s.current();
    ok(&snap.doc.fingerprint, &snap.doc.embedding)
}

async fn quality(State(s): State<Arc<AppState>>) -> Response {
    let snap = s.current();
    ok(&snap.doc.fingerprint, &snap.doc.quality)
}

async fn topology(State(s): State<Arc<AppState>>) -> Response {
    let snap = s.current();
    ok(&snap.doc.fingerprint, &snap.doc.topology)
}

struct SectionRequest {
    attr: String,
    view: ViewParams,
}

fn parse_section_query(q: &HashMap<String, String>) -> Result<SectionRequest, Response> {
    let attr = q
        .get("attr")
        .filter(|a| !a.is_empty())
        .ok_or_else(|| error(StatusCode::BAD_REQUEST, "bad_request", "missing `attr` parameter"))?
        .clone();
    let epsilon = match q.get("eps") {
        None => None,
        Some(v) => match v.parse::<f64>() {
            Ok(e) if e >= 0.0 && e.is_finite() => Some(e),
            _ => return Err(error(StatusCode::BAD_REQUEST, "bad_request", format!("invalid eps `{v}`"))),
        },
    };
    let bins = match q.get("bins") {
        None => None,
        Some(v) => match v.parse::<usize>() {
            Ok(b) if b > 0 => Some(b),
            _ => return Err(error(StatusCode::BAD_REQUEST, "bad_request", format!("invalid bins `{v}`"))),
        },
    };
    Ok(SectionRequest { attr, view: ViewParams { epsilon, bins } })
}

/// The attribute section for a request, from the cached document when the
/// view parameters match the configured ones.
async fn section(s: &Arc<AppState>, req: SectionRequest) -> Result<(Arc<Snapshot>, AttributeSection), Response> {
    let snap = s.current();
    if let Some(cached) = snap.doc.attribute(&req.attr) {
        let same_eps = req.view.epsilon.is_none_or(|e| e == cached.rangeset.epsilon);
        let same_bins = req.view.bins.is_none_or(|b| b == cached.spec.bin_count);
        if same_eps && same_bins {
            return Ok((snap.clone(), cached.clone()));
        }
    }
    let counter = s.session(&req.attr);
    let generation = counter.fetch_add(1, Ordering::SeqCst) + 1;
    let worker = snap.clone();
    let result = tokio::task::spawn_blocking(move || {
        let cancelled = || counter.load(Ordering::SeqCst) != generation;
        worker.prepared.attribute_section_cancellable(&req.attr, req.view, &cancelled)
    })
    .await
    .map_err(|e| error(StatusCode::INTERNAL_SERVER_ERROR, "pipeline", e.to_string()))?;
    result.map(|sec| (snap, sec)).map_err(run_error)
}

async fn rangeset(State(s): State<Arc<AppState>>, Query(q): Query<HashMap<String, String>>) -> Response {
    let req = match parse_section_query(&q) {
        Ok(r) => r,
        Err(resp) => return resp,
    };
    match section(&s, req).await {
        Ok((snap, sec)) => ok(&snap.doc.fingerprint, &sec),
        Err(resp) => resp,
    }
}

async fn histogram(State(s): State<Arc<AppState>>, Query(q): Query<HashMap<String, String>>) -> Response {
    let req = match parse_section_query(&q) {
        Ok(r) => r,
        Err(resp) => return resp,
    };
    match section(&s, req).await {
        Ok((snap, sec)) => ok(&snap.doc.fingerprint, &sec.histogram),
        Err(resp) => resp,
    }
}

async fn get_config(State(s): State<Arc<AppState>>) -> Response {
    let snap = s.current();
    ok(&snap.doc.fingerprint, &snap.config)
}

#[derive(Serialize)]
struct ConfigAccepted {
    version: u64,
}

/// Full-document replace. The body's `version` must equal the current one;
/// the stored config gets `version + 1`.
async fn put_config(State(s): State<Arc<AppState>>, body: Bytes) -> Response {
    let mut config: SessionConfig = match serde_json::from_slice(&body) {
        Ok(c) => c,
        Err(e) => return error(StatusCode::BAD_REQUEST, "bad_request", e.to_string()),
    };
    if let Err(e) = config.validate() {
        return error(StatusCode::UNPROCESSABLE_ENTITY, "invalid", e.to_string());
    }
    let _writer = s.config_writer.lock().await;
    let current = s.current();
    if config.version != current.config.version {
        return error(
            StatusCode::CONFLICT,
            "version_conflict",
            format!("config is at version {}, request was based on {}", current.config.version, config.version),
        );
    }
    config.version += 1;
    let base = s.base_dir.clone();
    let built = tokio::task::spawn_blocking(move || build_snapshot(config, &base)).await;
    match built {
        Ok(Ok(snapshot)) => {
            let version = snapshot.config.version;
            let fingerprint = snapshot.doc.fingerprint.clone();
            *s.snapshot.write().expect("snapshot lock") = Arc::new(snapshot);
            ok(&fingerprint, &ConfigAccepted { version })
        }
        Ok(Err(e)) => error(StatusCode::UNPROCESSABLE_ENTITY, "invalid", e.to_string()),
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, "pipeline", e.to_string()),
    }
}
