//! HTTP API over uploaded edge maps.
//!
//! `POST /images` stores an image and returns its id. The other routes read
//! that session: `GET /images/{id}/edges` (PNG), `GET /images/{id}/fragments`
//! (JSON) and `POST /images/{id}/solve`.

use std::collections::hash_map::RandomState;
use std::hash::{BuildHasher, Hasher};
use std::io::Write;
use std::net::SocketAddr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::rejection::JsonRejection;
use axum::extract::{DefaultBodyLimit, Path, Query as UrlQuery, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use fixtrace_core::edgemap::{detect_edges, encode_png, load_edge_map, load_grayscale};
use fixtrace_core::pipeline::prepare_fragments;
use fixtrace_core::{EdgeMap, FragmentSet, Point};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tokio::net::TcpListener;
use tower_http::cors::{AllowOrigin, Any, CorsLayer};

use crate::config::{AlgorithmChoice, RunConfig};
use crate::lru::Lru;
use crate::report::{check_points, solve, theta_or, SolveStatus};
use crate::{CliError, CliResult};

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub run: RunConfig,
    pub max_images: usize,
    pub max_upload_bytes: usize,
    pub cors_origin: Option<String>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self { run: RunConfig::default(), max_images: 64, max_upload_bytes: 16 * 1024 * 1024, cors_origin: None }
    }
}

struct Session {
    edge_map: EdgeMap,
    fragments: FragmentSet,
}

#[derive(Clone)]
struct AppState {
    sessions: Arc<Mutex<Lru<String, Arc<Session>>>>,
    counter: Arc<AtomicU64>,
    nonce: u64,
    run: RunConfig,
}

impl AppState {
    fn next_id(&self) -> String {
        let n = self.counter.fetch_add(1, Ordering::Relaxed);
        format!("{:08x}{:04x}", self.nonce as u32, n)
    }

    fn session(&self, id: &str) -> Result<Arc<Session>, ApiError> {
        self.sessions
            .lock()
            .expect("session lock")
            .get(&id.to_string())
            .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("unknown image id {id:?}")))
    }
}

#[derive(Debug)]
struct ApiError {
    status: StatusCode,
    message: String,
    detail: Option<Value>,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        Self { status, message: message.into(), detail: None }
    }
}

impl From<CliError> for ApiError {
    fn from(e: CliError) -> Self {
        let status = match e {
            CliError::NoPath(_) => StatusCode::CONFLICT,
            CliError::Invalid(_) | CliError::Rejected(_) => StatusCode::UNPROCESSABLE_ENTITY,
            CliError::Io { .. } => StatusCode::INTERNAL_SERVER_ERROR,
        };
        ApiError::new(status, e.to_string())
    }
}

impl From<fixtrace_core::Error> for ApiError {
    fn from(e: fixtrace_core::Error) -> Self {
        CliError::from(e).into()
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut body = json!({ "error": self.message, "status": self.status.as_u16() });
        if let Some(d) = self.detail {
            body["detail"] = d;
        }
        (self.status, Json(body)).into_response()
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct UploadResponse {
    pub image_id: String,
    pub width: usize,
    pub height: usize,
    pub edgel_count: usize,
    pub fragment_count: usize,
}

#[derive(Debug, Default, Deserialize)]
struct UploadParams {
    /// Detect edges in a grayscale upload at this gradient threshold.
    edge_threshold: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SolveRequest {
    pub fixation: Point,
    pub interest: Point,
    #[serde(default)]
    pub theta: Option<f64>,
    #[serde(default)]
    pub algorithm: Option<AlgorithmChoice>,
    #[serde(default)]
    pub allow_outside_fixation: bool,
}

async fn upload(
    State(state): State<AppState>,
    UrlQuery(params): UrlQuery<UploadParams>,
    body: Bytes,
) -> Result<(StatusCode, Json<UploadResponse>), ApiError> {
    if body.is_empty() {
        return Err(ApiError::new(StatusCode::BAD_REQUEST, "empty upload"));
    }
    let run = state.run;
    let session = tokio::task::spawn_blocking(move || -> Result<Session, ApiError> {
        let decoded = match params.edge_threshold {
            Some(t) => load_grayscale(&body).and_then(|g| detect_edges(&g, t)),
            None => load_edge_map(&body),
        };
        let edge_map = decoded.map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e.to_string()))?;
        let fragments = prepare_fragments(&edge_map, &run.pipeline())?;
        Ok(Session { edge_map, fragments })
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
    let id = state.next_id();
    let resp = UploadResponse {
        image_id: id.clone(),
        width: session.edge_map.width(),
        height: session.edge_map.height(),
        edgel_count: session.edge_map.edgel_count(),
        fragment_count: session.fragments.len(),
    };
    state.sessions.lock().expect("session lock").insert(id, Arc::new(session));
    Ok((StatusCode::CREATED, Json(resp)))
}

async fn edges(State(state): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let session = state.session(&id)?;
    let png = encode_png(&session.edge_map)?;
    Ok(([(header::CONTENT_TYPE, "image/png")], png).into_response())
}

async fn fragments(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<FragmentSet>, ApiError> {
    Ok(Json(state.session(&id)?.fragments.clone()))
}

async fn solve_route(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<SolveRequest>, JsonRejection>,
) -> Result<Response, ApiError> {
    let session = state.session(&id)?;
    let Json(req) = body.map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.body_text()))?;
    let mut cfg = theta_or(req.theta, &state.run)?;
    cfg.algorithm = req.algorithm.unwrap_or(cfg.algorithm);
    let dims = (session.edge_map.width(), session.edge_map.height());
    check_points(req.fixation, req.interest, dims, req.allow_outside_fixation)?;
    let report = tokio::task::spawn_blocking(move || solve(&session.fragments, req.fixation, req.interest, &cfg))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
    if report.status == SolveStatus::NoPath {
        let mut err = ApiError::new(StatusCode::CONFLICT, "no closed contour through the interest point");
        err.detail = Some(serde_json::to_value(&report).expect("report serializes"));
        return Err(err);
    }
    Ok(Json(report).into_response())
}

fn cors(origin: Option<&str>) -> CliResult<CorsLayer> {
    let allow = match origin {
        Some(o) => AllowOrigin::exact(
            HeaderValue::from_str(o).map_err(|e| CliError::Invalid(format!("bad CORS origin {o:?}: {e}")))?,
        ),
        None => AllowOrigin::any(),
    };
    Ok(CorsLayer::new().allow_origin(allow).allow_methods(Any).allow_headers(Any))
}

pub fn router(cfg: &ServiceConfig) -> CliResult<Router> {
    cfg.run.validate()?;
    let nonce = RandomState::new().build_hasher().finish();
    let state = AppState {
        sessions: Arc::new(Mutex::new(Lru::new(cfg.max_images))),
        counter: Arc::new(AtomicU64::new(0)),
        nonce,
        run: cfg.run,
    };
    Ok(Router::new()
        .route("/images", post(upload))
        .route("/images/{id}/edges", get(edges))
        .route("/images/{id}/fragments", get(fragments))
        .route("/images/{id}/solve", post(solve_route))
        .layer(DefaultBodyLimit::max(cfg.max_upload_bytes))
        .layer(cors(cfg.cors_origin.as_deref())?)
        .with_state(state))
}

pub async fn bind(addr: SocketAddr) -> CliResult<TcpListener> {
    TcpListener::bind(addr).await.map_err(|e| CliError::Io { context: format!("cannot listen on {addr}"), source: e })
}

/// Serves until interrupted.
pub fn serve_blocking(addr: SocketAddr, cfg: ServiceConfig, out: &mut dyn Write) -> CliResult<()> {
    let app = router(&cfg)?;
    let rt = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(|e| CliError::Io { context: "tokio runtime".into(), source: e })?;
    rt.block_on(async {
        let listener = bind(addr).await?;
        let local = listener.local_addr().map_err(|e| CliError::Io { context: addr.to_string(), source: e })?;
        let _ = writeln!(out, "listening on http://{local}");
        let _ = out.flush();
        axum::serve(listener, app)
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await
            .map_err(|e| CliError::Io { context: format!("serving on {local}"), source: e })
    })
}
