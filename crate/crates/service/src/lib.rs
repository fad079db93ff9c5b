//! HTTP query service over one immutable index.
//!
//! Routes:
//! - `POST /api/query` ranks words for a phrase
//! - `GET /api/meta` describes the loaded index
//! - `GET /api/health` liveness
//!
//! Anything else falls through to the static web UI directory, if one is
//! configured.

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use axum::extract::rejection::JsonRejection;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tower_http::cors::CorsLayer;
use tower_http::services::ServeDir;

use revdict::similarity::{query, QueryError, QueryOptions};
use revdict::store::FORMAT_VERSION;
use revdict::{IndexBundle, MatrixKind};

pub const DEFAULT_LIMIT: usize = 20;
pub const MAX_LIMIT: usize = 500;
pub const MAX_PHRASE_CHARS: usize = 1000;

#[derive(Debug, Clone, Deserialize)]
pub struct QueryRequest {
    pub phrase: String,
    #[serde(default)]
    pub limit: Option<usize>,
    #[serde(default)]
    pub depth: Option<u32>,
    #[serde(default)]
    pub include_inputs: Option<bool>,
    #[serde(default)]
    pub matrix: Option<String>,
}

impl QueryRequest {
    pub fn new(phrase: impl Into<String>) -> Self {
        Self {
            phrase: phrase.into(),
            limit: None,
            depth: None,
            include_inputs: None,
            matrix: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputInfo {
    pub word: String,
    pub nu: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultEntry {
    pub word: String,
    pub score: f64,
    /// Distance from each input word; `null` when unreached.
    pub distances: BTreeMap<String, Option<u32>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryResponse {
    pub inputs: Vec<InputInfo>,
    pub unknown_tokens: Vec<String>,
    pub results: Vec<ResultEntry>,
    pub depth_used: u32,
    pub matrix: String,
    pub timing: Timing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixInfo {
    pub kind: String,
    pub nonzeros: usize,
    pub sparsity: f64,
    pub max_nonredundant_depth: u32,
    pub incomplete_sources: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestInfo {
    pub sources: Vec<String>,
    pub stoplist_sha256: String,
    pub rules_sha256: String,
    pub mixing_depth: Option<u32>,
    pub mixed_sources: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaResponse {
    pub n: usize,
    pub format_version: u32,
    pub default_matrix: String,
    pub default_depth: u32,
    pub matrices: Vec<MatrixInfo>,
    pub manifest: ManifestInfo,
}

/// Machine-readable failure with its HTTP status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
}

impl ApiError {
    fn bad_request(code: &'static str, message: impl Into<String>) -> Self {
        Self {
            status: StatusCode::BAD_REQUEST,
            code,
            message: message.into(),
        }
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    error: ErrorDetail<'a>,
}

#[derive(Serialize)]
struct ErrorDetail<'a> {
    code: &'a str,
    message: &'a str,
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = ErrorBody {
            error: ErrorDetail {
                code: self.code,
                message: &self.message,
            },
        };
        (self.status, Json(body)).into_response()
    }
}

impl From<QueryError> for ApiError {
    fn from(e: QueryError) -> Self {
        match e {
            QueryError::NoContentWords { .. } => Self {
                status: StatusCode::UNPROCESSABLE_ENTITY,
                code: "NO_CONTENT_WORDS",
                message: e.to_string(),
            },
            QueryError::InvalidDepth => Self::bad_request("INVALID_DEPTH", e.to_string()),
            QueryError::MissingMatrix(_) => Self::bad_request("MATRIX_NOT_BUILT", e.to_string()),
        }
    }
}

/// Request handling over a shared, read-only index.
#[derive(Debug)]
pub struct Service {
    index: Arc<IndexBundle>,
}

impl Service {
    pub fn new(index: Arc<IndexBundle>) -> Self {
        Self { index }
    }

    pub fn index(&self) -> &IndexBundle {
        &self.index
    }

    pub fn handle_query(&self, req: &QueryRequest) -> Result<QueryResponse, ApiError> {
        let started = Instant::now();
        let chars = req.phrase.chars().count();
        if req.phrase.trim().is_empty() || chars > MAX_PHRASE_CHARS {
            return Err(ApiError::bad_request(
                "PHRASE_LENGTH",
                format!("phrase must be 1..={MAX_PHRASE_CHARS} characters"),
            ));
        }
        let limit = req.limit.unwrap_or(DEFAULT_LIMIT);
        if limit == 0 || limit > MAX_LIMIT {
            return Err(ApiError::bad_request(
                "LIMIT_OUT_OF_RANGE",
                format!("limit must be 1..={MAX_LIMIT}"),
            ));
        }
        let matrix = req
            .matrix
            .as_deref()
            .map(str::parse::<MatrixKind>)
            .transpose()
            .map_err(|m| ApiError::bad_request("UNKNOWN_MATRIX", m))?;
        let options = QueryOptions {
            depth: req.depth,
            limit,
            include_inputs: req.include_inputs.unwrap_or(false),
            matrix,
        };
        let out = query(&req.phrase, &self.index, &options)?;

        let lex = &self.index.lexicon;
        let input_names: Vec<&str> = out.plan.input_words.iter().map(|w| lex.word(w.id)).collect();
        let results = out
            .entries
            .iter()
            .map(|e| ResultEntry {
                word: lex.word(e.word).to_string(),
                score: e.score,
                distances: input_names
                    .iter()
                    .zip(out.distances(e.word))
                    .map(|(name, d)| (name.to_string(), d))
                    .collect(),
            })
            .collect();
        Ok(QueryResponse {
            inputs: out
                .plan
                .input_words
                .iter()
                .map(|w| InputInfo {
                    word: lex.word(w.id).to_string(),
                    nu: w.nu,
                })
                .collect(),
            unknown_tokens: out.plan.unknown_tokens.clone(),
            results,
            depth_used: out.plan.depth,
            matrix: out.matrix.to_string(),
            timing: Timing {
                elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
            },
        })
    }

    pub fn handle_meta(&self) -> MetaResponse {
        let idx = &self.index;
        let m = &idx.manifest;
        MetaResponse {
            n: idx.lexicon.len(),
            format_version: FORMAT_VERSION,
            default_matrix: MatrixKind::Blm.to_string(),
            default_depth: idx.default_depth(MatrixKind::Blm),
            matrices: idx
                .stats
                .iter()
                .map(|s| MatrixInfo {
                    kind: s.kind.to_string(),
                    nonzeros: s.nnz,
                    sparsity: s.sparsity,
                    max_nonredundant_depth: s.max_nonredundant_depth,
                    incomplete_sources: s.incomplete_sources(),
                })
                .collect(),
            manifest: ManifestInfo {
                sources: m.sources.clone(),
                stoplist_sha256: m.stoplist_sha256.clone(),
                rules_sha256: m.rules_sha256.clone(),
                mixing_depth: m.mixing_depth,
                mixed_sources: m.mixed_sources,
            },
        }
    }
}

async fn query_route(
    State(svc): State<Arc<Service>>,
    body: Result<Json<QueryRequest>, JsonRejection>,
) -> Result<Json<QueryResponse>, ApiError> {
    let Json(req) = body.map_err(|e| ApiError::bad_request("MALFORMED_BODY", e.body_text()))?;
    let out = tokio::task::spawn_blocking(move || svc.handle_query(&req))
        .await
        .map_err(|e| ApiError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            code: "INTERNAL",
            message: e.to_string(),
        })??;
    Ok(Json(out))
}

async fn meta_route(State(svc): State<Arc<Service>>) -> Json<MetaResponse> {
    Json(svc.handle_meta())
}

async fn health_route() -> Json<serde_json::Value> {
    Json(serde_json::json!({ "status": "ok" }))
}

pub fn router(service: Arc<Service>, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/query", post(query_route))
        .route("/api/meta", get(meta_route))
        .route("/api/health", get(health_route))
        .with_state(service);
    let app = match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    };
    app.layer(CorsLayer::permissive())
}

/// Binds `addr` and serves until the process is stopped.
pub async fn serve(service: Arc<Service>, addr: SocketAddr, static_dir: Option<PathBuf>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(service, static_dir)).await
}
