//! HTTP + JSON API over an [`Engine`].

use std::collections::HashMap;
use std::net::SocketAddr;
use std::str::FromStr;
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Serialize;
use serde_json::json;

use crate::connectivity::QueryError;
use crate::engine::Engine;
use crate::error::Error;
use crate::graph::NodeId;
use crate::layout::DEFAULT_ITERATIONS;
use crate::tree::{SuperNodeId, TreeError};

#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
}

impl ApiError {
    fn malformed(message: String) -> Self {
        ApiError {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            code: "malformed",
            message,
        }
    }
}

fn tree_status(e: &TreeError) -> (StatusCode, &'static str) {
    match e {
        TreeError::UnknownSuperNode(_) => (StatusCode::NOT_FOUND, "unknown_supernode"),
        TreeError::NotLoaded(_) => (StatusCode::CONFLICT, "leaf_not_loaded"),
        TreeError::NotALeaf(_) => (StatusCode::UNPROCESSABLE_ENTITY, "not_a_leaf"),
        TreeError::MissingLeafFile { .. } | TreeError::Checksum { .. } | TreeError::Corrupt { .. } => {
            (StatusCode::INTERNAL_SERVER_ERROR, "store_damaged")
        }
        _ => (StatusCode::INTERNAL_SERVER_ERROR, "internal"),
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let (status, code) = match &e {
            Error::Tree(t) | Error::Query(QueryError::Tree(t)) => tree_status(t),
            Error::Query(QueryError::UnknownNode(_)) => (StatusCode::NOT_FOUND, "unknown_node"),
            Error::Query(QueryError::Nested { .. }) => (StatusCode::CONFLICT, "nested_pair"),
            Error::Query(QueryError::SameNode(_)) => (StatusCode::CONFLICT, "same_node"),
            Error::Usage(_) => (StatusCode::UNPROCESSABLE_ENTITY, "malformed"),
            _ => (StatusCode::INTERNAL_SERVER_ERROR, "internal"),
        };
        ApiError {
            status,
            code,
            message: e.to_string(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({ "error": { "code": self.code, "message": self.message } });
        (self.status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;
type Shared = State<Arc<Engine>>;

fn parse<T: FromStr>(what: &str, raw: &str) -> Result<T, ApiError> {
    raw.parse()
        .map_err(|_| ApiError::malformed(format!("{what} must be a non-negative integer, got {raw:?}")))
}

fn param<'a>(q: &'a HashMap<String, String>, name: &str) -> Result<&'a str, ApiError> {
    q.get(name)
        .map(String::as_str)
        .ok_or_else(|| ApiError::malformed(format!("missing query parameter `{name}`")))
}

fn ok<T: Serialize>(r: crate::error::Result<T>) -> ApiResult<T> {
    r.map(Json).map_err(ApiError::from)
}

async fn tree(State(e): Shared) -> impl IntoResponse {
    Json(e.tree_view())
}

async fn supernode(State(e): Shared, Path(id): Path<String>) -> ApiResult<impl Serialize> {
    ok(e.supernode(parse::<SuperNodeId>("supernode id", &id)?))
}

async fn closure(State(e): Shared, Path(id): Path<String>) -> ApiResult<impl Serialize> {
    ok(e.closure(parse::<SuperNodeId>("supernode id", &id)?))
}

async fn connectivity(State(e): Shared, Query(q): Query<HashMap<String, String>>) -> ApiResult<impl Serialize> {
    let a = parse::<SuperNodeId>("a", param(&q, "a")?)?;
    let b = parse::<SuperNodeId>("b", param(&q, "b")?)?;
    ok(e.connectivity(a, b))
}

async fn external(State(e): Shared, Path(id): Path<String>) -> ApiResult<impl Serialize> {
    ok(e.external(parse::<NodeId>("node id", &id)?))
}

async fn search(State(e): Shared, Query(q): Query<HashMap<String, String>>) -> ApiResult<impl Serialize> {
    let label = param(&q, "label")?;
    ok(e.search(label))
}

async fn expand(State(e): Shared, Path(id): Path<String>) -> ApiResult<impl Serialize> {
    let id = parse::<SuperNodeId>("leaf id", &id)?;
    ok(tokio::task::spawn_blocking(move || e.expand(id))
        .await
        .expect("expand task panicked"))
}

async fn collapse(State(e): Shared, Path(id): Path<String>) -> ApiResult<impl Serialize> {
    ok(e.collapse(parse::<SuperNodeId>("leaf id", &id)?))
}

async fn leaf_layout(
    State(e): Shared,
    Path(id): Path<String>,
    Query(q): Query<HashMap<String, String>>,
) -> ApiResult<impl Serialize> {
    let id = parse::<SuperNodeId>("leaf id", &id)?;
    let seed = match q.get("seed") {
        Some(s) => parse::<u64>("seed", s)?,
        None => 0,
    };
    let iterations = match q.get("iterations") {
        Some(s) => parse::<usize>("iterations", s)?,
        None => DEFAULT_ITERATIONS,
    };
    ok(tokio::task::spawn_blocking(move || e.leaf_layout(id, seed, iterations))
        .await
        .expect("layout task panicked"))
}

async fn leaf_metrics(State(e): Shared, Path(id): Path<String>) -> ApiResult<impl Serialize> {
    let id = parse::<SuperNodeId>("leaf id", &id)?;
    ok(tokio::task::spawn_blocking(move || e.leaf_metrics(id))
        .await
        .expect("metrics task panicked"))
}

async fn hierarchy_layout(State(e): Shared) -> impl IntoResponse {
    Json(e.hierarchy_layout())
}

async fn not_found() -> ApiError {
    ApiError {
        status: StatusCode::NOT_FOUND,
        code: "no_route",
        message: "no such endpoint".into(),
    }
}

pub fn router(engine: Arc<Engine>) -> Router {
    Router::new()
        .route("/api/tree", get(tree))
        .route("/api/supernode/{id}", get(supernode))
        .route("/api/supernode/{id}/closure", get(closure))
        .route("/api/connectivity", get(connectivity))
        .route("/api/node/{id}/external", get(external))
        .route("/api/search", get(search))
        .route("/api/leaf/{id}/expand", post(expand))
        .route("/api/leaf/{id}/collapse", post(collapse))
        .route("/api/leaf/{id}/layout", get(leaf_layout))
        .route("/api/leaf/{id}/metrics", get(leaf_metrics))
        .route("/api/layout/hierarchy", get(hierarchy_layout))
        .fallback(not_found)
        .with_state(engine)
}

/// Serve until Ctrl-C.
pub async fn serve(engine: Arc<Engine>, addr: SocketAddr) -> crate::error::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .map_err(|e| Error::io(format!("listen {addr}"), e))?;
    log::info!("listening on {}", listener.local_addr().map(|a| a.to_string()).unwrap_or_default());
    axum::serve(listener, router(engine))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(|e| Error::io(addr.to_string(), e))
}
