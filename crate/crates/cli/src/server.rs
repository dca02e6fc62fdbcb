use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::{json, Value};
use tower_http::services::ServeDir;

use crate::engine::{apply_merged, pretty};
use crate::error::ServiceError;
use crate::session::{SessionStore, SessionUpload};

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let status = match self {
            ServiceError::Invalid(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ServiceError::Conflict(_) => StatusCode::CONFLICT,
            ServiceError::NotFound(_) => StatusCode::NOT_FOUND,
            ServiceError::Io(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        (status, Json(self.to_json())).into_response()
    }
}

type AppState = Arc<SessionStore>;
type ApiResult<T> = Result<T, ServiceError>;

/// Builds the API router. Static files under `ui_dir`, if any, are served
/// for every path the API does not claim.
pub fn router(store: Arc<SessionStore>, ui_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}/graph", get(graph))
        .route("/sessions/{id}/stable", get(stable))
        .route("/sessions/{id}/select", post(select))
        .route("/sessions/{id}/result", get(result))
        .route("/sessions/{id}/dot", get(dot))
        .with_state(store);
    match ui_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

fn body<T>(payload: Result<Json<T>, JsonRejection>) -> ApiResult<T> {
    payload
        .map(|Json(v)| v)
        .map_err(|e| ServiceError::Invalid(e.body_text()))
}

async fn create_session(
    State(store): State<AppState>,
    payload: Result<Json<SessionUpload>, JsonRejection>,
) -> ApiResult<(StatusCode, Json<Value>)> {
    let upload = body(payload)?;
    let handle = store.create(&upload)?;
    let session = handle.read();
    let a = &session.analysis;
    Ok((
        StatusCode::CREATED,
        Json(json!({
            "id": session.id,
            "arguments": a.conflicts.graph.arguments().len(),
            "attacks": a.conflicts.graph.len(),
            "stable_count": a.stable.labelings.len(),
            "stable_complete": a.stable.complete,
            "has_dataset": session.dataset.is_some(),
        })),
    ))
}

async fn graph(State(store): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    let handle = store.get(&id)?;
    let session = handle.read();
    Ok(json_text(pretty(&session.analysis.graph_json())))
}

#[derive(Deserialize)]
struct PageQuery {
    #[serde(default)]
    page: usize,
    #[serde(default = "one")]
    per_page: usize,
}

fn one() -> usize {
    1
}

async fn stable(
    State(store): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<PageQuery>,
) -> ApiResult<Json<Value>> {
    if q.per_page == 0 {
        return Err(ServiceError::Invalid("per_page must be positive".into()));
    }
    let handle = store.get(&id)?;
    let session = handle.read();
    let a = &session.analysis;
    let total = a.stable.labelings.len();
    Ok(Json(json!({
        "page": q.page,
        "per_page": q.per_page,
        "pages": total.div_ceil(q.per_page),
        "total": total,
        "complete": a.stable.complete,
        "grounded": a.grounded,
        "labelings": a.stable_page(q.page.saturating_mul(q.per_page), q.per_page),
    })))
}

#[derive(Deserialize)]
struct Selection {
    index: usize,
}

async fn select(
    State(store): State<AppState>,
    Path(id): Path<String>,
    payload: Result<Json<Selection>, JsonRejection>,
) -> ApiResult<Response> {
    let handle = store.get(&id)?;
    let Selection { index } = body(payload)?;
    let mut session = handle.write();
    let text = session.select(index)?.to_json();
    store.persist(&session)?;
    Ok(json_text(text))
}

#[derive(Deserialize)]
struct ResultQuery {
    format: Option<String>,
}

async fn result(
    State(store): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<ResultQuery>,
) -> ApiResult<Response> {
    let handle = store.get(&id)?;
    let session = handle.read();
    let dataset = session
        .dataset
        .as_ref()
        .ok_or_else(|| ServiceError::Conflict("session has no dataset".into()))?;
    let merged = session
        .merged
        .as_ref()
        .ok_or_else(|| ServiceError::Conflict("no stable labeling selected".into()))?;
    let (out, csv) = apply_merged(dataset, merged)?;
    match q.format.as_deref() {
        Some("csv") => Ok(([(header::CONTENT_TYPE, "text/csv; charset=utf-8")], csv).into_response()),
        None | Some("json") => {
            let mut v = serde_json::to_value(&out).expect("dataset serializes");
            v["csv"] = Value::String(csv);
            Ok(Json(v).into_response())
        }
        Some(other) => Err(ServiceError::Invalid(format!("unknown format `{other}`"))),
    }
}

async fn dot(State(store): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    let handle = store.get(&id)?;
    let session = handle.read();
    let labeling = session.analysis.labeling(session.selected)?;
    let text = session.analysis.dot(labeling);
    Ok(([(header::CONTENT_TYPE, "text/vnd.graphviz")], text).into_response())
}

/// Sends pre-rendered JSON verbatim, so HTTP bodies match CLI output byte for byte.
fn json_text(text: String) -> Response {
    ([(header::CONTENT_TYPE, "application/json")], text).into_response()
}

/// Serves until ctrl-c.
pub async fn serve(store: Arc<SessionStore>, ui_dir: Option<PathBuf>, port: u16) -> Result<(), ServiceError> {
    let addr = std::net::SocketAddr::from(([127, 0, 0, 1], port));
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .map_err(|e| ServiceError::Io(format!("{addr}: {e}")))?;
    eprintln!("listening on http://{addr}");
    axum::serve(listener, router(store, ui_dir))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(|e| ServiceError::Io(e.to_string()))
}
