//! JSON-over-HTTP access to the session store.
//!
//! | method | path | body | response |
//! |---|---|---|---|
//! | POST | `/sessions` | any load format | `{id, kind}` |
//! | GET | `/sessions/{id}/report` | | report |
//! | GET | `/sessions/{id}/ladder[?level=ℓ]` | | rungs, or the relation at `ℓ` |
//! | POST | `/sessions/{id}/refinements` | `{x, y, value}` | report |
//! | GET | `/sessions/{id}/suggestion` | | `{pair}` |
//! | POST | `/sessions/{id}/bookmarks` | `{name, level}` | `{bookmarks}` |
//!
//! Every response body carries `schema_version`. Failures answer with
//! `{schema_version, error: {category, message}}`.

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::data::Format;
use crate::error::Error;
use crate::report::{analyze, ladder_view, level_view, Report};
use crate::session::{load_str, suggest_next_pair};
use crate::store::SessionStore;
use crate::SCHEMA_VERSION;

type Shared = Arc<SessionStore>;

pub struct ApiError(Error);

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        ApiError(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = match self.0.category() {
            "parse" | "format" => StatusCode::BAD_REQUEST,
            "invariant" => StatusCode::UNPROCESSABLE_ENTITY,
            "wrong_kind" => StatusCode::CONFLICT,
            "not_found" => StatusCode::NOT_FOUND,
            _ => StatusCode::INTERNAL_SERVER_ERROR,
        };
        let body = json!({
            "schema_version": SCHEMA_VERSION,
            "error": { "category": self.0.category(), "message": self.0.to_string() },
        });
        (status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

#[derive(Debug, Deserialize)]
pub struct CreateParams {
    pub format: Option<String>,
    pub phi_star: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Created {
    pub schema_version: u32,
    pub id: String,
    pub kind: String,
}

#[derive(Debug, Deserialize)]
pub struct LadderParams {
    pub level: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Refinement {
    pub x: String,
    pub y: String,
    pub value: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BookmarkRequest {
    pub name: String,
    pub level: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Bookmarks {
    pub schema_version: u32,
    pub bookmarks: BTreeMap<String, f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Suggestion {
    pub schema_version: u32,
    pub pair: Option<[String; 2]>,
}

async fn create(
    State(store): State<Shared>,
    Query(params): Query<CreateParams>,
    body: String,
) -> ApiResult<(StatusCode, Json<Created>)> {
    let format = match params.format.as_deref() {
        Some(f) => f.parse()?,
        None => Format::Auto,
    };
    let session = load_str(&body, format, params.phi_star)?;
    let kind = session.data().kind().name().to_string();
    let id = store.insert(session);
    Ok((
        StatusCode::CREATED,
        Json(Created {
            schema_version: SCHEMA_VERSION,
            id,
            kind,
        }),
    ))
}

async fn report(State(store): State<Shared>, Path(id): Path<String>) -> ApiResult<Json<Report>> {
    Ok(Json(store.read(&id, analyze)?))
}

async fn ladder(
    State(store): State<Shared>,
    Path(id): Path<String>,
    Query(params): Query<LadderParams>,
) -> ApiResult<Json<Value>> {
    let body = store.read(&id, |s| {
        let source = s.data().ladder_source()?;
        let mut body = match params.level {
            Some(level) => serde_json::to_value(level_view(&source, level)?),
            None => serde_json::to_value(ladder_view(&source, s.weights())?),
        }
        .expect("views serialize");
        body["schema_version"] = json!(SCHEMA_VERSION);
        Ok(body)
    })?;
    Ok(Json(body))
}

async fn refine(
    State(store): State<Shared>,
    Path(id): Path<String>,
    Json(r): Json<Refinement>,
) -> ApiResult<Json<Report>> {
    let report = store.update(&id, |s| {
        s.refine(&r.x, &r.y, r.value)?;
        analyze(s)
    })?;
    Ok(Json(report))
}

async fn suggestion(State(store): State<Shared>, Path(id): Path<String>) -> ApiResult<Json<Suggestion>> {
    let pair = store.read(&id, suggest_next_pair)?;
    Ok(Json(Suggestion {
        schema_version: SCHEMA_VERSION,
        pair: pair.map(|(x, y)| [x, y]),
    }))
}

async fn bookmark(
    State(store): State<Shared>,
    Path(id): Path<String>,
    Json(b): Json<BookmarkRequest>,
) -> ApiResult<Json<Bookmarks>> {
    let bookmarks = store.update(&id, |s| {
        s.bookmark(&b.name, b.level)?;
        Ok(s.state().bookmarks.clone())
    })?;
    Ok(Json(Bookmarks {
        schema_version: SCHEMA_VERSION,
        bookmarks,
    }))
}

pub fn router(store: Shared) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}/report", get(report))
        .route("/sessions/{id}/ladder", get(ladder))
        .route("/sessions/{id}/refinements", post(refine))
        .route("/sessions/{id}/suggestion", get(suggestion))
        .route("/sessions/{id}/bookmarks", post(bookmark))
        .with_state(store)
}

pub async fn serve(addr: SocketAddr, store: Shared) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(store)).await
}
