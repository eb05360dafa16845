//! JSON-over-HTTP API under `/api/v1`, backed by an in-memory session store.

use std::sync::{Arc, Mutex};

use anyhow::Context;
use axum::extract::{Path, State};
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{middleware, Json, Router};
use qml_core::class::{enumerate_class, DEFAULT_MAX_CLASSES, DEFAULT_MAX_MULTIPLICITY};
use qml_core::generators::{Generator, GENERATOR_NAMES};
use qml_core::session::{SessionError, SessionStore};
use qml_core::{DegreePair, ExceptionalName, Quiver};
use serde::Deserialize;
use serde_json::{json, Value};

/// Largest class budget a client may request.
pub const MAX_CLASS_BUDGET: usize = DEFAULT_MAX_CLASSES;
const DEFAULT_API_BUDGET: usize = 10_000;

type Store = Arc<Mutex<SessionStore>>;

pub struct ApiError(StatusCode, String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        let status = match e {
            SessionError::NotFound(_) => StatusCode::NOT_FOUND,
            SessionError::NothingToUndo(_) => StatusCode::CONFLICT,
            SessionError::Quiver(_) => StatusCode::BAD_REQUEST,
        };
        ApiError(status, e.to_string())
    }
}

fn bad_request(e: impl std::fmt::Display) -> ApiError {
    ApiError(StatusCode::BAD_REQUEST, e.to_string())
}

/// Either a generator with parameters or an explicit quiver.
#[derive(Deserialize)]
pub struct QuiverSource {
    generator: Option<String>,
    g: Option<usize>,
    b: Option<usize>,
    n: Option<usize>,
    m: Option<usize>,
    quiver: Option<Quiver>,
}

impl QuiverSource {
    fn resolve(self) -> Result<Quiver, ApiError> {
        match (self.quiver, self.generator) {
            (Some(q), None) => Ok(q),
            (None, Some(name)) => Generator::parse(&name, self.g, self.b, self.n, self.m)
                .and_then(Generator::quiver)
                .map_err(bad_request),
            _ => Err(bad_request("give exactly one of \"generator\" or \"quiver\"")),
        }
    }
}

#[derive(Deserialize)]
pub struct MutateBody {
    vertex: usize,
}

#[derive(Deserialize)]
pub struct ClassBody {
    #[serde(flatten)]
    source: QuiverSource,
    max_classes: Option<usize>,
    max_mult: Option<u64>,
}

fn lock(store: &Store) -> std::sync::MutexGuard<'_, SessionStore> {
    store.lock().unwrap_or_else(|p| p.into_inner())
}

async fn create(State(store): State<Store>, Json(body): Json<QuiverSource>) -> Result<impl IntoResponse, ApiError> {
    let q = body.resolve()?;
    let state = lock(&store).create(q).state();
    Ok((StatusCode::CREATED, Json(state)))
}

async fn show(State(store): State<Store>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    Ok(Json(lock(&store).get(&id)?.state()))
}

async fn mutate(
    State(store): State<Store>,
    Path(id): Path<String>,
    Json(body): Json<MutateBody>,
) -> Result<Json<Value>, ApiError> {
    Ok(Json(lock(&store).mutate(&id, body.vertex)?.state()))
}

async fn undo(State(store): State<Store>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    Ok(Json(lock(&store).undo(&id)?.state()))
}

async fn degrees(State(store): State<Store>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let mut guard = lock(&store);
    let s = guard.get(&id)?;
    let rows: Vec<Value> = s
        .quiver
        .degree_profile()
        .into_iter()
        .enumerate()
        .map(|(v, d)| {
            json!({ "vertex": v, "in": d.in_degree, "out": d.out_degree, "one_one": d == DegreePair::new(1, 1) })
        })
        .collect();
    Ok(Json(json!({ "session": s.id, "degrees": rows })))
}

async fn generators() -> Json<Value> {
    let exceptional: Vec<&str> = ExceptionalName::ALL.iter().map(|n| n.as_str()).collect();
    Json(json!({
        "generators": GENERATOR_NAMES,
        "parameters": { "qg0": ["g"], "qgb": ["g", "b"], "an": ["n"], "polygon": ["m"] },
        "exceptional": exceptional,
    }))
}

async fn class(Json(body): Json<ClassBody>) -> Result<Json<Value>, ApiError> {
    let budget = body.max_classes.unwrap_or(DEFAULT_API_BUDGET);
    if budget > MAX_CLASS_BUDGET {
        return Err(bad_request(format!("max_classes is capped at {MAX_CLASS_BUDGET}")));
    }
    let cutoff = body.max_mult.unwrap_or(DEFAULT_MAX_MULTIPLICITY);
    let q = body.source.resolve()?;
    let report = tokio::task::spawn_blocking(move || enumerate_class(&q, budget, cutoff))
        .await
        .map_err(|e| ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?
        .map_err(bad_request)?;
    Ok(Json(json!({
        "verdict": report.verdict,
        "class_count": report.class_count(),
        "explored": report.explored,
        "arrow_count_set": report.arrow_count_set(),
    })))
}

async fn preflight() -> StatusCode {
    StatusCode::NO_CONTENT
}

async fn cors(mut res: Response) -> Response {
    let h = res.headers_mut();
    h.insert(header::ACCESS_CONTROL_ALLOW_ORIGIN, HeaderValue::from_static("*"));
    h.insert(header::ACCESS_CONTROL_ALLOW_METHODS, HeaderValue::from_static("GET, POST, OPTIONS"));
    h.insert(header::ACCESS_CONTROL_ALLOW_HEADERS, HeaderValue::from_static("content-type"));
    res
}

pub fn router(store: Store) -> Router {
    let api = Router::new()
        .route("/session", post(create).options(preflight))
        .route("/session/{id}", get(show).options(preflight))
        .route("/session/{id}/mutate", post(mutate).options(preflight))
        .route("/session/{id}/undo", post(undo).options(preflight))
        .route("/session/{id}/degrees", get(degrees))
        .route("/generators", get(generators))
        .route("/class", post(class).options(preflight))
        .with_state(store);
    Router::new()
        .nest("/api/v1", api)
        .layer(middleware::map_response(cors))
        .method_not_allowed_fallback(|m: Method| async move {
            ApiError(StatusCode::METHOD_NOT_ALLOWED, format!("{m} not allowed"))
        })
}

pub async fn serve(port: u16) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port))
        .await
        .with_context(|| format!("port {port} is in use or unavailable"))?;
    eprintln!("listening on http://127.0.0.1:{port}/api/v1");
    let app = router(Arc::new(Mutex::new(SessionStore::default())));
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
