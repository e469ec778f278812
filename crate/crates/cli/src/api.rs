//! JSON over HTTP. Sessions live in memory; commands on one session are
//! queued behind a fair lock so they run in arrival order.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use cnl_core::chronos::UtcOffset;
use cnl_core::lexicon::LexicalResources;
use cnl_core::session::{LogEntry, Mode, Session, SessionError, TrackResult, SPEECH};
use cnl_core::surface::{precheck, prepare, split_sentences, InputDiagnostic};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::Clock;

pub struct AppState {
    res: Arc<LexicalResources>,
    clock: Clock,
    next: AtomicU64,
    sessions: Mutex<HashMap<String, Arc<tokio::sync::Mutex<Session>>>>,
}

impl AppState {
    pub fn new(res: Arc<LexicalResources>, clock: Clock) -> Arc<AppState> {
        Arc::new(AppState {
            res,
            clock,
            next: AtomicU64::new(1),
            sessions: Mutex::new(HashMap::new()),
        })
    }

    fn session(&self, id: &str) -> Result<Arc<tokio::sync::Mutex<Session>>, ApiError> {
        let map = self.sessions.lock().expect("session table poisoned");
        map.get(id)
            .cloned()
            .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("no such session `{id}`")))
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> ApiError {
        ApiError {
            status,
            message: message.into(),
        }
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> ApiError {
        let status = match e {
            SessionError::StaleReference(_) => StatusCode::CONFLICT,
            SessionError::Generate(_) => StatusCode::UNPROCESSABLE_ENTITY,
            _ => StatusCode::BAD_REQUEST,
        };
        ApiError::new(status, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message }))).into_response()
    }
}

#[derive(Debug, Deserialize)]
pub struct NewSession {
    pub teller: String,
    #[serde(default)]
    pub utc_offset: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct SessionInfo {
    pub id: String,
    pub teller: String,
    pub utc_offset: String,
}

#[derive(Debug, Deserialize)]
pub struct Submit {
    pub text: String,
    #[serde(default)]
    pub mode: Mode,
    /// Reserved for spoken input, which is not available.
    #[serde(default)]
    pub speech: bool,
}

#[derive(Debug, Deserialize)]
pub struct Choose {
    pub sentence_ref: usize,
    pub index: usize,
}

#[derive(Debug, Deserialize)]
pub struct Tracks {
    pub lines: String,
}

#[derive(Debug, Deserialize)]
pub struct Generate {
    pub term: String,
}

#[derive(Debug, Deserialize)]
pub struct Precheck {
    pub text: String,
}

#[derive(Debug, Serialize)]
pub struct LogDump<'a> {
    pub id: &'a str,
    pub teller: &'a str,
    pub utc_offset: String,
    pub entries: &'a [LogEntry],
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}/submit", post(submit))
        .route("/sessions/{id}/choose", post(choose))
        .route("/sessions/{id}/paragraph", post(paragraph))
        .route("/sessions/{id}/tracks", post(tracks))
        .route("/sessions/{id}/generate", post(generate))
        .route("/sessions/{id}/precheck", post(check))
        .route("/sessions/{id}/log", get(log))
        .with_state(state)
}

async fn create(
    State(st): State<Arc<AppState>>,
    Json(req): Json<NewSession>,
) -> Result<impl IntoResponse, ApiError> {
    let offset: UtcOffset = match req.utc_offset.as_deref() {
        Some(s) => s
            .parse()
            .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, format!("bad utc_offset: {e}")))?,
        None => UtcOffset::default(),
    };
    let session = Session::new(&req.teller, offset, st.res.clone())?;
    let id = format!("s{}", st.next.fetch_add(1, Ordering::Relaxed));
    let info = SessionInfo {
        id: id.clone(),
        teller: session.teller().to_string(),
        utc_offset: offset.to_string(),
    };
    st.sessions
        .lock()
        .expect("session table poisoned")
        .insert(id, Arc::new(tokio::sync::Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(info)))
}

async fn submit(
    State(st): State<Arc<AppState>>,
    Path(id): Path<String>,
    Json(req): Json<Submit>,
) -> Result<Response, ApiError> {
    let s = st.session(&id)?;
    if req.speech {
        let body = json!({ "error": "speech input is unsupported", "speech": SPEECH });
        return Ok((StatusCode::UNPROCESSABLE_ENTITY, Json(body)).into_response());
    }
    let mut s = s.lock().await;
    Ok(Json(s.submit_at(&req.text, req.mode, st.clock.now())).into_response())
}

async fn choose(
    State(st): State<Arc<AppState>>,
    Path(id): Path<String>,
    Json(req): Json<Choose>,
) -> Result<Response, ApiError> {
    let s = st.session(&id)?;
    let mut s = s.lock().await;
    Ok(Json(s.choose_at(req.sentence_ref, req.index, st.clock.now())?).into_response())
}

async fn paragraph(
    State(st): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Response, ApiError> {
    let s = st.session(&id)?;
    let mut s = s.lock().await;
    let now = st.clock.now();
    s.paragraph_at(now);
    Ok(
        Json(json!({ "timestamp": s.log().last().map_or(now.iso(), |e| e.timestamp.clone()) }))
            .into_response(),
    )
}

async fn tracks(
    State(st): State<Arc<AppState>>,
    Path(id): Path<String>,
    Json(req): Json<Tracks>,
) -> Result<Json<TrackResult>, ApiError> {
    let s = st.session(&id)?;
    let mut s = s.lock().await;
    Ok(Json(s.tracks_at(&req.lines, st.clock.now())))
}

async fn generate(
    State(st): State<Arc<AppState>>,
    Path(id): Path<String>,
    Json(req): Json<Generate>,
) -> Result<Response, ApiError> {
    let s = st.session(&id)?;
    let mut s = s.lock().await;
    let sentence = s.generate_at(&req.term, st.clock.now())?;
    let timestamp = s.log().last().map(|e| e.timestamp.clone());
    Ok(Json(json!({ "timestamp": timestamp, "sentence": sentence })).into_response())
}

/// Diagnostics for text that has not been submitted yet. Not logged.
async fn check(
    State(st): State<Arc<AppState>>,
    Path(id): Path<String>,
    Json(req): Json<Precheck>,
) -> Result<Response, ApiError> {
    st.session(&id)?;
    let tokens = prepare(&req.text, &st.res);
    let diagnostics: Vec<InputDiagnostic> = split_sentences(&tokens)
        .iter()
        .flat_map(|s| precheck(s, &st.res.lexicon))
        .collect();
    Ok(Json(json!({ "diagnostics": diagnostics })).into_response())
}

async fn log(
    State(st): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Response, ApiError> {
    let s = st.session(&id)?;
    let s = s.lock().await;
    let dump = LogDump {
        id: &id,
        teller: s.teller(),
        utc_offset: s.offset().to_string(),
        entries: s.log(),
    };
    Ok(Json(dump).into_response())
}
