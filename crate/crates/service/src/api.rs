use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, HeaderValue, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::Json;
use ndviz_core::engine::ExploreError;
use ndviz_core::frames::Direction;
use ndviz_core::machine::{MachineFile, EMP};
use ndviz_core::pipeline::PipelineError;
use ndviz_core::{validate, word, ExploreOptions, Symbol, Visualization};
use serde::Deserialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::ApiError;
use crate::store::Session;
use crate::AppState;

type AppResult<T> = Result<T, ApiError>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateRequest {
    machine: Value,
    #[serde(default)]
    word: WordField,
    #[serde(default)]
    options: OptionsField,
}

/// `"a,b,b"` or `["a", "b", "b"]`.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum WordField {
    Text(String),
    List(Vec<String>),
}

impl Default for WordField {
    fn default() -> Self {
        WordField::List(Vec::new())
    }
}

impl WordField {
    fn symbols(&self) -> Vec<Symbol> {
        match self {
            WordField::Text(t) => word(t),
            WordField::List(items) => items
                .iter()
                .filter(|s| !s.is_empty() && *s != EMP)
                .map(|s| Symbol::new(s.as_str()))
                .collect(),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct OptionsField {
    max_steps: Option<u32>,
    add_dead: bool,
}

fn explore_error(e: &ExploreError) -> ApiError {
    match e {
        ExploreError::InvalidMachine(report) => ApiError::bad_request("invalid machine")
            .with("violations", json!(report.violations)),
        ExploreError::NodeLimit { .. } => ApiError::too_large(e.to_string()),
        ExploreError::UnknownSymbol { .. } | ExploreError::ZeroMaxSteps => {
            ApiError::bad_request(e.to_string())
        }
        ExploreError::NotAugmented => ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()),
    }
}

fn pipeline_error(e: &PipelineError) -> ApiError {
    match e {
        PipelineError::Explore(e) => explore_error(e),
        PipelineError::Invariant { .. } => ApiError::bad_request(e.to_string()),
        PipelineError::FrameOutOfRange { index, count } => ApiError::frame_range(*index, *count),
        _ => ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()),
    }
}

fn summary(s: &Session) -> Value {
    let v = &s.visualization;
    let forest = v.forest();
    let frames = v.frames();
    let m = v.machine();
    json!({
        "id": s.id,
        "kind": m.kind(),
        "states": m.states(),
        "word": s.word,
        "options": { "max_steps": s.options.max_steps, "add_dead": s.options.add_dead },
        "frame_count": frames.len(),
        "verdict": v.verdict(),
        "computations": frames.last().map_or(0, |f| f.computation_count),
        "accepting_leaves": forest.accepting_leaves().len(),
        "cutoff_count": forest.cutoff_count(),
        "nodes": forest.len(),
        "created_at": s.created_at.duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
    })
}

pub(crate) async fn create_session(
    State(app): State<Arc<AppState>>,
    body: Bytes,
) -> AppResult<Response> {
    let req: CreateRequest = serde_json::from_slice(&body)
        .map_err(|e| ApiError::bad_request(format!("request body: {e}")))?;
    let machine = MachineFile::parse(&req.machine.to_string())
        .map_err(|e| {
            let ndviz_core::machine::MachineFileError::Json { path, message } = e;
            let path = if path == "machine" { path } else { format!("machine.{path}") };
            ApiError::bad_request(format!("{path}: {message}")).with("path", path)
        })?
        .into_machine();
    let report = validate(&machine);
    if !report.is_ok() {
        return Err(ApiError::bad_request("invalid machine").with("violations", json!(report.violations)));
    }

    let cfg = &app.config;
    let word = req.word.symbols();
    if word.len() > cfg.max_word_len {
        return Err(ApiError::too_large(format!(
            "word has {} symbols; the limit is {}",
            word.len(),
            cfg.max_word_len
        )));
    }
    let max_steps = req.options.max_steps.unwrap_or(ndviz_core::engine::DEFAULT_MAX_STEPS);
    if max_steps > cfg.max_steps {
        return Err(ApiError::too_large(format!(
            "max_steps {max_steps} exceeds the limit {}",
            cfg.max_steps
        )));
    }
    let options = ExploreOptions {
        node_limit: Some(cfg.max_nodes),
        ..ExploreOptions::with_max_steps(max_steps).with_add_dead(req.options.add_dead)
    };

    let (w, opts) = (word.clone(), options.clone());
    let visualization = tokio::task::spawn_blocking(move || Visualization::build(&machine, &w, &opts))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?
        .map_err(|e| pipeline_error(&e))?;

    let session = app.sessions.insert(Session {
        id: uuid::Uuid::new_v4().simple().to_string(),
        word,
        options,
        visualization,
        created_at: SystemTime::now(),
    });
    let location = format!("/sessions/{}", session.id);
    let mut response = (StatusCode::CREATED, Json(summary(&session))).into_response();
    if let Ok(v) = HeaderValue::from_str(&location) {
        response.headers_mut().insert(header::LOCATION, v);
    }
    Ok(response)
}

fn session(app: &AppState, id: &str) -> AppResult<Arc<Session>> {
    app.sessions.get(id).ok_or_else(|| ApiError::no_session(id))
}

/// A response for content that never changes for this URL.
fn immutable(headers: &HeaderMap, content_type: &'static str, body: String) -> Response {
    let etag = format!("\"{:x}\"", Sha256::digest(body.as_bytes()));
    let cache = [
        (header::ETAG, etag.clone()),
        (
            header::CACHE_CONTROL,
            "public, max-age=31536000, immutable".to_string(),
        ),
    ];
    let matches = headers
        .get(header::IF_NONE_MATCH)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.split(',').any(|t| t.trim() == etag || t.trim() == "*"));
    if matches {
        (StatusCode::NOT_MODIFIED, cache).into_response()
    } else {
        (cache, [(header::CONTENT_TYPE, content_type)], body).into_response()
    }
}

pub(crate) async fn get_session(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> AppResult<Json<Value>> {
    let s = session(&app, &id)?;
    Ok(Json(summary(&s)))
}

pub(crate) async fn delete_session(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> AppResult<StatusCode> {
    if app.sessions.remove(&id) {
        Ok(StatusCode::NO_CONTENT)
    } else {
        Err(ApiError::no_session(&id))
    }
}

pub(crate) async fn get_frame(
    State(app): State<Arc<AppState>>,
    Path((id, n)): Path<(String, usize)>,
    headers: HeaderMap,
) -> AppResult<Response> {
    let s = session(&app, &id)?;
    let frame = s.visualization.frame(n).map_err(|e| pipeline_error(&e))?;
    Ok(immutable(&headers, "application/json", frame.to_json()))
}

#[derive(Debug, Deserialize)]
pub(crate) struct DiagramQuery {
    format: Option<String>,
}

pub(crate) async fn get_diagram(
    State(app): State<Arc<AppState>>,
    Path((id, n)): Path<(String, usize)>,
    Query(q): Query<DiagramQuery>,
    headers: HeaderMap,
) -> AppResult<Response> {
    let s = session(&app, &id)?;
    let svg = match q.format.as_deref() {
        None | Some("svg") => true,
        Some("dot") => false,
        Some(other) => {
            return Err(ApiError::bad_request(format!(
                "unknown format '{other}'; expected dot or svg"
            )))
        }
    };
    s.visualization.frame(n).map_err(|e| pipeline_error(&e))?;
    let body = tokio::task::spawn_blocking(move || {
        if svg {
            s.visualization.svg(Some(n))
        } else {
            s.visualization.dot(Some(n))
        }
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?
    .map_err(|e| pipeline_error(&e))?;
    let content_type = if svg {
        "image/svg+xml"
    } else {
        "text/vnd.graphviz; charset=utf-8"
    };
    Ok(immutable(&headers, content_type, body))
}

#[derive(Debug, Deserialize)]
pub(crate) struct JumpQuery {
    from: usize,
    dir: Direction,
}

pub(crate) async fn jump(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(q): Query<JumpQuery>,
    headers: HeaderMap,
) -> AppResult<Response> {
    let s = session(&app, &id)?;
    let count = s.visualization.frames().len();
    if q.from >= count {
        return Err(ApiError::frame_range(q.from, count));
    }
    let target = s.visualization.jump(q.from, q.dir);
    Ok(immutable(
        &headers,
        "application/json",
        json!({ "frame": target }).to_string(),
    ))
}

pub(crate) async fn healthz() -> Json<Value> {
    Json(json!({ "status": "ok" }))
}

pub(crate) async fn index() -> Html<&'static str> {
    Html(INDEX)
}

const INDEX: &str = r#"<!doctype html>
<html lang="en">
<head><meta charset="utf-8"><title>ndviz</title></head>
<body>
<h1>ndviz session service</h1>
<p>No UI assets configured. Start the server with <code>--static DIR</code> to serve them here.</p>
<ul>
<li><code>POST /sessions</code> with <code>{"machine": {...}, "word": "a,b", "options": {"max_steps": 100, "add_dead": false}}</code></li>
<li><code>GET /sessions/{id}/frames/{n}</code></li>
<li><code>GET /sessions/{id}/diagram/{n}?format=dot|svg</code></li>
<li><code>GET /sessions/{id}/jump?from=n&amp;dir=next|prev</code></li>
<li><code>DELETE /sessions/{id}</code></li>
</ul>
</body>
</html>
"#;
