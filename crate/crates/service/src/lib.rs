//! HTTP session service: builds a visualization once per (machine, word,
//! options) and serves its frames, diagrams and invariant jumps.
//!
//! Routes:
//!
//! | method | path | |
//! |---|---|---|
//! | POST | `/sessions` | create a session |
//! | GET | `/sessions/{id}` | session summary |
//! | GET | `/sessions/{id}/frames/{n}` | frame JSON |
//! | GET | `/sessions/{id}/diagram/{n}?format=dot\|svg` | diagram |
//! | GET | `/sessions/{id}/jump?from=n&dir=next\|prev` | invariant failure jump |
//! | DELETE | `/sessions/{id}` | drop a session |
//! | GET | `/healthz` | liveness |
//!
//! Anything else is served from the static asset directory, if configured.

mod api;
mod error;
mod store;

use std::net::SocketAddr;
use std::num::NonZeroUsize;
use std::path::PathBuf;
use std::sync::Arc;

use axum::http::{header, HeaderValue, Method};
use axum::routing::{get, post};
use axum::Router;
use tower_http::cors::{AllowOrigin, CorsLayer};
use tower_http::services::ServeDir;

pub use error::ApiError;
pub use store::{Session, SessionStore};

pub const DEFAULT_PORT: u16 = 7421;

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub max_word_len: usize,
    pub max_steps: u32,
    pub max_nodes: usize,
    pub max_sessions: NonZeroUsize,
    /// Web UI assets served at `/`.
    pub static_dir: Option<PathBuf>,
    /// Origin allowed by CORS; any origin when unset.
    pub allowed_origin: Option<String>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            max_word_len: 64,
            max_steps: 10_000,
            max_nodes: 1_000_000,
            max_sessions: NonZeroUsize::new(256).unwrap(),
            static_dir: None,
            allowed_origin: None,
        }
    }
}

#[derive(Debug)]
pub(crate) struct AppState {
    pub config: ServiceConfig,
    pub sessions: SessionStore,
}

pub fn router(config: ServiceConfig) -> Router {
    let cors = CorsLayer::new()
        .allow_methods([Method::GET, Method::POST, Method::DELETE])
        .allow_headers([header::CONTENT_TYPE, header::IF_NONE_MATCH])
        .expose_headers([header::ETAG, header::LOCATION])
        .allow_origin(match config.allowed_origin.as_deref().map(HeaderValue::from_str) {
            Some(Ok(origin)) => AllowOrigin::exact(origin),
            _ => AllowOrigin::any(),
        });
    let static_dir = config.static_dir.clone();
    let state = Arc::new(AppState {
        sessions: SessionStore::new(config.max_sessions),
        config,
    });
    let app = Router::new()
        .route("/healthz", get(api::healthz))
        .route("/sessions", post(api::create_session))
        .route("/sessions/{id}", get(api::get_session).delete(api::delete_session))
        .route("/sessions/{id}/frames/{n}", get(api::get_frame))
        .route("/sessions/{id}/diagram/{n}", get(api::get_diagram))
        .route("/sessions/{id}/jump", get(api::jump))
        .with_state(state);
    let app = match static_dir {
        Some(dir) => app.fallback_service(ServeDir::new(dir)),
        None => app.route("/", get(api::index)),
    };
    app.layer(cors)
}

/// Serves until Ctrl-C.
pub async fn serve(addr: SocketAddr, config: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(config))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
