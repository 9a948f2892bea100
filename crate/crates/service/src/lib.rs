//! JSON-over-HTTP evaluation service for the interactive editor.
//!
//! Two endpoints:
//!
//! * `GET /api/examples` lists the example networks as `{name, n}`.
//! * `POST /api/mesh` tessellates a network (inline or by example name)
//!   with a scheme, a resolution and optional central control point
//!   settings, and returns flat vertex, index and normal arrays.
//!
//! Requests are independent. Example networks are immutable and shared,
//! and evaluation runs on the blocking pool.

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::path::Path;
use std::sync::Arc;

use axum::http::{header, HeaderValue, Method};
use axum::routing::{get, post};
use axum::Router;
use tower_http::cors::{AllowOrigin, CorsLayer};
use transfinite::{bundled, CurveNetwork};

mod api;
mod error;

pub use api::{Bbox, ExampleEntry, MeshRequest, MeshResponse, NetworkSource};
pub use error::ApiError;

/// Largest accepted `resolution` unless configured otherwise.
pub const DEFAULT_RESOLUTION_CAP: usize = 120;

pub const DEFAULT_PORT: u16 = 8741;

#[derive(Clone, Debug)]
pub struct ServiceConfig {
    pub examples: BTreeMap<String, CurveNetwork>,
    pub resolution_cap: usize,
}

impl Default for ServiceConfig {
    /// The bundled networks and the default cap.
    fn default() -> Self {
        ServiceConfig {
            examples: bundled::NAMES
                .iter()
                .zip(bundled::all())
                .map(|(name, net)| (name.to_string(), net))
                .collect(),
            resolution_cap: DEFAULT_RESOLUTION_CAP,
        }
    }
}

impl ServiceConfig {
    /// Examples from every `*.json` network in `dir`, named by file stem.
    pub fn from_dir(dir: impl AsRef<Path>) -> transfinite::Result<Self> {
        Ok(ServiceConfig {
            examples: load_examples(dir)?,
            resolution_cap: DEFAULT_RESOLUTION_CAP,
        })
    }
}

pub fn load_examples(dir: impl AsRef<Path>) -> transfinite::Result<BTreeMap<String, CurveNetwork>> {
    let dir = dir.as_ref();
    let entries = std::fs::read_dir(dir).map_err(|source| transfinite::Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut examples = BTreeMap::new();
    for entry in entries {
        let path = entry
            .map_err(|source| transfinite::Error::Io {
                path: dir.to_path_buf(),
                source,
            })?
            .path();
        if path.extension().is_some_and(|e| e == "json") {
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            examples.insert(name, CurveNetwork::load(&path)?);
        }
    }
    Ok(examples)
}

pub(crate) struct AppState {
    pub(crate) config: ServiceConfig,
}

pub fn router(config: ServiceConfig) -> Router {
    let state = Arc::new(AppState { config });
    Router::new()
        .route("/api/examples", get(api::examples))
        .route("/api/mesh", post(api::mesh))
        .layer(cors())
        .with_state(state)
}

/// Lets a dev server on any localhost port call the API.
fn cors() -> CorsLayer {
    CorsLayer::new()
        .allow_origin(AllowOrigin::predicate(|origin: &HeaderValue, _| {
            origin.to_str().is_ok_and(is_local_origin)
        }))
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([header::CONTENT_TYPE])
}

fn is_local_origin(origin: &str) -> bool {
    let Some(rest) = origin
        .strip_prefix("http://")
        .or_else(|| origin.strip_prefix("https://"))
    else {
        return false;
    };
    let host = if rest.starts_with('[') {
        rest.split_inclusive(']').next().unwrap_or(rest)
    } else {
        rest.split(':').next().unwrap_or(rest)
    };
    matches!(host, "localhost" | "127.0.0.1" | "[::1]")
}

/// Binds `addr` and serves until the process ends.
pub async fn serve(addr: SocketAddr, config: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(config)).await
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn local_origins() {
        for ok in ["http://localhost:5173", "http://127.0.0.1:8080", "https://localhost", "http://[::1]:3000"] {
            assert!(is_local_origin(ok), "{ok}");
        }
        for bad in ["http://example.com", "http://localhost.evil.com", "file://localhost", "null"] {
            assert!(!is_local_origin(bad), "{bad}");
        }
    }
}
