//! Local HTTP API: serves images, runs traces, stores accepted outlines.
//!
//! Algorithmic failure is a 200 response with `outcome: "failure"`; error
//! statuses are reserved for protocol misuse.

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::{Path as UrlPath, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::Error;
use crate::imgio::{load_image, Rect, RgbImage};
use crate::outline::{ChainOutline, EndpointPair, Method, Point};
use crate::pipeline::{autotrace, Tier, TraceConfig, TraceRequest, TraceResult};

const GUIDANCE: &str =
    "Click the start of the fin first, then its end. The dolphin must be swimming to \
                        your left; mirror the image first if it swims to the right.";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcceptedOutline {
    pub revision: u64,
    pub outline: ChainOutline,
}

#[derive(Default)]
struct ImageState {
    latest: Option<TraceResult>,
    accepted: Vec<AcceptedOutline>,
}

struct ImageEntry {
    path: Option<PathBuf>,
    image: Arc<RgbImage>,
    state: Mutex<ImageState>,
}

/// Images by id with per-image trace and acceptance state. Each image has
/// its own lock; traces run outside it.
#[derive(Default)]
pub struct SessionStore {
    images: BTreeMap<String, ImageEntry>,
}

impl SessionStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an image; `path` is where accepted outlines get written beside.
    /// Returns false if the id is taken.
    pub fn insert(
        &mut self,
        id: impl Into<String>,
        image: RgbImage,
        path: Option<PathBuf>,
    ) -> bool {
        let id = id.into();
        if self.images.contains_key(&id) {
            return false;
        }
        self.images.insert(
            id,
            ImageEntry {
                path,
                image: Arc::new(image),
                state: Mutex::default(),
            },
        );
        true
    }

    /// Loads every PNG and JPEG in `dir`; ids are file stems. Files sharing
    /// a stem keep the first in name order.
    pub fn load_dir(dir: &Path) -> Result<Self, Error> {
        let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| {
                p.extension().and_then(|e| e.to_str()).is_some_and(|e| {
                    matches!(e.to_ascii_lowercase().as_str(), "png" | "jpg" | "jpeg")
                })
            })
            .collect();
        paths.sort();
        let mut store = Self::new();
        for path in paths {
            let id = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            let image = load_image(&path)?;
            store.insert(id, image, Some(path));
        }
        Ok(store)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Accepted outlines for `id`, oldest first.
    pub fn accepted(&self, id: &str) -> Option<Vec<AcceptedOutline>> {
        let entry = self.images.get(id)?;
        Some(entry.state.lock().expect("state lock").accepted.clone())
    }

    pub fn latest_trace(&self, id: &str) -> Option<TraceResult> {
        let entry = self.images.get(id)?;
        entry.state.lock().expect("state lock").latest.clone()
    }
}

type Shared = Arc<SessionStore>;

fn error(status: StatusCode, message: impl ToString) -> Response {
    (status, Json(json!({ "error": message.to_string() }))).into_response()
}

// handlers short-circuit with a ready response; boxing it buys nothing here
#[allow(clippy::result_large_err)]
fn entry<'a>(store: &'a SessionStore, id: &str) -> Result<&'a ImageEntry, Response> {
    store
        .images
        .get(id)
        .ok_or_else(|| error(StatusCode::NOT_FOUND, format!("unknown image id {id:?}")))
}

#[allow(clippy::result_large_err)]
fn parse_body<T: for<'de> Deserialize<'de>>(body: &Bytes) -> Result<T, Response> {
    serde_json::from_slice(body)
        .map_err(|e| error(StatusCode::BAD_REQUEST, format!("malformed body: {e}")))
}

async fn healthz() -> &'static str {
    "ok"
}

async fn list_images(State(store): State<Shared>) -> Response {
    let list: Vec<_> = store
        .images
        .iter()
        .map(|(id, e)| json!({ "id": id, "width": e.image.width(), "height": e.image.height() }))
        .collect();
    Json(list).into_response()
}

async fn get_image(State(store): State<Shared>, UrlPath(id): UrlPath<String>) -> Response {
    let image = match entry(&store, &id) {
        Ok(e) => e.image.clone(),
        Err(r) => return r,
    };
    match tokio::task::spawn_blocking(move || image.encode_png()).await {
        Ok(png) => ([(header::CONTENT_TYPE, "image/png")], png).into_response(),
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, e),
    }
}

#[derive(Deserialize)]
struct TraceBody {
    image_id: String,
    start: Point,
    end: Point,
    #[serde(default)]
    viewport: Option<Rect>,
    #[serde(default)]
    tier: Tier,
    #[serde(default)]
    max_dim: Option<usize>,
}

async fn trace(State(store): State<Shared>, body: Bytes) -> Response {
    let body: TraceBody = match parse_body(&body) {
        Ok(b) => b,
        Err(r) => return r,
    };
    let image = match entry(&store, &body.image_id) {
        Ok(e) => e.image.clone(),
        Err(r) => return r,
    };
    let mut config = TraceConfig::default();
    if let Some(m) = body.max_dim {
        config.max_dim = m;
    }
    let endpoints = EndpointPair {
        start: body.start,
        end: body.end,
    };
    let computed = tokio::task::spawn_blocking(move || {
        autotrace(&TraceRequest {
            image: (*image).clone(),
            endpoints,
            viewport: body.viewport,
            tier: body.tier,
            config,
        })
    })
    .await;
    match computed {
        Ok(Ok(result)) => {
            if let Ok(e) = entry(&store, &body.image_id) {
                e.state.lock().expect("state lock").latest = Some(result.clone());
            }
            Json(result).into_response()
        }
        Ok(Err(e @ Error::Orientation { .. })) => (
            StatusCode::UNPROCESSABLE_ENTITY,
            Json(json!({ "error": e.to_string(), "guidance": GUIDANCE })),
        )
            .into_response(),
        Ok(Err(e)) => error(StatusCode::BAD_REQUEST, e),
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, e),
    }
}

#[derive(Deserialize)]
struct AcceptBody {
    points: Vec<Point>,
    #[serde(default)]
    method: Option<Method>,
}

/// Stores a (possibly hand-edited) outline as the next revision and writes
/// it beside the image as `<stem>.outline.json`.
async fn accept(
    State(store): State<Shared>,
    UrlPath(id): UrlPath<String>,
    body: Bytes,
) -> Response {
    let body: AcceptBody = match parse_body(&body) {
        Ok(b) => b,
        Err(r) => return r,
    };
    let e = match entry(&store, &id) {
        Ok(e) => e,
        Err(r) => return r,
    };
    if body.points.is_empty() {
        return error(StatusCode::BAD_REQUEST, "outline has no points");
    }
    let (w, h) = (e.image.width() as i32, e.image.height() as i32);
    if let Some(p) = body
        .points
        .iter()
        .find(|p| p.x < 0 || p.y < 0 || p.x >= w || p.y >= h)
    {
        return error(
            StatusCode::BAD_REQUEST,
            format!("point {p} lies outside the {w}x{h} image"),
        );
    }

    let mut state = e.state.lock().expect("state lock");
    let traced = state.latest.as_ref().and_then(|r| r.outline.as_ref());
    let outline = ChainOutline {
        method: body
            .method
            .or(traced.map(|o| o.method))
            .unwrap_or(Method::Manual),
        threshold: traced.map_or(0, |o| o.threshold),
        scale: traced.map_or(1, |o| o.scale),
        closed_form: traced.is_some_and(|o| o.closed_form),
        points: body.points,
    };
    let revision = state.accepted.last().map_or(1, |a| a.revision + 1);
    let mut written = None;
    if let Some(path) = &e.path {
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let target = path.with_file_name(format!("{stem}.outline.json"));
        if let Err(err) = std::fs::write(&target, outline.to_json()) {
            return error(
                StatusCode::INTERNAL_SERVER_ERROR,
                format!("cannot write {}: {err}", target.display()),
            );
        }
        written = Some(target);
    }
    state.accepted.push(AcceptedOutline { revision, outline });
    Json(json!({ "id": id, "revision": revision, "path": written })).into_response()
}

pub fn router(store: Arc<SessionStore>) -> Router {
    Router::new()
        .route("/healthz", get(healthz))
        .route("/api/images", get(list_images))
        .route("/api/images/{id}", get(get_image))
        .route("/api/trace", post(trace))
        .route("/api/outlines/{id}/accept", post(accept))
        .with_state(store)
}

/// Serves until the process is stopped.
pub async fn serve_api(addr: SocketAddr, store: Arc<SessionStore>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(store)).await
}
