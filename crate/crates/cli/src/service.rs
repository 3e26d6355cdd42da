//! Read-only JSON endpoints over a loaded [`Artifacts`] directory.

use std::sync::Arc;

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use rumour_core::corpus::Stance;
use rumour_core::features::WINDOWS;
use serde_json::{json, Value};

use crate::artifacts::{Artifacts, RumourInfo};
use crate::SCHEMA_VERSION;

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn not_found(what: &str, id: &str) -> Self {
        Self {
            status: StatusCode::NOT_FOUND,
            message: format!("unknown {what} {id:?}"),
        }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self {
            status: StatusCode::BAD_REQUEST,
            message: message.into(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({
            "schema_version": SCHEMA_VERSION,
            "error": { "status": self.status.as_u16(), "message": self.message },
        });
        (self.status, Json(body)).into_response()
    }
}

type Shared = Arc<Artifacts>;
type ApiResult = Result<Json<Value>, ApiError>;

pub fn router(artifacts: Arc<Artifacts>) -> Router {
    Router::new()
        .route("/topics", get(topics))
        .route("/topics/{id}/rumours", get(topic_rumours))
        .route("/rumours/{id}/summary", get(summary))
        .route("/rumours/{id}/intervals/{k}", get(interval))
        .route("/rumours/{id}/forest/{k}", get(forest))
        .fallback(|| async { ApiError { status: StatusCode::NOT_FOUND, message: "no such endpoint".into() } })
        .with_state(artifacts)
}

/// Serves `artifacts` on `addr` until the process is stopped.
pub async fn serve(artifacts: Artifacts, addr: std::net::SocketAddr) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(artifacts))).await?;
    Ok(())
}

pub fn stance_colour(s: Stance) -> &'static str {
    match s {
        Stance::Support => "green",
        Stance::Neutral => "grey",
        Stance::Against => "red",
    }
}

fn parse_interval(raw: &str) -> Result<usize, ApiError> {
    let k: usize = raw
        .parse()
        .map_err(|_| ApiError::bad_request(format!("malformed interval {raw:?}; expected an integer in 1..{WINDOWS}")))?;
    if !(1..=WINDOWS).contains(&k) {
        return Err(ApiError::bad_request(format!("interval out of range 1..{WINDOWS}")));
    }
    Ok(k)
}

fn find<'a>(a: &'a Artifacts, id: &str) -> Result<&'a RumourInfo, ApiError> {
    a.rumour(id).ok_or_else(|| ApiError::not_found("rumour", id))
}

fn features(a: &Artifacts, id: &str, k: usize) -> Value {
    match a.features.get(&(id.to_string(), k)) {
        Some(values) => a
            .feature_names
            .iter()
            .zip(values)
            .map(|(n, v)| json!({ "name": n, "value": v }))
            .collect(),
        None => Value::Array(Vec::new()),
    }
}

fn veracity(a: &Artifacts, id: &str, k: usize) -> Value {
    match a.predictions.get(&(id.to_string(), k)) {
        Some(&p) => json!({ "model": a.model, "probability": p, "predicted": p >= 0.5 }),
        None => Value::Null,
    }
}

async fn topics(State(a): State<Shared>) -> ApiResult {
    let list: Vec<Value> = a.topics().into_iter().map(|(t, n)| json!({ "topic": t, "rumours": n })).collect();
    Ok(Json(json!({ "schema_version": SCHEMA_VERSION, "topics": list })))
}

async fn topic_rumours(State(a): State<Shared>, Path(topic): Path<String>) -> ApiResult {
    let rumours: Vec<Value> = a
        .index
        .rumours
        .iter()
        .filter(|r| r.topic == topic)
        .map(|r| {
            json!({
                "rumour_id": r.rumour_id,
                "claim": r.claim,
                "started_at": r.started_at,
                "first_tweet_at": r.first_tweet_at,
                "stance_histogram": r.intervals[WINDOWS - 1].stance_histogram,
                "veracity": r.veracity,
                "modelled_veracity": veracity(&a, &r.rumour_id, WINDOWS),
            })
        })
        .collect();
    if rumours.is_empty() {
        return Err(ApiError::not_found("topic", &topic));
    }
    Ok(Json(json!({ "schema_version": SCHEMA_VERSION, "topic": topic, "rumours": rumours })))
}

async fn summary(State(a): State<Shared>, Path(id): Path<String>) -> ApiResult {
    let r = find(&a, &id)?;
    let last = &r.intervals[WINDOWS - 1];
    let curve: Vec<Value> = (1..=WINDOWS)
        .map(|k| a.predictions.get(&(id.clone(), k)).map_or(Value::Null, |&p| json!(p)))
        .collect();
    Ok(Json(json!({
        "schema_version": SCHEMA_VERSION,
        "rumour_id": r.rumour_id,
        "topic": r.topic,
        "claim": r.claim,
        "veracity": r.veracity,
        "started_at": r.started_at,
        "first_tweet_at": r.first_tweet_at,
        "verified_at": r.verified_at,
        "tweets": last.tweets,
        "stance_histogram": last.stance_histogram,
        "features": features(&a, &id, WINDOWS),
        "modelled_veracity": veracity(&a, &id, WINDOWS),
        "veracity_curve": curve,
        "word_frequencies": r.word_frequencies,
    })))
}

async fn interval(State(a): State<Shared>, Path((id, k)): Path<(String, String)>) -> ApiResult {
    let k = parse_interval(&k)?;
    let r = find(&a, &id)?;
    let info = &r.intervals[k - 1];
    Ok(Json(json!({
        "schema_version": SCHEMA_VERSION,
        "rumour_id": r.rumour_id,
        "interval": k,
        "cutoff": info.cutoff,
        "tweets": info.tweets,
        "stance_histogram": info.stance_histogram,
        "features": features(&a, &id, k),
        "modelled_veracity": veracity(&a, &id, k),
    })))
}

async fn forest(State(a): State<Shared>, Path((id, k)): Path<(String, String)>) -> ApiResult {
    let k = parse_interval(&k)?;
    let r = find(&a, &id)?;
    let lines = a.forests.get(&(id.clone(), k)).map(Vec::as_slice).unwrap_or_default();
    let nodes: Vec<Value> = lines
        .iter()
        .map(|l| {
            json!({
                "user_id": l.child,
                "stance": l.stance.name(),
                "colour": stance_colour(l.stance),
                "parent": l.parent,
                "first_seen": l.ts,
            })
        })
        .collect();
    let edges: Vec<Value> = lines
        .iter()
        .filter_map(|l| {
            l.parent.as_ref().map(|p| {
                json!({ "parent": p, "child": l.child, "stance": l.stance.name(), "colour": stance_colour(l.stance) })
            })
        })
        .collect();
    Ok(Json(json!({
        "schema_version": SCHEMA_VERSION,
        "rumour_id": r.rumour_id,
        "interval": k,
        "nodes": nodes,
        "edges": edges,
    })))
}
