//! HTTP service for the advisor front end.
//!
//! Routes: `POST /api/predict`, `GET /api/features?text=…`, `GET /api/model`,
//! `GET /healthz`. Errors come back as `{"error": "…"}` with 400 for bodies
//! that do not parse, 422 for unacceptable requests and 503 when no model is
//! loaded. Request texts are never stored or logged.

use std::collections::HashMap;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde_json::json;

use crate::api::{self, ApiError, LoadedModel, PredictRequest};

type Shared = Option<Arc<LoadedModel>>;

fn error(status: StatusCode, message: impl Into<String>) -> Response {
    (status, Json(json!({ "error": message.into() }))).into_response()
}

fn api_error(e: ApiError) -> Response {
    match e {
        ApiError::Unprocessable(m) => error(StatusCode::UNPROCESSABLE_ENTITY, m),
        ApiError::Internal(m) => error(StatusCode::INTERNAL_SERVER_ERROR, m),
    }
}

fn no_model() -> Response {
    error(StatusCode::SERVICE_UNAVAILABLE, "no model loaded")
}

async fn healthz() -> Response {
    Json(json!({ "status": "ok", "version": env!("CARGO_PKG_VERSION"), "api_version": api::API_VERSION }))
        .into_response()
}

async fn model_info(State(model): State<Shared>) -> Response {
    match model {
        Some(m) => Json(m.info()).into_response(),
        None => no_model(),
    }
}

async fn features(State(model): State<Shared>, Query(q): Query<HashMap<String, String>>) -> Response {
    let Some(text) = q.get("text").cloned() else {
        return error(StatusCode::BAD_REQUEST, "missing query parameter `text`");
    };
    if text.trim().is_empty() {
        return api_error(ApiError::Unprocessable("text is empty".into()));
    }
    let Some(m) = model else { return no_model() };
    match tokio::task::spawn_blocking(move || api::features(&m, &text)).await {
        Ok(Ok(r)) => Json(r).into_response(),
        Ok(Err(e)) => api_error(e),
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()),
    }
}

async fn predict(State(model): State<Shared>, body: Bytes) -> Response {
    let req: PredictRequest = match serde_json::from_slice(&body) {
        Ok(r) => r,
        Err(e) => return error(StatusCode::BAD_REQUEST, format!("malformed request: {e}")),
    };
    if let Err(e) = api::validate(&req) {
        return api_error(e);
    }
    let Some(m) = model else { return no_model() };
    match tokio::task::spawn_blocking(move || api::predict(&m, &req)).await {
        Ok(Ok(r)) => Json(r).into_response(),
        Ok(Err(e)) => api_error(e),
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()),
    }
}

/// The service's routes over an optional immutable model.
pub fn router(model: Option<LoadedModel>) -> Router {
    Router::new()
        .route("/healthz", get(healthz))
        .route("/api/model", get(model_info))
        .route("/api/features", get(features))
        .route("/api/predict", post(predict))
        .with_state(model.map(Arc::new))
}

pub async fn serve(listener: tokio::net::TcpListener, model: Option<LoadedModel>) -> std::io::Result<()> {
    axum::serve(listener, router(model)).await
}
