use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::{Deserialize, Serialize};

/// Body of every non-2xx response.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCode {
    EmptyQuery,
    BadTopK,
    BadRequest,
    NoIndex,
    IngestFailed,
    ReindexInProgress,
    Internal,
}

impl ErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::EmptyQuery => "empty_query",
            ErrorCode::BadTopK => "bad_top_k",
            ErrorCode::BadRequest => "bad_request",
            ErrorCode::NoIndex => "no_index",
            ErrorCode::IngestFailed => "ingest_failed",
            ErrorCode::ReindexInProgress => "reindex_in_progress",
            ErrorCode::Internal => "internal",
        }
    }

    pub fn status(self) -> StatusCode {
        match self {
            ErrorCode::EmptyQuery | ErrorCode::BadTopK | ErrorCode::BadRequest => StatusCode::BAD_REQUEST,
            ErrorCode::NoIndex => StatusCode::SERVICE_UNAVAILABLE,
            ErrorCode::IngestFailed => StatusCode::UNPROCESSABLE_ENTITY,
            ErrorCode::ReindexInProgress => StatusCode::CONFLICT,
            ErrorCode::Internal => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ApiError {
    pub code: ErrorCode,
    pub message: String,
}

impl ApiError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = ErrorBody {
            error: self.code.as_str().to_owned(),
            message: self.message,
        };
        (self.code.status(), Json(body)).into_response()
    }
}
