use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde_json::json;
use transfinite::ValidationReport;

#[derive(Debug, thiserror::Error)]
pub enum ApiError {
    #[error("malformed request: {0}")]
    BadRequest(String),
    #[error("unknown example {0:?}")]
    UnknownExample(String),
    #[error("network failed validation")]
    Invalid(Box<ValidationReport>),
    #[error("network is not valid: {0}")]
    Structure(String),
    #[error("resolution {resolution} exceeds the limit of {cap}")]
    TooLarge { resolution: usize, cap: usize },
    #[error("internal error: {0}")]
    Internal(String),
}

impl ApiError {
    pub fn status(&self) -> StatusCode {
        match self {
            ApiError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ApiError::UnknownExample(_) => StatusCode::NOT_FOUND,
            ApiError::Invalid(_) | ApiError::Structure(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ApiError::TooLarge { .. } => StatusCode::PAYLOAD_TOO_LARGE,
            ApiError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = match &self {
            ApiError::Invalid(report) => json!({ "error": self.to_string(), "report": report }),
            _ => json!({ "error": self.to_string() }),
        };
        (self.status(), Json(body)).into_response()
    }
}
