use axum::http::{HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use boardgraph_core::QueryError;
use serde::Serialize;

use crate::VERSION_HEADER;

/// Error response: `{code, message}` with the matching HTTP status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
    pub version: Option<u64>,
}

#[derive(Serialize)]
struct Body<'a> {
    code: &'a str,
    message: &'a str,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            code,
            message: message.into(),
            version: None,
        }
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "INVALID_ARGUMENT", message)
    }

    pub fn not_found(message: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, "NOT_FOUND", message)
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "INTERNAL", message)
    }

    pub fn with_version(mut self, version: u64) -> Self {
        self.version = Some(version);
        self
    }
}

impl From<QueryError> for ApiError {
    fn from(e: QueryError) -> Self {
        let message = e.to_string();
        match e {
            QueryError::UnknownDirector { .. } => {
                Self::new(StatusCode::NOT_FOUND, "UNKNOWN_DIRECTOR", message)
            }
            QueryError::UnknownCompany(_) => Self::new(StatusCode::NOT_FOUND, "UNKNOWN_COMPANY", message),
            QueryError::NoTenure(_) => Self::new(StatusCode::NOT_FOUND, "NO_TENURE_DATA", message),
            QueryError::InvalidArgument(_) => Self::bad_request(message),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = Body {
            code: self.code,
            message: &self.message,
        };
        let mut resp = (self.status, axum::Json(body)).into_response();
        if let Some(v) = self.version {
            resp.headers_mut()
                .insert(VERSION_HEADER, HeaderValue::from(v));
        }
        resp
    }
}
