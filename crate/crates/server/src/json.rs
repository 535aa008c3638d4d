use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use serde::Serialize;
use serde_json::{Map, Number, Value};

use crate::error::ApiError;
use crate::{Versioned, VERSION_HEADER};

const SCALE: f64 = 10_000.0;

/// Round every non-integer number to at most four decimal places.
pub fn round_numbers(value: Value) -> Value {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or_default();
            let r = (x * SCALE).round() / SCALE;
            let r = if r == 0.0 { 0.0 } else { r };
            Number::from_f64(r).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_numbers).collect()),
        Value::Object(fields) => Value::Object(
            fields
                .into_iter()
                .map(|(k, v)| (k, round_numbers(v)))
                .collect::<Map<String, Value>>(),
        ),
        other => other,
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    version: u64,
    snapshot_id: &'a str,
    data: Value,
}

/// `{version, snapshot_id, data}` body plus the version header.
pub fn envelope<T: Serialize>(v: &Versioned, data: &T) -> Result<Response, ApiError> {
    let data = serde_json::to_value(data).map_err(|e| ApiError::internal(e.to_string()))?;
    let body = serde_json::to_vec(&Envelope {
        version: v.version,
        snapshot_id: &v.snapshot_id,
        data: round_numbers(data),
    })
    .map_err(|e| ApiError::internal(e.to_string()))?;
    Ok((
        StatusCode::OK,
        [
            (header::CONTENT_TYPE, HeaderValue::from_static("application/json")),
            (
                header::HeaderName::from_static(VERSION_HEADER),
                HeaderValue::from(v.version),
            ),
        ],
        body,
    )
        .into_response())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn rounds_nested_floats() {
        let v = round_numbers(json!({"a": 7.083333333, "b": [0.18380000001, 2], "c": {"d": -0.00001}}));
        assert_eq!(v, json!({"a": 7.0833, "b": [0.1838, 2], "c": {"d": 0.0}}));
        assert_eq!(serde_json::to_string(&round_numbers(json!(64.13))).unwrap(), "64.13");
    }
}
