use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use zplus::json::SCHEMA;

#[derive(Debug, Serialize)]
pub struct ReportEnvelope {
    pub schema: &'static str,
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'static str,
    pub input_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub payload: Value,
}

impl ReportEnvelope {
    pub fn new(subcommand: &'static str, input_digest: String, payload: Value, deterministic: bool) -> Self {
        let timestamp = (!deterministic).then(|| humantime::format_rfc3339_seconds(std::time::SystemTime::now()).to_string());
        ReportEnvelope {
            schema: SCHEMA,
            tool: "zplus",
            version: env!("CARGO_PKG_VERSION"),
            subcommand,
            input_digest,
            timestamp,
            payload,
        }
    }
}

pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}
