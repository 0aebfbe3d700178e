//! Blocking JSON-over-HTTP client shared by the remote backends.

use std::time::Duration;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};

/// Environment variable holding the default service address.
pub const ENDPOINT_ENV: &str = "DSRL_ENDPOINT";

#[derive(Debug, Clone)]
pub struct Client {
    endpoint: String,
    agent: ureq::Agent,
}

impl Client {
    pub fn new(endpoint: impl Into<String>) -> Self {
        let endpoint = endpoint.into().trim_end_matches('/').to_string();
        let agent = ureq::AgentBuilder::new()
            .timeout_connect(Duration::from_secs(10))
            .timeout(Duration::from_secs(600))
            .build();
        Client { endpoint, agent }
    }

    pub fn endpoint(&self) -> &str {
        &self.endpoint
    }

    /// POSTs `body` to `path`. Transport and HTTP failures are backend
    /// errors; an undecodable response body is a protocol error.
    pub fn post<B: Serialize, R: DeserializeOwned>(&self, path: &str, body: &B) -> Result<R> {
        let url = format!("{}{}", self.endpoint, path);
        let response = self.agent.post(&url).send_json(body).map_err(|e| match e {
            ureq::Error::Status(code, resp) => {
                let detail = resp.into_string().unwrap_or_default();
                Error::Backend(format!("{url}: HTTP {code}: {}", detail.trim()))
            }
            ureq::Error::Transport(t) => Error::Backend(format!("{url}: {t}")),
        })?;
        response
            .into_json::<R>()
            .map_err(|e| Error::Protocol(format!("{url}: malformed response: {e}")))
    }
}
