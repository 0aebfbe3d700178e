//! In-process HTTP stand-in for the embedding/generation service.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::thread::JoinHandle;

use serde_json::{json, Value};

pub type Handler = dyn Fn(&str, &Value) -> (u16, String) + Send + Sync;

pub struct StubServer {
    server: Arc<tiny_http::Server>,
    thread: Option<JoinHandle<()>>,
    pub requests: Arc<AtomicUsize>,
    pub url: String,
}

impl StubServer {
    pub fn start(handler: Box<Handler>) -> Self {
        let server = Arc::new(tiny_http::Server::http("127.0.0.1:0").unwrap());
        let url = format!("http://{}", server.server_addr().to_ip().unwrap());
        let requests = Arc::new(AtomicUsize::new(0));
        let (srv, count) = (server.clone(), requests.clone());
        let thread = std::thread::spawn(move || {
            for mut req in srv.incoming_requests() {
                count.fetch_add(1, Ordering::SeqCst);
                let mut body = String::new();
                req.as_reader().read_to_string(&mut body).unwrap();
                let value: Value = serde_json::from_str(&body).unwrap_or(Value::Null);
                let (status, text) = handler(req.url(), &value);
                let resp = tiny_http::Response::from_string(text)
                    .with_status_code(status)
                    .with_header("Content-Type: application/json".parse::<tiny_http::Header>().unwrap());
                let _ = req.respond(resp);
            }
        });
        StubServer {
            server,
            thread: Some(thread),
            requests,
            url,
        }
    }

    pub fn request_count(&self) -> usize {
        self.requests.load(Ordering::SeqCst)
    }
}

impl Drop for StubServer {
    fn drop(&mut self) {
        self.server.unblock();
        if let Some(t) = self.thread.take() {
            let _ = t.join();
        }
    }
}

/// `/embed` answered with the built-in trigram embedding; `/generate`
/// echoes its inputs.
pub fn echo() -> StubServer {
    StubServer::start(Box::new(|path, body| match path {
        "/embed" => embed_response(body),
        "/generate" => (200, json!({ "outputs": body["inputs"] }).to_string()),
        _ => (404, "{}".into()),
    }))
}

/// `/generate` answered from a table keyed by input text; unknown inputs
/// are a 400 naming the key.
pub fn recorded(table: BTreeMap<String, String>) -> StubServer {
    StubServer::start(Box::new(move |path, body| match path {
        "/embed" => embed_response(body),
        "/generate" => {
            let mut outputs = Vec::new();
            for input in body["inputs"].as_array().cloned().unwrap_or_default() {
                let key = input.as_str().unwrap_or_default();
                match table.get(key) {
                    Some(out) => outputs.push(out.clone()),
                    None => return (400, json!({ "error": format!("no recording for `{key}`") }).to_string()),
                }
            }
            (200, json!({ "outputs": outputs }).to_string())
        }
        _ => (404, "{}".into()),
    }))
}

pub fn embed_response(body: &Value) -> (u16, String) {
    let texts: Vec<String> = body["texts"]
        .as_array()
        .map(|a| a.iter().map(|t| t.as_str().unwrap_or_default().to_string()).collect())
        .unwrap_or_default();
    let vectors: Vec<Vec<f64>> = texts
        .iter()
        .map(|t| dsrl::retrieval::embed_builtin(t).values().to_vec())
        .collect();
    (
        200,
        json!({ "dimension": dsrl::retrieval::BUILTIN_DIMENSION, "vectors": vectors }).to_string(),
    )
}
