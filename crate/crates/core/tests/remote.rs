mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use common::read_fixture;
use common::stub::{echo, recorded, StubServer};
use dsrl::codec::{decode_description, encode_input, IssueKind, SrlFormalism, StylePrefix};
use dsrl::corpus::{parse_canonical, Style};
use dsrl::generators::{gold_oracle_generate, remote_generate, Generator, RemoteGenerator};
use dsrl::inventory::load_inventory;
use dsrl::pipeline::predict_corpus;
use dsrl::remote::Client;
use dsrl::retrieval::{embed_builtin, retrieve_label, BuiltinEmbedder, Embedder, RemoteEmbedder};
use dsrl::scorer::{score_span, ItemKind};
use num_rational::Ratio;
use serde_json::json;

#[test]
fn remote_embedder_matches_builtin_through_echo_stub() {
    let server = echo();
    let remote = RemoteEmbedder::new(&server.url).with_batch_size(2);
    let texts = ["giver", "thing given", "", "time or duration", "naïve"];
    let got = remote.embed_batch(&texts).unwrap();
    assert_eq!(got.len(), texts.len());
    for (t, v) in texts.iter().zip(&got) {
        assert_eq!(v, &embed_builtin(t));
    }
    assert_eq!(server.request_count(), 3);
    assert_eq!(remote.dimension(), 4096);

    let table: BTreeMap<String, String> = dsrl::inventory::CONLL2009_MODIFIERS
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    assert_eq!(
        retrieve_label(&table, "time duration", &remote).unwrap(),
        retrieve_label(&table, "time duration", &BuiltinEmbedder).unwrap()
    );
}

#[test]
fn recorded_gold_generation_scores_perfectly() {
    let inv = load_inventory(&read_fixture("propbank.inventory.jsonl")).unwrap();
    let gold = parse_canonical(&read_fixture("propbank.span.jsonl")).unwrap();
    let prefix = Some(StylePrefix::new(Style::Propbank, SrlFormalism::SpanSrl));
    let targets = gold_oracle_generate(&gold, &inv, prefix).unwrap();
    let mut table = BTreeMap::new();
    for (st, t) in gold.structures().iter().zip(&targets) {
        let input = encode_input(gold.sentence_of(st), st.predicate()).unwrap();
        table.insert(input, t.surface().to_string());
    }
    let server = recorded(table);
    let generator = RemoteGenerator::new(&server.url).with_batch_size(3);
    let outputs = generator.generate(&gold, prefix).unwrap();
    assert_eq!(outputs, targets);

    let embedder = RemoteEmbedder::new(&server.url);
    let pred = predict_corpus(&gold, &outputs, &inv, &embedder).unwrap();
    assert_eq!(pred.issue_count(), 0);
    let report = score_span(&gold, &pred.corpus).unwrap();
    assert_eq!(report.f1(), Ratio::from_integer(1));
    assert!(report.category(ItemKind::Argument).gold > 0);
}

#[test]
fn echoed_inputs_lack_a_sense_header() {
    let server = echo();
    let gold = parse_canonical(&read_fixture("propbank.span.jsonl")).unwrap();
    let outputs = RemoteGenerator::new(&server.url).generate(&gold, None).unwrap();
    for seq in &outputs {
        let (_, issues) = decode_description(seq, None);
        assert!(issues.iter().any(|i| i.kind == IssueKind::MissingSenseHeader), "{seq}");
        assert!(issues.iter().any(|i| i.kind == IssueKind::StrayMarker), "{seq}");
    }
}

#[test]
fn prefix_is_sent_on_the_wire() {
    let seen = Arc::new(std::sync::Mutex::new(Vec::new()));
    let log = seen.clone();
    let server = StubServer::start(Box::new(move |_, body| {
        log.lock().unwrap().push(body.clone());
        (200, json!({ "outputs": ["x: y. z"] }).to_string())
    }));
    let prefix = StylePrefix::new(Style::Framenet, SrlFormalism::DepSrl);
    remote_generate(&Client::new(&server.url), &["a <p> b </p>".into()], Some(prefix), 8).unwrap();
    remote_generate(&Client::new(&server.url), &["a <p> b </p>".into()], None, 8).unwrap();
    let seen = seen.lock().unwrap();
    assert_eq!(
        seen[0],
        json!({ "inputs": ["a <p> b </p>"], "prefix": { "inventory": "framenet", "formalism": "dep-srl" } })
    );
    assert_eq!(seen[1]["prefix"], serde_json::Value::Null);
}

#[test]
fn short_generate_response_is_a_protocol_error() {
    let server = StubServer::start(Box::new(|_, _| (200, json!({ "outputs": ["a: b. c", "a: b. c"] }).to_string())));
    let inputs: Vec<String> = vec!["1".into(), "2".into(), "3".into()];
    let err = remote_generate(&Client::new(&server.url), &inputs, None, 8).unwrap_err();
    assert_eq!(err.category(), "protocol");
    assert!(err.to_string().contains("0..3"), "{err}");
}

#[test]
fn malformed_bodies_are_protocol_errors() {
    let server = StubServer::start(Box::new(|path, _| match path {
        "/embed" => (200, json!({ "dimension": 2, "vectors": [[3.0, 4.0]] }).to_string()),
        _ => (200, "not json".into()),
    }));
    let err = RemoteEmbedder::new(&server.url).embed_batch(&["a"]).unwrap_err();
    assert_eq!(err.category(), "protocol");
    let err = remote_generate(&Client::new(&server.url), &["a".into()], None, 1).unwrap_err();
    assert_eq!(err.category(), "protocol");
}

#[test]
fn http_and_transport_failures_are_backend_errors() {
    let server = StubServer::start(Box::new(|_, _| (503, "{\"error\":\"overloaded\"}".into())));
    let err = RemoteEmbedder::new(&server.url).embed_batch(&["a"]).unwrap_err();
    assert_eq!(err.category(), "backend");
    assert!(err.to_string().contains("503"), "{err}");

    let closed = {
        let listener = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
        format!("http://{}", listener.local_addr().unwrap())
    };
    let err = RemoteEmbedder::new(&closed).embed_batch(&["a"]).unwrap_err();
    assert_eq!(err.category(), "backend");
    let err = remote_generate(&Client::new(&closed), &["a".into()], None, 1).unwrap_err();
    assert_eq!(err.category(), "backend");
}

#[test]
fn empty_batches_make_no_requests() {
    let server = echo();
    assert!(RemoteEmbedder::new(&server.url).embed_batch(&[]).unwrap().is_empty());
    assert!(remote_generate(&Client::new(&server.url), &[], None, 4).unwrap().is_empty());
    assert_eq!(server.request_count(), 0);
}
