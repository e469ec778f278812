use std::sync::{Arc, OnceLock};

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use cnl_cli::api::{router, AppState};
use cnl_cli::Clock;
use cnl_core::chronos::Timestamp;
use cnl_core::lexicon::LexicalResources;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

const TRACK: &str = "AIS,0,MR41_PAN-EAV,2014-06-02T00:30:00,-12.4634,130.8456,45,12.5,merchant ship,tanker,neutral,Panama";

fn app() -> Router {
    static RES: OnceLock<Arc<LexicalResources>> = OnceLock::new();
    let res = RES
        .get_or_init(|| Arc::new(LexicalResources::seed()))
        .clone();
    let at = Timestamp::parse_iso("2014-06-02T01:03:48Z").unwrap();
    router(AppState::new(res, Clock::Fixed(at)))
}

async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req
            .header("content-type", "application/json")
            .body(Body::from(b.to_string())),
        None => req.body(Body::empty()),
    }
    .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap()
    };
    (status, value)
}

async fn post(app: &Router, uri: &str, body: Value) -> (StatusCode, Value) {
    call(app, Method::POST, uri, Some(body)).await
}

async fn open(app: &Router) -> String {
    let (status, v) = post(
        app,
        "/sessions",
        json!({ "teller": "Jane Analyst", "utc_offset": "+09:30" }),
    )
    .await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(v["teller"], "Jane_Analyst");
    assert_eq!(v["utc_offset"], "+09:30");
    v["id"].as_str().unwrap().to_string()
}

#[tokio::test]
async fn assert_then_query() {
    let app = app();
    let id = open(&app).await;
    let (status, v) = post(
        &app,
        &format!("/sessions/{id}/submit"),
        json!({ "text": "The woman stood in the house." }),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["timestamp"], "2014-06-02T01:03:48Z");
    assert_eq!(v["speech"], "unsupported");
    assert_eq!(v["items"][0]["status"], "ok");
    assert_eq!(v["items"][0]["act"], "assert");
    let echo = v["items"][0]["mephisto"].as_str().unwrap();
    assert!(
        echo.contains("invl(timestamp(2014,6,2,1,3,48),timestamp(2014,6,2,1,3,48))"),
        "{echo}"
    );
    assert!(echo.contains("Jane_Analyst"), "{echo}");

    let (_, v) = post(&app, &format!("/sessions/{id}/paragraph"), json!({})).await;
    assert_eq!(v["timestamp"], "2014-06-02T01:03:48Z");
    let (_, v) = post(
        &app,
        &format!("/sessions/{id}/submit"),
        json!({ "text": "Who stood in the house?", "mode": "auto" }),
    )
    .await;
    assert_eq!(
        v["items"][0]["answers"],
        json!(["The woman stood in the house before Monday the 2nd of June 2014 at 10:33:48 AM."])
    );
}

#[tokio::test]
async fn ambiguity_and_choice() {
    let app = app();
    let id = open(&app).await;
    let text = "The woman in the car read the message on the sign.";
    let (_, v) = post(
        &app,
        &format!("/sessions/{id}/submit"),
        json!({ "text": text }),
    )
    .await;
    let item = &v["items"][0];
    assert_eq!(item["status"], "pending");
    assert_eq!(item["paraphrases"].as_array().unwrap().len(), 2);
    let sref = item["sentence_ref"].as_u64().unwrap();
    let nominal = item["paraphrases"]
        .as_array()
        .unwrap()
        .iter()
        .position(|p| p.as_str().unwrap().contains("which is on the sign"))
        .unwrap();

    let (status, _) = post(
        &app,
        &format!("/sessions/{id}/choose"),
        json!({ "sentence_ref": sref, "index": 7 }),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, v) = post(
        &app,
        &format!("/sessions/{id}/choose"),
        json!({ "sentence_ref": sref, "index": nominal }),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["items"][0]["status"], "ok");
    let (status, v) = post(
        &app,
        &format!("/sessions/{id}/choose"),
        json!({ "sentence_ref": sref, "index": 0 }),
    )
    .await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert!(v["error"].as_str().unwrap().contains("not awaiting"));

    let (_, v) = post(
        &app,
        &format!("/sessions/{id}/submit"),
        json!({ "text": "What is on the sign?" }),
    )
    .await;
    assert_eq!(
        v["items"][0]["answers"],
        json!(["The message was on the sign before Monday the 2nd of June 2014 at 10:33:48 AM."])
    );
    let (_, v) = post(
        &app,
        &format!("/sessions/{id}/submit"),
        json!({ "text": "When did she read it?" }),
    )
    .await;
    assert_eq!(
        v["items"][0]["answers"],
        json!(["Before Monday the 2nd of June 2014 at 10:33:48 AM."])
    );
}

#[tokio::test]
async fn unknown_words_come_back_as_diagnostics() {
    let app = app();
    let id = open(&app).await;
    let (_, v) = post(
        &app,
        &format!("/sessions/{id}/precheck"),
        json!({ "text": "The florgle slept." }),
    )
    .await;
    let d = &v["diagnostics"][0];
    assert_eq!(d["span"], json!([4, 11]));
    assert!(d["message"].as_str().unwrap().contains("florgle"));
    let (_, v) = post(
        &app,
        &format!("/sessions/{id}/submit"),
        json!({ "text": "The florgle slept." }),
    )
    .await;
    assert_eq!(v["items"][0]["status"], "diagnostics");
    let (_, v) = call(&app, Method::GET, &format!("/sessions/{id}/log"), None).await;
    assert_eq!(
        v["entries"].as_array().unwrap().len(),
        1,
        "precheck is not logged"
    );
}

#[tokio::test]
async fn speech_is_reserved() {
    let app = app();
    let id = open(&app).await;
    let (status, v) = post(
        &app,
        &format!("/sessions/{id}/submit"),
        json!({ "text": "The woman slept.", "speech": true }),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["speech"], "unsupported");
}

#[tokio::test]
async fn tracks_and_directive() {
    let app = app();
    let id = open(&app).await;
    let (status, v) = post(
        &app,
        &format!("/sessions/{id}/tracks"),
        json!({ "lines": format!("{TRACK}\nAIS,0,X") }),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["ingested"], 1);
    assert_eq!(v["rejected"].as_array().unwrap().len(), 1);
    let (_, v) = post(
        &app,
        &format!("/sessions/{id}/submit"),
        json!({ "text": "Show merchant ship situation report on MR41_PAN-EAV" }),
    )
    .await;
    let lines = v["items"][0]["answers"].as_array().unwrap();
    assert_eq!(lines[0], "MR41_PAN-EAV is a merchant ship of type tanker.");
    assert_eq!(
        lines[1],
        "MR41_PAN-EAV was at 12.4634 S 130.8456 E at Monday the 2nd of June 2014 at 10:00:00 AM."
    );
}

#[tokio::test]
async fn generate_renders_terms() {
    let app = app();
    let id = open(&app).await;
    let term = "woman(@(skc1,t_1,s_1),[definite,singular]),stands(@(skc1,t_1,s_1),[past])";
    let (status, v) = post(
        &app,
        &format!("/sessions/{id}/generate"),
        json!({ "term": term }),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["sentence"], "The woman stood.");
    let (status, _) = post(
        &app,
        &format!("/sessions/{id}/generate"),
        json!({ "term": "woman(" }),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, v) = post(
        &app,
        &format!("/sessions/{id}/generate"),
        json!({ "term": "blorp(@(skc1,t_1,s_1),[past])" }),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY, "{v}");
}

#[tokio::test]
async fn log_lists_commands_in_order() {
    let app = app();
    let id = open(&app).await;
    post(
        &app,
        &format!("/sessions/{id}/submit"),
        json!({ "text": "The woman slept." }),
    )
    .await;
    post(&app, &format!("/sessions/{id}/paragraph"), json!({})).await;
    post(
        &app,
        &format!("/sessions/{id}/tracks"),
        json!({ "lines": TRACK }),
    )
    .await;
    let (status, v) = call(&app, Method::GET, &format!("/sessions/{id}/log"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["teller"], "Jane_Analyst");
    let entries = v["entries"].as_array().unwrap();
    let commands: Vec<&str> = entries
        .iter()
        .map(|e| e["command"].as_str().unwrap())
        .collect();
    assert_eq!(commands, ["submit", "paragraph", "tracks"]);
    assert!(entries
        .iter()
        .all(|e| e["teller"] == "Jane_Analyst" && e["timestamp"] == "2014-06-02T01:03:48Z"));
    assert_eq!(entries[0]["text"], "The woman slept.");
}

#[tokio::test]
async fn bad_requests() {
    let app = app();
    for uri in [
        "/sessions/nope/submit",
        "/sessions/nope/choose",
        "/sessions/nope/tracks",
        "/sessions/nope/generate",
    ] {
        let body = json!({ "text": "x", "sentence_ref": 0, "index": 0, "lines": "", "term": "x" });
        let (status, v) = post(&app, uri, body).await;
        assert_eq!(status, StatusCode::NOT_FOUND, "{uri}");
        assert!(v["error"].as_str().unwrap().contains("no such session"));
    }
    let (status, _) = call(&app, Method::GET, "/sessions/nope/log", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = post(&app, "/sessions", json!({ "teller": " " })).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = post(
        &app,
        "/sessions",
        json!({ "teller": "Jane Analyst", "utc_offset": "+25:00" }),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn sessions_are_disjoint() {
    let app = app();
    let a = open(&app).await;
    let b = open(&app).await;
    assert_ne!(a, b);
    post(
        &app,
        &format!("/sessions/{a}/submit"),
        json!({ "text": "The woman stood in the house." }),
    )
    .await;
    let (_, v) = post(
        &app,
        &format!("/sessions/{b}/submit"),
        json!({ "text": "Who stood in the house?" }),
    )
    .await;
    assert_eq!(v["items"][0]["answers"], json!(["No answer."]));
}

#[tokio::test]
async fn concurrent_submits_serialize_per_session() {
    let app = app();
    let id = open(&app).await;
    let mut handles = Vec::new();
    for _ in 0..8 {
        let (app, id) = (app.clone(), id.clone());
        handles.push(tokio::spawn(async move {
            post(
                &app,
                &format!("/sessions/{id}/submit"),
                json!({ "text": "The woman slept." }),
            )
            .await
        }));
    }
    for h in handles {
        assert_eq!(h.await.unwrap().0, StatusCode::OK);
    }
    let (_, v) = call(&app, Method::GET, &format!("/sessions/{id}/log"), None).await;
    let seqs: Vec<u64> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["seq"].as_u64().unwrap())
        .collect();
    assert_eq!(seqs, (0..8).collect::<Vec<_>>());
}
