use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use sd_workbench::service::router;
use sd_workbench::{SessionStore, SCHEMA_VERSION};

const FIX_T: &str = ",a,b,c\na,0,2,3\nb,-2,0,1\nc,-3,-1,0\n";
const FIX_PART: &str = "# phi_star = 1\n,a,b,c\na,0,1,NA\nb,-1,0,NA\nc,NA,NA,0\n";
const CONDORCET: &str = r#"{"alternatives":["a","b","c"],"experts":[
    {"id":"E1","order":["a","b","c"]},
    {"id":"E2","order":["b","c","a"]},
    {"id":"E3","order":["c","a","b"]}]}"#;

fn app() -> Router {
    router(Arc::new(SessionStore::new()))
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<String>) -> (StatusCode, Value) {
    let request = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map(Body::from).unwrap_or_else(Body::empty))
        .unwrap();
    let response = app.clone().oneshot(request).await.unwrap();
    let status = response.status();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    let value = serde_json::from_slice(&bytes).unwrap_or(Value::Null);
    (status, value)
}

async fn create(app: &Router, body: &str) -> String {
    let (status, v) = call(app, "POST", "/sessions", Some(body.into())).await;
    assert_eq!(status, StatusCode::CREATED, "{v}");
    assert_eq!(v["schema_version"], SCHEMA_VERSION);
    v["id"].as_str().unwrap().to_string()
}

fn near(v: &Value, want: f64) -> bool {
    (v.as_f64().unwrap() - want).abs() < 1e-9
}

#[tokio::test]
async fn transitive_matrix_session() {
    let app = app();
    let id = create(&app, FIX_T).await;

    let (status, report) = call(&app, "GET", &format!("/sessions/{id}/report"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(report["schema_version"], SCHEMA_VERSION);
    assert_eq!(report["kind"], "matrix");
    let utilities = report["utilities"].as_array().unwrap();
    for (u, want) in utilities.iter().zip([5.0 / 3.0, -1.0 / 3.0, -4.0 / 3.0]) {
        assert!(near(&u["value"], want));
    }

    let (status, ladder) = call(&app, "GET", &format!("/sessions/{id}/ladder"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(ladder["schema_version"], SCHEMA_VERSION);
    let rungs = ladder["rungs"].as_array().unwrap();
    assert_eq!(rungs.len(), 4);
    assert_eq!(rungs[0]["core"], json!(["a"]));
    assert_eq!(rungs[3]["core"], json!(["a", "b"]));
    assert_eq!(rungs[3]["strict_pairs"], json!([["a", "c"]]));

    let (status, at) = call(&app, "GET", &format!("/sessions/{id}/ladder?level=1.5"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(at["level"], 1.5);
    assert_eq!(at["strict_pairs"], json!([["a", "b"], ["a", "c"]]));
    assert_eq!(at["schema_version"], SCHEMA_VERSION);

    let (status, _) = call(&app, "GET", &format!("/sessions/{id}/ladder?level=-1"), None).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn elicitation_loop() {
    let app = app();
    let id = create(&app, FIX_PART).await;

    let (_, report) = call(&app, "GET", &format!("/sessions/{id}/report"), None).await;
    let iv = &report["intervals"];
    assert!(near(&iv["missing"]["mean"], 4.0 / 9.0));
    assert!(near(&iv["intervals"][2]["upper"], 2.0 / 3.0));

    let (status, s) = call(&app, "GET", &format!("/sessions/{id}/suggestion"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(s["pair"], json!(["a", "c"]));
    assert_eq!(s["schema_version"], SCHEMA_VERSION);

    let body = json!({"x": "a", "y": "c", "value": 0.5}).to_string();
    let (status, report) = call(&app, "POST", &format!("/sessions/{id}/refinements"), Some(body)).await;
    assert_eq!(status, StatusCode::OK);
    let a = &report["intervals"]["intervals"][0];
    assert!(near(&a["lower"], 0.5) && near(&a["upper"], 0.5));

    // Rejected refinements leave the session unchanged.
    for bad in [
        json!({"x": "a", "y": "c", "value": 0.25}),
        json!({"x": "b", "y": "c", "value": 2.0}),
        json!({"x": "b", "y": "b", "value": 0.0}),
        json!({"x": "b", "y": "z", "value": 0.0}),
    ] {
        let (status, err) =
            call(&app, "POST", &format!("/sessions/{id}/refinements"), Some(bad.to_string())).await;
        assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY, "{err}");
        assert_eq!(err["error"]["category"], "invariant");
        assert_eq!(err["schema_version"], SCHEMA_VERSION);
    }
    let (_, after) = call(&app, "GET", &format!("/sessions/{id}/report"), None).await;
    assert_eq!(after, report);

    let (_, s) = call(&app, "GET", &format!("/sessions/{id}/suggestion"), None).await;
    assert_eq!(s["pair"], json!(["b", "c"]));
    let body = json!({"x": "b", "y": "c", "value": -0.5}).to_string();
    let (_, report) = call(&app, "POST", &format!("/sessions/{id}/refinements"), Some(body)).await;
    assert_eq!(report["intervals"]["complete"], true);
    assert!(report["intervals"]["intervals"]
        .as_array()
        .unwrap()
        .iter()
        .all(|i| i["lower"] == i["upper"]));
    let (_, s) = call(&app, "GET", &format!("/sessions/{id}/suggestion"), None).await;
    assert_eq!(s["pair"], Value::Null);
}

#[tokio::test]
async fn condorcet_panel_and_bookmarks() {
    let app = app();
    let id = create(&app, CONDORCET).await;
    let (_, report) = call(&app, "GET", &format!("/sessions/{id}/report"), None).await;
    assert_eq!(report["kind"], "panel");
    assert!(report["warnings"][0].as_str().unwrap().contains("cycle"));
    assert_eq!(report["panel"]["copeland_ranking"], json!([["a", "b", "c"]]));
    assert_eq!(report["selection"]["core"], json!(["a", "b", "c"]));

    let body = json!({"name": "loose", "level": 0}).to_string();
    let (status, b) = call(&app, "POST", &format!("/sessions/{id}/bookmarks"), Some(body)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(b["bookmarks"], json!({"loose": 0.0}));
    let (_, report) = call(&app, "GET", &format!("/sessions/{id}/report"), None).await;
    assert_eq!(report["bookmarks"], json!({"loose": 0.0}));

    let (status, err) = call(&app, "GET", &format!("/sessions/{id}/suggestion"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(err["error"]["category"], "wrong_kind");
}

#[tokio::test]
async fn abstaining_ballots_become_intervals() {
    let app = app();
    let body = r#"{"alternatives":["a","b"],"experts":[
        {"id":"E1","pairs":[{"x":"a","y":"b","verdict":"abstain"}]}]}"#;
    let id = create(&app, body).await;
    let (_, report) = call(&app, "GET", &format!("/sessions/{id}/report"), None).await;
    assert_eq!(report["kind"], "abstention");
    assert_eq!(report["intervals"]["intervals"][0]["lower"], -0.5);
    assert_eq!(report["intervals"]["intervals"][0]["upper"], 0.5);
    let (status, _) = call(&app, "GET", &format!("/sessions/{id}/ladder"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);
}

#[tokio::test]
async fn bad_requests() {
    let app = app();
    let (status, err) = call(&app, "POST", "/sessions", Some(",a,b\na,0,1\nb,1,0\n".into())).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(err["error"]["message"].as_str().unwrap().contains("(a, b)"));

    let (status, err) = call(&app, "POST", "/sessions", Some("{\"rows\": ".into())).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(err["error"]["category"], "parse");

    let (status, _) = call(&app, "POST", "/sessions?format=xlsx", Some(FIX_T.into())).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    let (status, err) = call(&app, "GET", "/sessions/missing/report", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(err["schema_version"], SCHEMA_VERSION);

    let id = create(&app, FIX_T).await;
    let body = json!({"x": "a", "y": "c", "value": 0.5}).to_string();
    let (status, _) = call(&app, "POST", &format!("/sessions/{id}/refinements"), Some(body)).await;
    assert_eq!(status, StatusCode::CONFLICT);
}

#[tokio::test]
async fn partial_bound_from_query() {
    let app = app();
    let csv = ",a,b\na,0,NA\nb,NA,0\n";
    let (status, v) = call(&app, "POST", "/sessions?phi_star=2", Some(csv.into())).await;
    assert_eq!(status, StatusCode::CREATED);
    let id = v["id"].as_str().unwrap();
    let (_, report) = call(&app, "GET", &format!("/sessions/{id}/report"), None).await;
    assert_eq!(report["intervals"]["phi_star"], 2.0);
    assert_eq!(report["intervals"]["intervals"][0]["upper"], 1.0);
}

#[tokio::test]
async fn parallel_refinements_are_serialized() {
    let app = app();
    let n = 12;
    let ids: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let mut csv = format!(",{}\n", ids.join(","));
    for (i, id) in ids.iter().enumerate() {
        let row: Vec<&str> = (0..n).map(|j| if i == j { "0" } else { "NA" }).collect();
        csv.push_str(&format!("{id},{}\n", row.join(",")));
    }
    let session = create(&app, &format!("# phi_star = 1\n{csv}")).await;
    let mut tasks = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (app, uri) = (app.clone(), format!("/sessions/{session}/refinements"));
            let body = json!({"x": ids[i], "y": ids[j], "value": 0.5}).to_string();
            tasks.push(tokio::spawn(async move { call(&app, "POST", &uri, Some(body)).await.0 }));
        }
    }
    for t in tasks {
        assert_eq!(t.await.unwrap(), StatusCode::OK);
    }
    let (_, report) = call(&app, "GET", &format!("/sessions/{session}/report"), None).await;
    assert_eq!(report["intervals"]["complete"], true);
}
