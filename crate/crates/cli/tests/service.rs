use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use refd::service::{router, ClassInfo, MethodInfo, SourceText};
use refd::Project;
use refd_core::engine::ReportDocument;
use refd_testkit::Fixture;

fn app(f: Fixture) -> (Router, Arc<Project>) {
    let p = Arc::new(Project::load(&f.path()).unwrap());
    (router(p.clone(), None), p)
}

async fn send(app: &Router, req: Request<Body>) -> (StatusCode, Vec<u8>) {
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status();
    (status, res.into_body().collect().await.unwrap().to_bytes().to_vec())
}

async fn get(app: &Router, uri: &str) -> (StatusCode, Vec<u8>) {
    send(app, Request::get(uri).body(Body::empty()).unwrap()).await
}

async fn post(app: &Router, body: impl Into<Body>) -> (StatusCode, Vec<u8>) {
    let req = Request::post("/api/analyze")
        .header("content-type", "application/json")
        .body(body.into())
        .unwrap();
    send(app, req).await
}

fn error_name(body: &[u8]) -> String {
    let v: Value = serde_json::from_slice(body).unwrap();
    assert!(v["message"].is_string());
    v["error"].as_str().unwrap().to_owned()
}

#[tokio::test]
async fn browse_classes_methods_and_destinations() {
    let (app, _) = app(Fixture::PullUp);
    let (status, body) = get(&app, "/api/classes").await;
    assert_eq!(status, StatusCode::OK);
    let classes: Vec<ClassInfo> = serde_json::from_slice(&body).unwrap();
    let names: Vec<_> = classes.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(names, ["LegacyEmployee", "Employee"]);
    assert_eq!(classes[1].superclass.as_deref(), Some("LegacyEmployee"));
    assert_eq!(classes[0].span.as_ref().unwrap().start_line, 3);

    let (_, body) = get(&app, "/api/classes/Employee/methods").await;
    let methods: Vec<MethodInfo> = serde_json::from_slice(&body).unwrap();
    let selectors: Vec<_> = methods.iter().map(|m| m.selector.as_str()).collect();
    assert_eq!(selectors, ["Employee.salaryBonus(int)", "Employee.getName()"]);
    assert_eq!(methods[0].visibility, "public");

    let (_, body) = get(&app, "/api/classes/Employee/superclasses").await;
    assert_eq!(serde_json::from_slice::<Vec<String>>(&body).unwrap(), ["LegacyEmployee"]);
    let (_, body) = get(&app, "/api/classes/LegacyEmployee/superclasses").await;
    assert_eq!(serde_json::from_slice::<Vec<String>>(&body).unwrap(), Vec::<String>::new());
}

#[tokio::test]
async fn unknown_names_are_not_found() {
    let (app, _) = app(Fixture::PullUp);
    for uri in ["/api/classes/Nope/methods", "/api/classes/Nope/superclasses", "/api/source?file=Nope.jsub", "/api/nothing", "/index.html"] {
        let (status, body) = get(&app, uri).await;
        assert_eq!(status, StatusCode::NOT_FOUND, "{uri}");
        assert!(!error_name(&body).is_empty());
    }
}

#[tokio::test]
async fn source_text_for_highlighting() {
    let (app, p) = app(Fixture::MoveMethod);
    let (status, body) = get(&app, "/api/source?file=Source.jsub").await;
    assert_eq!(status, StatusCode::OK);
    let src: SourceText = serde_json::from_slice(&body).unwrap();
    assert_eq!(src.text, p.sources["Source.jsub"]);
    let (status, _) = get(&app, "/api/source").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn analyze_move_reports_both_dangers() {
    let (app, p) = app(Fixture::MoveMethod);
    let body = json!({"refactoring": "move-method", "method": "Source.method(Target)", "destination": "Target"});
    let (status, bytes) = post(&app, body.to_string()).await;
    assert_eq!(status, StatusCode::OK);
    let doc: ReportDocument = serde_json::from_slice(&bytes).unwrap();
    let labels: Vec<_> = doc.dangers.iter().map(|d| d.label.code()).collect();
    assert_eq!(labels, ["MM-1", "AM-3"]);
    assert_eq!(p.graph.generation(), 0);
}

#[tokio::test]
async fn analyze_combine_takes_a_list() {
    let (app, _) = app(Fixture::Combine);
    let body = json!({
        "refactoring": "combine-methods-into-class",
        "method": ["Invoice.toString()", "Receipt.toString()"],
        "destination": "K"
    });
    let (status, bytes) = post(&app, body.to_string()).await;
    assert_eq!(status, StatusCode::OK);
    let doc: ReportDocument = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(doc.dangers.len(), 1);
    assert!(doc.dangers[0].locations[0].synthetic_desc.is_some());
}

#[tokio::test]
async fn request_errors_map_to_status_codes() {
    let (app, _) = app(Fixture::PullUp);
    let cases = [
        (json!({"refactoring": "rename", "method": "Employee.getName()", "destination": "X"}).to_string(), StatusCode::BAD_REQUEST, "UnknownRefactoring"),
        ("{not json".to_owned(), StatusCode::BAD_REQUEST, "MalformedRequest"),
        (json!({"refactoring": "move-method"}).to_string(), StatusCode::BAD_REQUEST, "MalformedRequest"),
        (json!({"refactoring": "move-method", "method": "Employee.getName", "destination": "X"}).to_string(), StatusCode::BAD_REQUEST, "InvalidSelector"),
        (json!({"refactoring": "move-method", "method": "Employee.getName()"}).to_string(), StatusCode::BAD_REQUEST, "MissingParameter"),
        (json!({"refactoring": "pull-up-method", "method": "Nope.m()", "destination": "LegacyEmployee"}).to_string(), StatusCode::UNPROCESSABLE_ENTITY, "UnresolvableTemplate"),
        (json!({"refactoring": "pull-up-method", "method": "LegacyEmployee.salaryBonus(int)", "destination": "Employee"}).to_string(), StatusCode::UNPROCESSABLE_ENTITY, "NotAnAncestor"),
    ];
    for (body, status, name) in cases {
        let (got, bytes) = post(&app, body.clone()).await;
        assert_eq!(got, status, "{body}");
        assert_eq!(error_name(&bytes), name, "{body}");
    }
}

#[tokio::test]
async fn concurrent_identical_requests_agree() {
    let (app, p) = app(Fixture::PullUp);
    let body = json!({"refactoring": "pull-up-method", "method": "Employee.salaryBonus(int)", "destination": "LegacyEmployee"}).to_string();
    let runs = (0..16).map(|_| {
        let app = app.clone();
        let body = body.clone();
        tokio::spawn(async move { post(&app, body).await })
    });
    let mut bodies = Vec::new();
    for r in runs {
        let (status, bytes) = r.await.unwrap();
        assert_eq!(status, StatusCode::OK);
        bodies.push(bytes);
    }
    assert!(bodies.windows(2).all(|w| w[0] == w[1]));
    assert_eq!(p.graph.generation(), 0);
}

#[tokio::test]
async fn refactoring_catalogue() {
    let (app, _) = app(Fixture::PullUp);
    let (status, body) = get(&app, "/api/refactorings").await;
    assert_eq!(status, StatusCode::OK);
    let v: Value = serde_json::from_slice(&body).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
}

#[tokio::test]
async fn static_ui_is_served_next_to_the_api() {
    let ui = tempfile::tempdir().unwrap();
    std::fs::write(ui.path().join("index.html"), "<main>ui</main>").unwrap();
    std::fs::write(ui.path().join("app.js"), "console.log(1)").unwrap();
    let p = Arc::new(Project::load(&Fixture::PullUp.path()).unwrap());
    let app = router(p, Some(ui.path().to_path_buf()));
    let (status, body) = get(&app, "/").await;
    assert_eq!((status, body.as_slice()), (StatusCode::OK, b"<main>ui</main>".as_slice()));
    let (status, _) = get(&app, "/app.js").await;
    assert_eq!(status, StatusCode::OK);
    let (status, _) = get(&app, "/api/classes").await;
    assert_eq!(status, StatusCode::OK);
    let (status, body) = get(&app, "/api/unknown").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(error_name(&body), "NotFound");
}
