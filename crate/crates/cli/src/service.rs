//! Local HTTP API over one loaded project.
//!
//! The baseline graph is built once and shared read-only; every analysis
//! works on its own snapshot, so requests never observe each other.

use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{any, get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tower_http::services::ServeDir;

use refd_core::engine::ReportDocument;
use refd_core::frontend::SourceSpan;
use refd_core::graph::lookup::{ancestors, methods_of, superclass};
use refd_core::graph::{LocationId, NodeTag};

use crate::project::Project;
use crate::request::{catalogue, AnalysisRequest, RefactoringInfo, RequestError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiError {
    pub error: String,
    pub message: String,
    #[serde(skip)]
    pub status: u16,
}

impl ApiError {
    fn new(status: StatusCode, error: &str, message: impl Into<String>) -> Self {
        ApiError {
            error: error.into(),
            message: message.into(),
            status: status.as_u16(),
        }
    }
}

impl From<RequestError> for ApiError {
    fn from(e: RequestError) -> Self {
        let status = match e {
            RequestError::Engine(_) => StatusCode::UNPROCESSABLE_ENTITY,
            _ => StatusCode::BAD_REQUEST,
        };
        ApiError::new(status, e.name(), e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self)).into_response()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassInfo {
    pub name: String,
    pub superclass: Option<String>,
    pub is_abstract: bool,
    pub span: Option<SourceSpan>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodInfo {
    pub name: String,
    /// Ready to pass back as the `method` of an analysis request.
    pub selector: String,
    pub return_type: String,
    pub visibility: String,
    pub is_static: bool,
    pub is_abstract: bool,
    pub span: Option<SourceSpan>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceText {
    pub file: String,
    pub text: String,
}

#[derive(Debug, Deserialize)]
struct SourceQuery {
    file: String,
}

type Shared = Arc<Project>;

fn class(p: &Project, name: &str) -> Result<LocationId, ApiError> {
    p.graph
        .class_named(name)
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "UnknownClass", format!("no class named `{name}`")))
}

async fn classes(State(p): State<Shared>) -> Json<Vec<ClassInfo>> {
    let g = &p.graph;
    Json(
        g.nodes_tagged(NodeTag::Class)
            .map(|n| ClassInfo {
                name: n.name.clone(),
                superclass: superclass(g, n.id).map(|s| g.name(s).to_owned()),
                is_abstract: n.attrs.is_abstract,
                span: n.span.clone(),
            })
            .collect(),
    )
}

async fn methods(State(p): State<Shared>, Path(name): Path<String>) -> Result<Json<Vec<MethodInfo>>, ApiError> {
    let g = &p.graph;
    let c = class(&p, &name)?;
    Ok(Json(
        methods_of(g, c)
            .filter_map(|m| g.node(m))
            .map(|n| MethodInfo {
                name: n.name.clone(),
                selector: g.qualified_name(n.id),
                return_type: n.attrs.type_name.clone().unwrap_or_else(|| "void".into()),
                visibility: n.visibility().as_str().into(),
                is_static: n.attrs.is_static,
                is_abstract: n.attrs.is_abstract,
                span: n.span.clone(),
            })
            .collect(),
    ))
}

async fn superclasses(State(p): State<Shared>, Path(name): Path<String>) -> Result<Json<Vec<String>>, ApiError> {
    let c = class(&p, &name)?;
    Ok(Json(ancestors(&p.graph, c).into_iter().map(|a| p.graph.name(a).to_owned()).collect()))
}

async fn analyze(
    State(p): State<Shared>,
    body: Result<Json<AnalysisRequest>, JsonRejection>,
) -> Result<Json<ReportDocument>, ApiError> {
    let Json(req) = body.map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "MalformedRequest", e.body_text()))?;
    let report = tokio::task::spawn_blocking(move || req.run(&p.graph))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "Internal", e.to_string()))??;
    Ok(Json(report))
}

async fn source(
    State(p): State<Shared>,
    q: Result<Query<SourceQuery>, QueryRejection>,
) -> Result<Json<SourceText>, ApiError> {
    let Query(q) = q.map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "MalformedRequest", e.body_text()))?;
    let text = p
        .sources
        .get(&q.file)
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "UnknownFile", format!("no source file `{}`", q.file)))?;
    Ok(Json(SourceText {
        file: q.file,
        text: text.clone(),
    }))
}

async fn refactorings() -> Json<Vec<RefactoringInfo>> {
    Json(catalogue())
}

async fn not_found() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "NotFound", "no such endpoint")
}

/// The API routes, plus static files from `ui_dir` for everything else.
pub fn router(project: Arc<Project>, ui_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/classes", get(classes))
        .route("/api/classes/{name}/methods", get(methods))
        .route("/api/classes/{name}/superclasses", get(superclasses))
        .route("/api/analyze", post(analyze))
        .route("/api/source", get(source))
        .route("/api/refactorings", get(refactorings))
        .route("/api/{*rest}", any(not_found))
        .with_state(project);
    match ui_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.fallback(not_found),
    }
}

/// Serves `app` until interrupted.
pub async fn serve(listener: tokio::net::TcpListener, app: Router) -> std::io::Result<()> {
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
