use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use refd_core::graph::NodeTag;

use crate::project::Project;
use crate::request::{catalogue, AnalysisRequest, Methods};
use crate::service;

pub const EXIT_CLEAN: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_DANGERS: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "refd", version, about = "Diagnose the dangers of a refactoring before applying it")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyse one refactoring. Exits 0 when clean, 2 when dangers remain.
    Analyze {
        #[arg(long)]
        project: PathBuf,
        #[arg(long)]
        refactoring: String,
        /// `Class.name(type,...)`; repeat for combine-methods-into-class.
        #[arg(long = "method", required = true)]
        methods: Vec<String>,
        #[arg(long)]
        destination: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Keep the subclass-specification danger on a pulled-up method itself.
        #[arg(long)]
        strict_paper_verdict: bool,
    },
    /// List the supported refactorings and their parameters.
    ListRefactorings {
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Inspect the program graph of a project.
    Graph {
        #[arg(long)]
        project: PathBuf,
        /// Print every node and edge as JSON instead of a summary.
        #[arg(long)]
        dump: bool,
    },
    /// Serve the HTTP API (and optionally a UI) for one project.
    Serve {
        #[arg(long)]
        project: PathBuf,
        #[arg(long, env = "REFD_PORT", default_value_t = 7878)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Directory of static files served for non-API paths.
        #[arg(long)]
        ui_dir: Option<PathBuf>,
    },
}

fn load(project: &Path, err: &mut dyn Write) -> Result<Project, String> {
    let p = Project::load(project).map_err(|e| e.to_string())?;
    for d in &p.diagnostics {
        let _ = writeln!(err, "warning: {d}");
    }
    Ok(p)
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_ERROR
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, String> {
    let io = |e: std::io::Error| e.to_string();
    match cli.command {
        Command::Analyze {
            project,
            refactoring,
            methods,
            destination,
            format,
            strict_paper_verdict,
        } => {
            let p = load(&project, err)?;
            let req = AnalysisRequest {
                refactoring,
                method: Methods::Many(methods),
                destination: Some(destination),
                project: Some(project.display().to_string()),
                strict_paper_verdict,
            };
            let doc = req.run(&p.graph).map_err(|e| format!("{}: {e}", e.name()))?;
            match format {
                Format::Json => writeln!(out, "{}", doc.to_json()).map_err(io)?,
                Format::Text => write!(out, "{}", doc.to_text()).map_err(io)?,
            }
            Ok(if doc.dangers.is_empty() { EXIT_CLEAN } else { EXIT_DANGERS })
        }
        Command::ListRefactorings { format } => {
            let list = catalogue();
            match format {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&list).map_err(|e| e.to_string())?).map_err(io)?,
                Format::Text => {
                    for r in list {
                        let params: Vec<String> = r
                            .params
                            .iter()
                            .map(|p| {
                                let flag = format!("--{}{}", p.name.replace('_', "-"), if p.repeated { "..." } else { "" });
                                if p.required { flag } else { format!("[{flag}]") }
                            })
                            .collect();
                        writeln!(out, "{} {}", r.name, params.join(" ")).map_err(io)?;
                    }
                }
            }
            Ok(EXIT_CLEAN)
        }
        Command::Graph { project, dump } => {
            let p = load(&project, err)?;
            if dump {
                writeln!(out, "{}", p.graph.to_json()).map_err(io)?;
            } else {
                for tag in NodeTag::ALL {
                    writeln!(out, "{tag:?} {}", p.graph.nodes_tagged(tag).count()).map_err(io)?;
                }
                writeln!(out, "edges {}", p.graph.edge_count()).map_err(io)?;
            }
            Ok(EXIT_CLEAN)
        }
        Command::Serve {
            project,
            port,
            host,
            ui_dir,
        } => {
            let p = Arc::new(load(&project, err)?);
            if let Some(dir) = &ui_dir {
                if !dir.is_dir() {
                    return Err(format!("UI directory {} does not exist", dir.display()));
                }
            }
            let runtime = tokio::runtime::Runtime::new().map_err(io)?;
            runtime.block_on(async {
                let listener = tokio::net::TcpListener::bind((host.as_str(), port)).await.map_err(io)?;
                let addr = listener.local_addr().map_err(io)?;
                let _ = writeln!(err, "refd: serving {} on http://{addr}", project.display());
                service::serve(listener, service::router(p, ui_dir)).await.map_err(io)
            })?;
            Ok(EXIT_CLEAN)
        }
    }
}
