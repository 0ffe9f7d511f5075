//! The JSON problem-file format: a base graph plus any number of extensions.
//!
//! ```json
//! {"base": {"vertices": ["w1"], "edges": [{"id": "e", "src": "w1", "dst": "w1"}]},
//!  "extensions": [{"label": "E1", "added_vertices": ["v0"],
//!                  "added_edges": [{"id": "b1", "src": "w1", "dst": "v0"}],
//!                  "sink": "v0"}]}
//! ```
//!
//! Added ids must be disjoint from base ids, endpoints must resolve across
//! base plus added vertices, and every extension must pass full validation.
//! Parsing then serializing a parsed file reproduces it.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extension::{OneSinkExtension, ValidationReport};
use crate::graph::{Edge, Graph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub id: String,
    pub src: String,
    pub dst: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub added_vertices: Vec<String>,
    pub added_edges: Vec<EdgeSpec>,
    pub sink: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub base: GraphSpec,
    #[serde(default)]
    pub extensions: Vec<ExtensionSpec>,
}

/// A fully validated problem: the base graph and one validated extension per
/// entry, each with its (possibly defaulted) label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub base: Graph,
    pub extensions: Vec<(String, OneSinkExtension)>,
}

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema violation in {context}: {message}")]
    Schema { context: String, message: String },
    #[error("invalid base graph: {0}")]
    Base(#[from] GraphError),
    #[error("extension `{label}` is invalid: {report}")]
    Extension {
        label: String,
        report: ValidationReport,
    },
}

impl ProblemFile {
    pub fn from_str(text: &str) -> Result<ProblemFile, ProblemError> {
        serde_json::from_str(text).map_err(|e| ProblemError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn from_path(path: &Path) -> Result<ProblemFile, ProblemError> {
        let text = fs::read_to_string(path).map_err(|source| ProblemError::Io {
            path: path.display().to_string(),
            source,
        })?;
        ProblemFile::from_str(&text)
    }

    pub fn from_problem(problem: &Problem) -> ProblemFile {
        let base = GraphSpec {
            vertices: problem.base.vertices().to_vec(),
            edges: problem
                .base
                .edges()
                .iter()
                .map(|e| EdgeSpec {
                    id: e.id.clone(),
                    src: e.src.clone(),
                    dst: e.dst.clone(),
                })
                .collect(),
        };
        let extensions = problem
            .extensions
            .iter()
            .map(|(label, ext)| ExtensionSpec {
                label: Some(label.clone()),
                added_vertices: ext.added_vertices().to_vec(),
                added_edges: ext
                    .total()
                    .edges()
                    .iter()
                    .filter(|e| !problem.base.edges().iter().any(|b| b.id == e.id))
                    .map(|e| EdgeSpec {
                        id: e.id.clone(),
                        src: e.src.clone(),
                        dst: e.dst.clone(),
                    })
                    .collect(),
                sink: ext.sink().to_string(),
            })
            .collect();
        ProblemFile { base, extensions }
    }

    /// Builds and validates every graph named by the file.
    pub fn realize(&self) -> Result<Problem, ProblemError> {
        let base = Graph::new(
            self.base.vertices.clone(),
            self.base
                .edges
                .iter()
                .map(|e| Edge {
                    id: e.id.clone(),
                    src: e.src.clone(),
                    dst: e.dst.clone(),
                })
                .collect(),
        )?;

        let mut extensions = Vec::with_capacity(self.extensions.len());
        for (i, spec) in self.extensions.iter().enumerate() {
            let label = spec
                .label
                .clone()
                .unwrap_or_else(|| format!("E{}", i + 1));
            let context = format!("extension `{label}`");

            for v in &spec.added_vertices {
                if base.has_vertex(v) {
                    return Err(ProblemError::Schema {
                        context,
                        message: format!("added vertex `{v}` already exists in the base"),
                    });
                }
            }
            if !spec.added_vertices.contains(&spec.sink) {
                return Err(ProblemError::Schema {
                    context,
                    message: format!("sink `{}` is not among the added vertices", spec.sink),
                });
            }

            let mut vertices = self.base.vertices.clone();
            vertices.extend(spec.added_vertices.iter().cloned());
            let mut edges: Vec<Edge> = self
                .base
                .edges
                .iter()
                .chain(spec.added_edges.iter())
                .map(|e| Edge {
                    id: e.id.clone(),
                    src: e.src.clone(),
                    dst: e.dst.clone(),
                })
                .collect();
            // keep construction order: base edges first, added edges after
            let total = Graph::new(std::mem::take(&mut vertices), std::mem::take(&mut edges))
                .map_err(|e| ProblemError::Schema {
                    context: context.clone(),
                    message: e.to_string(),
                })?;

            let ext = OneSinkExtension::validate(&base, &total, &spec.sink).map_err(|report| {
                ProblemError::Extension {
                    label: label.clone(),
                    report,
                }
            })?;
            extensions.push((label, ext));
        }
        Ok(Problem { base, extensions })
    }
}

/// Reads and validates a problem file in one step.
pub fn parse_problem(path: &Path) -> Result<Problem, ProblemError> {
    ProblemFile::from_path(path)?.realize()
}
