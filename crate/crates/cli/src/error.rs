use std::path::PathBuf;

use thiserror::Error;

/// Input errors of the file formats and command line. Mathematical failures
/// are carried through as [`mg_core::Error`].
#[derive(Debug, Error)]
pub enum CliError {
    #[error("SyntaxError: line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("UnknownVertex: line {line}: no vertex named `{name}`")]
    UnknownVertex { line: usize, name: String },
    #[error("UnknownEdge: line {line}: no edge named `{name}`")]
    UnknownEdge { line: usize, name: String },
    #[error("UnknownComponent: line {line}: no component named `{name}`")]
    UnknownComponent { line: usize, name: String },
    #[error("UnknownPoint: no vertex or point named `{0}`")]
    UnknownPoint(String),
    #[error("BadRational: line {line}: `{text}` is not a rational number")]
    BadRational { line: usize, text: String },
    #[error("NonpositiveLength: line {line}: edge lengths must be positive")]
    NonpositiveLength { line: usize },
    #[error("PointOffGraph: line {line}: offset {offset} lies outside edge `{edge}`")]
    PointOffEdge { line: usize, edge: String, offset: String },
    #[error("GenusTooSmall: fiber genus {0} is below 2")]
    GenusTooSmall(u64),
    #[error("Usage: {0}")]
    Usage(String),
    #[error("IoError: {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("{class}: {source}", class = math_class(.0), source = .0)]
    Math(#[from] mg_core::Error),
}

impl CliError {
    /// 3 for a violated mathematical precondition, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Math(e) if e.is_precondition() => 3,
            _ => 2,
        }
    }
}

fn math_class(e: &mg_core::Error) -> String {
    let debug = format!("{e:?}");
    debug
        .split(|c: char| !c.is_alphanumeric())
        .next()
        .unwrap_or("Error")
        .to_string()
}
