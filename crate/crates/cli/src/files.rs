//! The two line-oriented input formats.
//!
//! ```text
//! metrized_graph
//! vertex A
//! vertex B
//! edge e A B 1
//! point P on e at 1/3
//! divisor A 1
//! ```
//!
//! ```text
//! fiber
//! component A genus 1
//! component B genus 1
//! node n A B length 2
//! ```
//!
//! `#` starts a comment. Point offsets are measured from the edge's first
//! vertex.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_traits::Signed;

use mg_core::rational::{int, parse_rational};
use mg_core::{EdgeId, FiberConfiguration, GraphPoint, MetrizedGraph, RDivisor, Rational, VertexId};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeDecl {
    pub name: String,
    pub tail: usize,
    pub head: usize,
    pub length: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointDecl {
    pub name: String,
    pub edge: usize,
    pub offset: Rational,
}

/// A parsed graph file. Declarations are kept in file order so the file can
/// be written back out.
#[derive(Clone, Debug)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDecl>,
    pub points: Vec<PointDecl>,
    pub divisor_terms: Vec<(String, Rational)>,
    pub graph: MetrizedGraph,
    pub divisor: RDivisor,
    resolved: HashMap<String, GraphPoint>,
}

impl GraphFile {
    /// The point named by a vertex or `point` declaration.
    pub fn point(&self, name: &str) -> Result<GraphPoint, CliError> {
        self.resolved
            .get(name)
            .cloned()
            .ok_or_else(|| CliError::UnknownPoint(name.to_string()))
    }

    /// Display name of a graph point: the vertex or point name when there is
    /// one, otherwise `edge@offset`.
    pub fn name_of(&self, p: &GraphPoint) -> String {
        match p {
            GraphPoint::Vertex(v) => self.vertices[v.0].clone(),
            GraphPoint::Edge { edge, offset } => self
                .points
                .iter()
                .find(|d| d.edge == edge.0 && &d.offset == offset)
                .map(|d| d.name.clone())
                .unwrap_or_else(|| format!("{}@{}", self.edges[edge.0].name, offset)),
        }
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.0].name
    }
}

/// Meaningful lines with their 1-based numbers, comments stripped.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = body.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

fn syntax(line: usize, message: impl Into<String>) -> CliError {
    CliError::Syntax {
        line,
        message: message.into(),
    }
}

fn rational(line: usize, text: &str) -> Result<Rational, CliError> {
    parse_rational(text).ok_or_else(|| CliError::BadRational {
        line,
        text: text.to_string(),
    })
}

fn expect_header<'a>(
    it: &mut impl Iterator<Item = (usize, Vec<&'a str>)>,
    header: &str,
) -> Result<(), CliError> {
    match it.next() {
        Some((_, w)) if w == [header] => Ok(()),
        Some((line, _)) => Err(syntax(line, format!("expected header `{header}`"))),
        None => Err(syntax(1, format!("expected header `{header}`"))),
    }
}

fn fresh(names: &HashMap<String, GraphPoint>, extra: &[String], line: usize, name: &str) -> Result<(), CliError> {
    if names.contains_key(name) || extra.iter().any(|n| n == name) {
        Err(syntax(line, format!("duplicate name `{name}`")))
    } else {
        Ok(())
    }
}

pub fn parse_graph_file(text: &str) -> Result<GraphFile, CliError> {
    let mut it = lines(text);
    expect_header(&mut it, "metrized_graph")?;
    let mut file = GraphFile {
        vertices: Vec::new(),
        edges: Vec::new(),
        points: Vec::new(),
        divisor_terms: Vec::new(),
        graph: MetrizedGraph::new(),
        divisor: RDivisor::new(),
        resolved: HashMap::new(),
    };
    let mut edge_names: Vec<String> = Vec::new();
    let vertex = |file: &GraphFile, line: usize, name: &str| {
        file.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| CliError::UnknownVertex {
                line,
                name: name.to_string(),
            })
    };
    for (line, w) in it {
        match w.as_slice() {
            ["vertex", name] => {
                fresh(&file.resolved, &edge_names, line, name)?;
                let v = file.graph.add_vertex();
                file.vertices.push(name.to_string());
                file.resolved.insert(name.to_string(), GraphPoint::Vertex(v));
            }
            ["edge", name, a, b, len] => {
                fresh(&file.resolved, &edge_names, line, name)?;
                let tail = vertex(&file, line, a)?;
                let head = vertex(&file, line, b)?;
                let length = rational(line, len)?;
                if !length.is_positive() {
                    return Err(CliError::NonpositiveLength { line });
                }
                file.graph.add_edge(VertexId(tail), VertexId(head), length.clone());
                edge_names.push(name.to_string());
                file.edges.push(EdgeDecl {
                    name: name.to_string(),
                    tail,
                    head,
                    length,
                });
            }
            ["point", name, "on", edge, "at", off] => {
                fresh(&file.resolved, &edge_names, line, name)?;
                let e = edge_names
                    .iter()
                    .position(|n| n == edge)
                    .ok_or_else(|| CliError::UnknownEdge {
                        line,
                        name: edge.to_string(),
                    })?;
                let offset = rational(line, off)?;
                let p = file
                    .graph
                    .point_on_edge(EdgeId(e), offset.clone())
                    .map_err(|_| CliError::PointOffEdge {
                        line,
                        edge: edge.to_string(),
                        offset: offset.to_string(),
                    })?;
                file.points.push(PointDecl {
                    name: name.to_string(),
                    edge: e,
                    offset,
                });
                file.resolved.insert(name.to_string(), p);
            }
            ["divisor", name, coeff] => {
                let c = rational(line, coeff)?;
                let p = file.resolved.get(*name).cloned().ok_or_else(|| CliError::UnknownVertex {
                    line,
                    name: name.to_string(),
                })?;
                file.divisor.add(p, c.clone());
                file.divisor_terms.push((name.to_string(), c));
            }
            [kw, ..] if ["vertex", "edge", "point", "divisor"].contains(kw) => {
                return Err(syntax(line, format!("malformed `{kw}` line")));
            }
            [kw, ..] => return Err(syntax(line, format!("unknown keyword `{kw}`"))),
            [] => unreachable!(),
        }
    }
    file.graph.validate()?;
    Ok(file)
}

/// Normalized text: comments and spacing dropped, rationals in lowest terms.
pub fn write_graph_file(file: &GraphFile) -> String {
    let mut out = String::from("metrized_graph\n");
    for v in &file.vertices {
        let _ = writeln!(out, "vertex {v}");
    }
    for e in &file.edges {
        let _ = writeln!(
            out,
            "edge {} {} {} {}",
            e.name, file.vertices[e.tail], file.vertices[e.head], e.length
        );
    }
    for p in &file.points {
        let _ = writeln!(out, "point {} on {} at {}", p.name, file.edges[p.edge].name, p.offset);
    }
    for (name, c) in &file.divisor_terms {
        let _ = writeln!(out, "divisor {name} {c}");
    }
    out
}

/// A parsed fiber file.
#[derive(Clone, Debug)]
pub struct FiberFile {
    pub config: FiberConfiguration,
    /// Whether each node carried an explicit `length`.
    pub explicit_length: Vec<bool>,
}

pub fn parse_fiber_file(text: &str) -> Result<FiberFile, CliError> {
    let mut it = lines(text);
    expect_header(&mut it, "fiber")?;
    let mut config = FiberConfiguration::new();
    let mut explicit_length = Vec::new();
    let mut names: Vec<String> = Vec::new();
    for (line, w) in it {
        let component = |name: &str| {
            config
                .components()
                .iter()
                .position(|c| c.name == name)
                .ok_or_else(|| CliError::UnknownComponent {
                    line,
                    name: name.to_string(),
                })
        };
        match w.as_slice() {
            ["component", name, "genus", g] => {
                if names.iter().any(|n| n == name) {
                    return Err(syntax(line, format!("duplicate name `{name}`")));
                }
                let genus: u32 = g
                    .parse()
                    .map_err(|_| syntax(line, format!("`{g}` is not a nonnegative integer")))?;
                config.add_component(*name, genus);
                names.push(name.to_string());
            }
            ["node", name, a, b, rest @ ..] => {
                if names.iter().any(|n| n == name) {
                    return Err(syntax(line, format!("duplicate name `{name}`")));
                }
                let (a, b) = (component(a)?, component(b)?);
                let length = match rest {
                    [] => None,
                    ["length", l] => Some(rational(line, l)?),
                    _ => return Err(syntax(line, "malformed `node` line")),
                };
                if let Some(l) = &length {
                    if !l.is_positive() {
                        return Err(CliError::NonpositiveLength { line });
                    }
                }
                explicit_length.push(length.is_some());
                config.add_node_with_length(*name, a, b, length.unwrap_or_else(|| int(1)));
                names.push(name.to_string());
            }
            [kw, ..] if ["component", "node"].contains(kw) => {
                return Err(syntax(line, format!("malformed `{kw}` line")));
            }
            [kw, ..] => return Err(syntax(line, format!("unknown keyword `{kw}`"))),
            [] => unreachable!(),
        }
    }
    match config.fiber_genus() {
        Ok(_) => {}
        Err(mg_core::Error::GenusTooSmall(g)) => return Err(CliError::GenusTooSmall(g)),
        Err(e) => return Err(e.into()),
    }
    Ok(FiberFile {
        config,
        explicit_length,
    })
}

pub fn write_fiber_file(file: &FiberFile) -> String {
    let mut out = String::from("fiber\n");
    let comps = file.config.components();
    for c in comps {
        let _ = writeln!(out, "component {} genus {}", c.name, c.genus);
    }
    for (n, explicit) in file.config.nodes().iter().zip(&file.explicit_length) {
        let _ = write!(out, "node {} {} {}", n.name, comps[n.ends.0].name, comps[n.ends.1].name);
        if *explicit {
            let _ = write!(out, " length {}", n.length);
        }
        out.push('\n');
    }
    out
}
