//! Metrized graphs, points on them, and R-divisors.
//!
//! A [`MetrizedGraph`] is a finite connected multigraph whose edges carry
//! positive rational lengths. Loops and parallel edges are allowed. Points in
//! the interior of an edge are addressed by their distance from the edge's
//! stored `tail` endpoint.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub tail: VertexId,
    pub head: VertexId,
    pub length: Rational,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MetrizedGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
}

/// A point of a metrized graph: a vertex, or a strictly interior point of an
/// edge at `offset` from the edge's tail.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GraphPoint {
    Vertex(VertexId),
    Edge { edge: EdgeId, offset: Rational },
}

impl From<VertexId> for GraphPoint {
    fn from(v: VertexId) -> Self {
        GraphPoint::Vertex(v)
    }
}

impl MetrizedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(n: usize) -> Self {
        MetrizedGraph {
            vertex_count: n,
            edges: Vec::new(),
        }
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.vertex_count += 1;
        VertexId(self.vertex_count - 1)
    }

    /// Appends an edge without checking it; see [`MetrizedGraph::validate`].
    pub fn add_edge(&mut self, tail: VertexId, head: VertexId, length: Rational) -> EdgeId {
        self.edges.push(Edge { tail, head, length });
        EdgeId(self.edges.len() - 1)
    }

    /// Segment of length `l` with vertices `v0` (tail) and `v1`.
    pub fn segment(l: Rational) -> Self {
        let mut g = Self::with_vertices(2);
        g.add_edge(VertexId(0), VertexId(1), l);
        g
    }

    /// A single loop of length `l` at `v0`.
    pub fn circle(l: Rational) -> Self {
        let mut g = Self::with_vertices(1);
        g.add_edge(VertexId(0), VertexId(0), l);
        g
    }

    /// Path `v0 - v1 - ... - vn` with the given edge lengths.
    pub fn path(lengths: &[Rational]) -> Self {
        let mut g = Self::with_vertices(lengths.len() + 1);
        for (i, l) in lengths.iter().enumerate() {
            g.add_edge(VertexId(i), VertexId(i + 1), l.clone());
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_count).map(VertexId)
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, &Edge)> {
        self.edges.iter().enumerate().map(|(i, e)| (EdgeId(i), e))
    }

    pub fn edge(&self, id: EdgeId) -> Result<&Edge> {
        self.edges.get(id.0).ok_or(Error::EdgeNotFound(id))
    }

    pub fn total_length(&self) -> Rational {
        self.edges.iter().map(|e| &e.length).sum()
    }

    /// Number of edge ends at `v`; a loop counts twice.
    pub fn valence(&self, v: VertexId) -> usize {
        self.edges
            .iter()
            .map(|e| (e.tail == v) as usize + (e.head == v) as usize)
            .sum()
    }

    pub fn validate(&self) -> Result<()> {
        for (id, e) in self.edges() {
            if e.tail.0 >= self.vertex_count || e.head.0 >= self.vertex_count {
                return Err(Error::DanglingEndpoint(id));
            }
            if !e.length.is_positive() {
                return Err(Error::NonpositiveLength(id));
            }
        }
        if self.components_without(None) != 1 {
            return Err(Error::Disconnected);
        }
        Ok(())
    }

    /// Number of connected components, ignoring `skip` if given.
    pub(crate) fn components_without(&self, skip: Option<EdgeId>) -> usize {
        let labels = self.component_labels(skip);
        labels.iter().copied().max().map_or(0, |m| m + 1)
    }

    /// Component index per vertex, ignoring `skip` if given.
    pub(crate) fn component_labels(&self, skip: Option<EdgeId>) -> Vec<usize> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (id, e) in self.edges() {
            if Some(id) == skip {
                continue;
            }
            adj[e.tail.0].push(e.head.0);
            adj[e.head.0].push(e.tail.0);
        }
        let mut label = vec![usize::MAX; self.vertex_count];
        let mut next = 0;
        for start in 0..self.vertex_count {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if label[w] == usize::MAX {
                        label[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    /// |E| - |V| + 1, the number of independent cycles of a connected graph.
    pub fn first_betti(&self) -> usize {
        (self.edges.len() + 1)
            .checked_sub(self.vertex_count)
            .expect("first_betti on a disconnected graph")
    }

    pub fn check_point(&self, p: &GraphPoint) -> Result<()> {
        match p {
            GraphPoint::Vertex(v) if v.0 < self.vertex_count => Ok(()),
            GraphPoint::Edge { edge, offset } => match self.edges.get(edge.0) {
                Some(e) if offset.is_positive() && *offset < e.length => Ok(()),
                _ => Err(Error::PointOffGraph),
            },
            _ => Err(Error::PointOffGraph),
        }
    }

    /// The point at distance `offset` from the tail of `edge`, normalised to
    /// a vertex when it falls on an endpoint.
    pub fn point_on_edge(&self, edge: EdgeId, offset: Rational) -> Result<GraphPoint> {
        let e = self.edges.get(edge.0).ok_or(Error::PointOffGraph)?;
        if offset.is_negative() || offset > e.length {
            Err(Error::PointOffGraph)
        } else if offset.is_zero() {
            Ok(GraphPoint::Vertex(e.tail))
        } else if offset == e.length {
            Ok(GraphPoint::Vertex(e.head))
        } else {
            Ok(GraphPoint::Edge { edge, offset })
        }
    }

    /// Copy with every length multiplied by `s`.
    pub fn scaled(&self, s: &Rational) -> MetrizedGraph {
        MetrizedGraph {
            vertex_count: self.vertex_count,
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    length: &e.length * s,
                    ..e.clone()
                })
                .collect(),
        }
    }

    /// Makes `p` a vertex. The split edge keeps its id for the piece next to
    /// its tail; the piece next to its head is appended.
    pub fn subdivide_at(&self, p: &GraphPoint) -> Result<Subdivision> {
        self.check_point(p)?;
        match p {
            GraphPoint::Vertex(v) => Ok(Subdivision {
                graph: self.clone(),
                vertex: *v,
                relocation: Relocation::identity(),
            }),
            GraphPoint::Edge { edge, offset } => {
                let mut graph = self.clone();
                let vertex = graph.add_vertex();
                let old = graph.edges[edge.0].clone();
                graph.edges[edge.0] = Edge {
                    tail: old.tail,
                    head: vertex,
                    length: offset.clone(),
                };
                let new_edge = graph.add_edge(vertex, old.head, &old.length - offset);
                Ok(Subdivision {
                    graph,
                    vertex,
                    relocation: Relocation {
                        steps: vec![Step::Split {
                            edge: *edge,
                            offset: offset.clone(),
                            vertex,
                            new_edge,
                        }],
                    },
                })
            }
        }
    }

    /// Subdivides at every listed point, returning the refined graph, the
    /// vertex for each point (in order) and the composite relocation.
    pub fn subdivide_all(&self, points: &[GraphPoint]) -> Result<Refinement> {
        for p in points {
            self.check_point(p)?;
        }
        let mut graph = self.clone();
        let mut relocation = Relocation::identity();
        for p in points {
            let sub = graph.subdivide_at(&relocation.relocate(p))?;
            graph = sub.graph;
            relocation = relocation.then(sub.relocation);
        }
        let vertices = points
            .iter()
            .map(|p| match relocation.relocate(p) {
                GraphPoint::Vertex(v) => v,
                GraphPoint::Edge { .. } => unreachable!("subdivided point is a vertex"),
            })
            .collect();
        Ok(Refinement {
            graph,
            vertices,
            relocation,
        })
    }
}

/// Result of [`MetrizedGraph::subdivide_at`].
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub graph: MetrizedGraph,
    pub vertex: VertexId,
    pub relocation: Relocation,
}

/// Result of [`MetrizedGraph::subdivide_all`].
#[derive(Clone, Debug)]
pub struct Refinement {
    pub graph: MetrizedGraph,
    pub vertices: Vec<VertexId>,
    pub relocation: Relocation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Step {
    Split {
        edge: EdgeId,
        offset: Rational,
        vertex: VertexId,
        new_edge: EdgeId,
    },
    Embed {
        vertices: Vec<VertexId>,
        edge_offset: usize,
    },
}

/// Carries points of a graph to the corresponding points of a graph derived
/// from it by subdivision or one-point sums.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Relocation {
    steps: Vec<Step>,
}

impl Relocation {
    pub fn identity() -> Self {
        Self::default()
    }

    /// `self` followed by `next`.
    pub fn then(mut self, next: Relocation) -> Relocation {
        self.steps.extend(next.steps);
        self
    }

    pub fn relocate(&self, p: &GraphPoint) -> GraphPoint {
        self.steps.iter().fold(p.clone(), |p, step| step.apply(p))
    }
}

impl Step {
    fn apply(&self, p: GraphPoint) -> GraphPoint {
        match (self, p) {
            (
                Step::Split {
                    edge,
                    offset,
                    vertex,
                    new_edge,
                },
                GraphPoint::Edge { edge: e, offset: s },
            ) if e == *edge => match s.cmp(offset) {
                std::cmp::Ordering::Less => GraphPoint::Edge { edge: e, offset: s },
                std::cmp::Ordering::Equal => GraphPoint::Vertex(*vertex),
                std::cmp::Ordering::Greater => GraphPoint::Edge {
                    edge: *new_edge,
                    offset: s - offset,
                },
            },
            (Step::Split { .. }, p) => p,
            (Step::Embed { vertices, .. }, GraphPoint::Vertex(v)) => {
                GraphPoint::Vertex(vertices[v.0])
            }
            (Step::Embed { edge_offset, .. }, GraphPoint::Edge { edge, offset }) => {
                GraphPoint::Edge {
                    edge: EdgeId(edge.0 + edge_offset),
                    offset,
                }
            }
        }
    }
}

/// Result of [`one_point_sum`].
#[derive(Clone, Debug)]
pub struct OnePointSum {
    pub graph: MetrizedGraph,
    pub joint: VertexId,
    pub left: Relocation,
    pub right: Relocation,
}

/// Glues `x1 ∈ g1` to `x2 ∈ g2`. Vertices and edges of (subdivided) `g1` keep
/// their ids; those of `g2` are appended after them.
pub fn one_point_sum(
    g1: &MetrizedGraph,
    x1: &GraphPoint,
    g2: &MetrizedGraph,
    x2: &GraphPoint,
) -> Result<OnePointSum> {
    let s1 = g1.subdivide_at(x1)?;
    let s2 = g2.subdivide_at(x2)?;
    let mut graph = s1.graph.clone();
    let base = graph.vertex_count;
    let mut vertex_map = Vec::with_capacity(s2.graph.vertex_count);
    let mut next = base;
    for v in s2.graph.vertices() {
        if v == s2.vertex {
            vertex_map.push(s1.vertex);
        } else {
            vertex_map.push(VertexId(next));
            next += 1;
        }
    }
    graph.vertex_count = next;
    let edge_offset = graph.edges.len();
    for (_, e) in s2.graph.edges() {
        graph.add_edge(vertex_map[e.tail.0], vertex_map[e.head.0], e.length.clone());
    }
    let embed = Relocation {
        steps: vec![Step::Embed {
            vertices: vertex_map,
            edge_offset,
        }],
    };
    Ok(OnePointSum {
        graph,
        joint: s1.vertex,
        left: s1.relocation,
        right: s2.relocation.then(embed),
    })
}

/// A finite formal sum of graph points with nonzero rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RDivisor {
    coeffs: BTreeMap<GraphPoint, Rational>,
}

impl RDivisor {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `coeff * p`, merging with any existing coefficient at `p`.
    pub fn add(&mut self, p: GraphPoint, coeff: Rational) {
        let slot = self.coeffs.entry(p).or_insert_with(Rational::zero);
        *slot += coeff;
        self.coeffs.retain(|_, c| !c.is_zero());
    }

    pub fn with(mut self, p: impl Into<GraphPoint>, coeff: Rational) -> Self {
        self.add(p.into(), coeff);
        self
    }

    pub fn degree(&self) -> Rational {
        self.coeffs.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GraphPoint, &Rational)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, p: &GraphPoint) -> Rational {
        self.coeffs.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &GraphPoint> {
        self.coeffs.keys()
    }

    pub fn check_on(&self, g: &MetrizedGraph) -> Result<()> {
        self.support().try_for_each(|p| g.check_point(p))
    }

    pub fn relocated(&self, r: &Relocation) -> RDivisor {
        let mut out = RDivisor::new();
        for (p, c) in self.iter() {
            out.add(r.relocate(p), c.clone());
        }
        out
    }

    /// Sum of two divisors living on the same graph.
    pub fn sum(&self, other: &RDivisor) -> RDivisor {
        let mut out = self.clone();
        for (p, c) in other.iter() {
            out.add(p.clone(), c.clone());
        }
        out
    }
}
