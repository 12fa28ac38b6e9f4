//! Effective resistance, treating each edge as a resistor whose resistance is
//! its length.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, GraphPoint, MetrizedGraph, VertexId};
use crate::linalg::Matrix;
use crate::rational::Rational;

/// Weighted vertex Laplacian with conductance `1/length`. Loops contribute
/// nothing.
pub fn laplacian(g: &MetrizedGraph) -> Matrix {
    laplacian_without(g, None)
}

fn laplacian_without(g: &MetrizedGraph, skip: Option<EdgeId>) -> Matrix {
    let n = g.vertex_count();
    let mut l = Matrix::zeros(n, n);
    for (id, e) in g.edges() {
        if e.is_loop() || Some(id) == skip {
            continue;
        }
        let c = e.length.recip();
        let (a, b) = (e.tail.0, e.head.0);
        l[(a, a)] += &c;
        l[(b, b)] += &c;
        l[(a, b)] -= &c;
        l[(b, a)] -= &c;
    }
    l
}

/// Inverse of the Laplacian grounded at vertex 0, padded with a zero row and
/// column for the ground. For a connected graph,
/// `r(a,b) = M[a][a] + M[b][b] - 2 M[a][b]`.
#[derive(Clone, Debug)]
pub struct GroundedInverse {
    m: Matrix,
}

impl GroundedInverse {
    pub fn new(g: &MetrizedGraph) -> Result<Self> {
        let n = g.vertex_count();
        if n == 0 {
            return Err(Error::Disconnected);
        }
        let full = laplacian(g);
        let mut reduced = Matrix::zeros(n - 1, n - 1);
        for i in 1..n {
            for j in 1..n {
                reduced[(i - 1, j - 1)] = full[(i, j)].clone();
            }
        }
        let inv = reduced.inverse().ok_or(Error::Disconnected)?;
        let mut m = Matrix::zeros(n, n);
        for i in 1..n {
            for j in 1..n {
                m[(i, j)] = inv[(i - 1, j - 1)].clone();
            }
        }
        Ok(GroundedInverse { m })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn resistance(&self, a: VertexId, b: VertexId) -> Rational {
        let m = &self.m;
        &m[(a.0, a.0)] + &m[(b.0, b.0)] - &m[(a.0, b.0)] * Rational::from_integer(2.into())
    }
}

pub fn effective_resistance(g: &MetrizedGraph, p: &GraphPoint, q: &GraphPoint) -> Result<Rational> {
    g.check_point(p)?;
    g.check_point(q)?;
    if p == q {
        return Ok(Rational::zero());
    }
    let refined = g.subdivide_all(&[p.clone(), q.clone()])?;
    let (vp, vq) = (refined.vertices[0], refined.vertices[1]);
    let graph = &refined.graph;
    let full = laplacian(graph);
    // Ground q, inject unit current at p.
    let keep: Vec<usize> = (0..graph.vertex_count()).filter(|&i| i != vq.0).collect();
    let mut reduced = Matrix::zeros(keep.len(), keep.len());
    for (i, &a) in keep.iter().enumerate() {
        for (j, &b) in keep.iter().enumerate() {
            reduced[(i, j)] = full[(a, b)].clone();
        }
    }
    let rhs: Vec<Rational> = keep
        .iter()
        .map(|&a| if a == vp.0 { Rational::one() } else { Rational::zero() })
        .collect();
    let v = reduced.solve(&rhs).ok_or(Error::Disconnected)?;
    let idx = keep.iter().position(|&a| a == vp.0).expect("p is kept");
    Ok(v[idx].clone())
}

/// Resistance between the endpoints of an edge once that edge is removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeletedEdgeResistance {
    Finite(Rational),
    /// The edge is a bridge.
    Infinite,
}

pub fn resistance_in_deleted_edge(g: &MetrizedGraph, e: EdgeId) -> Result<DeletedEdgeResistance> {
    let edge = g.edge(e)?;
    if edge.is_loop() {
        return Ok(DeletedEdgeResistance::Finite(Rational::zero()));
    }
    let labels = g.component_labels(Some(e));
    if labels[edge.tail.0] != labels[edge.head.0] {
        return Ok(DeletedEdgeResistance::Infinite);
    }
    let full = laplacian_without(g, Some(e));
    let ground = edge.head.0;
    let keep: Vec<usize> = (0..g.vertex_count()).filter(|&i| i != ground).collect();
    let mut reduced = Matrix::zeros(keep.len(), keep.len());
    for (i, &a) in keep.iter().enumerate() {
        for (j, &b) in keep.iter().enumerate() {
            reduced[(i, j)] = full[(a, b)].clone();
        }
    }
    let rhs: Vec<Rational> = keep
        .iter()
        .map(|&a| if a == edge.tail.0 { Rational::one() } else { Rational::zero() })
        .collect();
    let v = reduced.solve(&rhs).ok_or(Error::Disconnected)?;
    let idx = keep.iter().position(|&a| a == edge.tail.0).expect("tail is kept");
    Ok(DeletedEdgeResistance::Finite(v[idx].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn theta(n: usize) -> MetrizedGraph {
        let mut g = MetrizedGraph::with_vertices(2);
        for _ in 0..n {
            g.add_edge(VertexId(0), VertexId(1), int(1));
        }
        g
    }

    #[test]
    fn segment_endpoints() {
        let g = MetrizedGraph::segment(ratio(7, 3));
        let r = effective_resistance(
            &g,
            &GraphPoint::Vertex(VertexId(0)),
            &GraphPoint::Vertex(VertexId(1)),
        )
        .unwrap();
        assert_eq!(r, ratio(7, 3));
    }

    #[test]
    fn circle_parallel_law() {
        let l = int(5);
        let g = MetrizedGraph::circle(l.clone());
        let o = GraphPoint::Vertex(VertexId(0));
        for t in [ratio(1, 2), int(1), ratio(5, 2), int(4)] {
            let p = g.point_on_edge(EdgeId(0), t.clone()).unwrap();
            let r = effective_resistance(&g, &o, &p).unwrap();
            assert_eq!(r, &t * (&l - &t) / &l);
        }
        // Two interior points.
        let p = g.point_on_edge(EdgeId(0), int(1)).unwrap();
        let q = g.point_on_edge(EdgeId(0), int(3)).unwrap();
        assert_eq!(effective_resistance(&g, &p, &q).unwrap(), ratio(6, 5));
    }

    #[test]
    fn theta_parallel() {
        let g = theta(3);
        let r = effective_resistance(
            &g,
            &GraphPoint::Vertex(VertexId(0)),
            &GraphPoint::Vertex(VertexId(1)),
        )
        .unwrap();
        assert_eq!(r, ratio(1, 3));
        let inv = GroundedInverse::new(&g).unwrap();
        assert_eq!(inv.resistance(VertexId(0), VertexId(1)), ratio(1, 3));
    }

    #[test]
    fn same_point_is_zero() {
        let g = theta(2);
        let p = g.point_on_edge(EdgeId(1), ratio(1, 3)).unwrap();
        assert_eq!(effective_resistance(&g, &p, &p).unwrap(), int(0));
    }

    #[test]
    fn deleted_edge_cases() {
        let path = MetrizedGraph::path(&[int(1), int(2)]);
        assert_eq!(
            resistance_in_deleted_edge(&path, EdgeId(1)).unwrap(),
            DeletedEdgeResistance::Infinite
        );
        assert_eq!(
            resistance_in_deleted_edge(&MetrizedGraph::circle(int(2)), EdgeId(0)).unwrap(),
            DeletedEdgeResistance::Finite(int(0))
        );
        assert_eq!(
            resistance_in_deleted_edge(&theta(3), EdgeId(0)).unwrap(),
            DeletedEdgeResistance::Finite(ratio(1, 2))
        );
        assert_eq!(
            resistance_in_deleted_edge(&theta(3), EdgeId(7)).unwrap_err(),
            Error::EdgeNotFound(EdgeId(7))
        );
    }
}
