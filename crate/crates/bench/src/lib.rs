//! Fixtures shared by the criterion benchmarks.

use mg_core::rational::{int, ratio};
use mg_core::{GraphPoint, MetrizedGraph, RDivisor, VertexId};

/// Chain of `n` edges with lengths cycling through 1, 1/2, 2/3 and the
/// divisor `P0 + 2 P1 + ... + 2 P_{n-1} + P_n`.
pub fn chain(n: usize) -> (MetrizedGraph, RDivisor) {
    let lengths: Vec<_> = (0..n)
        .map(|i| match i % 3 {
            0 => int(1),
            1 => ratio(1, 2),
            _ => ratio(2, 3),
        })
        .collect();
    let g = MetrizedGraph::path(&lengths);
    let mut d = RDivisor::new();
    for v in 0..=n {
        let c = if v == 0 || v == n { 1 } else { 2 };
        d.add(GraphPoint::Vertex(VertexId(v)), int(c));
    }
    (g, d)
}

/// `n × n` grid graph with unit edges and a canonical-type divisor at every
/// vertex.
pub fn grid(n: usize) -> (MetrizedGraph, RDivisor) {
    let mut g = MetrizedGraph::with_vertices(n * n);
    let id = |r: usize, c: usize| VertexId(r * n + c);
    for r in 0..n {
        for c in 0..n {
            if c + 1 < n {
                g.add_edge(id(r, c), id(r, c + 1), int(1));
            }
            if r + 1 < n {
                g.add_edge(id(r, c), id(r + 1, c), int(1));
            }
        }
    }
    let mut d = RDivisor::new();
    for v in g.vertices() {
        d.add(GraphPoint::Vertex(v), int(g.valence(v) as i64 - 2));
    }
    (g, d)
}
