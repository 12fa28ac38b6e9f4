//! Random graphs, points, divisors and fiber configurations for property
//! tests and benchmarks.

use rand::Rng;

use crate::fibration::FiberConfiguration;
use crate::graph::{EdgeId, GraphPoint, MetrizedGraph, RDivisor, VertexId};
use crate::rational::{int, Rational};

/// `p/q` with `1 ≤ p, q ≤ max`.
pub fn positive_rational<R: Rng + ?Sized>(rng: &mut R, max: i64) -> Rational {
    Rational::new(rng.gen_range(1..=max).into(), rng.gen_range(1..=max).into())
}

/// `±p/q` with `1 ≤ p, q ≤ max`.
pub fn signed_rational<R: Rng + ?Sized>(rng: &mut R, max: i64) -> Rational {
    let r = positive_rational(rng, max);
    if rng.gen_bool(0.5) {
        -r
    } else {
        r
    }
}

/// Connected multigraph on `1..=max_vertices` vertices: a random spanning
/// tree plus up to `max_extra` further edges, which may be loops or parallel.
pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, max_vertices: usize, max_extra: usize) -> MetrizedGraph {
    let n = rng.gen_range(1..=max_vertices);
    let mut g = MetrizedGraph::with_vertices(n);
    for v in 1..n {
        let parent = rng.gen_range(0..v);
        g.add_edge(VertexId(parent), VertexId(v), positive_rational(rng, 6));
    }
    for _ in 0..rng.gen_range(0..=max_extra) {
        let a = rng.gen_range(0..n);
        let b = if rng.gen_bool(0.3) { a } else { rng.gen_range(0..n) };
        g.add_edge(VertexId(a), VertexId(b), positive_rational(rng, 6));
    }
    g
}

/// A vertex, or a point at a rational fraction of an edge.
pub fn random_point<R: Rng + ?Sized>(rng: &mut R, g: &MetrizedGraph) -> GraphPoint {
    if g.edge_count() == 0 || rng.gen_bool(0.4) {
        return GraphPoint::Vertex(VertexId(rng.gen_range(0..g.vertex_count())));
    }
    let e = EdgeId(rng.gen_range(0..g.edge_count()));
    let len = g.edge(e).expect("edge").length.clone();
    let q = rng.gen_range(2..=7i64);
    let p = rng.gen_range(1..q);
    g.point_on_edge(e, len * Rational::new(p.into(), q.into()))
        .expect("interior point")
}

/// Divisor with up to `max_terms` terms and degree different from -2.
pub fn random_divisor<R: Rng + ?Sized>(rng: &mut R, g: &MetrizedGraph, max_terms: usize) -> RDivisor {
    loop {
        let mut d = RDivisor::new();
        for _ in 0..rng.gen_range(0..=max_terms) {
            d.add(random_point(rng, g), signed_rational(rng, 5));
        }
        if d.degree() != int(-2) {
            return d;
        }
    }
}

/// Random chain of stable components: a path of components with self-nodes
/// sprinkled on, every ω coefficient positive, and `2 ≤ g ≤ max_genus`.
pub fn random_chain_fiber<R: Rng + ?Sized>(
    rng: &mut R,
    max_components: usize,
    max_self_nodes: usize,
    max_genus: u64,
    unit_lengths: bool,
) -> FiberConfiguration {
    loop {
        let n = rng.gen_range(1..=max_components);
        let loops = rng.gen_range(0..=max_self_nodes);
        let mut genera: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
        let mut loop_at = vec![0usize; n];
        for _ in 0..loops {
            loop_at[rng.gen_range(0..n)] += 1;
        }
        // Stability: 2g - 2 + branches > 0.
        for i in 0..n {
            let branches = (i > 0) as i64 + (i + 1 < n) as i64 + 2 * loop_at[i] as i64;
            while 2 * genera[i] as i64 - 2 + branches <= 0 {
                genera[i] += 1;
            }
        }
        let genus: u64 = genera.iter().map(|&g| g as u64).sum::<u64>() + loops as u64;
        if !(2..=max_genus).contains(&genus) {
            continue;
        }
        let length = |rng: &mut R| {
            if unit_lengths {
                int(1)
            } else {
                positive_rational(rng, 4)
            }
        };
        let mut f = FiberConfiguration::new();
        for (i, g) in genera.iter().enumerate() {
            f.add_component(format!("C{i}"), *g);
        }
        for i in 1..n {
            let l = length(rng);
            f.add_node_with_length(format!("n{}_{}", i - 1, i), i - 1, i, l);
        }
        for (i, &k) in loop_at.iter().enumerate() {
            for j in 0..k {
                let l = length(rng);
                f.add_node_with_length(format!("s{i}_{j}"), i, i, l);
            }
        }
        return f;
    }
}
