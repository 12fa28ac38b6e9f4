//! Floating-point cross-check: Green functions and resistances computed on a
//! uniformly refined combinatorial graph.
//!
//! Nothing here shares code with the exact solver beyond the graph types.
//! The admissible measure is rebuilt from floating-point resistances, edge
//! mass is lumped onto grid nodes by the trapezoid rule, and the singular
//! discrete Laplacian is grounded at one node and re-centred so that the
//! discrete mean against the measure vanishes.

use nalgebra::{DMatrix, DVector};
use num_traits::ToPrimitive;

use crate::admissible::GreenSystem;
use crate::error::{Error, Result};
use crate::graph::{GraphPoint, MetrizedGraph, RDivisor};
use crate::rational::{to_f64, Rational};

/// Errors below this are treated as exact.
pub const NOISE_FLOOR: f64 = 1e-12;

/// A metrized graph cut into sub-edges no longer than `h`.
#[derive(Clone, Debug)]
pub struct Discretization {
    pub node_count: usize,
    /// `(a, b, length)` for every sub-edge.
    pub edges: Vec<(usize, usize, f64)>,
    /// Grid node of every original vertex.
    pub vertex_nodes: Vec<usize>,
    /// Grid nodes along each original edge, tail to head, endpoints included.
    pub edge_nodes: Vec<Vec<usize>>,
    /// Sub-edge length on each original edge.
    pub piece_lengths: Vec<f64>,
    lengths: Vec<f64>,
}

pub fn discretize(g: &MetrizedGraph, h: &Rational) -> Discretization {
    assert!(*h > Rational::from_integer(0.into()), "mesh size must be positive");
    let mut node_count = g.vertex_count();
    let vertex_nodes: Vec<usize> = (0..node_count).collect();
    let mut edges = Vec::new();
    let mut edge_nodes = Vec::new();
    let mut piece_lengths = Vec::new();
    let mut lengths = Vec::new();
    for (_, e) in g.edges() {
        let pieces = (&e.length / h).ceil().to_integer().to_usize().expect("piece count").max(1);
        let piece = to_f64(&(&e.length / Rational::from_integer(pieces.into())));
        let mut nodes = vec![e.tail.0];
        for _ in 1..pieces {
            nodes.push(node_count);
            node_count += 1;
        }
        nodes.push(e.head.0);
        for w in nodes.windows(2) {
            edges.push((w[0], w[1], piece));
        }
        edge_nodes.push(nodes);
        piece_lengths.push(piece);
        lengths.push(to_f64(&e.length));
    }
    Discretization {
        node_count,
        edges,
        vertex_nodes,
        edge_nodes,
        piece_lengths,
        lengths,
    }
}

impl Discretization {
    /// Nearest grid node to a point of the original graph.
    pub fn node_of(&self, p: &GraphPoint) -> usize {
        match p {
            GraphPoint::Vertex(v) => self.vertex_nodes[v.0],
            GraphPoint::Edge { edge, offset } => {
                let k = (to_f64(offset) / self.piece_lengths[edge.0]).round() as usize;
                let nodes = &self.edge_nodes[edge.0];
                nodes[k.min(nodes.len() - 1)]
            }
        }
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.2).sum()
    }

    fn laplacian(&self) -> DMatrix<f64> {
        let n = self.node_count;
        let mut l = DMatrix::zeros(n, n);
        for &(a, b, len) in &self.edges {
            if a == b {
                continue;
            }
            let c = 1.0 / len;
            l[(a, a)] += c;
            l[(b, b)] += c;
            l[(a, b)] -= c;
            l[(b, a)] -= c;
        }
        l
    }
}

/// Laplacian with node 0 grounded, factorised once.
struct GroundedSolver {
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    n: usize,
}

impl GroundedSolver {
    fn new(l: &DMatrix<f64>) -> Self {
        let n = l.nrows();
        let reduced = l.view((1, 1), (n - 1, n - 1)).into_owned();
        GroundedSolver { lu: reduced.lu(), n }
    }

    /// Solves `L f = rhs` with `f[0] = 0`; `rhs` must sum to zero.
    fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let mut f = vec![0.0; self.n];
        if self.n > 1 {
            let b = DVector::from_iterator(self.n - 1, rhs[1..].iter().copied());
            let x = self.lu.solve(&b).ok_or(Error::Singular)?;
            f[1..].copy_from_slice(x.as_slice());
        }
        Ok(f)
    }
}

/// Resistance between the endpoints of every edge of `g`, in floating point.
fn endpoint_resistances(g: &MetrizedGraph) -> Result<Vec<f64>> {
    let n = g.vertex_count();
    let mut l = DMatrix::zeros(n, n);
    for (_, e) in g.edges() {
        if e.is_loop() {
            continue;
        }
        let c = 1.0 / to_f64(&e.length);
        let (a, b) = (e.tail.0, e.head.0);
        l[(a, a)] += c;
        l[(b, b)] += c;
        l[(a, b)] -= c;
        l[(b, a)] -= c;
    }
    let solver = GroundedSolver::new(&l);
    g.edges()
        .map(|(_, e)| {
            if e.is_loop() {
                return Ok(0.0);
            }
            let mut rhs = vec![0.0; n];
            rhs[e.tail.0] += 1.0;
            rhs[e.head.0] -= 1.0;
            let f = solver.solve(&rhs)?;
            Ok(f[e.tail.0] - f[e.head.0])
        })
        .collect()
}

/// Discrete Green function of `(g, d)` on a grid of mesh `h`.
pub struct NumericGreen {
    grid: Discretization,
    mass: Vec<f64>,
    solver: GroundedSolver,
}

impl NumericGreen {
    pub fn new(g: &MetrizedGraph, d: &RDivisor, h: &Rational) -> Result<Self> {
        let deg = to_f64(&d.degree());
        if d.degree() == Rational::from_integer((-2).into()) {
            return Err(Error::DegreeMinusTwo);
        }
        g.validate()?;
        d.check_on(g)?;
        let grid = discretize(g, h);
        let resistances = endpoint_resistances(g)?;
        let scale = 2.0 / (deg + 2.0);
        let mut mass = vec![0.0; grid.node_count];
        for v in g.vertices() {
            mass[grid.vertex_nodes[v.0]] += scale * (1.0 - g.valence(v) as f64 / 2.0);
        }
        for (i, nodes) in grid.edge_nodes.iter().enumerate() {
            let len = grid.lengths[i];
            let density = scale * (len - resistances[i]) / (len * len);
            let half = 0.5 * density * grid.piece_lengths[i];
            for w in nodes.windows(2) {
                mass[w[0]] += half;
                mass[w[1]] += half;
            }
        }
        for (p, c) in d.iter() {
            mass[grid.node_of(p)] += to_f64(c) / (deg + 2.0);
        }
        let solver = GroundedSolver::new(&grid.laplacian());
        Ok(NumericGreen { grid, mass, solver })
    }

    pub fn discretization(&self) -> &Discretization {
        &self.grid
    }

    pub fn total_mass(&self) -> f64 {
        self.mass.iter().sum()
    }

    /// Discrete `g(x, ·)` at every grid node.
    pub fn column(&self, x: &GraphPoint) -> Result<Vec<f64>> {
        let src = self.grid.node_of(x);
        let mut rhs: Vec<f64> = self.mass.iter().map(|m| -m).collect();
        rhs[src] += 1.0;
        let mut f = self.solver.solve(&rhs)?;
        let mean: f64 = f.iter().zip(&self.mass).map(|(a, m)| a * m).sum();
        for v in &mut f {
            *v -= mean;
        }
        Ok(f)
    }

    pub fn eval(&self, x: &GraphPoint, y: &GraphPoint) -> Result<f64> {
        Ok(self.column(x)?[self.grid.node_of(y)])
    }
}

pub fn numeric_green(
    g: &MetrizedGraph,
    d: &RDivisor,
    x: &GraphPoint,
    y: &GraphPoint,
    h: &Rational,
) -> Result<f64> {
    g.check_point(x)?;
    g.check_point(y)?;
    NumericGreen::new(g, d, h)?.eval(x, y)
}

pub fn numeric_resistance(g: &MetrizedGraph, p: &GraphPoint, q: &GraphPoint, h: &Rational) -> Result<f64> {
    g.validate()?;
    g.check_point(p)?;
    g.check_point(q)?;
    let grid = discretize(g, h);
    let solver = GroundedSolver::new(&grid.laplacian());
    let mut rhs = vec![0.0; grid.node_count];
    let (a, b) = (grid.node_of(p), grid.node_of(q));
    rhs[a] += 1.0;
    rhs[b] -= 1.0;
    let f = solver.solve(&rhs)?;
    Ok(f[a] - f[b])
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub h: f64,
    pub max_error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    /// Observed order between consecutive rows; `None` when both errors are
    /// under [`NOISE_FLOOR`].
    pub orders: Vec<Option<f64>>,
}

impl ConvergenceReport {
    /// Smallest observed order, ignoring pairs at the noise floor.
    pub fn min_order(&self) -> Option<f64> {
        self.orders.iter().flatten().copied().reduce(f64::min)
    }

    pub fn final_error(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.max_error)
    }
}

/// Maximum error of the discrete Green function against the exact one over
/// `probes`, for each mesh size in `hs`.
pub fn convergence_report(
    g: &MetrizedGraph,
    d: &RDivisor,
    probes: &[(GraphPoint, GraphPoint)],
    hs: &[Rational],
) -> Result<ConvergenceReport> {
    let exact = GreenSystem::new(g, d)?;
    let reference: Vec<f64> = probes
        .iter()
        .map(|(x, y)| exact.eval(x, y).map(|v| to_f64(&v)))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for h in hs {
        let numeric = NumericGreen::new(g, d, h)?;
        let mut max_error: f64 = 0.0;
        for ((x, y), r) in probes.iter().zip(&reference) {
            max_error = max_error.max((numeric.eval(x, y)? - r).abs());
        }
        rows.push(ConvergenceRow {
            h: to_f64(h),
            max_error,
        });
    }
    let orders = rows
        .windows(2)
        .map(|w| {
            if w[0].max_error < NOISE_FLOOR && w[1].max_error < NOISE_FLOOR {
                None
            } else {
                Some((w[0].max_error / w[1].max_error).ln() / (w[0].h / w[1].h).ln())
            }
        })
        .collect();
    Ok(ConvergenceReport { rows, orders })
}
