//! Admissible measures and Green functions on metrized graphs.
//!
//! For a connected metrized graph `G` and a divisor `D` with `deg D != -2`
//! there is a unique probability measure `μ = μ_(G,D)` and a unique symmetric
//! kernel `g = g_(G,D)` with `Δ_y g(x,y) = δ_x - μ`, `∫ g(x,y) μ(y) = 0`, and
//! `g(D,y) + g(y,y)` constant in `y`. That constant is `c(G,D)`, and
//! `e(G,D) = 2 deg(D) c(G,D) - g(D,D)`.
//!
//! Conventions:
//!
//! * The Laplacian is `Δf = -f'' dt - Σ_v (Σ outward derivatives of f at v) δ_v`.
//!   With this sign the Green function of a circle of length `l` based at `O`
//!   is `t²/(2l) - t/2 + l/12`.
//! * The admissible measure is built as `(δ_D + 2 μ_can) / (deg D + 2)` where
//!   the canonical measure is
//!   `μ_can = Σ_v (1 - valence(v)/2) δ_v + Σ_e dt / (ℓ_e + R_e)` and `R_e` is
//!   the resistance between the endpoints of `e` in `G - e`. The constancy of
//!   `g(D,y) + g(y,y)` is checked every time `c` is computed, which certifies
//!   the measure.
//!
//! The solver is vertex based: interior divisor points are first made into
//! vertices. On every edge `g(x,·)` is quadratic with second derivative equal
//! to the edge density (plus a unit kink at `x` when `x` lies on that edge),
//! so the vertex values of the kernel determine it everywhere.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, GraphPoint, MetrizedGraph, RDivisor, Relocation, VertexId};
use crate::linalg::Matrix;
use crate::rational::{int, Rational};
use crate::resistance::{effective_resistance, GroundedInverse};

/// Point masses plus a constant density on each edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleMeasure {
    atoms: BTreeMap<GraphPoint, Rational>,
    densities: Vec<Rational>,
}

impl AdmissibleMeasure {
    pub fn atoms(&self) -> &BTreeMap<GraphPoint, Rational> {
        &self.atoms
    }

    pub fn atom(&self, p: &GraphPoint) -> Rational {
        self.atoms.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    /// Mass per unit length on the interior of `e`.
    pub fn density(&self, e: EdgeId) -> &Rational {
        &self.densities[e.0]
    }

    pub fn densities(&self) -> &[Rational] {
        &self.densities
    }

    pub fn total_mass(&self, g: &MetrizedGraph) -> Rational {
        let atoms: Rational = self.atoms.values().sum();
        let spread: Rational = g
            .edges()
            .map(|(id, e)| self.density(id) * &e.length)
            .sum();
        atoms + spread
    }

    fn add_atom(&mut self, p: GraphPoint, mass: Rational) {
        let slot = self.atoms.entry(p).or_insert_with(Rational::zero);
        *slot += mass;
        self.atoms.retain(|_, m| !m.is_zero());
    }
}

fn check_degree(d: &RDivisor) -> Result<Rational> {
    let deg = d.degree();
    if deg == int(-2) {
        Err(Error::DegreeMinusTwo)
    } else {
        Ok(deg)
    }
}

pub fn canonical_measure(g: &MetrizedGraph) -> Result<AdmissibleMeasure> {
    g.validate()?;
    let inv = GroundedInverse::new(g)?;
    Ok(canonical_with(g, &inv))
}

fn canonical_with(g: &MetrizedGraph, inv: &GroundedInverse) -> AdmissibleMeasure {
    let mut atoms = BTreeMap::new();
    for v in g.vertices() {
        let mass = Rational::one() - Rational::new(g.valence(v).into(), 2.into());
        if !mass.is_zero() {
            atoms.insert(GraphPoint::Vertex(v), mass);
        }
    }
    // 1/(ℓ + R_e) with R_e = ℓ r / (ℓ - r), where r is the resistance between
    // the endpoints in G itself. Equals (ℓ - r)/ℓ², which is 0 for bridges
    // (r = ℓ) and 1/ℓ for loops (r = 0).
    let densities = g
        .edges()
        .map(|(_, e)| {
            let r = if e.is_loop() {
                Rational::zero()
            } else {
                inv.resistance(e.tail, e.head)
            };
            (&e.length - r) / (&e.length * &e.length)
        })
        .collect();
    AdmissibleMeasure { atoms, densities }
}

fn combine(canonical: AdmissibleMeasure, d: &RDivisor, deg: &Rational) -> AdmissibleMeasure {
    let denom = deg + int(2);
    let two = int(2);
    let mut mu = AdmissibleMeasure {
        atoms: canonical
            .atoms
            .into_iter()
            .map(|(p, m)| (p, m * &two / &denom))
            .collect(),
        densities: canonical
            .densities
            .into_iter()
            .map(|r| r * &two / &denom)
            .collect(),
    };
    for (p, c) in d.iter() {
        mu.add_atom(p.clone(), c / &denom);
    }
    mu
}

/// `μ_(G,D)` on `g` itself; divisor points inside edges carry their atoms there.
pub fn admissible_measure(g: &MetrizedGraph, d: &RDivisor) -> Result<AdmissibleMeasure> {
    let deg = check_degree(d)?;
    g.validate()?;
    d.check_on(g)?;
    let inv = GroundedInverse::new(g)?;
    Ok(combine(canonical_with(g, &inv), d, &deg))
}

/// Solved Green function `g_(G,D)`.
#[derive(Clone, Debug)]
pub struct GreenSystem {
    original: MetrizedGraph,
    divisor: RDivisor,
    degree: Rational,
    relocation: Relocation,
    refined: MetrizedGraph,
    local_divisor: Vec<(VertexId, Rational)>,
    measure: AdmissibleMeasure,
    /// `kernel[(v, w)] = g(v, w)` for vertices of the refined graph.
    kernel: Matrix,
}

pub fn green_system(g: &MetrizedGraph, d: &RDivisor) -> Result<GreenSystem> {
    GreenSystem::new(g, d)
}

impl GreenSystem {
    pub fn new(g: &MetrizedGraph, d: &RDivisor) -> Result<Self> {
        let degree = check_degree(d)?;
        g.validate()?;
        d.check_on(g)?;
        let interior: Vec<GraphPoint> = d
            .support()
            .filter(|p| matches!(p, GraphPoint::Edge { .. }))
            .cloned()
            .collect();
        let refined = g.subdivide_all(&interior)?;
        let graph = refined.graph;
        let local = d.relocated(&refined.relocation);
        let local_divisor = local
            .iter()
            .map(|(p, c)| match p {
                GraphPoint::Vertex(v) => (*v, c.clone()),
                GraphPoint::Edge { .. } => unreachable!("support was subdivided"),
            })
            .collect();

        let inv = GroundedInverse::new(&graph)?;
        let measure = combine(canonical_with(&graph, &inv), &local, &degree);

        // Lumped vertex masses: atoms plus half of each adjacent edge's mass.
        let n = graph.vertex_count();
        let half = Rational::new(1.into(), 2.into());
        let mut lumped: Vec<Rational> = graph
            .vertices()
            .map(|v| measure.atom(&GraphPoint::Vertex(v)))
            .collect();
        let mut kappa = Rational::zero();
        for (id, e) in graph.edges() {
            let rho = measure.density(id);
            if rho.is_zero() {
                continue;
            }
            let end_mass = rho * &e.length * &half;
            lumped[e.tail.0] += &end_mass;
            lumped[e.head.0] += &end_mass;
            kappa += rho * rho * &e.length * &e.length * &e.length / int(12);
        }

        // For a source vertex x the vertex values f solve
        //   L f = e_x - lumped,   Σ lumped_v f_v = kappa,
        // the second line being ∫ f μ = 0 after integrating the edge quadratics.
        let m = inv.matrix();
        let u = m.mul_vec(&lumped);
        let nu_u: Rational = lumped.iter().zip(&u).map(|(a, b)| a * b).sum();
        let shift = nu_u + kappa;
        let mut kernel = Matrix::zeros(n, n);
        for x in 0..n {
            for w in x..n {
                let value = &m[(w, x)] - &u[w] - &u[x] + &shift;
                kernel[(w, x)] = value.clone();
                kernel[(x, w)] = value;
            }
        }

        Ok(GreenSystem {
            original: g.clone(),
            divisor: d.clone(),
            degree,
            relocation: refined.relocation,
            refined: graph,
            local_divisor,
            measure,
            kernel,
        })
    }

    pub fn graph(&self) -> &MetrizedGraph {
        &self.original
    }

    pub fn divisor(&self) -> &RDivisor {
        &self.divisor
    }

    pub fn degree(&self) -> &Rational {
        &self.degree
    }

    /// The graph with every divisor point promoted to a vertex.
    pub fn refined_graph(&self) -> &MetrizedGraph {
        &self.refined
    }

    /// Carries points of [`GreenSystem::graph`] to [`GreenSystem::refined_graph`].
    pub fn relocation(&self) -> &Relocation {
        &self.relocation
    }

    /// `μ_(G,D)` expressed on the refined graph.
    pub fn measure(&self) -> &AdmissibleMeasure {
        &self.measure
    }

    /// `g_(G,D)(x, y)` for points of the original graph.
    pub fn eval(&self, x: &GraphPoint, y: &GraphPoint) -> Result<Rational> {
        self.original.check_point(x)?;
        self.original.check_point(y)?;
        Ok(self.eval_refined(&self.relocation.relocate(x), &self.relocation.relocate(y)))
    }

    /// `g_(G,D)(x, y)` for points of the refined graph.
    pub fn eval_refined(&self, x: &GraphPoint, y: &GraphPoint) -> Rational {
        match (x, y) {
            (GraphPoint::Vertex(v), y) | (y, GraphPoint::Vertex(v)) => self.kernel_at_vertex(*v, y),
            (
                GraphPoint::Edge { edge: ex, offset: s },
                GraphPoint::Edge { edge: ey, offset: t },
            ) => {
                let e = self.refined.edge(*ey).expect("edge of refined graph");
                let fa = self.kernel_at_vertex(e.tail, x);
                let fb = self.kernel_at_vertex(e.head, x);
                let mut value = self.edge_profile(*ey, &fa, &fb, t);
                if ex == ey {
                    let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
                    value += lo * (&e.length - hi) / &e.length;
                }
                value
            }
        }
    }

    fn kernel_at_vertex(&self, v: VertexId, y: &GraphPoint) -> Rational {
        match y {
            GraphPoint::Vertex(w) => self.kernel[(v.0, w.0)].clone(),
            GraphPoint::Edge { edge, offset } => {
                let e = self.refined.edge(*edge).expect("edge of refined graph");
                let fa = &self.kernel[(v.0, e.tail.0)];
                let fb = &self.kernel[(v.0, e.head.0)];
                self.edge_profile(*edge, fa, fb, offset)
            }
        }
    }

    /// Quadratic on `edge` with endpoint values `fa`, `fb` and second
    /// derivative equal to the edge density.
    fn edge_profile(&self, edge: EdgeId, fa: &Rational, fb: &Rational, t: &Rational) -> Rational {
        let l = &self.refined.edge(edge).expect("edge of refined graph").length;
        let rho = self.measure.density(edge);
        let linear = fa + (fb - fa) * t / l;
        if rho.is_zero() {
            linear
        } else {
            linear + rho * t * (t - l) / int(2)
        }
    }

    /// `∫ g(x, y) dμ(y)` for `x` on the refined graph; zero by construction.
    pub fn mean_against_measure(&self, x: &GraphPoint) -> Rational {
        let mut total = Rational::zero();
        for (p, m) in self.measure.atoms() {
            total += m * self.eval_refined(x, p);
        }
        for (id, e) in self.refined.edges() {
            let rho = self.measure.density(id);
            if rho.is_zero() {
                continue;
            }
            // g(x,·) is quadratic on each piece, so Simpson's rule is exact.
            let mut cuts = vec![Rational::zero(), e.length.clone()];
            if let GraphPoint::Edge { edge, offset } = x {
                if *edge == id {
                    cuts.insert(1, offset.clone());
                }
            }
            for w in cuts.windows(2) {
                let mid = (&w[0] + &w[1]) / int(2);
                let at = |t: &Rational| {
                    let p = self.refined.point_on_edge(id, t.clone()).expect("on edge");
                    self.eval_refined(x, &p)
                };
                let simpson = (&w[1] - &w[0]) / int(6) * (at(&w[0]) + at(&mid) * int(4) + at(&w[1]));
                total += rho * simpson;
            }
        }
        total
    }

    /// `g(D, y) + g(y, y)` at a point of the refined graph.
    pub fn c_profile(&self, y: &GraphPoint) -> Rational {
        let mut value = self.eval_refined(y, y);
        for (v, a) in &self.local_divisor {
            value += a * self.kernel_at_vertex(*v, y);
        }
        value
    }

    /// Points where constancy of `g(D,y) + g(y,y)` is checked: every vertex
    /// and three interior points per edge of the refined graph. The profile is
    /// quadratic on each edge, so agreement there means it is constant.
    pub fn constancy_samples(&self) -> Vec<GraphPoint> {
        let mut samples: Vec<GraphPoint> = self.refined.vertices().map(GraphPoint::Vertex).collect();
        for (id, e) in self.refined.edges() {
            for k in 1..=3 {
                let t = &e.length * Rational::new(k.into(), 4.into());
                samples.push(GraphPoint::Edge { edge: id, offset: t });
            }
        }
        samples
    }

    /// `c(G, D)`, after verifying that `g(D,y) + g(y,y)` really is constant.
    pub fn constant_c(&self) -> Result<Rational> {
        let mut samples = self.constancy_samples().into_iter();
        let first = samples.next().expect("graph has a vertex");
        let c = self.c_profile(&first);
        for y in samples {
            let other = self.c_profile(&y);
            if other != c {
                return Err(Error::ConstancyViolation(format!(
                    "{c} at {first:?} but {other} at {y:?}"
                )));
            }
        }
        Ok(c)
    }

    /// `g(D, D) = Σ_i Σ_j a_i a_j g(P_i, P_j)`.
    pub fn divisor_self_pairing(&self) -> Rational {
        let mut total = Rational::zero();
        for (v, a) in &self.local_divisor {
            for (w, b) in &self.local_divisor {
                total += a * b * &self.kernel[(v.0, w.0)];
            }
        }
        total
    }

    /// `g(O, D)` for a point of the original graph.
    pub fn pair_with_divisor(&self, o: &GraphPoint) -> Result<Rational> {
        self.original.check_point(o)?;
        let o = self.relocation.relocate(o);
        Ok(self
            .local_divisor
            .iter()
            .map(|(v, a)| a * self.kernel_at_vertex(*v, &o))
            .sum())
    }

    pub fn e_invariant(&self) -> Result<Rational> {
        let c = self.constant_c()?;
        Ok(int(2) * &self.degree * c - self.divisor_self_pairing())
    }

    /// `(deg D + 2) g(O, D) + r(O, D)` with `r(O, D) = Σ a_i r(O, P_i)`.
    pub fn e_via_basepoint(&self, o: &GraphPoint) -> Result<Rational> {
        let g_od = self.pair_with_divisor(o)?;
        let mut r_od = Rational::zero();
        for (p, a) in self.divisor.iter() {
            r_od += a * effective_resistance(&self.original, o, p)?;
        }
        Ok((&self.degree + int(2)) * g_od + r_od)
    }
}

pub fn green_eval(s: &GreenSystem, x: &GraphPoint, y: &GraphPoint) -> Result<Rational> {
    s.eval(x, y)
}

pub fn constant_c(s: &GreenSystem) -> Result<Rational> {
    s.constant_c()
}

pub fn e_invariant(g: &MetrizedGraph, d: &RDivisor) -> Result<Rational> {
    GreenSystem::new(g, d)?.e_invariant()
}

pub fn e_via_basepoint(g: &MetrizedGraph, d: &RDivisor, o: &GraphPoint) -> Result<Rational> {
    GreenSystem::new(g, d)?.e_via_basepoint(o)
}
