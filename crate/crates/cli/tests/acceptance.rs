//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

mod common;

use std::time::{Duration, Instant};

use mg_core::bounds::{
    omega_sq_lower_sharp, radius_sq_closed_form, reference_radius_sq, total_e, FibrationStats, RadiusHypotheses,
    ReferenceRegime,
};
use mg_core::compose::{
    attach_circle_e, chain_by_recursion, chain_e, chain_endpoint_green, join_e, join_green_diag, segment_invariants,
};
use mg_core::oracle::convergence_report;
use mg_core::rational::{int, ratio, Rational};
use mg_core::sample::{positive_rational, random_chain_fiber, random_divisor, random_graph, random_point};
use mg_core::{
    admissible_measure, effective_resistance, one_point_sum, FiberConfiguration, GraphPoint, GreenSystem,
    MetrizedGraph, RDivisor, VertexId,
};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Debug>(r: Result<T, E>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e:?}"))
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn v(i: usize) -> GraphPoint {
    GraphPoint::Vertex(VertexId(i))
}

/// ±p/q with 1 ≤ p, q ≤ 20.
fn small_signed(r: &mut ChaCha8Rng) -> Rational {
    let x = Rational::new(r.gen_range(1..=20i64).into(), r.gen_range(1..=20i64).into());
    if r.gen_bool(0.5) {
        -x
    } else {
        x
    }
}

/// `(2a_0 - 1)P_0 + 2a_1 P_1 + ... + (2a_n - 1)P_n` on a path.
fn chain_divisor(a: &[Rational]) -> RDivisor {
    let last = a.len() - 1;
    let mut d = RDivisor::new();
    for (i, ai) in a.iter().enumerate() {
        let end = i == 0 || i == last;
        d.add(v(i), int(2) * ai - if end { int(1) } else { int(0) });
    }
    d
}

fn segment_exactness() -> Outcome {
    let mut r = rng(1);
    let mut cases = 0;
    while cases < 100 {
        let (a, b) = (small_signed(&mut r), small_signed(&mut r));
        let s = &a + &b;
        if s.is_zero() {
            continue;
        }
        let l = positive_rational(&mut r, 20);
        let g = MetrizedGraph::segment(l.clone());
        let d = chain_divisor(&[a.clone(), b.clone()]);
        let sys = ok(GreenSystem::new(&g, &d), "solver")?;
        let s = &s;
        let e = (int(4) * &a * &b / s - int(1)) * &l;
        let gpp = &b * &b * &l / (s * s);
        let gqq = &a * &a * &l / (s * s);
        ensure!(ok(sys.e_invariant(), "e")? == e, "e mismatch at a={a}, b={b}, l={l}");
        ensure!(ok(sys.eval(&v(0), &v(0)), "g")? == gpp, "g(P,P) mismatch at a={a}, b={b}, l={l}");
        ensure!(ok(sys.eval(&v(1), &v(1)), "g")? == gqq, "g(Q,Q) mismatch at a={a}, b={b}, l={l}");
        let closed = ok(segment_invariants(&a, &b, &l), "closed form")?;
        ensure!(closed.e == e && closed.g_pp == gpp && closed.g_qq == gqq, "closed form disagrees");
        cases += 1;
    }
    Ok(format!("{cases} segments"))
}

fn circle_attachment() -> Outcome {
    let mut r = rng(2);
    for i in 0..50 {
        let g = random_graph(&mut r, 6, 3);
        let d = random_divisor(&mut r, &g, 3);
        let o = random_point(&mut r, &g);
        let l = positive_rational(&mut r, 12);
        let s = ok(one_point_sum(&g, &o, &MetrizedGraph::circle(l.clone()), &v(0)), "join")?;
        let joined = ok(GreenSystem::new(&s.graph, &d.relocated(&s.left)), "solver")?;
        let base = ok(GreenSystem::new(&g, &d), "solver")?;
        let deg = d.degree();
        let diff = ok(joined.e_invariant(), "e")? - ok(base.e_invariant(), "e")?;
        let want = &deg * &l / (int(3) * (&deg + int(2)));
        ensure!(diff == want, "graph {i}: difference {diff}, expected {want}");
        ensure!(ok(attach_circle_e(&ok(base.e_invariant(), "e")?, &deg, &l), "attach")? == ok(joined.e_invariant(), "e")?, "attach_circle_e disagrees");
    }
    Ok("50 graphs".into())
}

fn one_point_sums() -> Outcome {
    let mut r = rng(3);
    let mut cases = 0;
    while cases < 50 {
        let g1 = random_graph(&mut r, 4, 2);
        let g2 = random_graph(&mut r, 4, 2);
        let (x1, x2) = (random_point(&mut r, &g1), random_point(&mut r, &g2));
        let d1 = random_divisor(&mut r, &g1, 2);
        let d2 = random_divisor(&mut r, &g2, 2);
        let (deg1, deg2) = (d1.degree(), d2.degree());
        if &deg1 + &deg2 == int(-2) {
            continue;
        }
        let s = ok(one_point_sum(&g1, &x1, &g2, &x2), "join")?;
        let whole = ok(GreenSystem::new(&s.graph, &d1.relocated(&s.left).sum(&d2.relocated(&s.right))), "solver")?;
        let s1 = ok(GreenSystem::new(&g1, &d1), "solver")?;
        let s2 = ok(GreenSystem::new(&g2, &d2), "solver")?;
        let g1oo = ok(s1.eval(&x1, &x1), "g")?;
        let g2oo = ok(s2.eval(&x2, &x2), "g")?;
        let e1 = ok(s1.e_invariant(), "e")?;
        let e2 = ok(s2.e_invariant(), "e")?;
        // The displayed formula, written out independently of `join_e`.
        let (dd1, dd2) = (&deg1, &deg2);
        let e_want = &e1
            + &e2
            + (int(2) * dd2 * (dd1 + int(2)) * &g1oo + int(2) * dd1 * (dd2 + int(2)) * &g2oo) / (dd1 + dd2 + int(2));
        let e_got = ok(whole.e_invariant(), "e")?;
        ensure!(e_got == e_want, "case {cases}: e {e_got}, formula {e_want}");
        ensure!(ok(join_e(&e1, &e2, dd1, dd2, &g1oo, &g2oo), "join_e")? == e_want, "join_e disagrees");
        for _ in 0..3 {
            let p = random_point(&mut r, &g2);
            let rop = ok(effective_resistance(&g2, &x2, &p), "r")?;
            let gpp = ok(s2.eval(&p, &p), "g")?;
            let diag = ok(join_green_diag(dd1, dd2, &rop, &gpp, &g2oo, &g1oo), "diag")?;
            let pp = s.right.relocate(&p);
            ensure!(ok(whole.eval(&pp, &pp), "g")? == diag, "case {cases}: g(P,P) mismatch");
        }
        cases += 1;
    }
    Ok(format!("{cases} sums, 3 points each"))
}

fn chains() -> Outcome {
    let mut r = rng(4);
    let mut cases = 0;
    for n in 1..=6 {
        for _ in 0..10 {
            let lengths: Vec<Rational> = (0..n).map(|_| positive_rational(&mut r, 9)).collect();
            let a: Vec<Rational> = (0..=n).map(|_| positive_rational(&mut r, 9)).collect();
            let g = MetrizedGraph::path(&lengths);
            let d = chain_divisor(&a);
            let sys = ok(GreenSystem::new(&g, &d), "solver")?;
            let solver = ok(sys.e_invariant(), "e")?;
            let closed = ok(chain_e(&lengths, &a), "chain_e")?;
            let (rec, t) = ok(chain_by_recursion(&lengths, &a), "recursion")?;
            ensure!(solver == closed && closed == rec, "n={n}: solver {solver}, closed {closed}, recursion {rec}");
            ensure!(ok(sys.eval(&v(n), &v(n)), "g")? == t, "n={n}: endpoint Green value");
            ensure!(ok(chain_endpoint_green(&lengths, &a), "t_n")? == t, "n={n}: chain_endpoint_green");
            if n == 1 {
                let seg = ok(segment_invariants(&a[0], &a[1], &lengths[0]), "segment")?;
                ensure!(seg.e == closed && seg.g_qq == t, "n=1 does not reduce to the segment case");
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} chains, n = 1..6"))
}

/// δ vector from the chain layout directly: self-nodes are type 0, and the
/// node after component `a` has the smaller of the genera on its two sides.
fn chain_delta(f: &FiberConfiguration, genus: u64) -> Vec<u64> {
    let comps = f.components();
    let mut own: Vec<u64> = comps.iter().map(|c| c.genus as u64).collect();
    for n in f.nodes().iter().filter(|n| n.is_self_node()) {
        own[n.ends.0] += 1;
    }
    let mut delta = vec![0u64; genus as usize / 2 + 1];
    for n in f.nodes() {
        if n.is_self_node() {
            delta[0] += 1;
        } else {
            let left: u64 = own[..=n.ends.0.min(n.ends.1)].iter().sum();
            delta[left.min(genus - left) as usize] += 1;
        }
    }
    delta
}

fn chain_fibers() -> Outcome {
    let mut r = rng(5);
    let mut by_genus = [0usize; 9];
    for i in 0..150 {
        let unit = i % 2 == 0;
        let f = random_chain_fiber(&mut r, 5, 3, 8, unit);
        let genus = ok(f.fiber_genus(), "genus")?;
        by_genus[genus as usize] += 1;
        ensure!(f.is_chain_of_stable_components(), "fiber {i} not recognised as a chain");
        let solver = ok(f.fiber_e(), "fiber_e")?;
        let closed = ok(f.fiber_e_closed_form(), "closed form")?;
        ensure!(solver == closed, "fiber {i}: solver {solver}, closed form {closed}");
        let delta = ok(f.delta_vector(), "delta")?;
        ensure!(delta == chain_delta(&f, genus), "fiber {i}: delta {delta:?}");
        let omega: i64 = f.omega_coefficients().iter().sum();
        ensure!(omega == 2 * genus as i64 - 2, "fiber {i}: sum of omega {omega}");
        if unit {
            let d: Vec<Rational> = delta.iter().map(|&x| int(x as i64)).collect();
            ensure!(ok(total_e(genus, &d), "total_e")? == solver, "fiber {i}: δ-weighted sum differs");
        }
    }
    let spread: Vec<String> = (2..=8).map(|g| format!("g{g}:{}", by_genus[g])).collect();
    Ok(format!("150 fibers ({})", spread.join(" ")))
}

fn radius_pipeline() -> Outcome {
    let mut checked = 0;
    for g in 2..50u64 {
        for k in 0..=(g as usize / 2) {
            let mut delta = vec![int(0); g as usize / 2 + 1];
            delta[k] = int(1);
            let closed = ok(radius_sq_closed_form(g, &delta, RadiusHypotheses::default()), "closed")?.radius_sq;
            let sharp = ok(omega_sq_lower_sharp(g, &delta), "sharp")?;
            let weak = ok(total_e(g, &delta), "total_e")?;
            let pipeline = int(g as i64 - 1) * (sharp - weak);
            ensure!(closed == pipeline, "g={g}, δ_{k}: {closed} vs {pipeline}");
            checked += 1;
        }
    }
    let r2 = ok(radius_sq_closed_form(2, &[int(0), int(1)], RadiusHypotheses::default()), "g=2")?.radius_sq;
    ensure!(r2 == ratio(2, 5), "g=2, δ=(0,1): {r2}");
    Ok(format!("{checked} unit vectors; g=2, δ=(0,1) gives {r2}"))
}

fn reference_values() -> Outcome {
    let s0 = ok(omega_sq_lower_sharp(2, &[int(1), int(0)]), "sharp")?;
    let s1 = ok(omega_sq_lower_sharp(2, &[int(0), int(1)]), "sharp")?;
    ensure!((s0.clone(), s1.clone()) == (ratio(1, 5), ratio(7, 5)), "sharp coefficients ({s0}, {s1})");
    let stats = ok(FibrationStats::new(2, int(0), vec![int(1), int(0)]), "stats")?;
    let b = ok(reference_radius_sq(&stats, ReferenceRegime::GenusTwo), "genus 2")?;
    ensure!(b == ratio(1, 5) - ratio(5, 27) && b == ratio(2, 135), "genus-2 δ_0 radicand {b}");
    for g in [2u64, 3, 5] {
        let mut delta = vec![int(0); g as usize / 2 + 1];
        let smooth = ok(FibrationStats::new(g, int(0), delta.clone()), "stats")?;
        let a = ok(reference_radius_sq(&smooth, ReferenceRegime::Smooth), "smooth")?;
        ensure!(a == int(12 * (g as i64 - 1)), "smooth g={g}: {a}");
        delta[0] = int(1);
        let irr = ok(FibrationStats::new(g, int(0), delta.clone()), "stats")?;
        let c = ok(reference_radius_sq(&irr, ReferenceRegime::Irreducible), "irreducible")?;
        let gm1 = int(g as i64 - 1);
        let want = &gm1 * &gm1 * &gm1 / (int(3 * g as i64) * int(2 * g as i64 + 1));
        ensure!(c == want, "irreducible g={g}: {c} vs {want}");
        let pipeline = &gm1 * (ok(omega_sq_lower_sharp(g, &delta), "sharp")? - ok(total_e(g, &delta), "e")?);
        ensure!(pipeline == want, "irreducible g={g} does not follow from the pipeline");
    }
    Ok("(1/5, 7/5), 2/135, 12(g-1) and (g-1)³/(3g(2g+1)) at g = 2, 3, 5".into())
}

fn scale(p: &GraphPoint, k: &Rational) -> GraphPoint {
    match p {
        GraphPoint::Vertex(v) => GraphPoint::Vertex(*v),
        GraphPoint::Edge { edge, offset } => GraphPoint::Edge {
            edge: *edge,
            offset: offset * k,
        },
    }
}

fn property_suite() -> Outcome {
    let mut r = rng(8);
    let mut loops = 0;
    let mut multi = 0;
    for i in 0..200 {
        let g = random_graph(&mut r, 8, 4);
        loops += g.edges().any(|(_, e)| e.is_loop()) as usize;
        multi += g
            .edges()
            .any(|(a, e)| g.edges().any(|(b, f)| a < b && !e.is_loop() && (e.tail, e.head) == (f.tail, f.head)))
            as usize;
        let d = random_divisor(&mut r, &g, 3);
        let sys = ok(GreenSystem::new(&g, &d), "solver")?;
        let mu = ok(admissible_measure(&g, &d), "measure")?;
        ensure!(mu.total_mass(&g) == int(1), "graph {i}: mass {}", mu.total_mass(&g));
        let refined_mass = sys.measure().total_mass(sys.refined_graph());
        ensure!(refined_mass == int(1), "graph {i}: refined mass {refined_mass}");

        let pts: Vec<GraphPoint> = (0..4).map(|_| random_point(&mut r, &g)).collect();
        for x in &pts {
            for y in &pts {
                let gxy = ok(sys.eval(x, y), "g")?;
                ensure!(gxy == ok(sys.eval(y, x), "g")?, "graph {i}: asymmetric");
                let rxy = ok(effective_resistance(&g, x, y), "r")?;
                let via_green = ok(sys.eval(x, x), "g")? - int(2) * &gxy + ok(sys.eval(y, y), "g")?;
                ensure!(rxy == via_green, "graph {i}: r {rxy} vs {via_green}");
            }
            let local = sys.relocation().relocate(x);
            let mean = sys.mean_against_measure(&local);
            ensure!(mean.is_zero(), "graph {i}: mean {mean}");
        }

        let c = ok(sys.constant_c(), "c")?;
        for y in &pts {
            let cy = sys.c_profile(&sys.relocation().relocate(y));
            ensure!(cy == c, "graph {i}: c({y:?}) = {cy}, expected {c}");
        }

        let e = ok(sys.e_invariant(), "e")?;
        for _ in 0..5 {
            let o = random_point(&mut r, &g);
            let eo = ok(sys.e_via_basepoint(&o), "e basepoint")?;
            ensure!(eo == e, "graph {i}: basepoint form {eo} vs {e}");
        }

        let cut = random_point(&mut r, &g);
        let sub = ok(g.subdivide_at(&cut), "subdivide")?;
        let fine = ok(GreenSystem::new(&sub.graph, &d.relocated(&sub.relocation)), "solver")?;
        ensure!(ok(fine.e_invariant(), "e")? == e, "graph {i}: e changes under subdivision");
        let (x, y) = (&pts[0], &pts[1]);
        let moved = ok(fine.eval(&sub.relocation.relocate(x), &sub.relocation.relocate(y)), "g")?;
        ensure!(moved == ok(sys.eval(x, y), "g")?, "graph {i}: g changes under subdivision");

        let k = positive_rational(&mut r, 5);
        let mut dk = RDivisor::new();
        for (p, a) in d.iter() {
            dk.add(scale(p, &k), a.clone());
        }
        let big = ok(GreenSystem::new(&g.scaled(&k), &dk), "solver")?;
        ensure!(ok(big.e_invariant(), "e")? == &e * &k, "graph {i}: e not covariant");
        ensure!(ok(big.constant_c(), "c")? == &c * &k, "graph {i}: c not covariant");
        ensure!(
            ok(big.eval(&scale(x, &k), &scale(y, &k)), "g")? == ok(sys.eval(x, y), "g")? * &k,
            "graph {i}: g not covariant"
        );
    }
    Ok(format!("200 graphs ({loops} with loops, {multi} with parallel edges)"))
}

fn grid_probes(g: &MetrizedGraph) -> Vec<(GraphPoint, GraphPoint)> {
    let mut pts: Vec<GraphPoint> = g.vertices().map(GraphPoint::Vertex).collect();
    for (id, e) in g.edges() {
        for q in [ratio(1, 4), ratio(1, 2)] {
            pts.push(GraphPoint::Edge {
                edge: id,
                offset: &e.length * q,
            });
        }
    }
    let mut probes = Vec::new();
    for x in &pts {
        for y in &pts {
            probes.push((x.clone(), y.clone()));
        }
    }
    probes
}

fn oracle_convergence() -> Outcome {
    let segment = MetrizedGraph::segment(int(1));
    let seg_d = RDivisor::new().with(v(0), int(1)).with(v(1), int(1));
    let circle = MetrizedGraph::circle(int(1));
    let circle_d = RDivisor::new().with(v(0), int(1));
    let mut theta = MetrizedGraph::with_vertices(2);
    for _ in 0..3 {
        theta.add_edge(VertexId(0), VertexId(1), int(1));
    }
    let theta_d = seg_d.clone();
    let mut fiber = FiberConfiguration::new();
    let c0 = fiber.add_component("C0", 1);
    let c1 = fiber.add_component("C1", 0);
    let c2 = fiber.add_component("C2", 1);
    fiber.add_node("n01", c0, c1);
    fiber.add_node("n12", c1, c2);
    fiber.add_node("s1", c1, c1);
    ensure!(ok(fiber.fiber_genus(), "genus")? == 3, "test fiber is not genus 3");
    let fiber_graph = fiber.configuration_graph();
    let fiber_d = fiber.omega_divisor();

    let hs = [ratio(1, 8), ratio(1, 16), ratio(1, 32), ratio(1, 64)];
    let mut notes = Vec::new();
    for (name, g, d) in [
        ("segment", &segment, &seg_d),
        ("circle", &circle, &circle_d),
        ("theta", &theta, &theta_d),
        ("g=3 fiber", &fiber_graph, &fiber_d),
    ] {
        let rep = ok(convergence_report(g, d, &grid_probes(g), &hs), name)?;
        for w in rep.rows.windows(2) {
            ensure!(
                w[1].max_error <= w[0].max_error.max(1e-12),
                "{name}: error grew from {:e} to {:e}",
                w[0].max_error,
                w[1].max_error
            );
        }
        let order = rep.min_order();
        if let Some(p) = order {
            ensure!(p >= 1.0, "{name}: observed order {p:.3}");
        }
        ensure!(rep.final_error() < 1e-3, "{name}: final error {:e}", rep.final_error());
        notes.push(match order {
            Some(p) => format!("{name} order {p:.2} err {:.1e}", rep.final_error()),
            None => format!("{name} exact on grid (err {:.1e})", rep.final_error()),
        });
    }
    Ok(notes.join(", "))
}

fn cli_golden() -> Outcome {
    let mut bad = common::golden_mismatches();
    bad.extend(common::error_mismatches());
    ensure!(bad.is_empty(), "{}", bad.join("; "));
    Ok(format!(
        "{} reports byte-identical, {} error cases",
        common::REPORTS.len(),
        common::ERRORS.len()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("segment exactness", segment_exactness, Some(Duration::from_secs(5))),
        ("circle attachment", circle_attachment, None),
        ("one-point sums", one_point_sums, None),
        ("chains", chains, None),
        ("chain fibers", chain_fibers, None),
        ("radius pipeline identity", radius_pipeline, None),
        ("reference values", reference_values, None),
        ("property suite", property_suite, Some(Duration::from_secs(60))),
        ("oracle convergence", oracle_convergence, None),
        ("CLI golden files", cli_golden, None),
    ];
    let mut failures = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = check();
        let elapsed = start.elapsed();
        if let (Ok(_), Some(limit)) = (&outcome, limit) {
            if elapsed > *limit {
                outcome = Err(format!("took {elapsed:.2?}, limit {limit:?}"));
            }
        }
        let (status, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {status} {name}: {detail} [{elapsed:.2?}]", i + 1);
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
