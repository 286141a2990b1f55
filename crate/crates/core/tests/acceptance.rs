//! Acceptance suite: one pass/fail line per criterion, non-zero exit on any
//! failure.

mod common;

use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{affine, all_dominant_connected, groupoid_violations, morphism, random_affine_system, rat, variety, AffineSystem};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use varcat::decider::{decide_system, validate_witness, DecideConfig, Verdict};
use varcat::document::{
    run_decide, run_orbit, validate_witness_doc, ArrowDoc, OrbitDoc, Overrides, PeriodicityDoc, SystemDocument,
    VerdictDocument, VerdictKind, VertexDoc, WitnessDoc,
};
use varcat::dynamics::{cyclic_periodicity, m_periodicity, orbit_bfs, MonoidAction, Periodicity};
use varcat::geometry::{
    compose, find_probe_pair, finite_order_test, image_closure, is_dominant, spread_out, Morphism, OrderCertificate,
    OrderConfig, OrderVerdict, Variety,
};
use varcat::poly::{Monomial, Polynomial, RationalField};
use varcat::quiver::System;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 7] = [
        ("curated verdict corpus", curated_corpus),
        ("randomized oracle equivalence", oracle_equivalence),
        ("finite-order test vs iteration", finite_order_vs_iteration),
        ("groupoid and torsor invariants", groupoid_invariants),
        ("elimination correctness", elimination_correctness),
        ("dynamics corpus", dynamics_corpus),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}; {secs:.2}s)", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {} {name}: FAIL ({detail})", i + 1);
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn vertex(name: &str, vars: &[&str], ideal: &[&str]) -> VertexDoc {
    VertexDoc {
        name: name.into(),
        vars: common::names(vars),
        ideal: common::names(ideal),
    }
}

fn arrow(name: &str, src: &str, dst: &str, coords: &[&str]) -> ArrowDoc {
    ArrowDoc {
        name: name.into(),
        src: src.into(),
        dst: dst.into(),
        coords: common::names(coords),
    }
}

fn document(vertices: Vec<VertexDoc>, arrows: Vec<ArrowDoc>) -> SystemDocument {
    SystemDocument {
        vertices,
        arrows,
        options: Default::default(),
        orbit: None,
    }
}

fn line_document(coords: &[(&str, &str)]) -> SystemDocument {
    document(
        vec![vertex("A", &["x"], &[])],
        coords.iter().map(|(n, c)| arrow(n, "A", "A", &[c])).collect(),
    )
}

fn affine_document(a: &AffineSystem) -> SystemDocument {
    let vertices = a
        .dims
        .iter()
        .enumerate()
        .map(|(i, &d)| vertex(common::VERTEX_NAMES[i], &common::vertex_vars(i, d), &[]))
        .collect();
    let arrows = a
        .arrows
        .iter()
        .enumerate()
        .map(|(k, (s, d, m))| {
            let coords = m.coord_strings(&common::vertex_vars(*s, a.dims[*s]));
            ArrowDoc {
                name: format!("f{k}"),
                src: common::VERTEX_NAMES[*s].into(),
                dst: common::VERTEX_NAMES[*d].into(),
                coords,
            }
        })
        .collect();
    document(vertices, arrows)
}

/// Expected outcome: a finite order, or infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Expect {
    Finite(usize),
    Infinite,
}

fn curated_documents() -> Vec<(&'static str, SystemDocument, Expect)> {
    vec![
        ("{A1; -x}", line_document(&[("f", "-x")]), Expect::Finite(2)),
        ("{A1; 0, -x}", line_document(&[("z", "0"), ("f", "-x")]), Expect::Finite(3)),
        ("{A1; -x, 1-x}", line_document(&[("f", "-x"), ("g", "1 - x")]), Expect::Infinite),
        ("{A1; x+1}", line_document(&[("t", "x + 1")]), Expect::Infinite),
        ("{A1; x^2}", line_document(&[("s", "x^2")]), Expect::Infinite),
        (
            "bridge A1 -> A1",
            document(
                vec![vertex("A", &["x"], &[]), vertex("B", &["u"], &[])],
                vec![arrow("b", "A", "B", &["x"])],
            ),
            Expect::Finite(3),
        ),
        ("identity only, one vertex", line_document(&[]), Expect::Finite(1)),
        (
            "identity only, three vertices",
            document(
                vec![
                    vertex("A", &["x"], &[]),
                    vertex("C", &["x", "y"], &["x^2 + y^2 - 1"]),
                    vertex("P", &["x", "y"], &[]),
                ],
                vec![],
            ),
            Expect::Finite(3),
        ),
    ]
}

/// Independent recomputation of the expected curated outcomes: brute-force
/// closure of affine generators, or symbolic iteration for `x^2`.
fn curated_oracle(doc: &SystemDocument) -> Option<Expect> {
    let dims: Vec<usize> = doc.vertices.iter().map(|v| v.vars.len()).collect();
    if doc.vertices.iter().any(|v| !v.ideal.is_empty()) {
        return Some(Expect::Finite(doc.vertices.len()));
    }
    let mut arrows = Vec::new();
    for a in &doc.arrows {
        let s = doc.vertices.iter().position(|v| v.name == a.src)?;
        let d = doc.vertices.iter().position(|v| v.name == a.dst)?;
        let vars: Vec<&str> = doc.vertices[s].vars.iter().map(String::as_str).collect();
        let p = common::poly(&a.coords[0], &vars);
        if p.total_degree() > 1 {
            // x ↦ x^2 has iterates x^(2^k), pairwise distinct.
            let line = affine("A", &["x"]);
            let f = morphism(&line, &line, &[&a.coords[0]]);
            let mut seen: Vec<Vec<Polynomial>> = vec![Morphism::identity(&line).coords().to_vec()];
            let mut cur = Morphism::identity(&line);
            for _ in 0..12 {
                cur = compose(&f, &cur).ok()?;
                if seen.iter().any(|c| c.as_slice() == cur.coords()) {
                    return None;
                }
                seen.push(cur.coords().to_vec());
            }
            return Some(Expect::Infinite);
        }
        let constant = p.coefficient(&Monomial::one(1));
        let slope = p.coefficient(&Monomial::var(1, 0));
        arrows.push((s, d, common::AffineMap { a: vec![vec![slope.to_integer()]], b: vec![constant.to_integer()] }));
    }
    let system = AffineSystem { dims, arrows };
    Some(match system.brute_force_listing(10_000) {
        Some(listing) => Expect::Finite(listing.iter().map(|(_, v)| v.len()).sum()),
        None => Expect::Infinite,
    })
}

fn check_verdict_document(doc: &SystemDocument, v: &VerdictDocument) -> Result<(), String> {
    match v.verdict {
        VerdictKind::Finite => {
            let listed: usize = v.hom_table.as_ref().map_or(0, |t| t.iter().map(|h| h.morphisms.len()).sum());
            ensure(v.order == Some(listed), || format!("order {:?} but {listed} listed", v.order))
        }
        VerdictKind::Infinite => {
            let system = doc.load().map_err(|e| e.to_string())?;
            let w = v.witness.as_ref().ok_or("missing witness")?;
            let text = serde_json::to_string(w).map_err(|e| e.to_string())?;
            let back: WitnessDoc = serde_json::from_str(&text).map_err(|e| e.to_string())?;
            validate_witness_doc(&system, &back, &DecideConfig::default()).map_err(|e| e.to_string())
        }
        VerdictKind::Aborted => Err(format!("aborted: {:?}", v.diagnostics.error)),
    }
}

fn curated_corpus() -> Outcome {
    let limit = Duration::from_secs(10);
    let mut slowest = Duration::ZERO;
    let cases = curated_documents();
    for (name, doc, expect) in &cases {
        let oracle = curated_oracle(doc).ok_or_else(|| format!("{name}: oracle failed"))?;
        ensure(oracle == *expect, || format!("{name}: oracle gives {oracle:?}, corpus says {expect:?}"))?;
        let start = Instant::now();
        let v = run_decide(doc, &Overrides::default()).map_err(|e| format!("{name}: {e}"))?;
        let took = start.elapsed();
        slowest = slowest.max(took);
        ensure(took <= limit, || format!("{name}: {took:?} exceeds {limit:?}"))?;
        let got = match v.verdict {
            VerdictKind::Finite => Expect::Finite(v.order.unwrap_or(0)),
            VerdictKind::Infinite => Expect::Infinite,
            VerdictKind::Aborted => return Err(format!("{name}: aborted {:?}", v.diagnostics.error)),
        };
        ensure(got == *expect, || format!("{name}: got {got:?}, expected {expect:?}"))?;
        check_verdict_document(doc, &v).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!("{} cases, slowest {:.2}s", cases.len(), slowest.as_secs_f64()))
}

fn random_systems(seed: u64, n: usize) -> Vec<AffineSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_affine_system(&mut rng)).collect()
}

fn oracle_equivalence() -> Outcome {
    let cfg = DecideConfig::default();
    let (mut finite, mut infinite, mut oracle_open) = (0, 0, 0);
    for (k, a) in random_systems(0x5eed, 40).iter().enumerate() {
        let s = a.build();
        let decision = decide_system(&s, &cfg).map_err(|e| format!("system {k}: {e}"))?;
        let oracle = a.brute_force_listing(10_000);
        if oracle.is_none() {
            oracle_open += 1;
        }
        match (oracle, &decision.verdict) {
            (Some(listing), Verdict::Finite { table }) => {
                ensure(table.canonical_listing() == listing, || format!("system {k}: hom tables differ"))?;
                finite += 1;
            }
            (Some(_), Verdict::Infinite { .. }) => return Err(format!("system {k}: oracle finite, decider infinite")),
            (None, Verdict::Finite { table }) => {
                return Err(format!("system {k}: oracle exceeded its cap, decider finite ({})", table.len()))
            }
            (None, Verdict::Infinite { witness }) => {
                validate_witness(witness, &s, &cfg).map_err(|e| format!("system {k}: {e}"))?;
                infinite += 1;
            }
        }
    }
    Ok(format!(
        "40 systems: {finite} finite with identical tables, {infinite} infinite with validated witnesses ({oracle_open} beyond oracle cap)"
    ))
}

/// Direct iteration: the first `(a, b)` with `f^a = f^b`, within `steps`.
fn first_repeat(f: &Morphism, steps: u64) -> Option<(u64, u64)> {
    let id = Morphism::identity(f.source());
    let mut powers: Vec<Vec<Polynomial>> = vec![id.coords().to_vec()];
    let mut cur = id;
    for b in 1..=steps {
        cur = compose(f, &cur).expect("endomorphism");
        if let Some(a) = powers.iter().position(|c| c.as_slice() == cur.coords()) {
            return Some((a as u64, b));
        }
        if cur.coords().iter().any(|c| c.total_degree() > 64 || c.len() > 400) {
            return None;
        }
        powers.push(cur.coords().to_vec());
    }
    None
}

fn endo_suite() -> Vec<(&'static str, Morphism)> {
    let l = affine("L", &["x"]);
    let p = affine("P", &["x", "y"]);
    let on_line = |c: &str| morphism(&l, &l, &[c]);
    let on_plane = |a: &str, b: &str| morphism(&p, &p, &[a, b]);
    vec![
        ("x", on_line("x")),
        ("-x", on_line("-x")),
        ("1 - x", on_line("1 - x")),
        ("x + 1", on_line("x + 1")),
        ("2*x", on_line("2*x")),
        ("-2*x + 3", on_line("-2*x + 3")),
        ("x/2 - 1", on_line("1/2*x - 1")),
        ("x^2", on_line("x^2")),
        ("0", on_line("0")),
        ("-x^3", on_line("-x^3")),
        ("(x-1)^3 + 1", on_line("x^3 - 3*x^2 + 3*x")),
        ("-(x-2) + 2", on_line("-(x - 2) + 2")),
        ("(y, x)", on_plane("y", "x")),
        ("(-y, x)", on_plane("-y", "x")),
        ("(-x, -y)", on_plane("-x", "-y")),
        ("(x + y, y)", on_plane("x + y", "y")),
        ("(y, -x - y)", on_plane("y", "-x - y")),
        ("(-y, x + y)", on_plane("-y", "x + y")),
        ("(y - 1, x + 1)", on_plane("y - 1", "x + 1")),
        ("(1 - y, x)", on_plane("1 - y", "x")),
        ("(x, -y)", on_plane("x", "-y")),
        ("(2*x, y/2)", on_plane("2*x", "1/2*y")),
        ("(x + 1, y)", on_plane("x + 1", "y")),
        ("(x^2, y)", on_plane("x^2", "y")),
        ("(x, 0)", on_plane("x", "0")),
        ("(x, y + x^2)", on_plane("x", "y + x^2")),
        ("(-x, -y + x^2)", on_plane("-x", "-y + x^2")),
        ("(y, -x + y^2)", on_plane("y", "-x + y^2")),
        ("(y, x^3)", on_plane("y", "x^3")),
        ("(x + y^2, y)", on_plane("x + y^2", "y")),
        ("(x + (y+1)^2, y)", on_plane("x + y^2 + 2*y + 1", "y")),
        ("(-x - 2, -y + (x+1)^2)", on_plane("-x - 2", "-y + x^2 + 2*x + 1")),
    ]
}

fn finite_order_vs_iteration() -> Outcome {
    let cfg = OrderConfig::default();
    let suite = endo_suite();
    let (mut finite, mut infinite, mut non_dominant) = (0, 0, 0);
    for (name, f) in &suite {
        let v = f.source().clone();
        let model = spread_out(&[&v], &[f]);
        let pair = find_probe_pair(&v, &model, 97, 400_000).map_err(|e| format!("{name}: {e}"))?;
        let repeat = first_repeat(f, 500);
        let cyclic_order = match repeat {
            Some((0, n)) => Some(n),
            _ => None,
        };
        match finite_order_test(f, &pair, &model, &cfg) {
            Ok(OrderVerdict::Finite { order }) => {
                ensure(cyclic_order == Some(order), || format!("{name}: Finite({order}) but iteration gives {repeat:?}"))?;
                finite += 1;
            }
            Ok(OrderVerdict::InfiniteOrder(cert)) => {
                ensure(cyclic_order.is_none(), || format!("{name}: infinite but iteration gives {repeat:?}"))?;
                if let OrderCertificate::PowerNotIdentity { exponent, .. } = &cert {
                    if let Some(power) = f.power_capped(*exponent, 20_000) {
                        ensure(!power.is_identity(), || format!("{name}: f^{exponent} is the identity"))?;
                    }
                }
                infinite += 1;
            }
            Err(varcat::geometry::GeometryError::NotDominant { .. }) => {
                ensure(cyclic_order.is_none() && !is_dominant(f), || format!("{name}: spurious NotDominant"))?;
                non_dominant += 1;
            }
            Err(e) => return Err(format!("{name}: {e}")),
        }
    }
    Ok(format!(
        "{} endomorphisms: {finite} finite, {infinite} infinite, {non_dominant} non-dominant, zero disagreements",
        suite.len()
    ))
}

fn groupoid_systems() -> Vec<(&'static str, System)> {
    let a = affine("A", &["x"]);
    let b = affine("B", &["u"]);
    let p = affine("P", &["x", "y"]);
    let c = variety("C", &["x", "y"], &["x^2 + y^2 - 1"]);
    vec![
        ("{A1; -x}", common::system(std::slice::from_ref(&a), &[("f", 0, 0, &["-x"])])),
        (
            "A <-> B",
            common::system(&[a.clone(), b.clone()], &[("s", 0, 1, &["x"]), ("t", 1, 0, &["-u"])]),
        ),
        (
            "A <-> B with translation",
            common::system(&[a, b], &[("s", 0, 1, &["1 - x"]), ("t", 1, 0, &["u"])]),
        ),
        ("{circle; rotation}", common::system(std::slice::from_ref(&c), &[("r", 0, 0, &["-y", "x"])])),
        ("{circle; reflection, rotation}", common::system(&[c], &[("m", 0, 0, &["x", "-y"]), ("r", 0, 0, &["-y", "x"])])),
        ("{A2; swap, sign}", common::system(std::slice::from_ref(&p), &[("s", 0, 0, &["y", "x"]), ("n", 0, 0, &["-x", "y"])])),
        ("{A2; order 3}", common::system(std::slice::from_ref(&p), &[("r", 0, 0, &["y", "-x - y"])])),
        ("{A2; nonlinear involution}", common::system(&[p], &[("h", 0, 0, &["-x", "-y + x^2"])])),
    ]
}

fn groupoid_invariants() -> Outcome {
    let cfg = DecideConfig::default();
    let mut checked = 0;
    let mut morphisms = 0;
    let random: Vec<(String, System)> = random_systems(0x5eed, 40)
        .iter()
        .enumerate()
        .map(|(k, a)| (format!("random system {k}"), a.build()))
        .collect();
    let curated = groupoid_systems().into_iter().map(|(n, s)| (n.to_string(), s));
    for (name, s) in curated.chain(random) {
        if !all_dominant_connected(&s) {
            continue;
        }
        let decision = decide_system(&s, &cfg).map_err(|e| format!("{name}: {e}"))?;
        if let Verdict::Finite { table } = &decision.verdict {
            let bad = groupoid_violations(table);
            ensure(bad.is_empty(), || format!("{name}: {}", bad.join("; ")))?;
            checked += 1;
            morphisms += table.len();
        }
    }
    ensure(checked >= 8, || format!("only {checked} finite groupoid verdicts"))?;
    Ok(format!("{checked} finite all-dominant connected verdicts, {morphisms} morphisms with verified inverses"))
}

fn random_map<R: Rng>(rng: &mut R, src: &Arc<Variety>, dst: &Arc<Variety>) -> Morphism {
    let n = src.nvars();
    let coords = (0..dst.nvars())
        .map(|_| {
            let terms = rng.random_range(1..=3);
            Polynomial::from_terms(
                n,
                (0..terms).map(|_| {
                    let e: Vec<u32> = (0..n).map(|_| rng.random_range(0..=2)).collect();
                    (Monomial::from_exponents(e), rat(rng.random_range(-3..=3)))
                }),
            )
        })
        .collect();
    Morphism::new(src.clone(), dst.clone(), coords).unwrap()
}

fn random_point<R: Rng>(rng: &mut R, n: usize) -> Vec<BigRational> {
    (0..n)
        .map(|_| BigRational::new(rng.random_range(-20..=20).into(), rng.random_range(1..=7).into()))
        .collect()
}

fn elimination_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xe11e);
    let spaces = [affine("S1", &["t"]), affine("S2", &["s", "t"]), affine("S3", &["r", "s", "t"])];
    let targets = [affine("T2", &["x", "y"]), affine("T3", &["x", "y", "z"])];
    let mut samples = 0;
    for k in 0..24 {
        let src = &spaces[k % 3];
        let dst = &targets[(k / 3) % 2];
        let f = random_map(&mut rng, src, dst);
        let z = image_closure(&f, "Z");
        for _ in 0..200 {
            let y = f.evaluate(&random_point(&mut rng, src.nvars())).map_err(|e| e.to_string())?;
            for g in z.ideal().generators() {
                let value = g.evaluate(&RationalField, &y).map_err(|e| e.to_string())?;
                ensure(value == rat(0), || format!("map {k}: {:?} does not vanish", g.display(dst.vars()).to_string()))?;
            }
            samples += 1;
        }
    }

    let t = affine("T", &["t"]);
    let plane = affine("P", &["x", "y"]);
    let cusp = variety("K", &["x", "y"], &["y^2 - x^3"]);
    let diagonal = variety("D", &["x", "y"], &["x - y"]);
    let parabola = variety("Q", &["x", "y"], &["y - x^2"]);
    let fixtures: Vec<(&str, Morphism, bool, Option<&Arc<Variety>>)> = vec![
        ("cusp parametrization into the plane", morphism(&t, &plane, &["t^2", "t^3"]), false, Some(&cusp)),
        ("cusp parametrization onto the cusp", morphism(&t, &cusp, &["t^2", "t^3"]), true, None),
        ("diagonal into the plane", morphism(&t, &plane, &["t", "t"]), false, Some(&diagonal)),
        ("diagonal onto the line", morphism(&t, &diagonal, &["t", "t"]), true, None),
        ("(x, xy)", morphism(&plane, &plane, &["x", "x*y"]), true, None),
        ("(x + y, (x + y)^2)", morphism(&plane, &plane, &["x + y", "x^2 + 2*x*y + y^2"]), false, Some(&parabola)),
        ("projection onto a line", morphism(&plane, &t, &["x - y"]), true, None),
    ];
    for (name, f, dominant, image) in &fixtures {
        ensure(is_dominant(f) == *dominant, || format!("{name}: dominance {}", !dominant))?;
        if let Some(expected) = image {
            let z = image_closure(f, "Z");
            ensure(z.ideal().same_as(expected.ideal()), || format!("{name}: wrong image closure"))?;
        }
    }
    Ok(format!("24 morphisms x 200 points ({samples} samples), {} dominance fixtures", fixtures.len()))
}

fn orbit_document(coords: &[(&str, &str)], point: &str, budget: Option<usize>) -> SystemDocument {
    let mut doc = line_document(coords);
    doc.orbit = Some(OrbitDoc {
        vertex: "A".into(),
        point: vec![point.into()],
        generators: None,
        components: None,
    });
    doc.options.orbit_budget = budget;
    doc
}

fn dynamics_corpus() -> Outcome {
    let o = Overrides::default();
    let r = run_orbit(&orbit_document(&[("f", "-x")], "1", None), &o).map_err(|e| e.to_string())?;
    ensure(r.orbit.complete && r.orbit.size == 2 && r.m_periodic == Some(true), || format!("{{-x}} at 1: {:?}", r.orbit))?;

    let r = run_orbit(&orbit_document(&[("s", "x^2")], "-1", None), &o).map_err(|e| e.to_string())?;
    ensure(r.orbit.complete && r.orbit.size == 2 && r.m_periodic == Some(false), || format!("{{x^2}} at -1: {:?}", r.orbit))?;
    ensure(
        r.cyclic[0].periodicity == PeriodicityDoc::Preperiodic { tail: 1, period: 1 },
        || format!("{{x^2}} at -1: {:?}", r.cyclic[0]),
    )?;

    let r = run_orbit(&orbit_document(&[("f", "-x"), ("g", "1 - x")], "0", Some(100)), &o).map_err(|e| e.to_string())?;
    let u = r.pair_probe.unbounded.as_ref().ok_or("{-x, 1-x} at 0: no unbounded witness")?;
    ensure(!r.orbit.complete && r.pair_probe.consistent, || "{-x, 1-x} at 0: orbit completed".into())?;
    let composite = common::poly("1 + x", &["x"]);
    let line = affine("A", &["x"]);
    let fg = compose(&morphism(&line, &line, &["1 - x"]), &morphism(&line, &line, &["-x"])).unwrap();
    ensure(u.f == "g∘f" && fg.coords()[0] == composite, || format!("{{-x, 1-x}} at 0: witness {u:?}"))?;

    // Consistency sweep: complete M-periodic orbits have periodic generators.
    let maps = ["-x", "1 - x", "x^2", "x^2 - 1", "0", "2 - x", "-x^3", "x^3"];
    let (mut complete, mut m_periodic) = (0, 0);
    for i in 0..maps.len() {
        for j in i..maps.len() {
            for x0 in -2..=2 {
                let gens = vec![morphism(&line, &line, &[maps[i]]), morphism(&line, &line, &[maps[j]])];
                let act = MonoidAction::new(line.clone(), gens, vec![rat(x0)]).map_err(|e| e.to_string())?;
                let report = orbit_bfs(&act, 8);
                if !report.complete {
                    continue;
                }
                complete += 1;
                if m_periodicity(&report).map_err(|e| e.to_string())? {
                    m_periodic += 1;
                    for f in act.generators() {
                        let p = cyclic_periodicity(f, act.base(), 8).map_err(|e| e.to_string())?;
                        ensure(matches!(p, Periodicity::Periodic { .. }), || {
                            format!("({}, {}) at {x0}: M-periodic but {p:?}", maps[i], maps[j])
                        })?;
                    }
                }
            }
        }
    }
    Ok(format!("3 corpus orbits exact; {complete} complete orbits swept, {m_periodic} M-periodic, all generators periodic"))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn determinism() -> Outcome {
    let o = Overrides::default();
    let mut docs: Vec<(String, SystemDocument)> =
        curated_documents().into_iter().map(|(n, d, _)| (n.to_string(), d)).collect();
    docs.extend(
        random_systems(0xd37, 12)
            .iter()
            .enumerate()
            .map(|(k, a)| (format!("random system {k}"), affine_document(a))),
    );
    let mut runs = 0;
    for (name, doc) in &docs {
        let first = run_decide(doc, &o).map_err(|e| format!("{name}: {e}"))?.to_json();
        let second = run_decide(doc, &o).map_err(|e| format!("{name}: {e}"))?.to_json();
        ensure(first == second, || format!("{name}: output differs between runs"))?;
        let summary = run_decide(doc, &o).map_err(|e| e.to_string())?.canonical_summary();
        for perm in permutations(doc.arrows.len()) {
            let mut permuted = doc.clone();
            permuted.arrows = perm.iter().map(|&i| doc.arrows[i].clone()).collect();
            let v = run_decide(&permuted, &o).map_err(|e| format!("{name}: {e}"))?;
            ensure(v.canonical_summary() == summary, || format!("{name}: arrow order {perm:?} changes the verdict"))?;
            runs += 1;
        }
    }
    let orbit_docs = [
        orbit_document(&[("f", "-x")], "1", None),
        orbit_document(&[("s", "x^2")], "-1", None),
        orbit_document(&[("f", "-x"), ("g", "1 - x")], "0", Some(100)),
    ];
    for doc in &orbit_docs {
        let a = run_orbit(doc, &o).map_err(|e| e.to_string())?.to_json();
        let b = run_orbit(doc, &o).map_err(|e| e.to_string())?.to_json();
        ensure(a == b, || "orbit report differs between runs".into())?;
        let mut reversed = doc.clone();
        reversed.arrows.reverse();
        let r = run_orbit(&reversed, &o).map_err(|e| e.to_string())?;
        let s = run_orbit(doc, &o).map_err(|e| e.to_string())?;
        ensure(
            (r.orbit.complete, r.orbit.size, r.m_periodic) == (s.orbit.complete, s.orbit.size, s.m_periodic),
            || "orbit summary depends on generator order".into(),
        )?;
    }
    Ok(format!(
        "{} documents byte-identical across runs, {runs} arrow orders agree, {} orbit reports stable",
        docs.len(),
        orbit_docs.len()
    ))
}
