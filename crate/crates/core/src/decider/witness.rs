use std::sync::Arc;

use crate::geometry::{
    action_on_points, compose, find_probe_at, is_dominant, is_identity_table, is_prime, iterate_mod, power_table,
    restrict_to, scaled_generators, spread_out, GeometryError, Morphism, OrderCertificate, PowerEvidence,
    TruncatedRing, Variety,
};
use crate::poly::{CompiledMap, EvalRing, IntegersMod};
use crate::quiver::{word_string, System};

use super::{DecideConfig, DecideError};

/// A subvariety of a vertex reachable by the recursion: either the vertex
/// itself, or the closure of the image of a locus under a word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Locus {
    Vertex(usize),
    Image { source: Box<Locus>, word: Vec<usize> },
}

impl Locus {
    /// The vertex whose ambient space contains the locus.
    pub fn ambient_vertex(&self, system: &System) -> usize {
        match self {
            Locus::Vertex(v) => *v,
            Locus::Image { word, .. } => system.arrow(word[0]).dst(),
        }
    }

    pub fn describe(&self, system: &System) -> String {
        match self {
            Locus::Vertex(v) => system.vertex(*v).name().to_string(),
            Locus::Image { source, word } => {
                let start = source.ambient_vertex(system);
                format!("im({} on {})", word_string(system, start, word), source.describe(system))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RecursionStep {
    /// Restriction to one path-equivalence class.
    Component { loci: Vec<Locus> },
    /// The system with one non-dominant arrow removed.
    WithoutArrow { word: Vec<usize> },
    /// The system induced on the image closure of that arrow.
    Image { locus: Locus },
}

/// Checkable evidence that the generated category is infinite. Words are in
/// the generators of the top-level system, outermost first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InfinitenessWitness {
    /// The endomorphism `word`, restricted to `locus`, has infinite order.
    InfiniteOrderEndo {
        locus: Locus,
        word: Vec<usize>,
        certificate: OrderCertificate,
    },
    /// Distinct endomorphisms `f`, `g` of `locus` act identically at both
    /// probes; `g` has order `g_order`, and `h = f∘g^(g_order-1)` has
    /// infinite order.
    KernelCollision {
        locus: Locus,
        f_word: Vec<usize>,
        g_word: Vec<usize>,
        g_order: u64,
        h_word: Vec<usize>,
        certificate: OrderCertificate,
    },
    SubsystemInfinite {
        path: Vec<RecursionStep>,
        inner: Box<InfinitenessWitness>,
    },
}

impl InfinitenessWitness {
    /// The innermost witness.
    pub fn core(&self) -> &InfinitenessWitness {
        match self {
            InfinitenessWitness::SubsystemInfinite { inner, .. } => inner.core(),
            w => w,
        }
    }

    pub(crate) fn nest(self, step: RecursionStep) -> InfinitenessWitness {
        match self {
            InfinitenessWitness::SubsystemInfinite { mut path, inner } => {
                path.insert(0, step);
                InfinitenessWitness::SubsystemInfinite { path, inner }
            }
            w => InfinitenessWitness::SubsystemInfinite {
                path: vec![step],
                inner: Box::new(w),
            },
        }
    }
}

/// Composite of a word of top-level arrows starting at `src`.
pub fn realize_word(system: &System, src: usize, word: &[usize]) -> Result<Morphism, DecideError> {
    let mut m = Morphism::identity(system.vertex(src));
    let mut at = src;
    for &a in word.iter().rev() {
        let arrow = system
            .arrows()
            .get(a)
            .ok_or_else(|| invalid(format!("arrow index {a} out of range")))?;
        if arrow.src() != at {
            return Err(invalid(format!("arrow {} does not start at {}", arrow.name(), system.vertex(at).name())));
        }
        m = compose(arrow.morphism(), &m)?;
        at = arrow.dst();
    }
    Ok(m)
}

pub fn realize_locus(system: &System, locus: &Locus) -> Result<Arc<Variety>, DecideError> {
    match locus {
        Locus::Vertex(v) => system
            .vertices()
            .get(*v)
            .cloned()
            .ok_or_else(|| invalid(format!("vertex index {v} out of range"))),
        Locus::Image { source, word } => {
            if word.is_empty() {
                return Err(invalid("image locus with empty word".into()));
            }
            let s = realize_locus(system, source)?;
            let start = source.ambient_vertex(system);
            let m = realize_word(system, start, word)?;
            let target = system.vertex(m_target(system, word));
            let restricted = restrict_to(&m, &s, target)?;
            Ok(Arc::new(crate::geometry::image_closure(&restricted, locus.describe(system))))
        }
    }
}

fn m_target(system: &System, word: &[usize]) -> usize {
    system.arrow(word[0]).dst()
}

/// The endomorphism `word` of the locus, restricted to it.
pub fn realize_endo(system: &System, locus: &Locus, z: &Arc<Variety>, word: &[usize]) -> Result<Morphism, DecideError> {
    let v = locus.ambient_vertex(system);
    let m = realize_word(system, v, word)?;
    if !word.is_empty() && m_target(system, word) != v {
        return Err(invalid("word is not an endomorphism of the locus vertex".into()));
    }
    Ok(restrict_to(&m, z, z)?)
}

fn invalid(msg: String) -> DecideError {
    DecideError::InvalidWitness(msg)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), DecideError> {
    if cond {
        Ok(())
    } else {
        Err(invalid(msg()))
    }
}

/// Re-derives every claim of the witness from the system alone.
pub fn validate_witness(w: &InfinitenessWitness, system: &System, cfg: &DecideConfig) -> Result<(), DecideError> {
    match w {
        InfinitenessWitness::SubsystemInfinite { path, inner } => {
            for step in path {
                match step {
                    RecursionStep::WithoutArrow { word } => ensure(
                        !word.is_empty() && word.iter().all(|&a| a < system.arrows().len()),
                        || "recursion step names an unknown arrow".into(),
                    )?,
                    RecursionStep::Image { locus } => {
                        realize_locus(system, locus)?;
                    }
                    RecursionStep::Component { loci } => {
                        for l in loci {
                            realize_locus(system, l)?;
                        }
                    }
                }
            }
            validate_witness(inner, system, cfg)
        }
        InfinitenessWitness::InfiniteOrderEndo {
            locus,
            word,
            certificate,
        } => {
            let z = realize_locus(system, locus)?;
            let h = realize_endo(system, locus, &z, word)?;
            validate_certificate(&h, certificate, cfg)
        }
        InfinitenessWitness::KernelCollision {
            locus,
            f_word,
            g_word,
            g_order,
            h_word,
            certificate,
        } => {
            let z = realize_locus(system, locus)?;
            let f = realize_endo(system, locus, &z, f_word)?;
            let g = realize_endo(system, locus, &z, g_word)?;
            ensure(f != g, || "colliding endomorphisms coincide".into())?;
            ensure(is_dominant(&f) && is_dominant(&g), || "colliding endomorphisms must be dominant".into())?;
            ensure(*g_order >= 1, || "order must be positive".into())?;
            let g_pow = g
                .power_capped(*g_order, cfg.power_term_cap)
                .ok_or_else(|| invalid("power of g exceeds the term cap".into()))?;
            ensure(g_pow.is_identity(), || format!("g does not have order dividing {g_order}"))?;
            let mut expect = f_word.clone();
            for _ in 1..*g_order {
                expect.extend_from_slice(g_word);
            }
            ensure(*h_word == expect, || "h is not f∘g^(order-1)".into())?;
            let OrderCertificate::PowerNotIdentity { primes, .. } = certificate else {
                return Err(invalid("collision certificate must be a power certificate".into()));
            };
            let d = spread_out(&[&z], &[&f, &g]);
            for p in [primes.0, primes.1] {
                ensure(is_prime(p) && d.admits_prime(p), || format!("{p} is not an admissible prime"))?;
                let probe = find_probe_at(&z, p, cfg.point_set_cap)?
                    .ok_or_else(|| invalid(format!("no smooth point at {p}")))?;
                ensure(
                    action_on_points(&f, &probe)? == action_on_points(&g, &probe)?,
                    || format!("actions differ at {p}"),
                )?;
            }
            let h = realize_endo(system, locus, &z, h_word)?;
            validate_certificate(&h, certificate, cfg)
        }
    }
}

/// Checks that the dominant endomorphism `h` has infinite order as claimed.
pub fn validate_certificate(h: &Morphism, cert: &OrderCertificate, cfg: &DecideConfig) -> Result<(), DecideError> {
    let z = h.source();
    ensure(is_dominant(h), || "certified endomorphism is not dominant".into())?;
    let d = spread_out(&[z], &[h]);
    let gens = scaled_generators(z);
    match cert {
        OrderCertificate::NotInjective { prime, a, b, image } => {
            let p = *prime;
            ensure(is_prime(p) && d.admits_prime(p), || format!("{p} is not an admissible prime"))?;
            ensure(a != b, || "collision points coincide".into())?;
            let n = z.nvars();
            ensure(a.len() == n && b.len() == n && image.len() == n, || "point arity".into())?;
            let e = a.first().map(|x| x.b.len()).unwrap_or(0);
            let well_formed = |pt: &[crate::geometry::TruncElem]| {
                pt.iter()
                    .all(|x| x.b.len() == e && (x.u as u64) < p * p && x.b.iter().all(|&c| (c as u64) < p))
            };
            ensure(well_formed(a) && well_formed(b), || "malformed ring elements".into())?;
            let ring = TruncatedRing::new(p, e);
            for pt in [a, b] {
                for g in &gens {
                    ensure(ring.is_zero(&g.evaluate(&ring, pt).map_err(GeometryError::from)?), || "point does not lie on the model".into())?;
                }
            }
            let map = CompiledMap::new(n, h.coords(), &ring).map_err(GeometryError::from)?;
            ensure(map.eval(&ring, a) == *image && map.eval(&ring, b) == *image, || {
                "points do not share the stated image".into()
            })
        }
        OrderCertificate::PowerNotIdentity {
            exponent,
            primes,
            evidence,
        } => {
            let n = *exponent;
            ensure(n >= 1, || "exponent must be positive".into())?;
            ensure(primes.0 != primes.1, || "probe primes must differ".into())?;
            for p in [primes.0, primes.1] {
                ensure(is_prime(p) && d.admits_prime(p), || format!("{p} is not an admissible prime"))?;
                let probe = find_probe_at(z, p, cfg.point_set_cap)?
                    .ok_or_else(|| invalid(format!("no smooth point at {p}")))?;
                let t = action_on_points(h, &probe)?;
                ensure(crate::geometry::injectivity_collision(&t).is_none(), || {
                    format!("action at {p} is not a permutation")
                })?;
                ensure(is_identity_table(&power_table(&t, n)), || {
                    format!("power {n} acts nontrivially at {p}")
                })?;
            }
            match evidence {
                PowerEvidence::NormalForm { coords } => {
                    let power = h
                        .power_capped(n, cfg.power_term_cap)
                        .ok_or_else(|| invalid("power exceeds the term cap".into()))?;
                    ensure(power.coords() == coords.as_slice(), || "stated normal form is wrong".into())?;
                    ensure(!power.is_identity(), || format!("power {n} is the identity"))
                }
                PowerEvidence::ModularMotion { prime, point, image } => {
                    let q = *prime;
                    ensure(is_prime(q) && d.admits_prime(q), || format!("{q} is not an admissible prime"))?;
                    ensure(point.len() == z.nvars() && point.iter().all(|&c| c < q), || "malformed point".into())?;
                    let field = IntegersMod::new(q);
                    let eqs = CompiledMap::new(z.nvars(), &gens, &field).map_err(GeometryError::from)?;
                    ensure(eqs.eval(&field, point).iter().all(|&c| c == 0), || {
                        "point does not lie on the model".into()
                    })?;
                    let map = CompiledMap::new(z.nvars(), h.coords(), &field).map_err(GeometryError::from)?;
                    let moved = iterate_mod(&map, &field, point, n);
                    ensure(moved == *image, || "stated image is wrong".into())?;
                    ensure(moved != *point, || "point is not moved".into())
                }
            }
        }
    }
}
