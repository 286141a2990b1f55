//! Decides finiteness of the category generated by a system.
//!
//! Path-equivalence classes are decided separately. Inside a class with a
//! non-dominant arrow `f: A -> B`, the system without `f` and the system
//! induced on the image closure of `f` are decided recursively and the full
//! closure is then bounded. Classes of dominant arrows are enumerated while
//! every new endomorphism is certified to have finite order and to act
//! distinctly on the two mod-`p` probes of its vertex.

mod witness;

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::geometry::{
    action_on_points, compose, find_probe_pair, finite_order_with_tables, image_closure, is_dominant,
    restrict_to, spread_out, GeometryError, Morphism, OrderConfig, OrderVerdict, ProbePair, Variety,
};
use crate::quiver::{bfs_closure, path_components, word_string, Closure, HomTable, QuiverError, System};

pub use witness::{
    realize_endo, realize_locus, realize_word, validate_certificate, validate_witness, InfinitenessWitness, Locus,
    RecursionStep,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecideConfig {
    pub prime_bound: u64,
    pub point_set_cap: usize,
    /// Largest hom table enumerated for a class of dominant arrows.
    pub closure_cap: usize,
    pub power_term_cap: usize,
}

impl Default for DecideConfig {
    fn default() -> Self {
        DecideConfig {
            prime_bound: 97,
            point_set_cap: 50_000,
            closure_cap: 100_000,
            power_term_cap: 20_000,
        }
    }
}

impl DecideConfig {
    fn order_config(&self) -> OrderConfig {
        OrderConfig {
            power_term_cap: self.power_term_cap,
            prime_bound: self.prime_bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("closure exceeded the configured cap of {cap} morphisms")]
    ClosureCapExceeded { cap: usize },
    #[error("internal bound of {cap} morphisms exceeded; this is a bug")]
    InternalCapExceeded { cap: usize },
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
}

impl From<QuiverError> for DecideError {
    fn from(e: QuiverError) -> Self {
        match e {
            QuiverError::Geometry(g) => DecideError::Geometry(g),
            other => DecideError::InvalidWitness(other.to_string()),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Finite { table: HomTable },
    Infinite { witness: InfinitenessWitness },
}

impl Verdict {
    pub fn order(&self) -> Option<usize> {
        match self {
            Verdict::Finite { table } => Some(table.len()),
            Verdict::Infinite { .. } => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Verdict::Finite { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeReport {
    pub locus: Locus,
    pub primes: (u64, u64),
    pub points: (Vec<u64>, Vec<u64>),
    pub sizes: (usize, usize),
}

/// One enumerated class of dominant arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScopeReport {
    pub d: BigInt,
    pub probes: Vec<ProbeReport>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Diagnostics {
    pub scopes: Vec<ScopeReport>,
}

#[derive(Clone, Debug)]
pub struct Decision {
    pub verdict: Verdict,
    pub diagnostics: Diagnostics,
}

/// How the arrows and vertices of a recursive system sit in the top level.
#[derive(Clone, Debug)]
struct Scope {
    words: Vec<Vec<usize>>,
    loci: Vec<Locus>,
}

impl Scope {
    fn top(system: &System) -> Self {
        Scope {
            words: (0..system.arrows().len()).map(|a| vec![a]).collect(),
            loci: (0..system.vertices().len()).map(Locus::Vertex).collect(),
        }
    }

    fn flatten(&self, word: &[usize]) -> Vec<usize> {
        word.iter().flat_map(|&a| self.words[a].iter().copied()).collect()
    }

    fn restrict(&self, vertices: &[usize], arrows: &[usize]) -> Scope {
        Scope {
            words: arrows.iter().map(|&a| self.words[a].clone()).collect(),
            loci: vertices.iter().map(|&v| self.loci[v].clone()).collect(),
        }
    }
}

enum Local {
    Finite(HomTable),
    Infinite(InfinitenessWitness),
}

/// Point tables on the two probes, mapped to the table entry realizing them.
type ActionIndex = HashMap<(Vec<u32>, Vec<u32>), usize>;

pub fn decide_system(system: &System, cfg: &DecideConfig) -> Result<Decision, DecideError> {
    let mut diagnostics = Diagnostics::default();
    let local = decide_scope(system, &Scope::top(system), cfg, &mut diagnostics, 0)?;
    let verdict = match local {
        Local::Finite(table) => Verdict::Finite { table },
        Local::Infinite(witness) => Verdict::Infinite { witness },
    };
    Ok(Decision { verdict, diagnostics })
}

/// Decides a system all of whose arrows are dominant and whose vertices are
/// path-equivalent.
pub fn decide_dominant_component(system: &System, cfg: &DecideConfig) -> Result<Decision, DecideError> {
    let mut diagnostics = Diagnostics::default();
    let local = decide_dominant(system, &Scope::top(system), cfg, &mut diagnostics)?;
    let verdict = match local {
        Local::Finite(table) => Verdict::Finite { table },
        Local::Infinite(witness) => Verdict::Infinite { witness },
    };
    Ok(Decision { verdict, diagnostics })
}

fn decide_scope(
    system: &System,
    scope: &Scope,
    cfg: &DecideConfig,
    diag: &mut Diagnostics,
    depth: usize,
) -> Result<Local, DecideError> {
    let report = path_components(system);
    if report.classes.len() == 1 {
        return decide_connected(system, scope, cfg, diag, depth);
    }
    log::info!("{:depth$}{} path classes", "", report.classes.len());
    let mut largest = 1usize;
    let mut total = 0usize;
    for (c, class) in report.classes.iter().enumerate() {
        let arrows = report.core_arrows_of(system, c);
        let sub = system.restrict(class, &arrows);
        let sub_scope = scope.restrict(class, &arrows);
        match decide_connected(&sub, &sub_scope, cfg, diag, depth + 1)? {
            Local::Infinite(w) => {
                return Ok(Local::Infinite(w.nest(RecursionStep::Component {
                    loci: sub_scope.loci.clone(),
                })))
            }
            Local::Finite(t) => {
                largest = largest.max(t.len());
                total = total.saturating_add(t.len());
            }
        }
    }
    let bridges = report.bridge_arrows.len();
    let mut cap: usize = 0;
    let mut term = total;
    for _ in 0..report.classes.len() {
        cap = cap.saturating_add(term);
        term = term.saturating_mul(bridges).saturating_mul(largest);
    }
    close(system, cap).map(Local::Finite)
}

fn close(system: &System, cap: usize) -> Result<HomTable, DecideError> {
    match bfs_closure::<(), DecideError>(system, cap.saturating_add(1), |_, _| Ok(None))? {
        Closure::Complete(t) if t.len() <= cap => Ok(t),
        _ => Err(DecideError::InternalCapExceeded { cap }),
    }
}

fn decide_connected(
    system: &System,
    scope: &Scope,
    cfg: &DecideConfig,
    diag: &mut Diagnostics,
    depth: usize,
) -> Result<Local, DecideError> {
    let Some(fi) = (0..system.arrows().len()).find(|&a| !is_dominant(system.arrow(a).morphism())) else {
        return decide_dominant(system, scope, cfg, diag);
    };
    let f = system.arrow(fi);
    let (a, b) = (f.src(), f.dst());
    log::info!("{:depth$}non-dominant arrow {}", "", f.name());

    let reduced = system.without_arrow(fi);
    let all: Vec<usize> = (0..system.vertices().len()).collect();
    let kept: Vec<usize> = (0..system.arrows().len()).filter(|&x| x != fi).collect();
    let reduced_scope = scope.restrict(&all, &kept);
    let reduced_table = match decide_scope(&reduced, &reduced_scope, cfg, diag, depth + 1)? {
        Local::Infinite(w) => {
            return Ok(Local::Infinite(w.nest(RecursionStep::WithoutArrow {
                word: scope.words[fi].clone(),
            })))
        }
        Local::Finite(t) => t,
    };

    let locus = Locus::Image {
        source: Box::new(scope.loci[a].clone()),
        word: scope.words[fi].clone(),
    };
    let z: Arc<Variety> = Arc::new(image_closure(f.morphism(), format!("im({})", f.name())));
    let mut induced = System::new(vec![z.clone()])?;
    let mut induced_words = Vec::new();
    let mut seen: Vec<Vec<crate::poly::Polynomial>> = Vec::new();
    for &gi in reduced_table.hom(b, a) {
        let g = reduced_table.entry(gi);
        let fg = compose(f.morphism(), &g.morphism)?;
        let r = restrict_to(&fg, &z, &z)?;
        if seen.iter().any(|c| c.as_slice() == r.coords()) {
            continue;
        }
        seen.push(r.coords().to_vec());
        let name = format!("{}∘{}", f.name(), word_string(&reduced, b, &g.word));
        induced.add_arrow(name, 0, 0, r)?;
        let mut word = scope.words[fi].clone();
        word.extend(reduced_scope.flatten(&g.word));
        induced_words.push(word);
    }
    let induced_scope = Scope {
        words: induced_words,
        loci: vec![locus.clone()],
    };
    let induced_table = match decide_scope(&induced, &induced_scope, cfg, diag, depth + 1)? {
        Local::Infinite(w) => return Ok(Local::Infinite(w.nest(RecursionStep::Image { locus }))),
        Local::Finite(t) => t,
    };

    let n = system.vertices().len();
    let mut cap = reduced_table.len();
    for v in 0..n {
        for w in 0..n {
            let through = reduced_table
                .hom(v, a)
                .len()
                .saturating_mul(induced_table.len() + 1)
                .saturating_mul(reduced_table.hom(b, w).len());
            cap = cap.saturating_add(through);
        }
    }
    close(system, cap).map(Local::Finite)
}

struct VertexProbe {
    pair: ProbePair,
}

fn decide_dominant(
    system: &System,
    scope: &Scope,
    cfg: &DecideConfig,
    diag: &mut Diagnostics,
) -> Result<Local, DecideError> {
    let vertices: Vec<&Variety> = system.vertices().iter().map(|v| v.as_ref()).collect();
    let maps: Vec<&Morphism> = system.arrows().iter().map(|a| a.morphism()).collect();
    let model = spread_out(&vertices, &maps);
    let mut probes = Vec::new();
    let mut report = ScopeReport {
        d: model.d().clone(),
        probes: Vec::new(),
    };
    for (v, variety) in system.vertices().iter().enumerate() {
        let pair = find_probe_pair(variety, &model, cfg.prime_bound, cfg.point_set_cap)?;
        log::info!(
            "probes for {}: primes {:?}, {} and {} points",
            variety.name(),
            pair.primes(),
            pair.first.len(),
            pair.second.len()
        );
        report.probes.push(ProbeReport {
            locus: scope.loci[v].clone(),
            primes: pair.primes(),
            points: (pair.first.point().to_vec(), pair.second.point().to_vec()),
            sizes: (pair.first.len(), pair.second.len()),
        });
        probes.push(VertexProbe { pair });
    }
    diag.scopes.push(report);

    let order_cfg = cfg.order_config();
    let mut orders: HashMap<usize, u64> = HashMap::new();
    let mut actions: Vec<ActionIndex> = vec![HashMap::new(); system.vertices().len()];
    let outcome = bfs_closure(system, cfg.closure_cap, |table, j| {
        let entry = table.entry(j);
        if entry.src != entry.dst {
            return Ok(None);
        }
        let v = entry.src;
        let pair = &probes[v].pair;
        let t0 = action_on_points(&entry.morphism, &pair.first)?;
        let t1 = action_on_points(&entry.morphism, &pair.second)?;
        let verdict = finite_order_with_tables(&entry.morphism, pair, [&t0, &t1], &model, &order_cfg)?;
        let order = match verdict {
            OrderVerdict::InfiniteOrder(certificate) => {
                log::info!("{} has infinite order", word_string(system, v, &entry.word));
                return Ok(Some(InfinitenessWitness::InfiniteOrderEndo {
                    locus: scope.loci[v].clone(),
                    word: scope.flatten(&entry.word),
                    certificate,
                }));
            }
            OrderVerdict::Finite { order } => order,
        };
        orders.insert(j, order);
        let key = (t0, t1);
        if let Some(&i) = actions[v].get(&key) {
            let g = table.entry(i);
            let g_order = orders[&i];
            log::info!(
                "{} and {} act identically on the probes",
                word_string(system, v, &entry.word),
                word_string(system, v, &g.word)
            );
            let g_inv = g.morphism.power(g_order - 1);
            let h = compose(&entry.morphism, &g_inv)?;
            let n = key.0.len() as u32;
            let id0: Vec<u32> = (0..n).collect();
            let id1: Vec<u32> = (0..key.1.len() as u32).collect();
            let certificate = match finite_order_with_tables(&h, pair, [&id0, &id1], &model, &order_cfg)? {
                OrderVerdict::InfiniteOrder(c) => c,
                OrderVerdict::Finite { .. } => {
                    return Err(DecideError::InvalidWitness(
                        "kernel element of finite order; probe invariants violated".into(),
                    ))
                }
            };
            let f_word = scope.flatten(&entry.word);
            let g_word = scope.flatten(&g.word);
            let mut h_word = f_word.clone();
            for _ in 1..g_order {
                h_word.extend_from_slice(&g_word);
            }
            return Ok(Some(InfinitenessWitness::KernelCollision {
                locus: scope.loci[v].clone(),
                f_word,
                g_word,
                g_order,
                h_word,
                certificate,
            }));
        }
        actions[v].insert(key, j);
        Ok(None)
    })?;
    match outcome {
        Closure::Complete(table) => Ok(Local::Finite(table)),
        Closure::Stopped { verdict, .. } => Ok(Local::Infinite(verdict)),
        Closure::BudgetExceeded(_) => Err(DecideError::ClosureCapExceeded { cap: cfg.closure_cap }),
    }
}
