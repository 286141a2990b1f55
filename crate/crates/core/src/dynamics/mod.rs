//! Orbits of finitely generated monoids of endomorphisms acting on rational
//! points, with periodicity checks and budgeted orbit-size probes.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use thiserror::Error;

use crate::geometry::{GeometryError, Morphism, Variety};
use crate::poly::{CompiledMap, RationalField, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynamicsError {
    #[error("point does not lie on {variety}")]
    PointNotOnVariety { variety: String },
    #[error("generator {index} is not an endomorphism of {variety}")]
    NotAnEndomorphism { index: usize, variety: String },
    #[error("orbit is incomplete")]
    IncompleteOrbit,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

pub type Point = Vec<Rational>;

#[derive(Clone, Debug)]
pub struct MonoidAction {
    variety: Arc<Variety>,
    generators: Vec<Morphism>,
    base: Point,
    compiled: Vec<CompiledMap<RationalField>>,
}

impl MonoidAction {
    pub fn new(variety: Arc<Variety>, generators: Vec<Morphism>, base: Point) -> Result<Self, DynamicsError> {
        if !variety.contains_point(&base) {
            return Err(DynamicsError::PointNotOnVariety {
                variety: variety.name().to_string(),
            });
        }
        for (index, g) in generators.iter().enumerate() {
            if !g.is_endo() || !crate::geometry::same_variety(g.source(), &variety) {
                return Err(DynamicsError::NotAnEndomorphism {
                    index,
                    variety: variety.name().to_string(),
                });
            }
        }
        let compiled = generators
            .iter()
            .map(|g| CompiledMap::new(variety.nvars(), g.coords(), &RationalField).map_err(GeometryError::from))
            .collect::<Result<_, _>>()?;
        Ok(MonoidAction {
            variety,
            generators,
            base,
            compiled,
        })
    }

    pub fn variety(&self) -> &Arc<Variety> {
        &self.variety
    }

    pub fn generators(&self) -> &[Morphism] {
        &self.generators
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn apply(&self, generator: usize, point: &[Rational]) -> Point {
        self.compiled[generator].eval(&RationalField, point)
    }

    /// Applies a word (outermost generator first) to a point.
    pub fn apply_word(&self, word: &[usize], point: &[Rational]) -> Point {
        word.iter()
            .rev()
            .fold(point.to_vec(), |p, &g| self.apply(g, &p))
    }

    /// The action of the submonoid generated by the given words.
    fn sub_action(&self, words: Vec<Vec<usize>>) -> WordAction<'_> {
        WordAction { action: self, words }
    }
}

struct WordAction<'a> {
    action: &'a MonoidAction,
    words: Vec<Vec<usize>>,
}

trait Act {
    fn count(&self) -> usize;
    fn act(&self, i: usize, p: &[Rational]) -> Point;
}

impl Act for MonoidAction {
    fn count(&self) -> usize {
        self.generators.len()
    }

    fn act(&self, i: usize, p: &[Rational]) -> Point {
        self.apply(i, p)
    }
}

impl Act for WordAction<'_> {
    fn count(&self) -> usize {
        self.words.len()
    }

    fn act(&self, i: usize, p: &[Rational]) -> Point {
        self.action.apply_word(&self.words[i], p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitReport {
    /// Points in discovery order; the base point comes first.
    pub points: Vec<Point>,
    /// For each generator, the index of the image of each point, when known.
    pub transitions: Vec<Vec<Option<usize>>>,
    pub complete: bool,
    pub budget_used: usize,
}

impl OrbitReport {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, p: &[Rational]) -> Option<usize> {
        self.points.iter().position(|q| q.as_slice() == p)
    }
}

/// Breadth-first orbit of the base point, storing at most `budget` points.
pub fn orbit_bfs(action: &MonoidAction, budget: usize) -> OrbitReport {
    bfs(action, action.base(), budget)
}

fn bfs<A: Act>(action: &A, base: &[Rational], budget: usize) -> OrbitReport {
    let k = action.count();
    let mut points = vec![base.to_vec()];
    let mut index: HashMap<Point, usize> = HashMap::from([(base.to_vec(), 0)]);
    let mut transitions = vec![vec![None]; k];
    let mut queue = VecDeque::from([0usize]);
    let mut complete = true;
    while let Some(i) = queue.pop_front() {
        for (g, column) in transitions.iter_mut().enumerate() {
            let image = action.act(g, &points[i]);
            let j = match index.get(&image) {
                Some(&j) => j,
                None if points.len() >= budget => {
                    complete = false;
                    continue;
                }
                None => {
                    let j = points.len();
                    index.insert(image.clone(), j);
                    points.push(image);
                    queue.push_back(j);
                    j
                }
            };
            column[i] = Some(j);
        }
        for column in &mut transitions {
            column.resize(points.len(), None);
        }
    }
    let budget_used = points.len();
    OrbitReport {
        points,
        transitions,
        complete,
        budget_used,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Periodicity {
    Periodic { period: usize },
    Preperiodic { tail: usize, period: usize },
    Unresolved { steps: usize },
}

impl Periodicity {
    /// Size of the forward orbit, if resolved.
    pub fn orbit_size(&self) -> Option<usize> {
        match self {
            Periodicity::Periodic { period } => Some(*period),
            Periodicity::Preperiodic { tail, period } => Some(tail + period),
            Periodicity::Unresolved { .. } => None,
        }
    }
}

/// Iterates `f` from `x` for at most `budget` steps, detecting the first
/// repeated point.
pub fn cyclic_periodicity(f: &Morphism, x: &[Rational], budget: usize) -> Result<Periodicity, DynamicsError> {
    let map = CompiledMap::new(f.source().nvars(), f.coords(), &RationalField).map_err(GeometryError::from)?;
    Ok(cycle(|p| map.eval(&RationalField, p), x, budget))
}

fn cycle(step: impl Fn(&[Rational]) -> Point, x: &[Rational], budget: usize) -> Periodicity {
    let mut seen: HashMap<Point, usize> = HashMap::new();
    let mut cur = x.to_vec();
    for i in 0..=budget {
        if let Some(&first) = seen.get(&cur) {
            let period = i - first;
            return if first == 0 {
                Periodicity::Periodic { period }
            } else {
                Periodicity::Preperiodic { tail: first, period }
            };
        }
        if i == budget {
            break;
        }
        let next = step(&cur);
        seen.insert(cur, i);
        cur = next;
    }
    Periodicity::Unresolved { steps: budget }
}

/// Whether every generator permutes the points of a complete orbit.
pub fn m_periodicity(report: &OrbitReport) -> Result<bool, DynamicsError> {
    if !report.complete {
        return Err(DynamicsError::IncompleteOrbit);
    }
    Ok(report.transitions.iter().all(|column| {
        let mut hit = vec![false; report.len()];
        column.iter().all(|&j| {
            let j = j.expect("complete orbits have total transitions");
            !std::mem::replace(&mut hit[j], true)
        })
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnboundedWitness {
    /// `⟨f⟩·g(x)` did not close within the budget.
    Cyclic { f_word: Vec<usize>, g_word: Vec<usize> },
    /// The orbit of `x` under `⟨f, g⟩` did not close within the budget.
    TwoGenerated { f_word: Vec<usize>, g_word: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairProbeReport {
    pub words: usize,
    pub pairs_checked: usize,
    pub max_cyclic: usize,
    pub max_two_generated: usize,
    pub unbounded: Option<UnboundedWitness>,
    pub orbit_complete: bool,
    pub orbit_size: usize,
    /// Whether a bounded probe agrees with a complete orbit (and an
    /// unbounded one with an incomplete orbit).
    pub consistent: bool,
}

/// Words of length at most `radius`, shortest first; within a length, in
/// lexicographic order of the sequence of generators as applied.
pub fn words_up_to(generators: usize, radius: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..radius {
        if generators == 0 {
            break;
        }
        let mut next = Vec::new();
        for applied in &layer {
            for g in 0..generators {
                let mut w = applied.clone();
                w.push(g);
                next.push(w);
            }
        }
        out.extend(next.iter().map(|applied| applied.iter().rev().copied().collect::<Vec<_>>()));
        layer = next;
    }
    out
}

/// Measures `|⟨f⟩·g(x)|` and `|⟨f, g⟩·x|` for all words `f`, `g` up to the
/// radius (all cyclic orbits first), stopping at the first orbit that does
/// not close within `budget`.
pub fn pair_criterion_probe(action: &MonoidAction, word_radius: usize, budget: usize) -> PairProbeReport {
    let words = words_up_to(action.generators().len(), word_radius);
    let x = action.base();
    let mut max_cyclic = 1;
    let mut max_two_generated = 1;
    let mut unbounded = None;
    let mut pairs_checked = 0;
    'cyclic: for f in &words {
        for g in &words {
            pairs_checked += 1;
            let start = action.apply_word(g, x);
            match cycle(|p| action.apply_word(f, p), &start, budget).orbit_size() {
                Some(n) => max_cyclic = max_cyclic.max(n),
                None => {
                    unbounded = Some(UnboundedWitness::Cyclic {
                        f_word: f.clone(),
                        g_word: g.clone(),
                    });
                    break 'cyclic;
                }
            }
        }
    }
    if unbounded.is_none() {
        'pairs: for (i, f) in words.iter().enumerate() {
            for g in &words[i..] {
                let two = bfs(&action.sub_action(vec![f.clone(), g.clone()]), x, budget);
                if !two.complete {
                    unbounded = Some(UnboundedWitness::TwoGenerated {
                        f_word: f.clone(),
                        g_word: g.clone(),
                    });
                    break 'pairs;
                }
                max_two_generated = max_two_generated.max(two.len());
            }
        }
    }
    let orbit = orbit_bfs(action, budget);
    PairProbeReport {
        words: words.len(),
        pairs_checked,
        max_cyclic,
        max_two_generated,
        consistent: orbit.complete == unbounded.is_none(),
        unbounded,
        orbit_complete: orbit.complete,
        orbit_size: orbit.len(),
    }
}
