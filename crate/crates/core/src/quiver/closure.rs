use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::geometry::{compose, Morphism};
use crate::poly::Polynomial;

use super::{QuiverError, System};

/// A morphism of the generated category together with one word producing
/// it. Words list generator indices outermost first, so `[g, f]` is `g∘f`;
/// the empty word is the identity of `src`.
#[derive(Clone, Debug)]
pub struct HomEntry {
    pub src: usize,
    pub dst: usize,
    pub morphism: Morphism,
    pub word: Vec<usize>,
}

type Key = (usize, usize, Vec<Polynomial>);

/// Hom sets keyed by `(src, dst)`, each a sorted list of coordinate strings.
pub type HomListing = Vec<((usize, usize), Vec<Vec<String>>)>;

/// Enumerated morphisms of the generated category, identities included.
#[derive(Clone, Debug, Default)]
pub struct HomTable {
    entries: Vec<HomEntry>,
    index: HashMap<Key, usize>,
    by_pair: BTreeMap<(usize, usize), Vec<usize>>,
}

impl HomTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[HomEntry] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &HomEntry {
        &self.entries[i]
    }

    fn insert(&mut self, entry: HomEntry) -> Option<usize> {
        let key = (entry.src, entry.dst, entry.morphism.coords().to_vec());
        if self.index.contains_key(&key) {
            return None;
        }
        let i = self.entries.len();
        self.index.insert(key, i);
        self.by_pair.entry((entry.src, entry.dst)).or_default().push(i);
        self.entries.push(entry);
        Some(i)
    }

    pub fn find(&self, src: usize, dst: usize, m: &Morphism) -> Option<usize> {
        self.index.get(&(src, dst, m.coords().to_vec())).copied()
    }

    /// Indices of `Hom(src, dst)` in discovery order.
    pub fn hom(&self, src: usize, dst: usize) -> &[usize] {
        self.by_pair.get(&(src, dst)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn endos(&self, v: usize) -> &[usize] {
        self.hom(v, v)
    }

    /// Nonempty `(src, dst)` pairs in ascending order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.by_pair.keys().copied()
    }

    /// Whether every composable pair of entries composes to an entry.
    pub fn is_closed(&self) -> bool {
        self.entries.iter().all(|g| {
            self.pairs().filter(|&(s, _)| s == g.dst).all(|(s, d)| {
                self.hom(s, d).iter().all(|&i| {
                    let f = &self.entries[i];
                    compose(&f.morphism, &g.morphism)
                        .map(|fg| self.find(g.src, f.dst, &fg).is_some())
                        .unwrap_or(false)
                })
            })
        })
    }

    /// Canonical listing: per vertex pair, the coordinate strings of each
    /// morphism in sorted order.
    pub fn canonical_listing(&self) -> HomListing {
        self.by_pair
            .iter()
            .map(|(&pair, idx)| {
                let mut maps: Vec<Vec<String>> = idx
                    .iter()
                    .map(|&i| self.entries[i].morphism.coord_strings())
                    .collect();
                maps.sort();
                (pair, maps)
            })
            .collect()
    }
}

/// Renders a word with arrow names, e.g. `g∘f`, or `id_V` for the empty word.
pub fn word_string(system: &System, src: usize, word: &[usize]) -> String {
    if word.is_empty() {
        return format!("id_{}", system.vertex(src).name());
    }
    word.iter()
        .map(|&a| system.arrow(a).name())
        .collect::<Vec<_>>()
        .join("∘")
}

#[derive(Debug)]
pub enum Closure<T> {
    Complete(HomTable),
    Stopped { table: HomTable, verdict: T },
    BudgetExceeded(HomTable),
}

/// Worklist closure of the generated category.
///
/// Identities are seeded in vertex order; each dequeued morphism `m` is
/// extended by every generator `a` leaving its target, in generator order,
/// giving `a∘m`. New canonical forms are appended FIFO and passed to `hook`,
/// which may stop the enumeration with a verdict. At most `cap` morphisms
/// are stored.
pub fn bfs_closure<T, E>(
    system: &System,
    cap: usize,
    mut hook: impl FnMut(&HomTable, usize) -> Result<Option<T>, E>,
) -> Result<Closure<T>, E> {
    let mut table = HomTable::default();
    let mut queue = VecDeque::new();
    let mut outgoing = vec![Vec::new(); system.vertices().len()];
    for (i, a) in system.arrows().iter().enumerate() {
        outgoing[a.src()].push(i);
    }

    for (v, variety) in system.vertices().iter().enumerate() {
        if table.len() >= cap {
            return Ok(Closure::BudgetExceeded(table));
        }
        let i = table
            .insert(HomEntry {
                src: v,
                dst: v,
                morphism: Morphism::identity(variety),
                word: Vec::new(),
            })
            .expect("identities are distinct");
        log::trace!("discovered {} : {:?}", word_string(system, v, &[]), table.entry(i).morphism);
        queue.push_back(i);
        if let Some(verdict) = hook(&table, i)? {
            return Ok(Closure::Stopped { table, verdict });
        }
    }

    while let Some(i) = queue.pop_front() {
        let (src, dst) = (table.entry(i).src, table.entry(i).dst);
        for &a in &outgoing[dst] {
            let arrow = system.arrow(a);
            let m = compose(arrow.morphism(), &table.entry(i).morphism).expect("arrow leaves the target vertex");
            if table.find(src, arrow.dst(), &m).is_some() {
                continue;
            }
            if table.len() >= cap {
                log::debug!("closure cap {cap} reached");
                return Ok(Closure::BudgetExceeded(table));
            }
            let mut word = vec![a];
            word.extend_from_slice(&table.entry(i).word);
            let j = table
                .insert(HomEntry {
                    src,
                    dst: arrow.dst(),
                    morphism: m,
                    word,
                })
                .expect("checked above");
            log::trace!(
                "discovered {} : {:?}",
                word_string(system, src, &table.entry(j).word),
                table.entry(j).morphism
            );
            queue.push_back(j);
            if let Some(verdict) = hook(&table, j)? {
                return Ok(Closure::Stopped { table, verdict });
            }
        }
    }
    log::debug!("closure complete with {} morphisms", table.len());
    Ok(Closure::Complete(table))
}

/// Plain closure without hooks.
pub fn closure(system: &System, cap: usize) -> Result<HomTable, QuiverError> {
    match bfs_closure::<(), QuiverError>(system, cap, |_, _| Ok(None))? {
        Closure::Complete(t) => Ok(t),
        Closure::BudgetExceeded(t) => Err(QuiverError::BudgetExceeded {
            cap,
            discovered: t.len(),
        }),
        Closure::Stopped { .. } => unreachable!("hook never stops"),
    }
}
