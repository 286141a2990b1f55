use std::fmt;
use std::sync::Arc;

use crate::poly::{Ideal, Polynomial, Rational, RationalField};

use super::{GeometryError, Variety};

/// Polynomial map between affine varieties, kept in canonical form: every
/// coordinate is reduced modulo the grevlex basis of the source ideal, so
/// equality of coordinate tuples is equality of maps.
#[derive(Clone)]
pub struct Morphism {
    source: Arc<Variety>,
    target: Arc<Variety>,
    coords: Vec<Polynomial>,
}

impl PartialEq for Morphism {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
            && same_variety(&self.source, &other.source)
            && same_variety(&self.target, &other.target)
    }
}

impl Eq for Morphism {}

pub(crate) fn same_variety(a: &Arc<Variety>, b: &Arc<Variety>) -> bool {
    Arc::ptr_eq(a, b) || a.same_locus(b)
}

impl Morphism {
    /// Builds a morphism, reducing the coordinates and checking that every
    /// target equation pulls back into the source ideal.
    pub fn new(
        source: Arc<Variety>,
        target: Arc<Variety>,
        coords: Vec<Polynomial>,
    ) -> Result<Self, GeometryError> {
        if coords.len() != target.nvars() {
            return Err(GeometryError::ArityMismatch {
                expected: target.nvars(),
                found: coords.len(),
            });
        }
        if let Some(c) = coords.iter().find(|c| c.nvars() != source.nvars()) {
            return Err(GeometryError::ArityMismatch {
                expected: source.nvars(),
                found: c.nvars(),
            });
        }
        let basis = source.basis();
        let coords: Vec<Polynomial> = coords.iter().map(|c| basis.normal_form(c)).collect();
        let m = Morphism {
            source,
            target,
            coords,
        };
        m.check_well_defined()?;
        Ok(m)
    }

    fn check_well_defined(&self) -> Result<(), GeometryError> {
        let basis = self.source.basis();
        for g in self.target.basis().elements() {
            let pulled = g.substitute(&self.coords, self.source.nvars(), Some(&basis));
            if !pulled.is_zero() {
                return Err(GeometryError::NotWellDefined {
                    source_name: self.source.name().to_string(),
                    target: self.target.name().to_string(),
                    equation: g.display(self.target.vars()).to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn identity(v: &Arc<Variety>) -> Self {
        let n = v.nvars();
        let basis = v.basis();
        let coords = (0..n)
            .map(|i| basis.normal_form(&Polynomial::var(n, i)))
            .collect();
        Morphism {
            source: v.clone(),
            target: v.clone(),
            coords,
        }
    }

    pub fn source(&self) -> &Arc<Variety> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Variety> {
        &self.target
    }

    pub fn coords(&self) -> &[Polynomial] {
        &self.coords
    }

    pub fn is_endo(&self) -> bool {
        same_variety(&self.source, &self.target)
    }

    pub fn is_identity(&self) -> bool {
        self.is_endo() && *self == Morphism::identity(&self.source)
    }

    /// Total number of stored terms across all coordinates.
    pub fn size(&self) -> usize {
        self.coords.iter().map(Polynomial::len).sum()
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn after(&self, inner: &Morphism) -> Result<Morphism, GeometryError> {
        compose(self, inner)
    }

    /// `self^n` for an endomorphism, or `None` when an intermediate power
    /// exceeds `term_cap` terms.
    pub fn power_capped(&self, n: u64, term_cap: usize) -> Option<Morphism> {
        assert!(self.is_endo());
        let mut acc = Morphism::identity(&self.source);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                if exceeds_monomial_bound(&acc, &base, term_cap) {
                    return None;
                }
                acc = compose(&acc, &base).expect("endomorphisms compose");
                if acc.size() > term_cap {
                    return None;
                }
            }
            e >>= 1;
            if e > 0 {
                if exceeds_monomial_bound(&base, &base, term_cap) {
                    return None;
                }
                base = compose(&base, &base).expect("endomorphisms compose");
                if base.size() > term_cap {
                    return None;
                }
            }
        }
        Some(acc)
    }

    pub fn max_degree(&self) -> u64 {
        self.coords.iter().map(Polynomial::total_degree).max().unwrap_or(0)
    }

    pub fn power(&self, n: u64) -> Morphism {
        self.power_capped(n, usize::MAX).unwrap()
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Vec<Rational>, GeometryError> {
        self.coords
            .iter()
            .map(|c| c.evaluate(&RationalField, point).map_err(GeometryError::from))
            .collect()
    }

    pub fn coord_strings(&self) -> Vec<String> {
        self.coords
            .iter()
            .map(|c| c.display(self.source.vars()).to_string())
            .collect()
    }

    /// Replace the recorded source and target by equal loci (used when a
    /// subsystem re-labels its vertices).
    pub fn relabel(&self, source: Arc<Variety>, target: Arc<Variety>) -> Morphism {
        debug_assert!(same_variety(&self.source, &source) && same_variety(&self.target, &target));
        Morphism {
            source,
            target,
            coords: self.coords.clone(),
        }
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {}: ({})",
            self.source.name(),
            self.target.name(),
            self.coord_strings().join(", ")
        )
    }
}

/// Whether `outer ∘ inner` could have more than `cap` terms per coordinate,
/// judged by the number of monomials of the degree it may reach.
fn exceeds_monomial_bound(outer: &Morphism, inner: &Morphism, cap: usize) -> bool {
    let degree = outer.max_degree().saturating_mul(inner.max_degree().max(1));
    let n = outer.source.nvars() as u64;
    // C(degree + n, n), stopping once it passes the cap.
    let mut count: u128 = 1;
    for i in 1..=n {
        count = match count.checked_mul(degree as u128 + i as u128) {
            Some(c) => c / i as u128,
            None => return true,
        };
        if count > cap as u128 {
            return true;
        }
    }
    false
}

/// `f ∘ g`, reduced modulo the source ideal of `g`.
pub fn compose(f: &Morphism, g: &Morphism) -> Result<Morphism, GeometryError> {
    if !same_variety(&g.target, &f.source) {
        return Err(GeometryError::SourceTargetMismatch {
            expected: f.source.name().to_string(),
            found: g.target.name().to_string(),
        });
    }
    let basis = g.source.basis();
    let coords = f
        .coords
        .iter()
        .map(|c| c.substitute(&g.coords, g.source.nvars(), Some(&basis)))
        .collect();
    Ok(Morphism {
        source: g.source.clone(),
        target: f.target.clone(),
        coords,
    })
}

/// Zariski closure of the image: eliminate the source variables from the
/// graph ideal `I_source + (y_j - f_j(x))`.
pub fn image_closure(f: &Morphism, name: impl Into<String>) -> Variety {
    let n = f.source.nvars();
    let m = f.target.nvars();
    let total = n + m;
    let embed_source: Vec<Option<usize>> = (0..n).map(Some).collect();
    let mut gens: Vec<Polynomial> = f
        .source
        .basis()
        .elements()
        .iter()
        .map(|g| g.remap(total, &embed_source))
        .collect();
    for (j, c) in f.coords.iter().enumerate() {
        let y = Polynomial::var(total, n + j);
        gens.push(&y - &c.remap(total, &embed_source));
    }
    let graph = Ideal::new(total, gens);
    let eliminate: Vec<usize> = (0..n).collect();
    let elim = graph.elimination(&eliminate);
    let project: Vec<Option<usize>> = (0..total)
        .map(|i| if i < n { None } else { Some(i - n) })
        .collect();
    let gens = elim
        .generators()
        .iter()
        .map(|g| g.remap(m, &project))
        .collect();
    Variety::new(name, f.target.vars().to_vec(), gens)
        .expect("image closure of a morphism of nonempty varieties is nonempty")
}

/// Dominance: the image closure has the same ideal as the target.
pub fn is_dominant(f: &Morphism) -> bool {
    let z = image_closure(f, "image");
    let target = f.target.ideal();
    z.ideal().generators().iter().all(|g| target.contains(g))
}

/// Restrict `f` to the subvariety `z` of its source, landing in `target`.
pub fn restrict_to(
    f: &Morphism,
    z: &Arc<Variety>,
    target: &Arc<Variety>,
) -> Result<Morphism, GeometryError> {
    if z.nvars() != f.source.nvars() {
        return Err(GeometryError::ArityMismatch {
            expected: f.source.nvars(),
            found: z.nvars(),
        });
    }
    Morphism::new(z.clone(), target.clone(), f.coords.clone())
}
