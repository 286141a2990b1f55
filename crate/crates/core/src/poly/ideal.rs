use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::{buchberger, GroebnerBasis, MonomialOrder, PolyError, Polynomial};

/// Polynomial ideal with a per-order cache of reduced Gröbner bases.
#[derive(Debug)]
pub struct Ideal {
    nvars: usize,
    generators: Vec<Polynomial>,
    cache: Mutex<HashMap<MonomialOrder, Arc<GroebnerBasis>>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        Ideal {
            nvars: self.nvars,
            generators: self.generators.clone(),
            cache: Mutex::new(self.cache.lock().unwrap().clone()),
        }
    }
}

impl Ideal {
    pub fn new(nvars: usize, generators: Vec<Polynomial>) -> Self {
        assert!(generators.iter().all(|g| g.nvars() == nvars));
        Ideal {
            nvars,
            generators,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn zero(nvars: usize) -> Self {
        Ideal::new(nvars, Vec::new())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn groebner(&self, order: &MonomialOrder) -> Arc<GroebnerBasis> {
        if let Some(gb) = self.cache.lock().unwrap().get(order) {
            return gb.clone();
        }
        // computed outside the lock; a racing thread produces the same basis
        let gb = Arc::new(buchberger(&self.generators, self.nvars, order));
        self.cache
            .lock()
            .unwrap()
            .entry(order.clone())
            .or_insert(gb)
            .clone()
    }

    pub fn grevlex(&self) -> Arc<GroebnerBasis> {
        self.groebner(&MonomialOrder::GrevLex)
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.grevlex().contains(p)
    }

    pub fn is_proper(&self) -> bool {
        !self.grevlex().is_unit()
    }

    /// Every generator of each ideal lies in the other.
    pub fn same_as(&self, other: &Ideal) -> bool {
        self.nvars == other.nvars
            && other.generators.iter().all(|g| self.contains(g))
            && self.generators.iter().all(|g| other.contains(g))
    }

    /// `I ∩ Q[remaining variables]`, still expressed in the full ambient.
    pub fn elimination(&self, eliminate: &[usize]) -> Ideal {
        let order = MonomialOrder::block(self.nvars, eliminate);
        let gb = self.groebner(&order);
        let mut allowed = vec![true; self.nvars];
        for &i in eliminate {
            allowed[i] = false;
        }
        let gens = gb
            .elements()
            .iter()
            .filter(|g| g.uses_only(&allowed))
            .cloned()
            .collect();
        Ideal::new(self.nvars, gens)
    }

    /// Krull dimension of `Q[x]/I`: the largest set of variables that
    /// contains the support of no leading monomial of the grevlex basis.
    pub fn dimension(&self) -> Result<usize, PolyError> {
        let gb = self.grevlex();
        if gb.is_unit() {
            return Err(PolyError::ImproperIdeal);
        }
        let n = self.nvars;
        assert!(n < 32, "dimension search limited to fewer than 32 variables");
        let supports: Vec<u32> = gb
            .leading_monomials()
            .iter()
            .map(|m| m.support().fold(0u32, |acc, i| acc | (1 << i)))
            .collect();
        let best = (0u32..(1u32 << n))
            .filter(|&set| supports.iter().all(|&s| s & !set != 0))
            .map(|set| set.count_ones() as usize)
            .max()
            .unwrap_or(0);
        Ok(best)
    }
}
