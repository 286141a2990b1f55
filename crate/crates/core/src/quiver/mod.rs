//! Systems of varieties and morphisms, their path-equivalence classes, and
//! enumeration of the generated category.

mod closure;
mod components;
mod system;

use thiserror::Error;

use crate::geometry::GeometryError;

pub use closure::{bfs_closure, closure, word_string, Closure, HomEntry, HomListing, HomTable};
pub use components::{path_components, PathComponentReport};
pub use system::{Arrow, System};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("duplicate name {0}")]
    DuplicateName(String),
    #[error("arrow {arrow}: {reason}")]
    InvalidArrow { arrow: String, reason: String },
    #[error("closure stopped at cap {cap} after {discovered} morphisms")]
    BudgetExceeded { cap: usize, discovered: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::geometry::{Morphism, Variety};
    use crate::poly::Polynomial;

    fn line(name: &str) -> Arc<Variety> {
        Arc::new(Variety::affine_space(name, &["x"]))
    }

    fn endo_system(coords: &[Polynomial]) -> System {
        let a = line("A");
        let mut s = System::new(vec![a.clone()]).unwrap();
        for (i, c) in coords.iter().enumerate() {
            let m = Morphism::new(a.clone(), a.clone(), vec![c.clone()]).unwrap();
            s.add_arrow(format!("f{i}"), 0, 0, m).unwrap();
        }
        s
    }

    #[test]
    fn closure_examples() {
        let x = Polynomial::var(1, 0);
        let t = closure(&endo_system(&[-&x]), 100).unwrap();
        assert_eq!(t.len(), 2);
        assert!(t.is_closed());

        let t = closure(&endo_system(&[Polynomial::zero(1), -&x]), 100).unwrap();
        assert_eq!(t.len(), 3);
        assert!(t.is_closed());

        let shift = &x + &Polynomial::one(1);
        assert!(matches!(
            closure(&endo_system(&[shift]), 10),
            Err(QuiverError::BudgetExceeded { cap: 10, discovered: 10 })
        ));
    }

    #[test]
    fn words_reproduce_morphisms() {
        let x = Polynomial::var(1, 0);
        let s = endo_system(&[-&x, &Polynomial::one(1) - &x]);
        let Closure::BudgetExceeded(t) = bfs_closure::<(), ()>(&s, 20, |_, _| Ok(None)).unwrap() else {
            panic!("infinite dihedral closure should not finish");
        };
        for e in t.entries() {
            let mut m = Morphism::identity(s.vertex(e.src));
            for &a in e.word.iter().rev() {
                m = crate::geometry::compose(s.arrow(a).morphism(), &m).unwrap();
            }
            assert_eq!(m, e.morphism);
        }
        assert_eq!(word_string(&s, 0, &t.entry(3).word), "f1∘f0");
    }

    #[test]
    fn component_examples() {
        let x = Polynomial::var(1, 0);
        let s = endo_system(&[-&x, x.pow(2)]);
        let r = path_components(&s);
        assert_eq!(r.classes, vec![vec![0]]);
        assert_eq!(r.core_arrows, vec![0, 1]);

        let (a, b) = (line("A"), line("B"));
        let f = Morphism::new(a.clone(), b.clone(), vec![x.pow(2)]).unwrap();
        let g = Morphism::new(b.clone(), a.clone(), vec![x.clone()]).unwrap();
        let mut s = System::new(vec![a.clone(), b.clone()]).unwrap();
        s.add_arrow("f", 0, 1, f).unwrap();
        let r = path_components(&s);
        assert_eq!(r.classes, vec![vec![0], vec![1]]);
        assert_eq!(r.bridge_arrows, vec![0]);
        s.add_arrow("g", 1, 0, g).unwrap();
        let r = path_components(&s);
        assert_eq!(r.classes, vec![vec![0, 1]]);
        assert_eq!(r.core_arrows, vec![0, 1]);
        assert!(r.bridge_arrows.is_empty());
    }

    #[test]
    fn arrows_are_validated() {
        let x = Polynomial::var(1, 0);
        let (a, b) = (line("A"), line("B"));
        let mut s = System::new(vec![a.clone(), b.clone()]).unwrap();
        assert!(matches!(
            s.add_arrow("f", 0, 5, Morphism::identity(&a)),
            Err(QuiverError::InvalidArrow { .. })
        ));
        s.add_arrow("f", 0, 1, Morphism::new(a.clone(), b.clone(), vec![x]).unwrap()).unwrap();
        assert!(matches!(
            s.add_arrow("f", 1, 1, Morphism::identity(&b)),
            Err(QuiverError::DuplicateName(_))
        ));
        assert!(matches!(System::new(vec![a.clone(), a]), Err(QuiverError::DuplicateName(_))));
    }
}
