use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::poly::{GroebnerBasis, Ideal, Polynomial, Rational, RationalField};

use super::GeometryError;

/// Affine variety `V(I) ⊂ A^n` over Q. The ideal is assumed prime; only
/// properness is verified on construction.
#[derive(Clone)]
pub struct Variety {
    name: String,
    vars: Vec<String>,
    ideal: Ideal,
    dimension: usize,
}

impl Variety {
    pub fn new(
        name: impl Into<String>,
        vars: Vec<String>,
        generators: Vec<Polynomial>,
    ) -> Result<Self, GeometryError> {
        let name = name.into();
        let ideal = Ideal::new(vars.len(), generators);
        let dimension = ideal
            .dimension()
            .map_err(|_| GeometryError::ImproperIdeal { variety: name.clone() })?;
        Ok(Variety {
            name,
            vars,
            ideal,
            dimension,
        })
    }

    pub fn affine_space(name: impl Into<String>, vars: &[&str]) -> Self {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        Variety::new(name, vars, Vec::new()).expect("affine space is a variety")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn basis(&self) -> Arc<GroebnerBasis> {
        self.ideal.grevlex()
    }

    pub fn contains_point(&self, point: &[Rational]) -> bool {
        point.len() == self.nvars()
            && self
                .ideal
                .generators()
                .iter()
                .all(|g| {
                    g.evaluate(&RationalField, point)
                        .map(|v| v.is_zero())
                        .unwrap_or(false)
                })
    }

    /// Same ambient dimension and the same reduced basis.
    pub fn same_locus(&self, other: &Variety) -> bool {
        self.nvars() == other.nvars() && *self.basis() == *other.basis()
    }

    pub fn with_name(&self, name: impl Into<String>) -> Variety {
        Variety {
            name: name.into(),
            ..self.clone()
        }
    }
}

impl fmt::Debug for Variety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self
            .ideal
            .generators()
            .iter()
            .map(|g| g.display(&self.vars).to_string())
            .collect();
        write!(
            f,
            "{}: V({}) in A^{} [{}]",
            self.name,
            gens.join(", "),
            self.nvars(),
            self.vars.join(", ")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn improper_ideal_rejected() {
        let x = Polynomial::var(1, 0);
        let err = Variety::new("bad", vec!["x".into()], vec![x.clone(), &x - &Polynomial::one(1)]);
        assert!(matches!(err, Err(GeometryError::ImproperIdeal { .. })));
    }

    #[test]
    fn cusp_membership_and_dimension() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let cusp = Variety::new("cusp", vec!["x".into(), "y".into()], vec![&y.pow(2) - &x.pow(3)]).unwrap();
        assert_eq!(cusp.dimension(), 1);
        let four = Rational::from_integer(4.into());
        let eight = Rational::from_integer(8.into());
        assert!(cusp.contains_point(&[four.clone(), eight]));
        assert!(!cusp.contains_point(&[four.clone(), four]));
    }
}
