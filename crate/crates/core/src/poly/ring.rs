use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{PolyError, Rational};

/// A commutative ring that rational polynomials can be evaluated in.
///
/// Coefficients are carried over through [`EvalRing::embed_rational`], which
/// fails when a denominator is not a unit of the ring.
pub trait EvalRing {
    type Elem: Clone + PartialEq + Eq + Hash + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn embed_rational(&self, q: &Rational) -> Result<Self::Elem, PolyError>;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn pow(&self, a: &Self::Elem, mut e: u32) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RationalField;

impl EvalRing for RationalField {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn embed_rational(&self, q: &Rational) -> Result<Rational, PolyError> {
        Ok(q.clone())
    }
}

/// `Z/m` for a modulus that fits comfortably in `u64` arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntegersMod {
    pub modulus: u64,
}

impl IntegersMod {
    pub fn new(modulus: u64) -> Self {
        assert!((2..(1 << 31)).contains(&modulus));
        IntegersMod { modulus }
    }

    pub fn reduce_int(&self, n: &BigInt) -> u64 {
        let m = BigInt::from(self.modulus);
        n.mod_floor(&m).to_u64().expect("residue fits in u64")
    }

    pub fn inverse(&self, a: u64) -> Option<u64> {
        let g = (a as i64).extended_gcd(&(self.modulus as i64));
        if g.gcd != 1 {
            return None;
        }
        Some(g.x.rem_euclid(self.modulus as i64) as u64)
    }
}

impl EvalRing for IntegersMod {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.modulus
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.modulus
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.modulus
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.modulus - a % self.modulus) % self.modulus
    }
    fn embed_rational(&self, q: &Rational) -> Result<u64, PolyError> {
        let num = self.reduce_int(q.numer());
        let den = self.reduce_int(q.denom());
        let inv = self
            .inverse(den)
            .ok_or_else(|| PolyError::NonInvertibleDenominator {
                denominator: q.denom().abs().to_string(),
                modulus: self.modulus,
            })?;
        Ok(num * inv % self.modulus)
    }
}

/// A polynomial with coefficients already mapped into a ring, for repeated
/// evaluation at many points.
#[derive(Clone, Debug)]
pub struct CompiledPolynomial<R: EvalRing> {
    nvars: usize,
    max_exp: Vec<u32>,
    terms: Vec<(Vec<u32>, R::Elem)>,
}

impl<R: EvalRing> CompiledPolynomial<R> {
    pub fn new(p: &super::Polynomial, ring: &R) -> Result<Self, PolyError> {
        let nvars = p.nvars();
        let mut max_exp = vec![0; nvars];
        let mut terms = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            for (i, &e) in m.exponents().iter().enumerate() {
                max_exp[i] = max_exp[i].max(e);
            }
            terms.push((m.exponents().to_vec(), ring.embed_rational(c)?));
        }
        Ok(CompiledPolynomial {
            nvars,
            max_exp,
            terms,
        })
    }

    pub fn eval(&self, ring: &R, point: &[R::Elem]) -> R::Elem {
        let powers = power_table(ring, point, &self.max_exp);
        self.eval_with_powers(ring, &powers)
    }

    fn eval_with_powers(&self, ring: &R, powers: &[Vec<R::Elem>]) -> R::Elem {
        let mut acc = ring.zero();
        for (exps, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    t = ring.mul(&t, &powers[i][e as usize]);
                }
            }
            acc = ring.add(&acc, &t);
        }
        acc
    }
}

fn power_table<R: EvalRing>(ring: &R, point: &[R::Elem], max_exp: &[u32]) -> Vec<Vec<R::Elem>> {
    point
        .iter()
        .zip(max_exp)
        .map(|(x, &m)| {
            let mut row = Vec::with_capacity(m as usize + 1);
            row.push(ring.one());
            for k in 1..=m as usize {
                let next = ring.mul(&row[k - 1], x);
                row.push(next);
            }
            row
        })
        .collect()
}

/// Several polynomials in the same ambient evaluated together, sharing the
/// power table of the point.
#[derive(Clone, Debug)]
pub struct CompiledMap<R: EvalRing> {
    nvars: usize,
    max_exp: Vec<u32>,
    coords: Vec<CompiledPolynomial<R>>,
}

impl<R: EvalRing> CompiledMap<R> {
    pub fn new(nvars: usize, polys: &[super::Polynomial], ring: &R) -> Result<Self, PolyError> {
        let coords = polys
            .iter()
            .map(|p| CompiledPolynomial::new(p, ring))
            .collect::<Result<Vec<_>, _>>()?;
        let mut max_exp = vec![0; nvars];
        for c in &coords {
            debug_assert_eq!(c.nvars, nvars);
            for (m, e) in max_exp.iter_mut().zip(&c.max_exp) {
                *m = (*m).max(*e);
            }
        }
        Ok(CompiledMap {
            nvars,
            max_exp,
            coords,
        })
    }

    pub fn eval(&self, ring: &R, point: &[R::Elem]) -> Vec<R::Elem> {
        debug_assert_eq!(point.len(), self.nvars);
        let powers = power_table(ring, point, &self.max_exp);
        self.coords
            .iter()
            .map(|c| c.eval_with_powers(ring, &powers))
            .collect()
    }
}
