use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::poly::Polynomial;

use super::{Morphism, Variety};

/// Integral model over `Z[1/D]` for a decision scope.
///
/// `D` is the lcm of every reduced-basis denominator of the scope's vertex
/// ideals and every coefficient denominator of the scope's generating maps.
/// Canonical forms of composites of those maps then stay in `Z[1/D][x]`.
#[derive(Clone, Debug)]
pub struct IntegralModel {
    d: BigInt,
    scaled: Vec<Vec<Polynomial>>,
}

impl IntegralModel {
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    /// Content-one integer generators of each vertex ideal, in the order the
    /// varieties were given to [`spread_out`].
    pub fn scaled_generators(&self) -> &[Vec<Polynomial>] {
        &self.scaled
    }

    pub fn admits_prime(&self, p: u64) -> bool {
        !(&self.d % BigInt::from(p)).is_zero()
    }
}

/// Integer generators of the flat model: the reduced grevlex basis with
/// denominators cleared and content removed.
pub fn scaled_generators(v: &Variety) -> Vec<Polynomial> {
    v.basis()
        .elements()
        .iter()
        .map(|g| g.primitive_integer_part().0)
        .collect()
}

pub fn spread_out(varieties: &[&Variety], morphisms: &[&Morphism]) -> IntegralModel {
    let mut d = BigInt::one();
    for v in varieties {
        d = d.lcm(v.basis().denominator_lcm());
    }
    for m in morphisms {
        for c in m.coords() {
            d = d.lcm(&c.denominator_lcm());
        }
    }
    IntegralModel {
        d,
        scaled: varieties.iter().map(|v| scaled_generators(v)).collect(),
    }
}

/// Primes in increasing order up to `bound`.
pub fn primes_up_to(bound: u64) -> impl Iterator<Item = u64> {
    (2..=bound).filter(|&n| is_prime(n))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Prime factors of `n` in increasing order, without multiplicity.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            out.push(k);
            while n.is_multiple_of(k) {
                n /= k;
            }
        }
        k += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn bigint_to_string(d: &BigInt) -> String {
    d.to_u64().map(|v| v.to_string()).unwrap_or_else(|| d.to_string())
}
