//! Finite-order certification for dominant endomorphisms.
//!
//! A torsion dominant endomorphism is an automorphism, so it permutes every
//! probe point set. Its `N`-th power, with `N` the lcm of the two permutation
//! orders, acts trivially at both probes and therefore lies in a torsion-free
//! group; hence `f^N = id`. Failure of either step certifies infinite order.

use num_integer::Integer;

use crate::poly::{CompiledMap, IntegersMod, Polynomial};

use super::model::{primes_up_to, scaled_generators, IntegralModel};
use super::probe::{action_on_points, Odometer, ProbePair, TruncElem};
use super::{is_dominant, GeometryError, Morphism};

/// First pair of distinct points with the same image, if any.
pub fn injectivity_collision(table: &[u32]) -> Option<(u32, u32)> {
    let mut seen = vec![u32::MAX; table.len()];
    for (i, &j) in table.iter().enumerate() {
        let slot = &mut seen[j as usize];
        if *slot != u32::MAX {
            return Some((*slot, i as u32));
        }
        *slot = i as u32;
    }
    None
}

/// Order of a permutation table as the lcm of its cycle lengths.
pub fn permutation_order(table: &[u32]) -> Option<u64> {
    let mut visited = vec![false; table.len()];
    let mut order: u64 = 1;
    for start in 0..table.len() {
        if visited[start] {
            continue;
        }
        let mut len: u64 = 0;
        let mut i = start;
        while !visited[i] {
            visited[i] = true;
            i = table[i] as usize;
            len += 1;
        }
        let g = order.gcd(&len);
        order = (order / g).checked_mul(len)?;
    }
    Some(order)
}

/// `first ∘ second`: apply `second`, then `first`.
pub fn compose_tables(first: &[u32], second: &[u32]) -> Vec<u32> {
    second.iter().map(|&j| first[j as usize]).collect()
}

pub fn power_table(table: &[u32], mut n: u64) -> Vec<u32> {
    let mut acc: Vec<u32> = (0..table.len() as u32).collect();
    let mut base = table.to_vec();
    while n > 0 {
        if n & 1 == 1 {
            acc = compose_tables(&base, &acc);
        }
        n >>= 1;
        if n > 0 {
            base = compose_tables(&base, &base);
        }
    }
    acc
}

pub fn is_identity_table(table: &[u32]) -> bool {
    table.iter().enumerate().all(|(i, &j)| i as u32 == j)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderConfig {
    /// Largest total term count allowed while powering symbolically.
    pub power_term_cap: usize,
    /// Search bound for the modular fallback evidence.
    pub prime_bound: u64,
}

impl Default for OrderConfig {
    fn default() -> Self {
        OrderConfig {
            power_term_cap: 20_000,
            prime_bound: 97,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PowerEvidence {
    /// Canonical coordinates of `f^N`, not the identity.
    NormalForm { coords: Vec<Polynomial> },
    /// An `F_q`-point of the model moved by `f^N`.
    ModularMotion {
        prime: u64,
        point: Vec<u64>,
        image: Vec<u64>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderCertificate {
    /// Two distinct probe points with a common image.
    NotInjective {
        prime: u64,
        a: Vec<TruncElem>,
        b: Vec<TruncElem>,
        image: Vec<TruncElem>,
    },
    /// `f^N ≠ id` although `f^N` acts trivially at both probes.
    PowerNotIdentity {
        exponent: u64,
        primes: (u64, u64),
        evidence: PowerEvidence,
    },
}

impl OrderCertificate {
    pub fn exponent(&self) -> Option<u64> {
        match self {
            OrderCertificate::PowerNotIdentity { exponent, .. } => Some(*exponent),
            OrderCertificate::NotInjective { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderVerdict {
    Finite { order: u64 },
    InfiniteOrder(OrderCertificate),
}

impl OrderVerdict {
    pub fn is_finite(&self) -> bool {
        matches!(self, OrderVerdict::Finite { .. })
    }
}

pub fn finite_order_test(
    f: &Morphism,
    pair: &ProbePair,
    model: &IntegralModel,
    cfg: &OrderConfig,
) -> Result<OrderVerdict, GeometryError> {
    if !f.is_endo() {
        return Err(GeometryError::SourceTargetMismatch {
            expected: f.source().name().to_string(),
            found: f.target().name().to_string(),
        });
    }
    if !is_dominant(f) {
        return Err(GeometryError::NotDominant {
            morphism: format!("{f:?}"),
        });
    }
    let tables = [
        action_on_points(f, &pair.first)?,
        action_on_points(f, &pair.second)?,
    ];
    finite_order_with_tables(f, pair, [&tables[0], &tables[1]], model, cfg)
}

/// [`finite_order_test`] with precomputed action tables; dominance is the
/// caller's responsibility.
pub fn finite_order_with_tables(
    f: &Morphism,
    pair: &ProbePair,
    tables: [&[u32]; 2],
    model: &IntegralModel,
    cfg: &OrderConfig,
) -> Result<OrderVerdict, GeometryError> {
    for (probe, table) in pair.probes().into_iter().zip(tables) {
        if let Some((a, b)) = injectivity_collision(table) {
            let points = probe.points();
            return Ok(OrderVerdict::InfiniteOrder(OrderCertificate::NotInjective {
                prime: probe.prime(),
                a: points[a as usize].clone(),
                b: points[b as usize].clone(),
                image: points[table[a as usize] as usize].clone(),
            }));
        }
    }
    let n0 = permutation_order(tables[0]).ok_or(GeometryError::ExponentOverflow)?;
    let n1 = permutation_order(tables[1]).ok_or(GeometryError::ExponentOverflow)?;
    let g = n0.gcd(&n1);
    let n = (n0 / g).checked_mul(n1).ok_or(GeometryError::ExponentOverflow)?;
    let primes = pair.primes();

    let power = f.power_capped(n, cfg.power_term_cap);
    match power {
        Some(p) if p.is_identity() => {
            let order = descend(f, n, tables, cfg);
            Ok(OrderVerdict::Finite { order })
        }
        Some(p) => Ok(OrderVerdict::InfiniteOrder(OrderCertificate::PowerNotIdentity {
            exponent: n,
            primes,
            evidence: PowerEvidence::NormalForm {
                coords: p.coords().to_vec(),
            },
        })),
        None => {
            let evidence = modular_motion(f, n, model, cfg.prime_bound)?
                .ok_or(GeometryError::PowerTooLarge { exponent: n })?;
            Ok(OrderVerdict::InfiniteOrder(OrderCertificate::PowerNotIdentity {
                exponent: n,
                primes,
                evidence,
            }))
        }
    }
}

/// Exact order from a known period `n`: drop one prime factor at a time while
/// the smaller power is still the identity. A power acting nontrivially at a
/// probe is not the identity, so the table check screens the symbolic one.
fn descend(f: &Morphism, mut n: u64, tables: [&[u32]; 2], cfg: &OrderConfig) -> u64 {
    for q in super::model::prime_factors(n) {
        while n.is_multiple_of(q) {
            let m = n / q;
            let trivial_on_probes = tables.iter().all(|t| is_identity_table(&power_table(t, m)));
            let identity = trivial_on_probes
                && f
                    .power_capped(m, cfg.power_term_cap)
                    .is_some_and(|p| p.is_identity());
            if !identity {
                break;
            }
            n = m;
        }
    }
    n
}

/// Looks for an `F_q`-point of the model with `f^n(a) ≠ a`, `q ∤ D`, using
/// cycle detection on the orbit of `a` so that large `n` stays cheap.
pub fn modular_motion(
    f: &Morphism,
    n: u64,
    model: &IntegralModel,
    prime_bound: u64,
) -> Result<Option<PowerEvidence>, GeometryError> {
    let v = f.source();
    let gens = scaled_generators(v);
    for q in primes_up_to(prime_bound) {
        if !model.admits_prime(q) {
            continue;
        }
        let field = IntegersMod::new(q);
        let Ok(map) = CompiledMap::new(v.nvars(), f.coords(), &field) else {
            continue;
        };
        let Ok(eqs) = CompiledMap::new(v.nvars(), &gens, &field) else {
            continue;
        };
        for a in Odometer::new(q, v.nvars()) {
            if eqs.eval(&field, &a).iter().any(|&x| x != 0) {
                continue;
            }
            let image = iterate_mod(&map, &field, &a, n);
            if image != a {
                return Ok(Some(PowerEvidence::ModularMotion {
                    prime: q,
                    point: a,
                    image,
                }));
            }
        }
    }
    Ok(None)
}

/// `f^n(a)` over `F_q` via the tail/cycle structure of the orbit of `a`.
pub fn iterate_mod(map: &CompiledMap<IntegersMod>, field: &IntegersMod, a: &[u64], n: u64) -> Vec<u64> {
    let mut seen = std::collections::HashMap::new();
    let mut orbit: Vec<Vec<u64>> = Vec::new();
    let mut cur = a.to_vec();
    loop {
        if orbit.len() as u64 == n {
            return cur;
        }
        if let Some(&start) = seen.get(&cur) {
            let start: usize = start;
            let period = (orbit.len() - start) as u64;
            let offset = (n - start as u64) % period;
            return orbit[start + offset as usize].clone();
        }
        seen.insert(cur.clone(), orbit.len());
        orbit.push(cur.clone());
        cur = map.eval(field, &cur);
    }
}
