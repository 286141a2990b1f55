//! Local probes: a prime `p`, a smooth `F_p`-point `x` of the integral model,
//! and the finite ring `A/J²` where `A` is the local ring at `x` and `J` its
//! maximal ideal.
//!
//! At a smooth point of a flat model of relative dimension `e`, `A/J²` is
//! `Z/p² ⊕ F_p τ_1 ⊕ … ⊕ F_p τ_e` with `τ_i τ_j = 0` and `p τ_i = 0`.
//! The probe enumerates every `A/J²`-valued point of the model; morphisms act
//! on that finite set by composition.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::poly::{CompiledMap, CompiledPolynomial, EvalRing, IntegersMod, PolyError, Polynomial, Rational};

use super::model::{primes_up_to, scaled_generators};
use super::{GeometryError, IntegralModel, Morphism, Variety};

/// Element `u + Σ b_i τ_i` with `u ∈ Z/p²` and `b_i ∈ F_p`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct TruncElem {
    pub u: u32,
    pub b: SmallVec<[u32; 4]>,
}

impl fmt::Display for TruncElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.u)?;
        for (i, b) in self.b.iter().enumerate() {
            if *b != 0 {
                write!(f, "+{}t{}", b, i + 1)?;
            }
        }
        Ok(())
    }
}

/// The ring `Z/p²[τ_1..τ_e] / (τ_iτ_j, pτ_i)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncatedRing {
    p: u32,
    p2: u32,
    e: usize,
}

impl TruncatedRing {
    pub fn new(p: u64, e: usize) -> Self {
        assert!((2..(1 << 15)).contains(&p), "probe primes are small");
        TruncatedRing {
            p: p as u32,
            p2: (p * p) as u32,
            e,
        }
    }

    pub fn prime(&self) -> u64 {
        self.p as u64
    }

    pub fn tangent_rank(&self) -> usize {
        self.e
    }

    pub fn order(&self) -> u64 {
        (self.p2 as u64) * (self.p as u64).pow(self.e as u32)
    }

    pub fn elem(&self, u: u64, b: &[u64]) -> TruncElem {
        assert_eq!(b.len(), self.e);
        TruncElem {
            u: (u % self.p2 as u64) as u32,
            b: b.iter().map(|&x| (x % self.p as u64) as u32).collect(),
        }
    }

    /// The generator `τ_i` (zero-based index).
    pub fn tau(&self, i: usize) -> TruncElem {
        let mut b = vec![0; self.e];
        b[i] = 1;
        self.elem(0, &b)
    }

    /// Every element, in a fixed order.
    pub fn elements(&self) -> Vec<TruncElem> {
        let mut out = Vec::new();
        for u in 0..self.p2 as u64 {
            for b in Odometer::new(self.p as u64, self.e) {
                out.push(self.elem(u, &b));
            }
        }
        out
    }
}

impl EvalRing for TruncatedRing {
    type Elem = TruncElem;

    fn zero(&self) -> TruncElem {
        TruncElem {
            u: 0,
            b: SmallVec::from_elem(0, self.e),
        }
    }

    fn one(&self) -> TruncElem {
        TruncElem {
            u: 1,
            b: SmallVec::from_elem(0, self.e),
        }
    }

    fn add(&self, a: &TruncElem, b: &TruncElem) -> TruncElem {
        TruncElem {
            u: (a.u + b.u) % self.p2,
            b: a.b.iter().zip(&b.b).map(|(x, y)| (x + y) % self.p).collect(),
        }
    }

    fn mul(&self, a: &TruncElem, b: &TruncElem) -> TruncElem {
        let (ua, ub) = (a.u % self.p, b.u % self.p);
        TruncElem {
            u: ((a.u as u64 * b.u as u64) % self.p2 as u64) as u32,
            b: a.b
                .iter()
                .zip(&b.b)
                .map(|(x, y)| (ua * y + ub * x) % self.p)
                .collect(),
        }
    }

    fn neg(&self, a: &TruncElem) -> TruncElem {
        TruncElem {
            u: (self.p2 - a.u) % self.p2,
            b: a.b.iter().map(|x| (self.p - x) % self.p).collect(),
        }
    }

    fn embed_rational(&self, q: &Rational) -> Result<TruncElem, PolyError> {
        let u = IntegersMod::new(self.p2 as u64).embed_rational(q)?;
        Ok(TruncElem {
            u: u as u32,
            b: SmallVec::from_elem(0, self.e),
        })
    }
}

/// All tuples in `{0..base-1}^len`, last coordinate fastest.
pub(crate) struct Odometer {
    base: u64,
    current: Option<Vec<u64>>,
}

impl Odometer {
    pub(crate) fn new(base: u64, len: usize) -> Self {
        Odometer {
            base,
            current: Some(vec![0; len]),
        }
    }
}

impl Iterator for Odometer {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.current.clone()?;
        let mut next = out.clone();
        let mut i = next.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            next[i] += 1;
            if next[i] < self.base {
                self.current = Some(next);
                break;
            }
            next[i] = 0;
        }
        Some(out)
    }
}

/// Row-reduce over `F_p`; returns the rank and a basis of the right kernel.
pub(crate) fn rank_and_kernel(rows: &[Vec<u64>], ncols: usize, p: u64) -> (usize, Vec<Vec<u64>>) {
    let field = IntegersMod::new(p);
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(r) = (row..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, r);
        let inv = field.inverse(m[row][col]).unwrap();
        for x in m[row].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..m.len() {
            if r != row && m[r][col] != 0 {
                let factor = m[r][col];
                let pivot_row = m[row].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot_row).take(ncols) {
                    *x = (*x + p * p - factor * y % p) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    let rank = pivots.len();
    let mut kernel = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0; ncols];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = (p - m[r][free]) % p;
        }
        kernel.push(v);
    }
    (rank, kernel)
}

/// A probe at one prime: the smooth point certifying the structure of
/// `A/J²`, and the full point set of the model over that ring.
#[derive(Clone, Debug)]
pub struct LocalProbe {
    prime: u64,
    point: Vec<u64>,
    jacobian_rank: usize,
    ring: TruncatedRing,
    generators: Vec<Polynomial>,
    points: Vec<Vec<TruncElem>>,
    index: HashMap<Vec<TruncElem>, u32>,
}

impl LocalProbe {
    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// The smooth `F_p`-point the probe is attached to.
    pub fn point(&self) -> &[u64] {
        &self.point
    }

    pub fn jacobian_rank(&self) -> usize {
        self.jacobian_rank
    }

    pub fn ring(&self) -> &TruncatedRing {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn points(&self) -> &[Vec<TruncElem>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, point: &[TruncElem]) -> Option<u32> {
        self.index.get(point).copied()
    }

    /// Whether `point` is an `A/J²`-point of the model (checked directly
    /// against the generators, independent of the enumeration).
    pub fn satisfies_equations(&self, point: &[TruncElem]) -> bool {
        point.len() == self.point.len()
            && self.generators.iter().all(|g| {
                g.evaluate(&self.ring, point)
                    .map(|v| self.ring.is_zero(&v))
                    .unwrap_or(false)
            })
    }
}

#[derive(Clone, Debug)]
pub struct ProbePair {
    pub first: LocalProbe,
    pub second: LocalProbe,
}

impl ProbePair {
    pub fn primes(&self) -> (u64, u64) {
        (self.first.prime, self.second.prime)
    }

    pub fn probes(&self) -> [&LocalProbe; 2] {
        [&self.first, &self.second]
    }
}

/// Try to build a probe at `p`. `Ok(None)` means the model has no smooth
/// `F_p`-point.
pub fn find_probe_at(
    v: &Variety,
    p: u64,
    point_cap: usize,
) -> Result<Option<LocalProbe>, GeometryError> {
    let n = v.nvars();
    let dim = v.dimension();
    let gens = scaled_generators(v);
    let fp = IntegersMod::new(p);
    let zp2 = IntegersMod::new(p * p);
    let compile = |ring: &IntegersMod| -> Result<Vec<CompiledPolynomial<IntegersMod>>, GeometryError> {
        gens.iter()
            .map(|g| CompiledPolynomial::new(g, ring).map_err(GeometryError::from))
            .collect()
    };
    let gens_p = compile(&fp)?;
    let gens_p2 = compile(&zp2)?;
    let jac: Vec<Vec<CompiledPolynomial<IntegersMod>>> = gens
        .iter()
        .map(|g| {
            (0..n)
                .map(|i| CompiledPolynomial::new(&g.derivative(i), &fp).map_err(GeometryError::from))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let jacobian_at = |a: &[u64]| -> Vec<Vec<u64>> {
        jac.iter()
            .map(|row| row.iter().map(|d| d.eval(&fp, a)).collect())
            .collect()
    };

    let fiber_points: Vec<Vec<u64>> = Odometer::new(p, n)
        .filter(|a| gens_p.iter().all(|g| g.eval(&fp, a) == 0))
        .collect();

    // first smooth point whose relation matrix has the expected shape
    let mut chosen = None;
    for a in &fiber_points {
        let j = jacobian_at(a);
        let (rank, _) = rank_and_kernel(&j, n, p);
        if rank + dim != n {
            continue;
        }
        // [g(a)/p | ∇g(a)] over the integer lift of a
        let augmented: Vec<Vec<u64>> = gens_p2
            .iter()
            .zip(&j)
            .map(|(g, row)| {
                let val = g.eval(&zp2, a);
                debug_assert_eq!(val % p, 0);
                let mut r = vec![val / p];
                r.extend_from_slice(row);
                r
            })
            .collect();
        let (aug_rank, _) = rank_and_kernel(&augmented, n + 1, p);
        if aug_rank != rank {
            continue;
        }
        chosen = Some((a.clone(), rank));
        break;
    }
    let Some((point, jacobian_rank)) = chosen else {
        return Ok(None);
    };
    let e = n - jacobian_rank;
    let ring = TruncatedRing::new(p, e);

    // Z(A/J²): u ≡ lift of a fiber point with g(u) ≡ 0 mod p², and every
    // tangent column in the kernel of the Jacobian at ū.
    let mut blocks: Vec<(Vec<u64>, Vec<Vec<u64>>)> = Vec::new();
    let mut total: u128 = 0;
    for a in &fiber_points {
        let lifts: Vec<Vec<u64>> = Odometer::new(p, n)
            .map(|c| a.iter().zip(&c).map(|(x, y)| x + p * y).collect::<Vec<u64>>())
            .filter(|u| gens_p2.iter().all(|g| g.eval(&zp2, u) == 0))
            .collect();
        if lifts.is_empty() {
            continue;
        }
        let (_, kernel) = rank_and_kernel(&jacobian_at(a), n, p);
        let tangent: Vec<Vec<u64>> = Odometer::new(p, kernel.len())
            .map(|coeffs| {
                (0..n)
                    .map(|i| {
                        kernel
                            .iter()
                            .zip(&coeffs)
                            .map(|(k, c)| k[i] * c)
                            .sum::<u64>()
                            % p
                    })
                    .collect()
            })
            .collect();
        total += lifts.len() as u128 * (tangent.len() as u128).pow(e as u32);
        if total > point_cap as u128 {
            return Err(GeometryError::PointSetCapExceeded {
                variety: v.name().to_string(),
                prime: p,
                cap: point_cap,
            });
        }
        for u in lifts {
            blocks.push((u, tangent.clone()));
        }
    }

    let mut points = Vec::with_capacity(total as usize);
    for (u, tangent) in &blocks {
        for choice in Odometer::new(tangent.len() as u64, e) {
            let pt: Vec<TruncElem> = (0..n)
                .map(|i| {
                    let b: Vec<u64> = choice.iter().map(|&t| tangent[t as usize][i]).collect();
                    ring.elem(u[i], &b)
                })
                .collect();
            points.push(pt);
        }
    }
    points.sort();
    let index = points
        .iter()
        .enumerate()
        .map(|(i, pt)| (pt.clone(), i as u32))
        .collect();
    Ok(Some(LocalProbe {
        prime: p,
        point,
        jacobian_rank,
        ring,
        generators: gens,
        points,
        index,
    }))
}

/// Probes at the two smallest admissible primes (not dividing `D`, with a
/// smooth rational point) up to `prime_bound`.
pub fn find_probe_pair(
    v: &Variety,
    model: &IntegralModel,
    prime_bound: u64,
    point_cap: usize,
) -> Result<ProbePair, GeometryError> {
    let mut found = Vec::new();
    let mut notes = Vec::new();
    for p in primes_up_to(prime_bound) {
        if !model.admits_prime(p) {
            notes.push(format!("{p}: divides D"));
            continue;
        }
        match find_probe_at(v, p, point_cap)? {
            Some(probe) => found.push(probe),
            None => notes.push(format!("{p}: no smooth rational point")),
        }
        if found.len() == 2 {
            let second = found.pop().unwrap();
            let first = found.pop().unwrap();
            return Ok(ProbePair { first, second });
        }
    }
    Err(GeometryError::NoProbeFound {
        variety: v.name().to_string(),
        prime_bound,
        diagnostics: notes,
    })
}

/// Self-map of the probe's point set induced by an endomorphism: each point
/// `φ` goes to `f ∘ φ`.
pub fn action_on_points(f: &Morphism, probe: &LocalProbe) -> Result<Vec<u32>, GeometryError> {
    let ring = &probe.ring;
    let map = CompiledMap::new(f.source().nvars(), f.coords(), ring)?;
    probe
        .points
        .iter()
        .map(|pt| {
            let image = map.eval(ring, pt);
            probe
                .index_of(&image)
                .ok_or(GeometryError::ImageOutsidePointSet {
                    prime: probe.prime,
                })
        })
        .collect()
}
