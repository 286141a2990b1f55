use std::cmp::Ordering;
use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Monomial, MonomialOrder, Polynomial, Rational};

/// Terms in ascending order, so the leading term sits at the end.
type Terms = Vec<(Monomial, Rational)>;

/// Reduced Gröbner basis: monic elements sorted by leading monomial
/// (largest first), leading monomials pairwise non-divisible.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    order: MonomialOrder,
    nvars: usize,
    elements: Vec<Polynomial>,
    leads: Vec<Monomial>,
    sorted: Vec<Terms>,
    denominator_lcm: BigInt,
}

impl PartialEq for GroebnerBasis {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.nvars == other.nvars && self.elements == other.elements
    }
}

impl Eq for GroebnerBasis {}

impl GroebnerBasis {
    fn from_reduced(order: MonomialOrder, nvars: usize, mut sorted: Vec<Terms>) -> Self {
        sorted.sort_by(|a, b| order.cmp(&b.last().unwrap().0, &a.last().unwrap().0));
        let elements: Vec<Polynomial> = sorted
            .iter()
            .map(|t| Polynomial::from_terms(nvars, t.iter().cloned()))
            .collect();
        let leads = sorted.iter().map(|t| t.last().unwrap().0.clone()).collect();
        let denominator_lcm = elements
            .iter()
            .fold(BigInt::one(), |acc, p| acc.lcm(&p.denominator_lcm()));
        GroebnerBasis {
            order,
            nvars,
            elements,
            leads,
            sorted,
            denominator_lcm,
        }
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn leading_monomials(&self) -> &[Monomial] {
        &self.leads
    }

    pub fn denominator_lcm(&self) -> &BigInt {
        &self.denominator_lcm
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// True when the basis is `{1}`, i.e. the ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.leads.len() == 1 && self.leads[0].is_one()
    }

    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        assert_eq!(p.nvars(), self.nvars, "ambient mismatch in normal form");
        if self.elements.is_empty() || p.is_zero() {
            return p.clone();
        }
        let refs: Vec<&Terms> = self.sorted.iter().collect();
        let rem = reduce(ascending(p, &self.order), &refs, &self.order);
        Polynomial::from_terms(self.nvars, rem)
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.normal_form(p).is_zero()
    }
}

fn ascending(p: &Polynomial, order: &MonomialOrder) -> Terms {
    let mut t = p.sorted_terms(order);
    t.reverse();
    t
}

/// `a - c * m * b`, all lists ascending.
fn sub_mul(a: Terms, c: &Rational, m: &Monomial, b: &Terms, order: &MonomialOrder) -> Terms {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut ia = a.into_iter().peekable();
    let mut ib = b.iter().map(|(bm, bc)| (bm.mul(m), -(bc * c))).peekable();
    loop {
        let ord = match (ia.peek(), ib.peek()) {
            (None, None) => break,
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (Some(x), Some(y)) => order.cmp(&x.0, &y.0),
        };
        match ord {
            Ordering::Less => out.push(ia.next().unwrap()),
            Ordering::Greater => out.push(ib.next().unwrap()),
            Ordering::Equal => {
                let (m1, c1) = ia.next().unwrap();
                let (_, c2) = ib.next().unwrap();
                let s = c1 + c2;
                if !s.is_zero() {
                    out.push((m1, s));
                }
            }
        }
    }
    out
}

/// Full reduction of `p` by monic ascending divisors.
fn reduce(mut p: Terms, divisors: &[&Terms], order: &MonomialOrder) -> Terms {
    let mut rem: Terms = Vec::new();
    while let Some((m, c)) = p.last().cloned() {
        let hit = divisors
            .iter()
            .find_map(|d| m.div(&d.last().unwrap().0).map(|q| (q, *d)));
        match hit {
            Some((q, d)) => {
                p = sub_mul(p, &c, &q, d, order);
            }
            None => {
                p.pop();
                rem.push((m, c));
            }
        }
    }
    rem.reverse();
    rem
}

fn make_monic(mut t: Terms) -> Terms {
    let lc = t.last().unwrap().1.clone();
    if !lc.is_one() {
        let inv = lc.recip();
        for (_, c) in t.iter_mut() {
            *c *= &inv;
        }
    }
    t
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u64,
}

/// Reduced Gröbner basis of the ideal generated by `generators`.
///
/// Buchberger's algorithm with the coprime-leading-term and chain criteria
/// and sugar-degree pair selection. Ties are broken by the order on the
/// pair lcm, then by pair indices, so the run is deterministic; the output
/// is the unique reduced basis and therefore independent of generator order.
pub fn buchberger(generators: &[Polynomial], nvars: usize, order: &MonomialOrder) -> GroebnerBasis {
    let mut basis: Vec<Terms> = Vec::new();
    let mut sugar: Vec<u64> = Vec::new();
    for g in generators {
        assert_eq!(g.nvars(), nvars, "generator ambient mismatch");
        if g.is_zero() {
            continue;
        }
        sugar.push(g.total_degree());
        basis.push(make_monic(ascending(g, order)));
    }
    let lead = |t: &Terms| t.last().unwrap().0.clone();

    let mut pairs: Vec<Pair> = Vec::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    let new_pair = |i: usize, j: usize, basis: &[Terms], sugar: &[u64]| {
        let (li, lj) = (lead(&basis[i]), lead(&basis[j]));
        let lcm = li.lcm(&lj);
        let d = lcm.degree();
        let s = (sugar[i] + d - li.degree()).max(sugar[j] + d - lj.degree());
        Pair { i, j, lcm, sugar: s }
    };
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push(new_pair(i, j, &basis, &sugar));
            pending.insert((i, j));
        }
    }

    while !pairs.is_empty() {
        let best = (0..pairs.len())
            .min_by(|&a, &b| {
                let (pa, pb) = (&pairs[a], &pairs[b]);
                pa.sugar
                    .cmp(&pb.sugar)
                    .then_with(|| order.cmp(&pa.lcm, &pb.lcm))
                    .then_with(|| (pa.i, pa.j).cmp(&(pb.i, pb.j)))
            })
            .unwrap();
        let pair = pairs.swap_remove(best);
        pending.remove(&(pair.i, pair.j));

        let (li, lj) = (lead(&basis[pair.i]), lead(&basis[pair.j]));
        if li.is_coprime(&lj) {
            continue;
        }
        let chain = (0..basis.len()).any(|k| {
            k != pair.i
                && k != pair.j
                && lead(&basis[k]).divides(&pair.lcm)
                && !pending.contains(&(pair.i.min(k), pair.i.max(k)))
                && !pending.contains(&(pair.j.min(k), pair.j.max(k)))
        });
        if chain {
            continue;
        }

        let qi = pair.lcm.div(&li).unwrap();
        let qj = pair.lcm.div(&lj).unwrap();
        let shifted: Terms = basis[pair.i]
            .iter()
            .map(|(m, c)| (m.mul(&qi), c.clone()))
            .collect();
        let s = sub_mul(shifted, &Rational::one(), &qj, &basis[pair.j], order);
        let refs: Vec<&Terms> = basis.iter().collect();
        let r = reduce(s, &refs, order);
        if r.is_empty() {
            continue;
        }
        let r = make_monic(r);
        if r.last().unwrap().0.is_one() {
            return GroebnerBasis::from_reduced(order.clone(), nvars, vec![r]);
        }
        basis.push(r);
        sugar.push(pair.sugar);
        let n = basis.len() - 1;
        for k in 0..n {
            pairs.push(new_pair(k, n, &basis, &sugar));
            pending.insert((k, n));
        }
    }

    // minimal basis, then inter-reduction
    let mut keep: Vec<usize> = Vec::new();
    for i in 0..basis.len() {
        let li = lead(&basis[i]);
        let redundant = (0..basis.len()).any(|j| {
            if j == i {
                return false;
            }
            let lj = lead(&basis[j]);
            lj.divides(&li) && (lj != li || j < i)
        });
        if !redundant {
            keep.push(i);
        }
    }
    let minimal: Vec<Terms> = keep.into_iter().map(|i| basis[i].clone()).collect();
    let mut reduced = Vec::with_capacity(minimal.len());
    for (i, g) in minimal.iter().enumerate() {
        let others: Vec<&Terms> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, t)| t)
            .collect();
        reduced.push(make_monic(reduce(g.clone(), &others, order)));
    }
    GroebnerBasis::from_reduced(order.clone(), nvars, reduced)
}
