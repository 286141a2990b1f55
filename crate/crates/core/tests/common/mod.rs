#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use varcat::geometry::{Morphism, Variety};
use varcat::parse::parse_polynomial;
use varcat::poly::Polynomial;
use varcat::quiver::{HomListing, System};

pub fn names(vars: &[&str]) -> Vec<String> {
    vars.iter().map(|s| s.to_string()).collect()
}

pub fn affine(name: &str, vars: &[&str]) -> Arc<Variety> {
    Arc::new(Variety::affine_space(name, vars))
}

pub fn variety(name: &str, vars: &[&str], ideal: &[&str]) -> Arc<Variety> {
    let vs = names(vars);
    let gens = ideal.iter().map(|t| parse_polynomial(t, &vs).unwrap()).collect();
    Arc::new(Variety::new(name, vs, gens).unwrap())
}

pub fn poly(text: &str, vars: &[&str]) -> Polynomial {
    parse_polynomial(text, &names(vars)).unwrap()
}

pub fn morphism(src: &Arc<Variety>, dst: &Arc<Variety>, coords: &[&str]) -> Morphism {
    let coords = coords.iter().map(|t| parse_polynomial(t, src.vars()).unwrap()).collect();
    Morphism::new(src.clone(), dst.clone(), coords).unwrap()
}

/// A system from vertices and `(name, src, dst, coords)` arrows.
pub fn system(vertices: &[Arc<Variety>], arrows: &[(&str, usize, usize, &[&str])]) -> System {
    let mut s = System::new(vertices.to_vec()).unwrap();
    for (name, src, dst, coords) in arrows {
        let m = morphism(&vertices[*src], &vertices[*dst], coords);
        s.add_arrow(name.to_string(), *src, *dst, m).unwrap();
    }
    s
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

/// An integer affine-linear map `x ↦ A x + b` between affine spaces.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineMap {
    pub a: Vec<Vec<BigInt>>,
    pub b: Vec<BigInt>,
}

impl AffineMap {
    pub fn identity(n: usize) -> Self {
        AffineMap {
            a: (0..n)
                .map(|i| (0..n).map(|j| if i == j { int(1) } else { int(0) }).collect())
                .collect(),
            b: vec![int(0); n],
        }
    }

    pub fn src_dim(&self) -> usize {
        self.a.first().map_or(0, Vec::len)
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &AffineMap) -> AffineMap {
        let n = inner.src_dim();
        let a = self
            .a
            .iter()
            .map(|row| {
                (0..n)
                    .map(|j| row.iter().zip(&inner.a).map(|(c, r)| c * &r[j]).fold(int(0), |s, t| s + t))
                    .collect()
            })
            .collect();
        let b = self
            .a
            .iter()
            .zip(&self.b)
            .map(|(row, c)| row.iter().zip(&inner.b).map(|(x, y)| x * y).fold(c.clone(), |s, t| s + t))
            .collect();
        AffineMap { a, b }
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(row, c)| row.iter().zip(x).map(|(r, v)| r * v).fold(c.clone(), |s, t| s + t))
            .collect()
    }

    /// Coordinate strings in the polynomial display format.
    pub fn coord_strings(&self, vars: &[&str]) -> Vec<String> {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(row, c)| {
                let mut terms: Vec<(BigInt, Option<&str>)> = row
                    .iter()
                    .zip(vars)
                    .filter(|(r, _)| !r.is_zero())
                    .map(|(r, v)| (r.clone(), Some(*v)))
                    .collect();
                if !c.is_zero() {
                    terms.push((c.clone(), None));
                }
                if terms.is_empty() {
                    return "0".to_string();
                }
                let mut out = String::new();
                for (k, (coef, var)) in terms.iter().enumerate() {
                    let mag = coef.abs();
                    if k == 0 {
                        if coef.is_negative() {
                            out.push('-');
                        }
                    } else {
                        out.push_str(if coef.is_negative() { " - " } else { " + " });
                    }
                    match var {
                        Some(v) if mag.is_one() => out.push_str(v),
                        Some(v) => out.push_str(&format!("{mag}*{v}")),
                        None => out.push_str(&mag.to_string()),
                    }
                }
                out
            })
            .collect()
    }
}

/// A random affine system: vertex dimensions, and arrows `(src, dst, map)`.
#[derive(Clone, Debug)]
pub struct AffineSystem {
    pub dims: Vec<usize>,
    pub arrows: Vec<(usize, usize, AffineMap)>,
}

pub const VERTEX_NAMES: [&str; 2] = ["A", "B"];

pub fn vertex_vars(v: usize, dim: usize) -> Vec<&'static str> {
    let all: [&[&str]; 2] = [&["x", "y"], &["u", "w"]];
    all[v][..dim].to_vec()
}

impl AffineSystem {
    pub fn build(&self) -> System {
        let vertices: Vec<Arc<Variety>> = self
            .dims
            .iter()
            .enumerate()
            .map(|(i, &d)| affine(VERTEX_NAMES[i], &vertex_vars(i, d)))
            .collect();
        let arrows: Vec<(String, usize, usize, Vec<String>)> = self
            .arrows
            .iter()
            .enumerate()
            .map(|(k, (s, d, m))| (format!("f{k}"), *s, *d, m.coord_strings(&vertex_vars(*s, self.dims[*s]))))
            .collect();
        let mut sys = System::new(vertices.clone()).unwrap();
        for (name, s, d, coords) in arrows {
            let coords: Vec<&str> = coords.iter().map(String::as_str).collect();
            let m = morphism(&vertices[s], &vertices[d], &coords);
            sys.add_arrow(name, s, d, m).unwrap();
        }
        sys
    }

    /// Brute-force closure; `None` when more than `cap` morphisms appear.
    pub fn brute_force_listing(&self, cap: usize) -> Option<HomListing> {
        let mut seen: HashSet<(usize, usize, AffineMap)> = HashSet::new();
        let mut queue = VecDeque::new();
        for (v, &d) in self.dims.iter().enumerate() {
            let id = (v, v, AffineMap::identity(d));
            seen.insert(id.clone());
            queue.push_back(id);
        }
        while let Some((s, d, m)) = queue.pop_front() {
            for (gs, gd, g) in &self.arrows {
                if *gs != d {
                    continue;
                }
                let next = (s, *gd, g.after(&m));
                if seen.insert(next.clone()) {
                    if seen.len() > cap {
                        return None;
                    }
                    queue.push_back(next);
                }
            }
        }
        let mut pairs: std::collections::BTreeMap<(usize, usize), Vec<Vec<String>>> = Default::default();
        for (s, d, m) in seen {
            pairs
                .entry((s, d))
                .or_default()
                .push(m.coord_strings(&vertex_vars(s, self.dims[s])));
        }
        Some(
            pairs
                .into_iter()
                .map(|(k, mut v)| {
                    v.sort();
                    (k, v)
                })
                .collect(),
        )
    }
}

fn random_entry<R: Rng>(rng: &mut R) -> BigInt {
    int(rng.random_range(-2..=2))
}

/// Integer affine map with entries in `[-2, 2]`, biased towards signed
/// permutations, projections and constants so that finite closures occur.
pub fn random_affine_map<R: Rng>(rng: &mut R, src: usize, dst: usize) -> AffineMap {
    let style = rng.random_range(0..4);
    let a: Vec<Vec<BigInt>> = match style {
        0 => (0..dst).map(|_| (0..src).map(|_| random_entry(rng)).collect()).collect(),
        1 => (0..dst)
            .map(|_| {
                let j = rng.random_range(0..src);
                let sign = if rng.random_bool(0.5) { 1 } else { -1 };
                (0..src).map(|k| if k == j { int(sign) } else { int(0) }).collect()
            })
            .collect(),
        2 => (0..dst).map(|_| vec![int(0); src]).collect(),
        _ => {
            let mut rows: Vec<Vec<BigInt>> = Vec::new();
            let mut perm: Vec<usize> = (0..src).collect();
            if rng.random_bool(0.5) {
                perm.reverse();
            }
            for i in 0..dst {
                let j = perm[i % src];
                let sign = if rng.random_bool(0.7) { 1 } else { -1 };
                rows.push((0..src).map(|k| if k == j { int(sign) } else { int(0) }).collect());
            }
            rows
        }
    };
    let b = (0..dst)
        .map(|_| if rng.random_bool(0.6) { int(0) } else { random_entry(rng) })
        .collect();
    AffineMap { a, b }
}

pub fn random_affine_system<R: Rng>(rng: &mut R) -> AffineSystem {
    let nv = rng.random_range(1..=2);
    let dims: Vec<usize> = (0..nv).map(|_| rng.random_range(1..=2)).collect();
    let na = rng.random_range(1..=3);
    let arrows = (0..na)
        .map(|_| {
            let s = rng.random_range(0..nv);
            let d = rng.random_range(0..nv);
            (s, d, random_affine_map(rng, dims[s], dims[d]))
        })
        .collect();
    AffineSystem { dims, arrows }
}

/// Whether every arrow is dominant and all vertices are path-equivalent.
pub fn all_dominant_connected(system: &System) -> bool {
    system.arrows().iter().all(|a| varcat::geometry::is_dominant(a.morphism()))
        && varcat::quiver::path_components(system).classes.len() == 1
}

/// Failures of the groupoid laws in a finite hom table: a morphism without
/// a two-sided inverse, or `|Hom(V, W)| ≠ |End(W)|` for a nonempty hom set.
pub fn groupoid_violations(table: &varcat::quiver::HomTable) -> Vec<String> {
    use varcat::geometry::compose;
    let mut out = Vec::new();
    for (s, d) in table.pairs() {
        let homs = table.hom(s, d);
        if !homs.is_empty() && homs.len() != table.endos(d).len() {
            out.push(format!("|Hom({s},{d})| = {} but |End({d})| = {}", homs.len(), table.endos(d).len()));
        }
        for &i in homs {
            let f = &table.entry(i).morphism;
            let inverse = table.hom(d, s).iter().any(|&j| {
                let g = &table.entry(j).morphism;
                compose(g, f).is_ok_and(|m| m.is_identity()) && compose(f, g).is_ok_and(|m| m.is_identity())
            });
            if !inverse {
                out.push(format!("{:?} has no inverse", f.coord_strings()));
            }
        }
    }
    out
}
