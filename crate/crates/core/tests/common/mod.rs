#![allow(dead_code)]

use smoothjoin_core::geometry::{RationalPoint, Simplex, Simplotope};
use smoothjoin_core::{int, Patch, Rational, SimplexPatch};

pub fn p(c: &[i64]) -> RationalPoint {
    RationalPoint::from_ints(c)
}

pub fn v(c: &[i64]) -> Vec<Rational> {
    c.iter().map(|&x| int(x)).collect()
}

pub fn patch(id: &str, base: &[i64], blocks: &[&[&[i64]]], degrees: &[u32]) -> Patch {
    let blocks = blocks.iter().map(|b| b.iter().map(|d| v(d)).collect()).collect();
    Patch::new(id, Simplotope::new(p(base), blocks).unwrap(), degrees.to_vec()).unwrap()
}

/// Triangles sharing the edge (0,3)-(0,0), cubic.
pub fn cubic_triangles() -> (SimplexPatch, SimplexPatch) {
    let left = Simplex::new(vec![p(&[-3, 1]), p(&[0, 3]), p(&[0, 0])]).unwrap();
    let right = Simplex::new(vec![p(&[0, 3]), p(&[0, 0]), p(&[3, 2])]).unwrap();
    (SimplexPatch::new("P", left, 3), SimplexPatch::new("Q", right, 3))
}

/// Square [-1,0]x[0,1] next to the triangle (0,0),(0,1),(1,0).
pub fn square_triangle(degree: u32) -> (Patch, Patch) {
    (
        patch("S", &[0, 0], &[&[&[-1, 0]], &[&[0, 1]]], &[degree, degree]),
        patch("T", &[0, 0], &[&[&[0, 1], &[1, 0]]], &[degree]),
    )
}

/// Triangle x triangle next to segment x tetrahedron in R^4.
pub fn smoke_pair() -> (Patch, Patch) {
    (
        patch("P", &[0, 0, 0, 0], &[&[&[1, 0, 0, 0], &[0, 1, 0, 0]], &[&[0, 0, 1, 0], &[0, 0, 0, 1]]], &[1, 1]),
        patch("Q", &[0, 0, 0, 0], &[&[&[1, 0, 0, 0]], &[&[0, 0, 1, 0], &[0, 0, 0, 1], &[0, -1, 0, 0]]], &[1, 1]),
    )
}

use smoothjoin_core::bernstein::TensorPolynomial;
use smoothjoin_core::continuity::{ConditionSet, Side};
use smoothjoin_core::geometry::detect_shared_facet;
use smoothjoin_core::verify::{expand_to_monomials, sample_facet, Monomials};

fn unit_expansion(patch: &Patch, hot: &smoothjoin_core::BlockedMultiIndex) -> Monomials {
    let poly = TensorPolynomial::from_fn(patch.simplotope.clone(), patch.degrees.clone(), |k| {
        if k == hot { int(1) } else { int(0) }
    });
    expand_to_monomials(&poly).unwrap()
}

/// All partial derivatives of order <= r of `left - right`, at facet samples,
/// as linear functionals over `cs.columns()`. Its row space is the exact
/// space of C^r constraints when enough samples are taken.
pub fn oracle_rows(left: &Patch, right: &Patch, cs: &ConditionSet, samples: usize) -> Vec<Vec<Rational>> {
    let n = left.simplotope.ambient();
    let facet = detect_shared_facet(&left.simplotope, &right.simplotope).unwrap().unwrap().facet;
    let points = sample_facet(&facet, samples, 11);
    let mut combos: Vec<Vec<usize>> = vec![vec![]];
    let mut frontier = combos.clone();
    for _ in 0..cs.order {
        let mut next = Vec::new();
        for m in &frontier {
            for j in m.last().copied().unwrap_or(0)..n {
                let mut m2 = m.clone();
                m2.push(j);
                next.push(m2);
            }
        }
        combos.extend(next.clone());
        frontier = next;
    }
    let cols = cs.columns();
    let expansions: Vec<Monomials> = cols
        .iter()
        .map(|c| match c.side {
            Side::Left => unit_expansion(left, &c.index),
            Side::Right => unit_expansion(right, &c.index).scaled(&int(-1)),
        })
        .collect();
    let mut rows = Vec::new();
    for combo in &combos {
        let derived: Vec<Monomials> =
            expansions.iter().map(|m| combo.iter().fold(m.clone(), |acc, &j| acc.partial(j))).collect();
        for x in &points {
            rows.push(derived.iter().map(|m| m.evaluate(x)).collect());
        }
    }
    rows
}

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smoothjoin_core::linalg::rank;
use smoothjoin_core::ratio;

/// Cospatial template pairs in integer coordinates, with degrees drawn from
/// `rng`. Returns the pair and the largest admissible order.
fn template(kind: usize, rng: &mut ChaCha8Rng) -> (Patch, Patch, u32) {
    let mut d = || rng.gen_range(1..=3u32);
    let (a, b, c) = (d(), d(), d());
    match kind {
        0 => (
            patch("sq", &[0, 0], &[&[&[-1, 0]], &[&[0, 1]]], &[a, b]),
            patch("tri", &[0, 0], &[&[&[0, 1], &[1, 0]]], &[b]),
            a,
        ),
        1 => (
            patch("sqL", &[0, 0], &[&[&[1, 0]], &[&[0, 1]]], &[a, b]),
            patch("sqR", &[1, 0], &[&[&[1, 0]], &[&[0, 1]]], &[a, b]),
            a,
        ),
        2 => (
            patch("triL", &[0, 0], &[&[&[-2, 1], &[0, 3]]], &[a]),
            patch("triR", &[0, 0], &[&[&[0, 3], &[3, 2]]], &[a]),
            a,
        ),
        3 => (
            patch("cube", &[0, 0, 0], &[&[&[-1, 0, 0]], &[&[0, 1, 0]], &[&[0, 0, 1]]], &[a, b, c]),
            patch("prism", &[0, 0, 0], &[&[&[0, 1, 0], &[1, 0, 0]], &[&[0, 0, 1]]], &[b, c]),
            a,
        ),
        4 => (
            patch("prism", &[0, 0, 0], &[&[&[1, 0, 0], &[0, 1, 0]], &[&[0, 0, 1]]], &[a, b]),
            patch("tet", &[0, 0, 0], &[&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]]], &[a]),
            b,
        ),
        _ => (
            patch("prismL", &[0, 0, 0], &[&[&[0, 1, 0], &[-1, 0, 0]], &[&[0, 0, 1]]], &[a, b]),
            patch("prismR", &[0, 0, 0], &[&[&[0, 1, 0], &[1, 0, 0]], &[&[0, 0, 1]]], &[a, b]),
            a,
        ),
    }
}

fn random_map(n: usize, rng: &mut ChaCha8Rng) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    loop {
        let q = rng.gen_range(1..=3);
        let m: Vec<Vec<Rational>> =
            (0..n).map(|_| (0..n).map(|_| ratio(rng.gen_range(-2..=2), q)).collect()).collect();
        if rank(&m) == n {
            let t = (0..n).map(|_| ratio(rng.gen_range(-6..=6), rng.gen_range(1..=4))).collect();
            return (m, t);
        }
    }
}

fn apply(m: &[Vec<Rational>], x: &[Rational]) -> Vec<Rational> {
    m.iter().map(|row| row.iter().zip(x).fold(int(0), |acc, (a, b)| acc + a * b)).collect()
}

fn mapped(p: &Patch, m: &[Vec<Rational>], t: &[Rational]) -> Patch {
    let base: Vec<Rational> = apply(m, p.simplotope.base().coords()).iter().zip(t).map(|(a, b)| a + b).collect();
    let blocks = p.simplotope.blocks().iter().map(|b| b.iter().map(|d| apply(m, d)).collect()).collect();
    Patch::new(p.id.clone(), Simplotope::new(RationalPoint::new(base), blocks).unwrap(), p.degrees.clone()).unwrap()
}

/// Randomly placed cospatial pairs with an order `r <= min(2, oof degree)`.
/// Every template appears before any repeats.
pub fn random_pairs(count: usize, seed: u64) -> Vec<(Patch, Patch, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let (l, r, max) = template(i % 6, &mut rng);
            let (m, t) = random_map(l.simplotope.ambient(), &mut rng);
            let order = rng.gen_range(0..=max.min(2));
            let (l, r) = (mapped(&l, &m, &t), mapped(&r, &m, &t));
            if rng.gen_bool(0.5) { (r, l, order) } else { (l, r, order) }
        })
        .collect()
}
