//! Independent checks of generated conditions.
//!
//! Patches are expanded into monomials in ambient coordinates, so derivatives
//! can be taken termwise without De Casteljau. A check compares every mixed
//! derivative of order `≤ r` along `u` and the facet tangents, on both sides,
//! at pseudo-random interior points of the facet. Both evaluators must agree
//! with each other and across the facet, exactly.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bernstein::{TensorCoeffs, TensorPolynomial};
use crate::continuity::{ColumnKey, ConditionSet, CoefficientRef, Patch, Side, SmoothnessSystem};
use crate::geometry::{detect_shared_facet, scale, RationalPoint, SimplotopeCoords, Simplotope};
use crate::linalg;
use crate::multiindex::{enumerate_blocked, factorial, BlockedMultiIndex, MultiIndex};
use crate::{Error, Rational, Result};

/// Polynomial in ambient coordinates, keyed by exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomials {
    vars: usize,
    terms: BTreeMap<MultiIndex, Rational>,
}

impl Monomials {
    pub fn zero(vars: usize) -> Self {
        Monomials { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: usize, c: Rational) -> Self {
        let mut m = Self::zero(vars);
        m.add_term(MultiIndex::zeros(vars), c);
        m
    }

    /// `c0 + Σ lin_k x_k`
    pub fn affine(c0: Rational, lin: &[Rational]) -> Self {
        let mut m = Self::constant(lin.len(), c0);
        for (k, c) in lin.iter().enumerate() {
            m.add_term(MultiIndex::unit(lin.len(), k, 1), c.clone());
        }
        m
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, exponent: &MultiIndex) -> Rational {
        self.terms.get(exponent).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, e: MultiIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Monomials) -> Monomials {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scaled(&self, s: &Rational) -> Monomials {
        let mut out = Self::zero(self.vars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Monomials) -> Monomials {
        let mut out = Self::zero(self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.add(e2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Monomials {
        (0..k).fold(Self::constant(self.vars, Rational::one()), |acc, _| acc.mul(self))
    }

    pub fn partial(&self, var: usize) -> Monomials {
        let mut out = Self::zero(self.vars);
        for (e, c) in &self.terms {
            let p = e.get(var);
            if p == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2.set(var, p - 1);
            out.add_term(e2, c * Rational::from_integer(BigInt::from(p)));
        }
        out
    }

    pub fn directional(&self, u: &[Rational]) -> Monomials {
        u.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(Self::zero(self.vars), |acc, (k, c)| acc.add(&self.partial(k).scaled(c)))
    }

    pub fn evaluate(&self, x: &RationalPoint) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, (e, c)| acc + c * e.power(x.coords()))
    }
}

/// Per-factor barycentric coordinates as affine functions of the ambient
/// coordinates. Needs a full-dimensional simplotope.
fn coordinate_functions(s: &Simplotope) -> Result<Vec<Vec<Monomials>>> {
    let n = s.ambient();
    if s.dim() != n {
        return Err(Error::DegenerateSimplex);
    }
    let at_base = s.coords(s.base())?;
    let unit: Vec<Vec<Vec<Rational>>> = (0..n)
        .map(|k| {
            let mut e = vec![Rational::zero(); n];
            e[k] = Rational::one();
            s.decompose(&e)
        })
        .collect::<Result<_>>()?;
    Ok((0..s.num_blocks())
        .map(|i| {
            let b0 = at_base.block(i).weights();
            (0..b0.len())
                .map(|j| {
                    let lin: Vec<Rational> = (0..n).map(|k| unit[k][i][j].clone()).collect();
                    // Constant term so that the value at the origin is right.
                    let c0 = &b0[j] - lin.iter().zip(s.base().coords()).fold(Rational::zero(), |a, (l, x)| a + l * x);
                    Monomials::affine(c0, &lin)
                })
                .collect()
        })
        .collect())
}

/// Exact monomial expansion of a tensor-product Bernstein polynomial.
pub fn expand_to_monomials(poly: &TensorPolynomial) -> Result<Monomials> {
    let funcs = coordinate_functions(&poly.simplotope)?;
    let vars = poly.simplotope.ambient();
    // powers[i][j][p] = a_ij^p
    let powers: Vec<Vec<Vec<Monomials>>> = funcs
        .iter()
        .zip(&poly.degrees)
        .map(|(block, &d)| {
            block
                .iter()
                .map(|f| {
                    let mut v = vec![Monomials::constant(vars, Rational::one())];
                    for p in 1..=d as usize {
                        let next = v[p - 1].mul(f);
                        v.push(next);
                    }
                    v
                })
                .collect()
        })
        .collect();
    let mut out = Monomials::zero(vars);
    for (k, c) in &poly.coefficients {
        if c.is_zero() {
            continue;
        }
        let mut term = Monomials::constant(vars, c.clone());
        for (i, ki) in k.blocks().iter().enumerate() {
            let m = Rational::from_integer(factorial(poly.degrees[i]) / ki.factorial());
            term = term.scaled(&m);
            for (j, &p) in ki.entries().iter().enumerate() {
                if p > 0 {
                    term = term.mul(&powers[i][j][p as usize]);
                }
            }
        }
        out = out.add(&term);
    }
    Ok(out)
}

fn random_weights(rng: &mut ChaCha8Rng, len: usize) -> Vec<Rational> {
    let raw: Vec<i64> = (0..len).map(|_| rng.gen_range(1..=16)).collect();
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|w| crate::ratio(w, total)).collect()
}

/// Reproducible rational points strictly inside `facet`.
pub fn sample_facet(facet: &Simplotope, count: usize, seed: u64) -> Vec<RationalPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let blocks = facet
                .nu()
                .iter()
                .map(|&n| crate::geometry::BarycentricPoint::new(random_weights(&mut rng, n + 1)).expect("weights sum to 1"))
                .collect();
            facet.point_at(&SimplotopeCoords::new(blocks))
        })
        .collect()
}

/// One mismatching derivative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub point: RationalPoint,
    pub order: u32,
    pub directions: Vec<Vec<Rational>>,
    pub lhs: Rational,
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub pair: String,
    pub orders: Vec<u32>,
    pub samples: usize,
    pub max_discrepancy: Rational,
    pub passed: bool,
    pub failures: Vec<Failure>,
}

const MAX_REPORTED: usize = 16;

fn multisets(n: usize, r: u32) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..r {
        let mut next = Vec::new();
        for m in &frontier {
            let start = m.last().copied().unwrap_or(0);
            for j in start..n {
                let mut m2: Vec<usize> = m.clone();
                m2.push(j);
                next.push(m2);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Compares all derivatives of order `≤ r` along `u` and the facet tangents
/// across the shared facet. Does not look at the conditions themselves.
pub fn check_smoothness(
    left: &TensorPolynomial,
    right: &TensorPolynomial,
    u: &[Rational],
    r: u32,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let info = detect_shared_facet(&left.simplotope, &right.simplotope)?.ok_or(Error::NoSharedFacet)?;
    let mut dirs = vec![u.to_vec()];
    dirs.extend(info.facet_directions());
    let ml = expand_to_monomials(left)?;
    let mr = expand_to_monomials(right)?;
    let points = sample_facet(&info.facet, samples, seed);

    let mut max = Rational::zero();
    let mut failures = Vec::new();
    for combo in multisets(dirs.len(), r) {
        let ds: Vec<Vec<Rational>> = combo.iter().map(|&j| dirs[j].clone()).collect();
        let (dl, dr) = ds.iter().fold((ml.clone(), mr.clone()), |(a, b), d| (a.directional(d), b.directional(d)));
        for x in &points {
            let lhs = left.derivative(&ds, x)?;
            let rhs = right.derivative(&ds, x)?;
            let (ol, or) = (dl.evaluate(x), dr.evaluate(x));
            let gap = [&lhs - &rhs, &ol - &or, &lhs - &ol, &rhs - &or]
                .into_iter()
                .map(|g| g.abs())
                .fold(Rational::zero(), |a, g| if g > a { g } else { a });
            if gap.is_zero() {
                continue;
            }
            if gap > max {
                max = gap;
            }
            if failures.len() < MAX_REPORTED {
                failures.push(Failure { point: x.clone(), order: ds.len() as u32, directions: ds.clone(), lhs, rhs });
            }
        }
    }
    Ok(VerificationReport {
        pair: String::new(),
        orders: (0..=r).collect(),
        samples,
        passed: max.is_zero(),
        max_discrepancy: max,
        failures,
    })
}

fn coefficient_of<'a>(
    r: &CoefficientRef,
    left: &'a TensorPolynomial,
    right: &'a TensorPolynomial,
) -> Rational {
    let poly = match r.side {
        Side::Left => left,
        Side::Right => right,
    };
    poly.coefficient(&r.index).cloned().unwrap_or_else(Rational::zero)
}

/// Asserts that the coefficients satisfy `cs`, then runs
/// [`check_smoothness`] with the set's direction and order.
pub fn check_conditions(
    left: &TensorPolynomial,
    right: &TensorPolynomial,
    cs: &ConditionSet,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    for (row, cond) in cs.conditions.iter().enumerate() {
        if !cond.residual(|r| coefficient_of(r, left, right)).is_zero() {
            return Err(Error::ConditionViolated { row });
        }
    }
    let mut report = check_smoothness(left, right, &cs.direction, cs.order, samples, seed)?;
    report.pair = format!("{}|{}", cs.metadata.left.id, cs.metadata.right.id);
    Ok(report)
}

fn random_combination(basis: &[Vec<Rational>], len: usize, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); len];
    for b in basis {
        let mut t: i64 = 0;
        while t == 0 {
            t = rng.gen_range(-9..=9);
        }
        let t = crate::int(t);
        for (x, y) in v.iter_mut().zip(scale(b, &t)) {
            *x += y;
        }
    }
    v
}

fn split_columns<'a>(
    keys: impl Iterator<Item = (&'a String, &'a BlockedMultiIndex)>,
    values: &[Rational],
) -> BTreeMap<String, TensorCoeffs<Rational>> {
    let mut out: BTreeMap<String, TensorCoeffs<Rational>> = BTreeMap::new();
    for ((patch, index), v) in keys.zip(values) {
        out.entry(patch.clone()).or_default().insert(index.clone(), v.clone());
    }
    out
}

/// A random coefficient pair in the solution space of `cs`.
pub fn conditioned_polynomials(
    left: &Patch,
    right: &Patch,
    cs: &ConditionSet,
    seed: u64,
) -> Result<(TensorPolynomial, TensorPolynomial)> {
    let columns = cs.columns();
    let basis = linalg::nullspace(&cs.dense_rows(), columns.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = random_combination(&basis, columns.len(), &mut rng);
    let mut l = TensorCoeffs::new();
    let mut r = TensorCoeffs::new();
    for (c, v) in columns.iter().zip(values) {
        match c.side {
            Side::Left => l.insert(c.index.clone(), v),
            Side::Right => r.insert(c.index.clone(), v),
        };
    }
    Ok((
        TensorPolynomial::new(left.simplotope.clone(), left.degrees.clone(), l)?,
        TensorPolynomial::new(right.simplotope.clone(), right.degrees.clone(), r)?,
    ))
}

/// Draws one random solution of `system` and checks every pair it was built
/// from. The rows may come from elsewhere (a replayed matrix); only the pair
/// geometry, directions and orders are taken from `system.condition_sets`.
pub fn verify_system(
    patches: &[Patch],
    system: &SmoothnessSystem,
    samples: usize,
    seed: u64,
) -> Result<Vec<VerificationReport>> {
    let n = system.columns.len();
    let expected: Vec<ColumnKey> = patches
        .iter()
        .flat_map(|p| {
            enumerate_blocked(&p.simplotope.nu(), &p.degrees)
                .into_iter()
                .map(move |index| ColumnKey { patch: p.id.clone(), index })
        })
        .collect();
    if expected != system.columns {
        return Err(Error::ColumnMismatch);
    }
    let basis = linalg::nullspace(&system.dense(), n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = random_combination(&basis, n, &mut rng);
    let by_patch = split_columns(system.columns.iter().map(|c| (&c.patch, &c.index)), &values);
    let poly = |id: &str| -> Result<TensorPolynomial> {
        let p = patches.iter().find(|p| p.id == id).ok_or_else(|| Error::UnknownPatch(id.into()))?;
        TensorPolynomial::new(p.simplotope.clone(), p.degrees.clone(), by_patch.get(id).cloned().unwrap_or_default())
    };
    system
        .condition_sets
        .iter()
        .map(|cs| {
            let (l, r) = (poly(&cs.metadata.left.id)?, poly(&cs.metadata.right.id)?);
            let mut report = check_smoothness(&l, &r, &cs.direction, cs.order, samples, seed)?;
            report.pair = format!("{}|{}", cs.metadata.left.id, cs.metadata.right.id);
            Ok(report)
        })
        .collect()
}

/// True iff both sets span the same row space over the same columns.
pub fn nullspace_equivalence(a: &ConditionSet, b: &ConditionSet) -> Result<bool> {
    if a.columns() != b.columns() {
        return Err(Error::ColumnMismatch);
    }
    let (ra, rb) = (a.dense_rows(), b.dense_rows());
    let ka = linalg::rank_fraction_free(&ra);
    let kb = linalg::rank_fraction_free(&rb);
    if ka != kb {
        return Ok(false);
    }
    let mut both = ra;
    both.extend(rb);
    Ok(linalg::rank_fraction_free(&both) == ka)
}
