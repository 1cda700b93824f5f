//! Bernstein polynomials on simplices and simplotopes.
//!
//! A simplex polynomial of degree `d` is `Σ_k c_k (d!/k!) b^k` in barycentric
//! coordinates `b`; a tensor-product polynomial on a simplotope multiplies one
//! such basis per factor. Domain points use the scalar degree: `q = Σ_j
//! (k_j/d) v_j` on a simplex and `q_i = Σ_j (k_ij/δ_i) w_ij` per factor.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::coefficient::Coefficient;
use crate::geometry::{BarycentricPoint, RationalPoint, Simplex, Simplotope, SimplotopeCoords};
use crate::multiindex::{enumerate, enumerate_blocked, factorial, multinomial, BlockedMultiIndex, MultiIndex};
use crate::{Error, Rational, Result};

pub type SimplexCoeffs<C> = BTreeMap<MultiIndex, C>;
pub type TensorCoeffs<C> = BTreeMap<BlockedMultiIndex, C>;

/// `B_k^d(b) = (d!/k!) b^k`
pub fn eval_basis(k: &MultiIndex, d: u32, b: &BarycentricPoint) -> Result<Rational> {
    if k.len() != b.len() {
        return Err(Error::LengthMismatch { expected: k.len(), found: b.len() });
    }
    Ok(multinomial(d, k)? * k.power(b.weights()))
}

/// Product of per-factor basis values.
pub fn eval_tensor_basis(k: &BlockedMultiIndex, delta: &[u32], a: &SimplotopeCoords) -> Result<Rational> {
    if k.num_blocks() != delta.len() || a.blocks().len() != delta.len() {
        return Err(Error::LengthMismatch { expected: delta.len(), found: k.num_blocks() });
    }
    k.blocks()
        .iter()
        .zip(delta)
        .zip(a.blocks())
        .try_fold(Rational::one(), |acc, ((ki, &di), ai)| Ok(acc * eval_basis(ki, di, ai)?))
}

/// Index/point pairs of a B-net.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BNet<I> {
    entries: Vec<(I, RationalPoint)>,
}

impl<I: PartialEq> BNet<I> {
    pub fn new(entries: Vec<(I, RationalPoint)>) -> Self {
        BNet { entries }
    }

    pub fn entries(&self) -> &[(I, RationalPoint)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn point(&self, index: &I) -> Option<&RationalPoint> {
        self.entries.iter().find(|(i, _)| i == index).map(|(_, p)| p)
    }

    pub fn points(&self) -> Vec<RationalPoint> {
        self.entries.iter().map(|(_, p)| p.clone()).collect()
    }
}

pub fn simplex_domain_points(simplex: &Simplex, d: u32) -> BNet<MultiIndex> {
    let n = simplex.dim() + 1;
    let entries = enumerate(n, d)
        .into_iter()
        .map(|k| {
            let b = if d == 0 {
                BarycentricPoint::vertex(n, 0)
            } else {
                BarycentricPoint::new(k.entries().iter().map(|&kj| Rational::new(kj.into(), d.into())).collect())
                    .expect("k/d sums to one")
            };
            let p = simplex.point_at(&b);
            (k, p)
        })
        .collect();
    BNet { entries }
}

/// Per-factor barycentric coordinates `k_i/δ_i`; a factor of degree zero
/// sits at its first vertex.
pub(crate) fn domain_coords(k: &BlockedMultiIndex, delta: &[u32]) -> SimplotopeCoords {
    SimplotopeCoords::new(
        k.blocks()
            .iter()
            .zip(delta)
            .map(|(ki, &di)| {
                if di == 0 {
                    BarycentricPoint::vertex(ki.len(), 0)
                } else {
                    BarycentricPoint::new(
                        ki.entries().iter().map(|&x| Rational::new(x.into(), di.into())).collect(),
                    )
                    .expect("k/δ sums to one")
                }
            })
            .collect(),
    )
}

pub fn simplotope_domain_points(s: &Simplotope, delta: &[u32]) -> Result<BNet<BlockedMultiIndex>> {
    if delta.len() != s.num_blocks() {
        return Err(Error::LengthMismatch { expected: s.num_blocks(), found: delta.len() });
    }
    let entries = enumerate_blocked(&s.nu(), delta)
        .into_iter()
        .map(|k| {
            let p = s.point_at(&domain_coords(&k, delta));
            (k, p)
        })
        .collect();
    Ok(BNet { entries })
}

fn add_into<K: Ord, C: Coefficient>(map: &mut BTreeMap<K, C>, key: K, value: &C, factor: &Rational) {
    map.entry(key).or_insert_with(C::null).add_scaled(value, factor);
}

/// One De Casteljau step `c_k ← Σ_j w_j c_{k+e_j}` on factor `block`.
pub fn de_casteljau_block_step<C: Coefficient>(
    coeffs: &TensorCoeffs<C>,
    block: usize,
    weights: &[Rational],
) -> TensorCoeffs<C> {
    let mut out = BTreeMap::new();
    for (k, c) in coeffs {
        let ki = k.block(block);
        for (j, w) in weights.iter().enumerate().take(ki.len()) {
            if ki.get(j) == 0 {
                continue;
            }
            let mut t = ki.clone();
            t.set(j, ki.get(j) - 1);
            add_into(&mut out, k.with_block(block, t), c, w);
        }
    }
    out
}

fn map_degree<K>(coeffs: &BTreeMap<K, impl Sized>, norm: impl Fn(&K) -> u32) -> u32 {
    coeffs.keys().next().map_or(0, norm)
}

/// `r` De Casteljau steps with weights `w`, lowering the degree by `r`.
///
/// With barycentric weights and `r = d` the single remaining value is the
/// polynomial value; with directional weights it is a scaled derivative.
pub fn de_casteljau<C: Coefficient>(coeffs: &SimplexCoeffs<C>, weights: &[Rational], r: u32) -> Result<SimplexCoeffs<C>> {
    let degree = map_degree(coeffs, MultiIndex::norm);
    if r > degree {
        return Err(Error::TooManyIterations { count: r, degree });
    }
    if let Some(k) = coeffs.keys().next() {
        if k.len() != weights.len() {
            return Err(Error::LengthMismatch { expected: k.len(), found: weights.len() });
        }
    }
    let mut cur: TensorCoeffs<C> =
        coeffs.iter().map(|(k, c)| (BlockedMultiIndex::new(vec![k.clone()]), c.clone())).collect();
    for _ in 0..r {
        cur = de_casteljau_block_step(&cur, 0, weights);
    }
    Ok(cur.into_iter().map(|(k, c)| (k.into_blocks().remove(0), c)).collect())
}

/// `r` De Casteljau steps inside one factor of a tensor-product map.
pub fn de_casteljau_block<C: Coefficient>(
    coeffs: &TensorCoeffs<C>,
    block: usize,
    weights: &[Rational],
    r: u32,
) -> Result<TensorCoeffs<C>> {
    let degree = map_degree(coeffs, |k: &BlockedMultiIndex| k.block(block).norm());
    if r > degree {
        return Err(Error::TooManyIterations { count: r, degree });
    }
    let mut cur = coeffs.clone();
    for _ in 0..r {
        cur = de_casteljau_block_step(&cur, block, weights);
    }
    Ok(cur)
}

fn falling_factorial(n: u32, k: u32) -> Rational {
    Rational::from_integer(factorial(n) / factorial(n - k))
}

/// Bernstein polynomial on a simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexPolynomial {
    pub simplex: Simplex,
    pub degree: u32,
    pub coefficients: SimplexCoeffs<Rational>,
}

impl SimplexPolynomial {
    pub fn new(simplex: Simplex, degree: u32, coefficients: SimplexCoeffs<Rational>) -> Result<Self> {
        let keys = enumerate(simplex.dim() + 1, degree);
        if keys.len() != coefficients.len() || keys.iter().any(|k| !coefficients.contains_key(k)) {
            return Err(Error::IncompleteCoefficients);
        }
        Ok(SimplexPolynomial { simplex, degree, coefficients })
    }

    pub fn from_fn(simplex: Simplex, degree: u32, mut f: impl FnMut(&MultiIndex) -> Rational) -> Self {
        let coefficients = enumerate(simplex.dim() + 1, degree).into_iter().map(|k| {
            let c = f(&k);
            (k, c)
        });
        SimplexPolynomial { simplex, degree, coefficients: coefficients.collect() }
    }

    pub fn evaluate(&self, point: &RationalPoint) -> Result<Rational> {
        let b = self.simplex.barycentric(point)?;
        self.evaluate_barycentric(&b)
    }

    pub fn evaluate_barycentric(&self, b: &BarycentricPoint) -> Result<Rational> {
        let out = de_casteljau(&self.coefficients, b.weights(), self.degree)?;
        Ok(out.into_values().next().unwrap_or_else(Rational::zero))
    }

    /// Mixed directional derivative `D_{u_1} ... D_{u_K} p` at `point`.
    pub fn derivative(&self, directions: &[Vec<Rational>], point: &RationalPoint) -> Result<Rational> {
        let k = directions.len() as u32;
        if k > self.degree {
            return Ok(Rational::zero());
        }
        let b = self.simplex.barycentric(point)?;
        let mut cur = self.coefficients.clone();
        for u in directions {
            let s = self.simplex.direction_coords(u)?;
            cur = de_casteljau(&cur, s.weights(), 1)?;
        }
        let rest = de_casteljau(&cur, b.weights(), self.degree - k)?;
        let value = rest.into_values().next().unwrap_or_else(Rational::zero);
        Ok(falling_factorial(self.degree, k) * value)
    }
}

/// Tensor-product Bernstein polynomial on a simplotope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorPolynomial {
    pub simplotope: Simplotope,
    pub degrees: Vec<u32>,
    pub coefficients: TensorCoeffs<Rational>,
}

impl TensorPolynomial {
    pub fn new(simplotope: Simplotope, degrees: Vec<u32>, coefficients: TensorCoeffs<Rational>) -> Result<Self> {
        if degrees.len() != simplotope.num_blocks() {
            return Err(Error::LengthMismatch { expected: simplotope.num_blocks(), found: degrees.len() });
        }
        let keys = enumerate_blocked(&simplotope.nu(), &degrees);
        if keys.len() != coefficients.len() || keys.iter().any(|k| !coefficients.contains_key(k)) {
            return Err(Error::IncompleteCoefficients);
        }
        Ok(TensorPolynomial { simplotope, degrees, coefficients })
    }

    pub fn from_fn(
        simplotope: Simplotope,
        degrees: Vec<u32>,
        mut f: impl FnMut(&BlockedMultiIndex) -> Rational,
    ) -> Self {
        let coefficients = enumerate_blocked(&simplotope.nu(), &degrees).into_iter().map(|k| {
            let c = f(&k);
            (k, c)
        });
        TensorPolynomial { simplotope, degrees, coefficients: coefficients.collect() }
    }

    pub fn coefficient(&self, k: &BlockedMultiIndex) -> Option<&Rational> {
        self.coefficients.get(k)
    }

    fn collapse(&self, mut cur: TensorCoeffs<Rational>, a: &SimplotopeCoords, used: &[u32]) -> Result<Rational> {
        for (i, (&d, &n)) in self.degrees.iter().zip(used).enumerate() {
            cur = de_casteljau_block(&cur, i, a.block(i).weights(), d - n)?;
        }
        Ok(cur.into_values().next().unwrap_or_else(Rational::zero))
    }

    pub fn evaluate(&self, point: &RationalPoint) -> Result<Rational> {
        let a = self.simplotope.coords(point)?;
        self.collapse(self.coefficients.clone(), &a, &vec![0; self.degrees.len()])
    }

    /// Mixed directional derivative `D_{u_1} ... D_{u_K} p` at `point`.
    ///
    /// Each direction splits into per-factor components; the product rule
    /// then sums over every assignment of directions to factors.
    pub fn derivative(&self, directions: &[Vec<Rational>], point: &RationalPoint) -> Result<Rational> {
        let a = self.simplotope.coords(point)?;
        let parts: Vec<Vec<Vec<Rational>>> =
            directions.iter().map(|u| self.simplotope.decompose(u)).collect::<Result<_>>()?;
        let ell = self.degrees.len();
        let k = directions.len();
        let mut total = Rational::zero();
        let mut assignment = vec![0usize; k];
        loop {
            let mut used = vec![0u32; ell];
            for &blk in &assignment {
                used[blk] += 1;
            }
            if used.iter().zip(&self.degrees).all(|(n, d)| n <= d) {
                let mut cur = self.coefficients.clone();
                for (t, &blk) in assignment.iter().enumerate() {
                    cur = de_casteljau_block_step(&cur, blk, &parts[t][blk]);
                }
                let factor = self
                    .degrees
                    .iter()
                    .zip(&used)
                    .fold(Rational::one(), |acc, (&d, &n)| acc * falling_factorial(d, n));
                total += factor * self.collapse(cur, &a, &used)?;
            }
            // Next assignment in base `ell`.
            let mut pos = 0;
            while pos < k {
                assignment[pos] += 1;
                if assignment[pos] < ell {
                    break;
                }
                assignment[pos] = 0;
                pos += 1;
            }
            if pos == k {
                break;
            }
        }
        Ok(total)
    }
}
