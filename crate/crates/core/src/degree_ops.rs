//! Degree raising and lowering of Bernstein coefficient maps.
//!
//! The `_local` variants act on one factor of a tensor-product map and leave
//! the other factors alone. All operators are generic over [`Coefficient`] so
//! they apply equally to numeric maps and to symbolic linear forms.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::bernstein::{SimplexCoeffs, TensorCoeffs};
use crate::coefficient::{Coefficient, LinearForm};
use crate::linalg;
use crate::multiindex::{binomial, enumerate, factorial, BlockedMultiIndex, MultiIndex};
use crate::{Error, Rational, Result};

fn rational(n: num_bigint::BigInt) -> Rational {
    Rational::from_integer(n)
}

fn wrap<C: Clone>(coeffs: &SimplexCoeffs<C>) -> TensorCoeffs<C> {
    coeffs.iter().map(|(k, c)| (BlockedMultiIndex::new(vec![k.clone()]), c.clone())).collect()
}

fn unwrap<C>(coeffs: TensorCoeffs<C>) -> SimplexCoeffs<C> {
    coeffs.into_iter().map(|(k, c)| (k.into_blocks().remove(0), c)).collect()
}

fn block_shape<C>(coeffs: &TensorCoeffs<C>, block: usize) -> Option<(usize, u32)> {
    coeffs.keys().next().map(|k| (k.block(block).len(), k.block(block).norm()))
}

/// Raises factor `block` by `k`:
/// `c'_κ = (d! k!/(d+k)!) Σ_{|μ|=k} κ!/((κ-μ)! μ!) c_{κ-μ}`, terms with a
/// negative index skipped. This is the `k`-fold composition of single-step
/// raising.
pub fn raise_local<C: Coefficient>(coeffs: &TensorCoeffs<C>, block: usize, k: u32) -> TensorCoeffs<C> {
    let Some((slots, d)) = block_shape(coeffs, block) else {
        return BTreeMap::new();
    };
    if k == 0 {
        return coeffs.clone();
    }
    let scale = rational(factorial(d) * factorial(k)) / rational(factorial(d + k));
    let shifts = enumerate(slots, k);
    let mut out: TensorCoeffs<C> = BTreeMap::new();
    for (key, c) in coeffs {
        let src = key.block(block);
        let src_fact = rational(src.factorial());
        for mu in &shifts {
            let target = src.add(mu);
            let w = &scale * rational(target.factorial()) / (&src_fact * rational(mu.factorial()));
            out.entry(key.with_block(block, target)).or_insert_with(C::null).add_scaled(c, &w);
        }
    }
    out
}

pub fn raise<C: Coefficient>(coeffs: &SimplexCoeffs<C>, k: u32) -> SimplexCoeffs<C> {
    unwrap(raise_local(&wrap(coeffs), 0, k))
}

/// Lowers factor `block` by `k`, reading every coefficient of the lower
/// degree off the higher one along pivot slot `j`:
///
/// `c_κ = Σ_{t=0}^{d-κ_j} Σ_{|σ|=t, σ_j=0} (-1)^t (t!/σ!) C(k-1+t, t)
///        ((d+k)!/(κ+ρ)!) (κ!/d!) C_{κ+ρ}`, `ρ = (t+k) e_j - σ`.
///
/// Exact left inverse of [`raise_local`]; on maps that are not of reduced
/// degree the result depends on the pivot.
pub fn lower_local<C: Coefficient>(
    coeffs: &TensorCoeffs<C>,
    block: usize,
    k: u32,
    pivot: usize,
) -> Result<TensorCoeffs<C>> {
    let Some((slots, high)) = block_shape(coeffs, block) else {
        return Ok(BTreeMap::new());
    };
    if k > high {
        return Err(Error::TooManyIterations { count: k, degree: high });
    }
    if pivot >= slots {
        return Err(Error::LengthMismatch { expected: slots, found: pivot + 1 });
    }
    if k == 0 {
        return Ok(coeffs.clone());
    }
    let d = high - k;
    let contexts: BTreeSet<BlockedMultiIndex> =
        coeffs.keys().map(|key| key.with_block(block, MultiIndex::zeros(slots))).collect();
    let top = rational(factorial(d + k)) / rational(factorial(d));
    let mut out = BTreeMap::new();
    for kappa in enumerate(slots, d) {
        // Weighted source indices for this κ, shared by all contexts.
        let mut terms: Vec<(MultiIndex, Rational)> = Vec::new();
        let kappa_fact = rational(kappa.factorial());
        for t in 0..=(d - kappa.get(pivot)) {
            let sign = if t % 2 == 0 { Rational::one() } else { -Rational::one() };
            let comb = rational(binomial(k - 1 + t, t));
            for sigma in enumerate(slots, t) {
                if sigma.get(pivot) != 0 {
                    continue;
                }
                let Some(mut src) = kappa.checked_sub(&sigma) else { continue };
                src.set(pivot, src.get(pivot) + t + k);
                let w = &sign * rational(factorial(t)) / rational(sigma.factorial()) * &comb * &top
                    * &kappa_fact
                    / rational(src.factorial());
                terms.push((src, w));
            }
        }
        for ctx in &contexts {
            let mut acc = C::null();
            for (src, w) in &terms {
                if let Some(c) = coeffs.get(&ctx.with_block(block, src.clone())) {
                    acc.add_scaled(c, w);
                }
            }
            out.insert(ctx.with_block(block, kappa.clone()), acc);
        }
    }
    Ok(out)
}

pub fn lower<C: Coefficient>(coeffs: &SimplexCoeffs<C>, k: u32, pivot: usize) -> Result<SimplexCoeffs<C>> {
    Ok(unwrap(lower_local(&wrap(coeffs), 0, k, pivot)?))
}

/// Lowering by exact elimination: solves `raise(x, k) = coeffs`. Fails with
/// [`Error::InconsistentSystem`] when the map is not of reduced degree.
pub fn lower_by_elimination(coeffs: &SimplexCoeffs<Rational>, k: u32) -> Result<SimplexCoeffs<Rational>> {
    let Some(first) = coeffs.keys().next() else {
        return Ok(BTreeMap::new());
    };
    let (slots, high) = (first.len(), first.norm());
    if k > high {
        return Err(Error::TooManyIterations { count: k, degree: high });
    }
    let unknowns = enumerate(slots, high - k);
    let symbolic: SimplexCoeffs<LinearForm<usize>> =
        unknowns.iter().enumerate().map(|(i, key)| (key.clone(), LinearForm::variable(i))).collect();
    let raised = raise(&symbolic, k);
    let mut a = Vec::with_capacity(raised.len());
    let mut b = Vec::with_capacity(raised.len());
    for (key, form) in &raised {
        a.push((0..unknowns.len()).map(|i| form.get(&i)).collect());
        b.push(coeffs.get(key).cloned().unwrap_or_else(Rational::zero));
    }
    let x = linalg::solve(&a, &b).ok_or(Error::InconsistentSystem)?;
    Ok(unknowns.into_iter().zip(x).collect())
}
