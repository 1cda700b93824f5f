//! Circumscribed simplices of simplotopes.
//!
//! A simplotope with `ℓ` factors is the slice `Σ_j b_ij = α_i` of an
//! `m`-simplex, `m = |ν| + ℓ - 1`. The standard construction appends `ℓ - 1`
//! auxiliary coordinates: factor `i < ℓ` is scaled by `ℓ` and pushed to
//! `e_i`, the last factor to `-1`, and every `α_i = 1/ℓ`. The pair
//! construction pushes the last factor to `0` instead, so that two
//! simplotopes sharing a facet get simplices sharing `m` vertices.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use num_traits::{One, Zero};

use crate::bernstein::BNet;
use crate::geometry::{BarycentricPoint, RationalPoint, SharedFacetInfo, Simplex, Simplotope, SimplotopeCoords};
use crate::multiindex::{factorial, BlockedMultiIndex, MultiIndex};
use crate::{Error, Rational, Result};

/// An `m`-simplex whose vertex partition and hyperplane weights cut out a
/// simplotope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircumscribedSimplex {
    simplex: Simplex,
    partition: Vec<usize>,
    weights: Vec<Rational>,
    source: Simplotope,
    offset: Vec<Rational>,
}

fn lift(source: &Simplotope, aux: &[Vec<Rational>], offset: Vec<Rational>) -> CircumscribedSimplex {
    let ell = source.num_blocks();
    let l = Rational::from_integer(ell.into());
    let base = source.base().coords();
    let mut vertices = Vec::new();
    for (i, aux_i) in aux.iter().enumerate() {
        for j in 0..=source.nu()[i] {
            let mut v: Vec<Rational> =
                base.iter().zip(source.displacement(i, j)).map(|(b, w)| b + &l * w).collect();
            v.extend(aux_i.iter().cloned());
            vertices.push(RationalPoint::new(v));
        }
    }
    CircumscribedSimplex {
        simplex: Simplex::new(vertices).expect("circumscribed vertices are affinely independent"),
        partition: source.nu().iter().map(|n| n + 1).collect(),
        weights: vec![Rational::one() / &l; ell],
        source: source.clone(),
        offset,
    }
}

fn unit(len: usize, i: usize, value: Rational) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); len];
    v[i] = value;
    v
}

/// The standard circumscribed simplex.
pub fn standard_circumscribe(p: &Simplotope) -> CircumscribedSimplex {
    let ell = p.num_blocks();
    let aux: Vec<Vec<Rational>> = (0..ell)
        .map(|i| {
            if i + 1 < ell {
                unit(ell - 1, i, Rational::one())
            } else {
                vec![-Rational::one(); ell - 1]
            }
        })
        .collect();
    lift(p, &aux, vec![Rational::zero(); ell - 1])
}

fn pair_member(p: &Simplotope) -> CircumscribedSimplex {
    let ell = p.num_blocks();
    let aux: Vec<Vec<Rational>> = (0..ell)
        .map(|i| if i + 1 < ell { unit(ell - 1, i, Rational::one()) } else { vec![Rational::zero(); ell - 1] })
        .collect();
    let third = Rational::one() / Rational::from_integer(ell.into());
    lift(p, &aux, vec![third; ell - 1])
}

impl CircumscribedSimplex {
    pub fn simplex(&self) -> &Simplex {
        &self.simplex
    }

    /// Sizes `ν_i + 1` of the vertex subsets `V_i`.
    pub fn partition(&self) -> &[usize] {
        &self.partition
    }

    pub fn block_range(&self, i: usize) -> Range<usize> {
        let start: usize = self.partition[..i].iter().sum();
        start..start + self.partition[i]
    }

    /// Hyperplane weights `α`.
    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn source(&self) -> &Simplotope {
        &self.source
    }

    /// Auxiliary coordinates of the slice that carries the simplotope.
    pub fn offset(&self) -> &[Rational] {
        &self.offset
    }

    pub fn dim(&self) -> usize {
        self.simplex.dim()
    }

    /// Lifts a direction of the simplotope: `[ℓu; 0]`.
    pub fn lift_direction(&self, u: &[Rational]) -> Vec<Rational> {
        let l = Rational::from_integer(self.source.num_blocks().into());
        let mut out: Vec<Rational> = u.iter().map(|x| x * &l).collect();
        out.resize(self.simplex.ambient(), Rational::zero());
        out
    }

    /// Point of the slice with simplotope coordinates `a` (`b = a/ℓ`).
    pub fn slice_point(&self, a: &SimplotopeCoords) -> RationalPoint {
        let weights: Vec<Rational> = a
            .blocks()
            .iter()
            .zip(&self.weights)
            .flat_map(|(ai, alpha)| ai.weights().iter().map(move |x| x * alpha))
            .collect();
        self.simplex.point_at(&BarycentricPoint::new(weights).expect("slice weights sum to one"))
    }

    /// Maps barycentric coordinates on a slice with weights `alpha` back to
    /// the simplotope: `a_ij = b_ij / α_i`. A factor with `α_i = 0` sits at
    /// its first vertex.
    pub fn to_source(&self, b: &BarycentricPoint, alpha: &[Rational]) -> Result<RationalPoint> {
        if b.len() != self.simplex.dim() + 1 {
            return Err(Error::LengthMismatch { expected: self.simplex.dim() + 1, found: b.len() });
        }
        let mut blocks = Vec::with_capacity(self.partition.len());
        for (i, a_i) in alpha.iter().enumerate() {
            let part = &b.weights()[self.block_range(i)];
            let total = part.iter().fold(Rational::zero(), |acc, x| acc + x);
            if total != *a_i {
                return Err(Error::OutsideAffineHull);
            }
            blocks.push(if a_i.is_zero() {
                BarycentricPoint::vertex(part.len(), 0)
            } else {
                BarycentricPoint::new(part.iter().map(|x| x / a_i).collect())?
            });
        }
        Ok(self.source.point_at(&SimplotopeCoords::new(blocks)))
    }

    /// Corners of the slice `Δ ∩ H_1 ∩ ... ∩ H_ℓ`, lifted and mapped back.
    pub fn hyperplane_vertices(&self) -> Vec<(RationalPoint, RationalPoint)> {
        self.source
            .vertex_choices()
            .into_iter()
            .map(|choice| {
                let mut b = vec![Rational::zero(); self.simplex.dim() + 1];
                for (i, &j) in choice.iter().enumerate() {
                    b[self.block_range(i).start + j] = self.weights[i].clone();
                }
                let b = BarycentricPoint::new(b).expect("α sums to one");
                let lifted = self.simplex.point_at(&b);
                let source = self.to_source(&b, &self.weights).expect("slice point");
                (lifted, source)
            })
            .collect()
    }
}

/// Circumscribed simplices of a facet-sharing pair in normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircumscribedPair {
    pub left: CircumscribedSimplex,
    pub right: CircumscribedSimplex,
    /// Vertex index pairs `(left, right)` with identical points.
    pub shared: Vec<(usize, usize)>,
    pub oof_left: usize,
    pub oof_right: usize,
}

impl CircumscribedPair {
    pub fn from_facet(info: &SharedFacetInfo) -> Result<Self> {
        let left = pair_member(&info.p.simplotope);
        let right = pair_member(&info.q.simplotope);
        let lv = left.simplex.vertices();
        let rv = right.simplex.vertices();
        let shared: Vec<(usize, usize)> = lv
            .iter()
            .enumerate()
            .filter_map(|(a, x)| rv.iter().position(|y| y == x).map(|b| (a, b)))
            .collect();
        if shared.len() != left.dim() {
            return Err(Error::NoSharedFacet);
        }
        let oof_left = (0..lv.len()).find(|a| shared.iter().all(|s| s.0 != *a)).ok_or(Error::NoSharedFacet)?;
        let oof_right = (0..rv.len()).find(|b| shared.iter().all(|s| s.1 != *b)).ok_or(Error::NoSharedFacet)?;
        Ok(CircumscribedPair { left, right, shared, oof_left, oof_right })
    }
}

pub fn circumscribe_pair(info: &SharedFacetInfo) -> Result<CircumscribedPair> {
    CircumscribedPair::from_facet(info)
}

/// `δ! ℓ^{|δ|} / |δ|!`, the ratio between a tensor-product basis function and
/// the matching basis function of the circumscribed simplex.
pub fn scaling_factor(delta: &[u32]) -> Rational {
    let total: u32 = delta.iter().sum();
    let ell = Rational::from_integer(delta.len().into());
    let delta_fact = delta.iter().map(|&d| factorial(d)).product();
    Rational::from_integer(delta_fact) * num_traits::pow(ell, total as usize)
        / Rational::from_integer(factorial(total))
}

/// Entries of a degree-`|δ|` B-net on the circumscribed simplex whose block
/// sums equal `δ`, positioned on the slice `α_i = δ_i/|δ|` and mapped back
/// to the simplotope.
pub fn extract_bnet(
    circ: &CircumscribedSimplex,
    net: &BNet<MultiIndex>,
    delta: &[u32],
) -> Result<BNet<BlockedMultiIndex>> {
    if delta.len() != circ.partition.len() {
        return Err(Error::LengthMismatch { expected: circ.partition.len(), found: delta.len() });
    }
    let total: u32 = delta.iter().sum();
    let d = Rational::from_integer(total.into());
    let alpha: Vec<Rational> = delta.iter().map(|&x| Rational::from_integer(x.into()) / &d).collect();
    let mut entries = Vec::new();
    for (k, _) in net.entries() {
        if k.norm() != total {
            return Err(Error::NormMismatch { expected: total, found: k.norm() });
        }
        let blocked = BlockedMultiIndex::split(k, &circ.partition)?;
        if blocked.norms() != delta {
            continue;
        }
        let b = BarycentricPoint::new(k.entries().iter().map(|&x| Rational::from_integer(x.into()) / &d).collect())?;
        entries.push((blocked, circ.to_source(&b, &alpha)?));
    }
    Ok(BNet::new(entries))
}
