//! Continuity conditions between Bernstein patches.
//!
//! Every condition is a homogeneous linear equation `Σ w c = 0` over the
//! B-coefficients of two patches, normalized so the first weight is `+1`.
//! Conditions for all orders `0..=r` are emitted together, since `C^r`
//! needs the whole stack.
//!
//! # Mixed pairs
//!
//! For simplotopes the conditions are written on the circumscribed simplices
//! of the pair and only those whose left-hand side stays on the left patch's
//! B-net are kept. On the right patch they land on the B-net of degrees
//! `δ' = δ - ρ e_1 + ρ e_ℓ`, which is mapped back to degrees `δ` by raising
//! factor `ℓ` and lowering factor `1`. Each side carries the basis scaling
//! `δ! ℓ^{|δ|} / |δ|!` of its degree vector; the two factors differ when
//! `δ' ≠ δ` and are kept in the emitted weights.
//!
//! Lowering is exact only for maps of reduced degree. When the right patch's
//! first factor has positive dimension the right-hand side need not be, and
//! extra *reducibility* conditions require it to be.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::bernstein::{de_casteljau_block, TensorCoeffs};
use crate::circumscribe::{circumscribe_pair, scaling_factor};
use crate::coefficient::{Coefficient, LinearForm};
use crate::degree_ops::{lower_local, raise_local};
use crate::geometry::facet::check_direction;
use crate::geometry::{
    choose_direction, detect_shared_facet, is_oof_cospatial, JoinKind, RationalPoint, SharedFacetInfo, Simplex,
    Simplotope,
};
use crate::linalg;
use crate::multiindex::{enumerate, enumerate_blocked, factorial, BlockedMultiIndex, MultiIndex};
use crate::{Error, Rational, Result};

/// Which patch of a pair a coefficient belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

/// A B-coefficient of one patch, in the caller's block numbering.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoefficientRef {
    pub side: Side,
    pub patch: String,
    pub index: BlockedMultiIndex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConditionKind {
    /// Derivative matching across the facet.
    Transfer,
    /// Right-hand side must be of reduced degree in the first factor.
    Reducibility,
}

/// One homogeneous equation `Σ w c = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCondition {
    terms: Vec<(CoefficientRef, Rational)>,
    order: u32,
    kind: ConditionKind,
}

impl LinearCondition {
    /// Sorts the terms, merges nothing further (the form is already merged)
    /// and scales the first weight to `+1`. Returns `None` for the zero form.
    pub fn from_form(form: LinearForm<CoefficientRef>, order: u32, kind: ConditionKind) -> Option<Self> {
        let terms = form.into_terms();
        let lead = terms.first()?.1.clone();
        let terms = terms.into_iter().map(|(r, w)| (r, w / &lead)).collect();
        Some(LinearCondition { terms, order, kind })
    }

    pub fn terms(&self) -> &[(CoefficientRef, Rational)] {
        &self.terms
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn kind(&self) -> ConditionKind {
        self.kind
    }

    pub fn weight(&self, r: &CoefficientRef) -> Rational {
        self.terms.iter().find(|(t, _)| t == r).map_or_else(Rational::zero, |(_, w)| w.clone())
    }

    /// `Σ w c` for the given coefficient values.
    pub fn residual(&self, mut value: impl FnMut(&CoefficientRef) -> Rational) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, (r, w)| acc + w * value(r))
    }
}

/// Type, degrees and identifier of a patch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatchShape {
    pub id: String,
    pub nu: Vec<usize>,
    pub degrees: Vec<u32>,
}

impl PatchShape {
    pub fn columns(&self, side: Side) -> Vec<CoefficientRef> {
        enumerate_blocked(&self.nu, &self.degrees)
            .into_iter()
            .map(|index| CoefficientRef { side, patch: self.id.clone(), index })
            .collect()
    }
}

/// Facts about how a condition set was produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionMetadata {
    pub left: PatchShape,
    pub right: PatchShape,
    /// `None` for plain simplex pairs.
    pub join: Option<JoinKind>,
    /// True when the pair was swapped so the left factor is the smaller one.
    pub swapped: bool,
    /// Degrees of the normalized blocks.
    pub normalized_degrees: Vec<u32>,
    pub cospatiality_test: &'static str,
}

/// The stacked conditions of orders `0..=r` for one pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionSet {
    pub order: u32,
    pub direction: Vec<Rational>,
    pub conditions: Vec<LinearCondition>,
    pub metadata: ConditionMetadata,
}

impl ConditionSet {
    /// All coefficients of both patches, left first.
    pub fn columns(&self) -> Vec<CoefficientRef> {
        let mut c = self.metadata.left.columns(Side::Left);
        c.extend(self.metadata.right.columns(Side::Right));
        c
    }

    /// Dense rows over [`Self::columns`].
    pub fn dense_rows(&self) -> Vec<Vec<Rational>> {
        let cols = self.columns();
        let pos: BTreeMap<&CoefficientRef, usize> = cols.iter().enumerate().map(|(i, c)| (c, i)).collect();
        self.conditions
            .iter()
            .map(|cond| {
                let mut row = vec![Rational::zero(); cols.len()];
                for (r, w) in cond.terms() {
                    row[pos[r]] = w.clone();
                }
                row
            })
            .collect()
    }

    pub fn of_order(&self, rho: u32) -> impl Iterator<Item = &LinearCondition> {
        self.conditions.iter().filter(move |c| c.order == rho)
    }
}

/// A tensor-product patch: simplotope plus per-factor degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Patch {
    pub id: String,
    pub simplotope: Simplotope,
    pub degrees: Vec<u32>,
}

impl Patch {
    pub fn new(id: impl Into<String>, simplotope: Simplotope, degrees: Vec<u32>) -> Result<Self> {
        if degrees.len() != simplotope.num_blocks() {
            return Err(Error::LengthMismatch { expected: simplotope.num_blocks(), found: degrees.len() });
        }
        Ok(Patch { id: id.into(), simplotope, degrees })
    }

    pub fn shape(&self) -> PatchShape {
        PatchShape { id: self.id.clone(), nu: self.simplotope.nu(), degrees: self.degrees.clone() }
    }
}

/// A simplex patch of total degree `degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexPatch {
    pub id: String,
    pub simplex: Simplex,
    pub degree: u32,
}

impl SimplexPatch {
    pub fn new(id: impl Into<String>, simplex: Simplex, degree: u32) -> Self {
        SimplexPatch { id: id.into(), simplex, degree }
    }

    pub fn shape(&self) -> PatchShape {
        PatchShape { id: self.id.clone(), nu: vec![self.simplex.dim()], degrees: vec![self.degree] }
    }

    /// The same patch as a one-factor simplotope patch (vertex order kept).
    pub fn to_patch(&self) -> Patch {
        Patch {
            id: self.id.clone(),
            simplotope: Simplotope::from_simplex(&self.simplex),
            degrees: vec![self.degree],
        }
    }
}

fn multinomial_power(mu: &MultiIndex, s: &[Rational]) -> Rational {
    let rho = mu.norm();
    Rational::from_integer(factorial(rho) / mu.factorial()) * mu.power(s)
}

/// Indices `μ` with `|μ| = rho` supported where `s` is nonzero, with weight
/// `(ρ!/μ!) s^μ`.
fn directional_terms(s: &[Rational], rho: u32) -> Vec<(MultiIndex, Rational)> {
    let support: Vec<usize> = (0..s.len()).filter(|&j| !s[j].is_zero()).collect();
    if support.is_empty() {
        return if rho == 0 { vec![(MultiIndex::zeros(s.len()), Rational::one())] } else { Vec::new() };
    }
    let reduced: Vec<Rational> = support.iter().map(|&j| s[j].clone()).collect();
    enumerate(support.len(), rho)
        .into_iter()
        .map(|m| {
            let mut full = MultiIndex::zeros(s.len());
            for (t, &j) in support.iter().enumerate() {
                full.set(j, m.get(t));
            }
            let w = multinomial_power(&m, &reduced);
            (full, w)
        })
        .collect()
}

/// Conditions between two simplex patches sharing a facet, along `u`.
///
/// For each `ρ ≤ r` and each facet index `κ` of norm `d - ρ`, the `ρ`-fold
/// De Casteljau iterates along `u` of the coefficients above `κ` agree on
/// both sides.
pub fn simplex_conditions(left: &SimplexPatch, right: &SimplexPatch, r: u32, u: &[Rational]) -> Result<ConditionSet> {
    let (ls, rs) = (&left.simplex, &right.simplex);
    if ls.ambient() != rs.ambient() {
        return Err(Error::AmbientMismatch { left: ls.ambient(), right: rs.ambient() });
    }
    if left.degree != right.degree {
        return Err(Error::DegreeMismatch { block: 0, left: left.degree, right: right.degree });
    }
    let d = left.degree;
    if r > d {
        return Err(Error::OrderTooHigh { order: r, degree: d });
    }
    let shared: Vec<(usize, usize)> = ls
        .vertices()
        .iter()
        .enumerate()
        .filter_map(|(a, x)| rs.vertices().iter().position(|y| y == x).map(|b| (a, b)))
        .collect();
    if ls.dim() != rs.dim() || shared.len() != ls.dim() {
        return Err(Error::NoSharedFacet);
    }
    let oof = (0..=ls.dim()).find(|a| shared.iter().all(|s| s.0 != *a)).expect("one unshared vertex");
    let s = ls.direction_coords(u)?;
    let st = rs.direction_coords(u)?;
    if s.weights()[oof].is_zero() {
        return Err(Error::DirectionParallelToFacet);
    }
    let n = ls.dim() + 1;
    let wrap = |k: MultiIndex| BlockedMultiIndex::new(vec![k]);
    let mut conditions = Vec::new();
    for rho in 0..=r {
        let lt = directional_terms(s.weights(), rho);
        let rt = directional_terms(st.weights(), rho);
        for kappa in enumerate(shared.len(), d - rho) {
            let mut kl = MultiIndex::zeros(n);
            let mut kr = MultiIndex::zeros(n);
            for (t, &(a, b)) in shared.iter().enumerate() {
                kl.set(a, kappa.get(t));
                kr.set(b, kappa.get(t));
            }
            let mut form = LinearForm::null();
            for (mu, w) in &lt {
                let r = CoefficientRef { side: Side::Left, patch: left.id.clone(), index: wrap(kl.add(mu)) };
                form.add_term(r, w);
            }
            for (mu, w) in &rt {
                let r = CoefficientRef { side: Side::Right, patch: right.id.clone(), index: wrap(kr.add(mu)) };
                form.add_term(r, &-w.clone());
            }
            conditions.extend(LinearCondition::from_form(form, rho, ConditionKind::Transfer));
        }
    }
    Ok(ConditionSet {
        order: r,
        direction: u.to_vec(),
        conditions,
        metadata: ConditionMetadata {
            left: left.shape(),
            right: right.shape(),
            join: None,
            swapped: false,
            normalized_degrees: vec![d],
            cospatiality_test: "transversal",
        },
    })
}

/// Conditions for a `C^r` join of two tensor-product patches, with the
/// direction chosen by [`choose_direction`].
pub fn mixed_conditions(left: &Patch, right: &Patch, r: u32) -> Result<ConditionSet> {
    mixed_impl(left, right, r, None)
}

/// As [`mixed_conditions`] with a caller-supplied direction `u`, which must
/// be parallel to both out-of-facet simplices and transversal to the facet.
pub fn mixed_conditions_with_direction(left: &Patch, right: &Patch, r: u32, u: &[Rational]) -> Result<ConditionSet> {
    mixed_impl(left, right, r, Some(u))
}

fn reconcile_degrees(info: &SharedFacetInfo, pp: &Patch, qp: &Patch) -> Result<Vec<u32>> {
    let pd = info.p.normalized_degrees(&pp.degrees);
    let qd = info.q.normalized_degrees(&qp.degrees);
    pd.iter()
        .zip(&qd)
        .enumerate()
        .map(|(i, pair)| match pair {
            (Some(a), Some(b)) if a == b => Ok(*a),
            (Some(a), Some(b)) => {
                let (left, right) = if info.swapped { (*b, *a) } else { (*a, *b) };
                Err(Error::DegreeMismatch { block: i, left, right })
            }
            (Some(a), None) | (None, Some(a)) => Ok(*a),
            (None, None) => unreachable!("padding on both sides"),
        })
        .collect()
}

fn mixed_impl(left: &Patch, right: &Patch, r: u32, given: Option<&[Rational]>) -> Result<ConditionSet> {
    let info = detect_shared_facet(&left.simplotope, &right.simplotope)?.ok_or(Error::NoSharedFacet)?;
    let (pp, qp, p_side, q_side) =
        if info.swapped { (right, left, Side::Right, Side::Left) } else { (left, right, Side::Left, Side::Right) };
    if !is_oof_cospatial(&info) {
        return Err(Error::NotCospatial(String::from(
            "the out-of-facet simplices share no direction transversal to the facet",
        )));
    }
    let u = match given {
        Some(u) => {
            check_direction(&info, u)?;
            u.to_vec()
        }
        None => choose_direction(&info)?,
    };
    let delta = reconcile_degrees(&info, pp, qp)?;
    if r > delta[0] {
        return Err(Error::OrderTooHigh { order: r, degree: delta[0] });
    }
    let ell = delta.len();
    let redistributed = info.kind == JoinKind::Redistributed;
    let q_oof = info.q_oof_block();

    let pair = circumscribe_pair(&info)?;
    let lifted = pair.left.lift_direction(&u);
    let s = pair.left.simplex().direction_coords(&lifted)?;
    let st = pair.right.simplex().direction_coords(&lifted)?;
    debug_assert!(s.weights().iter().enumerate().all(|(j, x)| x.is_zero() || pair.left.block_range(0).contains(&j)));
    debug_assert!(st.weights().iter().enumerate().all(|(j, x)| x.is_zero() || pair.right.block_range(q_oof).contains(&j)));
    let st_block = st.weights()[pair.right.block_range(q_oof)].to_vec();

    let p_partition = pair.left.partition().to_vec();
    let q_partition = pair.right.partition().to_vec();
    let m = pair.left.dim();
    let total: u32 = delta.iter().sum();

    let p_ref = |k: &BlockedMultiIndex| CoefficientRef {
        side: p_side,
        patch: pp.id.clone(),
        index: info.p.to_user_index(k, &pp.degrees),
    };
    let q_ref = |k: &BlockedMultiIndex| CoefficientRef {
        side: q_side,
        patch: qp.id.clone(),
        index: info.q.to_user_index(k, &qp.degrees),
    };
    let q_nu = info.q.simplotope.nu();
    let symbolic: TensorCoeffs<LinearForm<BlockedMultiIndex>> = enumerate_blocked(&q_nu, &delta)
        .into_iter()
        .map(|k| (k.clone(), LinearForm::variable(k)))
        .collect();
    let k_delta = scaling_factor(&delta);

    let mut conditions = Vec::new();
    for rho in 0..=r {
        let mut delta_p = delta.clone();
        let q_map = if redistributed {
            delta_p[0] -= rho;
            delta_p[ell - 1] += rho;
            lower_local(&raise_local(&symbolic, ell - 1, rho), 0, rho, 0)?
        } else {
            symbolic.clone()
        };
        let ratio = scaling_factor(&delta_p) / &k_delta;
        let mut target = delta.clone();
        target[0] -= rho;

        let lt = directional_terms(s.weights(), rho);
        let rt = directional_terms(st.weights(), rho);
        for kappa in enumerate(m, total - rho) {
            let mut kl = MultiIndex::zeros(m + 1);
            let mut kr = MultiIndex::zeros(m + 1);
            for (t, &(a, b)) in pair.shared.iter().enumerate() {
                kl.set(a, kappa.get(t));
                kr.set(b, kappa.get(t));
            }
            if BlockedMultiIndex::split(&kl, &p_partition)?.norms() != target {
                continue;
            }
            let mut form = LinearForm::null();
            for (mu, w) in &lt {
                let idx = BlockedMultiIndex::split(&kl.add(mu), &p_partition)?;
                form.add_term(p_ref(&idx), w);
            }
            for (mu, w) in &rt {
                let idx = BlockedMultiIndex::split(&kr.add(mu), &q_partition)?;
                let rhs = q_map.get(&idx).expect("right index lies on the redistributed B-net");
                let scale = -(w * &ratio);
                for (k, c) in rhs.terms() {
                    form.add_term(q_ref(k), &(c * &scale));
                }
            }
            conditions.extend(LinearCondition::from_form(form, rho, ConditionKind::Transfer));
        }

        if redistributed && q_nu[0] > 0 && rho > 0 {
            conditions.extend(reducibility_rows(&symbolic, &st_block, ell, rho, &q_ref)?);
        }
    }

    Ok(ConditionSet {
        order: r,
        direction: u,
        conditions,
        metadata: ConditionMetadata {
            left: left.shape(),
            right: right.shape(),
            join: Some(info.kind),
            swapped: info.swapped,
            normalized_degrees: delta,
            cospatiality_test: "transversal",
        },
    })
}

/// `(I - R_1 L_1) X = 0` for `X` the facet trace of the raised right-hand
/// derivative; only an independent subset is kept.
fn reducibility_rows(
    symbolic: &TensorCoeffs<LinearForm<BlockedMultiIndex>>,
    st_block: &[Rational],
    ell: usize,
    rho: u32,
    q_ref: &impl Fn(&BlockedMultiIndex) -> CoefficientRef,
) -> Result<Vec<LinearCondition>> {
    let last = st_block.len() - 1;
    let raised = raise_local(symbolic, ell - 1, rho);
    let x: TensorCoeffs<LinearForm<BlockedMultiIndex>> = de_casteljau_block(&raised, ell - 1, st_block, rho)?
        .into_iter()
        .filter(|(k, _)| k.block(ell - 1).get(last) == 0)
        .collect();
    let back = raise_local(&lower_local(&x, 0, rho, 0)?, 0, rho);

    let columns: Vec<&BlockedMultiIndex> = symbolic.keys().collect();
    let mut basis: Vec<Vec<Rational>> = Vec::new();
    let mut out = Vec::new();
    for (k, form) in &x {
        let mut y = form.clone();
        y.add_scaled(&back[k], &-Rational::one());
        if y.is_null() {
            continue;
        }
        let dense: Vec<Rational> = columns.iter().map(|c| y.get(c)).collect();
        if linalg::in_span(&basis, &dense) {
            continue;
        }
        basis.push(dense);
        linalg::rref(&mut basis);
        out.extend(LinearCondition::from_form(y.map_keys(q_ref), rho, ConditionKind::Reducibility));
    }
    Ok(out)
}

/// Column identifier of the global smoothness matrix.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ColumnKey {
    pub patch: String,
    pub index: BlockedMultiIndex,
}

/// Sparse homogeneous system `H c = 0` over all patches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothnessSystem {
    pub columns: Vec<ColumnKey>,
    /// Sparse rows as (column, weight), columns ascending.
    pub rows: Vec<Vec<(usize, Rational)>>,
    pub condition_sets: Vec<ConditionSet>,
}

impl SmoothnessSystem {
    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn dense(&self) -> Vec<Vec<Rational>> {
        self.rows
            .iter()
            .map(|row| {
                let mut d = vec![Rational::zero(); self.columns.len()];
                for (c, w) in row {
                    d[*c] = w.clone();
                }
                d
            })
            .collect()
    }
}

/// Every pair of patches that shares a facet, in index order.
pub fn auto_adjacencies(patches: &[Patch]) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for i in 0..patches.len() {
        for j in i + 1..patches.len() {
            if detect_shared_facet(&patches[i].simplotope, &patches[j].simplotope)?.is_some() {
                out.push((i, j));
            }
        }
    }
    Ok(out)
}

/// Stacks the conditions of every adjacent pair into one system. Columns
/// follow patch order, then index order.
pub fn assemble_smoothness_matrix(patches: &[Patch], adjacencies: &[(usize, usize)], r: u32) -> Result<SmoothnessSystem> {
    let mut columns = Vec::new();
    for p in patches {
        for index in enumerate_blocked(&p.simplotope.nu(), &p.degrees) {
            columns.push(ColumnKey { patch: p.id.clone(), index });
        }
    }
    let position: BTreeMap<ColumnKey, usize> = columns.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let mut rows = Vec::new();
    let mut condition_sets = Vec::new();
    for &(a, b) in adjacencies {
        let (pa, pb) = (
            patches.get(a).ok_or_else(|| Error::UnknownPatch(alloc::format!("#{a}")))?,
            patches.get(b).ok_or_else(|| Error::UnknownPatch(alloc::format!("#{b}")))?,
        );
        let cs = mixed_conditions(pa, pb, r).map_err(|e| Error::Pair {
            left: pa.id.clone(),
            right: pb.id.clone(),
            source: Box::new(e),
        })?;
        for cond in &cs.conditions {
            let mut row: Vec<(usize, Rational)> = cond
                .terms()
                .iter()
                .map(|(r, w)| {
                    let key = ColumnKey { patch: r.patch.clone(), index: r.index.clone() };
                    (position[&key], w.clone())
                })
                .collect();
            row.sort_by_key(|(c, _)| *c);
            rows.push(row);
        }
        condition_sets.push(cs);
    }
    Ok(SmoothnessSystem { columns, rows, condition_sets })
}

/// Lexicographically smallest vertex, used as a stable anchor in reports.
pub fn smallest_vertex(points: &[RationalPoint]) -> Option<&RationalPoint> {
    points.iter().min()
}
