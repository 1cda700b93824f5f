//! Shared-facet detection, block normal form and cospatiality.
//!
//! Two simplotopes share a facet when dropping one vertex of one factor on
//! each side leaves identical vertex sets. The pair is then rewritten in a
//! normal form anchored at a common corner (the lexicographically smallest
//! facet vertex):
//!
//! * the left side `P` has its out-of-facet factor first, with the dropped
//!   vertex last inside that factor;
//! * the right side `Q` has its out-of-facet factor last (or first, when both
//!   out-of-facet factors lose the same sub-facet), again with the dropped
//!   vertex last;
//! * the remaining factors are aligned, sorted by displacement set, and a
//!   zero-dimensional factor is inserted where one side has no counterpart.
//!
//! When the two out-of-facet factors have different dimensions the side with
//! the smaller one becomes `P`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{is_zero_vec, sub, RationalPoint, Simplotope};
use crate::linalg;
use crate::multiindex::{BlockedMultiIndex, MultiIndex};
use crate::{Error, Rational, Result};

/// How the out-of-facet factors of a pair relate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JoinKind {
    /// Both out-of-facet factors lose the same sub-facet; they occupy the
    /// first block on both sides and no degree moves between blocks.
    Coincident,
    /// The out-of-facet factors differ; `P`'s factor goes
    /// first and `Q`'s last.
    Redistributed,
}

/// One side of a pair in normal form, with the map back to the caller's
/// block and vertex numbering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedSide {
    pub simplotope: Simplotope,
    /// Caller block of each normalized block; `None` for inserted padding.
    pub block_origin: Vec<Option<usize>>,
    /// Caller vertex of vertex `j` of normalized block `i`.
    pub vertex_origin: Vec<Vec<usize>>,
    /// Type vector of the caller's simplotope.
    pub user_nu: Vec<usize>,
}

impl NormalizedSide {
    fn user_to_normalized(&self, user_block: usize) -> Option<usize> {
        self.block_origin.iter().position(|o| *o == Some(user_block))
    }

    /// Degrees of the normalized blocks; padding blocks have none.
    pub fn normalized_degrees(&self, user_degrees: &[u32]) -> Vec<Option<u32>> {
        self.block_origin.iter().map(|o| o.map(|b| user_degrees[b])).collect()
    }

    /// Rewrites a normalized index in the caller's numbering. Caller blocks
    /// of dimension zero get their whole degree.
    pub fn to_user_index(&self, k: &BlockedMultiIndex, user_degrees: &[u32]) -> BlockedMultiIndex {
        let blocks = self
            .user_nu
            .iter()
            .enumerate()
            .map(|(b, &n)| match self.user_to_normalized(b) {
                Some(i) => {
                    let mut out = MultiIndex::zeros(n + 1);
                    for (j, &orig) in self.vertex_origin[i].iter().enumerate() {
                        out.set(orig, k.block(i).get(j));
                    }
                    out
                }
                None => MultiIndex::new(vec![user_degrees[b]]),
            })
            .collect();
        BlockedMultiIndex::new(blocks)
    }

    /// Inverse of [`Self::to_user_index`]; padding blocks get `padding[i]`.
    pub fn from_user_index(&self, k: &BlockedMultiIndex, padding: &[u32]) -> BlockedMultiIndex {
        let blocks = self
            .block_origin
            .iter()
            .enumerate()
            .map(|(i, o)| match o {
                Some(b) => MultiIndex::new(
                    self.vertex_origin[i].iter().map(|&orig| k.block(*b).get(orig)).collect(),
                ),
                None => MultiIndex::new(vec![padding[i]]),
            })
            .collect();
        BlockedMultiIndex::new(blocks)
    }
}

/// Spanning sets of `U`, `Ũ` and `U_F`.
pub type OofSpaces = (Vec<Vec<Rational>>, Vec<Vec<Rational>>, Vec<Vec<Rational>>);

/// Result of a successful shared-facet detection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharedFacetInfo {
    pub kind: JoinKind,
    /// True when `p` is the caller's right simplotope.
    pub swapped: bool,
    pub p: NormalizedSide,
    pub q: NormalizedSide,
    /// Out-of-facet selector of `p` (always the first block).
    pub epsilon: MultiIndex,
    /// Out-of-facet selector of `q`.
    pub epsilon_tilde: MultiIndex,
    /// Out-of-facet block in the caller's left and right numbering.
    pub oof_block_left: usize,
    pub oof_block_right: usize,
    /// Pairs of indices into the caller's `left.vertices()` and
    /// `right.vertices()` that coincide on the facet.
    pub vertex_correspondence: Vec<(usize, usize)>,
    /// The shared facet, in `p`'s normal form.
    pub facet: Simplotope,
}

impl SharedFacetInfo {
    /// Number of blocks after normalization.
    pub fn num_blocks(&self) -> usize {
        self.p.simplotope.num_blocks()
    }

    /// Index of `q`'s out-of-facet block.
    pub fn q_oof_block(&self) -> usize {
        match self.kind {
            JoinKind::Coincident => 0,
            JoinKind::Redistributed => self.num_blocks() - 1,
        }
    }

    /// Direction spaces `U`, `Ũ` and `U_F` of the out-of-facet factors and of
    /// `p`'s out-of-facet sub-facet.
    pub fn oof_spaces(&self) -> OofSpaces {
        let u = self.p.simplotope.block_directions(0);
        let ut = self.q.simplotope.block_directions(self.q_oof_block());
        let uf = u[..u.len() - 1].to_vec();
        (u, ut, uf)
    }

    /// Spanning vectors of the facet's direction space.
    pub fn facet_directions(&self) -> Vec<Vec<Rational>> {
        self.facet.blocks().iter().flatten().cloned().collect()
    }
}

/// Vertex data of one side relative to the common corner.
struct SideData {
    /// Caller block of the out-of-facet factor.
    oof_block: usize,
    /// Nonzero displacements of the out-of-facet factor's facet part, sorted.
    sub_facet: Vec<Vec<Rational>>,
    oof_vertex: Vec<Rational>,
    /// Remaining positive-dimensional factors: (caller block, sorted
    /// nonzero displacements).
    others: Vec<(usize, Vec<Vec<Rational>>)>,
    /// For every caller block, displacement of each caller vertex.
    displacements: Vec<Vec<Vec<Rational>>>,
    nu: Vec<usize>,
}

impl SideData {
    fn new(s: &Simplotope, oof_block: usize, oof_vertex: usize, corner: &RationalPoint) -> Self {
        let choice = s
            .vertex_choices()
            .into_iter()
            .find(|c| &s.vertex(c) == corner)
            .expect("corner is a vertex of the simplotope");
        let displacements: Vec<Vec<Vec<Rational>>> = (0..s.num_blocks())
            .map(|i| {
                let anchor = s.displacement(i, choice[i]);
                (0..=s.nu()[i]).map(|j| sub(&s.displacement(i, j), &anchor)).collect()
            })
            .collect();
        let nonzero_sorted = |i: usize, skip: Option<usize>| {
            let mut d: Vec<Vec<Rational>> = displacements[i]
                .iter()
                .enumerate()
                .filter(|(j, w)| Some(*j) != skip && !is_zero_vec(w))
                .map(|(_, w)| w.clone())
                .collect();
            d.sort();
            d
        };
        let others = (0..s.num_blocks())
            .filter(|&i| i != oof_block && s.nu()[i] > 0)
            .map(|i| (i, nonzero_sorted(i, None)))
            .collect();
        SideData {
            oof_block,
            sub_facet: nonzero_sorted(oof_block, Some(oof_vertex)),
            oof_vertex: displacements[oof_block][oof_vertex].clone(),
            others,
            displacements,
            nu: s.nu(),
        }
    }

    fn facet_factors(&self) -> Vec<Vec<Vec<Rational>>> {
        let mut f: Vec<Vec<Vec<Rational>>> = self.others.iter().map(|(_, d)| d.clone()).collect();
        if !self.sub_facet.is_empty() {
            f.push(self.sub_facet.clone());
        }
        f.sort();
        f
    }

    fn block_with(&self, set: &[Vec<Rational>]) -> Option<usize> {
        self.others.iter().find(|(_, d)| d == set).map(|(b, _)| *b)
    }

    /// Builds a normalized side from an ordered list of (caller block,
    /// displacement list) entries.
    fn normalize(
        &self,
        corner: &RationalPoint,
        layout: Vec<(Option<usize>, Vec<Vec<Rational>>)>,
    ) -> NormalizedSide {
        let mut vertex_origin = Vec::with_capacity(layout.len());
        let mut block_origin = Vec::with_capacity(layout.len());
        let mut blocks = Vec::with_capacity(layout.len());
        for (origin, disp) in layout {
            let order = match origin {
                Some(b) => {
                    let find = |w: &Vec<Rational>| {
                        self.displacements[b].iter().position(|x| x == w).expect("displacement of block")
                    };
                    let zero = self.displacements[b].iter().position(|x| is_zero_vec(x)).expect("anchor");
                    let mut o = vec![zero];
                    o.extend(disp.iter().map(find));
                    o
                }
                None => vec![0],
            };
            vertex_origin.push(order);
            block_origin.push(origin);
            blocks.push(disp);
        }
        NormalizedSide {
            simplotope: Simplotope::new(corner.clone(), blocks).expect("normal form keeps independence"),
            block_origin,
            vertex_origin,
            user_nu: self.nu.clone(),
        }
    }
}

fn facet_vertex_set(s: &Simplotope, block: usize, vertex: usize) -> Vec<RationalPoint> {
    let mut pts: Vec<RationalPoint> = s
        .vertex_choices()
        .into_iter()
        .filter(|c| c[block] != vertex)
        .map(|c| s.vertex(&c))
        .collect();
    pts.sort();
    pts
}

fn facet_candidates(s: &Simplotope) -> Vec<(usize, usize, Vec<RationalPoint>)> {
    let mut out = Vec::new();
    for (i, &n) in s.nu().iter().enumerate() {
        for j in 0..=n {
            if n > 0 {
                out.push((i, j, facet_vertex_set(s, i, j)));
            }
        }
    }
    out
}

/// Finds a facet shared by `left` and `right` and normalizes the pair.
///
/// Returns `Ok(None)` when the simplotopes have different dimensions or no
/// facet in common.
pub fn detect_shared_facet(left: &Simplotope, right: &Simplotope) -> Result<Option<SharedFacetInfo>> {
    if left.ambient() != right.ambient() {
        return Err(Error::AmbientMismatch { left: left.ambient(), right: right.ambient() });
    }
    if left.dim() != right.dim() || left.dim() == 0 {
        return Ok(None);
    }
    let right_facets = facet_candidates(right);
    for (li, lj, lset) in facet_candidates(left) {
        for (ri, rj, rset) in &right_facets {
            if &lset != rset {
                continue;
            }
            let corner = lset[0].clone();
            let l = SideData::new(left, li, lj, &corner);
            let r = SideData::new(right, *ri, *rj, &corner);
            if l.facet_factors() != r.facet_factors() {
                continue;
            }
            if let Some(info) = assemble(left, right, &l, &r, &corner, &lset) {
                return Ok(Some(info));
            }
        }
    }
    Ok(None)
}

fn assemble(
    left: &Simplotope,
    right: &Simplotope,
    l: &SideData,
    r: &SideData,
    corner: &RationalPoint,
    facet_points: &[RationalPoint],
) -> Option<SharedFacetInfo> {
    let sort_others = |d: &SideData, exclude: &[Option<usize>]| {
        let mut o: Vec<(Option<usize>, Vec<Vec<Rational>>)> = d
            .others
            .iter()
            .filter(|(b, _)| !exclude.contains(&Some(*b)))
            .map(|(b, w)| (Some(*b), w.clone()))
            .collect();
        o.sort_by(|a, b| a.1.cmp(&b.1));
        o
    };
    let with_oof = |d: &SideData| {
        let mut w = d.sub_facet.clone();
        w.push(d.oof_vertex.clone());
        (Some(d.oof_block), w)
    };

    let (kind, swapped, p, q) = if l.sub_facet == r.sub_facet {
        let mut pl = vec![with_oof(l)];
        pl.extend(sort_others(l, &[]));
        let mut ql = vec![with_oof(r)];
        ql.extend(sort_others(r, &[]));
        (JoinKind::Coincident, false, l.normalize(corner, pl), r.normalize(corner, ql))
    } else {
        let swapped = l.sub_facet.len() > r.sub_facet.len();
        let (pd, qd) = if swapped { (r, l) } else { (l, r) };
        // P's last factor is Q's out-of-facet sub-facet and vice versa.
        let p_last = pd.block_with(&qd.sub_facet)?;
        let q_first = if pd.sub_facet.is_empty() { None } else { Some(qd.block_with(&pd.sub_facet)?) };
        let mut pl = vec![with_oof(pd)];
        pl.extend(sort_others(pd, &[Some(p_last)]));
        pl.push((Some(p_last), qd.sub_facet.clone()));
        let mut ql = vec![(q_first, pd.sub_facet.clone())];
        ql.extend(sort_others(qd, &[q_first]));
        ql.push(with_oof(qd));
        if pl.len() != ql.len() {
            return None;
        }
        (JoinKind::Redistributed, swapped, pd.normalize(corner, pl), qd.normalize(corner, ql))
    };

    let ell = p.simplotope.num_blocks();
    let q_oof = if kind == JoinKind::Coincident { 0 } else { ell - 1 };
    let epsilon = MultiIndex::unit(ell, 0, 1);
    let epsilon_tilde = MultiIndex::unit(ell, q_oof, 1);
    let facet = p.simplotope.facet_of(&epsilon).ok()?;

    let lv = left.vertices();
    let rv = right.vertices();
    let vertex_correspondence = facet_points
        .iter()
        .map(|x| {
            let a = lv.iter().position(|v| v == x).expect("facet vertex on left");
            let b = rv.iter().position(|v| v == x).expect("facet vertex on right");
            (a, b)
        })
        .collect();

    Some(SharedFacetInfo {
        kind,
        swapped,
        p,
        q,
        epsilon,
        epsilon_tilde,
        oof_block_left: l.oof_block,
        oof_block_right: r.oof_block,
        vertex_correspondence,
        facet,
    })
}

fn dim_of_intersection(a: &[Vec<Rational>], b: &[Vec<Rational>], n: usize) -> usize {
    linalg::intersect_spans(a, b, n).len()
}

/// Out-of-facet cospatiality: `U ∩ Ũ` contains a direction that is not in
/// `U_F`, i.e. `dim(U ∩ Ũ) > dim(U ∩ Ũ ∩ U_F)`.
pub fn is_oof_cospatial(info: &SharedFacetInfo) -> bool {
    let n = info.p.simplotope.ambient();
    let (u, ut, uf) = info.oof_spaces();
    let common = linalg::intersect_spans(&u, &ut, n);
    common.len() > dim_of_intersection(&common, &uf, n)
}

/// The plain rank rendering `dim(U ∩ Ũ) > dim(U_F)`.
///
/// Kept for comparison only: it agrees with [`is_oof_cospatial`] when `P`'s
/// out-of-facet factor is a segment, but rejects valid pairs whose factor has
/// dimension two or more, because `U ∩ Ũ` never contains the sub-facet
/// directions there.
pub fn rank_criterion(info: &SharedFacetInfo) -> bool {
    let n = info.p.simplotope.ambient();
    let (u, ut, uf) = info.oof_spaces();
    linalg::intersect_spans(&u, &ut, n).len() > linalg::rank(&uf)
}

fn not_cospatial() -> Error {
    Error::NotCospatial(String::from(
        "the out-of-facet simplices share no direction transversal to the facet",
    ))
}

/// Checks that `u` lies in `U ∩ Ũ` and not in `U_F`.
pub fn check_direction(info: &SharedFacetInfo, u: &[Rational]) -> Result<()> {
    let (uu, ut, uf) = info.oof_spaces();
    if u.len() != info.p.simplotope.ambient() {
        return Err(Error::LengthMismatch { expected: info.p.simplotope.ambient(), found: u.len() });
    }
    if !linalg::in_span(&uu, u) || !linalg::in_span(&ut, u) {
        return Err(Error::InadmissibleDirection("not parallel to both out-of-facet simplices".into()));
    }
    if linalg::in_span(&uf, u) {
        return Err(Error::DirectionParallelToFacet);
    }
    Ok(())
}

/// Picks the direction `u` used by the conditions: the last edge of `P`'s
/// out-of-facet factor when admissible, else the lexicographically smallest
/// admissible vector of the canonical basis of `U ∩ Ũ`.
pub fn choose_direction(info: &SharedFacetInfo) -> Result<Vec<Rational>> {
    if !is_oof_cospatial(info) {
        return Err(not_cospatial());
    }
    let p = &info.p.simplotope;
    let nu1 = p.nu()[0];
    let preferred = sub(&p.displacement(0, nu1), &p.displacement(0, nu1 - 1));
    if check_direction(info, &preferred).is_ok() {
        return Ok(preferred);
    }
    let (u, ut, _) = info.oof_spaces();
    let mut basis = linalg::intersect_spans(&u, &ut, p.ambient());
    basis.sort();
    basis
        .into_iter()
        .find(|v| check_direction(info, v).is_ok())
        .ok_or_else(not_cospatial)
}
