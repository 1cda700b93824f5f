//! Exact affine geometry of simplices and simplotopes.

pub mod facet;

pub use facet::{
    check_direction, choose_direction, detect_shared_facet, is_oof_cospatial, rank_criterion, JoinKind,
    NormalizedSide, SharedFacetInfo,
};

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::linalg;
use crate::multiindex::MultiIndex;
use crate::{Error, Rational, Result};

/// A point (or vector) with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalPoint(Vec<Rational>);

impl RationalPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        RationalPoint(coords)
    }

    pub fn origin(dim: usize) -> Self {
        RationalPoint(vec![Rational::zero(); dim])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        RationalPoint(coords.iter().map(|&c| crate::int(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn translate(&self, v: &[Rational]) -> RationalPoint {
        RationalPoint(add(&self.0, v))
    }

    /// `self - other` as a vector.
    pub fn diff(&self, other: &RationalPoint) -> Vec<Rational> {
        sub(&self.0, &other.0)
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

pub(crate) fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `s a`
pub fn scale(a: &[Rational], s: &Rational) -> Vec<Rational> {
    a.iter().map(|x| x * s).collect()
}

pub(crate) fn is_zero_vec(a: &[Rational]) -> bool {
    a.iter().all(Zero::is_zero)
}

fn sum(v: &[Rational]) -> Rational {
    v.iter().fold(Rational::zero(), |acc, x| acc + x)
}

/// Barycentric weights, summing to one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarycentricPoint(Vec<Rational>);

impl BarycentricPoint {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if !sum(&weights).is_one() {
            return Err(Error::InvalidWeights { expected: "1".into() });
        }
        Ok(BarycentricPoint(weights))
    }

    /// The `j`-th vertex of an `n`-simplex.
    pub fn vertex(len: usize, j: usize) -> Self {
        let mut w = vec![Rational::zero(); len];
        w[j] = Rational::one();
        BarycentricPoint(w)
    }

    pub fn weights(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Directional coordinates, summing to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectionCoords(Vec<Rational>);

impl DirectionCoords {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if !sum(&weights).is_zero() {
            return Err(Error::InvalidWeights { expected: "0".into() });
        }
        Ok(DirectionCoords(weights))
    }

    pub fn weights(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Per-factor barycentric coordinates of a point in a simplotope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplotopeCoords(Vec<BarycentricPoint>);

impl SimplotopeCoords {
    pub fn new(blocks: Vec<BarycentricPoint>) -> Self {
        SimplotopeCoords(blocks)
    }

    pub fn blocks(&self) -> &[BarycentricPoint] {
        &self.0
    }

    pub fn block(&self, i: usize) -> &BarycentricPoint {
        &self.0[i]
    }
}

/// Convex hull of affinely independent rational points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplex {
    vertices: Vec<RationalPoint>,
}

impl Simplex {
    pub fn new(vertices: Vec<RationalPoint>) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return Err(Error::DegenerateSimplex);
        };
        let ambient = first.dim();
        if let Some(bad) = vertices.iter().find(|v| v.dim() != ambient) {
            return Err(Error::AmbientMismatch { left: ambient, right: bad.dim() });
        }
        let s = Simplex { vertices };
        if linalg::rank(&s.edges()) != s.dim() {
            return Err(Error::DegenerateSimplex);
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn ambient(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn vertices(&self) -> &[RationalPoint] {
        &self.vertices
    }

    pub fn vertex(&self, j: usize) -> &RationalPoint {
        &self.vertices[j]
    }

    /// Edge vectors `v_j - v_0`, `j = 1..=n`.
    pub fn edges(&self) -> Vec<Vec<Rational>> {
        self.vertices[1..].iter().map(|v| v.diff(&self.vertices[0])).collect()
    }

    /// Solves `Σ λ_j (v_j - v_0) = w` for `j >= 1`.
    fn edge_coordinates(&self, w: &[Rational]) -> Option<Vec<Rational>> {
        let a = linalg::columns_to_rows(&self.edges(), self.ambient());
        if self.dim() == 0 {
            return is_zero_vec(w).then(Vec::new);
        }
        linalg::solve(&a, w)
    }

    pub fn barycentric(&self, point: &RationalPoint) -> Result<BarycentricPoint> {
        if point.dim() != self.ambient() {
            return Err(Error::AmbientMismatch { left: self.ambient(), right: point.dim() });
        }
        let lambda = self
            .edge_coordinates(&point.diff(&self.vertices[0]))
            .ok_or(Error::OutsideAffineHull)?;
        let mut b = Vec::with_capacity(self.vertices.len());
        b.push(Rational::one() - sum(&lambda));
        b.extend(lambda);
        Ok(BarycentricPoint(b))
    }

    pub fn direction_coords(&self, u: &[Rational]) -> Result<DirectionCoords> {
        if u.len() != self.ambient() {
            return Err(Error::AmbientMismatch { left: self.ambient(), right: u.len() });
        }
        let lambda = self.edge_coordinates(u).ok_or(Error::OutsideDirectionSpace)?;
        let mut s = Vec::with_capacity(self.vertices.len());
        s.push(-sum(&lambda));
        s.extend(lambda);
        Ok(DirectionCoords(s))
    }

    /// `Σ b_j v_j`
    pub fn point_at(&self, b: &BarycentricPoint) -> RationalPoint {
        combine(&self.vertices, b.weights())
    }

    /// `Σ s_j v_j`
    pub fn vector_at(&self, s: &DirectionCoords) -> Vec<Rational> {
        combine(&self.vertices, s.weights()).into_coords()
    }
}

fn combine(points: &[RationalPoint], weights: &[Rational]) -> RationalPoint {
    let dim = points[0].dim();
    let mut out = vec![Rational::zero(); dim];
    for (p, w) in points.iter().zip(weights) {
        if w.is_zero() {
            continue;
        }
        for (o, c) in out.iter_mut().zip(p.coords()) {
            *o += c * w;
        }
    }
    RationalPoint(out)
}

/// Product of simplices, stored as a base point plus the edge displacements
/// of each factor. Factor `i` has vertices `base + w_ij` with `w_i0 = 0`;
/// only `w_i1..w_iν_i` are stored, so a zero-dimensional factor is an empty
/// list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplotope {
    base: RationalPoint,
    blocks: Vec<Vec<Vec<Rational>>>,
}

impl Simplotope {
    pub fn new(base: RationalPoint, blocks: Vec<Vec<Vec<Rational>>>) -> Result<Self> {
        let ambient = base.dim();
        if blocks.is_empty() {
            return Err(Error::LengthMismatch { expected: 1, found: 0 });
        }
        for w in blocks.iter().flatten() {
            if w.len() != ambient {
                return Err(Error::AmbientMismatch { left: ambient, right: w.len() });
            }
        }
        let all: Vec<Vec<Rational>> = blocks.iter().flatten().cloned().collect();
        if linalg::rank(&all) != all.len() {
            return Err(Error::DegenerateSimplex);
        }
        Ok(Simplotope { base, blocks })
    }

    /// A simplex viewed as a one-factor simplotope based at its first vertex.
    pub fn from_simplex(simplex: &Simplex) -> Self {
        Simplotope { base: simplex.vertex(0).clone(), blocks: vec![simplex.edges()] }
    }

    pub fn base(&self) -> &RationalPoint {
        &self.base
    }

    pub fn blocks(&self) -> &[Vec<Vec<Rational>>] {
        &self.blocks
    }

    /// Displacements `w_i1..w_iν_i` of factor `i`.
    pub fn block(&self, i: usize) -> &[Vec<Rational>] {
        &self.blocks[i]
    }

    /// `w_ij` including the implicit `w_i0 = 0`.
    pub fn displacement(&self, i: usize, j: usize) -> Vec<Rational> {
        if j == 0 {
            vec![Rational::zero(); self.ambient()]
        } else {
            self.blocks[i][j - 1].clone()
        }
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// The type vector `ν`.
    pub fn nu(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    pub fn dim(&self) -> usize {
        self.nu().iter().sum()
    }

    pub fn ambient(&self) -> usize {
        self.base.dim()
    }

    /// Factor `i` as a simplex anchored at the base point.
    pub fn block_simplex(&self, i: usize) -> Simplex {
        let mut vertices = vec![self.base.clone()];
        vertices.extend(self.blocks[i].iter().map(|w| self.base.translate(w)));
        Simplex { vertices }
    }

    /// Spanning vectors of the direction space of factor `i`.
    pub fn block_directions(&self, i: usize) -> Vec<Vec<Rational>> {
        self.blocks[i].clone()
    }

    /// `base + Σ_i Σ_j a_ij w_ij`
    pub fn point_at(&self, a: &SimplotopeCoords) -> RationalPoint {
        let mut p = self.base.clone().into_coords();
        for (block, coords) in self.blocks.iter().zip(a.blocks()) {
            for (w, aij) in block.iter().zip(&coords.weights()[1..]) {
                for (x, c) in p.iter_mut().zip(w) {
                    *x += c * aij;
                }
            }
        }
        RationalPoint(p)
    }

    /// Point of the product whose factor `i` sits at its vertex `choice[i]`.
    pub fn vertex(&self, choice: &[usize]) -> RationalPoint {
        let mut p = self.base.clone();
        for (i, &j) in choice.iter().enumerate() {
            if j > 0 {
                p = p.translate(&self.blocks[i][j - 1]);
            }
        }
        p
    }

    /// All vertex choices in row-major order, first factor slowest.
    pub fn vertex_choices(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for n in self.nu() {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=n).map(move |j| {
                        let mut c = prefix.clone();
                        c.push(j);
                        c
                    })
                })
                .collect();
        }
        out
    }

    pub fn vertices(&self) -> Vec<RationalPoint> {
        self.vertex_choices().iter().map(|c| self.vertex(c)).collect()
    }

    fn all_directions(&self) -> Vec<Vec<Rational>> {
        self.blocks.iter().flatten().cloned().collect()
    }

    /// Per-factor components of a vector of the direction space.
    pub fn decompose(&self, u: &[Rational]) -> Result<Vec<Vec<Rational>>> {
        let dirs = self.all_directions();
        let lambda = if dirs.is_empty() {
            if !is_zero_vec(u) {
                return Err(Error::OutsideDirectionSpace);
            }
            Vec::new()
        } else {
            let a = linalg::columns_to_rows(&dirs, self.ambient());
            linalg::solve(&a, u).ok_or(Error::OutsideDirectionSpace)?
        };
        let mut out = Vec::with_capacity(self.num_blocks());
        let mut start = 0;
        for block in &self.blocks {
            let mut s = Vec::with_capacity(block.len() + 1);
            let part = &lambda[start..start + block.len()];
            s.push(-sum(part));
            s.extend(part.iter().cloned());
            out.push(s);
            start += block.len();
        }
        Ok(out)
    }

    /// Per-factor directional coordinates of `u`.
    pub fn direction_coords(&self, u: &[Rational]) -> Result<Vec<DirectionCoords>> {
        Ok(self.decompose(u)?.into_iter().map(DirectionCoords).collect())
    }

    pub fn coords(&self, point: &RationalPoint) -> Result<SimplotopeCoords> {
        if point.dim() != self.ambient() {
            return Err(Error::AmbientMismatch { left: self.ambient(), right: point.dim() });
        }
        let parts = self
            .decompose(&point.diff(&self.base))
            .map_err(|_| Error::OutsideAffineHull)?;
        Ok(SimplotopeCoords(
            parts
                .into_iter()
                .map(|mut s| {
                    s[0] += Rational::one();
                    BarycentricPoint(s)
                })
                .collect(),
        ))
    }

    /// The facet obtained by dropping the last vertex of the factor selected
    /// by `eps`.
    pub fn facet_of(&self, eps: &MultiIndex) -> Result<Simplotope> {
        if eps.len() != self.num_blocks() || eps.norm() != 1 {
            return Err(Error::InvalidFacetSelector);
        }
        let i = eps.support().next().ok_or(Error::InvalidFacetSelector)?;
        if self.blocks[i].is_empty() {
            return Err(Error::ZeroDimensionalBlock(i));
        }
        let mut blocks = self.blocks.clone();
        blocks[i].pop();
        Ok(Simplotope { base: self.base.clone(), blocks })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{int, ratio};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> RationalPoint {
        RationalPoint::from_ints(c)
    }

    fn v(c: &[i64]) -> Vec<Rational> {
        c.iter().map(|&x| int(x)).collect()
    }

    fn unit_triangle() -> Simplex {
        Simplex::new(vec![p(&[0, 0]), p(&[1, 0]), p(&[0, 1])]).unwrap()
    }

    #[test]
    fn barycentric_examples() {
        let t = unit_triangle();
        let b = t.barycentric(&RationalPoint::new(vec![ratio(1, 4), ratio(1, 4)])).unwrap();
        assert_eq!(b.weights(), &[ratio(1, 2), ratio(1, 4), ratio(1, 4)]);
        assert_eq!(t.barycentric(&p(&[1, 0])).unwrap(), BarycentricPoint::vertex(3, 1));
        let c = RationalPoint::new(vec![ratio(1, 3), ratio(1, 3)]);
        assert_eq!(t.barycentric(&c).unwrap().weights(), &[ratio(1, 3), ratio(1, 3), ratio(1, 3)]);
    }

    #[test]
    fn outside_hull_and_degenerate() {
        let seg = Simplex::new(vec![p(&[0, 0]), p(&[1, 1])]).unwrap();
        assert_eq!(seg.barycentric(&p(&[1, 0])), Err(Error::OutsideAffineHull));
        assert_eq!(seg.direction_coords(&v(&[1, 0])), Err(Error::OutsideDirectionSpace));
        assert_eq!(
            Simplex::new(vec![p(&[0, 0]), p(&[1, 1]), p(&[2, 2])]),
            Err(Error::DegenerateSimplex)
        );
    }

    #[test]
    fn direction_coords_of_edge() {
        let t = unit_triangle();
        let u = t.vertex(0).diff(t.vertex(1));
        assert_eq!(t.direction_coords(&u).unwrap().weights(), &[int(1), int(-1), int(0)]);
        assert_eq!(t.direction_coords(&v(&[0, 0])).unwrap().weights(), &[int(0), int(0), int(0)]);
    }

    #[test]
    fn facets_of_products() {
        let square = Simplotope::new(p(&[0, 0]), vec![vec![v(&[1, 0])], vec![v(&[0, 1])]]).unwrap();
        let f = square.facet_of(&MultiIndex::new(vec![1, 0])).unwrap();
        assert_eq!(f.nu(), vec![0, 1]);
        assert_eq!(f.vertices(), vec![p(&[0, 0]), p(&[0, 1])]);
        assert_eq!(
            f.facet_of(&MultiIndex::new(vec![1, 0])),
            Err(Error::ZeroDimensionalBlock(0))
        );

        let prism = Simplotope::new(
            p(&[0, 0, 0]),
            vec![vec![v(&[1, 0, 0]), v(&[0, 1, 0])], vec![v(&[0, 0, 1])]],
        )
        .unwrap();
        let tri = prism.facet_of(&MultiIndex::new(vec![0, 1])).unwrap();
        assert_eq!(tri.nu(), vec![2, 0]);

        let cube = Simplotope::new(
            p(&[0, 0, 0]),
            vec![vec![v(&[1, 0, 0])], vec![v(&[0, 1, 0])], vec![v(&[0, 0, 1])]],
        )
        .unwrap();
        let sq = cube.facet_of(&MultiIndex::new(vec![0, 0, 1])).unwrap();
        assert_eq!(sq.nu(), vec![1, 1, 0]);
        assert_eq!(sq.vertices().len(), 4);
    }

    #[test]
    fn coords_roundtrip_on_parallelogram() {
        let s = Simplotope::new(p(&[1, 1]), vec![vec![v(&[2, 1])], vec![v(&[0, 3])]]).unwrap();
        let x = RationalPoint::new(vec![ratio(5, 2), ratio(7, 3)]);
        let a = s.coords(&x).unwrap();
        assert_eq!(s.point_at(&a), x);
        let parts = s.decompose(&v(&[2, 4])).unwrap();
        assert_eq!(parts, vec![v(&[-1, 1]), v(&[-1, 1])]);
    }

    proptest! {
        #[test]
        fn barycentric_reconstructs(
            verts in proptest::collection::vec(-9i64..=9, 6),
            num in proptest::collection::vec(-20i64..=20, 2),
            den in 1i64..=7,
        ) {
            let pts = vec![p(&verts[0..2]), p(&verts[2..4]), p(&verts[4..6])];
            let Ok(t) = Simplex::new(pts) else { return Ok(()) };
            let x = RationalPoint::new(vec![ratio(num[0], den), ratio(num[1], den)]);
            let b = t.barycentric(&x).unwrap();
            prop_assert_eq!(t.point_at(&b), x);
            let s = t.direction_coords(&v(&num)).unwrap();
            prop_assert!(sum(s.weights()).is_zero());
            prop_assert_eq!(t.vector_at(&s), v(&num));
        }
    }
}
