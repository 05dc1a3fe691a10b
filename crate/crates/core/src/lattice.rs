//! Core lattice-geometry vocabulary: support sets, rational polytopes, and
//! the exact primitives on them (support minima, faces, Minkowski sums,
//! normalized volumes, lattice indices).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hull::{self, PlacingOrder};
use crate::linalg::{self, IVec, QVec};

pub type LatticePoint = IVec;
pub type RationalVector = QVec;

/// A finite set of lattice points in the nonnegative orthant of Z^d,
/// deduplicated and kept in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupportSet {
    dim: usize,
    points: Vec<LatticePoint>,
}

impl SupportSet {
    pub fn new(dim: usize, mut points: Vec<LatticePoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Empty("support set"));
        }
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
            }
            if p.iter().any(|c| c.is_negative()) {
                return Err(Error::NegativeCoordinate);
            }
        }
        points.sort();
        points.dedup();
        Ok(SupportSet { dim, points })
    }

    /// Convenience constructor for literal coordinates.
    pub fn from_rows(dim: usize, rows: &[&[i64]]) -> Self {
        let pts = rows.iter().map(|r| linalg::ivec(r)).collect();
        SupportSet::new(dim, pts).expect("valid literal support")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, p: &[BigInt]) -> bool {
        self.points.binary_search_by(|q| q.as_slice().cmp(p)).is_ok()
    }

    /// Least point in lexicographic order.
    pub fn min_point(&self) -> &LatticePoint {
        &self.points[0]
    }
}

/// Convex polytope stored by its vertex set, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    pub dim_ambient: usize,
    pub vertices: Vec<RationalVector>,
}

/// A rational polyhedral cone in V-representation. Rays are primitive
/// integer vectors; lineality generators are a canonical (HNF) basis of the
/// saturated lineality lattice; no ray lies in the lineality space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConeV {
    pub dim_ambient: usize,
    pub rays: Vec<IVec>,
    pub lineality: Vec<IVec>,
}

/// min over a in A of <alpha, a>.
pub fn support_min(a: &SupportSet, alpha: &[BigRational]) -> Result<BigRational> {
    if alpha.len() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: alpha.len() });
    }
    Ok(a.points()
        .iter()
        .map(|p| linalg::dot_qi(alpha, p))
        .min()
        .expect("support sets are nonempty"))
}

/// The subset of A where <alpha, .> attains its minimum: the face of A in
/// the inner normal direction alpha.
pub fn support_face(a: &SupportSet, alpha: &[BigRational]) -> Result<SupportSet> {
    let m = support_min(a, alpha)?;
    let pts: Vec<LatticePoint> = a
        .points()
        .iter()
        .filter(|p| linalg::dot_qi(alpha, p) == m)
        .cloned()
        .collect();
    SupportSet::new(a.dim(), pts)
}

/// Integer-direction variants, used heavily by the fan machinery.
pub fn support_min_int(a: &SupportSet, alpha: &[BigInt]) -> BigInt {
    a.points()
        .iter()
        .map(|p| linalg::dot_ii(alpha, p))
        .min()
        .expect("support sets are nonempty")
}

pub fn support_face_int(a: &SupportSet, alpha: &[BigInt]) -> SupportSet {
    let m = support_min_int(a, alpha);
    let pts: Vec<LatticePoint> = a
        .points()
        .iter()
        .filter(|p| linalg::dot_ii(alpha, p) == m)
        .cloned()
        .collect();
    SupportSet::new(a.dim(), pts).expect("faces of valid supports are valid")
}

/// {a + b : a in A, b in B}, deduplicated.
pub fn minkowski_sum(a: &SupportSet, b: &SupportSet) -> Result<SupportSet> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    let mut pts = Vec::with_capacity(a.len() * b.len());
    for p in a.points() {
        for q in b.points() {
            pts.push(linalg::add_ii(p, q));
        }
    }
    SupportSet::new(a.dim(), pts)
}

pub fn minkowski_sum_many(sets: &[SupportSet]) -> Result<SupportSet> {
    let first = sets.first().ok_or(Error::Empty("family of support sets"))?;
    let mut acc = first.clone();
    for s in &sets[1..] {
        acc = minkowski_sum(&acc, s)?;
    }
    Ok(acc)
}

/// Union of the point sets.
pub fn union_support(sets: &[SupportSet]) -> Result<SupportSet> {
    let first = sets.first().ok_or(Error::Empty("family of support sets"))?;
    let mut pts: Vec<LatticePoint> = Vec::new();
    for s in sets {
        if s.dim() != first.dim() {
            return Err(Error::DimensionMismatch { expected: first.dim(), found: s.dim() });
        }
        pts.extend_from_slice(s.points());
    }
    SupportSet::new(first.dim(), pts)
}

/// Dimension of the affine span of the set.
pub fn affine_dim(a: &SupportSet) -> usize {
    let base = a.min_point();
    let rows: Vec<IVec> = a.points()[1..]
        .iter()
        .map(|p| linalg::sub_ii(p, base))
        .collect();
    linalg::rank_i(&rows)
}

/// Affine dimension of the Minkowski sum of a family, computed on stacked
/// difference vectors without forming the sum.
pub fn family_sum_dim(sets: &[SupportSet]) -> usize {
    let mut rows: Vec<IVec> = Vec::new();
    for s in sets {
        let base = s.min_point();
        for p in &s.points()[1..] {
            rows.push(linalg::sub_ii(p, base));
        }
    }
    linalg::rank_i(&rows)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeIndex {
    pub rank: usize,
    /// Index of the generated lattice inside its saturation: the product of
    /// the nonzero elementary divisors.
    pub index: BigInt,
}

/// Index of the lattice generated by `gens` in its saturated lattice.
pub fn lattice_index(gens: &[IVec]) -> Result<LatticeIndex> {
    if gens.is_empty() {
        return Err(Error::Empty("lattice generators"));
    }
    let divisors = linalg::smith_divisors(gens);
    let mut index = BigInt::one();
    for d in &divisors {
        index *= d;
    }
    Ok(LatticeIndex { rank: divisors.len(), index })
}

/// Vertex set of the convex hull of rational points, canonical order.
pub fn convex_hull(points: &[RationalVector]) -> Result<Polytope> {
    let first = points.first().ok_or(Error::Empty("point set"))?;
    let dim = first.len();
    for p in points {
        if p.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
        }
    }
    // Scale to a lattice configuration; vertices are preserved.
    let mut lcm = BigInt::one();
    for p in points {
        for x in p {
            lcm = lcm.lcm(x.denom());
        }
    }
    let scaled: Vec<IVec> = points
        .iter()
        .map(|p| p.iter().map(|x| x.numer() * (&lcm / x.denom())).collect())
        .collect();
    let h = hull::hull_structure(&scaled);
    let lcm_q = BigRational::from(lcm);
    let mut vertices: Vec<RationalVector> = h
        .vertex_indices
        .iter()
        .map(|&i| {
            h.points[i]
                .iter()
                .map(|c| BigRational::from(c.clone()) / &lcm_q)
                .collect()
        })
        .collect();
    vertices.sort();
    Ok(Polytope { dim_ambient: dim, vertices })
}

/// d! times the Euclidean volume; 0 when the affine dimension is below the
/// ambient dimension. Lattice inputs give integers; callers stay in a
/// lattice context per the artifact contract.
pub fn normalized_volume(p: &Polytope) -> BigInt {
    let v = normalized_volume_rational(p);
    assert!(
        v.denom().is_one(),
        "normalized volume of a non-lattice polytope requested"
    );
    v.numer().clone()
}

pub fn normalized_volume_rational(p: &Polytope) -> BigRational {
    hull::placing_volume_rational(&p.vertices, PlacingOrder::LexAsc)
}

/// Normalized volume of the hull of a support set.
pub fn support_volume(a: &SupportSet) -> BigInt {
    hull::placing_volume(a.points(), PlacingOrder::LexAsc)
}

/// Per-set translation applied at the input boundary: coordinates with a
/// negative minimum are shifted up so the set touches the nonnegative
/// orthant. Returns the support together with the subtracted vector.
pub fn normalize_support_rows(dim: usize, rows: Vec<IVec>) -> Result<(SupportSet, IVec)> {
    if rows.is_empty() {
        return Err(Error::Empty("support set"));
    }
    for r in &rows {
        if r.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: r.len() });
        }
    }
    let mut shift = vec![BigInt::zero(); dim];
    for j in 0..dim {
        let min = rows.iter().map(|r| r[j].clone()).min().expect("nonempty");
        if min.is_negative() {
            shift[j] = min;
        }
    }
    let translated: Vec<IVec> = rows
        .iter()
        .map(|r| r.iter().zip(&shift).map(|(x, s)| x - s).collect())
        .collect();
    Ok((SupportSet::new(dim, translated)?, shift))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, ivec, qvec, rat};

    fn ex28_a1() -> SupportSet {
        SupportSet::from_rows(2, &[&[2, 0], &[3, 0], &[0, 2]])
    }

    fn ex28_a3() -> SupportSet {
        SupportSet::from_rows(2, &[&[1, 1], &[0, 3], &[1, 2], &[2, 1], &[3, 0]])
    }

    #[test]
    fn support_min_examples() {
        let a1 = ex28_a1();
        assert_eq!(support_min(&a1, &qvec(&[1, 1])).unwrap(), rat(2, 1));
        assert_eq!(support_min(&a1, &qvec(&[0, 0])).unwrap(), rat(0, 1));
        assert_eq!(support_min(&a1, &qvec(&[-1, 0])).unwrap(), rat(-3, 1));
        assert!(support_min(&a1, &qvec(&[1, 1, 1])).is_err());
    }

    #[test]
    fn support_face_examples() {
        let square = SupportSet::from_rows(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let bottom = support_face(&square, &qvec(&[0, 1])).unwrap();
        assert_eq!(bottom, SupportSet::from_rows(2, &[&[0, 0], &[1, 0]]));
        assert_eq!(support_face(&square, &qvec(&[0, 0])).unwrap(), square);
        let a3 = ex28_a3();
        let f = support_face(&a3, &qvec(&[1, 1])).unwrap();
        assert_eq!(f, SupportSet::from_rows(2, &[&[1, 1]]));
    }

    #[test]
    fn hull_drops_interior_rational_point() {
        let pts = vec![qvec(&[0, 0]), qvec(&[1, 0]), qvec(&[0, 1]), vec![rat(1, 2), rat(1, 2)]];
        let p = convex_hull(&pts).unwrap();
        assert_eq!(p.vertices, vec![qvec(&[0, 0]), qvec(&[0, 1]), qvec(&[1, 0])]);
        let single = convex_hull(&[qvec(&[2, 3])]).unwrap();
        assert_eq!(single.vertices, vec![qvec(&[2, 3])]);
    }

    #[test]
    fn hexagon_hull_and_volume() {
        // Union of the four supports in the degree-chain worked example.
        let a0 = SupportSet::from_rows(2, &[&[1, 1]]);
        let a1 = SupportSet::from_rows(2, &[&[0, 1], &[0, 2], &[1, 1]]);
        let a2 = SupportSet::from_rows(2, &[&[1, 0], &[2, 0], &[1, 1]]);
        let a3 = SupportSet::from_rows(2, &[&[1, 1], &[3, 1], &[1, 3]]);
        let u = union_support(&[a0, a1, a2, a3]).unwrap();
        let hull_pts: Vec<RationalVector> =
            u.points().iter().map(|p| linalg::ivec_to_qvec(p)).collect();
        let p = convex_hull(&hull_pts).unwrap();
        let expected: Vec<RationalVector> = vec![
            qvec(&[0, 1]),
            qvec(&[0, 2]),
            qvec(&[1, 0]),
            qvec(&[1, 3]),
            qvec(&[2, 0]),
            qvec(&[3, 1]),
        ];
        assert_eq!(p.vertices, expected);
        assert_eq!(normalized_volume(&p), int(11));
    }

    #[test]
    fn volume_basics() {
        let simplex = convex_hull(&[qvec(&[0, 0]), qvec(&[1, 0]), qvec(&[0, 1])]).unwrap();
        assert_eq!(normalized_volume(&simplex), int(1));
        let seg = convex_hull(&[qvec(&[0]), qvec(&[3])]).unwrap();
        assert_eq!(normalized_volume(&seg), int(3));
        let flat = convex_hull(&[qvec(&[0, 0]), qvec(&[2, 2])]).unwrap();
        assert_eq!(normalized_volume(&flat), int(0));
    }

    #[test]
    fn minkowski_examples() {
        let origin = SupportSet::from_rows(2, &[&[0, 0]]);
        let b = SupportSet::from_rows(2, &[&[1, 0], &[0, 1]]);
        assert_eq!(minkowski_sum(&origin, &b).unwrap(), b);
        let e1 = SupportSet::from_rows(2, &[&[0, 0], &[1, 0]]);
        let e2 = SupportSet::from_rows(2, &[&[0, 0], &[0, 1]]);
        assert_eq!(
            minkowski_sum(&e1, &e2).unwrap(),
            SupportSet::from_rows(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])
        );
        assert_eq!(
            minkowski_sum(&e1, &e1).unwrap(),
            SupportSet::from_rows(2, &[&[0, 0], &[1, 0], &[2, 0]])
        );
    }

    #[test]
    fn affine_dim_examples() {
        assert_eq!(affine_dim(&SupportSet::from_rows(2, &[&[5, 7]])), 0);
        assert_eq!(
            affine_dim(&SupportSet::from_rows(2, &[&[0, 0], &[1, 1], &[2, 2]])),
            1
        );
        assert_eq!(affine_dim(&ex28_a3()), 2);
    }

    #[test]
    fn lattice_index_examples() {
        let li = lattice_index(&[ivec(&[1, 0]), ivec(&[0, 1])]).unwrap();
        assert_eq!((li.rank, li.index), (2, int(1)));
        // Pushforward of (1,3,1) under (w1-w0, w2-w0) is (2,0): index 2.
        let li = lattice_index(&[ivec(&[2, 0])]).unwrap();
        assert_eq!((li.rank, li.index), (1, int(2)));
        let li = lattice_index(&[ivec(&[2, 0]), ivec(&[0, 2])]).unwrap();
        assert_eq!((li.rank, li.index), (2, int(4)));
    }

    #[test]
    fn input_translation_touches_orthant() {
        let (s, shift) =
            normalize_support_rows(2, vec![ivec(&[-1, 2]), ivec(&[0, 3])]).unwrap();
        assert_eq!(shift, ivec(&[-1, 0]));
        assert_eq!(s, SupportSet::from_rows(2, &[&[0, 2], &[1, 3]]));
        // Already nonnegative: untouched even away from the origin.
        let (s, shift) = normalize_support_rows(2, vec![ivec(&[1, 1])]).unwrap();
        assert_eq!(shift, ivec(&[0, 0]));
        assert_eq!(s, SupportSet::from_rows(2, &[&[1, 1]]));
    }
}
