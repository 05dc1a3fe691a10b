//! Convex hull internals: placing-triangulation volumes, brute-force facet
//! enumeration at desk scale, and the face lattice through facet incidences.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeSet, HashMap};

use crate::linalg::{
    self, dot_ii, integer_kernel, is_zero_q, primitive, rank_q, rational_to_primitive,
    saturated_basis, solve_in_span, sub_ii, IVec, QVec,
};

/// Orientation seed for the placing triangulation.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PlacingOrder {
    LexAsc,
    LexDesc,
}

/// Normalized volume (d! times Euclidean) of the hull of an integer point
/// set, via an incremental placing triangulation. Returns 0 when the points
/// do not span the ambient space.
pub fn placing_volume(points: &[IVec], order: PlacingOrder) -> BigInt {
    let mut pts: Vec<IVec> = points.to_vec();
    pts.sort();
    pts.dedup();
    if let PlacingOrder::LexDesc = order {
        pts.reverse();
    }
    if pts.is_empty() {
        return BigInt::zero();
    }
    let dim = pts[0].len();
    if dim == 0 {
        return BigInt::one();
    }
    // Greedy initial simplex: first point, then any point extending the rank.
    let mut used = vec![false; pts.len()];
    let mut simplex: Vec<usize> = vec![0];
    used[0] = true;
    let mut echelon: Vec<QVec> = Vec::new();
    for (i, p) in pts.iter().enumerate().skip(1) {
        if echelon.len() == dim {
            break;
        }
        let diff = linalg::ivec_to_qvec(&sub_ii(p, &pts[0]));
        if extend_echelon(&mut echelon, diff) {
            simplex.push(i);
            used[i] = true;
        }
    }
    if echelon.len() < dim {
        return BigInt::zero();
    }

    let mut volume = simplex_volume(&pts, &simplex);
    let mut faces: HashMap<Vec<usize>, FaceEntry> = HashMap::new();
    for skip in 0..simplex.len() {
        let mut verts: Vec<usize> = simplex.clone();
        let opposite = verts.remove(skip);
        verts.sort_unstable();
        let plane = face_plane(&pts, &verts, opposite);
        faces.insert(verts, FaceEntry { count: 1, plane: Some(plane) });
    }

    for ip in 0..pts.len() {
        if used[ip] {
            continue;
        }
        let p = pts[ip].clone();
        let visible: Vec<Vec<usize>> = faces
            .iter()
            .filter(|(_, e)| e.count == 1)
            .filter(|(_, e)| {
                let (n, c) = e.plane.as_ref().expect("boundary face keeps its plane");
                dot_ii(n, &p) < *c
            })
            .map(|(k, _)| k.clone())
            .collect();
        for face_verts in visible {
            let mut cell: Vec<usize> = face_verts.clone();
            cell.push(ip);
            volume += simplex_volume(&pts, &cell);
            for skip in 0..cell.len() {
                let mut verts = cell.clone();
                let opposite = verts.remove(skip);
                verts.sort_unstable();
                match faces.get_mut(&verts) {
                    Some(entry) => {
                        entry.count += 1;
                        entry.plane = None;
                    }
                    None => {
                        let plane = face_plane(&pts, &verts, opposite);
                        faces.insert(verts, FaceEntry { count: 1, plane: Some(plane) });
                    }
                }
            }
        }
    }
    volume
}

struct FaceEntry {
    count: u8,
    plane: Option<(IVec, BigInt)>,
}

fn simplex_volume(pts: &[IVec], cell: &[usize]) -> BigInt {
    let base = &pts[cell[0]];
    let rows: Vec<IVec> = cell[1..].iter().map(|&i| sub_ii(&pts[i], base)).collect();
    linalg::det_i(&rows).abs()
}

/// Supporting hyperplane through the face vertices, oriented so that the
/// opposite simplex vertex satisfies <n, x> > c (the hull side is >= c).
fn face_plane(pts: &[IVec], verts: &[usize], opposite: usize) -> (IVec, BigInt) {
    let base = &pts[verts[0]];
    let rows: Vec<IVec> = verts[1..].iter().map(|&i| sub_ii(&pts[i], base)).collect();
    let kernel = integer_kernel(&rows, base.len());
    debug_assert_eq!(kernel.len(), 1, "face of a nondegenerate simplex spans a hyperplane");
    let mut n = primitive(&kernel[0]);
    let mut c = dot_ii(&n, base);
    let side = dot_ii(&n, &pts[opposite]);
    debug_assert_ne!(side, c);
    if side < c {
        n = linalg::neg_i(&n);
        c = -c;
    }
    (n, c)
}

fn extend_echelon(echelon: &mut Vec<QVec>, mut v: QVec) -> bool {
    for row in echelon.iter() {
        let lead = row
            .iter()
            .position(|x| !x.is_zero())
            .expect("echelon rows are nonzero");
        if !v[lead].is_zero() {
            let factor = &v[lead] / &row[lead];
            for (x, y) in v.iter_mut().zip(row) {
                let delta = &factor * y;
                *x = &*x - delta;
            }
        }
    }
    if is_zero_q(&v) {
        false
    } else {
        echelon.push(v);
        true
    }
}

/// Normalized volume for rational points: scales to a lattice configuration
/// and divides back.
pub fn placing_volume_rational(points: &[QVec], order: PlacingOrder) -> BigRational {
    if points.is_empty() {
        return BigRational::zero();
    }
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
    let vol = placing_volume(&scaled, order);
    let dim = points[0].len();
    let mut denom = BigInt::one();
    for _ in 0..dim {
        denom *= &lcm;
    }
    BigRational::new(vol, denom)
}

/// One facet of a hull, both in projected full-dimensional coordinates and
/// lifted back to the ambient lattice.
#[derive(Debug, Clone)]
pub struct Facet {
    /// Primitive inner normal in ambient coordinates, lying in the span of
    /// the point differences.
    pub normal: IVec,
    /// Indices (into `HullStructure::points`) of points on the facet.
    pub incident: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct HullStructure {
    pub ambient: usize,
    /// Deduplicated, lexicographically sorted input points.
    pub points: Vec<IVec>,
    pub affine_dim: usize,
    pub facets: Vec<Facet>,
    /// Indices of the extreme points.
    pub vertex_indices: Vec<usize>,
    /// Integer basis of the orthogonal complement of the affine span: the
    /// lineality space shared by all normal cones.
    pub lineality: Vec<IVec>,
    /// All nonempty faces as sorted point-index sets, the full set included.
    /// Sorted by (cardinality, lexicographic indices).
    pub faces: Vec<Vec<usize>>,
}

impl HullStructure {
    /// Facet indices whose incidence set contains the given face.
    pub fn facets_containing(&self, face: &[usize]) -> Vec<usize> {
        self.facets
            .iter()
            .enumerate()
            .filter(|(_, f)| face.iter().all(|i| f.incident.binary_search(i).is_ok()))
            .map(|(i, _)| i)
            .collect()
    }

    /// Dimension of the affine span of a face given by point indices.
    pub fn face_dim(&self, face: &[usize]) -> usize {
        if face.len() <= 1 {
            return 0;
        }
        let base = &self.points[face[0]];
        let rows: Vec<QVec> = face[1..]
            .iter()
            .map(|&i| linalg::ivec_to_qvec(&sub_ii(&self.points[i], base)))
            .collect();
        rank_q(&rows)
    }
}

/// Full hull structure of an integer point set in any (possibly deficient)
/// ambient dimension. Facets are relative facets within the affine span;
/// candidate hyperplanes are generated brute-force from point subsets, which
/// is adequate at desk scale.
pub fn hull_structure(points: &[IVec]) -> HullStructure {
    let mut pts: Vec<IVec> = points.to_vec();
    pts.sort();
    pts.dedup();
    assert!(!pts.is_empty(), "hull of an empty point set");
    let ambient = pts[0].len();
    let base = pts[0].clone();
    let diffs: Vec<IVec> = pts.iter().map(|p| sub_ii(p, &base)).collect();
    let span = saturated_basis(&diffs, ambient);
    let r = span.len();
    let lineality = if r == 0 {
        identity_basis(ambient)
    } else {
        integer_kernel(&span, ambient)
    };

    if r == 0 {
        return HullStructure {
            ambient,
            points: pts,
            affine_dim: 0,
            facets: vec![],
            vertex_indices: vec![0],
            lineality,
            faces: vec![vec![0]],
        };
    }

    // Integer coordinates in the saturated span basis.
    let span_q: Vec<QVec> = span.iter().map(|b| linalg::ivec_to_qvec(b)).collect();
    let proj: Vec<IVec> = diffs
        .iter()
        .map(|d| {
            let x = solve_in_span(&span_q, &linalg::ivec_to_qvec(d))
                .expect("differences lie in their own span");
            x.iter()
                .map(|c| {
                    debug_assert!(c.denom().is_one(), "saturated basis gives integer coordinates");
                    c.numer().clone()
                })
                .collect()
        })
        .collect();

    let proj_facets = full_dim_facets(&proj, r);

    // Gram matrix solve lifts each projected normal into the span.
    let gram: Vec<QVec> = span
        .iter()
        .map(|bi| span.iter().map(|bj| BigRational::from(dot_ii(bi, bj))).collect())
        .collect();
    let facets: Vec<Facet> = proj_facets
        .into_iter()
        .map(|(nu, _c, incident)| {
            let w = solve_in_span(&gram, &linalg::ivec_to_qvec(&nu))
                .expect("Gram matrix of a basis is invertible");
            let mut lifted = vec![BigRational::zero(); ambient];
            for (wi, b) in w.iter().zip(&span) {
                for (dst, bx) in lifted.iter_mut().zip(b) {
                    let delta = wi * BigRational::from(bx.clone());
                    *dst = &*dst + delta;
                }
            }
            Facet { normal: rational_to_primitive(&lifted), incident }
        })
        .collect();

    // A point is extreme iff its incident facet normals span the whole
    // projected space.
    let vertex_indices: Vec<usize> = (0..pts.len())
        .filter(|&i| {
            let rows: Vec<QVec> = facets
                .iter()
                .filter(|f| f.incident.binary_search(&i).is_ok())
                .map(|f| linalg::ivec_to_qvec(&f.normal))
                .collect();
            rank_q(&rows) == r
        })
        .collect();

    let faces = close_under_intersection(pts.len(), &facets);

    HullStructure {
        ambient,
        points: pts,
        affine_dim: r,
        facets,
        vertex_indices,
        lineality,
        faces,
    }
}

fn identity_basis(n: usize) -> Vec<IVec> {
    (0..n)
        .map(|i| {
            let mut v = vec![BigInt::zero(); n];
            v[i] = BigInt::one();
            v
        })
        .collect()
}

/// Facets of a full-dimensional point configuration in Z^r: candidate
/// hyperplanes through r-subsets, kept when all points lie on one side.
/// Returns (inner normal, min value, sorted incident indices).
fn full_dim_facets(pts: &[IVec], r: usize) -> Vec<(IVec, BigInt, Vec<usize>)> {
    let n = pts.len();
    let mut seen: BTreeSet<(IVec, BigInt)> = BTreeSet::new();
    let mut out = Vec::new();
    let mut subset: Vec<usize> = (0..r).collect();
    loop {
        // Hyperplane spanned by the subset, if it is affinely (r-1)-dim.
        let base = &pts[subset[0]];
        let rows: Vec<IVec> = subset[1..].iter().map(|&i| sub_ii(&pts[i], base)).collect();
        let kernel = integer_kernel(&rows, r);
        if kernel.len() == 1 {
            let n0 = primitive(&kernel[0]);
            let c0 = dot_ii(&n0, base);
            let mut min = c0.clone();
            let mut max = c0.clone();
            for p in pts {
                let v = dot_ii(&n0, p);
                if v < min {
                    min = v.clone();
                }
                if v > max {
                    max = v;
                }
            }
            let oriented = if min == c0 && max > c0 {
                Some((n0, c0))
            } else if max == c0 && min < c0 {
                Some((linalg::neg_i(&n0), -c0))
            } else {
                None
            };
            if let Some((nf, cf)) = oriented {
                if seen.insert((nf.clone(), cf.clone())) {
                    let incident: Vec<usize> = (0..n)
                        .filter(|&i| dot_ii(&nf, &pts[i]) == cf)
                        .collect();
                    out.push((nf, cf, incident));
                }
            }
        }
        // Next r-combination of 0..n.
        let mut k = r;
        loop {
            if k == 0 {
                return finish_facets(out);
            }
            k -= 1;
            if subset[k] + 1 <= n - (r - k) {
                subset[k] += 1;
                for j in k + 1..r {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn finish_facets(mut f: Vec<(IVec, BigInt, Vec<usize>)>) -> Vec<(IVec, BigInt, Vec<usize>)> {
    f.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    f
}

/// Nonempty faces as point-index sets: closure of the facet incidences under
/// intersection, plus the full set.
fn close_under_intersection(npoints: usize, facets: &[Facet]) -> Vec<Vec<usize>> {
    let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
    faces.insert((0..npoints).collect());
    loop {
        let snapshot: Vec<Vec<usize>> = faces.iter().cloned().collect();
        let before = faces.len();
        for f in facets {
            for g in &snapshot {
                let inter: Vec<usize> = g
                    .iter()
                    .copied()
                    .filter(|i| f.incident.binary_search(i).is_ok())
                    .collect();
                if !inter.is_empty() {
                    faces.insert(inter);
                }
            }
        }
        if faces.len() == before {
            break;
        }
    }
    let mut out: Vec<Vec<usize>> = faces.into_iter().collect();
    out.sort_by(|a, b| (a.len(), a.clone()).cmp(&(b.len(), b.clone())));
    out
}

/// Exact membership of a rational point in the hull of an integer point set,
/// decided through the facet description.
pub fn hull_contains(structure: &HullStructure, point: &[BigRational]) -> bool {
    // Must lie in the affine span first.
    let base = linalg::ivec_to_qvec(&structure.points[0]);
    let diff = linalg::sub_qq(point, &base);
    for l in &structure.lineality {
        if !linalg::dot_qi(&diff, l).is_zero() {
            return false;
        }
    }
    if structure.affine_dim == 0 {
        return is_zero_q(&diff);
    }
    for f in &structure.facets {
        let c = f
            .incident
            .first()
            .map(|&i| dot_ii(&f.normal, &structure.points[i]))
            .expect("facet has incident points");
        if linalg::dot_qi(point, &f.normal) < BigRational::from(c) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, ivec, qvec};

    #[test]
    fn placing_volume_simplices() {
        // Standard simplex in Z^2 has normalized volume 1.
        let tri = vec![ivec(&[0, 0]), ivec(&[1, 0]), ivec(&[0, 1])];
        assert_eq!(placing_volume(&tri, PlacingOrder::LexAsc), int(1));
        // Unit square: 2. Segment in Z^2: lower-dimensional, 0.
        let square = vec![ivec(&[0, 0]), ivec(&[1, 0]), ivec(&[0, 1]), ivec(&[1, 1])];
        assert_eq!(placing_volume(&square, PlacingOrder::LexAsc), int(2));
        let seg = vec![ivec(&[0, 0]), ivec(&[3, 0])];
        assert_eq!(placing_volume(&seg, PlacingOrder::LexAsc), int(0));
        // Segment in Z^1: lattice length.
        let seg1 = vec![ivec(&[0]), ivec(&[3])];
        assert_eq!(placing_volume(&seg1, PlacingOrder::LexAsc), int(3));
    }

    #[test]
    fn placing_volume_order_independent() {
        let pts = vec![
            ivec(&[0, 0, 0]),
            ivec(&[2, 0, 0]),
            ivec(&[0, 3, 0]),
            ivec(&[0, 0, 1]),
            ivec(&[1, 1, 1]),
            ivec(&[2, 3, 0]),
        ];
        assert_eq!(
            placing_volume(&pts, PlacingOrder::LexAsc),
            placing_volume(&pts, PlacingOrder::LexDesc)
        );
    }

    #[test]
    fn hexagon_volume_is_eleven() {
        let hex = vec![
            ivec(&[0, 1]),
            ivec(&[1, 0]),
            ivec(&[2, 0]),
            ivec(&[3, 1]),
            ivec(&[1, 3]),
            ivec(&[0, 2]),
        ];
        assert_eq!(placing_volume(&hex, PlacingOrder::LexAsc), int(11));
    }

    #[test]
    fn structure_of_a_square() {
        let square = vec![
            ivec(&[0, 0]),
            ivec(&[1, 0]),
            ivec(&[0, 1]),
            ivec(&[1, 1]),
        ];
        let h = hull_structure(&square);
        assert_eq!(h.affine_dim, 2);
        assert_eq!(h.facets.len(), 4);
        assert_eq!(h.vertex_indices.len(), 4);
        // 4 vertices + 4 edges + the square itself.
        assert_eq!(h.faces.len(), 9);
        assert!(h.lineality.is_empty());
    }

    #[test]
    fn structure_of_a_segment_in_the_plane() {
        let seg = vec![ivec(&[0, 0]), ivec(&[1, 1]), ivec(&[2, 2])];
        let h = hull_structure(&seg);
        assert_eq!(h.affine_dim, 1);
        assert_eq!(h.vertex_indices, vec![0, 2]);
        assert_eq!(h.facets.len(), 2);
        assert_eq!(h.lineality.len(), 1);
        assert!(hull_contains(&h, &qvec(&[1, 1])));
        assert!(!hull_contains(&h, &qvec(&[1, 0])));
        assert!(!hull_contains(&h, &qvec(&[3, 3])));
    }

    #[test]
    fn interior_point_is_not_a_vertex() {
        let pts = vec![
            ivec(&[0, 0]),
            ivec(&[2, 0]),
            ivec(&[0, 2]),
            ivec(&[1, 1]),
            ivec(&[2, 2]),
        ];
        let h = hull_structure(&pts);
        // (1,1) is interior to the hull of the other four.
        let inner = h.points.iter().position(|p| p == &ivec(&[1, 1])).unwrap();
        assert!(!h.vertex_indices.contains(&inner));
        assert_eq!(h.vertex_indices.len(), 4);
    }
}
