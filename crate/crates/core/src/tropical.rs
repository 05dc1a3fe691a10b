//! The tropicalization of the closed image of the parametrized variety, as
//! an explicit union of rational cones in R^n indexed by (J, collection)
//! pairs, with membership tests and a merged maximal-cone view.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeMap;

use crate::cone::{canonical_cone, cone_contains, cone_dim, cone_subset, merge_convex_union};
use crate::error::{Error, Result};
use crate::fan::{enumerate_coherent_collections, is_adapted, CoherentCollection};
use crate::lattice::{support_min, ConeV, SupportSet};
use crate::linalg::{self, dot_ii, IVec, QVec};

/// Coordinatewise valuation of the rational map along a direction:
/// component i is m_alpha(A_i) - m_alpha(A_0).
pub fn trop_value(supports: &[SupportSet], alpha: &[BigRational]) -> Result<QVec> {
    let m0 = support_min(&supports[0], alpha)?;
    supports[1..]
        .iter()
        .map(|a| Ok(support_min(a, alpha)? - &m0))
        .collect()
}

/// All support minima (m_alpha(A_0), ..., m_alpha(A_n)): the valuation
/// vector of the numerator map before dividing by f_0.
pub fn support_minima(supports: &[SupportSet], alpha: &[BigRational]) -> Result<QVec> {
    supports.iter().map(|a| support_min(a, alpha)).collect()
}

/// Which side of the torus map a cone system describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum TropSide {
    /// The rational map (f_1/f_0, ..., f_n/f_0): cones live in R^n, the
    /// 0-th index contributes the -(1,...,1) direction.
    Quotient,
    /// The polynomial map (f_0, ..., f_n): cones live in R^{n+1}, every
    /// index contributes its own coordinate direction.
    Numerator,
}

/// One cone together with its provenance pair.
#[derive(Debug, Clone)]
pub struct ConePiece {
    pub j_set: Vec<usize>,
    pub collection: usize,
    pub cone: ConeV,
}

/// A deduplicated cone with every (J, collection) pair that produced it.
#[derive(Debug, Clone)]
pub struct TropicalCone {
    pub cone: ConeV,
    pub provenance: Vec<(Vec<usize>, usize)>,
}

#[derive(Debug, Clone)]
pub struct Tropicalization {
    /// n: the ambient dimension of the cones.
    pub ambient: usize,
    pub collections: Vec<CoherentCollection>,
    /// Every adapted (J, collection) pair with its cone, no deduplication.
    pub pieces: Vec<ConePiece>,
    /// Canonical cones, duplicates merged, provenance retained.
    pub cones: Vec<TropicalCone>,
}

fn linear_image(collection: &CoherentCollection, v: &[BigInt], side: TropSide) -> IVec {
    let reps: Vec<&IVec> = collection.faces.iter().map(|f| f.min_point()).collect();
    match side {
        TropSide::Quotient => {
            let m0 = dot_ii(v, reps[0]);
            reps[1..].iter().map(|r| dot_ii(v, r) - &m0).collect()
        }
        TropSide::Numerator => reps.iter().map(|r| dot_ii(v, r)).collect(),
    }
}

fn unit(len: usize, idx: usize) -> IVec {
    let mut e = vec![BigInt::zero(); len];
    e[idx] = BigInt::from(1);
    e
}

pub(crate) fn build_cone_pieces(
    supports: &[SupportSet],
    collections: &[CoherentCollection],
    side: TropSide,
) -> Vec<ConePiece> {
    let d = supports[0].dim();
    let n = supports.len() - 1;
    let ambient = match side {
        TropSide::Quotient => n,
        TropSide::Numerator => n + 1,
    };
    let mut pieces = Vec::new();
    for mask in 0usize..(1 << (n + 1)) {
        let j_set: Vec<usize> = (0..=n).filter(|i| mask & (1 << i) != 0).collect();
        if j_set.len() > d {
            continue;
        }
        for (ci, col) in collections.iter().enumerate() {
            if !is_adapted(col, &j_set) {
                continue;
            }
            let mut rays: Vec<IVec> = col
                .normal_cone
                .rays
                .iter()
                .map(|r| linear_image(col, r, side))
                .collect();
            let lineality: Vec<IVec> = col
                .normal_cone
                .lineality
                .iter()
                .map(|l| linear_image(col, l, side))
                .collect();
            for &j in &j_set {
                match side {
                    TropSide::Quotient => {
                        if j == 0 {
                            rays.push(vec![BigInt::from(-1); ambient]);
                        } else {
                            rays.push(unit(ambient, j - 1));
                        }
                    }
                    TropSide::Numerator => rays.push(unit(ambient, j)),
                }
            }
            let cone = canonical_cone(ambient, rays, lineality);
            debug_assert!(cone_dim(&cone) <= d, "tropical cones cannot exceed dim(image)");
            pieces.push(ConePiece { j_set: j_set.clone(), collection: ci, cone });
        }
    }
    pieces
}

/// Builds every cone C_J^F over adapted pairs (J, F).
pub fn build_tropicalization(supports: &[SupportSet]) -> Result<Tropicalization> {
    if supports.len() < 2 {
        return Err(Error::Empty("need at least two supports (f_0 and f_1)"));
    }
    let d = supports[0].dim();
    let n = supports.len() - 1;
    if d > n {
        return Err(Error::Precondition(format!(
            "ambient dimension d={d} must not exceed the number of coordinates n={n}"
        )));
    }
    let collections = enumerate_coherent_collections(supports)?;
    let pieces = build_cone_pieces(supports, &collections, TropSide::Quotient);
    let mut grouped: BTreeMap<ConeV, Vec<(Vec<usize>, usize)>> = BTreeMap::new();
    for p in &pieces {
        grouped
            .entry(p.cone.clone())
            .or_default()
            .push((p.j_set.clone(), p.collection));
    }
    let cones = grouped
        .into_iter()
        .map(|(cone, provenance)| TropicalCone { cone, provenance })
        .collect();
    Ok(Tropicalization { ambient: n, collections, pieces, cones })
}

/// Exact membership of w in the union of cones, with every containing
/// (J, collection) pair as a witness list.
pub fn membership(trop: &Tropicalization, w: &[BigRational]) -> Result<(bool, Vec<(Vec<usize>, usize)>)> {
    if w.len() != trop.ambient {
        return Err(Error::DimensionMismatch { expected: trop.ambient, found: w.len() });
    }
    let witnesses: Vec<(Vec<usize>, usize)> = trop
        .pieces
        .iter()
        .filter(|p| cone_contains(&p.cone, w))
        .map(|p| (p.j_set.clone(), p.collection))
        .collect();
    Ok((!witnesses.is_empty(), witnesses))
}

/// Maximal dimension over all cones, flagging the case where it is attained
/// only by J = {} pieces (where it bounds rather than equals the image
/// dimension).
pub fn image_dimension(trop: &Tropicalization) -> (usize, bool) {
    let mut max_dim = 0;
    let mut max_with_nonempty_j = 0;
    for p in &trop.pieces {
        let dim = cone_dim(&p.cone);
        max_dim = max_dim.max(dim);
        if !p.j_set.is_empty() {
            max_with_nonempty_j = max_with_nonempty_j.max(dim);
        }
    }
    (max_dim, max_with_nonempty_j < max_dim)
}

/// The distinct maximal cones of the union: overlapping cones whose union is
/// convex are merged, then cones contained in another are dropped.
pub fn maximal_cones(trop: &Tropicalization) -> Vec<ConeV> {
    let mut cones: Vec<ConeV> = trop.cones.iter().map(|c| c.cone.clone()).collect();
    loop {
        let mut merged_any = false;
        'outer: for i in 0..cones.len() {
            for j in i + 1..cones.len() {
                if let Some(m) = merge_convex_union(&cones[i], &cones[j]) {
                    cones.remove(j);
                    cones.remove(i);
                    if !cones.contains(&m) {
                        cones.push(m);
                    }
                    merged_any = true;
                    break 'outer;
                }
            }
        }
        if !merged_any {
            break;
        }
    }
    let mut keep: Vec<ConeV> = Vec::new();
    for (i, c) in cones.iter().enumerate() {
        let dominated = cones
            .iter()
            .enumerate()
            .any(|(j, other)| j != i && cone_subset(c, other) && (c != other || j < i));
        if !dominated {
            keep.push(c.clone());
        }
    }
    keep.sort();
    keep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ivec, qvec, rat};
    use num_traits::Signed;

    fn ex28() -> Vec<SupportSet> {
        vec![
            SupportSet::from_rows(2, &[&[0, 0]]),
            SupportSet::from_rows(2, &[&[2, 0], &[3, 0], &[0, 2]]),
            SupportSet::from_rows(2, &[&[0, 2], &[0, 3], &[2, 0]]),
            SupportSet::from_rows(2, &[&[1, 1], &[0, 3], &[1, 2], &[2, 1], &[3, 0]]),
        ]
    }

    fn ex212() -> Vec<SupportSet> {
        vec![
            SupportSet::from_rows(1, &[&[3], &[1]]),
            SupportSet::from_rows(1, &[&[5], &[3]]),
            SupportSet::from_rows(1, &[&[5], &[3], &[1]]),
        ]
    }

    #[test]
    fn trop_value_rays_of_ex28() {
        let s = ex28();
        assert_eq!(trop_value(&s, &qvec(&[0, 0])).unwrap(), qvec(&[0, 0, 0]));
        assert_eq!(trop_value(&s, &qvec(&[0, -1])).unwrap(), qvec(&[-2, -3, -3]));
        assert_eq!(trop_value(&s, &qvec(&[-1, 0])).unwrap(), qvec(&[-3, -2, -3]));
        assert_eq!(trop_value(&s, &qvec(&[1, 2])).unwrap(), qvec(&[2, 2, 3]));
    }

    #[test]
    fn support_minima_of_ex212() {
        let s = ex212();
        assert_eq!(support_minima(&s, &qvec(&[1])).unwrap(), qvec(&[1, 3, 1]));
        assert_eq!(support_minima(&s, &qvec(&[-1])).unwrap(), qvec(&[-3, -5, -5]));
        assert_eq!(support_minima(&s, &qvec(&[0])).unwrap(), qvec(&[0, 0, 0]));
    }

    fn sector(r1: &[i64], r2: &[i64]) -> ConeV {
        canonical_cone(r1.len(), vec![ivec(r1), ivec(r2)], vec![])
    }

    #[test]
    fn ex28_maximal_cones_are_the_nine() {
        let trop = build_tropicalization(&ex28()).unwrap();
        let maximal = maximal_cones(&trop);
        let mut expected = vec![
            sector(&[1, 0, 0], &[0, 1, 0]),
            sector(&[1, 0, 0], &[0, 0, 1]),
            sector(&[0, 1, 0], &[0, 0, 1]),
            sector(&[0, 0, 1], &[-1, -1, -1]),
            sector(&[1, 0, 0], &[1, 1, 1]),
            sector(&[0, 1, 0], &[1, 1, 1]),
            sector(&[1, 0, 0], &[-1, -1, -1]),
            sector(&[0, 1, 0], &[-1, -1, -1]),
            sector(&[0, 0, 1], &[1, 1, 1]),
        ];
        expected.sort();
        assert_eq!(maximal, expected);
    }

    #[test]
    fn ex212_maximal_cones_are_three_rays() {
        let trop = build_tropicalization(&ex212()).unwrap();
        let maximal = maximal_cones(&trop);
        let mut expected = vec![
            canonical_cone(2, vec![ivec(&[1, 0])], vec![]),
            canonical_cone(2, vec![ivec(&[0, 1])], vec![]),
            canonical_cone(2, vec![ivec(&[-1, -1])], vec![]),
        ];
        expected.sort();
        assert_eq!(maximal, expected);
    }

    #[test]
    fn membership_examples() {
        let trop = build_tropicalization(&ex28()).unwrap();
        let (ok, _) = membership(&trop, &qvec(&[0, 0, 0])).unwrap();
        assert!(ok);
        let (ok, wit) = membership(&trop, &qvec(&[1, 1, 0])).unwrap();
        assert!(ok);
        // Witnessed by the trivial collection with J = {1,2}.
        assert!(wit.iter().any(|(j, ci)| {
            j == &vec![1, 2] && trop.collections[*ci].is_trivial(&ex28())
        }));
        let (ok, wit) = membership(&trop, &qvec(&[-1, 0, 0])).unwrap();
        assert!(!ok && wit.is_empty());
    }

    #[test]
    fn image_dimension_examples() {
        let (dim, only_empty) = image_dimension(&build_tropicalization(&ex28()).unwrap());
        assert_eq!((dim, only_empty), (2, false));
        let (dim, _) = image_dimension(&build_tropicalization(&ex212()).unwrap());
        assert_eq!(dim, 1);
        // Monomial-heavy map where only the J = {} cone is full-dimensional.
        let collapsed = vec![
            SupportSet::from_rows(2, &[&[0, 0]]),
            SupportSet::from_rows(2, &[&[1, 0]]),
            SupportSet::from_rows(2, &[&[1, 0]]),
            SupportSet::from_rows(2, &[&[0, 1]]),
        ];
        let (dim, only_empty) = image_dimension(&build_tropicalization(&collapsed).unwrap());
        assert_eq!((dim, only_empty), (2, true));
    }

    #[test]
    fn unmixed_dilates_collapse_to_one_ray() {
        // P_i = d_i * P with 0 in P: the psi-image is the single ray
        // spanned by -(d_1-d_0, ..., d_n-d_0).
        let dilate = |k: i64| SupportSet::from_rows(2, &[&[0, 0], &[k, 0], &[0, k]]);
        let supports = vec![dilate(2), dilate(1), dilate(3)];
        let trop = build_tropicalization(&supports).unwrap();
        let dirs = [rat(1, 1), rat(-1, 1)]; // -(d_1-d_0, d_2-d_0) = -(-1, 1)
        for piece in trop.pieces.iter().filter(|p| p.j_set.is_empty()) {
            for r in &piece.cone.rays {
                let r_q = linalg::ivec_to_qvec(r);
                // Every psi-image ray is a nonnegative multiple of dirs.
                let cross = &r_q[0] * &dirs[1] - &r_q[1] * &dirs[0];
                assert!(cross.is_zero());
                assert!((&r_q[0] * &dirs[0]).is_positive() || r_q[0].is_zero());
            }
            assert!(piece.cone.lineality.is_empty());
        }
        // And the ray itself appears.
        assert!(trop
            .pieces
            .iter()
            .any(|p| p.j_set.is_empty() && p.cone.rays == vec![ivec(&[1, -1])]));
    }
}
