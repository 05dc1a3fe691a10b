//! Coherent face collections of a support family: the cones of the inner
//! normal fan of the Minkowski sum, with essential/adapted predicates.

use num_traits::Zero;

use crate::cone::{self, canonical_cone};
use crate::error::{Error, Result};
use crate::hull;
use crate::lattice::{family_sum_dim, support_face_int, ConeV, SupportSet};
use crate::linalg::{self, IVec, QVec};

/// A tuple of faces (F_0, ..., F_n) of the supports, all induced by one
/// direction, together with the closed cone of directions inducing them and
/// one relative-interior witness.
#[derive(Debug, Clone)]
pub struct CoherentCollection {
    pub faces: Vec<SupportSet>,
    pub normal_cone: ConeV,
    pub witness_alpha: QVec,
}

impl CoherentCollection {
    pub fn is_trivial(&self, supports: &[SupportSet]) -> bool {
        self.faces.iter().zip(supports).all(|(f, a)| f == a)
    }
}

/// One collection per cone of the inner normal fan of conv(A_0 + ... + A_n),
/// every dimension included, the whole-sum class (alpha = 0) among them.
/// Sorted by (normal cone dimension, witness) for deterministic output.
pub fn enumerate_coherent_collections(supports: &[SupportSet]) -> Result<Vec<CoherentCollection>> {
    let first = supports.first().ok_or(Error::Empty("support family"))?;
    let dim = first.dim();
    for s in supports {
        if s.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: s.dim() });
        }
    }
    // The normal fan only sees hull vertices, which keeps the sum small.
    let mut sum: Vec<IVec> = vec![vec![num_bigint::BigInt::zero(); dim]];
    for s in supports {
        let verts = if s.len() <= 2 {
            s.points().to_vec()
        } else {
            let h = hull::hull_structure(s.points());
            h.vertex_indices.iter().map(|&i| h.points[i].clone()).collect()
        };
        let mut next = Vec::with_capacity(sum.len() * verts.len());
        for a in &sum {
            for b in &verts {
                next.push(linalg::add_ii(a, b));
            }
        }
        next.sort();
        next.dedup();
        sum = next;
    }
    let structure = hull::hull_structure(&sum);

    let mut out: Vec<CoherentCollection> = structure
        .faces
        .iter()
        .map(|face| {
            let facet_ids = structure.facets_containing(face);
            let rays: Vec<IVec> = facet_ids
                .iter()
                .map(|&i| structure.facets[i].normal.clone())
                .collect();
            let witness_int: IVec = rays.iter().fold(vec![num_bigint::BigInt::zero(); dim], |acc, r| {
                linalg::add_ii(&acc, r)
            });
            let normal_cone = canonical_cone(dim, rays, structure.lineality.clone());
            let faces: Vec<SupportSet> = supports
                .iter()
                .map(|a| support_face_int(a, &witness_int))
                .collect();
            CoherentCollection {
                faces,
                normal_cone,
                witness_alpha: linalg::ivec_to_qvec(&witness_int),
            }
        })
        .collect();
    out.sort_by(|a, b| {
        (cone::cone_dim(&a.normal_cone), &a.witness_alpha)
            .cmp(&(cone::cone_dim(&b.normal_cone), &b.witness_alpha))
    });
    Ok(out)
}

/// Essential family: every subfamily J of size at most d spans Minkowski-sum
/// dimension at least |J|.
pub fn is_essential(family: &[SupportSet]) -> bool {
    if family.is_empty() {
        return true;
    }
    let d = family[0].dim();
    let r = family.len();
    for mask in 1usize..(1 << r) {
        let size = mask.count_ones() as usize;
        if size > d {
            continue;
        }
        let chosen: Vec<SupportSet> = (0..r)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| family[i].clone())
            .collect();
        if family_sum_dim(&chosen) < size {
            return false;
        }
    }
    true
}

/// A collection is adapted to J when |J| <= d and the J-indexed faces form
/// an essential family. The empty J is adapted vacuously.
pub fn is_adapted(collection: &CoherentCollection, j_set: &[usize]) -> bool {
    if j_set.is_empty() {
        return true;
    }
    let d = collection.faces[0].dim();
    if j_set.len() > d {
        return false;
    }
    let chosen: Vec<SupportSet> = j_set.iter().map(|&j| collection.faces[j].clone()).collect();
    is_essential(&chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::qvec;

    #[test]
    fn segment_has_three_collections() {
        let seg = SupportSet::from_rows(1, &[&[0], &[1]]);
        let cols = enumerate_coherent_collections(&[seg.clone(), seg.clone()]).unwrap();
        assert_eq!(cols.len(), 3);
        let trivial: Vec<_> = cols.iter().filter(|c| c.is_trivial(&[seg.clone(), seg.clone()])).collect();
        assert_eq!(trivial.len(), 1);
        assert!(linalg::is_zero_q(&trivial[0].witness_alpha));
    }

    #[test]
    fn triangle_has_seven_collections() {
        let tri = SupportSet::from_rows(2, &[&[0, 0], &[1, 0], &[0, 1]]);
        let cols = enumerate_coherent_collections(&[tri]).unwrap();
        assert_eq!(cols.len(), 7);
    }

    #[test]
    fn essential_examples() {
        let full = SupportSet::from_rows(2, &[&[0, 0], &[1, 0], &[0, 1]]);
        assert!(is_essential(&[full]));
        let s1 = SupportSet::from_rows(2, &[&[0, 0], &[1, 0]]);
        let s2 = SupportSet::from_rows(2, &[&[0, 0], &[2, 0]]);
        assert!(!is_essential(&[s1, s2]));
    }

    #[test]
    fn ex28_adapted_structure() {
        let supports = ex28();
        let cols = enumerate_coherent_collections(&supports).unwrap();
        // Any |J| = 2 subset of {1,2,3} is adapted only on the trivial
        // collection, and no |J| >= 3 subset is adapted anywhere.
        for c in &cols {
            for j in [[1usize, 2], [1, 3], [2, 3]] {
                if is_adapted(c, &j) {
                    assert!(c.is_trivial(&supports));
                }
            }
            assert!(!is_adapted(c, &[1, 2, 3]));
            assert!(!is_adapted(c, &[0, 1, 2]));
        }
        let trivial: Vec<_> = cols.iter().filter(|c| c.is_trivial(&supports)).collect();
        assert_eq!(trivial.len(), 1);
        assert!(is_adapted(trivial[0], &[1, 2]));
    }

    #[test]
    fn tameness_counterexample_family_is_essential() {
        // Faces of A_3, A_4 in the direction (-1,1,1).
        let a3 = SupportSet::from_rows(3, &[&[2, 1, 0], &[2, 0, 1]]);
        let a4 = SupportSet::from_rows(3, &[&[2, 1, 0], &[1, 0, 0]]);
        let alpha = qvec(&[-1, 1, 1]);
        let f3 = crate::lattice::support_face(&a3, &alpha).unwrap();
        let f4 = crate::lattice::support_face(&a4, &alpha).unwrap();
        assert!(is_essential(&[f3, f4]));
    }

    pub fn ex28() -> Vec<SupportSet> {
        vec![
            SupportSet::from_rows(2, &[&[0, 0]]),
            SupportSet::from_rows(2, &[&[2, 0], &[3, 0], &[0, 2]]),
            SupportSet::from_rows(2, &[&[0, 2], &[0, 3], &[2, 0]]),
            SupportSet::from_rows(2, &[&[1, 1], &[0, 3], &[1, 2], &[2, 1], &[3, 0]]),
        ]
    }
}
