//! Lattice-normalized mixed volume of d support sets in Z^d, by
//! inclusion-exclusion over normalized volumes of partial Minkowski sums,
//! plus an independently-routed oracle for cross-validation.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hull::{self, PlacingOrder};
use crate::lattice::SupportSet;
use crate::linalg::{add_ii, IVec};

/// Restricts a support set to the vertices of its hull. Mixed volumes only
/// see the hulls, and the reduction keeps partial Minkowski sums small.
fn vertex_reduce(set: &SupportSet) -> Vec<IVec> {
    if set.len() <= 2 {
        return set.points().to_vec();
    }
    let h = hull::hull_structure(set.points());
    h.vertex_indices.iter().map(|&i| h.points[i].clone()).collect()
}

fn sum_of_subset(vertex_sets: &[Vec<IVec>], mask: usize, dim: usize) -> Vec<IVec> {
    let mut acc: Vec<IVec> = vec![vec![BigInt::zero(); dim]];
    for (i, vs) in vertex_sets.iter().enumerate() {
        if mask & (1 << i) == 0 {
            continue;
        }
        let mut next: Vec<IVec> = Vec::with_capacity(acc.len() * vs.len());
        for a in &acc {
            for b in vs {
                next.push(add_ii(a, b));
            }
        }
        next.sort();
        next.dedup();
        acc = next;
    }
    acc
}

fn validate(sets: &[SupportSet]) -> Result<usize> {
    let first = sets.first().ok_or(Error::Empty("mixed volume input"))?;
    let d = first.dim();
    if sets.len() != d {
        return Err(Error::WrongSetCount { expected: d, found: sets.len() });
    }
    for s in sets {
        if s.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: s.dim() });
        }
    }
    Ok(d)
}

fn inclusion_exclusion(sets: &[SupportSet], order: PlacingOrder, reverse: bool) -> Result<BigInt> {
    let d = validate(sets)?;
    let mut vertex_sets: Vec<Vec<IVec>> = sets.iter().map(vertex_reduce).collect();
    if reverse {
        vertex_sets.reverse();
        for vs in vertex_sets.iter_mut() {
            vs.reverse();
        }
    }
    let masks: Vec<usize> = (1..(1usize << d)).collect();
    let total: BigInt = masks
        .par_iter()
        .map(|&mask| {
            let pts = sum_of_subset(&vertex_sets, mask, d);
            let vol = hull::placing_volume(&pts, order);
            if (d - mask.count_ones() as usize) % 2 == 0 {
                vol
            } else {
                -vol
            }
        })
        .sum();
    let mut factorial = BigInt::from(1);
    for k in 2..=d {
        factorial *= BigInt::from(k as u64);
    }
    let (q, r) = num_integer::Integer::div_rem(&total, &factorial);
    if !r.is_zero() {
        return Err(Error::IntegralityViolation(format!(
            "mixed volume inclusion-exclusion sum {total} is not divisible by {d}!"
        )));
    }
    debug_assert!(!q.is_negative(), "mixed volume of lattice sets is nonnegative");
    Ok(q)
}

/// Normalized mixed volume: symmetric, multilinear under Minkowski sum, and
/// equal to the normalized volume on the diagonal.
pub fn mixed_volume(sets: &[SupportSet]) -> Result<BigInt> {
    inclusion_exclusion(sets, PlacingOrder::LexAsc, false)
}

/// Same value by a structurally different route: reversed subset assembly
/// and a descending placing order, cross-checked against the direct
/// two-polytope formula in low dimension.
pub fn mixed_volume_oracle(sets: &[SupportSet]) -> Result<BigInt> {
    let d = validate(sets)?;
    let value = inclusion_exclusion(sets, PlacingOrder::LexDesc, true)?;
    if d == 1 {
        let direct = hull::placing_volume(sets[0].points(), PlacingOrder::LexDesc);
        assert_eq!(value, direct, "one-dimensional mixed volume is the lattice length");
    } else if d == 2 {
        let p = vertex_reduce(&sets[0]);
        let q = vertex_reduce(&sets[1]);
        let mut pq: Vec<IVec> = Vec::new();
        for a in &p {
            for b in &q {
                pq.push(add_ii(a, b));
            }
        }
        let two_mv = hull::placing_volume(&pq, PlacingOrder::LexDesc)
            - hull::placing_volume(&p, PlacingOrder::LexDesc)
            - hull::placing_volume(&q, PlacingOrder::LexDesc);
        assert_eq!(
            &value + &value,
            two_mv,
            "two-dimensional mixed volume disagrees with the direct formula"
        );
    }
    Ok(value)
}
