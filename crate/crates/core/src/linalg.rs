//! Exact integer and rational linear algebra used by the geometric layers:
//! fraction-free determinants, Smith/Hermite normal forms, integer kernels
//! and saturated lattice bases.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IVec = Vec<BigInt>;
pub type QVec = Vec<BigRational>;

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn ivec(coords: &[i64]) -> IVec {
    coords.iter().map(|&c| BigInt::from(c)).collect()
}

pub fn qvec(coords: &[i64]) -> QVec {
    coords.iter().map(|&c| BigRational::from(BigInt::from(c))).collect()
}

pub fn ivec_to_qvec(v: &[BigInt]) -> QVec {
    v.iter().map(|c| BigRational::from(c.clone())).collect()
}

pub fn dot_ii(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_qi(a: &[BigRational], b: &[BigInt]) -> BigRational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| x * BigRational::from(y.clone()))
        .sum()
}

pub fn dot_qq(a: &[BigRational], b: &[BigRational]) -> BigRational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn add_ii(a: &[BigInt], b: &[BigInt]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_ii(a: &[BigInt], b: &[BigInt]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn sub_qq(a: &[BigRational], b: &[BigRational]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg_i(a: &[BigInt]) -> IVec {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero_i(a: &[BigInt]) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub fn is_zero_q(a: &[BigRational]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// Divides an integer vector by the gcd of its entries. Zero stays zero.
/// The direction is preserved; no sign normalization.
pub fn primitive(v: &[BigInt]) -> IVec {
    let mut g = BigInt::zero();
    for x in v {
        g = g.gcd(x);
    }
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Primitive representative with the first nonzero coordinate positive.
/// Used for lineality generators and other direction-free data.
pub fn primitive_signed(v: &[BigInt]) -> IVec {
    let p = primitive(v);
    match p.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => neg_i(&p),
        _ => p,
    }
}

/// Clears denominators: returns the unique primitive integer vector on the
/// ray spanned by a rational vector (zero maps to zero).
pub fn rational_to_primitive(v: &[BigRational]) -> IVec {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: IVec = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    primitive(&ints)
}

/// Rank of a rational matrix given as a list of rows.
pub fn rank_q(rows: &[QVec]) -> usize {
    let mut m: Vec<QVec> = rows.iter().filter(|r| !is_zero_q(r)).cloned().collect();
    if m.is_empty() {
        return 0;
    }
    let ncols = m[0].len();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = m[rank][col].recip();
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let factor = &m[r][col] * &inv;
                for c in col..ncols {
                    let delta = &factor * &m[rank][c];
                    m[r][c] = &m[r][c] - delta;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

pub fn rank_i(rows: &[IVec]) -> usize {
    let q: Vec<QVec> = rows.iter().map(|r| ivec_to_qvec(r)).collect();
    rank_q(&q)
}

/// Solves `sum_i x_i * rows_i = target` over the rationals.
/// Returns one solution if the system is consistent.
pub fn solve_in_span(rows: &[QVec], target: &[BigRational]) -> Option<QVec> {
    let k = rows.len();
    if k == 0 {
        return if is_zero_q(target) { Some(vec![]) } else { None };
    }
    let n = rows[0].len();
    // Augmented system over the transpose: columns are the row vectors.
    let mut aug: Vec<QVec> = (0..n)
        .map(|j| {
            let mut row: QVec = rows.iter().map(|r| r[j].clone()).collect();
            row.push(target[j].clone());
            row
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut rank = 0;
    for col in 0..k {
        let Some(p) = (rank..aug.len()).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(rank, p);
        let inv = aug[rank][col].recip();
        for c in col..=k {
            aug[rank][c] = &aug[rank][c] * &inv;
        }
        for r in 0..aug.len() {
            if r != rank && !aug[r][col].is_zero() {
                let factor = aug[r][col].clone();
                for c in col..=k {
                    let delta = &factor * &aug[rank][c];
                    aug[r][c] = &aug[r][c] - delta;
                }
            }
        }
        pivots.push((rank, col));
        rank += 1;
    }
    for r in rank..aug.len() {
        if !aug[r][k].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); k];
    for &(r, c) in &pivots {
        x[c] = aug[r][k].clone();
    }
    Some(x)
}

/// Fraction-free (Bareiss) determinant of a square integer matrix.
pub fn det_i(m: &[IVec]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    debug_assert!(m.iter().all(|r| r.len() == n));
    let mut a: Vec<IVec> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Smith normal form: returns the nonzero elementary divisors d_1 | d_2 | ...
pub fn smith_divisors(rows: &[IVec]) -> Vec<BigInt> {
    let mut m: Vec<IVec> = rows.iter().filter(|r| !is_zero_i(r)).cloned().collect();
    if m.is_empty() {
        return vec![];
    }
    let (nr, nc) = (m.len(), m[0].len());
    let mut divisors = Vec::new();
    let mut k = 0;
    while k < nr.min(nc) {
        let mut best: Option<(usize, usize)> = None;
        for i in k..nr {
            for j in k..nc {
                if !m[i][j].is_zero()
                    && best
                        .map(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                        .unwrap_or(true)
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(k, bi);
        for row in m.iter_mut() {
            row.swap(k, bj);
        }
        loop {
            let mut dirty = false;
            for i in k + 1..nr {
                if !m[i][k].is_zero() {
                    let q = div_round(&m[i][k], &m[k][k]);
                    if !q.is_zero() {
                        for j in k..nc {
                            let delta = &q * &m[k][j];
                            m[i][j] = &m[i][j] - delta;
                        }
                    }
                    if !m[i][k].is_zero() {
                        m.swap(k, i);
                        dirty = true;
                    }
                }
            }
            for j in k + 1..nc {
                if !m[k][j].is_zero() {
                    let q = div_round(&m[k][j], &m[k][k]);
                    if !q.is_zero() {
                        for row in m.iter_mut().skip(k) {
                            let delta = &q * &row[k];
                            row[j] = &row[j] - delta;
                        }
                    }
                    if !m[k][j].is_zero() {
                        for row in m.iter_mut() {
                            row.swap(k, j);
                        }
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
        // Divisibility fix: the pivot must divide the trailing block.
        let mut fixed = true;
        'scan: for i in k + 1..nr {
            for j in k + 1..nc {
                if !(&m[i][j] % &m[k][k]).is_zero() {
                    let addend: IVec = m[i][k..].to_vec();
                    for (col, val) in (k..nc).zip(addend) {
                        m[k][col] = &m[k][col] + val;
                    }
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if !fixed {
            continue;
        }
        divisors.push(m[k][k].abs());
        k += 1;
    }
    divisors
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    // Nearest-integer division keeps entries small during the reductions.
    let (q, r) = a.div_rem(b);
    let two_r = BigInt::from(2) * r.abs();
    if two_r > b.abs() {
        if a.is_negative() != b.is_negative() {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

/// Basis of the integer kernel lattice {x in Z^n : M x = 0}.
pub fn integer_kernel(rows: &[IVec], ncols: usize) -> Vec<IVec> {
    // Column reduction with a tracked unimodular transform: M U = H; the
    // kernel lattice basis are the U-columns over the zero columns of H.
    let nr = rows.len();
    let mut m: Vec<IVec> = rows.to_vec();
    let mut u: Vec<IVec> = (0..ncols)
        .map(|i| {
            let mut row = vec![BigInt::zero(); ncols];
            row[i] = BigInt::one();
            row
        })
        .collect();
    let mut pivot_col = 0;
    for row in 0..nr {
        if pivot_col >= ncols {
            break;
        }
        loop {
            let mut nz: Vec<usize> = (pivot_col..ncols)
                .filter(|&j| !m[row][j].is_zero())
                .collect();
            if nz.len() <= 1 {
                break;
            }
            nz.sort_by(|&a, &b| m[row][a].abs().cmp(&m[row][b].abs()));
            let (ja, jb) = (nz[0], nz[1]);
            let q = div_round(&m[row][jb], &m[row][ja]);
            for r in m.iter_mut() {
                let delta = &q * &r[ja];
                r[jb] = &r[jb] - delta;
            }
            for ur in u.iter_mut() {
                let delta = &q * &ur[ja];
                ur[jb] = &ur[jb] - delta;
            }
        }
        if let Some(j) = (pivot_col..ncols).find(|&j| !m[row][j].is_zero()) {
            for r in m.iter_mut() {
                r.swap(pivot_col, j);
            }
            for ur in u.iter_mut() {
                ur.swap(pivot_col, j);
            }
            pivot_col += 1;
        }
    }
    (pivot_col..ncols)
        .map(|j| u.iter().map(|ur| ur[j].clone()).collect())
        .filter(|v: &IVec| !is_zero_i(v))
        .collect()
}

/// Basis of the saturated lattice span_Q(rows) ∩ Z^n.
pub fn saturated_basis(rows: &[IVec], ncols: usize) -> Vec<IVec> {
    let nonzero: Vec<IVec> = rows.iter().filter(|r| !is_zero_i(r)).cloned().collect();
    if nonzero.is_empty() {
        return vec![];
    }
    let orth = integer_kernel(&nonzero, ncols);
    if orth.is_empty() {
        return (0..ncols)
            .map(|i| {
                let mut v = vec![BigInt::zero(); ncols];
                v[i] = BigInt::one();
                v
            })
            .collect();
    }
    integer_kernel(&orth, ncols)
}

/// Row Hermite normal form of the lattice spanned by the rows: echelon with
/// positive pivots and entries above each pivot reduced into [0, pivot).
/// Canonical for the lattice, hence usable as a dedup key.
pub fn hnf_rows(rows: &[IVec]) -> Vec<IVec> {
    let mut m: Vec<IVec> = rows.iter().filter(|r| !is_zero_i(r)).cloned().collect();
    if m.is_empty() {
        return vec![];
    }
    let ncols = m[0].len();
    let mut pivot_row = 0;
    for col in 0..ncols {
        if pivot_row >= m.len() {
            break;
        }
        loop {
            let mut nz: Vec<usize> = (pivot_row..m.len())
                .filter(|&r| !m[r][col].is_zero())
                .collect();
            if nz.len() <= 1 {
                break;
            }
            nz.sort_by(|&a, &b| m[a][col].abs().cmp(&m[b][col].abs()));
            let (ra, rb) = (nz[0], nz[1]);
            let q = div_round(&m[rb][col], &m[ra][col]);
            let reduced: IVec = m[rb]
                .iter()
                .zip(&m[ra])
                .map(|(x, y)| x - y * &q)
                .collect();
            if is_zero_i(&reduced) {
                m.remove(rb);
            } else {
                m[rb] = reduced;
            }
        }
        if pivot_row >= m.len() {
            break;
        }
        if let Some(r) = (pivot_row..m.len()).find(|&r| !m[r][col].is_zero()) {
            m.swap(pivot_row, r);
            if m[pivot_row][col].is_negative() {
                m[pivot_row] = neg_i(&m[pivot_row]);
            }
            let pivot = m[pivot_row][col].clone();
            for r in 0..pivot_row {
                let q = m[r][col].div_floor(&pivot);
                if !q.is_zero() {
                    let reduced: IVec = m[r]
                        .iter()
                        .zip(&m[pivot_row])
                        .map(|(x, y)| x - y * &q)
                        .collect();
                    m[r] = reduced;
                }
            }
            pivot_row += 1;
        }
    }
    m.truncate(pivot_row);
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_determinant() {
        let m = vec![ivec(&[2, 0]), ivec(&[0, 3])];
        assert_eq!(det_i(&m), int(6));
        let m = vec![ivec(&[1, 2, 3]), ivec(&[4, 5, 6]), ivec(&[7, 8, 10])];
        assert_eq!(det_i(&m), int(-3));
        let singular = vec![ivec(&[1, 2]), ivec(&[2, 4])];
        assert_eq!(det_i(&singular), int(0));
    }

    #[test]
    fn smith_divisors_basics() {
        assert_eq!(
            smith_divisors(&[ivec(&[1, 0]), ivec(&[0, 1])]),
            vec![int(1), int(1)]
        );
        assert_eq!(
            smith_divisors(&[ivec(&[2, 0]), ivec(&[0, 2])]),
            vec![int(2), int(2)]
        );
        assert_eq!(smith_divisors(&[ivec(&[2, 4])]), vec![int(2)]);
        let m = vec![
            ivec(&[-6, 111, -36, 6]),
            ivec(&[5, -672, 210, 74]),
            ivec(&[0, -255, 81, 24]),
            ivec(&[-7, 255, -81, -10]),
        ];
        assert_eq!(smith_divisors(&m), vec![int(1), int(3), int(21)]);
    }

    #[test]
    fn kernel_and_saturation() {
        let ker = integer_kernel(&[ivec(&[1, 1, 1])], 3);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(dot_ii(v, &ivec(&[1, 1, 1])).is_zero());
        }
        let sat = saturated_basis(&[ivec(&[2, 0])], 2);
        assert_eq!(sat.len(), 1);
        assert_eq!(primitive_signed(&sat[0]), ivec(&[1, 0]));
        let sat = saturated_basis(&[ivec(&[2, 6, 2])], 3);
        assert_eq!(sat.len(), 1);
        assert_eq!(primitive_signed(&sat[0]), ivec(&[1, 3, 1]));
    }

    #[test]
    fn solve_in_span_consistency() {
        let rows = vec![qvec(&[1, 0, 1]), qvec(&[0, 1, 1])];
        let x = solve_in_span(&rows, &qvec(&[2, 3, 5])).unwrap();
        assert_eq!(x, vec![rat(2, 1), rat(3, 1)]);
        assert!(solve_in_span(&rows, &qvec(&[0, 0, 1])).is_none());
    }

    #[test]
    fn hnf_is_canonical_for_lattice() {
        let a = hnf_rows(&[ivec(&[2, 1]), ivec(&[0, 3])]);
        let b = hnf_rows(&[ivec(&[2, 4]), ivec(&[2, 1]), ivec(&[4, 5])]);
        assert_eq!(a, b);
    }
}
