//! Exact polyhedral cone predicates on V-representations. Feasibility
//! questions are answered by rational elimination (Gauss on equalities,
//! Fourier-Motzkin on inequalities) rather than tolerance-based LP.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

use crate::lattice::ConeV;
use crate::linalg::{
    self, hnf_rows, is_zero_q, primitive, rational_to_primitive, saturated_basis, IVec, QVec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rel {
    Ge,
    Gt,
    Eq,
}

/// One affine condition `coefs . x + constant REL 0`.
#[derive(Debug, Clone)]
struct Row {
    coefs: QVec,
    constant: BigRational,
    rel: Rel,
}

impl Row {
    fn canonical_key(&self) -> (Vec<BigInt>, BigInt, u8) {
        // Scale by a positive rational so the row compares structurally.
        let mut all: QVec = self.coefs.clone();
        all.push(self.constant.clone());
        let prim = rational_to_primitive(&all);
        let rel = match self.rel {
            Rel::Ge => 0,
            Rel::Gt => 1,
            Rel::Eq => 2,
        };
        let (last, coefs) = prim.split_last().expect("nonempty row");
        (coefs.to_vec(), last.clone(), rel)
    }
}

/// A system of affine constraints over `nvars` rational unknowns.
#[derive(Debug, Clone, Default)]
pub struct LinearSystem {
    nvars: usize,
    rows: Vec<Row>,
}

impl LinearSystem {
    pub fn new(nvars: usize) -> Self {
        LinearSystem { nvars, rows: Vec::new() }
    }

    pub fn eq(&mut self, coefs: QVec, constant: BigRational) {
        debug_assert_eq!(coefs.len(), self.nvars);
        self.rows.push(Row { coefs, constant, rel: Rel::Eq });
    }

    pub fn ge(&mut self, coefs: QVec, constant: BigRational) {
        debug_assert_eq!(coefs.len(), self.nvars);
        self.rows.push(Row { coefs, constant, rel: Rel::Ge });
    }

    pub fn gt(&mut self, coefs: QVec, constant: BigRational) {
        debug_assert_eq!(coefs.len(), self.nvars);
        self.rows.push(Row { coefs, constant, rel: Rel::Gt });
    }

    /// Nonnegativity of a single variable.
    pub fn nonneg(&mut self, var: usize) {
        let mut coefs = vec![BigRational::zero(); self.nvars];
        coefs[var] = BigRational::one();
        self.ge(coefs, BigRational::zero());
    }

    pub fn is_feasible(&self) -> bool {
        self.solve().is_some()
    }

    /// Finds a rational solution, or None when the system is infeasible.
    /// Variables are eliminated from the highest index down; the witness is
    /// rebuilt by midpoint back-substitution.
    pub fn solve(&self) -> Option<QVec> {
        let mut rows = self.rows.clone();
        let mut substitutions: Vec<(usize, QVec, BigRational)> = Vec::new();
        // Gauss step: use equalities to remove variables.
        loop {
            let Some(pos) = rows.iter().position(|r| {
                r.rel == Rel::Eq && r.coefs.iter().any(|c| !c.is_zero())
            }) else {
                break;
            };
            let row = rows.remove(pos);
            let var = row
                .coefs
                .iter()
                .rposition(|c| !c.is_zero())
                .expect("nonzero coefficient present");
            let pivot = row.coefs[var].clone();
            // x_var = -(constant + sum other coefs)/pivot
            let expr_coefs: QVec = row
                .coefs
                .iter()
                .enumerate()
                .map(|(j, c)| if j == var { BigRational::zero() } else { -(c / &pivot) })
                .collect();
            let expr_const = -(&row.constant / &pivot);
            for r in rows.iter_mut() {
                let c = r.coefs[var].clone();
                if c.is_zero() {
                    continue;
                }
                r.coefs[var] = BigRational::zero();
                for (dst, e) in r.coefs.iter_mut().zip(&expr_coefs) {
                    let delta = &c * e;
                    *dst = &*dst + delta;
                }
                let delta = &c * &expr_const;
                r.constant = &r.constant + delta;
            }
            substitutions.push((var, expr_coefs, expr_const));
        }
        // Degenerate equalities left over must hold identically.
        rows.retain(|r| {
            if r.rel == Rel::Eq {
                debug_assert!(r.coefs.iter().all(|c| c.is_zero()));
                true
            } else {
                true
            }
        });
        for r in &rows {
            if r.rel == Rel::Eq && !r.constant.is_zero() {
                return None;
            }
        }
        rows.retain(|r| r.rel != Rel::Eq);

        let eliminated: Vec<usize> = substitutions.iter().map(|(v, _, _)| *v).collect();
        let free_vars: Vec<usize> =
            (0..self.nvars).filter(|v| !eliminated.contains(v)).collect();

        // Fourier-Motzkin from the back of free_vars, keeping snapshots.
        let mut snapshots: Vec<(usize, Vec<Row>)> = Vec::new();
        let mut current = dedup_rows(rows);
        for &var in free_vars.iter().rev() {
            snapshots.push((var, current.clone()));
            let mut next: Vec<Row> = Vec::new();
            let mut lowers: Vec<Row> = Vec::new();
            let mut uppers: Vec<Row> = Vec::new();
            for r in current.into_iter() {
                if r.coefs[var].is_zero() {
                    next.push(r);
                } else if r.coefs[var].is_positive() {
                    lowers.push(r);
                } else {
                    uppers.push(r);
                }
            }
            for lo in &lowers {
                for up in &uppers {
                    let a = lo.coefs[var].clone();
                    let b = up.coefs[var].clone(); // negative
                    // (-b) * lo + a * up cancels var with positive weights.
                    let coefs: QVec = lo
                        .coefs
                        .iter()
                        .zip(&up.coefs)
                        .map(|(l, u)| -(&b * l) + &a * u)
                        .collect();
                    let constant = -(&b * &lo.constant) + &a * &up.constant;
                    let rel = if lo.rel == Rel::Gt || up.rel == Rel::Gt {
                        Rel::Gt
                    } else {
                        Rel::Ge
                    };
                    next.push(Row { coefs, constant, rel });
                }
            }
            current = dedup_rows(next);
            // Early contradiction check on constant rows.
            for r in &current {
                if r.coefs.iter().all(|c| c.is_zero()) && constant_row_violated(r) {
                    return None;
                }
            }
        }
        for r in &current {
            debug_assert!(r.coefs.iter().all(|c| c.is_zero()));
            if constant_row_violated(r) {
                return None;
            }
        }

        // Back-substitute midpoints through the snapshots.
        let mut value = vec![BigRational::zero(); self.nvars];
        for (var, rows) in snapshots.into_iter().rev() {
            let mut lower: Option<(BigRational, bool)> = None;
            let mut upper: Option<(BigRational, bool)> = None;
            for r in &rows {
                let c = r.coefs[var].clone();
                if c.is_zero() {
                    continue;
                }
                // Other variables in this row are either already assigned
                // (smaller index) or this one.
                let mut rest = r.constant.clone();
                for (j, coef) in r.coefs.iter().enumerate() {
                    if j != var && !coef.is_zero() {
                        let delta = coef * &value[j];
                        rest = &rest + delta;
                    }
                }
                let bound = -(&rest / &c);
                let strict = r.rel == Rel::Gt;
                if c.is_positive() {
                    if lower.as_ref().map(|(b, s)| bound > *b || (bound == *b && strict && !s)).unwrap_or(true) {
                        lower = Some((bound, strict));
                    }
                } else if upper.as_ref().map(|(b, s)| bound < *b || (bound == *b && strict && !s)).unwrap_or(true) {
                    upper = Some((bound, strict));
                }
            }
            value[var] = choose_in_interval(&lower, &upper)?;
        }
        for (var, coefs, constant) in substitutions.into_iter().rev() {
            let mut v = constant;
            for (j, c) in coefs.iter().enumerate() {
                if !c.is_zero() {
                    let delta = c * &value[j];
                    v = &v + delta;
                }
            }
            value[var] = v;
        }
        Some(value)
    }

    /// Projects the feasible region onto one variable: the exact interval of
    /// values that variable takes. `None` when the system is infeasible.
    pub fn project_interval(&self, var: usize) -> Option<Interval> {
        // Rename so the projected variable is index 0, eliminate the rest.
        let perm: Vec<usize> = std::iter::once(var)
            .chain((0..self.nvars).filter(|&v| v != var))
            .collect();
        let mut renamed = LinearSystem::new(self.nvars);
        for r in &self.rows {
            let coefs: QVec = perm.iter().map(|&p| r.coefs[p].clone()).collect();
            renamed.rows.push(Row { coefs, constant: r.constant.clone(), rel: r.rel });
        }
        let mut rows = renamed.rows.clone();
        // Substitute equalities not involving variable 0 first; keep the
        // ones that do as two inequalities.
        let mut expanded: Vec<Row> = Vec::new();
        for r in rows.drain(..) {
            if r.rel == Rel::Eq {
                expanded.push(Row { coefs: r.coefs.clone(), constant: r.constant.clone(), rel: Rel::Ge });
                let neg: QVec = r.coefs.iter().map(|c| -c).collect();
                expanded.push(Row { coefs: neg, constant: -r.constant, rel: Rel::Ge });
            } else {
                expanded.push(r);
            }
        }
        let mut current = dedup_rows(expanded);
        for var in (1..self.nvars).rev() {
            let mut next: Vec<Row> = Vec::new();
            let mut lowers: Vec<Row> = Vec::new();
            let mut uppers: Vec<Row> = Vec::new();
            for r in current.into_iter() {
                if r.coefs[var].is_zero() {
                    next.push(r);
                } else if r.coefs[var].is_positive() {
                    lowers.push(r);
                } else {
                    uppers.push(r);
                }
            }
            for lo in &lowers {
                for up in &uppers {
                    let a = lo.coefs[var].clone();
                    let b = up.coefs[var].clone();
                    let coefs: QVec = lo
                        .coefs
                        .iter()
                        .zip(&up.coefs)
                        .map(|(l, u)| -(&b * l) + &a * u)
                        .collect();
                    let constant = -(&b * &lo.constant) + &a * &up.constant;
                    let rel = if lo.rel == Rel::Gt || up.rel == Rel::Gt {
                        Rel::Gt
                    } else {
                        Rel::Ge
                    };
                    next.push(Row { coefs, constant, rel });
                }
            }
            current = dedup_rows(next);
        }
        let mut lower: Option<(BigRational, bool)> = None;
        let mut upper: Option<(BigRational, bool)> = None;
        for r in &current {
            let c = r.coefs[0].clone();
            if c.is_zero() {
                if constant_row_violated(r) {
                    return None;
                }
                continue;
            }
            let bound = -(&r.constant / &c);
            let strict = r.rel == Rel::Gt;
            if c.is_positive() {
                if lower
                    .as_ref()
                    .map(|(b, s)| bound > *b || (bound == *b && strict && !s))
                    .unwrap_or(true)
                {
                    lower = Some((bound, strict));
                }
            } else if upper
                .as_ref()
                .map(|(b, s)| bound < *b || (bound == *b && strict && !s))
                .unwrap_or(true)
            {
                upper = Some((bound, strict));
            }
        }
        if let (Some((lo, ls)), Some((hi, hs))) = (&lower, &upper) {
            if lo > hi || (lo == hi && (*ls || *hs)) {
                return None;
            }
        }
        Some(Interval { lower, upper })
    }
}

/// Closed/open interval bounds of a one-variable projection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lower: Option<(BigRational, bool)>,
    pub upper: Option<(BigRational, bool)>,
}

impl Interval {
    pub fn single_point(&self) -> Option<BigRational> {
        match (&self.lower, &self.upper) {
            (Some((lo, false)), Some((hi, false))) if lo == hi => Some(lo.clone()),
            _ => None,
        }
    }
}

fn constant_row_violated(r: &Row) -> bool {
    match r.rel {
        Rel::Ge => r.constant.is_negative(),
        Rel::Gt => !r.constant.is_positive(),
        Rel::Eq => !r.constant.is_zero(),
    }
}

fn choose_in_interval(
    lower: &Option<(BigRational, bool)>,
    upper: &Option<(BigRational, bool)>,
) -> Option<BigRational> {
    match (lower, upper) {
        (None, None) => Some(BigRational::zero()),
        (Some((lo, _)), None) => Some(lo + BigRational::one()),
        (None, Some((hi, _))) => Some(hi - BigRational::one()),
        (Some((lo, ls)), Some((hi, hs))) => {
            if lo < hi {
                Some((lo + hi) / BigRational::from(BigInt::from(2)))
            } else if lo == hi && !ls && !hs {
                Some(lo.clone())
            } else {
                None
            }
        }
    }
}

fn dedup_rows(rows: Vec<Row>) -> Vec<Row> {
    let mut seen: BTreeSet<(Vec<BigInt>, BigInt, u8)> = BTreeSet::new();
    let mut out = Vec::new();
    for r in rows {
        if r.coefs.iter().all(|c| c.is_zero()) {
            // Keep only violated or potentially-violated constant rows.
            if constant_row_violated(&r) {
                out.push(r);
            }
            continue;
        }
        if seen.insert(r.canonical_key()) {
            out.push(r);
        }
    }
    out
}

/// Builds the membership system: w = sum(lambda_i rays_i) + sum(mu_j lin_j),
/// lambda >= 0.
fn membership_system(cone: &ConeV, w: &[BigRational]) -> LinearSystem {
    let k = cone.rays.len();
    let m = cone.lineality.len();
    let mut sys = LinearSystem::new(k + m);
    for coord in 0..cone.dim_ambient {
        let mut coefs: QVec = Vec::with_capacity(k + m);
        for r in &cone.rays {
            coefs.push(BigRational::from(r[coord].clone()));
        }
        for l in &cone.lineality {
            coefs.push(BigRational::from(l[coord].clone()));
        }
        sys.eq(coefs, -w[coord].clone());
    }
    for i in 0..k {
        sys.nonneg(i);
    }
    sys
}

pub fn cone_contains(cone: &ConeV, w: &[BigRational]) -> bool {
    debug_assert_eq!(w.len(), cone.dim_ambient);
    membership_system(cone, w).is_feasible()
}

pub fn cone_contains_int(cone: &ConeV, w: &[BigInt]) -> bool {
    cone_contains(cone, &linalg::ivec_to_qvec(w))
}

/// Intersection of the line {base + t dir} with the cone, as an exact
/// t-interval. `None` when the intersection is empty.
pub fn line_cone_interval(cone: &ConeV, base: &[BigRational], dir: &[BigRational]) -> Option<Interval> {
    let k = cone.rays.len();
    let m = cone.lineality.len();
    // Variables: t, lambda_1..k, mu_1..m.
    let mut sys = LinearSystem::new(1 + k + m);
    for coord in 0..cone.dim_ambient {
        let mut coefs: QVec = Vec::with_capacity(1 + k + m);
        coefs.push(-dir[coord].clone());
        for r in &cone.rays {
            coefs.push(BigRational::from(r[coord].clone()));
        }
        for l in &cone.lineality {
            coefs.push(BigRational::from(l[coord].clone()));
        }
        sys.eq(coefs, -base[coord].clone());
    }
    for i in 0..k {
        sys.nonneg(1 + i);
    }
    sys.project_interval(0)
}

/// Canonical form per the artifact conventions: saturated HNF lineality
/// basis (absorbing rays whose negative lies in the cone), rays reduced
/// modulo the lineality, made primitive, irredundant, sorted.
pub fn canonical_cone(dim_ambient: usize, rays: Vec<IVec>, lineality: Vec<IVec>) -> ConeV {
    let mut lin: Vec<IVec> = lineality.into_iter().filter(|v| !linalg::is_zero_i(v)).collect();
    let mut rays: Vec<IVec> = rays
        .into_iter()
        .filter(|v| !linalg::is_zero_i(v))
        .map(|v| primitive(&v))
        .collect();
    rays.sort();
    rays.dedup();

    // Rays whose negation lies in the cone span lineality directions.
    if !rays.is_empty() {
        let probe = ConeV {
            dim_ambient,
            rays: rays.clone(),
            lineality: lin.clone(),
        };
        let (to_lin, keep): (Vec<IVec>, Vec<IVec>) = rays
            .into_iter()
            .partition(|r| cone_contains_int(&probe, &linalg::neg_i(r)));
        lin.extend(to_lin);
        rays = keep;
    }

    let lin_basis = hnf_rows(&saturated_basis(&lin, dim_ambient));

    // Reduce rays modulo the lineality using the HNF pivot structure.
    let pivots: Vec<usize> = lin_basis
        .iter()
        .map(|row| row.iter().position(|c| !c.is_zero()).expect("nonzero row"))
        .collect();
    let mut reduced: Vec<IVec> = Vec::new();
    for r in rays {
        let mut q: QVec = linalg::ivec_to_qvec(&r);
        for (row, &p) in lin_basis.iter().zip(&pivots) {
            if !q[p].is_zero() {
                let factor = &q[p] / BigRational::from(row[p].clone());
                for (dst, c) in q.iter_mut().zip(row) {
                    let delta = &factor * BigRational::from(c.clone());
                    *dst = &*dst - delta;
                }
            }
        }
        if !is_zero_q(&q) {
            reduced.push(rational_to_primitive(&q));
        }
    }
    reduced.sort();
    reduced.dedup();

    // Drop conically redundant generators.
    let mut idx = 0;
    while idx < reduced.len() {
        let mut rest = reduced.clone();
        let candidate = rest.remove(idx);
        let sub = ConeV { dim_ambient, rays: rest.clone(), lineality: lin_basis.clone() };
        if cone_contains_int(&sub, &candidate) {
            reduced.remove(idx);
        } else {
            idx += 1;
        }
    }

    ConeV { dim_ambient, rays: reduced, lineality: lin_basis }
}

pub fn cone_dim(c: &ConeV) -> usize {
    let mut rows = c.rays.clone();
    rows.extend(c.lineality.iter().cloned());
    linalg::rank_i(&rows)
}

/// Saturated lattice basis of the linear span of the cone.
pub fn cone_span_lattice(c: &ConeV) -> Vec<IVec> {
    let mut rows = c.rays.clone();
    rows.extend(c.lineality.iter().cloned());
    saturated_basis(&rows, c.dim_ambient)
}

/// True when every generator of `inner` lies in `outer`.
pub fn cone_subset(inner: &ConeV, outer: &ConeV) -> bool {
    inner.rays.iter().all(|r| cone_contains_int(outer, r))
        && inner.lineality.iter().all(|l| {
            cone_contains_int(outer, l) && cone_contains_int(outer, &linalg::neg_i(l))
        })
}

/// Merges two cones when their union is itself a convex cone. Handles the
/// planar-sector case (dimension = lineality + 2), which is the shape taken
/// by overlapping maximal cones of a two-dimensional tropicalization.
pub fn merge_convex_union(a: &ConeV, b: &ConeV) -> Option<ConeV> {
    if a.dim_ambient != b.dim_ambient || a.lineality != b.lineality {
        return None;
    }
    let dim_a = cone_dim(a);
    if dim_a != cone_dim(b) || dim_a != a.lineality.len() + 2 {
        return None;
    }
    if cone_span_lattice(a) != cone_span_lattice(b) {
        return None;
    }
    let touches = a.rays.iter().any(|r| cone_contains_int(b, r))
        || b.rays.iter().any(|r| cone_contains_int(a, r));
    if !touches {
        return None;
    }
    let mut rays = a.rays.clone();
    rays.extend(b.rays.iter().cloned());
    let merged = canonical_cone(a.dim_ambient, rays, a.lineality.clone());
    // Pointedness modulo lineality must not have collapsed.
    if merged.lineality != a.lineality || cone_dim(&merged) != dim_a {
        return None;
    }
    Some(merged)
}
