//! A small dense two-phase simplex solver with Bland's anti-cycling rule.
//!
//! Generic over the scalar so the same pivoting code runs in `f64` and in
//! exact rational arithmetic. All variables are implicitly non-negative;
//! callers add their own sign splits for free variables. Problems here are
//! tiny (tens of rows), so a dense tableau is the simplest correct choice.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{BigRational, FromPrimitive, ToPrimitive, Zero};

/// Scalar field for the tableau. `tol()` is the comparison slack for pivot
/// decisions: 0 in exact arithmetic.
pub(crate) trait Scalar:
    Clone
    + PartialOrd
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(v: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn tol() -> Self;

    fn is_zero_within_tol(&self) -> bool {
        let t = Self::tol();
        *self <= t && *self >= -t
    }
}

impl Scalar for f64 {
    fn zero() -> f64 {
        0.0
    }
    fn one() -> f64 {
        1.0
    }
    fn from_f64(v: f64) -> f64 {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn tol() -> f64 {
        1e-9
    }
}

impl Scalar for BigRational {
    fn zero() -> BigRational {
        Zero::zero()
    }
    fn one() -> BigRational {
        num::One::one()
    }
    fn from_f64(v: f64) -> BigRational {
        <BigRational as FromPrimitive>::from_f64(v).expect("finite float")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            // Fall back to a quotient of lossy halves for extreme magnitudes.
            self.numer().to_f64().unwrap_or(f64::NAN) / self.denom().to_f64().unwrap_or(f64::NAN)
        })
    }
    fn tol() -> BigRational {
        Zero::zero()
    }

    fn is_zero_within_tol(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// Constraint sense for [`solve_min`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Relation {
    #[allow(dead_code)] // callers currently pre-negate into Le, but Ge stays supported
    Ge,
    Le,
    Eq,
}

/// Outcome of a solve. `point` holds the structural variables only.
#[derive(Clone, Debug)]
pub(crate) enum LpOutcome<S> {
    Optimal {
        value: S,
        #[allow(dead_code)] // optimum witness; exercised by the solver tests
        point: Vec<S>,
    },
    Infeasible,
    Unbounded,
}

/// Minimizes `objective . x` subject to `coeffs . x (rel) rhs` per constraint
/// and `x >= 0`, by the two-phase dense simplex method with Bland's rule
/// (entering: lowest eligible index; leaving: lowest basic index among ties).
pub(crate) fn solve_min<S: Scalar>(
    objective: &[S],
    constraints: &[(Vec<S>, Relation, S)],
) -> LpOutcome<S> {
    let n = objective.len();
    let m = constraints.len();
    let slack_count = constraints
        .iter()
        .filter(|(_, rel, _)| *rel != Relation::Eq)
        .count();
    let art_start = n + slack_count;
    let cols = art_start + m;

    // Build rows in standard form with non-negative right-hand sides and an
    // artificial basis.
    let mut rows: Vec<Vec<S>> = Vec::with_capacity(m);
    let mut rhs: Vec<S> = Vec::with_capacity(m);
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let mut next_slack = n;
    for (i, (coeffs, rel, r)) in constraints.iter().enumerate() {
        debug_assert_eq!(coeffs.len(), n);
        let mut row = vec![S::zero(); cols];
        row[..n].clone_from_slice(coeffs);
        match rel {
            Relation::Ge => {
                row[next_slack] = -S::one();
                next_slack += 1;
            }
            Relation::Le => {
                row[next_slack] = S::one();
                next_slack += 1;
            }
            Relation::Eq => {}
        }
        let mut r = r.clone();
        if r < S::zero() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
            r = -r;
        }
        row[art_start + i] = S::one();
        rows.push(row);
        rhs.push(r);
        basis.push(art_start + i);
    }

    // Phase-1 cost row (min sum of artificials), pre-reduced against the
    // artificial basis: entries are -(column sums), value slot is -(rhs sum).
    let mut phase1 = vec![S::zero(); cols + 1];
    for (row, r) in rows.iter().zip(&rhs) {
        for (j, v) in row.iter().enumerate() {
            if j < art_start {
                phase1[j] = phase1[j].clone() - v.clone();
            }
        }
        phase1[cols] = phase1[cols].clone() - r.clone();
    }
    // Phase-2 cost row: artificials cost nothing, so it starts unreduced.
    let mut phase2 = vec![S::zero(); cols + 1];
    phase2[..n].clone_from_slice(objective);

    let mut t = Tableau {
        rows,
        rhs,
        basis,
        art_start,
        cols,
    };

    if !t.run_phase(&mut phase1, &mut phase2) {
        // Phase 1 is bounded below by 0; this is defensive.
        return LpOutcome::Unbounded;
    }
    let infeasibility = -phase1[t.cols].clone();
    if infeasibility > S::tol() {
        return LpOutcome::Infeasible;
    }
    t.evict_artificials(&mut phase1, &mut phase2);

    if !t.run_phase(&mut phase2, &mut phase1) {
        return LpOutcome::Unbounded;
    }
    let mut point = vec![S::zero(); n];
    for (i, b) in t.basis.iter().enumerate() {
        if *b < n {
            point[*b] = t.rhs[i].clone();
        }
    }
    LpOutcome::Optimal {
        value: -phase2[t.cols].clone(),
        point,
    }
}

struct Tableau<S> {
    rows: Vec<Vec<S>>,
    rhs: Vec<S>,
    basis: Vec<usize>,
    art_start: usize,
    cols: usize,
}

impl<S: Scalar> Tableau<S> {
    /// Runs simplex iterations against `cost`, keeping `other` reduced too.
    /// Returns false when the problem is unbounded in this phase.
    fn run_phase(&mut self, cost: &mut [S], other: &mut [S]) -> bool {
        loop {
            // Bland entering rule: lowest-index improving column. Artificial
            // columns never re-enter once they leave the basis.
            let entering = (0..self.art_start).find(|j| cost[*j] < -S::tol());
            let Some(e) = entering else {
                return true;
            };
            let Some(r) = self.leaving_row(e) else {
                return false;
            };
            self.pivot(r, e, cost, other);
        }
    }

    /// Minimum-ratio test with Bland tie-breaking on the basic variable index.
    fn leaving_row(&self, e: usize) -> Option<usize> {
        let mut best: Option<(usize, S)> = None;
        for (i, row) in self.rows.iter().enumerate() {
            if row[e] > S::tol() {
                let ratio = self.rhs[i].clone() / row[e].clone();
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br || (ratio == br && self.basis[i] < self.basis[bi]) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
        }
        best.map(|(i, _)| i)
    }

    fn pivot(&mut self, r: usize, e: usize, cost: &mut [S], other: &mut [S]) {
        let p = self.rows[r][e].clone();
        for v in self.rows[r].iter_mut() {
            *v = v.clone() / p.clone();
        }
        self.rhs[r] = self.rhs[r].clone() / p;
        for i in 0..self.rows.len() {
            if i != r {
                self.eliminate_row(i, r, e);
            }
        }
        Self::eliminate_cost(cost, &self.rows[r], &self.rhs[r], e, self.cols);
        Self::eliminate_cost(other, &self.rows[r], &self.rhs[r], e, self.cols);
        self.basis[r] = e;
    }

    fn eliminate_row(&mut self, i: usize, r: usize, e: usize) {
        let factor = self.rows[i][e].clone();
        if factor.is_zero_within_tol() {
            self.rows[i][e] = S::zero();
            return;
        }
        let (pivot_row, target) = if i < r {
            let (a, b) = self.rows.split_at_mut(r);
            (&b[0], &mut a[i])
        } else {
            let (a, b) = self.rows.split_at_mut(i);
            (&a[r], &mut b[0])
        };
        for (t, p) in target.iter_mut().zip(pivot_row) {
            *t = t.clone() - factor.clone() * p.clone();
        }
        target[e] = S::zero();
        self.rhs[i] = self.rhs[i].clone() - factor * self.rhs[r].clone();
    }

    fn eliminate_cost(cost: &mut [S], pivot_row: &[S], pivot_rhs: &S, e: usize, cols: usize) {
        let factor = cost[e].clone();
        if factor.is_zero_within_tol() {
            cost[e] = S::zero();
            return;
        }
        for (c, p) in cost.iter_mut().zip(pivot_row) {
            *c = c.clone() - factor.clone() * p.clone();
        }
        cost[e] = S::zero();
        cost[cols] = cost[cols].clone() - factor * pivot_rhs.clone();
    }

    /// After a feasible phase 1, pivots residual artificials out of the basis
    /// (or drops their rows as redundant) so phase 2 never touches them.
    fn evict_artificials(&mut self, cost: &mut [S], other: &mut [S]) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.art_start {
                let pivot_col = (0..self.art_start)
                    .find(|j| !self.rows[i][*j].is_zero_within_tol());
                match pivot_col {
                    Some(j) => {
                        self.pivot(i, j, cost, other);
                        i += 1;
                    }
                    None => {
                        // Redundant constraint: remove the row entirely.
                        self.rows.swap_remove(i);
                        self.rhs.swap_remove(i);
                        self.basis.swap_remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num::BigRational;

    fn ge(coeffs: Vec<f64>, rhs: f64) -> (Vec<f64>, Relation, f64) {
        (coeffs, Relation::Ge, rhs)
    }

    fn le(coeffs: Vec<f64>, rhs: f64) -> (Vec<f64>, Relation, f64) {
        (coeffs, Relation::Le, rhs)
    }

    fn eq(coeffs: Vec<f64>, rhs: f64) -> (Vec<f64>, Relation, f64) {
        (coeffs, Relation::Eq, rhs)
    }

    #[test]
    fn solves_a_textbook_minimum() {
        // min x + 2y  s.t.  x + y >= 2, y >= 0.5  ->  x = 1.5, y = 0.5.
        let out = solve_min(&[1.0, 2.0], &[ge(vec![1.0, 1.0], 2.0), ge(vec![0.0, 1.0], 0.5)]);
        match out {
            LpOutcome::Optimal { value, point } => {
                assert_relative_eq!(value, 2.5, epsilon = 1e-9);
                assert_relative_eq!(point[0], 1.5, epsilon = 1e-9);
                assert_relative_eq!(point[1], 0.5, epsilon = 1e-9);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn handles_equalities_and_maximization_via_negation() {
        // max x s.t. x + y = 1  ->  1 (minimize -x).
        let out = solve_min(&[-1.0, 0.0], &[eq(vec![1.0, 1.0], 1.0)]);
        match out {
            LpOutcome::Optimal { value, point } => {
                assert_relative_eq!(-value, 1.0, epsilon = 1e-9);
                assert_relative_eq!(point[0], 1.0, epsilon = 1e-9);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn detects_infeasible_and_unbounded_programs() {
        let inf = solve_min(&[0.0], &[ge(vec![1.0], 2.0), le(vec![1.0], 1.0)]);
        assert!(matches!(inf, LpOutcome::Infeasible));
        let unb = solve_min(&[-1.0], &[ge(vec![1.0], 0.0)]);
        assert!(matches!(unb, LpOutcome::Unbounded));
    }

    #[test]
    fn tolerates_redundant_rows() {
        // x + y = 1 stated twice plus a dominated inequality.
        let out = solve_min(
            &[1.0, 0.0],
            &[
                eq(vec![1.0, 1.0], 1.0),
                eq(vec![1.0, 1.0], 1.0),
                ge(vec![1.0, 1.0], 0.5),
            ],
        );
        match out {
            LpOutcome::Optimal { value, .. } => assert_relative_eq!(value, 0.0, epsilon = 1e-9),
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn exact_rationals_hit_thirds_exactly() {
        let r = |v: f64| <BigRational as Scalar>::from_f64(v);
        let third: Vec<(Vec<BigRational>, Relation, BigRational)> =
            vec![(vec![r(3.0)], Relation::Eq, r(1.0))];
        let out = solve_min(&[r(1.0)], &third);
        match out {
            LpOutcome::Optimal { value, point } => {
                let exact = BigRational::new(1.into(), 3.into());
                assert_eq!(value, exact);
                assert_eq!(point[0], exact);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_ties_terminate_with_bland() {
        // A classic cycling-prone shape; Bland's rule must terminate.
        let out = solve_min(
            &[-0.75, 150.0, -0.02, 6.0],
            &[
                le(vec![0.25, -60.0, -0.04, 9.0], 0.0),
                le(vec![0.5, -90.0, -0.02, 3.0], 0.0),
                le(vec![0.0, 0.0, 1.0, 0.0], 1.0),
            ],
        );
        match out {
            LpOutcome::Optimal { value, .. } => assert_relative_eq!(value, -0.05, epsilon = 1e-9),
            other => panic!("expected optimal, got {other:?}"),
        }
    }
}
