//! Exact reference layer: linear programming over the set of probability
//! distributions compatible with a support function and a rule base.
//!
//! Every closed-form bound in this crate can be checked against this module.
//! The polytope is the set of probability vectors `p` on the atoms with
//! `p(x) >= b(x)` for each stored lower bound and `p(x and y) >= c(x,y) p(y)`
//! for each stored conditional bound. Minima and maxima over the polytope are
//! solved through the dual program, which keeps the tableau at one row per
//! atom regardless of how many subsets carry constraints. The dual is feasible
//! by construction, so an unbounded dual is the (reliable) signal that the
//! primal polytope is empty.

mod simplex;

use num::BigRational;

use crate::error::{Error, Result};
use crate::evidence::{SupportFunction, SupportKind};
use crate::interval::{ConsistencyReport, Violation};
use crate::lattice::{subset_max_in_place, Frame, PropSet};
use crate::rules::RuleBase;
use crate::API_TOLERANCE;
use simplex::{solve_min, LpOutcome, Relation, Scalar};

/// Largest frame accepted by the linear-programming oracle.
pub const ORACLE_MAX_ATOMS: usize = 12;
/// Largest frame accepted in exact rational mode.
pub const EXACT_MAX_ATOMS: usize = 6;

/// A single probability distribution over the atoms of a frame.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityVector {
    frame: Frame,
    weights: Vec<f64>,
}

impl ProbabilityVector {
    /// Builds a distribution from per-atom weights in frame order.
    pub fn new(frame: &Frame, weights: &[f64]) -> Result<Self> {
        if weights.len() != frame.atom_count() {
            return Err(Error::ValidationError(format!(
                "expected {} atom weights, got {}",
                frame.atom_count(),
                weights.len()
            )));
        }
        let mut total = 0.0;
        for &w in weights {
            if !w.is_finite() || w < -API_TOLERANCE || w > 1.0 + API_TOLERANCE {
                return Err(Error::InvalidWeight(w));
            }
            total += w;
        }
        if (total - 1.0).abs() > API_TOLERANCE {
            return Err(Error::InvalidMass(format!(
                "atom probabilities sum to {total}, expected 1"
            )));
        }
        Ok(ProbabilityVector {
            frame: frame.clone(),
            weights: weights.iter().map(|w| w.clamp(0.0, 1.0)).collect(),
        })
    }

    /// The uniform distribution.
    pub fn uniform(frame: &Frame) -> Self {
        let n = frame.atom_count();
        ProbabilityVector {
            frame: frame.clone(),
            weights: vec![1.0 / n as f64; n],
        }
    }

    /// All probability on a single named atom.
    pub fn point_mass(frame: &Frame, atom: &str) -> Result<Self> {
        let a = frame.atom(atom)?;
        let mut weights = vec![0.0; frame.atom_count()];
        weights[a.mask().trailing_zeros() as usize] = 1.0;
        Ok(ProbabilityVector {
            frame: frame.clone(),
            weights,
        })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Probability of a set: the sum of its atom weights.
    pub fn prob(&self, x: &PropSet) -> Result<f64> {
        self.frame.ensure_same(x.frame())?;
        let mask = x.mask();
        Ok(self
            .weights
            .iter()
            .enumerate()
            .filter(|(j, _)| mask & (1u32 << j) != 0)
            .map(|(_, w)| w)
            .sum())
    }
}

/// The set of probability vectors compatible with a support function and,
/// optionally, a rule base. Possibly empty; emptiness is detected by the
/// solver rather than at construction time.
#[derive(Clone, Debug)]
pub struct CredalPolytope {
    frame: Frame,
    /// Rows `coeffs . p >= rhs` over atom weights, besides `sum p = 1, p >= 0`.
    rows: Vec<(Vec<f64>, f64)>,
    exact: bool,
}

/// Builds the polytope constrained by both the support function and the rule
/// base. See [`CredalPolytope::new`] for the unconditional variant.
pub fn build_polytope(support: &SupportFunction, rules: &RuleBase) -> Result<CredalPolytope> {
    CredalPolytope::new(support, Some(rules))
}

fn indicator(n: usize, mask: u32) -> Vec<f64> {
    (0..n)
        .map(|j| if mask & (1u32 << j) != 0 { 1.0 } else { 0.0 })
        .collect()
}

impl CredalPolytope {
    /// Builds the polytope from a support function, plus conditional rows for
    /// each informative rule bound when a rule base is given.
    pub fn new(support: &SupportFunction, rules: Option<&RuleBase>) -> Result<Self> {
        let frame = support.frame().clone();
        let n = frame.atom_count();
        if n > ORACLE_MAX_ATOMS {
            return Err(Error::FrameTooLarge {
                got: n,
                cap: ORACLE_MAX_ATOMS,
                context: "the linear-programming oracle".into(),
            });
        }
        if let Some(rb) = rules {
            frame.ensure_same(rb.frame())?;
        }
        let full = frame.full_mask();
        let mut rows = Vec::new();
        // Lower bounds: p(x) >= b(x). The empty set and the full frame add
        // nothing beyond `p >= 0` and `sum p = 1`.
        for mask in 1..full {
            let v = support.value_at(mask);
            if v > 0.0 {
                rows.push((indicator(n, mask), v));
            }
        }
        // Conditional bounds: p(x and y) - c(x,y) p(y) >= 0. Bounds implied
        // by a subset with an equal or larger bound are skipped; monotone
        // closure makes those rows redundant.
        if let Some(rb) = rules {
            for (x_mask, y_mask, v) in rb.informative_pairs() {
                let mut coeffs = vec![0.0; n];
                for j in 0..n {
                    let bit = 1u32 << j;
                    if x_mask & bit != 0 {
                        coeffs[j] += 1.0;
                    }
                    if y_mask & bit != 0 {
                        coeffs[j] -= v;
                    }
                }
                rows.push((coeffs, 0.0));
            }
        }
        Ok(CredalPolytope {
            frame,
            rows,
            exact: false,
        })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Number of stored rows beyond non-negativity and normalization.
    pub fn constraint_count(&self) -> usize {
        self.rows.len()
    }

    /// Switches every solve to exact rational arithmetic. Slower, so the
    /// frame cap is stricter.
    pub fn with_exact_arithmetic(mut self) -> Result<Self> {
        let n = self.frame.atom_count();
        if n > EXACT_MAX_ATOMS {
            return Err(Error::FrameTooLarge {
                got: n,
                cap: EXACT_MAX_ATOMS,
                context: "exact rational arithmetic".into(),
            });
        }
        self.exact = true;
        Ok(self)
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// True when no probability vector satisfies every row.
    pub fn is_empty(&self) -> Result<bool> {
        let n = self.frame.atom_count();
        let ones = vec![1.0; n];
        Ok(self.solve(&vec![0.0; n], &self.rows, &ones)?.is_none())
    }

    /// Membership test for a concrete distribution, within tolerance.
    pub fn contains(&self, p: &ProbabilityVector) -> Result<bool> {
        self.frame.ensure_same(p.frame())?;
        Ok(self.rows.iter().all(|(coeffs, rhs)| {
            let lhs: f64 = coeffs.iter().zip(p.weights()).map(|(c, w)| c * w).sum();
            lhs >= rhs - API_TOLERANCE
        }))
    }

    /// Exact lower probability of `x` over the polytope.
    pub fn min_prob(&self, x: &PropSet) -> Result<f64> {
        self.frame.ensure_same(x.frame())?;
        let n = self.frame.atom_count();
        let obj = indicator(n, x.mask());
        let ones = vec![1.0; n];
        match self.solve(&obj, &self.rows, &ones)? {
            Some(v) => Ok(v.clamp(0.0, 1.0)),
            None => Err(Error::EmptyPolytope),
        }
    }

    /// Exact upper probability of `x` over the polytope.
    pub fn max_prob(&self, x: &PropSet) -> Result<f64> {
        self.frame.ensure_same(x.frame())?;
        let n = self.frame.atom_count();
        let obj: Vec<f64> = indicator(n, x.mask()).iter().map(|v| -v).collect();
        let ones = vec![1.0; n];
        match self.solve(&obj, &self.rows, &ones)? {
            Some(v) => Ok((-v).clamp(0.0, 1.0)),
            None => Err(Error::EmptyPolytope),
        }
    }

    /// Exact infimum of `p(x | y)` over members with `p(y) > 0`, computed on
    /// a normalized change of variable (`q = p / p(y)`) so the infimum is a
    /// finite linear program even as `p(y)` approaches zero.
    pub fn min_conditional(&self, consequent: &PropSet, antecedent: &PropSet) -> Result<f64> {
        self.frame.ensure_same(consequent.frame())?;
        self.frame.ensure_same(antecedent.frame())?;
        if antecedent.is_empty() {
            return Err(Error::EmptyAntecedent);
        }
        let n = self.frame.atom_count();
        // Homogenize each row: coeffs . p >= rhs becomes
        // (coeffs - rhs) . q >= 0 once p is scaled by 1 / p(y).
        let rows: Vec<(Vec<f64>, f64)> = self
            .rows
            .iter()
            .map(|(coeffs, rhs)| (coeffs.iter().map(|c| c - rhs).collect(), 0.0))
            .collect();
        let eq = indicator(n, antecedent.mask());
        let obj = indicator(n, consequent.mask() & antecedent.mask());
        match self.solve(&obj, &rows, &eq)? {
            Some(v) => Ok(v.clamp(0.0, 1.0)),
            None => {
                if self.is_empty()? {
                    Err(Error::EmptyPolytope)
                } else {
                    Err(Error::AntecedentImpossible)
                }
            }
        }
    }

    /// Minimizes `objective . p` subject to `rows`, `eq . p = 1`, `p >= 0`,
    /// by solving the dual program. `None` means the primal is infeasible.
    fn solve(
        &self,
        objective: &[f64],
        rows: &[(Vec<f64>, f64)],
        eq: &[f64],
    ) -> Result<Option<f64>> {
        if self.exact {
            dual_solve::<BigRational>(self.frame.atom_count(), objective, rows, eq)
        } else {
            dual_solve::<f64>(self.frame.atom_count(), objective, rows, eq)
        }
    }
}

/// Solves `min objective . p  s.t.  rows . p >= rhs, eq . p = 1, p >= 0`
/// through its dual `max rhs . u + v  s.t.  rows^T u + v eq <= objective,
/// u >= 0`. The dual has one constraint per atom and is always feasible for
/// the programs built here (objectives bounded below on the simplex), so
/// `Unbounded` maps to "primal infeasible" and `Infeasible` cannot happen.
fn dual_solve<S: Scalar>(
    atom_count: usize,
    objective: &[f64],
    rows: &[(Vec<f64>, f64)],
    eq: &[f64],
) -> Result<Option<f64>> {
    let m = rows.len();
    // Dual variables: u_0..u_{m-1} >= 0, then v split into v+ and v-.
    let mut dual_obj: Vec<S> = Vec::with_capacity(m + 2);
    for (_, rhs) in rows {
        dual_obj.push(S::from_f64(-rhs));
    }
    dual_obj.push(S::from_f64(-1.0));
    dual_obj.push(S::from_f64(1.0));
    let mut constraints = Vec::with_capacity(atom_count);
    for j in 0..atom_count {
        let mut coeffs: Vec<S> = Vec::with_capacity(m + 2);
        for (row, _) in rows {
            coeffs.push(S::from_f64(row[j]));
        }
        coeffs.push(S::from_f64(eq[j]));
        coeffs.push(S::from_f64(-eq[j]));
        constraints.push((coeffs, Relation::Le, S::from_f64(objective[j])));
    }
    match solve_min(&dual_obj, &constraints) {
        LpOutcome::Optimal { value, .. } => Ok(Some(-value.to_f64())),
        LpOutcome::Unbounded => Ok(None),
        LpOutcome::Infeasible => Err(Error::SolverFailure(
            "dual program reported infeasible, which its construction rules out".into(),
        )),
    }
}

/// Tightest support function with the same polytope: the exact lower
/// probability of every subset under both the prior bounds and the rules.
/// The result is an envelope, at least as specific as the input, and leaves
/// the polytope unchanged, but its own closed-form checks may still flag it
/// because envelope minima need not be jointly attainable.
pub fn natural_extension(support: &SupportFunction, rules: &RuleBase) -> Result<SupportFunction> {
    let poly = CredalPolytope::new(support, Some(rules))?;
    natural_extension_over(&poly, support)
}

/// [`natural_extension`] in exact rational arithmetic (stricter frame cap).
pub fn natural_extension_exact(
    support: &SupportFunction,
    rules: &RuleBase,
) -> Result<SupportFunction> {
    let poly = CredalPolytope::new(support, Some(rules))?.with_exact_arithmetic()?;
    natural_extension_over(&poly, support)
}

fn natural_extension_over(
    poly: &CredalPolytope,
    support: &SupportFunction,
) -> Result<SupportFunction> {
    let frame = support.frame().clone();
    let size = frame.subset_count();
    let full = frame.full_mask();
    let mut values = vec![0.0; size];
    for mask in 1..full {
        let x = frame.subset_from_mask(mask)?;
        values[mask as usize] = poly.min_prob(&x)?.max(support.value_at(mask));
    }
    values[full as usize] = 1.0;
    if full <= 1 {
        // Degenerate frames never reach the loop; surface emptiness here.
        if poly.is_empty()? {
            return Err(Error::EmptyPolytope);
        }
    }
    // Solver noise can wiggle below monotone; snap it back.
    subset_max_in_place(&mut values);
    for v in values.iter_mut() {
        *v = v.clamp(0.0, 1.0);
    }
    Ok(SupportFunction::from_values(
        frame,
        SupportKind::Envelope,
        values,
    ))
}

/// True when the support function's bounds are all attained: the polytope it
/// generates is nonempty and `min p(x)` equals `b(x)` for every subset.
pub fn is_envelope(support: &SupportFunction) -> Result<bool> {
    let poly = CredalPolytope::new(support, None)?;
    if poly.is_empty()? {
        return Ok(false);
    }
    let frame = support.frame();
    for mask in 1..frame.full_mask() {
        let x = frame.subset_from_mask(mask)?;
        if poly.min_prob(&x)? > support.value_at(mask) + API_TOLERANCE {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Definition-level consistency: each stored nontrivial rule bound is
/// compared against the exact conditional infimum over the polytope built
/// from the support function alone. Pairs whose antecedent cannot carry
/// positive probability are vacuously satisfied.
pub fn check_consistency_definition(
    support: &SupportFunction,
    rules: &RuleBase,
) -> Result<ConsistencyReport> {
    support.frame().ensure_same(rules.frame())?;
    let poly = CredalPolytope::new(support, None)?;
    let frame = support.frame();
    let mut violations = Vec::new();
    let mut pairs_checked = 0usize;
    for (x_mask, y_mask, required) in rules.nontrivial_pairs() {
        let x = frame.subset_from_mask(x_mask)?;
        let y = frame.subset_from_mask(y_mask)?;
        match poly.min_conditional(&x, &y) {
            Ok(achieved) => {
                pairs_checked += 1;
                if achieved < required - API_TOLERANCE {
                    violations.push(Violation {
                        consequent: x,
                        antecedent: y,
                        required,
                        achieved,
                    });
                }
            }
            Err(Error::AntecedentImpossible) => {
                pairs_checked += 1;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(ConsistencyReport::new(violations, pairs_checked))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evidence::MassFunction;
    use crate::rules::Rule;
    use approx::assert_relative_eq;

    fn pq_frame() -> Frame {
        Frame::new(["pq", "p~q", "~pq", "~p~q"]).unwrap()
    }

    fn set(frame: &Frame, atoms: &[&str]) -> PropSet {
        frame.subset(atoms).unwrap()
    }

    /// Prior: weight 0.8 that the antecedent holds, 0.2 uncommitted; one rule
    /// moving 0.9 of the antecedent onto the joint outcome.
    fn forward_scenario() -> (SupportFunction, RuleBase) {
        let frame = pq_frame();
        let p = set(&frame, &["pq", "p~q"]);
        let q = set(&frame, &["pq", "~pq"]);
        let theta = frame.full();
        let prior = MassFunction::new(&frame, [(&p, 0.8), (&theta, 0.2)])
            .unwrap()
            .to_belief();
        let rules = RuleBase::new(&frame, &[Rule::new(&q, &p, 0.9).unwrap()]).unwrap();
        (prior, rules)
    }

    #[test]
    fn forward_polytope_bounds_match_hand_solution() {
        let (prior, rules) = forward_scenario();
        let frame = prior.frame().clone();
        let poly = build_polytope(&prior, &rules).unwrap();
        let p = set(&frame, &["pq", "p~q"]);
        let q = set(&frame, &["pq", "~pq"]);
        assert_relative_eq!(poly.min_prob(&q).unwrap(), 0.72, epsilon = 1e-9);
        assert_relative_eq!(poly.min_prob(&p).unwrap(), 0.8, epsilon = 1e-9);
        assert_relative_eq!(poly.max_prob(&q).unwrap(), 1.0, epsilon = 1e-9);
        assert_relative_eq!(poly.min_conditional(&q, &p).unwrap(), 0.9, epsilon = 1e-9);

        let witness = ProbabilityVector::new(&frame, &[0.72, 0.08, 0.0, 0.2]).unwrap();
        assert!(poly.contains(&witness).unwrap());
        assert!(!poly.contains(&ProbabilityVector::uniform(&frame)).unwrap());
        assert!(!poly.is_empty().unwrap());
    }

    #[test]
    fn exact_mode_agrees_with_floating_point() {
        let (prior, rules) = forward_scenario();
        let frame = prior.frame().clone();
        let q = set(&frame, &["pq", "~pq"]);
        let poly = build_polytope(&prior, &rules)
            .unwrap()
            .with_exact_arithmetic()
            .unwrap();
        assert!(poly.is_exact());
        assert_relative_eq!(poly.min_prob(&q).unwrap(), 0.72, epsilon = 1e-12);
    }

    #[test]
    fn exact_mode_enforces_its_frame_cap() {
        let names: Vec<String> = (0..7).map(|i| format!("a{i}")).collect();
        let frame = Frame::new(names).unwrap();
        let b = SupportFunction::vacuous(&frame);
        let err = CredalPolytope::new(&b, None)
            .unwrap()
            .with_exact_arithmetic()
            .unwrap_err();
        assert!(matches!(err, Error::FrameTooLarge { cap: 6, .. }));
    }

    #[test]
    fn contradictory_raw_bounds_give_an_empty_polytope() {
        let frame = Frame::new(["a", "b"]).unwrap();
        let a = set(&frame, &["a"]);
        let bb = set(&frame, &["b"]);
        let b = SupportFunction::from_lower_bounds(&frame, [(&a, 0.6), (&bb, 0.6)]).unwrap();
        let poly = CredalPolytope::new(&b, None).unwrap();
        assert!(poly.is_empty().unwrap());
        assert!(matches!(
            poly.min_prob(&set(&frame, &["a"])),
            Err(Error::EmptyPolytope)
        ));
        assert_eq!(is_envelope(&b).unwrap(), false);
    }

    #[test]
    fn impossible_antecedents_are_reported_as_such() {
        let frame = Frame::new(["a", "b"]).unwrap();
        let a = set(&frame, &["a"]);
        let b = MassFunction::new(&frame, [(&a, 1.0)]).unwrap().to_belief();
        let poly = CredalPolytope::new(&b, None).unwrap();
        let err = poly
            .min_conditional(&set(&frame, &["a"]), &set(&frame, &["b"]))
            .unwrap_err();
        assert!(matches!(err, Error::AntecedentImpossible));
    }

    #[test]
    fn conditional_infimum_handles_vanishing_antecedents() {
        // Weight 0.6 on {a,b}, 0.4 uncommitted: p(a | {a,c}) can reach 0
        // with p(a) = 0, p(b) = 0.6, p(c) = 0.4.
        let frame = Frame::new(["a", "b", "c"]).unwrap();
        let ab = set(&frame, &["a", "b"]);
        let theta = frame.full();
        let b = MassFunction::new(&frame, [(&ab, 0.6), (&theta, 0.4)])
            .unwrap()
            .to_belief();
        let poly = CredalPolytope::new(&b, None).unwrap();
        let v = poly
            .min_conditional(&set(&frame, &["a"]), &set(&frame, &["a", "c"]))
            .unwrap();
        assert_relative_eq!(v, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn natural_extension_of_a_belief_with_no_rules_is_itself() {
        let (prior, _) = forward_scenario();
        let rules = RuleBase::vacuous(prior.frame());
        let ext = natural_extension(&prior, &rules).unwrap();
        assert_eq!(ext.kind(), SupportKind::Envelope);
        for mask in 0..prior.frame().subset_count() as u32 {
            assert_relative_eq!(
                ext.value_at(mask),
                prior.value_at(mask),
                epsilon = 1e-9
            );
        }
        assert!(is_envelope(&ext).unwrap());
    }

    #[test]
    fn envelope_detection_separates_attained_from_unattained_bounds() {
        let frame = Frame::new(["a", "b", "c"]).unwrap();
        let a = set(&frame, &["a"]);
        let b = set(&frame, &["b"]);
        let ab = set(&frame, &["a", "b"]);
        let ac = set(&frame, &["a", "c"]);
        let bc = set(&frame, &["b", "c"]);
        // b({a}) = b({b}) = 0.3 alone: p({a,b}) >= 0.6 and p({a,c}) >= 0.3
        // follow but are not stored, so those bounds are not attained.
        let loose =
            SupportFunction::from_lower_bounds(&frame, [(&a, 0.3), (&b, 0.3)]).unwrap();
        assert_eq!(is_envelope(&loose).unwrap(), false);

        // Filling in everything those bounds imply yields an envelope.
        let tight = SupportFunction::from_lower_bounds(
            &frame,
            [(&a, 0.3), (&b, 0.3), (&ab, 0.6), (&ac, 0.3), (&bc, 0.3)],
        )
        .unwrap();
        assert_eq!(is_envelope(&tight).unwrap(), true);
    }

    #[test]
    fn beliefs_are_envelopes() {
        let (prior, _) = forward_scenario();
        assert!(is_envelope(&prior).unwrap());
    }

    #[test]
    fn definition_level_check_flags_an_unsupported_rule() {
        let (prior, rules) = forward_scenario();
        let report = check_consistency_definition(&prior, &rules).unwrap();
        assert!(!report.is_consistent());
        assert_eq!(report.violations().len(), 1);
        let v = &report.violations()[0];
        assert_relative_eq!(v.required, 0.9, epsilon = 1e-12);
        assert_relative_eq!(v.achieved, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn definition_level_check_accepts_a_supported_rule() {
        let frame = pq_frame();
        let p = set(&frame, &["pq", "p~q"]);
        let q = set(&frame, &["pq", "~pq"]);
        let joint = set(&frame, &["pq"]);
        let certain = MassFunction::new(&frame, [(&joint, 1.0)]).unwrap().to_belief();
        let rules = RuleBase::new(&frame, &[Rule::new(&q, &p, 0.9).unwrap()]).unwrap();
        let report = check_consistency_definition(&certain, &rules).unwrap();
        assert!(report.is_consistent());
        assert!(report.pairs_checked() > 0);
    }

    #[test]
    fn probability_vectors_validate_their_input() {
        let frame = Frame::new(["a", "b"]).unwrap();
        assert!(matches!(
            ProbabilityVector::new(&frame, &[0.7, 0.7]),
            Err(Error::InvalidMass(_))
        ));
        assert!(matches!(
            ProbabilityVector::new(&frame, &[-0.5, 1.5]),
            Err(Error::InvalidWeight(_))
        ));
        let p = ProbabilityVector::point_mass(&frame, "b").unwrap();
        assert_relative_eq!(p.prob(&set(&frame, &["b"])).unwrap(), 1.0);
        assert_relative_eq!(p.prob(&set(&frame, &["a"])).unwrap(), 0.0);
        let u = ProbabilityVector::uniform(&frame);
        assert_relative_eq!(u.prob(&frame.full()).unwrap(), 1.0);
    }
}
