//! Closed-form interval engines.
//!
//! Three conditionalization regimes over one rule base:
//!
//! * the **interval-Bayes bound**: an unconditional lower bound on `p(x)`
//!   obtained by minimizing `c(x,y) a + c(x,ybar) (1-a)` over the prior's
//!   probability interval for the condition;
//! * the **optimistic regime**: conditioning that refines the underlying
//!   evidence mapping, algebraically `(b(x or ybar) - b(ybar)) / (1 - b(ybar))`,
//!   which coincides with Dempster conditioning;
//! * the **general regime**: the worst-case conditional lower bound
//!   `b(x and y) / (b(x and y) + 1 - b(x or ybar))`, exact for belief
//!   functions (it equals the linear-programming infimum).
//!
//! Each regime ships a point evaluation, a consistency check, and (for the
//! first two) an iterative refinement to the least fixpoint. A cheap
//! coherence closure (monotonicity plus disjoint superadditive propagation)
//! rounds out the module; alternating it with optimistic refinement is what
//! produces contrapositive conclusions.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::evidence::{SupportFunction, SupportKind};
use crate::lattice::{Frame, PropSet};
use crate::rules::RuleBase;
use crate::{API_TOLERANCE, INTERNAL_TOLERANCE};

/// A closed interval of probabilities, e.g. `[b(x), 1 - b(xbar)]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbabilityInterval {
    pub lower: f64,
    pub upper: f64,
}

impl ProbabilityInterval {
    /// Validates bounds and order (within a hair of slack for rounding).
    pub fn new(lower: f64, upper: f64) -> Result<ProbabilityInterval> {
        if !(0.0..=1.0).contains(&lower) || lower.is_nan() {
            return Err(Error::InvalidBound(lower));
        }
        if !(0.0..=1.0).contains(&upper) || upper.is_nan() {
            return Err(Error::InvalidBound(upper));
        }
        if lower > upper + INTERNAL_TOLERANCE {
            return Err(Error::EmptyInterval { lower, upper });
        }
        Ok(ProbabilityInterval {
            lower: lower.min(upper),
            upper,
        })
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, v: f64) -> bool {
        (self.lower..=self.upper).contains(&v)
    }
}

/// The interval `[b(x), 1 - b(xbar)]` a support function implies for `x`.
pub fn implied_interval(b: &SupportFunction, x: &PropSet) -> Result<ProbabilityInterval> {
    b.frame().ensure_same(x.frame())?;
    ProbabilityInterval::new(b.value(x)?, b.plausibility(x)?)
}

/// One unsatisfied requirement: the support achieved for the pair falls
/// short of what the rules (or coherence) demand.
#[derive(Clone, Debug)]
pub struct Violation {
    pub consequent: PropSet,
    pub antecedent: PropSet,
    pub required: f64,
    pub achieved: f64,
}

/// Outcome of a consistency check: the list of violated pairs (empty means
/// consistent) plus how many pairs were examined.
#[derive(Clone, Debug)]
pub struct ConsistencyReport {
    violations: Vec<Violation>,
    pairs_checked: usize,
}

impl ConsistencyReport {
    pub(crate) fn new(violations: Vec<Violation>, pairs_checked: usize) -> ConsistencyReport {
        ConsistencyReport {
            violations,
            pairs_checked,
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn pairs_checked(&self) -> usize {
        self.pairs_checked
    }
}

/// A refinement result: the tightened support plus how many sweeps (or
/// alternations) the fixpoint took.
#[derive(Clone, Debug)]
pub struct Refined {
    pub support: SupportFunction,
    pub sweeps: usize,
}

pub(crate) fn ps(frame: &Frame, mask: u32) -> PropSet {
    frame.full().with_mask(mask)
}

/// Default sweep budget before refinement gives up.
pub fn default_sweep_cap(frame: &Frame) -> usize {
    10 * frame.subset_count()
}

// ---------------------------------------------------------------------------
// Interval-Bayes regime
// ---------------------------------------------------------------------------

/// The minimum of `c(x,y) a + c(x,ybar) (1-a)` over the linear segment; the
/// minimum of a linear function sits at whichever endpoint the slope favors.
fn interval_bayes_value(cy: f64, cybar: f64, alpha: &ProbabilityInterval) -> f64 {
    let a = if cy >= cybar {
        alpha.lower
    } else {
        alpha.upper
    };
    cy * a + cybar * (1.0 - a)
}

/// Unconditional lower bound on `p(x)` from total probability over `y` and
/// its complement, minimized over the prior's interval for `p(y)`.
///
/// The condition must be a proper, nonempty subset: the complement term is
/// undefined otherwise. For a rule conditioned on the full frame the bound
/// is simply the rule's own lower bound, and refinement applies it directly.
pub fn bayes_lower_bound(
    b: &SupportFunction,
    rules: &RuleBase,
    x: &PropSet,
    y: &PropSet,
) -> Result<f64> {
    b.frame().ensure_same(rules.frame())?;
    b.frame().ensure_same(x.frame())?;
    b.frame().ensure_same(y.frame())?;
    if y.is_empty() {
        return Err(Error::EmptyAntecedent);
    }
    if y.is_full() {
        return Err(Error::ValidationError(
            "the interval-Bayes bound needs a proper condition; given the full \
             frame the bound is the rule's own lower bound"
                .into(),
        ));
    }
    let alpha = implied_interval(b, y)?;
    let cy = rules.lookup(x, y)?;
    let cybar = rules.lookup(x, &y.complement())?;
    Ok(interval_bayes_value(cy, cybar, &alpha))
}

/// Checks that the support already dominates every interval-Bayes bound the
/// rules imply, plus plain monotonicity (the bound a trivially-conditioned
/// pair reduces to). Violations are keyed by (antecedent, consequent) with
/// the strongest requirement kept.
pub fn check_bayes(b: &SupportFunction, rules: &RuleBase) -> Result<ConsistencyReport> {
    b.frame().ensure_same(rules.frame())?;
    let frame = b.frame();
    let full = frame.full_mask();
    let values = b.values();
    let mut worst: BTreeMap<(u32, u32), f64> = BTreeMap::new();
    let mut pairs_checked = 0usize;

    for y in rules.antecedent_masks() {
        if y == full {
            // A table conditioned on the full frame bounds p(x) directly.
            for x in 0..=full {
                pairs_checked += 1;
                let bound = rules.lookup_mask(x, full);
                if values[x as usize] < bound - API_TOLERANCE {
                    record_requirement(&mut worst, y, x, bound);
                }
            }
            continue;
        }
        let ybar = full & !y;
        let lo = values[y as usize];
        let hi = 1.0 - values[ybar as usize];
        if lo > hi + INTERNAL_TOLERANCE {
            return Err(Error::EmptyInterval {
                lower: lo,
                upper: hi,
            });
        }
        let alpha = ProbabilityInterval {
            lower: lo.min(hi),
            upper: hi,
        };
        for x in 0..=full {
            pairs_checked += 1;
            let cy = rules.lookup_mask(x, y);
            let cybar = rules.lookup_mask(x, ybar);
            let bound = interval_bayes_value(cy, cybar, &alpha);
            if values[x as usize] < bound - API_TOLERANCE {
                record_requirement(&mut worst, y, x, bound);
            }
        }
    }

    // Pairs with only trivial conditional knowledge reduce to monotonicity:
    // the bound for (x, y) with y inside x is b(y) itself.
    for x in 1..=full {
        let mut y = x & (x.wrapping_sub(1));
        loop {
            if y == 0 {
                break;
            }
            pairs_checked += 1;
            if values[x as usize] < values[y as usize] - API_TOLERANCE {
                record_requirement(&mut worst, y, x, values[y as usize]);
            }
            y = x & (y.wrapping_sub(1));
        }
    }

    let violations = worst
        .into_iter()
        .map(|((y, x), required)| Violation {
            consequent: ps(frame, x),
            antecedent: ps(frame, y),
            required,
            achieved: values[x as usize],
        })
        .collect();
    Ok(ConsistencyReport::new(violations, pairs_checked))
}

fn record_requirement(worst: &mut BTreeMap<(u32, u32), f64>, y: u32, x: u32, required: f64) {
    let slot = worst.entry((y, x)).or_insert(required);
    if required > *slot {
        *slot = required;
    }
}

/// Tightens the support to the least fixpoint of the interval-Bayes bounds
/// (over the rule base's stored conditions) interleaved with monotone
/// closure, using the default sweep budget.
pub fn refine_bayes(b: &SupportFunction, rules: &RuleBase) -> Result<SupportFunction> {
    refine_bayes_bounded(b, rules, default_sweep_cap(b.frame())).map(|r| r.support)
}

/// [`refine_bayes`] with an explicit sweep budget and a sweep count in the
/// result.
pub fn refine_bayes_bounded(
    b: &SupportFunction,
    rules: &RuleBase,
    max_sweeps: usize,
) -> Result<Refined> {
    b.frame().ensure_same(rules.frame())?;
    let frame = b.frame();
    let full = frame.full_mask();
    let mut values = b.values().to_vec();
    let antecedents: Vec<u32> = rules.antecedent_masks().collect();
    let mut sweeps = 0usize;
    let mut changed_any = false;
    loop {
        if sweeps >= max_sweeps {
            return Err(Error::NonConvergence(sweeps));
        }
        sweeps += 1;
        let mut changed = false;
        ensure_pairwise_coherent(frame, &values)?;
        for &y in &antecedents {
            if y == full {
                for x in 0..=full {
                    raise(&mut values, x, rules.lookup_mask(x, full), &mut changed);
                }
                continue;
            }
            let ybar = full & !y;
            let lo = values[y as usize];
            let hi = (1.0 - values[ybar as usize]).max(lo);
            let alpha = ProbabilityInterval { lower: lo, upper: hi };
            for x in 0..=full {
                let cy = rules.lookup_mask(x, y);
                let cybar = rules.lookup_mask(x, ybar);
                let bound = interval_bayes_value(cy, cybar, &alpha);
                raise(&mut values, x, bound, &mut changed);
            }
        }
        monotone_closure_tracking(&mut values, &mut changed);
        if !changed {
            break;
        }
        changed_any = true;
    }
    ensure_pairwise_coherent(frame, &values)?;
    let kind = if changed_any {
        SupportKind::RawBounds
    } else {
        b.kind()
    };
    Ok(Refined {
        support: SupportFunction::from_values(frame.clone(), kind, values),
        sweeps,
    })
}

/// Applies `bound` to `values[x]` when it improves on the slot by more than
/// the internal tolerance. The gate keeps fixpoints exact: a second run sees
/// no improvement above tolerance and returns its input bit-for-bit.
pub(crate) fn raise(values: &mut [f64], x: u32, bound: f64, changed: &mut bool) {
    let slot = &mut values[x as usize];
    if bound > *slot + INTERNAL_TOLERANCE {
        *slot = bound.min(1.0);
        *changed = true;
    }
}

/// Monotone closure in place, flagging any change. Exact comparisons: on an
/// already-monotone array this touches nothing.
pub(crate) fn monotone_closure_tracking(values: &mut [f64], changed: &mut bool) {
    let bits = values.len().trailing_zeros();
    for bit in 0..bits {
        let step = 1usize << bit;
        for x in 0..values.len() {
            if x & step != 0 {
                let sub = values[x ^ step];
                if sub > values[x] {
                    values[x] = sub;
                    *changed = true;
                }
            }
        }
    }
}

/// Lower bounds on a set and its complement may not overlap 1.
pub(crate) fn ensure_pairwise_coherent(frame: &Frame, values: &[f64]) -> Result<()> {
    let full = frame.full_mask();
    for x in 0..=full {
        let sum = values[x as usize] + values[(full & !x) as usize];
        if sum > 1.0 + API_TOLERANCE {
            return Err(Error::Inconsistent(format!(
                "lower bounds on {} and its complement sum to {sum:.12}, above 1",
                ps(frame, x)
            )));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Optimistic regime
// ---------------------------------------------------------------------------

/// Conditional lower bound under the optimistic reading:
/// `(b(x or ybar) - b(ybar)) / (1 - b(ybar))`. Equals the belief of `x`
/// after Dempster-combining the support's mass with certainty on `y`.
pub fn optimistic_lower_conditional(
    b: &SupportFunction,
    x: &PropSet,
    y: &PropSet,
) -> Result<f64> {
    b.frame().ensure_same(x.frame())?;
    b.frame().ensure_same(y.frame())?;
    if y.is_empty() {
        return Err(Error::EmptyAntecedent);
    }
    let ybar = y.complement();
    let byb = b.value(&ybar)?;
    if byb >= 1.0 - INTERNAL_TOLERANCE {
        return Err(Error::CertainComplement);
    }
    let num = b.value(&x.join(&ybar)?)? - byb;
    Ok((num / (1.0 - byb)).clamp(0.0, 1.0))
}

/// Checks every stored nontrivial pair against the optimistic conditional.
/// Pairs whose condition's complement is already certain are vacuous.
pub fn check_optimistic(b: &SupportFunction, rules: &RuleBase) -> Result<ConsistencyReport> {
    b.frame().ensure_same(rules.frame())?;
    let frame = b.frame();
    let full = frame.full_mask();
    let values = b.values();
    let mut violations = Vec::new();
    let mut pairs_checked = 0usize;
    for (x, y, required) in rules.nontrivial_pairs() {
        pairs_checked += 1;
        let ybar = full & !y;
        let byb = values[ybar as usize];
        if byb >= 1.0 - INTERNAL_TOLERANCE {
            continue;
        }
        let achieved = ((values[(x | ybar) as usize] - byb) / (1.0 - byb)).clamp(0.0, 1.0);
        if achieved < required - API_TOLERANCE {
            violations.push(Violation {
                consequent: ps(frame, x),
                antecedent: ps(frame, y),
                required,
                achieved,
            });
        }
    }
    Ok(ConsistencyReport::new(violations, pairs_checked))
}

/// Optimistic refinement to the least fixpoint with the default budget.
pub fn refine_optimistic(b: &SupportFunction, rules: &RuleBase) -> Result<SupportFunction> {
    refine_optimistic_bounded(b, rules, default_sweep_cap(b.frame())).map(|r| r.support)
}

/// Raises `b(z)` for every `z` containing a stored condition's complement
/// until each optimistic conditional meets its rule, interleaved with
/// monotone closure; sweep-capped.
pub fn refine_optimistic_bounded(
    b: &SupportFunction,
    rules: &RuleBase,
    max_sweeps: usize,
) -> Result<Refined> {
    b.frame().ensure_same(rules.frame())?;
    let frame = b.frame();
    let full = frame.full_mask();
    let mut values = b.values().to_vec();
    let antecedents: Vec<u32> = rules.antecedent_masks().collect();
    let mut sweeps = 0usize;
    let mut changed_any = false;
    loop {
        if sweeps >= max_sweeps {
            return Err(Error::NonConvergence(sweeps));
        }
        sweeps += 1;
        let mut changed = false;
        ensure_pairwise_coherent(frame, &values)?;
        for &y in &antecedents {
            let ybar = full & !y;
            let byb = values[ybar as usize];
            if byb >= 1.0 - INTERNAL_TOLERANCE {
                continue; // conditioning on y is vacuous here
            }
            // z = ybar | s for every s inside y, ascending.
            let mut s = 0u32;
            loop {
                let z = ybar | s;
                let c = rules.lookup_mask(s, y);
                if c > 0.0 {
                    let bound = byb * (1.0 - c) + c;
                    raise(&mut values, z, bound, &mut changed);
                }
                s = s.wrapping_sub(y) & y;
                if s == 0 {
                    break;
                }
            }
        }
        monotone_closure_tracking(&mut values, &mut changed);
        if !changed {
            break;
        }
        changed_any = true;
    }
    ensure_pairwise_coherent(frame, &values)?;
    let kind = if changed_any {
        SupportKind::RawBounds
    } else {
        b.kind()
    };
    Ok(Refined {
        support: SupportFunction::from_values(frame.clone(), kind, values),
        sweeps,
    })
}

/// Alternates optimistic refinement and the cheap coherence closure until
/// neither changes the support. This chaining is what lets rules act
/// contrapositively (raising belief in the negated condition), which the
/// optimistic update alone never does.
pub fn refine_optimistic_with_closure(
    b: &SupportFunction,
    rules: &RuleBase,
    max_alternations: usize,
) -> Result<Refined> {
    let mut current = b.clone();
    let mut alternations = 0usize;
    loop {
        if alternations >= max_alternations {
            return Err(Error::NonConvergence(alternations));
        }
        alternations += 1;
        let refined = refine_optimistic_bounded(&current, rules, default_sweep_cap(b.frame()))?;
        let closed = cheap_closure(&refined.support)?;
        let stable = closed.values() == current.values();
        current = closed;
        if stable {
            return Ok(Refined {
                support: current,
                sweeps: alternations,
            });
        }
    }
}

// ---------------------------------------------------------------------------
// General (worst-case) regime
// ---------------------------------------------------------------------------

/// The unrestricted conditional lower bound
/// `b(x and y) / (b(x and y) + 1 - b(x or ybar))`, exact for belief
/// functions. A vanishing denominator means every compatible distribution
/// with `p(y) > 0` puts all of `y`'s probability inside `x`, so the bound
/// is 1.
fn general_value(values: &[f64], x: u32, y: u32, full: u32) -> f64 {
    let num = values[(x & y) as usize];
    let denom = num + 1.0 - values[(x | (full & !y)) as usize];
    if denom <= INTERNAL_TOLERANCE {
        1.0
    } else {
        (num / denom).clamp(0.0, 1.0)
    }
}

/// Verifies the input decomposes into a nonnegative mass assignment, which
/// is the precondition for the general bound's exactness.
fn ensure_belief(b: &SupportFunction) -> Result<()> {
    if b.kind() == SupportKind::Belief {
        return Ok(());
    }
    b.to_mass().map(|_| ())
}

/// Worst-case conditional lower bound; exact for belief functions.
pub fn general_lower_conditional(b: &SupportFunction, x: &PropSet, y: &PropSet) -> Result<f64> {
    b.frame().ensure_same(x.frame())?;
    b.frame().ensure_same(y.frame())?;
    if y.is_empty() {
        return Err(Error::EmptyAntecedent);
    }
    ensure_belief(b)?;
    let ybar = y.complement();
    if b.value(&ybar)? >= 1.0 - INTERNAL_TOLERANCE {
        return Err(Error::CertainComplement);
    }
    Ok(general_value(
        b.values(),
        x.mask(),
        y.mask(),
        b.frame().full_mask(),
    ))
}

/// Checks every stored nontrivial pair against the general conditional.
/// Pairs whose condition's complement is certain are vacuously satisfied.
pub fn check_general(b: &SupportFunction, rules: &RuleBase) -> Result<ConsistencyReport> {
    b.frame().ensure_same(rules.frame())?;
    ensure_belief(b)?;
    let frame = b.frame();
    let full = frame.full_mask();
    let values = b.values();
    let mut violations = Vec::new();
    let mut pairs_checked = 0usize;
    for (x, y, required) in rules.nontrivial_pairs() {
        pairs_checked += 1;
        if values[(full & !y) as usize] >= 1.0 - INTERNAL_TOLERANCE {
            continue;
        }
        let achieved = general_value(values, x, y, full);
        if achieved < required - API_TOLERANCE {
            violations.push(Violation {
                consequent: ps(frame, x),
                antecedent: ps(frame, y),
                required,
                achieved,
            });
        }
    }
    Ok(ConsistencyReport::new(violations, pairs_checked))
}

// ---------------------------------------------------------------------------
// Cheap coherence closure
// ---------------------------------------------------------------------------

/// Sound coherence tightening without linear programming: the fixpoint of
/// monotone closure plus, for every disjoint pair `(x, y)` with join `s`:
///
/// * `b(s) >= b(x) + b(y)` (superadditivity), and
/// * `b(x) >= b(s) - (1 - b(ybar))`: removing `y` from `s` costs at most
///   `y`'s upper probability.
///
/// Belief functions and envelopes already satisfy both and pass through
/// unchanged. Raises never exceed the exact coherent hull, so chaining this
/// with any sound refinement stays sound.
pub fn cheap_closure(b: &SupportFunction) -> Result<SupportFunction> {
    let frame = b.frame();
    let full = frame.full_mask();
    let mut values = b.values().to_vec();
    let cap = default_sweep_cap(frame);
    let mut sweeps = 0usize;
    let mut changed_any = false;
    loop {
        if sweeps >= cap {
            return Err(Error::NonConvergence(sweeps));
        }
        sweeps += 1;
        let mut changed = false;
        monotone_closure_tracking(&mut values, &mut changed);
        for s in 1..=full {
            // Nonempty disjoint pairs (x, y) with x | y = s, each once.
            let mut x = s & (s.wrapping_sub(1));
            while x != 0 {
                let y = s & !x;
                if x < y {
                    let join = values[x as usize] + values[y as usize];
                    raise(&mut values, s, join, &mut changed);
                    let from_y = values[s as usize] - (1.0 - values[(full & !y) as usize]);
                    raise(&mut values, x, from_y, &mut changed);
                    let from_x = values[s as usize] - (1.0 - values[(full & !x) as usize]);
                    raise(&mut values, y, from_x, &mut changed);
                }
                x = s & (x.wrapping_sub(1));
            }
        }
        for v in &values {
            if *v > 1.0 + API_TOLERANCE {
                return Err(Error::Inconsistent(format!(
                    "coherence closure pushed a lower bound to {v:.12}, above 1"
                )));
            }
        }
        ensure_pairwise_coherent(frame, &values)?;
        if !changed {
            break;
        }
        changed_any = true;
    }
    for v in values.iter_mut() {
        *v = v.clamp(0.0, 1.0);
    }
    let kind = if changed_any {
        SupportKind::RawBounds
    } else {
        b.kind()
    };
    Ok(SupportFunction::from_values(frame.clone(), kind, values))
}
