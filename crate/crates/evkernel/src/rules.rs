//! Conditional rules and rule bases.
//!
//! A [`Rule`] states a lower bound on a conditional probability: "given `y`,
//! `x` holds with probability at least `lower`". A [`RuleBase`] compiles a
//! list of rules into, for each condition `y`, a conditional support function
//! `c(., y)` over the subsets of `y`:
//!
//! - consequents are projected into the condition (`c(x, y) = c(x meet y, y)`),
//! - repeated bounds keep their maximum,
//! - the table is completed to the least monotone function dominating the
//!   supplied bounds, with `c(y, y) = 1` and `c(empty, y) = 0`,
//! - conditions never mentioned fall back to the trivial table
//!   (`1` when `y` implies `x`, else `0`).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::evidence::MassFunction;
use crate::lattice::{subset_diff_in_place, subset_max_in_place, Frame, PropSet};
use crate::{API_TOLERANCE, INTERNAL_TOLERANCE};

/// One conditional lower bound: `p(consequent | antecedent) >= lower`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    consequent: PropSet,
    antecedent: PropSet,
    lower: f64,
}

impl Rule {
    /// Builds a rule with a proper condition (neither empty nor the whole
    /// frame). Unconditional bounds go through [`Rule::unconditional`].
    pub fn new(consequent: &PropSet, antecedent: &PropSet, lower: f64) -> Result<Rule> {
        consequent.frame().ensure_same(antecedent.frame())?;
        if antecedent.is_empty() {
            return Err(Error::EmptyAntecedent);
        }
        if antecedent.is_full() {
            return Err(Error::ValidationError(
                "condition covers the whole frame; use an unconditional rule".to_string(),
            ));
        }
        Self::build(consequent.clone(), antecedent.clone(), lower)
    }

    /// An unconditional lower bound, encoded as a rule whose condition is the
    /// full frame.
    pub fn unconditional(consequent: &PropSet, lower: f64) -> Result<Rule> {
        let full = consequent.frame().full();
        Self::build(consequent.clone(), full, lower)
    }

    fn build(consequent: PropSet, antecedent: PropSet, lower: f64) -> Result<Rule> {
        if !(0.0..=1.0).contains(&lower) {
            return Err(Error::InvalidBound(lower));
        }
        Ok(Rule {
            consequent,
            antecedent,
            lower,
        })
    }

    pub fn consequent(&self) -> &PropSet {
        &self.consequent
    }

    pub fn antecedent(&self) -> &PropSet {
        &self.antecedent
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }
}

/// Per-condition table over the subsets of the condition, stored compactly:
/// `bits[j]` is the frame bit of the condition's `j`-th atom, and `values`
/// is indexed by the compact `2^|y|` sub-lattice.
#[derive(Clone, Debug)]
struct Table {
    bits: Vec<u32>,
    values: Vec<f64>,
}

impl Table {
    fn compact(&self, mask: u32) -> usize {
        let mut idx = 0usize;
        for (j, b) in self.bits.iter().enumerate() {
            idx |= ((mask >> b & 1) as usize) << j;
        }
        idx
    }

    fn expand(&self, idx: usize) -> u32 {
        let mut mask = 0u32;
        for (j, b) in self.bits.iter().enumerate() {
            mask |= ((idx >> j & 1) as u32) << b;
        }
        mask
    }
}

/// A compiled rule base: conditional support functions keyed by condition.
#[derive(Clone, Debug)]
pub struct RuleBase {
    frame: Frame,
    tables: BTreeMap<u32, Table>,
}

impl RuleBase {
    /// Compiles a list of rules. Fails when the rules for one condition
    /// cannot be extended to a monotone conditional support function.
    pub fn new(frame: &Frame, rules: &[Rule]) -> Result<RuleBase> {
        // Group explicit (projected) bounds by condition, max-merging repeats.
        let mut explicit: BTreeMap<u32, BTreeMap<u32, f64>> = BTreeMap::new();
        for rule in rules {
            frame.ensure_same(rule.antecedent.frame())?;
            let y = rule.antecedent.mask();
            let projected = rule.consequent.mask() & y;
            if projected == 0 {
                if rule.lower > INTERNAL_TOLERANCE {
                    return Err(Error::InconsistentRule(format!(
                        "consequent {} is disjoint from condition {}, yet its lower bound is {}",
                        rule.consequent, rule.antecedent, rule.lower
                    )));
                }
                continue;
            }
            let slot = explicit.entry(y).or_default().entry(projected).or_insert(0.0);
            *slot = slot.max(rule.lower);
        }

        let mut tables = BTreeMap::new();
        for (y, bounds) in explicit {
            // An explicit bound strictly below an explicit bound on one of
            // its subsets contradicts monotonicity of conditional support.
            for (x1, v1) in &bounds {
                for (x2, v2) in &bounds {
                    if x1 != x2 && x1 & !x2 == 0 && *v2 < *v1 - INTERNAL_TOLERANCE {
                        return Err(Error::InconsistentRule(format!(
                            "bound {v2} on superset index {x2} is below bound {v1} on subset index {x1} (condition index {y})"
                        )));
                    }
                }
            }
            let bits: Vec<u32> = (0..32).filter(|b| y >> b & 1 == 1).collect();
            let mut table = Table {
                values: vec![0.0; 1 << bits.len()],
                bits,
            };
            for (x, v) in &bounds {
                let idx = table.compact(*x);
                table.values[idx] = table.values[idx].max(*v);
            }
            *table.values.last_mut().expect("non-empty condition") = 1.0;
            subset_max_in_place(&mut table.values);
            tables.insert(y, table);
        }
        Ok(RuleBase {
            frame: frame.clone(),
            tables,
        })
    }

    /// The empty rule base: every condition answers with the trivial table.
    pub fn vacuous(frame: &Frame) -> RuleBase {
        RuleBase {
            frame: frame.clone(),
            tables: BTreeMap::new(),
        }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// True when no condition has a stored table.
    pub fn is_vacuous(&self) -> bool {
        self.tables.is_empty()
    }

    /// Conditions with stored (non-trivial) tables, ascending canonical order.
    pub fn antecedents(&self) -> impl Iterator<Item = PropSet> + '_ {
        self.tables
            .keys()
            .map(|y| self.frame.full().with_mask(*y))
    }

    pub(crate) fn antecedent_masks(&self) -> impl Iterator<Item = u32> + '_ {
        self.tables.keys().copied()
    }

    /// Every stored pair with a positive bound on a proper nonempty subset of
    /// its condition, as `(consequent_mask, condition_mask, bound)`, ascending
    /// by condition then consequent. Pairs outside this shape are trivial:
    /// the bound is 0, or the consequent contains the condition.
    pub(crate) fn nontrivial_pairs(&self) -> Vec<(u32, u32, f64)> {
        let mut out = Vec::new();
        for (y, table) in &self.tables {
            for idx in 1..table.values.len() - 1 {
                let v = table.values[idx];
                if v > 0.0 {
                    out.push((table.expand(idx), *y, v));
                }
            }
        }
        out
    }

    /// The subset of [`Self::nontrivial_pairs`] whose bound strictly exceeds
    /// every strict subset's bound. The rest are implied by those plus
    /// monotonicity, so constraint builders can skip them.
    pub(crate) fn informative_pairs(&self) -> Vec<(u32, u32, f64)> {
        let mut out = Vec::new();
        for (y, table) in &self.tables {
            for idx in 1..table.values.len() - 1 {
                let v = table.values[idx];
                if v <= 0.0 {
                    continue;
                }
                // Closure made values monotone, so immediate predecessors
                // carry the maximum over all strict subsets.
                let mut sub_max = 0.0f64;
                let mut rem = idx;
                while rem != 0 {
                    let bit = rem & rem.wrapping_neg();
                    sub_max = sub_max.max(table.values[idx & !bit]);
                    rem &= rem - 1;
                }
                if v > sub_max {
                    out.push((table.expand(idx), *y, v));
                }
            }
        }
        out
    }

    /// The conditional lower bound `c(x, y)`, honoring the projection
    /// convention `c(x, y) = c(x meet y, y)`.
    pub fn lookup(&self, x: &PropSet, y: &PropSet) -> Result<f64> {
        self.frame.ensure_same(x.frame())?;
        self.frame.ensure_same(y.frame())?;
        if y.is_empty() {
            return Err(Error::EmptyAntecedent);
        }
        Ok(self.lookup_mask(x.mask(), y.mask()))
    }

    /// Mask-level lookup; `y` must be non-empty.
    pub(crate) fn lookup_mask(&self, x: u32, y: u32) -> f64 {
        debug_assert_ne!(y, 0);
        match self.tables.get(&y) {
            Some(t) => t.values[t.compact(x & y)],
            // Trivial table: certain when y implies x, unconstrained otherwise.
            None => {
                if y & !x == 0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// The mass decomposition of `c(., y)` on the subsets of `y`.
    ///
    /// Fails with [`Error::NotABeliefFunction`] when the stored table is not
    /// superadditive enough to come from a mass assignment.
    pub fn conditional_mass(&self, y: &PropSet) -> Result<ConditionalMass> {
        self.frame.ensure_same(y.frame())?;
        if y.is_empty() {
            return Err(Error::EmptyAntecedent);
        }
        let mass = match self.tables.get(&y.mask()) {
            None => {
                let mut weights = BTreeMap::new();
                weights.insert(y.mask(), 1.0);
                MassFunction::from_mask_map(self.frame.clone(), weights)?
            }
            Some(t) => {
                let mut diff = t.values.clone();
                subset_diff_in_place(&mut diff);
                let mut weights = BTreeMap::new();
                for (idx, w) in diff.iter().enumerate().skip(1) {
                    if *w < -API_TOLERANCE {
                        return Err(Error::NotABeliefFunction {
                            set: t.expand(idx) as usize,
                            weight: *w,
                        });
                    }
                    if *w > 0.0 {
                        weights.insert(t.expand(idx), *w);
                    }
                }
                let total: f64 = weights.values().sum();
                for w in weights.values_mut() {
                    *w /= total;
                }
                MassFunction::from_mask_map(self.frame.clone(), weights)?
            }
        };
        Ok(ConditionalMass {
            antecedent: y.clone(),
            mass,
        })
    }
}

/// The mass decomposition of one condition's conditional support function.
/// All focal elements are subsets of the condition.
#[derive(Clone, Debug)]
pub struct ConditionalMass {
    antecedent: PropSet,
    mass: MassFunction,
}

impl ConditionalMass {
    pub fn antecedent(&self) -> &PropSet {
        &self.antecedent
    }

    pub fn mass(&self) -> &MassFunction {
        &self.mass
    }

    /// Weight of `x` under the projection convention
    /// `m_y(x) = m_y(x meet y)`.
    pub fn projected_weight(&self, x: &PropSet) -> Result<f64> {
        let projected = x.meet(&self.antecedent)?;
        self.mass.weight(&projected)
    }

    pub(crate) fn projected_weight_mask(&self, x: u32) -> f64 {
        let projected = x & self.antecedent.mask();
        self.mass
            .weights_by_mask()
            .get(&projected)
            .copied()
            .unwrap_or(0.0)
    }
}
