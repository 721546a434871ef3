//! Partition-based refinement and mass-level conditionalization.
//!
//! Two machines built on case analysis over set partitions:
//!
//! * the **partition bound**: for any partition of the frame, total
//!   probability gives `p(x) >= sum over cells u of b(u) c(x,u)`, plus the
//!   unassigned remainder `1 - sum b(u)` priced at the worst cell's rate;
//!   [`partition_bound`] takes the best partition, [`refine_partition`]
//!   applies it to every subset in one pass;
//! * the **transfer coefficient** `K(y -> x)`: how much of `y`'s mass any
//!   compatible refinement must concede to `x`, the best over partitions of
//!   `y` of the worst cell's conditional mass on `x`;
//!   [`conditionalize_mass`] uses it to redistribute each focal element's
//!   mass to the strongest conclusions the rules force.
//!
//! Partition enumeration is Bell-number work, so both machines take a
//! carrier-size cap (default [`DEFAULT_PARTITION_CAP`] atoms).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::evidence::{MassFunction, SupportFunction, SupportKind};
use crate::interval::{ensure_pairwise_coherent, monotone_closure_tracking, ps, raise, Refined};
use crate::lattice::{for_each_partition, Frame, PropSet, DEFAULT_PARTITION_CAP};
use crate::rules::{ConditionalMass, RuleBase};
use crate::API_TOLERANCE;

/// A forced mass transfer: conditioning must move at least `value` of the
/// `source`'s mass into `target` (a proper subset of the source).
#[derive(Clone, Debug)]
pub struct TransferCoefficient {
    pub source: PropSet,
    pub target: PropSet,
    pub value: f64,
}

/// Memoized conditional-mass decompositions, one per partition cell.
struct CellCache<'a> {
    rules: &'a RuleBase,
    frame: &'a Frame,
    cells: BTreeMap<u32, ConditionalMass>,
}

impl<'a> CellCache<'a> {
    fn new(rules: &'a RuleBase, frame: &'a Frame) -> CellCache<'a> {
        CellCache {
            rules,
            frame,
            cells: BTreeMap::new(),
        }
    }

    fn get(&mut self, u: u32) -> Result<&ConditionalMass> {
        if !self.cells.contains_key(&u) {
            let cm = self.rules.conditional_mass(&ps(self.frame, u))?;
            self.cells.insert(u, cm);
        }
        Ok(self.cells.get(&u).expect("just inserted"))
    }
}

// ---------------------------------------------------------------------------
// Partition bound
// ---------------------------------------------------------------------------

/// `sum over cells of b(u) c(x,u) + rho * min over cells of c(x,u)` where
/// `rho` is the probability the cells leave unclaimed.
fn partition_value(values: &[f64], rules: &RuleBase, x: u32, cells: &[u32]) -> f64 {
    let mut total = 0.0;
    let mut claimed = 0.0;
    let mut min_c = f64::INFINITY;
    for &u in cells {
        let c = rules.lookup_mask(x, u);
        let bu = values[u as usize];
        total += bu * c;
        claimed += bu;
        min_c = min_c.min(c);
    }
    total + (1.0 - claimed).max(0.0) * min_c
}

/// Best lower bound on `p(x)` obtainable by case analysis over one
/// partition of the frame, never below `b(x)` itself.
pub fn partition_bound(b: &SupportFunction, rules: &RuleBase, x: &PropSet) -> Result<f64> {
    partition_bound_capped(b, rules, x, DEFAULT_PARTITION_CAP)
}

/// [`partition_bound`] with an explicit frame-size cap for the partition
/// enumeration.
pub fn partition_bound_capped(
    b: &SupportFunction,
    rules: &RuleBase,
    x: &PropSet,
    cap: usize,
) -> Result<f64> {
    b.frame().ensure_same(rules.frame())?;
    b.frame().ensure_same(x.frame())?;
    if x.is_empty() {
        return Err(Error::ValidationError(
            "the partition bound needs a nonempty target".into(),
        ));
    }
    let values = b.values();
    let mut best = values[x.mask() as usize];
    for_each_partition(b.frame().full_mask(), cap, |cells| {
        let v = partition_value(values, rules, x.mask(), cells);
        if v > best {
            best = v;
        }
        best < 1.0
    })?;
    Ok(best.clamp(0.0, 1.0))
}

/// Applies the partition bound to every subset in a single pass (all bounds
/// read the *input* support). Iterating to a fixpoint is a separate,
/// optional mode ([`refine_partition_iterated`]): with circular rules a
/// second pass can strengthen the first pass's output further.
pub fn refine_partition(b: &SupportFunction, rules: &RuleBase) -> Result<SupportFunction> {
    refine_partition_capped(b, rules, DEFAULT_PARTITION_CAP)
}

/// [`refine_partition`] with an explicit frame-size cap.
pub fn refine_partition_capped(
    b: &SupportFunction,
    rules: &RuleBase,
    cap: usize,
) -> Result<SupportFunction> {
    b.frame().ensure_same(rules.frame())?;
    let frame = b.frame();
    let full = frame.full_mask();
    let values = b.values();
    let mut out = values.to_vec();
    let mut changed = false;
    // One shared enumeration serves every target: partitions are the outer
    // loop, targets the inner one.
    for_each_partition(full, cap, |cells| {
        for x in 1..full {
            let v = partition_value(values, rules, x, cells);
            raise(&mut out, x, v, &mut changed);
        }
        true
    })?;
    monotone_closure_tracking(&mut out, &mut changed);
    ensure_pairwise_coherent(frame, &out)?;
    let kind = if changed {
        SupportKind::RawBounds
    } else {
        b.kind()
    };
    Ok(SupportFunction::from_values(frame.clone(), kind, out))
}

/// Iterates [`refine_partition_capped`] until a pass changes nothing,
/// reporting the number of passes. Needed when rules chain through each
/// other's conclusions.
pub fn refine_partition_iterated(
    b: &SupportFunction,
    rules: &RuleBase,
    cap: usize,
    max_passes: usize,
) -> Result<Refined> {
    let mut current = b.clone();
    let mut passes = 0usize;
    loop {
        if passes >= max_passes {
            return Err(Error::NonConvergence(passes));
        }
        passes += 1;
        let next = refine_partition_capped(&current, rules, cap)?;
        let stable = next.values() == current.values();
        current = next;
        if stable {
            return Ok(Refined {
                support: current,
                sweeps: passes,
            });
        }
    }
}

// ---------------------------------------------------------------------------
// Transfer coefficients
// ---------------------------------------------------------------------------

/// How much of `y`'s mass conditioning must transfer into `x`: the best
/// over partitions of `y` of the worst cell's conditional mass on `x`'s
/// trace. `x` must be a proper subset of `y`.
pub fn transfer_coefficient(rules: &RuleBase, x: &PropSet, y: &PropSet) -> Result<f64> {
    transfer_coefficient_capped(rules, x, y, DEFAULT_PARTITION_CAP)
}

/// [`transfer_coefficient`] with an explicit source-size cap.
pub fn transfer_coefficient_capped(
    rules: &RuleBase,
    x: &PropSet,
    y: &PropSet,
    cap: usize,
) -> Result<f64> {
    rules.frame().ensure_same(x.frame())?;
    rules.frame().ensure_same(y.frame())?;
    if y.is_empty() {
        return Err(Error::EmptyAntecedent);
    }
    if x.mask() & !y.mask() != 0 || x.mask() == y.mask() {
        return Err(Error::ValidationError(
            "the transfer target must be a proper subset of the source".into(),
        ));
    }
    let frame = rules.frame();
    let mut cache = CellCache::new(rules, frame);
    let mut best = 0.0f64;
    let mut failure = None;
    for_each_partition(y.mask(), cap, |cells| {
        let mut val = f64::INFINITY;
        for &u in cells {
            let cm = match cache.get(u) {
                Ok(cm) => cm,
                Err(e) => {
                    failure = Some(e);
                    return false;
                }
            };
            val = val.min(cm.projected_weight_mask(x.mask()));
            if val <= best {
                break;
            }
        }
        if val > best {
            best = val;
        }
        best < 1.0
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(best)
}

/// All positive transfer coefficients out of `y`, ascending by target.
pub fn transfer_coefficients(rules: &RuleBase, y: &PropSet) -> Result<Vec<TransferCoefficient>> {
    transfer_coefficients_capped(rules, y, DEFAULT_PARTITION_CAP)
}

/// [`transfer_coefficients`] with an explicit source-size cap.
pub fn transfer_coefficients_capped(
    rules: &RuleBase,
    y: &PropSet,
    cap: usize,
) -> Result<Vec<TransferCoefficient>> {
    rules.frame().ensure_same(y.frame())?;
    if y.is_empty() {
        return Err(Error::EmptyAntecedent);
    }
    let frame = rules.frame();
    let mut cache = CellCache::new(rules, frame);
    let profile = transfer_profile(&mut cache, y.mask(), cap)?;
    Ok(profile
        .into_iter()
        .filter(|(_, v)| *v > 0.0)
        .map(|(z, value)| TransferCoefficient {
            source: y.clone(),
            target: ps(frame, z),
            value,
        })
        .collect())
}

/// Every target with a positive transfer coefficient out of `y`, keyed by
/// mask. A target's trace on each cell must be focal for the cell's
/// conditional mass, so enumerating one focal element per cell covers all
/// positive targets; the coefficient is the best such product's minimum.
fn transfer_profile(
    cache: &mut CellCache<'_>,
    y: u32,
    cap: usize,
) -> Result<BTreeMap<u32, f64>> {
    let mut profile: BTreeMap<u32, f64> = BTreeMap::new();
    let mut failure = None;
    for_each_partition(y, cap, |cells| {
        let mut lists: Vec<Vec<(u32, f64)>> = Vec::with_capacity(cells.len());
        for &u in cells {
            match cache.get(u) {
                Ok(cm) => lists.push(
                    cm.mass()
                        .weights_by_mask()
                        .iter()
                        .map(|(m, w)| (*m, *w))
                        .collect(),
                ),
                Err(e) => {
                    failure = Some(e);
                    return false;
                }
            }
        }
        let mut idx = vec![0usize; lists.len()];
        'combos: loop {
            let mut z = 0u32;
            let mut val = f64::INFINITY;
            for (i, list) in lists.iter().enumerate() {
                let (s, w) = list[idx[i]];
                z |= s;
                val = val.min(w);
            }
            if z != y && val > 0.0 {
                let slot = profile.entry(z).or_insert(0.0);
                if val > *slot {
                    *slot = val;
                }
            }
            let mut i = 0;
            loop {
                if i == lists.len() {
                    break 'combos;
                }
                idx[i] += 1;
                if idx[i] < lists[i].len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
        true
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(profile)
}

// ---------------------------------------------------------------------------
// Mass conditionalization
// ---------------------------------------------------------------------------

/// Redistributes each focal element's mass to the conclusions the rules
/// force: `y` sends `m(y) K(y -> z)` to each proper subset `z` and keeps
/// the remainder. Focal elements with no stored condition inside them have
/// no positive transfers and pass through untouched, so a vacuous rule base
/// is an exact identity.
///
/// Fails with [`Error::NegativeMass`] when the transfers out of one focal
/// element claim more than its mass; the overflow is reported, never
/// clamped away.
pub fn conditionalize_mass(m: &MassFunction, rules: &RuleBase) -> Result<MassFunction> {
    conditionalize_mass_capped(m, rules, DEFAULT_PARTITION_CAP)
}

/// [`conditionalize_mass`] with an explicit focal-size cap.
pub fn conditionalize_mass_capped(
    m: &MassFunction,
    rules: &RuleBase,
    cap: usize,
) -> Result<MassFunction> {
    m.frame().ensure_same(rules.frame())?;
    let frame = m.frame();
    let antecedents: Vec<u32> = rules.antecedent_masks().collect();
    let mut cache = CellCache::new(rules, frame);
    let mut out: BTreeMap<u32, f64> = BTreeMap::new();
    for (&y, &weight) in m.weights_by_mask() {
        let relevant = antecedents.iter().any(|&a| a & !y == 0);
        if !relevant {
            *out.entry(y).or_insert(0.0) += weight;
            continue;
        }
        let profile = transfer_profile(&mut cache, y, cap)?;
        let claimed: f64 = profile.values().sum();
        if claimed > 1.0 + API_TOLERANCE {
            return Err(Error::NegativeMass(format!(
                "transfers out of {} claim {claimed:.12} of its mass",
                ps(frame, y)
            )));
        }
        let mut moved = 0.0;
        for (&z, &k) in &profile {
            let t = weight * k;
            *out.entry(z).or_insert(0.0) += t;
            moved += t;
        }
        // weight - moved closes this focal element's books against the
        // rounding of its own flows; the grand total then stays within an
        // ulp of the input total (bit-for-bit on flows that round cleanly,
        // e.g. the worked scenarios).
        let residual = weight - moved;
        if residual > 0.0 {
            *out.entry(y).or_insert(0.0) += residual;
        }
    }
    MassFunction::from_mask_map(frame.clone(), out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::Rule;
    use approx::assert_relative_eq;

    fn pq_frame() -> Frame {
        Frame::new(["pq", "p~q", "~pq", "~p~q"]).unwrap()
    }

    fn set(frame: &Frame, atoms: &[&str]) -> PropSet {
        frame.subset(atoms).unwrap()
    }

    fn forward_prior(frame: &Frame) -> SupportFunction {
        let p = set(frame, &["pq", "p~q"]);
        MassFunction::new(frame, [(&p, 0.8), (&frame.full(), 0.2)])
            .unwrap()
            .to_belief()
    }

    fn forward_mass(frame: &Frame) -> MassFunction {
        let p = set(frame, &["pq", "p~q"]);
        MassFunction::new(frame, [(&p, 0.8), (&frame.full(), 0.2)]).unwrap()
    }

    fn case_split_rules(frame: &Frame) -> RuleBase {
        let p = set(frame, &["pq", "p~q"]);
        let q = set(frame, &["pq", "~pq"]);
        RuleBase::new(
            frame,
            &[
                Rule::new(&q, &p, 0.9).unwrap(),
                Rule::new(&q, &p.complement(), 0.3).unwrap(),
            ],
        )
        .unwrap()
    }

    fn single_rule(frame: &Frame) -> RuleBase {
        let p = set(frame, &["pq", "p~q"]);
        let q = set(frame, &["pq", "~pq"]);
        RuleBase::new(frame, &[Rule::new(&q, &p, 0.9).unwrap()]).unwrap()
    }

    #[test]
    fn partition_bound_on_vacuous_rules_returns_the_prior() {
        let frame = pq_frame();
        let b = forward_prior(&frame);
        let rules = RuleBase::vacuous(&frame);
        let p = set(&frame, &["pq", "p~q"]);
        let q = set(&frame, &["pq", "~pq"]);
        assert_relative_eq!(partition_bound(&b, &rules, &p).unwrap(), 0.8);
        assert_relative_eq!(partition_bound(&b, &rules, &q).unwrap(), 0.0);
    }

    #[test]
    fn partition_bound_case_splits_a_vacuous_prior() {
        let frame = pq_frame();
        let b = SupportFunction::vacuous(&frame);
        let rules = case_split_rules(&frame);
        let q = set(&frame, &["pq", "~pq"]);
        assert_relative_eq!(partition_bound(&b, &rules, &q).unwrap(), 0.3, epsilon = 1e-12);
    }

    #[test]
    fn partition_bound_mixes_prior_mass_with_the_worst_rate() {
        let frame = pq_frame();
        let b = forward_prior(&frame);
        let rules = case_split_rules(&frame);
        let q = set(&frame, &["pq", "~pq"]);
        // 0.8 * 0.9 + 0.2 * min(0.9, 0.3) over the condition/complement split.
        assert_relative_eq!(partition_bound(&b, &rules, &q).unwrap(), 0.78, epsilon = 1e-12);
    }

    #[test]
    fn partition_bound_guards_its_inputs() {
        let frame = pq_frame();
        let b = forward_prior(&frame);
        let rules = RuleBase::vacuous(&frame);
        assert!(matches!(
            partition_bound(&b, &rules, &frame.empty()),
            Err(Error::ValidationError(_))
        ));

        let names: Vec<String> = (0..11).map(|i| format!("a{i}")).collect();
        let wide = Frame::new(names).unwrap();
        let wide_b = SupportFunction::vacuous(&wide);
        let wide_rules = RuleBase::vacuous(&wide);
        assert!(matches!(
            partition_bound(&wide_b, &wide_rules, &wide.full()),
            Err(Error::FrameTooLarge { cap: 10, .. })
        ));
        assert!(partition_bound_capped(&wide_b, &wide_rules, &wide.full(), 11).is_ok());
    }

    #[test]
    fn refine_partition_tightens_every_subset_at_once() {
        let frame = pq_frame();
        let b = forward_prior(&frame);
        let rules = case_split_rules(&frame);
        let refined = refine_partition(&b, &rules).unwrap();
        let q = set(&frame, &["pq", "~pq"]);
        let p = set(&frame, &["pq", "p~q"]);
        assert_relative_eq!(refined.value(&q).unwrap(), 0.78, epsilon = 1e-12);
        assert_relative_eq!(refined.value(&p).unwrap(), 0.8, epsilon = 1e-12);
        assert!(refined.is_more_specific_than(&b).unwrap());

        let single = refine_partition(&b, &single_rule(&frame)).unwrap();
        assert_relative_eq!(single.value(&q).unwrap(), 0.72, epsilon = 1e-12);
    }

    #[test]
    fn refine_partition_is_an_exact_identity_on_vacuous_rules() {
        let frame = pq_frame();
        let b = forward_prior(&frame);
        let refined = refine_partition(&b, &RuleBase::vacuous(&frame)).unwrap();
        assert_eq!(refined.values(), b.values());
        assert_eq!(refined.kind(), b.kind());
    }

    #[test]
    fn iterated_refinement_chains_circular_rules() {
        let frame = pq_frame();
        let b = forward_prior(&frame);
        let rules = case_split_rules(&frame);
        let out = refine_partition_iterated(&b, &rules, DEFAULT_PARTITION_CAP, 64).unwrap();
        let again = refine_partition(&out.support, &rules).unwrap();
        assert_eq!(again.values(), out.support.values());
        assert!(out.sweeps >= 1);
    }

    #[test]
    fn transfer_coefficients_match_the_worked_cases() {
        let frame = pq_frame();
        let rules = single_rule(&frame);
        let p = set(&frame, &["pq", "p~q"]);
        let pq = set(&frame, &["pq"]);
        let pnq = set(&frame, &["p~q"]);
        let qpbar = set(&frame, &["pq", "~pq", "~p~q"]);
        assert_relative_eq!(transfer_coefficient(&rules, &pq, &p).unwrap(), 0.9);
        assert_relative_eq!(transfer_coefficient(&rules, &pnq, &p).unwrap(), 0.0);
        // Partitioning the frame into the condition and its complement forces
        // mass toward "consequent or complement".
        assert_relative_eq!(
            transfer_coefficient(&rules, &qpbar, &frame.full()).unwrap(),
            0.9
        );

        let vacuous = RuleBase::vacuous(&frame);
        assert_relative_eq!(transfer_coefficient(&vacuous, &pq, &p).unwrap(), 0.0);
    }

    #[test]
    fn transfer_coefficient_guards_its_inputs() {
        let frame = pq_frame();
        let rules = single_rule(&frame);
        let p = set(&frame, &["pq", "p~q"]);
        let q = set(&frame, &["pq", "~pq"]);
        assert!(matches!(
            transfer_coefficient(&rules, &p, &p),
            Err(Error::ValidationError(_))
        ));
        assert!(matches!(
            transfer_coefficient(&rules, &q, &p),
            Err(Error::ValidationError(_))
        ));
        assert!(matches!(
            transfer_coefficient(&rules, &p, &frame.empty()),
            Err(Error::EmptyAntecedent)
        ));
    }

    #[test]
    fn transfer_profiles_list_only_positive_targets() {
        let frame = pq_frame();
        let rules = single_rule(&frame);
        let theta = frame.full();
        let coeffs = transfer_coefficients(&rules, &theta).unwrap();
        let qpbar = set(&frame, &["pq", "~pq", "~p~q"]);
        assert_eq!(coeffs.len(), 1);
        assert_eq!(coeffs[0].target, qpbar);
        assert_relative_eq!(coeffs[0].value, 0.9);

        let p = set(&frame, &["pq", "p~q"]);
        let coeffs = transfer_coefficients(&rules, &p).unwrap();
        assert_eq!(coeffs.len(), 1);
        assert_eq!(coeffs[0].target, set(&frame, &["pq"]));
        assert_relative_eq!(coeffs[0].value, 0.9);
    }

    #[test]
    fn conditionalization_redistributes_the_forward_scenario() {
        let frame = pq_frame();
        let m = forward_mass(&frame);
        let rules = single_rule(&frame);
        let out = conditionalize_mass(&m, &rules).unwrap();
        let pq = set(&frame, &["pq"]);
        let p = set(&frame, &["pq", "p~q"]);
        let qpbar = set(&frame, &["pq", "~pq", "~p~q"]);
        let theta = frame.full();
        assert_relative_eq!(out.weight(&pq).unwrap(), 0.72, epsilon = 1e-12);
        assert_relative_eq!(out.weight(&p).unwrap(), 0.08, epsilon = 1e-12);
        assert_relative_eq!(out.weight(&qpbar).unwrap(), 0.18, epsilon = 1e-12);
        assert_relative_eq!(out.weight(&theta).unwrap(), 0.02, epsilon = 1e-12);
        let total: f64 = out.focal_elements().map(|(_, w)| w).sum();
        assert_eq!(total, 1.0, "redistribution must conserve mass exactly");

        let belief = out.to_belief();
        assert_relative_eq!(belief.value(&qpbar).unwrap(), 0.9, epsilon = 1e-12);
    }

    #[test]
    fn categorical_rules_move_the_whole_focal_element() {
        let frame = Frame::new(["a", "b", "c"]).unwrap();
        let y = set(&frame, &["a", "b"]);
        let a = set(&frame, &["a"]);
        let rules = RuleBase::new(&frame, &[Rule::new(&a, &y, 1.0).unwrap()]).unwrap();
        let m = MassFunction::new(&frame, [(&y, 0.6), (&frame.full(), 0.4)]).unwrap();
        let out = conditionalize_mass(&m, &rules).unwrap();
        assert_relative_eq!(out.weight(&a).unwrap(), 0.6, epsilon = 1e-12);
        assert_relative_eq!(out.weight(&y).unwrap(), 0.0, epsilon = 1e-12);
        // The frame's own mass is forced into "a or c": certainty on a
        // within {a,b} excludes b but says nothing about c.
        let ac = set(&frame, &["a", "c"]);
        assert_relative_eq!(out.weight(&ac).unwrap(), 0.4, epsilon = 1e-12);
    }

    #[test]
    fn vacuous_rules_leave_mass_functions_bitwise_identical() {
        let frame = pq_frame();
        let m = forward_mass(&frame);
        let out = conditionalize_mass(&m, &RuleBase::vacuous(&frame)).unwrap();
        let pairs_in: Vec<(PropSet, f64)> = m.focal_elements().collect();
        let pairs_out: Vec<(PropSet, f64)> = out.focal_elements().collect();
        assert_eq!(pairs_in.len(), pairs_out.len());
        for ((si, wi), (so, wo)) in pairs_in.iter().zip(pairs_out.iter()) {
            assert_eq!(si, so);
            assert_eq!(wi, wo);
        }
    }

    #[test]
    fn overcommitted_transfers_are_reported_not_clamped() {
        // Two categorical-ish rules on disjoint conditions force transfers
        // into overlapping nests of targets whose total exceeds 1.
        let frame = Frame::new(["a", "b", "c", "d"]).unwrap();
        let ab = set(&frame, &["a", "b"]);
        let cd = set(&frame, &["c", "d"]);
        let rules = RuleBase::new(
            &frame,
            &[
                Rule::new(&set(&frame, &["a"]), &ab, 0.9).unwrap(),
                Rule::new(&set(&frame, &["c"]), &cd, 0.9).unwrap(),
            ],
        )
        .unwrap();
        let m = MassFunction::new(&frame, [(&frame.full(), 1.0)]).unwrap();
        assert!(matches!(
            conditionalize_mass(&m, &rules),
            Err(Error::NegativeMass(_))
        ));
    }

    #[test]
    fn transfer_dominates_the_trivial_partition() {
        // K(y -> x) is at least the one-cell partition's conditional mass.
        let frame = pq_frame();
        let rules = single_rule(&frame);
        let p = set(&frame, &["pq", "p~q"]);
        let pq = set(&frame, &["pq"]);
        let cm = rules.conditional_mass(&p).unwrap();
        let k = transfer_coefficient(&rules, &pq, &p).unwrap();
        assert!(k >= cm.projected_weight(&pq).unwrap() - 1e-12);
    }
}
