//! Evidential bodies over a frame: mass functions and support functions.
//!
//! A [`MassFunction`] assigns non-negative weight to focal subsets, summing
//! to 1. Its subset-sum transform is a belief function, the canonical example
//! of a [`SupportFunction`]: a pointwise lower bound on the probability of
//! every proposition. Support functions carry a [`SupportKind`] tag recording
//! how much structure the bounds are known to have.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lattice::{subset_diff_in_place, subset_sum_in_place, Frame, PropSet};
use crate::{API_TOLERANCE, INTERNAL_TOLERANCE};

/// How much structure a [`SupportFunction`]'s values are known to have.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SupportKind {
    /// Subset sums of a mass function (superadditive, monotone).
    Belief,
    /// Pointwise-attained lower envelope of a non-empty set of probability
    /// measures (monotone; attainability certified by the oracle).
    Envelope,
    /// Plain lower bounds with no structural guarantee beyond
    /// `value(empty) = 0` and `value(full) = 1`.
    RawBounds,
}

impl SupportKind {
    /// Stable lower-case name used in reports.
    pub fn name(self) -> &'static str {
        match self {
            SupportKind::Belief => "belief",
            SupportKind::Envelope => "envelope",
            SupportKind::RawBounds => "raw-bounds",
        }
    }
}

/// Lower bounds on the probability of every proposition of a frame, stored
/// densely by canonical subset index.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportFunction {
    frame: Frame,
    kind: SupportKind,
    values: Vec<f64>,
}

impl SupportFunction {
    /// The vacuous belief function: no support for anything short of the
    /// full proposition.
    pub fn vacuous(frame: &Frame) -> SupportFunction {
        let mut values = vec![0.0; frame.subset_count()];
        *values.last_mut().expect("frame is non-empty") = 1.0;
        SupportFunction {
            frame: frame.clone(),
            kind: SupportKind::Belief,
            values,
        }
    }

    /// Raw lower bounds from explicit entries; unmentioned subsets get 0.
    /// Repeated entries keep the largest bound. The full proposition is
    /// always bound by 1.
    pub fn from_lower_bounds<'a, I>(frame: &Frame, entries: I) -> Result<SupportFunction>
    where
        I: IntoIterator<Item = (&'a PropSet, f64)>,
    {
        let mut values = vec![0.0; frame.subset_count()];
        for (set, v) in entries {
            frame.ensure_same(set.frame())?;
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidWeight(v));
            }
            if set.is_empty() && v > INTERNAL_TOLERANCE {
                return Err(Error::ValidationError(format!(
                    "lower bound {v} on the empty proposition"
                )));
            }
            let slot = &mut values[set.mask() as usize];
            *slot = f64::max(*slot, v);
        }
        values[0] = 0.0;
        *values.last_mut().expect("non-empty") = 1.0;
        Ok(SupportFunction {
            frame: frame.clone(),
            kind: SupportKind::RawBounds,
            values,
        })
    }

    /// Internal constructor; debug-checks the shared invariants.
    pub(crate) fn from_values(frame: Frame, kind: SupportKind, values: Vec<f64>) -> SupportFunction {
        debug_assert_eq!(values.len(), frame.subset_count());
        debug_assert!(values[0].abs() <= API_TOLERANCE);
        debug_assert!((values[values.len() - 1] - 1.0).abs() <= API_TOLERANCE);
        debug_assert!(values.iter().all(|v| (-API_TOLERANCE..=1.0 + API_TOLERANCE).contains(v)));
        SupportFunction { frame, kind, values }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn kind(&self) -> SupportKind {
        self.kind
    }

    /// The lower bound for one proposition.
    pub fn value(&self, x: &PropSet) -> Result<f64> {
        self.frame.ensure_same(x.frame())?;
        Ok(self.values[x.mask() as usize])
    }

    /// All lower bounds, indexed by canonical subset index.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn value_at(&self, mask: u32) -> f64 {
        self.values[mask as usize]
    }

    /// Upper bound dual to the lower bound: `1 - value(complement of x)`.
    pub fn plausibility(&self, x: &PropSet) -> Result<f64> {
        self.frame.ensure_same(x.frame())?;
        Ok(1.0 - self.values[(x.complement().mask()) as usize])
    }

    /// Pointwise dominance: `self` is at least as committed as `other`
    /// everywhere (up to internal tolerance).
    pub fn is_more_specific_than(&self, other: &SupportFunction) -> Result<bool> {
        self.frame.ensure_same(&other.frame)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .all(|(a, b)| *a >= *b - INTERNAL_TOLERANCE))
    }

    /// Recovers the mass function whose subset sums are these bounds.
    ///
    /// Fails with [`Error::NotABeliefFunction`] when some subset-difference
    /// weight is negative beyond tolerance; tiny negatives are clamped to 0
    /// and the weights renormalized.
    pub fn to_mass(&self) -> Result<MassFunction> {
        let mut diff = self.values.clone();
        subset_diff_in_place(&mut diff);
        let mut weights = BTreeMap::new();
        for (mask, w) in diff.iter().enumerate().skip(1) {
            if *w < -API_TOLERANCE {
                return Err(Error::NotABeliefFunction {
                    set: mask,
                    weight: *w,
                });
            }
            if *w > 0.0 {
                weights.insert(mask as u32, *w);
            }
        }
        let total: f64 = weights.values().sum();
        if (total - 1.0).abs() > 0.0 {
            for w in weights.values_mut() {
                *w /= total;
            }
        }
        MassFunction::from_mask_map(self.frame.clone(), weights)
    }
}

/// A basic probability assignment: non-negative weights on focal subsets,
/// summing to 1, with nothing on the empty set. Stored sparsely.
#[derive(Clone, Debug, PartialEq)]
pub struct MassFunction {
    frame: Frame,
    weights: BTreeMap<u32, f64>,
}

impl MassFunction {
    /// Builds a mass function from explicit entries. Weights for the same
    /// subset accumulate; zero weights are dropped.
    pub fn new<'a, I>(frame: &Frame, entries: I) -> Result<MassFunction>
    where
        I: IntoIterator<Item = (&'a PropSet, f64)>,
    {
        let mut weights: BTreeMap<u32, f64> = BTreeMap::new();
        for (set, w) in entries {
            frame.ensure_same(set.frame())?;
            if w < 0.0 {
                return Err(Error::InvalidMass(format!(
                    "negative weight {w} on {set}"
                )));
            }
            if set.is_empty() && w > 0.0 {
                return Err(Error::InvalidMass(format!(
                    "positive weight {w} on the empty proposition"
                )));
            }
            if w > 0.0 {
                *weights.entry(set.mask()).or_insert(0.0) += w;
            }
        }
        Self::from_mask_map(frame.clone(), weights)
    }

    /// Total ignorance: all weight on the full proposition.
    pub fn vacuous(frame: &Frame) -> MassFunction {
        let mut weights = BTreeMap::new();
        weights.insert(frame.full_mask(), 1.0);
        MassFunction {
            frame: frame.clone(),
            weights,
        }
    }

    /// A simple support function's mass: weight `s` on `focus`, the rest on
    /// the full proposition.
    pub fn simple_support(focus: &PropSet, s: f64) -> Result<MassFunction> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::InvalidWeight(s));
        }
        if focus.is_empty() {
            return Err(Error::InvalidMass(
                "simple support on the empty proposition".to_string(),
            ));
        }
        let frame = focus.frame().clone();
        let mut weights = BTreeMap::new();
        if s > 0.0 {
            weights.insert(focus.mask(), s);
        }
        if 1.0 - s > 0.0 || weights.is_empty() {
            *weights.entry(frame.full_mask()).or_insert(0.0) += 1.0 - s;
        }
        MassFunction::from_mask_map(frame, weights)
    }

    /// Internal constructor from a mask-keyed map: clamps tolerance-level
    /// negatives, drops zeros, and validates the total.
    pub(crate) fn from_mask_map(frame: Frame, mut weights: BTreeMap<u32, f64>) -> Result<MassFunction> {
        let mut total = 0.0;
        let mut bad: Option<(u32, f64)> = None;
        weights.retain(|mask, w| {
            if *w < -INTERNAL_TOLERANCE || (*mask == 0 && *w > INTERNAL_TOLERANCE) {
                bad.get_or_insert((*mask, *w));
            }
            if *w <= 0.0 || *mask == 0 {
                false
            } else {
                total += *w;
                true
            }
        });
        if let Some((mask, w)) = bad {
            return Err(Error::InvalidMass(format!(
                "weight {w} on subset index {mask}"
            )));
        }
        if (total - 1.0).abs() > API_TOLERANCE {
            return Err(Error::InvalidMass(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        Ok(MassFunction { frame, weights })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// The weight of one subset (0 when not focal).
    pub fn weight(&self, x: &PropSet) -> Result<f64> {
        self.frame.ensure_same(x.frame())?;
        Ok(self.weights.get(&x.mask()).copied().unwrap_or(0.0))
    }

    /// Focal elements and weights, by ascending canonical index.
    pub fn focal_elements(&self) -> impl Iterator<Item = (PropSet, f64)> + '_ {
        self.weights
            .iter()
            .map(|(mask, w)| (self.frame.full().with_mask(*mask), *w))
    }

    /// Number of focal elements.
    pub fn focal_count(&self) -> usize {
        self.weights.len()
    }

    pub(crate) fn weights_by_mask(&self) -> &BTreeMap<u32, f64> {
        &self.weights
    }

    /// The belief function induced by this mass: subset sums of the weights.
    pub fn to_belief(&self) -> SupportFunction {
        let mut values = vec![0.0; self.frame.subset_count()];
        for (mask, w) in &self.weights {
            values[*mask as usize] = *w;
        }
        subset_sum_in_place(&mut values);
        // Pin the endpoints despite float accumulation.
        let last = values.len() - 1;
        values[last] = 1.0;
        for v in values.iter_mut() {
            *v = v.clamp(0.0, 1.0);
        }
        SupportFunction::from_values(self.frame.clone(), SupportKind::Belief, values)
    }
}

/// Combines two independent bodies of evidence by Dempster's rule:
/// weights multiply on intersections and the conflict mass (intersections
/// that are empty) is renormalized away.
pub fn dempster_combine(m1: &MassFunction, m2: &MassFunction) -> Result<MassFunction> {
    m1.frame.ensure_same(&m2.frame)?;
    let mut combined: BTreeMap<u32, f64> = BTreeMap::new();
    let mut conflict = 0.0;
    for (u, wu) in &m1.weights {
        for (v, wv) in &m2.weights {
            let inter = u & v;
            let w = wu * wv;
            if inter == 0 {
                conflict += w;
            } else {
                *combined.entry(inter).or_insert(0.0) += w;
            }
        }
    }
    if conflict >= 1.0 - INTERNAL_TOLERANCE {
        return Err(Error::TotalConflict(conflict));
    }
    let scale = 1.0 - conflict;
    for w in combined.values_mut() {
        *w /= scale;
    }
    MassFunction::from_mask_map(m1.frame.clone(), combined)
}
