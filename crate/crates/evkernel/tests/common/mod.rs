//! Shared fixtures for the integration suites: the canonical four-atom
//! scenario and seeded random generators for masses and rule bases.

#![allow(dead_code)] // each integration test crate uses its own subset

use evkernel::evidence::MassFunction;
use evkernel::lattice::{Frame, PropSet};
use evkernel::rules::{Rule, RuleBase};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The canonical frame: one atom per truth assignment to the pair (P, Q).
pub fn pq_frame() -> Frame {
    Frame::new(["pq", "p~q", "~pq", "~p~q"]).unwrap()
}

pub fn p_of(frame: &Frame) -> PropSet {
    frame.subset(["pq", "p~q"]).unwrap()
}

pub fn q_of(frame: &Frame) -> PropSet {
    frame.subset(["pq", "~pq"]).unwrap()
}

/// Simple support for P: m(P) = 0.8, m(frame) = 0.2.
pub fn forward_prior(frame: &Frame) -> MassFunction {
    MassFunction::new(frame, [(&p_of(frame), 0.8), (&frame.full(), 0.2)]).unwrap()
}

/// The single rule p(Q | P) >= 0.9.
pub fn forward_rules(frame: &Frame) -> RuleBase {
    RuleBase::new(
        frame,
        &[Rule::new(&q_of(frame), &p_of(frame), 0.9).unwrap()],
    )
    .unwrap()
}

/// A frame of `n` generic atoms.
pub fn frame_of(n: usize) -> Frame {
    Frame::new((0..n).map(|i| format!("w{i}"))).unwrap()
}

/// A random mass function with up to `max_focals` focal elements.
pub fn random_mass(frame: &Frame, rng: &mut ChaCha8Rng, max_focals: usize) -> MassFunction {
    let full = frame.subset_count() as u32 - 1;
    let count = rng.gen_range(1..=max_focals);
    let mut picks: Vec<(PropSet, f64)> = Vec::with_capacity(count);
    let mut total = 0.0;
    for _ in 0..count {
        let mask = rng.gen_range(1..=full);
        let w = rng.gen_range(0.05..1.0);
        picks.push((frame.subset_from_mask(mask).unwrap(), w));
        total += w;
    }
    let entries: Vec<(PropSet, f64)> = picks
        .into_iter()
        .map(|(s, w)| (s, w / total))
        .collect();
    MassFunction::new(frame, entries.iter().map(|(s, w)| (s, *w))).unwrap()
}

/// A random compilable rule base with up to `max_rules` rules. Consequents
/// are drawn inside their conditions, so each rule is individually coherent;
/// sampling retries until the rules are jointly compilable.
pub fn random_rules(frame: &Frame, rng: &mut ChaCha8Rng, max_rules: usize) -> RuleBase {
    if frame.atom_count() < 2 {
        // A single-atom frame admits no nontrivial rule.
        return RuleBase::vacuous(frame);
    }
    let full = frame.subset_count() as u32 - 1;
    loop {
        let count = rng.gen_range(0..=max_rules);
        let mut rules = Vec::with_capacity(count);
        for _ in 0..count {
            // A condition with at least two atoms, so that a nonempty proper
            // consequent exists; the full frame makes the rule unconditional.
            let y = loop {
                let m = rng.gen_range(3..=full);
                if m.count_ones() >= 2 {
                    break m;
                }
            };
            // A nonempty proper submask of y.
            let x = loop {
                let m = rng.gen_range(1..=full) & y;
                if m != 0 && m != y {
                    break m;
                }
            };
            let lower = rng.gen_range(0.0..=1.0);
            let consequent = frame.subset_from_mask(x).unwrap();
            let rule = if y == full {
                Rule::unconditional(&consequent, lower).unwrap()
            } else {
                Rule::new(&consequent, &frame.subset_from_mask(y).unwrap(), lower).unwrap()
            };
            rules.push(rule);
        }
        if let Ok(base) = RuleBase::new(frame, &rules) {
            return base;
        }
    }
}

/// Pointwise `left <= right + slack` over full value vectors.
pub fn dominated_within(left: &[f64], right: &[f64], slack: f64) -> bool {
    left.iter().zip(right).all(|(l, r)| *l <= *r + slack)
}
