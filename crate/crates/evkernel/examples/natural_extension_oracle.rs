//! The exact oracle: every engine in this crate is a cheap, sound
//! approximation of one linear program per proposition. The oracle builds
//! the credal polytope — all probability distributions dominating the prior
//! bounds and honoring every rule — and minimizes directly, optionally in
//! exact rational arithmetic.
//!
//! Run with: `cargo run --example natural_extension_oracle`

use evkernel::evidence::MassFunction;
use evkernel::lattice::Frame;
use evkernel::oracle::{
    natural_extension, natural_extension_exact, CredalPolytope, ProbabilityVector,
};
use evkernel::rules::{Rule, RuleBase};
use evkernel::Error;

fn main() -> evkernel::Result<()> {
    let frame = Frame::new(["pq", "p~q", "~pq", "~p~q"])?;
    let p = frame.subset(["pq", "p~q"])?;
    let q = frame.subset(["pq", "~pq"])?;

    let prior = MassFunction::new(&frame, [(&p, 0.8), (&frame.full(), 0.2)])?;
    let b = prior.to_belief();
    let rules = RuleBase::new(&frame, &[Rule::new(&q, &p, 0.9)?])?;

    // The polytope has one dominance row per prior bound and one
    // homogenized row per rule.
    let poly = CredalPolytope::new(&b, Some(&rules))?;
    println!("polytope over {} atoms, {} constraints", frame.atom_count(), poly.constraint_count());

    // Point queries: tightest bounds on any proposition, in either
    // direction, and exact conditional lower bounds.
    println!("min p(Q)   = {:.6}", poly.min_prob(&q)?);
    println!("max p(Q)   = {:.6}", poly.max_prob(&q)?);
    println!("min p(Q|P) = {:.6}", poly.min_conditional(&q, &p)?);

    // Membership: the uniform distribution violates b(P) >= 0.8, so it
    // lies outside; a distribution putting 0.9 on pq lies inside.
    let uniform = ProbabilityVector::uniform(&frame);
    let skewed = ProbabilityVector::new(&frame, &[0.9, 0.0, 0.05, 0.05])?;
    println!("uniform in polytope: {}", poly.contains(&uniform)?);
    println!("skewed  in polytope: {}", poly.contains(&skewed)?);

    // The natural extension minimizes over every subset at once: the
    // tightest pointwise-coherent envelope of prior plus rules.
    let ext = natural_extension(&b, &rules)?;
    println!("natural extension: b(Q) = {:.6}", ext.value(&q)?);

    // Exact mode replays the same simplex in rational arithmetic — same
    // answers, no rounding, smaller frame cap.
    let exact = natural_extension_exact(&b, &rules)?;
    for mask in 0..frame.subset_count() as u32 {
        let x = frame.subset_from_mask(mask)?;
        assert!((ext.value(&x)? - exact.value(&x)?).abs() < 1e-9);
    }
    println!("floating-point and exact-rational extensions agree");

    // Contradictory bounds carve an empty polytope, reported as such.
    let clash = evkernel::evidence::SupportFunction::from_lower_bounds(
        &frame,
        [(&p, 0.7), (&p.complement(), 0.7)],
    )?;
    match natural_extension(&clash, &RuleBase::vacuous(&frame)) {
        Err(Error::EmptyPolytope) => println!("contradictory bounds: empty polytope"),
        other => panic!("expected an empty polytope, got {other:?}"),
    }

    Ok(())
}
