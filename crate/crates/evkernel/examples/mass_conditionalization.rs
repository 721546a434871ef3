//! Conditionalizing a mass function: each focal element ships a share of
//! its weight to the targets its rules support, at rates given by transfer
//! coefficients; whatever is not claimed stays put. The result is again a
//! mass function, so the whole evidence pipeline can keep running on it.
//!
//! Run with: `cargo run --example mass_conditionalization`

use evkernel::belief::{conditionalize_mass, transfer_coefficient, transfer_coefficients};
use evkernel::evidence::MassFunction;
use evkernel::lattice::Frame;
use evkernel::oracle::is_envelope;
use evkernel::rules::{Rule, RuleBase};

fn main() -> evkernel::Result<()> {
    let frame = Frame::new(["pq", "p~q", "~pq", "~p~q"])?;
    let p = frame.subset(["pq", "p~q"])?;
    let q = frame.subset(["pq", "~pq"])?;
    let pq = frame.subset(["pq"])?;
    let q_or_not_p = q.join(&p.complement())?;

    let rules = RuleBase::new(&frame, &[Rule::new(&q, &p, 0.9)?])?;

    // Transfer coefficients say how much of a focal element's mass a rule
    // base can move, and where. From P, a 0.9 share flows into P-and-Q;
    // from the whole frame, a 0.9 share flows into Q-or-not-P.
    let k1 = transfer_coefficient(&rules, &pq, &p)?;
    println!("transfer P -> {{pq}}: {:.2}", k1);
    for t in transfer_coefficients(&rules, &frame.full())? {
        println!("transfer {} -> {}: {:.2}", t.source, t.target, t.value);
    }

    // Redistribute the prior's mass along those coefficients.
    let prior = MassFunction::new(&frame, [(&p, 0.8), (&frame.full(), 0.2)])?;
    let after = conditionalize_mass(&prior, &rules)?;
    println!("conditionalized mass:");
    let mut total = 0.0;
    for (set, w) in after.focal_elements() {
        println!("  m({set}) = {w:.4}");
        total += w;
    }
    println!("  total = {total}");
    assert_eq!(total, 1.0); // conservation is exact, not just within epsilon

    // The expected split: 0.8 sends 0.72 into {pq} and keeps 0.08; 0.2
    // sends 0.18 into Q-or-not-P and keeps 0.02.
    assert!((after.weight(&pq)? - 0.72).abs() < 1e-9);
    assert!((after.weight(&p)? - 0.08).abs() < 1e-9);
    assert!((after.weight(&q_or_not_p)? - 0.18).abs() < 1e-9);
    assert!((after.weight(&frame.full())? - 0.02).abs() < 1e-9);

    // The induced belief function is a coherent envelope and now backs the
    // conclusion: b(Q v ~P) = 0.72 + 0.18 = 0.9.
    let belief = after.to_belief();
    assert!(is_envelope(&belief)?);
    println!("b(Q v ~P) after redistribution = {:.2}", belief.value(&q_or_not_p)?);

    Ok(())
}
