//! Forward chaining with an uncertain rule: from evidence for `P` and a rule
//! "if `P` then `Q`, with probability at least 0.9", derive a lower bound on
//! `Q` by interval-Bayes refinement.
//!
//! Run with: `cargo run --example modus_ponens`

use evkernel::evidence::MassFunction;
use evkernel::interval::{check_bayes, implied_interval, refine_bayes};
use evkernel::lattice::Frame;
use evkernel::oracle::natural_extension;
use evkernel::rules::{Rule, RuleBase};

fn main() -> evkernel::Result<()> {
    // Four atoms, one per truth assignment to the pair (P, Q).
    let frame = Frame::new(["pq", "p~q", "~pq", "~p~q"])?;
    let p = frame.subset(["pq", "p~q"])?;
    let q = frame.subset(["pq", "~pq"])?;

    // The prior: evidence supports P to degree 0.8; the rest stays on the
    // whole frame (classic simple support).
    let prior = MassFunction::new(&frame, [(&p, 0.8), (&frame.full(), 0.2)])?;
    let b = prior.to_belief();
    println!("prior:  b(P) = {:.4},  b(Q) = {:.4}", b.value(&p)?, b.value(&q)?);

    // One rule: p(Q | P) >= 0.9.
    let rules = RuleBase::new(&frame, &[Rule::new(&q, &p, 0.9)?])?;

    // Before refinement, the prior does not yet honor the rule: the check
    // reports where the interval-Bayes bound exceeds the current value.
    let before = check_bayes(&b, &rules)?;
    println!("check before refinement: consistent = {}", before.is_consistent());
    for v in before.violations() {
        println!(
            "  b({}) must reach {:.4} given the rule on {}, but sits at {:.4}",
            v.consequent, v.required, v.antecedent, v.achieved
        );
    }

    // Refine: sweep the interval-Bayes bounds to their fixpoint.
    let refined = refine_bayes(&b, &rules)?;
    println!("refined: b(Q) = {:.4}", refined.value(&q)?);
    assert!((refined.value(&q)? - 0.72).abs() < 1e-9);

    // The derived interval for Q.
    let iv = implied_interval(&refined, &q)?;
    println!("derived interval for Q: [{:.4}, {:.4}]", iv.lower, iv.upper);

    // The fixpoint is consistent and agrees with the exact LP bound here.
    assert!(check_bayes(&refined, &rules)?.is_consistent());
    let exact = natural_extension(&b, &rules)?;
    println!("exact LP bound:  b(Q) = {:.4}", exact.value(&q)?);
    assert!((refined.value(&q)? - exact.value(&q)?).abs() < 1e-9);

    println!("modus ponens: 0.8 of P and a 0.9-rule yield {:.2} of Q", refined.value(&q)?);
    Ok(())
}
