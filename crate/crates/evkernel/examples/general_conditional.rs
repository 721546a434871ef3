//! Two readings of "support for x given y", side by side. The general
//! lower conditional is the worst case over every distribution the evidence
//! allows; optimistic conditioning reads ambiguous evidence as favorably as
//! the sets permit. The general reading never exceeds the optimistic one,
//! and it matches the linear-programming minimum exactly.
//!
//! Run with: `cargo run --example general_conditional`

use evkernel::evidence::MassFunction;
use evkernel::interval::{
    check_general, general_lower_conditional, optimistic_lower_conditional,
};
use evkernel::lattice::Frame;
use evkernel::oracle::CredalPolytope;
use evkernel::rules::{Rule, RuleBase};
use evkernel::Error;

fn main() -> evkernel::Result<()> {
    let frame = Frame::new(["pq", "p~q", "~pq", "~p~q"])?;
    let p = frame.subset(["pq", "p~q"])?;
    let q = frame.subset(["pq", "~pq"])?;

    // Ambiguous evidence: half the mass sits on {pq, ~p~q}, a set that
    // straddles P. Inside P it lands on Q; outside P it says nothing.
    let straddle = frame.subset(["pq", "~p~q"])?;
    let b = MassFunction::new(&frame, [(&straddle, 0.5), (&frame.full(), 0.5)])?.to_belief();

    // Worst case: all of that mass may lie outside P, so given P it proves
    // nothing. Optimistic case: whatever part of it is in P supports Q.
    let general = general_lower_conditional(&b, &q, &p)?;
    let optimistic = optimistic_lower_conditional(&b, &q, &p)?;
    println!("general    p(Q|P) >= {:.4}", general);
    println!("optimistic p(Q|P) >= {:.4}", optimistic);
    assert!((general - 0.0).abs() < 1e-12);
    assert!((optimistic - 0.5).abs() < 1e-12);
    assert!(general <= optimistic + 1e-12);

    // The general value is exactly the LP minimum of p(Q|P) over all
    // distributions dominating the prior.
    let poly = CredalPolytope::new(&b, None)?;
    let lp = poly.min_conditional(&q, &p)?;
    println!("LP minimum p(Q|P) =  {:.4}", lp);
    assert!((general - lp).abs() < 1e-9);

    // Evidence pinned inside P behaves the same under both readings.
    let pinned = MassFunction::new(&frame, [(&frame.subset(["pq"])?, 0.5), (&frame.full(), 0.5)])?
        .to_belief();
    println!(
        "pinned evidence: general {:.4}, optimistic {:.4}",
        general_lower_conditional(&pinned, &q, &p)?,
        optimistic_lower_conditional(&pinned, &q, &p)?
    );

    // Conditioning on something the evidence rules out entirely is refused:
    // with all mass on P, the complement of P is certain-false.
    let certain = MassFunction::new(&frame, [(&p, 1.0)])?.to_belief();
    match general_lower_conditional(&certain, &q, &p.complement()) {
        Err(Error::CertainComplement) => println!("conditioning on a ruled-out event: refused"),
        other => panic!("expected CertainComplement, got {other:?}"),
    }

    // As a checker, the general reading is the strictest one: the forward
    // prior alone does not push p(Q|P) to 0.9, and the report says where
    // the worst case falls short.
    let forward = MassFunction::new(&frame, [(&p, 0.8), (&frame.full(), 0.2)])?.to_belief();
    let rules = RuleBase::new(&frame, &[Rule::new(&q, &p, 0.9)?])?;
    let report = check_general(&forward, &rules)?;
    println!(
        "general check against the 0.9 rule: consistent = {}",
        report.is_consistent()
    );
    for v in report.violations() {
        println!(
            "  p({} | {}) only reaches {:.4}, rule demands {:.4}",
            v.consequent, v.antecedent, v.achieved, v.required
        );
    }

    Ok(())
}
