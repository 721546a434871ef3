//! Reasoning by cases: when rules cover every cell of a partition of the
//! frame, the partition bound combines them — belief flows through each
//! case and any unassigned remainder earns the worst case's rate.
//!
//! Run with: `cargo run --example partition_bound`

use evkernel::belief::{partition_bound, refine_partition};
use evkernel::evidence::MassFunction;
use evkernel::lattice::Frame;
use evkernel::oracle::natural_extension;
use evkernel::rules::{Rule, RuleBase};

fn main() -> evkernel::Result<()> {
    let frame = Frame::new(["pq", "p~q", "~pq", "~p~q"])?;
    let p = frame.subset(["pq", "p~q"])?;
    let not_p = p.complement();
    let q = frame.subset(["pq", "~pq"])?;

    // Rules on both halves of the case split {P, ~P}:
    //   p(Q | P) >= 0.9 and p(Q | ~P) >= 0.3.
    let rules = RuleBase::new(
        &frame,
        &[Rule::new(&q, &p, 0.9)?, Rule::new(&q, &not_p, 0.3)?],
    )?;

    // Evidence: 0.8 for P, remainder uncommitted.
    let prior = MassFunction::new(&frame, [(&p, 0.8), (&frame.full(), 0.2)])?;
    let b = prior.to_belief();

    // By cases: 0.8 * 0.9 through P, 0.0 * 0.3 through ~P, and the
    // uncommitted 0.2 at the worst rate min(0.9, 0.3) = 0.3.
    let bound = partition_bound(&b, &rules, &q)?;
    println!("partition bound: b(Q) >= {:.4}", bound);
    assert!((bound - 0.78).abs() < 1e-9);

    // A single rule only manages 0.8 * 0.9 = 0.72; the second case adds
    // the remainder's worst-case share.
    let one_rule = RuleBase::new(&frame, &[Rule::new(&q, &p, 0.9)?])?;
    println!(
        "single-rule bound: b(Q) >= {:.4}",
        partition_bound(&b, &one_rule, &q)?
    );

    // The refinement applies the bound to every subset at once, and the
    // exact LP oracle confirms 0.78 is tight for Q.
    let refined = refine_partition(&b, &rules)?;
    let exact = natural_extension(&b, &rules)?;
    println!(
        "refined b(Q) = {:.4},  exact LP bound = {:.4}",
        refined.value(&q)?,
        exact.value(&q)?
    );
    assert!((refined.value(&q)? - exact.value(&q)?).abs() < 1e-9);

    Ok(())
}
