//! Combining independent bodies of evidence with Dempster's rule: weights
//! multiply across intersections, conflict (mass landing on the empty set)
//! is measured and renormalized away, and total conflict is an error.
//!
//! Run with: `cargo run --example dempster_combination`

use evkernel::evidence::{dempster_combine, MassFunction};
use evkernel::lattice::Frame;
use evkernel::Error;

fn main() -> evkernel::Result<()> {
    let frame = Frame::new(["measles", "flu", "cold", "healthy"])?;
    let feverish = frame.subset(["measles", "flu"])?;
    let viral = frame.subset(["measles", "flu", "cold"])?;
    let rash = frame.subset(["measles"])?;

    // Two independent sources: a thermometer (fever to degree 0.7) and a
    // skin exam (rash to degree 0.6).
    let thermometer = MassFunction::simple_support(&feverish, 0.7)?;
    let exam = MassFunction::simple_support(&rash, 0.6)?;

    let joint = dempster_combine(&thermometer, &exam)?;
    println!("thermometer (+) exam:");
    for (set, w) in joint.focal_elements() {
        println!("  m({set}) = {w:.4}");
    }
    // Simple support on nested/overlapping sets never conflicts, so the
    // weights are plain products: 0.42 + 0.18 lands on {measles}.
    let b = joint.to_belief();
    println!("b(measles) = {:.4}", b.value(&rash)?);
    assert!((b.value(&rash)? - 0.6).abs() < 1e-9);
    assert!((joint.weight(&rash)? - 0.6).abs() < 1e-9);

    // A third source points away from fever: some mass now multiplies into
    // the empty set. That share is the conflict; the rest renormalizes.
    let bloodwork = MassFunction::simple_support(&feverish.complement(), 0.5)?;
    let disputed = dempster_combine(&joint, &bloodwork)?;
    println!("after conflicting bloodwork:");
    for (set, w) in disputed.focal_elements() {
        println!("  m({set}) = {w:.4}");
    }
    println!("b(viral) = {:.4}", disputed.to_belief().value(&viral)?);

    // Flat contradiction between certainties has no coherent combination.
    let certain_rash = MassFunction::simple_support(&rash, 1.0)?;
    let certain_healthy = MassFunction::simple_support(&frame.subset(["healthy"])?, 1.0)?;
    match dempster_combine(&certain_rash, &certain_healthy) {
        Err(Error::TotalConflict(k)) => println!("total conflict detected (K = {k})"),
        other => panic!("expected total conflict, got {other:?}"),
    }

    Ok(())
}
