//! Support functions as probability envelopes: belief/plausibility
//! intervals, the specificity (pointwise dominance) order, recovering a
//! mass decomposition, and telling envelopes from merely consistent bounds.
//!
//! Run with: `cargo run --example envelopes_and_specificity`

use evkernel::evidence::{MassFunction, SupportFunction, SupportKind};
use evkernel::interval::{cheap_closure, implied_interval};
use evkernel::lattice::Frame;
use evkernel::oracle::is_envelope;
use evkernel::Error;

fn main() -> evkernel::Result<()> {
    let frame = Frame::new(["sun", "rain", "snow"])?;
    let sun = frame.subset(["sun"])?;
    let wet = frame.subset(["rain", "snow"])?;

    // Every belief function bounds each proposition inside
    // [belief, plausibility].
    let forecast = MassFunction::new(
        &frame,
        [(&sun, 0.5), (&wet, 0.2), (&frame.full(), 0.3)],
    )?;
    let b = forecast.to_belief();
    for set in [&sun, &wet] {
        let iv = implied_interval(&b, set)?;
        println!("p({set}) lies in [{:.2}, {:.2}]", iv.lower, iv.upper);
    }

    // Beliefs from masses are envelopes: some probability distribution
    // attains every bound, so the bounds cannot be tightened for free.
    assert_eq!(b.kind(), SupportKind::Belief);
    assert!(is_envelope(&b)?);

    // Raw lower bounds are looser objects. These are consistent (some
    // distribution satisfies them) but not an envelope: no distribution
    // gives both two-atom sets exactly 0.3 while an atom has 0.35.
    let raw = SupportFunction::from_lower_bounds(
        &frame,
        [
            (&frame.subset(["sun", "rain"])?, 0.3),
            (&frame.subset(["sun", "snow"])?, 0.3),
            (&sun, 0.35),
        ],
    )?;
    assert_eq!(raw.kind(), SupportKind::RawBounds);
    println!("raw bounds form an envelope: {}", is_envelope(&raw)?);

    // The cheap closure tightens raw bounds using monotonicity and
    // disjoint-additivity, without touching the LP machinery.
    let closed = cheap_closure(&raw)?;
    println!(
        "closure lifts b(sun v rain) from {:.2} to {:.2}",
        raw.value(&frame.subset(["sun", "rain"])?)?,
        closed.value(&frame.subset(["sun", "rain"])?)?
    );
    assert!(closed.is_more_specific_than(&raw)?);

    // Specificity is pointwise dominance: the closure never loses
    // information, and refined knowledge is never less specific.
    assert!(b.is_more_specific_than(&SupportFunction::vacuous(&frame))?);

    // Some raw bounds are no belief function at all: asking for a mass
    // decomposition then fails rather than inventing negative weights.
    let subadditive = SupportFunction::from_lower_bounds(
        &frame,
        [
            (&frame.subset(["sun", "rain"])?, 0.9),
            (&frame.subset(["sun", "snow"])?, 0.9),
            (&frame.subset(["rain", "snow"])?, 0.9),
        ],
    )?;
    match subadditive.to_mass() {
        Err(Error::NotABeliefFunction { set, weight }) => {
            let set = frame.subset_from_mask(set as u32)?;
            println!("no mass decomposition: weight {weight:.2} at {set}")
        }
        other => panic!("expected a decomposition failure, got {other:?}"),
    }

    Ok(())
}
