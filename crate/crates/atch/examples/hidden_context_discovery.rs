//! When both sides of a proposition accumulate overwhelming support, the
//! contradiction is usually not a coin toss — it is a missing variable.
//! Forty helpdesk tickets disagree about whether a KB update breaks
//! printing; an information-gain scan over their attributes finds the
//! driver version that cleanly separates them, and the store can then be
//! split into two context-refined claims that no longer conflict.
//!
//! Run with: `cargo run --example hidden_context_discovery`

use atch::conflict::{detect_contradiction, discover_hidden_context, split_on_context};
use atch::fixtures::forty_tickets;

fn main() {
    let mut store = forty_tickets();
    let snap = store.snapshot();
    let prop = "kb_update_breaks_printing";

    println!("1. Accumulate evidence on both sides of the proposition.");
    let signal = detect_contradiction(&snap, prop, 0.9).expect("both sides are overwhelming");
    println!(
        "   supports: {} tickets, noisy-OR \u{03ba} = {:.6}",
        signal.supports.members.len(),
        signal.supports.accumulated
    );
    println!(
        "   refutes:  {} tickets, noisy-OR \u{03ba} = {:.6}",
        signal.refutes.members.len(),
        signal.refutes.accumulated
    );
    println!("   both exceed \u{03b8} = 0.9 -> genuine contradiction, not noise.");

    println!("\n2. Rank the tickets' attributes by information gain.");
    let discovery = discover_hidden_context(&snap, &signal).unwrap();
    println!(
        "   class entropy: {:.3} bits to explain away",
        discovery.class_entropy_bits
    );
    for (attr, gain) in &discovery.candidate_gains {
        println!("   {attr:<16} {gain:.3} bits");
    }

    println!("\n3. The winner separates the clusters perfectly.");
    println!(
        "   split on '{}' (gain {:.3} bits):",
        discovery.attribute(),
        discovery.gain_bits()
    );
    for (key, branch) in &discovery.root.branches {
        println!(
            "   driver_version = {key}: {} supporting, {} refuting",
            branch.positives, branch.negatives
        );
    }
    println!("   (os_build and region looked plausible but explain nothing)");

    println!("\n4. Split the claim on the discovered context.");
    let before = store.last_seq();
    let outcome = split_on_context(&mut store, &signal, &discovery).unwrap();
    for edge in [&outcome.supports, &outcome.refutes] {
        let claim = edge.claim.as_ref().unwrap();
        println!(
            "   new edge {}  claims {:?} ({})  \u{03ba} = {:.6}",
            edge.id,
            claim.proposition,
            claim.polarity.as_str(),
            edge.confidence.value()
        );
    }
    println!(
        "   two events appended ({} -> {}); the forty originals are untouched.",
        before,
        store.last_seq()
    );

    println!("\n5. The refined propositions no longer contradict.");
    let after = store.snapshot();
    for refined in ["kb_update_breaks_printing[driver_version=6.1]",
                    "kb_update_breaks_printing[driver_version=8.3]"] {
        let clash = detect_contradiction(&after, refined, 0.9).is_some();
        println!("   {refined}: contradiction? {clash}");
    }
}
