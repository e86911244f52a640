//! Bitemporal queries over an IT incident. Valid time records when a
//! fact held in the world; transaction time records when the database
//! learned it. The two axes are independent, so we can ask both "what
//! was true at 9:20 that morning?" and "what did we believe before the
//! late-arriving court finding was recorded?".
//!
//! Run with: `cargo run --example incident_time_travel`

use atch::fixtures::{benchmark_store, ts};
use atch::model::TimeInterval;
use atch::temporal::{at_time, valid_in_interval};

fn main() {
    let store = benchmark_store();
    let snap = store.snapshot();

    println!("1. The morning of the printing incident, minute by minute.");
    for probe in ["2024-03-18T08:02:00", "2024-03-18T09:20:00", "2024-03-18T10:00:00"] {
        let result = at_time(&snap, ts(probe));
        let ids: Vec<&str> = result.edges.iter().map(|e| e.as_str()).collect();
        println!("   {probe}  ->  {}", ids.join(", "));
    }
    println!("   (the driver push, the OS update, and the failure never all overlap)");

    println!("\n2. Window query: everything valid at some point in April 2024.");
    let window = TimeInterval::between(ts("2024-04-01"), ts("2024-04-30")).unwrap();
    for id in valid_in_interval(&snap, &window) {
        println!(
            "   {id}  {}",
            snap.effective_interval(&id).unwrap()
        );
    }

    println!("\n3. Terminations narrow validity without rewriting history.");
    let acme = "alice_acme".into();
    println!(
        "   alice_acme as recorded:  {}",
        snap.raw_edge(&acme).unwrap().valid_time
    );
    println!(
        "   alice_acme as effective: {}",
        snap.effective_interval(&acme).unwrap()
    );
    println!(
        "   valid on 2024-06-15? {}   valid on 2024-07-15? {}",
        at_time(&snap, ts("2024-06-15")).edges.contains(&acme),
        at_time(&snap, ts("2024-07-15")).edges.contains(&acme),
    );

    println!("\n4. Transaction-time travel: before the court finding arrived.");
    let finding = "finding".into();
    let finding_seq = store.seq_of_edge(&finding).unwrap();
    let earlier = store.snapshot_at(finding_seq - 1).unwrap();
    println!(
        "   the finding was recorded at tx {}",
        store.records()[finding_seq as usize - 1].tx_time
    );
    println!(
        "   current snapshot knows it: {}",
        snap.contains_edge(&finding)
    );
    println!(
        "   snapshot as of seq {} does not: {}",
        earlier.as_of_seq(),
        earlier.contains_edge(&finding)
    );

    println!("\n5. The two axes are independent.");
    // The finding is *valid* from 2024-08-20 even though it was *recorded*
    // on 2024-09-02; conversely the earlier transaction state simply has
    // no finding at any valid time.
    let on_aug_25 = at_time(&snap, ts("2024-08-25")).edges.contains(&finding);
    let on_aug_25_then = at_time(&earlier, ts("2024-08-25")).edges.contains(&finding);
    println!("   valid at 2024-08-25, believed now:  {on_aug_25}");
    println!("   valid at 2024-08-25, believed then: {on_aug_25_then}");
    assert!(on_aug_25 && !on_aug_25_then);
}
