//! Two edges claim opposite sides of the same proposition. Resolution
//! walks four tiers — temporal recency, confidence, explicit source
//! priority, attribute specificity — and the first strict difference
//! decides. When every tier ties, the claims coexist. Separately, a
//! causal audit compares the provenance of the two beliefs and records
//! an explanation edge when one rests on a weak source.
//!
//! Run with: `cargo run --example conflict_resolution`

use atch::conflict::{causal_audit, resolve, Verdict};
use atch::fixtures::ts;
use atch::model::{
    attrs, AcceptAllRefs, AttrValue, CausalLink, EdgeSpec, IntervalEnd, Participant, Polarity,
};
use atch::store::{add_vertex, Payload, Store};

fn claim(
    store: &mut Store,
    id: &str,
    start: &str,
    confidence: f64,
    polarity: Polarity,
    attributes: atch::model::Attrs,
) {
    let edge = EdgeSpec::new(
        vec![Participant::of("Server9"), Participant::of("Inventory")],
        ts(start),
        IntervalEnd::Unbounded,
        confidence,
    )
    .with_id(id)
    .with_attrs(attributes)
    .with_claim("server9_decommissioned", polarity)
    .build(&AcceptAllRefs)
    .unwrap();
    store.append(Payload::AddHyperedge(edge)).unwrap();
}

fn explain(store: &Store, a: &str, b: &str) {
    let resolution = resolve(&store.snapshot(), &a.into(), &b.into()).unwrap();
    for t in &resolution.tiers {
        let outcome = t.decided.as_ref().map_or("tie", |id| id.as_str());
        println!(
            "     {:<15}  a={:<35} b={:<35} -> {outcome}",
            t.tier.as_str(),
            t.a_value,
            t.b_value
        );
    }
    match &resolution.verdict {
        Verdict::Prefer(id) => println!("     verdict: prefer {id}"),
        Verdict::Coexist => println!("     verdict: coexist"),
    }
}

fn main() {
    let mut store = Store::new();
    add_vertex(&mut store, "Server9", Default::default()).unwrap();
    add_vertex(&mut store, "Inventory", Default::default()).unwrap();

    println!("1. Temporal tier: the fresher claim wins outright.");
    claim(&mut store, "cmdb_says_gone", "2024-06-01", 0.8, Polarity::Supports, Default::default());
    claim(&mut store, "scan_sees_it", "2024-06-20", 0.8, Polarity::Refutes, Default::default());
    explain(&store, "cmdb_says_gone", "scan_sees_it");

    println!("\n2. Same recency: confidence breaks the tie.");
    claim(&mut store, "audit_a", "2024-07-01", 0.9, Polarity::Supports, Default::default());
    claim(&mut store, "audit_b", "2024-07-01", 0.6, Polarity::Refutes, Default::default());
    explain(&store, "audit_a", "audit_b");

    println!("\n3. Same recency and confidence: explicit source priority.");
    claim(
        &mut store, "intern_note", "2024-08-01", 0.7, Polarity::Supports,
        attrs([("source_priority", 1)]),
    );
    claim(
        &mut store, "registrar", "2024-08-01", 0.7, Polarity::Refutes,
        attrs([("source_priority", 9)]),
    );
    explain(&store, "intern_note", "registrar");

    println!("\n4. All earlier tiers tie: the more specific claim wins.");
    claim(
        &mut store, "bare_claim", "2024-09-01", 0.7, Polarity::Supports,
        attrs([("method", AttrValue::Str("guess".into()))]),
    );
    claim(
        &mut store, "detailed_claim", "2024-09-01", 0.7, Polarity::Refutes,
        attrs([
            ("method", AttrValue::Str("physical_check".into())),
            ("rack", AttrValue::Str("B14".into())),
            ("technician", AttrValue::Str("Priya".into())),
        ]),
    );
    explain(&store, "bare_claim", "detailed_claim");

    println!("\n5. Nothing separates them: both stand.");
    claim(&mut store, "twin_a", "2024-10-01", 0.5, Polarity::Supports, Default::default());
    claim(&mut store, "twin_b", "2024-10-01", 0.5, Polarity::Refutes, Default::default());
    explain(&store, "twin_a", "twin_b");
    println!("     (coexistence hands the case to contradiction discovery)");

    println!("\n6. Causal audit: which belief rests on weaker ground?");
    add_vertex(&mut store, "Rumor", Default::default()).unwrap();
    let rumor = EdgeSpec::new(
        vec![Participant::of("Rumor"), Participant::of("Server9")],
        ts("2024-05-28"),
        IntervalEnd::Unbounded,
        0.2,
    )
    .with_id("hallway_rumor")
    .build(&AcceptAllRefs)
    .unwrap();
    store.append(Payload::AddHyperedge(rumor)).unwrap();
    store
        .append(Payload::AddLink(
            CausalLink::causes("hallway_rumor", "cmdb_says_gone", "reported_as", 0.9).unwrap(),
        ))
        .unwrap();

    let report = causal_audit(
        &mut store,
        &"cmdb_says_gone".into(),
        &"scan_sees_it".into(),
        0.3,
        ts("2024-11-01"),
    )
    .unwrap();
    for (id, conf) in &report.weak_a {
        println!("   weak source behind cmdb_says_gone: {id} (\u{03ba} = {conf})");
    }
    println!(
        "   recommendation: trust {}",
        report.recommended.as_ref().unwrap()
    );
    for id in &report.explanations {
        let note = store.snapshot().raw_edge(id).unwrap().attributes["note"].clone();
        println!("   appended explanation edge {id}: \"{note}\"");
    }
}
