//! Every relationship carries a confidence in [0, 1], and confidence
//! flows: multiplied along causal chains, dampened by context rules,
//! accumulated across independent causes with noisy-OR, and revised by
//! later assessments. Each mechanism in turn, with the arithmetic shown.
//!
//! Run with: `cargo run --example confidence_propagation`

use atch::causal::{
    context_modifier, noisy_or, propagate_confidence, trace_causal_chain, TraceOptions,
};
use atch::fixtures::{assessed_claim, benchmark_store, psu_surge};
use atch::store::{ConfidencePolicy, Store};

fn main() {
    println!("1. Chain rule: belief in a conclusion is the product of the");
    println!("   first cause's confidence and every link factor after it.");
    let snap = benchmark_store().snapshot();
    let trace = trace_causal_chain(&snap, &"finding".into(), &TraceOptions::default()).unwrap();
    let chain = &trace.chains()[0];
    let spec = chain.to_spec();
    let mut rendered = format!("{:.2}", spec.head.value());
    for link in &spec.links {
        rendered.push_str(&format!(" x {:.2}", link.link_confidence));
    }
    println!(
        "   {} = {:.6}",
        rendered,
        propagate_confidence(&spec).value()
    );
    println!("   (a verdict resting on two plausible steps is itself only ~51% certain)");

    println!("\n2. Context rules dampen links whose mechanism barely applies.");
    let psu = psu_surge();
    let psnap = psu.snapshot();
    let surge = psnap.get(&"power_surge".into()).unwrap();
    let failure = psnap.get(&"psu_failure".into()).unwrap();
    let modifier = context_modifier(&surge, &failure, psnap.rules());
    println!("   rule: VoltCo PSUs have surge protection, strength 0.7");
    println!("   modifier = 1 - 0.7 = {modifier:.2}");
    let ptrace = trace_causal_chain(&psnap, &"psu_failure".into(), &TraceOptions::default()).unwrap();
    let pspec = ptrace.chains()[0].to_spec();
    println!(
        "   link factor = 0.8 x {modifier:.2} = {:.2}; chain \u{03ba} = 0.8 x 0.24 = {:.3}",
        pspec.links[0].factor(),
        propagate_confidence(&pspec).value()
    );

    println!("\n3. Noisy-OR: independent causes reinforce.");
    let causes = [0.5, 0.5];
    println!(
        "   two coin-flip causes: 1 - (1-0.5)(1-0.5) = {}",
        noisy_or(causes)
    );
    let many = vec![0.25; 20];
    println!(
        "   twenty weak reports at 0.25 each: 1 - 0.75^20 = {:.6}",
        noisy_or(many)
    );
    println!("   (weak evidence in bulk is strong evidence — if truly independent)");

    println!("\n4. Assessments revise an edge's confidence after the fact.");
    let assessed = assessed_claim();
    let asnap = assessed.snapshot();
    let leak = "leak_detected".into();
    println!(
        "   recorded \u{03ba} = {:.2}",
        asnap.raw_edge(&leak).unwrap().confidence.value()
    );
    for rec in asnap.assessments(&leak) {
        println!(
            "   assessment by {} ({}): {:.2}",
            rec.assessment.source, rec.assessment.methodology, rec.assessment.value.value()
        );
    }
    println!(
        "   latest-assessment policy:  effective \u{03ba} = {:.2}",
        asnap.effective_confidence(&leak).unwrap().value()
    );
    let noisy = Store::parse_log_with_policy(
        &assessed.serialize_log(),
        ConfidencePolicy::NoisyOrAssessments,
    )
    .unwrap();
    println!(
        "   noisy-OR policy:           effective \u{03ba} = {:.2}  (1 - 0.4 x 0.3)",
        noisy.snapshot().effective_confidence(&leak).unwrap().value()
    );
}
