//! Contradiction handling: claim accumulation, hidden-context discovery,
//! four-tier resolution, and causal audit.
//!
//! Evidence for and against a proposition accumulates with Noisy-OR. When
//! both sides clear the confidence threshold at once, that is not an
//! error: it usually means the proposition is underspecified, and both
//! sides are right in different circumstances. Discovery searches the
//! contradicting edges' attributes for the circumstance with the highest
//! information gain; a split then materializes the two context-specific
//! refinements as new edges, leaving the originals untouched.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::causal::noisy_or;
use crate::model::{
    AttrValue, Attrs, Confidence, EdgeId, Hyperedge, IntervalEnd, Participant, Polarity,
    TimeInterval, Timestamp,
};
use crate::store::{Payload, Snapshot, Store, StoreError};
use crate::temporal;

#[derive(Debug, thiserror::Error)]
pub enum ConflictError {
    #[error("unknown hyperedge {0:?}")]
    UnknownEdge(String),
    #[error("{a:?} and {b:?} are not in conflict: {reason}")]
    NotInConflict { a: String, b: String, reason: String },
    #[error("no observations to measure")]
    EmptyObservations,
    #[error("contradicting edges carry no attributes to partition on")]
    NoAttributes,
    #[error("no attribute separates the clusters; splitting would not refine the proposition")]
    ZeroGain,
    #[error(transparent)]
    Store(#[from] StoreError),
}

// ---------------------------------------------------------------------------
// Claim accumulation and contradiction detection
// ---------------------------------------------------------------------------

/// One side of a proposition: its evidence edges and their Noisy-OR
/// accumulation.
#[derive(Debug, Clone, PartialEq)]
pub struct ClaimCluster {
    pub proposition: String,
    pub polarity: Polarity,
    /// Evidence edges in log order.
    pub members: Vec<EdgeId>,
    /// `1 - product(1 - kappa_i)` over the members' effective confidences.
    pub accumulated: f64,
}

/// Accumulate the evidence on one side of a proposition. `member_floor`
/// excludes edges whose effective confidence is not strictly above it;
/// pass 0.0 to include everything.
pub fn accumulate_claim(
    snap: &Snapshot,
    proposition: &str,
    polarity: Polarity,
    member_floor: f64,
) -> ClaimCluster {
    let members: Vec<EdgeId> = snap
        .claim_sides(proposition)
        .map(|sides| sides.side(polarity).to_vec())
        .unwrap_or_default()
        .into_iter()
        .filter(|id| {
            snap.effective_confidence(id)
                .expect("claim registry references live edges")
                .value()
                > member_floor
        })
        .collect();
    let accumulated = noisy_or(
        members
            .iter()
            .map(|id| snap.effective_confidence(id).expect("checked").value()),
    );
    ClaimCluster {
        proposition: proposition.to_string(),
        polarity,
        members,
        accumulated,
    }
}

/// Raised when both polarity clusters clear the threshold simultaneously.
#[derive(Debug, Clone, PartialEq)]
pub struct ContradictionSignal {
    pub proposition: String,
    pub supports: ClaimCluster,
    pub refutes: ClaimCluster,
    pub theta: f64,
}

/// Check one proposition: a contradiction exists when the accumulated
/// confidence of both the supporting and the refuting cluster exceeds
/// `theta` (which must lie in `(0, 1)` for the check to be meaningful).
pub fn detect_contradiction(
    snap: &Snapshot,
    proposition: &str,
    theta: f64,
) -> Option<ContradictionSignal> {
    detect_contradiction_with_floor(snap, proposition, theta, 0.0)
}

pub fn detect_contradiction_with_floor(
    snap: &Snapshot,
    proposition: &str,
    theta: f64,
    member_floor: f64,
) -> Option<ContradictionSignal> {
    let supports = accumulate_claim(snap, proposition, Polarity::Supports, member_floor);
    let refutes = accumulate_claim(snap, proposition, Polarity::Refutes, member_floor);
    if supports.accumulated > theta && refutes.accumulated > theta {
        Some(ContradictionSignal {
            proposition: proposition.to_string(),
            supports,
            refutes,
            theta,
        })
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Information gain
// ---------------------------------------------------------------------------

/// Shannon entropy in bits of a two-class distribution.
pub fn entropy_bits(positives: usize, negatives: usize) -> f64 {
    let total = positives + negatives;
    if total == 0 {
        return 0.0;
    }
    let mut h = 0.0;
    for count in [positives, negatives] {
        if count > 0 {
            let p = count as f64 / total as f64;
            h -= p * p.log2();
        }
    }
    h
}

/// Category an observation falls into when partitioned by one attribute.
/// Missing values form their own category rather than being dropped:
/// absence is often exactly the hidden context.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum PartitionKey {
    Value(AttrValue),
    Absent,
}

impl fmt::Display for PartitionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionKey::Value(v) => v.fmt(f),
            PartitionKey::Absent => f.write_str("\u{22a5}"),
        }
    }
}

/// A labeled observation: does this edge support the proposition, and
/// what are its attributes.
#[derive(Debug, Clone, Copy)]
pub struct Observation<'a> {
    pub positive: bool,
    pub attrs: &'a Attrs,
}

/// `(positives, negatives)` per partition value, in one pass.
pub fn partition_counts(
    observations: &[Observation<'_>],
    attribute: &str,
) -> BTreeMap<PartitionKey, (usize, usize)> {
    let mut counts: BTreeMap<PartitionKey, (usize, usize)> = BTreeMap::new();
    for obs in observations {
        let key = match obs.attrs.get(attribute) {
            Some(v) => PartitionKey::Value(v.clone()),
            None => PartitionKey::Absent,
        };
        let entry = counts.entry(key).or_default();
        if obs.positive {
            entry.0 += 1;
        } else {
            entry.1 += 1;
        }
    }
    counts
}

/// Information gain, in bits, of partitioning the observations by one
/// attribute: class entropy minus the weighted entropy of the partitions.
pub fn information_gain(
    observations: &[Observation<'_>],
    attribute: &str,
) -> Result<f64, ConflictError> {
    if observations.is_empty() {
        return Err(ConflictError::EmptyObservations);
    }
    let total = observations.len() as f64;
    let positives = observations.iter().filter(|o| o.positive).count();
    let class_entropy = entropy_bits(positives, observations.len() - positives);
    let weighted: f64 = partition_counts(observations, attribute)
        .values()
        .map(|(p, n)| ((p + n) as f64 / total) * entropy_bits(*p, *n))
        .sum();
    // Clamp tiny negative residue from floating-point cancellation.
    Ok((class_entropy - weighted).max(0.0))
}

// ---------------------------------------------------------------------------
// Hidden-context discovery
// ---------------------------------------------------------------------------

/// Recursive partition of the contradicting evidence. The root holds the
/// best attribute overall; impure branches may carry a child partition on
/// a further attribute, at most three levels deep.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionNode {
    pub attribute: String,
    pub gain_bits: f64,
    pub branches: BTreeMap<PartitionKey, PartitionBranch>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionBranch {
    pub positives: usize,
    pub negatives: usize,
    pub child: Option<Box<PartitionNode>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Discovery {
    pub proposition: String,
    /// Entropy of the support/refute labels before any split.
    pub class_entropy_bits: f64,
    /// Information gain of every candidate attribute at the top level.
    pub candidate_gains: BTreeMap<String, f64>,
    pub root: PartitionNode,
    /// True when even the best attribute separates nothing.
    pub no_separator: bool,
}

impl Discovery {
    pub fn attribute(&self) -> &str {
        &self.root.attribute
    }

    pub fn gain_bits(&self) -> f64 {
        self.root.gain_bits
    }
}

const MAX_PARTITION_DEPTH: usize = 3;

/// Search the contradicting edges' attributes for the hidden context that
/// best explains the disagreement. Ties on gain break lexicographically by
/// attribute name so the result is deterministic.
pub fn discover_hidden_context(
    snap: &Snapshot,
    signal: &ContradictionSignal,
) -> Result<Discovery, ConflictError> {
    let mut edges: Vec<(bool, Hyperedge)> = Vec::new();
    for (positive, cluster) in [(true, &signal.supports), (false, &signal.refutes)] {
        for id in &cluster.members {
            let edge = snap
                .raw_edge(id)
                .ok_or_else(|| ConflictError::UnknownEdge(id.as_str().to_string()))?;
            edges.push((positive, edge.clone()));
        }
    }
    let observations: Vec<Observation<'_>> = edges
        .iter()
        .map(|(positive, e)| Observation {
            positive: *positive,
            attrs: &e.attributes,
        })
        .collect();
    if observations.is_empty() {
        return Err(ConflictError::EmptyObservations);
    }

    let candidates = candidate_attributes(&observations, &BTreeSet::new());
    if candidates.is_empty() {
        return Err(ConflictError::NoAttributes);
    }
    let mut candidate_gains = BTreeMap::new();
    for attr in &candidates {
        candidate_gains.insert(attr.clone(), information_gain(&observations, attr)?);
    }

    let positives = observations.iter().filter(|o| o.positive).count();
    let class_entropy_bits = entropy_bits(positives, observations.len() - positives);
    let root = build_partition(&observations, &BTreeSet::new(), 1)
        .expect("candidates are nonempty at the root");
    let no_separator = root.gain_bits == 0.0;
    Ok(Discovery {
        proposition: signal.proposition.clone(),
        class_entropy_bits,
        candidate_gains,
        root,
        no_separator,
    })
}

fn candidate_attributes(
    observations: &[Observation<'_>],
    used: &BTreeSet<String>,
) -> Vec<String> {
    let mut keys = BTreeSet::new();
    for obs in observations {
        for k in obs.attrs.keys() {
            if !used.contains(k) {
                keys.insert(k.clone());
            }
        }
    }
    keys.into_iter().collect()
}

/// Choose the best attribute for these observations and recurse into
/// still-mixed branches. Returns `None` when no attribute is available.
fn build_partition(
    observations: &[Observation<'_>],
    used: &BTreeSet<String>,
    depth: usize,
) -> Option<PartitionNode> {
    let candidates = candidate_attributes(observations, used);
    let mut best: Option<(String, f64)> = None;
    for attr in candidates {
        let gain = information_gain(observations, &attr).expect("observations nonempty");
        // Strict improvement required, so the lexicographically first of
        // the tied attributes wins (candidates iterate in sorted order).
        match &best {
            Some((_, g)) if gain <= *g => {}
            _ => best = Some((attr, gain)),
        }
    }
    let (attribute, gain_bits) = best?;

    let counts = partition_counts(observations, &attribute);
    let mut branches = BTreeMap::new();
    for (key, (p, n)) in counts {
        let child = if p > 0 && n > 0 && depth < MAX_PARTITION_DEPTH && gain_bits > 0.0 {
            let subset: Vec<Observation<'_>> = observations
                .iter()
                .filter(|o| match (&key, o.attrs.get(&attribute)) {
                    (PartitionKey::Value(v), Some(have)) => have == v,
                    (PartitionKey::Absent, None) => true,
                    _ => false,
                })
                .copied()
                .collect();
            let mut used_next = used.clone();
            used_next.insert(attribute.clone());
            build_partition(&subset, &used_next, depth + 1)
                .filter(|node| node.gain_bits > 0.0)
                .map(Box::new)
        } else {
            None
        };
        branches.insert(
            key,
            PartitionBranch {
                positives: p,
                negatives: n,
                child,
            },
        );
    }
    Some(PartitionNode {
        attribute,
        gain_bits,
        branches,
    })
}

// ---------------------------------------------------------------------------
// Splitting on discovered context
// ---------------------------------------------------------------------------

/// The two context-specific edges appended by a split.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitOutcome {
    pub supports: Hyperedge,
    pub refutes: Hyperedge,
}

/// Materialize a discovered context: append one refined edge per side of
/// the contradiction, each claiming the proposition in the circumstances
/// where its side's evidence concentrates. The original evidence edges are
/// left exactly as they were.
pub fn split_on_context(
    store: &mut Store,
    signal: &ContradictionSignal,
    discovery: &Discovery,
) -> Result<SplitOutcome, ConflictError> {
    if discovery.no_separator {
        return Err(ConflictError::ZeroGain);
    }
    let snap = store.snapshot();
    let attribute = discovery.attribute();

    let mut built = Vec::new();
    for (polarity, cluster) in [
        (Polarity::Supports, &signal.supports),
        (Polarity::Refutes, &signal.refutes),
    ] {
        // The side's dominant partition value: most of this side's
        // evidence falls under it. Ties break on the smaller key.
        let key = discovery
            .root
            .branches
            .iter()
            .max_by(|(ka, a), (kb, b)| {
                let ca = if polarity == Polarity::Supports { a.positives } else { a.negatives };
                let cb = if polarity == Polarity::Supports { b.positives } else { b.negatives };
                ca.cmp(&cb).then_with(|| kb.cmp(ka))
            })
            .map(|(k, _)| k.clone())
            .expect("partition has at least one branch");

        let members: Vec<&Hyperedge> = cluster
            .members
            .iter()
            .map(|id| snap.raw_edge(id).expect("cluster members exist"))
            .filter(|e| match (&key, e.attributes.get(attribute)) {
                (PartitionKey::Value(v), Some(have)) => have == v,
                (PartitionKey::Absent, None) => true,
                _ => false,
            })
            .collect();
        debug_assert!(!members.is_empty(), "dominant branch has this side's evidence");

        let participants = common_participants(&members);
        let confidence = noisy_or(
            members
                .iter()
                .map(|e| snap.effective_confidence(&e.id).expect("exists").value()),
        );
        let start = members
            .iter()
            .map(|e| e.valid_time.start())
            .min()
            .expect("nonempty");
        let end = members
            .iter()
            .map(|e| e.valid_time.end())
            .max()
            .expect("nonempty");

        let mut attributes = Attrs::new();
        if let PartitionKey::Value(v) = &key {
            attributes.insert(attribute.to_string(), v.clone());
        }
        attributes.insert(
            "derived_from".to_string(),
            AttrValue::Str(signal.proposition.clone()),
        );

        let id = EdgeId::new(format!(
            "{}::{}={}::{}",
            signal.proposition,
            attribute,
            key,
            polarity.as_str()
        ));
        let edge = Hyperedge {
            id,
            participants,
            attributes,
            valid_time: TimeInterval::new(start, end).expect("envelope of valid intervals"),
            tx_time: None,
            confidence: Confidence::new(confidence).expect("noisy-or stays in range"),
            claim: Some(crate::model::ClaimTag::new(
                format!("{}[{}={}]", signal.proposition, attribute, key),
                polarity,
            )),
        };
        built.push(edge);
    }

    let refutes = built.pop().expect("two sides");
    let supports = built.pop().expect("two sides");
    store.append(Payload::AddHyperedge(supports.clone()))?;
    store.append(Payload::AddHyperedge(refutes.clone()))?;
    Ok(SplitOutcome { supports, refutes })
}

/// Participants shared by every member, in the first member's order; when
/// the intersection is empty, the union in first-seen order.
fn common_participants(members: &[&Hyperedge]) -> Vec<Participant> {
    let first = members.first().expect("nonempty");
    let shared: Vec<Participant> = first
        .participants
        .iter()
        .filter(|p| {
            members.iter().all(|m| {
                m.participants
                    .iter()
                    .any(|q| q.target == p.target)
            })
        })
        .cloned()
        .collect();
    if !shared.is_empty() {
        return dedup_participants(shared);
    }
    let mut union = Vec::new();
    for m in members {
        for p in &m.participants {
            union.push(p.clone());
        }
    }
    dedup_participants(union)
}

fn dedup_participants(participants: Vec<Participant>) -> Vec<Participant> {
    let mut seen = BTreeSet::new();
    participants
        .into_iter()
        .filter(|p| seen.insert(p.target.as_str().to_string()))
        .collect()
}

// ---------------------------------------------------------------------------
// Four-tier resolution
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tier {
    Temporal,
    Confidence,
    SourcePriority,
    Specificity,
}

impl Tier {
    pub fn as_str(self) -> &'static str {
        match self {
            Tier::Temporal => "temporal",
            Tier::Confidence => "confidence",
            Tier::SourcePriority => "source_priority",
            Tier::Specificity => "specificity",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TierOutcome {
    pub tier: Tier,
    pub a_value: String,
    pub b_value: String,
    /// The edge this tier prefers, or `None` on a tie.
    pub decided: Option<EdgeId>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Prefer(EdgeId),
    /// No tier separates the edges: both stand, and the contradiction
    /// machinery (detection, discovery, split) is the way forward.
    Coexist,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Resolution {
    pub a: EdgeId,
    pub b: EdgeId,
    pub verdict: Verdict,
    /// Every tier that was consulted, in order, ending with the deciding
    /// one (or all four on coexistence).
    pub tiers: Vec<TierOutcome>,
}

/// Decide between two conflicting edges: claims on the same proposition
/// with opposite polarity. Tiers apply in order — temporal recency,
/// confidence, explicit source priority, specificity — and the first
/// strict difference decides.
pub fn resolve(snap: &Snapshot, a: &EdgeId, b: &EdgeId) -> Result<Resolution, ConflictError> {
    let edge_a = snap
        .raw_edge(a)
        .ok_or_else(|| ConflictError::UnknownEdge(a.as_str().to_string()))?;
    let edge_b = snap
        .raw_edge(b)
        .ok_or_else(|| ConflictError::UnknownEdge(b.as_str().to_string()))?;

    let not_in_conflict = |reason: &str| ConflictError::NotInConflict {
        a: a.as_str().to_string(),
        b: b.as_str().to_string(),
        reason: reason.to_string(),
    };
    let (claim_a, claim_b) = match (&edge_a.claim, &edge_b.claim) {
        (Some(ca), Some(cb)) => (ca, cb),
        _ => return Err(not_in_conflict("both edges must claim a proposition")),
    };
    if claim_a.proposition != claim_b.proposition {
        return Err(not_in_conflict("claims concern different propositions"));
    }
    if claim_a.polarity == claim_b.polarity {
        return Err(not_in_conflict("claims agree in polarity"));
    }

    let mut tiers = Vec::new();
    let mut verdict = Verdict::Coexist;

    let start_a = edge_a.valid_time.start();
    let start_b = edge_b.valid_time.start();
    let decided = strict_winner(start_a, start_b, a, b);
    tiers.push(TierOutcome {
        tier: Tier::Temporal,
        a_value: start_a.to_string(),
        b_value: start_b.to_string(),
        decided: decided.clone(),
    });

    if let Some(winner) = decided {
        verdict = Verdict::Prefer(winner);
    } else {
        let conf_a = snap.effective_confidence(a).expect("exists").value();
        let conf_b = snap.effective_confidence(b).expect("exists").value();
        let decided = strict_winner_f64(conf_a, conf_b, a, b);
        tiers.push(TierOutcome {
            tier: Tier::Confidence,
            a_value: format!("{conf_a}"),
            b_value: format!("{conf_b}"),
            decided: decided.clone(),
        });
        if let Some(winner) = decided {
            verdict = Verdict::Prefer(winner);
        } else {
            let pri = |e: &Hyperedge| {
                e.attributes
                    .get("source_priority")
                    .and_then(AttrValue::as_f64)
            };
            let (pa, pb) = (pri(edge_a), pri(edge_b));
            let show = |p: Option<f64>| p.map_or("absent".to_string(), |v| v.to_string());
            let decided = strict_winner_f64(
                pa.unwrap_or(f64::NEG_INFINITY),
                pb.unwrap_or(f64::NEG_INFINITY),
                a,
                b,
            );
            tiers.push(TierOutcome {
                tier: Tier::SourcePriority,
                a_value: show(pa),
                b_value: show(pb),
                decided: decided.clone(),
            });
            if let Some(winner) = decided {
                verdict = Verdict::Prefer(winner);
            } else {
                let spec = |e: &Hyperedge| {
                    e.attributes
                        .keys()
                        .filter(|k| k.as_str() != "source_priority")
                        .count()
                };
                let (sa, sb) = (spec(edge_a), spec(edge_b));
                let decided = strict_winner_f64(sa as f64, sb as f64, a, b);
                tiers.push(TierOutcome {
                    tier: Tier::Specificity,
                    a_value: sa.to_string(),
                    b_value: sb.to_string(),
                    decided: decided.clone(),
                });
                if let Some(winner) = decided {
                    verdict = Verdict::Prefer(winner);
                }
            }
        }
    }

    Ok(Resolution {
        a: a.clone(),
        b: b.clone(),
        verdict,
        tiers,
    })
}

fn strict_winner<T: Ord>(va: T, vb: T, a: &EdgeId, b: &EdgeId) -> Option<EdgeId> {
    match va.cmp(&vb) {
        std::cmp::Ordering::Greater => Some(a.clone()),
        std::cmp::Ordering::Less => Some(b.clone()),
        std::cmp::Ordering::Equal => None,
    }
}

fn strict_winner_f64(va: f64, vb: f64, a: &EdgeId, b: &EdgeId) -> Option<EdgeId> {
    if va > vb {
        Some(a.clone())
    } else if vb > va {
        Some(b.clone())
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Causal audit
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub a: EdgeId,
    pub b: EdgeId,
    /// `a` and every strict ancestor feeding it.
    pub chain_a: BTreeSet<EdgeId>,
    pub chain_b: BTreeSet<EdgeId>,
    /// Chain members whose effective confidence is strictly below the
    /// floor, with their values, sorted by id.
    pub weak_a: Vec<(EdgeId, f64)>,
    pub weak_b: Vec<(EdgeId, f64)>,
    /// The edge whose chain is clean, when exactly one side is tainted.
    pub recommended: Option<EdgeId>,
    /// Explanation edges appended to the log, one per weak source in the
    /// losing chain.
    pub explanations: Vec<EdgeId>,
}

/// Trace both edges' causal provenance and look for low-confidence
/// sources. When exactly one chain contains a source below `kappa_floor`,
/// the other edge is recommended and explanation edges are appended
/// recording which source poisoned which belief. With taint on both sides
/// or neither, no recommendation is made and nothing is appended.
pub fn causal_audit(
    store: &mut Store,
    a: &EdgeId,
    b: &EdgeId,
    kappa_floor: f64,
    at: Timestamp,
) -> Result<AuditReport, ConflictError> {
    let snap = store.snapshot();
    for id in [a, b] {
        if !snap.contains_edge(id) {
            return Err(ConflictError::UnknownEdge(id.as_str().to_string()));
        }
    }
    let chain = |id: &EdgeId| {
        let mut c = temporal::ancestors(&snap, id);
        c.insert(id.clone());
        c
    };
    let chain_a = chain(a);
    let chain_b = chain(b);
    let weak = |chain: &BTreeSet<EdgeId>| {
        chain
            .iter()
            .filter_map(|id| {
                let conf = snap.effective_confidence(id).expect("chain members exist");
                (conf.value() < kappa_floor).then(|| (id.clone(), conf.value()))
            })
            .collect::<Vec<_>>()
    };
    let weak_a = weak(&chain_a);
    let weak_b = weak(&chain_b);

    let (recommended, loser, weak_sources) = match (weak_a.is_empty(), weak_b.is_empty()) {
        (true, false) => (Some(a.clone()), Some(b.clone()), &weak_b),
        (false, true) => (Some(b.clone()), Some(a.clone()), &weak_a),
        _ => (None, None, &weak_a),
    };

    let mut explanations = Vec::new();
    if let Some(loser) = &loser {
        for (source, conf) in weak_sources {
            let seq = store.last_seq() + 1;
            let id = EdgeId::new(format!("audit-{seq}-{source}-{loser}"));
            let edge = Hyperedge {
                id: id.clone(),
                participants: vec![
                    Participant::with_role(source.as_str(), "faulty_source"),
                    Participant::with_role(loser.as_str(), "tainted_belief"),
                ],
                attributes: crate::model::attrs([
                    ("type", AttrValue::Str("audit_explanation".into())),
                    (
                        "note",
                        AttrValue::Str(format!(
                            "{source} caused incorrect belief {loser}"
                        )),
                    ),
                    ("kappa_floor", AttrValue::Real(kappa_floor)),
                    ("source_confidence", AttrValue::Real(*conf)),
                ]),
                valid_time: TimeInterval::new(at, IntervalEnd::Unbounded)
                    .expect("open-ended interval"),
                tx_time: None,
                confidence: Confidence::ONE,
                claim: None,
            };
            store.append(Payload::AddHyperedge(edge))?;
            explanations.push(id);
        }
    }

    Ok(AuditReport {
        a: a.clone(),
        b: b.clone(),
        chain_a,
        chain_b,
        weak_a,
        weak_b,
        recommended,
        explanations,
    })
}
