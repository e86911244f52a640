//! Causal traversal and confidence propagation.
//!
//! A chain `e1 -> e2 -> ... -> en` carries the belief of its starting
//! point attenuated by every mechanism along the way:
//!
//! ```text
//! kappa_chain = kappa(e1) * product over links of (link_confidence * context_modifier)
//! ```
//!
//! The context modifier scales a single link by `1 - strength` for every
//! registered rule whose predicate matches that link, so known inhibiting
//! circumstances weaken exactly the step they apply to. When several
//! chains support the same conclusion they combine with Noisy-OR if their
//! evidence is independent, and with the conservative maximum when the
//! chains share an ancestor and Noisy-OR would double-count it.

use std::collections::BTreeSet;

use crate::model::{CausalLink, Confidence, ContextRule, EdgeId, Hyperedge, LinkKind, Timestamp};
use crate::store::Snapshot;
use crate::temporal;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CausalError {
    #[error("unknown hyperedge {0:?}")]
    UnknownEdge(String),
    #[error("cannot combine an empty set of paths")]
    EmptyPathSet,
    #[error("{name} = {value} outside required range {requirement}")]
    Domain {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },
}

// ---------------------------------------------------------------------------
// Chain confidence
// ---------------------------------------------------------------------------

/// One step of a chain: the link's own confidence and the product of
/// `1 - strength` over the context rules that matched it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainLink {
    pub link_confidence: f64,
    pub context_modifier: f64,
}

impl ChainLink {
    /// The link's contribution to the chain product.
    pub fn factor(&self) -> f64 {
        self.link_confidence * self.context_modifier
    }
}

/// A chain reduced to the numbers that matter for propagation: the first
/// node's confidence and each link's factors, in causal order.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpec {
    pub head: Confidence,
    pub links: Vec<ChainLink>,
}

/// Multiply belief along a chain. Only the first node's own confidence
/// enters; downstream nodes are reached through their links, whose
/// confidences already price in the inferential steps.
pub fn propagate_confidence(spec: &ChainSpec) -> Confidence {
    let mut acc = spec.head.value();
    for link in &spec.links {
        acc *= link.factor();
    }
    Confidence::new(acc).expect("products of values in [0,1] stay in [0,1]")
}

/// The combined `1 - strength` scaling of every rule matching this link.
/// No matching rules means 1.0: context never amplifies.
pub fn context_modifier(cause: &Hyperedge, effect: &Hyperedge, rules: &[ContextRule]) -> f64 {
    rules
        .iter()
        .filter(|r| r.predicate.matches(cause, effect))
        .map(|r| 1.0 - r.inhibition_strength)
        .product()
}

// ---------------------------------------------------------------------------
// Path combination
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineMode {
    /// Independent evidence: `1 - product(1 - kappa_i)`.
    NoisyOr,
    /// Dependent evidence: the strongest single path, never less than any
    /// input and never double-counting a shared ancestor.
    Max,
}

/// Noisy-OR accumulation of independent supports.
pub fn noisy_or(values: impl IntoIterator<Item = f64>) -> f64 {
    let miss: f64 = values.into_iter().map(|v| 1.0 - v).product();
    1.0 - miss
}

/// Combine the confidences of several paths to the same conclusion.
pub fn combine_paths(values: &[Confidence], mode: CombineMode) -> Result<Confidence, CausalError> {
    if values.is_empty() {
        return Err(CausalError::EmptyPathSet);
    }
    let combined = match mode {
        CombineMode::NoisyOr => noisy_or(values.iter().map(|c| c.value())),
        CombineMode::Max => values
            .iter()
            .map(|c| c.value())
            .fold(f64::NEG_INFINITY, f64::max),
    };
    Confidence::new(combined).map_err(|_| CausalError::Domain {
        name: "combined confidence",
        value: combined,
        requirement: "[0, 1]",
    })
}

/// Which edges feed two or more of the given paths. A path's upstream set
/// is its members other than the final conclusion, plus all of their
/// strict ancestors; the conclusion itself is excluded because sharing it
/// is the whole point of combining.
#[derive(Debug, Clone, PartialEq)]
pub struct SharedAncestors {
    pub shared: BTreeSet<EdgeId>,
}

impl SharedAncestors {
    pub fn is_independent(&self) -> bool {
        self.shared.is_empty()
    }

    /// Noisy-OR for independent paths, Max otherwise.
    pub fn recommended_mode(&self) -> CombineMode {
        if self.is_independent() {
            CombineMode::NoisyOr
        } else {
            CombineMode::Max
        }
    }
}

pub fn detect_shared_ancestors(
    snap: &Snapshot,
    paths: &[Vec<EdgeId>],
) -> Result<SharedAncestors, CausalError> {
    for id in paths.iter().flatten() {
        if !snap.contains_edge(id) {
            return Err(CausalError::UnknownEdge(id.as_str().to_string()));
        }
    }
    let upstreams: Vec<BTreeSet<EdgeId>> = paths
        .iter()
        .map(|p| {
            let mut up = BTreeSet::new();
            let members = if p.is_empty() { &p[..] } else { &p[..p.len() - 1] };
            for m in members {
                up.insert(m.clone());
                up.extend(temporal::ancestors(snap, m));
            }
            up
        })
        .collect();
    let mut shared = BTreeSet::new();
    for i in 0..upstreams.len() {
        for j in (i + 1)..upstreams.len() {
            shared.extend(upstreams[i].intersection(&upstreams[j]).cloned());
        }
    }
    Ok(SharedAncestors { shared })
}

// ---------------------------------------------------------------------------
// Depth bound
// ---------------------------------------------------------------------------

/// How deep a chain of links with per-step confidence at least
/// `kappa_min < 1` can grow while its confidence strictly exceeds
/// `theta`: the smallest d with `kappa_min^d <= theta`, i.e.
/// `ceil(ln theta / ln kappa_min)`. Traversal beyond this depth cannot
/// yield a chain above the threshold.
pub fn effective_depth(kappa_min: f64, theta: f64) -> Result<u32, CausalError> {
    if !kappa_min.is_finite() || kappa_min <= 0.0 || kappa_min >= 1.0 {
        return Err(CausalError::Domain {
            name: "kappa_min",
            value: kappa_min,
            requirement: "(0, 1)",
        });
    }
    if !theta.is_finite() || theta <= 0.0 || theta > 1.0 {
        return Err(CausalError::Domain {
            name: "theta",
            value: theta,
            requirement: "(0, 1]",
        });
    }
    let d = (theta.ln() / kappa_min.ln()).ceil();
    Ok(d.max(0.0) as u32)
}

// ---------------------------------------------------------------------------
// Tracing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TraceDirection {
    /// Walk `causes` links upstream: why did this happen?
    #[default]
    Causes,
    /// Walk downstream: what did this bring about?
    Effects,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceOptions {
    /// Maximum number of links to follow from the target.
    pub depth: usize,
    /// Only consider edges whose effective valid interval contains this
    /// instant. The target itself is always reported.
    pub as_of: Option<Timestamp>,
    /// Prune a branch as soon as its accumulated chain confidence falls
    /// below this value. Every reported chain then scores at least this.
    pub threshold: Option<f64>,
    pub direction: TraceDirection,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            depth: usize::MAX,
            as_of: None,
            threshold: None,
            direction: TraceDirection::Causes,
        }
    }
}

/// An inhibiting link pointing at a traced node.
#[derive(Debug, Clone, PartialEq)]
pub struct Inhibition {
    pub by: EdgeId,
    pub mechanism: String,
    pub link_confidence: f64,
}

/// One node of the trace tree with its outgoing steps.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceNode {
    pub id: EdgeId,
    /// Effective confidence under the snapshot's assessment policy.
    pub confidence: Confidence,
    /// Inhibitors aimed at this node (subject to the same as_of filter).
    pub inhibited_by: Vec<Inhibition>,
    pub steps: Vec<TraceStep>,
}

/// A link followed during tracing, annotated with the confidence of the
/// chain from the far node back to (or forward from) the target.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep {
    pub mechanism: String,
    pub link_confidence: f64,
    pub context_modifier: f64,
    pub conditional_confidence: Option<f64>,
    /// kappa_chain of the partial chain this step completes.
    pub chain_confidence: f64,
    pub node: TraceNode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceResult {
    pub target: EdgeId,
    pub direction: TraceDirection,
    pub root: TraceNode,
}

/// A maximal root-to-leaf path of the trace tree, re-oriented so the
/// deepest cause comes first.
#[derive(Debug, Clone, PartialEq)]
pub struct CausalChain {
    /// Edge ids in causal order (earliest cause first).
    pub ids: Vec<EdgeId>,
    /// Effective confidence of each node, parallel to `ids`.
    pub confidences: Vec<f64>,
    /// Mechanism names, parallel to `links`.
    pub mechanisms: Vec<String>,
    /// One entry per step between consecutive ids.
    pub links: Vec<ChainLink>,
}

impl CausalChain {
    pub fn to_spec(&self) -> ChainSpec {
        ChainSpec {
            head: Confidence::new(self.confidences[0]).expect("stored confidences are valid"),
            links: self.links.clone(),
        }
    }

    /// kappa_chain of the whole path.
    pub fn confidence(&self) -> f64 {
        propagate_confidence(&self.to_spec()).value()
    }
}

impl TraceResult {
    /// Flatten the tree into its maximal chains, one per leaf. For a
    /// causes-direction trace the chains read cause-first and end at the
    /// target; for effects-direction they start at the target.
    pub fn chains(&self) -> Vec<CausalChain> {
        let mut out = Vec::new();
        let mut stack = Vec::new();
        collect_chains(&self.root, &mut stack, self.direction, &mut out);
        out
    }

    /// Longest link distance from the target to any traced node.
    pub fn max_depth(&self) -> usize {
        fn depth(node: &TraceNode) -> usize {
            node.steps.iter().map(|s| 1 + depth(&s.node)).max().unwrap_or(0)
        }
        depth(&self.root)
    }
}

fn collect_chains(
    node: &TraceNode,
    stack: &mut Vec<(EdgeId, f64, String, ChainLink)>,
    direction: TraceDirection,
    out: &mut Vec<CausalChain>,
) {
    if node.steps.is_empty() {
        // Leaf reached: the stack holds, outward from the target, the node
        // on the near side of each followed link plus that link. Walking
        // it in reverse yields the path leaf-first, i.e. cause-first for a
        // causes-direction trace.
        let mut path: Vec<(EdgeId, f64)> = vec![(node.id.clone(), node.confidence.value())];
        let mut mechanisms = Vec::new();
        let mut links = Vec::new();
        for (id, conf, mech, link) in stack.iter().rev() {
            path.push((id.clone(), *conf));
            mechanisms.push(mech.clone());
            links.push(*link);
        }
        if direction == TraceDirection::Effects {
            // Downstream chains read target-first.
            path.reverse();
            mechanisms.reverse();
            links.reverse();
        }
        let (ids, confidences) = path.into_iter().unzip();
        out.push(CausalChain {
            ids,
            confidences,
            mechanisms,
            links,
        });
        return;
    }
    for step in &node.steps {
        stack.push((
            node.id.clone(),
            node.confidence.value(),
            step.mechanism.clone(),
            ChainLink {
                link_confidence: step.link_confidence,
                context_modifier: step.context_modifier,
            },
        ));
        collect_chains(&step.node, stack, direction, out);
        stack.pop();
    }
}

/// Walk the causal order from `target`, building the tree of chains that
/// explain it (or that it explains, in effects direction).
pub fn trace_causal_chain(
    snap: &Snapshot,
    target: &EdgeId,
    opts: &TraceOptions,
) -> Result<TraceResult, CausalError> {
    if !snap.contains_edge(target) {
        return Err(CausalError::UnknownEdge(target.as_str().to_string()));
    }
    let root_conf = snap
        .effective_confidence(target)
        .expect("target existence checked");
    let root = expand(
        snap,
        target,
        root_conf,
        root_conf.value(),
        opts,
        opts.depth,
        1.0,
    );
    Ok(TraceResult {
        target: target.clone(),
        direction: opts.direction,
        root,
    })
}

#[allow(clippy::too_many_arguments)]
fn expand(
    snap: &Snapshot,
    id: &EdgeId,
    confidence: Confidence,
    root_conf: f64,
    opts: &TraceOptions,
    depth_left: usize,
    link_product: f64,
) -> TraceNode {
    let inhibited_by = snap
        .causes_of(id)
        .into_iter()
        .filter(|l| l.kind == LinkKind::Inhibits)
        .filter(|l| valid_at_opt(snap, &l.cause, opts.as_of))
        .map(|l| Inhibition {
            by: l.cause.clone(),
            mechanism: l.mechanism.clone(),
            link_confidence: l.link_confidence.value(),
        })
        .collect();

    let mut steps = Vec::new();
    if depth_left > 0 {
        let links: Vec<&CausalLink> = match opts.direction {
            TraceDirection::Causes => snap.causes_of(id),
            TraceDirection::Effects => snap.effects_of(id),
        };
        for link in links {
            if link.kind != LinkKind::Causes {
                continue;
            }
            let far = match opts.direction {
                TraceDirection::Causes => &link.cause,
                TraceDirection::Effects => &link.effect,
            };
            if !valid_at_opt(snap, far, opts.as_of) {
                continue;
            }
            let cause_edge = snap.raw_edge(&link.cause).expect("link ends exist");
            let effect_edge = snap.raw_edge(&link.effect).expect("link ends exist");
            let modifier = context_modifier(cause_edge, effect_edge, snap.rules());
            let far_conf = snap.effective_confidence(far).expect("link ends exist");
            let product = link_product * link.link_confidence.value() * modifier;
            // In causes direction the chain starts at the far node; in
            // effects direction it starts at the traced target.
            let chain_confidence = match opts.direction {
                TraceDirection::Causes => far_conf.value() * product,
                TraceDirection::Effects => root_conf * product,
            };
            if let Some(theta) = opts.threshold {
                if chain_confidence < theta {
                    continue;
                }
            }
            let node = expand(snap, far, far_conf, root_conf, opts, depth_left - 1, product);
            steps.push(TraceStep {
                mechanism: link.mechanism.clone(),
                link_confidence: link.link_confidence.value(),
                context_modifier: modifier,
                conditional_confidence: link.conditional_confidence.map(|c| c.value()),
                chain_confidence,
                node,
            });
        }
    }

    TraceNode {
        id: id.clone(),
        confidence,
        inhibited_by,
        steps,
    }
}

fn valid_at_opt(snap: &Snapshot, id: &EdgeId, as_of: Option<Timestamp>) -> bool {
    match as_of {
        None => true,
        Some(t) => snap
            .effective_interval(id)
            .map(|iv| iv.contains(t))
            .unwrap_or(false),
    }
}

// ---------------------------------------------------------------------------
// Defaults and inhibitors
// ---------------------------------------------------------------------------

/// Edges valid at `t` that are not suppressed by an inhibiting link whose
/// cause is itself valid at `t`. Persistence is the default; suppression
/// lasts exactly as long as the inhibitor's own validity.
pub fn active_defaults(snap: &Snapshot, t: Timestamp) -> BTreeSet<EdgeId> {
    let valid = temporal::at_time(snap, t).edges;
    valid
        .iter()
        .filter(|id| {
            !snap.causes_of(id).into_iter().any(|l| {
                l.kind == LinkKind::Inhibits
                    && snap
                        .effective_interval(&l.cause)
                        .map(|iv| iv.contains(t))
                        .unwrap_or(false)
            })
        })
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        AcceptAllRefs, AttrValue, CompareOp, EdgeSpec, IntervalEnd, Participant, RulePredicate,
        RuleTarget, Vertex,
    };
    use crate::store::{Payload, Store};

    fn ts(s: &str) -> Timestamp {
        Timestamp::parse_flex(s).unwrap()
    }

    fn id(s: &str) -> EdgeId {
        EdgeId::new(s)
    }

    const TX: &str = "2024-09-01T00:00";

    fn base_store() -> Store {
        let mut s = Store::new();
        s.append_at(
            Payload::AddVertex(Vertex::new("x", Default::default()).unwrap()),
            ts(TX),
        )
        .unwrap();
        s
    }

    fn add_edge(s: &mut Store, eid: &str, conf: f64, start: &str, end: Option<&str>) {
        let spec = EdgeSpec::new(
            vec![Participant::of("x")],
            ts(start),
            end.map(|e| IntervalEnd::At(ts(e))).unwrap_or(IntervalEnd::Unbounded),
            conf,
        )
        .with_id(eid);
        s.append_at(Payload::AddHyperedge(spec.build(&AcceptAllRefs).unwrap()), ts(TX))
            .unwrap();
    }

    fn add_link(s: &mut Store, cause: &str, effect: &str, mech: &str, conf: f64) {
        s.append_at(
            Payload::AddLink(CausalLink::causes(cause, effect, mech, conf).unwrap()),
            ts(TX),
        )
        .unwrap();
    }

    /// prescription(0.73) -> reaction(0.95) -> finding(0.62) with link
    /// confidences 0.89 and 0.78.
    fn malpractice() -> Store {
        let mut s = base_store();
        add_edge(&mut s, "prescription", 0.73, "2024-07-01", None);
        add_edge(&mut s, "reaction", 0.95, "2024-07-20", None);
        add_edge(&mut s, "finding", 0.62, "2024-08-01", None);
        add_link(&mut s, "prescription", "reaction", "caused", 0.89);
        add_link(&mut s, "reaction", "finding", "led_to", 0.78);
        s
    }

    #[test]
    fn chain_confidence_multiplies_head_and_link_factors() {
        let spec = ChainSpec {
            head: Confidence::new(0.73).unwrap(),
            links: vec![
                ChainLink { link_confidence: 0.89, context_modifier: 1.0 },
                ChainLink { link_confidence: 0.78, context_modifier: 1.0 },
            ],
        };
        let got = propagate_confidence(&spec).value();
        assert!((got - 0.506766).abs() < 1e-9, "{got}");
    }

    #[test]
    fn trace_reconstructs_the_full_chain() {
        let snap = malpractice().snapshot();
        let trace = trace_causal_chain(&snap, &id("finding"), &TraceOptions::default()).unwrap();
        let chains = trace.chains();
        assert_eq!(chains.len(), 1);
        let chain = &chains[0];
        assert_eq!(
            chain.ids,
            vec![id("prescription"), id("reaction"), id("finding")]
        );
        assert_eq!(chain.confidences, vec![0.73, 0.95, 0.62]);
        assert_eq!(chain.mechanisms, vec!["caused", "led_to"]);
        assert!((chain.confidence() - 0.506766).abs() < 1e-9);
        // Per-step annotations carry the partial chain values.
        let step = &trace.root.steps[0];
        assert!((step.chain_confidence - 0.95 * 0.78).abs() < 1e-12);
        let deeper = &step.node.steps[0];
        assert!((deeper.chain_confidence - 0.506766).abs() < 1e-9);
    }

    #[test]
    fn context_rules_scale_only_matching_links() {
        // power_surge -0.9-> psu_failure -0.8-> motherboard_short, with a
        // rule inhibiting links whose cause has surge_protector = true.
        let mut s = base_store();
        add_edge(&mut s, "power_surge", 1.0, "2024-01-01", None);
        let psu = EdgeSpec::new(
            vec![Participant::of("x")],
            ts("2024-01-01"),
            IntervalEnd::Unbounded,
            1.0,
        )
        .with_id("psu_failure")
        .with_attr("surge_protector", true)
        .build(&AcceptAllRefs)
        .unwrap();
        s.append_at(Payload::AddHyperedge(psu), ts(TX)).unwrap();
        add_edge(&mut s, "motherboard_short", 1.0, "2024-01-01", None);
        add_link(&mut s, "power_surge", "psu_failure", "overload", 0.9);
        add_link(&mut s, "psu_failure", "motherboard_short", "burnout", 0.8);
        s.append_at(
            Payload::AddRule(
                ContextRule::new(
                    "protector-dampens",
                    RulePredicate {
                        target: RuleTarget::Cause,
                        key: "surge_protector".into(),
                        op: CompareOp::Eq,
                        value: AttrValue::Bool(true),
                    },
                    0.7,
                )
                .unwrap(),
            ),
            ts(TX),
        )
        .unwrap();

        let snap = s.snapshot();
        let trace =
            trace_causal_chain(&snap, &id("motherboard_short"), &TraceOptions::default()).unwrap();
        let step = &trace.root.steps[0]; // short <- psu_failure
        assert!((step.context_modifier - 0.3).abs() < 1e-12);
        assert!((step.link_confidence * step.context_modifier - 0.24).abs() < 1e-12);
        // The upstream link's cause has no matching attribute: untouched.
        let upstream = &step.node.steps[0];
        assert_eq!(upstream.context_modifier, 1.0);
    }

    #[test]
    fn several_matching_rules_compound() {
        let mut s = base_store();
        add_edge(&mut s, "a", 1.0, "2024-01-01", None);
        add_edge(&mut s, "b", 1.0, "2024-01-01", None);
        let cause = s.snapshot().raw_edge(&id("a")).unwrap().clone();
        let effect = s.snapshot().raw_edge(&id("b")).unwrap().clone();
        let rule = |i: u32, strength: f64| {
            ContextRule::new(
                format!("r{i}"),
                RulePredicate {
                    target: RuleTarget::Cause,
                    key: "missing".into(),
                    op: CompareOp::Eq,
                    value: AttrValue::Bool(true),
                },
                strength,
            )
            .unwrap()
        };
        // No matching rules: modifier is exactly 1.
        assert_eq!(context_modifier(&cause, &effect, &[rule(1, 0.5)]), 1.0);
        // Two matching rules compound multiplicatively.
        let mut matching = s.snapshot().raw_edge(&id("a")).unwrap().clone();
        matching
            .attributes
            .insert("missing".into(), AttrValue::Bool(true));
        let rules = [rule(1, 0.5), rule(2, 0.4)];
        assert!((context_modifier(&matching, &effect, &rules) - 0.3).abs() < 1e-12);
    }

    #[test]
    fn as_of_excludes_edges_outside_their_validity() {
        let mut s = malpractice();
        // Terminate the prescription before the as_of instant.
        s.append_at(
            Payload::Terminate {
                edge: id("prescription"),
                end: ts("2024-07-10"),
            },
            ts(TX),
        )
        .unwrap();
        let snap = s.snapshot();
        let opts = TraceOptions {
            as_of: Some(ts("2024-08-15")),
            ..TraceOptions::default()
        };
        let trace = trace_causal_chain(&snap, &id("finding"), &opts).unwrap();
        let chains = trace.chains();
        assert_eq!(chains.len(), 1);
        assert_eq!(chains[0].ids, vec![id("reaction"), id("finding")]);
        // Without as_of the full chain is visible.
        let full =
            trace_causal_chain(&snap, &id("finding"), &TraceOptions::default()).unwrap();
        assert_eq!(full.chains()[0].ids.len(), 3);
    }

    #[test]
    fn depth_limits_traversal() {
        let snap = malpractice().snapshot();
        let opts = TraceOptions {
            depth: 1,
            ..TraceOptions::default()
        };
        let trace = trace_causal_chain(&snap, &id("finding"), &opts).unwrap();
        assert_eq!(trace.max_depth(), 1);
        assert_eq!(trace.chains()[0].ids, vec![id("reaction"), id("finding")]);
        let zero = TraceOptions {
            depth: 0,
            ..TraceOptions::default()
        };
        let trace = trace_causal_chain(&snap, &id("finding"), &zero).unwrap();
        assert!(trace.root.steps.is_empty());
    }

    #[test]
    fn threshold_prunes_branches_and_reported_chains_meet_it() {
        let mut s = base_store();
        for e in ["a", "b", "c"] {
            add_edge(&mut s, e, 0.9, "2024-01-01", None);
        }
        add_link(&mut s, "a", "b", "m", 0.5);
        add_link(&mut s, "b", "c", "m", 0.5);
        let snap = s.snapshot();
        let opts = TraceOptions {
            threshold: Some(0.3),
            ..TraceOptions::default()
        };
        let trace = trace_causal_chain(&snap, &id("c"), &opts).unwrap();
        let chains = trace.chains();
        // b -> c scores 0.9 * 0.5 = 0.45; extending to a scores
        // 0.9 * 0.25 = 0.225 and is pruned.
        assert_eq!(chains.len(), 1);
        assert_eq!(chains[0].ids, vec![id("b"), id("c")]);
        for chain in &chains {
            assert!(chain.confidence() >= 0.3);
        }
    }

    #[test]
    fn branching_causes_yield_one_chain_per_leaf() {
        let mut s = base_store();
        for e in ["a", "b", "c", "d"] {
            add_edge(&mut s, e, 1.0, "2024-01-01", None);
        }
        add_link(&mut s, "a", "c", "m", 0.9);
        add_link(&mut s, "b", "c", "m", 0.8);
        add_link(&mut s, "c", "d", "m", 0.7);
        let snap = s.snapshot();
        let trace = trace_causal_chain(&snap, &id("d"), &TraceOptions::default()).unwrap();
        let mut chains: Vec<Vec<EdgeId>> = trace.chains().into_iter().map(|c| c.ids).collect();
        chains.sort();
        assert_eq!(
            chains,
            vec![
                vec![id("a"), id("c"), id("d")],
                vec![id("b"), id("c"), id("d")],
            ]
        );
    }

    #[test]
    fn effects_direction_reads_target_first() {
        let snap = malpractice().snapshot();
        let opts = TraceOptions {
            direction: TraceDirection::Effects,
            ..TraceOptions::default()
        };
        let trace = trace_causal_chain(&snap, &id("prescription"), &opts).unwrap();
        let chains = trace.chains();
        assert_eq!(
            chains[0].ids,
            vec![id("prescription"), id("reaction"), id("finding")]
        );
        // Chain head is the target's own confidence.
        assert!((chains[0].confidence() - 0.73 * 0.89 * 0.78).abs() < 1e-12);
    }

    #[test]
    fn trace_unknown_edge_errors() {
        let snap = malpractice().snapshot();
        assert_eq!(
            trace_causal_chain(&snap, &id("ghost"), &TraceOptions::default()),
            Err(CausalError::UnknownEdge("ghost".into()))
        );
    }

    #[test]
    fn noisy_or_matches_worked_value() {
        assert!((noisy_or([0.3, 0.6]) - 0.72).abs() < 1e-12);
        assert_eq!(noisy_or([]), 0.0);
        assert_eq!(noisy_or([1.0, 0.2]), 1.0);
    }

    #[test]
    fn combine_paths_modes() {
        let vals: Vec<Confidence> = [0.3, 0.6]
            .iter()
            .map(|v| Confidence::new(*v).unwrap())
            .collect();
        assert!(
            (combine_paths(&vals, CombineMode::NoisyOr).unwrap().value() - 0.72).abs() < 1e-12
        );
        assert_eq!(
            combine_paths(&vals, CombineMode::Max).unwrap().value(),
            0.6
        );
        assert_eq!(
            combine_paths(&[], CombineMode::NoisyOr),
            Err(CausalError::EmptyPathSet)
        );
    }

    #[test]
    fn shared_ancestor_detection_separates_fork_from_independent() {
        let mut s = base_store();
        for e in ["a", "b", "c", "d", "p", "q"] {
            add_edge(&mut s, e, 1.0, "2024-01-01", None);
        }
        // Fork: a feeds both intermediate nodes.
        add_link(&mut s, "a", "b", "m", 1.0);
        add_link(&mut s, "a", "c", "m", 1.0);
        add_link(&mut s, "b", "d", "m", 1.0);
        add_link(&mut s, "c", "d", "m", 1.0);
        // Independent pair into d.
        add_link(&mut s, "p", "d", "m", 1.0);
        add_link(&mut s, "q", "d", "m", 1.0);
        let snap = s.snapshot();

        let forked = detect_shared_ancestors(
            &snap,
            &[
                vec![id("a"), id("b"), id("d")],
                vec![id("a"), id("c"), id("d")],
            ],
        )
        .unwrap();
        assert_eq!(forked.shared, BTreeSet::from([id("a")]));
        assert_eq!(forked.recommended_mode(), CombineMode::Max);

        let independent = detect_shared_ancestors(
            &snap,
            &[vec![id("p"), id("d")], vec![id("q"), id("d")]],
        )
        .unwrap();
        assert!(independent.is_independent());
        assert_eq!(independent.recommended_mode(), CombineMode::NoisyOr);

        // Sharing only the conclusion does not make paths dependent, but
        // a shared intermediate even without a named fork does.
        let via_ancestry = detect_shared_ancestors(
            &snap,
            &[vec![id("b"), id("d")], vec![id("c"), id("d")]],
        )
        .unwrap();
        assert_eq!(via_ancestry.shared, BTreeSet::from([id("a")]));
    }

    #[test]
    fn effective_depth_bound() {
        assert_eq!(effective_depth(0.9, 0.5).unwrap(), 7);
        assert_eq!(effective_depth(0.5, 0.25).unwrap(), 2);
        assert_eq!(effective_depth(0.5, 1.0).unwrap(), 0);
        assert!(matches!(
            effective_depth(1.0, 0.5),
            Err(CausalError::Domain { name: "kappa_min", .. })
        ));
        assert!(matches!(
            effective_depth(0.0, 0.5),
            Err(CausalError::Domain { name: "kappa_min", .. })
        ));
        assert!(matches!(
            effective_depth(0.9, 0.0),
            Err(CausalError::Domain { name: "theta", .. })
        ));
        assert!(matches!(
            effective_depth(0.9, 1.5),
            Err(CausalError::Domain { name: "theta", .. })
        ));
    }

    #[test]
    fn inhibitors_suppress_defaults_while_valid() {
        let mut s = base_store();
        add_edge(&mut s, "can_fly", 0.95, "2024-01-01", None);
        add_edge(&mut s, "broken_wing", 1.0, "2024-02-01", Some("2024-03-01"));
        s.append_at(
            Payload::AddLink(
                CausalLink::inhibits("broken_wing", "can_fly", "injury", 1.0).unwrap(),
            ),
            ts(TX),
        )
        .unwrap();
        let snap = s.snapshot();
        // Before the injury: flying is an active default.
        assert!(active_defaults(&snap, ts("2024-01-15")).contains(&id("can_fly")));
        // During: suppressed, though still valid in the plain temporal sense.
        let during = active_defaults(&snap, ts("2024-02-15"));
        assert!(!during.contains(&id("can_fly")));
        assert!(temporal::at_time(&snap, ts("2024-02-15"))
            .edges
            .contains(&id("can_fly")));
        // After healing: the default reasserts itself.
        assert!(active_defaults(&snap, ts("2024-03-15")).contains(&id("can_fly")));
    }

    #[test]
    fn inhibitors_are_not_traversed_as_causes_but_are_reported() {
        let mut s = base_store();
        add_edge(&mut s, "can_fly", 0.95, "2024-01-01", None);
        add_edge(&mut s, "broken_wing", 1.0, "2024-02-01", None);
        s.append_at(
            Payload::AddLink(
                CausalLink::inhibits("broken_wing", "can_fly", "injury", 1.0).unwrap(),
            ),
            ts(TX),
        )
        .unwrap();
        let snap = s.snapshot();
        let trace = trace_causal_chain(&snap, &id("can_fly"), &TraceOptions::default()).unwrap();
        assert!(trace.root.steps.is_empty());
        assert_eq!(trace.root.inhibited_by.len(), 1);
        assert_eq!(trace.root.inhibited_by[0].by, id("broken_wing"));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn unit() -> impl Strategy<Value = f64> {
            (0u32..=1000).prop_map(|n| n as f64 / 1000.0)
        }

        proptest! {
            #[test]
            fn propagation_stays_in_range_and_never_amplifies(
                head in unit(),
                links in proptest::collection::vec((unit(), unit()), 0..8),
            ) {
                let spec = ChainSpec {
                    head: Confidence::new(head).unwrap(),
                    links: links
                        .iter()
                        .map(|(l, c)| ChainLink { link_confidence: *l, context_modifier: *c })
                        .collect(),
                };
                let out = propagate_confidence(&spec).value();
                prop_assert!((0.0..=1.0).contains(&out));
                prop_assert!(out <= head + 1e-12);
            }

            #[test]
            fn extending_a_chain_never_increases_confidence(
                head in unit(),
                links in proptest::collection::vec((unit(), unit()), 1..8),
            ) {
                let mut spec = ChainSpec { head: Confidence::new(head).unwrap(), links: vec![] };
                let mut last = propagate_confidence(&spec).value();
                for (l, c) in links {
                    spec.links.push(ChainLink { link_confidence: l, context_modifier: c });
                    let next = propagate_confidence(&spec).value();
                    prop_assert!(next <= last + 1e-12);
                    last = next;
                }
            }

            #[test]
            fn noisy_or_bounds_and_monotonicity(
                vals in proptest::collection::vec(unit(), 1..10),
            ) {
                let combined = noisy_or(vals.iter().copied());
                let max = vals.iter().cloned().fold(0.0f64, f64::max);
                prop_assert!((0.0..=1.0 + 1e-12).contains(&combined));
                prop_assert!(combined >= max - 1e-12);
            }
        }
    }
}
