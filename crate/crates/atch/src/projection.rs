//! Binary projection and what it destroys.
//!
//! Flattening each n-ary relationship into its pairwise clique is the
//! standard lossy move of property-graph modeling. This module computes
//! the projection, quantifies the ambiguity it introduces (exact
//! per-edge counts plus the average-arity lower bound), counts
//! preimages exhaustively at desk scale to demonstrate irreversibility,
//! and reports a minimum-description-length proxy for the four pillars
//! a binary graph cannot carry: n-ary structure, bitemporal validity,
//! confidence, and causal links.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::canon::Value;
use crate::store::Snapshot;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProjectionError {
    #[error("{nodes} nodes exceed the exhaustive-enumeration limit of {limit}")]
    TooLarge { nodes: usize, limit: usize },
}

/// An undirected simple graph: the codomain of the projection. Pairs
/// are stored with endpoints in lexicographic order; self-loops are
/// dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BinaryGraph {
    pub nodes: BTreeSet<String>,
    pub edges: BTreeSet<(String, String)>,
}

impl BinaryGraph {
    pub fn add_pair(&mut self, a: &str, b: &str) {
        if a == b {
            return;
        }
        self.nodes.insert(a.to_string());
        self.nodes.insert(b.to_string());
        let pair = if a < b {
            (a.to_string(), b.to_string())
        } else {
            (b.to_string(), a.to_string())
        };
        self.edges.insert(pair);
    }

    pub fn contains_pair(&self, a: &str, b: &str) -> bool {
        let pair = if a < b { (a, b) } else { (b, a) };
        self.edges
            .contains(&(pair.0.to_string(), pair.1.to_string()))
    }
}

/// Replace every hyperedge by the clique over its distinct participants.
/// Participants that are themselves hyperedges appear as nodes under
/// their ids; vertices with no relationships appear as isolated nodes.
pub fn project_binary(snap: &Snapshot) -> BinaryGraph {
    let mut g = BinaryGraph::default();
    for v in snap.vertices() {
        g.nodes.insert(v.id.as_str().to_string());
    }
    for id in snap.edge_ids() {
        let edge = snap.raw_edge(id).expect("listed id resolves");
        let members: Vec<&str> = edge
            .distinct_participants()
            .into_iter()
            .map(|p| p.as_str())
            .collect();
        for m in &members {
            g.nodes.insert(m.to_string());
        }
        for i in 0..members.len() {
            for j in (i + 1)..members.len() {
                g.add_pair(members[i], members[j]);
            }
        }
    }
    g
}

fn choose2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Bit counts for the four expressive pillars, as encoded-length
/// proxies (MDL proxy, artifact-defined):
///
/// * structural — Σ C(nᵢ,2), the subset-ambiguity count per edge;
/// * temporal — four 64-bit microsecond timestamps per edge;
/// * confidence — one double-precision mantissa per edge;
/// * causal — the ≺ adjacency matrix over edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComponentBits {
    pub structural: u64,
    pub temporal: u64,
    pub confidence: u64,
    pub causal: u64,
}

impl ComponentBits {
    pub fn total(&self) -> u64 {
        self.structural + self.temporal + self.confidence + self.causal
    }

    pub fn get(&self, pillar: Pillar) -> u64 {
        match pillar {
            Pillar::Structural => self.structural,
            Pillar::Temporal => self.temporal,
            Pillar::Confidence => self.confidence,
            Pillar::Causal => self.causal,
        }
    }
}

/// How much the projection forgets, and how the bound compares to the
/// exact count.
#[derive(Debug, Clone, PartialEq)]
pub struct LossReport {
    /// C(nᵢ,2) per edge, in edge-id order.
    pub per_edge_bits: Vec<u64>,
    /// Σ C(nᵢ,2): the exact ambiguity count.
    pub total_bits: u64,
    /// Mean distinct-participant arity n̄.
    pub avg_arity: f64,
    /// |ℰ| · n̄(n̄−1)/2 — the average-arity lower bound; never exceeds
    /// `total_bits` (convexity), with equality exactly at uniform arity.
    pub theorem_bound_bits: f64,
    /// Σ log₂ C(nᵢ,2) over edges with C ≥ 1: bits to name which single
    /// pair of an edge's clique was "the" relationship. A much smaller
    /// quantity than `total_bits`; reported separately because the two
    /// are easy to conflate.
    pub edge_identity_bits: f64,
    pub components: ComponentBits,
}

impl LossReport {
    /// Canonical single-line object form, same notation as the event
    /// log.
    pub fn to_canonical(&self) -> String {
        Value::Object(vec![
            (
                "avg_arity".into(),
                Value::Real(self.avg_arity),
            ),
            (
                "components".into(),
                Value::Object(vec![
                    ("causal".into(), Value::UInt(self.components.causal)),
                    ("confidence".into(), Value::UInt(self.components.confidence)),
                    ("structural".into(), Value::UInt(self.components.structural)),
                    ("temporal".into(), Value::UInt(self.components.temporal)),
                ]),
            ),
            (
                "edge_identity_bits".into(),
                Value::Real(self.edge_identity_bits),
            ),
            (
                "per_edge_bits".into(),
                Value::Array(self.per_edge_bits.iter().map(|&b| Value::UInt(b)).collect()),
            ),
            (
                "theorem_bound_bits".into(),
                Value::Real(self.theorem_bound_bits),
            ),
            ("total_bits".into(), Value::UInt(self.total_bits)),
        ])
        .render()
    }
}

/// Exact ambiguity of projecting this snapshot, with the average-arity
/// bound and the component proxies alongside.
pub fn ambiguity_bound(snap: &Snapshot) -> LossReport {
    let arities: Vec<u64> = snap
        .edge_ids()
        .map(|id| {
            snap.raw_edge(id)
                .expect("listed id resolves")
                .distinct_participants()
                .len() as u64
        })
        .collect();
    let m = arities.len() as u64;
    let per_edge_bits: Vec<u64> = arities.iter().map(|&n| choose2(n)).collect();
    let total_bits: u64 = per_edge_bits.iter().sum();
    let avg_arity = if m == 0 {
        0.0
    } else {
        arities.iter().sum::<u64>() as f64 / m as f64
    };
    let theorem_bound_bits = m as f64 * avg_arity * (avg_arity - 1.0) / 2.0;
    let edge_identity_bits = per_edge_bits
        .iter()
        .filter(|&&b| b >= 1)
        .map(|&b| (b as f64).log2())
        .sum();
    LossReport {
        per_edge_bits,
        total_bits,
        avg_arity,
        theorem_bound_bits: theorem_bound_bits.max(0.0),
        edge_identity_bits,
        components: ComponentBits {
            structural: total_bits,
            temporal: 256 * m,
            confidence: 53 * m,
            causal: m * m,
        },
    }
}

const ENUM_LIMIT: usize = 6;

/// Count the distinct hypergraphs over the graph's nodes whose binary
/// projection is exactly this graph graph-for-graph: every candidate
/// hyperedge (a node subset of size ≥ 2 whose clique lies inside the
/// graph) may be present or absent, and the chosen set's cliques must
/// union to the full edge set. Exhaustive, so the node count is capped.
pub fn count_preimages(g: &BinaryGraph, max_nodes: usize) -> Result<u64, ProjectionError> {
    let limit = max_nodes.min(ENUM_LIMIT);
    let nodes: Vec<&String> = g.nodes.iter().collect();
    if nodes.len() > limit {
        return Err(ProjectionError::TooLarge { nodes: nodes.len(), limit });
    }
    let pairs: Vec<&(String, String)> = g.edges.iter().collect();
    let pair_bit = |a: &str, b: &str| -> Option<usize> {
        let key = if a < b { (a, b) } else { (b, a) };
        pairs
            .iter()
            .position(|(x, y)| (x.as_str(), y.as_str()) == key)
    };

    // Candidate hyperedges and the set of projected pairs each covers.
    let mut candidates: Vec<u32> = Vec::new();
    'subsets: for mask in 0u32..(1 << nodes.len()) {
        if mask.count_ones() < 2 {
            continue;
        }
        let members: Vec<&str> = (0..nodes.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| nodes[i].as_str())
            .collect();
        let mut covered: u32 = 0;
        for i in 0..members.len() {
            for j in (i + 1)..members.len() {
                match pair_bit(members[i], members[j]) {
                    Some(bit) => covered |= 1 << bit,
                    None => continue 'subsets,
                }
            }
        }
        candidates.push(covered);
    }

    // Subset-sum over coverage masks: cnt[m] = number of candidate sets
    // whose cliques cover exactly the pairs in m.
    let full: usize = 1 << pairs.len();
    let mut cnt = vec![0u64; full];
    cnt[0] = 1;
    for &cmask in &candidates {
        let cmask = cmask as usize;
        // `next` starts as "candidate absent"; the loop adds the ways
        // where it is present, so each candidate is used at most once.
        let mut next = cnt.clone();
        for (m, &ways) in cnt.iter().enumerate() {
            if ways > 0 {
                next[m | cmask] += ways;
            }
        }
        cnt = next;
    }
    Ok(cnt[full - 1])
}

/// The four things a plain binary graph cannot say.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Pillar {
    Structural,
    Temporal,
    Confidence,
    Causal,
}

impl Pillar {
    pub const ALL: [Pillar; 4] = [
        Pillar::Structural,
        Pillar::Temporal,
        Pillar::Confidence,
        Pillar::Causal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Pillar::Structural => "structural",
            Pillar::Temporal => "temporal",
            Pillar::Confidence => "confidence",
            Pillar::Causal => "causal",
        }
    }
}

impl fmt::Display for Pillar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Pillar {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "p1" | "structural" => Ok(Pillar::Structural),
            "p2" | "temporal" => Ok(Pillar::Temporal),
            "p3" | "confidence" => Ok(Pillar::Confidence),
            "p4" | "causal" => Ok(Pillar::Causal),
            other => Err(format!(
                "unknown pillar {other:?}; expected P1..P4 or structural/temporal/confidence/causal"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub components: ComponentBits,
    pub missing: BTreeSet<Pillar>,
    /// Σ of the component proxies over the missing pillars.
    pub missing_bits: u64,
}

/// MDL-proxy bound on what a representation lacking the given pillars
/// fails to encode about this snapshot.
pub fn expressiveness_gap(snap: &Snapshot, missing: &BTreeSet<Pillar>) -> GapReport {
    let components = ambiguity_bound(snap).components;
    let missing_bits = missing.iter().map(|&p| components.get(p)).sum();
    GapReport { components, missing: missing.clone(), missing_bits }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{eight_ary, ts};
    use crate::model::{AcceptAllRefs, EdgeSpec, IntervalEnd, Participant, Vertex};
    use crate::store::{Payload, Store};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn store_with_edges(arities: &[&[&str]]) -> Store {
        let mut s = Store::new();
        let mut seen = BTreeSet::new();
        for parts in arities {
            for p in *parts {
                if seen.insert(*p) {
                    s.append_at(
                        Payload::AddVertex(Vertex::new(*p, Default::default()).unwrap()),
                        ts("2024-09-01"),
                    )
                    .unwrap();
                }
            }
        }
        for (i, parts) in arities.iter().enumerate() {
            let e = EdgeSpec::new(
                parts.iter().copied().map(Participant::of).collect(),
                ts("2024-01-01"),
                IntervalEnd::Unbounded,
                0.9,
            )
            .with_id(format!("e{i}"))
            .build(&AcceptAllRefs)
            .unwrap();
            s.append_at(Payload::AddHyperedge(e), ts("2024-09-01")).unwrap();
        }
        s
    }

    #[test]
    fn eight_ary_edge_projects_to_28_pairs() {
        let g = project_binary(&eight_ary().snapshot());
        assert_eq!(g.edges.len(), 28);
        assert_eq!(g.nodes.len(), 8);
        let report = ambiguity_bound(&eight_ary().snapshot());
        assert_eq!(report.per_edge_bits, vec![28]);
        assert_eq!(report.total_bits, 28);
        assert_eq!(report.avg_arity, 8.0);
        assert_eq!(report.theorem_bound_bits, 28.0);
        assert!((report.edge_identity_bits - 28f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn binary_edge_is_its_own_projection() {
        let s = store_with_edges(&[&["A", "B"]]);
        let g = project_binary(&s.snapshot());
        assert_eq!(g.edges, BTreeSet::from([("A".to_string(), "B".to_string())]));
        let report = ambiguity_bound(&s.snapshot());
        assert_eq!(report.total_bits, 1);
        assert_eq!(report.theorem_bound_bits, 1.0);
    }

    #[test]
    fn overlapping_cliques_union_without_double_counting() {
        let s = store_with_edges(&[&["a", "b", "c"], &["b", "c", "d"]]);
        let g = project_binary(&s.snapshot());
        // Naive union oracle.
        let mut want = BinaryGraph::default();
        for group in [["a", "b", "c"], ["b", "c", "d"]] {
            for i in 0..3 {
                for j in (i + 1)..3 {
                    want.add_pair(group[i], group[j]);
                }
            }
        }
        assert_eq!(g.edges, want.edges);
        assert_eq!(g.edges.len(), 5);
    }

    #[test]
    fn mixed_arities_match_hand_arithmetic() {
        let s = store_with_edges(&[&["a", "b", "c"], &["d", "e", "f", "g", "h"]]);
        let report = ambiguity_bound(&s.snapshot());
        assert_eq!(report.per_edge_bits, vec![3, 10]);
        assert_eq!(report.total_bits, 13);
        assert_eq!(report.avg_arity, 4.0);
        assert_eq!(report.theorem_bound_bits, 12.0);
        assert!(report.theorem_bound_bits <= report.total_bits as f64);
    }

    #[test]
    fn edge_participants_become_nodes() {
        let mut s = store_with_edges(&[&["A", "B"]]);
        let nested = EdgeSpec::new(
            vec![Participant::of("e0"), Participant::of("C")],
            ts("2024-02-01"),
            IntervalEnd::Unbounded,
            0.8,
        )
        .with_id("nested")
        .build(&AcceptAllRefs)
        .unwrap();
        s.append_at(Payload::AddVertex(Vertex::new("C", Default::default()).unwrap()), ts("2024-09-01"))
            .unwrap();
        s.append_at(Payload::AddHyperedge(nested), ts("2024-09-01")).unwrap();
        let g = project_binary(&s.snapshot());
        assert!(g.nodes.contains("e0"));
        assert!(g.contains_pair("C", "e0"));
    }

    #[test]
    fn preimage_counts_worked_cases() {
        // Empty graph: only the empty hypergraph projects to it.
        assert_eq!(count_preimages(&BinaryGraph::default(), 6).unwrap(), 1);

        // A single pair and a triangle-free path are uniquely invertible.
        let mut pair = BinaryGraph::default();
        pair.add_pair("a", "b");
        assert_eq!(count_preimages(&pair, 6).unwrap(), 1);
        let mut path = BinaryGraph::default();
        path.add_pair("a", "b");
        path.add_pair("b", "c");
        assert_eq!(count_preimages(&path, 6).unwrap(), 1);

        // The triangle: regression constant from the enumeration itself.
        // Witnesses include the 3-ary edge alone and the three pairs.
        let s = store_with_edges(&[&["x", "y", "z"]]);
        let g = project_binary(&s.snapshot());
        let n = count_preimages(&g, 6).unwrap();
        assert!(n > 1);
        assert_eq!(n, 9);
    }

    #[test]
    fn preimage_enumeration_is_bounded() {
        let mut g = BinaryGraph::default();
        for i in 0..7 {
            g.nodes.insert(format!("n{i}"));
        }
        assert_eq!(
            count_preimages(&g, 10),
            Err(ProjectionError::TooLarge { nodes: 7, limit: 6 })
        );
        assert_eq!(
            count_preimages(&g, 3),
            Err(ProjectionError::TooLarge { nodes: 7, limit: 3 })
        );
    }

    #[test]
    fn binary_only_stores_round_trip() {
        let mut rng = StdRng::seed_from_u64(0xb17a);
        for _ in 0..30 {
            let n = rng.gen_range(2..=7);
            let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let mut want = BinaryGraph::default();
            for name in &names {
                want.nodes.insert(name.clone());
            }
            let mut pairs = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    if rng.gen_bool(0.4) {
                        want.add_pair(&names[i], &names[j]);
                        pairs.push([names[i].clone(), names[j].clone()]);
                    }
                }
            }
            let pair_refs: Vec<Vec<&str>> =
                pairs.iter().map(|p| vec![p[0].as_str(), p[1].as_str()]).collect();
            let mut all: Vec<&[&str]> = pair_refs.iter().map(|v| v.as_slice()).collect();
            let s = {
                let mut s = Store::new();
                for name in &names {
                    s.append_at(
                        Payload::AddVertex(Vertex::new(name, Default::default()).unwrap()),
                        ts("2024-09-01"),
                    )
                    .unwrap();
                }
                for (i, parts) in all.drain(..).enumerate() {
                    let e = EdgeSpec::new(
                        parts.iter().copied().map(Participant::of).collect(),
                        ts("2024-01-01"),
                        IntervalEnd::Unbounded,
                        0.9,
                    )
                    .with_id(format!("p{i}"))
                    .build(&AcceptAllRefs)
                    .unwrap();
                    s.append_at(Payload::AddHyperedge(e), ts("2024-09-01")).unwrap();
                }
                s
            };
            assert_eq!(project_binary(&s.snapshot()), want);
        }
    }

    #[test]
    fn jensen_bound_holds_on_random_stores() {
        let mut rng = StdRng::seed_from_u64(0x11ee);
        for _ in 0..50 {
            let nv = rng.gen_range(3..=9);
            let names: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
            let ne = rng.gen_range(1..=10);
            let edge_lists: Vec<Vec<&str>> = (0..ne)
                .map(|_| {
                    let arity = rng.gen_range(1..=nv.min(6));
                    let mut pool: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
                    (0..arity)
                        .map(|_| pool.remove(rng.gen_range(0..pool.len())))
                        .collect()
                })
                .collect();
            let refs: Vec<&[&str]> = edge_lists.iter().map(|v| v.as_slice()).collect();
            let report = ambiguity_bound(&store_with_edges(&refs).snapshot());
            assert!(
                report.total_bits as f64 >= report.theorem_bound_bits - 1e-9,
                "Jensen violated: total {} < bound {}",
                report.total_bits,
                report.theorem_bound_bits
            );
            let uniform = report
                .per_edge_bits
                .windows(2)
                .all(|w| w[0] == w[1]);
            if uniform {
                assert!(
                    (report.total_bits as f64 - report.theorem_bound_bits).abs() < 1e-9
                        || report.per_edge_bits.is_empty()
                );
            }
        }
    }

    #[test]
    fn gap_report_components_and_selection() {
        let snap = eight_ary().snapshot();
        let none = expressiveness_gap(&snap, &BTreeSet::new());
        assert_eq!(none.missing_bits, 0);
        let p1 = expressiveness_gap(&snap, &BTreeSet::from([Pillar::Structural]));
        assert_eq!(p1.missing_bits, 28);

        // Two edges, arities 3 and 2: hand-computed componentwise.
        let s = store_with_edges(&[&["a", "b", "c"], &["c", "d"]]);
        let all = expressiveness_gap(&s.snapshot(), &BTreeSet::from_iter(Pillar::ALL));
        assert_eq!(all.components.structural, 4);
        assert_eq!(all.components.temporal, 512);
        assert_eq!(all.components.confidence, 106);
        assert_eq!(all.components.causal, 4);
        assert_eq!(all.missing_bits, 626);
    }

    #[test]
    fn pillar_names_parse_both_ways() {
        assert_eq!("P1".parse::<Pillar>().unwrap(), Pillar::Structural);
        assert_eq!("p3".parse::<Pillar>().unwrap(), Pillar::Confidence);
        assert_eq!("temporal".parse::<Pillar>().unwrap(), Pillar::Temporal);
        assert_eq!("causal".parse::<Pillar>().unwrap(), Pillar::Causal);
        assert!("P9".parse::<Pillar>().is_err());
        assert_eq!(Pillar::Causal.to_string(), "causal");
    }

    #[test]
    fn loss_report_renders_canonically() {
        let line = ambiguity_bound(&eight_ary().snapshot()).to_canonical();
        assert!(line.starts_with("{\"avg_arity\":"));
        assert!(line.contains("\"total_bits\":28"));
        assert!(line.contains("\"structural\":28"));
        assert!(!line.contains('\n'));
    }
}
