//! Time-travel reads over a snapshot: point-in-time and interval validity,
//! plus the causal blast radius of an edge.
//!
//! Validity is closed on both bounds and persistent by default: an edge
//! whose interval is `[start, infinity)` stays valid at every later
//! instant until something (a termination, or an inhibitor considered by
//! [`crate::causal::active_defaults`]) says otherwise. Point events with
//! `start = end` are first-class and show up exactly at their instant.

use std::collections::{BTreeSet, VecDeque};

use crate::model::{Confidence, EdgeId, TimeInterval, Timestamp};
use crate::store::{Snapshot, StoreError};

/// Result of a point-in-time query: which edges were valid, and the exact
/// coordinates the answer refers to in both time dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct AtTimeResult {
    pub edges: BTreeSet<EdgeId>,
    /// The valid-time instant that was asked about.
    pub valid_time: Timestamp,
    /// The log position the answer was computed from. Re-running against
    /// the same prefix gives the same answer.
    pub as_of_seq: u64,
}

/// All edges whose effective valid interval contains `t`.
pub fn at_time(snap: &Snapshot, t: Timestamp) -> AtTimeResult {
    at_time_with_floor(snap, t, None)
}

/// Point-in-time query with an explicit confidence floor. Filtering is
/// strictly greater-than and only happens when a floor is passed; there is
/// no implicit threshold anywhere in the read path.
pub fn at_time_with_floor(
    snap: &Snapshot,
    t: Timestamp,
    min_confidence: Option<Confidence>,
) -> AtTimeResult {
    let edges = snap
        .edges_valid_at(t)
        .into_iter()
        .filter(|id| match min_confidence {
            Some(floor) => {
                snap.effective_confidence(id)
                    .expect("indexed edges exist")
                    .value()
                    > floor.value()
            }
            None => true,
        })
        .collect();
    AtTimeResult {
        edges,
        valid_time: t,
        as_of_seq: snap.as_of_seq(),
    }
}

/// All edges whose effective valid interval intersects the closed window.
pub fn valid_in_interval(snap: &Snapshot, window: &TimeInterval) -> BTreeSet<EdgeId> {
    snap.edges_valid_in(window).into_iter().collect()
}

/// Everything causally affected by or affecting `edge`: the strict
/// ancestors and strict descendants under the transitive closure of the
/// causal order. The edge itself is not part of its own blast radius.
pub fn blast_radius(snap: &Snapshot, edge: &EdgeId) -> Result<BTreeSet<EdgeId>, StoreError> {
    if !snap.contains_edge(edge) {
        return Err(StoreError::UnknownEdge(edge.as_str().to_string()));
    }
    let mut out = closure(snap, edge, Direction::Up);
    out.extend(closure(snap, edge, Direction::Down));
    out.remove(edge);
    Ok(out)
}

/// Strict ancestors of `edge`: every edge that reaches it through links.
pub fn ancestors(snap: &Snapshot, edge: &EdgeId) -> BTreeSet<EdgeId> {
    let mut up = closure(snap, edge, Direction::Up);
    up.remove(edge);
    up
}

/// Strict descendants of `edge`: every edge it reaches through links.
pub fn descendants(snap: &Snapshot, edge: &EdgeId) -> BTreeSet<EdgeId> {
    let mut down = closure(snap, edge, Direction::Down);
    down.remove(edge);
    down
}

enum Direction {
    Up,
    Down,
}

fn closure(snap: &Snapshot, from: &EdgeId, dir: Direction) -> BTreeSet<EdgeId> {
    let mut seen = BTreeSet::from([from.clone()]);
    let mut queue = VecDeque::from([from.clone()]);
    while let Some(cur) = queue.pop_front() {
        let next = match dir {
            Direction::Up => snap.causes_of(&cur),
            Direction::Down => snap.effects_of(&cur),
        };
        for link in next {
            let n = match dir {
                Direction::Up => &link.cause,
                Direction::Down => &link.effect,
            };
            if seen.insert(n.clone()) {
                queue.push_back(n.clone());
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        AcceptAllRefs, CausalLink, EdgeSpec, IntervalEnd, Participant, Timestamp,
    };
    use crate::store::{Payload, Store};

    fn ts(s: &str) -> Timestamp {
        Timestamp::parse_flex(s).unwrap()
    }

    fn id(s: &str) -> EdgeId {
        EdgeId::new(s)
    }

    /// Employment history: edge valid [2024-01-01, inf) later terminated
    /// at 2024-06-30, successor valid [2024-07-15, inf).
    fn employment() -> Store {
        let mut s = Store::new();
        let mut tx = 0;
        let mut next_tx = || {
            tx += 1;
            Timestamp::from_micros(1_700_000_000_000_000 + tx * 1_000_000)
        };
        for v in ["Alice", "AcmeCorp", "Initech"] {
            s.append_at(
                Payload::AddVertex(crate::model::Vertex::new(v, Default::default()).unwrap()),
                next_tx(),
            )
            .unwrap();
        }
        let acme = EdgeSpec::new(
            vec![Participant::of("Alice"), Participant::of("AcmeCorp")],
            ts("2024-01-01"),
            IntervalEnd::Unbounded,
            1.0,
        )
        .with_id("acme")
        .build(&AcceptAllRefs)
        .unwrap();
        s.append_at(Payload::AddHyperedge(acme), next_tx()).unwrap();
        s.append_at(
            Payload::Terminate {
                edge: id("acme"),
                end: ts("2024-06-30"),
            },
            next_tx(),
        )
        .unwrap();
        let initech = EdgeSpec::new(
            vec![Participant::of("Alice"), Participant::of("Initech")],
            ts("2024-07-15"),
            IntervalEnd::Unbounded,
            1.0,
        )
        .with_id("initech")
        .build(&AcceptAllRefs)
        .unwrap();
        s.append_at(Payload::AddHyperedge(initech), next_tx())
            .unwrap();
        s
    }

    #[test]
    fn at_time_respects_terminations_and_persistence() {
        let snap = employment().snapshot();
        let during = at_time(&snap, ts("2024-03-01"));
        assert_eq!(during.edges, BTreeSet::from([id("acme")]));
        // Gap between jobs: nothing valid.
        let gap = at_time(&snap, ts("2024-07-05"));
        assert!(gap.edges.is_empty());
        // Open-ended edge persists arbitrarily far forward.
        let later = at_time(&snap, ts("2030-01-01"));
        assert_eq!(later.edges, BTreeSet::from([id("initech")]));
        // Termination instant itself is still valid (closed interval).
        let boundary = at_time(&snap, ts("2024-06-30"));
        assert_eq!(boundary.edges, BTreeSet::from([id("acme")]));
    }

    #[test]
    fn at_time_reports_both_coordinates() {
        let store = employment();
        let snap = store.snapshot();
        let r = at_time(&snap, ts("2024-03-01"));
        assert_eq!(r.valid_time, ts("2024-03-01"));
        assert_eq!(r.as_of_seq, store.last_seq());
        // Same valid time, earlier log prefix: different answer.
        let early = store.snapshot_at(4).unwrap();
        let r2 = at_time(&early, ts("2024-08-01"));
        assert_eq!(r2.edges, BTreeSet::from([id("acme")]));
        assert_eq!(r2.as_of_seq, 4);
    }

    #[test]
    fn confidence_floor_is_explicit_and_strict() {
        let mut s = Store::new();
        let t0 = Timestamp::from_micros(1_700_000_000_000_000);
        for (eid, conf) in [("hi", 0.9), ("exact", 0.5), ("lo", 0.2)] {
            let e = EdgeSpec::new(
                vec![Participant::of("x")],
                ts("2024-01-01"),
                IntervalEnd::Unbounded,
                conf,
            )
            .with_id(eid)
            .build(&AcceptAllRefs)
            .unwrap();
            if eid == "hi" {
                s.append_at(
                    Payload::AddVertex(crate::model::Vertex::new("x", Default::default()).unwrap()),
                    t0,
                )
                .unwrap();
            }
            s.append_at(Payload::AddHyperedge(e), t0).unwrap();
        }
        let snap = s.snapshot();
        let unfiltered = at_time(&snap, ts("2024-02-01"));
        assert_eq!(unfiltered.edges.len(), 3);
        let floored =
            at_time_with_floor(&snap, ts("2024-02-01"), Some(Confidence::new(0.5).unwrap()));
        // Strictly greater than: the 0.5 edge is excluded.
        assert_eq!(floored.edges, BTreeSet::from([id("hi")]));
    }

    #[test]
    fn interval_query_uses_closed_overlap() {
        let snap = employment().snapshot();
        let window = TimeInterval::between(ts("2024-06-30"), ts("2024-07-15")).unwrap();
        let both = valid_in_interval(&snap, &window);
        assert_eq!(both, BTreeSet::from([id("acme"), id("initech")]));
        let none = TimeInterval::between(ts("2024-07-01"), ts("2024-07-14")).unwrap();
        assert!(valid_in_interval(&snap, &none).is_empty());
    }

    #[test]
    fn blast_radius_covers_both_directions_and_excludes_self() {
        // a -> b -> c, d -> b; blast_radius(b) = {a, d, c}.
        let mut s = Store::new();
        let t0 = Timestamp::from_micros(1_700_000_000_000_000);
        s.append_at(
            Payload::AddVertex(crate::model::Vertex::new("x", Default::default()).unwrap()),
            t0,
        )
        .unwrap();
        for eid in ["a", "b", "c", "d", "island"] {
            let e = EdgeSpec::new(
                vec![Participant::of("x")],
                ts("2024-01-01"),
                IntervalEnd::Unbounded,
                1.0,
            )
            .with_id(eid)
            .build(&AcceptAllRefs)
            .unwrap();
            s.append_at(Payload::AddHyperedge(e), t0).unwrap();
        }
        for (c, e) in [("a", "b"), ("b", "c"), ("d", "b")] {
            s.append_at(
                Payload::AddLink(CausalLink::causes(c, e, "m", 1.0).unwrap()),
                t0,
            )
            .unwrap();
        }
        let snap = s.snapshot();
        let radius = blast_radius(&snap, &id("b")).unwrap();
        assert_eq!(radius, BTreeSet::from([id("a"), id("c"), id("d")]));
        assert!(blast_radius(&snap, &id("island")).unwrap().is_empty());
        assert!(matches!(
            blast_radius(&snap, &id("ghost")),
            Err(StoreError::UnknownEdge(_))
        ));
    }
}
