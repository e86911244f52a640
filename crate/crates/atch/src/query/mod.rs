//! Pattern queries over snapshots: parsing, α-acyclicity via GYO
//! reduction, and join-tree evaluation with predicate pushdown.
//!
//! The supported fragment is conjunctive hyperedge patterns whose
//! template hypergraph is α-acyclic, optionally filtered by a temporal
//! window, a point-in-time constraint, and confidence floors. Cyclic
//! patterns are rejected up front; [`evaluate_bruteforce`] exists as a
//! desk-scale escape hatch and as the oracle the evaluator is tested
//! against.

pub mod acyclic;
pub mod bench;
mod parse;

pub use acyclic::{is_alpha_acyclic, Acyclicity, JoinEdge, JoinTree};
pub use bench::{run_benchmark_suite, BenchResult};
pub use parse::{parse_query, SyntaxError};

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::model::{AttrValue, CompareOp, EdgeId, Hyperedge, TimeInterval, Timestamp};
use crate::store::Snapshot;

#[derive(Debug, Error)]
pub enum QueryError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("pattern is not α-acyclic; irreducible templates: {residue:?}")]
    Cyclic { residue: Vec<usize> },
    #[error("constant {0:?} names no vertex or hyperedge in this snapshot")]
    UnknownConstant(String),
    #[error("pattern has no templates")]
    EmptyPattern,
    #[error("benchmark fixture is incomplete: missing {0}")]
    FixtureMissing(String),
}

/// One slot of a template: a join variable (optionally pinned to a
/// participant role) or a constant id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var { name: String, role: Option<String> },
    Const(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttrPredicate {
    pub key: String,
    pub op: CompareOp,
    pub value: AttrValue,
}

/// A single hyperedge pattern. Matches edges of exactly this arity; the
/// terms are assigned to participants in any order (hyperedges are sets)
/// unless a role constraint pins a term down.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeTemplate {
    pub terms: Vec<Term>,
    pub predicates: Vec<AttrPredicate>,
    pub min_confidence: Option<f64>,
}

impl EdgeTemplate {
    pub fn arity(&self) -> usize {
        self.terms.len()
    }

    pub fn variables(&self) -> BTreeSet<&str> {
        self.terms
            .iter()
            .filter_map(|t| match t {
                Term::Var { name, .. } => Some(name.as_str()),
                Term::Const(_) => None,
            })
            .collect()
    }

    pub fn constants(&self) -> BTreeSet<&str> {
        self.terms
            .iter()
            .filter_map(|t| match t {
                Term::Const(c) => Some(c.as_str()),
                Term::Var { .. } => None,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatternQuery {
    pub templates: Vec<EdgeTemplate>,
    /// Keep only edges whose effective validity overlaps this window.
    pub window: Option<TimeInterval>,
    /// Keep only edges valid at this instant.
    pub at_time: Option<Timestamp>,
    /// Keep only edges with effective confidence strictly above this.
    pub min_confidence: Option<f64>,
}

impl PatternQuery {
    pub fn parse(text: &str) -> Result<PatternQuery, SyntaxError> {
        parse_query(text)
    }
}

/// One result row: a consistent assignment of every variable, plus the
/// edge matched by each template, in template order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BindingRow {
    pub vars: BTreeMap<String, String>,
    pub edges: Vec<EdgeId>,
}

#[derive(Debug, Clone, Copy)]
pub struct EvalOptions {
    /// Apply temporal/confidence/attribute filters at the leaf scans.
    /// Turning this off defers all filtering to after the join; the
    /// bindings are identical either way.
    pub pushdown: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { pushdown: true }
    }
}

/// Per-template observability: how many edges entered the matcher and
/// how many produced at least one assignment.
#[derive(Debug, Clone, Default)]
pub struct EvalStats {
    pub scanned: Vec<usize>,
    pub matched: Vec<usize>,
}

pub fn evaluate(snap: &Snapshot, pattern: &PatternQuery) -> Result<Vec<BindingRow>, QueryError> {
    evaluate_with(snap, pattern, EvalOptions::default()).map(|(rows, _)| rows)
}

pub fn evaluate_with(
    snap: &Snapshot,
    pattern: &PatternQuery,
    opts: EvalOptions,
) -> Result<(Vec<BindingRow>, EvalStats), QueryError> {
    if pattern.templates.is_empty() {
        return Err(QueryError::EmptyPattern);
    }
    check_constants(snap, pattern)?;
    let tree = match is_alpha_acyclic(pattern) {
        Acyclicity::Acyclic(tree) => tree,
        Acyclicity::Cyclic { residue } => return Err(QueryError::Cyclic { residue }),
    };

    // Leaf scans.
    let n = pattern.templates.len();
    let mut stats = EvalStats { scanned: vec![0; n], matched: vec![0; n] };
    let mut relations: Vec<Vec<Row>> = Vec::with_capacity(n);
    for (i, tpl) in pattern.templates.iter().enumerate() {
        let mut rel = Vec::new();
        for id in snap.edge_ids() {
            if opts.pushdown && !passes_filters(snap, id, tpl, pattern) {
                continue;
            }
            stats.scanned[i] += 1;
            let edge = snap.raw_edge(id).expect("listed id resolves");
            let envs = template_matches(tpl, edge);
            if !envs.is_empty() {
                stats.matched[i] += 1;
            }
            for env in envs {
                rel.push(Row { env, edge: id.clone() });
            }
        }
        relations.push(rel);
    }

    // Yannakakis semijoin sweeps: child → parent, then parent → child.
    let order = tree.bfs_order(n);
    for &node in order.iter().rev() {
        for child in tree.children(node) {
            let edge = tree
                .edges
                .iter()
                .find(|e| e.parent == node && e.child == child)
                .expect("tree edge exists");
            let keys = project_keys(&relations[child], &edge.shared);
            relations[node].retain(|row| keys.contains(&key_of(row, &edge.shared)));
        }
    }
    for &node in &order {
        for child in tree.children(node) {
            let edge = tree
                .edges
                .iter()
                .find(|e| e.parent == node && e.child == child)
                .expect("tree edge exists");
            let keys = project_keys(&relations[node], &edge.shared);
            relations[child].retain(|row| keys.contains(&key_of(row, &edge.shared)));
        }
    }

    // Merge along the tree, enforcing full-environment consistency.
    let mut results: BTreeSet<BindingRow> = BTreeSet::new();
    type Partial = (BTreeMap<String, String>, Vec<Option<EdgeId>>);
    let mut partial: Vec<Partial> =
        vec![(BTreeMap::new(), vec![None; n])];
    for &node in &order {
        let mut next = Vec::new();
        for (env, edges) in &partial {
            for row in &relations[node] {
                if let Some(merged) = merge_env(env, &row.env) {
                    let mut edges = edges.clone();
                    edges[node] = Some(row.edge.clone());
                    next.push((merged, edges));
                }
            }
        }
        partial = next;
    }
    for (env, edges) in partial {
        let edges: Vec<EdgeId> = edges.into_iter().map(|e| e.expect("every template bound")).collect();
        let keep = opts.pushdown
            || edges
                .iter()
                .zip(&pattern.templates)
                .all(|(id, tpl)| passes_filters(snap, id, tpl, pattern));
        if keep {
            results.insert(BindingRow { vars: env, edges });
        }
    }
    Ok((results.into_iter().collect(), stats))
}

/// Reference evaluator: nested-loop enumeration with no acyclicity
/// requirement and all filtering applied after the join.
pub fn evaluate_bruteforce(
    snap: &Snapshot,
    pattern: &PatternQuery,
) -> Result<Vec<BindingRow>, QueryError> {
    if pattern.templates.is_empty() {
        return Err(QueryError::EmptyPattern);
    }
    check_constants(snap, pattern)?;
    let n = pattern.templates.len();
    let mut partial: Vec<(BTreeMap<String, String>, Vec<EdgeId>)> =
        vec![(BTreeMap::new(), Vec::new())];
    for tpl in &pattern.templates {
        let mut next = Vec::new();
        for id in snap.edge_ids() {
            let edge = snap.raw_edge(id).expect("listed id resolves");
            for env in template_matches(tpl, edge) {
                for (acc, edges) in &partial {
                    if let Some(merged) = merge_env(acc, &env) {
                        let mut edges = edges.clone();
                        edges.push(id.clone());
                        next.push((merged, edges));
                    }
                }
            }
        }
        partial = next;
    }
    let mut results: BTreeSet<BindingRow> = BTreeSet::new();
    for (env, edges) in partial {
        debug_assert_eq!(edges.len(), n);
        if edges
            .iter()
            .zip(&pattern.templates)
            .all(|(id, tpl)| passes_filters(snap, id, tpl, pattern))
        {
            results.insert(BindingRow { vars: env, edges });
        }
    }
    Ok(results.into_iter().collect())
}

struct Row {
    env: BTreeMap<String, String>,
    edge: EdgeId,
}

/// The distinct edges mentioned across a result set, sorted.
pub fn distinct_edges(rows: &[BindingRow]) -> Vec<EdgeId> {
    let mut set: Vec<EdgeId> = rows.iter().flat_map(|r| r.edges.iter().cloned()).collect();
    set.sort();
    set.dedup();
    set
}

fn check_constants(snap: &Snapshot, pattern: &PatternQuery) -> Result<(), QueryError> {
    for tpl in &pattern.templates {
        for c in tpl.constants() {
            if !snap.contains_vertex(c) && !snap.contains_edge(&EdgeId::new(c)) {
                return Err(QueryError::UnknownConstant(c.to_string()));
            }
        }
    }
    Ok(())
}

/// Non-structural filters for a candidate edge: attribute predicates,
/// confidence floors, and the query's temporal constraints.
fn passes_filters(snap: &Snapshot, id: &EdgeId, tpl: &EdgeTemplate, q: &PatternQuery) -> bool {
    let Some(edge) = snap.raw_edge(id) else { return false };
    for pred in &tpl.predicates {
        match edge.attributes.get(&pred.key) {
            Some(v) if v.compare(pred.op, &pred.value) => {}
            _ => return false,
        }
    }
    let floor = match (q.min_confidence, tpl.min_confidence) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    };
    if let Some(floor) = floor {
        let conf = snap.effective_confidence(id).expect("edge exists");
        if conf.value() <= floor {
            return false;
        }
    }
    if q.at_time.is_some() || q.window.is_some() {
        let Some(iv) = snap.effective_interval(id) else { return false };
        if let Some(t) = q.at_time {
            if !iv.contains(t) {
                return false;
            }
        }
        if let Some(w) = &q.window {
            if !iv.intersects(w) {
                return false;
            }
        }
    }
    true
}

/// All ways to assign the template's terms to the edge's participants:
/// a bijection between term slots and participant slots honoring
/// constants, role constraints, and repeated-variable consistency.
/// Returns the distinct variable environments.
fn template_matches(tpl: &EdgeTemplate, edge: &Hyperedge) -> Vec<BTreeMap<String, String>> {
    if edge.participants.len() != tpl.terms.len() {
        return Vec::new();
    }
    let k = tpl.terms.len();
    let mut out = BTreeSet::new();
    let mut used = vec![false; k];
    let mut env: BTreeMap<String, String> = BTreeMap::new();

    fn go(
        tpl: &EdgeTemplate,
        edge: &Hyperedge,
        i: usize,
        used: &mut Vec<bool>,
        env: &mut BTreeMap<String, String>,
        out: &mut BTreeSet<BTreeMap<String, String>>,
    ) {
        if i == tpl.terms.len() {
            out.insert(env.clone());
            return;
        }
        for s in 0..edge.participants.len() {
            if used[s] {
                continue;
            }
            let p = &edge.participants[s];
            match &tpl.terms[i] {
                Term::Const(c) => {
                    if p.target.as_str() != c {
                        continue;
                    }
                    used[s] = true;
                    go(tpl, edge, i + 1, used, env, out);
                    used[s] = false;
                }
                Term::Var { name, role } => {
                    if let Some(required) = role {
                        if p.role.as_deref() != Some(required.as_str()) {
                            continue;
                        }
                    }
                    let target = p.target.as_str().to_string();
                    match env.get(name) {
                        Some(bound) if *bound != target => continue,
                        Some(_) => {
                            used[s] = true;
                            go(tpl, edge, i + 1, used, env, out);
                            used[s] = false;
                        }
                        None => {
                            env.insert(name.clone(), target);
                            used[s] = true;
                            go(tpl, edge, i + 1, used, env, out);
                            used[s] = false;
                            env.remove(name);
                        }
                    }
                }
            }
        }
    }

    go(tpl, edge, 0, &mut used, &mut env, &mut out);
    out.into_iter().collect()
}

fn merge_env(
    a: &BTreeMap<String, String>,
    b: &BTreeMap<String, String>,
) -> Option<BTreeMap<String, String>> {
    let mut merged = a.clone();
    for (k, v) in b {
        match merged.get(k) {
            Some(existing) if existing != v => return None,
            Some(_) => {}
            None => {
                merged.insert(k.clone(), v.clone());
            }
        }
    }
    Some(merged)
}

fn key_of(row: &Row, shared: &BTreeSet<String>) -> Vec<String> {
    shared
        .iter()
        .map(|v| row.env.get(v).cloned().unwrap_or_default())
        .collect()
}

fn project_keys(rows: &[Row], shared: &BTreeSet<String>) -> BTreeSet<Vec<String>> {
    rows.iter().map(|r| key_of(r, shared)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{benchmark_store, ts};
    use crate::model::{AcceptAllRefs, EdgeSpec, IntervalEnd, Participant, Vertex};
    use crate::store::{Payload, Store};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn q(text: &str) -> PatternQuery {
        parse_query(text).unwrap()
    }

    #[test]
    fn three_way_meeting_yields_all_assignments_of_one_edge() {
        let snap = benchmark_store().snapshot();
        let rows = evaluate(&snap, &q("match (x, y, z) { type = meeting, productive = true }"))
            .unwrap();
        // Unordered matching: six ways to lay three variables over three
        // participants, all of the same edge.
        assert_eq!(rows.len(), 6);
        assert!(rows.iter().all(|r| r.edges == vec![EdgeId::new("meeting_q1")]));
        let people: BTreeSet<&str> = rows[0].vars.values().map(|s| s.as_str()).collect();
        assert_eq!(people, BTreeSet::from(["Alice", "Bob", "Carol"]));
    }

    #[test]
    fn constants_pin_participants() {
        let snap = benchmark_store().snapshot();
        let rows = evaluate(&snap, &q("match (Alice, e) { type = employment }")).unwrap();
        let employers: BTreeSet<&str> =
            rows.iter().map(|r| r.vars["e"].as_str()).collect();
        assert_eq!(employers, BTreeSet::from(["Acme", "Initech"]));

        let err = evaluate(&snap, &q("match (Zorp, e)")).unwrap_err();
        assert!(matches!(err, QueryError::UnknownConstant(c) if c == "Zorp"));
    }

    #[test]
    fn role_constraints_pin_slots() {
        let snap = benchmark_store().snapshot();
        let rows = evaluate(&snap, &q("match (d:prescriber, g:drug, p)")).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].vars["d"], "DrSmith");
        assert_eq!(rows[0].vars["g"], "DrugX");
        assert_eq!(rows[0].vars["p"], "PatientP");
    }

    #[test]
    fn temporal_clauses_filter_by_effective_validity() {
        let snap = benchmark_store().snapshot();
        // Acme employment was terminated effective 2024-06-30.
        let at_june = evaluate(
            &snap,
            &q("match (Alice, e) { type = employment } at time 2024-06-15"),
        )
        .unwrap();
        assert_eq!(at_june.len(), 1);
        assert_eq!(at_june[0].vars["e"], "Acme");

        let during = evaluate(
            &snap,
            &q("match (x, y) { type = travel } during [2024-04-11, 2024-04-11T23:59:59]"),
        )
        .unwrap();
        let edges = distinct_edges(&during);
        assert_eq!(edges, vec![EdgeId::new("travel_hotel")]);
    }

    #[test]
    fn joins_share_variables_across_templates() {
        let snap = benchmark_store().snapshot();
        let rows = evaluate(
            &snap,
            &q("match (a, b) { type = employment } (a, c, d) { type = meeting }"),
        )
        .unwrap();
        // a is forced to Alice; two employments × two seatings.
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.vars["a"] == "Alice"));
    }

    #[test]
    fn distinct_variables_may_bind_the_same_entity() {
        let snap = benchmark_store().snapshot();
        let rows = evaluate(&snap, &q("match (x, y) { mode = flight } (y, z) { mode = flight }"))
            .unwrap();
        assert!(
            rows.iter().any(|r| r.vars["x"] == r.vars["z"]),
            "homomorphism semantics: x and z should be able to coincide"
        );
    }

    #[test]
    fn repeated_variable_requires_repeated_participant() {
        let mut s = Store::new();
        s.append_at(Payload::AddVertex(Vertex::new("P", Default::default()).unwrap()), ts("2024-09-01"))
            .unwrap();
        s.append_at(Payload::AddVertex(Vertex::new("Q", Default::default()).unwrap()), ts("2024-09-01"))
            .unwrap();
        for (id, parts) in [
            ("self_pair", vec![Participant::of("P"), Participant::of("P")]),
            ("plain_pair", vec![Participant::of("P"), Participant::of("Q")]),
        ] {
            let e = EdgeSpec::new(parts, ts("2024-01-01"), IntervalEnd::Unbounded, 1.0)
                .with_id(id)
                .build(&AcceptAllRefs)
                .unwrap();
            s.append_at(Payload::AddHyperedge(e), ts("2024-09-01")).unwrap();
        }
        let rows = evaluate(&s.snapshot(), &q("match (w, w)")).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].edges, vec![EdgeId::new("self_pair")]);
    }

    #[test]
    fn cyclic_patterns_are_rejected_but_bruteforce_answers() {
        let mut s = Store::new();
        for v in ["A", "B", "C"] {
            s.append_at(Payload::AddVertex(Vertex::new(v, Default::default()).unwrap()), ts("2024-09-01"))
                .unwrap();
        }
        for (id, a, b) in [("ab", "A", "B"), ("bc", "B", "C"), ("ca", "C", "A")] {
            let e = EdgeSpec::new(
                vec![Participant::of(a), Participant::of(b)],
                ts("2024-01-01"),
                IntervalEnd::Unbounded,
                1.0,
            )
            .with_id(id)
            .build(&AcceptAllRefs)
            .unwrap();
            s.append_at(Payload::AddHyperedge(e), ts("2024-09-01")).unwrap();
        }
        let snap = s.snapshot();
        let triangle = q("match (x, y) (y, z) (z, x)");
        assert!(matches!(
            evaluate(&snap, &triangle),
            Err(QueryError::Cyclic { .. })
        ));
        let rows = evaluate_bruteforce(&snap, &triangle).unwrap();
        assert_eq!(rows.len(), 6);
    }

    #[test]
    fn empty_cases() {
        let snap = Store::new().snapshot();
        assert!(evaluate(&snap, &q("match (x, y)")).unwrap().is_empty());
        let empty = PatternQuery {
            templates: vec![],
            window: None,
            at_time: None,
            min_confidence: None,
        };
        assert!(matches!(
            evaluate(&snap, &empty),
            Err(QueryError::EmptyPattern)
        ));
    }

    fn random_store(rng: &mut StdRng) -> Store {
        let mut s = Store::new();
        let nv = rng.gen_range(4..=8);
        for i in 0..nv {
            s.append_at(
                Payload::AddVertex(Vertex::new(format!("v{i}"), Default::default()).unwrap()),
                ts("2024-09-01"),
            )
            .unwrap();
        }
        let ne = rng.gen_range(3..=14);
        for j in 0..ne {
            let arity = rng.gen_range(2..=3);
            let mut pool: Vec<usize> = (0..nv).collect();
            let mut parts = Vec::new();
            for _ in 0..arity {
                let k = rng.gen_range(0..pool.len());
                parts.push(Participant::of(format!("v{}", pool.remove(k))));
            }
            let day = rng.gen_range(1..=27);
            let start = ts(&format!("2024-03-{day:02}"));
            let end = if rng.gen_bool(0.3) {
                IntervalEnd::Unbounded
            } else {
                IntervalEnd::At(ts(&format!("2024-{:02}-{day:02}", rng.gen_range(4..=6))))
            };
            let kind = ["alpha", "beta", "gamma"][rng.gen_range(0..3)];
            let e = EdgeSpec::new(parts, start, end, rng.gen_range(0.05..1.0))
                .with_id(format!("e{j}"))
                .with_attr("type", kind)
                .build(&AcceptAllRefs)
                .unwrap();
            s.append_at(Payload::AddHyperedge(e), ts("2024-09-01")).unwrap();
        }
        s
    }

    fn random_acyclic_pattern(rng: &mut StdRng) -> PatternQuery {
        let nt = rng.gen_range(1..=3);
        let mut templates = Vec::new();
        for i in 0..nt {
            let arity = rng.gen_range(2..=3);
            let mut terms = Vec::new();
            for a in 0..arity {
                if i > 0 && a == 0 {
                    // Chain-share one variable with the previous template:
                    // built ear-by-ear, hence α-acyclic.
                    terms.push(Term::Var { name: format!("s{}", i - 1), role: None });
                } else if a == 1 {
                    terms.push(Term::Var { name: format!("s{i}"), role: None });
                } else {
                    terms.push(Term::Var { name: format!("x{i}_{a}"), role: None });
                }
            }
            let predicates = if rng.gen_bool(0.5) {
                vec![AttrPredicate {
                    key: "type".into(),
                    op: if rng.gen_bool(0.5) { CompareOp::Eq } else { CompareOp::Ne },
                    value: crate::model::AttrValue::Str(
                        ["alpha", "beta", "gamma"][rng.gen_range(0..3)].into(),
                    ),
                }]
            } else {
                vec![]
            };
            templates.push(EdgeTemplate { terms, predicates, min_confidence: None });
        }
        PatternQuery {
            templates,
            window: rng.gen_bool(0.3).then(|| {
                crate::model::TimeInterval::between(ts("2024-03-10"), ts("2024-04-15")).unwrap()
            }),
            at_time: rng.gen_bool(0.3).then(|| ts("2024-03-20")),
            min_confidence: rng.gen_bool(0.5).then(|| rng.gen_range(0.2..0.8)),
        }
    }

    #[test]
    fn evaluator_matches_bruteforce_on_random_instances() {
        let mut rng = StdRng::seed_from_u64(0x9e7a);
        for round in 0..40 {
            let store = random_store(&mut rng);
            let snap = store.snapshot();
            let pattern = random_acyclic_pattern(&mut rng);
            let fast = evaluate(&snap, &pattern)
                .unwrap_or_else(|e| panic!("round {round}: {e}"));
            let slow = evaluate_bruteforce(&snap, &pattern).unwrap();
            assert_eq!(fast, slow, "round {round} diverged");

            // Pushdown is an optimization, never a semantic change.
            let (unpushed, _) =
                evaluate_with(&snap, &pattern, EvalOptions { pushdown: false }).unwrap();
            assert_eq!(fast, unpushed, "round {round}: pushdown changed the answer");
        }
    }

    #[test]
    fn pushdown_bounds_the_working_set() {
        let mut rng = StdRng::seed_from_u64(0x77aa);
        for _ in 0..20 {
            let store = random_store(&mut rng);
            let snap = store.snapshot();
            let mut pattern = random_acyclic_pattern(&mut rng);
            pattern.min_confidence = Some(0.6);
            pattern.at_time = Some(ts("2024-03-20"));
            let (_, stats) =
                evaluate_with(&snap, &pattern, EvalOptions { pushdown: true }).unwrap();
            let admissible = snap
                .edge_ids()
                .filter(|id| {
                    let conf_ok = snap
                        .effective_confidence(id)
                        .map(|c| c.value() > 0.6)
                        .unwrap_or(false);
                    let time_ok = snap
                        .effective_interval(id)
                        .map(|iv| iv.contains(ts("2024-03-20")))
                        .unwrap_or(false);
                    conf_ok && time_ok
                })
                .count();
            for scanned in stats.scanned {
                assert!(
                    scanned <= admissible,
                    "leaf scan {scanned} exceeds admissible {admissible}"
                );
            }
        }
    }

    #[test]
    fn benchmark_suite_passes_on_the_fixture() {
        let store = benchmark_store();
        let results = run_benchmark_suite(&store).unwrap();
        assert_eq!(results.len(), 7);
        for r in &results {
            assert!(r.passed, "{} failed: {}", r.name, r.detail);
        }
        assert!((results[4].value.unwrap() - bench::PRESCRIPTION_CHAIN).abs() < 1e-9);
    }

    #[test]
    fn benchmark_suite_requires_the_fixture() {
        assert!(matches!(
            run_benchmark_suite(&Store::new()),
            Err(QueryError::FixtureMissing(_))
        ));
    }
}
