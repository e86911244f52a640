//! Append-only event store and snapshot materialization.
//!
//! Every mutation is an [`EventRecord`] in a strictly ordered log: nothing
//! is updated in place, corrections append, and terminations narrow an
//! edge's effective valid interval without touching the original record.
//! A [`Snapshot`] is a pure function of a log prefix, so replaying the same
//! log always reconstructs the same state, and `snapshot_at` gives the
//! database as it was known at any past sequence number.
//!
//! ## Log format
//!
//! One record per line:
//!
//! ```text
//! <seq> <tx_time> <tag> <payload>
//! ```
//!
//! `seq` starts at 1 and increments by 1; `tx_time` is RFC 3339 with
//! microsecond precision and never decreases; `tag` is one of `vertex`,
//! `edge`, `terminate`, `link`, `assessment`, `rule`; `payload` is the
//! canonical object form of the event (see [`crate::canon`]). Unbounded
//! interval ends serialize as the string `"infinity"`. Serialization is
//! canonical, so load followed by save is byte-identical.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::Path;

use crate::canon::{self, Value};
use crate::interval::IntervalIndex;
use crate::model::{
    validate_edge, Attrs, CausalLink, ClaimTag, CompareOp, Confidence,
    ConfidenceAssessment, ContextRule, EdgeId, Hyperedge, IntervalEnd, LinkKind, ModelError,
    Participant, ParticipantRef, Polarity, ResolvesRefs, RulePredicate, RuleTarget, TimeInterval,
    Timestamp, Vertex,
};

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("identifier {0:?} already names a vertex, hyperedge, or rule")]
    DuplicateId(String),
    #[error("unknown hyperedge {0:?}")]
    UnknownEdge(String),
    #[error("termination end {end} precedes valid start {start} of {edge:?}")]
    TerminationBeforeStart {
        edge: String,
        start: Timestamp,
        end: Timestamp,
    },
    #[error("link {cause:?} -> {effect:?} would close a causal cycle")]
    CausalCycle { cause: String, effect: String },
    #[error("sequence {requested} out of range; log ends at {last}")]
    SeqOutOfRange { requested: u64, last: u64 },
    #[error("transaction time {tx} at seq {seq} precedes predecessor {last}")]
    TxRegression {
        seq: u64,
        tx: Timestamp,
        last: Timestamp,
    },
    #[error("log line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One appended event.
#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    AddVertex(Vertex),
    AddHyperedge(Hyperedge),
    Terminate { edge: EdgeId, end: Timestamp },
    AddLink(CausalLink),
    AddAssessment(ConfidenceAssessment),
    AddRule(ContextRule),
}

impl Payload {
    pub fn tag(&self) -> &'static str {
        match self {
            Payload::AddVertex(_) => "vertex",
            Payload::AddHyperedge(_) => "edge",
            Payload::Terminate { .. } => "terminate",
            Payload::AddLink(_) => "link",
            Payload::AddAssessment(_) => "assessment",
            Payload::AddRule(_) => "rule",
        }
    }

    pub fn to_canon(&self) -> Value {
        match self {
            Payload::AddVertex(v) => Value::Object(vec![
                ("id".into(), Value::str(v.id.as_str())),
                ("attributes".into(), canon::attr_map(&v.attributes)),
            ]),
            Payload::AddHyperedge(e) => edge_to_canon(e),
            Payload::Terminate { edge, end } => Value::Object(vec![
                ("edge".into(), Value::str(edge.as_str())),
                ("end".into(), canon::timestamp(*end)),
            ]),
            Payload::AddLink(l) => {
                let mut fields = vec![
                    ("cause".into(), Value::str(l.cause.as_str())),
                    ("effect".into(), Value::str(l.effect.as_str())),
                    ("mechanism".into(), Value::str(&l.mechanism)),
                    (
                        "link_confidence".into(),
                        Value::Real(l.link_confidence.value()),
                    ),
                    ("kind".into(), Value::str(l.kind.as_str())),
                ];
                if let Some(c) = l.conditional_confidence {
                    fields.push(("conditional_confidence".into(), Value::Real(c.value())));
                }
                Value::Object(fields)
            }
            Payload::AddAssessment(a) => Value::Object(vec![
                ("target".into(), Value::str(a.target.as_str())),
                ("source".into(), Value::str(&a.source)),
                ("methodology".into(), Value::str(&a.methodology)),
                ("value".into(), Value::Real(a.value.value())),
            ]),
            Payload::AddRule(r) => Value::Object(vec![
                ("id".into(), Value::str(&r.id)),
                (
                    "inhibition_strength".into(),
                    Value::Real(r.inhibition_strength),
                ),
                (
                    "predicate".into(),
                    Value::Object(vec![
                        ("target".into(), Value::str(r.predicate.target.as_str())),
                        ("key".into(), Value::str(&r.predicate.key)),
                        ("op".into(), Value::str(r.predicate.op.as_str())),
                        ("value".into(), canon::attr_value(&r.predicate.value)),
                    ]),
                ),
            ]),
        }
    }

    pub fn from_json(tag: &str, v: &serde_json::Value) -> Result<Payload, String> {
        match tag {
            "vertex" => {
                let id = json_str(v, "id")?;
                let attributes = canon::parse_attr_map(field(v, "attributes")?)?;
                Ok(Payload::AddVertex(
                    Vertex::new(id, attributes).map_err(|e| e.to_string())?,
                ))
            }
            "edge" => edge_from_json(v).map(Payload::AddHyperedge),
            "terminate" => Ok(Payload::Terminate {
                edge: EdgeId::new(json_str(v, "edge")?),
                end: Timestamp::parse_rfc3339(&json_str(v, "end")?)?,
            }),
            "link" => {
                let kind: LinkKind = json_str(v, "kind")?.parse()?;
                let mut link = CausalLink {
                    cause: EdgeId::new(json_str(v, "cause")?),
                    effect: EdgeId::new(json_str(v, "effect")?),
                    mechanism: json_str(v, "mechanism")?,
                    link_confidence: confidence(json_f64(v, "link_confidence")?)?,
                    conditional_confidence: None,
                    kind,
                };
                if let Some(raw) = v.get("conditional_confidence") {
                    let c = raw
                        .as_f64()
                        .ok_or_else(|| "conditional_confidence must be a number".to_string())?;
                    link.conditional_confidence = Some(confidence(c)?);
                }
                Ok(Payload::AddLink(link))
            }
            "assessment" => Ok(Payload::AddAssessment(
                ConfidenceAssessment::new(
                    json_str(v, "target")?,
                    json_str(v, "source")?,
                    json_str(v, "methodology")?,
                    json_f64(v, "value")?,
                )
                .map_err(|e| e.to_string())?,
            )),
            "rule" => {
                let pred = field(v, "predicate")?;
                let predicate = RulePredicate {
                    target: json_str(pred, "target")?.parse::<RuleTarget>()?,
                    key: json_str(pred, "key")?,
                    op: json_str(pred, "op")?.parse::<CompareOp>()?,
                    value: canon::parse_attr_value(field(pred, "value")?)?,
                };
                Ok(Payload::AddRule(
                    ContextRule::new(json_str(v, "id")?, predicate, json_f64(v, "inhibition_strength")?)
                        .map_err(|e| e.to_string())?,
                ))
            }
            other => Err(format!("unknown record tag {other:?}")),
        }
    }
}

fn edge_to_canon(e: &Hyperedge) -> Value {
    let mut fields = vec![
        ("id".into(), Value::str(e.id.as_str())),
        (
            "participants".into(),
            Value::Array(
                e.participants
                    .iter()
                    .map(|p| {
                        let mut f = vec![("ref".into(), Value::str(p.target.as_str()))];
                        if let Some(role) = &p.role {
                            f.push(("role".into(), Value::str(role)));
                        }
                        Value::Object(f)
                    })
                    .collect(),
            ),
        ),
        ("attributes".into(), canon::attr_map(&e.attributes)),
        ("valid_time".into(), interval_to_canon(&e.valid_time)),
        ("confidence".into(), Value::Real(e.confidence.value())),
    ];
    if let Some(claim) = &e.claim {
        fields.push((
            "claim".into(),
            Value::Object(vec![
                ("proposition".into(), Value::str(&claim.proposition)),
                ("polarity".into(), Value::str(claim.polarity.as_str())),
            ]),
        ));
    }
    Value::Object(fields)
}

fn interval_to_canon(iv: &TimeInterval) -> Value {
    let end = match iv.end() {
        IntervalEnd::At(t) => canon::timestamp(t),
        IntervalEnd::Unbounded => Value::str("infinity"),
    };
    Value::Object(vec![
        ("start".into(), canon::timestamp(iv.start())),
        ("end".into(), end),
    ])
}

fn edge_from_json(v: &serde_json::Value) -> Result<Hyperedge, String> {
    let participants = field(v, "participants")?
        .as_array()
        .ok_or_else(|| "participants must be an array".to_string())?
        .iter()
        .map(|p| {
            Ok(Participant {
                target: ParticipantRef::new(json_str(p, "ref")?),
                role: match p.get("role") {
                    Some(serde_json::Value::String(s)) => Some(s.clone()),
                    None => None,
                    Some(other) => return Err(format!("role must be a string, got {other}")),
                },
            })
        })
        .collect::<Result<Vec<_>, String>>()?;
    let claim = match v.get("claim") {
        Some(c) => Some(ClaimTag::new(
            json_str(c, "proposition")?,
            json_str(c, "polarity")?.parse::<Polarity>()?,
        )),
        None => None,
    };
    Ok(Hyperedge {
        id: EdgeId::new(json_str(v, "id")?),
        participants,
        attributes: canon::parse_attr_map(field(v, "attributes")?)?,
        valid_time: interval_from_json(field(v, "valid_time")?)?,
        tx_time: None,
        confidence: confidence(json_f64(v, "confidence")?)?,
        claim,
    })
}

fn interval_from_json(v: &serde_json::Value) -> Result<TimeInterval, String> {
    let start = Timestamp::parse_rfc3339(&json_str(v, "start")?)?;
    let end = match json_str(v, "end")?.as_str() {
        "infinity" => IntervalEnd::Unbounded,
        s => IntervalEnd::At(Timestamp::parse_rfc3339(s)?),
    };
    TimeInterval::new(start, end).map_err(|e| e.to_string())
}

fn field<'a>(v: &'a serde_json::Value, key: &str) -> Result<&'a serde_json::Value, String> {
    v.get(key).ok_or_else(|| format!("missing field {key:?}"))
}

fn json_str(v: &serde_json::Value, key: &str) -> Result<String, String> {
    field(v, key)?
        .as_str()
        .map(String::from)
        .ok_or_else(|| format!("field {key:?} must be a string"))
}

fn json_f64(v: &serde_json::Value, key: &str) -> Result<f64, String> {
    field(v, key)?
        .as_f64()
        .ok_or_else(|| format!("field {key:?} must be a number"))
}

fn confidence(value: f64) -> Result<Confidence, String> {
    Confidence::new(value).map_err(|e| e.to_string())
}

/// One line of the log: a payload with its assigned sequence number and
/// transaction time.
#[derive(Debug, Clone, PartialEq)]
pub struct EventRecord {
    pub seq: u64,
    pub tx_time: Timestamp,
    pub payload: Payload,
}

impl EventRecord {
    pub fn to_line(&self) -> String {
        format!(
            "{} {} {} {}",
            self.seq,
            self.tx_time.to_rfc3339_micros(),
            self.payload.tag(),
            self.payload.to_canon().render()
        )
    }

    pub fn parse_line(line: &str) -> Result<EventRecord, String> {
        let mut parts = line.splitn(4, ' ');
        let seq = parts
            .next()
            .filter(|s| !s.is_empty())
            .ok_or("empty line")?
            .parse::<u64>()
            .map_err(|e| format!("bad sequence number: {e}"))?;
        let tx_time = Timestamp::parse_rfc3339(parts.next().ok_or("missing transaction time")?)?;
        let tag = parts.next().ok_or("missing record tag")?;
        let raw = parts.next().ok_or("missing payload")?;
        let json: serde_json::Value =
            serde_json::from_str(raw).map_err(|e| format!("bad payload: {e}"))?;
        let payload = Payload::from_json(tag, &json)?;
        Ok(EventRecord {
            seq,
            tx_time,
            payload,
        })
    }
}

/// How a snapshot derives an edge's effective confidence from recorded
/// assessments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConfidencePolicy {
    /// The most recent assessment wins; the initial value applies when no
    /// assessment exists.
    #[default]
    LatestAssessment,
    /// Noisy-OR over all assessments, treating them as independent
    /// supporting evidence; the initial value applies when none exist.
    NoisyOrAssessments,
}

/// The append-only store: an ordered event log plus just enough running
/// state to validate appends incrementally.
#[derive(Debug, Clone, Default)]
pub struct Store {
    records: Vec<EventRecord>,
    vertices: BTreeSet<String>,
    edges: BTreeMap<String, Timestamp>, // id -> valid start, for termination checks
    rule_ids: BTreeSet<String>,
    forward: BTreeMap<String, Vec<String>>, // cause -> effects, all link kinds
    policy: ConfidencePolicy,
}

impl Store {
    pub fn new() -> Store {
        Store::default()
    }

    pub fn with_policy(policy: ConfidencePolicy) -> Store {
        Store {
            policy,
            ..Store::default()
        }
    }

    pub fn policy(&self) -> ConfidencePolicy {
        self.policy
    }

    pub fn records(&self) -> &[EventRecord] {
        &self.records
    }

    pub fn last_seq(&self) -> u64 {
        self.records.len() as u64
    }

    fn last_tx(&self) -> Option<Timestamp> {
        self.records.last().map(|r| r.tx_time)
    }

    /// Sequence number at which an edge was appended, if it exists.
    pub fn seq_of_edge(&self, id: &EdgeId) -> Option<u64> {
        self.records.iter().find_map(|r| match &r.payload {
            Payload::AddHyperedge(e) if e.id == *id => Some(r.seq),
            _ => None,
        })
    }

    /// Append with transaction time taken from the wall clock, clamped so
    /// transaction time never regresses.
    pub fn append(&mut self, payload: Payload) -> Result<u64, StoreError> {
        let now = Timestamp::now();
        let tx = match self.last_tx() {
            Some(last) if last > now => last,
            _ => now,
        };
        self.append_at(payload, tx)
    }

    /// Append with an explicit transaction time. Used by replay and by
    /// fixtures that need reproducible history; the time must not precede
    /// the previous record's.
    pub fn append_at(&mut self, payload: Payload, tx: Timestamp) -> Result<u64, StoreError> {
        let seq = self.last_seq() + 1;
        if let Some(last) = self.last_tx() {
            if tx < last {
                return Err(StoreError::TxRegression { seq, tx, last });
            }
        }
        let payload = self.validate_payload(payload)?;
        self.index_payload(&payload);
        self.records.push(EventRecord {
            seq,
            tx_time: tx,
            payload,
        });
        Ok(seq)
    }

    fn validate_payload(&self, payload: Payload) -> Result<Payload, StoreError> {
        match payload {
            Payload::AddVertex(v) => {
                if self.id_taken(v.id.as_str()) {
                    return Err(StoreError::DuplicateId(v.id.as_str().to_string()));
                }
                Ok(Payload::AddVertex(v))
            }
            Payload::AddHyperedge(mut e) => {
                if self.id_taken(e.id.as_str()) {
                    return Err(StoreError::DuplicateId(e.id.as_str().to_string()));
                }
                if let Some(first) = validate_edge(&e, self).into_iter().next() {
                    return Err(first.into());
                }
                // Transaction time is record-level state; the payload copy
                // stays unset so replayed and appended edges are identical.
                e.tx_time = None;
                Ok(Payload::AddHyperedge(e))
            }
            Payload::Terminate { edge, end } => {
                let start = *self
                    .edges
                    .get(edge.as_str())
                    .ok_or_else(|| StoreError::UnknownEdge(edge.as_str().to_string()))?;
                if end < start {
                    return Err(StoreError::TerminationBeforeStart {
                        edge: edge.as_str().to_string(),
                        start,
                        end,
                    });
                }
                Ok(Payload::Terminate { edge, end })
            }
            Payload::AddLink(l) => {
                for id in [&l.cause, &l.effect] {
                    if !self.edges.contains_key(id.as_str()) {
                        return Err(StoreError::UnknownEdge(id.as_str().to_string()));
                    }
                }
                if l.cause == l.effect || self.reaches(l.effect.as_str(), l.cause.as_str()) {
                    return Err(StoreError::CausalCycle {
                        cause: l.cause.as_str().to_string(),
                        effect: l.effect.as_str().to_string(),
                    });
                }
                Ok(Payload::AddLink(l))
            }
            Payload::AddAssessment(a) => {
                if !self.edges.contains_key(a.target.as_str()) {
                    return Err(StoreError::UnknownEdge(a.target.as_str().to_string()));
                }
                Ok(Payload::AddAssessment(a))
            }
            Payload::AddRule(r) => {
                if self.rule_ids.contains(&r.id) || self.id_taken(&r.id) {
                    return Err(StoreError::DuplicateId(r.id.clone()));
                }
                Ok(Payload::AddRule(r))
            }
        }
    }

    fn index_payload(&mut self, payload: &Payload) {
        match payload {
            Payload::AddVertex(v) => {
                self.vertices.insert(v.id.as_str().to_string());
            }
            Payload::AddHyperedge(e) => {
                self.edges
                    .insert(e.id.as_str().to_string(), e.valid_time.start());
            }
            Payload::AddLink(l) => {
                self.forward
                    .entry(l.cause.as_str().to_string())
                    .or_default()
                    .push(l.effect.as_str().to_string());
            }
            Payload::AddRule(r) => {
                self.rule_ids.insert(r.id.clone());
            }
            Payload::Terminate { .. } | Payload::AddAssessment(_) => {}
        }
    }

    fn id_taken(&self, id: &str) -> bool {
        self.vertices.contains(id) || self.edges.contains_key(id)
    }

    /// True when `from` reaches `to` through recorded links.
    fn reaches(&self, from: &str, to: &str) -> bool {
        let mut queue = VecDeque::from([from]);
        let mut seen = BTreeSet::from([from]);
        while let Some(cur) = queue.pop_front() {
            if cur == to {
                return true;
            }
            if let Some(nexts) = self.forward.get(cur) {
                for n in nexts {
                    if seen.insert(n.as_str()) {
                        queue.push_back(n.as_str());
                    }
                }
            }
        }
        false
    }

    /// Materialize the state implied by the whole log.
    pub fn snapshot(&self) -> Snapshot {
        Snapshot::materialize(&self.records, self.policy)
    }

    /// Materialize the state as of sequence number `seq` (the first `seq`
    /// records). `snapshot_at(0)` is the empty state.
    pub fn snapshot_at(&self, seq: u64) -> Result<Snapshot, StoreError> {
        if seq > self.last_seq() {
            return Err(StoreError::SeqOutOfRange {
                requested: seq,
                last: self.last_seq(),
            });
        }
        Ok(Snapshot::materialize(
            &self.records[..seq as usize],
            self.policy,
        ))
    }

    // -- log I/O ----------------------------------------------------------

    pub fn serialize_log(&self) -> String {
        let mut out = String::new();
        for rec in &self.records {
            out.push_str(&rec.to_line());
            out.push('\n');
        }
        out
    }

    /// Parse a complete log. Every record is re-validated; any failure is
    /// reported with its line number.
    pub fn parse_log(text: &str) -> Result<Store, StoreError> {
        Self::parse_log_with_policy(text, ConfidencePolicy::default())
    }

    pub fn parse_log_with_policy(
        text: &str,
        policy: ConfidencePolicy,
    ) -> Result<Store, StoreError> {
        let mut store = Store::with_policy(policy);
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            if line.is_empty() {
                continue;
            }
            let parse = |message: String| StoreError::Parse {
                line: lineno,
                message,
            };
            let rec = EventRecord::parse_line(line).map_err(parse)?;
            if rec.seq != store.last_seq() + 1 {
                return Err(parse(format!(
                    "sequence {} out of order; expected {}",
                    rec.seq,
                    store.last_seq() + 1
                )));
            }
            store
                .append_at(rec.payload, rec.tx_time)
                .map_err(|e| parse(e.to_string()))?;
        }
        Ok(store)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Store, StoreError> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_log(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), StoreError> {
        std::fs::write(path, self.serialize_log())?;
        Ok(())
    }

    /// Append records with `seq > after_seq` to an existing log file.
    /// Because serialization is canonical, the result equals a full save.
    pub fn append_to_file(
        &self,
        path: impl AsRef<Path>,
        after_seq: u64,
    ) -> Result<(), StoreError> {
        use std::io::Write as _;
        let mut file = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)?;
        for rec in self.records.iter().filter(|r| r.seq > after_seq) {
            writeln!(file, "{}", rec.to_line())?;
        }
        Ok(())
    }

    /// Replay another store's events into this one. When this store is
    /// empty the original transaction times are preserved; otherwise
    /// incoming times are clamped to stay monotone. All-or-nothing: on any
    /// failure `self` is unchanged.
    pub fn ingest(&mut self, other: &Store) -> Result<u64, StoreError> {
        let mut staged = self.clone();
        let mut count = 0;
        for rec in &other.records {
            let tx = match staged.last_tx() {
                Some(last) if last > rec.tx_time => last,
                _ => rec.tx_time,
            };
            staged.append_at(rec.payload.clone(), tx)?;
            count += 1;
        }
        *self = staged;
        Ok(count)
    }
}

impl ResolvesRefs for Store {
    fn resolves(&self, r: &ParticipantRef) -> bool {
        self.id_taken(r.as_str())
    }
}

/// An assessment together with when it entered the log.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordedAssessment {
    pub assessment: ConfidenceAssessment,
    pub tx_time: Timestamp,
    pub seq: u64,
}

#[derive(Debug, Clone)]
struct EdgeEntry {
    edge: Hyperedge, // tx_time filled from the record
    term_end: Option<Timestamp>,
    assessments: Vec<RecordedAssessment>,
}

/// Supporting and refuting evidence registered for one proposition.
#[derive(Debug, Clone, Default)]
pub struct ClaimSides {
    pub supports: Vec<EdgeId>,
    pub refutes: Vec<EdgeId>,
}

impl ClaimSides {
    pub fn side(&self, polarity: Polarity) -> &[EdgeId] {
        match polarity {
            Polarity::Supports => &self.supports,
            Polarity::Refutes => &self.refutes,
        }
    }
}

/// Materialized state of a log prefix. Owns derived indexes (interval
/// tree, causal adjacency, claim registry) and answers all reads; it is
/// immutable and cheap to query.
#[derive(Debug)]
pub struct Snapshot {
    as_of_seq: u64,
    policy: ConfidencePolicy,
    vertices: BTreeMap<String, Vertex>,
    edges: BTreeMap<String, EdgeEntry>,
    links: Vec<CausalLink>,
    forward: BTreeMap<String, Vec<usize>>, // cause id -> link indexes
    reverse: BTreeMap<String, Vec<usize>>, // effect id -> link indexes
    claims: BTreeMap<String, ClaimSides>,
    rules: Vec<ContextRule>,
    index: IntervalIndex<EdgeId>,
}

impl Snapshot {
    fn materialize(records: &[EventRecord], policy: ConfidencePolicy) -> Snapshot {
        let mut vertices = BTreeMap::new();
        let mut edges: BTreeMap<String, EdgeEntry> = BTreeMap::new();
        let mut links = Vec::new();
        let mut forward: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        let mut reverse: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        let mut claims: BTreeMap<String, ClaimSides> = BTreeMap::new();
        let mut rules = Vec::new();

        for rec in records {
            match &rec.payload {
                Payload::AddVertex(v) => {
                    vertices.insert(v.id.as_str().to_string(), v.clone());
                }
                Payload::AddHyperedge(e) => {
                    let mut edge = e.clone();
                    edge.tx_time = Some(TimeInterval::from_start(rec.tx_time));
                    if let Some(claim) = &edge.claim {
                        let sides = claims.entry(claim.proposition.clone()).or_default();
                        match claim.polarity {
                            Polarity::Supports => sides.supports.push(edge.id.clone()),
                            Polarity::Refutes => sides.refutes.push(edge.id.clone()),
                        }
                    }
                    edges.insert(
                        edge.id.as_str().to_string(),
                        EdgeEntry {
                            edge,
                            term_end: None,
                            assessments: Vec::new(),
                        },
                    );
                }
                Payload::Terminate { edge, end } => {
                    let entry = edges
                        .get_mut(edge.as_str())
                        .expect("terminate target validated on append");
                    entry.term_end = Some(match entry.term_end {
                        Some(existing) if existing <= *end => existing,
                        _ => *end,
                    });
                }
                Payload::AddLink(l) => {
                    let idx = links.len();
                    forward
                        .entry(l.cause.as_str().to_string())
                        .or_default()
                        .push(idx);
                    reverse
                        .entry(l.effect.as_str().to_string())
                        .or_default()
                        .push(idx);
                    links.push(l.clone());
                }
                Payload::AddAssessment(a) => {
                    let entry = edges
                        .get_mut(a.target.as_str())
                        .expect("assessment target validated on append");
                    entry.assessments.push(RecordedAssessment {
                        assessment: a.clone(),
                        tx_time: rec.tx_time,
                        seq: rec.seq,
                    });
                }
                Payload::AddRule(r) => {
                    rules.push(r.clone());
                }
            }
        }

        let entries = edges
            .values()
            .map(|entry| {
                let iv = effective_interval_of(entry);
                (
                    iv.start().micros(),
                    iv.end().as_micros(),
                    entry.edge.id.clone(),
                )
            })
            .collect();

        Snapshot {
            as_of_seq: records.last().map(|r| r.seq).unwrap_or(0),
            policy,
            vertices,
            edges,
            links,
            forward,
            reverse,
            claims,
            rules,
            index: IntervalIndex::build(entries),
        }
    }

    pub fn as_of_seq(&self) -> u64 {
        self.as_of_seq
    }

    pub fn contains_edge(&self, id: &EdgeId) -> bool {
        self.edges.contains_key(id.as_str())
    }

    pub fn contains_vertex(&self, id: &str) -> bool {
        self.vertices.contains_key(id)
    }

    pub fn vertex(&self, id: &str) -> Option<&Vertex> {
        self.vertices.get(id)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Vertex> {
        self.vertices.values()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Edge ids in sorted order.
    pub fn edge_ids(&self) -> impl Iterator<Item = &EdgeId> {
        self.edges.values().map(|e| &e.edge.id)
    }

    /// The edge exactly as appended: original valid interval and initial
    /// confidence, with transaction time filled in.
    pub fn raw_edge(&self, id: &EdgeId) -> Option<&Hyperedge> {
        self.edges.get(id.as_str()).map(|e| &e.edge)
    }

    /// The edge's effective view: valid interval narrowed by any
    /// termination and confidence derived under the snapshot's policy.
    pub fn get(&self, id: &EdgeId) -> Result<Hyperedge, StoreError> {
        let entry = self
            .edges
            .get(id.as_str())
            .ok_or_else(|| StoreError::UnknownEdge(id.as_str().to_string()))?;
        let mut edge = entry.edge.clone();
        edge.valid_time = effective_interval_of(entry);
        edge.confidence = self.effective_confidence_of(entry);
        Ok(edge)
    }

    pub fn effective_interval(&self, id: &EdgeId) -> Option<TimeInterval> {
        self.edges.get(id.as_str()).map(effective_interval_of)
    }

    pub fn effective_confidence(&self, id: &EdgeId) -> Option<Confidence> {
        self.edges
            .get(id.as_str())
            .map(|e| self.effective_confidence_of(e))
    }

    fn effective_confidence_of(&self, entry: &EdgeEntry) -> Confidence {
        if entry.assessments.is_empty() {
            return entry.edge.confidence;
        }
        match self.policy {
            ConfidencePolicy::LatestAssessment => {
                entry
                    .assessments
                    .last()
                    .expect("nonempty checked")
                    .assessment
                    .value
            }
            ConfidencePolicy::NoisyOrAssessments => {
                let miss: f64 = entry
                    .assessments
                    .iter()
                    .map(|a| 1.0 - a.assessment.value.value())
                    .product();
                Confidence::new(1.0 - miss).expect("noisy-or stays in range")
            }
        }
    }

    pub fn assessments(&self, id: &EdgeId) -> &[RecordedAssessment] {
        self.edges
            .get(id.as_str())
            .map(|e| e.assessments.as_slice())
            .unwrap_or(&[])
    }

    pub fn links(&self) -> &[CausalLink] {
        &self.links
    }

    /// Links whose effect is `id` (incoming causes), in log order.
    pub fn causes_of(&self, id: &EdgeId) -> Vec<&CausalLink> {
        self.reverse
            .get(id.as_str())
            .map(|idxs| idxs.iter().map(|&i| &self.links[i]).collect())
            .unwrap_or_default()
    }

    /// Links whose cause is `id` (outgoing effects), in log order.
    pub fn effects_of(&self, id: &EdgeId) -> Vec<&CausalLink> {
        self.forward
            .get(id.as_str())
            .map(|idxs| idxs.iter().map(|&i| &self.links[i]).collect())
            .unwrap_or_default()
    }

    pub fn rules(&self) -> &[ContextRule] {
        &self.rules
    }

    pub fn claim_sides(&self, proposition: &str) -> Option<&ClaimSides> {
        self.claims.get(proposition)
    }

    pub fn propositions(&self) -> impl Iterator<Item = &str> {
        self.claims.keys().map(String::as_str)
    }

    /// Edge ids whose effective interval contains `t`, sorted by interval.
    pub fn edges_valid_at(&self, t: Timestamp) -> Vec<EdgeId> {
        self.index.stab(t.micros()).into_iter().cloned().collect()
    }

    /// Edge ids whose effective interval intersects the window.
    pub fn edges_valid_in(&self, window: &TimeInterval) -> Vec<EdgeId> {
        self.index
            .overlapping(window.start().micros(), window.end().as_micros())
            .into_iter()
            .cloned()
            .collect()
    }

    /// Canonical one-line rendering of the whole snapshot, for
    /// byte-comparison and machine output.
    pub fn canonical(&self) -> String {
        let edges = self
            .edges
            .values()
            .map(|entry| {
                let Value::Object(mut fields) = edge_to_canon(&entry.edge) else {
                    unreachable!("edges render as objects")
                };
                let tx = entry.edge.tx_time.expect("materialized edges carry tx");
                fields.push(("tx_time".into(), canon::timestamp(tx.start())));
                let eff = effective_interval_of(entry);
                let eff_end = match eff.end() {
                    IntervalEnd::At(t) => canon::timestamp(t),
                    IntervalEnd::Unbounded => Value::str("infinity"),
                };
                fields.push(("effective_end".into(), eff_end));
                fields.push((
                    "effective_confidence".into(),
                    Value::Real(self.effective_confidence_of(entry).value()),
                ));
                if !entry.assessments.is_empty() {
                    fields.push((
                        "assessments".into(),
                        Value::Array(
                            entry
                                .assessments
                                .iter()
                                .map(|a| {
                                    Value::Object(vec![
                                        ("seq".into(), Value::UInt(a.seq)),
                                        ("tx_time".into(), canon::timestamp(a.tx_time)),
                                        ("source".into(), Value::str(&a.assessment.source)),
                                        (
                                            "methodology".into(),
                                            Value::str(&a.assessment.methodology),
                                        ),
                                        ("value".into(), Value::Real(a.assessment.value.value())),
                                    ])
                                })
                                .collect(),
                        ),
                    ));
                }
                Value::Object(fields)
            })
            .collect();
        let links = self
            .links
            .iter()
            .map(|l| Payload::AddLink(l.clone()).to_canon())
            .collect();
        let rules = self
            .rules
            .iter()
            .map(|r| Payload::AddRule(r.clone()).to_canon())
            .collect();
        let vertices = self
            .vertices
            .values()
            .map(|v| Payload::AddVertex(v.clone()).to_canon())
            .collect();
        Value::Object(vec![
            ("as_of_seq".into(), Value::UInt(self.as_of_seq)),
            ("edges".into(), Value::Array(edges)),
            ("links".into(), Value::Array(links)),
            ("rules".into(), Value::Array(rules)),
            ("vertices".into(), Value::Array(vertices)),
        ])
        .render()
    }
}

fn effective_interval_of(entry: &EdgeEntry) -> TimeInterval {
    match entry.term_end {
        Some(end) => entry.edge.valid_time.clipped_to(IntervalEnd::At(end)),
        None => entry.edge.valid_time,
    }
}

impl ResolvesRefs for Snapshot {
    fn resolves(&self, r: &ParticipantRef) -> bool {
        self.vertices.contains_key(r.as_str()) || self.edges.contains_key(r.as_str())
    }
}

/// Convenience used throughout fixtures and tests.
pub fn add_vertex(store: &mut Store, id: &str, attributes: Attrs) -> Result<u64, StoreError> {
    let v = Vertex::new(id, attributes)?;
    store.append(Payload::AddVertex(v))
}
