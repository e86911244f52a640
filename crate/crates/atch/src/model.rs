//! Core value types for the attributed temporal causal hypergraph model.
//!
//! A [`Hyperedge`] is an n-ary relationship with first-class identity: it
//! connects any number of participants (entities or other hyperedges),
//! carries an attribute map, a closed valid-time interval, and a confidence
//! score in `[0, 1]`. [`CausalLink`]s relate hyperedges to hyperedges and
//! must keep the causal order acyclic.
//!
//! All types are immutable values once constructed and safe to share and
//! send between threads.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, NaiveDate, NaiveDateTime, Utc};

/// Errors raised by value construction and validation.
///
/// [`EdgeSpec::validate`] reports every violated invariant as one of these;
/// the build path stops at the first.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("participant list is empty")]
    EmptyParticipants,
    #[error("reference {0:?} does not resolve to a known entity or hyperedge")]
    UnresolvedRef(String),
    #[error("confidence {0} outside [0, 1]")]
    ConfidenceOutOfRange(f64),
    #[error("interval start {start} is after end {end}")]
    MalformedInterval { start: Timestamp, end: Timestamp },
    #[error("identifier is empty")]
    EmptyId,
    #[error("claim proposition is empty")]
    EmptyProposition,
    #[error("attribute {0:?} holds a non-finite real")]
    NonFiniteReal(String),
    #[error("inhibition strength {0} outside [0, 1]")]
    StrengthOutOfRange(f64),
}

// ---------------------------------------------------------------------------
// Time
// ---------------------------------------------------------------------------

/// A UTC instant with microsecond precision, stored as microseconds since
/// the Unix epoch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Timestamp(i64);

impl Timestamp {
    pub const fn from_micros(us: i64) -> Self {
        Timestamp(us)
    }

    pub const fn micros(self) -> i64 {
        self.0
    }

    pub fn from_datetime(dt: DateTime<Utc>) -> Self {
        Timestamp(dt.timestamp_micros())
    }

    pub fn to_datetime(self) -> DateTime<Utc> {
        DateTime::from_timestamp_micros(self.0).expect("timestamp within chrono range")
    }

    /// RFC 3339 with explicit offset and six fractional digits, e.g.
    /// `2024-03-18T01:00:00.000000+00:00`. This is the wire form used by
    /// the log format.
    pub fn to_rfc3339_micros(self) -> String {
        self.to_datetime()
            .format("%Y-%m-%dT%H:%M:%S%.6f+00:00")
            .to_string()
    }

    /// Parse an RFC 3339 timestamp (any offset, normalized to UTC).
    pub fn parse_rfc3339(s: &str) -> Result<Self, String> {
        DateTime::parse_from_rfc3339(s)
            .map(|dt| Timestamp(dt.with_timezone(&Utc).timestamp_micros()))
            .map_err(|e| format!("invalid timestamp {s:?}: {e}"))
    }

    /// Parse user-facing timestamp input: full RFC 3339, a naive
    /// `YYYY-MM-DDTHH:MM[:SS]` (assumed UTC), or a bare `YYYY-MM-DD`
    /// (midnight UTC).
    pub fn parse_flex(s: &str) -> Result<Self, String> {
        if let Ok(t) = Self::parse_rfc3339(s) {
            return Ok(t);
        }
        for fmt in ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%dT%H:%M", "%Y-%m-%d %H:%M:%S", "%Y-%m-%d %H:%M"] {
            if let Ok(naive) = NaiveDateTime::parse_from_str(s, fmt) {
                return Ok(Timestamp(naive.and_utc().timestamp_micros()));
            }
        }
        if let Ok(date) = NaiveDate::parse_from_str(s, "%Y-%m-%d") {
            let naive = date.and_hms_opt(0, 0, 0).expect("midnight is valid");
            return Ok(Timestamp(naive.and_utc().timestamp_micros()));
        }
        Err(format!("unrecognized timestamp {s:?}"))
    }

    pub fn now() -> Self {
        Timestamp(Utc::now().timestamp_micros())
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_rfc3339_micros())
    }
}

/// Upper bound of a [`TimeInterval`]: a concrete instant or open-ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntervalEnd {
    At(Timestamp),
    Unbounded,
}

impl IntervalEnd {
    pub fn as_micros(self) -> i64 {
        match self {
            IntervalEnd::At(t) => t.micros(),
            IntervalEnd::Unbounded => i64::MAX,
        }
    }

    pub fn min(self, other: IntervalEnd) -> IntervalEnd {
        if self.as_micros() <= other.as_micros() {
            self
        } else {
            other
        }
    }
}

impl PartialOrd for IntervalEnd {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IntervalEnd {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.as_micros().cmp(&other.as_micros())
    }
}

impl fmt::Display for IntervalEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntervalEnd::At(t) => t.fmt(f),
            IntervalEnd::Unbounded => f.write_str("infinity"),
        }
    }
}

/// A closed time interval `[start, end]`. Point intervals (start = end)
/// are legal; containment and overlap both use closed semantics, so a
/// point event is non-empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TimeInterval {
    start: Timestamp,
    end: IntervalEnd,
}

impl TimeInterval {
    pub fn new(start: Timestamp, end: IntervalEnd) -> Result<Self, ModelError> {
        if let IntervalEnd::At(e) = end {
            if e < start {
                return Err(ModelError::MalformedInterval { start, end: e });
            }
        }
        Ok(TimeInterval { start, end })
    }

    /// `[start, infinity)` — the persistent-by-default interval.
    pub fn from_start(start: Timestamp) -> Self {
        TimeInterval {
            start,
            end: IntervalEnd::Unbounded,
        }
    }

    pub fn between(start: Timestamp, end: Timestamp) -> Result<Self, ModelError> {
        Self::new(start, IntervalEnd::At(end))
    }

    pub fn start(&self) -> Timestamp {
        self.start
    }

    pub fn end(&self) -> IntervalEnd {
        self.end
    }

    /// Closed containment: `start <= t <= end`.
    pub fn contains(&self, t: Timestamp) -> bool {
        self.start <= t && t.micros() <= self.end.as_micros()
    }

    /// Closed overlap: the intervals share at least one instant.
    pub fn intersects(&self, other: &TimeInterval) -> bool {
        self.start.micros() <= other.end.as_micros() && other.start.micros() <= self.end.as_micros()
    }

    /// Narrow the end bound, never widening. Used when terminations apply.
    pub fn clipped_to(&self, end: IntervalEnd) -> TimeInterval {
        let end = self.end.min(end);
        let end = if end.as_micros() < self.start.micros() {
            IntervalEnd::At(self.start)
        } else {
            end
        };
        TimeInterval {
            start: self.start,
            end,
        }
    }
}

impl fmt::Display for TimeInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.start, self.end)
    }
}

// ---------------------------------------------------------------------------
// Confidence
// ---------------------------------------------------------------------------

/// A degree of belief in `[0, 1]`, checked on construction.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Confidence(f64);

impl Confidence {
    pub const ZERO: Confidence = Confidence(0.0);
    pub const ONE: Confidence = Confidence(1.0);

    pub fn new(value: f64) -> Result<Self, ModelError> {
        if !value.is_finite() || !(0.0..=1.0).contains(&value) {
            return Err(ModelError::ConfidenceOutOfRange(value));
        }
        Ok(Confidence(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Confidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

// ---------------------------------------------------------------------------
// Identifiers and participants
// ---------------------------------------------------------------------------

/// Identifier of a vertex (a plain entity).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EntityId(String);

impl EntityId {
    pub fn new(id: impl Into<String>) -> Self {
        EntityId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Identifier of a hyperedge. Edge identifiers share the entity namespace:
/// edges are themselves entities and may participate in other edges.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(String);

impl EdgeId {
    pub fn new(id: impl Into<String>) -> Self {
        EdgeId(id.into())
    }

    /// A fresh universally-unique identifier, used when the caller does
    /// not supply one.
    pub fn generate() -> Self {
        EdgeId(uuid::Uuid::new_v4().to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for EdgeId {
    fn from(id: &str) -> Self {
        EdgeId(id.to_string())
    }
}

impl From<String> for EdgeId {
    fn from(id: String) -> Self {
        EdgeId(id)
    }
}

/// A reference appearing in a participant list. It resolves against both
/// the vertex and the hyperedge namespace; the domain is closed under
/// relationship formation, so an edge id is accepted anywhere an entity id
/// is.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParticipantRef(String);

impl ParticipantRef {
    pub fn new(id: impl Into<String>) -> Self {
        ParticipantRef(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&EntityId> for ParticipantRef {
    fn from(id: &EntityId) -> Self {
        ParticipantRef(id.0.clone())
    }
}

impl From<&EdgeId> for ParticipantRef {
    fn from(id: &EdgeId) -> Self {
        ParticipantRef(id.0.clone())
    }
}

impl fmt::Display for ParticipantRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// One slot of a hyperedge: a reference plus an optional role label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Participant {
    pub target: ParticipantRef,
    pub role: Option<String>,
}

impl Participant {
    pub fn of(target: impl Into<String>) -> Self {
        Participant {
            target: ParticipantRef::new(target),
            role: None,
        }
    }

    pub fn with_role(target: impl Into<String>, role: impl Into<String>) -> Self {
        Participant {
            target: ParticipantRef::new(target),
            role: Some(role.into()),
        }
    }
}

/// Resolution context for participant references. Implemented by the store
/// and by snapshots; tests can use a plain id set or [`AcceptAllRefs`].
pub trait ResolvesRefs {
    fn resolves(&self, r: &ParticipantRef) -> bool;
}

/// Resolver that accepts every reference. For detached value construction.
pub struct AcceptAllRefs;

impl ResolvesRefs for AcceptAllRefs {
    fn resolves(&self, _r: &ParticipantRef) -> bool {
        true
    }
}

impl ResolvesRefs for std::collections::BTreeSet<String> {
    fn resolves(&self, r: &ParticipantRef) -> bool {
        self.contains(r.as_str())
    }
}

// ---------------------------------------------------------------------------
// Attributes
// ---------------------------------------------------------------------------

/// A flat scalar attribute value. Nested documents are out of scope.
#[derive(Debug, Clone)]
pub enum AttrValue {
    Str(String),
    Int(i64),
    Real(f64),
    Bool(bool),
    Time(Timestamp),
}

impl AttrValue {
    fn tag(&self) -> u8 {
        match self {
            AttrValue::Str(_) => 0,
            AttrValue::Int(_) => 1,
            AttrValue::Real(_) => 2,
            AttrValue::Bool(_) => 3,
            AttrValue::Time(_) => 4,
        }
    }

    /// Numeric view for cross-type comparison of Int and Real.
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            AttrValue::Int(i) => Some(*i as f64),
            AttrValue::Real(r) => Some(*r),
            _ => None,
        }
    }

    /// Compare under an operator. Int and Real compare numerically with
    /// each other; otherwise both sides must be the same kind, and a kind
    /// mismatch never matches.
    pub fn compare(&self, op: CompareOp, other: &AttrValue) -> bool {
        use std::cmp::Ordering;
        let ord = match (self, other) {
            (AttrValue::Str(a), AttrValue::Str(b)) => a.cmp(b),
            (AttrValue::Bool(a), AttrValue::Bool(b)) => a.cmp(b),
            (AttrValue::Time(a), AttrValue::Time(b)) => a.cmp(b),
            _ => match (self.as_f64(), other.as_f64()) {
                (Some(a), Some(b)) => match a.partial_cmp(&b) {
                    Some(o) => o,
                    None => return false,
                },
                _ => return false,
            },
        };
        match op {
            CompareOp::Eq => ord == Ordering::Equal,
            CompareOp::Ne => ord != Ordering::Equal,
            CompareOp::Lt => ord == Ordering::Less,
            CompareOp::Le => ord != Ordering::Greater,
            CompareOp::Gt => ord == Ordering::Greater,
            CompareOp::Ge => ord != Ordering::Less,
        }
    }
}

impl PartialEq for AttrValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == std::cmp::Ordering::Equal
    }
}

impl Eq for AttrValue {}

impl PartialOrd for AttrValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AttrValue {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (AttrValue::Str(a), AttrValue::Str(b)) => a.cmp(b),
            (AttrValue::Int(a), AttrValue::Int(b)) => a.cmp(b),
            (AttrValue::Real(a), AttrValue::Real(b)) => a.total_cmp(b),
            (AttrValue::Bool(a), AttrValue::Bool(b)) => a.cmp(b),
            (AttrValue::Time(a), AttrValue::Time(b)) => a.cmp(b),
            (a, b) => a.tag().cmp(&b.tag()),
        }
    }
}

impl fmt::Display for AttrValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttrValue::Str(s) => f.write_str(s),
            AttrValue::Int(i) => i.fmt(f),
            AttrValue::Real(r) => r.fmt(f),
            AttrValue::Bool(b) => b.fmt(f),
            AttrValue::Time(t) => t.fmt(f),
        }
    }
}

impl From<&str> for AttrValue {
    fn from(s: &str) -> Self {
        AttrValue::Str(s.to_string())
    }
}

impl From<i64> for AttrValue {
    fn from(i: i64) -> Self {
        AttrValue::Int(i)
    }
}

impl From<f64> for AttrValue {
    fn from(r: f64) -> Self {
        AttrValue::Real(r)
    }
}

impl From<bool> for AttrValue {
    fn from(b: bool) -> Self {
        AttrValue::Bool(b)
    }
}

/// Attribute map with unique keys by construction.
pub type Attrs = BTreeMap<String, AttrValue>;

/// Build an attribute map from `(key, value)` pairs.
pub fn attrs<K: Into<String>, V: Into<AttrValue>>(pairs: impl IntoIterator<Item = (K, V)>) -> Attrs {
    pairs
        .into_iter()
        .map(|(k, v)| (k.into(), v.into()))
        .collect()
}

/// Comparison operator used by attribute predicates and context rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CompareOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CompareOp {
    pub fn as_str(self) -> &'static str {
        match self {
            CompareOp::Eq => "=",
            CompareOp::Ne => "!=",
            CompareOp::Lt => "<",
            CompareOp::Le => "<=",
            CompareOp::Gt => ">",
            CompareOp::Ge => ">=",
        }
    }
}

impl FromStr for CompareOp {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "=" => Ok(CompareOp::Eq),
            "!=" => Ok(CompareOp::Ne),
            "<" => Ok(CompareOp::Lt),
            "<=" => Ok(CompareOp::Le),
            ">" => Ok(CompareOp::Gt),
            ">=" => Ok(CompareOp::Ge),
            other => Err(format!("unknown operator {other:?}")),
        }
    }
}

// ---------------------------------------------------------------------------
// Claims
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Polarity {
    Supports,
    Refutes,
}

impl Polarity {
    pub fn opposite(self) -> Polarity {
        match self {
            Polarity::Supports => Polarity::Refutes,
            Polarity::Refutes => Polarity::Supports,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Supports => "supports",
            Polarity::Refutes => "refutes",
        }
    }
}

impl FromStr for Polarity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "supports" => Ok(Polarity::Supports),
            "refutes" => Ok(Polarity::Refutes),
            other => Err(format!("unknown polarity {other:?}")),
        }
    }
}

/// Marks a hyperedge as evidence for or against a named proposition.
/// Only edges that take part in contradiction detection need one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimTag {
    pub proposition: String,
    pub polarity: Polarity,
}

impl ClaimTag {
    pub fn new(proposition: impl Into<String>, polarity: Polarity) -> Self {
        ClaimTag {
            proposition: proposition.into(),
            polarity,
        }
    }
}

// ---------------------------------------------------------------------------
// Hyperedges and vertices
// ---------------------------------------------------------------------------

/// An n-ary relationship with attributes, bitemporal validity, and
/// confidence. `tx_time` is assigned exactly once, by the store, when the
/// edge is appended; it is `None` on detached values.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperedge {
    pub id: EdgeId,
    pub participants: Vec<Participant>,
    pub attributes: Attrs,
    pub valid_time: TimeInterval,
    pub tx_time: Option<TimeInterval>,
    pub confidence: Confidence,
    pub claim: Option<ClaimTag>,
}

impl Hyperedge {
    /// Number of participants.
    pub fn arity(&self) -> usize {
        self.participants.len()
    }

    /// Distinct participant references, first occurrence order.
    pub fn distinct_participants(&self) -> Vec<&ParticipantRef> {
        let mut seen = std::collections::BTreeSet::new();
        self.participants
            .iter()
            .filter(|p| seen.insert(p.target.as_str()))
            .map(|p| &p.target)
            .collect()
    }
}

/// A plain entity with attributes.
#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub id: EntityId,
    pub attributes: Attrs,
}

impl Vertex {
    pub fn new(id: impl Into<String>, attributes: Attrs) -> Result<Self, ModelError> {
        let id = EntityId::new(id);
        if id.as_str().is_empty() {
            return Err(ModelError::EmptyId);
        }
        for (k, v) in &attributes {
            if let AttrValue::Real(r) = v {
                if !r.is_finite() {
                    return Err(ModelError::NonFiniteReal(k.clone()));
                }
            }
        }
        Ok(Vertex { id, attributes })
    }
}

// ---------------------------------------------------------------------------
// Causal links, assessments, context rules
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum LinkKind {
    Causes,
    Inhibits,
}

impl LinkKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LinkKind::Causes => "causes",
            LinkKind::Inhibits => "inhibits",
        }
    }
}

impl FromStr for LinkKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "causes" => Ok(LinkKind::Causes),
            "inhibits" => Ok(LinkKind::Inhibits),
            other => Err(format!("unknown link kind {other:?}")),
        }
    }
}

/// One edge of the causal order: `cause` brought about (or suppresses)
/// `effect`, through a named mechanism, with a confidence on the mechanism
/// itself. The optional conditional confidence is stored for audit but does
/// not enter chain propagation.
#[derive(Debug, Clone, PartialEq)]
pub struct CausalLink {
    pub cause: EdgeId,
    pub effect: EdgeId,
    pub mechanism: String,
    pub link_confidence: Confidence,
    pub conditional_confidence: Option<Confidence>,
    pub kind: LinkKind,
}

impl CausalLink {
    pub fn causes(
        cause: impl Into<String>,
        effect: impl Into<String>,
        mechanism: impl Into<String>,
        link_confidence: f64,
    ) -> Result<Self, ModelError> {
        Ok(CausalLink {
            cause: EdgeId::new(cause),
            effect: EdgeId::new(effect),
            mechanism: mechanism.into(),
            link_confidence: Confidence::new(link_confidence)?,
            conditional_confidence: None,
            kind: LinkKind::Causes,
        })
    }

    pub fn inhibits(
        cause: impl Into<String>,
        effect: impl Into<String>,
        mechanism: impl Into<String>,
        link_confidence: f64,
    ) -> Result<Self, ModelError> {
        Ok(CausalLink {
            kind: LinkKind::Inhibits,
            ..Self::causes(cause, effect, mechanism, link_confidence)?
        })
    }

    pub fn with_conditional(mut self, conditional: f64) -> Result<Self, ModelError> {
        self.conditional_confidence = Some(Confidence::new(conditional)?);
        Ok(self)
    }
}

/// A recorded assessment of one edge's confidence: who judged, how, and
/// the value. Multiple assessments of the same edge coexist; the store
/// derives an effective confidence from them.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfidenceAssessment {
    pub target: EdgeId,
    pub source: String,
    pub methodology: String,
    pub value: Confidence,
}

impl ConfidenceAssessment {
    pub fn new(
        target: impl Into<String>,
        source: impl Into<String>,
        methodology: impl Into<String>,
        value: f64,
    ) -> Result<Self, ModelError> {
        Ok(ConfidenceAssessment {
            target: EdgeId::new(target),
            source: source.into(),
            methodology: methodology.into(),
            value: Confidence::new(value)?,
        })
    }
}

/// Which side of a causal link a rule predicate inspects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleTarget {
    Cause,
    Effect,
}

impl RuleTarget {
    pub fn as_str(self) -> &'static str {
        match self {
            RuleTarget::Cause => "cause",
            RuleTarget::Effect => "effect",
        }
    }
}

impl FromStr for RuleTarget {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cause" => Ok(RuleTarget::Cause),
            "effect" => Ok(RuleTarget::Effect),
            other => Err(format!("unknown rule target {other:?}")),
        }
    }
}

/// Attribute test applied to one side of a causal link.
#[derive(Debug, Clone, PartialEq)]
pub struct RulePredicate {
    pub target: RuleTarget,
    pub key: String,
    pub op: CompareOp,
    pub value: AttrValue,
}

impl RulePredicate {
    pub fn matches(&self, cause: &Hyperedge, effect: &Hyperedge) -> bool {
        let edge = match self.target {
            RuleTarget::Cause => cause,
            RuleTarget::Effect => effect,
        };
        edge.attributes
            .get(&self.key)
            .map(|v| v.compare(self.op, &self.value))
            .unwrap_or(false)
    }
}

/// A registered context rule: when its predicate matches a link, the
/// link's effective confidence is scaled by `1 - inhibition_strength`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextRule {
    pub id: String,
    pub predicate: RulePredicate,
    pub inhibition_strength: f64,
}

impl ContextRule {
    pub fn new(
        id: impl Into<String>,
        predicate: RulePredicate,
        inhibition_strength: f64,
    ) -> Result<Self, ModelError> {
        if !inhibition_strength.is_finite() || !(0.0..=1.0).contains(&inhibition_strength) {
            return Err(ModelError::StrengthOutOfRange(inhibition_strength));
        }
        let id = id.into();
        if id.is_empty() {
            return Err(ModelError::EmptyId);
        }
        Ok(ContextRule {
            id,
            predicate,
            inhibition_strength,
        })
    }
}

// ---------------------------------------------------------------------------
// Edge construction
// ---------------------------------------------------------------------------

/// Raw ingredients for a hyperedge, before invariants are enforced.
///
/// [`EdgeSpec::validate`] reports every violation rather than stopping at
/// the first; [`EdgeSpec::build`] returns a checked [`Hyperedge`] or the
/// first violation.
#[derive(Debug, Clone)]
pub struct EdgeSpec {
    pub id: Option<EdgeId>,
    pub participants: Vec<Participant>,
    pub attributes: Attrs,
    pub valid_start: Timestamp,
    pub valid_end: IntervalEnd,
    pub confidence: f64,
    pub claim: Option<ClaimTag>,
}

impl EdgeSpec {
    pub fn new(
        participants: Vec<Participant>,
        valid_start: Timestamp,
        valid_end: IntervalEnd,
        confidence: f64,
    ) -> Self {
        EdgeSpec {
            id: None,
            participants,
            attributes: Attrs::new(),
            valid_start,
            valid_end,
            confidence,
            claim: None,
        }
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = Some(EdgeId::new(id));
        self
    }

    pub fn with_attrs(mut self, attributes: Attrs) -> Self {
        self.attributes = attributes;
        self
    }

    pub fn with_attr(mut self, key: impl Into<String>, value: impl Into<AttrValue>) -> Self {
        self.attributes.insert(key.into(), value.into());
        self
    }

    pub fn with_claim(mut self, proposition: impl Into<String>, polarity: Polarity) -> Self {
        self.claim = Some(ClaimTag::new(proposition, polarity));
        self
    }

    /// Report every violated invariant. An empty result means the builder
    /// is well-formed with respect to `resolver`.
    pub fn validate(&self, resolver: &dyn ResolvesRefs) -> Vec<ModelError> {
        let mut violations = Vec::new();
        if let Some(id) = &self.id {
            if id.as_str().is_empty() {
                violations.push(ModelError::EmptyId);
            }
        }
        if self.participants.is_empty() {
            violations.push(ModelError::EmptyParticipants);
        }
        for p in &self.participants {
            if !resolver.resolves(&p.target) {
                violations.push(ModelError::UnresolvedRef(p.target.as_str().to_string()));
            }
        }
        if !self.confidence.is_finite() || !(0.0..=1.0).contains(&self.confidence) {
            violations.push(ModelError::ConfidenceOutOfRange(self.confidence));
        }
        if let IntervalEnd::At(end) = self.valid_end {
            if end < self.valid_start {
                violations.push(ModelError::MalformedInterval {
                    start: self.valid_start,
                    end,
                });
            }
        }
        for (k, v) in &self.attributes {
            if let AttrValue::Real(r) = v {
                if !r.is_finite() {
                    violations.push(ModelError::NonFiniteReal(k.clone()));
                }
            }
        }
        if let Some(claim) = &self.claim {
            if claim.proposition.is_empty() {
                violations.push(ModelError::EmptyProposition);
            }
        }
        violations
    }

    /// Construct the hyperedge, generating a fresh id when none was
    /// supplied. Transaction time stays unset until the store appends it.
    pub fn build(self, resolver: &dyn ResolvesRefs) -> Result<Hyperedge, ModelError> {
        if let Some(first) = self.validate(resolver).into_iter().next() {
            return Err(first);
        }
        Ok(Hyperedge {
            id: self.id.unwrap_or_else(EdgeId::generate),
            participants: self.participants,
            attributes: self.attributes,
            valid_time: TimeInterval::new(self.valid_start, self.valid_end)
                .expect("interval checked by validate"),
            tx_time: None,
            confidence: Confidence::new(self.confidence).expect("confidence checked by validate"),
            claim: self.claim,
        })
    }
}

/// Re-check an already built edge, e.g. one recovered from an untrusted
/// log. Returns every violated invariant.
pub fn validate_edge(edge: &Hyperedge, resolver: &dyn ResolvesRefs) -> Vec<ModelError> {
    let spec = EdgeSpec {
        id: Some(edge.id.clone()),
        participants: edge.participants.clone(),
        attributes: edge.attributes.clone(),
        valid_start: edge.valid_time.start(),
        valid_end: edge.valid_time.end(),
        confidence: edge.confidence.value(),
        claim: edge.claim.clone(),
    };
    spec.validate(resolver)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn ts(s: &str) -> Timestamp {
        Timestamp::parse_flex(s).unwrap()
    }

    fn meeting_resolver() -> BTreeSet<String> {
        ["Alice", "Bob", "Carol", "Room101"]
            .into_iter()
            .map(String::from)
            .collect()
    }

    #[test]
    fn four_ary_meeting_builds() {
        let edge = EdgeSpec::new(
            vec![
                Participant::of("Alice"),
                Participant::of("Bob"),
                Participant::of("Carol"),
                Participant::of("Room101"),
            ],
            ts("2024-01-15T09:00"),
            IntervalEnd::At(ts("2024-01-15T10:00")),
            1.0,
        )
        .with_attr("type", "meeting")
        .with_attr("productive", true)
        .build(&meeting_resolver())
        .unwrap();
        assert_eq!(edge.arity(), 4);
        assert!(edge.tx_time.is_none());
        assert_eq!(edge.confidence, Confidence::ONE);
    }

    #[test]
    fn empty_participants_rejected() {
        let err = EdgeSpec::new(vec![], ts("2024-01-01"), IntervalEnd::Unbounded, 0.5)
            .build(&AcceptAllRefs)
            .unwrap_err();
        assert_eq!(err, ModelError::EmptyParticipants);
    }

    #[test]
    fn confidence_out_of_range_rejected() {
        let err = EdgeSpec::new(
            vec![Participant::of("Alice")],
            ts("2024-01-01"),
            IntervalEnd::Unbounded,
            1.2,
        )
        .build(&AcceptAllRefs)
        .unwrap_err();
        assert_eq!(err, ModelError::ConfidenceOutOfRange(1.2));
    }

    #[test]
    fn unresolved_ref_rejected() {
        let err = EdgeSpec::new(
            vec![Participant::of("Nobody")],
            ts("2024-01-01"),
            IntervalEnd::Unbounded,
            0.5,
        )
        .build(&meeting_resolver())
        .unwrap_err();
        assert_eq!(err, ModelError::UnresolvedRef("Nobody".into()));
    }

    #[test]
    fn malformed_interval_rejected() {
        let spec = EdgeSpec::new(
            vec![Participant::of("Alice")],
            ts("2024-02-01"),
            IntervalEnd::At(ts("2024-01-01")),
            0.5,
        );
        let violations = spec.validate(&meeting_resolver());
        assert_eq!(
            violations,
            vec![ModelError::MalformedInterval {
                start: ts("2024-02-01"),
                end: ts("2024-01-01"),
            }]
        );
    }

    #[test]
    fn validate_lists_every_violation() {
        let spec = EdgeSpec::new(vec![], ts("2024-01-01"), IntervalEnd::Unbounded, -0.1);
        let violations = spec.validate(&AcceptAllRefs);
        assert!(violations.contains(&ModelError::EmptyParticipants));
        assert!(violations.contains(&ModelError::ConfidenceOutOfRange(-0.1)));
        assert_eq!(violations.len(), 2);
    }

    #[test]
    fn edge_ids_accepted_as_participants() {
        // Closure under relationship formation: e2 contains e1.
        let mut known: BTreeSet<String> = ["Alice"].into_iter().map(String::from).collect();
        let e1 = EdgeSpec::new(
            vec![Participant::of("Alice")],
            ts("2024-01-01"),
            IntervalEnd::Unbounded,
            1.0,
        )
        .with_id("e1")
        .build(&known)
        .unwrap();
        known.insert(e1.id.as_str().to_string());
        let e2 = EdgeSpec::new(
            vec![Participant::of("e1"), Participant::of("Alice")],
            ts("2024-01-02"),
            IntervalEnd::Unbounded,
            1.0,
        )
        .build(&known)
        .unwrap();
        assert!(e2.participants.iter().any(|p| p.target.as_str() == "e1"));
    }

    #[test]
    fn point_intervals_are_legal_and_contain_their_instant() {
        let t = ts("2024-03-15T14:00");
        let interval = TimeInterval::between(t, t).unwrap();
        assert!(interval.contains(t));
        assert!(!interval.contains(ts("2024-03-15T14:01")));
    }

    #[test]
    fn closed_containment_includes_both_bounds() {
        let iv = TimeInterval::between(ts("2024-01-15T09:00"), ts("2024-01-15T10:00")).unwrap();
        assert!(iv.contains(ts("2024-01-15T09:00")));
        assert!(iv.contains(ts("2024-01-15T10:00")));
        assert!(!iv.contains(ts("2024-01-15T10:00:00.000001")));
    }

    #[test]
    fn timestamp_round_trips_through_wire_form() {
        let t = ts("2024-03-18T01:00:00.000123");
        let s = t.to_rfc3339_micros();
        assert_eq!(s, "2024-03-18T01:00:00.000123+00:00");
        assert_eq!(Timestamp::parse_rfc3339(&s).unwrap(), t);
    }

    #[test]
    fn attr_compare_across_numeric_kinds() {
        assert!(AttrValue::Int(2).compare(CompareOp::Eq, &AttrValue::Real(2.0)));
        assert!(AttrValue::Real(1.5).compare(CompareOp::Lt, &AttrValue::Int(2)));
        assert!(!AttrValue::Str("2".into()).compare(CompareOp::Eq, &AttrValue::Int(2)));
    }

    #[test]
    fn link_cycle_guard_is_a_store_concern_but_self_link_builds() {
        // Model-level construction allows the raw value; the store rejects
        // self-causation on append.
        let link = CausalLink::causes("a", "a", "m", 0.5).unwrap();
        assert_eq!(link.cause, link.effect);
    }
}
