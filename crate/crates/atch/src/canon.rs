//! Canonical one-line object notation used by the log format and by
//! machine-readable command output.
//!
//! Rules: objects serialize with keys in byte-sorted order, no whitespace;
//! reals always carry 17 significant digits in scientific notation so a
//! round trip is bit-exact; timestamps are RFC 3339 with microsecond
//! precision and a `+00:00` offset. In polymorphic positions (attribute
//! values) a timestamp is wrapped as `{"$ts":"..."}` to keep it
//! distinguishable from a plain string. Output is valid JSON, and the same
//! value always produces the same bytes.

use std::fmt::Write as _;

use crate::model::{AttrValue, Attrs, Timestamp};

/// Tree form of a canonical document.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Bool(bool),
    Int(i64),
    UInt(u64),
    Real(f64),
    Str(String),
    Array(Vec<Value>),
    Object(Vec<(String, Value)>),
}

impl Value {
    pub fn str(s: impl Into<String>) -> Value {
        Value::Str(s.into())
    }

    /// Render to the canonical single-line form.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out);
        out
    }

    fn write(&self, out: &mut String) {
        match self {
            Value::Bool(b) => {
                out.push_str(if *b { "true" } else { "false" });
            }
            Value::Int(i) => {
                let _ = write!(out, "{i}");
            }
            Value::UInt(u) => {
                let _ = write!(out, "{u}");
            }
            Value::Real(r) => {
                out.push_str(&canon_real(*r));
            }
            Value::Str(s) => {
                out.push_str(&escape_str(s));
            }
            Value::Array(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.write(out);
                }
                out.push(']');
            }
            Value::Object(fields) => {
                let mut sorted: Vec<&(String, Value)> = fields.iter().collect();
                sorted.sort_by(|a, b| a.0.cmp(&b.0));
                for pair in sorted.windows(2) {
                    debug_assert_ne!(pair[0].0, pair[1].0, "duplicate canonical key");
                }
                out.push('{');
                for (i, (k, v)) in sorted.into_iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push_str(&escape_str(k));
                    out.push(':');
                    v.write(out);
                }
                out.push('}');
            }
        }
    }
}

/// Canonical real rendering: 17 significant digits, scientific notation.
/// Enough digits to reconstruct any finite f64 exactly.
pub fn canon_real(r: f64) -> String {
    debug_assert!(r.is_finite(), "non-finite reals never reach the wire");
    format!("{r:.16e}")
}

/// JSON string escaping via serde_json, which is deterministic.
fn escape_str(s: &str) -> String {
    serde_json::to_string(s).expect("string serialization is infallible")
}

/// Attribute values in polymorphic position: timestamps are tagged.
pub fn attr_value(v: &AttrValue) -> Value {
    match v {
        AttrValue::Str(s) => Value::Str(s.clone()),
        AttrValue::Int(i) => Value::Int(*i),
        AttrValue::Real(r) => Value::Real(*r),
        AttrValue::Bool(b) => Value::Bool(*b),
        AttrValue::Time(t) => Value::Object(vec![("$ts".to_string(), timestamp(*t))]),
    }
}

pub fn attr_map(attrs: &Attrs) -> Value {
    Value::Object(
        attrs
            .iter()
            .map(|(k, v)| (k.clone(), attr_value(v)))
            .collect(),
    )
}

/// Timestamps in schema-typed positions are plain strings.
pub fn timestamp(t: Timestamp) -> Value {
    Value::Str(t.to_rfc3339_micros())
}

/// Decode the attribute-position encoding back into an [`AttrValue`].
pub fn parse_attr_value(v: &serde_json::Value) -> Result<AttrValue, String> {
    match v {
        serde_json::Value::String(s) => Ok(AttrValue::Str(s.clone())),
        serde_json::Value::Bool(b) => Ok(AttrValue::Bool(*b)),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(AttrValue::Int(i))
            } else if let Some(r) = n.as_f64() {
                Ok(AttrValue::Real(r))
            } else {
                Err(format!("number {n} outside representable range"))
            }
        }
        serde_json::Value::Object(map) if map.len() == 1 => match map.get("$ts") {
            Some(serde_json::Value::String(s)) => {
                Timestamp::parse_rfc3339(s).map(AttrValue::Time)
            }
            _ => Err("object attribute must be a {\"$ts\": ...} wrapper".to_string()),
        },
        other => Err(format!("unsupported attribute encoding: {other}")),
    }
}

pub fn parse_attr_map(v: &serde_json::Value) -> Result<Attrs, String> {
    let map = v
        .as_object()
        .ok_or_else(|| format!("expected attribute object, got {v}"))?;
    let mut attrs = Attrs::new();
    for (k, raw) in map {
        attrs.insert(k.clone(), parse_attr_value(raw)?);
    }
    Ok(attrs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_sort_and_output_is_single_line() {
        let v = Value::Object(vec![
            ("zeta".into(), Value::Int(1)),
            ("alpha".into(), Value::Bool(true)),
            ("mid".into(), Value::Array(vec![Value::str("x")])),
        ]);
        assert_eq!(v.render(), r#"{"alpha":true,"mid":["x"],"zeta":1}"#);
    }

    #[test]
    fn reals_carry_seventeen_significant_digits() {
        assert_eq!(canon_real(0.25), "2.5000000000000000e-1");
        assert_eq!(canon_real(1.0), "1.0000000000000000e0");
        assert_eq!(canon_real(0.0), "0.0000000000000000e0");
    }

    #[test]
    fn real_round_trip_is_bit_exact() {
        for r in [
            0.1,
            0.73,
            1.0 / 3.0,
            f64::MIN_POSITIVE,
            1.7976931348623157e308,
            -0.506766,
        ] {
            let rendered = canon_real(r);
            let back: f64 = rendered.parse().unwrap();
            assert_eq!(back.to_bits(), r.to_bits(), "{rendered}");
        }
    }

    #[test]
    fn rendered_output_is_valid_json() {
        let v = Value::Object(vec![
            ("s".into(), Value::str("line\nbreak \"quoted\"")),
            ("r".into(), Value::Real(0.73)),
            ("n".into(), Value::Int(-5)),
        ]);
        let parsed: serde_json::Value = serde_json::from_str(&v.render()).unwrap();
        assert_eq!(parsed["n"], serde_json::json!(-5));
        assert_eq!(parsed["r"].as_f64().unwrap(), 0.73);
    }

    #[test]
    fn attr_values_round_trip() {
        let t = Timestamp::parse_flex("2024-03-18T01:00").unwrap();
        let cases = vec![
            AttrValue::Str("driver_update".into()),
            AttrValue::Int(42),
            AttrValue::Real(0.78),
            AttrValue::Bool(false),
            AttrValue::Time(t),
        ];
        for v in cases {
            let rendered = attr_value(&v).render();
            let parsed: serde_json::Value = serde_json::from_str(&rendered).unwrap();
            assert_eq!(parse_attr_value(&parsed).unwrap(), v, "{rendered}");
        }
    }

    #[test]
    fn ints_and_reals_stay_distinguishable() {
        // Canonical reals always use scientific notation, so an integral
        // real never collides with an Int on the wire.
        let int = attr_value(&AttrValue::Int(2)).render();
        let real = attr_value(&AttrValue::Real(2.0)).render();
        assert_eq!(int, "2");
        assert_eq!(real, "2.0000000000000000e0");
        let back: serde_json::Value = serde_json::from_str(&real).unwrap();
        assert!(matches!(
            parse_attr_value(&back).unwrap(),
            AttrValue::Real(_)
        ));
    }
}
