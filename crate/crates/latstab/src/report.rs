//! Report envelopes and machine-readable serialization.
//!
//! Every run emits `{ "manifest": ..., "result": ... }`. Floats are
//! rendered with 17 significant digits in both JSON and CSV so that values
//! round-trip losslessly and the two encodings agree digit for digit.
//! Re-running with an identical manifest reproduces the result bytes; the
//! timestamp is the only field outside that identity.

use std::collections::BTreeMap;
use std::io;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Provenance header embedded in every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub seed: u64,
    pub tool_version: String,
    /// ISO-8601; excluded from the reproducibility identity.
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(command: &str, parameters: BTreeMap<String, Value>, seed: u64) -> Self {
        Self {
            command: command.to_string(),
            parameters,
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Micros, true),
        }
    }
}

/// A manifest plus the run's result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report<T> {
    pub manifest: RunManifest,
    pub result: T,
}

/// Formats a finite float with 17 significant digits (lossless for f64).
pub fn format_f64(value: f64) -> String {
    format!("{value:.16e}")
}

struct SignificantDigitFormatter;

impl serde_json::ser::Formatter for SignificantDigitFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }
}

/// Serializes any report value to a single JSON line with 17-digit floats.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SignificantDigitFormatter);
    value
        .serialize(&mut ser)
        .expect("report values serialize to JSON");
    String::from_utf8(out).expect("JSON output is UTF-8")
}

/// Serde adapter for possibly-infinite floats: finite values stay numbers,
/// infinities become the strings "inf" / "-inf" (JSON has no infinity).
pub mod maybe_inf {
    use serde::de::{self, Visitor};
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    pub(super) struct MaybeInfVisitor;

    impl Visitor<'_> for MaybeInfVisitor {
        type Value = f64;

        fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
            f.write_str("a float or the string \"inf\"/\"-inf\"")
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
            Ok(v)
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
            match v {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                other => Err(E::custom(format!("unexpected float string {other:?}"))),
            }
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        d.deserialize_any(MaybeInfVisitor)
    }
}

/// Same adapter for a pair of possibly-infinite floats.
pub mod maybe_inf_pair {
    use serde::de::{self, Visitor};
    use serde::ser::SerializeTuple;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &(f64, f64), s: S) -> Result<S::Ok, S::Error> {
        struct One(f64);
        impl serde::Serialize for One {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                super::maybe_inf::serialize(&self.0, s)
            }
        }
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&One(v.0))?;
        t.serialize_element(&One(v.1))?;
        t.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(f64, f64), D::Error> {
        struct PairVisitor;
        impl<'de> Visitor<'de> for PairVisitor {
            type Value = (f64, f64);

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a pair of floats or \"inf\" strings")
            }

            fn visit_seq<A: de::SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
                struct One(f64);
                impl<'de> serde::Deserialize<'de> for One {
                    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                        d.deserialize_any(super::maybe_inf::MaybeInfVisitor)
                            .map(One)
                    }
                }
                let a: One = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let b: One = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(1, &self))?;
                Ok((a.0, b.0))
            }
        }
        d.deserialize_seq(PairVisitor)
    }
}

fn csv_escape(cell: &str) -> String {
    if cell.contains(',') || cell.contains('"') || cell.contains(' ') || cell.contains('\n') {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.to_string()
            } else if let Some(u) = n.as_u64() {
                u.to_string()
            } else {
                format_f64(n.as_f64().expect("numeric"))
            }
        }
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(csv_cell).collect::<Vec<_>>().join(" "),
        Value::Object(_) => serde_json::to_string(v).expect("nested object"),
    }
}

fn flatten_object(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, inner) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten_object(&key, inner, out);
            }
        }
        other => out.push((prefix.to_string(), csv_cell(other))),
    }
}

/// Renders a result value as CSV with a header row. The manifest rides
/// along as `#`-prefixed comment lines. Arrays of records become one row
/// per record; a single record becomes a one-row table; arrays of points
/// become coordinate columns.
pub fn to_csv<T: Serialize>(manifest: &RunManifest, result: &T) -> String {
    let value = serde_json::to_value(result).expect("report values convert to JSON values");
    let mut out = String::new();
    out.push_str(&format!("# command={}\n", manifest.command));
    out.push_str(&format!("# seed={}\n", manifest.seed));
    out.push_str(&format!("# tool_version={}\n", manifest.tool_version));
    out.push_str(&format!("# timestamp={}\n", manifest.timestamp));
    for (k, v) in &manifest.parameters {
        out.push_str(&format!("# {k}={}\n", to_json(v)));
    }
    match &value {
        Value::Array(items) if items.iter().all(|i| i.is_object()) && !items.is_empty() => {
            let mut first = Vec::new();
            flatten_object("", &items[0], &mut first);
            let header: Vec<String> = first.iter().map(|(k, _)| k.clone()).collect();
            out.push_str(
                &header
                    .iter()
                    .map(|h| csv_escape(h))
                    .collect::<Vec<_>>()
                    .join(","),
            );
            out.push('\n');
            for item in items {
                let mut cells = Vec::new();
                flatten_object("", item, &mut cells);
                out.push_str(
                    &cells
                        .iter()
                        .map(|(_, c)| csv_escape(c))
                        .collect::<Vec<_>>()
                        .join(","),
                );
                out.push('\n');
            }
        }
        Value::Array(items) if items.iter().all(|i| i.is_array()) && !items.is_empty() => {
            let width = items[0].as_array().map(|a| a.len()).unwrap_or(0);
            let header: Vec<String> = (0..width).map(|i| format!("x{i}")).collect();
            out.push_str(&header.join(","));
            out.push('\n');
            for item in items {
                let row = item
                    .as_array()
                    .expect("array row")
                    .iter()
                    .map(|c| csv_escape(&csv_cell(c)))
                    .collect::<Vec<_>>()
                    .join(",");
                out.push_str(&row);
                out.push('\n');
            }
        }
        Value::Object(_) => {
            let mut cells = Vec::new();
            flatten_object("", &value, &mut cells);
            out.push_str(
                &cells
                    .iter()
                    .map(|(k, _)| csv_escape(k))
                    .collect::<Vec<_>>()
                    .join(","),
            );
            out.push('\n');
            out.push_str(
                &cells
                    .iter()
                    .map(|(_, c)| csv_escape(c))
                    .collect::<Vec<_>>()
                    .join(","),
            );
            out.push('\n');
        }
        other => {
            out.push_str("value\n");
            out.push_str(&csv_escape(&csv_cell(other)));
            out.push('\n');
        }
    }
    out
}
