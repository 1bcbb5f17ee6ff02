//! Command reports: a fixed JSON shape plus a plain-text rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::finmap::FinMap;

/// One command outcome. Field order is the serialized key order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    /// True iff `witnesses` is empty.
    pub ok: bool,
    pub result: Value,
    pub witnesses: Vec<Value>,
    pub counts: BTreeMap<String, u64>,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Report {
        Report {
            command: command.into(),
            ok: true,
            result: json!({}),
            witnesses: Vec::new(),
            counts: BTreeMap::new(),
            elapsed_ms: 0,
        }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report values serialize");
        self.result
            .as_object_mut()
            .expect("result is an object")
            .insert(key.to_owned(), v);
    }

    pub fn count(&mut self, key: &str, n: u64) {
        self.counts.insert(key.to_owned(), n);
    }

    /// Records a counterexample; any witness makes the report a failure.
    pub fn witness(&mut self, w: Value) {
        self.witnesses.push(w);
    }

    pub fn finish(mut self, elapsed_ms: u64) -> Report {
        self.witnesses.sort_by_cached_key(|w| w.to_string());
        self.ok = self.witnesses.is_empty();
        self.elapsed_ms = elapsed_ms;
        self
    }

    pub fn exit_code(&self) -> i32 {
        if self.ok {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{}: {}", self.command, if self.ok { "ok" } else { "FAILED" }).unwrap();
        if let Some(obj) = self.result.as_object() {
            for (k, v) in obj {
                writeln!(s, "  {k}: {}", plain(v)).unwrap();
            }
        }
        for w in &self.witnesses {
            writeln!(s, "  witness: {}", plain(w)).unwrap();
        }
        for (k, n) in &self.counts {
            writeln!(s, "  count {k}: {n}").unwrap();
        }
        s
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// A map as its name, endpoints and `[input, output]` label pairs.
pub fn map_json(f: &FinMap) -> Value {
    let pairs: Vec<[&str; 2]> = f.assignments().into_iter().map(|(a, b)| [a, b]).collect();
    json!({
        "name": f.name(),
        "dom": f.dom().id(),
        "cod": f.cod().id(),
        "assignments": pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_in_fixed_order() {
        let mut r = Report::new("demo");
        r.set("z", 1);
        r.set("a", 2);
        r.count("n", 3);
        let text = serde_json::to_string(&r.finish(7)).unwrap();
        assert_eq!(
            text,
            r#"{"command":"demo","ok":true,"result":{"a":2,"z":1},"witnesses":[],"counts":{"n":3},"elapsed_ms":7}"#
        );
    }

    #[test]
    fn witnesses_sorted_and_fail() {
        let mut r = Report::new("demo");
        r.witness(json!({"element": "b"}));
        r.witness(json!({"element": "a"}));
        let r = r.finish(0);
        assert!(!r.ok);
        assert_eq!(r.exit_code(), 1);
        assert_eq!(r.witnesses[0], json!({"element": "a"}));
    }
}
