//! Line-oriented and JSON reports. Verdicts ride on exit codes as well so
//! CI can assert without parsing: 0 accept/true, 1 reject/false, 2
//! usage or malformed input, 3 resource cap exceeded.

use serde_json::{json, Map, Value};

pub const EXIT_ACCEPT: i32 = 0;
pub const EXIT_REJECT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

/// Ordered key/value pairs printed either as `key: value` lines or as a
/// single JSON object with a schema marker.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pairs: Vec<(String, Value)>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn push(&mut self, key: &str, value: impl Into<Value>) -> &mut Report {
        self.pairs.push((key.to_string(), value.into()));
        self
    }

    pub fn print(&self, as_json: bool) {
        if as_json {
            let mut map = Map::new();
            map.insert("schema".into(), json!(1));
            for (k, v) in &self.pairs {
                map.insert(k.clone(), v.clone());
            }
            println!("{}", Value::Object(map));
        } else {
            for (k, v) in &self.pairs {
                match v {
                    Value::String(s) => println!("{k}: {s}"),
                    Value::Null => println!("{k}: -"),
                    other => println!("{k}: {other}"),
                }
            }
        }
    }
}

/// Report skeleton shared by the proof checkers.
pub fn check_report(r: &mrtk_core::report::CheckReport) -> Report {
    let mut rep = Report::new();
    rep.push("verdict", if r.valid { "valid" } else { "invalid" });
    rep.push(
        "failing_line",
        r.failing_line.map(|l| json!(l)).unwrap_or(Value::Null),
    );
    rep.push(
        "reason",
        r.reason
            .map(|x| json!(x.to_string()))
            .unwrap_or(Value::Null),
    );
    rep.push("size", r.size);
    rep.push("width", r.max_width);
    rep.push(
        "regular",
        r.regular.map(|b| json!(b)).unwrap_or(Value::Null),
    );
    rep.push("nodes", r.total_nodes);
    rep
}
