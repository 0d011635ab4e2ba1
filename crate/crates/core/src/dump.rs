//! JSON export of tables and trace records.

use num_traits::ToPrimitive;
use serde_json::{json, Value as Json};

use crate::net::CanonicalNet;
use crate::semantics::{TraceStep, TransitionLabel};
use crate::syntax::ast::{Loc, Table};
use crate::syntax::render;
use crate::values::Value;

/// Integers become JSON numbers when they fit in 64 bits and strings
/// otherwise; localities are written `$name`; multisets become arrays.
pub fn value_json(v: &Value) -> Json {
    match v {
        Value::Int(n) => n.to_i64().map_or_else(|| Json::String(n.to_string()), Json::from),
        Value::Str(s) => Json::String(s.clone()),
        Value::Tid(t) => Json::String(t.0.clone()),
        Value::Loc(l) => Json::String(l.to_string()),
        Value::Set(items) => Json::Array(items.expanded().map(value_json).collect()),
    }
}

pub fn table_json(loc: &Loc, t: &Table) -> Json {
    let rows: Vec<Json> =
        t.rows.expanded().map(|r| Json::Array(r.0.iter().map(value_json).collect())).collect();
    json!({
        "loc": loc.to_string(),
        "tid": t.iface.tid.as_ref().map_or("_".to_string(), |t| t.0.clone()),
        "schema": render(&t.iface.schema),
        "rows": rows,
    })
}

/// All tables of a net, ordered by locality and identifier, rows in
/// lexicographic order.
pub fn tables_json(cn: &CanonicalNet) -> Json {
    Json::Array(cn.tables().map(|(l, t)| table_json(l, t)).collect())
}

pub fn lid_json(cn: &CanonicalNet) -> Json {
    Json::Array(
        cn.lid()
            .expanded()
            .map(|(l, t)| Json::Array(vec![Json::String(l.to_string()), Json::String(t.0.clone())]))
            .collect(),
    )
}

pub fn label_json(index: usize, label: &TransitionLabel, state: &CanonicalNet) -> Json {
    let mut j = json!({
        "index": index,
        "rule": label.rule.name(),
        "actor": label.actor.to_string(),
        "detail": label.detail,
        "lid": lid_json(state),
        "ok": state.ok(),
    });
    if let Some(seq) = label.seq {
        j["seq"] = Json::String(seq.name().to_string());
    }
    j
}

pub fn step_json(index: usize, s: &TraceStep) -> Json {
    label_json(index, &s.label, &s.state)
}
