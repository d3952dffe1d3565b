use num_traits::ToPrimitive;
use quartix_core::invariants::{AbsoluteInvariants, InvariantVector, NAMES};
use quartix_core::strata::{Diagnostic, StratumReport};
use quartix_core::weierstrass::FlexReport;
use quartix_core::{Field, FieldElement};
use serde_json::{json, Map, Value};

/// Rationals and residues as strings; extension elements as coefficient
/// lists on the power basis, nested for towers.
pub fn element(x: &FieldElement) -> Value {
    if x.field().base().is_some() {
        let coords = x.coordinates().expect("extension element has coordinates");
        return Value::Array(coords.iter().map(element).collect());
    }
    Value::String(x.to_string())
}

fn approx_value(x: &FieldElement) -> Value {
    match x.to_rational().and_then(|q| q.to_f64()) {
        Some(f) if x.field().base().is_none() && x.field().characteristic() == 0 => json!(format!("{f:.12e}")),
        _ => Value::Null,
    }
}

pub fn field(f: &Field) -> Value {
    Value::String(f.descriptor())
}

pub fn invariants(v: &InvariantVector, approx: bool) -> Value {
    let mut exact = Map::new();
    let mut dec = Map::new();
    for (name, x) in NAMES.iter().zip(v.values()) {
        exact.insert(name.to_string(), element(x));
        dec.insert(name.to_string(), approx_value(x));
    }
    let mut out = Map::new();
    out.insert("invariants".into(), Value::Object(exact));
    if approx {
        out.insert("approx".into(), json!({ "display_only": true, "values": dec }));
    }
    Value::Object(out)
}

pub fn absolutes(a: &AbsoluteInvariants, approx: bool) -> Value {
    let mut i = Map::new();
    let mut j = Map::new();
    let mut dec = Map::new();
    for k in 0..6 {
        i.insert(format!("i{}", k + 1), element(&a.i[k]));
        j.insert(format!("j{}", k + 1), element(&a.j[k]));
        dec.insert(format!("i{}", k + 1), approx_value(&a.i[k]));
        dec.insert(format!("j{}", k + 1), approx_value(&a.j[k]));
    }
    let mut out = Map::new();
    out.insert("i".into(), Value::Object(i));
    out.insert("j".into(), Value::Object(j));
    if approx {
        out.insert("approx".into(), json!({ "display_only": true, "values": dec }));
    }
    Value::Object(out)
}

pub fn flex(r: &FlexReport, seed: u64) -> Value {
    json!({
        "hyperflexes": r.hyperflex_count,
        "flexes": r.flex_count,
        "hyperflex_form": r.hyperflex_form.to_string(),
        "frames": r.frames,
        "attempts": r.attempts,
        "seed": seed.to_string(),
        "warnings": r.warnings,
    })
}

fn diagnostic(d: &Diagnostic) -> Value {
    let residuals: Map<String, Value> = d.residuals.iter().map(|(n, r)| (n.clone(), element(r))).collect();
    json!({
        "test": d.label,
        "passed": d.passed,
        "residuals": residuals,
        "note": d.note,
    })
}

pub fn stratum(r: &StratumReport) -> Value {
    let mut out = Map::new();
    match &r.label {
        Some(l) => {
            out.insert("stratum".into(), json!(l.name));
            out.insert("s".into(), json!(l.hyperflexes));
            out.insert("dim".into(), json!(l.dim));
        }
        None => {
            out.insert("stratum".into(), Value::Null);
            out.insert("s".into(), Value::Null);
            out.insert("dim".into(), Value::Null);
        }
    }
    out.insert("z".into(), r.z.as_ref().map(element).unwrap_or(Value::Null));
    if let Some(h) = &r.hyperflex_check {
        out.insert("hyperflex_check".into(), json!({ "computed": h.given, "expected": h.expected, "agrees": h.agrees }));
    }
    out.insert("diagnostics".into(), Value::Array(r.diagnostics.iter().map(diagnostic).collect()));
    out.insert("note".into(), r.note.as_ref().map(|n| json!(n)).unwrap_or(Value::Null));
    Value::Object(out)
}

pub fn error(msg: &str) -> Value {
    json!({ "error": msg })
}
