//! Curve sources: an expression in `X, Y, Z`, or a JSON coefficient map
//! `{"i,j,k": "a"}` giving the integral coefficient `a_{ijk}` of `X^i Y^j Z^k`.
//!
//! Batch files hold one curve per line as `field | curve`, where `curve` is
//! either form. Blank lines and lines starting with `#` are skipped.

use quartix_core::parse::parse_element;
use quartix_core::{Field, FieldElement, LinearMap3, TernaryQuartic};
use serde_json::Value;

pub struct CurveInput {
    pub field: Field,
    pub curve: TernaryQuartic,
}

pub fn field(text: &str) -> Result<Field, String> {
    Field::parse(text).map_err(|e| format!("field `{text}`: {e}"))
}

pub fn elem(text: &str, field: &Field) -> Result<FieldElement, String> {
    parse_element(text, field).map_err(|e| format!("`{text}`: {e}"))
}

fn coefficient_map(text: &str, field: &Field) -> Result<TernaryQuartic, String> {
    let map: serde_json::Map<String, Value> = serde_json::from_str(text).map_err(|e| format!("coefficient map: {e}"))?;
    let mut terms = Vec::with_capacity(map.len());
    for (key, val) in map {
        let exps: Vec<u32> = key
            .split(',')
            .map(|s| s.trim().parse::<u32>().map_err(|_| format!("bad exponent key `{key}`")))
            .collect::<Result<_, _>>()?;
        let exps: [u32; 3] = exps.try_into().map_err(|_| format!("key `{key}` needs three exponents"))?;
        let text = match &val {
            Value::String(s) => s.clone(),
            Value::Number(n) => n.to_string(),
            other => return Err(format!("coefficient of `{key}` must be a string or number, got {other}")),
        };
        terms.push((exps, elem(&text, field)?));
    }
    TernaryQuartic::from_coefficients(field, terms).map_err(|e| e.to_string())
}

/// Reads a curve given either as an expression or as a coefficient map.
pub fn curve(text: &str, field: &Field) -> Result<TernaryQuartic, String> {
    let t = text.trim();
    if t.starts_with('{') {
        coefficient_map(t, field)
    } else {
        TernaryQuartic::parse(t, field).map_err(|e| format!("curve `{t}`: {e}"))
    }
}

pub fn batch(text: &str) -> Vec<(usize, Result<CurveInput, String>)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(n, l)| {
            let parsed = (|| {
                let (f, c) = l.split_once('|').ok_or("expected `field | curve`")?;
                let field = field(f.trim())?;
                let curve = curve(c, &field)?;
                Ok(CurveInput { field, curve })
            })();
            (n + 1, parsed)
        })
        .collect()
}

/// `"a,b,c;d,e,f;g,h,k"`, rows separated by `;`.
pub fn transform(text: &str, field: &Field) -> Result<LinearMap3, String> {
    let rows: Vec<&str> = text.split(';').collect();
    if rows.len() != 3 {
        return Err(format!("transform `{text}` needs three rows"));
    }
    let mut m: Vec<[FieldElement; 3]> = Vec::with_capacity(3);
    for row in rows {
        let entries: Vec<FieldElement> = row.split(',').map(|e| elem(e.trim(), field)).collect::<Result<_, _>>()?;
        m.push(entries.try_into().map_err(|_| format!("transform row `{row}` needs three entries"))?);
    }
    let g = LinearMap3::new(m.try_into().expect("three rows"));
    if g.det().is_zero() {
        return Err("transform is singular".into());
    }
    Ok(g)
}

/// `"x:y:z"` or `"x,y,z"`.
pub fn point(text: &str, field: &Field) -> Result<[FieldElement; 3], String> {
    let sep = if text.contains(':') { ':' } else { ',' };
    let coords: Vec<FieldElement> = text.split(sep).map(|e| elem(e.trim(), field)).collect::<Result<_, _>>()?;
    coords.try_into().map_err(|_| format!("point `{text}` needs three coordinates"))
}
