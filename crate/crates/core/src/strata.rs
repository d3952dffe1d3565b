//! Hyperflex strata: the stratum table, membership diagnostics for the one
//! dimensional families `Z1` and `Z4`, exact tests for the zero dimensional
//! strata, and reconstruction of representative curves.
//!
//! All printed data lives in `data/strata.txt`, bundled at compile time.

use std::fmt;
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fields::{Field, FieldElement, Irreducibility};
use crate::invariants::{absolute_invariants, dixmier_ohno, weighted_equal, InvariantVector};
use crate::par;
use crate::parse::parse_polynomial;
use crate::poly::{MultiPoly, UniPoly, Vars};
use crate::TernaryQuartic;

pub const DATA: &str = include_str!("../data/strata.txt");

const ABS_NAMES: [&str; 12] = ["i1", "i2", "i3", "i4", "i5", "i6", "j1", "j2", "j3", "j4", "j5", "j6"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumLabel {
    pub name: String,
    /// Number of hyperflexes.
    pub hyperflexes: u32,
    pub dim: u32,
    pub substrata: Vec<String>,
}

impl fmt::Display for StratumLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[derive(Clone, Debug)]
pub struct ModelRecord {
    pub label: String,
    pub field: String,
    pub curve: String,
}

/// A rational function stored as numerator and denominator over `Q`.
#[derive(Clone, Debug)]
pub struct RationalForm {
    pub name: String,
    pub num: MultiPoly,
    pub den: MultiPoly,
}

impl RationalForm {
    /// `None` when the denominator vanishes.
    pub fn eval(&self, point: &[FieldElement]) -> Result<Option<FieldElement>> {
        let d = eval_rational_poly(&self.den, point)?;
        if d.is_zero() {
            return Ok(None);
        }
        let n = eval_rational_poly(&self.num, point)?;
        Ok(Some(n.try_div(&d)?))
    }
}

#[derive(Clone, Debug)]
pub struct Family {
    pub zexpr: RationalForm,
    pub forms: Vec<RationalForm>,
    /// Polynomial in `T, z` whose roots give the model parameter.
    pub param: MultiPoly,
    /// `t -> z`, in `t` (over `Q(i)` for `Z4`).
    pub quotient: (MultiPoly, MultiPoly),
    /// Model in `X, Y, Z, t`.
    pub template: MultiPoly,
    pub template_text: String,
    pub defining: Option<MultiPoly>,
}

#[derive(Clone, Debug)]
pub struct StrataData {
    pub version: u32,
    pub strata: Vec<StratumLabel>,
    pub models: Vec<ModelRecord>,
    pub tuples: Vec<(String, [BigRational; 12])>,
    pub ideals: Vec<(String, Vec<MultiPoly>)>,
    pub notes: Vec<(String, String)>,
    pub z1: Family,
    pub z4: Family,
}

fn data_err(line: usize, msg: impl fmt::Display) -> Error {
    Error::Data(format!("line {line}: {msg}"))
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d: num_bigint::BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n.trim().parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

#[derive(Default)]
struct FamilyParts {
    zexpr: Option<RationalForm>,
    forms: Vec<RationalForm>,
    param: Option<MultiPoly>,
    quotient: Option<(MultiPoly, MultiPoly)>,
    template: Option<(MultiPoly, String)>,
    defining: Option<MultiPoly>,
}

impl FamilyParts {
    fn finish(self, name: &str) -> Result<Family> {
        let missing = |what: &str| Error::Data(format!("{name}: missing {what} record"));
        let (template, template_text) = self.template.ok_or_else(|| missing("template"))?;
        Ok(Family {
            zexpr: self.zexpr.ok_or_else(|| missing("zexpr"))?,
            forms: self.forms,
            param: self.param.ok_or_else(|| missing("param"))?,
            quotient: self.quotient.ok_or_else(|| missing("quotient"))?,
            template,
            template_text,
            defining: self.defining,
        })
    }
}

impl StrataData {
    pub fn parse(text: &str) -> Result<StrataData> {
        let q = Field::rationals();
        let gauss = Field::gaussian();
        let mut version = None;
        let mut strata = Vec::new();
        let mut models = Vec::new();
        let mut tuples = Vec::new();
        let mut ideals: Vec<(String, Vec<MultiPoly>)> = Vec::new();
        let mut notes = Vec::new();
        let mut z1 = FamilyParts::default();
        let mut z4 = FamilyParts::default();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let raw = raw.trim();
            if raw.is_empty() || raw.starts_with('#') {
                continue;
            }
            let f: Vec<&str> = raw.split(" | ").map(str::trim).collect();
            let poly = |s: &str, field: &Field, vars: &[&str]| {
                parse_polynomial(s, field, vars).map_err(|e| data_err(line, e))
            };
            let form = |name: &str, num: &str, den: &str, vars: &[&str]| -> Result<RationalForm> {
                Ok(RationalForm { name: name.to_string(), num: poly(num, &q, vars)?, den: poly(den, &q, vars)? })
            };
            let family = |label: &str| -> Result<usize> {
                match label {
                    "Z1" => Ok(1),
                    "Z4" => Ok(4),
                    other => Err(data_err(line, format!("unknown family {other}"))),
                }
            };
            let expect = |k: usize| -> Result<()> {
                if f.len() == k {
                    Ok(())
                } else {
                    Err(data_err(line, format!("expected {k} fields, found {}", f.len())))
                }
            };
            match f[0] {
                "version" => {
                    expect(2)?;
                    version = Some(f[1].parse().map_err(|_| data_err(line, "bad version"))?);
                }
                "stratum" => {
                    expect(5)?;
                    let num = |s: &str| s.parse::<u32>().map_err(|_| data_err(line, "bad integer"));
                    let substrata = if f[4] == "-" {
                        Vec::new()
                    } else {
                        f[4].split(',').map(|s| s.trim().to_string()).collect()
                    };
                    strata.push(StratumLabel {
                        name: f[1].to_string(),
                        hyperflexes: num(f[2])?,
                        dim: num(f[3])?,
                        substrata,
                    });
                }
                "model" => {
                    expect(4)?;
                    models.push(ModelRecord { label: f[1].into(), field: f[2].into(), curve: f[3].into() });
                }
                "tuple" => {
                    expect(14)?;
                    let vals: Vec<BigRational> = f[2..]
                        .iter()
                        .map(|s| parse_rational(s).ok_or_else(|| data_err(line, format!("bad rational {s}"))))
                        .collect::<Result<_>>()?;
                    tuples.push((f[1].to_string(), vals.try_into().expect("twelve values")));
                }
                "ideal" => {
                    expect(3)?;
                    let g = poly(f[2], &q, &ABS_NAMES[..6])?;
                    match ideals.iter_mut().find(|(l, _)| l == f[1]) {
                        Some((_, gens)) => gens.push(g),
                        None => ideals.push((f[1].to_string(), vec![g])),
                    }
                }
                "note" => {
                    expect(3)?;
                    notes.push((f[1].to_string(), f[2].to_string()));
                }
                "zexpr" => {
                    expect(4)?;
                    let r = form("z", f[2], f[3], &["i1", "i2"])?;
                    if family(f[1])? == 1 { z1.zexpr = Some(r) } else { z4.zexpr = Some(r) }
                }
                "form" => {
                    expect(5)?;
                    let r = form(f[2], f[3], f[4], &["z"])?;
                    if family(f[1])? == 1 { z1.forms.push(r) } else { z4.forms.push(r) }
                }
                "param" => {
                    expect(3)?;
                    let p = poly(f[2], &q, &["T", "z"])?;
                    if family(f[1])? == 1 { z1.param = Some(p) } else { z4.param = Some(p) }
                }
                "quotient" => {
                    expect(4)?;
                    let fam = family(f[1])?;
                    let field = if fam == 1 { &q } else { &gauss };
                    let pair = (poly(f[2], field, &["t"])?, poly(f[3], field, &["t"])?);
                    if fam == 1 { z1.quotient = Some(pair) } else { z4.quotient = Some(pair) }
                }
                "template" => {
                    expect(3)?;
                    let fam = family(f[1])?;
                    let field = if fam == 1 { &q } else { &gauss };
                    let p = poly(f[2], field, &["X", "Y", "Z", "t"])?;
                    let entry = Some((p, f[2].to_string()));
                    if fam == 1 { z1.template = entry } else { z4.template = entry }
                }
                "defining" => {
                    expect(3)?;
                    if family(f[1])? != 4 {
                        return Err(data_err(line, "defining polynomial only recorded for Z4"));
                    }
                    z4.defining = Some(poly(f[2], &q, &["I3", "I6", "I9"])?);
                }
                other => return Err(data_err(line, format!("unknown record kind `{other}`"))),
            }
        }
        Ok(StrataData {
            version: version.ok_or_else(|| Error::Data("missing version record".into()))?,
            strata,
            models,
            tuples,
            ideals,
            notes,
            z1: z1.finish("Z1")?,
            z4: z4.finish("Z4")?,
        })
    }

    pub fn stratum(&self, name: &str) -> Result<&StratumLabel> {
        let key = canonical_label(name);
        self.strata.iter().find(|s| s.name == key).ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    pub fn tuple(&self, label: &str) -> Option<&[BigRational; 12]> {
        self.tuples.iter().find(|(l, _)| l == label).map(|(_, t)| t)
    }

    pub fn ideal(&self, label: &str) -> Option<&[MultiPoly]> {
        self.ideals.iter().find(|(l, _)| l == label).map(|(_, g)| g.as_slice())
    }
}

/// The bundled data, parsed once.
pub fn data() -> &'static StrataData {
    static DATA_CELL: OnceLock<StrataData> = OnceLock::new();
    DATA_CELL.get_or_init(|| StrataData::parse(DATA).expect("bundled strata data is well formed"))
}

/// Accepts `Phi`, `phi`, `Φ`, `Pi_1`, `Π1`, `M3°` and similar spellings.
pub fn canonical_label(name: &str) -> String {
    let mut s: String = name.chars().filter(|c| !matches!(c, '_' | ' ' | '°' | '₀')).collect();
    for (greek, latin) in [("Θ", "Theta"), ("Π", "Pi"), ("Σ", "Sigma"), ("Ω", "Omega"), ("Φ", "Phi"), ("Ψ", "Psi")] {
        s = s.replace(greek, latin);
    }
    for (sub, digit) in [('₁', '1'), ('₂', '2'), ('₃', '3'), ('₄', '4'), ('₅', '5'), ('₆', '6'), ('₇', '7'), ('₈', '8'), ('₉', '9')] {
        s = s.replace(sub, &digit.to_string());
    }
    let lower = s.to_lowercase();
    for known in ["theta", "pi", "sigma", "omega", "phi", "psi"] {
        if let Some(rest) = lower.strip_prefix(known) {
            if rest.chars().all(|c| c.is_ascii_digit()) {
                let mut out = known.to_string();
                out[..1].make_ascii_uppercase();
                return out + rest;
            }
        }
    }
    s.to_uppercase()
}

/// Evaluates a polynomial with rational coefficients at a point of any
/// characteristic zero field.
pub fn eval_rational_poly(p: &MultiPoly, point: &[FieldElement]) -> Result<FieldElement> {
    if point.len() != p.nvars() {
        return Err(Error::LengthMismatch { expected: p.nvars(), got: point.len() });
    }
    let field = match point.first() {
        Some(x) => x.field().clone(),
        None => Field::rationals(),
    };
    let mut acc = field.zero();
    for (m, c) in p.terms() {
        let q = c.to_rational().ok_or_else(|| Error::Data("coefficient is not rational".into()))?;
        let mut t = field.from_rational(&q)?;
        for (k, &e) in m.iter().enumerate() {
            if e > 0 {
                t = &t * &point[k].pow(e as u64);
            }
        }
        acc = &acc + &t;
    }
    Ok(acc)
}

fn require_char0(field: &Field) -> Result<()> {
    if field.characteristic() != 0 {
        return Err(Error::NeedsCharacteristicZero);
    }
    Ok(())
}

/// A named family or stratum test with its residuals (all zero on success).
#[derive(Clone, Debug)]
pub struct Diagnostic {
    pub label: String,
    pub passed: bool,
    pub residuals: Vec<(String, FieldElement)>,
    pub note: Option<String>,
}

#[derive(Clone, Debug)]
pub struct FamilyTest {
    pub member: bool,
    pub z: Option<FieldElement>,
    pub residuals: Vec<(String, FieldElement)>,
    pub note: Option<String>,
}

impl FamilyTest {
    fn diagnostic(&self, label: &str) -> Diagnostic {
        Diagnostic {
            label: label.to_string(),
            passed: self.member,
            residuals: self.residuals.clone(),
            note: self.note.clone(),
        }
    }
}

fn compare_forms(forms: &[RationalForm], z: &FieldElement, actual: &[FieldElement; 12]) -> Result<(bool, Vec<(String, FieldElement)>, Option<String>)> {
    let mut residuals = Vec::new();
    let mut ok = true;
    let mut undefined = Vec::new();
    for form in forms {
        let k = ABS_NAMES.iter().position(|n| *n == form.name).ok_or_else(|| Error::Data(format!("unknown form {}", form.name)))?;
        match form.eval(std::slice::from_ref(z))? {
            Some(expected) => {
                let r = &actual[k] - &expected;
                ok &= r.is_zero();
                residuals.push((form.name.clone(), r));
            }
            None => {
                ok = false;
                undefined.push(form.name.clone());
            }
        }
    }
    let note = (!undefined.is_empty()).then(|| format!("closed forms undefined at z for {}", undefined.join(", ")));
    Ok((ok, residuals, note))
}

/// Extracts `z` from `(i1, i2)` and compares all twelve absolute invariants
/// with the closed forms of the `Z1` family.
pub fn z1_test(v: &InvariantVector) -> Result<FamilyTest> {
    require_char0(v.field())?;
    let abs = absolute_invariants(v)?.all();
    let fam = &data().z1;
    let Some(z) = fam.zexpr.eval(&abs[..2])? else {
        return Ok(FamilyTest { member: false, z: None, residuals: Vec::new(), note: Some("z is indeterminate".into()) });
    };
    let (member, residuals, note) = compare_forms(&fam.forms, &z, &abs)?;
    Ok(FamilyTest { member, z: Some(z), residuals, note })
}

/// Necessary conditions for `Z4` (the weighted defining polynomial, then
/// `z` and the `i1, i2` closed forms), confirmed by comparing with the
/// invariants of a reconstructed model.
pub fn z4_test(v: &InvariantVector) -> Result<FamilyTest> {
    let mut t = z4_necessary(v)?;
    if !t.member {
        return Ok(t);
    }
    let z = t.z.clone().expect("z extracted");
    match z4_confirm(v, &z) {
        Ok(true) => {}
        Ok(false) => {
            t.member = false;
            t.note = Some("invariants differ from the reconstructed model".into());
        }
        Err(e) => {
            t.member = false;
            t.note = Some(format!("reconstruction failed: {e}"));
        }
    }
    Ok(t)
}

/// The cheap part of [`z4_test`].
pub fn z4_necessary(v: &InvariantVector) -> Result<FamilyTest> {
    require_char0(v.field())?;
    let fam = &data().z4;
    let vals = v.values();
    let point = [vals[0].clone(), vals[1].clone(), vals[2].clone()];
    let defining = eval_rational_poly(fam.defining.as_ref().expect("Z4 defining polynomial"), &point)?;
    let mut residuals = vec![("defining".to_string(), defining.clone())];
    if !defining.is_zero() {
        return Ok(FamilyTest { member: false, z: None, residuals, note: None });
    }
    let abs = absolute_invariants(v)?.all();
    let Some(z) = fam.zexpr.eval(&abs[..2])? else {
        return Ok(FamilyTest { member: false, z: None, residuals, note: Some("z is indeterminate".into()) });
    };
    let (ok, more, note) = compare_forms(&fam.forms, &z, &abs)?;
    residuals.extend(more);
    Ok(FamilyTest { member: ok, z: Some(z), residuals, note })
}

/// Weighted equality of `v` with the invariants of the `Z4` model at `z`.
pub fn z4_confirm(v: &InvariantVector, z: &FieldElement) -> Result<bool> {
    let rec = reconstruct_z4(z)?;
    let w = dixmier_ohno(&rec.model)?;
    let vv = v.embed(w.field())?;
    weighted_equal(&vv, &w)
}

fn rational_tuple_residuals(actual: &[FieldElement; 12], tuple: &[BigRational; 12]) -> Result<Vec<(String, FieldElement)>> {
    let field = actual[0].field();
    (0..12)
        .map(|k| Ok((ABS_NAMES[k].to_string(), &actual[k] - &field.from_rational(&tuple[k])?)))
        .collect()
}

/// Exact tests against every zero dimensional stratum, in a fixed order.
pub fn zero_dim_diagnostics(v: &InvariantVector) -> Result<Vec<Diagnostic>> {
    require_char0(v.field())?;
    let abs = absolute_invariants(v)?.all();
    let d = data();
    let mut out = Vec::new();
    for (label, tuple) in &d.tuples {
        let residuals = rational_tuple_residuals(&abs, tuple)?;
        let passed = residuals.iter().all(|(_, r)| r.is_zero());
        out.push(Diagnostic { label: label.clone(), passed, residuals, note: None });
    }
    for (label, gens) in &d.ideals {
        let residuals: Vec<(String, FieldElement)> = gens
            .iter()
            .enumerate()
            .map(|(k, g)| Ok((format!("g{}", k + 1), eval_rational_poly(g, &abs[..6])?)))
            .collect::<Result<_>>()?;
        let passed = residuals.iter().all(|(_, r)| r.is_zero());
        out.push(Diagnostic { label: label.clone(), passed, residuals, note: None });
    }
    Ok(out)
}

/// The unique zero dimensional stratum matching `v`, if any.
pub fn zero_dim_test(v: &InvariantVector) -> Result<Option<StratumLabel>> {
    let hits: Vec<Diagnostic> = zero_dim_diagnostics(v)?.into_iter().filter(|d| d.passed).collect();
    match hits.as_slice() {
        [] => Ok(None),
        [one] => Ok(Some(data().stratum(&one.label)?.clone())),
        many => {
            let names: Vec<&str> = many.iter().map(|d| d.label.as_str()).collect();
            Err(Error::Data(format!("several zero dimensional strata match: {}", names.join(", "))))
        }
    }
}

/// The curve recorded for a zero dimensional stratum, over its field.
pub fn builtin_model(label: &str) -> Result<TernaryQuartic> {
    let key = canonical_label(label);
    let key = match key.as_str() {
        "Pi" | "Pi2" => "Pi1".to_string(),
        "Omega" => "Omega1".to_string(),
        _ => key,
    };
    let rec = data()
        .models
        .iter()
        .find(|m| m.label == key)
        .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
    let field = Field::parse(&rec.field)?;
    TernaryQuartic::parse(&rec.curve, &field)
}

pub const BUILTIN_LABELS: [&str; 8] = ["Theta", "Pi1", "Pi2", "Sigma", "Omega1", "Omega2", "Phi", "Psi"];

#[derive(Clone, Debug)]
pub struct HyperflexCheck {
    pub given: usize,
    pub expected: u32,
    pub agrees: bool,
}

#[derive(Clone, Debug)]
pub struct StratumReport {
    pub label: Option<StratumLabel>,
    pub z: Option<FieldElement>,
    pub diagnostics: Vec<Diagnostic>,
    pub hyperflex_check: Option<HyperflexCheck>,
    pub note: Option<String>,
}

/// Runs the zero dimensional tests, then `Z1`, then `Z4`; the first hit wins.
/// Once a zero dimensional stratum matches, `Z4` is only checked for the
/// necessary conditions.
pub fn classify(v: &InvariantVector, hyperflex_count: Option<usize>) -> Result<StratumReport> {
    require_char0(v.field())?;
    if v.i3().is_zero() {
        return Ok(StratumReport {
            label: None,
            z: None,
            diagnostics: Vec::new(),
            hyperflex_check: None,
            note: Some("I3 vanishes: outside the recorded diagnostics".into()),
        });
    }
    let zero = zero_dim_diagnostics(v)?;
    let settled = zero.iter().any(|x| x.passed);
    // the Z4 confirmation rebuilds a model, often over a large tower
    let (z1, z4) = par::join(
        || z1_test(v),
        || {
            if settled {
                z4_necessary(v).map(|mut t| {
                    if t.member {
                        t.note = Some("necessary conditions only".into());
                    }
                    t
                })
            } else {
                z4_test(v)
            }
        },
    );
    let (z1, z4) = (z1?, z4?);
    let d = data();
    let mut label = None;
    let mut z = None;
    let hits: Vec<&Diagnostic> = zero.iter().filter(|x| x.passed).collect();
    if let Some(hit) = hits.first() {
        label = Some(d.stratum(&hit.label)?.clone());
    } else if z1.member {
        label = Some(d.stratum("Z1")?.clone());
        z = z1.z.clone();
    } else if z4.member {
        label = Some(d.stratum("Z4")?.clone());
        z = z4.z.clone();
    }
    let mut diagnostics = zero;
    diagnostics.push(z1.diagnostic("Z1"));
    diagnostics.push(z4.diagnostic("Z4"));
    let hyperflex_check = match (hyperflex_count, &label) {
        (Some(given), Some(l)) => Some(HyperflexCheck { given, expected: l.hyperflexes, agrees: given == l.hyperflexes as usize }),
        _ => None,
    };
    Ok(StratumReport { label, z, diagnostics, hyperflex_check, note: None })
}

/// A family member rebuilt from its modulus `z`.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    /// Parameter polynomial in `T` over the field of `z`.
    pub param: UniPoly,
    pub template: String,
    /// The parameter value used, and the model it gives.
    pub t: FieldElement,
    pub model: TernaryQuartic,
}

fn param_poly(p: &MultiPoly, z: &FieldElement) -> Result<UniPoly> {
    let field = z.field();
    let deg = p.degree_in(0).unwrap_or(0) as usize;
    let mut coeffs = vec![field.zero(); deg + 1];
    for (m, c) in p.terms() {
        let q = c.to_rational().expect("rational coefficients");
        coeffs[m[0] as usize] = &coeffs[m[0] as usize] + &(&field.from_rational(&q)? * &z.pow(m[1] as u64));
    }
    Ok(UniPoly::new(field, coeffs))
}

/// An element of `field` squaring to `-1`, if the field exposes one.
pub fn sqrt_minus_one(field: &Field) -> Option<FieldElement> {
    let minus_one = -field.one();
    field.symbols().into_iter().map(|(_, g)| g).find(|g| g.pow(2) == minus_one)
}

/// `field` itself if it has a square root of `-1`, otherwise `field(i)`.
pub fn with_i(field: &Field) -> Result<(Field, FieldElement)> {
    if let Some(i) = sqrt_minus_one(field) {
        return Ok((field.clone(), i));
    }
    let k = if *field == Field::rationals() {
        Field::gaussian()
    } else {
        Field::quadratic(field, "i", &field.from_i64(-1))
            .or_else(|_| Field::extension(field, "i", &[field.one(), field.zero(), field.one()], Irreducibility::Trusted))?
    };
    let i = k.generator().expect("adjoined generator");
    Ok((k, i))
}

/// Maps a `Q(i)` element into a field where `i` is given.
fn from_gaussian(c: &FieldElement, i: &FieldElement) -> Result<FieldElement> {
    let field = i.field();
    if let Some(q) = c.to_rational() {
        return Ok(field.from_rational(&q)?);
    }
    let coords = c.coordinates().ok_or_else(|| Error::Data("expected a Gaussian rational".into()))?;
    let a = field.from_rational(&coords[0].to_rational().expect("rational"))?;
    let b = coords.get(1).map(|x| x.to_rational().expect("rational")).unwrap_or_else(BigRational::zero);
    Ok(&a + &(&field.from_rational(&b)? * i))
}

fn instantiate(template: &MultiPoly, t: &FieldElement, i: Option<&FieldElement>) -> Result<TernaryQuartic> {
    let field = t.field().clone();
    let mapped = template.map_coefficients(&field, |c| match i {
        Some(i) => from_gaussian(c, i),
        None => Ok(field.from_rational(&c.to_rational().expect("rational template"))?),
    })?;
    let vars = Vars::new(&["X", "Y", "Z"]);
    let images = vec![
        MultiPoly::var(&field, &vars, 0),
        MultiPoly::var(&field, &vars, 1),
        MultiPoly::var(&field, &vars, 2),
        MultiPoly::constant(&vars, t.clone()),
    ];
    let poly = mapped.compose(&images)?;
    TernaryQuartic::new(poly).map_err(|e| Error::Degenerate(format!("model at t = {t}: {e}")))
}

fn eval_quotient(q: &(MultiPoly, MultiPoly), t: &FieldElement, i: Option<&FieldElement>) -> Result<FieldElement> {
    let field = t.field().clone();
    let map = |p: &MultiPoly| -> Result<FieldElement> {
        let mapped = p.map_coefficients(&field, |c| match i {
            Some(i) => from_gaussian(c, i),
            None => Ok(field.from_rational(&c.to_rational().expect("rational"))?),
        })?;
        mapped.evaluate(std::slice::from_ref(t))
    };
    let d = map(&q.1)?;
    if d.is_zero() {
        return Err(Error::Degenerate(format!("quotient map undefined at t = {t}")));
    }
    Ok(map(&q.0)?.try_div(&d)?)
}

/// `(t^2+1)(X^2-YZ)^2 = YZ(2X-Y-Z)(2tX-Y-t^2Z)`.
pub fn z1_model(t: &FieldElement) -> Result<TernaryQuartic> {
    instantiate(&data().z1.template, t, None)
}

/// `z = t + 1/t + u + 1/u - 1/2` with `u = (1+it)/(t+i)`.
pub fn z1_quotient(t: &FieldElement) -> Result<FieldElement> {
    eval_quotient(&data().z1.quotient, t, None)
}

/// The `Z4` model; the field of `t` must contain a square root of `-1`.
pub fn z4_model(t: &FieldElement) -> Result<TernaryQuartic> {
    let i = sqrt_minus_one(t.field()).ok_or_else(|| Error::Degenerate("the Z4 model needs a square root of -1".into()))?;
    instantiate(&data().z4.template, t, Some(&i))
}

/// The degree three quotient `t -> z` of the `Z4` family.
pub fn z4_quotient(t: &FieldElement) -> Result<FieldElement> {
    let i = sqrt_minus_one(t.field()).ok_or_else(|| Error::Degenerate("the Z4 quotient needs a square root of -1".into()))?;
    eval_quotient(&data().z4.quotient, t, Some(&i))
}

/// Exact square root in `Q` or in a quadratic extension of `Q`.
pub fn exact_sqrt(a: &FieldElement) -> Option<FieldElement> {
    let field = a.field();
    if a.is_zero() {
        return Some(field.zero());
    }
    if let Some(q) = a.to_rational() {
        if let Some(r) = rational_sqrt(&q) {
            return field.from_rational(&r).ok();
        }
        if field.absolute_degree() == 1 {
            return None;
        }
    }
    // a = x + y g with g^2 = d over Q
    if field.absolute_degree() != 2 {
        return None;
    }
    let g = field.generator()?;
    let d = g.pow(2).to_rational()?;
    let coords = a.coordinates()?;
    let x = coords[0].to_rational()?;
    let y = coords.get(1).and_then(|c| c.to_rational()).unwrap_or_else(BigRational::zero);
    // (u + w g)^2 = u^2 + d w^2 + 2uw g
    let norm = &x * &x - &d * &y * &y;
    let n = rational_sqrt(&norm)?;
    let two = BigRational::from_integer(2.into());
    for cand in [(&x + &n) / &two, (&x - &n) / &two] {
        if let Some(u) = rational_sqrt(&cand) {
            let root = if u.is_zero() {
                let w = rational_sqrt(&(&x / &d))?;
                field.from_rational(&w).ok()? * g.clone()
            } else {
                let w = &y / (&two * &u);
                &field.from_rational(&u).ok()? + &(&field.from_rational(&w).ok()? * &g)
            };
            if &root.pow(2) == a {
                return Some(root);
            }
        }
    }
    None
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    use num_traits::Signed;
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| BigRational::new(n, d))
}

/// A root of `a T^2 + b T + c`, adjoining a square root when needed.
fn quadratic_root(a: &FieldElement, b: &FieldElement, c: &FieldElement, name: &str) -> Result<FieldElement> {
    let field = a.field();
    let disc = &b.pow(2) - &(&field.from_i64(4) * &(a * c));
    let two_a = &field.from_i64(2) * a;
    if let Some(r) = exact_sqrt(&disc) {
        return Ok((&r - b).try_div(&two_a)?);
    }
    let ext = Field::extension(field, name, &[-disc.clone(), field.zero(), field.one()], Irreducibility::Trusted)?;
    let g = ext.generator().expect("generator");
    Ok((&g - &ext.embed(b)?).try_div(&ext.embed(&two_a)?)?)
}

/// Rebuilds a `Z1` curve: `z` fixes `s = t + 1/t` by `2s^2 - (1+2z)s + 8 = 0`,
/// then `t^2 - s t + 1 = 0`.
pub fn reconstruct_z1(z: &FieldElement) -> Result<Reconstruction> {
    require_char0(z.field())?;
    let fam = &data().z1;
    let param = param_poly(&fam.param, z)?;
    let field = z.field();
    let s = quadratic_root(&field.from_i64(2), &-(&field.one() + &(&field.from_i64(2) * z)), &field.from_i64(8), "s")?;
    let k = s.field().clone();
    let t = quadratic_root(&k.one(), &-s, &k.one(), "t")?;
    if (&t.pow(2) + &t.field().one()).is_zero() {
        return Err(Error::Degenerate("t^2 + 1 = 0".into()));
    }
    let model = z1_model(&t)?;
    Ok(Reconstruction { param, template: fam.template_text.clone(), t, model })
}

/// Rebuilds a `Z4` curve: over a field with `i`, the degree six polynomial
/// has the cubic factor `N(T) - z D(T)` from the quotient map `z = N/D`.
pub fn reconstruct_z4(z: &FieldElement) -> Result<Reconstruction> {
    require_char0(z.field())?;
    let fam = &data().z4;
    let param = param_poly(&fam.param, z)?;
    let (k, i) = with_i(z.field())?;
    let zk = k.embed(z)?;
    let to_uni = |p: &MultiPoly| -> Result<UniPoly> {
        let deg = p.degree_in(0).unwrap_or(0) as usize;
        let mut c = vec![k.zero(); deg + 1];
        for (m, a) in p.terms() {
            c[m[0] as usize] = from_gaussian(a, &i)?;
        }
        Ok(UniPoly::new(&k, c))
    };
    let cubic = to_uni(&fam.quotient.0)?.sub(&to_uni(&fam.quotient.1)?.scale(&zk));
    let admissible = |t: &FieldElement| -> bool {
        let ti = t.field().embed(&i).map(|i| t + &i).unwrap_or_else(|_| t.clone());
        !t.is_zero() && !ti.is_zero()
    };
    let mut candidates: Vec<FieldElement> = gaussian_roots(&cubic, &i).into_iter().filter(|t| admissible(t)).collect();
    if candidates.is_empty() {
        if gaussian_roots(&cubic, &i).is_empty() {
            let ext = Field::extension(&k, "t", cubic.coeffs(), Irreducibility::Trusted)?;
            candidates.push(ext.generator().expect("generator"));
        } else {
            return Err(Error::Degenerate(format!("every parameter over {k} is degenerate at z = {z}")));
        }
    }
    let t = candidates.swap_remove(0);
    let model = z4_model(&t)?;
    Ok(Reconstruction { param, template: fam.template_text.clone(), t, model })
}

/// Roots in `Q(i)` of a polynomial over `Q(i)`: complex roots found
/// numerically, rounded to nearby Gaussian rationals and checked exactly.
/// Returns nothing for other fields.
pub fn gaussian_roots(p: &UniPoly, i: &FieldElement) -> Vec<FieldElement> {
    let field = p.field();
    if field.absolute_degree() > 2 || p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let to_c = |c: &FieldElement| -> Option<(f64, f64)> {
        if let Some(q) = c.to_rational() {
            return Some((q.to_f64()?, 0.0));
        }
        let co = c.coordinates()?;
        let a = co[0].to_rational()?.to_f64()?;
        let b = co.get(1).and_then(|x| x.to_rational()).and_then(|x| x.to_f64()).unwrap_or(0.0);
        // c = a + b g with g = +-i
        let sign = if i.coordinates().is_some_and(|ic| ic.get(1).and_then(|x| x.to_rational()).is_some_and(|x| x < BigRational::zero())) { -1.0 } else { 1.0 };
        Some((a, sign * b))
    };
    let Some(coeffs) = p.coeffs().iter().map(to_c).collect::<Option<Vec<_>>>() else {
        return Vec::new();
    };
    let mut out: Vec<FieldElement> = Vec::new();
    for (re, im) in durand_kerner(&coeffs) {
        let (Some(a), Some(b)) = (rationalize(re), rationalize(im)) else { continue };
        let Ok(a) = field.from_rational(&a) else { continue };
        let Ok(b) = field.from_rational(&b) else { continue };
        let cand = &a + &(&b * i);
        if p.eval(&cand).is_zero() && !out.contains(&cand) {
            out.push(cand);
        }
    }
    out
}

fn durand_kerner(coeffs: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let n = coeffs.len() - 1;
    let mul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let div = |a: (f64, f64), b: (f64, f64)| {
        let d = b.0 * b.0 + b.1 * b.1;
        ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
    };
    let lead = coeffs[n];
    let monic: Vec<(f64, f64)> = coeffs.iter().map(|&c| div(c, lead)).collect();
    let eval = |x: (f64, f64)| monic.iter().rev().fold((0.0, 0.0), |acc, &c| {
        let m = mul(acc, x);
        (m.0 + c.0, m.1 + c.1)
    });
    let mut roots: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let base = (0.4, 0.9);
            (0..k).fold((1.0, 0.0), |acc, _| mul(acc, base))
        })
        .collect();
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for k in 0..n {
            let mut den = (1.0, 0.0);
            for j in 0..n {
                if j != k {
                    den = mul(den, (roots[k].0 - roots[j].0, roots[k].1 - roots[j].1));
                }
            }
            let step = div(eval(roots[k]), den);
            roots[k] = (roots[k].0 - step.0, roots[k].1 - step.1);
            delta = delta.max(step.0.abs() + step.1.abs());
        }
        if delta < 1e-15 {
            break;
        }
    }
    roots
}

/// Continued fraction approximation with a bounded denominator.
fn rationalize(x: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        if k2 > 1_000_000_000 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let approx = h1 as f64 / k1 as f64;
        if (approx - x).abs() <= 1e-9 * x.abs().max(1.0) {
            return Some(BigRational::new(h1.into(), k1.into()));
        }
        let frac = r - a;
        if frac.abs() < 1e-300 {
            break;
        }
        r = 1.0 / frac;
    }
    (k1 != 0).then(|| BigRational::new(h1.into(), k1.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    #[test]
    fn bundled_data_parses() {
        let d = data();
        assert_eq!(d.version, 1);
        assert_eq!(d.stratum("Z4").unwrap().hyperflexes, 7);
        assert_eq!(d.stratum("Z1").unwrap().hyperflexes, 8);
        assert_eq!(d.stratum("Φ").unwrap().dim, 0);
        assert_eq!(d.stratum("psi").unwrap().hyperflexes, 12);
        assert_eq!(d.z1.forms.len(), 12);
        assert_eq!(d.z4.forms.len(), 2);
        assert_eq!(d.ideal("Omega").unwrap().len(), 6);
    }

    #[test]
    fn labels_normalize() {
        assert_eq!(canonical_label("Π₁"), "Pi1");
        assert_eq!(canonical_label("omega_2"), "Omega2");
        assert_eq!(canonical_label("z4"), "Z4");
        assert_eq!(canonical_label("M3°"), "M3");
    }

    #[test]
    fn malformed_data_rejected() {
        assert!(StrataData::parse("version | 1\nbogus | x").is_err());
        assert!(StrataData::parse("tuple | A | 1/0").is_err());
    }

    #[test]
    fn z4_defining_polynomial_hand_point() {
        let p = data().z4.defining.as_ref().unwrap();
        let pt = [q().one(), -q().one(), q().one()];
        assert!(eval_rational_poly(p, &pt).unwrap().is_zero());
    }

    #[test]
    fn z4_z_expression_hand_point() {
        let z = data().z4.zexpr.eval(&[-q().one(), q().one()]).unwrap().unwrap();
        assert_eq!(z, q().one());
        let i1 = &data().z4.forms[0];
        assert_eq!(i1.eval(&[q().one()]).unwrap().unwrap(), -q().one());
        assert_eq!(data().z4.forms[1].eval(&[q().one()]).unwrap().unwrap(), q().one());
    }

    #[test]
    fn z4_param_at_one() {
        let p = param_poly(&data().z4.param, &q().one()).unwrap();
        let c: Vec<i64> = vec![0, 0, 2, -4, 4, -4, 2];
        assert_eq!(p, UniPoly::new(&q(), c.iter().map(|&a| q().from_i64(a)).collect()));
        let t2 = UniPoly::new(&q(), vec![q().one(), q().zero(), q().one()]);
        assert!(p.div_rem(&t2).unwrap().1.is_zero());
        assert!(p.eval(&q().one()).is_zero());
        let g = Field::gaussian();
        assert_eq!(z4_quotient(&g.one()).unwrap(), g.one());
    }

    #[test]
    fn z1_param_and_model() {
        let z = q().from_ratio(18, 5).unwrap();
        let p = param_poly(&data().z1.param, &z).unwrap();
        assert!(p.eval(&q().from_i64(2)).is_zero());
        assert_eq!(z1_quotient(&q().from_i64(2)).unwrap(), z);
        let m = z1_model(&q().from_i64(2)).unwrap();
        let expect = TernaryQuartic::parse("5(X^2-YZ)^2 - YZ(2X-Y-Z)(4X-Y-4Z)", &q()).unwrap();
        assert_eq!(m.poly(), expect.poly());
        let rec = reconstruct_z1(&z).unwrap();
        assert_eq!(z1_quotient(&rec.t).unwrap(), rec.model.field().embed(&z).unwrap());
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(exact_sqrt(&q().from_ratio(9, 4).unwrap()), Some(q().from_ratio(3, 2).unwrap()));
        assert_eq!(exact_sqrt(&q().from_i64(2)), None);
        let k = Field::parse("Q(sqrt(-7))").unwrap();
        let g = k.generator().unwrap();
        let a = (&k.from_i64(3) + &g).pow(2);
        let r = exact_sqrt(&a).unwrap();
        assert_eq!(r.pow(2), a);
        assert_eq!(exact_sqrt(&g), None);
    }

    #[test]
    fn gaussian_root_finding() {
        let g = Field::gaussian();
        let i = g.generator().unwrap();
        let root = &g.from_ratio(3, 7).unwrap() - &(&g.from_ratio(2, 5).unwrap() * &i);
        let p = UniPoly::linear(&root).mul(&UniPoly::new(&g, vec![g.one(), g.zero(), g.one()]));
        let roots = gaussian_roots(&p, &i);
        assert_eq!(roots.len(), 3);
        assert!(roots.contains(&root));
    }
}
