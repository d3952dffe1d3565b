//! Exact coefficient fields: the rationals, prime fields `F_p` with `p > 3`,
//! and towers of simple algebraic extensions given by a defining relation.
//!
//! A [`Field`] is a cheap, shareable handle. Every [`FieldElement`] carries
//! its field, and its representation is canonical, so `==` on elements is
//! mathematical equality.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    Mismatch(String, String),
    #[error("prime field modulus must be a prime greater than 3, got {0}")]
    BadPrime(u64),
    #[error("defining polynomial must have degree at least 2")]
    DegreeTooSmall,
    #[error("defining polynomial {0} is reducible over the base field")]
    Reducible(String),
    #[error("cannot verify irreducibility of {0}; construct the extension in trusted mode")]
    CannotVerify(String),
    #[error("generator name `{0}` is already used in the tower")]
    DuplicateName(String),
    #[error("{0} is not representable in characteristic {1}")]
    NotRepresentable(String, u64),
    #[error("bad field descriptor `{0}`: {1}")]
    Descriptor(String, String),
}

/// Whether an extension's defining polynomial was proven irreducible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Irreducibility {
    Checked,
    Trusted,
}

/// Raw representation of an element; only meaningful together with a [`Field`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum Value {
    Rat(BigRational),
    Residue(u64),
    /// Coefficients over the base field, lowest degree first, no trailing zeros.
    Poly(Vec<Value>),
}

#[derive(Debug)]
struct Extension {
    base: Field,
    name: String,
    /// Monic modulus of degree `d`, `d + 1` coefficients.
    modulus: Vec<Value>,
    /// The relation as supplied (not necessarily monic), kept for display.
    relation: Vec<Value>,
    irreducibility: Irreducibility,
}

#[derive(Debug)]
enum Kind {
    Rationals,
    Prime(u64),
    Extension(Extension),
}

#[derive(Clone)]
pub struct Field(Arc<Kind>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        match (&*self.0, &*other.0) {
            (Kind::Rationals, Kind::Rationals) => true,
            (Kind::Prime(p), Kind::Prime(q)) => p == q,
            (Kind::Extension(a), Kind::Extension(b)) => {
                a.name == b.name && a.modulus == b.modulus && a.base == b.base
            }
            _ => false,
        }
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &*self.0 {
            Kind::Rationals => 0u8.hash(state),
            Kind::Prime(p) => {
                1u8.hash(state);
                p.hash(state);
            }
            Kind::Extension(e) => {
                2u8.hash(state);
                e.name.hash(state);
                e.modulus.hash(state);
                e.base.hash(state);
            }
        }
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.descriptor())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        r
    };
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    r
}

impl Field {
    pub fn rationals() -> Field {
        Field(Arc::new(Kind::Rationals))
    }

    pub fn prime(p: u64) -> Result<Field, FieldError> {
        if p <= 3 || !is_prime(p) {
            return Err(FieldError::BadPrime(p));
        }
        Ok(Field(Arc::new(Kind::Prime(p))))
    }

    /// Adjoins a root `name` of `relation` (coefficients over `base`, lowest
    /// degree first). The stored modulus is the monic normalization.
    pub fn extension(
        base: &Field,
        name: &str,
        relation: &[FieldElement],
        irreducibility: Irreducibility,
    ) -> Result<Field, FieldError> {
        for c in relation {
            if c.field() != base {
                return Err(FieldError::Mismatch(
                    c.field().descriptor(),
                    base.descriptor(),
                ));
            }
        }
        if base.symbols().iter().any(|(n, _)| n == name) {
            return Err(FieldError::DuplicateName(name.to_string()));
        }
        let mut rel: Vec<Value> = relation.iter().map(|c| c.value.clone()).collect();
        while rel.last().is_some_and(|c| base.is_zero_value(c)) {
            rel.pop();
        }
        if rel.len() < 3 {
            return Err(FieldError::DegreeTooSmall);
        }
        let lead_inv = base
            .inv_value(rel.last().unwrap())
            .ok_or(FieldError::DivisionByZero)?;
        let modulus: Vec<Value> = rel.iter().map(|c| base.mul_value(c, &lead_inv)).collect();
        if irreducibility == Irreducibility::Checked {
            let shown = poly_display(base, &rel, name);
            match base.has_root(&modulus) {
                Some(true) => return Err(FieldError::Reducible(shown)),
                Some(false) if modulus.len() <= 4 => {}
                _ => return Err(FieldError::CannotVerify(shown)),
            }
        }
        Ok(Field(Arc::new(Kind::Extension(Extension {
            base: base.clone(),
            name: name.to_string(),
            modulus,
            relation: rel,
            irreducibility,
        }))))
    }

    /// `base(sqrt(d))`: adjoins `name` with `name^2 = d`.
    pub fn quadratic(base: &Field, name: &str, d: &FieldElement) -> Result<Field, FieldError> {
        let rel = vec![-d.clone(), base.zero(), base.one()];
        Field::extension(base, name, &rel, Irreducibility::Checked)
    }

    /// `Q(i)` with `i^2 = -1`.
    pub fn gaussian() -> Field {
        let q = Field::rationals();
        Field::quadratic(&q, "i", &q.from_i64(-1)).expect("x^2+1 is irreducible over Q")
    }

    pub fn characteristic(&self) -> u64 {
        match &*self.0 {
            Kind::Rationals => 0,
            Kind::Prime(p) => *p,
            Kind::Extension(e) => e.base.characteristic(),
        }
    }

    /// Degree over the prime field.
    pub fn absolute_degree(&self) -> usize {
        match &*self.0 {
            Kind::Extension(e) => (e.modulus.len() - 1) * e.base.absolute_degree(),
            _ => 1,
        }
    }

    pub fn base(&self) -> Option<&Field> {
        match &*self.0 {
            Kind::Extension(e) => Some(&e.base),
            _ => None,
        }
    }

    pub fn generator_name(&self) -> Option<&str> {
        match &*self.0 {
            Kind::Extension(e) => Some(&e.name),
            _ => None,
        }
    }

    pub fn irreducibility(&self) -> Option<Irreducibility> {
        match &*self.0 {
            Kind::Extension(e) => Some(e.irreducibility),
            _ => None,
        }
    }

    /// The defining relation as supplied, lowest degree first.
    pub fn relation(&self) -> Option<Vec<FieldElement>> {
        match &*self.0 {
            Kind::Extension(e) => Some(e.relation.iter().map(|v| e.base.wrap(v.clone())).collect()),
            _ => None,
        }
    }

    /// The monic modulus, lowest degree first.
    pub fn modulus(&self) -> Option<Vec<FieldElement>> {
        match &*self.0 {
            Kind::Extension(e) => Some(e.modulus.iter().map(|v| e.base.wrap(v.clone())).collect()),
            _ => None,
        }
    }

    pub fn generator(&self) -> Option<FieldElement> {
        match &*self.0 {
            Kind::Extension(e) => Some(self.wrap(Value::Poly(vec![e.base.zero_value(), e.base.one_value()]))),
            _ => None,
        }
    }

    /// All generator symbols of the tower, each embedded into `self`.
    pub fn symbols(&self) -> Vec<(String, FieldElement)> {
        let mut out = Vec::new();
        let mut cur = self.clone();
        while let Kind::Extension(e) = &*cur.0 {
            let g = cur.generator().unwrap();
            out.push((e.name.clone(), self.embed(&g).expect("subfield of the tower")));
            cur = e.base.clone();
        }
        out.reverse();
        out
    }

    /// Maps an element of a subfield of this tower into `self`.
    pub fn embed(&self, a: &FieldElement) -> Result<FieldElement, FieldError> {
        if a.field() == self {
            return Ok(a.clone());
        }
        match &*self.0 {
            Kind::Extension(e) => {
                let inner = e.base.embed(a)?;
                Ok(self.wrap(self.lift_base(inner.value)))
            }
            _ => Err(FieldError::Mismatch(a.field().descriptor(), self.descriptor())),
        }
    }

    fn lift_base(&self, v: Value) -> Value {
        match &*self.0 {
            Kind::Extension(e) => {
                if e.base.is_zero_value(&v) {
                    Value::Poly(Vec::new())
                } else {
                    Value::Poly(vec![v])
                }
            }
            _ => v,
        }
    }

    /// Descriptor text accepted by [`Field::parse`].
    pub fn descriptor(&self) -> String {
        match &*self.0 {
            Kind::Rationals => "Q".to_string(),
            Kind::Prime(p) => format!("Fp({p})"),
            Kind::Extension(e) => {
                let rel = poly_display(&e.base, &e.relation, &e.name);
                let mut s = format!("ext({}; {}; {})", e.base.descriptor(), e.name, rel);
                if e.irreducibility == Irreducibility::Trusted {
                    s.insert_str(s.len() - 1, "; trusted");
                }
                s
            }
        }
    }

    pub(crate) fn wrap(&self, value: Value) -> FieldElement {
        FieldElement { field: self.clone(), value }
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(self.zero_value())
    }

    pub fn one(&self) -> FieldElement {
        self.wrap(self.one_value())
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldElement {
        self.from_rational(&BigRational::from_integer(n.clone()))
            .expect("integers embed in every field")
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Result<FieldElement, FieldError> {
        if den == 0 {
            return Err(FieldError::DivisionByZero);
        }
        self.from_rational(&BigRational::new(num.into(), den.into()))
    }

    pub fn from_rational(&self, q: &BigRational) -> Result<FieldElement, FieldError> {
        Ok(self.wrap(self.rational_value(q)?))
    }

    fn rational_value(&self, q: &BigRational) -> Result<Value, FieldError> {
        match &*self.0 {
            Kind::Rationals => Ok(Value::Rat(q.clone())),
            Kind::Prime(p) => {
                let pb = BigInt::from(*p);
                let n = q.numer().mod_floor(&pb).to_u64().unwrap();
                let d = q.denom().mod_floor(&pb).to_u64().unwrap();
                if d == 0 {
                    return Err(FieldError::NotRepresentable(q.to_string(), *p));
                }
                Ok(Value::Residue(
                    ((n as u128 * mod_pow(d, p - 2, *p) as u128) % *p as u128) as u64,
                ))
            }
            Kind::Extension(e) => {
                let v = e.base.rational_value(q)?;
                Ok(self.lift_base(v))
            }
        }
    }

    pub(crate) fn zero_value(&self) -> Value {
        match &*self.0 {
            Kind::Rationals => Value::Rat(BigRational::zero()),
            Kind::Prime(_) => Value::Residue(0),
            Kind::Extension(_) => Value::Poly(Vec::new()),
        }
    }

    pub(crate) fn one_value(&self) -> Value {
        match &*self.0 {
            Kind::Rationals => Value::Rat(BigRational::one()),
            Kind::Prime(_) => Value::Residue(1),
            Kind::Extension(e) => Value::Poly(vec![e.base.one_value()]),
        }
    }

    pub(crate) fn is_zero_value(&self, a: &Value) -> bool {
        match a {
            Value::Rat(q) => q.is_zero(),
            Value::Residue(r) => *r == 0,
            Value::Poly(c) => c.is_empty(),
        }
    }

    pub(crate) fn add_value(&self, a: &Value, b: &Value) -> Value {
        match (&*self.0, a, b) {
            (Kind::Rationals, Value::Rat(x), Value::Rat(y)) => Value::Rat(x + y),
            (Kind::Prime(p), Value::Residue(x), Value::Residue(y)) => {
                let s = x + y;
                Value::Residue(if s >= *p { s - p } else { s })
            }
            (Kind::Extension(e), Value::Poly(x), Value::Poly(y)) => {
                Value::Poly(poly_add(&e.base, x, y))
            }
            _ => unreachable!("value does not belong to field"),
        }
    }

    pub(crate) fn neg_value(&self, a: &Value) -> Value {
        match (&*self.0, a) {
            (Kind::Rationals, Value::Rat(x)) => Value::Rat(-x),
            (Kind::Prime(p), Value::Residue(x)) => Value::Residue(if *x == 0 { 0 } else { p - x }),
            (Kind::Extension(e), Value::Poly(x)) => {
                Value::Poly(x.iter().map(|c| e.base.neg_value(c)).collect())
            }
            _ => unreachable!("value does not belong to field"),
        }
    }

    pub(crate) fn sub_value(&self, a: &Value, b: &Value) -> Value {
        self.add_value(a, &self.neg_value(b))
    }

    pub(crate) fn mul_value(&self, a: &Value, b: &Value) -> Value {
        match (&*self.0, a, b) {
            (Kind::Rationals, Value::Rat(x), Value::Rat(y)) => Value::Rat(x * y),
            (Kind::Prime(p), Value::Residue(x), Value::Residue(y)) => {
                Value::Residue(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            (Kind::Extension(e), Value::Poly(x), Value::Poly(y)) => {
                if x.is_empty() || y.is_empty() {
                    return Value::Poly(Vec::new());
                }
                let prod = poly_mul(&e.base, x, y);
                Value::Poly(poly_rem_monic(&e.base, prod, &e.modulus))
            }
            _ => unreachable!("value does not belong to field"),
        }
    }

    pub(crate) fn inv_value(&self, a: &Value) -> Option<Value> {
        if self.is_zero_value(a) {
            return None;
        }
        match (&*self.0, a) {
            (Kind::Rationals, Value::Rat(x)) => Some(Value::Rat(x.recip())),
            (Kind::Prime(p), Value::Residue(x)) => Some(Value::Residue(mod_pow(*x, p - 2, *p))),
            (Kind::Extension(e), Value::Poly(x)) => poly_inverse_mod(&e.base, x, &e.modulus).map(Value::Poly),
            _ => unreachable!("value does not belong to field"),
        }
    }

    /// `Some(true)` if the monic polynomial has a root in this field,
    /// `Some(false)` if it provably has none, `None` if undecidable here.
    fn has_root(&self, monic: &[Value]) -> Option<bool> {
        match &*self.0 {
            Kind::Rationals => {
                // Clear denominators, then apply the rational root test.
                let coeffs: Vec<BigRational> = monic
                    .iter()
                    .map(|v| match v {
                        Value::Rat(q) => q.clone(),
                        _ => unreachable!(),
                    })
                    .collect();
                let l = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
                let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
                if ints[0].is_zero() {
                    return Some(true);
                }
                let a0 = ints[0].abs().to_u64()?;
                let an = ints.last().unwrap().abs().to_u64()?;
                if a0 > 1_000_000_000_000 || an > 1_000_000_000_000 {
                    return None;
                }
                let divisors = |n: u64| -> Vec<u64> {
                    let mut d = Vec::new();
                    let mut k = 1u64;
                    while k * k <= n {
                        if n % k == 0 {
                            d.push(k);
                            if k * k != n {
                                d.push(n / k);
                            }
                        }
                        k += 1;
                    }
                    d
                };
                for p in divisors(a0) {
                    for q in divisors(an) {
                        for sign in [1i64, -1] {
                            let r = BigRational::new(BigInt::from(p) * sign, BigInt::from(q));
                            let mut acc = BigRational::zero();
                            for c in ints.iter().rev() {
                                acc = acc * &r + BigRational::from_integer(c.clone());
                            }
                            if acc.is_zero() {
                                return Some(true);
                            }
                        }
                    }
                }
                Some(false)
            }
            Kind::Prime(p) => {
                if *p > 1_000_000 {
                    return None;
                }
                for r in 0..*p {
                    let rv = Value::Residue(r);
                    let mut acc = Value::Residue(0);
                    for c in monic.iter().rev() {
                        acc = self.add_value(&self.mul_value(&acc, &rv), c);
                    }
                    if self.is_zero_value(&acc) {
                        return Some(true);
                    }
                }
                Some(false)
            }
            Kind::Extension(_) => None,
        }
    }

    /// Parses a descriptor: `Q`, `Fp(p)`, `Q(i)`, `Q(sqrt(d))`,
    /// `ext(<base>; <name>; <relation in name>)` with an optional trailing
    /// `; trusted`. The relation may be written `lhs = rhs`.
    pub fn parse(text: &str) -> Result<Field, FieldError> {
        let t = text.trim();
        let err = |msg: &str| FieldError::Descriptor(text.to_string(), msg.to_string());
        let compact: String = t.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "Q" || compact == "QQ" {
            return Ok(Field::rationals());
        }
        if compact == "Q(i)" {
            return Ok(Field::gaussian());
        }
        if let Some(rest) = compact.strip_prefix("Fp(").and_then(|r| r.strip_suffix(')')) {
            let p: u64 = rest.parse().map_err(|_| err("prime modulus is not an integer"))?;
            return Field::prime(p);
        }
        if let Some(rest) = compact.strip_prefix("Q(sqrt(").and_then(|r| r.strip_suffix(')')) {
            let (num, name) = match rest.split_once(';') {
                Some((n, name)) => (n.strip_suffix(')').ok_or_else(|| err("unbalanced parentheses"))?, Some(name.to_string())),
                None => (rest.strip_suffix(')').ok_or_else(|| err("unbalanced parentheses"))?, None),
            };
            let d: i64 = num.parse().map_err(|_| err("radicand is not an integer"))?;
            let name = name.unwrap_or_else(|| sqrt_symbol(d));
            let q = Field::rationals();
            return Field::quadratic(&q, &name, &q.from_i64(d));
        }
        if let Some(inner) = t.strip_prefix("ext(").and_then(|r| r.trim_end().strip_suffix(')')) {
            let parts = split_top_level(inner);
            if parts.len() < 3 || parts.len() > 4 {
                return Err(err("expected ext(<base>; <name>; <relation>[; trusted])"));
            }
            let base = Field::parse(&parts[0])?;
            let name = parts[1].trim();
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(err("generator name must be alphanumeric"));
            }
            let irr = match parts.get(3).map(|s| s.trim()) {
                None => Irreducibility::Checked,
                Some("trusted") => Irreducibility::Trusted,
                Some(other) => return Err(err(&format!("unknown flag `{other}`"))),
            };
            let poly = crate::parse::parse_polynomial(&parts[2], &base, &[name])
                .map_err(|e| err(&e.to_string()))?;
            let deg = poly.total_degree().unwrap_or(0);
            let mut rel = vec![base.zero(); deg as usize + 1];
            for (m, c) in poly.terms() {
                rel[m[0] as usize] = c.clone();
            }
            return Field::extension(&base, name, &rel, irr);
        }
        Err(err("unrecognised field syntax"))
    }
}

/// Default generator symbol for `Q(sqrt(d))`: `s7` for 7, `sm7` for -7.
pub fn sqrt_symbol(d: i64) -> String {
    if d < 0 {
        format!("sm{}", d.unsigned_abs())
    } else {
        format!("s{d}")
    }
}

fn split_top_level(s: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ';' if depth == 0 => {
                parts.push(cur.trim().to_string());
                cur.clear();
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    parts.push(cur.trim().to_string());
    parts
}

fn trim(base: &Field, mut v: Vec<Value>) -> Vec<Value> {
    while v.last().is_some_and(|c| base.is_zero_value(c)) {
        v.pop();
    }
    v
}

fn poly_add(base: &Field, x: &[Value], y: &[Value]) -> Vec<Value> {
    let n = x.len().max(y.len());
    let zero = base.zero_value();
    let out = (0..n)
        .map(|k| base.add_value(x.get(k).unwrap_or(&zero), y.get(k).unwrap_or(&zero)))
        .collect();
    trim(base, out)
}

fn poly_mul(base: &Field, x: &[Value], y: &[Value]) -> Vec<Value> {
    let mut out = vec![base.zero_value(); x.len() + y.len() - 1];
    for (i, a) in x.iter().enumerate() {
        if base.is_zero_value(a) {
            continue;
        }
        for (j, b) in y.iter().enumerate() {
            out[i + j] = base.add_value(&out[i + j], &base.mul_value(a, b));
        }
    }
    trim(base, out)
}

fn poly_rem_monic(base: &Field, mut x: Vec<Value>, m: &[Value]) -> Vec<Value> {
    let d = m.len() - 1;
    while x.len() > d {
        let lead = x.pop().unwrap();
        if base.is_zero_value(&lead) {
            continue;
        }
        let shift = x.len() - d;
        for k in 0..d {
            let t = base.mul_value(&lead, &m[k]);
            x[shift + k] = base.sub_value(&x[shift + k], &t);
        }
    }
    trim(base, x)
}

/// `(q, r)` with `x = q*y + r`, `y` nonzero with invertible lead.
fn poly_divrem(base: &Field, x: &[Value], y: &[Value]) -> (Vec<Value>, Vec<Value>) {
    let mut r = x.to_vec();
    let dy = y.len() - 1;
    let inv = base.inv_value(y.last().unwrap()).expect("nonzero leading coefficient");
    if r.len() < y.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![base.zero_value(); r.len() - dy];
    while r.len() > dy {
        let lead = r.pop().unwrap();
        if base.is_zero_value(&lead) {
            continue;
        }
        let c = base.mul_value(&lead, &inv);
        let shift = r.len() - dy;
        for k in 0..dy {
            let t = base.mul_value(&c, &y[k]);
            r[shift + k] = base.sub_value(&r[shift + k], &t);
        }
        q[shift] = c;
    }
    (trim(base, q), trim(base, r))
}

fn poly_sub(base: &Field, x: &[Value], y: &[Value]) -> Vec<Value> {
    let neg: Vec<Value> = y.iter().map(|c| base.neg_value(c)).collect();
    poly_add(base, x, &neg)
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm; `None` if
/// `gcd(a, m)` is not a unit (the modulus is then reducible).
fn poly_inverse_mod(base: &Field, a: &[Value], m: &[Value]) -> Option<Vec<Value>> {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    let (mut s0, mut s1): (Vec<Value>, Vec<Value>) = (Vec::new(), vec![base.one_value()]);
    while !r1.is_empty() {
        let (q, r) = poly_divrem(base, &r0, &r1);
        let s2 = if q.is_empty() { s0.clone() } else { poly_sub(base, &s0, &poly_mul(base, &q, &s1)) };
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if r0.len() != 1 {
        return None;
    }
    let c = base.inv_value(&r0[0])?;
    let out: Vec<Value> = s0.iter().map(|v| base.mul_value(v, &c)).collect();
    Some(poly_rem_monic(base, trim(base, out), m))
}

fn poly_display(base: &Field, coeffs: &[Value], name: &str) -> String {
    let mut terms = Vec::new();
    for (k, c) in coeffs.iter().enumerate().rev() {
        if base.is_zero_value(c) {
            continue;
        }
        let e = base.wrap(c.clone());
        let mono = match k {
            0 => String::new(),
            1 => name.to_string(),
            _ => format!("{name}^{k}"),
        };
        terms.push(term_string(&e, &mono));
    }
    join_terms(&terms)
}

/// Renders `coef*mono` with the sign pulled out front where possible.
pub(crate) fn term_string(c: &FieldElement, mono: &str) -> String {
    if mono.is_empty() {
        return c.to_string();
    }
    if c.is_one() {
        return mono.to_string();
    }
    let neg = -c.clone();
    if neg.is_one() {
        return format!("-{mono}");
    }
    if !c.is_atomic() && neg.is_atomic() {
        return format!("-{}", term_string(&neg, mono));
    }
    let s = c.to_string();
    if c.is_atomic() {
        format!("{s}*{mono}")
    } else {
        format!("({s})*{mono}")
    }
}

pub(crate) fn join_terms(terms: &[String]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = terms[0].clone();
    for t in &terms[1..] {
        if let Some(rest) = t.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(t);
        }
    }
    out
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: Field,
    value: Value,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero_value(&self.value)
    }

    pub fn is_one(&self) -> bool {
        self.value == self.field.one_value()
    }

    fn check(&self, other: &FieldElement) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::Mismatch(self.field.descriptor(), other.field.descriptor()))
        }
    }

    pub fn try_add(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(self.field.wrap(self.field.add_value(&self.value, &other.value)))
    }

    pub fn try_sub(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(self.field.wrap(self.field.sub_value(&self.value, &other.value)))
    }

    pub fn try_mul(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(self.field.wrap(self.field.mul_value(&self.value, &other.value)))
    }

    pub fn try_div(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        let inv = other.inv()?;
        Ok(self.field.wrap(self.field.mul_value(&self.value, &inv.value)))
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        self.field
            .inv_value(&self.value)
            .map(|v| self.field.wrap(v))
            .ok_or_else(|| {
                if self.is_zero() {
                    FieldError::DivisionByZero
                } else {
                    FieldError::Reducible(self.field.descriptor())
                }
            })
    }

    pub fn pow(&self, mut e: u64) -> FieldElement {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power; negative exponents invert.
    pub fn powi(&self, e: i64) -> Result<FieldElement, FieldError> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    /// The rational value, if this element lies in the prime subfield `Q`.
    pub fn to_rational(&self) -> Option<BigRational> {
        match &self.value {
            Value::Rat(q) => Some(q.clone()),
            Value::Residue(_) => None,
            Value::Poly(c) => match c.len() {
                0 => Some(BigRational::zero()),
                1 => self.field.base().unwrap().wrap(c[0].clone()).to_rational(),
                _ => None,
            },
        }
    }

    /// Residue in `0..p` for prime-field elements.
    pub fn residue(&self) -> Option<u64> {
        match &self.value {
            Value::Residue(r) => Some(*r),
            _ => None,
        }
    }

    /// Coordinates on the power basis `1, g, g^2, ...` over the base field.
    pub fn coordinates(&self) -> Option<Vec<FieldElement>> {
        let base = self.field.base()?;
        let d = self.field.modulus().unwrap().len() - 1;
        let Value::Poly(c) = &self.value else { unreachable!() };
        Some((0..d).map(|k| base.wrap(c.get(k).cloned().unwrap_or_else(|| base.zero_value()))).collect())
    }

    /// Builds an element from power-basis coordinates over the base field.
    pub fn from_coordinates(field: &Field, coords: &[FieldElement]) -> Result<FieldElement, FieldError> {
        let base = field
            .base()
            .ok_or_else(|| FieldError::Descriptor(field.descriptor(), "not an extension".into()))?;
        let g = field.generator().unwrap();
        let mut acc = field.zero();
        for c in coords.iter().rev() {
            if c.field() != base {
                return Err(FieldError::Mismatch(c.field().descriptor(), base.descriptor()));
            }
            acc = &(&acc * &g) + &field.embed(c)?;
        }
        Ok(acc)
    }

    /// True when the printed form needs no parentheses as a factor.
    pub(crate) fn is_atomic(&self) -> bool {
        match &self.value {
            Value::Rat(q) => !q.is_negative(),
            Value::Residue(_) => true,
            Value::Poly(c) => {
                let base = self.field.base().unwrap();
                let mut nonzero = c.iter().filter(|v| !base.is_zero_value(v));
                match (nonzero.next(), nonzero.next()) {
                    (Some(v), None) => base.wrap(v.clone()).is_atomic(),
                    _ => false,
                }
            }
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Rat(q) => write!(f, "{q}"),
            Value::Residue(r) => write!(f, "{r}"),
            Value::Poly(c) => {
                let Kind::Extension(e) = &*self.field.0 else { unreachable!() };
                f.write_str(&poly_display(&e.base, c, &e.name))
            }
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
        impl $trait<FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, try_div);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.field.wrap(self.field.neg_value(&self.value))
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    #[test]
    fn rational_sums_reduce() {
        let f = q();
        let a = f.from_ratio(1, 3).unwrap() + f.from_ratio(1, 6).unwrap();
        assert_eq!(a, f.from_ratio(1, 2).unwrap());
        assert_eq!(a.to_string(), "1/2");
    }

    #[test]
    fn gaussian_unit_squares_to_minus_one() {
        let f = Field::gaussian();
        let i = f.generator().unwrap();
        assert_eq!(&i * &i, f.from_i64(-1));
        assert_eq!(f.descriptor(), "ext(Q; i; i^2 + 1)");
    }

    #[test]
    fn sqrt7_norm() {
        let f = Field::parse("Q(sqrt(7))").unwrap();
        let s = f.generator().unwrap();
        let three = f.from_i64(3);
        assert_eq!((&three + &s) * (&three - &s), f.from_i64(2));
        assert_eq!(f.generator_name(), Some("s7"));
    }

    #[test]
    fn non_monic_relation_is_normalized() {
        // 2t^3 = (1-i)t^2 + 4it + (1+i)
        let qi = Field::gaussian();
        let tower = Field::parse("ext(Q(i); t; 2*t^3 = (1-i)*t^2 + 4*i*t + (1+i); trusted)").unwrap();
        assert_eq!(tower.absolute_degree(), 6);
        let m = tower.modulus().unwrap();
        assert!(m[3].is_one());
        let i = qi.generator().unwrap();
        assert_eq!(m[0], -(qi.one() + &i) / qi.from_i64(2));
        let rel = tower.relation().unwrap();
        assert_eq!(rel[3], qi.from_i64(2));
        let t = tower.generator().unwrap();
        let lhs = tower.from_i64(2) * t.pow(3);
        let ie = tower.embed(&i).unwrap();
        let rhs = (tower.one() - &ie) * t.pow(2) + tower.from_i64(4) * &ie * &t + tower.one() + &ie;
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_in_tower() {
        let tower = Field::parse("ext(Q(i); t; 2*t^3 - (1-i)*t^2 - 4*i*t - (1+i); trusted)").unwrap();
        let t = tower.generator().unwrap();
        let i = tower.symbols()[0].1.clone();
        let a = &t * &t + &i * &t + tower.from_i64(7);
        assert!((&a * &a.inv().unwrap()).is_one());
    }

    #[test]
    fn prime_field_rules() {
        assert_eq!(Field::prime(3).unwrap_err(), FieldError::BadPrime(3));
        assert!(Field::prime(91).is_err());
        let f = Field::prime(10007).unwrap();
        let a = f.from_i64(-5);
        assert_eq!(a.residue(), Some(10002));
        assert!((&a * &a.inv().unwrap()).is_one());
        assert!(f.from_ratio(1, 10007).is_err());
    }

    #[test]
    fn reducible_relation_rejected() {
        assert!(matches!(Field::parse("Q(sqrt(4))"), Err(FieldError::Reducible(_))));
        assert!(matches!(
            Field::parse("ext(Q; a; a^3 - 2*a^2 - a + 2)"),
            Err(FieldError::Reducible(_))
        ));
        assert!(Field::parse("ext(Q; a; a^3 - 2)").is_ok());
        assert!(matches!(Field::parse("ext(Q; a; a^4 + 1)"), Err(FieldError::CannotVerify(_))));
        assert!(Field::parse("ext(Q; a; a^4 + 1; trusted)").is_ok());
    }

    #[test]
    fn division_by_zero_and_mismatch() {
        let f = q();
        assert_eq!(f.zero().inv().unwrap_err(), FieldError::DivisionByZero);
        let g = Field::gaussian();
        assert!(matches!(f.one().try_add(&g.one()), Err(FieldError::Mismatch(..))));
    }

    #[test]
    fn descriptor_round_trip() {
        for d in [
            "Q",
            "Fp(10007)",
            "Q(i)",
            "Q(sqrt(-7))",
            "ext(Q(i); t; 2*t^3 = (1-i)*t^2 + 4*i*t + (1+i); trusted)",
        ] {
            let f = Field::parse(d).unwrap();
            let again = Field::parse(&f.descriptor()).unwrap();
            assert_eq!(f, again, "{d}");
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let f = Field::parse("Q(sqrt(-7))").unwrap();
        let s = f.generator().unwrap();
        let a = f.from_ratio(3, 8).unwrap() - &s * f.from_i64(5);
        let c = a.coordinates().unwrap();
        assert_eq!(c[1], Field::rationals().from_i64(-5));
        assert_eq!(FieldElement::from_coordinates(&f, &c).unwrap(), a);
    }
}
