//! Sparse multivariate polynomials with exact coefficients.

pub mod binary;
pub(crate) mod linear;
mod univariate;

pub use binary::{gcd_binary_forms, resultant_in_var, resultant_in_var_interpolated, squarefree_part};
pub use linear::LinearMap3;
pub use univariate::UniPoly;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fields::{join_terms, term_string, Field, FieldElement};

/// An ordered list of variable names shared between polynomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vars(Arc<Vec<String>>);

impl Vars {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Vars {
        Vars(Arc::new(names.iter().map(|s| s.as_ref().to_string()).collect()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }
}

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Exponent vector ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Monomial {
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    field: Field,
    vars: Vars,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl MultiPoly {
    pub fn zero(field: &Field, vars: &Vars) -> MultiPoly {
        MultiPoly { field: field.clone(), vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Vars, c: FieldElement) -> MultiPoly {
        let mut p = MultiPoly::zero(c.field(), vars);
        p.add_term(vec![0; vars.len()], c);
        p
    }

    pub fn var(field: &Field, vars: &Vars, index: usize) -> MultiPoly {
        let mut e = vec![0; vars.len()];
        e[index] = 1;
        MultiPoly::monomial(vars, e, field.one())
    }

    pub fn monomial(vars: &Vars, exps: Vec<u32>, c: FieldElement) -> MultiPoly {
        let mut p = MultiPoly::zero(c.field(), vars);
        p.add_term(exps, c);
        p
    }

    pub fn from_terms<I>(field: &Field, vars: &Vars, terms: I) -> MultiPoly
    where
        I: IntoIterator<Item = (Vec<u32>, FieldElement)>,
    {
        let mut p = MultiPoly::zero(field, vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Adds `c * x^exps` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, exps: Vec<u32>, c: FieldElement) {
        debug_assert_eq!(exps.len(), self.vars.len());
        if c.is_zero() {
            return;
        }
        let key = Monomial(exps);
        match self.terms.get_mut(&key) {
            Some(old) => {
                let s = &*old + &c;
                if s.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&[u32], &FieldElement)> + '_ {
        self.terms.iter().map(|(m, c)| (m.exponents(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> FieldElement {
        self.terms.get(&Monomial(exps.to_vec())).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn leading_term(&self) -> Option<(&[u32], &FieldElement)> {
        self.terms.iter().next_back().map(|(m, c)| (m.exponents(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub(crate) fn same_ring(&self, other: &MultiPoly) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::VariableMismatch(self.vars.names().to_vec(), other.vars.names().to_vec()));
        }
        if self.field != other.field {
            return Err(crate::fields::FieldError::Mismatch(self.field.descriptor(), other.field.descriptor()).into());
        }
        Ok(())
    }

    pub fn scale(&self, c: &FieldElement) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.field, &self.vars);
        }
        MultiPoly {
            field: self.field.clone(),
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.same_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.0.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.same_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.0.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.same_ring(other)?;
        let mut acc: BTreeMap<Monomial, FieldElement> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let e: Vec<u32> = ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect();
                let prod = ca * cb;
                acc.entry(Monomial(e))
                    .and_modify(|c| *c = &*c + &prod)
                    .or_insert(prod);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(MultiPoly { field: self.field.clone(), vars: self.vars.clone(), terms: acc })
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::constant(&self.vars, self.field.one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact partial derivative in variable `var`.
    pub fn derive(&self, var: usize) -> Result<MultiPoly> {
        if var >= self.nvars() {
            return Err(Error::BadVariable(var));
        }
        let mut out = MultiPoly::zero(&self.field, &self.vars);
        for (m, c) in &self.terms {
            let k = m.0[var];
            if k == 0 {
                continue;
            }
            let mut e = m.0.clone();
            e[var] -= 1;
            out.add_term(e, c * &self.field.from_i64(k as i64));
        }
        Ok(out)
    }

    /// Applies `prod_k (d/dx_k)^{orders[k]}`.
    pub fn derive_multi(&self, orders: &[u32]) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.field, &self.vars);
        'terms: for (m, c) in &self.terms {
            let mut factor: i64 = 1;
            let mut e = m.0.clone();
            for (k, &o) in orders.iter().enumerate() {
                if e[k] < o {
                    continue 'terms;
                }
                for j in 0..o {
                    factor *= (e[k] - j) as i64;
                }
                e[k] -= o;
            }
            out.add_term(e, c * &self.field.from_i64(factor));
        }
        out
    }

    pub fn evaluate(&self, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.nvars() {
            return Err(Error::LengthMismatch { expected: self.nvars(), got: point.len() });
        }
        for p in point {
            if p.field() != &self.field {
                return Err(crate::fields::FieldError::Mismatch(p.field().descriptor(), self.field.descriptor()).into());
            }
        }
        let maxdeg = self.terms.keys().flat_map(|m| m.0.iter().copied()).max().unwrap_or(0);
        let powers: Vec<Vec<FieldElement>> = point
            .iter()
            .map(|p| {
                let mut v = vec![self.field.one()];
                for k in 1..=maxdeg as usize {
                    let next = &v[k - 1] * p;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (k, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &powers[k][e as usize];
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Substitutes `images[k]` for variable `k`; the result lives in the
    /// images' ring.
    pub fn compose(&self, images: &[MultiPoly]) -> Result<MultiPoly> {
        if images.len() != self.nvars() {
            return Err(Error::LengthMismatch { expected: self.nvars(), got: images.len() });
        }
        let Some(first) = images.first() else {
            return Ok(self.clone());
        };
        for im in images {
            first.same_ring(im)?;
        }
        let target = first.vars.clone();
        let mut cache: Vec<Vec<MultiPoly>> = images
            .iter()
            .map(|im| vec![MultiPoly::constant(&target, self.field.one()), im.clone()])
            .collect();
        let mut out = MultiPoly::zero(&self.field, &target);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(&target, c.clone());
            for (k, &e) in m.0.iter().enumerate() {
                while cache[k].len() <= e as usize {
                    let next = &cache[k][cache[k].len() - 1] * &images[k];
                    cache[k].push(next);
                }
                if e > 0 {
                    t = &t * &cache[k][e as usize];
                }
            }
            for (mm, cc) in t.terms {
                out.add_term(mm.0, cc);
            }
        }
        Ok(out)
    }

    /// `F^g(x) = F(g x)` for a ternary polynomial.
    pub fn substitute_linear(&self, g: &LinearMap3) -> Result<MultiPoly> {
        if self.nvars() != 3 {
            return Err(Error::LengthMismatch { expected: 3, got: self.nvars() });
        }
        if g.det().is_zero() {
            return Err(Error::SingularMap);
        }
        let vars: Vec<MultiPoly> = (0..3).map(|k| MultiPoly::var(&self.field, &self.vars, k)).collect();
        let images: Vec<MultiPoly> = (0..3)
            .map(|i| {
                let mut row = MultiPoly::zero(&self.field, &self.vars);
                for (j, v) in vars.iter().enumerate() {
                    row = &row + &v.scale(g.entry(i, j));
                }
                row
            })
            .collect();
        self.compose(&images)
    }

    /// Groups by powers of `var`: entry `k` is the coefficient of `var^k`,
    /// still expressed in the full variable list (with `var` absent).
    pub fn coefficients_in(&self, var: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![MultiPoly::zero(&self.field, &self.vars); deg + 1];
        if self.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = e[var] as usize;
            e[var] = 0;
            out[k].add_term(e, c.clone());
        }
        out
    }

    /// Raises each term to total degree `degree` with powers of `var`.
    pub fn homogenize(&self, var: usize, degree: u32) -> Result<MultiPoly> {
        let mut out = MultiPoly::zero(&self.field, &self.vars);
        for (m, c) in &self.terms {
            let d = m.degree();
            if d > degree {
                return Err(Error::Form(format!("term of degree {d} exceeds homogenizing degree {degree}")));
            }
            let mut e = m.0.clone();
            e[var] += degree - d;
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    /// Reinterprets the exponent vectors in another variable list of equal length.
    pub fn with_vars(&self, vars: &Vars) -> MultiPoly {
        assert_eq!(vars.len(), self.nvars());
        MultiPoly { field: self.field.clone(), vars: vars.clone(), terms: self.terms.clone() }
    }

    /// Moves the polynomial into a larger variable list; `map[k]` is the
    /// target index of source variable `k`.
    pub fn embed_vars(&self, vars: &Vars, map: &[usize]) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.field, vars);
        for (m, c) in &self.terms {
            let mut e = vec![0; vars.len()];
            for (k, &x) in m.0.iter().enumerate() {
                e[map[k]] += x;
            }
            out.add_term(e, c.clone());
        }
        out
    }

    /// Maps every coefficient through `f` into `field` (e.g. a field embedding).
    pub fn map_coefficients<F>(&self, field: &Field, f: F) -> Result<MultiPoly>
    where
        F: Fn(&FieldElement) -> Result<FieldElement>,
    {
        let mut out = MultiPoly::zero(field, &self.vars);
        for (m, c) in &self.terms {
            out.add_term(m.0.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Result<Option<MultiPoly>> {
        self.same_ring(d)?;
        let Some((dm, dc)) = d.terms.iter().next_back() else {
            return Err(Error::ZeroPolynomial);
        };
        let dc_inv = dc.inv()?;
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(&self.field, &self.vars);
        while let Some((rm, rc)) = rem.terms.iter().next_back() {
            if rm.0.iter().zip(&dm.0).any(|(a, b)| a < b) {
                return Ok(None);
            }
            let e: Vec<u32> = rm.0.iter().zip(&dm.0).map(|(a, b)| a - b).collect();
            let c = rc * &dc_inv;
            let t = MultiPoly::monomial(&self.vars, e.clone(), c.clone());
            rem = &rem - &(&t * d);
            quot.add_term(e, c);
        }
        Ok(Some(quot))
    }
}

macro_rules! poly_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl std::ops::$trait<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl std::ops::$trait<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

poly_binop!(Add, add, try_add);
poly_binop!(Sub, sub, try_sub);
poly_binop!(Mul, mul, try_mul);

impl std::ops::Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-self.field.one())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let mono: Vec<String> = m
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(k, &e)| {
                        let name = &self.vars.names()[k];
                        if e == 1 {
                            name.clone()
                        } else {
                            format!("{name}^{e}")
                        }
                    })
                    .collect();
                term_string(c, &mono.join("*"))
            })
            .collect();
        f.write_str(&join_terms(&terms))
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Evaluates `P` at a point; standalone form of [`MultiPoly::evaluate`].
pub fn evaluate(p: &MultiPoly, point: &[FieldElement]) -> Result<FieldElement> {
    p.evaluate(point)
}
