use std::fmt;

use crate::error::{Error, Result};
use crate::fields::{join_terms, term_string, Field, FieldElement};

/// Dense univariate polynomial over a field, lowest degree first, no
/// trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    field: Field,
    coeffs: Vec<FieldElement>,
}

impl UniPoly {
    pub fn new(field: &Field, mut coeffs: Vec<FieldElement>) -> UniPoly {
        while coeffs.last().is_some_and(FieldElement::is_zero) {
            coeffs.pop();
        }
        UniPoly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Field) -> UniPoly {
        UniPoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn constant(c: FieldElement) -> UniPoly {
        let f = c.field().clone();
        UniPoly::new(&f, vec![c])
    }

    /// `T - root`.
    pub fn linear(root: &FieldElement) -> UniPoly {
        let f = root.field().clone();
        UniPoly::new(&f, vec![-root, f.one()])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> FieldElement {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new(&self.field, (0..n).map(|k| &self.coeff(k) + &other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new(&self.field, (0..n).map(|k| &self.coeff(k) - &other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(&self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UniPoly::new(&self.field, out)
    }

    pub fn scale(&self, c: &FieldElement) -> UniPoly {
        UniPoly::new(&self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> UniPoly {
        let mut acc = UniPoly::constant(self.field.one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            &self.field,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &self.field.from_i64(k as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        self.coeffs.iter().rev().fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }

    /// Evaluates with polynomial argument (composition).
    pub fn compose(&self, inner: &UniPoly) -> UniPoly {
        self.coeffs
            .iter()
            .rev()
            .fold(UniPoly::zero(&self.field), |acc, c| acc.mul(inner).add(&UniPoly::constant(c.clone())))
    }

    pub fn div_rem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let Some(dd) = d.degree() else {
            return Err(Error::ZeroPolynomial);
        };
        let inv = d.leading().unwrap().inv()?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((UniPoly::zero(&self.field), self.clone()));
        }
        let mut q = vec![self.field.zero(); r.len() - dd];
        while r.len() > dd {
            let lead = r.pop().unwrap();
            if lead.is_zero() {
                continue;
            }
            let c = &lead * &inv;
            let shift = r.len() - dd;
            for k in 0..dd {
                r[shift + k] = &r[shift + k] - &(&c * &d.coeffs[k]);
            }
            q[shift] = c;
        }
        Ok((UniPoly::new(&self.field, q), UniPoly::new(&self.field, r)))
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.monic(), other.monic());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Resultant by the Euclidean remainder sequence over the field.
    pub fn resultant(&self, other: &UniPoly) -> FieldElement {
        let f = &self.field;
        let (Some(_), Some(_)) = (self.degree(), other.degree()) else {
            return f.zero();
        };
        let mut a = self.clone();
        let mut b = other.clone();
        let mut acc = f.one();
        loop {
            let da = a.degree().unwrap();
            let Some(db) = b.degree() else {
                return f.zero();
            };
            if db == 0 {
                return &acc * &b.coeffs[0].pow(da as u64);
            }
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            let Some(dr) = r.degree() else {
                return f.zero();
            };
            // res(a, b) = (-1)^{da db} lc(b)^{da - dr} res(b, r)
            let mut factor = b.leading().unwrap().pow((da - dr) as u64);
            if (da * db) % 2 == 1 {
                factor = -factor;
            }
            acc = &acc * &factor;
            a = b;
            b = r;
        }
    }

    /// Squarefree part `p / gcd(p, p')` in characteristic zero (or degree < p).
    pub fn squarefree(&self) -> UniPoly {
        if self.degree().unwrap_or(0) == 0 {
            return UniPoly::constant(self.field.one());
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).unwrap().0.monic()
    }

    /// Newton interpolation through `(xs[k], ys[k])` with distinct `xs`.
    pub fn interpolate(field: &Field, xs: &[FieldElement], ys: &[FieldElement]) -> Result<UniPoly> {
        if xs.len() != ys.len() {
            return Err(Error::LengthMismatch { expected: xs.len(), got: ys.len() });
        }
        let n = xs.len();
        let mut dd = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                let num = &dd[i] - &dd[i - 1];
                let den = &xs[i] - &xs[i - j];
                dd[i] = num.try_div(&den)?;
            }
        }
        let mut p = UniPoly::zero(field);
        for k in (0..n).rev() {
            p = p.mul(&UniPoly::linear(&xs[k])).add(&UniPoly::constant(dd[k].clone()));
        }
        Ok(p)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let mono = match k {
                    0 => String::new(),
                    1 => "T".to_string(),
                    _ => format!("T^{k}"),
                };
                term_string(c, &mono)
            })
            .collect();
        f.write_str(&join_terms(&terms))
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UniPoly {
        let q = Field::rationals();
        UniPoly::new(&q, c.iter().map(|&a| q.from_i64(a)).collect())
    }

    #[test]
    fn resultant_matches_product_of_root_differences() {
        // roots {1,2} and {3}: res = (1-3)(2-3) = 2
        let a = p(&[2, -3, 1]);
        let b = p(&[-3, 1]);
        assert_eq!(a.resultant(&b), Field::rationals().from_i64(2));
        assert!(p(&[-1, 0, 1]).resultant(&p(&[-1, 1])).is_zero());
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = p(&[-1, 1]).pow(3).mul(&p(&[1, 1]));
        assert_eq!(a.squarefree(), p(&[-1, 0, 1]));
        assert_eq!(a.gcd(&a.derivative()), p(&[-1, 1]).pow(2));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let q = Field::rationals();
        let f = p(&[5, 0, -2, 7]);
        let xs: Vec<_> = (0..4).map(|k| q.from_i64(k)).collect();
        let ys: Vec<_> = xs.iter().map(|x| f.eval(x)).collect();
        assert_eq!(UniPoly::interpolate(&q, &xs, &ys).unwrap(), f);
    }
}
