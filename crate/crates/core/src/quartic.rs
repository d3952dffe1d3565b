use std::fmt;

use crate::error::{Error, Result};
use crate::fields::{Field, FieldElement};
use crate::poly::{LinearMap3, MultiPoly, Vars};

/// A nonzero homogeneous quartic in `X, Y, Z`.
#[derive(Clone, PartialEq, Eq)]
pub struct TernaryQuartic(MultiPoly);

impl TernaryQuartic {
    pub fn new(poly: MultiPoly) -> Result<TernaryQuartic> {
        if poly.nvars() != 3 {
            return Err(Error::NotQuartic(format!("expected 3 variables, got {}", poly.nvars())));
        }
        if poly.is_zero() {
            return Err(Error::NotQuartic("zero polynomial".into()));
        }
        if !poly.is_homogeneous() || poly.total_degree() != Some(4) {
            return Err(Error::NotQuartic("not homogeneous of degree 4".into()));
        }
        Ok(TernaryQuartic(poly.with_vars(&Vars::new(&["X", "Y", "Z"]))))
    }

    pub fn parse(text: &str, field: &Field) -> Result<TernaryQuartic> {
        Ok(crate::parse::parse_quartic(text, field)?)
    }

    /// Builds a quartic from integral coefficients `a_{ijk}` of `X^i Y^j Z^k`.
    pub fn from_coefficients<I>(field: &Field, coeffs: I) -> Result<TernaryQuartic>
    where
        I: IntoIterator<Item = ([u32; 3], FieldElement)>,
    {
        let vars = Vars::new(&["X", "Y", "Z"]);
        let mut p = MultiPoly::zero(field, &vars);
        for (e, c) in coeffs {
            if e.iter().sum::<u32>() != 4 {
                return Err(Error::NotQuartic(format!("monomial {e:?} is not of degree 4")));
            }
            p.add_term(e.to_vec(), field.embed(&c)?);
        }
        TernaryQuartic::new(p)
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.0
    }

    pub fn field(&self) -> &Field {
        self.0.field()
    }

    /// `F^γ(x) = F(γ x)`.
    pub fn transform(&self, g: &LinearMap3) -> Result<TernaryQuartic> {
        Ok(TernaryQuartic(self.0.substitute_linear(g)?))
    }

    pub fn scale(&self, lambda: &FieldElement) -> Result<TernaryQuartic> {
        if lambda.is_zero() {
            return Err(Error::NotQuartic("zero scalar".into()));
        }
        Ok(TernaryQuartic(self.0.scale(lambda)))
    }

    /// Moves the quartic into an extension of its field.
    pub fn embed(&self, field: &Field) -> Result<TernaryQuartic> {
        let p = self.0.map_coefficients(field, |c| Ok(field.embed(c)?))?;
        Ok(TernaryQuartic(p))
    }
}

impl fmt::Display for TernaryQuartic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for TernaryQuartic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
