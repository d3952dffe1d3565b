//! Resultants, GCDs and squarefree parts, mostly for binary forms.

use crate::error::{Error, Result};
use crate::fields::FieldElement;
use crate::par;

use super::{MultiPoly, UniPoly, Vars};

impl MultiPoly {
    /// Drops variable `var`, which must not occur.
    pub fn remove_var(&self, var: usize) -> Result<MultiPoly> {
        if self.degree_in(var).unwrap_or(0) > 0 {
            return Err(Error::Form(format!("variable {} still occurs", self.vars.names()[var])));
        }
        let names: Vec<&str> = self
            .vars
            .names()
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != var)
            .map(|(_, n)| n.as_str())
            .collect();
        let vars = Vars::new(&names);
        let mut out = MultiPoly::zero(&self.field, &vars);
        for (m, c) in self.terms() {
            let mut e = m.to_vec();
            e.remove(var);
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    /// `P(x, 1)` for a binary form, plus the multiplicity of the factor `y`.
    pub fn dehomogenize_binary(&self) -> Result<(UniPoly, u32)> {
        if self.nvars() != 2 || !self.is_homogeneous() {
            return Err(Error::NotBinaryForm);
        }
        let Some(d) = self.total_degree() else {
            return Err(Error::ZeroPolynomial);
        };
        let mut c = vec![self.field.zero(); d as usize + 1];
        for (m, a) in self.terms() {
            c[m[0] as usize] = a.clone();
        }
        let u = UniPoly::new(&self.field, c);
        let ymult = d - u.degree().unwrap() as u32;
        Ok((u, ymult))
    }

    /// Inverse of [`MultiPoly::dehomogenize_binary`].
    pub fn homogenize_binary(u: &UniPoly, ymult: u32, vars: &Vars) -> MultiPoly {
        let field = u.field().clone();
        let e = u.degree().unwrap_or(0) as u32;
        let mut out = MultiPoly::zero(&field, vars);
        for (k, c) in u.coeffs().iter().enumerate() {
            out.add_term(vec![k as u32, e - k as u32 + ymult], c.clone());
        }
        out
    }
}

/// Sylvester-matrix resultant of `p` and `q` viewed as polynomials in `var`,
/// evaluated by fraction-free Bareiss elimination. The result is expressed
/// in the remaining variables.
pub fn resultant_in_var(p: &MultiPoly, q: &MultiPoly, var: usize) -> Result<MultiPoly> {
    p.same_ring(q)?;
    if var >= p.nvars() {
        return Err(Error::BadVariable(var));
    }
    if p.is_zero() && q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let zero = MultiPoly::zero(p.field(), p.vars());
    if p.is_zero() || q.is_zero() {
        return zero.remove_var(var);
    }
    let a = p.coefficients_in(var);
    let b = q.coefficients_in(var);
    let (m, n) = (a.len() - 1, b.len() - 1);
    if m == 0 && n == 0 {
        return MultiPoly::constant(p.vars(), p.field().one()).remove_var(var);
    }
    let size = m + n;
    let mut mat = vec![vec![zero.clone(); size]; size];
    for i in 0..n {
        for (k, c) in a.iter().rev().enumerate() {
            mat[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in b.iter().rev().enumerate() {
            mat[n + i][i + k] = c.clone();
        }
    }
    bareiss_det(mat)?.remove_var(var)
}

fn bareiss_det(mut mat: Vec<Vec<MultiPoly>>) -> Result<MultiPoly> {
    let size = mat.len();
    let one = MultiPoly::constant(mat[0][0].vars(), mat[0][0].field().one());
    let mut prev = one;
    let mut negate = false;
    for k in 0..size {
        if mat[k][k].is_zero() {
            let Some(pivot) = (k + 1..size).find(|&i| !mat[i][k].is_zero()) else {
                return Ok(MultiPoly::zero(mat[0][0].field(), mat[0][0].vars()));
            };
            mat.swap(k, pivot);
            negate = !negate;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = &(&mat[i][j] * &mat[k][k]) - &(&mat[i][k] * &mat[k][j]);
                mat[i][j] = num
                    .div_exact(&prev)?
                    .ok_or_else(|| Error::Form("Bareiss step not exact".into()))?;
            }
        }
        prev = mat[k][k].clone();
    }
    let det = mat[size - 1][size - 1].clone();
    Ok(if negate { -&det } else { det })
}

/// Resultant in `var` of two homogeneous ternary forms whose leading
/// coefficients in `var` are nonzero constants, computed by evaluating the
/// other two variables at `(x_k, 1)` and interpolating. Returns a binary form
/// of degree `deg p * deg q` in the remaining variables.
pub fn resultant_in_var_interpolated(p: &MultiPoly, q: &MultiPoly, var: usize) -> Result<MultiPoly> {
    p.same_ring(q)?;
    if p.nvars() != 3 || var >= 3 {
        return Err(Error::BadVariable(var));
    }
    if !p.is_homogeneous() || !q.is_homogeneous() {
        return Err(Error::Form("interpolated resultant needs homogeneous inputs".into()));
    }
    let (Some(d), Some(e)) = (p.total_degree(), q.total_degree()) else {
        return Err(Error::ZeroPolynomial);
    };
    let pc = p.coefficients_in(var);
    let qc = q.coefficients_in(var);
    if pc.len() as u32 != d + 1 || qc.len() as u32 != e + 1 {
        return Err(Error::Inadmissible(format!(
            "leading coefficient in {} vanishes",
            p.vars().names()[var]
        )));
    }
    let field = p.field().clone();
    let others: Vec<usize> = (0..3).filter(|&k| k != var).collect();
    let n = (d * e + 1) as usize;
    let xs: Vec<FieldElement> = (0..n as i64).map(|k| field.from_i64(k)).collect();
    let restrict = |poly: &MultiPoly, x: &FieldElement| -> Result<UniPoly> {
        let mut coeffs = vec![field.zero(); poly.degree_in(var).unwrap_or(0) as usize + 1];
        let mut point = vec![field.zero(); 3];
        point[others[0]] = x.clone();
        point[others[1]] = field.one();
        for (k, c) in poly.coefficients_in(var).iter().enumerate() {
            coeffs[k] = c.evaluate(&point)?;
        }
        Ok(UniPoly::new(&field, coeffs))
    };
    let ys: Vec<Result<FieldElement>> = par::map(&xs, |x| {
        let a = restrict(p, x)?;
        let b = restrict(q, x)?;
        Ok(a.resultant(&b))
    });
    let ys: Vec<FieldElement> = ys.into_iter().collect::<Result<_>>()?;
    let u = UniPoly::interpolate(&field, &xs, &ys)?;
    let names: Vec<&str> = others.iter().map(|&k| p.vars().names()[k].as_str()).collect();
    let vars = Vars::new(&names);
    if u.is_zero() {
        return Ok(MultiPoly::zero(&field, &vars));
    }
    let deg = u.degree().unwrap() as u32;
    Ok(MultiPoly::homogenize_binary(&u, d * e - deg, &vars))
}

/// Monic GCD of binary forms. Zero forms are ignored.
pub fn gcd_binary_forms(list: &[MultiPoly]) -> Result<MultiPoly> {
    let first = list.first().ok_or(Error::EmptyList)?;
    let mut g: Option<UniPoly> = None;
    let mut ymult = u32::MAX;
    for p in list {
        first.same_ring(p)?;
        if p.is_zero() {
            if p.nvars() != 2 {
                return Err(Error::NotBinaryForm);
            }
            continue;
        }
        let (u, m) = p.dehomogenize_binary()?;
        ymult = ymult.min(m);
        g = Some(match g {
            None => u.monic(),
            Some(acc) => acc.gcd(&u),
        });
    }
    let g = g.ok_or(Error::ZeroPolynomial)?;
    Ok(MultiPoly::homogenize_binary(&g, ymult, first.vars()))
}

/// Product of the distinct linear factors of a nonzero binary form.
pub fn squarefree_part(p: &MultiPoly) -> Result<MultiPoly> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (u, m) = p.dehomogenize_binary()?;
    Ok(MultiPoly::homogenize_binary(&u.squarefree(), m.min(1), p.vars()))
}
