//! Covariants and contravariants of ternary quartics.
//!
//! Covariants live in `X, Y, Z`, contravariants in the dual variables
//! `U, V, W`.

use crate::error::{Error, Result};
use crate::fields::{Field, FieldElement};
use crate::invariants::CalibrationTable;
use crate::par;
use crate::poly::linear::{adjugate3, det3};
use crate::poly::{LinearMap3, MultiPoly, Vars};
use crate::TernaryQuartic;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    Covariant,
    Contravariant,
}

impl Space {
    pub fn dual(self) -> Space {
        match self {
            Space::Covariant => Space::Contravariant,
            Space::Contravariant => Space::Covariant,
        }
    }

    pub fn vars(self) -> Vars {
        match self {
            Space::Covariant => Vars::new(&["X", "Y", "Z"]),
            Space::Contravariant => Vars::new(&["U", "V", "W"]),
        }
    }
}

/// A homogeneous form with its degree in the coefficients of the quartic
/// and its order in the variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    poly: MultiPoly,
    space: Space,
    degree: u32,
    order: u32,
}

impl Form {
    pub fn new(poly: MultiPoly, space: Space, degree: u32, order: u32) -> Result<Form> {
        if poly.nvars() != 3 {
            return Err(Error::LengthMismatch { expected: 3, got: poly.nvars() });
        }
        if !poly.is_zero() && (!poly.is_homogeneous() || poly.total_degree() != Some(order)) {
            return Err(Error::Form(format!("payload is not homogeneous of order {order}")));
        }
        let poly = poly.with_vars(&space.vars());
        Ok(Form { poly, space, degree, order })
    }

    pub fn from_quartic(f: &TernaryQuartic) -> Form {
        Form::new(f.poly().clone(), Space::Covariant, 1, 4).expect("quartic payload")
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn field(&self) -> &Field {
        self.poly.field()
    }

    pub fn scale(&self, c: &FieldElement) -> Form {
        Form { poly: self.poly.scale(c), ..self.clone() }
    }

    fn scale_ratio(&self, num: i64, den: i64) -> Form {
        let c = self.field().from_ratio(num, den).expect("nonzero denominator");
        self.scale(&c)
    }

    /// Action of `g`: `C(x) -> C(g x)` on covariants, `C(u) -> C(g^{-T} u)`
    /// on contravariants.
    pub fn transform(&self, g: &LinearMap3) -> Result<Form> {
        let g = match self.space {
            Space::Covariant => g.clone(),
            Space::Contravariant => g.inverse_transpose()?,
        };
        Ok(Form { poly: self.poly.substitute_linear(&g)?, ..self.clone() })
    }

    /// Constant value of an order-0 form.
    pub fn value(&self) -> FieldElement {
        self.poly.coeff(&[0, 0, 0])
    }
}

/// Determinant of the matrix of second partials.
pub fn hessian(f: &TernaryQuartic) -> Form {
    let p = f.poly();
    let first: Vec<MultiPoly> = (0..3).map(|k| p.derive(k).unwrap()).collect();
    let m: [[MultiPoly; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| first[i].derive(j).unwrap()));
    let h = det3(&m);
    Form { poly: h, space: Space::Covariant, degree: 3, order: 6 }
}

/// Applies `operator` as a differential operator on `target`, replacing each
/// dual variable by the partial derivative in the matching variable.
pub fn d_op(operator: &Form, target: &Form) -> Result<Form> {
    if operator.space == target.space {
        return Err(Error::Form("D-operation needs forms in dual spaces".into()));
    }
    if operator.order > target.order {
        return Err(Error::Form(format!(
            "operator order {} exceeds target order {}",
            operator.order, target.order
        )));
    }
    if operator.field() != target.field() {
        return Err(crate::fields::FieldError::Mismatch(operator.field().descriptor(), target.field().descriptor()).into());
    }
    let mut acc = MultiPoly::zero(target.field(), target.poly.vars());
    for (m, c) in operator.poly.terms() {
        acc = &acc + &target.poly.derive_multi(m).scale(c);
    }
    Ok(Form {
        poly: acc,
        space: target.space,
        degree: operator.degree + target.degree,
        order: target.order - operator.order,
    })
}

/// The `k`-th transvectant of two binary forms.
pub fn transvectant(f: &MultiPoly, g: &MultiPoly, k: u32) -> Result<MultiPoly> {
    f.same_ring(g)?;
    if f.nvars() != 2 {
        return Err(Error::NotBinaryForm);
    }
    let (Some(r), Some(s)) = (f.total_degree(), g.total_degree()) else {
        return Ok(MultiPoly::zero(f.field(), f.vars()));
    };
    if k > r.min(s) {
        return Err(Error::Form(format!("transvectant order {k} exceeds form degrees ({r}, {s})")));
    }
    let field = f.field();
    let fact = |n: u32| -> i64 { (1..=n as i64).product() };
    let binom = |n: u32, i: u32| fact(n) / (fact(i) * fact(n - i));
    let mut acc = MultiPoly::zero(field, f.vars());
    for i in 0..=k {
        let a = f.derive_multi(&[k - i, i]);
        let b = g.derive_multi(&[i, k - i]);
        let mut c = field.from_i64(binom(k, i));
        if i % 2 == 1 {
            c = -c;
        }
        acc = &acc + &(&a * &b).scale(&c);
    }
    let pre = field.from_ratio(fact(r - k) * fact(s - k), fact(r) * fact(s))?;
    Ok(acc.scale(&pre))
}

/// Classical coefficients `(a40, a31, a22, a13, a04)` of a binary quartic
/// `sum c_k x^(4-k) y^k`, i.e. `c_k / binom(4, k)`.
fn classical_coefficients<T, F>(c: [T; 5], div: F) -> [T; 5]
where
    F: Fn(T, i64) -> T,
{
    let [c0, c1, c2, c3, c4] = c;
    [c0, div(c1, 4), div(c2, 6), div(c3, 4), c4]
}

fn sigma_psi_formula<T>(a: &[T; 5]) -> (T, T)
where
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T> + std::ops::Sub<&'a T, Output = T> + std::ops::Add<&'a T, Output = T>,
    T: Clone,
{
    let [a40, a31, a22, a13, a04] = a;
    let two = |t: &T| t + t;
    let three = |t: &T| &(t + t) + t;
    let four = |t: &T| two(&two(t));
    let sigma = &(&(a40 * a04) - &four(&(a31 * a13))) + &three(&(a22 * a22));
    let p1 = &(a40 * a22) * a04;
    let p2 = &(a40 * a13) * a13;
    let p3 = &(a31 * a31) * a04;
    let p4 = two(&(&(a31 * a22) * a13));
    let p5 = &(a22 * a22) * a22;
    let psi = &(&(&(&p1 - &p2) - &p3) + &p4) - &p5;
    (sigma, psi)
}

/// `sigma` and `psi` of a binary quartic given in plain coefficients of
/// `x^4, x^3 y, ..., y^4`, by the closed forms.
pub fn binary_quartic_sigma_psi(c: &[FieldElement; 5]) -> (FieldElement, FieldElement) {
    let a = classical_coefficients(c.clone(), |t, d| {
        let f = t.field().clone();
        &t * &f.from_ratio(1, d).unwrap()
    });
    sigma_psi_formula(&a)
}

/// The same pair via transvectants: `(F,F)^4 / 2` and `(F,(F,F)^2)^4 / 6`.
pub fn binary_quartic_sigma_psi_transvectant(f: &MultiPoly) -> Result<(FieldElement, FieldElement)> {
    if f.nvars() != 2 || !f.is_zero() && (!f.is_homogeneous() || f.total_degree() != Some(4)) {
        return Err(Error::NotBinaryForm);
    }
    let field = f.field();
    if f.is_zero() {
        return Ok((field.zero(), field.zero()));
    }
    let g = transvectant(f, f, 2)?;
    let sigma = transvectant(f, f, 4)?.coeff(&[0, 0]);
    let psi = if g.is_zero() { field.zero() } else { transvectant(f, &g, 4)?.coeff(&[0, 0]) };
    Ok((&sigma * &field.from_ratio(1, 2)?, &psi * &field.from_ratio(1, 6)?))
}

/// The contravariants `sigma` (order 4) and `psi` (order 6), scaled by the
/// frozen calibration constants.
pub fn sigma_psi_contravariants(f: &TernaryQuartic) -> (Form, Form) {
    let cal = CalibrationTable::frozen();
    sigma_psi_contravariants_with(f, &cal.sigma(f.field()), &cal.psi(f.field()))
}

pub fn sigma_psi_contravariants_with(f: &TernaryQuartic, c_sigma: &FieldElement, c_psi: &FieldElement) -> (Form, Form) {
    let field = f.field();
    // R(x, y) = F(x, y, -u x - v y) in the ring (x, y, u, v)
    let ring = Vars::new(&["x", "y", "u", "v"]);
    let x = MultiPoly::var(field, &ring, 0);
    let y = MultiPoly::var(field, &ring, 1);
    let u = MultiPoly::var(field, &ring, 2);
    let v = MultiPoly::var(field, &ring, 3);
    let zimg = -&(&(&u * &x) + &(&v * &y));
    let r = f.poly().compose(&[x, y, zimg]).expect("three images");
    let uv = Vars::new(&["U", "V", "W"]);
    let mut c: [MultiPoly; 5] = std::array::from_fn(|_| MultiPoly::zero(field, &uv));
    for (m, a) in r.terms() {
        debug_assert_eq!(m[0] + m[1], 4);
        c[m[1] as usize].add_term(vec![m[2], m[3], 0], a.clone());
    }
    let a = classical_coefficients(c, |t, d| t.scale(&field.from_ratio(1, d).unwrap()));
    let (s, p) = sigma_psi_formula(&a);
    let s = s.homogenize(2, 4).expect("sigma has degree at most 4 in (u, v)");
    let p = p.homogenize(2, 6).expect("psi has degree at most 6 in (u, v)");
    (
        Form { poly: s.scale(c_sigma), space: Space::Contravariant, degree: 2, order: 4 },
        Form { poly: p.scale(c_psi), space: Space::Contravariant, degree: 3, order: 6 },
    )
}

/// Half the matrix of second partials of an order-2 form.
pub fn half_hessian(phi: &Form) -> Result<[[FieldElement; 3]; 3]> {
    if phi.order != 2 {
        return Err(Error::Form(format!("expected an order-2 form, got order {}", phi.order)));
    }
    let f = phi.field();
    let half = f.from_ratio(1, 2)?;
    Ok(std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut o = [0u32; 3];
            o[i] += 1;
            o[j] += 1;
            &phi.poly.derive_multi(&o).coeff(&[0, 0, 0]) * &half
        })
    }))
}

fn dot(a: &[[FieldElement; 3]; 3], b: &[[FieldElement; 3]; 3]) -> FieldElement {
    let mut acc = a[0][0].field().zero();
    for i in 0..3 {
        for j in 0..3 {
            acc = &acc + &(&a[i][j] * &b[i][j]);
        }
    }
    acc
}

/// `(J11, J22, J30, J03)` of a covariant and a contravariant of order 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JPairings {
    pub j11: FieldElement,
    pub j22: FieldElement,
    pub j30: FieldElement,
    pub j03: FieldElement,
}

pub fn j_pairings(phi: &Form, psi: &Form) -> Result<JPairings> {
    if phi.space != Space::Covariant || psi.space != Space::Contravariant {
        return Err(Error::Form("J-pairings take a covariant and a contravariant".into()));
    }
    let a = half_hessian(phi)?;
    let b = half_hessian(psi)?;
    Ok(JPairings { j11: dot(&a, &b), j22: dot(&adjugate3(&a), &adjugate3(&b)), j30: det3(&a), j03: det3(&b) })
}

pub fn j11(phi: &Form, psi: &Form) -> Result<FieldElement> {
    Ok(dot(&half_hessian(phi)?, &half_hessian(psi)?))
}

pub fn j22(phi: &Form, psi: &Form) -> Result<FieldElement> {
    Ok(dot(&adjugate3(&half_hessian(phi)?), &adjugate3(&half_hessian(psi)?)))
}

/// Determinant of the half-Hessian of an order-2 form (`J30` or `J03`).
pub fn j_det(phi: &Form) -> Result<FieldElement> {
    Ok(det3(&half_hessian(phi)?))
}

/// Every form the invariants are built from.
#[derive(Clone, Debug)]
pub struct Chain {
    pub f: Form,
    pub h: Form,
    pub sigma: Form,
    pub psi: Form,
    pub rho: Form,
    pub tau: Form,
    pub xi: Form,
    pub eta: Form,
    pub nu: Form,
    pub chi: Form,
}

pub fn covariant_chain(f: &TernaryQuartic) -> Chain {
    let cal = CalibrationTable::frozen();
    covariant_chain_with(f, &cal.sigma(f.field()), &cal.psi(f.field()))
}

pub fn covariant_chain_with(f: &TernaryQuartic, c_sigma: &FieldElement, c_psi: &FieldElement) -> Chain {
    let (h, (sigma, psi)) = par::join(|| hessian(f), || sigma_psi_contravariants_with(f, c_sigma, c_psi));
    let fm = Form::from_quartic(f);
    let d = |a: &Form, b: &Form| d_op(a, b).expect("chain arguments are well formed");
    let rho = d(&fm, &psi).scale_ratio(1, 144);
    let (tau, xi) = par::join(|| d(&rho, &fm).scale_ratio(1, 12), || d(&sigma, &h).scale_ratio(1, 72));
    let eta = d(&xi, &sigma).scale_ratio(1, 12);
    let (nu, chi) = par::join(
        || d(&eta, &d(&rho, &h)).scale_ratio(1, 8),
        || d(&tau, &d(&tau, &psi)).scale_ratio(1, 8),
    );
    Chain { f: fm, h, sigma, psi, rho, tau, xi, eta, nu, chi }
}
