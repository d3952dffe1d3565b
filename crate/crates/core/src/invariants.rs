//! Dixmier-Ohno invariants, the discriminant and absolute invariants.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::covariants::{self, d_op, j11, j22, j_det, Chain, Form};
use crate::error::{Error, Result};
use crate::fields::{Field, FieldElement};
use crate::par;
use crate::poly::LinearMap3;
use crate::TernaryQuartic;

pub const NAMES: [&str; 13] = ["I3", "I6", "I9", "I12", "I15", "I18", "I27", "J9", "J12", "J15", "J18", "I21", "J21"];
pub const WEIGHTS: [u32; 13] = [3, 6, 9, 12, 15, 18, 27, 9, 12, 15, 18, 21, 21];

/// Positions in [`NAMES`] of the numerators of `i1..i6` and `j1..j6`.
const I_INDEX: [usize; 6] = [1, 2, 3, 4, 5, 6];
const J_INDEX: [usize; 6] = [7, 8, 9, 10, 11, 12];

#[derive(Clone, PartialEq, Eq)]
pub struct InvariantVector {
    values: [FieldElement; 13],
}

impl InvariantVector {
    pub fn new(values: [FieldElement; 13]) -> Result<InvariantVector> {
        let f = values[0].field().clone();
        if values.iter().any(|v| v.field() != &f) {
            return Err(Error::Form("invariant entries over different fields".into()));
        }
        Ok(InvariantVector { values })
    }

    pub fn values(&self) -> &[FieldElement; 13] {
        &self.values
    }

    pub fn field(&self) -> &Field {
        self.values[0].field()
    }

    pub fn get(&self, name: &str) -> Option<&FieldElement> {
        NAMES.iter().position(|n| *n == name).map(|k| &self.values[k])
    }

    pub fn i3(&self) -> &FieldElement {
        &self.values[0]
    }

    /// Entry of weight `w` multiplied by `lambda^w`.
    pub fn weighted_scale(&self, lambda: &FieldElement) -> InvariantVector {
        let values = std::array::from_fn(|k| &self.values[k] * &lambda.pow(WEIGHTS[k] as u64));
        InvariantVector { values }
    }

    /// Maps every entry into an extension field.
    pub fn embed(&self, field: &Field) -> Result<InvariantVector> {
        let mut values = self.values.clone();
        for v in values.iter_mut() {
            *v = field.embed(v)?;
        }
        Ok(InvariantVector { values })
    }
}

impl fmt::Debug for InvariantVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = NAMES.iter().zip(&self.values).map(|(n, v)| format!("{n}={v}")).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbsoluteInvariants {
    pub i: [FieldElement; 6],
    pub j: [FieldElement; 6],
}

impl AbsoluteInvariants {
    /// `i1..i6` followed by `j1..j6`.
    pub fn all(&self) -> [FieldElement; 12] {
        std::array::from_fn(|k| if k < 6 { self.i[k].clone() } else { self.j[k - 6].clone() })
    }
}

pub fn absolute_invariants(v: &InvariantVector) -> Result<AbsoluteInvariants> {
    let i3 = v.i3();
    if i3.is_zero() {
        return Err(Error::I3Vanishes);
    }
    let ratio = |k: usize| -> FieldElement {
        let m = WEIGHTS[k] / 3;
        v.values[k].try_div(&i3.pow(m as u64)).expect("I3 is nonzero")
    };
    Ok(AbsoluteInvariants { i: I_INDEX.map(ratio), j: J_INDEX.map(ratio) })
}

/// Equality of weighted projective points.
pub fn weighted_equal(a: &InvariantVector, b: &InvariantVector) -> Result<bool> {
    if a.field() != b.field() {
        return Err(crate::fields::FieldError::Mismatch(a.field().descriptor(), b.field().descriptor()).into());
    }
    for k in 0..13 {
        if a.values[k].is_zero() != b.values[k].is_zero() {
            return Ok(false);
        }
    }
    let nz: Vec<usize> = (0..13).filter(|&k| !a.values[k].is_zero()).collect();
    for (x, &p) in nz.iter().enumerate() {
        for &q in &nz[x + 1..] {
            let (wp, wq) = ((WEIGHTS[p] / 3) as u64, (WEIGHTS[q] / 3) as u64);
            let lhs = &a.values[p].pow(wq) * &b.values[q].pow(wp);
            let rhs = &b.values[p].pow(wq) * &a.values[q].pow(wp);
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Normalizing scalars: `c_sigma`, `c_psi` on the two basic contravariants
/// and one multiplier per invariant on the raw chain value (the discriminant
/// slot multiplies the Macaulay resultant of the gradient).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CalibrationTable {
    pub c_sigma: BigRational,
    pub c_psi: BigRational,
    pub scalars: [BigRational; 13],
}

fn pm2a3b(sign: i32, a: i32, b: i32) -> BigRational {
    let pow = |base: i64, e: i32| -> BigRational {
        let p = BigRational::from_integer(BigInt::from(base).pow(e.unsigned_abs()));
        if e < 0 {
            p.recip()
        } else {
            p
        }
    };
    let v = pow(2, a) * pow(3, b);
    if sign < 0 {
        -v
    } else {
        v
    }
}

impl CalibrationTable {
    /// Constants derived by [`calibrate`] and checked by its regression test.
    pub fn frozen() -> CalibrationTable {
        CalibrationTable {
            c_sigma: BigRational::one(),
            c_psi: pm2a3b(1, -8, -3),
            scalars: [
                pm2a3b(1, 4, 2),
                pm2a3b(1, 12, 6),
                pm2a3b(1, 25, 14),
                pm2a3b(1, 36, 21),
                pm2a3b(1, 42, 24),
                pm2a3b(1, 53, 29),
                pm2a3b(-1, -23, 0),
                pm2a3b(1, 11, 7),
                pm2a3b(1, 15, 10),
                pm2a3b(1, 0, 3),
                pm2a3b(1, 25, 15),
                pm2a3b(1, 5, 9),
                pm2a3b(1, 16, 10),
            ],
        }
    }

    pub fn sigma(&self, field: &Field) -> FieldElement {
        field.from_rational(&self.c_sigma).expect("2 and 3 are invertible")
    }

    pub fn psi(&self, field: &Field) -> FieldElement {
        field.from_rational(&self.c_psi).expect("2 and 3 are invertible")
    }
}

/// The thirteen chain values before normalization, in [`NAMES`] order.
pub fn raw_invariants(f: &TernaryQuartic, c_sigma: &FieldElement, c_psi: &FieldElement) -> Result<[FieldElement; 13]> {
    let (chain, disc) = par::join(
        || covariants::covariant_chain_with(f, c_sigma, c_psi),
        || gradient_resultant(f),
    );
    let mut out = raw_from_chain(&chain)?;
    out[6] = disc?;
    Ok(out)
}

fn raw_from_chain(c: &Chain) -> Result<[FieldElement; 13]> {
    let field = c.f.field().clone();
    let ratio = |n: i64, d: i64| field.from_ratio(n, d).expect("nonzero denominator");
    let i3 = &d_op(&c.sigma, &c.f)?.value() * &ratio(1, 144);
    let dpsi_h = d_op(&c.psi, &c.h)?.value();
    let i6 = &(&dpsi_h - &(&i3.pow(2) * &field.from_i64(8))) * &ratio(1, 4608);
    type Job<'a> = Box<dyn Fn() -> Result<FieldElement> + Send + Sync + 'a>;
    let jobs: Vec<Job> = vec![
        Box::new(|| j11(&c.tau, &c.rho)),
        Box::new(|| j_det(&c.rho)),
        Box::new(|| j_det(&c.tau)),
        Box::new(|| j22(&c.tau, &c.rho)),
        Box::new(|| j11(&c.xi, &c.rho)),
        Box::new(|| j11(&c.tau, &c.eta)),
        Box::new(|| j_det(&c.xi)),
        Box::new(|| j22(&c.xi, &c.rho)),
        Box::new(|| j_det(&c.eta)),
        Box::new(|| j11(&c.nu, &c.eta)),
    ];
    let vals = par::map(&jobs, |job| job());
    let mut vals = vals.into_iter();
    let mut next = || vals.next().expect("ten jobs");
    let (i9, i12, i15, i18) = (next()?, next()?, next()?, next()?);
    let (j9, j12, j15, j18, i21, j21) = (next()?, next()?, next()?, next()?, next()?, next()?);
    Ok([i3, i6, i9, i12, i15, i18, field.zero(), j9, j12, j15, j18, i21, j21])
}

fn apply_scalars(raw: [FieldElement; 13], cal: &CalibrationTable) -> Result<InvariantVector> {
    let field = raw[0].field().clone();
    let mut values = raw;
    for (v, s) in values.iter_mut().zip(&cal.scalars) {
        *v = &*v * &field.from_rational(s)?;
    }
    InvariantVector::new(values)
}

/// The thirteen integral Dixmier-Ohno invariants.
pub fn dixmier_ohno(f: &TernaryQuartic) -> Result<InvariantVector> {
    let cal = CalibrationTable::frozen();
    let field = f.field();
    apply_scalars(raw_invariants(f, &cal.sigma(field), &cal.psi(field))?, &cal)
}

pub fn discriminant_i27(f: &TernaryQuartic) -> Result<FieldElement> {
    let cal = CalibrationTable::frozen();
    Ok(&gradient_resultant(f)? * &f.field().from_rational(&cal.scalars[6])?)
}

/// Exponent vectors of degree `d` in three variables, in a fixed order.
fn monomials(d: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            out.push([a, b, d - a - b]);
        }
    }
    out
}

fn det_over_field(mut m: Vec<Vec<FieldElement>>, field: &Field) -> FieldElement {
    let n = m.len();
    let mut det = field.one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return field.zero();
        };
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        det = &det * &m[k][k];
        let inv = m[k][k].inv().expect("nonzero pivot");
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let c = &m[i][k] * &inv;
            for j in k..n {
                let t = &c * &m[k][j];
                m[i][j] = &m[i][j] - &t;
            }
        }
    }
    det
}

/// Macaulay resultant of three ternary cubics as `det(M) / det(minor)`, or
/// `None` when the extraneous minor vanishes.
fn macaulay_cubics(cubics: &[crate::MultiPoly; 3]) -> Option<FieldElement> {
    let field = cubics[0].field().clone();
    let mons = monomials(7);
    let index = |e: [u32; 3]| mons.iter().position(|m| *m == e).expect("degree-7 monomial");
    let n = mons.len();
    let mut mat = vec![vec![field.zero(); n]; n];
    let mut reduced = Vec::new();
    for (r, m) in mons.iter().enumerate() {
        let divisors: Vec<usize> = (0..3).filter(|&i| m[i] >= 3).collect();
        let i = divisors[0];
        let mut q = *m;
        q[i] -= 3;
        for (e, c) in cubics[i].terms() {
            mat[r][index([q[0] + e[0], q[1] + e[1], q[2] + e[2]])] = c.clone();
        }
        if divisors.len() >= 2 {
            reduced.push(r);
        }
    }
    let minor: Vec<Vec<FieldElement>> = reduced.iter().map(|&r| reduced.iter().map(|&c| mat[r][c].clone()).collect()).collect();
    let dm = det_over_field(minor, &field);
    if dm.is_zero() {
        return None;
    }
    Some(det_over_field(mat, &field).try_div(&dm).expect("nonzero minor"))
}

const FRAME_ATTEMPTS: usize = 40;

/// Unimodular integer matrices with small entries; the first is the identity.
pub(crate) fn unimodular_frames(seed: u64, count: usize) -> Vec<[[i64; 3]; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![[[1, 0, 0], [0, 1, 0], [0, 0, 1]]];
    while out.len() < count {
        let m: [[i64; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-5..=5)));
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        if det == 1 || det == -1 {
            out.push(m);
        }
    }
    out
}

/// `Res(F_X, F_Y, F_Z)`, unchanged by unimodular coordinate changes.
pub fn gradient_resultant(f: &TernaryQuartic) -> Result<FieldElement> {
    for m in unimodular_frames(0x5eed_0027, FRAME_ATTEMPTS) {
        let g = LinearMap3::from_integers(f.field(), m);
        let fg = f.transform(&g)?;
        let grad: [crate::MultiPoly; 3] = std::array::from_fn(|k| fg.poly().derive(k).expect("three variables"));
        if let Some(r) = macaulay_cubics(&grad) {
            return Ok(r);
        }
    }
    Err(Error::FrameSearchExhausted(FRAME_ATTEMPTS))
}

/// Absolute values prescribed for a calibration curve; `None` entries are
/// not constrained.
#[derive(Clone, Debug)]
pub struct Anchor {
    pub name: String,
    pub curve: TernaryQuartic,
    pub absolutes: [Option<BigRational>; 12],
}

/// Solves for the normalizing scalars from anchor curves over the rationals.
///
/// `c_sigma` is fixed to 1 and the scalar on `I3` to `2^4 3^2`; absolute
/// invariants cannot see either. `c_psi` and the scalar on `I6` come from the
/// linear system the `i1` anchors impose; every other scalar is then a ratio
/// that all anchors must agree on.
pub fn calibrate(anchors: &[Anchor]) -> Result<CalibrationTable> {
    let q = Field::rationals();
    let one = q.one();
    let rat = |e: &FieldElement| e.to_rational().expect("rational anchor");
    for a in anchors {
        if a.curve.field() != &q {
            return Err(Error::InconsistentAnchors(format!("{} is not defined over Q", a.name)));
        }
    }
    // i1 * 4608 * I3^2 = p * A - 8 * r6 * I3^2 with p = r6 * c_psi
    let mut rows: Vec<(BigRational, BigRational, BigRational, &str)> = Vec::new();
    let raws1: Vec<[FieldElement; 13]> = par::map(anchors, |a| raw_invariants(&a.curve, &one, &one))
        .into_iter()
        .collect::<Result<_>>()?;
    for (a, raw) in anchors.iter().zip(&raws1) {
        let Some(i1) = &a.absolutes[0] else { continue };
        let i3 = rat(&raw[0]);
        if i3.is_zero() {
            return Err(Error::InconsistentAnchors(format!("{} has I3 = 0", a.name)));
        }
        let big_a = rat(&raw[1]) * BigRational::from_integer(4608.into()) + &i3 * &i3 * BigRational::from_integer(8.into());
        rows.push((big_a, -(&i3 * &i3) * BigRational::from_integer(8.into()), i1 * &i3 * &i3 * BigRational::from_integer(4608.into()), &a.name));
    }
    let mut solution = None;
    'outer: for x in 0..rows.len() {
        for y in x + 1..rows.len() {
            let (a1, b1, c1, _) = &rows[x];
            let (a2, b2, c2, _) = &rows[y];
            let det = a1 * b2 - a2 * b1;
            if !det.is_zero() {
                let p = (c1 * b2 - c2 * b1) / &det;
                let r6 = (a1 * c2 - a2 * c1) / &det;
                solution = Some((p, r6));
                break 'outer;
            }
        }
    }
    let (p, r6) = solution.ok_or_else(|| Error::InconsistentAnchors("i1 anchors do not determine c_psi".into()))?;
    for (a, b, c, name) in &rows {
        if a * &p + b * &r6 != *c {
            return Err(Error::InconsistentAnchors(format!("{name}: i1 disagrees with the other anchors")));
        }
    }
    if r6.is_zero() {
        return Err(Error::InconsistentAnchors("vanishing I6 scalar".into()));
    }
    let c_psi = &p / &r6;
    let c_psi_q = q.from_rational(&c_psi)?;
    let raws: Vec<[FieldElement; 13]> = par::map(anchors, |a| raw_invariants(&a.curve, &one, &c_psi_q))
        .into_iter()
        .collect::<Result<_>>()?;
    let s3 = pm2a3b(1, 4, 2);
    let mut scalars: [BigRational; 13] = std::array::from_fn(|_| BigRational::zero());
    scalars[0] = s3.clone();
    for slot in 1..13 {
        let abs_pos = slot - 1;
        let m = WEIGHTS[slot] / 3;
        let mut ratio: Option<(BigRational, &str)> = None;
        for (a, raw) in anchors.iter().zip(&raws) {
            let Some(e) = &a.absolutes[abs_pos] else { continue };
            let i3 = rat(&raw[0]);
            let v = rat(&raw[slot]);
            if v.is_zero() {
                if !e.is_zero() {
                    return Err(Error::InconsistentAnchors(format!("{}: {} vanishes but is prescribed {e}", a.name, NAMES[slot])));
                }
                continue;
            }
            let r = e * i3.pow(m as i32) / v;
            match &ratio {
                None => ratio = Some((r, &a.name)),
                Some((r0, first)) if *r0 != r => {
                    return Err(Error::InconsistentAnchors(format!(
                        "{} scalar from {} is {r}, from {first} it is {r0}",
                        NAMES[slot], a.name
                    )))
                }
                Some(_) => {}
            }
        }
        let (r, _) = ratio.ok_or_else(|| Error::InconsistentAnchors(format!("no anchor determines {}", NAMES[slot])))?;
        scalars[slot] = r * s3.pow(m as i32);
    }
    Ok(CalibrationTable { c_sigma: BigRational::one(), c_psi, scalars })
}

/// `I3` straight from the definition, without the chain.
pub fn i3_direct(f: &TernaryQuartic) -> Result<FieldElement> {
    let (sigma, _) = covariants::sigma_psi_contravariants(f);
    let v = d_op(&sigma, &Form::from_quartic(f))?.value();
    let cal = CalibrationTable::frozen();
    Ok(&(&v * &f.field().from_ratio(1, 144)?) * &f.field().from_rational(&cal.scalars[0])?)
}
