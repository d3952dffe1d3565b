//! Flexes and hyperflexes of smooth plane quartics.
//!
//! The flex divisor is cut out by the Hessian. Projecting from `(0:0:1)` in a
//! general frame, `R = Res_Z(H, F)` is a binary form of degree 24 whose
//! double roots are exactly the hyperflexes.

use crate::covariants::hessian;
use crate::error::{Error, Result};
use crate::fields::FieldElement;
use crate::invariants::{gradient_resultant, unimodular_frames};
use crate::par;
use crate::poly::binary::{gcd_binary_forms, resultant_in_var_interpolated, squarefree_part};
use crate::poly::{MultiPoly, UniPoly, Vars};
use crate::{LinearMap3, TernaryQuartic};

/// Seed used when `QUARTIX_SEED` is unset.
pub const DEFAULT_SEED: u64 = 0x5eed_f1e5;

/// Number of random frames tried before giving up.
pub const MAX_FRAMES: usize = 20;

/// Reads `QUARTIX_SEED` (decimal or `0x` hex), falling back to [`DEFAULT_SEED`].
pub fn seed_from_env() -> u64 {
    std::env::var("QUARTIX_SEED").ok().and_then(|s| parse_seed(&s)).unwrap_or(DEFAULT_SEED)
}

pub fn parse_seed(s: &str) -> Option<u64> {
    let s = s.trim().replace('_', "");
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16).ok(),
        None => s.parse().ok(),
    }
}

/// `Res_Z(H, F)` after substituting `g`, as a binary form in `X, Y`.
pub fn flex_resultant(f: &TernaryQuartic, g: &LinearMap3) -> Result<MultiPoly> {
    let fg = f.transform(g)?;
    let h = hessian(&fg);
    resultant_in_var_interpolated(h.poly(), fg.poly(), 2)
}

#[derive(Clone, Debug)]
pub struct FlexReport {
    pub hyperflex_count: usize,
    /// Distinct flexes, hyperflexes included.
    pub flex_count: usize,
    /// `GCD(R, R_X, R_Y)` in the first accepted frame.
    pub hyperflex_form: MultiPoly,
    pub resultant: MultiPoly,
    pub frames: [[[i64; 3]; 3]; 2],
    pub attempts: usize,
    pub warnings: Vec<String>,
}

struct FrameResult {
    frame: [[i64; 3]; 3],
    r: MultiPoly,
    g: MultiPoly,
    hyper: usize,
    distinct: usize,
    g_degree: usize,
}

fn analyse(f: &TernaryQuartic, frame: [[i64; 3]; 3]) -> Result<FrameResult> {
    let lin = LinearMap3::from_integers(f.field(), frame);
    let pair = fg_and_h(f, &lin)?;
    let r = resultant_in_var_interpolated(&pair.1, &pair.0, 2)?;
    if r.is_zero() {
        return Err(Error::Inadmissible("flex resultant vanishes".into()));
    }
    if r.total_degree() != Some(24) {
        return Err(Error::Form(format!("flex resultant has degree {:?}", r.total_degree())));
    }
    if !fibres_are_single(&pair, &r)? {
        return Err(Error::Inadmissible("projection identifies two flexes".into()));
    }
    let rx = r.derive(0)?;
    let ry = r.derive(1)?;
    let g = gcd_binary_forms(&[r.clone(), rx, ry])?;
    let g_degree = g.total_degree().unwrap_or(0) as usize;
    let hyper = squarefree_part(&g)?.total_degree().unwrap_or(0) as usize;
    // deg R - deg GCD(R, R')
    let distinct = 24 - g_degree;
    Ok(FrameResult { frame, r, g, hyper, distinct, g_degree })
}

fn fg_and_h(f: &TernaryQuartic, g: &LinearMap3) -> Result<(MultiPoly, MultiPoly)> {
    let fg = f.transform(g)?;
    let h = hessian(&fg);
    Ok((fg.poly().clone(), h.poly().clone()))
}

fn det(mut m: Vec<Vec<FieldElement>>) -> Result<FieldElement> {
    let n = m.len();
    let field = m[0][0].field().clone();
    let mut acc = field.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Ok(field.zero());
        };
        if p != c {
            m.swap(p, c);
            acc = -&acc;
        }
        let inv = m[c][c].inv()?;
        acc = &acc * &m[c][c];
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let k = &m[r][c] * &inv;
            for j in c..n {
                let t = &k * &m[c][j];
                m[r][j] = &m[r][j] - &t;
            }
        }
    }
    Ok(acc)
}

/// First principal subresultant coefficient of `p` and `q`, given as
/// coefficient lists from the constant term up with nonzero leading terms.
fn psc1(p: &[FieldElement], q: &[FieldElement]) -> Result<FieldElement> {
    let (m, n) = (p.len() - 1, q.len() - 1);
    let size = m + n - 2;
    let mut rows = Vec::with_capacity(size);
    for (src, count) in [(p, n - 1), (q, m - 1)] {
        for shift in 0..count {
            let mut row = vec![p[0].field().zero(); size + 1];
            for (k, c) in src.iter().rev().enumerate() {
                row[shift + k] = c.clone();
            }
            row.truncate(size);
            rows.push(row);
        }
    }
    det(rows)
}

/// True when every root of `r` has a single point of `F = H = 0` above it,
/// so that root multiplicities of `r` are local intersection numbers.
fn fibres_are_single((fg, h): &(MultiPoly, MultiPoly), r: &MultiPoly) -> Result<bool> {
    let field = fg.field().clone();
    let (fc, hc) = (fg.coefficients_in(2), h.coefficients_in(2));
    let at = |x: &FieldElement, y: &FieldElement| -> Result<FieldElement> {
        let pt = [x.clone(), y.clone(), field.zero()];
        let a: Vec<FieldElement> = fc.iter().map(|c| c.evaluate(&pt)).collect::<Result<_>>()?;
        let b: Vec<FieldElement> = hc.iter().map(|c| c.evaluate(&pt)).collect::<Result<_>>()?;
        psc1(&a, &b)
    };
    // each minor entry has degree at most 6 in x
    let npts = 6 * (fc.len() + hc.len()) + 1;
    let xs: Vec<FieldElement> = (0..npts as i64).map(|k| field.from_i64(k)).collect();
    let ys: Vec<FieldElement> = par::map(&xs, |x| at(x, &field.one())).into_iter().collect::<Result<_>>()?;
    let s = UniPoly::interpolate(&field, &xs, &ys)?;
    if s.is_zero() {
        return Ok(false);
    }
    let (ru, ymult) = r.dehomogenize_binary()?;
    if ru.gcd(&s).degree() != Some(0) {
        return Ok(false);
    }
    Ok(ymult == 0 || !at(&field.one(), &field.zero())?.is_zero())
}

/// Hyperflex locus using frames drawn from `QUARTIX_SEED`.
pub fn hyperflex_form(f: &TernaryQuartic) -> Result<FlexReport> {
    hyperflex_form_seeded(f, seed_from_env())
}

/// Counts hyperflexes over the algebraic closure. Frames are random unimodular
/// integer matrices. A frame is admissible only if no line through the centre
/// meets two flexes, which is certified by checking that `R` is coprime to the
/// first subresultant coefficient of `F` and `H` in `Z`; two admissible
/// frames must then agree.
pub fn hyperflex_form_seeded(f: &TernaryQuartic, seed: u64) -> Result<FlexReport> {
    if gradient_resultant(f)?.is_zero() {
        return Err(Error::Singular);
    }
    let frames: Vec<[[i64; 3]; 3]> = unimodular_frames(seed, MAX_FRAMES + 1).into_iter().skip(1).collect();
    let mut accepted: Vec<FrameResult> = Vec::new();
    let mut attempts = 0;
    let mut next = 0;
    while next < frames.len() {
        // two frames at a time, evaluated concurrently
        let a = frames[next];
        let b = frames.get(next + 1).copied();
        next += 2;
        let (ra, rb) = par::join(|| analyse(f, a), || b.map(|b| analyse(f, b)));
        for res in std::iter::once(ra).chain(rb) {
            attempts += 1;
            match res {
                Ok(fr) => accepted.push(fr),
                Err(Error::Inadmissible(_)) => {}
                Err(e) => return Err(e),
            }
        }
        if let Some((i, j)) = agreeing_pair(&accepted) {
            let (first, second) = (&accepted[i], &accepted[j]);
            let mut warnings = Vec::new();
            if first.g_degree != first.hyper {
                warnings.push(format!(
                    "GCD has repeated roots (degree {} vs {} distinct)",
                    first.g_degree, first.hyper
                ));
            }
            if accepted.len() > 2 {
                warnings.push(format!("{} admissible frames disagreed", accepted.len() - 2));
            }
            return Ok(FlexReport {
                hyperflex_count: first.hyper,
                flex_count: first.distinct,
                hyperflex_form: first.g.clone(),
                resultant: first.r.clone(),
                frames: [first.frame, second.frame],
                attempts,
                warnings,
            });
        }
    }
    if accepted.len() >= 2 {
        let counts: Vec<String> = accepted.iter().map(|a| a.hyper.to_string()).collect();
        return Err(Error::FlexInconsistency(format!("frames disagree: {}", counts.join(", "))));
    }
    Err(Error::FrameSearchExhausted(attempts))
}

fn agreeing_pair(list: &[FrameResult]) -> Option<(usize, usize)> {
    for j in 1..list.len() {
        for i in 0..j {
            if list[i].hyper == list[j].hyper && list[i].distinct == list[j].distinct {
                return Some((i, j));
            }
        }
    }
    None
}

pub fn hyperflex_count(f: &TernaryQuartic) -> Result<usize> {
    Ok(hyperflex_form(f)?.hyperflex_count)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlexType {
    Ordinary,
    Flex,
    Hyperflex,
}

impl FlexType {
    pub fn name(self) -> &'static str {
        match self {
            FlexType::Ordinary => "ordinary",
            FlexType::Flex => "flex",
            FlexType::Hyperflex => "hyperflex",
        }
    }
}

fn cross(a: &[FieldElement; 3], b: &[FieldElement; 3]) -> [FieldElement; 3] {
    std::array::from_fn(|k| {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        &(&a[i] * &b[j]) - &(&a[j] * &b[i])
    })
}

/// Contact order of the tangent line at `p`, cross-checked against the
/// Hessian and the minors of the Jacobian of `(F, H)`.
pub fn point_flex_type(f: &TernaryQuartic, p: &[FieldElement; 3]) -> Result<FlexType> {
    let field = f.field();
    let p = [field.embed(&p[0])?, field.embed(&p[1])?, field.embed(&p[2])?];
    let poly = f.poly();
    if p.iter().all(FieldElement::is_zero) {
        return Err(Error::NotOnCurve);
    }
    if !poly.evaluate(&p)?.is_zero() {
        return Err(Error::NotOnCurve);
    }
    let grad_polys: Vec<MultiPoly> = (0..3).map(|k| poly.derive(k)).collect::<Result<_>>()?;
    let grad: [FieldElement; 3] = [
        grad_polys[0].evaluate(&p)?,
        grad_polys[1].evaluate(&p)?,
        grad_polys[2].evaluate(&p)?,
    ];
    if grad.iter().all(FieldElement::is_zero) {
        return Err(Error::SingularPoint);
    }
    // a second point on the tangent line
    let q = (0..3)
        .map(|k| {
            let mut e: [FieldElement; 3] = std::array::from_fn(|_| field.zero());
            e[k] = field.one();
            cross(&grad, &e)
        })
        .find(|q| cross(q, &p).iter().any(|c| !c.is_zero()))
        .expect("tangent line has two independent points");
    let vars = Vars::new(&["s", "r"]);
    let s = MultiPoly::var(field, &vars, 0);
    let r = MultiPoly::var(field, &vars, 1);
    let images: Vec<MultiPoly> = (0..3).map(|k| &s.scale(&p[k]) + &r.scale(&q[k])).collect();
    let restricted = poly.compose(&images)?;
    if restricted.is_zero() {
        return Err(Error::SingularPoint);
    }
    let order = restricted.terms().map(|(m, _)| m[1]).min().unwrap_or(0);
    let kind = match order {
        2 => FlexType::Ordinary,
        3 => FlexType::Flex,
        4 => FlexType::Hyperflex,
        o => return Err(Error::FlexInconsistency(format!("tangent contact order {o}"))),
    };
    let h = hessian(f);
    let on_hessian = h.poly().evaluate(&p)?.is_zero();
    let hgrad: Vec<FieldElement> = (0..3).map(|k| h.poly().derive(k)?.evaluate(&p)).collect::<Result<_>>()?;
    let minors_vanish = (0..3).all(|k| {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        (&(&grad[i] * &hgrad[j]) - &(&grad[j] * &hgrad[i])).is_zero()
    });
    let expected = match (on_hessian, minors_vanish) {
        (false, _) => FlexType::Ordinary,
        (true, false) => FlexType::Flex,
        (true, true) => FlexType::Hyperflex,
    };
    if expected != kind {
        return Err(Error::FlexInconsistency(format!(
            "tangent contact says {}, Hessian test says {}",
            kind.name(),
            expected.name()
        )));
    }
    Ok(kind)
}
