//! Jacobians, images of curves, base points and invariants.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{homogeneous_gcd, MapError, ParamCurve, ProjMap, ProjPoint};
use crate::poly::{trial_divide, MultiPoly, Rational, UniPoly};

/// Height bound for the rational-root search.
const ROOT_HEIGHT: u64 = 10_000;

pub fn jacobian_determinant(f: &ProjMap) -> MultiPoly<Rational> {
    let c = f.components();
    let d = |i: usize, j: usize| c[i].derivative(j);
    let m = [[d(0, 0), d(0, 1), d(0, 2)], [d(1, 0), d(1, 1), d(1, 2)], [d(2, 0), d(2, 1), d(2, 2)]];
    let minor = |a: usize, b: usize, x: usize, y: usize| &(&m[a][x] * &m[b][y]) - &(&m[a][y] * &m[b][x]);
    let t0 = &m[0][0] * &minor(1, 2, 1, 2);
    let t1 = &m[0][1] * &minor(1, 2, 0, 2);
    let t2 = &m[0][2] * &minor(1, 2, 0, 1);
    &(&t0 - &t1) + &t2
}

#[derive(Clone, Debug, Serialize)]
pub struct JacobianReport {
    /// Exponent of each catalogued curve, in catalogue order.
    pub factors: Vec<(String, u32)>,
    pub remainder: String,
    pub remainder_constant: bool,
}

impl JacobianReport {
    pub fn exponent(&self, name: &str) -> Option<u32> {
        self.factors.iter().find(|(n, _)| n == name).map(|(_, e)| *e)
    }

    pub fn exponents(&self) -> Vec<u32> {
        self.factors.iter().map(|(_, e)| *e).collect()
    }
}

pub fn jacobian_factored(f: &ProjMap, curves: &[ParamCurve]) -> Result<JacobianReport, MapError> {
    let jac = jacobian_determinant(f);
    if jac.is_zero() {
        return Err(MapError::ZeroJacobian);
    }
    let cands: Vec<MultiPoly<Rational>> = curves.iter().map(|c| c.equation.clone()).collect();
    let td = trial_divide(&jac, &cands)?;
    Ok(JacobianReport {
        factors: curves.iter().zip(&td.exponents).map(|(c, &e)| (c.name.clone(), e)).collect(),
        remainder_constant: td.remainder.is_constant(),
        remainder: td.remainder.to_string(),
    })
}

fn pull_back(f: &ProjMap, curve: &ParamCurve) -> Result<[MultiPoly<Rational>; 3], MapError> {
    if curve.param.iter().all(|p| p.is_zero()) || rank_one(&curve.param) {
        return Err(MapError::DegenerateCurve);
    }
    let mut out = Vec::with_capacity(3);
    for c in f.components() {
        out.push(c.substitute(&curve.param)?);
    }
    Ok([out[0].clone(), out[1].clone(), out[2].clone()])
}

/// All 2x2 minors vanish: the binary forms are constant multiples of one form.
fn rank_one(v: &[MultiPoly<Rational>; 3]) -> bool {
    let base = match v.iter().find(|p| !p.is_zero()) {
        Some(b) => b,
        None => return true,
    };
    let lb = base.leading_coeff();
    v.iter().all(|p| (&p.scale(&lb) - &base.scale(&p.leading_coeff())).is_zero())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurveImage {
    /// The curve is blown down to this point.
    Point(ProjPoint),
    /// The image is a curve of this degree (after removing base-point factors).
    Curve { degree: u32 },
}

pub fn image_of_curve(f: &ProjMap, curve: &ParamCurve) -> Result<CurveImage, MapError> {
    let pulled = pull_back(f, curve)?;
    if pulled.iter().all(|p| p.is_zero()) {
        return Err(MapError::CurveInBaseLocus);
    }
    let g = homogeneous_gcd(&pulled);
    let reduced: Vec<MultiPoly<Rational>> = pulled
        .iter()
        .map(|p| if p.is_zero() { p.clone() } else { p.div_exact(&g).expect("gcd divides") })
        .collect();
    let reduced = [reduced[0].clone(), reduced[1].clone(), reduced[2].clone()];
    if rank_one(&reduced) {
        let lm = reduced.iter().find(|p| !p.is_zero()).unwrap().leading_term().unwrap().0.clone();
        let coords = reduced.clone().map(|p| p.coeff(&lm));
        return Ok(CurveImage::Point(ProjPoint::new(coords)?));
    }
    let degree = reduced.iter().find_map(|p| p.total_degree()).unwrap();
    Ok(CurveImage::Curve { degree })
}

#[derive(Clone, Debug)]
pub struct BasePoints {
    pub points: Vec<ProjPoint>,
    /// Parameter values `[s : t]` of the points, in the same order.
    pub params: Vec<[Rational; 2]>,
    /// Part of the parameter gcd without rational roots of bounded height.
    pub residual: MultiPoly<Rational>,
}

pub fn base_points_on_curve(f: &ProjMap, curve: &ParamCurve) -> Result<BasePoints, MapError> {
    let pulled = pull_back(f, curve)?;
    if pulled.iter().all(|p| p.is_zero()) {
        return Err(MapError::CurveInBaseLocus);
    }
    let mut g = homogeneous_gcd(&pulled).normalized();
    let ring = g.ring().clone();
    let mut params: Vec<[Rational; 2]> = Vec::new();
    // roots at t = 0
    let te = g.lowest_order(1)?;
    if te > 0 {
        params.push([Rational::one(), Rational::zero()]);
        g = g
            .div_exact(&MultiPoly::var(&ring, 1).pow(te))
            .expect("t power divides");
    }
    let uni = UniPoly::from_multi(&g.eval_var(1, &Rational::one()), 0).expect("binary form");
    for r in rational_roots(&uni) {
        let lin = &MultiPoly::var(&ring, 0) - &MultiPoly::var(&ring, 1).scale(&r);
        while let Some(qt) = g.div_exact(&lin) {
            g = qt;
        }
        params.push([r, Rational::one()]);
    }
    let mut points = Vec::new();
    for [s, t] in &params {
        let coords: Vec<Rational> = curve
            .param
            .iter()
            .map(|p| p.eval(&[s.clone(), t.clone()]))
            .collect::<Result<_, _>>()?;
        let p = ProjPoint::new([coords[0].clone(), coords[1].clone(), coords[2].clone()])?;
        points.push(p);
    }
    Ok(BasePoints { points, params, residual: g })
}

fn small_divisors(v: &BigInt) -> Vec<BigInt> {
    let a = v.abs();
    let limit = a.to_u64().map(|x| x.min(ROOT_HEIGHT)).unwrap_or(ROOT_HEIGHT);
    (1..=limit)
        .map(BigInt::from)
        .filter(|d| (&a % d).is_zero())
        .collect()
}

/// Distinct rational roots of height at most 10^4, ascending.
pub fn rational_roots(p: &UniPoly<Rational>) -> Vec<Rational> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let mut den = BigInt::one();
    for c in p.coeffs() {
        den = den.lcm(c.denom());
    }
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| (c * &den).to_integer()).collect();
    let mut roots = Vec::new();
    let low = ints.iter().position(|c| !c.is_zero()).unwrap();
    if low > 0 {
        roots.push(Rational::zero());
    }
    let nums = small_divisors(&ints[low]);
    let dens = small_divisors(ints.last().unwrap());
    for a in &nums {
        for b in &dens {
            for sign in [1, -1] {
                let r = Rational::new(a * sign, b.clone());
                if !roots.contains(&r) && p.eval(&r).is_zero() {
                    roots.push(r);
                }
            }
        }
    }
    roots.sort();
    roots
}

/// `(phi1 o f) * phi2 == (phi2 o f) * phi1` exactly.
pub fn check_invariant(
    f: &ProjMap,
    phi1: &MultiPoly<Rational>,
    phi2: &MultiPoly<Rational>,
) -> Result<bool, MapError> {
    if !phi1.is_homogeneous() || !phi2.is_homogeneous() || phi1.total_degree() != phi2.total_degree()
    {
        return Err(MapError::DegreeMismatch);
    }
    let comps = f.components().to_vec();
    let a = phi1.substitute(&comps)?;
    let b = phi2.substitute(&comps)?;
    Ok((&(&a * phi2) - &(&b * phi1)).is_zero())
}
