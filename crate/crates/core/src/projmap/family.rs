//! The family F(y) = a_0 + a_1 y + ... + a_n y^n and the maps built from it.
//!
//! Affine points (x, y) are the points [1 : x : y] of the plane.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;
use serde::Serialize;

use super::{mono, MapError, ProjMap};
use crate::poly::{format_rational, MultiPoly, Rational, Ring};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyParams {
    coeffs: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenericityFlags {
    pub leading_zero: bool,
    /// Smallest `m <= horizon` with `a_0 = 2/m`.
    pub a0_two_over_m: Option<u32>,
    /// Odd `n` with `2 a_{n-1} = (n-1) a_n`.
    pub odd_resonance: bool,
    pub horizon: u32,
    pub generic: bool,
}

fn q(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

impl FamilyParams {
    /// Coefficients `a_0, ..., a_n`.
    pub fn new(coeffs: Vec<Rational>) -> Result<Self, MapError> {
        if coeffs.is_empty() {
            return Err(MapError::InvalidParams("no coefficients".into()));
        }
        if coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
            return Err(MapError::InvalidParams("leading coefficient a_n is zero".into()));
        }
        Ok(FamilyParams { coeffs })
    }

    pub fn from_ints(coeffs: &[i64]) -> Result<Self, MapError> {
        Self::new(coeffs.iter().map(|&c| q(c)).collect())
    }

    /// `F(y) = a y^3 + a y^2 + b y + 2`.
    pub fn cubic(a: Rational, b: Rational) -> Result<Self, MapError> {
        if a.is_zero() {
            return Err(MapError::InvalidParams("cubic family needs a != 0".into()));
        }
        Self::new(vec![q(2), b, a.clone(), a])
    }

    /// `(a, b)` when the coefficients have the cubic-family pattern.
    pub fn cubic_parameters(&self) -> Option<(Rational, Rational)> {
        let c = &self.coeffs;
        (c.len() == 4 && c[0] == q(2) && c[2] == c[3] && !c[3].is_zero())
            .then(|| (c[3].clone(), c[1].clone()))
    }

    /// Random small-height rationals, redrawn until generic within `horizon`.
    pub fn random<R: Rng + ?Sized>(n: usize, horizon: u32, rng: &mut R) -> Self {
        loop {
            let coeffs = (0..=n).map(|_| random_small_rational(rng)).collect();
            let p = FamilyParams { coeffs };
            if p.genericity(horizon).generic {
                return p;
            }
        }
    }

    pub fn n(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn a(&self, j: usize) -> &Rational {
        &self.coeffs[j]
    }

    pub fn leading(&self) -> &Rational {
        self.coeffs.last().unwrap()
    }

    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }

    /// `F(y)` evaluated at a rational.
    pub fn eval_f(&self, y: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * y + c)
    }

    /// The homogenization `x0^n F(x2/x0)`.
    pub fn f_check(&self, ring: &Ring<Rational>) -> MultiPoly<Rational> {
        let n = self.n() as u32;
        let terms = self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, c)| {
            let j = j as u32;
            (crate::poly::Monomial::from_exponents(&[n - j, 0, j]), c.clone())
        });
        MultiPoly::from_terms(ring, terms)
    }

    pub fn genericity(&self, horizon: u32) -> GenericityFlags {
        let n = self.n();
        let leading_zero = n >= 1 && self.leading().is_zero();
        let a0 = &self.coeffs[0];
        let a0_two_over_m = if a0.is_positive() {
            let m = q(2) / a0;
            (m.is_integer() && m <= q(horizon as i64))
                .then(|| m.to_integer().try_into().expect("small"))
        } else {
            None
        };
        let odd_resonance =
            n % 2 == 1 && q(2) * &self.coeffs[n - 1] == q(n as i64 - 1) * &self.coeffs[n];
        GenericityFlags {
            leading_zero,
            a0_two_over_m,
            odd_resonance,
            horizon,
            generic: !leading_zero && a0_two_over_m.is_none() && !odd_resonance,
        }
    }
}

/// Numerator and denominator uniform in [-10, 10] \ {0}.
pub(crate) fn random_small_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let mut draw = || loop {
        let v: i64 = rng.gen_range(-10..=10);
        if v != 0 {
            return v;
        }
    };
    let num = draw();
    let den = draw();
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn triple(comps: [MultiPoly<Rational>; 3], label: &str) -> ProjMap {
    ProjMap::new(comps, Some(label.to_string())).expect("homogeneous builder output")
}

/// The involution iota with its denominators cleared.
pub fn build_iota() -> ProjMap {
    let r = Ring::projective();
    let x = |i| MultiPoly::var(&r, i);
    let (x0, x1, x2) = (x(0), x(1), x(2));
    // iota(x, y) = (1 - x - (x-1)/y, -y - 1 - y/(x-1)) on [1 : x : y]
    let d = &x1 - &x0;
    let c0 = &(&x0 * &x2) * &d;
    let c1 = &(&(&(&x0 * &x2) - &(&x1 * &x2)) - &(&x0 * &d)) * &d;
    let c2 = &(&(&(&x2.neg_poly() * &d) - &(&x0 * &d)) - &(&x0 * &x2)) * &x2;
    triple([c0, c1, c2], "iota")
}

/// The involution j_F(x, y) = (-x + F(y), y).
pub fn build_jf(params: &FamilyParams) -> ProjMap {
    let r = Ring::projective();
    let n = params.n() as u32;
    let fc = params.f_check(&r);
    if n == 0 {
        let c1 = &(&fc * &MultiPoly::var(&r, 0)) - &MultiPoly::var(&r, 1);
        return triple([MultiPoly::var(&r, 0), c1, MultiPoly::var(&r, 2)], "j_F");
    }
    let c0 = mono(&r, [n, 0, 0]);
    let c1 = &fc - &mono(&r, [n - 1, 1, 0]);
    let c2 = mono(&r, [n - 1, 0, 1]);
    triple([c0, c1, c2], "j_F")
}

fn check_n(params: &FamilyParams) -> Result<u32, MapError> {
    match params.n() {
        0 => Err(MapError::InvalidParams(
            "the closed form needs deg F >= 1; use the composition j_F o iota".into(),
        )),
        n => Ok(n as u32),
    }
}

/// The closed form of k = j_F o iota.
pub fn build_k(params: &FamilyParams) -> Result<ProjMap, MapError> {
    let n = check_n(params)?;
    let r = Ring::projective();
    let x = |i| MultiPoly::var(&r, i);
    let (x0, x1, x2) = (x(0), x(1), x(2));
    let w = &(&x0 * &x1) - &(&x0 * &x0);
    let c4 = &(&(&x0 * &x0) - &(&x0 * &x1)) - &(&x1 * &x2);
    let k0 = &w.pow(n) * &x2;
    let mut sum = MultiPoly::zero(&r);
    for (j, a) in params.coeffs().iter().enumerate() {
        let j = j as u32;
        sum = &sum + &(&w.pow(n - j) * &c4.pow(j)).scale(a);
    }
    let k1 = &(&(&x0.pow(n - 1) * &(&x1 - &x0).pow(n + 1)) * &(&x2 + &x0)) + &(&x2 * &sum);
    let k2 = &(&x2 * &w.pow(n - 1)) * &c4;
    Ok(triple([k0, k1, k2], "k"))
}

/// The closed form of the inverse map.
pub fn build_k_inverse(params: &FamilyParams) -> Result<ProjMap, MapError> {
    let n = check_n(params)?;
    let r = Ring::projective();
    let x = |i| MultiPoly::var(&r, i);
    let (x0, x1, x2) = (x(0), x(1), x(2));
    let fc = params.f_check(&r);
    let x0n1 = x0.pow(n - 1);
    let g = &fc - &(&x0n1 * &(&x0 + &x1));
    let i0 = &(&x0.pow(n) * &x2) * &g;
    let i1 = (&(&x0 + &x2) * &g.pow(2)).neg_poly();
    let inner = &(&x0n1 * &(&(&(&x0 * &x0) + &(&x0 * &x1)) + &(&x1 * &x2))) - &(&(&x0 + &x2) * &fc);
    let i2 = &(&x0n1 * &x2) * &inner;
    Ok(triple([i0, i1, i2], "k^-1"))
}

/// k for any n: the closed form when n >= 1, the composition when n = 0.
pub fn k_map(params: &FamilyParams) -> ProjMap {
    match build_k(params) {
        Ok(k) => k,
        Err(_) => build_jf(params).compose(&build_iota()).expect("dominant").with_label("k"),
    }
}

/// A curve with its defining form and a parametrization by binary forms in (s, t).
#[derive(Clone, Debug)]
pub struct ParamCurve {
    pub name: String,
    pub equation: MultiPoly<Rational>,
    pub param: [MultiPoly<Rational>; 3],
}

impl ParamCurve {
    pub fn param_ring() -> Ring<Rational> {
        Ring::rational(&["s", "t"])
    }

    /// Substituting the parametrization into the equation gives zero.
    pub fn is_consistent(&self) -> bool {
        self.equation.substitute(&self.param).map(|p| p.is_zero()).unwrap_or(false)
    }

    /// The line through two points.
    pub fn line(name: &str, equation: MultiPoly<Rational>, p: [i64; 3], q: [i64; 3]) -> Self {
        let r = Self::param_ring();
        let s = MultiPoly::var(&r, 0);
        let t = MultiPoly::var(&r, 1);
        let param = [0, 1, 2].map(|i| &s.scale(&Rational::from_integer(p[i].into())) + &t.scale(&Rational::from_integer(q[i].into())));
        ParamCurve { name: name.to_string(), equation, param }
    }
}

/// The exceptional curves of k and of its inverse.
#[derive(Clone, Debug)]
pub struct CurveCatalog {
    pub forward: Vec<ParamCurve>,
    /// Empty for n = 0.
    pub backward: Vec<ParamCurve>,
}

impl CurveCatalog {
    pub fn new(params: &FamilyParams) -> Self {
        let r = Ring::projective();
        let x = |i| MultiPoly::var(&r, i);
        let (x0, x1, x2) = (x(0), x(1), x(2));
        let pr = ParamCurve::param_ring();
        let s = MultiPoly::var(&pr, 0);
        let t = MultiPoly::var(&pr, 1);
        let c1 = ParamCurve::line("C1", x0.clone(), [0, 1, 0], [0, 0, 1]);
        let c2 = ParamCurve::line("C2", &x0 - &x1, [1, 1, 0], [0, 0, 1]);
        let c3 = ParamCurve::line("C3", x2.clone(), [1, 0, 0], [0, 1, 0]);
        let st = &s + &t;
        let c4 = ParamCurve {
            name: "C4".into(),
            equation: &(&(&x0 * &x0) - &(&x0 * &x1)) - &(&x1 * &x2),
            param: [&s * &st, &s * &s, &t * &st],
        };
        let forward = vec![c1.clone(), c2, c3.clone(), c4];

        let n = params.n() as u32;
        // the inverse-side curves are defined for n >= 1 only
        if n == 0 {
            return CurveCatalog { forward, backward: vec![] };
        }
        let fc = params.f_check(&r);
        // F-check on the parameter line x0 = s, x2 = t
        let fst = fc.substitute(&[s.clone(), MultiPoly::zero(&pr), t.clone()]).expect("arity");
        let c2p_eq = &(&x0.pow(n) + &(&x0.pow(n - 1) * &x1)) - &fc;
        let c4p_eq = &(&x0.pow(n) * &x2) - &(&(&x0 + &x2) * &c2p_eq);
        let sn = s.pow(n);
        let sn1 = s.pow(n - 1);
        let c2p = ParamCurve {
            name: "C2'".into(),
            equation: c2p_eq,
            param: [sn.clone(), &fst - &sn, &t * &sn1],
        };
        let c4p = ParamCurve {
            name: "C4'".into(),
            equation: c4p_eq,
            param: [
                &sn * &st,
                &(&sn * &t) - &(&st * &(&sn - &fst)),
                &(&t * &sn1) * &st,
            ],
        };
        let mut c1p = c1;
        c1p.name = "C1'".into();
        let mut c3p = c3;
        c3p.name = "C3'".into();
        let backward = vec![c1p, c2p, c3p, c4p];
        CurveCatalog { forward, backward }
    }

    pub fn all(&self) -> impl Iterator<Item = &ParamCurve> {
        self.forward.iter().chain(self.backward.iter())
    }

    pub fn get(&self, name: &str) -> Option<&ParamCurve> {
        self.all().find(|c| c.name == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projmap::ProjPoint;

    #[test]
    fn iota_sends_two_one_to_minus_two_minus_three() {
        let iota = build_iota();
        let p = ProjPoint::affine(q(2), q(1));
        let img = iota.apply(&p).unwrap();
        assert_eq!(img.to_affine().unwrap(), (q(-2), q(-3)));
        assert_eq!(iota.apply(&img).unwrap(), p);
    }

    #[test]
    fn jf_for_linear_f() {
        let jf = build_jf(&FamilyParams::from_ints(&[0, 1]).unwrap());
        let img = jf.apply(&ProjPoint::affine(q(0), q(3))).unwrap();
        assert_eq!(img.to_affine().unwrap(), (q(3), q(3)));
    }

    #[test]
    fn catalog_parametrizations_lie_on_curves() {
        for n in 1..=4 {
            let coeffs: Vec<i64> = (1..=n as i64 + 1).collect();
            let cat = CurveCatalog::new(&FamilyParams::from_ints(&coeffs).unwrap());
            for c in cat.all() {
                assert!(c.is_consistent(), "{} for n = {n}", c.name);
            }
        }
    }

    #[test]
    fn genericity_flags() {
        let g = FamilyParams::from_ints(&[3, 1, 1]).unwrap().genericity(64);
        assert!(g.generic);
        let g = FamilyParams::from_ints(&[3, 0, 1, 1]).unwrap().genericity(64);
        assert!(g.odd_resonance && !g.generic && g.a0_two_over_m.is_none());
        let g = FamilyParams::from_ints(&[2, 1, 1]).unwrap().genericity(64);
        assert_eq!(g.a0_two_over_m, Some(1));
    }
}
