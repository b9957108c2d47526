//! Orders of vanishing and limits at `u = 0`, by exact cancellation of
//! powers of `u`.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::{Chart, ChartAtlas, TowerError};
use crate::poly::{MultiPoly, Rational, Ring, UniPoly};
use crate::projmap::{ProjMap, ProjPoint};

/// `map o forward`, with the common power of `u` removed.
fn pushed(map: Option<&ProjMap>, chart: &Chart) -> Result<[MultiPoly<Rational>; 3], TowerError> {
    let mut g = match map {
        Some(f) => {
            let mut out = Vec::with_capacity(3);
            for c in f.components() {
                out.push(c.substitute(&chart.forward)?);
            }
            [out[0].clone(), out[1].clone(), out[2].clone()]
        }
        None => chart.forward.clone(),
    };
    if g.iter().all(|p| p.is_zero()) {
        return Err(TowerError::ZeroPullback(chart.name.clone()));
    }
    let k = g.iter().filter(|p| !p.is_zero()).map(|p| p.lowest_order(0).unwrap()).min().unwrap();
    if k > 0 {
        let uk = MultiPoly::var(&Chart::ring(), 0).pow(k);
        for p in g.iter_mut().filter(|p| !p.is_zero()) {
            *p = p.div_exact(&uk).expect("u power divides");
        }
    }
    Ok(g)
}

/// Lowest `u`-order of `h o map o forward`; `map = None` is the identity.
pub fn order_of_vanishing(
    h: &MultiPoly<Rational>,
    chart: &Chart,
    map: Option<&ProjMap>,
) -> Result<u32, TowerError> {
    let img = match map {
        Some(f) => {
            let comps = f.components().to_vec();
            h.substitute(&comps)?
        }
        None => h.clone(),
    };
    let pulled = img.substitute(&chart.forward)?;
    if pulled.is_zero() {
        return Err(TowerError::ZeroPullback(chart.name.clone()));
    }
    Ok(pulled.lowest_order(0)?)
}

fn strip_common_u(n: &mut MultiPoly<Rational>, d: &mut MultiPoly<Rational>) {
    if n.is_zero() || d.is_zero() {
        return;
    }
    let k = n.lowest_order(0).unwrap().min(d.lowest_order(0).unwrap());
    if k > 0 {
        let uk = MultiPoly::var(n.ring(), 0).pow(k);
        *n = n.div_exact(&uk).expect("u power divides");
        *d = d.div_exact(&uk).expect("u power divides");
    }
}

/// `(order in u, coefficient of that power as a polynomial in eta)`.
fn leading_in_u(p: &MultiPoly<Rational>) -> (i64, UniPoly<Rational>) {
    let (k, c) = p.coefficients_in(0).into_iter().next().expect("nonzero");
    (k as i64, UniPoly::from_multi(&c, 1).expect("free of u"))
}

fn uni_to_string(p: &UniPoly<Rational>, var: &str) -> String {
    let r = Ring::rational(&[var]);
    p.to_multi(&r, 0).to_string()
}

/// A rational function of one fiber coordinate, in lowest terms with a monic
/// denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoebiusMap {
    pub source: String,
    pub target: String,
    pub num: UniPoly<Rational>,
    pub den: UniPoly<Rational>,
}

impl MoebiusMap {
    pub fn new(
        source: &str,
        target: &str,
        num: UniPoly<Rational>,
        den: UniPoly<Rational>,
    ) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.degree().unwrap_or(0) > 0 {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        } else {
            (num, den)
        };
        let lc = den.leading().expect("nonzero").clone();
        let inv = Rational::one() / lc;
        num = num.scale(&inv);
        den = den.scale(&inv);
        MoebiusMap { source: source.to_string(), target: target.to_string(), num, den }
    }

    /// `z |-> p(z)/q(z)` from coefficient lists, constant term first.
    pub fn from_coeffs(source: &str, target: &str, num: Vec<Rational>, den: Vec<Rational>) -> Self {
        MoebiusMap::new(source, target, UniPoly::new(&(), num), UniPoly::new(&(), den))
    }

    pub fn eval(&self, z: &Rational) -> Option<Rational> {
        let d = self.den.eval(z);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(z) / d)
        }
    }

    pub fn is_constant(&self) -> bool {
        self.num.degree().unwrap_or(0) == 0 && self.den.degree() == Some(0)
    }

    pub fn constant(&self) -> Option<Rational> {
        self.is_constant().then(|| self.num.coeff(0) / self.den.coeff(0))
    }

    /// Same rational function (ignores the fiber names).
    pub fn same_function(&self, other: &MoebiusMap) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    pub fn formula(&self) -> String {
        let n = uni_to_string(&self.num, "z");
        if self.den.degree() == Some(0) && self.den.coeff(0).is_one() {
            n
        } else {
            format!("({}) / ({})", n, uni_to_string(&self.den, "z"))
        }
    }
}

impl fmt::Display for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}: z |-> {}", self.source, self.target, self.formula())
    }
}

impl Serialize for MoebiusMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serde_json::json!({"source": self.source, "target": self.target, "map": self.formula()})
            .serialize(s)
    }
}

/// Limit of `dst.inverse o map o src.forward` as `u -> 0`.
pub fn induced_fiber_map(
    map: Option<&ProjMap>,
    src: &Chart,
    dst: &Chart,
) -> Result<MoebiusMap, TowerError> {
    fiber_limit(map, src, dst).map(|(m, _)| m)
}

/// The fiber map together with the order to which `dst`'s transversal
/// coordinate vanishes along `src`: the multiplicity of `src` in the
/// pullback of `dst`.
pub fn fiber_limit(
    map: Option<&ProjMap>,
    src: &Chart,
    dst: &Chart,
) -> Result<(MoebiusMap, u32), TowerError> {
    let g = pushed(map, src)?;
    let undefined = |transversal: i64, fiber: i64| TowerError::LimitUndefined {
        src: src.name.clone(),
        dst: dst.name.clone(),
        transversal,
        fiber,
    };
    let (nu, du) = dst.base_inverse[0].pull(&g)?;
    if du.is_zero() || nu.is_zero() && !dst.shifts.is_empty() {
        return Err(undefined(i64::MIN, 0));
    }
    let transversal = if nu.is_zero() {
        i64::MAX
    } else {
        leading_in_u(&nu).0 - leading_in_u(&du).0
    };
    if transversal <= 0 {
        return Err(undefined(transversal, 0));
    }
    let (mut ne, mut de) = dst.base_inverse[1].pull(&g)?;
    for c in &dst.shifts {
        // a pole never cancels in later steps
        if !ne.is_zero() && !de.is_zero() {
            let excess = leading_in_u(&ne).0 - leading_in_u(&de).0;
            if excess < 0 {
                return Err(undefined(transversal, excess));
            }
        }
        // (eta - c) / u, one blowup at a time
        let top = &(&ne - &de.scale(c)) * &du;
        de = &de * &nu;
        ne = top;
        strip_common_u(&mut ne, &mut de);
    }
    if de.is_zero() {
        return Err(undefined(transversal, i64::MIN));
    }
    let (fiber, num, den) = if ne.is_zero() {
        (i64::MAX, UniPoly::zero(&()), UniPoly::constant(&(), Rational::one()))
    } else {
        let (kn, cn) = leading_in_u(&ne);
        let (kd, cd) = leading_in_u(&de);
        if kn > kd {
            (kn - kd, UniPoly::zero(&()), UniPoly::constant(&(), Rational::one()))
        } else {
            (kn - kd, cn, cd)
        }
    };
    if transversal <= 0 || fiber < 0 {
        return Err(undefined(transversal, fiber));
    }
    let mult = u32::try_from(transversal).unwrap_or(u32::MAX);
    Ok((MoebiusMap::new(&src.name, &dst.name, num, den), mult))
}

/// The image of a chart's `u = 0` set in the plane, as forms in the fiber
/// coordinate with their common factor removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneImage {
    pub source: String,
    pub coords: [UniPoly<Rational>; 3],
}

impl PlaneImage {
    pub fn point(&self) -> Option<ProjPoint> {
        if self.coords.iter().all(|c| c.degree().unwrap_or(0) == 0) {
            ProjPoint::new(self.coords.clone().map(|c| c.coeff(0))).ok()
        } else {
            None
        }
    }

    pub fn at(&self, z: &Rational) -> Option<ProjPoint> {
        ProjPoint::new(self.coords.clone().map(|c| c.eval(z))).ok()
    }

    /// The image satisfies `eq = 0` identically.
    pub fn lies_on(&self, eq: &MultiPoly<Rational>) -> bool {
        let r = Ring::rational(&["z"]);
        let img: Vec<MultiPoly<Rational>> = self.coords.iter().map(|c| c.to_multi(&r, 0)).collect();
        eq.substitute(&img).map(|p| p.is_zero()).unwrap_or(false)
    }

    pub fn formula(&self) -> String {
        let parts: Vec<String> = self.coords.iter().map(|c| uni_to_string(c, "z")).collect();
        format!("[{}]", parts.join(" : "))
    }
}

impl fmt::Display for PlaneImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> plane: z |-> {}", self.source, self.formula())
    }
}

impl Serialize for PlaneImage {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serde_json::json!({"source": self.source, "target": "plane", "map": self.formula()})
            .serialize(s)
    }
}

pub fn image_in_plane(map: Option<&ProjMap>, src: &Chart) -> Result<PlaneImage, TowerError> {
    let g = pushed(map, src)?;
    let mut coords = g.map(|p| {
        UniPoly::from_multi(&p.eval_var(0, &Rational::zero()), 1).expect("free of u")
    });
    let mut gcd = UniPoly::zero(&());
    for c in &coords {
        gcd = gcd.gcd(c);
    }
    if gcd.degree().unwrap_or(0) > 0 {
        for c in coords.iter_mut() {
            *c = c.div_rem(&gcd).0;
        }
    }
    let lead = coords.iter().find(|c| !c.is_zero()).expect("nonzero").leading().unwrap().clone();
    let inv = Rational::one() / lead;
    Ok(PlaneImage { source: src.name.clone(), coords: coords.map(|c| c.scale(&inv)) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum FiberImage {
    Fiber(MoebiusMap),
    Plane(PlaneImage),
}

impl fmt::Display for FiberImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberImage::Fiber(m) => m.fmt(f),
            FiberImage::Plane(p) => p.fmt(f),
        }
    }
}

/// Where the `u = 0` set of `src` goes: onto a fiber when some chart of the
/// atlas captures the limit, otherwise into the plane. A dominant fiber map
/// wins over a constant one; among constant ones the fiber blown up last
/// (the infinitely near one) wins.
pub fn image_of_fiber(
    map: Option<&ProjMap>,
    atlas: &ChartAtlas,
    src: &Chart,
) -> Result<FiberImage, TowerError> {
    let mut best: Option<(usize, MoebiusMap)> = None;
    for dst in &atlas.charts {
        let m = match induced_fiber_map(map, src, dst) {
            Ok(m) => m,
            Err(TowerError::LimitUndefined { .. }) => continue,
            Err(e) => return Err(e),
        };
        if !m.is_constant() {
            return Ok(FiberImage::Fiber(m));
        }
        let depth = atlas.blowup_order.iter().position(|n| *n == dst.name).unwrap_or(0);
        if best.as_ref().map(|(d, _)| depth >= *d).unwrap_or(true) {
            best = Some((depth, m));
        }
    }
    match best {
        Some((_, m)) => Ok(FiberImage::Fiber(m)),
        None => Ok(FiberImage::Plane(image_in_plane(map, src)?)),
    }
}
