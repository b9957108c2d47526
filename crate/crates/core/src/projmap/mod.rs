//! Points and rational self-maps of the projective plane.

mod analysis;
mod degseq;
mod family;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::poly::{
    parse_poly, Field, Fp, GcdField, Monomial, MultiPoly, PolyError, Rational, Ring,
};

pub use analysis::{
    base_points_on_curve, check_invariant, image_of_curve, jacobian_determinant,
    jacobian_factored, BasePoints, CurveImage, JacobianReport,
};
pub use degseq::{degree_sequence, Arithmetic, DegreeOptions, DegreeSequence, Method};
pub use family::{
    build_iota, build_jf, build_k, build_k_inverse, k_map, CurveCatalog, FamilyParams,
    GenericityFlags, ParamCurve,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("component {0} is not homogeneous")]
    NotHomogeneous(usize),
    #[error("components have different degrees")]
    DegreeMismatch,
    #[error("all components vanish identically")]
    ZeroMap,
    #[error("point {0} is indeterminate")]
    Indeterminate(String),
    #[error("all coordinates of a projective point are zero")]
    ZeroPoint,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("jacobian vanishes identically")]
    ZeroJacobian,
    #[error("curve parametrization is degenerate")]
    DegenerateCurve,
    #[error("curve lies in the base locus")]
    CurveInBaseLocus,
    #[error("term budget exceeded after {} completed iterate(s)", completed.len())]
    Budget { completed: Vec<u32> },
}

/// A point of the plane in canonical form: the first nonzero coordinate is 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProjPoint<K: Field = Rational> {
    coords: [K; 3],
}

impl<K: Field> ProjPoint<K> {
    pub fn new(coords: [K; 3]) -> Result<Self, MapError> {
        let lead = coords.iter().find(|c| !c.is_zero()).ok_or(MapError::ZeroPoint)?;
        let inv = lead.inverse().expect("nonzero");
        Ok(ProjPoint { coords: coords.map(|c| c.times(&inv)) })
    }

    pub fn coords(&self) -> &[K; 3] {
        &self.coords
    }
}

impl ProjPoint<Rational> {
    pub fn from_ints(x0: i64, x1: i64, x2: i64) -> Result<Self, MapError> {
        Self::new([x0, x1, x2].map(|v| Rational::from_integer(v.into())))
    }

    /// The point `[1 : x : y]`.
    pub fn affine(x: Rational, y: Rational) -> Self {
        ProjPoint { coords: [Rational::from_integer(1.into()), x, y] }
    }

    /// `(x1/x0, x2/x0)` when `x0 != 0`.
    pub fn to_affine(&self) -> Option<(Rational, Rational)> {
        let [x0, x1, x2] = &self.coords;
        if num_traits::Zero::is_zero(x0) {
            return None;
        }
        Some((x1 / x0, x2 / x0))
    }
}

impl<K: Field> fmt::Display for ProjPoint<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.coords;
        write!(f, "[{a} : {b} : {c}]")
    }
}

/// Named points of indeterminacy.
pub fn e1() -> ProjPoint {
    ProjPoint::from_ints(0, 1, 0).unwrap()
}

pub fn e2() -> ProjPoint {
    ProjPoint::from_ints(0, 0, 1).unwrap()
}

pub fn e01() -> ProjPoint {
    ProjPoint::from_ints(1, 1, 0).unwrap()
}

/// The gcd of homogeneous forms is
/// the rehomogenized gcd of their x0 = 1 restrictions times the common x0 power.
pub(crate) fn homogeneous_gcd<K: GcdField>(polys: &[MultiPoly<K>]) -> MultiPoly<K> {
    let nonzero: Vec<&MultiPoly<K>> = polys.iter().filter(|p| !p.is_zero()).collect();
    let ring = nonzero[0].ring().clone();
    let x0_power = nonzero
        .iter()
        .map(|p| p.lowest_order(0).expect("nonzero"))
        .min()
        .unwrap();
    let mut g: Option<MultiPoly<K>> = None;
    for p in &nonzero {
        let affine = p.eval_var(0, &ring.one());
        g = Some(match g {
            None => affine,
            Some(g) => K::gcd_nonzero(&g, &affine),
        });
        if g.as_ref().unwrap().is_constant() {
            break;
        }
    }
    let g = g.unwrap();
    let d = g.total_degree().unwrap_or(0);
    MultiPoly::from_terms(
        &ring,
        g.terms().iter().map(|(m, c)| (m.with_exponent(0, d - m.degree() + x0_power), c.clone())),
    )
}

/// A rational map of the plane given by three homogeneous forms of one degree,
/// kept with coprime components and one overall normalization.
#[derive(Clone, PartialEq, Eq)]
pub struct ProjMap<K: Field = Rational> {
    components: [MultiPoly<K>; 3],
    degree: u32,
    label: Option<String>,
}

impl<K: GcdField> ProjMap<K> {
    /// Validate and normalize: remove the common factor and scale the triple.
    pub fn new(components: [MultiPoly<K>; 3], label: Option<String>) -> Result<Self, MapError> {
        let raw = Self::unnormalized(components, label)?;
        Ok(raw.normalized())
    }

    /// Validate homogeneity only.
    pub fn unnormalized(
        components: [MultiPoly<K>; 3],
        label: Option<String>,
    ) -> Result<Self, MapError> {
        let mut degree = None;
        for (i, c) in components.iter().enumerate() {
            if c.ring().nvars() != 3 {
                return Err(PolyError::RingMismatch.into());
            }
            if c.is_zero() {
                continue;
            }
            if !c.is_homogeneous() {
                return Err(MapError::NotHomogeneous(i));
            }
            let d = c.total_degree().unwrap();
            match degree {
                None => degree = Some(d),
                Some(e) if e != d => return Err(MapError::DegreeMismatch),
                _ => {}
            }
        }
        let degree = degree.ok_or(MapError::ZeroMap)?;
        Ok(ProjMap { components, degree, label })
    }

    pub fn identity(ring: &Ring<K>) -> Self {
        let comps = [0, 1, 2].map(|i| MultiPoly::var(ring, i));
        ProjMap { components: comps, degree: 1, label: Some("identity".into()) }
    }

    /// Divide out the common factor and apply the joint scalar normalization.
    pub fn normalized(&self) -> Self {
        let g = homogeneous_gcd(&self.components);
        let comps: Vec<MultiPoly<K>> = if g.is_constant() {
            self.components.to_vec()
        } else {
            self.components
                .iter()
                .map(|c| c.div_exact(&g).expect("common factor divides"))
                .collect()
        };
        let mut coeffs: Vec<&K> = Vec::new();
        for c in &comps {
            coeffs.extend(c.terms().iter().map(|t| &t.1));
        }
        let s = K::normalizing_factor(&coeffs);
        let comps: Vec<MultiPoly<K>> = comps.iter().map(|c| c.scale(&s)).collect();
        let degree = comps.iter().find_map(|c| c.total_degree()).unwrap();
        ProjMap {
            components: [comps[0].clone(), comps[1].clone(), comps[2].clone()],
            degree,
            label: self.label.clone(),
        }
    }

    /// `self ∘ g`, normalized.
    pub fn compose(&self, g: &ProjMap<K>) -> Result<Self, MapError> {
        self.compose_raw(g)?.map(|m| m.normalized()).ok_or(MapError::ZeroMap)
    }

    /// `self ∘ g` before removing the common factor; `None` if it vanishes identically.
    pub fn compose_raw(&self, g: &ProjMap<K>) -> Result<Option<Self>, MapError> {
        let images = g.components.to_vec();
        let mut out = Vec::with_capacity(3);
        for c in &self.components {
            out.push(c.substitute(&images)?);
        }
        let comps = [out[0].clone(), out[1].clone(), out[2].clone()];
        if comps.iter().all(|c| c.is_zero()) {
            return Ok(None);
        }
        let label = match (&self.label, &g.label) {
            (Some(a), Some(b)) => Some(format!("{a} o {b}")),
            _ => None,
        };
        Ok(Some(Self::unnormalized(comps, label)?))
    }

    pub fn apply(&self, p: &ProjPoint<K>) -> Result<ProjPoint<K>, MapError> {
        let vals: Vec<K> =
            self.components.iter().map(|c| c.eval(p.coords())).collect::<Result<_, _>>()?;
        ProjPoint::new([vals[0].clone(), vals[1].clone(), vals[2].clone()])
            .map_err(|_| MapError::Indeterminate(p.to_string()))
    }

    pub fn is_identity(&self) -> bool {
        let n = self.normalized();
        let ring = self.components[0].ring();
        n.components == Self::identity(ring).components
    }
}

impl<K: Field> ProjMap<K> {
    pub fn components(&self) -> &[MultiPoly<K>; 3] {
        &self.components
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn ring(&self) -> &Ring<K> {
        self.components[0].ring()
    }

    /// Largest term count among the components.
    pub fn max_terms(&self) -> usize {
        self.components.iter().map(|c| c.nterms()).max().unwrap_or(0)
    }
}

impl ProjMap<Rational> {
    /// Reduce modulo `p`; fails if a denominator is divisible by `p`.
    pub fn to_prime_field(&self, p: u64) -> Result<ProjMap<Fp>, MapError> {
        let comps: Vec<MultiPoly<Fp>> =
            self.components.iter().map(|c| c.to_prime_field(p)).collect::<Result<_, _>>()?;
        ProjMap::new([comps[0].clone(), comps[1].clone(), comps[2].clone()], self.label.clone())
    }

    pub fn from_json(text: &str) -> Result<Self, MapError> {
        let repr: ProjMapRepr = serde_json::from_str(text)
            .map_err(|e| MapError::InvalidParams(format!("bad map JSON: {e}")))?;
        let ring = Ring::projective();
        let comps: Vec<MultiPoly<Rational>> = repr
            .components
            .iter()
            .map(|s| parse_poly(s, &ring))
            .collect::<Result<_, _>>()?;
        let m = ProjMap::new([comps[0].clone(), comps[1].clone(), comps[2].clone()], repr.label)?;
        if m.degree != repr.degree {
            return Err(MapError::DegreeMismatch);
        }
        Ok(m)
    }
}

#[derive(Serialize, Deserialize)]
struct ProjMapRepr {
    components: Vec<String>,
    degree: u32,
    label: Option<String>,
}

impl<K: Field> Serialize for ProjMap<K> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ProjMapRepr {
            components: self.components.iter().map(|c| c.to_string()).collect(),
            degree: self.degree,
            label: self.label.clone(),
        }
        .serialize(s)
    }
}

impl<K: Field> fmt::Debug for ProjMap<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProjMap(deg {}; [{} : {} : {}])", self.degree, self.components[0], self.components[1], self.components[2])
    }
}

impl<K: Field> fmt::Display for ProjMap<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} : {} : {}]", self.components[0], self.components[1], self.components[2])
    }
}

/// Monomial helper for the builders.
pub(crate) fn mono<K: Field>(ring: &Ring<K>, e: [u32; 3]) -> MultiPoly<K> {
    MultiPoly::monomial(ring, Monomial::from_exponents(&e), ring.one())
}
