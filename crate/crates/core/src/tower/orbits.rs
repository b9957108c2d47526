//! Forward orbits of the exceptional curves through the induced fiber maps.

use std::collections::HashMap;

use num_traits::Zero;
use serde::Serialize;

use super::{build_tower, image_of_fiber, induced_fiber_map, ChartAtlas, Family, FiberImage, TowerError};
use crate::poly::{format_rational, Rational};
use crate::projmap::{build_k, build_k_inverse, e01, e2, FamilyParams, GenericityFlags, ProjMap, ProjPoint};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitStep {
    pub step: u32,
    /// A fiber or catalogued curve name.
    pub location: String,
    /// The chart coordinate on that fiber or curve.
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Collision {
    pub step: u32,
    pub point: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveOrbit {
    /// Exceptional curves sharing this orbit.
    pub curves: Vec<String>,
    pub steps: Vec<OrbitStep>,
    pub collision: Option<Collision>,
    /// Why tracking stopped before the horizon without a collision.
    pub stopped: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    pub family: Family,
    pub horizon: u32,
    /// Points of indeterminacy of the induced map.
    pub indeterminacy: Vec<String>,
    pub orbits: Vec<CurveOrbit>,
}

impl OrbitReport {
    pub fn first_collision(&self) -> Option<&Collision> {
        self.orbits.iter().filter_map(|o| o.collision.as_ref()).min_by_key(|c| c.step)
    }

    pub fn orbit_of(&self, curve: &str) -> Option<&CurveOrbit> {
        self.orbits.iter().find(|o| o.curves.iter().any(|c| c == curve))
    }
}

pub fn genericity_report(params: &FamilyParams, horizon: u32) -> GenericityFlags {
    params.genericity(horizon)
}

struct Tracker<'a> {
    atlas: &'a ChartAtlas,
    k: &'a ProjMap,
    cache: HashMap<String, FiberImage>,
    /// Plane points and fiber points the induced map is undefined at.
    plane_bad: Vec<(ProjPoint, &'static str)>,
    fiber_bad: Vec<(String, Rational)>,
}

enum Next {
    At(String, Rational),
    Hit(String),
    Stop(String),
}

impl<'a> Tracker<'a> {
    fn transition(&mut self, name: &str) -> Result<FiberImage, TowerError> {
        if let Some(t) = self.cache.get(name) {
            return Ok(t.clone());
        }
        let chart = self.atlas.chart(name)?;
        let t = image_of_fiber(Some(self.k), self.atlas, chart)?;
        self.cache.insert(name.to_string(), t.clone());
        Ok(t)
    }

    /// Locate a plane point on one of the catalogued curves.
    fn locate(&self, p: &ProjPoint) -> Next {
        for (bad, name) in &self.plane_bad {
            if bad == p {
                return Next::Hit(name.to_string());
            }
        }
        for c in &self.atlas.curves {
            let ev = |f: &crate::poly::MultiPoly<Rational>| f.eval(p.coords()).expect("three coordinates");
            let (tn, td) = (ev(&c.inverse[0].num), ev(&c.inverse[0].den));
            let (en, ed) = (ev(&c.inverse[1].num), ev(&c.inverse[1].den));
            if tn.is_zero() && !td.is_zero() && !ed.is_zero() {
                return Next::At(c.name.clone(), en / ed);
            }
        }
        Next::Stop(format!("{p} is off the exceptional locus"))
    }

    fn check(&self, loc: &str, v: &Rational) -> Option<String> {
        self.fiber_bad
            .iter()
            .find(|(f, b)| f == loc && b == v)
            .map(|(f, b)| format!("{} in {}", format_rational(b), f))
    }

    fn step(&mut self, loc: &str, v: &Rational) -> Result<Next, TowerError> {
        Ok(match self.transition(loc)? {
            FiberImage::Fiber(m) => match m.eval(v) {
                Some(w) => Next::At(m.target.clone(), w),
                None => Next::Stop(format!("{} leaves the chart of {}", format_rational(v), m.target)),
            },
            FiberImage::Plane(pi) => match pi.at(v) {
                Some(p) => self.locate(&p),
                None => Next::Stop(format!("{} maps to a base point", format_rational(v))),
            },
        })
    }

    fn run(&mut self, curves: Vec<String>, first: Next, horizon: u32) -> Result<CurveOrbit, TowerError> {
        let mut orbit = CurveOrbit { curves, steps: vec![], collision: None, stopped: None };
        let mut next = first;
        for step in 1..=horizon {
            match next {
                Next::Hit(point) => {
                    orbit.collision = Some(Collision { step, point });
                    return Ok(orbit);
                }
                Next::Stop(why) => {
                    orbit.stopped = Some(why);
                    return Ok(orbit);
                }
                Next::At(loc, v) => {
                    orbit.steps.push(OrbitStep { step, location: loc.clone(), value: format_rational(&v) });
                    if let Some(point) = self.check(&loc, &v) {
                        orbit.collision = Some(Collision { step, point });
                        return Ok(orbit);
                    }
                    next = self.step(&loc, &v)?;
                }
            }
        }
        Ok(orbit)
    }
}

/// Orbits of C1, C2, the contracted P_j and C4 under the induced map on the
/// X (even n) or Y (odd n) tower, up to `horizon` steps.
pub fn exceptional_orbit_report(params: &FamilyParams, horizon: u32) -> Result<OrbitReport, TowerError> {
    let family = Family::by_parity(params);
    let atlas = build_tower(params, family)?;
    let k = build_k(params)?;
    let ki = build_k_inverse(params)?;
    let n = params.n();
    let landing = if family == Family::X { format!("P{}", n - 1) } else { format!("P{n}") };
    let mut fiber_bad = Vec::new();
    let m = induced_fiber_map(Some(&ki), atlas.chart("C1")?, atlas.chart(&landing)?)?;
    if let Some(v) = m.constant() {
        fiber_bad.push((landing.clone(), v));
    }
    let mut indeterminacy = vec!["e2 = [0 : 0 : 1]".to_string(), "e01 = [1 : 1 : 0]".to_string()];
    indeterminacy.extend(fiber_bad.iter().map(|(f, v)| format!("{} in {}", format_rational(v), f)));
    let mut t = Tracker {
        atlas: &atlas,
        k: &k,
        cache: HashMap::new(),
        plane_bad: vec![(e2(), "e2"), (e01(), "e01")],
        fiber_bad,
    };

    let contracted = if family == Family::X { n.saturating_sub(1) } else { n.saturating_sub(2) };
    let mut sources: Vec<String> = vec!["C1".into(), "C2".into()];
    sources.extend((1..contracted).map(|j| format!("P{j}")));
    sources.push("C4".into());

    // group sources by their first image
    let mut groups: Vec<(String, Rational, Vec<String>)> = Vec::new();
    let mut orbits = Vec::new();
    for s in sources {
        let first = match t.transition(&s)? {
            FiberImage::Fiber(m) if m.is_constant() => Next::At(m.target.clone(), m.constant().unwrap()),
            FiberImage::Plane(pi) => match pi.point() {
                Some(p) => t.locate(&p),
                None => continue,
            },
            FiberImage::Fiber(_) => continue,
        };
        match first {
            Next::At(loc, v) => match groups.iter_mut().find(|(l, w, _)| *l == loc && *w == v) {
                Some(g) => g.2.push(s),
                None => groups.push((loc, v, vec![s])),
            },
            other => orbits.push(t.run(vec![s], other, horizon)?),
        }
    }
    for (loc, v, curves) in groups {
        orbits.push(t.run(curves, Next::At(loc, v), horizon)?);
    }
    Ok(OrbitReport { family, horizon, indeterminacy, orbits })
}
