//! Iterated blowups over the plane: chart atlases for the three families, and
//! the maps the birational map induces on exceptional fibers.
//!
//! Every chart is a pair `(u, eta)` with the fiber at `u = 0`. The forward
//! parametrization is a triple of polynomials in `(u, eta)`; the inverse gives
//! `u` and `eta` as ratios of homogeneous forms of equal degree.

mod limits;
mod orbits;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::json;

use crate::poly::{format_rational, MultiPoly, PolyError, Rational, Ring};
use crate::projmap::{FamilyParams, MapError};

pub use limits::{
    fiber_limit, image_in_plane, image_of_fiber, induced_fiber_map, order_of_vanishing, FiberImage,
    MoebiusMap, PlaneImage,
};
pub use orbits::{
    exceptional_orbit_report, genericity_report, Collision, CurveOrbit, OrbitReport, OrbitStep,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TowerError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("family {family} requires {need}")]
    Family { family: Family, need: &'static str },
    #[error("no chart named {0}")]
    UnknownChart(String),
    #[error("pullback vanishes identically on chart {0}")]
    ZeroPullback(String),
    #[error(
        "limit from {src} into {dst} is undefined \
         (transversal order {transversal}, fiber order {fiber})"
    )]
    LimitUndefined { src: String, dst: String, transversal: i64, fiber: i64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    /// Even `n`: blow up e1, q, p_1, ..., p_{n-1}.
    X,
    /// Odd `n`: additionally p_n.
    Y,
    /// The cubic family: additionally e2, e01, p4, p5, p6, r.
    Z,
}

impl Family {
    /// X or Y by the parity of `n`.
    pub fn by_parity(params: &FamilyParams) -> Family {
        if params.n() % 2 == 0 {
            Family::X
        } else {
            Family::Y
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::X => "X",
            Family::Y => "Y",
            Family::Z => "Z",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChartKind {
    /// `u = 0` is an exceptional fiber.
    Fiber,
    /// `u = 0` is a curve of the plane, `eta` a coordinate along it.
    Curve,
}

/// A ratio of two homogeneous forms in `x0, x1, x2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coordinate {
    pub num: MultiPoly<Rational>,
    pub den: MultiPoly<Rational>,
}

impl Coordinate {
    fn new(num: MultiPoly<Rational>, den: MultiPoly<Rational>) -> Self {
        Coordinate { num, den }
    }

    /// `self - c`
    fn shifted(&self, c: &Rational) -> Self {
        Coordinate::new(&self.num - &self.den.scale(c), self.den.clone())
    }

    /// `self / other`
    fn over(&self, other: &Coordinate) -> Self {
        Coordinate::new(&self.num * &other.den, &self.den * &other.num)
    }

    /// Numerator and denominator evaluated on a triple of forms.
    pub fn pull(
        &self,
        point: &[MultiPoly<Rational>; 3],
    ) -> Result<(MultiPoly<Rational>, MultiPoly<Rational>), PolyError> {
        Ok((self.num.substitute(point)?, self.den.substitute(point)?))
    }
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[derive(Clone, Debug)]
pub struct Chart {
    pub name: String,
    pub kind: ChartKind,
    /// Where the fiber sits, in words.
    pub center: String,
    /// `[x0, x1, x2]` as polynomials in `(u, eta)`.
    pub forward: [MultiPoly<Rational>; 3],
    /// `[u, eta]` in terms of `x0, x1, x2`.
    pub inverse: [Coordinate; 2],
    /// The inverse before re-centering, and the centers `c` applied in turn
    /// (`eta <- (eta - c)/u`). Limits are taken through this chain.
    pub(crate) base_inverse: [Coordinate; 2],
    pub(crate) shifts: Vec<Rational>,
}

impl Chart {
    pub fn ring() -> Ring<Rational> {
        Ring::rational(&["u", "eta"])
    }

    /// Blow up the fiber point `eta = c`: substitute `eta = c + u eta'`.
    pub fn recentered(&self, name: &str, c: &Rational, center: String) -> Chart {
        let r = Chart::ring();
        let u = MultiPoly::var(&r, 0);
        let eta = &MultiPoly::constant(&r, c.clone()) + &(&u * &MultiPoly::var(&r, 1));
        let images = [u, eta];
        let forward = self.forward.clone().map(|p| p.substitute(&images).expect("two variables"));
        let inverse = [
            self.inverse[0].clone(),
            self.inverse[1].shifted(c).over(&self.inverse[0]),
        ];
        let mut shifts = self.shifts.clone();
        shifts.push(c.clone());
        Chart {
            name: name.to_string(),
            kind: ChartKind::Fiber,
            center,
            forward,
            inverse,
            base_inverse: self.base_inverse.clone(),
            shifts,
        }
    }

    /// Inverse after forward is the identity on `(u, eta)`.
    pub fn round_trip(&self) -> Result<bool, PolyError> {
        let r = Chart::ring();
        for (i, coord) in self.inverse.iter().enumerate() {
            let (n, d) = coord.pull(&self.forward)?;
            if d.is_zero() || n != &MultiPoly::var(&r, i) * &d {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The forward image of `u = 0` is a single plane point.
    pub fn fiber_is_point(&self) -> bool {
        let at0 = self.forward.clone().map(|p| p.eval_var(0, &Rational::zero()));
        let base = match at0.iter().find(|p| !p.is_zero()) {
            Some(b) => b.clone(),
            None => return false,
        };
        let lb = base.leading_coeff();
        at0.iter().all(|p| (&p.scale(&lb) - &base.scale(&p.leading_coeff())).is_zero())
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "name": self.name,
            "kind": self.kind,
            "center": self.center,
            "forward": self.forward.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "inverse": {
                "u": self.inverse[0].to_string(),
                "eta": self.inverse[1].to_string(),
            },
        })
    }
}

#[derive(Clone, Debug)]
pub struct ChartAtlas {
    pub family: Family,
    pub params: FamilyParams,
    /// Fiber charts in Picard-basis order.
    pub charts: Vec<Chart>,
    /// Fiber names in the order their centers are blown up.
    pub blowup_order: Vec<String>,
    /// Transversal charts along C1, C2, C3, C4.
    pub curves: Vec<Chart>,
}

impl ChartAtlas {
    pub fn chart(&self, name: &str) -> Result<&Chart, TowerError> {
        self.charts
            .iter()
            .chain(&self.curves)
            .find(|c| c.name == name)
            .ok_or_else(|| TowerError::UnknownChart(name.to_string()))
    }

    pub fn fiber_names(&self) -> Vec<&str> {
        self.charts.iter().map(|c| c.name.as_str()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "family": self.family,
            "params": self.params.coeff_strings(),
            "blowup_order": self.blowup_order,
            "centers": self.charts.iter().map(|c| json!({"fiber": c.name, "center": c.center})).collect::<Vec<_>>(),
            "charts": self.charts.iter().map(Chart::to_json).collect::<Vec<_>>(),
            "curves": self.curves.iter().map(Chart::to_json).collect::<Vec<_>>(),
        })
    }
}

fn q(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

struct Builder {
    r: Ring<Rational>,
    x: Ring<Rational>,
}

impl Builder {
    fn new() -> Self {
        Builder { r: Chart::ring(), x: Ring::projective() }
    }

    fn u(&self, e: u32) -> MultiPoly<Rational> {
        MultiPoly::var(&self.r, 0).pow(e)
    }

    fn eta(&self) -> MultiPoly<Rational> {
        MultiPoly::var(&self.r, 1)
    }

    fn c(&self, v: i64) -> MultiPoly<Rational> {
        MultiPoly::from_i64(&self.r, v)
    }

    fn x(&self, i: usize) -> MultiPoly<Rational> {
        MultiPoly::var(&self.x, i)
    }

    fn xm(&self, e: [u32; 3]) -> MultiPoly<Rational> {
        (0..3).fold(MultiPoly::one(&self.x), |acc, i| &acc * &self.x(i).pow(e[i]))
    }

    fn ratio(&self, num: MultiPoly<Rational>, den: MultiPoly<Rational>) -> Coordinate {
        Coordinate::new(num, den)
    }

    fn chart(
        &self,
        name: &str,
        kind: ChartKind,
        center: &str,
        forward: [MultiPoly<Rational>; 3],
        inverse: [Coordinate; 2],
    ) -> Chart {
        Chart {
            name: name.to_string(),
            kind,
            center: center.to_string(),
            forward,
            base_inverse: inverse.clone(),
            inverse,
            shifts: Vec::new(),
        }
    }

    /// `(t, y) = (u^{j+1} eta, u^j eta)`, `(u, eta) = (t/y, y^{j+1}/t^j)`.
    /// For `j = 0` this is a coordinate system along C1.
    fn p_chart(&self, j: u32) -> Chart {
        let center = match j {
            0 => "C1 (x0 = 0), coordinate x2/x1".to_string(),
            1 => "p1 = E1 meets C1".to_string(),
            _ => format!("p{j} = E1 meets P{}", j - 1),
        };
        self.chart(
            &format!("P{j}"),
            ChartKind::Fiber,
            &center,
            [&self.u(j + 1) * &self.eta(), self.c(1), &self.u(j) * &self.eta()],
            [
                self.ratio(self.x(0), self.x(2)),
                self.ratio(self.xm([0, 0, j + 1]), self.xm([j, 1, 0])),
            ],
        )
    }

    fn e1(&self) -> Chart {
        self.chart(
            "E1",
            ChartKind::Fiber,
            "e1 = [0:1:0]",
            [&self.u(1) * &self.eta(), self.c(1), self.u(1)],
            [self.ratio(self.x(2), self.x(1)), self.ratio(self.x(0), self.x(2))],
        )
    }

    /// Chart near the direction `y/t = -1` of E1, where C4 crosses it.
    fn q(&self) -> Chart {
        let along_t = self.chart(
            "E1t",
            ChartKind::Fiber,
            "",
            [self.u(1), self.c(1), &self.u(1) * &self.eta()],
            [self.ratio(self.x(0), self.x(1)), self.ratio(self.x(2), self.x(0))],
        );
        along_t.recentered("Q", &q(-1), "q = E1 meets C4 (direction y/t = -1)".to_string())
    }

    fn e2(&self) -> Chart {
        self.chart(
            "E2",
            ChartKind::Fiber,
            "e2 = [0:0:1]",
            [self.u(1), &self.u(1) * &self.eta(), self.c(1)],
            [self.ratio(self.x(0), self.x(2)), self.ratio(self.x(1), self.x(0))],
        )
    }

    fn e01(&self) -> Chart {
        self.chart(
            "E01",
            ChartKind::Fiber,
            "e01 = [1:1:0]",
            [self.c(1), &self.c(1) + &(&self.u(1) * &self.eta()), self.u(1)],
            [
                self.ratio(self.x(2), self.x(0)),
                self.ratio(&self.x(1) - &self.x(0), self.x(2)),
            ],
        )
    }

    fn curves(&self) -> Vec<Chart> {
        let (u, eta, one) = (self.u(1), self.eta(), self.c(1));
        let c4_inv = &(&self.xm([0, 1, 1]) - &self.xm([2, 0, 0])) + &self.xm([1, 1, 0]);
        vec![
            self.chart(
                "C1",
                ChartKind::Curve,
                "x0 = 0",
                [u.clone(), eta.clone(), one.clone()],
                [self.ratio(self.x(0), self.x(2)), self.ratio(self.x(1), self.x(2))],
            ),
            self.chart(
                "C2",
                ChartKind::Curve,
                "x0 = x1",
                [one.clone(), &one + &u, eta.clone()],
                [
                    self.ratio(&self.x(1) - &self.x(0), self.x(0)),
                    self.ratio(self.x(2), self.x(0)),
                ],
            ),
            self.chart(
                "C3",
                ChartKind::Curve,
                "x2 = 0",
                [one.clone(), eta.clone(), u.clone()],
                [self.ratio(self.x(2), self.x(0)), self.ratio(self.x(1), self.x(0))],
            ),
            self.chart(
                "C4",
                ChartKind::Curve,
                "x0^2 - x0 x1 - x1 x2 = 0",
                [eta.clone(), one, &(&eta.pow(2) - &eta) + &u],
                [self.ratio(c4_inv, self.xm([0, 2, 0])), self.ratio(self.x(0), self.x(1))],
            ),
        ]
    }
}

pub fn build_tower(params: &FamilyParams, family: Family) -> Result<ChartAtlas, TowerError> {
    let n = params.n() as u32;
    match family {
        Family::X if n < 2 || n % 2 == 1 => {
            return Err(TowerError::Family { family, need: "even n >= 2" })
        }
        Family::Y if n % 2 == 0 => return Err(TowerError::Family { family, need: "odd n" }),
        Family::Z if params.cubic_parameters().is_none() => {
            return Err(TowerError::Family { family, need: "F = a y^3 + a y^2 + b y + 2, a != 0" })
        }
        _ => {}
    }
    let b = Builder::new();
    let mut charts = vec![b.e1(), b.q()];
    for j in 1..n {
        charts.push(b.p_chart(j));
    }
    if family != Family::X {
        let base = b.p_chart(n - 1);
        let c = Rational::one() / params.leading();
        let center = format!("p{n} = {} in P{}", format_rational(&c), n - 1);
        charts.push(base.recentered(&format!("P{n}"), &c, center));
    }
    let mut blowup_order: Vec<String> = charts.iter().map(|c| c.name.clone()).collect();
    if family == Family::Y && n == 1 {
        // P1 is contracted onto e2, which k blows up onto C2'
        charts.push(b.e2());
        blowup_order.push("E2".to_string());
    }
    if family == Family::Z {
        let (a, bb) = params.cubic_parameters().expect("checked above");
        let centers = [
            -(Rational::one() / &a),
            (&a - &bb) / (&a * &a),
            (q(2) * &bb - q(2) - &a) / (&a * &a),
        ];
        let mut prev = charts.last().expect("P3").clone();
        let mut extra = Vec::new();
        for (i, c) in centers.iter().enumerate() {
            let name = format!("P{}", 4 + i);
            let center = format!("p{} = {} in {}", 4 + i, format_rational(c), prev.name);
            prev = prev.recentered(&name, c, center);
            extra.push(prev.clone());
        }
        charts.extend(extra);
        let e2 = b.e2();
        let r = e2.recentered("R", &Rational::zero(), "r = 0 in E2 (on x1 = 0)".to_string());
        charts.push(e2);
        charts.push(b.e01());
        charts.push(r);
        blowup_order.extend(
            ["E2", "E01", "P4", "P5", "P6", "R"].iter().map(|s| s.to_string()),
        );
    }
    Ok(ChartAtlas { family, params: params.clone(), charts, blowup_order, curves: b.curves() })
}
