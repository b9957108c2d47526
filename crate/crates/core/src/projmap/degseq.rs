//! Degrees of the iterates k^m.
//!
//! Two methods. `Symbolic` composes and normalizes the full maps. `LineProbe`
//! restricts to a random line first: for a line avoiding the finitely many base
//! points of k^m, the reduced restriction of k^m has the same degree, and each
//! step only composes k with three binary forms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::family::random_small_rational;
use super::{homogeneous_gcd, k_map, FamilyParams, MapError, ProjMap};
use crate::poly::{random_prime, GcdField, MultiPoly, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Arithmetic {
    Rational,
    /// A fixed prime, or a random one near 2^62 when `None`.
    PrimeField(Option<u64>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Symbolic,
    LineProbe,
}

#[derive(Clone, Debug)]
pub struct DegreeOptions {
    pub arithmetic: Arithmetic,
    pub method: Method,
    /// Abort once a component exceeds this many terms.
    pub term_budget: usize,
    pub seed: u64,
}

impl Default for DegreeOptions {
    fn default() -> Self {
        DegreeOptions {
            arithmetic: Arithmetic::PrimeField(None),
            method: Method::LineProbe,
            term_budget: 2_000_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeSequence {
    /// `degrees[m-1] = deg k^m`.
    pub degrees: Vec<u32>,
    pub primes: Vec<u64>,
    pub method: Method,
    pub warnings: Vec<String>,
}

pub fn degree_sequence(
    params: &FamilyParams,
    m_max: usize,
    opts: &DegreeOptions,
) -> Result<DegreeSequence, MapError> {
    if m_max == 0 {
        return Err(MapError::InvalidParams("m_max must be at least 1".into()));
    }
    let k = k_map(params);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    match opts.arithmetic {
        Arithmetic::Rational => {
            let degrees = run(&k, m_max, opts, &mut rng)?;
            Ok(DegreeSequence { degrees, primes: vec![], method: opts.method, warnings: vec![] })
        }
        Arithmetic::PrimeField(fixed) => {
            let p1 = fixed.unwrap_or_else(|| random_prime(&mut rng));
            let p2 = loop {
                let p = random_prime(&mut rng);
                if p != p1 {
                    break p;
                }
            };
            let first = run(&k.to_prime_field(p1)?, m_max, opts, &mut rng)?;
            let second = run(&k.to_prime_field(p2)?, m_max, opts, &mut rng)?;
            let mut warnings = Vec::new();
            let degrees = if first == second {
                first
            } else {
                warnings.push(format!(
                    "prime retry: sequences modulo {p1} and {p2} differ; taking the larger degrees"
                ));
                first.iter().zip(&second).map(|(a, b)| *a.max(b)).collect()
            };
            Ok(DegreeSequence { degrees, primes: vec![p1, p2], method: opts.method, warnings })
        }
    }
}

fn run<K: GcdField>(
    k: &ProjMap<K>,
    m_max: usize,
    opts: &DegreeOptions,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<u32>, MapError> {
    match opts.method {
        Method::Symbolic => symbolic(k, m_max, opts.term_budget),
        Method::LineProbe => line_probe(k, m_max, opts.term_budget, rng),
    }
}

fn symbolic<K: GcdField>(k: &ProjMap<K>, m_max: usize, budget: usize) -> Result<Vec<u32>, MapError> {
    let mut degrees = vec![k.degree()];
    let mut f = k.clone();
    while degrees.len() < m_max {
        if f.max_terms().saturating_mul(k.max_terms()) > budget.saturating_mul(64) {
            return Err(MapError::Budget { completed: degrees });
        }
        let raw = k.compose_raw(&f)?.ok_or(MapError::ZeroMap)?;
        if raw.max_terms() > budget {
            return Err(MapError::Budget { completed: degrees });
        }
        f = raw.normalized();
        degrees.push(f.degree());
    }
    Ok(degrees)
}

fn line_probe<K: GcdField>(
    k: &ProjMap<K>,
    m_max: usize,
    budget: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<u32>, MapError> {
    let line_ring = Ring::<K>::new(&["s", "t"], k.ring().ctx().clone());
    let s = MultiPoly::var(&line_ring, 0);
    let t = MultiPoly::var(&line_ring, 1);
    let mut coeff = || -> Result<K, MapError> { Ok(line_ring.from_rational(&random_small_rational(rng))?) };
    let mut curve = Vec::with_capacity(3);
    for _ in 0..3 {
        let (a, b) = (coeff()?, coeff()?);
        curve.push(&s.scale(&a) + &t.scale(&b));
    }
    let mut degrees = Vec::with_capacity(m_max);
    while degrees.len() < m_max {
        let mut next = Vec::with_capacity(3);
        for c in k.components() {
            next.push(c.substitute(&curve)?);
        }
        if next.iter().all(|p| p.is_zero()) {
            return Err(MapError::ZeroMap);
        }
        if next.iter().map(|p| p.nterms()).max().unwrap() > budget {
            return Err(MapError::Budget { completed: degrees });
        }
        let g = homogeneous_gcd(&next);
        if !g.is_constant() {
            for p in next.iter_mut().filter(|p| !p.is_zero()) {
                *p = p.div_exact(&g).expect("gcd divides");
            }
        }
        degrees.push(next.iter().find_map(|p| p.total_degree()).unwrap());
        curve = next;
    }
    Ok(degrees)
}
