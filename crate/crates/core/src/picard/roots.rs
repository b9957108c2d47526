//! Real-root isolation by Sturm sequences on exact rationals, and numeric
//! root magnitudes for the eigenvalue checks.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::linalg::IntPoly;
use crate::poly::{Rational, UniPoly};

pub fn to_uni(p: &IntPoly) -> UniPoly<Rational> {
    UniPoly::new(&(), p.iter().map(|c| Rational::from_integer(c.clone())).collect())
}

/// `p / gcd(p, p')`, monic.
pub fn squarefree(p: &UniPoly<Rational>) -> UniPoly<Rational> {
    let g = p.gcd(&p.derivative());
    if g.degree().unwrap_or(0) == 0 {
        p.monic()
    } else {
        p.div_rem(&g).0.monic()
    }
}

fn sturm_chain(p: &UniPoly<Rational>) -> Vec<UniPoly<Rational>> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        let r = chain[n - 2].rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(r.scale(&-Rational::one()));
    }
    chain
}

fn sign_changes(chain: &[UniPoly<Rational>], x: &Rational) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for q in chain {
        let v = q.eval(x);
        let s = if v.is_positive() { 1 } else if v.is_negative() { -1 } else { 0 };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

fn cauchy_bound(p: &UniPoly<Rational>) -> Rational {
    let lc = p.leading().expect("nonzero").abs();
    let d = p.degree().unwrap_or(0);
    let m = (0..d).map(|i| p.coeff(i).abs() / &lc).max().unwrap_or_else(Rational::zero);
    m + Rational::one()
}

/// Largest positive root of a squarefree `p`, to within `tol`.
fn largest_positive_root(p: &UniPoly<Rational>, tol: &Rational) -> Option<Rational> {
    let chain = sturm_chain(p);
    let mut hi = cauchy_bound(p);
    let zero = Rational::zero();
    let at_hi = sign_changes(&chain, &hi);
    if sign_changes(&chain, &zero) == at_hi {
        return None;
    }
    let mut lo = zero;
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) / Rational::from_integer(BigInt::from(2));
        if sign_changes(&chain, &mid) > at_hi {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some((lo + hi) / Rational::from_integer(BigInt::from(2)))
}

/// Largest magnitude of a real root of `p` (0 when `p` has none).
pub fn largest_real_root_magnitude(p: &IntPoly, tol: f64) -> f64 {
    let u = to_uni(p);
    assert!(u.degree().unwrap_or(0) > 0, "constant polynomial");
    let s = squarefree(&u);
    let tol = Rational::from_float(tol.max(1e-300)).expect("finite tolerance");
    let flipped = UniPoly::new(
        &(),
        s.coeffs().iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() }).collect(),
    );
    let pos = largest_positive_root(&s, &tol);
    let neg = largest_positive_root(&flipped, &tol);
    [pos, neg].into_iter().flatten().map(|r| r.to_f64().unwrap_or(f64::INFINITY)).fold(0.0, f64::max)
}

/// Magnitudes of all complex roots of the squarefree part, by Durand-Kerner.
pub fn root_magnitudes(p: &IntPoly) -> Vec<f64> {
    let s = squarefree(&to_uni(p));
    let d = s.degree().unwrap_or(0);
    if d == 0 {
        return vec![];
    }
    let c: Vec<Complex64> = s.coeffs().iter().map(|x| Complex64::new(x.to_f64().unwrap(), 0.0)).collect();
    let eval = |z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..d).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..d {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..d {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    z.iter().map(|w| w.norm()).collect()
}
