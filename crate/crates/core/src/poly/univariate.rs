//! Dense univariate polynomials, coefficients stored from the constant term up.

use std::fmt;

use super::field::Field;
use super::multipoly::{MultiPoly, Ring};
use super::monomial::Monomial;

#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly<K: Field> {
    ctx: K::Ctx,
    coeffs: Vec<K>,
}

impl<K: Field> UniPoly<K> {
    pub fn new(ctx: &K::Ctx, mut coeffs: Vec<K>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        UniPoly { ctx: ctx.clone(), coeffs }
    }

    pub fn zero(ctx: &K::Ctx) -> Self {
        UniPoly { ctx: ctx.clone(), coeffs: Vec::new() }
    }

    pub fn constant(ctx: &K::Ctx, c: K) -> Self {
        Self::new(ctx, vec![c])
    }

    /// `x - a`
    pub fn linear_root(ctx: &K::Ctx, a: &K) -> Self {
        Self::new(ctx, vec![a.negated(), K::one(ctx)])
    }

    pub fn ctx(&self) -> &K::Ctx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&K> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> K {
        self.coeffs.get(i).cloned().unwrap_or_else(|| K::zero(&self.ctx))
    }

    pub fn eval(&self, x: &K) -> K {
        let mut acc = K::zero(&self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc.times(x).plus(c);
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(&self.ctx, (0..n).map(|i| self.coeff(i).plus(&other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(&self.ctx, (0..n).map(|i| self.coeff(i).minus(&other.coeff(i))).collect())
    }

    pub fn scale(&self, s: &K) -> Self {
        Self::new(&self.ctx, self.coeffs.iter().map(|c| c.times(s)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ctx);
        }
        let mut out = vec![K::zero(&self.ctx); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        Self::new(&self.ctx, out)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.inverse().expect("nonzero")),
        }
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = d.leading().unwrap().inverse().expect("nonzero");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(&self.ctx), self.clone());
        }
        let mut q = vec![K::zero(&self.ctx); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = r[i].times(&inv);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let k = i - dd + j;
                r[k] = r[k].minus(&c.times(dc));
            }
            q[i - dd] = c;
        }
        r.truncate(dd);
        (Self::new(&self.ctx, q), Self::new(&self.ctx, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            &self.ctx,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.times(&K::from_i64(&self.ctx, i as i64)))
                .collect(),
        )
    }

    /// Embed as a polynomial in variable `var` of a multivariate ring.
    pub fn to_multi(&self, ring: &Ring<K>, var: usize) -> MultiPoly<K> {
        MultiPoly::from_terms(
            ring,
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (Monomial::var(ring.nvars(), var, i as u32), c.clone())),
        )
    }

    /// Read a multivariate polynomial that only involves `var`.
    pub fn from_multi(p: &MultiPoly<K>, var: usize) -> Option<Self> {
        let ctx = p.ring().ctx().clone();
        let top = p.degree_in(var).unwrap_or(0) as usize;
        let mut coeffs = vec![K::zero(&ctx); top + 1];
        for (m, c) in p.terms() {
            if m.exponents().iter().enumerate().any(|(v, &e)| v != var && e > 0) {
                return None;
            }
            coeffs[m.exponent(var) as usize] = c.clone();
        }
        Some(Self::new(&ctx, coeffs))
    }
}

impl<K: Field> fmt::Debug for UniPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Fp;

    fn up(p: u64, cs: &[i64]) -> UniPoly<Fp> {
        UniPoly::new(&p, cs.iter().map(|&c| Fp::from_i64(&p, c)).collect())
    }

    #[test]
    fn gcd_of_products() {
        let p = 1_000_003;
        let a = up(p, &[-1, 1]).mul(&up(p, &[2, 0, 1]));
        let b = up(p, &[-1, 1]).mul(&up(p, &[5, 1]));
        assert_eq!(a.gcd(&b), up(p, &[-1, 1]));
    }

    #[test]
    fn division_identity() {
        let p = 101;
        let a = up(p, &[3, 0, 5, 7, 1]);
        let d = up(p, &[1, 2]);
        let (q, r) = a.div_rem(&d);
        assert_eq!(q.mul(&d).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 1);
    }
}
