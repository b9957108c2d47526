//! Sparse multivariate polynomials in canonical graded-lex form.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rustc_hash::FxHashMap;

use super::field::{Field, Fp, Rational};
use super::monomial::Monomial;
use super::PolyError;

/// Ordered variable names plus coefficient context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring<K: Field> {
    vars: Arc<Vec<String>>,
    ctx: K::Ctx,
}

impl<K: Field> Ring<K> {
    pub fn new<S: AsRef<str>>(vars: &[S], ctx: K::Ctx) -> Self {
        Ring { vars: Arc::new(vars.iter().map(|v| v.as_ref().to_string()).collect()), ctx }
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn ctx(&self) -> &K::Ctx {
        &self.ctx
    }

    pub fn zero(&self) -> K {
        K::zero(&self.ctx)
    }

    pub fn one(&self) -> K {
        K::one(&self.ctx)
    }

    pub fn from_i64(&self, v: i64) -> K {
        K::from_i64(&self.ctx, v)
    }

    pub fn from_rational(&self, q: &Rational) -> Result<K, PolyError> {
        K::from_rational(&self.ctx, q)
    }

    /// Same variables over a different coefficient field.
    pub fn with_field<L: Field>(&self, ctx: L::Ctx) -> Ring<L> {
        Ring { vars: self.vars.clone(), ctx }
    }
}

impl Ring<Rational> {
    pub fn rational<S: AsRef<str>>(vars: &[S]) -> Self {
        Ring::new(vars, ())
    }

    /// The projective plane ring `Q[x0, x1, x2]`.
    pub fn projective() -> Self {
        Ring::rational(&["x0", "x1", "x2"])
    }
}

impl Ring<Fp> {
    pub fn prime_field<S: AsRef<str>>(vars: &[S], p: u64) -> Self {
        Ring::new(vars, p)
    }
}

/// A polynomial with no stored zero coefficients, terms sorted by
/// descending graded lex order.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly<K: Field> {
    ring: Ring<K>,
    terms: Vec<(Monomial, K)>,
}

impl<K: Field> MultiPoly<K> {
    pub fn zero(ring: &Ring<K>) -> Self {
        MultiPoly { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn one(ring: &Ring<K>) -> Self {
        Self::constant(ring, ring.one())
    }

    pub fn constant(ring: &Ring<K>, c: K) -> Self {
        if c.is_zero() {
            return Self::zero(ring);
        }
        MultiPoly { ring: ring.clone(), terms: vec![(Monomial::one(ring.nvars()), c)] }
    }

    pub fn from_i64(ring: &Ring<K>, c: i64) -> Self {
        Self::constant(ring, ring.from_i64(c))
    }

    pub fn var(ring: &Ring<K>, i: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.nvars(), i, 1), ring.one())
    }

    pub fn monomial(ring: &Ring<K>, m: Monomial, c: K) -> Self {
        assert_eq!(m.nvars(), ring.nvars(), "monomial arity");
        if c.is_zero() {
            return Self::zero(ring);
        }
        MultiPoly { ring: ring.clone(), terms: vec![(m, c)] }
    }

    /// Build from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms(ring: &Ring<K>, terms: impl IntoIterator<Item = (Monomial, K)>) -> Self {
        let mut acc: FxHashMap<Monomial, K> = FxHashMap::default();
        for (m, c) in terms {
            assert_eq!(m.nvars(), ring.nvars(), "monomial arity");
            match acc.get_mut(&m) {
                Some(e) => *e = e.plus(&c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Self::from_map(ring, acc)
    }

    fn from_map(ring: &Ring<K>, acc: FxHashMap<Monomial, K>) -> Self {
        let mut terms: Vec<(Monomial, K)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MultiPoly { ring: ring.clone(), terms }
    }

    /// Terms must already be sorted descending with no duplicates or zeros.
    pub(crate) fn from_sorted_terms(ring: &Ring<K>, terms: Vec<(Monomial, K)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        MultiPoly { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Ring<K> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, K)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, K)> {
        self.terms
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && !self.is_zero() && self.terms[0].1.is_one()
    }

    /// The constant coefficient (zero if absent).
    pub fn constant_term(&self) -> K {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => self.ring.zero(),
        }
    }

    pub fn leading_term(&self) -> Option<&(Monomial, K)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> K {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(|| self.ring.zero())
    }

    pub fn coeff(&self, m: &Monomial) -> K {
        match self.terms.binary_search_by(|t| m.cmp(&t.0)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => self.ring.zero(),
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|t| t.0.degree())
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => {
                let d = m.degree();
                self.terms.iter().all(|(m, _)| m.degree() == d)
            }
        }
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.exponent(var)).max()
    }

    /// Minimal exponent of `var` over all terms.
    pub fn lowest_order(&self, var: usize) -> Result<u32, PolyError> {
        self.terms
            .iter()
            .map(|(m, _)| m.exponent(var))
            .min()
            .ok_or(PolyError::ZeroPolynomial("lowest_order"))
    }

    /// Monomial gcd of all terms.
    pub fn monomial_content(&self) -> Option<Monomial> {
        let mut it = self.terms.iter();
        let first = it.next()?.0.clone();
        Some(it.fold(first, |acc, (m, _)| acc.gcd(m)))
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exponent(var) > 0)
    }

    fn check_ring(&self, other: &Self) {
        assert!(self.ring == other.ring, "polynomials from different rings");
    }

    pub fn add_poly(&self, other: &Self) -> Self {
        self.check_ring(other);
        self.merge(other, false)
    }

    pub fn sub_poly(&self, other: &Self) -> Self {
        self.check_ring(other);
        self.merge(other, true)
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { b[j].1.negated() } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { a[i].1.minus(&b[j].1) } else { a[i].1.plus(&b[j].1) };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for (m, c) in &b[j..] {
            out.push((m.clone(), if negate { c.negated() } else { c.clone() }));
        }
        MultiPoly { ring: self.ring.clone(), terms: out }
    }

    pub fn neg_poly(&self) -> Self {
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.negated())).collect(),
        }
    }

    pub fn scale(&self, s: &K) -> Self {
        if s.is_zero() {
            return Self::zero(&self.ring);
        }
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.times(s))).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(n, d)| (n.mul(m), d.times(c))).collect(),
        }
    }

    pub fn mul_poly(&self, other: &Self) -> Self {
        self.check_ring(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ring);
        }
        let (small, big) =
            if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        if small.terms.len() == 1 {
            let (m, c) = &small.terms[0];
            return big.mul_monomial(m, c);
        }
        let mut acc: FxHashMap<Monomial, K> =
            FxHashMap::with_capacity_and_hasher(big.terms.len() * 2, Default::default());
        for (ms, cs) in &small.terms {
            for (mb, cb) in &big.terms {
                let m = ms.mul(mb);
                let p = cs.times(cb);
                match acc.get_mut(&m) {
                    Some(e) => *e = e.plus(&p),
                    None => {
                        acc.insert(m, p);
                    }
                }
            }
        }
        Self::from_map(&self.ring, acc)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_poly(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_poly(&base);
            }
        }
        acc
    }

    pub fn eval(&self, point: &[K]) -> Result<K, PolyError> {
        if point.len() != self.ring.nvars() {
            return Err(PolyError::Arity { expected: self.ring.nvars(), got: point.len() });
        }
        let powers = self.power_table(point);
        let mut acc = self.ring.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = t.times(&powers[v][e as usize]);
                }
            }
            acc = acc.plus(&t);
        }
        Ok(acc)
    }

    fn power_table(&self, point: &[K]) -> Vec<Vec<K>> {
        (0..self.ring.nvars())
            .map(|v| {
                let top = self.degree_in(v).unwrap_or(0) as usize;
                let mut row = Vec::with_capacity(top + 1);
                row.push(self.ring.one());
                for i in 1..=top {
                    let next = row[i - 1].times(&point[v]);
                    row.push(next);
                }
                row
            })
            .collect()
    }

    /// Substitute the value `val` for variable `var`; the variable stays in the ring.
    pub fn eval_var(&self, var: usize, val: &K) -> Self {
        let top = self.degree_in(var).unwrap_or(0) as usize;
        let mut pw = Vec::with_capacity(top + 1);
        pw.push(self.ring.one());
        for i in 1..=top {
            let next = pw[i - 1].times(val);
            pw.push(next);
        }
        Self::from_terms(
            &self.ring,
            self.terms.iter().map(|(m, c)| {
                let e = m.exponent(var) as usize;
                (m.with_exponent(var, 0), c.times(&pw[e]))
            }),
        )
    }

    /// Compose: replace variable `i` by `images[i]`, all living in `target`.
    pub fn substitute(&self, images: &[MultiPoly<K>]) -> Result<MultiPoly<K>, PolyError> {
        if images.len() != self.ring.nvars() {
            return Err(PolyError::Arity { expected: self.ring.nvars(), got: images.len() });
        }
        let target = match images.first() {
            Some(p) => p.ring.clone(),
            None => return Ok(self.clone()),
        };
        if images.iter().any(|p| p.ring != target) {
            return Err(PolyError::RingMismatch);
        }
        let mut powers: Vec<Vec<MultiPoly<K>>> = Vec::with_capacity(images.len());
        for (v, img) in images.iter().enumerate() {
            let top = self.degree_in(v).unwrap_or(0) as usize;
            let mut row = vec![MultiPoly::one(&target)];
            for i in 1..=top {
                let next = row[i - 1].mul_poly(img);
                row.push(next);
            }
            powers.push(row);
        }
        // Horner-free: accumulate per-term products, sharing prefixes over the
        // first variables in a cache keyed by the exponent prefix.
        let mut prefix_cache: FxHashMap<Vec<u32>, MultiPoly<K>> = FxHashMap::default();
        let nv = self.ring.nvars();
        let mut acc: FxHashMap<Monomial, K> = FxHashMap::default();
        for (m, c) in &self.terms {
            let exps = m.exponents();
            let prefix_len = nv.saturating_sub(1);
            let prefix = &exps[..prefix_len];
            if !prefix_cache.contains_key(prefix) {
                let mut p = MultiPoly::one(&target);
                for (v, &e) in prefix.iter().enumerate() {
                    if e > 0 {
                        p = p.mul_poly(&powers[v][e as usize]);
                    }
                }
                prefix_cache.insert(prefix.to_vec(), p);
            }
            let mut t = prefix_cache[prefix].clone();
            if nv > 0 {
                let e = exps[nv - 1];
                if e > 0 {
                    t = t.mul_poly(&powers[nv - 1][e as usize]);
                }
            }
            for (tm, tc) in t.terms {
                let p = tc.times(c);
                match acc.get_mut(&tm) {
                    Some(e) => *e = e.plus(&p),
                    None => {
                        acc.insert(tm, p);
                    }
                }
            }
        }
        Ok(MultiPoly::from_map(&target, acc))
    }

    pub fn derivative(&self, var: usize) -> Self {
        Self::from_terms(
            &self.ring,
            self.terms.iter().filter(|(m, _)| m.exponent(var) > 0).map(|(m, c)| {
                let e = m.exponent(var);
                (m.with_exponent(var, e - 1), c.times(&self.ring.from_i64(e as i64)))
            }),
        )
    }

    /// Canonical scalar multiple: primitive with positive leading coefficient
    /// over Q, monic over F_p. Zero stays zero.
    pub fn normalized(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let coeffs: Vec<&K> = self.terms.iter().map(|t| &t.1).collect();
        let f = K::normalizing_factor(&coeffs);
        self.scale(&f)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.terms[0].1.inverse().expect("nonzero leading coefficient"))
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        self.check_ring(divisor);
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        let (lm, lc) = &divisor.terms[0];
        let lc_inv = lc.inverse()?;
        if divisor.terms.len() == 1 {
            let mut out = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                if !lm.divides(m) {
                    return None;
                }
                out.push((lm.quotient_of(m), c.times(&lc_inv)));
            }
            return Some(Self::from_sorted_terms(&self.ring, out));
        }
        divide_heap(self, divisor, &lc_inv)
    }

    /// `self = q * divisor + r`, with no term of `r` divisible by the leading monomial of `divisor`.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        self.check_ring(divisor);
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let (lm, lc) = divisor.terms[0].clone();
        let lc_inv = lc.inverse().expect("nonzero leading coefficient");
        let mut rem: std::collections::BTreeMap<Monomial, K> =
            self.terms.iter().cloned().collect();
        let mut quo = Vec::new();
        let mut out_rem = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            if lm.divides(&m) {
                let qm = lm.quotient_of(&m);
                let qc = c.times(&lc_inv);
                for (dm, dc) in divisor.terms.iter().skip(1) {
                    let tm = dm.mul(&qm);
                    let tc = dc.times(&qc);
                    let updated = match rem.get(&tm) {
                        Some(e) => e.minus(&tc),
                        None => tc.negated(),
                    };
                    if updated.is_zero() {
                        rem.remove(&tm);
                    } else {
                        rem.insert(tm, updated);
                    }
                }
                quo.push((qm, qc));
            } else {
                out_rem.push((m, c));
            }
        }
        (Self::from_sorted_terms(&self.ring, quo), Self::from_sorted_terms(&self.ring, out_rem))
    }

    /// Move to another field, mapping every coefficient.
    pub fn map_coeffs<L: Field>(
        &self,
        ring: &Ring<L>,
        f: impl Fn(&K) -> Result<L, PolyError>,
    ) -> Result<MultiPoly<L>, PolyError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let d = f(c)?;
            if !d.is_zero() {
                terms.push((m.clone(), d));
            }
        }
        Ok(MultiPoly::from_sorted_terms(ring, terms))
    }

    /// Re-embed into a ring with a different variable list, placing old
    /// variable `i` at `positions[i]`.
    pub fn embed(&self, ring: &Ring<K>, positions: &[usize]) -> Self {
        assert_eq!(positions.len(), self.ring.nvars());
        Self::from_terms(
            ring,
            self.terms.iter().map(|(m, c)| {
                let mut out = Monomial::one(ring.nvars());
                for (i, &e) in m.exponents().iter().enumerate() {
                    out.exps_mut()[positions[i]] += e;
                }
                (out, c.clone())
            }),
        )
    }

    /// Group terms by the exponent of `var`: returns `(e, coefficient poly)` pairs
    /// with the coefficient free of `var`, sorted by ascending `e`.
    pub fn coefficients_in(&self, var: usize) -> Vec<(u32, MultiPoly<K>)> {
        let mut groups: std::collections::BTreeMap<u32, Vec<(Monomial, K)>> = Default::default();
        for (m, c) in &self.terms {
            groups.entry(m.exponent(var)).or_default().push((m.with_exponent(var, 0), c.clone()));
        }
        groups
            .into_iter()
            .map(|(e, ts)| (e, MultiPoly::from_sorted_terms(&self.ring, ts)))
            .collect()
    }
}

/// Exact division with a heap of pending products (avoids re-walking the
/// remainder for every quotient term).
fn divide_heap<K: Field>(
    dividend: &MultiPoly<K>,
    divisor: &MultiPoly<K>,
    lc_inv: &K,
) -> Option<MultiPoly<K>> {
    use std::collections::BinaryHeap;

    #[derive(PartialEq, Eq)]
    struct Entry {
        mono: Monomial,
        qi: usize,
        dj: usize,
    }
    impl Ord for Entry {
        fn cmp(&self, other: &Self) -> Ordering {
            self.mono.cmp(&other.mono).then_with(|| other.qi.cmp(&self.qi))
        }
    }
    impl PartialOrd for Entry {
        fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
            Some(self.cmp(other))
        }
    }

    let ring = dividend.ring();
    let lm = &divisor.terms[0].0;
    let mut quotient: Vec<(Monomial, K)> = Vec::new();
    let mut heap: BinaryHeap<Entry> = BinaryHeap::new();
    let mut next_dividend = 0usize;
    loop {
        // Current largest monomial among dividend remainder and pending products.
        let from_dividend = dividend.terms.get(next_dividend).map(|t| &t.0);
        let from_heap = heap.peek().map(|e| &e.mono);
        let current = match (from_dividend, from_heap) {
            (None, None) => break,
            (Some(a), None) => a.clone(),
            (None, Some(b)) => b.clone(),
            (Some(a), Some(b)) => {
                if a >= b {
                    a.clone()
                } else {
                    b.clone()
                }
            }
        };
        let mut coeff = ring.zero();
        if from_dividend == Some(&current) {
            coeff = dividend.terms[next_dividend].1.clone();
            next_dividend += 1;
        }
        while heap.peek().map(|e| e.mono == current).unwrap_or(false) {
            let e = heap.pop().unwrap();
            coeff = coeff.minus(&quotient[e.qi].1.times(&divisor.terms[e.dj].1));
            if e.dj + 1 < divisor.terms.len() {
                heap.push(Entry {
                    mono: quotient[e.qi].0.mul(&divisor.terms[e.dj + 1].0),
                    qi: e.qi,
                    dj: e.dj + 1,
                });
            }
        }
        if coeff.is_zero() {
            continue;
        }
        if !lm.divides(&current) {
            return None;
        }
        let qm = lm.quotient_of(&current);
        let qc = coeff.times(lc_inv);
        quotient.push((qm.clone(), qc));
        let qi = quotient.len() - 1;
        heap.push(Entry { mono: qm.mul(&divisor.terms[1].0), qi, dj: 1 });
    }
    Some(MultiPoly::from_sorted_terms(ring, quotient))
}

impl MultiPoly<Rational> {
    /// Reduce coefficients modulo `p`.
    pub fn to_prime_field(&self, p: u64) -> Result<MultiPoly<Fp>, PolyError> {
        let ring = self.ring.with_field::<Fp>(p);
        self.map_coeffs(&ring, |c| Fp::from_rational(&p, c))
    }
}

impl<K: Field> fmt::Display for MultiPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        super::parse::write_poly(f, self)
    }
}

impl<K: Field> fmt::Debug for MultiPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({})", self)
    }
}

impl<K: Field> Add for &MultiPoly<K> {
    type Output = MultiPoly<K>;
    fn add(self, rhs: Self) -> MultiPoly<K> {
        self.add_poly(rhs)
    }
}

impl<K: Field> Sub for &MultiPoly<K> {
    type Output = MultiPoly<K>;
    fn sub(self, rhs: Self) -> MultiPoly<K> {
        self.sub_poly(rhs)
    }
}

impl<K: Field> Mul for &MultiPoly<K> {
    type Output = MultiPoly<K>;
    fn mul(self, rhs: Self) -> MultiPoly<K> {
        self.mul_poly(rhs)
    }
}

impl<K: Field> Neg for &MultiPoly<K> {
    type Output = MultiPoly<K>;
    fn neg(self) -> MultiPoly<K> {
        self.neg_poly()
    }
}

impl<K: Field> Add for MultiPoly<K> {
    type Output = MultiPoly<K>;
    fn add(self, rhs: Self) -> MultiPoly<K> {
        self.add_poly(&rhs)
    }
}

impl<K: Field> Sub for MultiPoly<K> {
    type Output = MultiPoly<K>;
    fn sub(self, rhs: Self) -> MultiPoly<K> {
        self.sub_poly(&rhs)
    }
}

impl<K: Field> Mul for MultiPoly<K> {
    type Output = MultiPoly<K>;
    fn mul(self, rhs: Self) -> MultiPoly<K> {
        self.mul_poly(&rhs)
    }
}

impl<K: Field> Neg for MultiPoly<K> {
    type Output = MultiPoly<K>;
    fn neg(self) -> MultiPoly<K> {
        self.neg_poly()
    }
}
