//! Multivariate gcd and trial division.
//!
//! Over F_p the gcd is Brown's dense evaluation/interpolation scheme,
//! recursing one variable at a time down to univariate Euclid. Over Q the
//! gcd is assembled from F_p images by Chinese remaindering and rational
//! reconstruction, and accepted only after exact division over Q confirms it.
//! A monic F_p image of degree zero ends the computation early.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;

use super::field::{crt_step, prev_prime, rational_reconstruction, Field, Fp, Rational};
use super::monomial::Monomial;
use super::multipoly::MultiPoly;
use super::univariate::UniPoly;
use super::PolyError;

/// Fields with a multivariate gcd.
pub trait GcdField: Field {
    /// Gcd of two nonzero polynomials from the same ring, up to a unit.
    fn gcd_nonzero(a: &MultiPoly<Self>, b: &MultiPoly<Self>) -> MultiPoly<Self>;
}

impl GcdField for Fp {
    fn gcd_nonzero(a: &MultiPoly<Fp>, b: &MultiPoly<Fp>) -> MultiPoly<Fp> {
        gcd_fp(a, b)
    }
}

impl GcdField for Rational {
    fn gcd_nonzero(a: &MultiPoly<Rational>, b: &MultiPoly<Rational>) -> MultiPoly<Rational> {
        gcd_q(a, b)
    }
}

fn check_same_ring<K: Field>(p: &MultiPoly<K>, q: &MultiPoly<K>) -> Result<(), PolyError> {
    if p.ring().ctx() != q.ring().ctx() {
        return Err(PolyError::MixedModes);
    }
    if p.ring().vars() != q.ring().vars() {
        return Err(PolyError::RingMismatch);
    }
    Ok(())
}

/// Normalized greatest common divisor; `gcd(p, 0)` is `p` normalized.
pub fn poly_gcd<K: GcdField>(p: &MultiPoly<K>, q: &MultiPoly<K>) -> Result<MultiPoly<K>, PolyError> {
    check_same_ring(p, q)?;
    if p.is_zero() {
        return Ok(q.normalized());
    }
    if q.is_zero() {
        return Ok(p.normalized());
    }
    Ok(K::gcd_nonzero(p, q).normalized())
}

/// Gcd of a list of polynomials (zero entries are ignored).
pub fn gcd_many<K: GcdField>(polys: &[MultiPoly<K>]) -> Result<MultiPoly<K>, PolyError> {
    let mut it = polys.iter().filter(|p| !p.is_zero());
    let first = match it.next() {
        Some(p) => p.clone(),
        None => return Ok(polys.first().cloned().expect("non-empty list")),
    };
    let mut g = first;
    for p in it {
        check_same_ring(&g, p)?;
        if g.is_constant() {
            break;
        }
        g = K::gcd_nonzero(&g, p);
    }
    Ok(g.normalized())
}

/// Gcd of a list, first stripping the known candidate factors `hints`
/// (exact division), then finishing with the general algorithm on the cofactors.
pub fn gcd_with_hints<K: GcdField>(
    polys: &[MultiPoly<K>],
    hints: &[MultiPoly<K>],
) -> Result<MultiPoly<K>, PolyError> {
    let mut work: Vec<MultiPoly<K>> = polys.iter().filter(|p| !p.is_zero()).cloned().collect();
    if work.is_empty() {
        return gcd_many(polys);
    }
    let ring = work[0].ring().clone();
    let mut common = MultiPoly::one(&ring);
    for h in hints.iter().filter(|h| !h.is_constant()) {
        loop {
            let quotients: Option<Vec<_>> = work.iter().map(|p| p.div_exact(h)).collect();
            match quotients {
                Some(qs) => {
                    work = qs;
                    common = common.mul_poly(h);
                }
                None => break,
            }
        }
    }
    let rest = gcd_many(&work)?;
    Ok(common.mul_poly(&rest).normalized())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialDivision<K: Field> {
    /// Maximal power of each candidate dividing the input.
    pub exponents: Vec<u32>,
    pub remainder: MultiPoly<K>,
    /// Set when the input was the zero polynomial.
    pub zero_input: bool,
}

/// Divide out each candidate as often as it goes: `p = remainder * prod c_i^e_i`.
pub fn trial_divide<K: Field>(
    p: &MultiPoly<K>,
    candidates: &[MultiPoly<K>],
) -> Result<TrialDivision<K>, PolyError> {
    for (i, c) in candidates.iter().enumerate() {
        check_same_ring(p, c)?;
        if c.is_constant() {
            return Err(PolyError::ConstantCandidate(i));
        }
    }
    if p.is_zero() {
        return Ok(TrialDivision {
            exponents: vec![0; candidates.len()],
            remainder: p.clone(),
            zero_input: true,
        });
    }
    let mut rem = p.clone();
    let mut exponents = Vec::with_capacity(candidates.len());
    for c in candidates {
        let mut e = 0;
        while let Some(q) = rem.div_exact(c) {
            rem = q;
            e += 1;
        }
        exponents.push(e);
    }
    Ok(TrialDivision { exponents, remainder: rem, zero_input: false })
}

fn divide_by_monomial<K: Field>(p: &MultiPoly<K>, m: &Monomial) -> MultiPoly<K> {
    if m.is_one() {
        return p.clone();
    }
    p.div_exact(&MultiPoly::monomial(p.ring(), m.clone(), p.ring().one()))
        .expect("monomial content divides")
}

fn used_vars<K: Field>(p: &MultiPoly<K>) -> Vec<bool> {
    let mut used = vec![false; p.ring().nvars()];
    for (m, _) in p.terms() {
        for (v, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                used[v] = true;
            }
        }
    }
    used
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `var`.
fn content_in<K: GcdField>(p: &MultiPoly<K>, var: usize) -> MultiPoly<K> {
    let mut g: Option<MultiPoly<K>> = None;
    for (_, c) in p.coefficients_in(var) {
        g = Some(match g {
            None => c,
            Some(g) => K::gcd_nonzero(&g, &c),
        });
        if g.as_ref().map(|g| g.is_constant()).unwrap_or(false) {
            break;
        }
    }
    g.expect("nonzero polynomial")
}

/// Shared reductions for both fields: monomial content, constants, and
/// variables present in only one argument. Returns `Err(result)` when the
/// gcd is settled, or the reduced pair with its monomial factor.
fn reduce_pair<K: GcdField>(
    a: &MultiPoly<K>,
    b: &MultiPoly<K>,
) -> Result<(MultiPoly<K>, MultiPoly<K>, Monomial), MultiPoly<K>> {
    let ring = a.ring();
    let ma = a.monomial_content().expect("nonzero");
    let mb = b.monomial_content().expect("nonzero");
    let mono = ma.gcd(&mb);
    let mono_poly = MultiPoly::monomial(ring, mono.clone(), ring.one());
    let a1 = divide_by_monomial(a, &ma);
    let b1 = divide_by_monomial(b, &mb);
    if a1.is_constant() || b1.is_constant() {
        return Err(mono_poly);
    }
    let ua = used_vars(&a1);
    let ub = used_vars(&b1);
    for v in 0..ring.nvars() {
        if ua[v] && !ub[v] {
            let ca = content_in(&a1, v);
            return Err(K::gcd_nonzero(&ca, &b1).mul_poly(&mono_poly));
        }
        if ub[v] && !ua[v] {
            let cb = content_in(&b1, v);
            return Err(K::gcd_nonzero(&a1, &cb).mul_poly(&mono_poly));
        }
    }
    Ok((a1, b1, mono))
}

fn to_uni<K: Field>(p: &MultiPoly<K>, var: usize) -> UniPoly<K> {
    UniPoly::from_multi(p, var).expect("univariate")
}

/// Split `p` into z-coefficients: M-monomial (z zeroed) -> univariate in z.
fn z_coefficients(p: &MultiPoly<Fp>, z: usize) -> Vec<(Monomial, UniPoly<Fp>)> {
    let ctx = *p.ring().ctx();
    let mut groups: FxHashMap<Monomial, Vec<Fp>> = FxHashMap::default();
    for (m, c) in p.terms() {
        let e = m.exponent(z) as usize;
        let entry = groups.entry(m.with_exponent(z, 0)).or_default();
        if entry.len() <= e {
            entry.resize(e + 1, Fp::zero(&ctx));
        }
        entry[e] = *c;
    }
    let mut out: Vec<(Monomial, UniPoly<Fp>)> =
        groups.into_iter().map(|(m, cs)| (m, UniPoly::new(&ctx, cs))).collect();
    out.sort_by(|x, y| y.0.cmp(&x.0));
    out
}

fn mul_by_uni(p: &MultiPoly<Fp>, u: &UniPoly<Fp>, z: usize) -> MultiPoly<Fp> {
    p.mul_poly(&u.to_multi(p.ring(), z))
}

fn gcd_fp(a: &MultiPoly<Fp>, b: &MultiPoly<Fp>) -> MultiPoly<Fp> {
    let (a, b, mono) = match reduce_pair(a, b) {
        Ok(x) => x,
        Err(g) => return g.monic(),
    };
    let ring = a.ring().clone();
    let common: Vec<usize> = {
        let ua = used_vars(&a);
        (0..ring.nvars()).filter(|&v| ua[v]).collect()
    };
    let mono_poly = MultiPoly::monomial(&ring, mono, ring.one());
    if common.len() == 1 {
        let v = common[0];
        let g = to_uni(&a, v).gcd(&to_uni(&b, v));
        return g.to_multi(&ring, v).mul_poly(&mono_poly).monic();
    }
    let z = *common.last().unwrap();
    brown(&a, &b, z).mul_poly(&mono_poly).monic()
}

/// Brown's algorithm with evaluation variable `z`; both inputs use `z` and
/// at least one other variable.
fn brown(a: &MultiPoly<Fp>, b: &MultiPoly<Fp>, z: usize) -> MultiPoly<Fp> {
    let ring = a.ring().clone();
    let p = *ring.ctx();
    let za = z_coefficients(a, z);
    let zb = z_coefficients(b, z);
    let content = |cs: &[(Monomial, UniPoly<Fp>)]| {
        let mut g = UniPoly::zero(&p);
        for (_, c) in cs {
            g = g.gcd(c);
            if g.degree() == Some(0) {
                break;
            }
        }
        g
    };
    let ca = content(&za);
    let cb = content(&zb);
    let c = ca.gcd(&cb);
    let a = divide_uni(a, &ca, z);
    let b = divide_uni(b, &cb, z);
    let lca = z_coefficients(&a, z)[0].1.clone();
    let lcb = z_coefficients(&b, z)[0].1.clone();
    let gamma = lca.gcd(&lcb);
    let bound = a.degree_in(z).unwrap().min(b.degree_in(z).unwrap()) as usize
        + gamma.degree().unwrap_or(0);

    let mut rng = ChaCha8Rng::seed_from_u64(p ^ 0x9e37_79b9_7f4a_7c15);
    'restart: loop {
        let mut interp = MultiPoly::zero(&ring);
        let mut lm_best: Option<Monomial> = None;
        let mut newton = UniPoly::constant(&p, Fp::one(&p));
        let mut npoints = 0usize;
        loop {
            let alpha = Fp::random(&p, &mut rng);
            let g_alpha = gamma.eval(&alpha);
            if g_alpha.is_zero() || lca.eval(&alpha).is_zero() || lcb.eval(&alpha).is_zero() {
                continue;
            }
            let img = gcd_fp(&a.eval_var(z, &alpha), &b.eval_var(z, &alpha));
            if img.is_constant() {
                return c.to_multi(&ring, z);
            }
            let lm = img.leading_term().unwrap().0.clone();
            match &lm_best {
                Some(best) if lm > *best => continue,
                Some(best) if lm < *best => continue 'restart,
                _ => {}
            }
            if lm_best.is_none() {
                lm_best = Some(lm);
            }
            let img = img.scale(&g_alpha);
            let current = interp.eval_var(z, &alpha);
            let stable = npoints > 0 && current == img;
            if !stable {
                let nv = newton.eval(&alpha);
                let corr = img.sub_poly(&current).scale(&nv.inverse().expect("distinct points"));
                interp = interp.add_poly(&mul_by_uni(&corr, &newton, z));
            }
            newton = newton.mul(&UniPoly::linear_root(&p, &alpha));
            npoints += 1;
            if stable || npoints > bound {
                let zc = z_coefficients(&interp, z);
                let mut cont = UniPoly::zero(&p);
                for (_, u) in &zc {
                    cont = cont.gcd(u);
                }
                let cand = divide_uni(&interp, &cont, z);
                if a.div_exact(&cand).is_some() && b.div_exact(&cand).is_some() {
                    return mul_by_uni(&cand, &c, z);
                }
                if npoints > 2 * bound + 8 {
                    continue 'restart;
                }
            }
        }
    }
}

fn divide_uni(p: &MultiPoly<Fp>, u: &UniPoly<Fp>, z: usize) -> MultiPoly<Fp> {
    if u.degree().unwrap_or(0) == 0 {
        return p.clone();
    }
    p.div_exact(&u.to_multi(p.ring(), z)).expect("content divides")
}

fn integral_multiple(p: &MultiPoly<Rational>) -> MultiPoly<Rational> {
    let mut den = BigInt::one();
    for (_, c) in p.terms() {
        den = den.lcm(c.denom());
    }
    p.scale(&Rational::from_integer(den))
}

const MAX_MODULAR_PRIMES: usize = 4096;

fn gcd_q(a: &MultiPoly<Rational>, b: &MultiPoly<Rational>) -> MultiPoly<Rational> {
    let (a, b, mono) = match reduce_pair(a, b) {
        Ok(x) => x,
        Err(g) => return g.normalized(),
    };
    let ring = a.ring().clone();
    let mono_poly = MultiPoly::monomial(&ring, mono, ring.one());
    let a = integral_multiple(&a);
    let b = integral_multiple(&b);
    let lca = a.leading_coeff();
    let lcb = b.leading_coeff();

    let mut prime = 1u64 << 62;
    let mut modulus = BigInt::one();
    let mut lm_best: Option<Monomial> = None;
    let mut residues: FxHashMap<Monomial, BigInt> = FxHashMap::default();
    for _ in 0..MAX_MODULAR_PRIMES {
        prime = prev_prime(prime);
        let p_big = BigInt::from(prime);
        if (lca.numer() % &p_big).is_zero() || (lcb.numer() % &p_big).is_zero() {
            continue;
        }
        let ap = a.to_prime_field(prime).expect("integral");
        let bp = b.to_prime_field(prime).expect("integral");
        let g = gcd_fp(&ap, &bp);
        if g.is_constant() {
            return mono_poly.normalized();
        }
        let lm = g.leading_term().unwrap().0.clone();
        match &lm_best {
            Some(best) if lm > *best => continue,
            Some(best) if lm < *best => {
                residues.clear();
                modulus = BigInt::one();
                lm_best = Some(lm);
            }
            None => lm_best = Some(lm),
            _ => {}
        }
        // merge residues; monomials absent from this image have residue 0
        let image: FxHashMap<&Monomial, u64> = g.terms().iter().map(|(m, c)| (m, c.value())).collect();
        for m in image.keys() {
            residues.entry((*m).clone()).or_insert_with(BigInt::zero);
        }
        for (m, r) in residues.iter_mut() {
            let v = image.get(m).copied().unwrap_or(0);
            *r = crt_step(r, &modulus, v, prime);
        }
        modulus *= &p_big;
        let mut terms = Vec::with_capacity(residues.len());
        let mut ok = true;
        for (m, r) in &residues {
            match rational_reconstruction(r, &modulus) {
                Some(q) => {
                    if !Zero::is_zero(&q) {
                        terms.push((m.clone(), q));
                    }
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let cand = MultiPoly::from_terms(&ring, terms);
        if cand.is_zero() {
            continue;
        }
        if a.div_exact(&cand).is_some() && b.div_exact(&cand).is_some() {
            return cand.mul_poly(&mono_poly).normalized();
        }
    }
    panic!("modular gcd did not converge within {MAX_MODULAR_PRIMES} primes");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, Ring};

    fn q(s: &str) -> MultiPoly<Rational> {
        parse_poly(s, &Ring::projective()).unwrap()
    }

    #[test]
    fn shared_visible_factor() {
        let g = poly_gcd(&q("x0*x1 - x0^2"), &q("x0*x2")).unwrap();
        assert_eq!(g, q("x0"));
    }

    #[test]
    fn idempotent_up_to_normalization() {
        let p = q("-6*x0^2*x1 + 4*x1*x2^2 - 2/3*x2^3");
        assert_eq!(poly_gcd(&p, &p).unwrap(), p.normalized());
        assert_eq!(poly_gcd(&p, &MultiPoly::zero(p.ring())).unwrap(), p.normalized());
    }

    #[test]
    fn nontrivial_common_factor() {
        let f = q("x0^2 - x0*x1 - x1*x2");
        let a = &f * &q("x0 + 3*x2");
        let b = &f.pow(2) * &q("x1 - 5/2*x2");
        assert_eq!(poly_gcd(&a, &b).unwrap(), f.normalized());
    }

    #[test]
    fn coprime_gives_one() {
        let g = poly_gcd(&q("x0^3 + x1*x2^2 + 1"), &q("x0*x1 - x2^2 + 7")).unwrap();
        assert!(g.is_one());
    }

    #[test]
    fn fp_gcd_matches_rational() {
        let f = q("x0^2 - x0*x1 - x1*x2 + 2*x2^2");
        let a = &f * &q("x0 - x1");
        let b = &f * &q("x2 + x1");
        let p = prev_prime(1 << 62);
        let g = poly_gcd(&a.to_prime_field(p).unwrap(), &b.to_prime_field(p).unwrap()).unwrap();
        assert_eq!(g, f.to_prime_field(p).unwrap().monic());
    }

    #[test]
    fn trial_division_counts() {
        let p = q("x0^3*(x0 - x1)");
        let t = trial_divide(&p, &[q("x0"), q("x0 - x1")]).unwrap();
        assert_eq!(t.exponents, vec![3, 1]);
        assert!(t.remainder.is_one());
        let t = trial_divide(&q("x1 + x2"), &[q("x0"), q("x0 - x1")]).unwrap();
        assert_eq!(t.exponents, vec![0, 0]);
        assert_eq!(t.remainder, q("x1 + x2"));
        let t = trial_divide(&q("0"), &[q("x0")]).unwrap();
        assert!(t.zero_input);
        assert!(matches!(trial_divide(&q("x0"), &[q("3")]), Err(PolyError::ConstantCandidate(0))));
    }

    #[test]
    fn mixed_modes_rejected() {
        let a = q("x0").to_prime_field(101).unwrap();
        let b = q("x0").to_prime_field(103).unwrap();
        assert!(matches!(poly_gcd(&a, &b), Err(PolyError::MixedModes)));
    }
}
