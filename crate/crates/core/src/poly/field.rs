//! Coefficient fields: exact rationals and word-sized prime fields.

use std::fmt;
use std::hash::Hash;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use super::PolyError;

/// Exact rational scalar, always stored in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Arithmetic needed by the polynomial kernel.
///
/// `Ctx` carries whatever a bare element cannot: nothing for the rationals,
/// the modulus for a prime field.
pub trait Field: Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {
    type Ctx: Clone + PartialEq + Eq + fmt::Debug + Send + Sync + 'static;

    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_i64(ctx: &Self::Ctx, v: i64) -> Self;
    /// Fails when the denominator is not invertible in the field.
    fn from_rational(ctx: &Self::Ctx, q: &Rational) -> Result<Self, PolyError>;

    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn inverse(&self) -> Option<Self>;

    fn divided(&self, other: &Self) -> Option<Self> {
        other.inverse().map(|inv| self.times(&inv))
    }

    /// Sign used by the printer; prime-field elements never print negative.
    fn is_negative(&self) -> bool;

    /// Scalar `s` such that `s * coeffs` is in canonical normal form
    /// (primitive integral with positive leading entry over Q, monic over F_p).
    /// `coeffs` is non-empty and starts with the leading coefficient.
    fn normalizing_factor(coeffs: &[&Self]) -> Self;

    /// Uniform random element, used by evaluation-based algorithms.
    fn random<R: Rng + ?Sized>(ctx: &Self::Ctx, rng: &mut R) -> Self;
}

impl Field for Rational {
    type Ctx = ();

    fn zero(_: &()) -> Self {
        <Rational as Zero>::zero()
    }
    fn one(_: &()) -> Self {
        <Rational as One>::one()
    }
    fn from_i64(_: &(), v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_rational(_: &(), q: &Rational) -> Result<Self, PolyError> {
        Ok(q.clone())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn normalizing_factor(coeffs: &[&Self]) -> Self {
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in coeffs {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut f = Rational::new(den_lcm, num_gcd);
        if Signed::is_negative(coeffs[0]) {
            f = -f;
        }
        f
    }
    fn random<R: Rng + ?Sized>(_: &(), rng: &mut R) -> Self {
        let n: i64 = rng.gen_range(-1000..=1000);
        let d: i64 = rng.gen_range(1..=1000);
        Rational::new(BigInt::from(n), BigInt::from(d))
    }
}

/// Element of Z/pZ for an odd prime p < 2^63. The modulus travels with the value.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    pub fn new(value: u64, modulus: u64) -> Self {
        Fp { value: value % modulus, modulus }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn from_bigint(v: &BigInt, p: u64) -> Self {
        let m = BigInt::from(p);
        let r = v.mod_floor(&m);
        Fp::new(r.to_u64().expect("residue fits in u64"), p)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = *self;
        let mut acc = Fp::new(1, self.modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            base = base.times(&base);
            e >>= 1;
        }
        acc
    }

    /// Symmetric representative in (-p/2, p/2].
    pub fn symmetric(&self) -> BigInt {
        if self.value > self.modulus / 2 {
            BigInt::from(self.value) - BigInt::from(self.modulus)
        } else {
            BigInt::from(self.value)
        }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

impl Field for Fp {
    type Ctx = u64;

    fn zero(p: &u64) -> Self {
        Fp { value: 0, modulus: *p }
    }
    fn one(p: &u64) -> Self {
        Fp { value: 1, modulus: *p }
    }
    fn from_i64(p: &u64, v: i64) -> Self {
        Fp::new((v as i128).rem_euclid(*p as i128) as u64, *p)
    }
    fn from_rational(p: &u64, q: &Rational) -> Result<Self, PolyError> {
        let num = Fp::from_bigint(q.numer(), *p);
        let den = Fp::from_bigint(q.denom(), *p);
        den.inverse()
            .map(|inv| num.times(&inv))
            .ok_or(PolyError::BadReduction { prime: *p })
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn is_one(&self) -> bool {
        self.value == 1
    }
    #[inline]
    fn plus(&self, other: &Self) -> Self {
        let s = self.value + other.value;
        let s = if s >= self.modulus { s - self.modulus } else { s };
        Fp { value: s, modulus: self.modulus }
    }
    #[inline]
    fn minus(&self, other: &Self) -> Self {
        let s = if self.value >= other.value {
            self.value - other.value
        } else {
            self.value + self.modulus - other.value
        };
        Fp { value: s, modulus: self.modulus }
    }
    #[inline]
    fn times(&self, other: &Self) -> Self {
        Fp { value: mul_mod(self.value, other.value, self.modulus), modulus: self.modulus }
    }
    fn negated(&self) -> Self {
        if self.value == 0 {
            *self
        } else {
            Fp { value: self.modulus - self.value, modulus: self.modulus }
        }
    }
    fn inverse(&self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        // extended Euclid on i128 to stay clear of overflow
        let (mut r0, mut r1) = (self.modulus as i128, self.value as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        let m = self.modulus as i128;
        Some(Fp { value: t0.rem_euclid(m) as u64, modulus: self.modulus })
    }
    fn is_negative(&self) -> bool {
        false
    }
    fn normalizing_factor(coeffs: &[&Self]) -> Self {
        coeffs[0].inverse().expect("leading coefficient is nonzero")
    }
    fn random<R: Rng + ?Sized>(p: &u64, rng: &mut R) -> Self {
        Fp { value: rng.gen_range(0..*p), modulus: *p }
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = Fp::new(a, n).pow(d).value;
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Random prime in [2^61, 2^62).
pub fn random_prime<R: Rng + ?Sized>(rng: &mut R) -> u64 {
    loop {
        let candidate = rng.gen_range((1u64 << 61)..(1u64 << 62)) | 1;
        if is_prime_u64(candidate) {
            return candidate;
        }
    }
}

/// Largest prime below `below`.
pub fn prev_prime(below: u64) -> u64 {
    let mut c = below - 1;
    if c % 2 == 0 {
        c -= 1;
    }
    while !is_prime_u64(c) {
        c -= 2;
    }
    c
}

/// Chinese remaindering of `(r mod m)` with `(v mod p)`; returns the residue mod `m*p`.
pub fn crt_step(r: &BigInt, m: &BigInt, v: u64, p: u64) -> BigInt {
    let r_mod_p = Fp::from_bigint(r, p);
    let m_mod_p = Fp::from_bigint(m, p);
    let diff = Fp::new(v, p).minus(&r_mod_p);
    let k = diff.times(&m_mod_p.inverse().expect("moduli coprime"));
    r + m * BigInt::from(k.value)
}

/// Wang's rational reconstruction: find n/d with n ≡ d*a (mod m), |n|,|d| ≤ sqrt(m/2).
pub fn rational_reconstruction(a: &BigInt, m: &BigInt) -> Option<Rational> {
    let a = a.mod_floor(m);
    let bound = (m >> 1usize).sqrt();
    let (mut r0, mut r1) = (m.clone(), a);
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if r1.gcd(&t1) != BigInt::one() {
        return None;
    }
    let (n, d) = if t1.sign() == Sign::Minus { (-r1, -t1) } else { (r1, t1) };
    Some(Rational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fp_inverse_roundtrip() {
        let p = prev_prime(1u64 << 62);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let a = Fp::random(&p, &mut rng);
            if a.is_zero() {
                continue;
            }
            assert!(a.times(&a.inverse().unwrap()).is_one());
        }
    }

    #[test]
    fn miller_rabin_small_cases() {
        let primes: Vec<u64> = (0..100).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(primes[..10], [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
        assert!(is_prime_u64(2_305_843_009_213_693_951)); // 2^61 - 1
    }

    #[test]
    fn rational_from_residue() {
        let p = BigInt::from(prev_prime(1u64 << 62));
        let q = Rational::new(BigInt::from(-17), BigInt::from(23));
        let residue = Fp::from_rational(&p.to_u64().unwrap(), &q).unwrap();
        let back = rational_reconstruction(&BigInt::from(residue.value()), &p).unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn reduction_rejects_bad_denominator() {
        let q = Rational::new(BigInt::from(1), BigInt::from(7));
        assert!(Fp::from_rational(&7, &q).is_err());
    }

    #[test]
    fn rational_normalizing_factor_is_primitive_positive() {
        let coeffs = [
            Rational::new(BigInt::from(-2), BigInt::from(3)),
            Rational::new(BigInt::from(4), BigInt::from(5)),
        ];
        let refs: Vec<&Rational> = coeffs.iter().collect();
        let f = Rational::normalizing_factor(&refs);
        let scaled: Vec<Rational> = coeffs.iter().map(|c| c * &f).collect();
        assert_eq!(scaled[0], Rational::from_integer(BigInt::from(5)));
        assert_eq!(scaled[1], Rational::from_integer(BigInt::from(-6)));
    }
}
