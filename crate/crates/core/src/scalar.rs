//! Exact scalars: arbitrary-precision rationals, Gaussian rationals and
//! q-adic valuations.
//!
//! Nothing in here ever touches floating point except the explicit
//! [`Rational::to_f64`] conversion used for reports.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Reduced fraction with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// `base^exp` for a possibly negative exponent. Panics on `0^negative`.
    pub fn pow(&self, exp: i64) -> Self {
        let mag = u32::try_from(exp.unsigned_abs()).expect("exponent out of range");
        let p = num_traits::pow::Pow::pow(&self.0, mag);
        if exp < 0 {
            Rational(p.recip())
        } else {
            Rational(p)
        }
    }

    /// `q^exp` as an exact rational.
    pub fn prime_power(q: u64, exp: i64) -> Self {
        Rational::from_int(q).pow(exp)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Both numerator and denominator are perfect squares.
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().magnitude();
        let d = self.denom().magnitude();
        let rn = n.sqrt();
        let rd = d.sqrt();
        if &rn * &rn == *n && &rd * &rd == *d {
            Some(Rational(BigRational::new(rn.into(), rd.into())))
        } else {
            None
        }
    }

    /// Smallest multiple of `2^-bits` that is `>= sqrt(self)`.
    pub fn sqrt_ceil_dyadic(&self, bits: u32) -> Self {
        assert!(!self.is_negative(), "square root of a negative rational");
        // ceil(sqrt(y)) == ceil_isqrt(ceil(y)) for y >= 0
        let scaled = self.0.clone() * BigRational::from_integer(BigInt::one() << (2 * bits));
        let c = scaled.ceil().to_integer();
        let c = c.magnitude();
        let mut r = c.sqrt();
        if &r * &r < *c {
            r += 1u32;
        }
        Rational(BigRational::new(
            BigInt::from_biguint(Sign::Plus, r),
            BigInt::one() << bits,
        ))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid rational {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
                let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
                Rational::new(n, d)
            }
            None => Ok(Rational::from_int(BigInt::from_str(s).map_err(|_| bad())?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_int(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($tr::$method(&self.0, &rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($tr::$method(self.0, rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($tr::$method(self.0, &rhs.0))
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($tr::$method(&self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// `re + i·im` with rational parts.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussianRational { re, im: Rational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        GaussianRational::real(Rational::from(n))
    }

    pub fn zero() -> Self {
        GaussianRational::default()
    }

    pub fn one() -> Self {
        GaussianRational::real(Rational::one())
    }

    pub fn i() -> Self {
        GaussianRational::new(Rational::zero(), Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -&self.im)
    }

    /// `|c|^2 = re^2 + im^2`.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, r: &Rational) -> Self {
        GaussianRational::new(&self.re * r, &self.im * r)
    }

    pub fn recip(&self) -> Option<Self> {
        let n = self.norm_sqr();
        let inv = n.recip()?;
        Some(self.conj().scale(&inv))
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "({} + {}i)", self.re, self.im)
        }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: GaussianRational) -> GaussianRational {
        &self + &rhs
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Sub for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: GaussianRational) -> GaussianRational {
        &self - &rhs
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: GaussianRational) -> GaussianRational {
        &self * &rhs
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

/// q-adic valuation of a rational; `Infinite` for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn ensure_prime(q: u64) -> Result<()> {
    if is_prime(q) {
        Ok(())
    } else {
        Err(Error::NotPrime(q))
    }
}

/// Splits `n != 0` as `q^v * rest` with `q ∤ rest`.
pub(crate) fn split_prime_power(n: &BigUint, q: u64) -> (i64, BigUint) {
    debug_assert!(!n.is_zero());
    let q = BigUint::from(q);
    let mut v = 0;
    let mut rest = n.clone();
    loop {
        let (quot, rem) = rest.div_rem(&q);
        if !rem.is_zero() {
            break;
        }
        rest = quot;
        v += 1;
    }
    (v, rest)
}

/// Largest `v` with `q^-v · x` integral at `q`.
pub fn q_valuation(x: &Rational, q: u64) -> Result<Valuation> {
    ensure_prime(q)?;
    Ok(valuation_unchecked(x, q))
}

pub(crate) fn valuation_unchecked(x: &Rational, q: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let (vn, _) = split_prime_power(x.numer().magnitude(), q);
    let (vd, _) = split_prime_power(x.denom().magnitude(), q);
    Valuation::Finite(vn - vd)
}

/// Whether the denominator of `x` is a power of `q`.
pub fn has_prime_power_denominator(x: &Rational, q: u64) -> bool {
    let (_, rest) = split_prime_power(x.denom().magnitude(), q);
    rest.is_one()
}

/// Representative of `x mod q^e·Z_q` lying in `[0, q^e)` with a `q`-power
/// denominator. `x` may have any denominator; the part prime to `q` is
/// inverted modulo a suitable power of `q`.
pub(crate) fn reduce_mod_prime_power(x: &Rational, q: u64, e: i64) -> Rational {
    if x.is_zero() {
        return Rational::zero();
    }
    let (dv, unit) = split_prime_power(x.denom().magnitude(), q);
    // shift so that x·q^k is q-integral and the modulus q^(e+k) is integral
    let k = dv.max(-e).max(0);
    let m = e + k;
    let qb = BigInt::from(q);
    let modulus = num_traits::pow(qb.clone(), m as usize);
    if modulus.is_one() {
        return Rational::zero();
    }
    let unit = BigInt::from_biguint(Sign::Plus, unit);
    let scaled = x.numer() * num_traits::pow(qb.clone(), (k - dv) as usize);
    let inv = mod_inverse(&unit, &modulus).expect("unit prime to q is invertible");
    let r = (scaled * inv).mod_floor(&modulus);
    Rational::new(r, num_traits::pow(qb, k as usize)).expect("nonzero")
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(q_valuation(&r("12"), 2).unwrap(), Valuation::Finite(2));
        assert_eq!(q_valuation(&r("3/8"), 2).unwrap(), Valuation::Finite(-3));
        assert_eq!(q_valuation(&r("0"), 5).unwrap(), Valuation::Infinite);
        assert!(matches!(q_valuation(&r("3"), 4), Err(Error::NotPrime(4))));
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(r("6/4").to_string(), "3/2");
        assert_eq!(r("-4/2").to_string(), "-2");
        assert_eq!(r("0/7").to_string(), "0");
        assert_eq!(r("3/-6").to_string(), "-1/2");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
        let g = GaussianRational::new(r("1/2"), r("-3"));
        let js = serde_json::to_string(&g).unwrap();
        assert_eq!(js, r#"{"re":"1/2","im":"-3"}"#);
        assert_eq!(serde_json::from_str::<GaussianRational>(&js).unwrap(), g);
    }

    #[test]
    fn reduction_window() {
        // 1/3 mod 2Z_2 : 3^{-1} ≡ 3 mod 8 ... need representative in [0,2) ∩ Z
        assert_eq!(reduce_mod_prime_power(&r("1/3"), 2, 1), r("1"));
        assert_eq!(reduce_mod_prime_power(&r("5/4"), 2, 0), r("1/4"));
        assert_eq!(reduce_mod_prime_power(&r("-1/2"), 2, -1), r("0"));
        assert_eq!(reduce_mod_prime_power(&r("7"), 3, 1), r("1"));
        // 1/(2·3) mod 3^-1 Z_3 : 1/6 = (1/3)·(1/2), 2^{-1} ≡ 2 mod 3 -> 2/3 ≡ 0 mod 1/3
        assert_eq!(reduce_mod_prime_power(&r("1/6"), 3, -1), r("0"));
        assert_eq!(reduce_mod_prime_power(&r("1/6"), 3, 0), r("2/3"));
    }

    #[test]
    fn square_roots() {
        assert_eq!(r("9/4").sqrt_exact(), Some(r("3/2")));
        assert_eq!(r("2").sqrt_exact(), None);
        let up = r("2").sqrt_ceil_dyadic(64);
        assert!(&up * &up >= r("2"));
        let step = Rational::new(1, BigInt::one() << 64).unwrap();
        let below = &up - &step;
        assert!(&below * &below < r("2"));
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-1000i64..1000, 1i64..200).prop_map(|(n, d)| Rational::new(n, d).unwrap())
    }

    fn arb_nonzero() -> impl Strategy<Value = Rational> {
        arb_rational().prop_filter("nonzero", |x| !x.is_zero())
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_rational(), b in arb_rational(), c in arb_rational()) {
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a - &a, Rational::zero());
            if let Some(inv) = a.recip() {
                prop_assert_eq!(&a * &inv, Rational::one());
            }
        }

        #[test]
        fn reduced_form(a in arb_rational()) {
            prop_assert!(a.denom() > &BigInt::zero());
            prop_assert!(a.numer().gcd(a.denom()).is_one());
            prop_assert_eq!(a.to_string().parse::<Rational>().unwrap(), a);
        }

        #[test]
        fn valuation_is_multiplicative(a in arb_nonzero(), b in arb_nonzero(), qi in 0usize..4) {
            let q = [2u64, 3, 5, 7][qi];
            let va = q_valuation(&a, q).unwrap().finite().unwrap();
            let vb = q_valuation(&b, q).unwrap().finite().unwrap();
            prop_assert_eq!(q_valuation(&(&a * &b), q).unwrap(), Valuation::Finite(va + vb));
            let vs = q_valuation(&(&a + &b), q).unwrap();
            prop_assert!(vs >= Valuation::Finite(va.min(vb)));
            if va != vb {
                prop_assert_eq!(vs, Valuation::Finite(va.min(vb)));
            }
        }

        #[test]
        fn gaussian_conj_involution(a in arb_rational(), b in arb_rational(), c in arb_rational(), d in arb_rational()) {
            let x = GaussianRational::new(a, b);
            let y = GaussianRational::new(c, d);
            prop_assert_eq!(x.conj().conj(), x.clone());
            prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
            prop_assert_eq!((&x * &x.conj()).re, x.norm_sqr());
        }

        #[test]
        fn reduction_is_congruent(a in arb_rational(), e in -3i64..4) {
            let q = 3;
            let red = reduce_mod_prime_power(&a, q, e);
            let window = Rational::prime_power(q, e);
            prop_assert!(!red.is_negative() && red < window);
            prop_assert!(has_prime_power_denominator(&red, q));
            let diff = &a - &red;
            prop_assert!(valuation_unchecked(&diff, q) >= Valuation::Finite(e));
        }
    }
}
