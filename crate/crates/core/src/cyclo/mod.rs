//! Exact arithmetic in cyclotomic fields.
//!
//! An element of Q(ζ_N) is stored in the power basis 1, ζ_N, …, ζ_N^(φ(N)−1)
//! modulo the N-th cyclotomic polynomial, as an integer numerator vector over a
//! single positive denominator. The representation is canonical: two values of
//! the same conductor are equal iff their stored data are equal. Values of
//! different conductors are lifted to the lcm before any binary operation.

mod embed;
mod field;
pub(crate) mod multimod;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use embed::{embed_complex, HiComplex};
pub use field::{cyclotomic_polynomial, field, CyclotomicField};

/// Exact rational scalar.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycError {
    #[error("conductor must be a positive integer")]
    InvalidConductor,
    #[error("conductor {from} does not divide {to}")]
    IncompatibleConductor { from: u32, to: u32 },
    #[error("division by zero in a cyclotomic field")]
    DivisionByZero,
    #[error("cannot parse cyclotomic number: {0}")]
    Parse(String),
    #[error("coefficients of the conductor-{0} cyclotomic polynomial overflow 64 bits")]
    Overflow(u32),
}

/// An element of the cyclotomic field Q(ζ_N).
#[derive(Clone)]
pub struct CycNum {
    field: Arc<CyclotomicField>,
    num: Vec<BigInt>,
    den: BigInt,
}

fn field_or_panic(conductor: u32) -> Arc<CyclotomicField> {
    field(conductor).unwrap_or_else(|e| panic!("conductor {conductor}: {e}"))
}

impl CycNum {
    fn from_parts(field: Arc<CyclotomicField>, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut out = CycNum { field, num, den };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        debug_assert_eq!(self.num.len(), self.field.degree());
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in &mut self.num {
                *c = -&*c;
            }
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                return;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        if !g.is_one() {
            for c in &mut self.num {
                *c /= &g;
            }
            self.den /= &g;
        }
    }

    /// The zero of Q(ζ_N). Panics when `conductor == 0`.
    pub fn zero(conductor: u32) -> Self {
        Self::zero_in(&field_or_panic(conductor))
    }

    pub(crate) fn zero_in(field: &Arc<CyclotomicField>) -> Self {
        CycNum {
            field: Arc::clone(field),
            num: vec![BigInt::zero(); field.degree()],
            den: BigInt::one(),
        }
    }

    /// The unit of Q(ζ_N). Panics when `conductor == 0`.
    pub fn one(conductor: u32) -> Self {
        Self::from_int(conductor, 1)
    }

    pub fn from_int(conductor: u32, value: impl Into<BigInt>) -> Self {
        let mut out = Self::zero(conductor);
        out.num[0] = value.into();
        out.normalize();
        out
    }

    pub fn from_rational(conductor: u32, value: &Rational) -> Self {
        let f = field_or_panic(conductor);
        let mut num = vec![BigInt::zero(); f.degree()];
        num[0] = value.numer().clone();
        Self::from_parts(f, num, value.denom().clone())
    }

    /// Builds a value from power-basis coordinates; the length must be φ(N).
    pub fn from_coeffs(conductor: u32, coeffs: &[Rational]) -> Result<Self, CycError> {
        let f = field(conductor)?;
        if coeffs.len() != f.degree() {
            return Err(CycError::Parse(format!(
                "expected {} coefficients for conductor {conductor}, got {}",
                f.degree(),
                coeffs.len()
            )));
        }
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Ok(Self::from_parts(f, num, den))
    }

    /// Canonical form of the group-ring element Σ g[t] ζ_N^t.
    pub(crate) fn from_group_ring(conductor: u32, g: &[i64]) -> Self {
        let f = field_or_panic(conductor);
        let num = f.reduce_group_ring(g);
        Self::from_parts(f, num, BigInt::one())
    }

    /// Builds a value from an integer power-basis numerator and a denominator.
    pub(crate) fn from_integral(
        field: &Arc<CyclotomicField>,
        num: Vec<BigInt>,
        den: BigInt,
    ) -> Self {
        Self::from_parts(Arc::clone(field), num, den)
    }

    /// ζ_N^k, with k reduced mod N.
    pub fn root(conductor: u32, k: i64) -> Result<Self, CycError> {
        let f = field(conductor)?;
        let n = conductor as i64;
        let mut g = vec![0i64; conductor as usize];
        g[k.rem_euclid(n) as usize] = 1;
        let num = f.reduce_group_ring(&g);
        Ok(Self::from_parts(f, num, BigInt::one()))
    }

    pub fn conductor(&self) -> u32 {
        self.field.conductor()
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    /// Power-basis coordinates as reduced rationals.
    pub fn coeffs(&self) -> Vec<Rational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub(crate) fn numerator(&self) -> &[BigInt] {
        &self.num
    }

    pub(crate) fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.num[1..].iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.is_rational()
            .then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    /// The value as a rational integer, if it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        (self.is_rational() && self.den.is_one()).then(|| self.num[0].clone())
    }

    /// Whether the value is fixed by complex conjugation.
    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// The same element represented in Q(ζ_M).
    pub fn lift(&self, conductor: u32) -> Result<Self, CycError> {
        let n = self.conductor();
        if conductor == 0 {
            return Err(CycError::InvalidConductor);
        }
        if !conductor.is_multiple_of(n) {
            return Err(CycError::IncompatibleConductor {
                from: n,
                to: conductor,
            });
        }
        if conductor == n {
            return Ok(self.clone());
        }
        let target = field(conductor)?;
        let step = (conductor / n) as usize;
        let mut poly = vec![BigInt::zero(); conductor as usize];
        for (j, c) in self.num.iter().enumerate() {
            poly[j * step] = c.clone();
        }
        target.reduce(&mut poly);
        Ok(Self::from_parts(target, poly, self.den.clone()))
    }

    /// Image under the automorphism ζ_N ↦ ζ_N^k (k must be a unit mod N).
    pub fn galois(&self, k: i64) -> Self {
        let n = self.conductor() as i64;
        debug_assert_eq!(num_integer::gcd(k.rem_euclid(n), n), 1);
        let mut poly = vec![BigInt::zero(); n as usize];
        for (j, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                poly[(j as i64 * k).rem_euclid(n) as usize] += c;
            }
        }
        self.field.reduce(&mut poly);
        Self::from_parts(Arc::clone(&self.field), poly, self.den.clone())
    }

    /// Complex conjugate, the image of ζ_N ↦ ζ_N^(−1).
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// Field norm down to Q.
    pub fn norm(&self) -> Rational {
        let (cofactor, norm) = self.norm_cofactor();
        drop(cofactor);
        norm
    }

    /// Returns (∏_{σ≠1} σ(a), N(a)).
    fn norm_cofactor(&self) -> (Self, Rational) {
        let n = self.conductor() as i64;
        let mut cofactor = Self::one_in(&self.field);
        for k in 2..n {
            if num_integer::gcd(k, n) == 1 {
                cofactor = &cofactor * &self.galois(k);
            }
        }
        let norm = (&cofactor * self)
            .as_rational()
            .expect("the norm of a cyclotomic number is rational");
        (cofactor, norm)
    }

    fn one_in(field: &Arc<CyclotomicField>) -> Self {
        let mut out = Self::zero_in(field);
        out.num[0] = BigInt::one();
        out
    }

    pub fn inv(&self) -> Result<Self, CycError> {
        if self.is_zero() {
            return Err(CycError::DivisionByZero);
        }
        if self.is_rational() {
            let mut num = vec![BigInt::zero(); self.field.degree()];
            num[0] = self.den.clone();
            return Ok(Self::from_parts(
                Arc::clone(&self.field),
                num,
                self.num[0].clone(),
            ));
        }
        let (cofactor, norm) = self.norm_cofactor();
        Ok(cofactor.scale(&norm.recip()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, CycError> {
        Ok(self * &rhs.inv()?)
    }

    /// Multiplies by a rational scalar.
    pub fn scale(&self, r: &Rational) -> Self {
        let num = self.num.iter().map(|c| c * r.numer()).collect();
        Self::from_parts(Arc::clone(&self.field), num, &self.den * r.denom())
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one_in(&self.field);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    fn aligned<'a>(
        a: &'a Self,
        b: &'a Self,
    ) -> (std::borrow::Cow<'a, Self>, std::borrow::Cow<'a, Self>) {
        use std::borrow::Cow;
        let (n, m) = (a.conductor(), b.conductor());
        if n == m {
            return (Cow::Borrowed(a), Cow::Borrowed(b));
        }
        let l = n.lcm(&m);
        let lift = |x: &'a Self| -> Cow<'a, Self> {
            if x.conductor() == l {
                Cow::Borrowed(x)
            } else {
                Cow::Owned(x.lift(l).expect("lcm is a multiple"))
            }
        };
        (lift(a), lift(b))
    }

    fn add_same(&self, rhs: &Self, negate: bool) -> Self {
        let num: Vec<BigInt> = if self.den == rhs.den {
            self.num
                .iter()
                .zip(&rhs.num)
                .map(|(a, b)| if negate { a - b } else { a + b })
                .collect()
        } else {
            self.num
                .iter()
                .zip(&rhs.num)
                .map(|(a, b)| {
                    let (x, y) = (a * &rhs.den, b * &self.den);
                    if negate {
                        x - y
                    } else {
                        x + y
                    }
                })
                .collect()
        };
        let den = if self.den == rhs.den {
            self.den.clone()
        } else {
            &self.den * &rhs.den
        };
        Self::from_parts(Arc::clone(&self.field), num, den)
    }

    fn mul_same(&self, rhs: &Self) -> Self {
        let phi = self.field.degree();
        let mut poly = vec![BigInt::zero(); 2 * phi - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.num.iter().enumerate() {
                if !b.is_zero() {
                    poly[i + j] += a * b;
                }
            }
        }
        self.field.reduce(&mut poly);
        Self::from_parts(Arc::clone(&self.field), poly, &self.den * &rhs.den)
    }
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = CycNum::aligned(self, other);
        a.den == b.den && a.num == b.num
    }
}

impl Eq for CycNum {}

impl<'a> Add<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn add(self, rhs: &'a CycNum) -> CycNum {
        let (a, b) = CycNum::aligned(self, rhs);
        a.add_same(&b, false)
    }
}

impl<'a> Sub<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &'a CycNum) -> CycNum {
        let (a, b) = CycNum::aligned(self, rhs);
        a.add_same(&b, true)
    }
}

impl<'a> Mul<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &'a CycNum) -> CycNum {
        let (a, b) = CycNum::aligned(self, rhs);
        a.mul_same(&b)
    }
}

macro_rules! owned_binop {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: CycNum) -> CycNum {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a CycNum> for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: &'a CycNum) -> CycNum {
                (&self).$method(rhs)
            }
        }
    )*};
}

owned_binop!(Add add, Sub sub, Mul mul);

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            field: Arc::clone(&self.field),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum({}: {})", self.conductor(), self)
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.conductor();
        let mut first = true;
        for (j, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match j {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => write!(f, "z{n}^{j}")?,
                _ => write!(f, "{mag}*z{n}^{j}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CycNumWire {
    conductor: u32,
    coeffs: Vec<String>,
}

impl Serialize for CycNum {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        CycNumWire {
            conductor: self.conductor(),
            coeffs: self.coeffs().iter().map(ToString::to_string).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CycNum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = CycNumWire::deserialize(deserializer)?;
        let coeffs = wire
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        CycNum::from_coeffs(wire.conductor, &coeffs).map_err(serde::de::Error::custom)
    }
}

/// Parses `"p"` or `"p/q"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational, CycError> {
    let bad = || CycError::Parse(format!("invalid rational {s:?}"));
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

/// ζ_N^k in canonical form.
pub fn cyc_root(conductor: u32, k: i64) -> Result<CycNum, CycError> {
    CycNum::root(conductor, k)
}

/// The same element in Q(ζ_M); M must be a multiple of the current conductor.
pub fn lift_conductor(a: &CycNum, conductor: u32) -> Result<CycNum, CycError> {
    a.lift(conductor)
}

/// Conductor in which √e is built: lcm(24, 2e).
pub fn sqrt_conductor(e: u32) -> u32 {
    24u32.lcm(&(2 * e))
}

/// The positive square root of `e`, built exactly as
/// ζ₂₄^(3(e−1)) · Σ_{k=0}^{e−1} ζ_{2e}^(k²+ek) and returned in Q(ζ_target).
pub fn sqrt_e(e: u32, target_conductor: u32) -> Result<CycNum, CycError> {
    if e == 0 || target_conductor == 0 {
        return Err(CycError::InvalidConductor);
    }
    let home = sqrt_conductor(e);
    if !target_conductor.is_multiple_of(home) {
        return Err(CycError::IncompatibleConductor {
            from: home,
            to: target_conductor,
        });
    }
    let root = gauss_sum(e).lift(home)? * CycNum::root(home, (home / 24 * 3 * (e - 1)) as i64)?;
    root.lift(target_conductor)
}

/// Σ_{k=0}^{e−1} ζ_e^((k²+ek)/2), read as ζ_{2e}^(k²+ek) in conductor 2e.
pub fn gauss_sum(e: u32) -> CycNum {
    let n = 2 * e as i64;
    let mut g = vec![0i64; n as usize];
    for k in 0..e as i64 {
        g[((k * k + e as i64 * k) % n) as usize] += 1;
    }
    CycNum::from_group_ring(n as u32, &g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(n: u32, k: i64) -> CycNum {
        CycNum::root(n, k).unwrap()
    }

    fn q(p: i64, d: i64) -> Rational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(z(4, 2), CycNum::from_int(4, -1));
        assert!(z(7, 0).is_one());
        assert!(z(12, 7).pow(12).is_one());
        let w = z(12, 7).to_c64();
        let angle = 2.0 * std::f64::consts::PI * 7.0 / 12.0;
        assert!((w.re - angle.cos()).abs() < 1e-12 && (w.im - angle.sin()).abs() < 1e-12);
        assert_eq!(z(5, -1), z(5, 4));
        assert_eq!(cyc_root(0, 1).unwrap_err(), CycError::InvalidConductor);
    }

    #[test]
    fn basic_arithmetic() {
        assert_eq!(&z(4, 1) * &z(4, 1), CycNum::from_int(4, -1));
        assert_eq!(&z(3, 1) + &z(3, 2), CycNum::from_int(3, -1));
        let a = &CycNum::one(5) + &z(5, 1);
        assert!(a.checked_div(&a).unwrap().is_one());
        assert_eq!(
            CycNum::one(5).checked_div(&CycNum::zero(5)).unwrap_err(),
            CycError::DivisionByZero
        );
    }

    #[test]
    fn conjugation() {
        assert_eq!(z(9, 2).conj(), z(9, -2));
        let r = CycNum::from_rational(7, &q(3, 5));
        assert_eq!(r.conj(), r);
        let a = &CycNum::one(5) + &z(5, 1);
        let n = (&a.conj() * &a).to_c64();
        assert!(n.im.abs() < 1e-12);
        assert!((&a.conj() * &a).is_real());
    }

    #[test]
    fn lifting() {
        let minus_one = CycNum::from_int(2, -1);
        assert_eq!(minus_one.lift(4).unwrap(), z(4, 2));
        let x = &z(5, 2) + &CycNum::from_rational(5, &q(1, 3));
        assert_eq!(x.lift(5).unwrap(), x);
        assert_eq!(&z(3, 1).lift(12).unwrap() * &z(4, 1).lift(12).unwrap(), z(12, 7));
        assert_eq!(
            z(3, 1).lift(8).unwrap_err(),
            CycError::IncompatibleConductor { from: 3, to: 8 }
        );
        // Mixed conductors meet at the lcm.
        assert_eq!((&z(3, 1) * &z(4, 1)).conductor(), 12);
    }

    #[test]
    fn square_roots() {
        assert!(sqrt_e(1, 24).unwrap().is_one());
        let two = sqrt_e(4, 24).unwrap();
        assert_eq!(two, CycNum::from_int(24, 2));
        let r2 = sqrt_e(2, 24).unwrap().to_c64();
        assert!((r2.re - std::f64::consts::SQRT_2).abs() < 1e-9 && r2.im.abs() < 1e-12);
        for e in 1..=24u32 {
            let s = sqrt_e(e, sqrt_conductor(e)).unwrap();
            assert_eq!(&s * &s, CycNum::from_int(sqrt_conductor(e), e), "e = {e}");
            let c = s.to_c64();
            assert!(c.re > 0.0 && c.im.abs() < 1e-9, "e = {e}");
        }
        assert!(matches!(
            sqrt_e(5, 24),
            Err(CycError::IncompatibleConductor { .. })
        ));
    }

    #[test]
    fn serde_round_trip() {
        let x = &z(12, 5) + &CycNum::from_rational(12, &q(-7, 4));
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"{"conductor":12,"coeffs":["-7/4","-1","0","1"]}"#);
        let back: CycNum = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<CycNum>(r#"{"conductor":5,"coeffs":["1"]}"#).is_err());
    }

    #[test]
    fn display() {
        let x = &z(8, 1) - &CycNum::from_rational(8, &q(1, 2));
        assert_eq!(x.to_string(), "-1/2 + z8^1");
        assert_eq!(CycNum::zero(3).to_string(), "0");
    }

    #[test]
    fn norm_and_inverse() {
        // N(1 - ζ_p) = p
        assert_eq!((CycNum::one(7) - z(7, 1)).norm(), q(7, 1));
        let x = &z(15, 4) + &CycNum::from_rational(15, &q(2, 3));
        assert!((&x * &x.inv().unwrap()).is_one());
    }

    fn arb_cyc(n: u32) -> impl Strategy<Value = CycNum> {
        let phi = field(n).unwrap().degree();
        (prop::collection::vec((-20i64..20, 1i64..6), phi)).prop_map(move |cs| {
            let cs: Vec<Rational> = cs.into_iter().map(|(a, b)| q(a, b)).collect();
            CycNum::from_coeffs(n, &cs).unwrap()
        })
    }

    fn arb_pair() -> impl Strategy<Value = (CycNum, CycNum)> {
        prop::sample::select(vec![3u32, 4, 5, 8, 9, 12, 15, 24])
            .prop_flat_map(|n| (arb_cyc(n), arb_cyc(n)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn conj_is_an_involution((a, _b) in arb_pair()) {
            prop_assert_eq!(a.conj().conj(), a);
        }

        #[test]
        fn embedding_is_multiplicative((a, b) in arb_pair()) {
            let lhs = (&a * &b).to_c64();
            let rhs = a.to_c64() * b.to_c64();
            let scale = 1.0 + lhs.norm();
            prop_assert!((lhs - rhs).norm() < 1e-9 * scale);
        }

        #[test]
        fn field_axioms((a, b) in arb_pair()) {
            prop_assert!((&a - &a).is_zero());
            prop_assert!((&a - &a).numerator().iter().all(Zero::is_zero));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            if !b.is_zero() {
                prop_assert_eq!(a.checked_div(&b).unwrap() * &b, a.clone());
            }
        }

        #[test]
        fn random_expressions_cancel(seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = [5u32, 8, 12][rng.random_range(0..3)];
            let mut a = CycNum::one(n);
            for _ in 0..100 {
                let t = z(n, rng.random_range(0..n as i64));
                let c = CycNum::from_rational(n, &q(rng.random_range(-3..4), rng.random_range(1..4)));
                a = match rng.random_range(0..3) {
                    0 => &a + &(&t * &c),
                    1 => &a - &t,
                    _ => if (&a * &t).is_zero() { a } else { &(&a * &t) * &c + &CycNum::one(n) },
                };
            }
            let diff = &a - &a;
            prop_assert!(diff.is_zero());
            prop_assert!(diff.denominator().is_one());
        }
    }
}
