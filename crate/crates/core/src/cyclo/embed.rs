//! Fixed-point complex numbers and the canonical embedding ζ_N ↦ exp(2πi/N).
//!
//! Numbers are stored as big integers scaled by 2^frac_bits. This is a
//! diagnostic channel: nothing on the exact path depends on these values.

use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::CycNum;

const GUARD_BITS: u32 = 32;

/// A complex number `(re + i·im) / 2^frac_bits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HiComplex {
    pub re: BigInt,
    pub im: BigInt,
    pub frac_bits: u32,
}

fn to_f64_scaled(x: &BigInt, frac_bits: u32) -> f64 {
    if frac_bits > 60 {
        let shifted: BigInt = x >> (frac_bits - 60);
        shifted.to_f64().unwrap_or(f64::NAN) / 2f64.powi(60)
    } else {
        x.to_f64().unwrap_or(f64::NAN) / 2f64.powi(frac_bits as i32)
    }
}

impl HiComplex {
    pub fn zero(frac_bits: u32) -> Self {
        HiComplex {
            re: BigInt::zero(),
            im: BigInt::zero(),
            frac_bits,
        }
    }

    pub fn from_int(v: &BigInt, frac_bits: u32) -> Self {
        HiComplex {
            re: v << frac_bits,
            im: BigInt::zero(),
            frac_bits,
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(
            to_f64_scaled(&self.re, self.frac_bits),
            to_f64_scaled(&self.im, self.frac_bits),
        )
    }

    pub fn conj(&self) -> Self {
        HiComplex {
            re: self.re.clone(),
            im: -&self.im,
            frac_bits: self.frac_bits,
        }
    }

    /// Squared modulus, same scaling.
    pub fn norm_sqr(&self) -> BigInt {
        (&self.re * &self.re + &self.im * &self.im) >> self.frac_bits
    }

    pub fn div(&self, rhs: &Self) -> Self {
        assert_eq!(self.frac_bits, rhs.frac_bits);
        let f = self.frac_bits;
        let den = &rhs.re * &rhs.re + &rhs.im * &rhs.im;
        assert!(!den.is_zero(), "division by a numerically zero value");
        let re = &self.re * &rhs.re + &self.im * &rhs.im;
        let im = &self.im * &rhs.re - &self.re * &rhs.im;
        HiComplex {
            re: (re << f) / &den,
            im: (im << f) / &den,
            frac_bits: f,
        }
    }

    /// Rescales to a different number of fractional bits (truncating).
    pub fn with_frac_bits(&self, frac_bits: u32) -> Self {
        let shift = |x: &BigInt| {
            if frac_bits >= self.frac_bits {
                x << (frac_bits - self.frac_bits)
            } else {
                x >> (self.frac_bits - frac_bits)
            }
        };
        HiComplex {
            re: shift(&self.re),
            im: shift(&self.im),
            frac_bits,
        }
    }

    /// Distance to the nearest Gaussian integer, and that integer's real part,
    /// provided the imaginary part rounds to zero.
    pub fn round_real(&self) -> (BigInt, f64) {
        let half = BigInt::one() << (self.frac_bits - 1);
        let r = (&self.re + &half) >> self.frac_bits;
        let dre = &self.re - (&r << self.frac_bits);
        let dev = to_f64_scaled(&dre, self.frac_bits)
            .abs()
            .max(to_f64_scaled(&self.im, self.frac_bits).abs());
        (r, dev)
    }
}

impl Add for &HiComplex {
    type Output = HiComplex;
    fn add(self, rhs: &HiComplex) -> HiComplex {
        debug_assert_eq!(self.frac_bits, rhs.frac_bits);
        HiComplex {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
            frac_bits: self.frac_bits,
        }
    }
}

impl Sub for &HiComplex {
    type Output = HiComplex;
    fn sub(self, rhs: &HiComplex) -> HiComplex {
        debug_assert_eq!(self.frac_bits, rhs.frac_bits);
        HiComplex {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
            frac_bits: self.frac_bits,
        }
    }
}

impl Mul for &HiComplex {
    type Output = HiComplex;
    fn mul(self, rhs: &HiComplex) -> HiComplex {
        debug_assert_eq!(self.frac_bits, rhs.frac_bits);
        let f = self.frac_bits;
        HiComplex {
            re: (&self.re * &rhs.re - &self.im * &rhs.im) >> f,
            im: (&self.re * &rhs.im + &self.im * &rhs.re) >> f,
            frac_bits: f,
        }
    }
}

impl Neg for &HiComplex {
    type Output = HiComplex;
    fn neg(self) -> HiComplex {
        HiComplex {
            re: -&self.re,
            im: -&self.im,
            frac_bits: self.frac_bits,
        }
    }
}

/// arctan(1/x) scaled by 2^bits.
fn atan_inv(x: u32, bits: u32) -> BigInt {
    let one = BigInt::one() << bits;
    let x2 = BigInt::from(x) * x;
    let mut power = &one / x;
    let mut sum = power.clone();
    let mut k = 1u64;
    loop {
        power = &power / &x2;
        if power.is_zero() {
            break;
        }
        let term = &power / (2 * k + 1);
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    sum
}

/// π scaled by 2^bits (Machin's formula).
fn pi_fixed(bits: u32) -> BigInt {
    let w = bits + GUARD_BITS;
    let pi = atan_inv(5, w) * 16 - atan_inv(239, w) * 4;
    pi >> GUARD_BITS
}

/// (cos θ, sin θ) for θ given scaled by 2^bits, |θ| ≤ 4.
fn cos_sin(theta: &BigInt, bits: u32) -> (BigInt, BigInt) {
    let one = BigInt::one() << bits;
    let t2 = (theta * theta) >> bits;
    let mut cos = one.clone();
    let mut sin = theta.clone();
    let mut ct = one;
    let mut st = theta.clone();
    let mut k = 1u64;
    loop {
        ct = -((&ct * &t2) >> bits) / ((2 * k - 1) * (2 * k));
        st = -((&st * &t2) >> bits) / ((2 * k) * (2 * k + 1));
        if ct.is_zero() && st.is_zero() {
            break;
        }
        cos += &ct;
        sin += &st;
        k += 1;
    }
    (cos, sin)
}

type PowerTable = Arc<Vec<(BigInt, BigInt)>>;

/// ζ_N^j for 0 ≤ j < N at `bits` fractional bits, each computed directly
/// from cos/sin of 2πj/N after reduction to [−π, π].
fn root_powers(n: u32, bits: u32) -> PowerTable {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), PowerTable>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&(n, bits)) {
        return Arc::clone(t);
    }
    let w = bits + GUARD_BITS;
    let pi = pi_fixed(w);
    let table: Vec<(BigInt, BigInt)> = (0..n as i64)
        .map(|j| {
            // angle 2πj/N, shifted into (−π, π]
            let jj = if 2 * j > n as i64 { j - n as i64 } else { j };
            let theta = (&pi * (2 * jj)) / n as i64;
            let (c, s) = cos_sin(&theta, w);
            (c >> GUARD_BITS, s >> GUARD_BITS)
        })
        .collect();
    let table = Arc::new(table);
    cache
        .lock()
        .unwrap()
        .insert((n, bits), Arc::clone(&table));
    table
}

/// Approximates the canonical complex embedding of `a` with absolute error
/// at most about (‖num‖₁/den + 1)·2^(1−bits).
pub fn embed_complex(a: &CycNum, bits: u32) -> HiComplex {
    let bits = bits.max(53);
    let table = root_powers(a.conductor(), bits);
    let mut re = BigInt::zero();
    let mut im = BigInt::zero();
    for (c, (cr, ci)) in a.numerator().iter().zip(table.iter()) {
        if !c.is_zero() {
            re += c * cr;
            im += c * ci;
        }
    }
    let den = a.denominator();
    let div = |x: BigInt| {
        if den.is_one() {
            x
        } else {
            // round to nearest
            let half = den >> 1u32;
            if x.is_negative() {
                -((-x + &half) / den)
            } else {
                (x + &half) / den
            }
        }
    };
    HiComplex {
        re: div(re),
        im: div(im),
        frac_bits: bits,
    }
}

impl CycNum {
    /// Double-precision value of the canonical embedding.
    pub fn to_c64(&self) -> Complex64 {
        embed_complex(self, 64).to_c64()
    }
}
