//! Multi-modular evaluation for the hot exact kernels.
//!
//! For a prime p ≡ 1 (mod N), Φ_N splits into linear factors over F_p, with
//! roots ω^t for t coprime to N. An integral element of Z[ζ_N] is therefore
//! represented mod p by its φ(N) values at those roots ("slots"); products
//! become pointwise and complex conjugation is the slot permutation t ↦ N−t.
//! Exact integer coefficients are recovered by interpolation and CRT once
//! the product of the primes exceeds twice a known coefficient bound.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use super::CycNum;

/// Primes stay below 2^28 so that 255 products of two residues fit in a u64.
pub(crate) const PRIME_BITS: u32 = 28;

#[cfg(test)]
#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // n < 2^28, so these witnesses are deterministic and products fit in u64.
    'witness: for a in [2u64, 3, 5, 7] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = x * x % n;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// One prime with its evaluation data for conductor N.
pub(crate) struct SlotPrime {
    pub p: u64,
    /// Exponents t, 0 < t < N, coprime to N, ascending.
    pub slots: Vec<u32>,
    /// ω^k for 0 ≤ k < N.
    powers: Vec<u64>,
    /// slot index of N − t, for each slot index.
    pub conj_perm: Vec<usize>,
    /// Inverse of the φ×φ matrix (ω^(t·j)), row-major, maps values to coefficients.
    inv_vandermonde: Vec<u64>,
}

impl SlotPrime {
    fn new(n: u32, p: u64) -> Self {
        let group = p - 1;
        let factors = prime_factors(group);
        let g = (2..p)
            .find(|&g| factors.iter().all(|&q| pow_mod(g, group / q, p) != 1))
            .expect("F_p^* is cyclic");
        let omega = pow_mod(g, group / n as u64, p);
        let powers: Vec<u64> = (0..n as u64).map(|k| pow_mod(omega, k, p)).collect();
        let slots: Vec<u32> = (0..n).filter(|&t| t.gcd(&n) == 1).collect();
        let index: HashMap<u32, usize> = slots.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let conj_perm = slots.iter().map(|&t| index[&((n - t) % n)]).collect();
        let phi = slots.len();
        let mut vander = vec![0u64; phi * phi];
        for (r, &t) in slots.iter().enumerate() {
            for j in 0..phi {
                vander[r * phi + j] = powers[(t as usize * j) % n as usize];
            }
        }
        let inv_vandermonde = invert_mod(&vander, phi, p);
        SlotPrime {
            p,
            slots,
            powers,
            conj_perm,
            inv_vandermonde,
        }
    }

    pub fn phi(&self) -> usize {
        self.slots.len()
    }

    /// Values at every slot of the polynomial Σ c_j x^j, coefficients already mod p.
    pub fn eval_residues(&self, coeffs: &[u64]) -> Vec<u64> {
        let n = self.powers.len();
        self.slots
            .iter()
            .map(|&t| {
                let mut acc = 0u64;
                let mut k = 0usize;
                for &c in coeffs {
                    if c != 0 {
                        acc = (acc + c * self.powers[k]) % self.p;
                    }
                    k += t as usize;
                    if k >= n {
                        k -= n;
                    }
                }
                acc
            })
            .collect()
    }

    /// Slot values of an integral element given by its power-basis numerator.
    pub fn eval(&self, num: &[BigInt]) -> Vec<u64> {
        let res: Vec<u64> = num.iter().map(|c| residue(c, self.p)).collect();
        self.eval_residues(&res)
    }

    /// Power-basis coefficients mod p of the element with the given slot values.
    pub fn interpolate(&self, values: &[u64]) -> Vec<u64> {
        let phi = self.phi();
        (0..phi)
            .map(|j| {
                let row = &self.inv_vandermonde[j * phi..(j + 1) * phi];
                row.iter()
                    .zip(values)
                    .fold(0u64, |acc, (&a, &v)| (acc + a * v) % self.p)
            })
            .collect()
    }

    pub fn conj(&self, values: &[u64]) -> Vec<u64> {
        self.conj_perm.iter().map(|&s| values[s]).collect()
    }
}

fn invert_mod(m: &[u64], n: usize, p: u64) -> Vec<u64> {
    let mut a = m.to_vec();
    let mut inv = vec![0u64; n * n];
    for i in 0..n {
        inv[i * n + i] = 1;
    }
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| a[r * n + col] != 0)
            .expect("Vandermonde matrix on distinct nodes is invertible");
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
                inv.swap(pivot * n + k, col * n + k);
            }
        }
        let s = inv_mod(a[col * n + col], p);
        for k in 0..n {
            a[col * n + k] = a[col * n + k] * s % p;
            inv[col * n + k] = inv[col * n + k] * s % p;
        }
        for r in 0..n {
            let f = a[r * n + col];
            if r == col || f == 0 {
                continue;
            }
            for k in 0..n {
                a[r * n + k] = (a[r * n + k] + (p - f) * a[col * n + k]) % p;
                inv[r * n + k] = (inv[r * n + k] + (p - f) * inv[col * n + k]) % p;
            }
        }
    }
    inv
}

pub(crate) fn residue(c: &BigInt, p: u64) -> u64 {
    let r = c.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue below modulus")
}

type PrimeList = Arc<Mutex<Vec<Arc<SlotPrime>>>>;

fn prime_list(n: u32) -> PrimeList {
    static CACHE: OnceLock<Mutex<HashMap<u32, PrimeList>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().unwrap();
    Arc::clone(guard.entry(n).or_default())
}

/// The first `count` primes p ≡ 1 (mod N) below 2^28, searching downward.
pub(crate) fn slot_primes(n: u32, count: usize) -> Vec<Arc<SlotPrime>> {
    let list = prime_list(n);
    let mut primes = list.lock().unwrap();
    let step = n as u64;
    let mut candidate = match primes.last() {
        Some(last) => last.p - step,
        None => ((1u64 << PRIME_BITS) - 1) / step * step + 1,
    };
    while primes.len() < count {
        if candidate > (1u64 << PRIME_BITS) {
            candidate -= step;
            continue;
        }
        assert!(candidate > step, "ran out of primes for conductor {n}");
        if is_prime(candidate) {
            primes.push(Arc::new(SlotPrime::new(n, candidate)));
        }
        candidate -= step;
    }
    primes[..count].to_vec()
}

/// Enough primes for conductor N to recover integers of absolute value ≤ bound.
pub(crate) fn primes_for_bound(n: u32, bound: &BigInt) -> Vec<Arc<SlotPrime>> {
    let target = bound * 2u32 + 1u32;
    let mut count = 1usize;
    loop {
        let primes = slot_primes(n, count);
        let product: BigInt = primes.iter().map(|q| BigInt::from(q.p)).product();
        if product > target {
            return primes;
        }
        let bits_short = (target.bits() - product.bits()) as usize;
        count += bits_short / (PRIME_BITS as usize - 1) + 1;
    }
}

/// Combines residues modulo distinct primes into the centered representative.
pub(crate) struct Crt {
    moduli: Vec<u64>,
    /// (p_0 ⋯ p_{i−1})^(−1) mod p_i
    coefs: Vec<u64>,
    partial: Vec<BigInt>,
    modulus: BigInt,
}

impl Crt {
    pub fn new(primes: &[Arc<SlotPrime>]) -> Self {
        let moduli: Vec<u64> = primes.iter().map(|q| q.p).collect();
        let mut partial = vec![BigInt::one()];
        let mut coefs = vec![1u64];
        for i in 1..moduli.len() {
            let prev = &partial[i - 1] * moduli[i - 1];
            coefs.push(inv_mod(residue(&prev, moduli[i]), moduli[i]));
            partial.push(prev);
        }
        let modulus = partial.last().unwrap() * *moduli.last().unwrap();
        Crt {
            moduli,
            coefs,
            partial,
            modulus,
        }
    }

    /// Mixed-radix reconstruction, then centering into (−M/2, M/2].
    pub fn combine(&self, residues: &[u64]) -> BigInt {
        if self.moduli.len() == 1 {
            let (p, r) = (self.moduli[0], residues[0]);
            return if r > p / 2 {
                BigInt::from(r) - p
            } else {
                BigInt::from(r)
            };
        }
        let mut x = BigInt::from(residues[0]);
        for i in 1..self.moduli.len() {
            let p = self.moduli[i];
            let cur = residue(&x, p);
            let diff = (residues[i] + p - cur) % p;
            let t = diff * self.coefs[i] % p;
            if t != 0 {
                x += &self.partial[i] * t;
            }
        }
        let half: BigInt = &self.modulus >> 1u32;
        if x > half {
            x -= &self.modulus;
        }
        x
    }
}

#[cfg(test)]
/// Slot values of an integral CycNum (denominator must be 1) for each prime.
pub(crate) fn eval_all(a: &CycNum, primes: &[Arc<SlotPrime>]) -> Vec<Vec<u64>> {
    debug_assert!(a.denominator().is_one());
    primes.iter().map(|q| q.eval(a.numerator())).collect()
}

/// Exact integral coefficients from per-prime slot values.
pub(crate) fn reconstruct(primes: &[Arc<SlotPrime>], crt: &Crt, values: &[Vec<u64>]) -> Vec<BigInt> {
    let coeffs: Vec<Vec<u64>> = primes
        .iter()
        .zip(values)
        .map(|(q, v)| q.interpolate(v))
        .collect();
    let phi = primes[0].phi();
    (0..phi)
        .map(|j| {
            let res: Vec<u64> = coeffs.iter().map(|c| c[j]).collect();
            crt.combine(&res)
        })
        .collect()
}

#[cfg(test)]
/// Largest absolute coefficient, as a bound for CRT.
pub(crate) fn max_abs(v: &[BigInt]) -> BigInt {
    v.iter().map(|c| c.abs()).max().unwrap_or_default()
}

/// Brings a list of values to a common conductor and denominator.
/// Returns (conductor, integral numerators, common denominator).
pub(crate) fn integerize<'a>(
    values: impl IntoIterator<Item = &'a CycNum>,
) -> (u32, Vec<Vec<BigInt>>, BigInt) {
    let values: Vec<&CycNum> = values.into_iter().collect();
    let n = values.iter().fold(1u32, |acc, v| acc.lcm(&v.conductor()));
    let den = values
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denominator()));
    let nums = values
        .iter()
        .map(|v| {
            let lifted = v.lift(n).expect("lcm conductor");
            let f = &den / lifted.denominator();
            lifted.numerator().iter().map(|c| c * &f).collect()
        })
        .collect();
    (n, nums, den)
}

fn l1(v: &[BigInt]) -> BigInt {
    v.iter().map(|c| c.abs()).sum()
}

/// Exact product of an r×k and a k×c matrix (row-major), optionally
/// conjugating every entry of the right factor first.
pub(crate) fn mat_mul(
    a: &[CycNum],
    b: &[CycNum],
    r: usize,
    k: usize,
    c: usize,
    conj_b: bool,
) -> Vec<CycNum> {
    assert_eq!(a.len(), r * k);
    assert_eq!(b.len(), k * c);
    let (na, an, ad) = integerize(a);
    let (nb, bn, bd) = integerize(b);
    let n = na.lcm(&nb);
    let lift = |nums: Vec<Vec<BigInt>>, from: u32| -> Vec<Vec<BigInt>> {
        if from == n {
            return nums;
        }
        let f = super::field(from).expect("valid conductor");
        nums.into_iter()
            .map(|v| {
                CycNum::from_integral(&f, v, BigInt::one())
                    .lift(n)
                    .expect("lcm conductor")
                    .numerator()
                    .to_vec()
            })
            .collect()
    };
    let an = lift(an, na);
    let bn = lift(bn, nb);
    let field = super::field(n).expect("valid conductor");
    let a_l1: Vec<BigInt> = an.iter().map(|v| l1(v)).collect();
    let b_l1: Vec<BigInt> = bn.iter().map(|v| l1(v)).collect();
    // conjugation keeps the group-ring L1 norm of a power-basis element
    let max_b: Vec<BigInt> = (0..k)
        .map(|t| (0..c).map(|j| b_l1[t * c + j].clone()).max().unwrap_or_default())
        .collect();
    let bound = (0..r)
        .map(|i| {
            (0..k)
                .map(|t| &a_l1[i * k + t] * &max_b[t])
                .sum::<BigInt>()
        })
        .max()
        .unwrap_or_default()
        * field.monomial_bound();
    let primes = primes_for_bound(n, &bound);
    let crt = Crt::new(&primes);
    let phi = field.degree();
    // values[prime][entry][slot]
    let av: Vec<Vec<Vec<u64>>> = primes
        .iter()
        .map(|q| an.iter().map(|v| q.eval(v)).collect())
        .collect();
    let bv: Vec<Vec<Vec<u64>>> = primes
        .iter()
        .map(|q| {
            bn.iter()
                .map(|v| {
                    let x = q.eval(v);
                    if conj_b {
                        q.conj(&x)
                    } else {
                        x
                    }
                })
                .collect()
        })
        .collect();
    let den = &ad * &bd;
    let mut out = Vec::with_capacity(r * c);
    for i in 0..r {
        for j in 0..c {
            let vals: Vec<Vec<u64>> = primes
                .iter()
                .enumerate()
                .map(|(pi, q)| {
                    (0..phi)
                        .map(|s| {
                            let mut acc = 0u64;
                            for t in 0..k {
                                acc = (acc + av[pi][i * k + t][s] * bv[pi][t * c + j][s]) % q.p;
                            }
                            acc
                        })
                        .collect()
                })
                .collect();
            let coeffs = reconstruct(&primes, &crt, &vals);
            out.push(CycNum::from_integral(&field, coeffs, den.clone()));
        }
    }
    out
}

/// Exact determinant of an n×n matrix (row-major) by elimination at every
/// slot modulo enough primes. The coefficient bound is the Leibniz bound
/// n! · ∏_i max_j ‖a_ij‖₁ times the largest reduced monomial.
pub(crate) fn det(a: &[CycNum], n: usize) -> CycNum {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return CycNum::one(1);
    }
    let (cond, nums, den) = integerize(a);
    let field = super::field(cond).expect("valid conductor");
    let mut bound: BigInt = (1..=n as u64).map(BigInt::from).product();
    for i in 0..n {
        bound *= (0..n).map(|j| l1(&nums[i * n + j])).max().unwrap_or_default();
    }
    bound *= field.monomial_bound();
    let primes = primes_for_bound(cond, &bound);
    let crt = Crt::new(&primes);
    let phi = field.degree();
    let vals: Vec<Vec<u64>> = primes
        .iter()
        .map(|q| {
            let ev: Vec<Vec<u64>> = nums.iter().map(|v| q.eval(v)).collect();
            (0..phi)
                .map(|s| {
                    let m: Vec<u64> = ev.iter().map(|x| x[s]).collect();
                    det_mod(m, n, q.p)
                })
                .collect()
        })
        .collect();
    let coeffs = reconstruct(&primes, &crt, &vals);
    CycNum::from_integral(&field, coeffs, den.pow(n as u32))
}

fn det_mod(mut m: Vec<u64>, n: usize, p: u64) -> u64 {
    let mut det = 1u64;
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| m[r * n + col] != 0) else {
            return 0;
        };
        if pivot != col {
            for k in 0..n {
                m.swap(pivot * n + k, col * n + k);
            }
            det = (p - det) % p;
        }
        let d = m[col * n + col];
        det = det * d % p;
        let inv = inv_mod(d, p);
        for r in col + 1..n {
            let f = m[r * n + col] * inv % p;
            if f == 0 {
                continue;
            }
            for k in col..n {
                m[r * n + k] = (m[r * n + k] + (p - f) * m[col * n + k]) % p;
            }
        }
    }
    det
}
