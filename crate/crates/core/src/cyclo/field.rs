//! Cyclotomic polynomials and the per-conductor field descriptors.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::Zero;

use super::CycError;

/// Q(ζ_N) presented as Q[x]/(Φ_N(x)).
#[derive(Debug)]
pub struct CyclotomicField {
    conductor: u32,
    /// Coefficients of Φ_N, lowest degree first. Monic, length φ(N) + 1.
    modulus: Vec<i64>,
    /// max over 0 ≤ t < N of the largest coefficient of x^t mod Φ_N (absolute value).
    monomial_bound: u64,
}

impl CyclotomicField {
    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Degree of the field over Q, i.e. φ(N).
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }

    pub(crate) fn monomial_bound(&self) -> u64 {
        self.monomial_bound
    }

    /// Reduces a polynomial modulo Φ_N in place, leaving exactly φ(N) coefficients.
    pub(crate) fn reduce(&self, poly: &mut Vec<BigInt>) {
        let phi = self.degree();
        if poly.len() < phi {
            poly.resize(phi, BigInt::zero());
            return;
        }
        for top in (phi..poly.len()).rev() {
            let c = std::mem::take(&mut poly[top]);
            if c.is_zero() {
                continue;
            }
            for (t, &m) in self.modulus[..phi].iter().enumerate() {
                if m != 0 {
                    poly[top - phi + t] -= &c * m;
                }
            }
        }
        poly.truncate(phi);
    }

    /// Canonical form of the group-ring element Σ_t g[t] x^t, t taken mod N.
    pub(crate) fn reduce_group_ring(&self, g: &[i64]) -> Vec<BigInt> {
        let n = self.conductor as usize;
        let mut poly = vec![BigInt::zero(); n.max(self.degree())];
        for (t, &c) in g.iter().enumerate() {
            if c != 0 {
                poly[t % n] += c;
            }
        }
        self.reduce(&mut poly);
        poly
    }
}

fn registry() -> &'static RwLock<HashMap<u32, Arc<CyclotomicField>>> {
    static FIELDS: OnceLock<RwLock<HashMap<u32, Arc<CyclotomicField>>>> = OnceLock::new();
    FIELDS.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Returns the (cached) descriptor of Q(ζ_N).
pub fn field(conductor: u32) -> Result<Arc<CyclotomicField>, CycError> {
    if conductor == 0 {
        return Err(CycError::InvalidConductor);
    }
    if let Some(f) = registry().read().expect("field registry poisoned").get(&conductor) {
        return Ok(Arc::clone(f));
    }
    // Built outside the lock: construction recurses into the divisors' fields.
    let built = Arc::new(build_field(conductor)?);
    let mut map = registry().write().expect("field registry poisoned");
    Ok(Arc::clone(map.entry(conductor).or_insert(built)))
}

/// Coefficients of the N-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(conductor: u32) -> Result<Vec<i64>, CycError> {
    Ok(field(conductor)?.modulus.clone())
}

fn build_field(n: u32) -> Result<CyclotomicField, CycError> {
    // x^N - 1 divided by Φ_d for every proper divisor d.
    let mut quotient: Vec<i128> = vec![0; n as usize + 1];
    quotient[0] = -1;
    quotient[n as usize] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        let divisor = field(d)?;
        quotient = divide_exact(&quotient, &divisor.modulus).ok_or(CycError::Overflow(n))?;
    }
    let modulus = quotient
        .into_iter()
        .map(|c| i64::try_from(c).map_err(|_| CycError::Overflow(n)))
        .collect::<Result<Vec<_>, _>>()?;
    let monomial_bound = monomial_bound(n, &modulus).ok_or(CycError::Overflow(n))?;
    Ok(CyclotomicField {
        conductor: n,
        modulus,
        monomial_bound,
    })
}

/// Exact division by a monic polynomial; `None` on overflow.
fn divide_exact(num: &[i128], den: &[i64]) -> Option<Vec<i128>> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dd;
    let mut q = vec![0i128; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dd];
        q[k] = c;
        if c != 0 {
            for (t, &m) in den.iter().enumerate() {
                rem[k + t] = rem[k + t].checked_sub(c.checked_mul(m as i128)?)?;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    Some(q)
}

fn monomial_bound(n: u32, modulus: &[i64]) -> Option<u64> {
    let phi = modulus.len() - 1;
    let mut r = vec![0i128; phi];
    r[0] = 1;
    let mut best = 1u64;
    for _ in 1..n {
        let top = r[phi - 1];
        for j in (1..phi).rev() {
            r[j] = r[j - 1];
        }
        r[0] = 0;
        if top != 0 {
            for (j, rj) in r.iter_mut().enumerate() {
                *rj = rj.checked_sub(top.checked_mul(modulus[j] as i128)?)?;
            }
        }
        let m = r.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0);
        best = best.max(u64::try_from(m).ok()?);
    }
    Some(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly_mul(a: &[i128], b: &[i64]) -> Vec<i128> {
        let mut out = vec![0i128; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] += x * y as i128;
            }
        }
        out
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1).unwrap(), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2).unwrap(), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4).unwrap(), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6).unwrap(), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12).unwrap(), vec![1, 0, -1, 0, 1]);
        // First conductor with a coefficient of absolute value 2.
        assert!(cyclotomic_polynomial(105).unwrap().contains(&-2));
    }

    #[test]
    fn divisor_product_is_x_n_minus_one() {
        for n in 1..=200u32 {
            let mut prod: Vec<i128> = vec![1];
            for d in (1..=n).filter(|d| n % d == 0) {
                let phi_d = cyclotomic_polynomial(d).unwrap();
                prod = poly_mul(&prod, &phi_d);
            }
            let mut expected = vec![0i128; n as usize + 1];
            expected[0] = -1;
            expected[n as usize] = 1;
            assert_eq!(prod, expected, "conductor {n}");
        }
    }

    #[test]
    fn degree_is_totient() {
        for n in 1..=60u32 {
            let totient = (1..=n).filter(|k| num_integer::gcd(*k, n) == 1).count();
            assert_eq!(field(n).unwrap().degree(), totient, "conductor {n}");
        }
    }

    #[test]
    fn conductor_zero_rejected() {
        assert_eq!(field(0).unwrap_err(), CycError::InvalidConductor);
    }
}
