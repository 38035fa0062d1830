//! N_ij^l = Σ_k S_ki S_kj conj(S_kl) / S_ku, exactly.
//!
//! The fast path works modulo primes p ≡ 1 (mod N), where every element of
//! Q(ζ_N) becomes a vector of values at the primitive N-th roots of unity in
//! F_p. A constant is rational iff all its slot values agree, so integrality
//! is decided without leaving machine words except for the final CRT.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::{FusionError, FusionRing, VerlindeReport, MAX_VIOLATIONS};
use crate::cyclo::multimod::{integerize, primes_for_bound, reconstruct, Crt};
use crate::cyclo::{self, embed_complex, CycNum, HiComplex, Rational};
use crate::smatrix::ScaledMatrix;

/// A structure constant that is not an integer.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: CycNum,
}

enum Value {
    Int(i64),
    Other(CycNum),
}

/// Nonzero constants for one unordered pair i ≤ j.
type PairResult = Result<Vec<(usize, Value)>, FusionError>;

fn check_unit(m: &ScaledMatrix, unit: usize) -> Result<(), FusionError> {
    if unit >= m.size() {
        return Err(FusionError::UnitOutOfRange(unit));
    }
    if let Some(row) = (0..m.size()).find(|&k| m.entry(k, unit).is_zero()) {
        return Err(FusionError::UnitColumnZero { row });
    }
    Ok(())
}

fn classify(x: CycNum) -> Result<Option<Value>, FusionError> {
    if x.is_zero() {
        return Ok(None);
    }
    match x.as_integer() {
        Some(n) => n.to_i64().map(|v| Some(Value::Int(v))).ok_or(FusionError::Overflow(n)),
        None => Ok(Some(Value::Other(x))),
    }
}

fn assemble(m: &ScaledMatrix, unit: usize, pairs: Vec<(usize, usize)>, results: Vec<PairResult>) -> Result<VerlindeReport, FusionError> {
    let b = m.size();
    let mut products = vec![Vec::new(); b * b];
    let mut violations = Vec::new();
    for ((i, j), res) in pairs.into_iter().zip(results) {
        for (l, v) in res? {
            match v {
                Value::Int(n) => {
                    products[i * b + j].push((l as u32, n));
                    if i != j {
                        products[j * b + i].push((l as u32, n));
                    }
                }
                Value::Other(x) => {
                    if i != j {
                        violations.push(Violation { i: j, j: i, k: l, value: x.clone() });
                    }
                    violations.push(Violation { i, j, k: l, value: x });
                }
            }
        }
    }
    violations.sort_by_key(|v| (v.i, v.j, v.k));
    let violation_count = violations.len();
    violations.truncate(MAX_VIOLATIONS);
    Ok(VerlindeReport {
        ring: FusionRing::from_products(m.labels.clone(), unit, products),
        all_integer: violation_count == 0,
        violations,
        violation_count,
    })
}

fn upper_pairs(b: usize) -> Vec<(usize, usize)> {
    (0..b).flat_map(|i| (i..b).map(move |j| (i, j))).collect()
}

/// Structure constants of `m` with respect to the unit column `unit`.
pub fn verlinde(m: &ScaledMatrix, unit: usize) -> Result<VerlindeReport, FusionError> {
    check_unit(m, unit)?;
    let Some(extra_sq) = m.extra_norm_sq() else {
        return verlinde_direct(m, unit);
    };
    let b = m.size();
    let (cond, nums, l_den) = integerize(&m.entries);
    let field = cyclo::field(cond).map_err(|e| FusionError::Matrix(e.into()))?;

    // G_k = D / E_ku with one common D
    let invs: Vec<CycNum> = (0..b)
        .map(|k| {
            CycNum::from_integral(&field, nums[k * b + unit].clone(), BigInt::one())
                .inv()
                .and_then(|x| x.lift(cond))
                .map_err(|_| FusionError::UnitColumnZero { row: k })
        })
        .collect::<Result<_, _>>()?;
    let d_den = invs.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denominator()));
    let g: Vec<Vec<BigInt>> = invs
        .iter()
        .map(|x| {
            let f = &d_den / x.denominator();
            x.numerator().iter().map(|c| c * &f).collect()
        })
        .collect();

    let pow = BigInt::from(m.base).pow(m.scale_exp);
    let factor = extra_sq / Rational::from_integer(pow * &l_den * &l_den * &d_den);

    let l1 = |v: &[BigInt]| -> BigInt { v.iter().map(|c| c.abs()).sum() };
    let bound: BigInt = (0..b)
        .map(|k| {
            let a = (0..b).map(|i| l1(&nums[k * b + i])).max().unwrap_or_default();
            &a * &a * &a * l1(&g[k])
        })
        .sum::<BigInt>()
        * field.monomial_bound();
    let primes = primes_for_bound(cond, &bound);
    let crt = Crt::new(&primes);
    let phi = field.degree();

    // x[(s·B + k)·B + i] = E_ki and y[(s·B + l)·B + k] = conj(E_kl)·G_k at slot s
    let tables: Vec<(Vec<u64>, Vec<u64>)> = primes
        .iter()
        .map(|q| {
            let ev: Vec<Vec<u64>> = nums.iter().map(|v| q.eval(v)).collect();
            let gv: Vec<Vec<u64>> = g.iter().map(|v| q.eval(v)).collect();
            let mut x = vec![0u64; phi * b * b];
            let mut y = vec![0u64; phi * b * b];
            for s in 0..phi {
                let cs = q.conj_perm[s];
                for k in 0..b {
                    for i in 0..b {
                        x[(s * b + k) * b + i] = ev[k * b + i][s];
                        y[(s * b + i) * b + k] = ev[k * b + i][cs] * gv[k][s] % q.p;
                    }
                }
            }
            (x, y)
        })
        .collect();

    let pairs = upper_pairs(b);
    let results: Vec<PairResult> = pairs
        .par_iter()
        .map(|&(i, j)| {
            // vals[prime][l][slot]
            let mut vals = vec![vec![vec![0u64; phi]; b]; primes.len()];
            let mut a = vec![0u64; b];
            for (pi, q) in primes.iter().enumerate() {
                let p = q.p;
                let (x, y) = &tables[pi];
                for s in 0..phi {
                    let xs = &x[s * b * b..(s + 1) * b * b];
                    for k in 0..b {
                        a[k] = xs[k * b + i] * xs[k * b + j] % p;
                    }
                    for l in 0..b {
                        let row = &y[(s * b + l) * b..(s * b + l + 1) * b];
                        let mut acc = 0u64;
                        for (ca, cr) in a.chunks(LAZY).zip(row.chunks(LAZY)) {
                            let part: u64 = ca.iter().zip(cr).map(|(u, v)| u * v).sum();
                            acc = (acc + part % p) % p;
                        }
                        vals[pi][l][s] = acc;
                    }
                }
            }
            let mut out = Vec::new();
            for l in 0..b {
                let rational = (0..primes.len()).all(|pi| vals[pi][l].iter().all(|&v| v == vals[pi][l][0]));
                let value = if rational {
                    let res: Vec<u64> = (0..primes.len()).map(|pi| vals[pi][l][0]).collect();
                    let v = crt.combine(&res);
                    if v.is_zero() {
                        continue;
                    }
                    CycNum::from_rational(1, &(Rational::from_integer(v) * &factor))
                } else {
                    let per: Vec<Vec<u64>> = (0..primes.len()).map(|pi| vals[pi][l].clone()).collect();
                    let coeffs = reconstruct(&primes, &crt, &per);
                    CycNum::from_integral(&field, coeffs, BigInt::one()).scale(&factor)
                };
                if let Some(v) = classify(value)? {
                    out.push((l, v));
                }
            }
            Ok(out)
        })
        .collect();
    assemble(m, unit, pairs, results)
}

/// Products u·v with u, v < 2^28 summed this many times stay below 2^64.
const LAZY: usize = 255;

/// The same constants by plain exact arithmetic; slow, used as a reference
/// and when |extra_scalar|² is irrational.
pub fn verlinde_direct(m: &ScaledMatrix, unit: usize) -> Result<VerlindeReport, FusionError> {
    check_unit(m, unit)?;
    let b = m.size();
    let pow = BigInt::from(m.base).pow(m.scale_exp);
    let factor = (&m.extra_scalar * &m.extra_scalar.conj()).scale(&Rational::new(BigInt::one(), pow));
    let invs: Vec<CycNum> = (0..b)
        .map(|k| m.entry(k, unit).inv().map_err(|_| FusionError::UnitColumnZero { row: k }))
        .collect::<Result<_, _>>()?;
    let conj: Vec<CycNum> = m.entries.iter().map(CycNum::conj).collect();
    let pairs = upper_pairs(b);
    let results: Vec<PairResult> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let a: Vec<CycNum> = (0..b).map(|k| &(m.entry(k, i) * m.entry(k, j)) * &invs[k]).collect();
            let mut out = Vec::new();
            for l in 0..b {
                let sum = (0..b).fold(CycNum::zero(1), |acc, k| &acc + &(&a[k] * &conj[k * b + l]));
                if let Some(v) = classify(&sum * &factor)? {
                    out.push((l, v));
                }
            }
            Ok(out)
        })
        .collect();
    assemble(m, unit, pairs, results)
}

/// Floating-point values of selected constants, computed from embedded
/// entries with `bits` fractional bits.
pub fn verlinde_float(
    m: &ScaledMatrix,
    unit: usize,
    triples: &[(usize, usize, usize)],
    bits: u32,
) -> Result<Vec<HiComplex>, FusionError> {
    check_unit(m, unit)?;
    let b = m.size();
    let work = bits + 32;
    let emb: Vec<HiComplex> = m.entries.iter().map(|x| embed_complex(x, work)).collect();
    let inv_unit: Vec<HiComplex> = (0..b)
        .map(|k| HiComplex::from_int(&BigInt::one(), work).div(&emb[k * b + unit]))
        .collect();
    let extra_sq = embed_complex(&(&m.extra_scalar * &m.extra_scalar.conj()), work);
    let pow = HiComplex::from_int(&BigInt::from(m.base).pow(m.scale_exp), work);
    let scale = extra_sq.div(&pow);
    Ok(triples
        .iter()
        .map(|&(i, j, l)| {
            let mut acc = HiComplex::zero(work);
            for k in 0..b {
                let t = &(&(&emb[k * b + i] * &emb[k * b + j]) * &emb[k * b + l].conj()) * &inv_unit[k];
                acc = &acc + &t;
            }
            (&acc * &scale).with_frac_bits(bits)
        })
        .collect())
}
