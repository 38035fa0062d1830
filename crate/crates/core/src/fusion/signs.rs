//! Searching for column signs that make every structure constant nonnegative.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_integer::binomial;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{based_ring_axioms, verlinde, FusionError, FusionRing};
use crate::smatrix::{default_unit, dft_smatrix, exterior_power};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SignStrategy {
    /// All 2^(B−1) vectors with the unit sign fixed.
    Exhaustive { max_basis: usize },
    /// Characters of |N| compared with those of N.
    SMatrix,
    /// Linear algebra over GF(2): the sign of s_i s_j s_k N is fixed by
    /// the parity of the flipped indices, so a valid vector solves one
    /// linear equation per nonzero constant.
    Parity,
}

impl Default for SignStrategy {
    fn default() -> Self {
        SignStrategy::Exhaustive { max_basis: 24 }
    }
}

fn nonnegative(ring: &FusionRing, signs: &[i8]) -> bool {
    ring.entries()
        .all(|(i, j, k, n)| n * (signs[i] * signs[j] * signs[k]) as i64 >= 0)
}

/// A sign vector (unit sign +1) making all constants nonnegative, if any.
pub fn nonneg_sign_search(ring: &FusionRing, strategy: SignStrategy) -> Result<Option<Vec<i8>>, FusionError> {
    match strategy {
        SignStrategy::Exhaustive { max_basis } => exhaustive(ring, max_basis),
        SignStrategy::SMatrix => Ok(by_characters(ring)),
        SignStrategy::Parity => Ok(by_parity(ring)),
    }
}

fn exhaustive(ring: &FusionRing, max_basis: usize) -> Result<Option<Vec<i8>>, FusionError> {
    let b = ring.size();
    if b > max_basis || b > 63 {
        return Err(FusionError::Strategy(format!(
            "basis of size {b} exceeds the exhaustive limit {max_basis}"
        )));
    }
    let free: Vec<usize> = (0..b).filter(|&i| i != ring.unit).collect();
    let entries: Vec<_> = ring.entries().collect();
    let mut signs = vec![1i8; b];
    for mask in 0u64..1 << free.len() {
        for (bit, &i) in free.iter().enumerate() {
            signs[i] = if mask >> bit & 1 == 1 { -1 } else { 1 };
        }
        if entries
            .iter()
            .all(|&(i, j, k, n)| n * (signs[i] * signs[j] * signs[k]) as i64 >= 0)
        {
            return Ok(Some(signs));
        }
    }
    Ok(None)
}

fn by_parity(ring: &FusionRing) -> Option<Vec<i8>> {
    let b = ring.size();
    let words = (b + 1).div_ceil(64);
    // each row: coefficient bits 0..b, right-hand side at bit b
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let mut push = |idx: &[usize], rhs: bool| {
        let mut r = vec![0u64; words];
        for &i in idx {
            r[i / 64] ^= 1 << (i % 64);
        }
        if rhs {
            r[b / 64] ^= 1 << (b % 64);
        }
        rows.push(r);
    };
    push(&[ring.unit], false);
    for (i, j, k, n) in ring.entries() {
        push(&[i, j, k], n < 0);
    }
    rows.sort_unstable();
    rows.dedup();
    let bit = |r: &[u64], i: usize| r[i / 64] >> (i % 64) & 1 == 1;
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..b {
        let Some(p) = (rank..rows.len()).find(|&r| bit(&rows[r], col)) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && bit(row, col) {
                row.iter_mut().zip(&pivot).for_each(|(a, b)| *a ^= b);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if rows[rank..].iter().any(|r| bit(r, b)) {
        return None;
    }
    // free variables 0, so pivot variables equal the right-hand side
    let mut signs = vec![1i8; b];
    for (r, &col) in pivots.iter().enumerate() {
        if bit(&rows[r], b) {
            signs[col] = -1;
        }
    }
    debug_assert!(nonnegative(ring, &signs));
    nonnegative(ring, &signs).then_some(signs)
}

/// Characters χ with χ(unit) = 1 of a commutative ring, one row per
/// character, from a random combination of the multiplication matrices.
pub fn numeric_characters(ring: &FusionRing) -> Option<Vec<Vec<Complex64>>> {
    let b = ring.size();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut a = DMatrix::<Complex64>::zeros(b, b);
    for i in 0..b {
        let c = Complex64::new(rng.random_range(0.5..1.5), rng.random_range(-0.5..0.5));
        for j in 0..b {
            for &(k, n) in ring.product(i, j) {
                a[(j, k as usize)] += c * n as f64;
            }
        }
    }
    let eig = a.clone().schur().eigenvalues()?;
    let scale = a.norm().max(1.0);
    let mut chars = Vec::with_capacity(b);
    for lambda in eig.iter() {
        let shifted = &a - DMatrix::identity(b, b) * (lambda + Complex64::new(scale * 1e-11, scale * 1e-11));
        let lu = shifted.lu();
        let mut x = nalgebra::DVector::from_element(b, Complex64::new(1.0, 0.0));
        for _ in 0..3 {
            x = lu.solve(&x)?;
            let norm = x.norm();
            x /= Complex64::new(norm, 0.0);
        }
        let u = x[ring.unit];
        if u.norm() < 1e-9 {
            return None;
        }
        let row: Vec<Complex64> = x.iter().map(|v| v / u).collect();
        // χ must be multiplicative on every basis product
        for i in 0..b {
            for j in 0..b {
                let rhs: Complex64 = ring.product(i, j).iter().map(|&(k, n)| row[k as usize] * n as f64).sum();
                if (row[i] * row[j] - rhs).norm() > 1e-6 * (1.0 + rhs.norm()) {
                    return None;
                }
            }
        }
        chars.push(row);
    }
    Some(chars)
}

fn absolute(ring: &FusionRing) -> FusionRing {
    FusionRing::from_entries(
        ring.labels.clone(),
        ring.unit,
        ring.entries().map(|(i, j, k, n)| (i, j, k, n.abs())),
    )
}

fn by_characters(ring: &FusionRing) -> Option<Vec<i8>> {
    let abs = absolute(ring);
    let axioms = based_ring_axioms(&abs);
    if !axioms.commutative || !axioms.associative {
        return None;
    }
    let old = numeric_characters(ring)?;
    let new = numeric_characters(&abs)?;
    let b = ring.size();
    let mut t = vec![0i8; b];
    let mut used = vec![false; old.len()];
    if !match_rows(&new, &old, 0, &mut t, &mut used) {
        return None;
    }
    let signs: Vec<i8> = t.iter().map(|&s| if s == 0 { 1 } else { s }).collect();
    // exact check: the signed ring must be |N| itself
    (signs[ring.unit] == 1 && nonnegative(ring, &signs)).then_some(signs)
}

/// Assigns to each new character an old one with χ′ = t ⊙ χ, backtracking.
fn match_rows(new: &[Vec<Complex64>], old: &[Vec<Complex64>], r: usize, t: &mut Vec<i8>, used: &mut [bool]) -> bool {
    if r == new.len() {
        return true;
    }
    const TOL: f64 = 1e-6;
    for k in 0..old.len() {
        if used[k] {
            continue;
        }
        let mut fixed = Vec::new();
        let mut ok = true;
        for i in 0..t.len() {
            let (x, y) = (new[r][i], old[k][i]);
            let tol = TOL * (1.0 + y.norm());
            let s = if (x - y).norm() < tol {
                1
            } else if (x + y).norm() < tol {
                -1
            } else {
                ok = false;
                break;
            };
            if y.norm() < tol {
                continue;
            }
            if t[i] == 0 {
                t[i] = s;
                fixed.push(i);
            } else if t[i] != s {
                ok = false;
                break;
            }
        }
        if ok {
            used[k] = true;
            if match_rows(new, old, r + 1, t, used) {
                return true;
            }
            used[k] = false;
        }
        for i in fixed {
            t[i] = 0;
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NegScanRow {
    pub e: u32,
    pub n: usize,
    pub basis: usize,
    /// No sign change makes all constants nonnegative (exact).
    pub has_negative: bool,
    /// The same question answered through characters.
    pub by_characters: bool,
    pub predicate: bool,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NegScan {
    pub rows: Vec<NegScanRow>,
    /// has_negative equals the predicate on every row.
    pub all_agree: bool,
    /// Both strategies gave the same answer on every row.
    pub strategies_agree: bool,
}

/// Every exterior power Λⁿ of the e×e DFT matrix with C(e,n) ≤ max_basis.
pub fn neg_scan(max_basis: usize) -> Result<NegScan, FusionError> {
    let mut rows = Vec::new();
    for e in 1..=max_basis as u32 {
        let dft = dft_smatrix(e)?;
        for n in 1..=e as usize {
            let basis = binomial(e as u64, n as u64);
            if basis > max_basis as u64 {
                continue;
            }
            let m = exterior_power(&dft, n)?;
            let unit = default_unit(&m)?;
            let report = verlinde(&m, unit)?;
            if !report.all_integer {
                return Err(FusionError::Strategy(format!("non-integral constants for e={e}, n={n}")));
            }
            let has_negative = by_parity(&report.ring).is_none();
            let by_characters = by_characters(&report.ring).is_none();
            let predicate = e % 2 == 0 && n % 2 == 0 && 1 < n && n < e as usize;
            rows.push(NegScanRow {
                e,
                n,
                basis: basis as usize,
                has_negative,
                by_characters,
                predicate,
                agrees: has_negative == predicate,
            });
        }
    }
    Ok(NegScan {
        all_agree: rows.iter().all(|r| r.agrees),
        strategies_agree: rows.iter().all(|r| r.has_negative == r.by_characters),
        rows,
    })
}
