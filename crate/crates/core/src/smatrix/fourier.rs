//! Fourier blocks of the imprimitive reflection groups G(e,1,n), indexed by
//! symbols whose entry sum satisfies the congruence Σ ≡ m·C(e,2) (mod e).

use itertools::Itertools;
use num_integer::binomial;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::monomial::leibniz;
use super::{Label, MatrixError, ScaledMatrix};
use crate::combin::{eps_sign, tuples, IndexTuple};
use crate::cyclo::CycNum;

/// A tensor ī¹ ⊗ … ⊗ īʳ of increasing tuples, block μ of length n_μ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymbolRep {
    pub blocks: Vec<IndexTuple>,
    pub e: u32,
    pub m: u32,
    pub multiplicities: Vec<u32>,
}

impl SymbolRep {
    pub fn to_label(&self) -> Label {
        Label::Symbol(self.blocks.iter().map(|b| b.entries.clone()).collect())
    }

    pub fn entry_sum(&self) -> u64 {
        self.blocks
            .iter()
            .flat_map(|b| &b.entries)
            .map(|&x| x as u64)
            .sum()
    }

    /// Each block replaced by the sorted residues (w_μ − i) mod e.
    pub fn partner(&self, w: &[i64]) -> SymbolRep {
        let e = self.e as i64;
        let blocks = self
            .blocks
            .iter()
            .zip(w)
            .map(|(b, &wm)| {
                let mut v: Vec<u32> = b
                    .entries
                    .iter()
                    .map(|&i| (wm - i as i64).rem_euclid(e) as u32)
                    .collect();
                v.sort_unstable();
                IndexTuple {
                    entries: v,
                    modulus: self.e,
                }
            })
            .collect();
        SymbolRep {
            blocks,
            ..self.clone()
        }
    }
}

fn check_params(e: u32, m: u32, mult: &[u32]) -> Result<(), MatrixError> {
    if e == 0 {
        return Err(MatrixError::Params("e must be positive".into()));
    }
    if mult.is_empty() || mult.iter().any(|&n| n == 0 || n > e) {
        return Err(MatrixError::Params(format!(
            "multiplicities {mult:?} must lie in 1..={e}"
        )));
    }
    let d: u32 = mult.iter().sum();
    if d != e * m + 1 {
        return Err(MatrixError::Params(format!(
            "multiplicities sum to {d}, expected e*m+1 = {}",
            e * m + 1
        )));
    }
    Ok(())
}

fn congruence_target(e: u32, m: u32) -> u64 {
    (m as u64 * binomial(e as u64, 2)) % e as u64
}

/// Members of E′ in lexicographic product order.
pub fn symbols_e_prime(e: u32, m: u32, mult: &[u32]) -> Result<Vec<SymbolRep>, MatrixError> {
    check_params(e, m, mult)?;
    let target = congruence_target(e, m);
    let factors: Vec<Vec<IndexTuple>> = mult
        .iter()
        .map(|&n| tuples(e, n).expect("n <= e"))
        .collect();
    Ok(factors
        .into_iter()
        .multi_cartesian_product()
        .map(|blocks| SymbolRep {
            blocks,
            e,
            m,
            multiplicities: mult.to_vec(),
        })
        .filter(|s| s.entry_sum() % e as u64 == target)
        .collect())
}

/// ξ₀ = (a₁,…,a₁+n₁−1) ⊗ … for the lexicographically smallest admissible
/// (a₁,…,a_r) with 0 ≤ a_y ≤ e − n_y.
pub fn unit_symbol(e: u32, m: u32, mult: &[u32]) -> Result<SymbolRep, MatrixError> {
    check_params(e, m, mult)?;
    let target = congruence_target(e, m);
    let ranges: Vec<Vec<u32>> = mult.iter().map(|&n| (0..=e - n).collect()).collect();
    for a in ranges.into_iter().multi_cartesian_product() {
        let blocks: Vec<IndexTuple> = a
            .iter()
            .zip(mult)
            .map(|(&ay, &n)| IndexTuple {
                entries: (ay..ay + n).collect(),
                modulus: e,
            })
            .collect();
        let s = SymbolRep {
            blocks,
            e,
            m,
            multiplicities: mult.to_vec(),
        };
        if s.entry_sum() % e as u64 == target {
            return Ok(s);
        }
    }
    Err(MatrixError::UnitNotFound)
}

/// The block T′ with entries ε(ψ₁)ε(ψ₂)·∏_μ conj(det(ζ^(i^μ j^μ))), base e,
/// scale exponent e·m and global factor (−1)^(m(e−1))·ζ₄^(−C(e−1,2)·m).
pub fn fourier_block(
    e: u32,
    m: u32,
    mult: &[u32],
    include_eps: bool,
) -> Result<ScaledMatrix, MatrixError> {
    let symbols = symbols_e_prime(e, m, mult)?;
    let b = symbols.len();
    let n = e as usize;
    let eps: Vec<i64> = symbols
        .iter()
        .map(|s| {
            if include_eps {
                let blocks: Vec<Vec<u32>> = s.blocks.iter().map(|t| t.entries.clone()).collect();
                eps_sign(&blocks) as i64
            } else {
                1
            }
        })
        .collect();
    let entries: Vec<CycNum> = (0..b * b)
        .into_par_iter()
        .map(|t| {
            let (x, y) = (&symbols[t / b], &symbols[t % b]);
            // product of the block determinants in Z[x]/(x^e − 1)
            let mut g = vec![0i64; n];
            g[0] = eps[t / b] * eps[t % b];
            for (bi, bj) in x.blocks.iter().zip(&y.blocks) {
                let d = block_det(&bi.entries, &bj.entries, n);
                let mut next = vec![0i64; n];
                for (p, &u) in g.iter().enumerate() {
                    if u == 0 {
                        continue;
                    }
                    for (q, &v) in d.iter().enumerate() {
                        if v != 0 {
                            next[(p + q) % n] += u * v;
                        }
                    }
                }
                g = next;
            }
            // complex conjugation: x^k ↦ x^(−k)
            let conj: Vec<i64> = (0..n).map(|k| g[(n - k) % n]).collect();
            CycNum::from_group_ring(e, &conj)
        })
        .collect();
    let c2 = binomial(e as i64 - 1, 2).max(0) * m as i64;
    let sign = if (m as u64 * (e as u64 - 1)) % 2 == 1 { -1 } else { 1 };
    let extra = CycNum::root(4, -c2)?.scale(&crate::cyclo::Rational::from_integer(sign.into()));
    ScaledMatrix::new(
        symbols.iter().map(SymbolRep::to_label).collect(),
        entries,
        e,
        e * m,
        extra,
    )
}

fn block_det(i: &[u32], j: &[u32], e: usize) -> Vec<i64> {
    let mut g = vec![0i64; e];
    leibniz(i.len(), &mut |perm, sign| {
        let exp: usize = perm
            .iter()
            .enumerate()
            .map(|(mu, &nu)| i[mu] as usize * j[nu] as usize)
            .sum();
        g[exp % e] += sign as i64;
    });
    g
}
