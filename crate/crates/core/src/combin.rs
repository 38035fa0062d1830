//! Enumerators: increasing tuples, partitions, semistandard tableaux and
//! signed permutations.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclo::CycNum;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CombinError {
    #[error("no {n}-subsets of a {e}-set")]
    EmptyBasis { e: u32, n: u32 },
}

/// A strictly increasing tuple with entries in {0, …, e−1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IndexTuple {
    pub entries: Vec<u32>,
    pub modulus: u32,
}

impl IndexTuple {
    pub fn new(entries: Vec<u32>, modulus: u32) -> Option<Self> {
        let ok = entries.windows(2).all(|w| w[0] < w[1]) && entries.iter().all(|&x| x < modulus);
        ok.then_some(IndexTuple { entries, modulus })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// All C(e, n) increasing n-tuples from {0, …, e−1} in lexicographic order.
pub fn tuples(e: u32, n: u32) -> Result<Vec<IndexTuple>, CombinError> {
    if n > e {
        return Err(CombinError::EmptyBasis { e, n });
    }
    Ok((0..e)
        .combinations(n as usize)
        .map(|entries| IndexTuple { entries, modulus: e })
        .collect())
}

/// A partition with trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Sorts nothing: the parts must already be weakly decreasing.
    pub fn new(mut parts: Vec<u32>) -> Option<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return None;
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Some(Partition(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Number of nonzero parts.
    pub fn length(&self) -> usize {
        self.0.len()
    }
}

/// j̄ ↦ (j_n − (n−1), …, j_2 − 1, j_1).
pub fn partition_of(j: &[u32]) -> Partition {
    let n = j.len();
    let parts = (0..n).map(|h| j[n - 1 - h] - (n - 1 - h) as u32).collect();
    Partition::new(parts).expect("strictly increasing input gives a partition")
}

/// Content of a semistandard tableau: exponents[ν] counts entries ν+1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TableauWeight {
    pub exponents: Vec<u32>,
}

/// Weights of all semistandard tableaux of shape λ with entries in {1, …, n},
/// one per tableau, in the order the backtracking search visits them.
pub fn ssyt_weights(lambda: &Partition, n: usize) -> Vec<TableauWeight> {
    let shape = lambda.parts();
    let mut out = Vec::new();
    if shape.len() > n {
        return out;
    }
    let cells: Vec<(usize, usize)> = shape
        .iter()
        .enumerate()
        .flat_map(|(r, &len)| (0..len as usize).map(move |c| (r, c)))
        .collect();
    let mut grid: Vec<Vec<usize>> = shape.iter().map(|&len| vec![0; len as usize]).collect();
    let mut weight = vec![0u32; n];
    fill(&cells, 0, &mut grid, &mut weight, n, &mut out);
    out
}

fn fill(
    cells: &[(usize, usize)],
    pos: usize,
    grid: &mut [Vec<usize>],
    weight: &mut [u32],
    n: usize,
    out: &mut Vec<TableauWeight>,
) {
    let Some(&(r, c)) = cells.get(pos) else {
        out.push(TableauWeight {
            exponents: weight.to_vec(),
        });
        return;
    };
    let left = if c > 0 { grid[r][c - 1] } else { 1 };
    let above = if r > 0 { grid[r - 1][c] + 1 } else { 1 };
    // Rows below need room for strictly larger entries.
    let rows_below = grid[r + 1..].iter().filter(|row| row.len() > c).count();
    let hi = n - rows_below;
    for v in left.max(above)..=hi {
        grid[r][c] = v;
        weight[v - 1] += 1;
        fill(cells, pos + 1, grid, weight, n, out);
        weight[v - 1] -= 1;
    }
}

/// s_λ(values) as a sum over semistandard tableaux.
pub fn schur_eval(lambda: &Partition, values: &[CycNum]) -> CycNum {
    let conductor = values.first().map_or(1, CycNum::conductor);
    let mut counts: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    for w in ssyt_weights(lambda, values.len()) {
        *counts.entry(w.exponents).or_default() += 1;
    }
    let mut acc = CycNum::zero(conductor);
    for (exps, count) in counts {
        let mut term = CycNum::from_int(conductor, count);
        for (v, &k) in values.iter().zip(&exps) {
            if k > 0 {
                term = &term * &v.pow(k as u64);
            }
        }
        acc = &acc + &term;
    }
    acc
}

/// (−1)^(number of pairs y < y′ with ψ(y) < ψ(y′)), where the sequence is the
/// concatenation of the blocks in order.
pub fn eps_sign(blocks: &[Vec<u32>]) -> i32 {
    let seq: Vec<u32> = blocks.iter().flatten().copied().collect();
    let mut ascents = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] < seq[j] {
                ascents += 1;
            }
        }
    }
    if ascents.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Sign of a permutation of 0..n given in one-line notation.
pub fn perm_sign(perm: &[usize]) -> i32 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Sorts `values` ascending and returns the sign of the sorting permutation,
/// or None if two values coincide.
pub fn sort_with_sign<T: Ord + Copy>(values: &[T]) -> Option<(Vec<T>, i32)> {
    let mut v = values.to_vec();
    let mut sign = 1;
    // insertion sort, counting transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// An element of the hyperoctahedral group: i ↦ signs[i]·(perm[i]).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
}

impl SignedPermutation {
    /// ε_σ · ∏ f_i
    pub fn sign(&self) -> i32 {
        let f: i32 = self.signs.iter().map(|&s| s as i32).product();
        perm_sign(&self.perm) * f
    }
}

/// All 2^l · l! signed permutations of rank l.
pub fn signed_permutations(l: usize) -> impl Iterator<Item = SignedPermutation> {
    (0..l).permutations(l).flat_map(move |perm| {
        (0u32..1 << l).map(move |mask| SignedPermutation {
            perm: perm.clone(),
            signs: (0..l)
                .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
                .collect(),
        })
    })
}
