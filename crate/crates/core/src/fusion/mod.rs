//! Structure constants from the Verlinde formula, based-ring axioms, sign
//! normalization and sign searches.

mod axioms;
mod normalize;
mod signs;
mod verlinde;

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::cyclo::CycNum;
use crate::smatrix::{Label, MatrixError, ScaledMatrix};

pub use axioms::{based_ring_axioms, AxiomReport};
pub use normalize::{normalize_signs, normalized_ring, Normalized};
pub use signs::{
    neg_scan, nonneg_sign_search, numeric_characters, NegScan, NegScanRow, SignStrategy,
};
pub use verlinde::{verlinde, verlinde_direct, verlinde_float, Violation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FusionError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("unit index {0} out of range")]
    UnitOutOfRange(usize),
    #[error("entry in row {row} of the unit column is zero")]
    UnitColumnZero { row: usize },
    #[error("structure constant {0} does not fit in 64 bits")]
    Overflow(BigInt),
    #[error("normalization failed: {0}")]
    Normalization(String),
    #[error("sign search: {0}")]
    Strategy(String),
}

/// A ring given by a sparse integer structure-constant tensor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionRing {
    pub labels: Vec<Label>,
    pub unit: usize,
    /// products[i·B + j] lists (k, N_ij^k) with N ≠ 0, sorted by k.
    products: Vec<Vec<(u32, i64)>>,
    pub involution: Option<Vec<usize>>,
    pub signs: Option<Vec<i8>>,
}

impl FusionRing {
    /// Builds a ring from (i, j, k, N) entries; zero values are dropped.
    pub fn from_entries(
        labels: Vec<Label>,
        unit: usize,
        entries: impl IntoIterator<Item = (usize, usize, usize, i64)>,
    ) -> Self {
        let b = labels.len();
        let mut products = vec![Vec::new(); b * b];
        for (i, j, k, n) in entries {
            if n != 0 {
                products[i * b + j].push((k as u32, n));
            }
        }
        for p in &mut products {
            p.sort_unstable();
        }
        FusionRing {
            labels,
            unit,
            products,
            involution: None,
            signs: None,
        }
    }

    pub(crate) fn from_products(labels: Vec<Label>, unit: usize, products: Vec<Vec<(u32, i64)>>) -> Self {
        FusionRing {
            labels,
            unit,
            products,
            involution: None,
            signs: None,
        }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    /// Nonzero N_ij^k as (k, N), sorted by k.
    pub fn product(&self, i: usize, j: usize) -> &[(u32, i64)] {
        &self.products[i * self.size() + j]
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> i64 {
        let p = self.product(i, j);
        p.binary_search_by_key(&(k as u32), |&(x, _)| x)
            .map(|t| p[t].1)
            .unwrap_or(0)
    }

    /// All nonzero (i, j, k, N) in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, i64)> + '_ {
        let b = self.size();
        self.products.iter().enumerate().flat_map(move |(t, p)| {
            p.iter().map(move |&(k, n)| (t / b, t % b, k as usize, n))
        })
    }

    pub fn nonzero_count(&self) -> usize {
        self.products.iter().map(Vec::len).sum()
    }

    pub fn has_negative(&self) -> bool {
        self.entries().any(|(_, _, _, n)| n < 0)
    }

    /// The ring for the basis s_i·b_i: N ↦ s_i s_j s_k N.
    pub fn with_signs(&self, signs: &[i8]) -> FusionRing {
        let b = self.size();
        let products = self
            .products
            .iter()
            .enumerate()
            .map(|(t, p)| {
                let sij = signs[t / b] as i64 * signs[t % b] as i64;
                p.iter().map(|&(k, n)| (k, n * sij * signs[k as usize] as i64)).collect()
            })
            .collect();
        let combined = match &self.signs {
            Some(old) => old.iter().zip(signs).map(|(a, b)| a * b).collect(),
            None => signs.to_vec(),
        };
        FusionRing {
            labels: self.labels.clone(),
            unit: self.unit,
            products,
            involution: self.involution.clone(),
            signs: Some(combined),
        }
    }

    /// Relabels by a permutation: new index t is old perm[t].
    pub fn permuted(&self, perm: &[usize]) -> FusionRing {
        let b = self.size();
        let mut inv = vec![0usize; b];
        for (t, &p) in perm.iter().enumerate() {
            inv[p] = t;
        }
        let entries: Vec<_> = self
            .entries()
            .map(|(i, j, k, n)| (inv[i], inv[j], inv[k], n))
            .collect();
        let mut out = FusionRing::from_entries(
            perm.iter().map(|&p| self.labels[p].clone()).collect(),
            inv[self.unit],
            entries,
        );
        out.involution = self
            .involution
            .as_ref()
            .map(|inv_map| perm.iter().map(|&p| inv[inv_map[p]]).collect());
        out.signs = self
            .signs
            .as_ref()
            .map(|s| perm.iter().map(|&p| s[p]).collect());
        out
    }

    /// Multiplication matrix of b_i: entry (j, k) = N_ij^k.
    pub fn left_matrix(&self, i: usize) -> Vec<Vec<i64>> {
        let b = self.size();
        let mut m = vec![vec![0i64; b]; b];
        for j in 0..b {
            for &(k, n) in self.product(i, j) {
                m[j][k as usize] = n;
            }
        }
        m
    }

    pub fn label_index(&self) -> HashMap<&Label, usize> {
        self.labels.iter().enumerate().map(|(i, l)| (l, i)).collect()
    }
}

impl fmt::Display for FusionRing {
    /// One line per nonzero product: `b_i * b_j = N b_k + …`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.size();
        for i in 0..b {
            for j in 0..b {
                let p = self.product(i, j);
                let rhs: Vec<String> = p
                    .iter()
                    .map(|&(k, n)| match n {
                        1 => format!("{}", self.labels[k as usize]),
                        -1 => format!("-{}", self.labels[k as usize]),
                        _ => format!("{n}*{}", self.labels[k as usize]),
                    })
                    .collect();
                let rhs = if rhs.is_empty() { "0".to_string() } else { rhs.join(" + ").replace("+ -", "- ") };
                writeln!(f, "{} * {} = {}", self.labels[i], self.labels[j], rhs)?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct RingWire {
    labels: Vec<Label>,
    unit: usize,
    involution: Option<Vec<usize>>,
    signs: Option<Vec<i8>>,
    tensor: Vec<(usize, usize, usize, i64)>,
}

impl Serialize for FusionRing {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RingWire {
            labels: self.labels.clone(),
            unit: self.unit,
            involution: self.involution.clone(),
            signs: self.signs.clone(),
            tensor: self.entries().collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FusionRing {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let w = RingWire::deserialize(deserializer)?;
        let b = w.labels.len();
        if w.unit >= b || w.tensor.iter().any(|&(i, j, k, _)| i >= b || j >= b || k >= b) {
            return Err(serde::de::Error::custom("index out of range"));
        }
        let mut ring = FusionRing::from_entries(w.labels, w.unit, w.tensor);
        ring.involution = w.involution;
        ring.signs = w.signs;
        Ok(ring)
    }
}

/// Structure constants of a matrix together with everything non-integral.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerlindeReport {
    /// The integral constants; non-integral ones are omitted here.
    pub ring: FusionRing,
    pub all_integer: bool,
    /// Non-integral values (at most `MAX_VIOLATIONS` are kept).
    pub violations: Vec<Violation>,
    pub violation_count: usize,
}

/// Cap on stored non-integral witnesses.
pub const MAX_VIOLATIONS: usize = 1000;

impl VerlindeReport {
    /// Axioms of the ring, failing integrality if any constant was not integral.
    pub fn axioms(&self) -> AxiomReport {
        let mut r = based_ring_axioms(&self.ring);
        if !self.all_integer {
            r.integral = false;
            r.passed = false;
            if r.first_failure.is_none() {
                let v = &self.violations[0];
                r.first_failure = Some(format!("non-integral N[{},{},{}] = {}", v.i, v.j, v.k, v.value));
            }
        }
        r
    }
}

/// Permutation π with conj(column j) = column π(j) for the true matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Involution {
    Found(Vec<usize>),
    Absent {
        /// Columns whose conjugate is no column.
        missing: Vec<usize>,
        /// (j, k) with conj(column j) = −column k.
        sign_mismatch: Vec<(usize, usize)>,
    },
}

/// Canonical hash key of a column in a common conductor.
fn column_key(col: &[CycNum], conductor: u32) -> Vec<(Vec<BigInt>, BigInt)> {
    col.iter()
        .map(|x| {
            let y = x.lift(conductor).expect("common conductor");
            (y.numerator().to_vec(), y.denominator().clone())
        })
        .collect()
}

pub fn involution_from_conjugation(m: &ScaledMatrix) -> Involution {
    let b = m.size();
    // conj(c·v_i) = c·v_j  ⇔  conj(v_i) = (c / conj c)·v_j
    let c = &m.extra_scalar;
    let rho = c.checked_div(&c.conj()).unwrap_or_else(|_| CycNum::one(1));
    let conductor = num_integer::lcm(m.conductor(), rho.conductor());
    let cols: Vec<Vec<CycNum>> = (0..b)
        .map(|j| m.column(j).into_iter().map(|x| x * &rho).collect())
        .collect();
    let index: HashMap<Vec<(Vec<BigInt>, BigInt)>, usize> = cols
        .iter()
        .enumerate()
        .map(|(j, col)| (column_key(col, conductor), j))
        .collect();
    let mut perm = vec![usize::MAX; b];
    let mut missing = Vec::new();
    let mut mismatch = Vec::new();
    for j in 0..b {
        let conj: Vec<CycNum> = m.column(j).into_iter().map(CycNum::conj).collect();
        if let Some(&k) = index.get(&column_key(&conj, conductor)) {
            perm[j] = k;
            continue;
        }
        let neg: Vec<CycNum> = conj.iter().map(|x| -x).collect();
        if let Some(&k) = index.get(&column_key(&neg, conductor)) {
            mismatch.push((j, k));
        }
        missing.push(j);
    }
    if missing.is_empty() {
        Involution::Found(perm)
    } else {
        Involution::Absent {
            missing,
            sign_mismatch: mismatch,
        }
    }
}

/// Rows divided by their unit-column entry, with d = s·s̄ᵗ on the diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct SMatrixData {
    pub s: ScaledMatrix,
    pub d: Vec<CycNum>,
}

pub fn s_matrix_of(m: &ScaledMatrix, unit: usize) -> Result<SMatrixData, FusionError> {
    let b = m.size();
    if unit >= b {
        return Err(FusionError::UnitOutOfRange(unit));
    }
    let mut entries = Vec::with_capacity(b * b);
    let mut d = Vec::with_capacity(b);
    for k in 0..b {
        let inv = m
            .entry(k, unit)
            .inv()
            .map_err(|_| FusionError::UnitColumnZero { row: k })?;
        let row: Vec<CycNum> = (0..b).map(|i| m.entry(k, i) * &inv).collect();
        d.push(row.iter().fold(CycNum::zero(1), |acc, x| &acc + &(x * &x.conj())));
        entries.extend(row);
    }
    let s = ScaledMatrix::new(m.labels.clone(), entries, m.base, 0, CycNum::one(1))?;
    Ok(SMatrixData { s, d })
}
