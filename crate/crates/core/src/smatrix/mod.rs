//! Scaled matrices over cyclotomic fields and the constructions built on the
//! cyclic DFT: exterior powers, tensor products and Fourier blocks.

mod exterior;
mod fourier;
mod monomial;

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::cyclo::{self, embed_complex, sqrt_conductor, sqrt_e, CycError, CycNum, Rational};

pub use exterior::{exterior_power, p_det};
pub use fourier::{fourier_block, symbols_e_prime, unit_symbol, SymbolRep};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error(transparent)]
    Cyc(#[from] CycError),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("exterior power {n} out of range for a {e}x{e} matrix")]
    OutOfRange { e: usize, n: usize },
    #[error("tensor factors have different bases: {0} and {1}")]
    MixedBases(u32, u32),
    #[error("no unit symbol with 0 <= a_y <= e - n_y satisfies the congruence")]
    UnitNotFound,
    #[error("malformed matrix: {0}")]
    Shape(String),
}

/// Row/column label of a scaled matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Index(u32),
    Tuple(Vec<u32>),
    Symbol(Vec<Vec<u32>>),
}

impl Label {
    /// The label viewed as a sequence of increasing blocks.
    pub fn blocks(&self) -> Vec<Vec<u32>> {
        match self {
            Label::Index(i) => vec![vec![*i]],
            Label::Tuple(t) => vec![t.clone()],
            Label::Symbol(s) => s.clone(),
        }
    }

    /// Rebuilds a label of the same kind from blocks.
    pub fn with_blocks(&self, blocks: Vec<Vec<u32>>) -> Label {
        match self {
            Label::Index(_) => Label::Index(blocks[0][0]),
            Label::Tuple(_) => Label::Tuple(blocks.into_iter().next().unwrap_or_default()),
            Label::Symbol(_) => Label::Symbol(blocks),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tuple = |t: &[u32]| format!("({})", t.iter().join(","));
        match self {
            Label::Index(i) => write!(f, "{i}"),
            Label::Tuple(t) => write!(f, "{}", tuple(t)),
            Label::Symbol(s) => write!(f, "{}", s.iter().map(|b| tuple(b)).join("x")),
        }
    }
}

impl FromStr for Label {
    type Err = String;

    /// Accepts JSON (`3`, `[0,1]`, `[[0,1],[2]]`), the display form
    /// (`(0,1)x(2)`), or a bare comma list (`0,1`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Ok(l) = serde_json::from_str::<Label>(s) {
            return Ok(l);
        }
        let parse_list = |t: &str| -> Result<Vec<u32>, String> {
            let t = t.trim().trim_start_matches('(').trim_end_matches(')');
            if t.is_empty() {
                return Ok(vec![]);
            }
            t.split(',')
                .map(|x| x.trim().parse::<u32>().map_err(|e| format!("bad label {s:?}: {e}")))
                .collect()
        };
        if s.contains('x') {
            return Ok(Label::Symbol(
                s.split('x').map(parse_list).collect::<Result<_, _>>()?,
            ));
        }
        if s.starts_with('(') || s.contains(',') {
            return Ok(Label::Tuple(parse_list(s)?));
        }
        s.parse::<u32>()
            .map(Label::Index)
            .map_err(|e| format!("bad label {s:?}: {e}"))
    }
}

/// A square matrix whose true value is `extra_scalar · base^(−scale_exp/2) · entries`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledMatrix {
    pub labels: Vec<Label>,
    /// Row-major, `labels.len()²` values.
    pub entries: Vec<CycNum>,
    pub base: u32,
    pub scale_exp: u32,
    pub extra_scalar: CycNum,
}

impl ScaledMatrix {
    pub fn new(
        labels: Vec<Label>,
        entries: Vec<CycNum>,
        base: u32,
        scale_exp: u32,
        extra_scalar: CycNum,
    ) -> Result<Self, MatrixError> {
        if entries.len() != labels.len() * labels.len() {
            return Err(MatrixError::Shape(format!(
                "{} entries for {} labels",
                entries.len(),
                labels.len()
            )));
        }
        if base == 0 {
            return Err(MatrixError::Shape("base must be positive".into()));
        }
        Ok(ScaledMatrix {
            labels,
            entries,
            base,
            scale_exp,
            extra_scalar,
        })
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &CycNum {
        &self.entries[i * self.size() + j]
    }

    pub fn column(&self, j: usize) -> Vec<&CycNum> {
        (0..self.size()).map(|i| self.entry(i, j)).collect()
    }

    pub fn index_of(&self, label: &Label) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// lcm of the entry conductors.
    pub fn conductor(&self) -> u32 {
        self.entries
            .iter()
            .fold(1u32, |acc, x| acc.lcm(&x.conductor()))
    }

    /// |extra_scalar|², when rational.
    pub fn extra_norm_sq(&self) -> Option<Rational> {
        (&self.extra_scalar * &self.extra_scalar.conj()).as_rational()
    }

    /// The matrix with entries transposed.
    pub fn transpose(&self) -> ScaledMatrix {
        let n = self.size();
        let entries = (0..n * n)
            .map(|t| self.entry(t % n, t / n).clone())
            .collect();
        ScaledMatrix {
            entries,
            ..self.clone()
        }
    }

    /// The scalar `extra · base^(−p/2)` as an exact cyclotomic number, with
    /// the square root of the base built from a Gauss sum when p is odd.
    pub fn scalar(&self) -> Result<CycNum, CycError> {
        let half = BigInt::from(self.base).pow(self.scale_exp / 2);
        let mut s = self
            .extra_scalar
            .scale(&Rational::new(BigInt::one(), half));
        if self.scale_exp % 2 == 1 {
            let n = sqrt_conductor(self.base);
            let root = sqrt_e(self.base, n)?;
            s = &s * &root.inv()?;
        }
        Ok(s)
    }

    /// Entries of the true matrix, all in one exact field.
    pub fn resolve(&self) -> Result<Vec<CycNum>, CycError> {
        let s = self.scalar()?;
        Ok(self.entries.iter().map(|x| x * &s).collect())
    }

    /// Multiplies column j by signs[j].
    pub fn with_column_signs(&self, signs: &[i8]) -> ScaledMatrix {
        let n = self.size();
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(t, x)| if signs[t % n] < 0 { -x } else { x.clone() })
            .collect();
        ScaledMatrix {
            entries,
            ..self.clone()
        }
    }

    /// Permutes rows and columns simultaneously: new index t is old perm[t].
    pub fn permuted(&self, perm: &[usize]) -> ScaledMatrix {
        let n = self.size();
        let entries = (0..n * n)
            .map(|t| self.entry(perm[t / n], perm[t % n]).clone())
            .collect();
        ScaledMatrix {
            labels: perm.iter().map(|&i| self.labels[i].clone()).collect(),
            entries,
            ..self.clone()
        }
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixWire {
    labels: Vec<Label>,
    base: u32,
    scale_exp: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    extra_scalar: Option<CycNum>,
    entries: Vec<Vec<CycNum>>,
}

impl Serialize for ScaledMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let n = self.size();
        MatrixWire {
            labels: self.labels.clone(),
            base: self.base,
            scale_exp: self.scale_exp,
            extra_scalar: (!self.extra_scalar.is_one()).then(|| self.extra_scalar.clone()),
            entries: (0..n)
                .map(|i| self.entries[i * n..(i + 1) * n].to_vec())
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ScaledMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let w = MatrixWire::deserialize(deserializer)?;
        let n = w.labels.len();
        if w.entries.len() != n || w.entries.iter().any(|r| r.len() != n) {
            return Err(serde::de::Error::custom("entries must be a square array matching labels"));
        }
        ScaledMatrix::new(
            w.labels,
            w.entries.into_iter().flatten().collect(),
            w.base,
            w.scale_exp,
            w.extra_scalar.unwrap_or_else(|| CycNum::one(1)),
        )
        .map_err(serde::de::Error::custom)
    }
}

/// (ζ_e^(ij)) with labels 0..e−1 and scale exponent 1.
pub fn dft_smatrix(e: u32) -> Result<ScaledMatrix, MatrixError> {
    if e == 0 {
        return Err(MatrixError::Params("e must be positive".into()));
    }
    let roots: Vec<CycNum> = (0..e as i64)
        .map(|k| cyclo::cyc_root(e, k))
        .collect::<Result<_, _>>()?;
    let entries = (0..e as usize)
        .cartesian_product(0..e as usize)
        .map(|(i, j)| roots[(i * j) % e as usize].clone())
        .collect();
    ScaledMatrix::new(
        (0..e).map(Label::Index).collect(),
        entries,
        e,
        1,
        CycNum::one(1),
    )
}

/// Kronecker product; labels become symbols in lexicographic product order.
pub fn tensor(ms: &[ScaledMatrix]) -> Result<ScaledMatrix, MatrixError> {
    let first = ms
        .first()
        .ok_or_else(|| MatrixError::Params("empty tensor product".into()))?;
    if ms.len() == 1 {
        return Ok(first.clone());
    }
    if let Some(m) = ms.iter().find(|m| m.base != first.base) {
        return Err(MatrixError::MixedBases(first.base, m.base));
    }
    let index_sets: Vec<Vec<usize>> = ms.iter().map(|m| (0..m.size()).collect()).collect();
    let combos: Vec<Vec<usize>> = index_sets.into_iter().multi_cartesian_product().collect();
    let labels = combos
        .iter()
        .map(|c| {
            Label::Symbol(
                c.iter()
                    .zip(ms)
                    .flat_map(|(&i, m)| m.labels[i].blocks())
                    .collect(),
            )
        })
        .collect();
    let mut entries = Vec::with_capacity(combos.len() * combos.len());
    for r in &combos {
        for c in &combos {
            let mut x = CycNum::one(1);
            for ((&i, &j), m) in r.iter().zip(c).zip(ms) {
                x = &x * m.entry(i, j);
            }
            entries.push(x);
        }
    }
    let extra = ms.iter().fold(CycNum::one(1), |acc, m| &acc * &m.extra_scalar);
    ScaledMatrix::new(
        labels,
        entries,
        first.base,
        ms.iter().map(|m| m.scale_exp).sum(),
        extra,
    )
}

/// Outcome of the exact unitarity test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrthogonalityReport {
    pub unitary: bool,
    /// (i, j) with (M M̄ᵗ)_ij ≠ δ_ij, capped at 100 pairs.
    pub offending: Vec<(usize, usize)>,
    /// Largest |(M M̄ᵗ − I)_ij| over the reported pairs, in double precision.
    pub max_deviation: f64,
}

const MAX_REPORTED: usize = 100;

/// Exact check that the true matrix satisfies M·M̄ᵗ = I.
pub fn orthogonality_check(m: &ScaledMatrix) -> OrthogonalityReport {
    let n = m.size();
    let gram = gram(m);
    // true product = |extra|² · base^(−p) · gram
    let extra_sq = &m.extra_scalar * &m.extra_scalar.conj();
    let scale = BigInt::from(m.base).pow(m.scale_exp);
    let mut offending = Vec::new();
    let mut max_dev = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let value = (&gram[i * n + j] * &extra_sq).scale(&Rational::new(BigInt::one(), scale.clone()));
            let ok = if i == j { value.is_one() } else { value.is_zero() };
            if !ok && offending.len() < MAX_REPORTED {
                let delta = if i == j { &value - &CycNum::one(1) } else { value };
                max_dev = max_dev.max(embed_complex(&delta, 64).to_c64().norm());
                offending.push((i, j));
            }
        }
    }
    OrthogonalityReport {
        unitary: offending.is_empty(),
        offending,
        max_deviation: max_dev,
    }
}

/// entries · conj(entries)ᵗ, exactly.
pub(crate) fn gram(m: &ScaledMatrix) -> Vec<CycNum> {
    let n = m.size();
    let t = m.transpose();
    cyclo::multimod::mat_mul(&m.entries, &t.entries, n, n, n, true)
}

/// Whether entries · conj(entries)ᵗ is a rational multiple of the identity;
/// returns that multiple.
pub(crate) fn gram_scalar(m: &ScaledMatrix) -> Option<Rational> {
    let n = m.size();
    let g = gram(m);
    let c = g.first()?.as_rational()?;
    for i in 0..n {
        for j in 0..n {
            let x = &g[i * n + j];
            let ok = if i == j {
                x.as_rational().as_ref() == Some(&c)
            } else {
                x.is_zero()
            };
            if !ok {
                return None;
            }
        }
    }
    (!c.is_zero()).then_some(c)
}

/// The canonical unit: (0,…,n−1) for exterior powers, (1,…,l) for C_l
/// weights, the unit symbol for Fourier blocks, index 0 otherwise.
pub fn default_unit(m: &ScaledMatrix) -> Result<usize, MatrixError> {
    let label = match m.labels.first() {
        None => return Err(MatrixError::Shape("empty matrix".into())),
        Some(Label::Index(_)) => return Ok(0),
        Some(Label::Tuple(t)) => {
            // Kac-Peterson C_l labels start at 1
            let zero = Label::Tuple((0..t.len() as u32).collect());
            let one = Label::Tuple((1..=t.len() as u32).collect());
            if m.index_of(&zero).is_none() && m.index_of(&one).is_some() {
                one
            } else {
                zero
            }
        }
        Some(Label::Symbol(blocks)) => {
            let mult: Vec<u32> = blocks.iter().map(|b| b.len() as u32).collect();
            let d: u32 = mult.iter().sum();
            let e = m.base;
            if d == 0 || !(d - 1).is_multiple_of(e) {
                return Err(MatrixError::Params(format!(
                    "symbol labels with d = {d} are not of the form e*m+1 for e = {e}"
                )));
            }
            unit_symbol(e, (d - 1) / e, &mult)?.to_label()
        }
    };
    m.index_of(&label)
        .ok_or_else(|| MatrixError::Params(format!("unit label {label} not among the labels")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dft_basics() {
        let m = dft_smatrix(1).unwrap();
        assert_eq!(m.size(), 1);
        assert!(m.entry(0, 0).is_one());
        let m = dft_smatrix(2).unwrap();
        assert_eq!(m.entry(1, 1), &CycNum::from_int(2, -1));
        assert_eq!(m.scale_exp, 1);
        let m = dft_smatrix(4).unwrap();
        assert_eq!(m.entry(1, 3), &-CycNum::root(4, 1).unwrap());
        for e in 1..=12 {
            assert!(orthogonality_check(&dft_smatrix(e).unwrap()).unitary, "e = {e}");
        }
    }

    #[test]
    fn orthogonality_detects_damage() {
        let mut m = dft_smatrix(3).unwrap();
        m.entries[4] = CycNum::from_int(3, 2);
        let r = orthogonality_check(&m);
        assert!(!r.unitary);
        assert!(r.offending.contains(&(1, 1)));
        assert!(r.max_deviation > 0.1);
    }

    #[test]
    fn tensor_shapes() {
        let a = dft_smatrix(4).unwrap();
        assert_eq!(tensor(std::slice::from_ref(&a)).unwrap(), a);
        let b = exterior_power(&a, 2).unwrap();
        let t = tensor(&[b.clone(), a.clone()]).unwrap();
        assert_eq!(t.size(), 24);
        assert_eq!(t.scale_exp, 3);
        assert_eq!(t.labels[0], Label::Symbol(vec![vec![0, 1], vec![0]]));
        assert!(orthogonality_check(&t).unitary);
        let one = |x: i64| ScaledMatrix::new(vec![Label::Index(0)], vec![CycNum::from_int(1, x)], 2, 0, CycNum::one(1)).unwrap();
        assert_eq!(tensor(&[one(3), one(5)]).unwrap().entries, vec![CycNum::from_int(1, 15)]);
        assert!(matches!(
            tensor(&[a, dft_smatrix(3).unwrap()]),
            Err(MatrixError::MixedBases(4, 3))
        ));
    }

    #[test]
    fn json_round_trip() {
        let m = exterior_power(&dft_smatrix(3).unwrap(), 2).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.starts_with(r#"{"labels":[[0,1],[0,2],[1,2]],"base":3,"scale_exp":2,"entries":[[{"conductor":3"#));
        let back: ScaledMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        let f = fourier_block(2, 1, &[2, 1], true).unwrap();
        let back: ScaledMatrix = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn label_parsing() {
        assert_eq!("3".parse::<Label>().unwrap(), Label::Index(3));
        assert_eq!("0,1".parse::<Label>().unwrap(), Label::Tuple(vec![0, 1]));
        assert_eq!("(0,1)".parse::<Label>().unwrap(), Label::Tuple(vec![0, 1]));
        assert_eq!("[0,1]".parse::<Label>().unwrap(), Label::Tuple(vec![0, 1]));
        let s = Label::Symbol(vec![vec![0, 1], vec![2]]);
        assert_eq!(s.to_string().parse::<Label>().unwrap(), s);
        assert_eq!("[[0,1],[2]]".parse::<Label>().unwrap(), s);
        assert!("a".parse::<Label>().is_err());
    }

    #[test]
    fn resolved_matrix_is_unitary() {
        for e in [2u32, 3, 5] {
            let m = dft_smatrix(e).unwrap();
            let s = m.resolve().unwrap();
            let n = e as usize;
            for i in 0..n {
                let mut acc = CycNum::zero(1);
                for k in 0..n {
                    acc = &acc + &(&s[i * n + k] * &s[i * n + k].conj());
                }
                assert!(acc.is_one());
            }
        }
    }

    #[test]
    fn default_units() {
        assert_eq!(default_unit(&dft_smatrix(5).unwrap()).unwrap(), 0);
        let m = exterior_power(&dft_smatrix(5).unwrap(), 3).unwrap();
        assert_eq!(m.labels[default_unit(&m).unwrap()], Label::Tuple(vec![0, 1, 2]));
        let f = fourier_block(3, 1, &[3, 1], true).unwrap();
        let u = default_unit(&f).unwrap();
        assert_eq!(f.labels[u], unit_symbol(3, 1, &[3, 1]).unwrap().to_label());
    }

    #[test]
    fn frobenius_bookkeeping() {
        // Σ |entries|² = size · base^p for unitary constructions
        for m in [
            dft_smatrix(6).unwrap(),
            exterior_power(&dft_smatrix(6).unwrap(), 3).unwrap(),
            fourier_block(3, 1, &[2, 2], true).unwrap(),
        ] {
            let total = m
                .entries
                .iter()
                .fold(CycNum::zero(1), |acc, x| &acc + &(x * &x.conj()));
            let expect = BigInt::from(m.size()) * BigInt::from(m.base).pow(m.scale_exp);
            assert_eq!(total.as_integer(), Some(expect));
        }
    }

    #[test]
    fn zero_base_rejected() {
        assert!(ScaledMatrix::new(vec![], vec![], 0, 0, CycNum::one(1)).is_err());
        assert!(dft_smatrix(0).is_err());
    }
}
