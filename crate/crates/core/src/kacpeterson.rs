//! Kac-Peterson matrices of types A₁⁽¹⁾ and C_l⁽¹⁾ and the exterior-power
//! relation between them.

use itertools::Itertools;
use num_integer::binomial;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::combin::signed_permutations;
use crate::cyclo::{embed_complex, CycError, CycNum};
use crate::fusion::{verlinde, FusionError};
use crate::smatrix::{exterior_power, Label, MatrixError, ScaledMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KpError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Cyc(#[from] CycError),
    #[error(transparent)]
    Fusion(#[from] FusionError),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("dimension mismatch: {0} weights against {1} tuples")]
    Dimension(usize, usize),
    #[error("the unit row cannot be made positive: {0}")]
    Normalization(String),
}

/// A dominant weight of level ≤ k for C_l, with μ̃_j = Σ_{i≤j} (λ_i + 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CWeight {
    pub lambda: Vec<u32>,
    pub tilde: Vec<u32>,
}

impl CWeight {
    pub fn from_lambda(lambda: Vec<u32>) -> Self {
        let tilde = lambda
            .iter()
            .scan(0, |acc, &x| {
                *acc += x + 1;
                Some(*acc)
            })
            .collect();
        CWeight { lambda, tilde }
    }

    /// Inverse of the tilde map; `None` unless strictly increasing from ≥ 1.
    pub fn from_tilde(tilde: Vec<u32>) -> Option<Self> {
        let mut prev = 0;
        let mut lambda = Vec::with_capacity(tilde.len());
        for &t in &tilde {
            if t <= prev {
                return None;
            }
            lambda.push(t - prev - 1);
            prev = t;
        }
        Some(CWeight { lambda, tilde })
    }

    pub fn to_label(&self) -> Label {
        Label::Tuple(self.tilde.clone())
    }
}

/// All weights with Σλ ≤ k, ordered by tilde tuple.
pub fn weights_cl(l: usize, k: u32) -> Result<Vec<CWeight>, KpError> {
    if l < 2 || k < 1 {
        return Err(KpError::Params(format!("need l >= 2 and k >= 1, got l={l}, k={k}")));
    }
    Ok((1..=k + l as u32)
        .combinations(l)
        .map(|t| CWeight::from_tilde(t).expect("combinations are increasing"))
        .collect())
}

/// Picks ±`extra` so that the true unit row is positive real.
fn positive_unit_row(entries: &[CycNum], b: usize, unit: usize, base: u32, scale_exp: u32, extra: CycNum) -> Result<ScaledMatrix, KpError> {
    let labels = (0..b as u32).map(Label::Index).collect();
    let m = ScaledMatrix::new(labels, entries.to_vec(), base, scale_exp, extra)?;
    let row: Vec<CycNum> = (0..b).map(|j| m.entry(unit, j) * &m.extra_scalar).collect();
    if row.iter().any(|x| !x.is_real() || x.is_zero()) {
        return Err(KpError::Normalization("unit row is not real".into()));
    }
    let signs: Vec<f64> = row.iter().map(|x| embed_complex(x, 64).to_c64().re.signum()).collect();
    if signs.iter().all(|&s| s > 0.0) {
        Ok(m)
    } else if signs.iter().all(|&s| s < 0.0) {
        Ok(ScaledMatrix { extra_scalar: -&m.extra_scalar, ..m })
    } else {
        Err(KpError::Normalization("mixed signs in the unit row".into()))
    }
}

/// (k+1)×(k+1) matrix with entries ζ^(ab) − ζ^(−ab), ζ = ζ_{2(k+2)},
/// a, b ∈ 1..=k+1; true matrix √(2/(k+2))·sin(πab/(k+2)).
pub fn kp_a1(k: u32) -> Result<ScaledMatrix, KpError> {
    if k < 1 {
        return Err(KpError::Params("level must be positive".into()));
    }
    let kappa = k + 2;
    let n = 2 * kappa;
    let b = (k + 1) as usize;
    let entries: Vec<CycNum> = (0..b * b)
        .map(|t| {
            let x = ((t / b + 1) * (t % b + 1)) as i64;
            Ok(CycNum::root(n, x)? - CycNum::root(n, -x)?)
        })
        .collect::<Result<_, CycError>>()?;
    // ζ^x − ζ^(−x) = 2i·sin, so the scalar is −i/√(2κ)
    positive_unit_row(&entries, b, 0, n, 1, CycNum::root(4, 3)?)
}

/// The C_l matrix over `weights_cl(l, k)`: Σ_{σ ∈ S_l, signs} ε·ζ^(Σ s_i μ̃_i ν̃_σ(i)).
pub fn kp_cl(l: usize, k: u32) -> Result<ScaledMatrix, KpError> {
    let weights = weights_cl(l, k)?;
    let kappa = k + l as u32 + 1;
    let n = 2 * kappa;
    let b = weights.len();
    let perms: Vec<_> = signed_permutations(l).collect();
    let entries: Vec<CycNum> = (0..b * b)
        .into_par_iter()
        .map(|t| {
            let (mu, nu) = (&weights[t / b].tilde, &weights[t % b].tilde);
            let mut g = vec![0i64; n as usize];
            for sp in &perms {
                let exp: i64 = (0..l)
                    .map(|i| sp.signs[i] as i64 * (mu[i] * nu[sp.perm[i]]) as i64)
                    .sum();
                g[exp.rem_euclid(n as i64) as usize] += sp.sign() as i64;
            }
            CycNum::from_group_ring(n, &g)
        })
        .collect();
    let extra = CycNum::root(4, 3)?.pow(l as u64);
    let m = positive_unit_row(&entries, b, 0, n, l as u32, extra)?;
    Ok(ScaledMatrix {
        labels: weights.iter().map(CWeight::to_label).collect(),
        ..m
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivReport {
    pub l: usize,
    pub k: u32,
    pub passed: bool,
    /// kp_cl = u · Λˡ(kp_a1(k+l−1)) entrywise, |u| = 1.
    pub u: Option<CycNum>,
    /// Verlinde tensors of both sides agree under the label map.
    pub fusion_agrees: bool,
}

/// Compares kp_cl(l, k) with the l-th exterior power of kp_a1(k+l−1), whose
/// labels (0-based) are shifted by one to meet the tilde tuples.
pub fn equiv_check(l: usize, k: u32) -> Result<EquivReport, KpError> {
    let cl = kp_cl(l, k)?;
    let a1 = kp_a1(k + l as u32 - 1)?;
    let ext = exterior_power(&a1, l)?;
    let weights = weights_cl(l, k)?;
    let expected = binomial(k as usize + l, l);
    if weights.len() != expected || ext.size() != expected {
        return Err(KpError::Dimension(weights.len(), ext.size()));
    }
    let perm: Vec<usize> = weights
        .iter()
        .map(|w| {
            let label = Label::Tuple(w.tilde.iter().map(|&x| x - 1).collect());
            ext.index_of(&label).ok_or(KpError::Dimension(weights.len(), ext.size()))
        })
        .collect::<Result<_, _>>()?;
    let ext = ext.permuted(&perm);
    let lhs = cl.resolve()?;
    let rhs = ext.resolve()?;
    let b = weights.len();
    let pivot = (0..b * b).find(|&t| !rhs[t].is_zero());
    let u = pivot.and_then(|t| lhs[t].checked_div(&rhs[t]).ok());
    let passed = match &u {
        Some(u) => (u * &u.conj()).is_one() && (0..b * b).all(|t| lhs[t] == u * &rhs[t]),
        None => false,
    };
    let ring_cl = verlinde(&cl, 0)?;
    let ring_ext = verlinde(&ext, 0)?;
    let fusion_agrees = ring_cl.all_integer
        && ring_ext.all_integer
        && ring_cl.ring.entries().eq(ring_ext.ring.entries());
    Ok(EquivReport {
        l,
        k,
        passed: passed && fusion_agrees,
        u: passed.then(|| u.expect("checked")),
        fusion_agrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smatrix::orthogonality_check;

    fn nonneg_integral(m: &ScaledMatrix) -> bool {
        let r = verlinde(m, 0).unwrap();
        r.all_integer && !r.ring.has_negative()
    }

    #[test]
    fn a1_level_one() {
        let m = kp_a1(1).unwrap();
        let s = m.resolve().unwrap();
        assert_eq!(s[0], s[1]);
        assert_eq!(s[0], s[2]);
        assert_eq!(s[3], -&s[0]);
        assert!(orthogonality_check(&m).unitary);
    }

    #[test]
    fn a1_unitary_and_positive() {
        for k in 1..=8 {
            let m = kp_a1(k).unwrap();
            assert!(orthogonality_check(&m).unitary, "k={k}");
            assert_eq!(m.transpose(), m);
        }
        for k in 1..=6 {
            assert!(nonneg_integral(&kp_a1(k).unwrap()), "k={k}");
        }
    }

    #[test]
    fn weight_enumeration() {
        let w = weights_cl(2, 1).unwrap();
        let tildes: Vec<Vec<u32>> = w.iter().map(|x| x.tilde.clone()).collect();
        assert_eq!(tildes, vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        let lambdas: Vec<Vec<u32>> = w.iter().map(|x| x.lambda.clone()).collect();
        assert_eq!(lambdas, vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
        for l in 2..=4usize {
            for k in 1..=4u32 {
                let w = weights_cl(l, k).unwrap();
                assert_eq!(w.len(), binomial(k as usize + l, l));
                assert_eq!(w[0].tilde, (1..=l as u32).collect::<Vec<_>>());
                for x in &w {
                    assert!(x.lambda.iter().sum::<u32>() <= k);
                    assert_eq!(CWeight::from_lambda(x.lambda.clone()), *x);
                }
            }
        }
        assert!(weights_cl(1, 1).is_err());
    }

    #[test]
    fn cl_unitary_symmetric() {
        for (l, k) in [(2, 1), (2, 2), (3, 1), (3, 2), (2, 3)] {
            let m = kp_cl(l, k).unwrap();
            assert!(orthogonality_check(&m).unitary, "l={l} k={k}");
            assert_eq!(m.transpose(), m);
        }
        assert!(nonneg_integral(&kp_cl(2, 1).unwrap()));
        assert!(nonneg_integral(&kp_cl(2, 2).unwrap()));
    }

    #[test]
    fn equivalence() {
        for (l, k) in [(2, 1), (3, 2)] {
            let r = equiv_check(l, k).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }
}
