//! T-matrices and the SL₂(Z) relations S⁴ = 1, (ST)³ = 1, [S², T] = 1.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::combin::tuples;
use crate::cyclo::multimod::mat_mul;
use crate::cyclo::{embed_complex, gauss_sum, sqrt_conductor, sqrt_e, CycError, CycNum};
use crate::fusion::{involution_from_conjugation, Involution};
use crate::smatrix::{MatrixError, ScaledMatrix};

/// An S-matrix with a diagonal T over the same labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModularDatum {
    #[serde(flatten)]
    pub s: ScaledMatrix,
    #[serde(rename = "t_diagonal")]
    pub t: Vec<CycNum>,
}

impl ModularDatum {
    pub fn new(s: ScaledMatrix, t: Vec<CycNum>) -> Result<Self, MatrixError> {
        if t.len() != s.size() {
            return Err(MatrixError::Shape(format!("{} T entries for {} labels", t.len(), s.size())));
        }
        if let Some(i) = t.iter().position(|x| !(x * &x.conj()).is_one()) {
            return Err(MatrixError::Shape(format!("T entry {i} does not have norm 1")));
        }
        Ok(ModularDatum { s, t })
    }

    /// Relabels S and T together: new index t is old perm[t].
    pub fn permuted(&self, perm: &[usize]) -> ModularDatum {
        ModularDatum {
            s: self.s.permuted(perm),
            t: perm.iter().map(|&p| self.t[p].clone()).collect(),
        }
    }
}

fn t_conductor(e: u32) -> u32 {
    24u32.lcm(&(2 * e))
}

/// ζ₂₄^(e−1)·ζ_{2e}^(i² + e·i) in Q(ζ_lcm(24, 2e)); depends only on i mod e.
pub fn t_entry(e: u32, i: i64) -> CycNum {
    let n = t_conductor(e) as i64;
    let e = e as i64;
    let exp = (n / 24) * (e - 1) + (n / (2 * e)) * (i * i + e * i);
    CycNum::root(n as u32, exp.rem_euclid(n)).expect("positive conductor")
}

/// The T-diagonal for the e×e DFT matrix.
pub fn t_matrix_cyclic(e: u32) -> Result<Vec<CycNum>, MatrixError> {
    if e == 0 {
        return Err(MatrixError::Params("e must be positive".into()));
    }
    Ok((0..e as i64).map(|i| t_entry(e, i)).collect())
}

/// Entry at ī is ∏_ν t_{i_ν}, over tuples(e, n) in lexicographic order.
pub fn exterior_t(t: &[CycNum], e: u32, n: u32) -> Result<Vec<CycNum>, MatrixError> {
    let ts = tuples(e, n).map_err(|err| MatrixError::Params(err.to_string()))?;
    Ok(ts
        .iter()
        .map(|tp| {
            tp.entries
                .iter()
                .fold(CycNum::one(1), |acc, &i| &acc * &t[i as usize])
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sl2zReport {
    pub passed: bool,
    pub s4: bool,
    pub st3: bool,
    pub s2_commutes_with_t: bool,
    /// S² is the permutation matrix of complex conjugation on columns.
    /// Reported only: raw exterior powers have a signed permutation here.
    pub s2_is_conjugation: bool,
    pub failing_relation: Option<String>,
}

fn is_identity(m: &[CycNum], n: usize) -> bool {
    (0..n * n).all(|t| if t / n == t % n { m[t].is_one() } else { m[t].is_zero() })
}

pub fn sl2z_check(d: &ModularDatum) -> Result<Sl2zReport, CycError> {
    let n = d.s.size();
    let s = d.s.resolve()?;
    let s2 = mat_mul(&s, &s, n, n, n, false);
    let s4 = is_identity(&mat_mul(&s2, &s2, n, n, n, false), n);
    let st: Vec<CycNum> = (0..n * n).map(|t| &s[t] * &d.t[t % n]).collect();
    let st2 = mat_mul(&st, &st, n, n, n, false);
    let st3 = is_identity(&mat_mul(&st2, &st, n, n, n, false), n);
    let s2_commutes_with_t = (0..n * n).all(|t| {
        let (i, j) = (t / n, t % n);
        s2[t].is_zero() || d.t[i] == d.t[j]
    });
    let s2_is_conjugation = match involution_from_conjugation(&d.s) {
        Involution::Found(perm) => (0..n * n).all(|t| {
            let (i, j) = (t / n, t % n);
            if perm[j] == i { s2[t].is_one() } else { s2[t].is_zero() }
        }),
        Involution::Absent { .. } => false,
    };
    let failing_relation = if !s4 {
        Some("S^4 = 1".to_string())
    } else if !st3 {
        Some("(ST)^3 = 1".to_string())
    } else if !s2_commutes_with_t {
        Some("S^2 T = T S^2".to_string())
    } else {
        None
    };
    Ok(Sl2zReport {
        passed: failing_relation.is_none(),
        s4,
        st3,
        s2_commutes_with_t,
        s2_is_conjugation,
        failing_relation,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaussReport {
    pub e: u32,
    /// Σ_k ζ_{2e}^(k² + ek) = ζ₂₄^(−3(e−1))·√e
    pub identity: bool,
    /// The square root squares to e and embeds as a positive real.
    pub root_valid: bool,
    /// (Σ_k ζ_{2e}^(k² + ek))² = (−i)^(e−1)·e
    pub square: bool,
    pub passed: bool,
}

pub fn gauss_sum_identity(e: u32) -> Result<GaussReport, CycError> {
    if e == 0 {
        return Err(CycError::InvalidConductor);
    }
    let n = sqrt_conductor(e);
    let lhs = gauss_sum(e);
    let root = sqrt_e(e, n)?;
    let phase = CycNum::root(24, -3 * (e as i64 - 1))?;
    let identity = lhs == &phase * &root;
    let z = embed_complex(&root, 64).to_c64();
    let root_valid = (&root * &root).as_integer() == Some(e.into())
        && z.re > 0.0
        && z.im.abs() < 1e-12;
    let minus_i = CycNum::root(4, 3)?;
    let square = &lhs * &lhs == minus_i.pow(e as u64 - 1).scale(&num_rational::BigRational::from_integer(e.into()));
    Ok(GaussReport {
        e,
        identity,
        root_valid,
        square,
        passed: identity && root_valid && square,
    })
}
