//! Minors and exterior powers.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

use super::monomial::{leibniz, MonomialMatrix};
use super::{gram_scalar, Label, MatrixError, ScaledMatrix};
use crate::combin::tuples;
use crate::cyclo::{multimod, CycNum, Rational};

/// det(ζ_e^(i_μ j_ν)) for tuples of equal length; entries of ī may repeat or
/// be unsorted.
pub fn p_det(i: &[i64], j: &[i64], e: u32) -> CycNum {
    assert_eq!(i.len(), j.len(), "p_det needs tuples of equal length");
    let n = i.len();
    let modulus = e as i64;
    let mut g = vec![0i64; e as usize];
    leibniz(n, &mut |perm, sign| {
        let exp: i64 = perm
            .iter()
            .enumerate()
            .map(|(mu, &nu)| i[mu] * j[nu])
            .sum();
        g[exp.rem_euclid(modulus) as usize] += sign as i64;
    });
    CycNum::from_group_ring(e, &g)
}

fn leibniz_cyc(m: &ScaledMatrix, rows: &[usize], cols: &[usize]) -> CycNum {
    let mut acc = CycNum::zero(1);
    leibniz(rows.len(), &mut |perm, sign| {
        let mut t = CycNum::from_int(1, sign);
        for (r, &c) in perm.iter().enumerate() {
            t = &t * m.entry(rows[r], cols[c]);
        }
        acc = &acc + &t;
    });
    acc
}

/// Largest size for which minors are expanded over permutations.
const LEIBNIZ_MAX: usize = 6;

struct Minors<'a> {
    m: &'a ScaledMatrix,
    mono: Option<MonomialMatrix>,
}

impl Minors<'_> {
    fn minor(&self, rows: &[usize], cols: &[usize]) -> CycNum {
        let k = rows.len();
        if k == 0 {
            return CycNum::one(1);
        }
        match &self.mono {
            Some(mono) if k <= LEIBNIZ_MAX => {
                CycNum::from_group_ring(mono.conductor, &mono.minor_group_ring(rows, cols))
            }
            _ if k <= 3 => leibniz_cyc(self.m, rows, cols),
            _ => {
                let sub: Vec<CycNum> = rows
                    .iter()
                    .cartesian_product(cols)
                    .map(|(&r, &c)| self.m.entry(r, c).clone())
                    .collect();
                multimod::det(&sub, k)
            }
        }
    }
}

/// Matrix of n×n minors over increasing n-tuples of row and column indices.
///
/// When more than half of the rows are taken and the entries satisfy
/// M·M̄ᵗ = c·I, each minor is read off from the complementary minor:
/// det M[I,J] = (−1)^(ΣI+ΣJ) · det M · c^(n−e) · conj(det M[Iᶜ,Jᶜ]).
pub fn exterior_power(m: &ScaledMatrix, n: usize) -> Result<ScaledMatrix, MatrixError> {
    let e = m.size();
    if n == 0 || n > e {
        return Err(MatrixError::OutOfRange { e, n });
    }
    let index_tuples: Vec<Vec<usize>> = tuples(e as u32, n as u32)
        .expect("n <= e")
        .into_iter()
        .map(|t| t.entries.into_iter().map(|x| x as usize).collect())
        .collect();
    let minors = Minors {
        m,
        mono: MonomialMatrix::detect(&m.entries, e),
    };
    let jacobi = if 2 * n > e && e - n < n { gram_scalar(m) } else { None };
    let entries: Vec<CycNum> = match jacobi {
        Some(c) => {
            let det = minors.minor(&(0..e).collect::<Vec<_>>(), &(0..e).collect::<Vec<_>>());
            let factor = det.scale(&pow_rational(&c, -((e - n) as i64)));
            let complement = |t: &[usize]| -> Vec<usize> { (0..e).filter(|x| !t.contains(x)).collect() };
            let pairs: Vec<(usize, usize)> = (0..index_tuples.len())
                .cartesian_product(0..index_tuples.len())
                .collect();
            pairs
                .par_iter()
                .map(|&(a, b)| {
                    let (ti, tj) = (&index_tuples[a], &index_tuples[b]);
                    let sum: usize = ti.iter().sum::<usize>() + tj.iter().sum::<usize>();
                    let comp = minors.minor(&complement(ti), &complement(tj)).conj();
                    let v = &factor * &comp;
                    if sum % 2 == 1 {
                        -v
                    } else {
                        v
                    }
                })
                .collect()
        }
        None => {
            let pairs: Vec<(usize, usize)> = (0..index_tuples.len())
                .cartesian_product(0..index_tuples.len())
                .collect();
            pairs
                .par_iter()
                .map(|&(a, b)| minors.minor(&index_tuples[a], &index_tuples[b]))
                .collect()
        }
    };
    let labels = index_tuples
        .iter()
        .map(|t| {
            if n == 1 {
                m.labels[t[0]].clone()
            } else {
                Label::Tuple(t.iter().map(|&x| x as u32).collect())
            }
        })
        .collect();
    ScaledMatrix::new(
        labels,
        entries,
        m.base,
        m.scale_exp * n as u32,
        m.extra_scalar.pow(n as u64),
    )
}

fn pow_rational(c: &Rational, k: i64) -> Rational {
    let base = if k < 0 { c.recip() } else { c.clone() };
    let mut acc = Rational::from_integer(BigInt::one());
    for _ in 0..k.unsigned_abs() {
        acc *= &base;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::super::{dft_smatrix, orthogonality_check};
    use super::*;

    #[test]
    fn p_det_examples() {
        let z4 = CycNum::root(4, 1).unwrap();
        assert_eq!(p_det(&[0, 1], &[0, 1], 4), &z4 - &CycNum::one(4));
        assert!(p_det(&[1, 1], &[0, 2], 5).is_zero());
        assert!(!p_det(&[0, 2, 3], &[0, 1, 2], 5).is_zero());
    }

    #[test]
    fn trivial_powers() {
        let s = dft_smatrix(5).unwrap();
        assert_eq!(exterior_power(&s, 1).unwrap(), s);
        let top = exterior_power(&s, 5).unwrap();
        assert_eq!(top.size(), 1);
        assert_eq!(top.scale_exp, 5);
        assert!(matches!(exterior_power(&s, 6), Err(MatrixError::OutOfRange { .. })));
        assert!(matches!(exterior_power(&s, 0), Err(MatrixError::OutOfRange { .. })));
    }

    #[test]
    fn entries_are_p_dets() {
        for e in 1..=7u32 {
            let s = dft_smatrix(e).unwrap();
            for n in 1..=e as usize {
                let ext = exterior_power(&s, n).unwrap();
                for (a, la) in ext.labels.iter().enumerate() {
                    for (b, lb) in ext.labels.iter().enumerate() {
                        let ti: Vec<i64> = la.blocks()[0].iter().map(|&x| x as i64).collect();
                        let tj: Vec<i64> = lb.blocks()[0].iter().map(|&x| x as i64).collect();
                        assert_eq!(ext.entry(a, b), &p_det(&ti, &tj, e), "e={e} n={n} {la} {lb}");
                    }
                }
            }
        }
    }

    #[test]
    fn jacobi_agrees_with_direct_minors() {
        // Perturb the DFT so that the generic paths run, keeping unitarity.
        let s = dft_smatrix(7).unwrap();
        let phase = CycNum::root(3, 1).unwrap();
        let twisted = ScaledMatrix {
            entries: s.entries.iter().map(|x| x * &phase).collect(),
            ..s.clone()
        };
        for n in [4usize, 5, 6] {
            let fast = exterior_power(&twisted, n).unwrap();
            let m = Minors { m: &twisted, mono: None };
            let tup: Vec<Vec<usize>> = (0..7).combinations(n).collect();
            for (a, ta) in tup.iter().enumerate().step_by(3) {
                for (b, tb) in tup.iter().enumerate().step_by(2) {
                    assert_eq!(fast.entry(a, b), &m.minor(ta, tb), "n={n}");
                }
            }
        }
    }

    #[test]
    fn exterior_powers_stay_unitary() {
        for e in 2..=6 {
            let s = dft_smatrix(e).unwrap();
            for n in 1..=e as usize {
                assert!(orthogonality_check(&exterior_power(&s, n).unwrap()).unitary);
            }
        }
    }

    #[test]
    fn non_monomial_input() {
        // kp-style entries ζ^ab − ζ^−ab are not monomials
        let k = 3;
        let kappa = 2 * (k + 2);
        let entries: Vec<CycNum> = (1..=k + 1)
            .cartesian_product(1..=k + 1)
            .map(|(a, b)| &CycNum::root(kappa, (a * b) as i64).unwrap() - &CycNum::root(kappa, -((a * b) as i64)).unwrap())
            .collect();
        let m = ScaledMatrix::new((0..=k).map(Label::Index).collect(), entries, kappa, 1, CycNum::one(1)).unwrap();
        let ext = exterior_power(&m, 2).unwrap();
        assert_eq!(ext.entry(0, 1), &(&(m.entry(0, 0) * m.entry(1, 2)) - &(m.entry(0, 2) * m.entry(1, 0))));
        let ext4 = exterior_power(&m, 4).unwrap();
        let direct = multimod::det(&m.entries, 4);
        assert_eq!(ext4.entry(0, 0), &direct);
    }
}
