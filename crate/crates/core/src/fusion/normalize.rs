//! Row phases making the unit column real, then column signs making complex
//! conjugation permute the columns.

use std::collections::HashMap;


use super::{verlinde, FusionError, VerlindeReport};
use crate::cyclo::CycNum;
use crate::smatrix::{Label, ScaledMatrix};

/// A matrix with real unit column whose columns are permuted by conjugation.
#[derive(Clone, Debug, PartialEq)]
pub struct Normalized {
    pub matrix: ScaledMatrix,
    /// Column signs applied after the row phases.
    pub signs: Vec<i8>,
    /// θ_k multiplying row k.
    pub row_phases: Vec<CycNum>,
    /// The square root g ∈ {1, ζ₄} in θ_k = g·ζ_{2e}^(s·Σ_μ w_μ Σ_ν k^μ_ν).
    pub phase_root: CycNum,
    /// The sign s above; 0 when the unit column was already real.
    pub phase_direction: i8,
    /// conj(column i) = column partner[i] in `matrix`.
    pub partner: Vec<usize>,
}

fn err(msg: impl Into<String>) -> FusionError {
    FusionError::Normalization(msg.into())
}

/// Normalizes a matrix whose labels are increasing tuples modulo e = base and
/// whose unit label consists of blocks of consecutive integers.
pub fn normalize_signs(m: &ScaledMatrix, unit: usize) -> Result<Normalized, FusionError> {
    let b = m.size();
    if unit >= b {
        return Err(FusionError::UnitOutOfRange(unit));
    }
    let e = m.base as i64;
    let unit_blocks = m.labels[unit].blocks();
    let mut w = Vec::with_capacity(unit_blocks.len());
    for block in &unit_blocks {
        let a = *block.first().ok_or_else(|| err("empty unit block"))? as i64;
        if block.iter().enumerate().any(|(nu, &x)| x as i64 != a + nu as i64) {
            return Err(err(format!("unit label {} is not made of consecutive blocks", m.labels[unit])));
        }
        w.push(block.len() as i64 - 1 + 2 * a);
    }
    let weight = |label: &Label| -> i64 {
        label
            .blocks()
            .iter()
            .zip(&w)
            .map(|(blk, &wm)| wm * blk.iter().map(|&x| x as i64).sum::<i64>())
            .sum()
    };
    let weights: Vec<i64> = m.labels.iter().map(weight).collect();

    // unimodular extra scalars are absorbed into the row phases
    let (extra, absorb) = match m.extra_norm_sq() {
        Some(q) if q == num_rational::BigRational::from_integer(1.into()) => (CycNum::one(1), m.extra_scalar.conj()),
        _ => (m.extra_scalar.clone(), CycNum::one(1)),
    };
    // θ_k = g·ζ_{2e}^(s·weight_k); s = 0 keeps rows that are already fine
    let mut chosen = None;
    'search: for s in [0i64, -1, 1] {
        for g in [CycNum::one(1), CycNum::root(4, 1).expect("conductor 4")] {
            if s == 0 && !g.is_one() {
                continue;
            }
            let phases: Vec<CycNum> = weights
                .iter()
                .map(|&t| &(&g * &CycNum::root(2 * e as u32, s * t).expect("positive conductor")) * &absorb)
                .collect();
            let real = (0..b).all(|k| (&(&phases[k] * m.entry(k, unit)) * &extra).is_real());
            if real {
                chosen = Some((phases, g, s as i8));
                break 'search;
            }
        }
    }
    let (row_phases, phase_root, phase_direction) =
        chosen.ok_or_else(|| err("no row phase makes the unit column real"))?;
    let entries: Vec<CycNum> = (0..b * b).map(|t| &row_phases[t / b] * &m.entries[t]).collect();
    let phased = ScaledMatrix::new(m.labels.clone(), entries, m.base, m.scale_exp, extra)?;

    let index: HashMap<&Label, usize> = m.labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let partner: Vec<usize> = m
        .labels
        .iter()
        .map(|label| {
            let blocks = label
                .blocks()
                .iter()
                .zip(&w)
                .map(|(blk, &wm)| {
                    let mut v: Vec<u32> = blk.iter().map(|&x| (wm - x as i64).rem_euclid(e) as u32).collect();
                    v.sort_unstable();
                    v
                })
                .collect();
            let target = label.with_blocks(blocks);
            index
                .get(&target)
                .copied()
                .ok_or_else(|| err(format!("partner {target} of {label} is not a label")))
        })
        .collect::<Result<_, _>>()?;

    // conj of the true column i equals ±(true column partner[i]); extra is real now
    if !phased.extra_scalar.is_real() {
        return Err(err("extra scalar is not real after normalization"));
    }
    let mut signs = vec![1i8; b];
    for i in 0..b {
        let j = partner[i];
        if j < i {
            continue;
        }
        let mut plus = true;
        let mut minus = true;
        for k in 0..b {
            let c = phased.entry(k, i).conj();
            let v = phased.entry(k, j);
            plus &= c == *v;
            minus &= (&c + v).is_zero();
            if !plus && !minus {
                return Err(err(format!(
                    "conjugate of column {} is not ± column {}",
                    m.labels[i], m.labels[j]
                )));
            }
        }
        if !plus {
            if i == j {
                return Err(err(format!("column {} is purely imaginary", m.labels[i])));
            }
            signs[i] = -1;
        }
    }
    let matrix = phased.with_column_signs(&signs);
    Ok(Normalized {
        matrix,
        signs,
        row_phases,
        phase_root,
        phase_direction,
        partner,
    })
}

/// Structure constants of the normalized matrix and the normalization itself.
/// Row phases cancel in the Verlinde formula, so the constants come from the
/// original matrix with N ↦ s_i s_j s_k N.
pub fn normalized_ring(m: &ScaledMatrix, unit: usize) -> Result<(VerlindeReport, Normalized), FusionError> {
    let norm = normalize_signs(m, unit)?;
    let mut report = verlinde(m, unit)?;
    report.ring = report.ring.with_signs(&norm.signs);
    report.ring.involution = Some(norm.partner.clone());
    for v in &mut report.violations {
        if norm.signs[v.i] * norm.signs[v.j] * norm.signs[v.k] < 0 {
            v.value = -&v.value;
        }
    }
    Ok((report, norm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::{based_ring_axioms, involution_from_conjugation, Involution};
    use crate::smatrix::{default_unit, dft_smatrix, exterior_power, fourier_block};

    fn check(m: &ScaledMatrix) {
        let unit = default_unit(m).unwrap();
        let (report, norm) = normalized_ring(m, unit).unwrap();
        assert!(report.all_integer);
        assert!(norm.signs.iter().all(|&s| s == 1 || s == -1));
        assert_eq!(involution_from_conjugation(&norm.matrix), Involution::Found(norm.partner.clone()));
        let direct = verlinde(&norm.matrix, unit).unwrap();
        assert_eq!(
            direct.ring.entries().collect::<Vec<_>>(),
            report.ring.entries().collect::<Vec<_>>()
        );
        let axioms = based_ring_axioms(&report.ring);
        assert!(axioms.passed, "{axioms:?}");
    }

    #[test]
    fn exterior_powers_normalize() {
        for e in 1..=7u32 {
            for n in 1..=e as usize {
                check(&exterior_power(&dft_smatrix(e).unwrap(), n).unwrap());
            }
        }
    }

    #[test]
    fn fourier_blocks_normalize() {
        for (e, mult) in [(2u32, vec![2, 1]), (3, vec![2, 2]), (3, vec![1, 2, 1]), (2, vec![1, 1, 1])] {
            check(&fourier_block(e, 1, &mult, false).unwrap());
            check(&fourier_block(e, 1, &mult, true).unwrap());
        }
    }

    #[test]
    fn idempotent() {
        for (e, n) in [(4u32, 2usize), (5, 2), (6, 3), (3, 1)] {
            let m = exterior_power(&dft_smatrix(e).unwrap(), n).unwrap();
            let unit = default_unit(&m).unwrap();
            let once = normalize_signs(&m, unit).unwrap();
            let twice = normalize_signs(&once.matrix, unit).unwrap();
            assert!(twice.signs.iter().all(|&s| s == 1));
            assert!(twice.row_phases.iter().all(CycNum::is_one));
            assert_eq!(twice.matrix, once.matrix);
        }
    }

    #[test]
    fn exterior_partner_is_reflection() {
        for (e, n) in [(4u32, 2usize), (5, 3), (6, 2), (7, 4)] {
            let m = exterior_power(&dft_smatrix(e).unwrap(), n).unwrap();
            let norm = normalize_signs(&m, 0).unwrap();
            for (i, label) in m.labels.iter().enumerate() {
                let Label::Tuple(t) = label else { panic!() };
                let mut want: Vec<u32> = t.iter().map(|&x| (n as i64 - 1 - x as i64).rem_euclid(e as i64) as u32).collect();
                want.sort_unstable();
                assert_eq!(m.labels[norm.partner[i]], Label::Tuple(want));
            }
        }
    }

    #[test]
    fn rejects_non_consecutive_unit() {
        let m = exterior_power(&dft_smatrix(5).unwrap(), 2).unwrap();
        let unit = m.index_of(&Label::Tuple(vec![0, 2])).unwrap();
        assert!(matches!(normalize_signs(&m, unit), Err(FusionError::Normalization(_))));
    }
}
