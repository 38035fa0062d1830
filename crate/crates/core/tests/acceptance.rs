//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::Instant;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use verlinde::combin::{eps_sign, partition_of, schur_eval, ssyt_weights, tuples, Partition};
use verlinde::cyclo::CycNum;
use verlinde::fusion::{
    neg_scan, nonneg_sign_search, normalized_ring, verlinde, verlinde_float, FusionRing,
    SignStrategy, VerlindeReport,
};
use verlinde::kacpeterson::{equiv_check, kp_a1, kp_cl};
use verlinde::modular::{exterior_t, gauss_sum_identity, sl2z_check, t_matrix_cyclic, ModularDatum};
use verlinde::smatrix::{
    default_unit, dft_smatrix, exterior_power, fourier_block, orthogonality_check, p_det, ScaledMatrix,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

/// Reference multiplication table of Λ²(DFT₄): b_a · b_i = Σ_j TABLE[a][i][j] b_j.
const TABLE: [[[i64; 6]; 6]; 6] = [
    [
        [1, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0],
        [0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 1],
    ],
    [
        [0, 1, 0, 0, 0, 0],
        [0, 0, 1, 1, 0, 0],
        [0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 1, 0],
        [-1, 0, 0, 0, 0, 1],
        [0, -1, 0, 0, 0, 0],
    ],
    [
        [0, 0, 1, 0, 0, 0],
        [0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 1],
        [-1, 0, 0, 0, 0, 0],
        [0, -1, 0, 0, 0, 0],
        [0, 0, 0, -1, 0, 0],
    ],
    [
        [0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0],
        [-1, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 1],
        [0, -1, 0, 0, 0, 0],
        [0, 0, -1, 0, 0, 0],
    ],
    [
        [0, 0, 0, 0, 1, 0],
        [-1, 0, 0, 0, 0, 1],
        [0, -1, 0, 0, 0, 0],
        [0, -1, 0, 0, 0, 0],
        [0, 0, -1, -1, 0, 0],
        [0, 0, 0, 0, -1, 0],
    ],
    [
        [0, 0, 0, 0, 0, 1],
        [0, -1, 0, 0, 0, 0],
        [0, 0, 0, -1, 0, 0],
        [0, 0, -1, 0, 0, 0],
        [0, 0, 0, 0, -1, 0],
        [1, 0, 0, 0, 0, 0],
    ],
];

fn exterior(e: u32, n: usize) -> ScaledMatrix {
    exterior_power(&dft_smatrix(e).unwrap(), n).unwrap()
}

fn ring_of(m: &ScaledMatrix) -> VerlindeReport {
    verlinde(m, default_unit(m).unwrap()).unwrap()
}

fn matches_table(ring: &FusionRing, perm: &[usize]) -> bool {
    (0..6).all(|a| (0..6).all(|i| (0..6).all(|j| ring.get(perm[a], perm[i], perm[j]) == TABLE[a][i][j])))
}

fn c1_table() -> Check {
    let m = exterior(4, 2);
    let r = ring_of(&m);
    if !r.all_integer || default_unit(&m).unwrap() != 0 {
        return Err("unexpected ring".into());
    }
    let verbatim = matches_table(&r.ring, &[0, 1, 2, 3, 4, 5]);
    let found: Vec<Vec<usize>> = (1..6)
        .permutations(5)
        .map(|p| std::iter::once(0).chain(p).collect::<Vec<usize>>())
        .filter(|p| matches_table(&r.ring, p))
        .collect();
    match found.first() {
        Some(p) => {
            let labels = p.iter().map(|&i| m.labels[i].to_string()).join(" ");
            Ok(format!(
                "{} of 120 unit-fixing orders match; lexicographic order verbatim: {verbatim}; first match: {labels}",
                found.len()
            ))
        }
        None => Err(format!("no unit-fixing permutation matches; lexicographic verbatim: {verbatim}")),
    }
}

fn c2_integrality() -> Check {
    let mut count = 0;
    for e in 2..=8u32 {
        for n in 1..=e as usize {
            let r = ring_of(&exterior(e, n));
            if !r.all_integer {
                return Err(format!("e={e} n={n}: {} non-integral", r.violation_count));
            }
            count += 1;
        }
    }
    Ok(format!("{count} exterior powers, zero non-integral constants"))
}

fn c3_negative() -> Check {
    let scan = neg_scan(50).map_err(|e| e.to_string())?;
    let bad: Vec<String> = scan.rows.iter().filter(|r| !r.agrees).map(|r| format!("({},{})", r.e, r.n)).collect();
    let negative = scan.rows.iter().filter(|r| r.has_negative).count();
    if scan.all_agree && scan.strategies_agree {
        Ok(format!("{} cases, {negative} with unavoidable negatives, all match the predicate", scan.rows.len()))
    } else {
        Err(format!("mismatch at {bad:?}, strategies agree: {}", scan.strategies_agree))
    }
}

/// Ordered compositions of d with parts in 1..=max.
fn compositions(d: u32, max: u32) -> Vec<Vec<u32>> {
    if d == 0 {
        return vec![vec![]];
    }
    (1..=max.min(d))
        .flat_map(|first| {
            compositions(d - first, max).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

fn fourier_cases() -> Vec<(u32, Vec<u32>)> {
    (1..=4u32)
        .flat_map(|e| compositions(e + 1, e).into_iter().map(move |c| (e, c)))
        .collect()
}

fn c4_normalization() -> Check {
    let mut count = 0;
    for e in 2..=8u32 {
        for n in 1..=e as usize {
            let m = exterior(e, n);
            let (r, _) = normalized_ring(&m, default_unit(&m).unwrap()).map_err(|x| format!("e={e} n={n}: {x}"))?;
            let ax = r.axioms();
            if !ax.passed {
                return Err(format!("e={e} n={n}: {:?}", ax.first_failure));
            }
            count += 1;
        }
    }
    for (e, mult) in fourier_cases() {
        // constants come from the block without ε; the signs cancel
        let m = fourier_block(e, 1, &mult, false).unwrap();
        let (r, _) = normalized_ring(&m, default_unit(&m).unwrap()).map_err(|x| format!("e={e} {mult:?}: {x}"))?;
        let ax = r.axioms();
        if !ax.passed {
            return Err(format!("e={e} {mult:?}: {:?}", ax.first_failure));
        }
        count += 1;
    }
    // ε enters as ε(i)ε(j), so the ring changes by ε_0·ε_i·ε_j·ε_k
    let (e, mult) = (3, [2u32, 1, 1]);
    let free = fourier_block(e, 1, &mult, false).unwrap();
    let eps = fourier_block(e, 1, &mult, true).unwrap();
    let eps_of: Vec<i8> = free.labels.iter().map(|l| eps_sign(&l.blocks()) as i8).collect();
    let two_sided = free.with_column_signs(&eps_of).transpose().with_column_signs(&eps_of).transpose();
    if eps != two_sided {
        return Err("ε block is not ε(i)ε(j) times the ε-free block".into());
    }
    let unit = default_unit(&free).unwrap();
    let signs: Vec<i8> = eps_of.iter().map(|&x| x * eps_of[unit]).collect();
    let a = verlinde(&eps, unit).unwrap().ring;
    let b = verlinde(&free, unit).unwrap().ring.with_signs(&signs);
    if !a.entries().eq(b.entries()) {
        return Err("ε cross-check failed".into());
    }
    let flipped = eps_of.iter().filter(|&&x| x < 0).count();
    Ok(format!("{count} rings normalized, all axioms hold; ε cross-check on e=3 (2,1,1) agrees ({flipped} of {} signs negative)", eps_of.len()))
}

fn c5_impossibility() -> Check {
    let r = ring_of(&exterior(4, 2)).ring;
    let ex = nonneg_sign_search(&r, SignStrategy::Exhaustive { max_basis: 24 }).map_err(|e| e.to_string())?;
    let ch = nonneg_sign_search(&r, SignStrategy::SMatrix).map_err(|e| e.to_string())?;
    let sweep = (0u32..64).find(|mask| {
        let signs: Vec<i8> = (0..6).map(|t| if mask >> t & 1 == 1 { -1 } else { 1 }).collect();
        !r.with_signs(&signs).has_negative()
    });
    if ex.is_none() && ch.is_none() && sweep.is_none() {
        Ok("none of the 2^6 sign vectors gives nonnegative constants; library search and character strategy agree".into())
    } else {
        Err(format!("exhaustive {ex:?}, characters {ch:?}, sweep {sweep:?}"))
    }
}

fn c6_orthogonality() -> Check {
    let cases = fourier_cases();
    for (e, mult) in &cases {
        let r = orthogonality_check(&fourier_block(*e, 1, mult, true).unwrap());
        if !r.unitary {
            return Err(format!("e={e} {mult:?}: {} offending entries", r.offending.len()));
        }
    }
    Ok(format!("{} blocks exactly unitary", cases.len()))
}

fn c7_fourier_integrality() -> Check {
    let cases = fourier_cases();
    for (e, mult) in &cases {
        let m = fourier_block(*e, 1, mult, false).unwrap();
        let r = ring_of(&m);
        if !r.all_integer {
            return Err(format!("e={e} {mult:?}: {} non-integral", r.violation_count));
        }
    }
    Ok(format!("{} blocks, all constants integral", cases.len()))
}

fn c8_modular() -> Check {
    for e in 1..=12 {
        let d = ModularDatum::new(dft_smatrix(e).unwrap(), t_matrix_cyclic(e).unwrap()).unwrap();
        let r = sl2z_check(&d).unwrap();
        if !r.passed || !r.s2_is_conjugation {
            return Err(format!("cyclic e={e}: {:?}", r.failing_relation));
        }
    }
    for e in 1..=6u32 {
        let t = t_matrix_cyclic(e).unwrap();
        for n in 1..=e {
            let d = ModularDatum::new(exterior(e, n as usize), exterior_t(&t, e, n).unwrap()).unwrap();
            let r = sl2z_check(&d).unwrap();
            if !r.passed {
                return Err(format!("exterior e={e} n={n}: {:?}", r.failing_relation));
            }
        }
    }
    for e in 1..=24 {
        if !gauss_sum_identity(e).unwrap().passed {
            return Err(format!("Gauss sum e={e}"));
        }
    }
    Ok("cyclic e<=12, exterior e<=6, Gauss sums e<=24".into())
}

fn c9_kac_peterson() -> Check {
    let mut us = Vec::new();
    for (l, k) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)] {
        let r = equiv_check(l, k).map_err(|e| e.to_string())?;
        if !r.passed {
            return Err(format!("(l,k)=({l},{k}): {r:?}"));
        }
        us.push(format!("({l},{k}): u={}", r.u.unwrap()));
    }
    let nonneg = |m: &ScaledMatrix| {
        let r = ring_of(m);
        r.all_integer && !r.ring.has_negative()
    };
    for k in 1..=6 {
        if !nonneg(&kp_a1(k).unwrap()) {
            return Err(format!("A1 level {k}"));
        }
    }
    for k in 1..=2 {
        if !nonneg(&kp_cl(2, k).unwrap()) {
            return Err(format!("C2 level {k}"));
        }
    }
    Ok(us.join(", "))
}

fn c10_schur() -> Check {
    let mut pairs = 0;
    let mut shapes: Vec<(Partition, usize)> = Vec::new();
    for e in 1..=7u32 {
        for n in 1..=4.min(e) {
            let ts = tuples(e, n).unwrap();
            let base: Vec<i64> = (0..n as i64).collect();
            for i in &ts {
                let ii: Vec<i64> = i.entries.iter().map(|&x| x as i64).collect();
                let values: Vec<CycNum> = ii.iter().map(|&x| CycNum::root(e, x).unwrap()).collect();
                let vandermonde = p_det(&ii, &base, e);
                for j in &ts {
                    let lambda = partition_of(&j.entries);
                    let jj: Vec<i64> = j.entries.iter().map(|&x| x as i64).collect();
                    if &schur_eval(&lambda, &values) * &vandermonde != p_det(&ii, &jj, e) {
                        return Err(format!("e={e} i={ii:?} j={jj:?}"));
                    }
                    pairs += 1;
                    if !shapes.contains(&(lambda.clone(), n as usize)) {
                        shapes.push((lambda, n as usize));
                    }
                }
            }
        }
    }
    for (lambda, n) in &shapes {
        let weights = ssyt_weights(lambda, *n);
        let mut counts: Vec<HashMap<u32, usize>> = vec![HashMap::new(); *n];
        for w in &weights {
            for (nu, &a) in w.exponents.iter().enumerate() {
                *counts[nu].entry(a).or_default() += 1;
            }
        }
        if counts.iter().any(|c| *c != counts[0]) {
            return Err(format!("weight counts differ for {:?} in {n} variables", lambda.parts()));
        }
    }
    Ok(format!("{pairs} (i,j) pairs; weight symmetry for {} shapes", shapes.len()))
}

fn c11_float_oracle() -> Check {
    let mut matrices: Vec<(String, ScaledMatrix)> = Vec::new();
    for e in 2..=8u32 {
        for n in 1..=e as usize {
            matrices.push((format!("ext e={e} n={n}"), exterior(e, n)));
        }
    }
    for (e, mult) in fourier_cases() {
        matrices.push((format!("fourier e={e} {mult:?}"), fourier_block(e, 1, &mult, false).unwrap()));
    }
    for k in 1..=6 {
        matrices.push((format!("A1 level {k}"), kp_a1(k).unwrap()));
    }
    for (l, k) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)] {
        matrices.push((format!("C{l} level {k}"), kp_cl(l, k).unwrap()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0f64;
    for (name, m) in &matrices {
        let unit = default_unit(m).unwrap();
        let ring = verlinde(m, unit).unwrap().ring;
        let b = m.size();
        let triples: Vec<(usize, usize, usize)> = (0..200)
            .map(|_| (rng.random_range(0..b), rng.random_range(0..b), rng.random_range(0..b)))
            .collect();
        let approx = verlinde_float(m, unit, &triples, 128).unwrap();
        for (&(i, j, k), z) in triples.iter().zip(&approx) {
            let z = z.to_c64();
            let exact = ring.get(i, j, k) as f64;
            let d = ((z.re - exact).powi(2) + z.im.powi(2)).sqrt();
            worst = worst.max(d);
            if d >= 1e-6 {
                return Err(format!("{name}: N[{i},{j},{k}] exact {exact}, float {z}"));
            }
        }
    }
    Ok(format!("{} matrices x 200 triples, max |delta| = {worst:.1e}", matrices.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("e=4 n=2 multiplication table", c1_table),
        ("integrality of exterior powers, 2<=e<=8", c2_integrality),
        ("negative constants classification, basis <= 50", c3_negative),
        ("sign normalization and based-ring axioms", c4_normalization),
        ("no nonnegative sign change for e=4 n=2", c5_impossibility),
        ("orthogonality of Fourier blocks", c6_orthogonality),
        ("integrality of Fourier blocks", c7_fourier_integrality),
        ("modular data and Gauss sums", c8_modular),
        ("Kac-Peterson exterior-power equivalence", c9_kac_peterson),
        ("Schur functions against minors", c10_schur),
        ("128-bit floating oracle", c11_float_oracle),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.2}s): {detail}", n + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2}s): {detail}", n + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
