use serde::Serialize;

use super::FusionRing;

/// Outcome of the based-ring checks. `first_failure` names one witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub passed: bool,
    pub integral: bool,
    pub unit_law: bool,
    pub commutative: bool,
    pub associative: bool,
    /// N_{ĩ j̃}^k = N_ij^{k̃}
    pub involution_compatible: bool,
    /// N_{ĩ j}^unit = δ_ij
    pub unit_pairing: bool,
    /// No involution was stored, so the identity was used.
    pub identity_involution_assumed: bool,
    pub first_failure: Option<String>,
}

/// Checks unit, commutativity, associativity and the involution axioms.
/// Associativity is checked sparsely: (b_i b_j) b_k against b_i (b_j b_k).
pub fn based_ring_axioms(ring: &FusionRing) -> AxiomReport {
    let b = ring.size();
    let u = ring.unit;
    let identity: Vec<usize> = (0..b).collect();
    let inv = ring.involution.as_ref().unwrap_or(&identity);
    let mut first: Option<String> = None;
    let mut note = |msg: String| {
        if first.is_none() {
            first = Some(msg);
        }
    };
    let label = |i: usize| ring.labels[i].to_string();

    let mut unit_law = true;
    for j in 0..b {
        for (l, r) in [(u, j), (j, u)] {
            if ring.product(l, r) != [(j as u32, 1)] {
                unit_law = false;
                note(format!("unit times {} is not {}", label(j), label(j)));
            }
        }
    }

    let mut commutative = true;
    'comm: for i in 0..b {
        for j in i + 1..b {
            if ring.product(i, j) != ring.product(j, i) {
                commutative = false;
                note(format!("{} * {} != {} * {}", label(i), label(j), label(j), label(i)));
                break 'comm;
            }
        }
    }

    let associative = match associativity_witness(ring) {
        None => true,
        Some((i, j, k, l)) => {
            note(format!(
                "({} * {}) * {} and {} * ({} * {}) differ at {}",
                label(i), label(j), label(k), label(i), label(j), label(k), label(l)
            ));
            false
        }
    };

    let mut involution_compatible = true;
    'inv: for i in 0..b {
        for j in 0..b {
            let mut lhs: Vec<(u32, i64)> = ring.product(inv[i], inv[j]).to_vec();
            let mut rhs: Vec<(u32, i64)> = ring
                .product(i, j)
                .iter()
                .map(|&(k, n)| (inv[k as usize] as u32, n))
                .collect();
            lhs.sort_unstable();
            rhs.sort_unstable();
            if lhs != rhs {
                involution_compatible = false;
                note(format!("involution is not compatible with {} * {}", label(i), label(j)));
                break 'inv;
            }
        }
    }

    let mut unit_pairing = true;
    'pair: for i in 0..b {
        for j in 0..b {
            let want = i64::from(i == j);
            let got = ring.get(inv[i], j, u);
            if got != want {
                unit_pairing = false;
                note(format!(
                    "coefficient of the unit in {}~ * {} is {got}, expected {want}",
                    label(i),
                    label(j)
                ));
                break 'pair;
            }
        }
    }

    let passed = unit_law && commutative && associative && involution_compatible && unit_pairing;
    AxiomReport {
        passed,
        integral: true,
        unit_law,
        commutative,
        associative,
        involution_compatible,
        unit_pairing,
        identity_involution_assumed: ring.involution.is_none(),
        first_failure: first,
    }
}

/// First (i, j, k, l) where the coefficient of b_l in (b_i b_j) b_k and
/// b_i (b_j b_k) differ.
fn associativity_witness(ring: &FusionRing) -> Option<(usize, usize, usize, usize)> {
    let b = ring.size();
    let mut acc = vec![0i64; b];
    let mut touched = Vec::new();
    for i in 0..b {
        for j in 0..b {
            for k in 0..b {
                for &(m, x) in ring.product(i, j) {
                    for &(l, y) in ring.product(m as usize, k) {
                        acc[l as usize] += x * y;
                        touched.push(l as usize);
                    }
                }
                for &(m, x) in ring.product(j, k) {
                    for &(l, y) in ring.product(i, m as usize) {
                        acc[l as usize] -= x * y;
                        touched.push(l as usize);
                    }
                }
                let mut bad = None;
                for &l in &touched {
                    if acc[l] != 0 {
                        bad = Some(bad.map_or(l, |b: usize| b.min(l)));
                    }
                }
                for &l in &touched {
                    acc[l] = 0;
                }
                touched.clear();
                if let Some(l) = bad {
                    return Some((i, j, k, l));
                }
            }
        }
    }
    None
}
