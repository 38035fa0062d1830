//! Matrices whose entries are all ±ζ_N^k, handled in the group ring Z[x]/(x^N − 1).

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::cyclo::CycNum;

/// Entry t of the matrix is sign[t] · ζ_N^exp[t].
pub(crate) struct MonomialMatrix {
    pub conductor: u32,
    pub size: usize,
    pub sign: Vec<i8>,
    pub exp: Vec<u32>,
}

impl MonomialMatrix {
    /// Recognises the entries, or returns None if one is not ±(root of unity).
    pub fn detect(entries: &[CycNum], size: usize) -> Option<Self> {
        let n = entries.iter().fold(1u32, |acc, x| acc.lcm(&x.conductor()));
        let mut table: HashMap<Vec<BigInt>, (i8, u32)> = HashMap::new();
        for k in (0..n).rev() {
            let z = CycNum::root(n, k as i64).ok()?;
            table.insert((-&z).numerator().to_vec(), (-1, k));
            table.insert(z.numerator().to_vec(), (1, k));
        }
        let mut sign = Vec::with_capacity(entries.len());
        let mut exp = Vec::with_capacity(entries.len());
        for x in entries {
            let x = x.lift(n).ok()?;
            if !x.denominator().is_one() {
                return None;
            }
            let &(s, k) = table.get(x.numerator())?;
            sign.push(s);
            exp.push(k);
        }
        Some(MonomialMatrix {
            conductor: n,
            size,
            sign,
            exp,
        })
    }

    /// det of the submatrix (rows, cols) as a group-ring vector of length N.
    pub fn minor_group_ring(&self, rows: &[usize], cols: &[usize]) -> Vec<i64> {
        let n = self.conductor as usize;
        let mut g = vec![0i64; n];
        leibniz(rows.len(), &mut |perm, sign| {
            let mut e = 0usize;
            let mut s = sign as i64;
            for (r, &c) in perm.iter().enumerate() {
                let t = rows[r] * self.size + cols[c];
                e += self.exp[t] as usize;
                s *= self.sign[t] as i64;
            }
            g[e % n] += s;
        });
        g
    }
}

/// Calls `f(perm, sign)` for every permutation of 0..n (Heap's algorithm).
pub(crate) fn leibniz(n: usize, f: &mut dyn FnMut(&[usize], i32)) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut sign = 1i32;
    f(&perm, sign);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            f(&perm, sign);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}
