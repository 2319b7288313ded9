//! Expansion of `f` over its last `n - k` variables and grouping of the
//! `2^k` prefix minterms.
//!
//! For output `i` and suffix `a`, the coefficient `f_{i,a}(σ) = f_i(σ, a)`
//! is a function of the prefix `σ`. Splitting the prefixes into consecutive
//! blocks of at most `s`, the part of `f_{i,a}` on block `t` is an XOR of
//! the block's minterms, described by an `s`-bit selector word.

use crate::table::TruthTable;

/// `σ ↦ f_i(⟨σ, a⟩)` as a vector indexed by `σ ∈ 0..2^k`.
///
/// `i` is 0-based (output `x_1` is `i = 0`).
pub fn restrict(tt: &TruthTable, i: usize, a: u64, k: usize) -> Vec<bool> {
    let n = tt.n();
    assert!(i < n && k >= 1 && k < n, "restrict: i={i} k={k} n={n}");
    assert!(a >> (n - k) == 0, "suffix {a:#b} wider than {} bits", n - k);
    (0..1u64 << k)
        .map(|sigma| tt.output_bit((sigma << (n - k)) | a, i))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPlan {
    n: usize,
    k: usize,
    s: usize,
    groups: Vec<Vec<u64>>,
    /// Indexed by `(i * p + t) * 2^(n-k) + a`.
    selectors: Vec<u64>,
}

impl GroupPlan {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn p(&self) -> usize {
        self.groups.len()
    }

    pub fn suffixes(&self) -> u64 {
        1 << (self.n - self.k)
    }

    /// Prefix minterms of group `t`, in order.
    pub fn groups(&self) -> &[Vec<u64>] {
        &self.groups
    }

    /// Selector over the members of group `t` for output `i` and suffix `a`.
    /// Member `j` of the group is bit `s - 1 - j`.
    pub fn selector(&self, i: usize, t: usize, a: u64) -> u64 {
        let idx = (i * self.p() + t) * self.suffixes() as usize + a as usize;
        self.selectors[idx]
    }

    /// Distinct non-zero selectors used by group `t`, ascending.
    pub fn distinct_selectors(&self, t: usize) -> Vec<u64> {
        let mut gs: Vec<u64> = (0..self.n)
            .flat_map(|i| (0..self.suffixes()).map(move |a| (i, a)))
            .map(|(i, a)| self.selector(i, t, a))
            .filter(|&g| g != 0)
            .collect();
        gs.sort_unstable();
        gs.dedup();
        gs
    }
}

/// Consecutive blocks of `s` prefixes and the selector of every
/// `(output, group, suffix)` triple.
pub fn plan_groups(tt: &TruthTable, k: usize, s: usize) -> GroupPlan {
    let n = tt.n();
    assert!(k >= 1 && k < n, "plan_groups: k={k} n={n}");
    assert!(s >= 1 && s <= 1 << k, "plan_groups: s={s} k={k}");
    let groups: Vec<Vec<u64>> = (0..1u64 << k)
        .collect::<Vec<_>>()
        .chunks(s)
        .map(<[u64]>::to_vec)
        .collect();
    let suffixes = 1u64 << (n - k);
    let mut selectors = Vec::with_capacity(n * groups.len() * suffixes as usize);
    for i in 0..n {
        for group in &groups {
            for a in 0..suffixes {
                let g = group.iter().enumerate().fold(0u64, |g, (j, &sigma)| {
                    if tt.output_bit((sigma << (n - k)) | a, i) {
                        g | 1 << (s - 1 - j)
                    } else {
                        g
                    }
                });
                selectors.push(g);
            }
        }
    }
    GroupPlan {
        n,
        k,
        s,
        groups,
        selectors,
    }
}

fn minterm(x: u64, a: u64, bits: usize) -> bool {
    x & ((1u64 << bits) - 1) == a
}

/// Rebuilds `f` as `f_i(x) = XOR_a [suffix(x) = a] & f_{i,a}(prefix(x))`.
pub fn recompose_expansion(tt: &TruthTable, k: usize) -> TruthTable {
    let n = tt.n();
    let coeffs: Vec<Vec<Vec<bool>>> = (0..n)
        .map(|i| (0..1u64 << (n - k)).map(|a| restrict(tt, i, a, k)).collect())
        .collect();
    TruthTable::from_fn(n, |x| {
        let prefix = (x >> (n - k)) as usize;
        (0..n).fold(0, |word, i| {
            let bit = (0..1u64 << (n - k))
                .filter(|&a| minterm(x, a, n - k) && coeffs[i][a as usize][prefix])
                .count()
                % 2;
            word | (bit as u64) << (n - 1 - i)
        })
    })
    .expect("recomposed table is well formed")
}

/// Rebuilds `f` from the grouped form: for every group and suffix, the XOR of
/// the selected group minterms, gated by the suffix minterm.
pub fn recompose_grouped(plan: &GroupPlan) -> TruthTable {
    let (n, k, s) = (plan.n, plan.k, plan.s);
    TruthTable::from_fn(n, |x| {
        let prefix = x >> (n - k);
        (0..n).fold(0, |word, i| {
            let mut bit = false;
            for (t, group) in plan.groups.iter().enumerate() {
                for a in 0..plan.suffixes() {
                    if !minterm(x, a, n - k) {
                        continue;
                    }
                    let g = plan.selector(i, t, a);
                    for (j, &sigma) in group.iter().enumerate() {
                        bit ^= (g >> (s - 1 - j)) & 1 == 1 && sigma == prefix;
                    }
                }
            }
            word | u64::from(bit) << (n - 1 - i)
        })
    })
    .expect("recomposed table is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_restrictions() {
        let tt = TruthTable::identity(5);
        let k = 3;
        for a in 0..4u64 {
            for i in 0..k {
                let r = restrict(&tt, i, a, k);
                for sigma in 0..8usize {
                    assert_eq!(r[sigma], (sigma >> (k - 1 - i)) & 1 == 1);
                }
            }
            for i in k..5 {
                let expect = (a >> (4 - i)) & 1 == 1;
                assert!(restrict(&tt, i, a, k).iter().all(|&b| b == expect));
            }
        }
    }

    #[test]
    fn consecutive_blocks() {
        let tt = TruthTable::random(4, 1);
        let plan = plan_groups(&tt, 2, 2);
        assert_eq!(plan.groups(), &[vec![0, 1], vec![2, 3]]);
        let plan = plan_groups(&tt, 3, 3);
        assert_eq!(plan.groups(), &[vec![0, 1, 2], vec![3, 4, 5], vec![6, 7]]);
        assert_eq!(plan.p(), 3);
    }

    #[test]
    fn zero_coefficients_give_zero_selectors() {
        let plan = plan_groups(&TruthTable::constant_zero(4), 2, 2);
        for t in 0..plan.p() {
            assert!(plan.distinct_selectors(t).is_empty());
        }
    }

    #[test]
    fn recompositions_match() {
        for seed in 0..20 {
            let tt = TruthTable::random(5, seed);
            for k in 1..5 {
                assert_eq!(recompose_expansion(&tt, k), tt);
                for s in [1, 2, 3].into_iter().filter(|&s| s <= 1 << k) {
                    assert_eq!(recompose_grouped(&plan_groups(&tt, k, s)), tt);
                }
            }
        }
    }
}
