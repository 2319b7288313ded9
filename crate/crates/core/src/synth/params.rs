//! Choice of the split point `k`, the group size `s` and the provider budgets.

use serde::Serialize;

use crate::product_tree::{plan_tree, storage_split, StoragePlan};

use super::SynthError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Strategy {
    /// One conjunction request per suffix and group.
    MinimizeT2,
    /// One linear-form request per distinct selector and group.
    MinimizeT3,
}

impl Strategy {
    pub const ALL: [Strategy; 2] = [Strategy::MinimizeT2, Strategy::MinimizeT3];

    pub fn number(self) -> u8 {
        match self {
            Strategy::MinimizeT2 => 1,
            Strategy::MinimizeT3 => 2,
        }
    }

    pub fn from_number(v: u8) -> Option<Self> {
        match v {
            1 => Some(Strategy::MinimizeT2),
            2 => Some(Strategy::MinimizeT3),
            _ => None,
        }
    }
}

/// Fixes parts of the parameter search. Unset fields are chosen by
/// [`select_params`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Overrides {
    pub k: Option<usize>,
    pub s: Option<usize>,
    pub q1: Option<usize>,
    pub q2: Option<usize>,
    pub q3: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SynthesisParams {
    pub n: usize,
    pub q: usize,
    pub k: usize,
    pub s: usize,
    pub p: usize,
    pub q1: usize,
    pub q2: usize,
    pub q3: usize,
    /// Wires holding the current group's prefix conjunctions (0 when the
    /// conjunction provider already keeps them on resident wires).
    pub holders: usize,
    pub strategy: Strategy,
    /// Gate count the search scored this point with.
    pub predicted_gates: u64,
}

impl SynthesisParams {
    /// Wire budgets handed to the three providers: `q_i` plus `m - 1`.
    pub fn provider_budgets(&self) -> [usize; 3] {
        [
            self.q1 + self.k - 1,
            self.q2 + self.n - self.k - 1,
            self.q3 + self.s - 1,
        ]
    }

    /// Wires outside the three provider budgets: negations, the constant-0
    /// wire, holders and outputs.
    pub fn fixed_wires(&self) -> usize {
        2 * self.n + 1 + self.holders
    }
}

fn split_for(m: usize, budget: usize) -> StoragePlan {
    storage_split(&plan_tree(m), budget)
}

fn root_resident(m: usize, split: &StoragePlan) -> bool {
    m == 1 || split.stored_from == 1
}

/// Default group size: `n - k`, clamped to the `2^k` available prefixes.
pub fn default_group_size(n: usize, k: usize) -> usize {
    let cap = if k >= usize::BITS as usize - 1 { usize::MAX } else { 1 << k };
    (n - k).min(cap)
}

struct Candidate {
    params: SynthesisParams,
}

fn reserve(n: usize, k: usize, s: usize, q1: usize) -> (usize, usize) {
    let s1 = split_for(k, q1 + k - 1);
    let holders = if root_resident(k, &s1) { 0 } else { s };
    let fixed = 2 * n + 1 + holders + (q1 + k - 1) + (n - k - 1) + (s - 1);
    (fixed, holders)
}

fn predict(n: usize, k: usize, s: usize, p: usize, budgets: [usize; 3], strategy: Strategy) -> u64 {
    let suffixes = 1u64 << (n - k);
    let selectors = ((1u64 << s.min(63)) - 1).min(n as u64);
    let (s1, s2, s3) = (
        split_for(k, budgets[0]),
        split_for(n - k, budgets[1]),
        split_for(s, budgets[2]),
    );
    let t1 = 1u64 << (k + 1);
    let l1 = s1.stored_outputs as u64 + t1 * (2 * s1.scratch as u64).saturating_sub(1);
    let t2 = match strategy {
        Strategy::MinimizeT2 => p as u64 * suffixes,
        Strategy::MinimizeT3 => p as u64 * selectors * suffixes,
    };
    let l2 = s2.stored_outputs as u64 + t2 * 2 * s2.scratch as u64;
    let t3 = match strategy {
        Strategy::MinimizeT2 => selectors * suffixes,
        Strategy::MinimizeT3 => ((1u64 << s.min(63)) - 1).min(n as u64 * suffixes),
    };
    let l3 = p as u64 * (4 * s3.stored_outputs as u64 + t3 * 4 * s3.scratch as u64);
    let l4 = p as u64 * n as u64 * suffixes;
    2 * n as u64 + l1 + l2 + l3 + l4
}

fn candidate(
    n: usize,
    q: usize,
    k: usize,
    strategy: Strategy,
    ov: &Overrides,
) -> Result<Candidate, usize> {
    let s = ov.s.unwrap_or_else(|| default_group_size(n, k));
    let q1 = ov.q1.unwrap_or(0);
    let (fixed, holders) = reserve(n, k, s, q1);
    if fixed > q {
        return Err(fixed);
    }
    let rest = q - fixed;
    let (q2, q3) = match (ov.q2, ov.q3) {
        (Some(a), Some(b)) if a + b <= rest => (a, b),
        (Some(a), None) if a <= rest => (a, rest - a),
        (None, Some(b)) if b <= rest => (rest - b, b),
        (None, None) => (rest.div_ceil(2), rest / 2),
        (a, b) => return Err(fixed + a.unwrap_or(0) + b.unwrap_or(0)),
    };
    let p = (1usize << k).div_ceil(s);
    let mut params = SynthesisParams {
        n,
        q,
        k,
        s,
        p,
        q1,
        q2,
        q3,
        holders,
        strategy,
        predicted_gates: 0,
    };
    params.predicted_gates = predict(n, k, s, p, params.provider_budgets(), strategy);
    Ok(Candidate { params })
}

/// Searches `k ∈ [1, n-1]` for the feasible point with the lowest predicted
/// gate count; ties go to the smaller `k`.
pub fn select_params(
    n: usize,
    q: usize,
    strategy: Strategy,
    ov: &Overrides,
) -> Result<SynthesisParams, SynthError> {
    if n < 2 {
        return Err(SynthError::InvalidParams(format!("need n >= 2, got {n}")));
    }
    if n > 30 {
        return Err(SynthError::InvalidParams(format!("n = {n} is too large")));
    }
    let ks: Vec<usize> = match ov.k {
        Some(k) if (1..n).contains(&k) => vec![k],
        Some(k) => {
            return Err(SynthError::InvalidParams(format!(
                "k = {k} outside 1..={}",
                n - 1
            )))
        }
        None => (1..n).collect(),
    };
    if let Some(s) = ov.s {
        if s == 0 || ks.iter().all(|&k| s > 1 << k) {
            return Err(SynthError::InvalidParams(format!("group size s = {s} too large or zero")));
        }
    }
    let mut best: Option<SynthesisParams> = None;
    let mut minimum = usize::MAX;
    for k in ks {
        if ov.s.is_some_and(|s| s > 1 << k) {
            continue;
        }
        match candidate(n, q, k, strategy, ov) {
            Ok(c) => {
                if best
                    .as_ref()
                    .is_none_or(|b| c.params.predicted_gates < b.predicted_gates)
                {
                    best = Some(c.params);
                }
            }
            Err(need) => minimum = minimum.min(need),
        }
    }
    best.ok_or(SynthError::QBudgetTooSmall { q, minimum })
}

/// Smallest `q` for which [`select_params`] succeeds.
pub fn minimal_budget(n: usize, strategy: Strategy, ov: &Overrides) -> Result<usize, SynthError> {
    match select_params(n, 0, strategy, ov) {
        Ok(_) => Ok(0),
        Err(SynthError::QBudgetTooSmall { minimum, .. }) => Ok(minimum),
        Err(e) => Err(e),
    }
}

/// Total stored outputs of a fully stored tree over `m` variables.
fn full_outputs(m: usize) -> usize {
    let plan = plan_tree(m);
    (1..=plan.levels()).map(|l| plan.level_size(l)).sum()
}

/// A budget at which every `k` leaves both the conjunction provider over the
/// suffix variables and the linear-form provider fully stored.
pub fn full_storage_budget(n: usize) -> usize {
    (1..n)
        .map(|k| {
            let s = default_group_size(n, k);
            let (fixed, _) = reserve(n, k, s, 0);
            let q2 = full_outputs(n - k).saturating_sub(n - k - 1);
            let q3 = full_outputs(s).saturating_sub(s - 1);
            fixed + 2 * q2.max(q3)
        })
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_budgets() {
        let none = Overrides::default();
        assert_eq!(minimal_budget(2, Strategy::MinimizeT2, &none).unwrap(), 5);
        assert_eq!(minimal_budget(3, Strategy::MinimizeT2, &none).unwrap(), 9);
        assert!(matches!(
            select_params(2, 2, Strategy::MinimizeT2, &none),
            Err(SynthError::QBudgetTooSmall { q: 2, minimum: 5 })
        ));
    }

    #[test]
    fn four_vars_forty_wires() {
        for strategy in Strategy::ALL {
            let p = select_params(4, 40, strategy, &Overrides::default()).unwrap();
            assert_eq!(p.q1, 0);
            assert!(p.q2 == p.q3 || p.q2 == p.q3 + 1);
            assert!(p.p * p.s >= 1 << p.k);
            let used = p.fixed_wires() + p.provider_budgets().iter().sum::<usize>();
            assert!(used <= 40, "{p:?}");
        }
    }

    #[test]
    fn overrides_are_honoured() {
        let ov = Overrides {
            k: Some(2),
            s: Some(3),
            q2: Some(7),
            ..Overrides::default()
        };
        let p = select_params(5, 60, Strategy::MinimizeT3, &ov).unwrap();
        assert_eq!((p.k, p.s, p.p, p.q2), (2, 3, 2, 7));
        let bad = Overrides {
            k: Some(5),
            ..Overrides::default()
        };
        assert!(matches!(
            select_params(5, 60, Strategy::MinimizeT2, &bad),
            Err(SynthError::InvalidParams(_))
        ));
    }

    #[test]
    fn group_size_is_clamped() {
        assert_eq!(default_group_size(6, 1), 2);
        assert_eq!(default_group_size(6, 2), 4);
        assert_eq!(default_group_size(6, 4), 2);
    }

    #[test]
    fn full_storage_stores_everything() {
        for n in 2..8 {
            let q = full_storage_budget(n);
            let p = select_params(n, q, Strategy::MinimizeT2, &Overrides::default()).unwrap();
            let b = p.provider_budgets();
            assert_eq!(split_for(n - p.k, b[1]).r, 0, "n={n}");
            assert_eq!(split_for(p.s, b[2]).r, 0, "n={n}");
        }
    }
}
