//! Closed-form complexity, depth and ancilla bounds.
//!
//! Evaluated in `f64`. Logarithms of exact powers of two are taken from the
//! exponent, so arguments that are powers of two give exact results.
//! When a formula's side condition fails the report is marked invalid and
//! carries `+inf`.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub value: f64,
    pub valid: bool,
    pub formula: &'static str,
}

impl BoundReport {
    fn valid(formula: &'static str, value: f64) -> Self {
        BoundReport {
            value,
            valid: true,
            formula,
        }
    }

    fn invalid(formula: &'static str) -> Self {
        BoundReport {
            value: f64::INFINITY,
            valid: false,
            formula,
        }
    }

    fn gated(formula: &'static str, ok: bool, value: impl FnOnce() -> f64) -> Self {
        if ok {
            Self::valid(formula, value())
        } else {
            Self::invalid(formula)
        }
    }
}

/// `log2`, exact on powers of two.
pub fn log2(x: f64) -> f64 {
    if (1.0..9.0e18).contains(&x) && x.fract() == 0.0 {
        let i = x as u64;
        if i.is_power_of_two() {
            return f64::from(i.trailing_zeros());
        }
    }
    x.log2()
}

/// `ceil(log2 n)` for `n >= 1`.
pub fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        u64::BITS - (n - 1).leading_zeros()
    }
}

/// `log2 q - log2 n - 1`, the shared denominator of the conjunction bounds.
fn conj_denominator(n: u64, q: u64) -> f64 {
    log2(q as f64) - log2(n as f64) - 1.0
}

/// `log2(q - 4n) - log2 n - 2`, the denominator of the whole-circuit bounds.
fn shannon_denominator(n: u64, q: u64) -> f64 {
    log2(q as f64 - 4.0 * n as f64) - log2(n as f64) - 2.0
}

/// `2(n-1)t`: conjunctions built one at a time from literals only.
pub fn l_conj0(n: u64, t: u64) -> f64 {
    2.0 * n.saturating_sub(1) as f64 * t as f64
}

/// `n - 1`.
pub fn q_conj0(n: u64) -> u64 {
    n.saturating_sub(1)
}

/// `2t * ceil(log2 n)`.
pub fn d_conj0(n: u64, t: u64) -> f64 {
    2.0 * t as f64 * f64::from(ceil_log2(n))
}

/// `q + 8nt / (log2 q - log2 n - 1)`, valid for `q > 2n`.
pub fn l_conj(n: u64, q: u64, t: u64) -> BoundReport {
    BoundReport::gated("l_conj", q > 2 * n, || {
        q as f64 + 8.0 * n as f64 * t as f64 / conj_denominator(n, q)
    })
}

/// `q + n - 1`.
pub fn q_conj(n: u64, q: u64) -> u64 {
    q + n.saturating_sub(1)
}

/// `q + 2t(2 + log2 n - log2(log2 q - log2 n - 1))`, valid for `q > 2n`.
pub fn d_conj(n: u64, q: u64, t: u64) -> BoundReport {
    BoundReport::gated("d_conj", q > 2 * n, || {
        q as f64 + 2.0 * t as f64 * (2.0 + log2(n as f64) - log2(conj_denominator(n, q)))
    })
}

/// `2q + 16nt / (log2 q - log2 n - 1)`, valid for `q > 2n`.
pub fn l_xor(n: u64, q: u64, t: u64) -> BoundReport {
    BoundReport::gated("l_xor", q > 2 * n, || {
        2.0 * q as f64 + 16.0 * n as f64 * t as f64 / conj_denominator(n, q)
    })
}

/// Twice [`d_conj`].
pub fn d_xor(n: u64, q: u64, t: u64) -> BoundReport {
    let c = d_conj(n, q, t);
    BoundReport::gated("d_xor", c.valid, || 2.0 * c.value)
}

/// `q + n - 1`.
pub fn q_xor(n: u64, q: u64) -> u64 {
    q_conj(n, q)
}

/// `(3n / 2^s) * 2^(2^(s+1))`: budget sufficient to store the last `s + 1`
/// levels of the conjunction tree.
pub fn delta_threshold(n: u64, s: u32) -> f64 {
    let exp = 2f64.powi(s as i32 + 1);
    3.0 * n as f64 / 2f64.powi(s as i32) * 2f64.powf(exp)
}

/// Largest `s` with `delta_threshold(n, s) <= q`, `None` when even `s = 0` does not fit.
pub fn storage_levels_bound(n: u64, q: u64) -> Option<u32> {
    let q = q as f64;
    (0u32..)
        .take_while(|&s| delta_threshold(n, s) <= q)
        .last()
}

/// `8n / (log2 q - log2 n - 1)`, the cap on `2^(r+1)`; valid for `q > 2n`.
pub fn ondemand_factor(n: u64, q: u64) -> BoundReport {
    BoundReport::gated("ondemand_factor", q > 2 * n, || {
        8.0 * n as f64 / conj_denominator(n, q)
    })
}

/// `2^n + 8n 2^n / (log2(q - 4n) - log2 n - 2)`, valid for `q > 8n`.
pub fn l_shannon_upper(n: u64, q: u64) -> BoundReport {
    BoundReport::gated("l_shannon_upper", q > 8 * n, || {
        let pow = 2f64.powi(n as i32);
        pow + 8.0 * n as f64 * pow / shannon_denominator(n, q)
    })
}

/// `2^(n+1) (2.5 + log2 n - log2(log2(q - 4n) - log2 n - 2))`, valid for `q > 8n`.
pub fn d_shannon_upper(n: u64, q: u64) -> BoundReport {
    BoundReport::gated("d_shannon_upper", q > 8 * n, || {
        2f64.powi(n as i32 + 1) * (2.5 + log2(n as f64) - log2(shannon_denominator(n, q)))
    })
}

/// `q + 2(2^r - 1)t`: gates of a conjunction provider holding `q` stored
/// outputs and serving `t` requests through `r` on-demand levels.
pub fn l_conj_levels(q: u64, r: u32, t: u64) -> u64 {
    q + 2 * ((1u64 << r) - 1) * t
}

/// `2q + 4(2^r - 1)t`, the linear-form analogue of [`l_conj_levels`].
pub fn l_xor_levels(q: u64, r: u32, t: u64) -> u64 {
    2 * l_conj_levels(q, r, t)
}

/// `q + 2tr`.
pub fn d_conj_levels(q: u64, r: u32, t: u64) -> u64 {
    q + 2 * t * u64::from(r)
}

/// `2q + 4tr`.
pub fn d_xor_levels(q: u64, r: u32, t: u64) -> u64 {
    2 * d_conj_levels(q, r, t)
}

/// Every evaluator for one `(n, q, t)` point, in a fixed order.
pub fn evaluate_all(n: u64, q: u64, t: u64) -> Vec<(&'static str, BoundReport)> {
    let plain = |name, value| {
        (
            name,
            BoundReport {
                value,
                valid: true,
                formula: name,
            },
        )
    };
    let levels = storage_levels_bound(n, q).map_or(-1.0, f64::from);
    vec![
        plain("l_conj0", l_conj0(n, t)),
        plain("q_conj0", q_conj0(n) as f64),
        plain("d_conj0", d_conj0(n, t)),
        ("l_conj", l_conj(n, q, t)),
        plain("q_conj", q_conj(n, q) as f64),
        ("d_conj", d_conj(n, q, t)),
        ("l_xor", l_xor(n, q, t)),
        plain("q_xor", q_xor(n, q) as f64),
        ("d_xor", d_xor(n, q, t)),
        plain("storage_levels_bound", levels),
        ("ondemand_factor", ondemand_factor(n, q)),
        ("l_shannon_upper", l_shannon_upper(n, q)),
        ("d_shannon_upper", d_shannon_upper(n, q)),
    ]
}
