use crate::error::{Error, Result};

use super::{NetCount, NetMethod};

/// Largest number of `(q_{j-1}, q_j)` states a DP may hold.
pub const MAX_DP_STATES: usize = 100_000_000;

/// Constraints on integer sequences `q_0..q_{n-1}` counted by [`count_sequences`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SequenceRules {
    pub knots: usize,
    /// `|q_j| ≤ levels`.
    pub levels: i64,
    /// `|q_j - q_{j-1}| ≤ max_step`.
    pub max_step: i64,
    /// `q_{j+1} - 2 q_j + q_{j-1} ≥ -slack`.
    pub slack: i64,
}

/// Natural log of the number of sequences obeying the rules, by dynamic
/// programming over consecutive pairs with prefix sums. Counts are kept as
/// floating point with a running log scale.
pub fn count_sequences(rules: SequenceRules) -> Result<f64> {
    let SequenceRules {
        knots,
        levels,
        max_step,
        slack,
    } = rules;
    let width = (2 * levels + 1) as usize;
    if knots <= 1 {
        return Ok(if knots == 0 { 0.0 } else { (width as f64).ln() });
    }
    let steps = (2 * max_step + 1) as usize;
    let states = width.saturating_mul(steps);
    if states > MAX_DP_STATES {
        return Err(Error::BudgetExceeded(format!(
            "{states} DP states ({width} levels x {steps} steps) exceed {MAX_DP_STATES}"
        )));
    }
    // cur[b][s]: sequences ending with q_j = b - levels and q_j - q_{j-1} = s - max_step
    let mut cur = vec![0.0f64; states];
    for b in 0..width as i64 {
        for s in -max_step..=max_step {
            let a = b - s;
            if (0..width as i64).contains(&a) {
                cur[b as usize * steps + (s + max_step) as usize] = 1.0;
            }
        }
    }
    let mut log_scale = 0.0;
    let mut next = vec![0.0f64; states];
    let mut prefix = vec![0.0f64; steps + 1];
    // every reachable (value, step) slot is rewritten each round and the
    // others stay zero, so `next` never needs clearing
    for _ in 2..knots {
        let mut peak: f64 = 0.0;
        for b in 0..width as i64 {
            let row = &cur[b as usize * steps..(b as usize + 1) * steps];
            for s in 0..steps {
                prefix[s + 1] = prefix[s] + row[s];
            }
            // new step t = c - b needs t ≥ s - slack, i.e. s ≤ t + slack
            let tlo = (-max_step).max(-b);
            let thi = max_step.min(width as i64 - 1 - b);
            for t in tlo..=thi {
                let hi = ((t + slack).min(max_step) + max_step) as usize;
                let v = prefix[hi + 1];
                peak = peak.max(v);
                next[(b + t) as usize * steps + (t + max_step) as usize] = v;
            }
        }
        if peak > 1e250 {
            log_scale += peak.ln();
            // counts this far below the peak are dropped rather than left subnormal
            next.iter_mut().for_each(|v| {
                *v /= peak;
                if *v < 1e-250 {
                    *v = 0.0;
                }
            });
        }
        std::mem::swap(&mut cur, &mut next);
    }
    let total: f64 = cur.iter().sum();
    Ok(total.ln() + log_scale)
}

/// Grid and quantization used by [`net_1d_convex`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Net1dPlan {
    pub intervals: usize,
    pub pitch: f64,
    pub eta: f64,
    pub rules: SequenceRules,
}

/// Knot pitch about `sqrt(ε/α)`, value step `η = ε`, levels `round(M/η)`,
/// steps `⌊α Δ/η⌋ + 1`, convexity slack 2 (each rounding moves a value by
/// at most η/2).
pub fn net_1d_plan(eps: f64, m: f64, alpha: f64) -> Net1dPlan {
    let target = if alpha > 0.0 { (eps / alpha).sqrt() } else { 1.0 };
    let intervals = (1.0 / target).ceil().max(1.0) as usize;
    let pitch = 1.0 / intervals as f64;
    let eta = eps;
    Net1dPlan {
        intervals,
        pitch,
        eta,
        rules: SequenceRules {
            knots: intervals + 1,
            levels: (m / eta + 0.5).floor() as i64,
            max_step: (alpha * pitch / eta).floor() as i64 + 1,
            slack: 2,
        },
    }
}

/// Size of a canonical L¹ ε-net for convex functions on [0,1] with
/// `|f| ≤ M` and Lipschitz constant `≤ α`: every member rounds (to the
/// nearest multiple of η at each knot) to a counted sequence whose linear
/// interpolation lies within `α Δ²/2 + η/2 ≤ ε` in L¹.
pub fn net_1d_convex(eps: f64, m: f64, alpha: f64) -> Result<NetCount> {
    if !(eps > 0.0 && m > 0.0 && alpha >= 0.0) {
        return Err(Error::InvalidInput("need ε > 0, M > 0, α ≥ 0".into()));
    }
    let log_count = if eps >= 2.0 * m {
        0.0
    } else {
        count_sequences(net_1d_plan(eps, m, alpha).rules)?
    };
    Ok(NetCount {
        eps,
        log_count,
        method: NetMethod::DpExact,
        d: 1,
        p: 1.0,
        r: None,
        m_bound: m,
        alpha,
        seed: None,
    })
}
