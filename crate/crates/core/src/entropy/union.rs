use super::{NetCount, NetMethod};
use crate::error::{Error, Result};

/// Left and right sides of the allocation constraint
/// `(Σ η_i^γ)^{1/γ} ≤ 2^{-1/r} ε` with `γ = rp/(r-p)`; for r = ∞ it reads
/// `(Σ η_i^p)^{1/p} ≤ ε`.
pub fn union_constraint(etas: &[f64], eps: f64, p: f64, r: Option<f64>) -> (f64, f64) {
    let (gamma, rhs) = match r {
        Some(r) => (r * p / (r - p), 2f64.powf(-1.0 / r) * eps),
        None => (p, eps),
    };
    let lhs = etas.iter().map(|e| e.powf(gamma)).sum::<f64>().powf(1.0 / gamma);
    (lhs, rhs)
}

fn check(etas: &[f64], eps: f64, p: f64, r: Option<f64>) -> Result<()> {
    if !(p >= 1.0 && r.is_none_or(|r| r > p)) {
        return Err(Error::InvalidExponents {
            p,
            r: r.unwrap_or(f64::INFINITY),
        });
    }
    let (lhs, rhs) = union_constraint(etas, eps, p, r);
    if lhs > rhs * (1.0 + 1e-12) {
        return Err(Error::AllocationError { lhs, rhs });
    }
    Ok(())
}

/// Per-piece accuracies `η_i = 2^{-(r-p)/p} w_i^{1/p-1/r} ε` with
/// `w_i = |Ω_i|/|Ω|` (for r = ∞, `η_i = w_i^{1/p} ε`).
pub fn allocate_union(volumes: &[f64], eps: f64, p: f64, r: Option<f64>) -> Result<Vec<f64>> {
    if volumes.is_empty() || volumes.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::InvalidInput("union pieces need positive volumes".into()));
    }
    let total: f64 = volumes.iter().sum();
    let etas: Vec<f64> = volumes
        .iter()
        .map(|v| {
            let w = v / total;
            match r {
                Some(r) => 2f64.powf(-(r - p) / p) * w.powf(1.0 / p - 1.0 / r) * eps,
                None => w.powf(1.0 / p) * eps,
            }
        })
        .collect();
    check(&etas, eps, p, r)?;
    Ok(etas)
}

/// Combines per-piece nets built at accuracies `etas` into a net on the
/// union: `ln N ≤ k ln 4 + Σ ln N_i`.
pub fn combine_union(
    d: usize,
    etas: &[f64],
    log_counts: &[f64],
    eps: f64,
    p: f64,
    r: Option<f64>,
) -> Result<NetCount> {
    if etas.len() != log_counts.len() || etas.is_empty() {
        return Err(Error::InvalidInput("one accuracy per piece count".into()));
    }
    check(etas, eps, p, r)?;
    let k = etas.len() as f64;
    Ok(NetCount {
        eps,
        log_count: k * 4f64.ln() + log_counts.iter().sum::<f64>(),
        method: NetMethod::Union,
        d,
        p,
        r,
        m_bound: f64::NAN,
        alpha: f64::NAN,
        seed: None,
    })
}
