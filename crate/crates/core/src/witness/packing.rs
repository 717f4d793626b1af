use serde::{Deserialize, Serialize};

use super::cap::{cap_centers, cap_ramp_integral};
use super::cells::grid_cells;
use super::code::ln_gv_floor;
use super::cube::closed_form_distance;
use crate::error::Result;
use crate::geometry::ConvexBody;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    Cube,
    Cap,
}

/// One scale of a packing table.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct PackingRow {
    /// ε for cube families, h for cap families.
    pub scale: f64,
    /// Code length (cells or caps).
    pub n: usize,
    pub dmin: usize,
    /// Log-size guaranteed by the greedy code, `ln(2^n / Vol(n, dmin-1))`.
    pub log_m: f64,
    /// Minimum pairwise L^p distance among family members.
    pub separation: f64,
}

/// Minimum distance used for family codes: `max(1, ⌊n/10⌋)`.
pub fn family_dmin(n: usize) -> usize {
    (n / 10).max(1)
}

/// `max{(d-1)p/2, d/2}`, the combined lower-bound exponent for the ball.
pub fn ball_lower_exponent(d: usize, p: f64) -> f64 {
    ((d as f64 - 1.0) * p / 2.0).max(d as f64 / 2.0)
}

/// Separation and log family size at each scale. Cube families live on
/// `body` (the unit cube when `None`); cap families on the unit ball.
pub fn packing_log_count(
    kind: WitnessKind,
    d: usize,
    p: f64,
    scales: &[f64],
    body: Option<&ConvexBody>,
) -> Result<Vec<PackingRow>> {
    let cube = ConvexBody::unit_cube(d);
    let body = body.unwrap_or(&cube);
    scales
        .iter()
        .map(|&scale| {
            let n = match kind {
                WitnessKind::Cube => grid_cells(body, scale)?.len(),
                WitnessKind::Cap => cap_centers(d, scale)?.len(),
            };
            let dmin = family_dmin(n);
            let separation = match kind {
                WitnessKind::Cube => closed_form_distance(d, scale, dmin, p),
                WitnessKind::Cap => (dmin as f64 * cap_ramp_integral(d, scale, p)).powf(1.0 / p),
            };
            Ok(PackingRow {
                scale,
                n,
                dmin,
                log_m: ln_gv_floor(n, dmin),
                separation,
            })
        })
        .collect()
}

/// Note for cap tables whose exponent `(d-1)p/2` falls below the universal
/// `d/2`, where the cube family gives the stronger bound.
pub fn cap_regime_note(d: usize, p: f64) -> Option<String> {
    let cap = (d as f64 - 1.0) * p / 2.0;
    (cap < d as f64 / 2.0).then(|| {
        format!(
            "cap exponent {cap} is below d/2 = {}; the cube family dominates and the expected exponent is {}",
            d as f64 / 2.0,
            ball_lower_exponent(d, p)
        )
    })
}
