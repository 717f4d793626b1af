//! Shared fixtures for the criterion benches.

use entropy_core::entropy::{net_1d_plan, SequenceRules};
use entropy_core::ConvexBody;

/// The planar simplex with vertices 0, e_1, e_2.
pub fn triangle() -> ConvexBody {
    ConvexBody::unit_simplex(2)
}

/// DP rules of the one-dimensional net for `|f| ≤ 1`, `Lip(f) ≤ 1` at `eps`.
pub fn net_rules(eps: f64) -> SequenceRules {
    net_1d_plan(eps, 1.0, 1.0).rules
}
