//! Simplicial approximation of the Euclidean ball and the resulting
//! entropy bound.

mod bound;
mod sequence;
mod sphere;

pub use bound::{
    ln_theorem2_bound, predicted_regime, regime_indicator, theorem2_bound, Exponents, Regime,
    SFunction, StepFunction,
};
pub use sequence::{increment_cells, level_for, parent_id, ApproxSequence, LevelRecord};
pub use sphere::{
    facet_count_bound, gap_bound, inradius_bound, min_level, min_norm_on_simplex, Facet, FacetId,
    SimplicialSphere,
};
