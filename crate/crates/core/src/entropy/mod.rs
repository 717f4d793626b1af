//! Counting constructions for nets and brackets of convex function classes.

mod bracket;
mod facet;
mod general;
mod net1d;
mod union;

use serde::Serialize;

pub use bracket::{bracket_lipschitz, containment_violation, random_member, Bracket, BracketPlan, BracketSet};
pub use facet::{facet_recursion, FacetRecursion};
pub use general::{general_upper_bound, GeneralBound};
pub use net1d::{count_sequences, net_1d_convex, net_1d_plan, Net1dPlan, SequenceRules, MAX_DP_STATES};
pub use union::{allocate_union, combine_union, union_constraint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NetMethod {
    DpExact,
    BracketConstruct,
    GreedyPacking,
    Union,
}

impl NetMethod {
    pub fn tag(self) -> &'static str {
        match self {
            NetMethod::DpExact => "dp-exact",
            NetMethod::BracketConstruct => "bracket-construct",
            NetMethod::GreedyPacking => "greedy-packing",
            NetMethod::Union => "union",
        }
    }
}

/// Log-size of a net, bracketing or packing at one scale.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetCount {
    pub eps: f64,
    pub log_count: f64,
    pub method: NetMethod,
    pub d: usize,
    pub p: f64,
    /// `None` for r = ∞ or when the class has no integrability parameter.
    pub r: Option<f64>,
    #[serde(rename = "M")]
    pub m_bound: f64,
    pub alpha: f64,
    pub seed: Option<u64>,
}
