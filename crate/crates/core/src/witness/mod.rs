//! Lower-bound witnesses: finite, well-separated families of convex
//! functions built from grid bumps on a normalized body or from ramps over
//! disjoint spherical caps of the unit ball, indexed by binary codes.

mod bump;
mod cap;
mod cells;
mod code;
mod cube;
mod packing;

pub use bump::{bump, bump_hessian_max, bump_l1, bump_moment, bump_second_derivative, sin_power_integral, BUMP_SUP};
pub use cap::{cap_angle, cap_centers, cap_ramp_integral, cap_volume, disjoint, CapCertificate, CapFamily, CapMember};
pub use cells::{grid_cells, GridCells};
pub use code::{antipodal_pair, bit, gv_code, gv_code_with, hamming, ln_gv_floor, Code, GvOptions, Word, EXHAUSTIVE_MAX_LEN};
pub use cube::{closed_form_distance, CubeFamily, CubeMember, PairCertificate};
pub use packing::{ball_lower_exponent, cap_regime_note, family_dmin, packing_log_count, PackingRow, WitnessKind};

use serde::Serialize;

/// Serializable summary of a family: base parameters and code rows.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyDoc {
    pub kind: WitnessKind,
    pub d: usize,
    pub scale: f64,
    pub n: usize,
    pub dmin: usize,
    /// Grid multi-indices (cube) or cap centers (cap), in code-bit order.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cells: Vec<Vec<u32>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub centers: Vec<Vec<f64>>,
    pub code: Vec<String>,
}

impl From<&CubeFamily> for FamilyDoc {
    fn from(f: &CubeFamily) -> Self {
        Self {
            kind: WitnessKind::Cube,
            d: f.dim(),
            scale: f.eps(),
            n: f.code.n,
            dmin: f.code.dmin,
            cells: f.grid.cells.clone(),
            centers: Vec::new(),
            code: (0..f.code.len()).map(|i| f.code.word_string(i)).collect(),
        }
    }
}

impl From<&CapFamily> for FamilyDoc {
    fn from(f: &CapFamily) -> Self {
        Self {
            kind: WitnessKind::Cap,
            d: f.d,
            scale: f.h,
            n: f.code.n,
            dmin: f.code.dmin,
            cells: Vec::new(),
            centers: f.centers.clone(),
            code: (0..f.code.len()).map(|i| f.code.word_string(i)).collect(),
        }
    }
}
