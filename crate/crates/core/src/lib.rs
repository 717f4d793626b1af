//! Constructive metric-entropy bounds for classes of bounded convex functions.
//!
//! The crate covers body normalization and decomposition ([`geometry`]),
//! simplicial approximation of the ball ([`ball_approx`]), evaluation and
//! norms of convex functions ([`convex_fn`]), lower-bound witness families
//! ([`witness`]), upper-bound nets and brackets ([`entropy`]) and power-law
//! rate fitting ([`rates`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ball_approx;
pub mod convex_fn;
pub mod entropy;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod rates;
pub mod witness;

pub use entropy::{BracketSet, NetCount};
pub use error::{Error, Result};
pub use geometry::{AffineMap, ConvexBody, Decomposition, Halfspace, Polytope};
