//! Convex functions on bodies: max-of-affine representation, L^p norms and
//! distances, and the envelope/Lipschitz checks on eroded bodies.

mod envelope;
mod exact;
mod quadrature;

pub use envelope::{
    envelope_bounds_check, lambda_constant, lipschitz_on_erosion, lower_envelope, EnvelopeReport,
    LipschitzReport,
};
pub use exact::{integrate_power_on_simplex, simplex_power_moment};
pub use quadrature::{lp_distance, lp_norm, Method, NormEstimate, QuadratureSpec};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::io::BodyDoc;
use crate::geometry::ConvexBody;
use crate::linalg::{dot, Point};

/// Anything that can be evaluated pointwise on a d-dimensional domain.
/// Convexity is the caller's responsibility except for [`PwlConvexFn`].
pub trait ConvexFunction: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[f64]) -> f64;
    /// Exposes the max-of-affine form when there is one, enabling exact
    /// integration.
    fn as_pwl(&self) -> Option<&PwlConvexFn> {
        None
    }
}

/// Wraps a closure as a [`ConvexFunction`].
pub struct FnEval<F> {
    d: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> f64 + Sync> FnEval<F> {
    pub fn new(d: usize, f: F) -> Self {
        Self { d, f }
    }
}

impl<F: Fn(&[f64]) -> f64 + Sync> ConvexFunction for FnEval<F> {
    fn dim(&self) -> usize {
        self.d
    }

    fn eval(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
}

/// `x -> gradient . x + intercept`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffinePiece {
    pub gradient: Point,
    pub intercept: f64,
}

impl AffinePiece {
    #[inline]
    pub fn eval(&self, x: &[f64]) -> f64 {
        dot(&self.gradient, x) + self.intercept
    }
}

/// Pointwise maximum of affine pieces on a domain body.
#[derive(Debug, Clone, PartialEq)]
pub struct PwlConvexFn {
    domain: ConvexBody,
    pieces: Vec<AffinePiece>,
}

impl PwlConvexFn {
    /// Exact duplicates and pieces dominated by a parallel piece are dropped.
    pub fn new(domain: ConvexBody, pieces: Vec<AffinePiece>) -> Result<Self> {
        let d = domain.dim();
        if pieces.is_empty() {
            return Err(Error::InvalidInput("a PWL function needs at least one piece".into()));
        }
        if pieces
            .iter()
            .any(|p| p.gradient.len() != d || !p.intercept.is_finite() || p.gradient.iter().any(|g| !g.is_finite()))
        {
            return Err(Error::InvalidInput("piece dimension or values invalid".into()));
        }
        let mut kept: Vec<AffinePiece> = Vec::with_capacity(pieces.len());
        for p in pieces {
            match kept.iter_mut().find(|q| q.gradient == p.gradient) {
                Some(q) => q.intercept = q.intercept.max(p.intercept),
                None => kept.push(p),
            }
        }
        Ok(Self {
            domain,
            pieces: kept,
        })
    }

    pub fn constant(domain: ConvexBody, c: f64) -> Result<Self> {
        let d = domain.dim();
        Self::new(
            domain,
            vec![AffinePiece {
                gradient: vec![0.0; d],
                intercept: c,
            }],
        )
    }

    pub fn domain(&self) -> &ConvexBody {
        &self.domain
    }

    pub fn pieces(&self) -> &[AffinePiece] {
        &self.pieces
    }

    /// Index of a maximizing piece at `x` (lowest index on ties).
    pub fn active_piece(&self, x: &[f64]) -> usize {
        let mut best = 0;
        let mut val = f64::NEG_INFINITY;
        for (i, p) in self.pieces.iter().enumerate() {
            let v = p.eval(x);
            if v > val {
                val = v;
                best = i;
            }
        }
        best
    }

    /// Multiplies every piece by `s >= 0`.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            domain: self.domain.clone(),
            pieces: self
                .pieces
                .iter()
                .map(|p| AffinePiece {
                    gradient: p.gradient.iter().map(|g| g * s).collect(),
                    intercept: p.intercept * s,
                })
                .collect(),
        }
    }
}

impl ConvexFunction for PwlConvexFn {
    fn dim(&self) -> usize {
        self.domain.dim()
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.pieces
            .iter()
            .map(|p| p.eval(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn as_pwl(&self) -> Option<&PwlConvexFn> {
        Some(self)
    }
}

/// Document form of a [`PwlConvexFn`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FunctionDoc {
    pub domain: BodyDoc,
    pub pieces: Vec<AffinePiece>,
}

impl From<&PwlConvexFn> for FunctionDoc {
    fn from(f: &PwlConvexFn) -> Self {
        Self {
            domain: BodyDoc::from(&f.domain),
            pieces: f.pieces.clone(),
        }
    }
}

impl TryFrom<FunctionDoc> for PwlConvexFn {
    type Error = Error;

    fn try_from(doc: FunctionDoc) -> Result<Self> {
        PwlConvexFn::new(doc.domain.try_into()?, doc.pieces)
    }
}
