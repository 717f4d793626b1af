//! JSON interchange for bodies.

use serde::{Deserialize, Serialize};

use super::{ConvexBody, Halfspace, Polytope};
use crate::error::{Error, Result};
use crate::linalg::Point;

/// Flat document form of a [`ConvexBody`]. Unused fields are omitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BodyDoc {
    pub dim: usize,
    pub variant: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vertices: Vec<Point>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub halfspaces: Vec<Halfspace>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<Point>,
}

impl From<&ConvexBody> for BodyDoc {
    fn from(body: &ConvexBody) -> Self {
        let mut doc = BodyDoc {
            dim: body.dim(),
            variant: String::new(),
            vertices: Vec::new(),
            halfspaces: Vec::new(),
            center: None,
            radius: None,
            lower: None,
            upper: None,
        };
        match body {
            ConvexBody::Polytope(p) => {
                doc.variant = "polytope".into();
                doc.vertices = p.vertices().to_vec();
                doc.halfspaces = p.halfspaces().to_vec();
            }
            ConvexBody::Ball { center, radius } => {
                doc.variant = "ball".into();
                doc.center = Some(center.clone());
                doc.radius = Some(*radius);
            }
            ConvexBody::Box { lower, upper } => {
                doc.variant = "box".into();
                doc.lower = Some(lower.clone());
                doc.upper = Some(upper.clone());
            }
            ConvexBody::Simplex { vertices } => {
                doc.variant = "simplex".into();
                doc.vertices = vertices.clone();
            }
        }
        doc
    }
}

impl TryFrom<BodyDoc> for ConvexBody {
    type Error = Error;

    fn try_from(doc: BodyDoc) -> Result<Self> {
        let missing = |f: &str| Error::InvalidInput(format!("{} body needs `{f}`", doc.variant));
        let body = match doc.variant.as_str() {
            "polytope" => {
                if !doc.vertices.is_empty() {
                    ConvexBody::Polytope(Polytope::from_vertices(doc.vertices.clone())?)
                } else if !doc.halfspaces.is_empty() {
                    let hs = doc
                        .halfspaces
                        .iter()
                        .map(|h| Halfspace::new(h.normal.clone(), h.offset))
                        .collect::<Result<Vec<_>>>()?;
                    ConvexBody::Polytope(Polytope::from_halfspaces(hs, doc.dim)?)
                } else {
                    return Err(missing("vertices"));
                }
            }
            "ball" => ConvexBody::Ball {
                center: doc.center.clone().ok_or_else(|| missing("center"))?,
                radius: doc.radius.ok_or_else(|| missing("radius"))?,
            },
            "box" => ConvexBody::Box {
                lower: doc.lower.clone().ok_or_else(|| missing("lower"))?,
                upper: doc.upper.clone().ok_or_else(|| missing("upper"))?,
            },
            "simplex" => ConvexBody::simplex(doc.vertices.clone())?,
            other => return Err(Error::InvalidInput(format!("unknown body variant `{other}`"))),
        };
        if body.dim() != doc.dim {
            return Err(Error::InvalidInput(format!(
                "declared dim {} but coordinates have {}",
                doc.dim,
                body.dim()
            )));
        }
        body.validate()?;
        Ok(body)
    }
}

pub fn body_to_json(body: &ConvexBody) -> String {
    serde_json::to_string_pretty(&BodyDoc::from(body)).expect("body serializes")
}

pub fn body_from_json(text: &str) -> Result<ConvexBody> {
    let doc: BodyDoc =
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("body document: {e}")))?;
    doc.try_into()
}
