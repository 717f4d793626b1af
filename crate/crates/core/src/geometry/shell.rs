use super::{ConvexBody, Decomposition, Polytope};
use crate::error::{Error, Result};
use crate::linalg::Point;

/// Core `D_0 = O + lambda (body - O)` and one frustum per facet between the
/// facet and its image in the core.
#[derive(Debug, Clone)]
pub struct ShellDecomposition {
    /// Chebyshev center of the body.
    pub origin: Point,
    /// Clearance of `origin` from the boundary.
    pub delta0: f64,
    /// Core scale `1 - delta / delta0`.
    pub lambda: f64,
    pub core: ConvexBody,
    pub shells: Vec<ConvexBody>,
    /// Facet count of each shell (cone facet count plus one).
    pub shell_facets: Vec<usize>,
}

impl ShellDecomposition {
    pub fn decomposition(&self, parent: &ConvexBody) -> Decomposition {
        let mut cells = vec![self.core.clone()];
        cells.extend(self.shells.iter().cloned());
        Decomposition {
            parent: parent.clone(),
            cells,
        }
    }

    pub fn cell_count(&self) -> usize {
        1 + self.shells.len()
    }
}

pub fn shell_decompose(body: &ConvexBody, delta: f64) -> Result<ShellDecomposition> {
    if matches!(body, ConvexBody::Ball { .. }) {
        return Err(Error::InvalidInput("shell decomposition needs a polytope".into()));
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidInput(format!("shell depth {delta} must be positive")));
    }
    let (origin, delta0) = body.inradius()?;
    if delta >= delta0 {
        return Err(Error::InradiusTooSmall {
            required: delta,
            inradius: delta0,
        });
    }
    let lambda = 1.0 - delta / delta0;
    let shrink = |v: &Point| -> Point {
        v.iter()
            .zip(&origin)
            .map(|(x, o)| o + lambda * (x - o))
            .collect()
    };
    let poly = body.to_polytope()?;
    let verts = poly.vertices();
    let core = match body {
        ConvexBody::Simplex { vertices } => ConvexBody::Simplex {
            vertices: vertices.iter().map(shrink).collect(),
        },
        _ => ConvexBody::Polytope(Polytope::from_vertices(verts.iter().map(shrink).collect())?),
    };
    let mut shells = Vec::new();
    let mut shell_facets = Vec::new();
    for members in poly.facet_vertices() {
        let mut pts: Vec<Point> = members.iter().map(|&i| verts[i].clone()).collect();
        pts.extend(members.iter().map(|&i| shrink(&verts[i])));
        let frustum = Polytope::from_vertices(pts)?;
        shell_facets.push(frustum.halfspaces().len());
        shells.push(ConvexBody::Polytope(frustum));
    }
    Ok(ShellDecomposition {
        origin,
        delta0,
        lambda,
        core,
        shells,
        shell_facets,
    })
}
