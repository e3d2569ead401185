//! SVG rendering of planar bodies.
//!
//! Polytopal bodies are drawn from their exact vertices; any other
//! supportable body is outlined by intersecting consecutive support
//! lines over the 720-direction plane net, which circumscribes the body
//! to well under a pixel at screen scale. Every drawing carries a dashed
//! unit circle for scale and uses fixed six-decimal formatting so equal
//! bodies render to identical bytes.

use std::fmt::Write as _;

use crate::body::Body;
use crate::error::{Error, Result};
use crate::geometry::vertices;
use crate::net::plane_directions;

const VIEW_PX: usize = 480;

/// Boundary polygon of a planar body, counterclockwise around the
/// origin.
fn outline(body: &Body) -> Result<Vec<(f64, f64)>> {
    let simplified = body.simplified();
    let polytopal = matches!(
        &simplified,
        Body::HPolytope { .. } | Body::VPolytope { .. } | Body::Zonotope { .. }
    );
    let mut pts: Vec<(f64, f64)> = if polytopal {
        vertices(&simplified)?
            .into_iter()
            .map(|v| (v[0], v[1]))
            .collect()
    } else {
        let net = plane_directions(720);
        let supports: Vec<f64> = net
            .iter()
            .map(|u| simplified.support(u))
            .collect::<Result<_>>()?;
        if supports.iter().any(|h| !h.is_finite()) {
            return Err(Error::unsupported("cannot render an unbounded body"));
        }
        let mut out = Vec::with_capacity(net.len());
        for k in 0..net.len() {
            let k2 = (k + 1) % net.len();
            let (u1, h1) = (&net[k], supports[k]);
            let (u2, h2) = (&net[k2], supports[k2]);
            // Intersection of the two support lines <u, x> = h.
            let det = u1[0] * u2[1] - u1[1] * u2[0];
            if det.abs() < 1e-12 {
                continue;
            }
            let x = (h1 * u2[1] - h2 * u1[1]) / det;
            let y = (u1[0] * h2 - u2[0] * h1) / det;
            out.push((x, y));
        }
        out
    };
    if pts.is_empty() {
        return Err(Error::numerical("empty outline"));
    }
    pts.sort_by(|a, b| {
        a.1.atan2(a.0)
            .partial_cmp(&b.1.atan2(b.0))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(pts)
}

/// Renders a planar body to a standalone SVG document with a dashed
/// unit-circle reference. The viewBox is centered on the origin and
/// scaled to the body with ten percent slack.
pub fn render_svg(body: &Body) -> Result<String> {
    if body.dim() != 2 {
        return Err(Error::unsupported("rendering is implemented in the plane only"));
    }
    let pts = outline(body)?;
    let reach = pts
        .iter()
        .map(|p| p.0.abs().max(p.1.abs()))
        .fold(1.0_f64, f64::max);
    let half = reach * 1.1;
    let mut svg = String::new();
    let _ = write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{VIEW_PX}\" height=\"{VIEW_PX}\" \
         viewBox=\"{:.6} {:.6} {:.6} {:.6}\">\n",
        -half,
        -half,
        2.0 * half,
        2.0 * half
    );
    svg.push_str("  <g transform=\"scale(1,-1)\">\n");
    let _ = write!(
        svg,
        "    <circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#888888\" \
         stroke-width=\"{:.6}\" stroke-dasharray=\"{:.6} {:.6}\"/>\n",
        half / 160.0,
        half / 24.0,
        half / 24.0
    );
    svg.push_str("    <polygon points=\"");
    for (i, (x, y)) in pts.iter().enumerate() {
        if i > 0 {
            svg.push(' ');
        }
        let _ = write!(svg, "{x:.6},{y:.6}");
    }
    let _ = write!(
        svg,
        "\" fill=\"#3b6ea5\" fill-opacity=\"0.25\" stroke=\"#3b6ea5\" \
         stroke-width=\"{:.6}\"/>\n",
        half / 80.0
    );
    svg.push_str("  </g>\n</svg>\n");
    Ok(svg)
}
