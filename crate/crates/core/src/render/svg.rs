//! Single-file SVG figures: family circles, envelope branches, the center
//! curve and point markers.

use std::fmt::Write as _;

use thiserror::Error;

use crate::analysis::Analysis;
use crate::envelope::EnvelopeBranch;
use crate::geom::Vec2;

use super::format::fmt_num;

pub const DEFAULT_MARGIN: f64 = 0.05;
pub const DEFAULT_STRIDE: usize = 50;

const PALETTE: [&str; 6] = [
    "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RenderError {
    #[error("nothing to draw: the figure has no layers")]
    NoLayers,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub label: String,
    pub points: Vec<Vec2>,
}

/// Drawable layers, bottom to top.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Scene {
    pub circles: Vec<(Vec2, f64)>,
    pub center_curve: Option<Vec<Vec2>>,
    pub curves: Vec<Curve>,
    pub markers: Vec<Vec2>,
}

impl Scene {
    /// Every `stride`-th family circle, γ, and the given branches.
    pub fn from_analysis(analysis: &Analysis, branches: &[EnvelopeBranch], stride: usize) -> Self {
        let stride = stride.max(1);
        Scene {
            circles: analysis
                .samples
                .iter()
                .step_by(stride)
                .map(|s| (s.center, s.radius))
                .collect(),
            center_curve: Some(analysis.frames.center.clone()),
            curves: branches
                .iter()
                .map(|b| Curve {
                    label: b.label.name(),
                    points: b.points.clone(),
                })
                .collect(),
            markers: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.circles.is_empty()
            && self.center_curve.as_ref().is_none_or(|c| c.is_empty())
            && self.curves.iter().all(|c| c.points.is_empty())
            && self.markers.is_empty()
    }

    fn bounds(&self) -> Option<(Vec2, Vec2)> {
        let mut pts: Vec<Vec2> = Vec::new();
        for &(c, r) in &self.circles {
            pts.push(c - Vec2::new(r, r));
            pts.push(c + Vec2::new(r, r));
        }
        pts.extend(self.center_curve.iter().flatten().copied());
        pts.extend(self.curves.iter().flat_map(|c| c.points.iter().copied()));
        pts.extend(self.markers.iter().copied());
        let mut it = pts.into_iter().filter(|p| p.is_finite());
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), p| {
            (
                Vec2::new(lo.x.min(p.x), lo.y.min(p.y)),
                Vec2::new(hi.x.max(p.x), hi.y.max(p.y)),
            )
        }))
    }
}

// A curve whose samples all coincide is drawn as a marker.
fn collapsed(points: &[Vec2], scale: f64) -> Option<Vec2> {
    let first = *points.first()?;
    points
        .iter()
        .all(|p| p.distance(first) <= 1e-9 * scale)
        .then_some(first)
}

fn path(points: &[Vec2]) -> String {
    let mut d = String::new();
    let mut pen_down = false;
    for p in points {
        if !p.is_finite() {
            pen_down = false;
            continue;
        }
        let _ = write!(
            d,
            "{}{},{} ",
            if pen_down { "L" } else { "M" },
            fmt_num(p.x),
            fmt_num(-p.y)
        );
        pen_down = true;
    }
    d.trim_end().to_string()
}

/// SVG document for the scene; y points up, view box padded by `margin`
/// of the larger side.
pub fn render_svg(scene: &Scene, margin: f64) -> Result<String, RenderError> {
    if scene.is_empty() {
        return Err(RenderError::NoLayers);
    }
    let (lo, hi) = scene.bounds().ok_or(RenderError::NoLayers)?;
    let size = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
    let pad = margin * size;
    let (x0, y0) = (lo.x - pad, -hi.y - pad);
    let (w, h) = (hi.x - lo.x + 2.0 * pad, hi.y - lo.y + 2.0 * pad);
    let (w, h) = (w.max(2.0 * pad), h.max(2.0 * pad));
    let stroke = fmt_num(0.003 * size);
    let dot = fmt_num(0.008 * size);
    let scale = 1.0 + lo.norm().max(hi.norm());

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="800" height="{}">"#,
        fmt_num(x0),
        fmt_num(y0),
        fmt_num(w),
        fmt_num(h),
        (800.0 * h / w).round().max(1.0)
    );
    if !scene.circles.is_empty() {
        let _ = writeln!(
            out,
            r##"<g id="circles" fill="none" stroke="#b0b0b0" stroke-width="{stroke}">"##
        );
        for (c, r) in &scene.circles {
            let _ = writeln!(
                out,
                r#"<circle cx="{}" cy="{}" r="{}"/>"#,
                fmt_num(c.x),
                fmt_num(-c.y),
                fmt_num(*r)
            );
        }
        out.push_str("</g>\n");
    }
    if let Some(gamma) = scene.center_curve.as_ref().filter(|g| !g.is_empty()) {
        let _ = writeln!(
            out,
            r##"<path id="gamma" d="{}" fill="none" stroke="#000000" stroke-width="{stroke}" stroke-dasharray="{} {}"/>"##,
            path(gamma),
            fmt_num(0.02 * size),
            fmt_num(0.01 * size)
        );
    }
    let mut markers = scene.markers.clone();
    let mut colour = 0;
    for curve in scene.curves.iter().filter(|c| !c.points.is_empty()) {
        if let Some(p) = collapsed(&curve.points, scale) {
            markers.push(p);
            continue;
        }
        let _ = writeln!(
            out,
            r#"<path id="branch-{}" d="{}" fill="none" stroke="{}" stroke-width="{}"/>"#,
            curve.label,
            path(&curve.points),
            PALETTE[colour % PALETTE.len()],
            fmt_num(0.006 * size)
        );
        colour += 1;
    }
    if !markers.is_empty() {
        out.push_str("<g id=\"markers\" fill=\"#000000\">\n");
        for p in &markers {
            let _ = writeln!(
                out,
                r#"<circle cx="{}" cy="{}" r="{dot}"/>"#,
                fmt_num(p.x),
                fmt_num(-p.y)
            );
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}
