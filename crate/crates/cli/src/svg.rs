//! Deterministic layered SVG rendering: free space white, holes red, cell
//! boundaries dashed, sweep segments blue, transitions orange, start/goal
//! markers. Fixed 1000x1000 viewBox scaled to the map bounds.

use std::fmt::Write;

use coverage_core::decomposition::Cell;
use coverage_core::geom::{Point, PolygonWithHoles, Ring};
use coverage_core::planner::CoveragePath;
use coverage_core::sweep::SegmentTag;

const VIEW: f64 = 1000.0;

pub struct SvgLayers<'a> {
    pub map: &'a PolygonWithHoles,
    pub cells: Option<&'a [Cell]>,
    pub path: Option<&'a CoveragePath>,
    pub markers: Option<(Point, Point)>,
}

struct Frame {
    scale: f64,
    ox: f64,
    oy: f64,
}

impl Frame {
    fn new(map: &PolygonWithHoles) -> Frame {
        let (lo, hi) = map.bbox();
        let w = (hi.x - lo.x).max(1e-9);
        let h = (hi.y - lo.y).max(1e-9);
        let scale = (VIEW * 0.95) / w.max(h);
        Frame {
            scale,
            ox: lo.x - (VIEW / scale - w) / 2.0,
            oy: lo.y - (VIEW / scale - h) / 2.0,
        }
    }

    /// Map coordinates to pixels, flipping y (SVG grows downward).
    fn px(&self, p: Point) -> (f64, f64) {
        ((p.x - self.ox) * self.scale, VIEW - (p.y - self.oy) * self.scale)
    }
}

fn points_attr(frame: &Frame, ring: &Ring) -> String {
    let mut s = String::new();
    for &v in ring.vertices() {
        let (x, y) = frame.px(v);
        let _ = write!(s, "{x:.3},{y:.3} ");
    }
    s.pop();
    s
}

pub fn render_svg(layers: &SvgLayers) -> String {
    let frame = Frame::new(layers.map);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {VIEW} {VIEW}">"#
    );
    let _ = writeln!(out, r##"<rect width="{VIEW}" height="{VIEW}" fill="#f4f4f4"/>"##);

    let _ = writeln!(
        out,
        r#"<polygon class="outer" points="{}" fill="white" stroke="black" stroke-width="2"/>"#,
        points_attr(&frame, layers.map.outer())
    );
    for hole in layers.map.holes() {
        let _ = writeln!(
            out,
            r##"<polygon class="hole" points="{}" fill="#d94f4f" stroke="#8a2f2f" stroke-width="1"/>"##,
            points_attr(&frame, hole)
        );
    }

    if let Some(cells) = layers.cells {
        for cell in cells {
            let _ = writeln!(
                out,
                r##"<polygon class="cell" points="{}" fill="none" stroke="#666" stroke-width="1" stroke-dasharray="8 5"/>"##,
                points_attr(&frame, &cell.ring)
            );
        }
    }

    if let Some(path) = layers.path {
        for (tag, class, color) in [
            (SegmentTag::Sweep, "sweep", "#1f6fd0"),
            (SegmentTag::Transition, "transition", "#e8821a"),
        ] {
            let mut d = String::new();
            for (seg, t) in path.polyline.segments().zip(&path.tags) {
                if *t != tag {
                    continue;
                }
                let (x0, y0) = frame.px(seg.a);
                let (x1, y1) = frame.px(seg.b);
                let _ = write!(d, "M{x0:.3} {y0:.3}L{x1:.3} {y1:.3}");
            }
            if !d.is_empty() {
                let _ = writeln!(
                    out,
                    r#"<path class="{class}" d="{d}" fill="none" stroke="{color}" stroke-width="2"/>"#
                );
            }
        }
    }

    if let Some((start, goal)) = layers.markers {
        let (sx, sy) = frame.px(start);
        let _ = writeln!(
            out,
            r##"<circle class="start" cx="{sx:.3}" cy="{sy:.3}" r="7" fill="#2ca02c" stroke="black"/>"##
        );
        let (gx, gy) = frame.px(goal);
        let _ = writeln!(
            out,
            r##"<circle class="goal" cx="{gx:.3}" cy="{gy:.3}" r="5" fill="#9467bd" stroke="black"/>"##
        );
    }

    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use coverage_core::decomposition::{decompose_bcd, DecompositionKind};
    use coverage_core::geom::DirectionAngle;

    fn square_with_hole() -> PolygonWithHoles {
        let ring = |v: &[(f64, f64)]| {
            Ring::new(v.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
        };
        PolygonWithHoles::new(
            ring(&[(0.0, 0.0), (10.0, 0.0), (10.0, 10.0), (0.0, 10.0)]),
            vec![ring(&[(4.0, 4.0), (6.0, 4.0), (6.0, 6.0), (4.0, 6.0)])],
        )
        .unwrap()
    }

    #[test]
    fn bare_square_has_one_polygon() {
        let sq = PolygonWithHoles::simple(
            Ring::new(vec![
                Point::new(0.0, 0.0),
                Point::new(10.0, 0.0),
                Point::new(10.0, 10.0),
                Point::new(0.0, 10.0),
            ])
            .unwrap(),
        )
        .unwrap();
        let doc = render_svg(&SvgLayers { map: &sq, cells: None, path: None, markers: None });
        assert_eq!(doc.matches("<polygon").count(), 1);
    }

    #[test]
    fn four_cells_render_four_dashed_outlines() {
        let pwh = square_with_hole();
        let cells = decompose_bcd(&pwh, DirectionAngle::new(0.0)).unwrap();
        assert_eq!(cells.len(), 4);
        let doc = render_svg(&SvgLayers {
            map: &pwh,
            cells: Some(&cells),
            path: None,
            markers: None,
        });
        assert_eq!(doc.matches(r#"class="cell""#).count(), 4);
        assert_eq!(doc.matches(r#"class="hole""#).count(), 1);
    }

    #[test]
    fn rendering_is_byte_deterministic() {
        let pwh = square_with_hole();
        let cells = coverage_core::decomposition::best_decomposition(&pwh, DecompositionKind::Bcd)
            .unwrap()
            .cells;
        let layers = SvgLayers {
            map: &pwh,
            cells: Some(&cells),
            path: None,
            markers: Some((Point::new(1.0, 1.0), Point::new(9.0, 9.0))),
        };
        assert_eq!(render_svg(&layers), render_svg(&layers));
    }
}
