use std::f64::consts::TAU;
use std::fmt::Write;

use super::Subsurface;

const SIZE: f64 = 240.0;
const RADIUS: f64 = 100.0;

fn at(angle: f64) -> (f64, f64) {
    (SIZE / 2.0 + RADIUS * angle.cos(), SIZE / 2.0 - RADIUS * angle.sin())
}

fn point_angle(i: u32, n: u32) -> f64 {
    TAU * (i - 1) as f64 / n as f64
}

fn end_angle(s: &Subsurface, t: usize) -> f64 {
    let n = s.point_count();
    let e = s.ends()[t];
    let on_edge = s.ends().iter().filter(|x| x.edge == e.edge).count() as f64;
    point_angle(e.edge, n) + (e.slot as f64 + 1.0) / (on_edge + 1.0) * TAU / n as f64
}

/// Render a chord diagram as a standalone SVG document; the subsurface is shaded.
pub fn render_svg(s: &Subsurface) -> String {
    let mut out = String::new();
    let c = SIZE / 2.0;
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let layout = s.layout();
    let m = s.end_count();
    for region in layout.regions.iter().filter(|r| r.inside) {
        if m == 0 {
            let _ = writeln!(out, r##"<circle cx="{c}" cy="{c}" r="{RADIUS}" fill="#9ecae1"/>"##);
            continue;
        }
        let mut path = String::new();
        for (k, &t) in region.arcs.iter().enumerate() {
            let a0 = end_angle(s, t);
            let mut a1 = end_angle(s, (t + 1) % m);
            if a1 <= a0 {
                a1 += TAU;
            }
            let steps = 24;
            for i in 0..=steps {
                let (x, y) = at(a0 + (a1 - a0) * i as f64 / steps as f64);
                let cmd = if k == 0 && i == 0 { 'M' } else { 'L' };
                let _ = write!(path, "{cmd}{x:.2},{y:.2} ");
            }
        }
        path.push('Z');
        let _ = writeln!(out, r##"<path d="{path}" fill="#9ecae1"/>"##);
    }
    let _ = writeln!(out, r#"<circle cx="{c}" cy="{c}" r="{RADIUS}" fill="none" stroke="black"/>"#);
    for (a, b) in s.chords() {
        let (x0, y0) = at(end_angle(s, a));
        let (x1, y1) = at(end_angle(s, b));
        let _ = writeln!(
            out,
            r##"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}" stroke="#08519c" stroke-width="2"/>"##
        );
    }
    for i in 1..=s.point_count() {
        let (x, y) = at(point_angle(i, s.point_count()));
        let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="black"/>"#);
        let (lx, ly) = (c + (x - c) * 1.12, c + (y - c) * 1.12);
        let _ = writeln!(
            out,
            r#"<text x="{lx:.2}" y="{ly:.2}" font-size="10" text-anchor="middle">x{i}</text>"#
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk::{canonicalize, RawSubsurface};

    #[test]
    fn renders_points_and_chords() {
        let s = canonicalize(&RawSubsurface::new(8, &[((1, 0), (4, 0))], false)).unwrap();
        let svg = render_svg(&s);
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<line").count(), 1);
        assert_eq!(svg.matches(r#"r="3""#).count(), 8);
        assert_eq!(svg.matches("<path").count(), 1);
    }
}
