//! Self-contained SVG plots with deterministic bytes.

use std::fmt::Write as _;
use std::path::Path;

use super::output::write_file;
use crate::profile::ProfileEstimate;
use crate::viz::GridSurface;
use crate::Result;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;

fn header(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
        WIDTH / 2.0,
        escape(title)
    )
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn axes(svg: &mut String, x_label: &str, y_label: &str, x_range: (f64, f64), y_range: (f64, f64)) {
    let (x0, x1) = (MARGIN, WIDTH - MARGIN);
    let (y0, y1) = (HEIGHT - MARGIN, MARGIN);
    let _ = writeln!(
        svg,
        "<rect x=\"{x0}\" y=\"{y1}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
        x1 - x0,
        y0 - y1
    );
    for k in 0..=4 {
        let t = k as f64 / 4.0;
        let px = x0 + t * (x1 - x0);
        let py = y0 - t * (y0 - y1);
        let xv = x_range.0 + t * (x_range.1 - x_range.0);
        let yv = y_range.0 + t * (y_range.1 - y_range.0);
        let _ = writeln!(svg, "<line x1=\"{px:.2}\" y1=\"{y0}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"black\"/>", y0 + 5.0);
        let _ = writeln!(svg, "<text x=\"{px:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{xv:.3}</text>", y0 + 18.0);
        let _ = writeln!(svg, "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{x0}\" y2=\"{py:.2}\" stroke=\"black\"/>", x0 - 5.0);
        let _ = writeln!(svg, "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{yv:.3}</text>", x0 - 8.0, py + 4.0);
    }
    let _ = writeln!(svg, "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>", WIDTH / 2.0, HEIGHT - 18.0, escape(x_label));
    let _ = writeln!(
        svg,
        "<text x=\"16\" y=\"{:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.2})\">{}</text>",
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(y_label)
    );
}

/// SVG line plot of a profile over its abscissa.
pub fn profile_svg(p: &ProfileEstimate) -> String {
    let lo = p.value.iter().copied().fold(f64::INFINITY, f64::min).min(0.0);
    let mut hi = p.value.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(hi > lo) {
        hi = lo + 1.0;
    }
    let title = format!("{} {} separability profile", p.field, p.axis);
    let mut svg = header(&title);
    axes(&mut svg, p.axis.abscissa(), "F", (0.0, 1.0), (lo, hi));
    let mut path = String::new();
    for (k, (&x, &v)) in p.grid.iter().zip(&p.value).enumerate() {
        let px = MARGIN + x * (WIDTH - 2.0 * MARGIN);
        let py = HEIGHT - MARGIN - (v - lo) / (hi - lo) * (HEIGHT - 2.0 * MARGIN);
        let _ = write!(path, "{}{px:.2},{py:.2}", if k == 0 { "M" } else { " L" });
    }
    let _ = writeln!(svg, "<path d=\"{path}\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\"/>");
    svg.push_str("</svg>\n");
    svg
}

/// Blue-to-yellow ramp.
fn color(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let lerp = |a: f64, b: f64| (a + t * (b - a)).round() as u8;
    format!("#{:02x}{:02x}{:02x}", lerp(32.0, 250.0), lerp(40.0, 220.0), lerp(110.0, 40.0))
}

/// SVG heat map of a surface over the square `[-1, 1]^2`.
pub fn surface_svg(s: &GridSurface, title: &str) -> String {
    let n = s.side();
    let hi = s.values.iter().copied().fold(0.0, f64::max);
    let mut svg = header(title);
    let (lo_x, hi_x) = (s.abscissae[0], s.abscissae[n - 1]);
    let cell_w = (WIDTH - 2.0 * MARGIN) / n as f64;
    let cell_h = (HEIGHT - 2.0 * MARGIN) / n as f64;
    for i in 0..n {
        for j in 0..n {
            let v = s.at(i, j);
            let t = if hi > 0.0 { v / hi } else { 0.0 };
            let x = MARGIN + i as f64 * cell_w;
            let y = HEIGHT - MARGIN - (j + 1) as f64 * cell_h;
            let _ = writeln!(
                svg,
                "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{}\"/>",
                cell_w + 0.05,
                cell_h + 0.05,
                color(t)
            );
        }
    }
    axes(&mut svg, &s.axes[0], &s.axes[1], (lo_x, hi_x), (lo_x, hi_x));
    svg.push_str("</svg>\n");
    svg
}

pub fn emit_profile_plot(p: &ProfileEstimate, path: &Path) -> Result<()> {
    write_file(path, &profile_svg(p))
}

pub fn emit_surface_plot(s: &GridSurface, title: &str, path: &Path) -> Result<()> {
    write_file(path, &surface_svg(s, title))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::Axis;
    use crate::Field;

    #[test]
    fn constant_profile_is_a_horizontal_line() {
        let p = ProfileEstimate::from_values(Axis::Radial, Field::Rebit, vec![0.0, 0.5, 1.0], vec![0.5; 3], vec![0.0; 3]).unwrap();
        let svg = profile_svg(&p);
        let d = svg.split("<path d=\"").nth(1).unwrap().split('"').next().unwrap();
        let ys: Vec<&str> = d.split(['M', 'L']).filter(|s| !s.trim().is_empty()).map(|s| s.trim().split(',').nth(1).unwrap()).collect();
        assert_eq!(ys.len(), 3);
        assert!(ys.iter().all(|y| *y == ys[0]));
        assert!(svg.contains(">r</text>"));
        assert_eq!(svg, profile_svg(&p));
    }

    #[test]
    fn heat_map_has_one_cell_per_point() {
        let s = GridSurface { axes: ["d1".into(), "d3".into()], abscissae: vec![-1.0, 0.0, 1.0], values: (0..9).map(f64::from).collect(), stderr: None };
        let svg = surface_svg(&s, "t");
        assert_eq!(svg.matches("<rect x=").count(), 9 + 1);
    }
}
