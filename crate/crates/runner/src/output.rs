//! Report, orbit-table and plot emission. Byte determinism matters: the same
//! config and seed must produce identical files, so all float formatting is
//! fixed-format and no timing or environment data enters the outputs.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use horolab_core::dynamics::Orbit;
use horolab_core::point::Point;
use horolab_core::space::Space;

use crate::RunnerError;

/// 17 significant decimal digits: enough to round-trip any f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> RunnerError + '_ {
    move |e| RunnerError::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), RunnerError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(io_err(path))?;
        }
    }
    fs::write(path, contents).map_err(io_err(path))
}

pub fn write_report(path: &Path, report: &serde_json::Value) -> Result<(), RunnerError> {
    let mut text = serde_json::to_string_pretty(report).map_err(|e| RunnerError::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    text.push('\n');
    write_file(path, &text)
}

/// Orbit table with columns exactly
/// `start_id, step, coord_0..coord_{n-1}, dist_to_base`.
pub fn orbit_csv(orbits: &[(usize, &Orbit)], dim: usize) -> String {
    let mut out = String::new();
    out.push_str("start_id,step");
    for i in 0..dim {
        let _ = write!(out, ",coord_{i}");
    }
    out.push_str(",dist_to_base\n");
    for (start_id, orbit) in orbits {
        for (step, (p, d)) in orbit.points.iter().zip(&orbit.dists).enumerate() {
            let _ = write!(out, "{start_id},{step}");
            for c in &p.0 {
                let _ = write!(out, ",{}", fmt_f64(*c));
            }
            let _ = writeln!(out, ",{}", fmt_f64(*d));
        }
    }
    out
}

pub fn write_orbit_csv(
    path: &Path,
    orbits: &[(usize, &Orbit)],
    dim: usize,
) -> Result<(), RunnerError> {
    write_file(path, &orbit_csv(orbits, dim))
}

/// Plot data: the domain boundary, orbit traces and an optional boundary
/// marker (the Denjoy-Wolff estimate).
pub struct PlotData {
    pub boundary: Vec<Point>,
    pub orbits: Vec<Vec<Point>>,
    pub marker: Option<Point>,
}

/// Samples the boundary of a 2-d space as a closed 512-point polyline.
pub fn boundary_polyline(space: &dyn Space) -> Result<Vec<Point>, RunnerError> {
    if space.dim() != 2 {
        return Err(RunnerError::ConfigInvalid {
            path: "output.plot".into(),
            reason: "plots are only available for 2-d spaces".into(),
        });
    }
    let base = space.base_point();
    let mut pts = Vec::with_capacity(512);
    for j in 0..512 {
        let phi = std::f64::consts::TAU * j as f64 / 512.0;
        let target = base.add(&Point::new(vec![phi.cos(), phi.sin()]));
        let b = space
            .boundary_project(&target)
            .map_err(RunnerError::Core)?;
        pts.push(b);
    }
    Ok(pts)
}

fn svg_path(points: &[Point], close: bool, style: &str) -> String {
    let mut d = String::new();
    for (i, p) in points.iter().enumerate() {
        let cmd = if i == 0 { 'M' } else { 'L' };
        let _ = write!(d, "{cmd}{:.6},{:.6} ", p.0[0], -p.0[1]);
    }
    if close {
        d.push('Z');
    }
    format!("<path d=\"{}\" {}/>\n", d.trim_end(), style)
}

/// A static SVG with the body boundary, one polyline per orbit and a marker
/// circle when a boundary estimate is present.
pub fn plot_svg(data: &PlotData) -> String {
    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for p in &data.boundary {
        min_x = min_x.min(p.0[0]);
        max_x = max_x.max(p.0[0]);
        min_y = min_y.min(-p.0[1]);
        max_y = max_y.max(-p.0[1]);
    }
    let pad = 0.05 * (max_x - min_x).max(max_y - min_y).max(1e-9);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.6} {:.6} {:.6} {:.6}\" width=\"640\" height=\"640\">",
        min_x - pad,
        min_y - pad,
        (max_x - min_x) + 2.0 * pad,
        (max_y - min_y) + 2.0 * pad
    );
    svg.push_str(&svg_path(
        &data.boundary,
        true,
        "fill=\"none\" stroke=\"#333333\" stroke-width=\"0.004\"",
    ));
    for orbit in &data.orbits {
        svg.push_str(&svg_path(
            orbit,
            false,
            "fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"0.003\"",
        ));
    }
    if let Some(m) = &data.marker {
        let _ = writeln!(
            svg,
            "<circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"0.015\" fill=\"#d62728\"/>",
            m.0[0], -m.0[1]
        );
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn write_plot_svg(path: &Path, data: &PlotData) -> Result<(), RunnerError> {
    write_file(path, &plot_svg(data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use horolab_core::dynamics::Orbit;

    fn tiny_orbit(reps: usize) -> Orbit {
        let p = Point::new(vec![0.1, 0.2]);
        Orbit {
            start: p.clone(),
            points: vec![p.clone(); reps],
            base: Point::zeros(2),
            dists: vec![0.5; reps],
            early_stop: None,
        }
    }

    #[test]
    fn csv_shape_single_constant_orbit() {
        let orbit = tiny_orbit(3);
        let text = orbit_csv(&[(0, &orbit)], 2);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "start_id,step,coord_0,coord_1,dist_to_base");
        assert_eq!(lines[1].split(',').count(), 5);
    }

    #[test]
    fn csv_row_count_for_grid() {
        let orbit = tiny_orbit(101);
        let orbits: Vec<(usize, &Orbit)> = (0..25).map(|i| (i, &orbit)).collect();
        let text = orbit_csv(&orbits, 2);
        assert_eq!(text.lines().count(), 1 + 25 * 101);
    }

    #[test]
    fn f64_formatting_round_trips() {
        for v in [
            std::f64::consts::PI,
            3f64.ln(),
            1.0 - 2f64.powi(-40),
            -0.1,
            1e-17,
        ] {
            let parsed: f64 = fmt_f64(v).parse().unwrap();
            assert_eq!(parsed, v);
        }
    }

    #[test]
    fn svg_element_counts() {
        let data = PlotData {
            boundary: (0..512)
                .map(|j| {
                    let phi = std::f64::consts::TAU * j as f64 / 512.0;
                    Point::new(vec![phi.cos(), phi.sin()])
                })
                .collect(),
            orbits: vec![vec![Point::zeros(2), Point::new(vec![0.5, 0.0])]],
            marker: Some(Point::new(vec![1.0, 0.0])),
        };
        let svg = plot_svg(&data);
        assert_eq!(svg.matches("<path").count(), 2);
        assert_eq!(svg.matches("<circle").count(), 1);
    }
}
