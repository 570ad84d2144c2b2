//! Minimal self-contained SVG plots: energy scatter per sweep axis and
//! single-episode temperature trajectories. Every plot writes a sidecar
//! CSV holding exactly the plotted points.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::HeatplanError;
use crate::sweep::{SweepAxis, SweepRow};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 140.0;
const MARGIN_T: f64 = 30.0;
const MARGIN_B: f64 = 55.0;

const SERIES_COLORS: [(&str, &str); 4] = [
    ("bangbang", "#d62728"),
    ("mcts", "#ff7f0e"),
    ("ppo", "#2ca02c"),
    ("oracle", "#1f77b4"),
];

fn color_for(series: &str, index: usize) -> &'static str {
    SERIES_COLORS
        .iter()
        .find(|(name, _)| *name == series)
        .map(|(_, c)| *c)
        .unwrap_or(["#9467bd", "#8c564b", "#e377c2", "#7f7f7f"][index % 4])
}

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn from_points<'a, I: Iterator<Item = &'a (f64, f64)> + Clone>(points: I) -> Self {
        let mut f = Frame {
            x_min: f64::INFINITY,
            x_max: f64::NEG_INFINITY,
            y_min: f64::INFINITY,
            y_max: f64::NEG_INFINITY,
        };
        for &(x, y) in points {
            f.x_min = f.x_min.min(x);
            f.x_max = f.x_max.max(x);
            f.y_min = f.y_min.min(y);
            f.y_max = f.y_max.max(y);
        }
        // Pad degenerate ranges so single points still render.
        if f.x_max - f.x_min < 1e-9 {
            f.x_min -= 1.0;
            f.x_max += 1.0;
        }
        if f.y_max - f.y_min < 1e-9 {
            f.y_min -= 1.0;
            f.y_max += 1.0;
        }
        let y_pad = (f.y_max - f.y_min) * 0.05;
        f.y_min -= y_pad;
        f.y_max += y_pad;
        f
    }

    fn sx(&self, x: f64) -> f64 {
        MARGIN_L + (x - self.x_min) / (self.x_max - self.x_min) * (WIDTH - MARGIN_L - MARGIN_R)
    }

    fn sy(&self, y: f64) -> f64 {
        HEIGHT
            - MARGIN_B
            - (y - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - MARGIN_T - MARGIN_B)
    }
}

fn svg_header(out: &mut String) {
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(
        out,
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    );
}

fn axes(out: &mut String, frame: &Frame, x_label: &str, y_label: &str) {
    let x0 = MARGIN_L;
    let x1 = WIDTH - MARGIN_R;
    let y0 = HEIGHT - MARGIN_B;
    let y1 = MARGIN_T;
    let _ = writeln!(
        out,
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>\
         <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>"
    );
    for i in 0..=4 {
        let fx = frame.x_min + (frame.x_max - frame.x_min) * i as f64 / 4.0;
        let fy = frame.y_min + (frame.y_max - frame.y_min) * i as f64 / 4.0;
        let px = frame.sx(fx);
        let py = frame.sy(fy);
        let _ = writeln!(
            out,
            "<line x1=\"{px}\" y1=\"{y0}\" x2=\"{px}\" y2=\"{}\" stroke=\"black\"/>\
             <text x=\"{px}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{fx:.1}</text>",
            y0 + 5.0,
            y0 + 20.0
        );
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{py}\" x2=\"{x0}\" y2=\"{py}\" stroke=\"black\"/>\
             <text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{fy:.0}</text>",
            x0 - 5.0,
            x0 - 8.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\">{x_label}</text>",
        (x0 + x1) / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        out,
        "<text x=\"18\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 {})\">{y_label}</text>",
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );
}

fn legend(out: &mut String, series: &[String]) {
    let lx = WIDTH - MARGIN_R + 15.0;
    for (i, name) in series.iter().enumerate() {
        let ly = MARGIN_T + 20.0 + i as f64 * 22.0;
        let color = color_for(name, i);
        let _ = writeln!(
            out,
            "<rect x=\"{lx}\" y=\"{}\" width=\"12\" height=\"12\" fill=\"{color}\"/>\
             <text x=\"{}\" y=\"{}\" font-size=\"13\">{name}</text>",
            ly - 10.0,
            lx + 18.0,
            ly
        );
    }
}

fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("csv")
}

/// Energy-versus-axis scatter, one series per controller. Writes the SVG
/// to `path` and the plotted points to the `.csv` sidecar next to it.
pub fn emit_scatter(rows: &[SweepRow], axis: SweepAxis, path: &Path) -> Result<(), HeatplanError> {
    if rows.is_empty() {
        return Err(HeatplanError::EmptyPlot);
    }
    let mut series_names: Vec<String> = Vec::new();
    for row in rows {
        if !series_names.contains(&row.controller) {
            series_names.push(row.controller.clone());
        }
    }
    let points: Vec<(String, (f64, f64))> = rows
        .iter()
        .map(|r| (r.controller.clone(), (r.axis_value(axis), r.energy_wh)))
        .collect();

    let frame = Frame::from_points(points.iter().map(|(_, p)| p));
    let mut svg = String::new();
    svg_header(&mut svg);
    axes(&mut svg, &frame, axis.label(), "total energy (Wh)");
    for (i, name) in series_names.iter().enumerate() {
        let color = color_for(name, i);
        for (series, (x, y)) in &points {
            if series == name {
                let _ = writeln!(
                    svg,
                    "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"{color}\" fill-opacity=\"0.8\"/>",
                    frame.sx(*x),
                    frame.sy(*y)
                );
            }
        }
    }
    legend(&mut svg, &series_names);
    svg.push_str("</svg>\n");

    let mut csv = format!("series,{},energy_wh\n", axis.label());
    for (series, (x, y)) in &points {
        let _ = writeln!(csv, "{series},{x},{y:.3}");
    }
    std::fs::write(path, svg)?;
    std::fs::write(sidecar_path(path), csv)?;
    Ok(())
}

/// Temperature-versus-step lines, one per named series (temperatures
/// include the initial state at step 0).
pub fn emit_trajectory(series: &[(String, Vec<f64>)], path: &Path) -> Result<(), HeatplanError> {
    if series.is_empty() || series.iter().all(|(_, t)| t.is_empty()) {
        return Err(HeatplanError::EmptyPlot);
    }
    let all_points: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|(_, temps)| {
            temps
                .iter()
                .enumerate()
                .map(|(i, &t)| (i as f64, t))
                .collect::<Vec<_>>()
        })
        .collect();
    let frame = Frame::from_points(all_points.iter());

    let mut svg = String::new();
    svg_header(&mut svg);
    axes(&mut svg, &frame, "step", "temperature (degC)");
    let names: Vec<String> = series.iter().map(|(n, _)| n.clone()).collect();
    for (i, (name, temps)) in series.iter().enumerate() {
        let color = color_for(name, i);
        let pts: Vec<String> = temps
            .iter()
            .enumerate()
            .map(|(s, &t)| format!("{:.2},{:.2}", frame.sx(s as f64), frame.sy(t)))
            .collect();
        let _ = writeln!(
            svg,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"/>",
            pts.join(" ")
        );
    }
    legend(&mut svg, &names);
    svg.push_str("</svg>\n");

    let mut csv = String::from("series,step,temp_c\n");
    for (name, temps) in series {
        for (s, t) in temps.iter().enumerate() {
            let _ = writeln!(csv, "{name},{s},{t:.6}");
        }
    }
    std::fs::write(path, svg)?;
    std::fs::write(sidecar_path(path), csv)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::{run_sweep, ControllerKind, SweepSpec};

    #[test]
    fn scatter_writes_svg_and_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let spec = SweepSpec::new(SweepAxis::Deadline, vec![ControllerKind::BangBang]);
        let rows = run_sweep(&spec).unwrap();
        let out = dir.path().join("fig.svg");
        emit_scatter(&rows, SweepAxis::Deadline, &out).unwrap();
        let svg = std::fs::read_to_string(&out).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("bangbang"));
        assert!(svg.contains("total energy (Wh)"));
        let sidecar = std::fs::read_to_string(dir.path().join("fig.csv")).unwrap();
        assert_eq!(sidecar.lines().count(), rows.len() + 1);
    }

    #[test]
    fn empty_rows_error_and_no_file() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("fig.svg");
        assert!(matches!(
            emit_scatter(&[], SweepAxis::Deadline, &out),
            Err(HeatplanError::EmptyPlot)
        ));
        assert!(!out.exists());
    }

    #[test]
    fn trajectory_plot() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("traj.svg");
        let temps: Vec<f64> = (0..=60).map(|i| 20.0 + i as f64 * 0.5).collect();
        emit_trajectory(&[("bangbang".to_string(), temps)], &out).unwrap();
        let svg = std::fs::read_to_string(&out).unwrap();
        assert!(svg.contains("polyline"));
        assert!(dir.path().join("traj.csv").exists());
    }
}
