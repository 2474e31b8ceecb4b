use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use super::sweep::{SolverKind, SweepRecord};
use crate::error::{Error, Result};

pub const CSV_HEADER: &str =
    "algorithm,amplitude,branch,epsilon,epsilon_sigma,epsilon_raw,epsilon_exact,epsilon_truncated,fidelity,loss_star,seed";

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

/// Writes the CSV body (header plus one row per record, LF endings).
/// Floats use the shortest representation that round-trips.
pub fn write_csv<W: Write>(records: &[SweepRecord], mut w: W) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.algorithm,
            r.amplitude,
            r.branch,
            r.epsilon,
            r.epsilon_sigma,
            opt(r.epsilon_raw),
            r.epsilon_exact,
            opt(r.epsilon_truncated),
            r.fidelity,
            r.loss_star,
            r.seed
        )?;
    }
    w.flush()
}

pub fn emit_csv(records: &[SweepRecord], path: &Path) -> Result<()> {
    if records.is_empty() {
        return Err(Error::InvalidArgument("no records to write".into()));
    }
    let file = std::fs::File::create(path).map_err(|e| io_error(path, e))?;
    write_csv(records, std::io::BufWriter::new(file)).map_err(|e| io_error(path, e))
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 56.0;

fn color(kind: SolverKind) -> &'static str {
    match kind {
        SolverKind::Fz1 => "#1f77b4",
        SolverKind::Fz2 => "#d62728",
    }
}

/// Polylines through the `k`-th smallest reference value at each amplitude.
fn curves(points: &[(f64, f64)]) -> Vec<Vec<(f64, f64)>> {
    let mut by_amp: Vec<(f64, Vec<f64>)> = Vec::new();
    for &(a, e) in points {
        match by_amp.iter_mut().find(|(x, _)| *x == a) {
            Some((_, v)) => {
                if !v.iter().any(|y| (y - e).abs() < 1e-12) {
                    v.push(e);
                }
            }
            None => by_amp.push((a, vec![e])),
        }
    }
    by_amp.sort_by(|x, y| x.0.total_cmp(&y.0));
    let n = by_amp.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
    (0..n)
        .map(|k| {
            by_amp
                .iter_mut()
                .filter_map(|(a, v)| {
                    v.sort_by(f64::total_cmp);
                    v.get(k).map(|e| (*a, *e))
                })
                .collect()
        })
        .collect()
}

/// Scatter of quasi-energy versus amplitude with error bars, exact
/// quasi-energies as solid lines and folded truncated eigenvalues dashed.
pub fn emit_svg(records: &[SweepRecord], path: &Path, omega: f64) -> Result<()> {
    if records.is_empty() {
        return Err(Error::InvalidArgument("no records to plot".into()));
    }
    let (a_lo, a_hi) = records.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
        (lo.min(r.amplitude), hi.max(r.amplitude))
    });
    let a_span = if a_hi > a_lo { a_hi - a_lo } else { 1.0 };
    let half = omega / 2.0;
    let x = |a: f64| MARGIN + (a - a_lo) / a_span * (WIDTH - 2.0 * MARGIN);
    let y = |e: f64| HEIGHT - MARGIN - (e + half) / omega * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    for (e, label) in [(-half, format!("{:.3}", -half)), (0.0, "0".into()), (half, format!("{half:.3}"))] {
        let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">{label}</text>"#, MARGIN - 6.0, y(e) + 4.0);
    }
    for a in [a_lo, a_hi] {
        let _ = writeln!(s, r#"<text x="{:.2}" y="{}" text-anchor="middle">{a}</text>"#, x(a), HEIGHT - MARGIN + 18.0);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">amplitude A</text>"#, WIDTH / 2.0, HEIGHT - 12.0);
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">quasi-energy ε</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );

    let exact: Vec<(f64, f64)> = records.iter().map(|r| (r.amplitude, r.epsilon_exact)).collect();
    let truncated: Vec<(f64, f64)> = records
        .iter()
        .filter_map(|r| {
            r.epsilon_truncated
                .and_then(|t| crate::oracle::fold_to_bz(t, omega).ok())
                .map(|t| (r.amplitude, t))
        })
        .collect();
    for (points, dash) in [(exact, ""), (truncated, r#" stroke-dasharray="5 4""#)] {
        for curve in curves(&points) {
            let pts: Vec<String> = curve.iter().map(|(a, e)| format!("{:.2},{:.2}", x(*a), y(*e))).collect();
            let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="gray"{dash}/>"#, pts.join(" "));
        }
    }

    for r in records {
        let (cx, cy) = (x(r.amplitude), y(r.epsilon));
        let c = color(r.algorithm);
        if r.epsilon_sigma > 0.0 {
            let _ = writeln!(
                s,
                r#"<line x1="{cx:.2}" y1="{:.2}" x2="{cx:.2}" y2="{:.2}" stroke="{c}"/>"#,
                y(r.epsilon - r.epsilon_sigma),
                y(r.epsilon + r.epsilon_sigma)
            );
        }
        let fill = if r.converged { c } else { "none" };
        let _ = writeln!(s, r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="3.5" fill="{fill}" stroke="{c}"/>"#);
    }
    for (i, kind) in [SolverKind::Fz1, SolverKind::Fz2].into_iter().enumerate() {
        if records.iter().any(|r| r.algorithm == kind) {
            let ly = MARGIN + 16.0 + 16.0 * i as f64;
            let _ = writeln!(
                s,
                r#"<circle cx="{}" cy="{ly}" r="3.5" fill="{c}"/><text x="{}" y="{}">{kind}</text>"#,
                WIDTH - MARGIN - 60.0,
                WIDTH - MARGIN - 50.0,
                ly + 4.0,
                c = color(kind)
            );
        }
    }
    s.push_str("</svg>\n");
    std::fs::write(path, s).map_err(|e| io_error(path, e))
}
