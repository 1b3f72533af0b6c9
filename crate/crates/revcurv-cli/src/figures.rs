//! Figure export: plain-text sample tables next to self-contained SVG
//! line plots, one pair per figure. The SVG is hand-rolled so the output
//! depends on nothing but the data and renders identically everywhere.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, Context, Result};
use revcurv_core::curvature::CurvatureField;
use revcurv_core::profile::ProfileCurve;

/// What the profile looks like between its poles, read off the samples.
pub enum NeckShape {
    /// An interior local minimum: the barbell's neck.
    Waist { t: f64, value: f64 },
    /// Monotone from each pole up to the bulk: no neck.
    None,
}

/// Scan the sample column for an interior local minimum, tolerating the
/// flat plateau the construction leaves around its waist. A plateau
/// counts when the profile rises strictly on both sides of it; runs that
/// drain into a pole do not.
pub fn classify_neck(profile: &ProfileCurve) -> NeckShape {
    let ts = profile.grid();
    let f = profile.f_samples();
    let n = f.len();
    let flat = 1e-12;
    let mut best: Option<(f64, f64)> = None;
    let mut i = 1;
    while i < n - 1 {
        let mut j = i;
        while j + 1 < n && (f[j + 1] - f[i]).abs() <= flat {
            j += 1;
        }
        if j < n - 1 && f[i - 1] > f[i] + flat && f[j + 1] > f[i] + flat {
            let t = 0.5 * (ts[i] + ts[j]);
            if best.map_or(true, |(_, v)| f[i] < v) {
                best = Some((t, f[i]));
            }
        }
        i = j + 1;
    }
    match best {
        Some((t, value)) => NeckShape::Waist { t, value },
        None => NeckShape::None,
    }
}

/// Write the three figures: the profile radius, the base perturbation
/// against its comparison curve, and the Gauss curvature. The round
/// reference has no perturbation, so its middle figure is skipped with a
/// note instead.
pub fn export(profile: &ProfileCurve, dir: &Path) -> Result<()> {
    let ts = profile.grid();
    let f = profile.f_samples();

    let neck = classify_neck(profile);
    let caption = match &neck {
        NeckShape::Waist { t, value } => {
            format!("interior local minimum at t = {t:.16e}, f = {value:.16e}")
        }
        NeckShape::None => String::from("no interior local minimum"),
    };
    println!("neck: {caption}");

    let f_points: Vec<(f64, f64)> = ts.iter().copied().zip(f.iter().copied()).collect();
    let mut table = String::from("t f\n");
    for (t, v) in &f_points {
        let _ = writeln!(table, "{t:.16e} {v:.16e}");
    }
    write_pair(
        dir,
        "figure_f",
        &table,
        &svg_plot(
            "profile radius",
            Some(&caption),
            &[Series {
                label: "f(t)",
                color: "#1f77b4",
                dashed: false,
                points: f_points,
            }],
        ),
    )?;

    match profile.eps() {
        Some(ev) => {
            let base = ev.base();
            let c = base.waist_level();
            let n = 512;
            let mut eps_points = Vec::with_capacity(n + 1);
            let mut cmp_points = Vec::with_capacity(n + 1);
            let mut table = String::from("t eps0 c_minus_cos\n");
            for i in 0..=n {
                let t = FRAC_PI_2 * (i as f64) / (n as f64);
                let e = base
                    .value(t)
                    .map_err(|e| anyhow!("base perturbation at {t}: {e}"))?;
                let cmp = c - t.cos();
                let _ = writeln!(table, "{t:.16e} {e:.16e} {cmp:.16e}");
                eps_points.push((t, e));
                cmp_points.push((t, cmp));
            }
            write_pair(
                dir,
                "figure_eps0",
                &table,
                &svg_plot(
                    "base perturbation",
                    None,
                    &[
                        Series {
                            label: "eps0(t)",
                            color: "#1f77b4",
                            dashed: false,
                            points: eps_points,
                        },
                        Series {
                            label: "c - cos t",
                            color: "#d62728",
                            dashed: true,
                            points: cmp_points,
                        },
                    ],
                ),
            )?;
        }
        None => println!("eps0 figure skipped: the round reference has no perturbation"),
    }

    let field = CurvatureField::sample(profile);
    let k_points: Vec<(f64, f64)> = ts
        .iter()
        .copied()
        .zip(field.samples().iter().copied())
        .collect();
    let (lo, hi) = profile.domain();
    write_pair(
        dir,
        "figure_curvature",
        &field.table(),
        &svg_plot(
            "Gauss curvature",
            None,
            &[
                Series {
                    label: "K(t)",
                    color: "#1f77b4",
                    dashed: false,
                    points: k_points,
                },
                Series {
                    label: "K = 1",
                    color: "#7f7f7f",
                    dashed: true,
                    points: vec![(lo, 1.0), (hi, 1.0)],
                },
            ],
        ),
    )?;
    Ok(())
}

fn write_pair(dir: &Path, stem: &str, table: &str, svg: &str) -> Result<()> {
    for (ext, content) in [("txt", table), ("svg", svg)] {
        let path = dir.join(format!("{stem}.{ext}"));
        std::fs::write(&path, content)
            .with_context(|| format!("writing {}", path.display()))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

struct Series {
    label: &'static str,
    color: &'static str,
    dashed: bool,
    points: Vec<(f64, f64)>,
}

/// Render a fixed-size line plot: axes with five ticks each, a legend,
/// and one polyline per series. Coordinates round to centipixels so the
/// text is stable across runs.
fn svg_plot(title: &str, caption: Option<&str>, series: &[Series]) -> String {
    let (x0, x1, y0, y1) = (70.0, 810.0, 40.0, 460.0);
    let mut xr = (f64::INFINITY, f64::NEG_INFINITY);
    let mut yr = (f64::INFINITY, f64::NEG_INFINITY);
    for s in series {
        for &(x, y) in &s.points {
            xr = (xr.0.min(x), xr.1.max(x));
            yr = (yr.0.min(y), yr.1.max(y));
        }
    }
    let pad = |r: (f64, f64)| {
        let span = (r.1 - r.0).max(1e-9);
        (r.0 - 0.05 * span, r.1 + 0.05 * span)
    };
    let (xa, xb) = pad(xr);
    let (ya, yb) = pad(yr);
    let px = |x: f64| x0 + (x - xa) / (xb - xa) * (x1 - x0);
    let py = |y: f64| y1 - (y - ya) / (yb - ya) * (y1 - y0);

    let mut out = String::with_capacity(4096);
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"840\" height=\"520\" viewBox=\"0 0 840 520\">"
    );
    let _ = writeln!(out, "<rect width=\"840\" height=\"520\" fill=\"white\"/>");
    let _ = writeln!(
        out,
        "<text x=\"440\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">{title}</text>"
    );
    for i in 0..5 {
        let xv = xa + (xb - xa) * (i as f64) / 4.0;
        let yv = ya + (yb - ya) * (i as f64) / 4.0;
        let gx = px(xv);
        let gy = py(yv);
        let _ = writeln!(
            out,
            "<line x1=\"{gx:.2}\" y1=\"{y0}\" x2=\"{gx:.2}\" y2=\"{y1}\" stroke=\"#dddddd\"/>"
        );
        let _ = writeln!(
            out,
            "<line x1=\"{x0}\" y1=\"{gy:.2}\" x2=\"{x1}\" y2=\"{gy:.2}\" stroke=\"#dddddd\"/>"
        );
        let _ = writeln!(
            out,
            "<text x=\"{gx:.2}\" y=\"478\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{xv:.4}</text>"
        );
        let _ = writeln!(
            out,
            "<text x=\"62\" y=\"{:.2}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">{yv:.4}</text>",
            gy + 4.0
        );
    }
    let _ = writeln!(
        out,
        "<rect x=\"{x0}\" y=\"{y0}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
        x1 - x0,
        y1 - y0
    );
    for s in series {
        let dash = if s.dashed { " stroke-dasharray=\"6 4\"" } else { "" };
        let mut pts = String::with_capacity(s.points.len() * 14);
        for &(x, y) in &s.points {
            let _ = write!(pts, "{:.2},{:.2} ", px(x), py(y));
        }
        let _ = writeln!(
            out,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"{dash}/>",
            pts.trim_end(),
            s.color
        );
    }
    for (i, s) in series.iter().enumerate() {
        let ly = y0 + 18.0 + 20.0 * i as f64;
        let dash = if s.dashed { " stroke-dasharray=\"6 4\"" } else { "" };
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{ly}\" x2=\"{}\" y2=\"{ly}\" stroke=\"{}\" stroke-width=\"1.5\"{dash}/>",
            x1 - 150.0,
            x1 - 120.0,
            s.color
        );
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
            x1 - 112.0,
            ly + 4.0,
            s.label
        );
    }
    if let Some(c) = caption {
        let _ = writeln!(
            out,
            "<text x=\"440\" y=\"508\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{c}</text>"
        );
    }
    let _ = writeln!(out, "</svg>");
    out
}
