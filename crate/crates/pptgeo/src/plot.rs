//! Static SVG figures of result tables. Plotting only reads tables.

use std::path::Path;
use std::str::FromStr;

use plotters::prelude::*;

use crate::error::{CliError, Result};
use crate::table::{read_table, write_bytes};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// Histograms of h_PPT, h_SEP and the operator norm with interval markers.
    Widths,
    /// Histogram of operator norms with the `2/sqrt(n)` asymptote.
    Wigner,
    /// first, second and exact bounds against l, one curve per d_s.
    Bounds,
}

impl PlotKind {
    fn required(self) -> &'static [&'static str] {
        match self {
            PlotKind::Widths => &["d", "h_ppt", "h_ppt_converged", "h_sep", "opnorm"],
            PlotKind::Wigner => &["n", "opnorm"],
            PlotKind::Bounds => &["l", "d_s", "first", "second", "exact"],
        }
    }

    /// The first kind whose columns are all present.
    pub fn detect(columns: &[String]) -> Option<PlotKind> {
        [PlotKind::Widths, PlotKind::Wigner, PlotKind::Bounds].into_iter().find(|k| k.required().iter().all(|c| columns.iter().any(|h| h == c)))
    }
}

impl FromStr for PlotKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "widths" => Ok(PlotKind::Widths),
            "wigner" => Ok(PlotKind::Wigner),
            "bounds" => Ok(PlotKind::Bounds),
            _ => Err(format!("unknown plot kind {s:?}")),
        }
    }
}

struct Columns {
    names: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Columns {
    fn get(&self, name: &str) -> Result<Vec<f64>> {
        let k = self.names.iter().position(|c| c == name).ok_or_else(|| CliError::Plot(format!("missing column {name:?}")))?;
        self.rows.iter().map(|r| r[k].parse::<f64>().map_err(|_| CliError::Plot(format!("column {name:?} holds {:?}", r[k])))).collect()
    }

    fn flags(&self, name: &str) -> Result<Vec<bool>> {
        let k = self.names.iter().position(|c| c == name).ok_or_else(|| CliError::Plot(format!("missing column {name:?}")))?;
        self.rows.iter().map(|r| r[k].parse::<bool>().map_err(|_| CliError::Plot(format!("column {name:?} holds {:?}", r[k])))).collect()
    }
}

fn plot_err<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Plot(e.to_string())
}

const BINS: usize = 30;

/// One histogram panel; `markers` are drawn as vertical lines and widen the
/// x range so they stay visible.
fn histogram<DB: DrawingBackend>(area: &DrawingArea<DB, plotters::coord::Shift>, title: &str, values: &[f64], markers: &[f64]) -> Result<()>
where
    DB::ErrorType: 'static,
{
    let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    let lo = finite.iter().chain(markers).copied().fold(f64::INFINITY, f64::min);
    let hi = finite.iter().chain(markers).copied().fold(f64::NEG_INFINITY, f64::max);
    let pad = ((hi - lo) * 0.05).max(1e-9);
    let (lo, hi) = (lo - pad, hi + pad);
    let width = (hi - lo) / BINS as f64;
    let mut counts = [0u32; BINS];
    for v in &finite {
        counts[(((v - lo) / width) as usize).min(BINS - 1)] += 1;
    }
    let top = counts.iter().copied().max().unwrap_or(1).max(1) as f64 * 1.1;
    let mut chart = ChartBuilder::on(area)
        .caption(title, ("sans-serif", 18))
        .margin(10)
        .x_label_area_size(30)
        .y_label_area_size(40)
        .build_cartesian_2d(lo..hi, 0.0..top)
        .map_err(plot_err)?;
    chart.configure_mesh().y_desc("count").draw().map_err(plot_err)?;
    chart
        .draw_series(counts.iter().enumerate().map(|(k, &c)| {
            let x0 = lo + k as f64 * width;
            Rectangle::new([(x0, 0.0), (x0 + width, c as f64)], BLUE.mix(0.5).filled())
        }))
        .map_err(plot_err)?;
    for &m in markers {
        chart.draw_series(LineSeries::new([(m, 0.0), (m, top)], RED.stroke_width(2))).map_err(plot_err)?;
    }
    Ok(())
}

fn render_widths(root: &DrawingArea<SVGBackend, plotters::coord::Shift>, t: &Columns) -> Result<()> {
    let d = t.get("d")?[0];
    let converged = t.flags("h_ppt_converged")?;
    let h_ppt: Vec<f64> = t.get("h_ppt")?.into_iter().zip(&converged).filter(|(_, &ok)| ok).map(|(v, _)| v).collect();
    let panels = root.split_evenly((1, 3));
    histogram(&panels[0], "h_PPT", &h_ppt, &[0.25 / d, 2.0 / d])?;
    histogram(&panels[1], "h_SEP (seesaw)", &t.get("h_sep")?, &[d.powf(-1.5) / 6.0, 4.0 * d.powf(-1.5)])?;
    histogram(&panels[2], "operator norm", &t.get("opnorm")?, &[2.0 / d])
}

fn render_wigner(root: &DrawingArea<SVGBackend, plotters::coord::Shift>, t: &Columns) -> Result<()> {
    let n = t.get("n")?[0];
    histogram(root, "operator norm", &t.get("opnorm")?, &[2.0 / n.sqrt()])
}

fn render_bounds(root: &DrawingArea<SVGBackend, plotters::coord::Shift>, t: &Columns) -> Result<()> {
    let l = t.get("l")?;
    let d_s = t.get("d_s")?;
    let mut shields: Vec<f64> = d_s.clone();
    shields.sort_by(f64::total_cmp);
    shields.dedup();
    let (l_lo, l_hi) = (l.iter().copied().fold(f64::INFINITY, f64::min), l.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    let l_hi = if l_hi > l_lo { l_hi } else { l_lo + 1.0 };
    let panels = root.split_evenly((1, 3));
    for (panel, name) in panels.iter().zip(["first", "second", "exact"]) {
        let y = t.get(name)?;
        let (y_lo, y_hi) = (y.iter().copied().fold(f64::INFINITY, f64::min), y.iter().copied().fold(f64::NEG_INFINITY, f64::max));
        let pad = ((y_hi - y_lo) * 0.05).max(1e-3);
        let mut chart = ChartBuilder::on(panel)
            .caption(name, ("sans-serif", 18))
            .margin(10)
            .x_label_area_size(30)
            .y_label_area_size(50)
            .build_cartesian_2d(l_lo..l_hi, (y_lo - pad)..(y_hi + pad))
            .map_err(plot_err)?;
        chart.configure_mesh().x_desc("l").draw().map_err(plot_err)?;
        for (k, &s) in shields.iter().enumerate() {
            let color = Palette99::pick(k).to_rgba();
            let points: Vec<(f64, f64)> = l.iter().zip(&d_s).zip(&y).filter(|((_, &ds), _)| ds == s).map(|((&x, _), &v)| (x, v)).collect();
            chart
                .draw_series(LineSeries::new(points, color.stroke_width(2)))
                .map_err(plot_err)?
                .label(format!("d_s={s}"))
                .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 15, y)], color));
        }
        if shields.len() <= 8 {
            chart.configure_series_labels().background_style(WHITE.mix(0.8)).border_style(BLACK).draw().map_err(plot_err)?;
        }
    }
    Ok(())
}

/// Renders the table at `table` as an SVG at `out`. The kind is detected
/// from the columns unless given. Unknown schemas and empty tables are
/// errors, and then no file is written.
pub fn plot_export(table: &Path, kind: Option<PlotKind>, out: &Path) -> Result<String> {
    let (names, rows) = read_table(table)?;
    let kind = match kind {
        Some(k) if k.required().iter().all(|c| names.contains(&c.to_string())) => k,
        Some(k) => return Err(CliError::Plot(format!("table columns {names:?} do not match the {k:?} schema"))),
        None => PlotKind::detect(&names).ok_or_else(|| CliError::Plot(format!("unknown table schema {names:?}")))?,
    };
    if rows.is_empty() {
        return Err(CliError::Plot("table has no rows".into()));
    }
    let t = Columns { names, rows };
    let size = match kind {
        PlotKind::Wigner => (640, 480),
        _ => (1500, 480),
    };
    let mut svg = String::new();
    {
        let root = SVGBackend::with_string(&mut svg, size).into_drawing_area();
        root.fill(&WHITE).map_err(plot_err)?;
        match kind {
            PlotKind::Widths => render_widths(&root, &t)?,
            PlotKind::Wigner => render_wigner(&root, &t)?,
            PlotKind::Bounds => render_bounds(&root, &t)?,
        }
        root.present().map_err(plot_err)?;
    }
    write_bytes(out, svg.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    #[test]
    fn detects_schemas() {
        let cols = |c: &[&str]| c.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        assert_eq!(PlotKind::detect(&cols(&["l", "d_s", "p", "first", "second", "exact", "dominant"])), Some(PlotKind::Bounds));
        assert_eq!(PlotKind::detect(&cols(&["n", "sample_id", "opnorm"])), Some(PlotKind::Wigner));
        assert_eq!(PlotKind::detect(&cols(&["a", "b"])), None);
    }

    #[test]
    fn bounds_chart_has_curves_and_labels() {
        let dir = tempfile::tempdir().unwrap();
        let table = write(dir.path(), "b.csv", "l,d_s,first,second,exact\n1,2,0.1,0.2,0.3\n2,2,0.2,0.3,0.4\n1,3,0.3,0.1,0.5\n2,3,0.4,0.2,0.6\n");
        let out = dir.path().join("b.svg");
        plot_export(&table, None, &out).unwrap();
        let svg = std::fs::read_to_string(&out).unwrap();
        assert!(svg.contains("<svg") && svg.contains("d_s=3") && svg.contains("polyline"));
    }

    #[test]
    fn empty_or_unknown_tables_write_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("x.svg");
        let empty = write(dir.path(), "e.csv", "n,sample_id,opnorm\n");
        assert!(plot_export(&empty, None, &out).is_err());
        let unknown = write(dir.path(), "u.csv", "a,b\n1,2\n");
        assert!(plot_export(&unknown, None, &out).is_err());
        assert!(plot_export(&unknown, Some(PlotKind::Bounds), &out).is_err());
        assert!(!out.exists());
    }
}
