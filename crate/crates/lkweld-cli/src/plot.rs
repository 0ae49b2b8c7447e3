//! Optional static SVG plots (cargo feature `plots`).
//!
//! Hand-rolled line plots with fixed-precision coordinates, so files are
//! byte-identical across runs. Without the feature, plot requests print a
//! notice and succeed.

use std::path::Path;

use crate::error::CliError;

/// A single polyline to draw.
pub struct Series<'a> {
    pub label: &'a str,
    pub xs: &'a [f64],
    pub ys: &'a [f64],
}

#[cfg(feature = "plots")]
mod enabled {
    use super::*;
    use std::io::Write;

    const WIDTH: f64 = 640.0;
    const HEIGHT: f64 = 420.0;
    const MARGIN: f64 = 56.0;
    const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

    fn coords(v: f64, lo: f64, hi: f64, px_lo: f64, px_hi: f64) -> f64 {
        if hi == lo {
            return 0.5 * (px_lo + px_hi);
        }
        px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo)
    }

    /// Writes a line plot; log-scaled axes take log10 of the data.
    pub fn line_plot(
        path: &Path,
        title: &str,
        series: &[Series],
        log_x: bool,
        log_y: bool,
    ) -> Result<(), CliError> {
        let io = |e: std::io::Error| CliError::Io(format!("writing {}: {e}", path.display()));
        let transform = |v: f64, log: bool| if log { v.log10() } else { v };
        let mut xlo = f64::INFINITY;
        let mut xhi = f64::NEG_INFINITY;
        let mut ylo = f64::INFINITY;
        let mut yhi = f64::NEG_INFINITY;
        for s in series {
            for (&x, &y) in s.xs.iter().zip(s.ys) {
                let (x, y) = (transform(x, log_x), transform(y, log_y));
                if x.is_finite() && y.is_finite() {
                    xlo = xlo.min(x);
                    xhi = xhi.max(x);
                    ylo = ylo.min(y);
                    yhi = yhi.max(y);
                }
            }
        }
        if !xlo.is_finite() {
            (xlo, xhi, ylo, yhi) = (0.0, 1.0, 0.0, 1.0);
        }
        let mut svg = String::new();
        svg.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
             viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
        ));
        svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" \
             font-size=\"15\">{title}</text>\n",
            WIDTH / 2.0
        ));
        svg.push_str(&format!(
            "<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{:.1}\" height=\"{:.1}\" fill=\"none\" \
             stroke=\"#444444\"/>\n",
            WIDTH - 2.0 * MARGIN,
            HEIGHT - 2.0 * MARGIN
        ));
        for (idx, s) in series.iter().enumerate() {
            let color = COLORS[idx % COLORS.len()];
            let pts: Vec<String> = s
                .xs
                .iter()
                .zip(s.ys)
                .map(|(&x, &y)| {
                    let px = coords(transform(x, log_x), xlo, xhi, MARGIN, WIDTH - MARGIN);
                    let py = coords(transform(y, log_y), ylo, yhi, HEIGHT - MARGIN, MARGIN);
                    format!("{px:.2},{py:.2}")
                })
                .collect();
            svg.push_str(&format!(
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
                pts.join(" ")
            ));
            svg.push_str(&format!(
                "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\" \
                 fill=\"{color}\">{}</text>\n",
                MARGIN + 8.0,
                MARGIN + 16.0 + 16.0 * idx as f64,
                s.label
            ));
        }
        // axis ranges as plain labels; ticks add noise without value here
        svg.push_str(&format!(
            "<text x=\"{MARGIN}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\">\
             x: [{xlo:.3e}, {xhi:.3e}]{}</text>\n",
            HEIGHT - MARGIN + 28.0,
            if log_x { " (log10)" } else { "" }
        ));
        svg.push_str(&format!(
            "<text x=\"{MARGIN}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\">\
             y: [{ylo:.3e}, {yhi:.3e}]{}</text>\n",
            HEIGHT - MARGIN + 44.0,
            if log_y { " (log10)" } else { "" }
        ));
        svg.push_str("</svg>\n");
        let mut file = std::fs::File::create(path)
            .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
        file.write_all(svg.as_bytes()).map_err(io)
    }
}

#[cfg(feature = "plots")]
pub fn line_plot(
    path: &Path,
    title: &str,
    series: &[Series],
    log_x: bool,
    log_y: bool,
) -> Result<(), CliError> {
    enabled::line_plot(path, title, series, log_x, log_y)
}

#[cfg(not(feature = "plots"))]
pub fn line_plot(
    _path: &Path,
    title: &str,
    _series: &[Series],
    _log_x: bool,
    _log_y: bool,
) -> Result<(), CliError> {
    println!("plots skipped (compiled without plot support): {title}");
    Ok(())
}
