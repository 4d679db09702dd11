//! Just enough SVG to draw the figures: polyline plots and caterpillar
//! interval plots. Fixed-precision formatting keeps re-runs byte
//! identical.

use score_prior::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

const W: f64 = 640.0;
const H: f64 = 420.0;
const MARGIN: f64 = 52.0;
const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

pub struct Series<'a> {
    pub label: &'a str,
    pub xs: &'a [f64],
    pub ys: &'a [f64],
}

fn write_file(path: &Path, body: String) -> Result<()> {
    std::fs::write(path, body)
        .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))
}

fn bounds(vals: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in vals {
        if v.is_finite() {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if lo == hi {
        // Degenerate range: pad so the flat line sits mid-plot.
        return (lo - 0.5, hi + 0.5);
    }
    let pad = 0.04 * (hi - lo);
    (lo - pad, hi + pad)
}

fn open_svg(title: &str) -> String {
    let mut s = String::new();
    let _ = write!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\">\n<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n\
         <text x=\"{:.1}\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"14\">{}</text>\n",
        W / 2.0,
        escape(title)
    );
    s
}

fn axes(s: &mut String, x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64) {
    let _ = write!(
        s,
        "<rect x=\"{M:.1}\" y=\"{M:.1}\" width=\"{:.1}\" height=\"{:.1}\" fill=\"none\" \
         stroke=\"#333\" stroke-width=\"1\"/>\n",
        W - 2.0 * MARGIN,
        H - 2.0 * MARGIN,
        M = MARGIN
    );
    for (frac, anchor) in [(0.0, "start"), (0.5, "middle"), (1.0, "end")] {
        let xv = x_lo + frac * (x_hi - x_lo);
        let yv = y_lo + frac * (y_hi - y_lo);
        let _ = write!(
            s,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"{anchor}\" font-family=\"sans-serif\" \
             font-size=\"11\">{xv:.4}</text>\n",
            MARGIN + frac * (W - 2.0 * MARGIN),
            H - MARGIN + 16.0
        );
        let _ = write!(
            s,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\" font-family=\"sans-serif\" \
             font-size=\"11\">{yv:.4}</text>\n",
            MARGIN - 6.0,
            H - MARGIN - frac * (H - 2.0 * MARGIN) + 4.0
        );
    }
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// One panel, any number of polylines sharing the axes. Series cycle
/// through a fixed four-color palette.
pub fn line_plot(path: &Path, title: &str, series: &[Series]) -> Result<()> {
    if series.is_empty() || series.iter().any(|s| s.xs.len() != s.ys.len() || s.xs.is_empty()) {
        return Err(Error::InvalidConfig("plot needs non-empty x/y of equal length".into()));
    }
    let (x_lo, x_hi) = bounds(series.iter().flat_map(|s| s.xs.iter().copied()));
    let (y_lo, y_hi) = bounds(series.iter().flat_map(|s| s.ys.iter().copied()));
    let sx = (W - 2.0 * MARGIN) / (x_hi - x_lo);
    let sy = (H - 2.0 * MARGIN) / (y_hi - y_lo);

    let mut s = open_svg(title);
    axes(&mut s, x_lo, x_hi, y_lo, y_hi);
    for (k, ser) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let mut pts = String::new();
        for (&x, &y) in ser.xs.iter().zip(ser.ys) {
            if !(x.is_finite() && y.is_finite()) {
                continue;
            }
            let _ = write!(
                pts,
                "{:.2},{:.2} ",
                MARGIN + (x - x_lo) * sx,
                H - MARGIN - (y - y_lo) * sy
            );
        }
        let _ = write!(
            s,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.2\" points=\"{}\"/>\n",
            pts.trim_end()
        );
        if !ser.label.is_empty() {
            let _ = write!(
                s,
                "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" \
                 fill=\"{color}\">{}</text>\n",
                W - MARGIN - 150.0,
                MARGIN + 16.0 + 14.0 * k as f64,
                escape(ser.label)
            );
        }
    }
    s.push_str("</svg>\n");
    write_file(path, s)
}

/// Horizontal 95% intervals, one row per coefficient, mean dot on each,
/// optional true values as crosses.
pub fn caterpillar_plot(
    path: &Path,
    title: &str,
    rows: &[(String, f64, f64, f64)],
    truth: Option<&[f64]>,
) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::InvalidConfig("caterpillar plot needs rows".into()));
    }
    if let Some(t) = truth {
        if t.len() != rows.len() {
            return Err(Error::InvalidConfig("truth length != row count".into()));
        }
    }
    let (x_lo, x_hi) = bounds(
        rows.iter()
            .flat_map(|r| [r.1, r.2, r.3])
            .chain(truth.unwrap_or(&[]).iter().copied()),
    );
    let sx = (W - 2.0 * MARGIN) / (x_hi - x_lo);
    let row_h = (H - 2.0 * MARGIN) / rows.len() as f64;

    let mut s = open_svg(title);
    axes(&mut s, x_lo, x_hi, 0.0, rows.len() as f64);
    for (i, (label, lo, mean, hi)) in rows.iter().enumerate() {
        let y = MARGIN + (i as f64 + 0.5) * row_h;
        let xm = |v: f64| MARGIN + (v - x_lo) * sx;
        let _ = write!(
            s,
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"#1f77b4\" \
             stroke-width=\"2\"/>\n<circle cx=\"{:.2}\" cy=\"{y:.2}\" r=\"3\" fill=\"#1f77b4\"/>\n\
             <text x=\"{:.1}\" y=\"{:.2}\" text-anchor=\"end\" font-family=\"sans-serif\" \
             font-size=\"11\">{}</text>\n",
            xm(*lo),
            xm(*hi),
            xm(*mean),
            MARGIN - 6.0,
            y + 4.0,
            escape(label)
        );
        if let Some(t) = truth {
            let x = xm(t[i]);
            let _ = write!(
                s,
                "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#d62728\" \
                 stroke-width=\"1.5\"/>\n<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" \
                 stroke=\"#d62728\" stroke-width=\"1.5\"/>\n",
                x - 4.0,
                y - 4.0,
                x + 4.0,
                y + 4.0,
                x - 4.0,
                y + 4.0,
                x + 4.0,
                y - 4.0
            );
        }
    }
    s.push_str("</svg>\n");
    write_file(path, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_plot_emits_polylines_and_is_deterministic() {
        let dir = std::env::temp_dir().join("svg_line_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("p.svg");
        let xs: Vec<f64> = (0..50).map(|i| i as f64 * 0.1).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x.sin()).collect();
        let series = [Series { label: "wave", xs: &xs, ys: &ys }];
        line_plot(&path, "test", &series).unwrap();
        let first = std::fs::read(&path).unwrap();
        line_plot(&path, "test", &series).unwrap();
        assert_eq!(first, std::fs::read(&path).unwrap());
        let text = String::from_utf8(first).unwrap();
        assert!(text.contains("<polyline"));
        assert!(text.contains("</svg>"));
    }

    #[test]
    fn caterpillar_draws_one_row_per_interval() {
        let dir = std::env::temp_dir().join("svg_cat_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.svg");
        let rows = vec![
            ("b0".to_string(), -1.0, -0.8, -0.6),
            ("b1".to_string(), 0.3, 0.5, 0.7),
        ];
        caterpillar_plot(&path, "cat", &rows, Some(&[-0.8, 0.5])).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.matches("<circle").count(), 2);
    }

    #[test]
    fn empty_input_is_rejected() {
        let p = std::env::temp_dir().join("never.svg");
        assert!(line_plot(&p, "t", &[]).is_err());
        assert!(caterpillar_plot(&p, "t", &[], None).is_err());
    }
}
