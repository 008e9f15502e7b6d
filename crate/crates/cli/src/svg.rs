//! Minimal SVG line plots of a CSV table: the first column against every
//! other numeric column.

use std::fmt::Write;

use grainlab::table::Table;

const W: f64 = 640.0;
const H: f64 = 400.0;
const MARGIN: f64 = 48.0;
const COLORS: &[&str] = &["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"];

pub fn render(table: &Table, title: &str) -> String {
    let xs: Vec<Option<f64>> = table.floats(&table.header[0]).unwrap_or_default();
    let series: Vec<(&str, Vec<Option<f64>>)> = table.header[1..]
        .iter()
        .filter_map(|name| table.floats(name).map(|v| (name.as_str(), v)))
        .filter(|(_, v)| v.iter().any(Option::is_some))
        .collect();
    let finite = |v: &&Option<f64>| v.is_some_and(f64::is_finite);
    let (x_lo, x_hi) = bounds(xs.iter().filter(finite).map(|v| v.unwrap()));
    let (y_lo, y_hi) = bounds(series.iter().flat_map(|(_, v)| v.iter().filter(finite).map(|v| v.unwrap())));
    let sx = |x: f64| MARGIN + (x - x_lo) / (x_hi - x_lo) * (W - 2.0 * MARGIN);
    let sy = |y: f64| H - MARGIN - (y - y_lo) / (y_hi - y_lo) * (H - 2.0 * MARGIN);

    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="11">"#).unwrap();
    writeln!(out, r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, escape(title)).unwrap();
    writeln!(
        out,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * MARGIN,
        H - 2.0 * MARGIN
    )
    .unwrap();
    for (label, x, y, anchor) in [
        (format!("{x_lo:.3}"), MARGIN, H - MARGIN + 14.0, "start"),
        (format!("{x_hi:.3}"), W - MARGIN, H - MARGIN + 14.0, "end"),
        (format!("{y_lo:.3}"), MARGIN - 4.0, H - MARGIN, "end"),
        (format!("{y_hi:.3}"), MARGIN - 4.0, MARGIN + 8.0, "end"),
    ] {
        writeln!(out, r#"<text x="{x}" y="{y}" text-anchor="{anchor}">{label}</text>"#).unwrap();
    }
    writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, W / 2.0, H - 12.0, escape(&table.header[0])).unwrap();
    for (k, (name, ys)) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        // Break the line at empty cells.
        let mut segment = Vec::new();
        let flush = |segment: &mut Vec<String>, out: &mut String| {
            if segment.len() > 1 {
                writeln!(out, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, segment.join(" ")).unwrap();
            }
            segment.clear();
        };
        for (x, y) in xs.iter().zip(ys) {
            match (x, y) {
                (Some(x), Some(y)) if x.is_finite() && y.is_finite() => segment.push(format!("{:.2},{:.2}", sx(*x), sy(*y))),
                _ => flush(&mut segment, &mut out),
            }
        }
        flush(&mut segment, &mut out);
        let ly = MARGIN + 14.0 + 14.0 * k as f64;
        writeln!(out, r#"<text x="{}" y="{ly}" fill="{color}" text-anchor="end">{}</text>"#, W - MARGIN - 6.0, escape(name)).unwrap();
    }
    out.push_str("</svg>\n");
    out
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use grainlab::table::Cell;

    #[test]
    fn renders_polylines() {
        let mut t = Table::new(&["p", "a", "b"]);
        for k in 0..5 {
            let p = k as f64 / 4.0;
            t.push(vec![Cell::from(p), Cell::from(1.0 - p), if k == 2 { Cell::Empty } else { Cell::from(p) }]);
        }
        let svg = render(&t, "test");
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        // One line for `a`, two pieces for `b`.
        assert_eq!(svg.matches("<polyline").count(), 3);
    }
}
