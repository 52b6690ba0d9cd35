//! Static SVG rendering of trajectories and condition-number curves.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::harness::CellRecord;
use crate::sampling::{SamplePath, Scheme};

const PANEL: f64 = 220.0;
const MARGIN: f64 = 24.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

fn svg_open(s: &mut String, width: f64, height: f64) {
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
}

/// One square panel per scheme showing its paths in the unit square.
/// Single-sample paths are drawn as dots; hive centers as open circles.
pub fn trajectory_svg(panels: &[(Scheme, Vec<SamplePath>)]) -> String {
    let cols = panels.len().clamp(1, 4);
    let rows = panels.len().div_ceil(cols).max(1);
    let cell = PANEL + 2.0 * MARGIN;
    let mut s = String::new();
    svg_open(&mut s, cols as f64 * cell, rows as f64 * cell);
    for (idx, (scheme, paths)) in panels.iter().enumerate() {
        let ox = (idx % cols) as f64 * cell + MARGIN;
        let oy = (idx / cols) as f64 * cell + MARGIN;
        let map = |x: f64, y: f64| (ox + x * PANEL, oy + (1.0 - y) * PANEL);
        let _ = writeln!(s, r#"<g class="panel" data-scheme="{scheme}">"#);
        let _ = writeln!(
            s,
            r##"<rect x="{ox:.2}" y="{oy:.2}" width="{PANEL}" height="{PANEL}" fill="none" stroke="#333"/>"##
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">{scheme}</text>"#,
            ox + PANEL / 2.0,
            oy - 8.0
        );
        for (i, path) in paths.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            if path.len() == 1 {
                let (x, y) = map(path.points[0].x, path.points[0].y);
                let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="1.5" fill="{color}"/>"#);
                continue;
            }
            let pts: Vec<String> = path
                .points
                .iter()
                .map(|p| {
                    let (x, y) = map(p.x, p.y);
                    format!("{x:.2},{y:.2}")
                })
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="0.8" stroke-opacity="0.8"/>"#,
                pts.join(" ")
            );
            if let Some(h) = path.hive {
                let (x, y) = map(h.x, h.y);
                let _ = writeln!(
                    s,
                    r##"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="none" stroke="#000"/>"##
                );
            }
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}

/// Mean C2 (log scale) against m for one scheme: one curve per
/// (b, gamma, awareness) series. Invalid cells are skipped.
pub fn condition_plot_svg(scheme: Scheme, records: &[CellRecord]) -> String {
    let (w, h) = (560.0, 380.0);
    let (left, right, top, bottom) = (70.0, 170.0, 36.0, 50.0);
    let (pw, ph) = (w - left - right, h - top - bottom);

    let mut series: BTreeMap<(usize, u64, bool), Vec<(usize, f64)>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.scheme == scheme && r.is_valid()) {
        series
            .entry((r.b, r.gamma.to_bits(), r.aware))
            .or_default()
            .push((r.m, r.mean_cond));
    }
    for pts in series.values_mut() {
        pts.sort_by_key(|p| p.0);
    }
    let all: Vec<(usize, f64)> = series.values().flatten().copied().collect();
    let (m_lo, m_hi) = all
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.0 as f64), hi.max(p.0 as f64)));
    let (c_lo, c_hi) = all.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        (lo.min(p.1.log10()), hi.max(p.1.log10()))
    });
    let (dec_lo, dec_hi) = if all.is_empty() {
        (0.0, 1.0)
    } else {
        let lo = c_lo.floor();
        let hi = c_hi.ceil().max(lo + 1.0);
        (lo, hi)
    };
    let (m_lo, m_hi) = if all.is_empty() {
        (0.0, 1.0)
    } else if m_hi > m_lo {
        (m_lo, m_hi)
    } else {
        (m_lo - 1.0, m_hi + 1.0)
    };
    let xmap = |m: f64| left + (m - m_lo) / (m_hi - m_lo) * pw;
    let ymap = |c: f64| top + (1.0 - (c.log10() - dec_lo) / (dec_hi - dec_lo)) * ph;

    let mut s = String::new();
    svg_open(&mut s, w, h);
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="20" font-size="14" text-anchor="middle">{scheme}: mean condition number</text>"#,
        left + pw / 2.0
    );
    let _ = writeln!(
        s,
        r##"<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>"##
    );
    let mut decade = dec_lo;
    while decade <= dec_hi + 1e-9 {
        let y = ymap(10f64.powf(decade));
        let _ = writeln!(
            s,
            r##"<line x1="{left}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">1e{decade:.0}</text>"##,
            left + pw,
            left - 6.0,
            y + 4.0
        );
        decade += 1.0;
    }
    let mut ticks: Vec<usize> = all.iter().map(|p| p.0).collect();
    ticks.sort_unstable();
    ticks.dedup();
    for m in ticks {
        let x = xmap(m as f64);
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" font-size="11" text-anchor="middle">{m}</text>"#,
            top + ph + 16.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="middle">m</text>"#,
        left + pw / 2.0,
        h - 12.0
    );
    for (i, ((b, gamma_bits, aware), pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = pts
            .iter()
            .map(|&(m, c)| format!("{:.2},{:.2}", xmap(m as f64), ymap(c)))
            .collect();
        let _ = writeln!(
            s,
            r#"<g class="series"><polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            coords.join(" ")
        );
        for &(m, c) in pts {
            let _ = writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                xmap(m as f64),
                ymap(c)
            );
        }
        let ly = top + 14.0 + 16.0 * i as f64;
        let label = format!(
            "b={b} gamma={}{}",
            f64::from_bits(*gamma_bits),
            if *aware { "" } else { " unaware" }
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{ly:.1}" font-size="11" fill="{color}">{label}</text></g>"#,
            left + pw + 10.0
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{generate_paths, SchemeConfig};
    use crate::seed::rng_from_seed;

    #[test]
    fn trajectory_panels_per_scheme() {
        let mut rng = rng_from_seed(1);
        let panels: Vec<_> = [Scheme::Scattered, Scheme::BeeHive]
            .into_iter()
            .map(|s| (s, generate_paths(&SchemeConfig::new(s, 2, 5, 0.05), &mut rng).unwrap()))
            .collect();
        let svg = trajectory_svg(&panels);
        assert_eq!(svg.matches(r#"class="panel""#).count(), 2);
        assert_eq!(svg.matches("<polyline").count(), 5);
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn single_point_condition_plot() {
        let rec = CellRecord {
            scheme: Scheme::Scattered,
            b: 3,
            m: 196,
            gamma: 0.05,
            aware: true,
            mean_cond: 3.2,
            std_cond: 0.4,
            mean_rel_err: f64::NAN,
            excluded: 0,
        };
        let svg = condition_plot_svg(Scheme::Scattered, &[rec]);
        assert_eq!(svg.matches(r#"<circle"#).count(), 1);
        assert!(!svg.contains("NaN"));
    }
}
