//! ASCII and SVG drawings of regions, towers and reception.
//!
//! Both renderers place vertex `(m, n)` at `x = m − n/2`, `y = n·√3/2`
//! with `y` pointing up, so row `n` is drawn above row `n − 1`. Output is a
//! pure function of the [`RenderSpec`].

use std::fmt::Write;

use crate::broadcast::{reception, BroadcastSet, Params};
use crate::lattice::{LatticePoint, MatchstickRegion, Window, DIRECTIONS};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RenderRegion {
    Matchstick(MatchstickRegion),
    /// The core of the window; the margin is not drawn.
    Window(Window),
}

impl RenderRegion {
    fn points(&self) -> Vec<LatticePoint> {
        match self {
            RenderRegion::Matchstick(r) => r.points().to_vec(),
            RenderRegion::Window(w) => w.core_points(),
        }
    }

    fn contains(&self, p: LatticePoint) -> bool {
        match self {
            RenderRegion::Matchstick(r) => r.contains(p),
            RenderRegion::Window(w) => w.core_contains(p),
        }
    }

    fn boundary(&self) -> Vec<LatticePoint> {
        match self {
            RenderRegion::Matchstick(r) => {
                let [a, b, c] = r.corners();
                vec![a, c, b]
            }
            RenderRegion::Window(w) => {
                let l = i64::from(w.half_width);
                [(-l, -l), (l, -l), (l, l), (-l, l)]
                    .into_iter()
                    .map(|(m, n)| w.center + LatticePoint::new(m, n))
                    .collect()
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ShowFlags {
    pub reception_values: bool,
    pub reach_hexagons: bool,
    pub boundary: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenderSpec {
    pub region: RenderRegion,
    pub towers: BroadcastSet,
    pub params: Params,
    pub show: ShowFlags,
}

/// One line per lattice row, top row first, odd half-cells shifting rows
/// the way the grid is sheared.
///
/// Vertices are `.` and towers `T`; with reception values on, vertices show
/// their reception and towers show it in brackets.
pub fn render_ascii(spec: &RenderSpec) -> String {
    let points = spec.region.points();
    let Some(first) = points.first() else {
        return String::new();
    };
    let t = spec.params.t();
    let token = |p: LatticePoint| {
        let tower = spec.towers.contains(&p);
        match (spec.show.reception_values, tower) {
            (false, false) => ".".to_string(),
            (false, true) => "T".to_string(),
            (true, false) => reception(p, &spec.towers, t).to_string(),
            (true, true) => format!("[{}]", reception(p, &spec.towers, t)),
        }
    };
    let tokens: Vec<String> = points.iter().map(|p| token(*p)).collect();
    let width = tokens.iter().map(String::len).max().unwrap_or(1);
    let half = width.div_ceil(2).max(1);
    // twice the x coordinate
    let x2 = |p: &LatticePoint| 2 * p.m - p.n;
    let min_x2 = points.iter().map(x2).min().unwrap_or(0);
    let (lo, hi) = points.iter().fold((first.n, first.n), |(lo, hi), p| (lo.min(p.n), hi.max(p.n)));

    let mut out = String::new();
    for row in (lo..=hi).rev() {
        let mut line = String::new();
        for (p, tok) in points.iter().zip(&tokens).filter(|(p, _)| p.n == row) {
            let col = (x2(p) - min_x2) as usize * half;
            let end = col + width;
            if line.len() < end {
                line.push_str(&" ".repeat(end - line.len()));
            }
            let start = col + (width - tok.len()) / 2;
            line.replace_range(start..start + tok.len(), tok);
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn fmt_point(p: LatticePoint) -> (String, String) {
    let (x, y) = p.cartesian();
    (format!("{x:.4}"), format!("{:.4}", -y))
}

/// Standalone SVG 1.1 document in unit edge lengths.
pub fn render_svg(spec: &RenderSpec) -> String {
    let t = spec.params.t();
    let points = spec.region.points();
    let reach = i64::from(t) - 1;

    let mut extent: Vec<LatticePoint> = points.clone();
    extent.extend(spec.towers.iter().copied());
    if spec.show.reach_hexagons {
        for s in spec.towers.iter() {
            extent.extend(DIRECTIONS.iter().map(|d| *s + reach * *d));
        }
    }
    let xs = extent.iter().map(|p| p.cartesian());
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for (x, y) in xs {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(-y);
        y1 = y1.max(-y);
    }
    if extent.is_empty() {
        (x0, y0, x1, y1) = (0.0, 0.0, 0.0, 0.0);
    }
    let pad = 1.0;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{:.4} {:.4} {:.4} {:.4}" width="{:.4}" height="{:.4}">"#,
        x0 - pad,
        y0 - pad,
        x1 - x0 + 2.0 * pad,
        y1 - y0 + 2.0 * pad,
        40.0 * (x1 - x0 + 2.0 * pad),
        40.0 * (y1 - y0 + 2.0 * pad),
    );
    let _ = writeln!(s, r#"<title>({}, {}) broadcast</title>"#, t, spec.params.r());

    let _ = writeln!(s, r##"<g class="edges" stroke="#999999" stroke-width="0.03">"##);
    for p in &points {
        for d in &DIRECTIONS[..3] {
            let q = *p + *d;
            if spec.region.contains(q) {
                let ((ax, ay), (bx, by)) = (fmt_point(*p), fmt_point(q));
                let _ = writeln!(s, r#"<line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}"/>"#);
            }
        }
    }
    let _ = writeln!(s, "</g>");

    if spec.show.boundary {
        let pts: Vec<String> = spec
            .region
            .boundary()
            .into_iter()
            .map(|p| {
                let (x, y) = fmt_point(p);
                format!("{x},{y}")
            })
            .collect();
        let _ = writeln!(
            s,
            r##"<polygon class="boundary" points="{}" fill="none" stroke="#000000" stroke-width="0.06"/>"##,
            pts.join(" ")
        );
    }

    if spec.show.reach_hexagons && reach > 0 {
        let _ = writeln!(s, r##"<g class="reach" fill="none" stroke="#3366cc" stroke-width="0.04">"##);
        for tower in spec.towers.iter() {
            let pts: Vec<String> = DIRECTIONS
                .iter()
                .map(|d| {
                    let (x, y) = fmt_point(*tower + reach * *d);
                    format!("{x},{y}")
                })
                .collect();
            let _ = writeln!(s, r#"<polygon points="{}"/>"#, pts.join(" "));
        }
        let _ = writeln!(s, "</g>");
    }

    let _ = writeln!(s, r##"<g class="vertices" fill="#555555">"##);
    for p in points.iter().filter(|p| !spec.towers.contains(p)) {
        let (x, y) = fmt_point(*p);
        let _ = writeln!(s, r#"<circle cx="{x}" cy="{y}" r="0.0800"/>"#);
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r##"<g class="towers" fill="#cc2222">"##);
    for p in spec.towers.iter() {
        let (x, y) = fmt_point(*p);
        let _ = writeln!(s, r#"<circle cx="{x}" cy="{y}" r="0.2500"/>"#);
    }
    let _ = writeln!(s, "</g>");

    if spec.show.reception_values {
        let _ = writeln!(
            s,
            r##"<g class="reception" font-family="monospace" font-size="0.3000" text-anchor="middle" fill="#000000">"##
        );
        for p in &points {
            let (x, y) = p.cartesian();
            let v = reception(*p, &spec.towers, t);
            let _ = writeln!(s, r#"<text x="{x:.4}" y="{:.4}">{v}</text>"#, -y - 0.15);
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}
