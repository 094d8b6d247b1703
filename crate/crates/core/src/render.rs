//! Static SVG and ASCII pictures of framed triangulations and coherent graphs.
//!
//! Output is a pure function of the input, so identical calls give identical bytes.

use std::f64::consts::{PI, TAU};
use std::fmt::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coherent::CoherentGraph;
use crate::error::Error;
use crate::triangulation::{index_vector, FramedTriangulation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Svg,
    Ascii,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "svg" => Ok(Format::Svg),
            "ascii" => Ok(Format::Ascii),
            other => Err(Error::Parse(format!("unknown render format {other:?}, expected svg or ascii"))),
        }
    }
}

const SIZE: f64 = 400.0;
const CENTER: f64 = SIZE / 2.0;
const RADIUS: f64 = 140.0;
const NODE: f64 = 14.0;
const WEIGHT_FILL: &str = "#f4a261";
const PLAIN_FILL: &str = "#ffffff";

/// Point at `turn` (a fraction of a full turn, clockwise from the top) on a circle of radius `r`.
fn on_circle(turn: f64, r: f64) -> (f64, f64) {
    let a = TAU * turn - PI / 2.0;
    (CENTER + r * a.cos(), CENTER + r * a.sin())
}

fn svg_open(out: &mut String, title: &str) {
    writeln!(
        out,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}" font-family="sans-serif">
  <title>{}</title>
  <rect width="100%" height="100%" fill="white"/>"#,
        escape(title)
    )
    .unwrap();
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn node(out: &mut String, (x, y): (f64, f64), label: &str, fill: &str, dashed: bool) {
    let dash = if dashed { r#" stroke-dasharray="3 2""# } else { "" };
    writeln!(
        out,
        r#"  <circle cx="{x:.2}" cy="{y:.2}" r="{NODE}" fill="{fill}" stroke="black" stroke-width="1.5"{dash}/>
  <text x="{x:.2}" y="{y:.2}" font-size="13" text-anchor="middle" dominant-baseline="central">{}</text>"#,
        escape(label)
    )
    .unwrap();
}

/// Polygon with vertices on a circle, reading position 1 just clockwise of
/// the top and the hidden vertex (drawn dashed) at the top. Weights are filled.
pub fn triangulation_svg(ft: &FramedTriangulation) -> String {
    let t = ft.triangulation();
    let p = t.size();
    let idx = t.indices();
    let at = |v: usize| on_circle(ft.position_of(v) as f64 / p as f64, RADIUS);
    let mut out = String::new();
    svg_open(&mut out, &index_vector(ft).to_string());

    let outline: Vec<String> = (1..=p).map(|pos| {
        let (x, y) = on_circle(pos as f64 / p as f64, RADIUS);
        format!("{x:.2},{y:.2}")
    }).collect();
    writeln!(out, r#"  <polygon points="{}" fill="none" stroke="black" stroke-width="2"/>"#, outline.join(" ")).unwrap();
    for &(a, b) in t.diagonals() {
        let ((x1, y1), (x2, y2)) = (at(a), at(b));
        writeln!(out, r##"  <line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="#555555" stroke-width="1.5"/>"##).unwrap();
    }
    for pos in 1..=p {
        let v = ft.vertex_at(pos);
        let fill = if idx[v] > 2 { WEIGHT_FILL } else { PLAIN_FILL };
        node(&mut out, on_circle(pos as f64 / p as f64, RADIUS), &idx[v].to_string(), fill, pos == p);
        let (x, y) = on_circle(pos as f64 / p as f64, RADIUS + 30.0);
        writeln!(
            out,
            r##"  <text x="{x:.2}" y="{y:.2}" font-size="10" fill="#777777" text-anchor="middle" dominant-baseline="central">{pos}</text>"##
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

/// The cycle `x_1 - y_1 - x_2 - ... - x_n - y_n - x_1` with weights on nodes and labels on edges.
pub fn coherent_graph_svg(g: &CoherentGraph) -> String {
    let n = g.n();
    let mut out = String::new();
    let title: Vec<String> = g.weights.iter().zip(&g.labels).map(|(x, y)| format!("{x}-({y})")).collect();
    svg_open(&mut out, &title.join("-"));
    let turn = |i: usize| i as f64 / n as f64;

    for i in 0..n {
        let (x1, y1) = on_circle(turn(i), RADIUS);
        let mid = turn(i) + 0.5 / n as f64;
        if n == 1 {
            let (cx, cy) = on_circle(0.0, RADIUS - 40.0);
            writeln!(out, r#"  <circle cx="{cx:.2}" cy="{cy:.2}" r="40" fill="none" stroke="black" stroke-width="1.5"/>"#).unwrap();
        } else {
            let (x2, y2) = on_circle(turn(i + 1), RADIUS);
            let (qx, qy) = on_circle(mid, RADIUS * if n == 2 { 1.3 } else { 1.0 });
            writeln!(
                out,
                r#"  <path d="M {x1:.2} {y1:.2} Q {qx:.2} {qy:.2} {x2:.2} {y2:.2}" fill="none" stroke="black" stroke-width="1.5"/>"#
            )
            .unwrap();
        }
        let (lx, ly) = if n == 1 { on_circle(0.5, 20.0) } else { on_circle(mid, RADIUS * if n == 2 { 1.3 } else { 1.0 } + 12.0) };
        writeln!(
            out,
            r##"  <text x="{lx:.2}" y="{ly:.2}" font-size="12" fill="#1d3557" text-anchor="middle" dominant-baseline="central">y{}={}</text>"##,
            i + 1,
            g.labels[i]
        )
        .unwrap();
    }
    for (i, x) in g.weights.iter().enumerate() {
        node(&mut out, on_circle(turn(i), RADIUS), &x.to_string(), WEIGHT_FILL, false);
        let (tx, ty) = on_circle(turn(i), RADIUS - 28.0);
        writeln!(
            out,
            r##"  <text x="{tx:.2}" y="{ty:.2}" font-size="10" fill="#777777" text-anchor="middle" dominant-baseline="central">x{}</text>"##,
            i + 1
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

/// A vertex table followed by one arc row per diagonal, in reading positions.
///
/// ```text
/// [1,2,2,1|3]  p=5
/// pos     1  2  3  4  5
/// index   1  2  2  1 3*
/// arc     .  .  +-----+
/// arc     .  +--------+
/// ```
pub fn triangulation_ascii(ft: &FramedTriangulation) -> String {
    let t = ft.triangulation();
    let p = t.size();
    let idx = t.indices();
    let width = (1..=p)
        .map(|pos| {
            let i = idx[ft.vertex_at(pos)];
            (i.to_string().len() + usize::from(i > 2)).max(pos.to_string().len())
        })
        .max()
        .unwrap_or(1);
    let cell = |s: String| format!("{s:>width$}");
    let mut out = format!("{}  p={p}\n", index_vector(ft));
    let row = |label: &str, cells: Vec<String>| format!("{label:<7}{}\n", cells.join(" ").trim_end());
    out += &row("pos", (1..=p).map(|pos| cell(pos.to_string())).collect());
    out += &row(
        "index",
        (1..=p)
            .map(|pos| {
                let v = ft.vertex_at(pos);
                let mark = if idx[v] > 2 { "*" } else { "" };
                cell(format!("{}{mark}", idx[v]))
            })
            .collect(),
    );
    let mut arcs: Vec<(usize, usize)> = t
        .diagonals()
        .iter()
        .map(|&(a, b)| {
            let (i, j) = (ft.position_of(a), ft.position_of(b));
            (i.min(j), i.max(j))
        })
        .collect();
    arcs.sort_by_key(|&(i, j)| (j - i, i));
    // column `pos` ends at character (pos - 1) * (width + 1) + width - 1
    let edge = |pos: usize| (pos - 1) * (width + 1) + width - 1;
    for (i, j) in arcs {
        let mut line = vec![' '; edge(p) + 1];
        for pos in 1..=p {
            line[edge(pos)] = '.';
        }
        line[edge(i)..=edge(j)].fill('-');
        line[edge(i)] = '+';
        line[edge(j)] = '+';
        out += &format!("{:<7}{}\n", "arc", line.iter().collect::<String>());
    }
    out += "(* weight; position p is the hidden vertex)\n";
    out
}

/// One line: `x1=7 -y1=0- x2=3 -y2=2- ... -yn=..- x1`.
pub fn coherent_graph_ascii(g: &CoherentGraph) -> String {
    let mut out = String::new();
    for (i, (x, y)) in g.weights.iter().zip(&g.labels).enumerate() {
        write!(out, "x{}={x} -y{}={y}- ", i + 1, i + 1).unwrap();
    }
    out += "x1\n";
    out
}

pub fn render_triangulation(ft: &FramedTriangulation, format: Format) -> String {
    match format {
        Format::Svg => triangulation_svg(ft),
        Format::Ascii => triangulation_ascii(ft),
    }
}

pub fn render_coherent_graph(g: &CoherentGraph, format: Format) -> String {
    match format {
        Format::Svg => coherent_graph_svg(g),
        Format::Ascii => coherent_graph_ascii(g),
    }
}
