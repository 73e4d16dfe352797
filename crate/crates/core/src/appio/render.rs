//! Deterministic SVG pictures of multicurves. Every coordinate is an exact
//! rational rounded to three decimals, and elements are emitted in a fixed
//! order, so the same input always gives the same bytes.

use std::fmt::Write;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cabling::{cable_geometric, check_params, tile};
use crate::error::{CurveError, Result};
use crate::geometry::{cable_shift, q, Multicurve, PLCurve, Point, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum View {
    Cylinder,
    Plane,
    Tiling,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderOptions {
    pub view: View,
    /// Columns of the plane shown (the cylinder view always shows one).
    pub columns: u32,
    /// Pixels per unit.
    pub scale: u32,
    /// Adds the lifted, staggered and cabled panels; needs `cable`.
    pub stages: bool,
    /// Draws each local system as parallel strands.
    pub local_systems: bool,
    pub cable: Option<(i64, i64)>,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self { view: View::Cylinder, columns: 1, scale: 40, stages: false, local_systems: true, cable: None }
    }
}

impl RenderOptions {
    pub fn validate(&self) -> Result<()> {
        if self.scale == 0 || self.columns == 0 {
            return Err(CurveError::InvalidParams("scale and columns must be positive".into()));
        }
        if (self.stages || self.view == View::Tiling) && self.cable.is_none() {
            return Err(CurveError::InvalidParams("tiling and stages need cable parameters".into()));
        }
        if let Some((p, q)) = self.cable {
            check_params(p, q)?;
        }
        Ok(())
    }
}

const PALETTE: [&str; 6] = ["#c0392b", "#2471a3", "#1e8449", "#7d3c98", "#b9770e", "#566573"];
const MARGIN: i64 = 12;

/// Fixed-precision decimal for a rational.
fn dec(x: Q) -> String {
    let milli = (x * Q::from_integer(1000)).round().to_integer();
    let (sign, m) = if milli < 0 { ("-", -milli) } else { ("", milli) };
    let (int, frac) = (m / 1000, m % 1000);
    if frac == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{}", format!("{frac:03}").trim_end_matches('0'))
    }
}

/// A rectangular window of the plane drawn at a pixel offset.
struct Panel {
    x0: Q,
    x1: Q,
    y0: Q,
    y1: Q,
    scale: Q,
    /// Vertical pixels per unit, when different from `scale`.
    yscale: Option<Q>,
    left: i64,
    top: i64,
}

impl Panel {
    fn width(&self) -> i64 {
        ((self.x1 - self.x0) * self.scale).ceil().to_integer() as i64
    }

    fn height(&self) -> i64 {
        ((self.y1 - self.y0) * self.ys()).ceil().to_integer() as i64
    }

    fn ys(&self) -> Q {
        self.yscale.unwrap_or(self.scale)
    }

    fn px(&self, p: Point) -> (String, String) {
        let x = (p.x - self.x0) * self.scale + Q::from_integer(self.left as i128);
        let y = (self.y1 - p.y) * self.ys() + Q::from_integer(self.top as i128);
        (dec(x), dec(y))
    }
}

struct Svg {
    body: String,
    clips: usize,
}

impl Svg {
    fn open_panel(&mut self, panel: &Panel, title: &str) {
        let id = self.clips;
        self.clips += 1;
        let (w, h) = (panel.width(), panel.height());
        let _ = writeln!(
            self.body,
            "<clipPath id=\"clip{id}\"><rect x=\"{}\" y=\"{}\" width=\"{w}\" height=\"{h}\"/></clipPath>",
            panel.left, panel.top
        );
        let _ = writeln!(self.body, "<g clip-path=\"url(#clip{id})\">");
        let _ = writeln!(
            self.body,
            "<rect x=\"{}\" y=\"{}\" width=\"{w}\" height=\"{h}\" fill=\"#ffffff\" stroke=\"#000000\"/>",
            panel.left, panel.top
        );
        if !title.is_empty() {
            let _ = writeln!(
                self.body,
                "<text x=\"{}\" y=\"{}\" font-size=\"10\" font-family=\"monospace\">{title}</text>",
                panel.left + 3,
                panel.top + 11
            );
        }
    }

    fn close_panel(&mut self) {
        self.body.push_str("</g>\n");
    }

    fn grid(&mut self, panel: &Panel, pegs: &[(i64, i64)]) {
        let lo = panel.x0.ceil().to_integer() as i64;
        let hi = panel.x1.floor().to_integer() as i64;
        for m in lo..=hi {
            let (x, y0) = panel.px(Point::new(q(m), panel.y0));
            let (_, y1) = panel.px(Point::new(q(m), panel.y1));
            let _ = writeln!(
                self.body,
                "<line x1=\"{x}\" y1=\"{y0}\" x2=\"{x}\" y2=\"{y1}\" stroke=\"#bbbbbb\" stroke-dasharray=\"3 3\"/>"
            );
        }
        for &(x, y) in pegs {
            let (cx, cy) = panel.px(Point::new(q(x), q(y)));
            let _ = writeln!(self.body, "<circle cx=\"{cx}\" cy=\"{cy}\" r=\"2.5\" fill=\"#000000\"/>");
        }
    }

    fn polyline(&mut self, panel: &Panel, pts: &[Point], colour: &str, closed: bool) {
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let (x, y) = panel.px(*p);
            let _ = write!(d, "{}{x} {y}", if i == 0 { "M" } else { " L" });
        }
        if closed {
            d.push_str(" Z");
        }
        let _ = writeln!(
            self.body,
            "<path d=\"{d}\" fill=\"none\" stroke=\"{colour}\" stroke-width=\"1.5\" stroke-linejoin=\"round\"/>"
        );
    }

    /// Draws every translate of `c` by whole columns that meets the panel.
    fn curve(&mut self, panel: &Panel, c: &PLCurve, colour: &str, strands: usize) {
        if c.is_empty() {
            return;
        }
        let lo = panel.x0.floor().to_integer() as i64 - 2;
        let hi = panel.x1.ceil().to_integer() as i64 + 1;
        let closed = c.period == (0, 0);
        let mut pts = c.waypoints.clone();
        if !closed {
            pts.push(c.waypoints[0].shift(c.period.0, c.period.1));
        }
        let reach = c.period.0.abs().max(1);
        for strand in 0..strands {
            let dy = Q::new(strand as i128, 8);
            for j in (lo - reach)..=hi {
                let moved: Vec<Point> =
                    pts.iter().map(|p| Point::new(p.x + q(j), p.y + dy)).collect();
                self.polyline(panel, &moved, colour, closed);
            }
        }
    }
}

fn bounds(curves: &[PLCurve]) -> (Q, Q) {
    let ys = curves.iter().flat_map(|c| c.waypoints.iter().map(|p| p.y));
    let (lo, hi) = ys.fold((Q::zero(), Q::zero()), |(lo, hi), y| (lo.min(y), hi.max(y)));
    (lo.floor() - Q::from_integer(1), hi.ceil() + Q::from_integer(1))
}

fn pegs_in(x0: Q, x1: Q, y0: Q, y1: Q) -> Vec<(i64, i64)> {
    let xs = x0.ceil().to_integer() as i64..=x1.floor().to_integer() as i64;
    let ys = y0.ceil().to_integer() as i64..=y1.floor().to_integer() as i64;
    xs.flat_map(|x| ys.clone().map(move |y| (x, y))).collect()
}

fn draw_multicurve(svg: &mut Svg, panel: &Panel, k: &Multicurve, local_systems: bool) {
    for (i, c) in k.components().enumerate() {
        let strands = if local_systems { c.dim() } else { 1 };
        svg.curve(panel, &c.curve(), PALETTE[i % PALETTE.len()], strands);
    }
}

fn plane_panel(k: &Multicurve, columns: i64, scale: Q, left: i64, top: i64) -> Panel {
    let curves: Vec<PLCurve> = k.components().map(|c| c.curve()).collect();
    let (y0, y1) = bounds(&curves);
    Panel {
        x0: -crate::geometry::half(),
        x1: q(columns) - crate::geometry::half(),
        y0,
        y1,
        scale,
        yscale: None,
        left,
        top,
    }
}

/// Renders `k`. With `stages`, `k` is the companion and three more panels
/// follow: `p` columns of `k`, the copies staggered by `q`, and the cable.
pub fn render_svg(k: &Multicurve, opts: &RenderOptions) -> Result<String> {
    opts.validate()?;
    let scale = Q::from_integer(opts.scale as i128);
    let columns = match opts.view {
        View::Cylinder => 1,
        _ => opts.columns as i64,
    };
    let mut svg = Svg { body: String::new(), clips: 0 };
    let main = plane_panel(k, columns, scale, MARGIN, MARGIN);
    let mut width = main.width() + 2 * MARGIN;
    let mut height = main.height() + 2 * MARGIN;

    let title = match opts.view {
        View::Cylinder => "cylinder",
        View::Plane => "plane",
        View::Tiling => "tiling",
    };
    svg.open_panel(&main, title);
    svg.grid(&main, &pegs_in(main.x0, main.x1, main.y0, main.y1));
    if let (View::Tiling, Some((p, qq))) = (opts.view, opts.cable) {
        let t = tile(p, qq)?;
        let lo = main.y0.floor().to_integer() as i64 / p - 2;
        let hi = main.y1.ceil().to_integer() as i64 / p + 2;
        for i in -1..=columns {
            for j in lo..=hi {
                let pts: Vec<Point> = t.outline.iter().map(|pt| pt.shift(i, j * p)).collect();
                svg.polyline(&main, &pts, "#999999", true);
            }
        }
    }
    draw_multicurve(&mut svg, &main, k, opts.local_systems);
    if opts.view == View::Cylinder {
        // the two edges of the strip are glued
        for x in [main.x0, main.x1] {
            let (px, y0) = main.px(Point::new(x, main.y0));
            let (_, y1) = main.px(Point::new(x, main.y1));
            let _ = writeln!(
                svg.body,
                "<line x1=\"{px}\" y1=\"{y0}\" x2=\"{px}\" y2=\"{y1}\" stroke=\"#000000\" stroke-width=\"3\" stroke-dasharray=\"8 4\"/>"
            );
        }
    }
    svg.close_panel();

    if let (true, Some((p, qq))) = (opts.stages, opts.cable) {
        let mut top = height;
        // p columns of the companion
        let lifted = plane_panel(k, p, scale, MARGIN, top);
        svg.open_panel(&lifted, &format!("{p} copies"));
        svg.grid(&lifted, &pegs_in(lifted.x0, lifted.x1, lifted.y0, lifted.y1));
        draw_multicurve(&mut svg, &lifted, k, opts.local_systems);
        svg.close_panel();
        width = width.max(lifted.width() + 2 * MARGIN);
        top += lifted.height() + MARGIN;

        // copy j stretched by p and lowered by qj
        let shift = cable_shift(p, qq);
        let stagger = |pt: Point, j: i64| Point::new(pt.x + q(j), pt.y * q(p) - q(qq * j - shift));
        let comps: Vec<PLCurve> = k.components().map(|c| c.curve()).collect();
        let copies: Vec<(usize, i64, Vec<Point>, bool)> = comps
            .iter()
            .enumerate()
            .flat_map(|(i, c)| {
                let closed = c.period == (0, 0);
                let mut pts = c.waypoints.clone();
                if !closed && !pts.is_empty() {
                    pts.push(c.waypoints[0].shift(c.period.0, c.period.1));
                }
                (0..p).map(move |j| (i, j, pts.iter().map(|&pt| stagger(pt, j)).collect(), closed))
            })
            .collect();
        let ys = copies.iter().flat_map(|(_, _, pts, _)| pts.iter().map(|pt| pt.y));
        let (ylo, yhi) = ys.fold((Q::zero(), Q::zero()), |(lo, hi), y| (lo.min(y), hi.max(y)));
        let staggered = Panel {
            x0: -crate::geometry::half(),
            x1: q(p) - crate::geometry::half(),
            y0: ylo.floor() - Q::from_integer(1),
            y1: yhi.ceil() + Q::from_integer(1),
            scale,
            yscale: Some(scale / Q::from_integer(p as i128)),
            left: MARGIN,
            top,
        };
        svg.open_panel(&staggered, "staggered");
        let pegs: Vec<(i64, i64)> = (0..p)
            .flat_map(|j| {
                let lo = ((staggered.y0 + q(qq * j - shift)) / q(p)).ceil().to_integer() as i64;
                let hi = ((staggered.y1 + q(qq * j - shift)) / q(p)).floor().to_integer() as i64;
                (lo..=hi).map(move |n| (j, p * n - qq * j + shift))
            })
            .collect();
        svg.grid(&staggered, &pegs);
        for (i, _, pts, closed) in &copies {
            if !pts.is_empty() {
                svg.polyline(&staggered, pts, PALETTE[i % PALETTE.len()], *closed);
            }
        }
        svg.close_panel();
        width = width.max(staggered.width() + 2 * MARGIN);
        top += staggered.height() + MARGIN;

        let cable = cable_geometric(k, p, qq)?.curve;
        let out = plane_panel(&cable, 1, scale, MARGIN, top);
        svg.open_panel(&out, &format!("({p},{qq}) cable"));
        svg.grid(&out, &pegs_in(out.x0, out.x1, out.y0, out.y1));
        draw_multicurve(&mut svg, &out, &cable, opts.local_systems);
        svg.close_panel();
        width = width.max(out.width() + 2 * MARGIN);
        height = top + out.height() + MARGIN;
    }

    let mut doc = String::new();
    doc.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        doc,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    doc.push_str(&svg.body);
    doc.push_str("</svg>\n");
    Ok(doc)
}
