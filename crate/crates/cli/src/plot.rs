//! SVG and CSV output of the gap function, its envelope and Upsilon.
//!
//! Data are exact; SVG coordinates are printed with six decimals and are
//! for display only. The gap function and the envelope share one panel,
//! Upsilon gets its own panel below.

use std::fmt::Write as _;
use std::str::FromStr;

use num_traits::ToPrimitive;
use upsilon_core::gapfn::GapFunction;
use upsilon_core::plmath::{format_rational, int, Rational};

use crate::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Layer {
    GapFn,
    Hull,
    Upsilon,
}

impl FromStr for Layer {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "gapfn" => Ok(Layer::GapFn),
            "hull" => Ok(Layer::Hull),
            "upsilon" => Ok(Layer::Upsilon),
            other => Err(CliError::Usage(format!("unknown plot layer {other:?}, expected gapfn, hull or upsilon"))),
        }
    }
}

pub fn parse_layers(s: &str) -> Result<Vec<Layer>> {
    let mut layers = s.split(',').filter(|p| !p.trim().is_empty()).map(Layer::from_str).collect::<Result<Vec<_>>>()?;
    layers.sort();
    layers.dedup();
    if layers.is_empty() {
        return Err(CliError::Usage("no plot layers given".into()));
    }
    Ok(layers)
}

type Points = Vec<(Rational, Rational)>;

/// Exact polyline data for one layer.
pub fn layer_points(f: &GapFunction, layer: Layer) -> Points {
    let g = f.genus() as i64;
    let (lo, hi) = (-g - 2, g + 2);
    match layer {
        Layer::GapFn => (lo..=hi).map(|x| (int(x), int(f.value_at(x)))).collect(),
        Layer::Hull => {
            let h = f.hull();
            let mut pts = vec![(int(lo), h.eval(&int(lo)).expect("total"))];
            pts.extend(h.vertices().iter().cloned());
            pts.push((int(hi), h.eval(&int(hi)).expect("total")));
            pts
        }
        Layer::Upsilon => f.upsilon().vertices().to_vec(),
    }
}

pub fn csv(f: &GapFunction, layers: &[Layer]) -> String {
    let mut out = String::from("layer,x,y\n");
    for &layer in layers {
        let name = match layer {
            Layer::GapFn => "gapfn",
            Layer::Hull => "hull",
            Layer::Upsilon => "upsilon",
        };
        for (x, y) in layer_points(f, layer) {
            let _ = writeln!(out, "{name},{},{}", format_rational(&x), format_rational(&y));
        }
    }
    out
}

const WIDTH: f64 = 640.0;
const PANEL: f64 = 400.0;
const MARGIN: f64 = 40.0;

struct Frame {
    top: f64,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        self.top + PANEL - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (PANEL - 2.0 * MARGIN)
    }

    fn axes(&self, out: &mut String) {
        let (ax, ay) = (self.px(0.0f64.clamp(self.x0, self.x1)), self.py(0.0f64.clamp(self.y0, self.y1)));
        let _ = writeln!(
            out,
            r#"<line x1="{:.6}" y1="{ay:.6}" x2="{:.6}" y2="{ay:.6}" stroke="gray"/>"#,
            self.px(self.x0),
            self.px(self.x1)
        );
        let _ = writeln!(
            out,
            r#"<line x1="{ax:.6}" y1="{:.6}" x2="{ax:.6}" y2="{:.6}" stroke="gray"/>"#,
            self.py(self.y0),
            self.py(self.y1)
        );
        for x in self.x0.ceil() as i64..=self.x1.floor() as i64 {
            let px = self.px(x as f64);
            let _ = writeln!(
                out,
                r#"<line x1="{px:.6}" y1="{:.6}" x2="{px:.6}" y2="{:.6}" stroke="gray"/>"#,
                ay - 3.0,
                ay + 3.0
            );
        }
        for y in self.y0.ceil() as i64..=self.y1.floor() as i64 {
            let py = self.py(y as f64);
            let _ = writeln!(
                out,
                r#"<line x1="{:.6}" y1="{py:.6}" x2="{:.6}" y2="{py:.6}" stroke="gray"/>"#,
                ax - 3.0,
                ax + 3.0
            );
        }
    }

    fn polyline(&self, out: &mut String, pts: &[(f64, f64)], style: &str) {
        let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.6},{:.6}", self.px(x), self.py(y))).collect();
        let _ = writeln!(out, r#"<polyline fill="none" stroke="black" {style} points="{}"/>"#, coords.join(" "));
    }
}

fn to_f64(points: &Points) -> Vec<(f64, f64)> {
    points.iter().map(|(x, y)| (x.to_f64().unwrap_or(0.0), y.to_f64().unwrap_or(0.0))).collect()
}

fn bounds(series: &[Vec<(f64, f64)>]) -> (f64, f64, f64, f64) {
    let all = series.iter().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x1 - x0 < 1.0 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1.0 {
        y0 = y1 - 1.0;
    }
    (x0, x1, y0, y1)
}

pub fn svg(f: &GapFunction, layers: &[Layer], title: &str) -> String {
    let upper: Vec<Layer> = layers.iter().copied().filter(|l| *l != Layer::Upsilon).collect();
    let with_upsilon = layers.contains(&Layer::Upsilon);
    let panels = usize::from(!upper.is_empty()) + usize::from(with_upsilon);
    let height = PANEL * panels as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}">"#
    );
    let _ = writeln!(out, "<title>{}</title>", escape(title));
    let mut top = 0.0;
    if !upper.is_empty() {
        let series: Vec<Vec<(f64, f64)>> = upper.iter().map(|&l| to_f64(&layer_points(f, l))).collect();
        let (x0, x1, y0, y1) = bounds(&series);
        let frame = Frame { top, x0, x1, y0, y1 };
        frame.axes(&mut out);
        for (layer, pts) in upper.iter().zip(&series) {
            let style = if *layer == Layer::Hull { r#"stroke-dasharray="6,4""# } else { r#"stroke-width="2""# };
            frame.polyline(&mut out, pts, style);
        }
        top += PANEL;
    }
    if with_upsilon {
        let pts = to_f64(&layer_points(f, Layer::Upsilon));
        let (x0, x1, y0, y1) = bounds(std::slice::from_ref(&pts));
        let frame = Frame { top, x0, x1, y0, y1 };
        frame.axes(&mut out);
        frame.polyline(&mut out, &pts, r#"stroke-width="2""#);
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use upsilon_core::gapfn::gap_function;
    use upsilon_core::knotform::FormalSemigroup;

    #[test]
    fn unknot_is_two_rays() {
        let f = gap_function(&FormalSemigroup::from_gaps(vec![]).unwrap());
        let hull = layer_points(&f, Layer::Hull);
        assert_eq!(hull, vec![(int(-2), int(0)), (int(0), int(0)), (int(2), int(4))]);
    }

    #[test]
    fn layers_parse_and_sort() {
        assert_eq!(parse_layers("hull,gapfn").unwrap(), vec![Layer::GapFn, Layer::Hull]);
        assert!(parse_layers("foo").is_err());
        assert!(parse_layers("").is_err());
    }

    #[test]
    fn svg_is_deterministic() {
        let f = gap_function(&FormalSemigroup::from_gaps(vec![1, 2, 4, 6, 9]).unwrap());
        let layers = parse_layers("gapfn,hull,upsilon").unwrap();
        let a = svg(&f, &layers, "pretzel <-2,3,7>");
        assert_eq!(a, svg(&f, &layers, "pretzel <-2,3,7>"));
        assert_eq!(a.matches("<polyline").count(), 3);
        assert!(a.contains("stroke-dasharray"));
        assert!(a.contains("&lt;-2,3,7&gt;"));
    }

    #[test]
    fn csv_rows_are_exact() {
        let f = gap_function(&FormalSemigroup::from_gaps(vec![1, 2, 5]).unwrap());
        let c = csv(&f, &[Layer::Upsilon]);
        assert_eq!(c, "layer,x,y\nupsilon,0,0\nupsilon,2/3,-2\nupsilon,4/3,-2\nupsilon,2,0\n");
    }
}
