//! Deterministic emitters. Identical configuration must give byte-identical
//! CSV and JSON, so floats use a fixed 17-significant-digit scientific form
//! and every ordering is fixed upstream. The SVG is a pure function of the
//! row list: no timestamps, no external references.

use crate::{CliError, ParamArgs, Problem};
use serde::Serialize;
use spectraltie_core::os_spectrum::{CurveSample, Side};
use spectraltie_core::{Eigenvalue, ProblemParams};
use std::path::PathBuf;

fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

fn side_str(s: Side) -> &'static str {
    match s {
        Side::Plus => "plus",
        Side::Minus => "minus",
    }
}

pub fn write_out(path: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Numerical(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn eigen_csv(rows: &[Eigenvalue]) -> String {
    let mut out = String::from("re,im,method,index,residual,resolved\n");
    for r in rows {
        let index = r.index.map(|k| k.to_string()).unwrap_or_default();
        let resolved = r.resolved.map(|b| b.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{index},{},{resolved}\n",
            fmt_f(r.value.re),
            fmt_f(r.value.im),
            r.method,
            fmt_f(r.residual),
        ));
    }
    out
}

pub fn curve_csv(rows: &[CurveSample]) -> String {
    let mut out = String::from("t,gamma,re,im,side\n");
    for s in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_f(s.t),
            fmt_f(s.gamma),
            fmt_f(s.lambda.re),
            fmt_f(s.lambda.im),
            side_str(s.side),
        ));
    }
    out
}

#[derive(Serialize)]
struct JsonParams {
    problem: &'static str,
    eps: f64,
    alpha: f64,
    theta: f64,
    reynolds: f64,
}

#[derive(Serialize)]
struct JsonEigen {
    re: f64,
    im: f64,
    method: String,
    index: Option<i64>,
    residual: f64,
}

#[derive(Serialize)]
struct JsonCurve {
    t: f64,
    gamma: f64,
    re: f64,
    im: f64,
    side: &'static str,
}

#[derive(Serialize)]
struct JsonOut {
    params: JsonParams,
    eigenvalues: Vec<JsonEigen>,
    curves: Vec<JsonCurve>,
}

pub fn json_output(
    p: &ProblemParams,
    args: &ParamArgs,
    rows: &[Eigenvalue],
    curves: &[CurveSample],
) -> String {
    let doc = JsonOut {
        params: JsonParams {
            problem: match args.problem {
                Problem::Model => "model",
                Problem::Os => "os",
            },
            eps: p.eps,
            alpha: p.alpha,
            theta: p.theta,
            reynolds: p.reynolds(),
        },
        eigenvalues: rows
            .iter()
            .map(|r| JsonEigen {
                re: r.value.re,
                im: r.value.im,
                method: r.method.to_string(),
                index: r.index,
                residual: r.residual,
            })
            .collect(),
        curves: curves
            .iter()
            .map(|s| JsonCurve {
                t: s.t,
                gamma: s.gamma,
                re: s.lambda.re,
                im: s.lambda.im,
                side: side_str(s.side),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("plain structs serialize");
    text.push('\n');
    text
}

const W: f64 = 640.0;
const H: f64 = 480.0;
const MARGIN: f64 = 40.0;

struct Mapper {
    re: (f64, f64),
    im: (f64, f64),
}

impl Mapper {
    fn x(&self, re: f64) -> f64 {
        MARGIN + (re - self.re.0) / (self.re.1 - self.re.0) * (W - 2.0 * MARGIN)
    }
    fn y(&self, im: f64) -> f64 {
        MARGIN + (self.im.1 - im) / (self.im.1 - self.im.0) * (H - 2.0 * MARGIN)
    }
}

fn svg_head() -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {W} {H}\">\n\
         <rect x=\"0\" y=\"0\" width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n\
         <rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{}\" height=\"{}\" \
         fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n",
        W - 2.0 * MARGIN,
        H - 2.0 * MARGIN
    )
}

/// Scatter plot, marker shape and color coded by method:
/// det = blue circle, asym = red cross, oracle = green square.
pub fn eigen_svg(rows: &[Eigenvalue], window: ((f64, f64), (f64, f64))) -> String {
    let m = Mapper { re: window.0, im: window.1 };
    let mut out = svg_head();
    for r in rows {
        let (x, y) = (m.x(r.value.re), m.y(r.value.im));
        match r.method {
            spectraltie_core::Method::Det => out.push_str(&format!(
                "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3\" fill=\"none\" \
                 stroke=\"#1f77b4\" stroke-width=\"1.2\"/>\n"
            )),
            spectraltie_core::Method::Asym => out.push_str(&format!(
                "<path d=\"M{:.2} {:.2}L{:.2} {:.2}M{:.2} {:.2}L{:.2} {:.2}\" \
                 stroke=\"#d62728\" stroke-width=\"1.2\"/>\n",
                x - 3.0,
                y - 3.0,
                x + 3.0,
                y + 3.0,
                x - 3.0,
                y + 3.0,
                x + 3.0,
                y - 3.0
            )),
            spectraltie_core::Method::Oracle => out.push_str(&format!(
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"5\" height=\"5\" fill=\"none\" \
                 stroke=\"#2ca02c\" stroke-width=\"1.2\"/>\n",
                x - 2.5,
                y - 2.5
            )),
        }
    }
    out.push_str("</svg>\n");
    out
}

/// The two limit curves in the spectral plane: plus side red, minus side blue.
pub fn curve_svg(rows: &[CurveSample]) -> String {
    let (mut re_lo, mut re_hi, mut im_lo, mut im_hi) =
        (-1.05f64, 0.05f64, -0.62f64, 0.02f64);
    for s in rows {
        re_lo = re_lo.min(s.lambda.re - 0.02);
        re_hi = re_hi.max(s.lambda.re + 0.02);
        im_lo = im_lo.min(s.lambda.im - 0.02);
        im_hi = im_hi.max(s.lambda.im + 0.02);
    }
    let m = Mapper { re: (re_lo, re_hi), im: (im_lo, im_hi) };
    let mut out = svg_head();
    for s in rows {
        let color = match s.side {
            Side::Plus => "#d62728",
            Side::Minus => "#1f77b4",
        };
        out.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"1.5\" fill=\"{color}\"/>\n",
            m.x(s.lambda.re),
            m.y(s.lambda.im)
        ));
    }
    out.push_str("</svg>\n");
    out
}
