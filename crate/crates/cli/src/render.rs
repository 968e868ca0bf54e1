//! Deterministic SVG for patches and ghost pairs.
//!
//! Geometry stays exact until emission. Each coordinate is enclosed by a
//! high-precision interval and its midpoint is printed with 20 decimals,
//! rounding half to even.

use std::fmt::Write as _;

use dtomo::cyclotomic::CycNum;
use dtomo::modelset::LatticePoint;
use dtomo::sign::{imag_interval, real_interval};
use dtomo::tomography::convex_hull;
use dtomo::Q;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

pub const DIGITS: u32 = 20;
const BITS: u32 = 192;

#[derive(Debug, thiserror::Error)]
pub enum RenderError {
    #[error("point ({x}, {y}) lies outside the viewport")]
    ViewportOverflow { x: String, y: String },
    #[error("scale must be positive")]
    BadScale,
}

#[derive(Clone, Debug)]
pub struct Palette {
    pub common: String,
    pub black: String,
    pub grey: String,
    pub boundary: String,
}

impl Default for Palette {
    fn default() -> Self {
        Palette {
            common: "#5b6770".into(),
            black: "#000000".into(),
            grey: "#a6a6a6".into(),
            boundary: "#b03a2e".into(),
        }
    }
}

/// Bounds in model units: `[min_x, max_x] x [min_y, max_y]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Viewport {
    pub min_x: Q,
    pub min_y: Q,
    pub max_x: Q,
    pub max_y: Q,
}

#[derive(Clone, Debug)]
pub struct RenderSpec {
    /// Pixels per unit.
    pub scale: Q,
    pub palette: Palette,
    /// Computed from the geometry with a margin of one unit when absent.
    pub viewport: Option<Viewport>,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec { scale: Q::from_integer(BigInt::from(40)), palette: Palette::default(), viewport: None }
    }
}

pub enum Figure<'a> {
    Patch(&'a [LatticePoint]),
    Ghost { common: &'a [LatticePoint], black: &'a [LatticePoint], grey: &'a [LatticePoint] },
}

/// Midpoint of a tight enclosure, as an exact rational.
fn mid(lo: &BigInt, hi: &BigInt, exp: u32) -> Q {
    Q::new(lo + hi, BigInt::one() << (exp as usize + 1))
}

fn coords(z: &CycNum) -> (Q, Q) {
    let re = real_interval(z, BITS);
    let im = imag_interval(z, BITS);
    (mid(&re.lo, &re.hi, re.exp), mid(&im.lo, &im.hi, im.exp))
}

/// Fixed-point decimal with `digits` places, half to even, trailing zeros dropped.
pub fn fmt_decimal(x: &Q, digits: u32) -> String {
    let p = BigInt::from(10).pow(digits);
    let scaled = x.numer() * &p;
    let den = x.denom();
    let (mut q, r) = scaled.div_mod_floor(den);
    let twice = &r * 2;
    if twice > *den || (twice == *den && q.is_odd()) {
        q += 1;
    }
    let neg = q.is_negative();
    let s = q.abs().to_string();
    let s = format!("{:0>width$}", s, width = digits as usize + 1);
    let (int, frac) = s.split_at(s.len() - digits as usize);
    let frac = frac.trim_end_matches('0');
    let body = if frac.is_empty() { int.to_string() } else { format!("{int}.{frac}") };
    if neg && body != "0" {
        format!("-{body}")
    } else {
        body
    }
}

struct Placed {
    x: Q,
    y: Q,
}

fn place(p: &LatticePoint) -> Placed {
    let (x, y) = coords(&p.embed());
    Placed { x, y }
}

pub fn render(fig: &Figure<'_>, spec: &RenderSpec) -> Result<String, RenderError> {
    if !spec.scale.is_positive() {
        return Err(RenderError::BadScale);
    }
    let layers: Vec<(&[LatticePoint], &str, &str)> = match fig {
        Figure::Patch(pts) => vec![(*pts, spec.palette.common.as_str(), "2/25")],
        Figure::Ghost { common, black, grey } => vec![
            (*common, spec.palette.common.as_str(), "3/50"),
            (*black, spec.palette.black.as_str(), "3/25"),
            (*grey, spec.palette.grey.as_str(), "3/25"),
        ],
    };
    let placed: Vec<Vec<Placed>> = layers.iter().map(|(pts, _, _)| pts.iter().map(place).collect()).collect();
    let all: Vec<&Placed> = placed.iter().flatten().collect();
    let one = Q::one();
    let vp = match &spec.viewport {
        Some(v) => {
            for p in &all {
                if p.x < v.min_x || p.x > v.max_x || p.y < v.min_y || p.y > v.max_y {
                    return Err(RenderError::ViewportOverflow {
                        x: fmt_decimal(&p.x, 6),
                        y: fmt_decimal(&p.y, 6),
                    });
                }
            }
            v.clone()
        }
        None if all.is_empty() => Viewport { min_x: -&one, min_y: -&one, max_x: one.clone(), max_y: one.clone() },
        None => Viewport {
            min_x: all.iter().map(|p| &p.x).min().cloned().unwrap() - &one,
            min_y: all.iter().map(|p| &p.y).min().cloned().unwrap() - &one,
            max_x: all.iter().map(|p| &p.x).max().cloned().unwrap() + &one,
            max_y: all.iter().map(|p| &p.y).max().cloned().unwrap() + &one,
        },
    };
    let s = &spec.scale;
    // SVG y grows downwards.
    let px = |x: &Q| fmt_decimal(&((x - &vp.min_x) * s), DIGITS);
    let py = |y: &Q| fmt_decimal(&((&vp.max_y - y) * s), DIGITS);
    let w = fmt_decimal(&((&vp.max_x - &vp.min_x) * s), DIGITS);
    let h = fmt_decimal(&((&vp.max_y - &vp.min_y) * s), DIGITS);
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    )
    .unwrap();
    if let Figure::Ghost { black, grey, .. } = fig {
        let verts: Vec<CycNum> = black.iter().chain(grey.iter()).map(|p| p.embed()).collect();
        let hull = convex_hull(&verts);
        if hull.len() >= 3 {
            let mut d = String::new();
            for (i, z) in hull.iter().enumerate() {
                let (x, y) = coords(z);
                write!(d, "{}{} {} ", if i == 0 { "M" } else { "L" }, px(&x), py(&y)).unwrap();
            }
            d.push('Z');
            writeln!(
                out,
                r#"<path d="{d}" fill="none" stroke="{}" stroke-width="1"/>"#,
                spec.palette.boundary
            )
            .unwrap();
        }
    }
    for ((_, color, r), pts) in layers.iter().zip(&placed) {
        let r = fmt_decimal(&(dtomo::rational::parse_q(r).expect("literal") * s), DIGITS);
        for p in pts {
            writeln!(out, r#"<circle cx="{}" cy="{}" r="{r}" fill="{color}"/>"#, px(&p.x), py(&p.y)).unwrap();
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}
