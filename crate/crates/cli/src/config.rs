//! `key=value` settings from `--config` files and flags.

use dtomo::rational::parse_q;
use dtomo::{Error, Q};

use crate::render::{Palette, RenderSpec, Viewport};

#[derive(Clone, Debug, Default)]
pub struct Config {
    pub render: RenderSpec,
    pub precision_cap_bits: Option<u32>,
}

impl Config {
    /// Apply lines of `key = value`; blank lines and `#` comments are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<(), Error> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            self.apply(line).map_err(|e| Error::Parse(format!("config line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn apply(&mut self, kv: &str) -> Result<(), Error> {
        let (k, v) = kv.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got {kv:?}")))?;
        let (k, v) = (k.trim(), v.trim());
        let bad = || Error::Parse(format!("bad value {v:?} for {k}"));
        let p: &mut Palette = &mut self.render.palette;
        match k {
            "scale" => {
                let s: Q = parse_q(v)?;
                self.render.scale = s;
            }
            "precision_cap_bits" => self.precision_cap_bits = Some(v.parse().map_err(|_| bad())?),
            "viewport" => {
                let b = v.split(',').map(parse_q).collect::<Result<Vec<Q>, _>>()?;
                if b.len() != 4 || b[0] >= b[2] || b[1] >= b[3] {
                    return Err(Error::Parse(format!("viewport is min_x,min_y,max_x,max_y, got {v:?}")));
                }
                let [min_x, min_y, max_x, max_y]: [Q; 4] = b.try_into().expect("four bounds");
                self.render.viewport = Some(Viewport { min_x, min_y, max_x, max_y });
            }
            "color.common" => p.common = color(v)?,
            "color.black" => p.black = color(v)?,
            "color.grey" => p.grey = color(v)?,
            "color.boundary" => p.boundary = color(v)?,
            _ => return Err(Error::Parse(format!("unknown config key {k:?}"))),
        }
        Ok(())
    }
}

fn color(v: &str) -> Result<String, Error> {
    let ok = v.len() == 7 && v.starts_with('#') && v[1..].chars().all(|c| c.is_ascii_hexdigit());
    if ok {
        Ok(v.to_ascii_lowercase())
    } else {
        Err(Error::Parse(format!("colors are #rrggbb, got {v:?}")))
    }
}
