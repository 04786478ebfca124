//! Text and PPM renderings of configurations and painted counting windows.
//!
//! Rows are drawn top row first (largest `y` at the top). TEXT uses the
//! first character of each color name, or `A`, `B`, ... by alphabet order if
//! those characters clash. PPM (P6) gives each cell a `scale × scale` block
//! colored from [`PALETTE`] by alphabet order.
//!
//! On a painted counting window, zone cells are shaded halfway towards dark
//! gray and marker cells get a black center block. In TEXT, zone cells are
//! lowercase and markers print as `0` and `1`.

use tesselogic_core::grid::{Alphabet, ColorId};
use tesselogic_core::marked::{zone_predicate, LayeredWindow, MarkedSoficRepr, CENTER};
use tesselogic_core::WindowConfig;

/// Colors by alphabet index; indices past the end wrap around.
pub const PALETTE: [[u8; 3]; 8] = [
    [255, 255, 255],
    [50, 205, 50],
    [30, 144, 255],
    [220, 20, 60],
    [255, 215, 0],
    [128, 0, 128],
    [255, 140, 0],
    [0, 128, 128],
];

const ZONE: [u8; 3] = [64, 64, 64];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Ppm,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "ppm" => Ok(Format::Ppm),
            _ => Err(format!("unknown format `{s}` (expected text or ppm)")),
        }
    }
}

/// What is drawn on top of a cell's base color.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Overlay {
    pub zone: bool,
    pub marker: Option<u8>,
}

pub fn glyphs(a: &Alphabet) -> Vec<char> {
    let firsts: Vec<char> = a.names().iter().map(|n| n.chars().next().unwrap_or('?')).collect();
    let mut sorted = firsts.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() == firsts.len() {
        firsts
    } else {
        (0..a.len()).map(|i| (b'A' + (i % 26) as u8) as char).collect()
    }
}

/// The overlay of a painted counting window, read from its `f0`/`f1` tracks.
pub fn zone_overlay(m: &MarkedSoficRepr, l: &LayeredWindow) -> Vec<Overlay> {
    let s = m.schema();
    let (Some(f0), Some(f1)) = (s.track_index("f0"), s.track_index("f1")) else {
        return vec![Overlay::default(); l.base.area()];
    };
    let mut out = Vec::with_capacity(l.base.area());
    for y in 0..l.height() as i64 {
        for x in 0..l.width() as i64 {
            let (a, b) = (l.read(s, x, y, f0).unwrap_or(0), l.read(s, x, y, f1).unwrap_or(0));
            let marker = if a == CENTER {
                Some(0)
            } else if b == CENTER {
                Some(1)
            } else {
                None
            };
            out.push(Overlay {
                zone: zone_predicate(a, b),
                marker,
            });
        }
    }
    out
}

pub fn render(c: &WindowConfig, overlay: Option<&[Overlay]>, format: Format, scale: u32) -> Vec<u8> {
    match format {
        Format::Text => text(c, overlay).into_bytes(),
        Format::Ppm => ppm(c, overlay, scale),
    }
}

fn text(c: &WindowConfig, overlay: Option<&[Overlay]>) -> String {
    let g = glyphs(c.alphabet());
    let mut out = String::new();
    for y in (0..c.height()).rev() {
        for x in 0..c.width() {
            let i = c.index(x, y);
            let ch = g[c.cells()[i] as usize];
            out.push(match overlay.map(|o| o[i]) {
                Some(Overlay { marker: Some(m), .. }) => (b'0' + m) as char,
                Some(Overlay { zone: true, .. }) => ch.to_ascii_lowercase(),
                _ => ch,
            });
        }
        out.push('\n');
    }
    out
}

fn pixel(color: ColorId, o: Overlay, inner: bool) -> [u8; 3] {
    if o.marker.is_some() && inner {
        return [0, 0, 0];
    }
    let p = PALETTE[color as usize % PALETTE.len()];
    if o.zone {
        [0, 1, 2].map(|k| ((p[k] as u16 + ZONE[k] as u16) / 2) as u8)
    } else {
        p
    }
}

fn ppm(c: &WindowConfig, overlay: Option<&[Overlay]>, scale: u32) -> Vec<u8> {
    let scale = scale.max(1);
    let (w, h) = (c.width() * scale, c.height() * scale);
    let mut out = format!("P6 {w} {h} 255\n").into_bytes();
    for py in 0..h {
        let y = c.height() - 1 - py / scale;
        for px in 0..w {
            let x = px / scale;
            let i = c.index(x, y);
            let o = overlay.map(|o| o[i]).unwrap_or_default();
            let (u, v) = (px % scale, py % scale);
            let inner = scale < 3 || (u >= scale / 3 && u < scale - scale / 3 && v >= scale / 3 && v < scale - scale / 3);
            out.extend_from_slice(&pixel(c.cells()[i], o, inner));
        }
    }
    out
}
