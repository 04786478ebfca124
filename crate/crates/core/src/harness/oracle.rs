//! Direct counting oracle for the marked window suites. Shares no code with
//! the marked module: anchors, zone and acceptance are recomputed here.

use crate::grid::{Pattern, WindowConfig};
use crate::transforms::Count;

/// Bit `y * w + x` is set when `p` occurs in `c` with the north-east corner of
/// its bounding box at `(x, y)`.
pub fn occurrences_in_window(p: &Pattern, c: &WindowConfig) -> u64 {
    let mx = p.iter().map(|(o, _)| o.dx).max().unwrap_or(0);
    let my = p.iter().map(|(o, _)| o.dy).max().unwrap_or(0);
    let (w, h) = (c.width() as i32, c.height() as i32);
    let mut mask = 0u64;
    for y in 0..h {
        for x in 0..w {
            let hit = p.iter().all(|(o, col)| {
                let (cx, cy) = (x + o.dx - mx, y + o.dy - my);
                cx >= 0 && cy >= 0 && cx < w && cy < h && c.at(cx as u32, cy as u32) == col
            });
            if hit {
                mask |= 1 << (y * w + x);
            }
        }
    }
    mask
}

/// Cells `(x, y)` with `min < x ≤ max` and likewise for `y`.
pub(crate) fn zone_mask(w: u32, h: u32, a: (u32, u32), b: (u32, u32)) -> u64 {
    let mut m = 0u64;
    for y in 0..h {
        for x in 0..w {
            if a.0.min(b.0) < x && x <= a.0.max(b.0) && a.1.min(b.1) < y && y <= a.1.max(b.1) {
                m |= 1 << (y * w + x);
            }
        }
    }
    m
}

/// Whether markers at `a` and `b` witness the count for a window whose
/// occurrence mask is `occ`. With `k ≥ 1` the markers may not share a row or
/// column, since the zone would be empty.
pub fn marked_direct(count: Count, k: usize, occ: u64, zone: u64, a: (u32, u32), b: (u32, u32)) -> bool {
    if a == b || (k > 0 && (a.0 == b.0 || a.1 == b.1)) {
        return false;
    }
    let inside = (occ & zone).count_ones() as usize;
    let outside = (occ & !zone).count_ones() as usize;
    match count {
        Count::Exactly => inside == k && outside == 0,
        Count::AtLeast => inside >= k,
    }
}
