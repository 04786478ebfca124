//! The counting gadget: two marker flag layers delimit a rectangular zone,
//! and one flag layer per counter pins a distinct occurrence inside it.
//!
//! Tracks: `f0`, `f1` (marker flags), `z` (zone bit), `c1..ck` (counter
//! flags, with an extra `off` value outside the zone). The zone is
//! `(N₀ ≠ N₁) ∧ (E₀ ≠ E₁)`: the half-open rectangle `(min, max]` in both
//! coordinates between the two marker cells.

use super::flags::{all_flags, flag_cubes, horizontal, hmask, vertical, vmask, Horizontal, Vertical};
use super::{bit, flag_name, flag_value, Cube, DoublyMarkedSft, LayeredWindow, Literal, MarkedSoficRepr, Schema, Track};
use super::{BASE, CENTER, FLAG_STATES};
use crate::error::{Error, Result};
use crate::grid::{Alphabet, Offset, Pattern, WindowConfig};
use crate::transforms::Count;

const OFF: u8 = FLAG_STATES as u8;
const F0: usize = 1;
const F1: usize = 2;
const Z: usize = 3;

fn counter(i: usize) -> usize {
    Z + 1 + i
}

fn here(t: usize, mask: u64) -> Literal {
    Literal::here(t, mask)
}

fn at(dx: i32, dy: i32, t: usize, mask: u64) -> Literal {
    Literal::new(Offset::new(dx, dy), t, mask)
}

/// `p` translated so that the north-east corner of its bounding box is the
/// origin. Patterns must fit in a 2×2 box.
pub(crate) fn anchored(p: &Pattern) -> Result<Pattern> {
    if p.is_empty() {
        return Err(Error::Invalid("the counted pattern must be nonempty".into()));
    }
    let (lo, hi) = p.bounding_box();
    if hi.dx - lo.dx > 1 || hi.dy - lo.dy > 1 {
        return Err(Error::Invalid("the counted pattern must fit in a 2×2 box".into()));
    }
    Ok(p.translate(-hi))
}

/// Zone bit from the two marker flags.
pub fn zone_predicate(f0: u8, f1: u8) -> bool {
    let n = |f: u8| vertical(f) == Vertical::N;
    let e = |f: u8| horizontal(f) == Horizontal::E;
    n(f0) != n(f1) && e(f0) != e(f1)
}

/// The half-open rectangle between the markers, computed directly.
pub fn zone_rectangle(pos0: (u32, u32), pos1: (u32, u32), (x, y): (u32, u32)) -> bool {
    let inside = |a: u32, b: u32, v: u32| a.min(b) < v && v <= a.max(b);
    inside(pos0.0, pos1.0, x) && inside(pos0.1, pos1.1, y)
}

/// Occurrences of `p` (anchored at the north-east corner of its box) lying
/// fully inside `base`, split into those anchored in the zone and outside it.
pub fn occurrences_by_zone(p: &Pattern, base: &WindowConfig, pos0: (u32, u32), pos1: (u32, u32)) -> Result<(usize, usize)> {
    let q = anchored(p)?;
    let (mut inside, mut outside) = (0, 0);
    for y in 0..base.height() {
        for x in 0..base.width() {
            if base.occurs_inside(&q, Offset::new(x as i32, y as i32)) {
                if zone_rectangle(pos0, pos1, (x, y)) {
                    inside += 1;
                } else {
                    outside += 1;
                }
            }
        }
    }
    Ok((inside, outside))
}

/// Doubly-marked SFT whose projection is the set of configurations with
/// exactly (`Count::Exactly`) or at least (`Count::AtLeast`) `k`
/// occurrences of `p`.
pub fn counting_marked_sft(p: &Pattern, k: usize, count: Count, base: &Alphabet) -> Result<MarkedSoficRepr> {
    p.check_alphabet(base)?;
    if base.len() > 64 {
        return Err(Error::Invalid("layered objects support at most 64 base colors".into()));
    }
    let q = anchored(p)?;
    let mut tracks = vec![
        Track::new("f0", (0..FLAG_STATES as u8).map(flag_name)),
        Track::new("f1", (0..FLAG_STATES as u8).map(flag_name)),
        Track::new("z", ["0", "1"]),
    ];
    for i in 1..=k {
        tracks.push(Track::new(format!("c{i}"), (0..FLAG_STATES as u8).map(flag_name).chain(["off"])));
    }
    let schema = Schema {
        base: base.clone(),
        tracks,
    };
    use Horizontal::*;
    use Vertical::*;
    let mut cubes = Vec::new();
    cubes.extend(flag_cubes(F0, &[]));
    cubes.extend(flag_cubes(F1, &[]));
    cubes.push(Cube::new([here(F0, bit(CENTER)), here(F1, bit(CENTER))]));

    let n = vmask(&[N]);
    let not_n = vmask(&[S, R]);
    let e = hmask(&[E]);
    let not_e = hmask(&[W, C]);
    let (z0, z1) = (bit(0), bit(1));
    for (a, b) in [(n, n), (not_n, not_n), (e, e), (not_e, not_e)] {
        cubes.push(Cube::new([here(Z, z1), here(F0, a), here(F1, b)]));
    }
    for (a, b) in [(n & e, not_n & not_e), (n & not_e, not_n & e), (not_n & e, n & not_e), (not_n & not_e, n & e)] {
        cubes.push(Cube::new([here(Z, z0), here(F0, a), here(F1, b)]));
    }
    if k > 0 {
        // A nonempty zone: the markers share neither a row nor a column.
        cubes.push(Cube::new([here(F0, vmask(&[R])), here(F1, vmask(&[R]))]));
        cubes.push(Cube::new([here(F0, hmask(&[C])), here(F1, hmask(&[C]))]));
    }

    let flags = all_flags();
    let not_south = vmask(&[R, N]);
    let not_west = hmask(&[C, E]);
    for i in 0..k {
        let c = counter(i);
        cubes.push(Cube::new([here(Z, z0), here(c, flags)]));
        cubes.push(Cube::new([here(Z, z1), here(c, bit(OFF))]));
        cubes.extend(flag_cubes(c, &[here(Z, z1)]));
        // The counter's row and column meet the zone.
        cubes.push(Cube::new([here(Z, z1), here(F0, not_south), here(F1, not_south), here(c, vmask(&[S]))]));
        cubes.push(Cube::new([here(Z, z1), here(F0, not_west), here(F1, not_west), here(c, hmask(&[W]))]));
        cubes.push(Cube::new([at(0, 0, Z, z0), at(0, 1, Z, z1), at(0, 1, c, vmask(&[N]))]));
        cubes.push(Cube::new([at(0, 0, Z, z0), at(1, 0, Z, z1), at(1, 0, c, hmask(&[E]))]));
        // Counters sit on distinct cells, listed in row-major order.
        let before = vmask(&[S]) | bit(CENTER - 1) | bit(CENTER);
        for j in i + 1..k {
            cubes.push(Cube::new([here(counter(j), bit(CENTER)), here(c, before)]));
        }
        let others = crate::marked::mask_below(base.len());
        for (o, col) in q.iter() {
            cubes.push(Cube::new([here(c, bit(CENTER)), Literal::new(o, BASE, others & !bit(col))]));
        }
    }
    if count == Count::Exactly {
        let occ: Vec<Literal> = q.iter().map(|(o, col)| Literal::new(o, BASE, bit(col))).collect();
        cubes.push(Cube::new(occ.iter().copied().chain([here(Z, z0)])));
        cubes.push(Cube::new(
            occ.iter()
                .copied()
                .chain([here(Z, z1)])
                .chain((0..k).map(|i| here(counter(i), !bit(CENTER) & ((1 << (OFF + 1)) - 1)))),
        ));
    }
    let marked = DoublyMarkedSft::new(
        schema,
        cubes,
        vec![Cube::new([here(F0, bit(CENTER))])],
        vec![Cube::new([here(F1, bit(CENTER))])],
    )?;
    Ok(MarkedSoficRepr { marked })
}

/// The intended layers of a counting gadget over `base`: marker flags from
/// `pos0` and `pos1`, the zone, and counter `i` centered at `assignment[i]`.
/// Counter cells must be in row-major order, bottom row first.
pub fn canonical_paint(
    m: &MarkedSoficRepr,
    base: &WindowConfig,
    pos0: (u32, u32),
    pos1: (u32, u32),
    assignment: &[(u32, u32)],
) -> Result<LayeredWindow> {
    let s = m.schema();
    let track = |name: &str| {
        s.track_index(name)
            .ok_or_else(|| Error::Invalid(format!("not a counting gadget: no track `{name}`")))
    };
    let (f0, f1, z) = (track("f0")?, track("f1")?, track("z")?);
    let counters: Vec<usize> = (1..=assignment.len()).map(|i| track(&format!("c{i}"))).collect::<Result<_>>()?;
    if s.track_index(&format!("c{}", assignment.len() + 1)).is_some() {
        return Err(Error::Invalid("assignment has fewer cells than the gadget has counters".into()));
    }
    let (w, h) = (base.width(), base.height());
    let inside = |(x, y): (u32, u32)| x < w && y < h;
    if pos0 == pos1 || !inside(pos0) || !inside(pos1) {
        return Err(Error::Invalid("markers must be two distinct cells of the window".into()));
    }
    for (i, a) in assignment.iter().enumerate() {
        if !zone_rectangle(pos0, pos1, *a) || !inside(*a) {
            return Err(Error::Invalid(format!("counter {} lies outside the zone", i + 1)));
        }
        if i > 0 && (assignment[i - 1].1, assignment[i - 1].0) >= (a.1, a.0) {
            return Err(Error::Invalid("counter cells must be distinct and in row-major order".into()));
        }
    }
    let mut l = LayeredWindow::new(base.clone(), vec![0; base.area() * s.hidden()], s)?;
    for y in 0..h {
        for x in 0..w {
            let a = flag_value((x, y), pos0);
            let b = flag_value((x, y), pos1);
            l.set(s, x, y, f0, a);
            l.set(s, x, y, f1, b);
            let zone = zone_predicate(a, b);
            l.set(s, x, y, z, zone as u8);
            for (t, c) in counters.iter().zip(assignment) {
                l.set(s, x, y, *t, if zone { flag_value((x, y), *c) } else { OFF });
            }
        }
    }
    Ok(l)
}
