//! Closure of projected doubly-marked sets under union, intersection and
//! letter-to-letter projection.

use super::flags::{flag_cubes, hmask, vmask, Horizontal, Vertical};
use super::{bit, complement, counting_marked_sft, flag_name, mask_below, Cube, DoublyMarkedSft, Literal, MarkedSoficRepr, Schema, Track};
use super::{BASE, CENTER, FLAG_STATES};
use crate::error::{Error, Result};
use crate::grid::{check_same, Alphabet, Pattern, Projection};
use crate::transforms::Count;

/// A positive combination of counting sets under an optional outer
/// projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Combination {
    Leaf { pattern: Pattern, k: usize, count: Count },
    Union(Box<Combination>, Box<Combination>),
    Intersect(Box<Combination>, Box<Combination>),
    /// Built over `pi.source()`, then projected to `pi.target()`.
    Project(Projection, Box<Combination>),
}

fn prefixed(s: &Schema, prefix: &str) -> Vec<Track> {
    s.tracks
        .iter()
        .map(|t| Track::new(format!("{prefix}{}", t.name), t.values.clone()))
        .collect()
}

fn shift(c: &Cube, by: usize) -> Cube {
    c.map_tracks(&|t| if t == BASE { BASE } else { t + by })
}

fn flag_track(name: &str) -> Track {
    Track::new(name, (0..FLAG_STATES as u8).map(flag_name))
}

/// Disjoint union: every cell belongs to one side, adjacent cells to the
/// same side, and the other side's tracks are idle.
pub fn union_marked(a: &MarkedSoficRepr, b: &MarkedSoficRepr) -> Result<MarkedSoficRepr> {
    check_same(a.target(), b.target())?;
    let (sa, sb) = (a.schema(), b.schema());
    let (ha, hb) = (sa.hidden(), sb.hidden());
    const SIDE: usize = 1;
    let mut tracks = vec![Track::new("side", ["a", "b"])];
    tracks.extend(prefixed(sa, "a_"));
    tracks.extend(prefixed(sb, "b_"));
    let schema = Schema {
        base: sa.base.clone(),
        tracks,
    };
    let side = |v: u8| Literal::here(SIDE, bit(v));
    let (oa, ob) = (1, 1 + ha);
    let mut cubes = Vec::new();
    for c in &a.marked.forbidden {
        cubes.push(shift(c, oa).guarded(&[side(0)]));
    }
    for c in &b.marked.forbidden {
        cubes.push(shift(c, ob).guarded(&[side(1)]));
    }
    for t in 1..=hb {
        cubes.push(Cube::new([side(0), Literal::here(ob + t, mask_below(sb.size(t)) & !1)]));
    }
    for t in 1..=ha {
        cubes.push(Cube::new([side(1), Literal::here(oa + t, mask_below(sa.size(t)) & !1)]));
    }
    for (dx, dy) in [(1, 0), (0, 1)] {
        let o = crate::grid::Offset::new(dx, dy);
        cubes.push(Cube::new([side(0), Literal::new(o, SIDE, bit(1))]));
        cubes.push(Cube::new([side(1), Literal::new(o, SIDE, bit(0))]));
    }
    let markers = |qa: &[Cube], qb: &[Cube]| -> Vec<Cube> {
        qa.iter()
            .map(|c| Cube::new(shift(c, oa).literals().iter().copied().chain([side(0)])))
            .chain(qb.iter().map(|c| Cube::new(shift(c, ob).literals().iter().copied().chain([side(1)]))))
            .collect()
    };
    let q0 = markers(&a.marked.q0, &b.marked.q0);
    let q1 = markers(&a.marked.q1, &b.marked.q1);
    Ok(MarkedSoficRepr {
        marked: DoublyMarkedSft::new(schema, cubes, q0, q1)?,
    })
}

/// Fiber product over the shared base track. Two fresh flag layers `g0`,
/// `g1` span a closed zone, and four more flag layers pin each old marker
/// set to exactly one cell inside it.
pub fn intersect_marked(a: &MarkedSoficRepr, b: &MarkedSoficRepr) -> Result<MarkedSoficRepr> {
    check_same(a.target(), b.target())?;
    let (sa, sb) = (a.schema(), b.schema());
    let (ha, hb) = (sa.hidden(), sb.hidden());
    let (oa, ob) = (0, ha);
    let g0 = ha + hb + 1;
    let g1 = g0 + 1;
    let zi = g0 + 2;
    let hq: Vec<usize> = (0..4).map(|i| zi + 1 + i).collect();
    let mut tracks = prefixed(sa, "a_");
    tracks.extend(prefixed(sb, "b_"));
    tracks.extend([flag_track("g0"), flag_track("g1"), Track::new("zi", ["0", "1"])]);
    for n in ["h0a", "h1a", "h0b", "h1b"] {
        tracks.push(flag_track(n));
    }
    let schema = Schema {
        base: sa.base.clone(),
        tracks,
    };
    use Horizontal::*;
    use Vertical::*;
    let here = Literal::here;
    let mut cubes: Vec<Cube> = a.marked.forbidden.iter().map(|c| shift(c, oa)).collect();
    cubes.extend(b.marked.forbidden.iter().map(|c| shift(c, ob)));
    for t in [g0, g1].iter().chain(&hq) {
        cubes.extend(flag_cubes(*t, &[]));
    }

    // Closed zone: between the two rows and the two columns, ends included.
    for (m0, m1) in [
        (hmask(&[W]), hmask(&[W])),
        (hmask(&[E]), hmask(&[E])),
        (vmask(&[S]), vmask(&[S])),
        (vmask(&[N]), vmask(&[N])),
    ] {
        cubes.push(Cube::new([here(zi, bit(1)), here(g0, m0), here(g1, m1)]));
    }
    let xin = [(hmask(&[W]), hmask(&[C, E])), (hmask(&[C]), hmask(&[W, C, E])), (hmask(&[E]), hmask(&[W, C]))];
    let yin = [(vmask(&[S]), vmask(&[R, N])), (vmask(&[R]), vmask(&[S, R, N])), (vmask(&[N]), vmask(&[S, R]))];
    for (x0, x1) in xin {
        for (y0, y1) in yin {
            cubes.push(Cube::new([here(zi, bit(0)), here(g0, x0 & y0), here(g1, x1 & y1)]));
        }
    }

    let olds = [(&a.marked.q0, oa), (&a.marked.q1, oa), (&b.marked.q0, ob), (&b.marked.q1, ob)];
    for ((q, off), &t) in olds.into_iter().zip(&hq) {
        let q: Vec<Cube> = q.iter().map(|c| shift(c, off)).collect();
        let center = here(t, bit(CENTER));
        let off_center = here(t, (1 << FLAG_STATES) - 1 - bit(CENTER));
        for c in &q {
            cubes.push(Cube::new(c.literals().iter().copied().chain([off_center])));
        }
        for c in complement(&schema, &q) {
            cubes.push(Cube::new(c.literals().iter().copied().chain([center])));
        }
        // The center lies in every row range and column range of the zone.
        let inz = here(zi, bit(1));
        let both = |m: u64, v: u64| [inz, here(g0, m), here(g1, m), here(t, v)];
        cubes.push(Cube::new(both(vmask(&[R, N]), vmask(&[S]))));
        cubes.push(Cube::new(both(vmask(&[S, R]), vmask(&[N]))));
        cubes.push(Cube::new(both(hmask(&[C, E]), hmask(&[W]))));
        cubes.push(Cube::new(both(hmask(&[W, C]), hmask(&[E]))));
    }
    Ok(MarkedSoficRepr {
        marked: DoublyMarkedSft::new(
            schema,
            cubes,
            vec![Cube::new([here(g0, bit(CENTER))])],
            vec![Cube::new([here(g1, bit(CENTER))])],
        )?,
    })
}

/// Moves the base into a hidden track `src` and takes `pi` of it as the new base.
pub fn project_marked(m: &MarkedSoficRepr, pi: &Projection) -> Result<MarkedSoficRepr> {
    check_same(m.target(), pi.source())?;
    let s = m.schema();
    const SRC: usize = 1;
    let mut tracks = vec![Track::new("src", s.base.names().to_vec())];
    tracks.extend(s.tracks.iter().cloned());
    let schema = Schema {
        base: pi.target().clone(),
        tracks,
    };
    let moved = |c: &Cube| c.map_tracks(&|t| if t == BASE { SRC } else { t + 1 });
    let mut cubes: Vec<Cube> = m.marked.forbidden.iter().map(moved).collect();
    let all = mask_below(pi.target().len());
    for a in s.base.ids() {
        cubes.push(Cube::new([Literal::here(SRC, bit(a)), Literal::here(BASE, all & !bit(pi.apply(a)))]));
    }
    Ok(MarkedSoficRepr {
        marked: DoublyMarkedSft::new(
            schema,
            cubes,
            m.marked.q0.iter().map(moved).collect(),
            m.marked.q1.iter().map(moved).collect(),
        )?,
    })
}

/// Builds the marked object of a combination whose outermost alphabet is `base`.
pub fn emso_to_marked(c: &Combination, base: &Alphabet) -> Result<MarkedSoficRepr> {
    match c {
        Combination::Leaf { pattern, k, count } => counting_marked_sft(pattern, *k, *count, base),
        Combination::Union(x, y) => union_marked(&emso_to_marked(x, base)?, &emso_to_marked(y, base)?),
        Combination::Intersect(x, y) => intersect_marked(&emso_to_marked(x, base)?, &emso_to_marked(y, base)?),
        Combination::Project(pi, inner) => {
            check_same(pi.target(), base)
                .map_err(|_| Error::Invalid("projection target does not match the enclosing alphabet".into()))?;
            project_marked(&emso_to_marked(inner, pi.source())?, pi)
        }
    }
}
