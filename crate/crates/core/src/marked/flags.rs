//! Flag layers: each cell records whether it lies strictly south, in the
//! row of, or strictly north of a distinguished cell, and likewise west, in
//! the column of, or east of it. Dominoes force the rows and columns to
//! change exactly once, so at most one cell of a connected region is the
//! center `(R, C)`, and its position fixes every flag.

use super::{bit, Cube, Literal};
use crate::grid::Offset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertical {
    S = 0,
    R = 1,
    N = 2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Horizontal {
    W = 0,
    C = 1,
    E = 2,
}

pub const FLAG_STATES: usize = 9;
pub const CENTER: u8 = 4;
const NAMES: [&str; FLAG_STATES] = ["SW", "SC", "SE", "RW", "RC", "RE", "NW", "NC", "NE"];

pub fn flag_name(v: u8) -> &'static str {
    NAMES[v as usize]
}

/// Flag state of cell `(x, y)` relative to the center `c`.
pub fn flag_value((x, y): (u32, u32), c: (u32, u32)) -> u8 {
    let v = match y.cmp(&c.1) {
        std::cmp::Ordering::Less => Vertical::S,
        std::cmp::Ordering::Equal => Vertical::R,
        std::cmp::Ordering::Greater => Vertical::N,
    };
    let h = match x.cmp(&c.0) {
        std::cmp::Ordering::Less => Horizontal::W,
        std::cmp::Ordering::Equal => Horizontal::C,
        std::cmp::Ordering::Greater => Horizontal::E,
    };
    state(v, h)
}

pub(crate) fn state(v: Vertical, h: Horizontal) -> u8 {
    v as u8 * 3 + h as u8
}

pub(crate) fn vertical(s: u8) -> Vertical {
    [Vertical::S, Vertical::R, Vertical::N][(s / 3) as usize]
}

pub(crate) fn horizontal(s: u8) -> Horizontal {
    [Horizontal::W, Horizontal::C, Horizontal::E][(s % 3) as usize]
}

/// States whose vertical component is in `vs`.
pub(crate) fn vmask(vs: &[Vertical]) -> u64 {
    (0..FLAG_STATES as u8).filter(|s| vs.contains(&vertical(*s))).map(bit).sum()
}

pub(crate) fn hmask(hs: &[Horizontal]) -> u64 {
    (0..FLAG_STATES as u8).filter(|s| hs.contains(&horizontal(*s))).map(bit).sum()
}

pub(crate) fn all_flags() -> u64 {
    (1 << FLAG_STATES) - 1
}

fn at(dx: i32, dy: i32, t: usize, mask: u64) -> Literal {
    Literal::new(Offset::new(dx, dy), t, mask)
}

/// Forbidden cubes making track `t` a flag layer wherever both cells of a
/// domino satisfy `guard`.
pub(crate) fn flag_cubes(t: usize, guard: &[Literal]) -> Vec<Cube> {
    use Horizontal::*;
    use Vertical::*;
    let mut out = Vec::new();
    for v in [S, R, N] {
        let others: Vec<Vertical> = [S, R, N].into_iter().filter(|w| *w != v).collect();
        out.push(Cube::new([at(0, 0, t, vmask(&[v])), at(1, 0, t, vmask(&others))]));
    }
    out.push(Cube::new([at(0, 0, t, hmask(&[W])), at(1, 0, t, hmask(&[E]))]));
    out.push(Cube::new([at(0, 0, t, hmask(&[C, E])), at(1, 0, t, hmask(&[W, C]))]));
    for h in [W, C, E] {
        let others: Vec<Horizontal> = [W, C, E].into_iter().filter(|g| *g != h).collect();
        out.push(Cube::new([at(0, 0, t, hmask(&[h])), at(0, 1, t, hmask(&others))]));
    }
    out.push(Cube::new([at(0, 0, t, vmask(&[S])), at(0, 1, t, vmask(&[N]))]));
    out.push(Cube::new([at(0, 0, t, vmask(&[R, N])), at(0, 1, t, vmask(&[S, R]))]));
    out.into_iter().map(|c| c.guarded(guard)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn painted_flags_satisfy_the_dominoes() {
        let cubes = flag_cubes(1, &[]);
        for (w, h) in [(1, 1), (3, 2), (4, 4)] {
            for cy in 0..h {
                for cx in 0..w {
                    let read = |x: i64, y: i64| {
                        (x >= 0 && y >= 0 && x < w as i64 && y < h as i64)
                            .then(|| flag_value((x as u32, y as u32), (cx, cy)))
                    };
                    for c in &cubes {
                        for y in 0..h as i64 {
                            for x in 0..w as i64 {
                                assert!(!c.matches(&|o, _| read(x + o.dx as i64, y + o.dy as i64)));
                            }
                        }
                    }
                }
            }
        }
        assert_eq!(flag_value((2, 2), (2, 2)), CENTER);
        assert_eq!(flag_name(flag_value((0, 3), (2, 2))), "NW");
    }
}
