//! Doubly-marked subshifts of finite type over layered alphabets.
//!
//! A layered cell is a base color (the visible track, kept by the
//! projection) together with one small value per hidden track. Constraints
//! are forbidden cubes: conjunctions of literals `(offset, track, value set)`
//! whose offsets fit in a 2×2 square. Each cube stands for the finite set of
//! forbidden patterns it matches, so the objects are genuinely of finite
//! type while the alphabets stay far too large to list.
//!
//! A configuration is doubly marked when exactly one cell lies in `q0` and
//! exactly one in `q1`.

mod combine;
mod counting;
mod emso;
mod flags;
mod solve;
mod text;

pub use combine::{emso_to_marked, intersect_marked, project_marked, union_marked, Combination};
pub use counting::{canonical_paint, counting_marked_sft, occurrences_by_zone, zone_predicate, zone_rectangle};
pub use emso::marked_to_emso;
pub use flags::{flag_name, flag_value, Horizontal, Vertical, CENTER, FLAG_STATES};
pub use solve::{acceptance_by_markers, for_each_layering, projected_acceptance, Leaf, Markers, Search, TargetSpace};
pub use text::{parse_marked, write_marked};

use crate::error::{Error, Result};
use crate::grid::{Alphabet, ColorId, Offset, WindowConfig};

/// Index of the base-color track in literals; hidden tracks are numbered from 1.
pub const BASE: usize = 0;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Track {
    pub name: String,
    pub values: Vec<String>,
}

impl Track {
    pub fn new<S: Into<String>, I: IntoIterator<Item = V>, V: Into<String>>(name: S, values: I) -> Self {
        Track {
            name: name.into(),
            values: values.into_iter().map(Into::into).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }
}

/// The base alphabet and the hidden tracks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    pub base: Alphabet,
    pub tracks: Vec<Track>,
}

impl Schema {
    /// Number of values of track `t` (`BASE` is the base alphabet).
    pub fn size(&self, t: usize) -> usize {
        if t == BASE {
            self.base.len()
        } else {
            self.tracks[t - 1].size()
        }
    }

    pub fn track_name(&self, t: usize) -> &str {
        if t == BASE {
            "base"
        } else {
            &self.tracks[t - 1].name
        }
    }

    pub fn value_name(&self, t: usize, v: u8) -> &str {
        if t == BASE {
            self.base.name(v)
        } else {
            &self.tracks[t - 1].values[v as usize]
        }
    }

    pub fn track_index(&self, name: &str) -> Option<usize> {
        if name == "base" {
            return Some(BASE);
        }
        self.tracks.iter().position(|t| t.name == name).map(|i| i + 1)
    }

    pub fn hidden(&self) -> usize {
        self.tracks.len()
    }

    fn full_mask(&self, t: usize) -> u64 {
        mask_below(self.size(t))
    }

    /// Number of layered cell states allowed by the single-cell cubes of `forbidden`.
    pub fn count_cell_states(&self, forbidden: &[Cube]) -> u128 {
        let local: Vec<&Cube> = forbidden.iter().filter(|c| c.is_single_cell()).collect();
        let sizes: Vec<usize> = (0..=self.hidden()).map(|t| self.size(t)).collect();
        let mut vals = vec![0u8; sizes.len()];
        let mut n = 0u128;
        loop {
            if !local.iter().any(|c| c.matches(&|_, t| Some(vals[t]))) {
                n += 1;
            }
            let mut i = 0;
            loop {
                if i == vals.len() {
                    return n;
                }
                vals[i] += 1;
                if (vals[i] as usize) < sizes[i] {
                    break;
                }
                vals[i] = 0;
                i += 1;
            }
        }
    }
}

pub(crate) fn mask_below(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub(crate) fn bit(v: u8) -> u64 {
    1u64 << v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub at: Offset,
    pub track: usize,
    pub mask: u64,
}

impl Literal {
    pub fn new(at: Offset, track: usize, mask: u64) -> Self {
        Literal { at, track, mask }
    }

    pub fn here(track: usize, mask: u64) -> Self {
        Literal::new(Offset::ZERO, track, mask)
    }
}

/// A conjunction of literals. Literals on the same cell and track are
/// merged by intersecting their value sets.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cube {
    lits: Vec<Literal>,
}

impl Cube {
    pub fn new<I: IntoIterator<Item = Literal>>(lits: I) -> Self {
        let mut lits: Vec<Literal> = lits.into_iter().collect();
        lits.sort_by_key(|l| (l.at, l.track));
        let mut out: Vec<Literal> = Vec::with_capacity(lits.len());
        for l in lits {
            match out.last_mut() {
                Some(p) if p.at == l.at && p.track == l.track => p.mask &= l.mask,
                _ => out.push(l),
            }
        }
        Cube { lits: out }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.lits
    }

    /// A cube with an empty value set matches nothing.
    pub fn is_empty(&self) -> bool {
        self.lits.iter().any(|l| l.mask == 0)
    }

    pub fn is_single_cell(&self) -> bool {
        self.lits.iter().all(|l| l.at == Offset::ZERO)
    }

    pub fn reads_base(&self) -> bool {
        self.lits.iter().any(|l| l.track == BASE)
    }

    /// Adds `extra` (offset-free literals) at every cell the cube mentions.
    pub fn guarded(&self, extra: &[Literal]) -> Cube {
        let cells: Vec<Offset> = self.cells();
        Cube::new(
            self.lits
                .iter()
                .copied()
                .chain(cells.iter().flat_map(|&o| extra.iter().map(move |l| Literal::new(o + l.at, l.track, l.mask)))),
        )
    }

    pub fn cells(&self) -> Vec<Offset> {
        let mut c: Vec<Offset> = self.lits.iter().map(|l| l.at).collect();
        c.dedup();
        c
    }

    pub fn map_tracks(&self, f: &dyn Fn(usize) -> usize) -> Cube {
        Cube::new(self.lits.iter().map(|l| Literal::new(l.at, f(l.track), l.mask)))
    }

    /// Whether every literal holds; `read(offset, track)` returns `None`
    /// outside the domain, which makes the cube fail.
    pub fn matches(&self, read: &dyn Fn(Offset, usize) -> Option<u8>) -> bool {
        self.lits
            .iter()
            .all(|l| read(l.at, l.track).is_some_and(|v| l.mask & bit(v) != 0))
    }

    /// Offsets span at most a 2×2 square.
    pub fn is_local(&self) -> bool {
        let xs = self.lits.iter().map(|l| l.at.dx);
        let ys = self.lits.iter().map(|l| l.at.dy);
        let span = |it: &mut dyn Iterator<Item = i32>| {
            let v: Vec<i32> = it.collect();
            v.iter().max().zip(v.iter().min()).map_or(0, |(a, b)| a - b)
        };
        span(&mut xs.into_iter()) <= 1 && span(&mut ys.into_iter()) <= 1
    }
}

/// Single-cell cubes covering exactly the states outside `cubes`.
pub fn complement(schema: &Schema, cubes: &[Cube]) -> Vec<Cube> {
    let mut out = vec![Cube::new([])];
    for c in cubes {
        let mut next = Vec::new();
        for acc in &out {
            for l in c.literals() {
                let neg = Literal::new(l.at, l.track, !l.mask & schema.full_mask(l.track));
                let cube = Cube::new(acc.literals().iter().copied().chain([neg]));
                if !cube.is_empty() {
                    next.push(cube);
                }
            }
        }
        next.sort();
        next.dedup();
        out = next;
    }
    out
}

/// A set of forbidden cubes plus the two marker sets, each a disjunction of
/// single-cell cubes over hidden tracks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoublyMarkedSft {
    pub schema: Schema,
    pub forbidden: Vec<Cube>,
    pub q0: Vec<Cube>,
    pub q1: Vec<Cube>,
}

impl DoublyMarkedSft {
    pub fn new(schema: Schema, forbidden: Vec<Cube>, q0: Vec<Cube>, q1: Vec<Cube>) -> Result<Self> {
        let mut forbidden: Vec<Cube> = forbidden.into_iter().filter(|c| !c.is_empty()).collect();
        forbidden.sort();
        forbidden.dedup();
        let m = DoublyMarkedSft {
            schema,
            forbidden,
            q0,
            q1,
        };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        for c in self.forbidden.iter().chain(&self.q0).chain(&self.q1) {
            for l in c.literals() {
                if l.track > self.schema.hidden() {
                    return Err(Error::Invalid(format!("literal on unknown track {}", l.track)));
                }
                if l.mask & !self.schema.full_mask(l.track) != 0 {
                    return Err(Error::Invalid(format!("value out of range on track `{}`", self.schema.track_name(l.track))));
                }
            }
        }
        if let Some(c) = self.forbidden.iter().find(|c| !c.is_local()) {
            return Err(Error::Invalid(format!("forbidden cube {c:?} does not fit in a 2×2 square")));
        }
        for c in self.q0.iter().chain(&self.q1) {
            if !c.is_single_cell() || c.reads_base() {
                return Err(Error::Invalid("markers must be single-cell cubes over hidden tracks".into()));
            }
        }
        if self.q0.is_empty() || self.q1.is_empty() {
            return Err(Error::Invalid("marker sets must be nonempty".into()));
        }
        Ok(())
    }
}

/// A doubly-marked SFT together with its projection, which keeps the base
/// track and forgets the hidden ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedSoficRepr {
    pub marked: DoublyMarkedSft,
}

impl MarkedSoficRepr {
    pub fn schema(&self) -> &Schema {
        &self.marked.schema
    }

    pub fn target(&self) -> &Alphabet {
        &self.marked.schema.base
    }
}

/// A finite window over a layered alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredWindow {
    pub base: WindowConfig,
    /// Row-major, one block of `schema.hidden()` values per cell.
    pub hidden: Vec<u8>,
}

impl LayeredWindow {
    pub fn new(base: WindowConfig, hidden: Vec<u8>, schema: &Schema) -> Result<Self> {
        if hidden.len() != base.area() * schema.hidden() {
            return Err(Error::Invalid("hidden layer size does not match the window".into()));
        }
        for (i, v) in hidden.iter().enumerate() {
            let t = i % schema.hidden().max(1) + 1;
            if *v as usize >= schema.size(t) {
                return Err(Error::Invalid(format!("value {v} out of range on track `{}`", schema.track_name(t))));
            }
        }
        Ok(LayeredWindow { base, hidden })
    }

    pub fn width(&self) -> u32 {
        self.base.width()
    }

    pub fn height(&self) -> u32 {
        self.base.height()
    }

    pub fn read(&self, schema: &Schema, x: i64, y: i64, track: usize) -> Option<u8> {
        let (w, h) = (self.width() as i64, self.height() as i64);
        if x < 0 || y < 0 || x >= w || y >= h {
            return None;
        }
        let i = (y * w + x) as usize;
        Some(if track == BASE {
            self.base.cells()[i]
        } else {
            self.hidden[i * schema.hidden() + track - 1]
        })
    }

    pub fn set(&mut self, schema: &Schema, x: u32, y: u32, track: usize, v: u8) {
        let i = (y * self.width() + x) as usize;
        if track == BASE {
            self.base.set(x, y, v as ColorId);
        } else {
            self.hidden[i * schema.hidden() + track - 1] = v;
        }
    }

    /// `base.v1.v2...`, one component per track.
    pub fn cell_name(&self, schema: &Schema, x: u32, y: u32) -> String {
        (0..=schema.hidden())
            .map(|t| schema.value_name(t, self.read(schema, x as i64, y as i64, t).unwrap()).to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}

/// Anchors at which every cell of `c` lies inside a `w × h` window.
pub(crate) fn anchors(c: &Cube, w: u32, h: u32) -> impl Iterator<Item = (i64, i64)> {
    let (mut x0, mut x1, mut y0, mut y1) = (0i64, 0i64, 0i64, 0i64);
    for l in c.literals() {
        x0 = x0.min(l.at.dx as i64);
        x1 = x1.max(l.at.dx as i64);
        y0 = y0.min(l.at.dy as i64);
        y1 = y1.max(l.at.dy as i64);
    }
    let (w, h) = (w as i64, h as i64);
    (-y0..h - y1).flat_map(move |y| (-x0..w - x1).map(move |x| (x, y)))
}

fn cube_at(c: &Cube, l: &LayeredWindow, schema: &Schema, x: i64, y: i64) -> bool {
    c.matches(&|o, t| l.read(schema, x + o.dx as i64, y + o.dy as i64, t))
}

/// Cells of `l` lying in the marker set `q`.
pub fn marker_cells(schema: &Schema, q: &[Cube], l: &LayeredWindow) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for y in 0..l.height() {
        for x in 0..l.width() {
            if q.iter().any(|c| cube_at(c, l, schema, x as i64, y as i64)) {
                out.push((x, y));
            }
        }
    }
    out
}

/// No forbidden cube matches anywhere fully inside the window.
pub fn window_satisfies(m: &MarkedSoficRepr, l: &LayeredWindow) -> Result<bool> {
    let s = m.schema();
    crate::grid::check_same(&s.base, l.base.alphabet())?;
    if l.hidden.len() != l.base.area() * s.hidden() {
        return Err(Error::AlphabetMismatch("hidden layers do not match the schema".into()));
    }
    for c in &m.marked.forbidden {
        if anchors(c, l.width(), l.height()).any(|(x, y)| cube_at(c, l, s, x, y)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Satisfies the constraints and is doubly marked.
pub fn window_accepts(m: &MarkedSoficRepr, l: &LayeredWindow) -> Result<bool> {
    Ok(window_satisfies(m, l)?
        && marker_cells(m.schema(), &m.marked.q0, l).len() == 1
        && marker_cells(m.schema(), &m.marked.q1, l).len() == 1)
}
