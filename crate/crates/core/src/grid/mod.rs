//! Configurations, patterns and the occurrence machinery every other module
//! evaluates against.
//!
//! Infinite configurations are represented by their periodic lifts: a
//! [`TorusConfig`] of size `w × h` stands for the configuration of `Z²` that
//! repeats it with period `(w, h)`. Bounded colorings without wraparound are
//! [`WindowConfig`]s. Coordinates grow to the east (`dx`) and north (`dy`);
//! cells are stored row-major, bottom row first.

mod hanf;
pub mod text;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub use hanf::{hanf_equiv, hanf_signature, HanfSignature};

/// Index of a color inside its [`Alphabet`].
pub type ColorId = u8;

/// A translation vector of `Z²`, also used for cell coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Offset {
    pub dx: i32,
    pub dy: i32,
}

impl Offset {
    pub const ZERO: Offset = Offset { dx: 0, dy: 0 };
    pub const NORTH: Offset = Offset { dx: 0, dy: 1 };
    pub const SOUTH: Offset = Offset { dx: 0, dy: -1 };
    pub const EAST: Offset = Offset { dx: 1, dy: 0 };
    pub const WEST: Offset = Offset { dx: -1, dy: 0 };

    pub const fn new(dx: i32, dy: i32) -> Self {
        Offset { dx, dy }
    }
}

impl std::ops::Add for Offset {
    type Output = Offset;
    fn add(self, rhs: Offset) -> Offset {
        Offset::new(self.dx + rhs.dx, self.dy + rhs.dy)
    }
}

impl std::ops::Sub for Offset {
    type Output = Offset;
    fn sub(self, rhs: Offset) -> Offset {
        Offset::new(self.dx - rhs.dx, self.dy - rhs.dy)
    }
}

impl std::ops::Neg for Offset {
    type Output = Offset;
    fn neg(self) -> Offset {
        Offset::new(-self.dx, -self.dy)
    }
}

// Row-major: rows bottom to top, then columns west to east.
impl Ord for Offset {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.dy, self.dx).cmp(&(other.dy, other.dx))
    }
}

impl PartialOrd for Offset {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Offset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.dx, self.dy)
    }
}

impl fmt::Display for Offset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.dx, self.dy)
    }
}

/// An ordered, nonempty set of distinct color names.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet(Arc<[String]>);

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::Invalid("alphabet must be nonempty".into()));
        }
        if names.len() > usize::from(ColorId::MAX) + 1 {
            return Err(Error::Invalid(format!(
                "alphabet has {} colors, at most 256 are supported",
                names.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for n in &names {
            if n.is_empty() {
                return Err(Error::Invalid("empty color name".into()));
            }
            if !seen.insert(n.as_str()) {
                return Err(Error::Invalid(format!("duplicate color `{n}`")));
            }
        }
        Ok(Alphabet(names.into()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn name(&self, c: ColorId) -> &str {
        &self.0[usize::from(c)]
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<ColorId> {
        self.0.iter().position(|n| n == name).map(|i| i as ColorId)
    }

    pub fn color(&self, name: &str) -> Result<ColorId> {
        self.index_of(name)
            .ok_or_else(|| Error::UndeclaredColor(name.to_string()))
    }

    pub fn ids(&self) -> impl Iterator<Item = ColorId> + '_ {
        (0..self.0.len()).map(|i| i as ColorId)
    }

    pub fn contains(&self, c: ColorId) -> bool {
        usize::from(c) < self.0.len()
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet{:?}", &self.0[..])
    }
}

/// A finite partial configuration: offsets mapped to colors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Pattern {
    cells: BTreeMap<Offset, ColorId>,
}

impl Pattern {
    pub fn new(cells: BTreeMap<Offset, ColorId>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::Invalid("pattern domain must be nonempty".into()));
        }
        Ok(Pattern { cells })
    }

    pub fn from_cells<I: IntoIterator<Item = (Offset, ColorId)>>(cells: I) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (o, c) in cells {
            if let Some(prev) = map.insert(o, c) {
                if prev != c {
                    return Err(Error::Invalid(format!("offset {o} given two colors")));
                }
            }
        }
        Pattern::new(map)
    }

    pub fn single(c: ColorId) -> Self {
        Pattern {
            cells: BTreeMap::from([(Offset::ZERO, c)]),
        }
    }

    pub fn cells(&self) -> &BTreeMap<Offset, ColorId> {
        &self.cells
    }

    pub fn iter(&self) -> impl Iterator<Item = (Offset, ColorId)> + '_ {
        self.cells.iter().map(|(o, c)| (*o, *c))
    }

    pub fn domain(&self) -> impl Iterator<Item = Offset> + '_ {
        self.cells.keys().copied()
    }

    pub fn get(&self, o: Offset) -> Option<ColorId> {
        self.cells.get(&o).copied()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn max_color(&self) -> ColorId {
        self.cells.values().copied().max().unwrap_or(0)
    }

    /// Smallest and largest coordinates of the domain, as `(min, max)`.
    pub fn bounding_box(&self) -> (Offset, Offset) {
        let mut lo = Offset::new(i32::MAX, i32::MAX);
        let mut hi = Offset::new(i32::MIN, i32::MIN);
        for o in self.cells.keys() {
            lo = Offset::new(lo.dx.min(o.dx), lo.dy.min(o.dy));
            hi = Offset::new(hi.dx.max(o.dx), hi.dy.max(o.dy));
        }
        (lo, hi)
    }

    pub fn translate(&self, v: Offset) -> Pattern {
        Pattern {
            cells: self.cells.iter().map(|(o, c)| (*o + v, *c)).collect(),
        }
    }

    pub fn check_alphabet(&self, alphabet: &Alphabet) -> Result<()> {
        match self.cells.values().find(|c| !alphabet.contains(**c)) {
            Some(c) => Err(Error::AlphabetMismatch(format!(
                "pattern color {c} outside alphabet of {} colors",
                alphabet.len()
            ))),
            None => Ok(()),
        }
    }
}

/// The square domain `[0,n) × [0,n)`.
pub fn square_domain(n: u32) -> Vec<Offset> {
    let n = n as i32;
    let mut out = Vec::with_capacity((n * n) as usize);
    for dy in 0..n {
        for dx in 0..n {
            out.push(Offset::new(dx, dy));
        }
    }
    out
}

/// A finite periodic configuration: the lift of a `w × h` rectangle to `Z²`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TorusConfig {
    width: u32,
    height: u32,
    cells: Vec<ColorId>,
    alphabet: Alphabet,
}

/// A bounded rectangular coloring without wraparound.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct WindowConfig {
    width: u32,
    height: u32,
    cells: Vec<ColorId>,
    alphabet: Alphabet,
}

macro_rules! rect_common {
    ($ty:ident) => {
        impl $ty {
            pub fn new(
                alphabet: Alphabet,
                width: u32,
                height: u32,
                cells: Vec<ColorId>,
            ) -> Result<Self> {
                if width == 0 || height == 0 {
                    return Err(Error::Invalid("dimensions must be at least 1".into()));
                }
                if cells.len() != (width as usize) * (height as usize) {
                    return Err(Error::Invalid(format!(
                        "{}x{} rectangle needs {} cells, got {}",
                        width,
                        height,
                        width * height,
                        cells.len()
                    )));
                }
                if let Some(c) = cells.iter().find(|c| !alphabet.contains(**c)) {
                    return Err(Error::AlphabetMismatch(format!(
                        "cell color {c} outside alphabet of {} colors",
                        alphabet.len()
                    )));
                }
                Ok($ty {
                    width,
                    height,
                    cells,
                    alphabet,
                })
            }

            pub fn filled(alphabet: Alphabet, width: u32, height: u32, c: ColorId) -> Result<Self> {
                Self::new(alphabet, width, height, vec![c; (width * height) as usize])
            }

            /// Builds a configuration from color names, row-major, bottom row first.
            pub fn from_names(alphabet: &Alphabet, width: u32, height: u32, names: &[&str]) -> Result<Self> {
                let cells = names
                    .iter()
                    .map(|n| alphabet.color(n))
                    .collect::<Result<Vec<_>>>()?;
                Self::new(alphabet.clone(), width, height, cells)
            }

            pub fn width(&self) -> u32 {
                self.width
            }

            pub fn height(&self) -> u32 {
                self.height
            }

            pub fn area(&self) -> usize {
                self.cells.len()
            }

            pub fn alphabet(&self) -> &Alphabet {
                &self.alphabet
            }

            pub fn cells(&self) -> &[ColorId] {
                &self.cells
            }

            pub fn index(&self, x: u32, y: u32) -> usize {
                (y * self.width + x) as usize
            }

            pub fn at(&self, x: u32, y: u32) -> ColorId {
                self.cells[self.index(x, y)]
            }

            pub fn set(&mut self, x: u32, y: u32, c: ColorId) {
                let i = self.index(x, y);
                self.cells[i] = c;
            }

            pub fn coords(&self, i: usize) -> (u32, u32) {
                (i as u32 % self.width, i as u32 / self.width)
            }
        }
    };
}

rect_common!(TorusConfig);
rect_common!(WindowConfig);

impl TorusConfig {
    /// Color of the periodic lift at an arbitrary point of `Z²`.
    pub fn at_wrapped(&self, p: Offset) -> ColorId {
        let x = p.dx.rem_euclid(self.width as i32) as u32;
        let y = p.dy.rem_euclid(self.height as i32) as u32;
        self.at(x, y)
    }

    /// The configuration `C'` with `C'(z) = C(z - v)`.
    pub fn translate(&self, v: Offset) -> TorusConfig {
        let mut out = self.clone();
        for y in 0..self.height {
            for x in 0..self.width {
                let src = Offset::new(x as i32, y as i32) - v;
                out.set(x, y, self.at_wrapped(src));
            }
        }
        out
    }

    pub fn to_window(&self) -> WindowConfig {
        WindowConfig {
            width: self.width,
            height: self.height,
            cells: self.cells.clone(),
            alphabet: self.alphabet.clone(),
        }
    }
}

impl WindowConfig {
    pub fn get(&self, p: Offset) -> Option<ColorId> {
        if p.dx < 0 || p.dy < 0 || p.dx >= self.width as i32 || p.dy >= self.height as i32 {
            None
        } else {
            Some(self.at(p.dx as u32, p.dy as u32))
        }
    }

    pub fn to_torus(&self) -> TorusConfig {
        TorusConfig {
            width: self.width,
            height: self.height,
            cells: self.cells.clone(),
            alphabet: self.alphabet.clone(),
        }
    }

    /// True iff `p` occurs at `z0` with every cell of the occurrence inside the window.
    pub fn occurs_inside(&self, p: &Pattern, z0: Offset) -> bool {
        p.iter().all(|(o, c)| self.get(z0 + o) == Some(c))
    }
}

/// A letter-to-letter map between alphabets, extended cellwise to configurations.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Projection {
    source: Alphabet,
    target: Alphabet,
    map: Vec<ColorId>,
}

impl Projection {
    pub fn new(source: Alphabet, target: Alphabet, map: Vec<ColorId>) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::Invalid(format!(
                "projection must map all {} source colors, got {}",
                source.len(),
                map.len()
            )));
        }
        if let Some(c) = map.iter().find(|c| !target.contains(**c)) {
            return Err(Error::AlphabetMismatch(format!(
                "projection image {c} outside target alphabet"
            )));
        }
        Ok(Projection { source, target, map })
    }

    pub fn identity(alphabet: &Alphabet) -> Self {
        Projection {
            source: alphabet.clone(),
            target: alphabet.clone(),
            map: alphabet.ids().collect(),
        }
    }

    /// Builds a projection from `(source name, target name)` pairs covering the source.
    pub fn from_names(source: &Alphabet, target: &Alphabet, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut map = vec![None; source.len()];
        for (s, t) in pairs {
            map[usize::from(source.color(s)?)] = Some(target.color(t)?);
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(i, m)| {
                m.ok_or_else(|| {
                    Error::Invalid(format!("projection undefined on `{}`", source.name(i as ColorId)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Projection::new(source.clone(), target.clone(), map)
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    pub fn apply(&self, c: ColorId) -> ColorId {
        self.map[usize::from(c)]
    }

    pub fn map(&self) -> &[ColorId] {
        &self.map
    }

    /// Source colors mapped onto `t`.
    pub fn preimage(&self, t: ColorId) -> Vec<ColorId> {
        self.source.ids().filter(|c| self.apply(*c) == t).collect()
    }
}

pub fn check_same(a: &Alphabet, b: &Alphabet) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch(format!("{a:?} vs {b:?}")))
    }
}

/// True iff the periodic lift of `c` matches `p` translated by `z0`.
pub fn occurs_at(p: &Pattern, c: &TorusConfig, z0: Offset) -> Result<bool> {
    p.check_alphabet(c.alphabet())?;
    Ok(occurs_unchecked(p, c, z0))
}

fn occurs_unchecked(p: &Pattern, c: &TorusConfig, z0: Offset) -> bool {
    p.iter().all(|(o, col)| c.at_wrapped(z0 + o) == col)
}

/// Number of fundamental-domain positions where `p` occurs, truncated at `cap`.
pub fn count_occurrences(p: &Pattern, c: &TorusConfig, cap: u64) -> Result<u64> {
    p.check_alphabet(c.alphabet())?;
    let mut n = 0;
    if cap == 0 {
        return Ok(0);
    }
    for y in 0..c.height() as i32 {
        for x in 0..c.width() as i32 {
            if occurs_unchecked(p, c, Offset::new(x, y)) {
                n += 1;
                if n >= cap {
                    return Ok(cap);
                }
            }
        }
    }
    Ok(n)
}

/// All patterns over `domain` occurring somewhere in the periodic lift of `c`.
pub fn language(c: &TorusConfig, domain: &[Offset]) -> Result<BTreeSet<Pattern>> {
    if domain.is_empty() {
        return Err(Error::Invalid("language domain must be nonempty".into()));
    }
    let mut out = BTreeSet::new();
    for y in 0..c.height() as i32 {
        for x in 0..c.width() as i32 {
            let z0 = Offset::new(x, y);
            let cells = domain.iter().map(|o| (*o, c.at_wrapped(z0 + *o))).collect();
            out.insert(Pattern::new(cells)?);
        }
    }
    Ok(out)
}

/// Cellwise image of `c` under `pi`.
pub fn project(pi: &Projection, c: &TorusConfig) -> Result<TorusConfig> {
    check_same(pi.source(), c.alphabet())?;
    let cells = c.cells().iter().map(|x| pi.apply(*x)).collect();
    TorusConfig::new(pi.target().clone(), c.width(), c.height(), cells)
}

/// Total number of `w × h` colorings over `q` colors, saturating.
pub fn config_count(q: usize, w: u32, h: u32) -> u128 {
    let mut n: u128 = 1;
    for _ in 0..(w as u64 * h as u64) {
        n = n.saturating_mul(q as u128);
    }
    n
}

/// Fails with [`Error::BudgetExceeded`] when `needed > budget`.
pub fn check_budget(needed: u128, budget: u64) -> Result<()> {
    if needed > u128::from(budget) {
        Err(Error::BudgetExceeded { needed, budget })
    } else {
        Ok(())
    }
}

/// Lexicographic odometer over all cell vectors of a given length.
///
/// Cell 0 is the most significant digit, so the order matches the derived
/// `Ord` of the configuration types.
pub struct Odometer {
    digits: Vec<ColorId>,
    base: ColorId,
    started: bool,
    done: bool,
}

impl Odometer {
    pub fn new(len: usize, base: usize) -> Self {
        Odometer {
            digits: vec![0; len],
            base: base as ColorId,
            started: false,
            done: base == 0,
        }
    }

    /// Advances and returns the next vector, or `None` when exhausted.
    pub fn next_digits(&mut self) -> Option<&[ColorId]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.digits);
        }
        for i in (0..self.digits.len()).rev() {
            if self.digits[i] + 1 < self.base {
                self.digits[i] += 1;
                return Some(&self.digits);
            }
            self.digits[i] = 0;
        }
        self.done = true;
        None
    }
}

/// Every `w × h` torus over `alphabet`, in lexicographic order.
pub fn all_tori(alphabet: &Alphabet, w: u32, h: u32) -> impl Iterator<Item = TorusConfig> + '_ {
    let mut odo = Odometer::new((w * h) as usize, alphabet.len());
    std::iter::from_fn(move || {
        odo.next_digits().map(|d| TorusConfig {
            width: w,
            height: h,
            cells: d.to_vec(),
            alphabet: alphabet.clone(),
        })
    })
}

/// Every `w × h` window over `alphabet`, in lexicographic order.
pub fn all_windows(alphabet: &Alphabet, w: u32, h: u32) -> impl Iterator<Item = WindowConfig> + '_ {
    all_tori(alphabet, w, h).map(|t| t.to_window())
}

/// Sizes `(w, h)` with `1 ≤ w ≤ max_w`, `1 ≤ h ≤ max_h`, by area then width.
pub fn sizes_up_to(max_w: u32, max_h: u32) -> Vec<(u32, u32)> {
    let mut v: Vec<(u32, u32)> = (1..=max_w)
        .flat_map(|w| (1..=max_h).map(move |h| (w, h)))
        .collect();
    v.sort_by_key(|(w, h)| (w * h, *w, *h));
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wlb() -> Alphabet {
        Alphabet::new(["W", "L", "B"]).unwrap()
    }

    fn pll(a: &Alphabet) -> Pattern {
        let l = a.color("L").unwrap();
        Pattern::from_cells([(Offset::new(0, 0), l), (Offset::new(1, 0), l)]).unwrap()
    }

    #[test]
    fn occurs_at_examples() {
        let a = wlb();
        let p = pll(&a);
        let ll = TorusConfig::from_names(&a, 2, 1, &["L", "L"]).unwrap();
        let lb = TorusConfig::from_names(&a, 2, 1, &["L", "B"]).unwrap();
        let l1 = TorusConfig::from_names(&a, 1, 1, &["L"]).unwrap();
        assert!(occurs_at(&p, &ll, Offset::ZERO).unwrap());
        assert!(!occurs_at(&p, &lb, Offset::ZERO).unwrap());
        // both offsets land on the single cell
        assert!(occurs_at(&p, &l1, Offset::ZERO).unwrap());
    }

    #[test]
    fn alphabet_mismatch_is_reported() {
        let two = Alphabet::new(["W", "L"]).unwrap();
        let c = TorusConfig::filled(two, 1, 1, 0).unwrap();
        let p = Pattern::single(2);
        assert!(matches!(occurs_at(&p, &c, Offset::ZERO), Err(Error::AlphabetMismatch(_))));
    }

    #[test]
    fn count_examples() {
        let a = wlb();
        let l = a.color("L").unwrap();
        let lb = TorusConfig::from_names(&a, 2, 1, &["L", "B"]).unwrap();
        assert_eq!(count_occurrences(&Pattern::single(l), &lb, 5).unwrap(), 1);
        assert_eq!(count_occurrences(&Pattern::single(l), &lb, 0).unwrap(), 0);
        let all_l = TorusConfig::filled(a.clone(), 2, 2, l).unwrap();
        assert_eq!(count_occurrences(&pll(&a), &all_l, 10).unwrap(), 4);
    }

    #[test]
    fn language_examples() {
        let a = wlb();
        let (w, l, b) = (0, 1, 2);
        let one = TorusConfig::filled(a.clone(), 1, 1, w).unwrap();
        let lang = language(&one, &[Offset::ZERO]).unwrap();
        assert_eq!(lang, BTreeSet::from([Pattern::single(w)]));

        let lb = TorusConfig::from_names(&a, 2, 1, &["L", "B"]).unwrap();
        let dom = [Offset::new(0, 0), Offset::new(1, 0)];
        let expect: BTreeSet<Pattern> = [[l, b], [b, l]]
            .iter()
            .map(|p| Pattern::from_cells([(dom[0], p[0]), (dom[1], p[1])]).unwrap())
            .collect();
        assert_eq!(language(&lb, &dom).unwrap(), expect);

        let dom2 = [Offset::new(0, 0), Offset::new(2, 0)];
        let expect2: BTreeSet<Pattern> = [l, b]
            .iter()
            .map(|c| Pattern::from_cells([(dom2[0], *c), (dom2[1], *c)]).unwrap())
            .collect();
        assert_eq!(language(&lb, &dom2).unwrap(), expect2);
    }

    #[test]
    fn projection_examples() {
        let a = wlb();
        let c = TorusConfig::from_names(&a, 2, 1, &["L", "B"]).unwrap();
        assert_eq!(project(&Projection::identity(&a), &c).unwrap(), c);
        let to_w = Projection::from_names(&a, &a, &[("L", "W"), ("B", "W"), ("W", "W")]).unwrap();
        assert_eq!(
            project(&to_w, &c).unwrap(),
            TorusConfig::from_names(&a, 2, 1, &["W", "W"]).unwrap()
        );
        // canonical first-component projection of a product alphabet
        let prod = Alphabet::new(["W_0", "W_1", "L_0", "L_1", "B_0", "B_1"]).unwrap();
        let first = Projection::new(prod.clone(), a.clone(), vec![0, 0, 1, 1, 2, 2]).unwrap();
        let pc = TorusConfig::from_names(&prod, 2, 1, &["L_1", "B_0"]).unwrap();
        assert_eq!(project(&first, &pc).unwrap(), c);
        assert!(project(&first, &c).is_err());
    }

    #[test]
    fn odometer_is_lexicographic_and_complete() {
        let a = Alphabet::new(["W", "L"]).unwrap();
        let all: Vec<_> = all_tori(&a, 2, 1).collect();
        assert_eq!(all.len(), 4);
        assert!(all.windows(2).all(|p| p[0] < p[1]));
        assert_eq!(all_tori(&wlb(), 2, 2).count(), 81);
    }

    #[test]
    fn translation_moves_the_lift() {
        let a = wlb();
        let c = TorusConfig::from_names(&a, 3, 1, &["W", "L", "B"]).unwrap();
        let t = c.translate(Offset::new(1, 0));
        assert_eq!(t.cells(), &[2, 0, 1]);
    }
}
