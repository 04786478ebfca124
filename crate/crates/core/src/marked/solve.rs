//! Exhaustive search over the hidden layers of a window.
//!
//! The hidden tracks are filled by depth-first search, cell by cell in
//! breadth-first order from the marker cells, checking every hidden-only
//! cube placement as soon as its last cell is set. Cubes that read the base
//! track are deferred to the leaves, where they are turned into the set of
//! base windows they rule out. Base windows are indexed lexicographically,
//! cell 0 most significant, the order of `all_windows`.

use std::collections::{BTreeMap, HashMap, VecDeque};

use fixedbitset::FixedBitSet;

use super::{anchors, bit, complement, mask_below, Cube, MarkedSoficRepr, BASE};
use crate::error::{Error, Result};
use crate::grid::{Alphabet, ColorId, WindowConfig};

/// Largest number of base windows a search may index.
const MAX_TARGETS: u128 = 1 << 24;

type Cell = (u32, u32);

/// The base windows of one size, as bitset indices.
#[derive(Clone, Debug)]
pub struct TargetSpace {
    pub alphabet: Alphabet,
    pub width: u32,
    pub height: u32,
    len: usize,
}

impl TargetSpace {
    pub fn new(alphabet: &Alphabet, width: u32, height: u32) -> Result<Self> {
        let n = crate::grid::config_count(alphabet.len(), width, height);
        if n > MAX_TARGETS {
            return Err(Error::BudgetExceeded {
                needed: n,
                budget: MAX_TARGETS as u64,
            });
        }
        Ok(TargetSpace {
            alphabet: alphabet.clone(),
            width,
            height,
            len: n as usize,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn index(&self, c: &WindowConfig) -> usize {
        let q = self.alphabet.len();
        c.cells().iter().fold(0, |acc, &v| acc * q + v as usize)
    }

    pub fn window(&self, mut i: usize) -> WindowConfig {
        let q = self.alphabet.len();
        let n = (self.width * self.height) as usize;
        let mut cells = vec![0 as ColorId; n];
        for c in cells.iter_mut().rev() {
            *c = (i % q) as ColorId;
            i /= q;
        }
        WindowConfig::new(self.alphabet.clone(), self.width, self.height, cells).expect("valid cells")
    }

    fn digit_bits(&self, cell: usize, mask: u64) -> FixedBitSet {
        let q = self.alphabet.len();
        let n = (self.width * self.height) as usize;
        let stride = q.pow((n - 1 - cell) as u32);
        let mut b = FixedBitSet::with_capacity(self.len);
        for i in 0..self.len {
            if mask >> ((i / stride) % q) & 1 == 1 {
                b.insert(i);
            }
        }
        b
    }
}

/// Which marker placements a search covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Markers {
    /// Every pair of cells, each pinned as the unique `q0` and `q1` cell.
    All,
    /// One pair only.
    At(Cell, Cell),
    /// No marker constraints at all.
    Ignore,
}

#[derive(Clone, Debug)]
pub struct Search {
    pub width: u32,
    pub height: u32,
    /// Maximum number of search nodes.
    pub budget: u64,
    pub markers: Markers,
    /// Hidden values fixed in advance: `(x, y, track, value)`.
    pub pinned: Vec<(u32, u32, usize, u8)>,
    /// Fixes the base window; leaves then accept either nothing or the
    /// single index 0.
    pub base: Option<WindowConfig>,
}

impl Search {
    pub fn new(width: u32, height: u32, budget: u64) -> Self {
        Search {
            width,
            height,
            budget,
            markers: Markers::All,
            pinned: Vec::new(),
            base: None,
        }
    }
}

/// One complete hidden layering and the base windows it accepts.
pub struct Leaf<'a> {
    pub markers: Option<(Cell, Cell)>,
    /// Row-major, one block of hidden values per cell.
    pub hidden: &'a [u8],
    pub allowed: &'a FixedBitSet,
}

struct Placement {
    lits: Vec<(usize, u64)>,
}

struct Problem {
    /// Branching priority of each variable: the last track first, and
    /// within a track breadth-first from the seeds. Constructions add their
    /// controlling layers last, and fixing those first lets propagation
    /// settle most of the rest.
    rank: Vec<usize>,
    domains: Vec<u64>,
    /// Hidden-only placements and, per variable, the placements reading it.
    checks: Vec<Placement>,
    watch: Vec<Vec<usize>>,
    /// Base-reading placements and the index of the windows they forbid.
    deferred: Vec<(Placement, usize)>,
    bases: Vec<FixedBitSet>,
    always: FixedBitSet,
    hopeless: bool,
}

/// Cells in breadth-first order from `seeds` (or from cell 0).
fn cell_order(w: u32, h: u32, seeds: &[usize]) -> Vec<usize> {
    let n = (w * h) as usize;
    let mut seen = vec![false; n];
    let mut out = Vec::with_capacity(n);
    let mut queue: VecDeque<usize> = seeds.iter().copied().chain((n > 0 && seeds.is_empty()).then_some(0)).collect();
    for &c in &queue {
        seen[c] = true;
    }
    while let Some(c) = queue.pop_front() {
        out.push(c);
        let (x, y) = (c as u32 % w, c as u32 / w);
        for (nx, ny) in [(x.wrapping_sub(1), y), (x + 1, y), (x, y.wrapping_sub(1)), (x, y + 1)] {
            if nx < w && ny < h && !seen[(ny * w + nx) as usize] {
                seen[(ny * w + nx) as usize] = true;
                queue.push_back((ny * w + nx) as usize);
            }
        }
    }
    out
}

fn build(m: &MarkedSoficRepr, s: &Search, space: &TargetSpace, markers: Option<(Cell, Cell)>) -> Problem {
    let schema = m.schema();
    let hcount = schema.hidden();
    let (w, h) = (s.width, s.height);
    let n = (w * h) as usize;
    let idx = |(x, y): Cell| (y * w + x) as usize;

    let seeds: Vec<usize> = match markers {
        Some((a, b)) => vec![idx(a), idx(b)],
        None => s.pinned.iter().map(|&(x, y, _, _)| idx((x, y))).collect(),
    };
    let mut rank = vec![0; n * hcount];
    for (i, c) in cell_order(w, h, &seeds).into_iter().enumerate() {
        for t in 0..hcount {
            rank[c * hcount + t] = (hcount - 1 - t) * n + i;
        }
    }
    let mut domains: Vec<u64> = (0..n * hcount).map(|v| mask_below(schema.size(v % hcount + 1))).collect();
    for &(x, y, t, val) in &s.pinned {
        domains[idx((x, y)) * hcount + t - 1] &= bit(val);
    }

    let mut placed: Vec<(&Cube, i64, i64)> = Vec::new();
    for c in &m.marked.forbidden {
        placed.extend(anchors(c, w, h).map(|(x, y)| (c, x, y)));
    }
    let not_q0 = complement(schema, &m.marked.q0);
    let not_q1 = complement(schema, &m.marked.q1);
    if let Some((p0, p1)) = markers {
        for y in 0..h {
            for x in 0..w {
                for (p, q, nq) in [(p0, &m.marked.q0, &not_q0), (p1, &m.marked.q1, &not_q1)] {
                    let set = if (x, y) == p { nq } else { q };
                    placed.extend(set.iter().map(|c| (c, x as i64, y as i64)));
                }
            }
        }
    }

    let mut pb = Problem {
        rank,
        domains,
        checks: Vec::new(),
        watch: vec![Vec::new(); n * hcount],
        deferred: Vec::new(),
        bases: Vec::new(),
        always: FixedBitSet::with_capacity(space.len()),
        hopeless: false,
    };
    let mut lit_cache: HashMap<(usize, u64), FixedBitSet> = HashMap::new();
    let mut base_index: HashMap<Vec<(usize, u64)>, usize> = HashMap::new();
    'placements: for (c, x, y) in placed {
        let mut hidden = Vec::new();
        let mut base = Vec::new();
        for l in c.literals() {
            let cell = idx(((x + l.at.dx as i64) as u32, (y + l.at.dy as i64) as u32));
            if l.track != BASE {
                hidden.push((cell * hcount + l.track - 1, l.mask));
            } else if let Some(fixed) = &s.base {
                if l.mask & bit(fixed.cells()[cell]) == 0 {
                    continue 'placements;
                }
            } else {
                base.push((cell, l.mask));
            }
        }
        let p = Placement { lits: hidden };
        if base.is_empty() {
            match p.lits.as_slice() {
                [] => pb.hopeless = true,
                [(v, mask)] => pb.domains[*v] &= !mask,
                _ => {
                    for &(v, _) in &p.lits {
                        pb.watch[v].push(pb.checks.len());
                    }
                    pb.checks.push(p);
                }
            }
            continue;
        }
        base.sort();
        let next = pb.bases.len();
        let bi = *base_index.entry(base.clone()).or_insert(next);
        if bi == next {
            let mut bits = FixedBitSet::with_capacity(space.len());
            bits.insert_range(..);
            for key in &base {
                let lit = lit_cache.entry(*key).or_insert_with(|| space.digit_bits(key.0, key.1));
                bits.intersect_with(lit);
            }
            pb.bases.push(bits);
        }
        if p.lits.is_empty() {
            pb.always.union_with(&pb.bases[bi]);
        } else {
            pb.deferred.push((p, bi));
        }
    }
    pb
}

struct State<'a> {
    pb: &'a Problem,
    dom: Vec<u64>,
    trail: Vec<(usize, u64)>,
    queue: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl State<'_> {
    fn restrict(&mut self, v: usize, to: u64) -> bool {
        let old = self.dom[v];
        let new = old & to;
        if new != old {
            self.trail.push((v, old));
            self.dom[v] = new;
            self.queue.push(v);
        }
        new != 0
    }

    /// Removes values that would complete a forbidden placement. Returns
    /// `false` on a wipe-out.
    fn propagate(&mut self) -> bool {
        let pb = self.pb;
        while let Some(v) = self.queue.pop() {
            for &pi in &pb.watch[v] {
                let mut open = None;
                let mut dead = false;
                let mut undecided = 0;
                for &(u, mask) in &pb.checks[pi].lits {
                    let d = self.dom[u];
                    if d & mask == 0 {
                        dead = true;
                        break;
                    }
                    if d & !mask != 0 {
                        undecided += 1;
                        open = Some((u, mask));
                    }
                }
                if dead || undecided > 1 {
                    continue;
                }
                match open {
                    None => {
                        self.queue.clear();
                        return false;
                    }
                    Some((u, mask)) => {
                        if !self.restrict(u, !mask) {
                            self.queue.clear();
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (v, old) = self.trail.pop().unwrap();
            self.dom[v] = old;
        }
    }

    fn leaf(&self, space: &TargetSpace, forb: &mut FixedBitSet, vals: &mut Vec<u8>) {
        vals.clear();
        vals.extend(self.dom.iter().map(|d| d.trailing_zeros() as u8));
        forb.clone_from(&self.pb.always);
        for (p, bi) in &self.pb.deferred {
            if p.lits.iter().all(|&(v, m)| m >> vals[v] & 1 == 1) {
                forb.union_with(&self.pb.bases[*bi]);
            }
        }
        forb.grow(space.len());
        forb.toggle_range(..);
    }

    /// Depth-first search; `Ok(false)` when the callback asked to stop.
    fn dfs(&mut self, space: &TargetSpace, markers: Option<(Cell, Cell)>, f: &mut dyn FnMut(&Leaf) -> bool) -> Result<bool> {
        let pick = (0..self.dom.len())
            .filter(|&v| self.dom[v].count_ones() > 1)
            .min_by_key(|&v| self.pb.rank[v]);
        let Some(v) = pick else {
            let (mut forb, mut vals) = (FixedBitSet::new(), Vec::new());
            self.leaf(space, &mut forb, &mut vals);
            return Ok(f(&Leaf {
                markers,
                hidden: &vals,
                allowed: &forb,
            }));
        };
        let mut rest = self.dom[v];
        while rest != 0 {
            let val = rest.trailing_zeros() as u8;
            rest &= rest - 1;
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded {
                    needed: self.nodes as u128,
                    budget: self.budget,
                });
            }
            let mark = self.trail.len();
            if self.restrict(v, bit(val)) && self.propagate() && !self.dfs(space, markers, f)? {
                return Ok(false);
            }
            self.undo(mark);
        }
        Ok(true)
    }
}

fn run(
    pb: &Problem,
    space: &TargetSpace,
    markers: Option<(Cell, Cell)>,
    nodes: &mut u64,
    budget: u64,
    f: &mut dyn FnMut(&Leaf) -> bool,
) -> Result<bool> {
    if pb.hopeless || pb.domains.contains(&0) {
        return Ok(true);
    }
    let mut st = State {
        pb,
        dom: pb.domains.clone(),
        trail: Vec::new(),
        queue: (0..pb.domains.len()).collect(),
        nodes: *nodes,
        budget,
    };
    if !st.propagate() {
        return Ok(true);
    }
    let r = st.dfs(space, markers, f);
    *nodes = st.nodes;
    r
}

/// Calls `f` on every hidden layering of a window satisfying the cubes and
/// the marker constraints of `s`, until `f` returns `false`. Returns the
/// number of search nodes visited.
pub fn for_each_layering(m: &MarkedSoficRepr, s: &Search, mut f: impl FnMut(&Leaf) -> bool) -> Result<u64> {
    let space = match &s.base {
        None => TargetSpace::new(m.target(), s.width, s.height)?,
        Some(b) => {
            crate::grid::check_same(b.alphabet(), m.target())?;
            if (b.width(), b.height()) != (s.width, s.height) {
                return Err(Error::Invalid("fixed base does not match the window size".into()));
            }
            TargetSpace {
                alphabet: m.target().clone(),
                width: s.width,
                height: s.height,
                len: 1,
            }
        }
    };
    let schema = m.schema();
    for &(x, y, t, v) in &s.pinned {
        if x >= s.width || y >= s.height || t == BASE || t > schema.hidden() || v as usize >= schema.size(t) {
            return Err(Error::Invalid(format!("pinned value ({x},{y}) track {t} is out of range")));
        }
    }
    let cells: Vec<Cell> = (0..s.height).flat_map(|y| (0..s.width).map(move |x| (x, y))).collect();
    let pairs: Vec<Option<(Cell, Cell)>> = match s.markers {
        Markers::All => cells.iter().flat_map(|&a| cells.iter().map(move |&b| Some((a, b)))).collect(),
        Markers::At(a, b) => {
            if !cells.contains(&a) || !cells.contains(&b) {
                return Err(Error::Invalid("marker cell outside the window".into()));
            }
            vec![Some((a, b))]
        }
        Markers::Ignore => vec![None],
    };
    let mut nodes = 0;
    for mk in pairs {
        let pb = build(m, s, &space, mk);
        if !run(&pb, &space, mk, &mut nodes, s.budget, &mut f)? {
            break;
        }
    }
    Ok(nodes)
}

/// For each marker placement, the base windows of size `w × h` that extend
/// to an accepted layered window with exactly those marker cells.
pub fn acceptance_by_markers(
    m: &MarkedSoficRepr,
    w: u32,
    h: u32,
    budget: u64,
) -> Result<(TargetSpace, BTreeMap<(Cell, Cell), FixedBitSet>)> {
    let space = TargetSpace::new(m.target(), w, h)?;
    let mut out: BTreeMap<(Cell, Cell), FixedBitSet> = BTreeMap::new();
    for_each_layering(m, &Search::new(w, h, budget), |leaf| {
        let key = leaf.markers.expect("markers are pinned");
        out.entry(key)
            .or_insert_with(|| FixedBitSet::with_capacity(space.len()))
            .union_with(leaf.allowed);
        true
    })?;
    Ok((space, out))
}

/// Base windows of size `w × h` that are projections of accepted layered windows.
pub fn projected_acceptance(m: &MarkedSoficRepr, w: u32, h: u32, budget: u64) -> Result<(TargetSpace, FixedBitSet)> {
    let space = TargetSpace::new(m.target(), w, h)?;
    let mut acc = FixedBitSet::with_capacity(space.len());
    for_each_layering(m, &Search::new(w, h, budget), |leaf| {
        acc.union_with(leaf.allowed);
        true
    })?;
    Ok((space, acc))
}
