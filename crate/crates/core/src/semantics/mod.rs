//! Brute-force evaluation on finite surrogates of the plane.
//!
//! Three conventions are supported. On a torus quantifiers range over the
//! fundamental domain, terms wrap, and set variables range over subsets of the
//! fundamental domain (so only periodic subsets of the plane are seen). On a
//! window quantifiers range over the window cells and an atom whose term
//! leaves the window is false. The flagged window convention additionally
//! gives selected set variables an out-of-window value so that quarter-plane
//! gadgets behave on a bounded domain as they do on the plane.

mod compiled;
pub mod naive;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{check_budget, config_count, Odometer, Projection, TorusConfig, WindowConfig};
use crate::logic::{Formula, Sentence};

pub use compiled::Evaluator;

/// Out-of-window behaviour of a flagged set variable on one side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Overflow {
    Const(bool),
    /// Copy the value of the nearest window cell.
    Clamp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlagDefault {
    /// Overflow strictly to the north and/or east.
    pub ne: Overflow,
    /// Overflow strictly to the south and/or west.
    pub sw: Overflow,
}

impl FlagDefault {
    /// Defaults for the quarter-plane variable `A` of the singleton gadget.
    ///
    /// Extending a window subset northward and eastward by copying the border
    /// is the only choice under which every quarter-plane corner, including the
    /// ones on the top row and right column, stays a solution. A constant `true`
    /// would force `A` to be the whole window.
    pub const GADGET: FlagDefault = FlagDefault {
        ne: Overflow::Clamp,
        sw: Overflow::Const(false),
    };

    pub fn constant(ne: bool, sw: bool) -> Self {
        FlagDefault {
            ne: Overflow::Const(ne),
            sw: Overflow::Const(sw),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Convention {
    #[default]
    Torus,
    WindowAtomFalse,
    WindowFlagged(BTreeMap<String, FlagDefault>),
}

impl Convention {
    pub fn name(&self) -> &'static str {
        match self {
            Convention::Torus => "TORUS",
            Convention::WindowAtomFalse => "WINDOW_ATOM_FALSE",
            Convention::WindowFlagged(_) => "WINDOW_FLAGGED",
        }
    }

    pub fn is_torus(&self) -> bool {
        matches!(self, Convention::Torus)
    }

    pub fn flag(&self, set_var: &str) -> Option<FlagDefault> {
        match self {
            Convention::WindowFlagged(m) => m.get(set_var).copied(),
            _ => None,
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Value of a flagged set variable at an out-of-window coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutValue {
    Const(bool),
    /// Same as the set's value at this window cell.
    Cell(u32, u32),
}

pub fn overflow_value(d: FlagDefault, w: u32, h: u32, x: i64, y: i64) -> OutValue {
    let north = y >= h as i64;
    let south = y < 0;
    let east = x >= w as i64;
    let west = x < 0;
    let policy = if (north || east) && !(south || west) {
        d.ne
    } else if (south || west) && !(north || east) {
        d.sw
    } else {
        return OutValue::Const(false);
    };
    match policy {
        Overflow::Const(b) => OutValue::Const(b),
        Overflow::Clamp => OutValue::Cell(x.clamp(0, w as i64 - 1) as u32, y.clamp(0, h as i64 - 1) as u32),
    }
}

/// A finite structure to evaluate on.
#[derive(Clone, Copy, Debug)]
pub enum Structure<'a> {
    Torus(&'a TorusConfig),
    Window(&'a WindowConfig),
}

impl Structure<'_> {
    pub fn width(&self) -> u32 {
        match self {
            Structure::Torus(c) => c.width(),
            Structure::Window(c) => c.width(),
        }
    }

    pub fn height(&self) -> u32 {
        match self {
            Structure::Torus(c) => c.height(),
            Structure::Window(c) => c.height(),
        }
    }

    pub fn cells(&self) -> &[crate::grid::ColorId] {
        match self {
            Structure::Torus(c) => c.cells(),
            Structure::Window(c) => c.cells(),
        }
    }

    pub fn alphabet(&self) -> &crate::grid::Alphabet {
        match self {
            Structure::Torus(c) => c.alphabet(),
            Structure::Window(c) => c.alphabet(),
        }
    }

    pub fn is_torus(&self) -> bool {
        matches!(self, Structure::Torus(_))
    }
}

fn check_convention(c: &Structure, conv: &Convention) -> Result<()> {
    if c.is_torus() != conv.is_torus() {
        return Err(Error::ConventionMismatch(format!(
            "{} convention used with a {}",
            conv.name(),
            if c.is_torus() { "torus" } else { "window" }
        )));
    }
    Ok(())
}

/// Values for free variables: element variables map to cells `(x, y)`,
/// set variables to sets of cells.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    pub elements: BTreeMap<String, (u32, u32)>,
    pub sets: BTreeMap<String, BTreeSet<(u32, u32)>>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn element(mut self, x: &str, at: (u32, u32)) -> Self {
        self.elements.insert(x.to_string(), at);
        self
    }

    pub fn set<I: IntoIterator<Item = (u32, u32)>>(mut self, x: &str, cells: I) -> Self {
        self.sets.insert(x.to_string(), cells.into_iter().collect());
        self
    }

    fn check_covers(&self, f: &Formula, w: u32, h: u32) -> Result<()> {
        for x in f.free_vars() {
            match self.elements.get(&x) {
                None => return Err(Error::UnboundVariable(x)),
                Some(&(a, b)) if a >= w || b >= h => {
                    return Err(Error::Invalid(format!("{x} is assigned outside the domain")))
                }
                _ => {}
            }
        }
        for x in f.free_set_vars() {
            match self.sets.get(&x) {
                None => return Err(Error::UnboundVariable(x)),
                Some(s) if s.iter().any(|&(a, b)| a >= w || b >= h) => {
                    return Err(Error::Invalid(format!("{x} contains a cell outside the domain")))
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// Evaluates a sentence.
pub fn eval(s: &Sentence, c: Structure, conv: &Convention) -> Result<bool> {
    eval_with(&s.body, s, c, conv, &Assignment::new())
}

/// Evaluates a formula under `env`, which must cover exactly its free variables.
pub fn eval_with(f: &Formula, s: &Sentence, c: Structure, conv: &Convention, env: &Assignment) -> Result<bool> {
    crate::grid::check_same(&s.alphabet, c.alphabet())?;
    check_convention(&c, conv)?;
    env.check_covers(f, c.width(), c.height())?;
    Evaluator::with_free(f, conv, env)?.eval_env(c, env)
}

pub fn eval_torus(s: &Sentence, c: &TorusConfig) -> Result<bool> {
    eval(s, Structure::Torus(c), &Convention::Torus)
}

/// All `w × h` tori satisfying `s`, in lexicographic order.
pub fn models_torus(s: &Sentence, w: u32, h: u32, budget: u64) -> Result<Vec<TorusConfig>> {
    let ev = Evaluator::new(s, &Convention::Torus)?;
    let cells = satisfying_cells(s, w, h, budget, |cells| {
        let c = TorusConfig::new(s.alphabet.clone(), w, h, cells.to_vec())?;
        ev.eval(Structure::Torus(&c))
    })?;
    cells
        .into_iter()
        .map(|cs| TorusConfig::new(s.alphabet.clone(), w, h, cs))
        .collect()
}

/// All `w × h` windows satisfying `s` under a window convention.
pub fn models_window(s: &Sentence, w: u32, h: u32, conv: &Convention, budget: u64) -> Result<Vec<WindowConfig>> {
    if conv.is_torus() {
        return Err(Error::ConventionMismatch("TORUS convention used with a window".into()));
    }
    let ev = Evaluator::new(s, conv)?;
    let cells = satisfying_cells(s, w, h, budget, |cells| {
        let c = WindowConfig::new(s.alphabet.clone(), w, h, cells.to_vec())?;
        ev.eval(Structure::Window(&c))
    })?;
    cells
        .into_iter()
        .map(|cs| WindowConfig::new(s.alphabet.clone(), w, h, cs))
        .collect()
}

// Enumerates configurations in parallel over disjoint lexicographic ranges
// (fixed first cell), then concatenates in order.
fn satisfying_cells<F>(s: &Sentence, w: u32, h: u32, budget: u64, test: F) -> Result<Vec<Vec<u8>>>
where
    F: Fn(&[u8]) -> Result<bool> + Sync,
{
    let q = s.alphabet.len();
    check_budget(config_count(q, w, h), budget)?;
    let n = (w * h) as usize;
    let chunks: Vec<Result<Vec<Vec<u8>>>> = (0..q as u8)
        .into_par_iter()
        .map(|first| {
            let mut out = Vec::new();
            let mut odo = Odometer::new(n - 1, q);
            let mut cells = vec![first; n];
            while let Some(d) = odo.next_digits() {
                cells[1..].copy_from_slice(d);
                if test(&cells)? {
                    out.push(cells.clone());
                }
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for c in chunks {
        all.extend(c?);
    }
    Ok(all)
}

fn preimages(pi: &Projection, target: &[u8]) -> Vec<Vec<u8>> {
    target.iter().map(|&t| pi.preimage(t)).collect()
}

fn for_each_preimage<F: FnMut(&[u8]) -> Result<bool>>(choices: &[Vec<u8>], mut f: F) -> Result<bool> {
    let mut idx = vec![0usize; choices.len()];
    if choices.iter().any(|c| c.is_empty()) {
        return Ok(false);
    }
    let mut cells: Vec<u8> = choices.iter().map(|c| c[0]).collect();
    loop {
        if f(&cells)? {
            return Ok(true);
        }
        let mut i = choices.len();
        loop {
            if i == 0 {
                return Ok(false);
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < choices[i].len() {
                cells[i] = choices[i][idx[i]];
                break;
            }
            idx[i] = 0;
            cells[i] = choices[i][0];
        }
    }
}

/// Whether some same-size preimage of `c` under `pi` satisfies `s`.
pub fn e_projection_member(pi: &Projection, s: &Sentence, c: Structure, conv: &Convention, budget: u64) -> Result<bool> {
    crate::grid::check_same(pi.target(), c.alphabet())?;
    crate::grid::check_same(pi.source(), &s.alphabet)?;
    check_convention(&c, conv)?;
    let choices = preimages(pi, c.cells());
    let total: u128 = choices.iter().map(|v| v.len() as u128).product();
    check_budget(total, budget)?;
    let ev = Evaluator::new(s, conv)?;
    let (w, h) = (c.width(), c.height());
    for_each_preimage(&choices, |cells| match c {
        Structure::Torus(_) => {
            let t = TorusConfig::new(s.alphabet.clone(), w, h, cells.to_vec())?;
            ev.eval(Structure::Torus(&t))
        }
        Structure::Window(_) => {
            let t = WindowConfig::new(s.alphabet.clone(), w, h, cells.to_vec())?;
            ev.eval(Structure::Window(&t))
        }
    })
}

/// Whether every same-size preimage of `c` under `pi` satisfies `s`.
pub fn a_projection_member(pi: &Projection, s: &Sentence, c: Structure, conv: &Convention, budget: u64) -> Result<bool> {
    Ok(!e_projection_member(pi, &s.negate(), c, conv, budget)?)
}
