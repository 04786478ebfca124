use crate::error::{Error, Result};
use crate::grid::{check_budget, check_same, config_count, ColorId, Odometer, Offset, Pattern, TorusConfig};

use super::search::{search, Placements};
use super::{Sft, SoficRepr};

fn remaining(budget: u64, used: u64) -> u64 {
    budget.saturating_sub(used)
}

fn over(budget: u64, used: u64) -> Error {
    Error::BudgetExceeded {
        needed: used as u128 + 1,
        budget,
    }
}

/// Every `w × h` torus in the SFT, in lexicographic order. `budget` bounds
/// the number of search nodes.
pub fn torus_members_sft(x: &Sft, w: u32, h: u32, budget: u64) -> Result<Vec<TorusConfig>> {
    let pl = Placements::torus(x.forbidden(), w, h);
    let q = x.alphabet().len() as ColorId;
    let domains = vec![(0..q).collect::<Vec<_>>(); (w * h) as usize];
    let mut out = Vec::new();
    let mut err = None;
    search(&domains, budget, |i, c| !pl.violated_at(i, c), |c| {
        match TorusConfig::new(x.alphabet().clone(), w, h, c.to_vec()) {
            Ok(t) => out.push(t),
            Err(e) => err = Some(e),
        }
        err.is_none()
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Searches for a same-size preimage of `c` in the inner SFT. Returns the
/// answer and the number of search nodes used.
fn preimage_search(r: &SoficRepr, pl: &Placements, c: &[ColorId], budget: u64) -> Result<(bool, u64)> {
    let domains: Vec<Vec<ColorId>> = c.iter().map(|&t| r.pi.preimage(t)).collect();
    let mut hit = false;
    let nodes = search(&domains, budget, |i, a| !pl.violated_at(i, a), |_| {
        hit = true;
        false
    })?;
    Ok((hit, nodes))
}

/// Whether `c` has a preimage of the same size in the inner SFT.
pub fn sofic_admits_torus(r: &SoficRepr, c: &TorusConfig, budget: u64) -> Result<bool> {
    check_same(r.alphabet(), c.alphabet())?;
    let pl = Placements::torus(r.inner.forbidden(), c.width(), c.height());
    Ok(preimage_search(r, &pl, c.cells(), budget)?.0)
}

/// Every `w × h` torus having a `w × h` preimage in the inner SFT.
///
/// This is the torus surrogate of membership in the sofic shift: a periodic
/// point of the image need not have a preimage of the same period.
pub fn torus_members_sofic(r: &SoficRepr, w: u32, h: u32, budget: u64) -> Result<Vec<TorusConfig>> {
    let target = r.alphabet();
    check_budget(config_count(target.len(), w, h), budget)?;
    let pl = Placements::torus(r.inner.forbidden(), w, h);
    let mut used = 0u64;
    let mut out = Vec::new();
    let mut odo = Odometer::new((w * h) as usize, target.len());
    while let Some(c) = odo.next_digits() {
        used += 1;
        let (hit, nodes) = preimage_search(r, &pl, c, remaining(budget, used)).map_err(|_| over(budget, used))?;
        used += nodes;
        if hit {
            out.push(TorusConfig::new(target.clone(), w, h, c.to_vec())?);
        }
    }
    Ok(out)
}

/// The `w × h` patterns (domain `[0,w) × [0,h)`) that extend to a
/// `(w+2r) × (h+2r)` window with no forbidden pattern fully inside.
pub fn locally_admissible(x: &Sft, w: u32, h: u32, r: u32, budget: u64) -> Result<Vec<Pattern>> {
    let q = x.alphabet().len();
    check_budget(config_count(q, w, h), budget)?;
    let (ww, hh) = (w + 2 * r, h + 2 * r);
    let pl = Placements::window(x.forbidden(), ww, hh);
    let all: Vec<ColorId> = (0..q as ColorId).collect();
    let mut domains = vec![all; (ww * hh) as usize];
    let centre: Vec<usize> = (0..h)
        .flat_map(|y| (0..w).map(move |x| ((y + r) * ww + x + r) as usize))
        .collect();
    let mut used = 0u64;
    let mut out = Vec::new();
    let mut odo = Odometer::new((w * h) as usize, q);
    while let Some(p) = odo.next_digits() {
        used += 1;
        for (&i, &c) in centre.iter().zip(p) {
            domains[i] = vec![c];
        }
        let mut hit = false;
        let nodes = search(&domains, remaining(budget, used), |i, a| !pl.violated_at(i, a), |_| {
            hit = true;
            false
        })
        .map_err(|_| over(budget, used))?;
        used += nodes;
        if hit {
            let cells = (0..h).flat_map(|y| (0..w).map(move |x| Offset::new(x as i32, y as i32)));
            out.push(Pattern::from_cells(cells.zip(p.iter().copied()))?);
        }
    }
    Ok(out)
}
